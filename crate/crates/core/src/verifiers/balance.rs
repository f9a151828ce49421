//! The `L^{α+1}` balance `d/dt N_α + D_α + S_α = F_α` and its `α = 0` closure
//! `∫ v P dx = ½ (P_R² - P_L²)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::solver::{run_simulation, DiagnosticsRow, RunConfig, RunOutput};

use super::ratio;

const GAP_TOL: f64 = 1e-12;

/// Pass threshold for relative balance residuals.
pub const BALANCE_TOL: f64 = 1e-2;

/// Fails with a data error unless the step rows tile `[0, T]` without gaps.
pub fn check_series(out: &RunOutput) -> Result<()> {
    let d = &out.diagnostics;
    if d.initial.time != 0.0 {
        return Err(Error::Data(format!(
            "series starts at t = {}, not 0",
            d.initial.time
        )));
    }
    let mut prev = &d.initial;
    for (k, row) in d.steps.iter().enumerate() {
        let expect = prev.time + row.dt;
        if !(row.time > prev.time) || (row.time - expect).abs() > GAP_TOL * expect.max(1.0) {
            return Err(Error::Data(format!(
                "gap at step {}: t = {} after {} with dt = {}",
                k + 1,
                row.time,
                prev.time,
                row.dt
            )));
        }
        prev = row;
    }
    if prev.time != out.final_time {
        return Err(Error::Data(format!(
            "series ends at t = {}, final time is {}",
            prev.time, out.final_time
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceReport {
    pub alpha: f64,
    pub times: Vec<f64>,
    /// `|N(t) - N(0) + ∫_0^t (D + S - F) ds|` at every recorded time.
    pub residual: Vec<f64>,
    pub terminal_residual: f64,
    /// `N_α(0)`.
    pub initial_norm: f64,
    /// Terminal residual divided by `N_α(0)`.
    pub relative_terminal: f64,
    /// Largest `|(N_k - N_{k-1})/dt + avg(D + S - F)|` over steps, divided by `N_α(0)`.
    pub max_rate_defect: f64,
}

impl BalanceReport {
    pub fn pass(&self) -> bool {
        self.relative_terminal <= BALANCE_TOL
    }
}

fn balance_rate(row: &DiagnosticsRow, a: usize) -> f64 {
    row.dissipation[a] + row.source_integral[a] - row.forcing_integral[a]
}

pub fn lp_balance_residual(out: &RunOutput, alpha: f64) -> Result<BalanceReport> {
    check_series(out)?;
    let d = &out.diagnostics;
    let a = d
        .alpha_index(alpha)
        .ok_or_else(|| Error::Data(format!("alpha = {alpha} was not recorded")))?;
    let n0 = d.initial.lp_norms[a];

    let mut times = vec![0.0];
    let mut residual = vec![0.0];
    let mut integral = 0.0;
    let mut max_rate_defect: f64 = 0.0;
    let mut prev = &d.initial;
    for row in &d.steps {
        let avg = 0.5 * (balance_rate(prev, a) + balance_rate(row, a));
        integral += row.dt * avg;
        let dn = row.lp_norms[a] - prev.lp_norms[a];
        max_rate_defect = max_rate_defect.max((dn / row.dt + avg).abs());
        times.push(row.time);
        residual.push((row.lp_norms[a] - n0 + integral).abs());
        prev = row;
    }
    let terminal_residual = *residual.last().expect("nonempty");
    Ok(BalanceReport {
        alpha,
        times,
        residual,
        terminal_residual,
        initial_norm: n0,
        relative_terminal: terminal_residual / n0,
        max_rate_defect: max_rate_defect / n0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceLadder {
    pub alpha: f64,
    pub n_cells: Vec<usize>,
    pub relative_terminal: Vec<f64>,
    /// `r_k / r_{k+1}` for consecutive grids.
    pub ratios: Vec<f64>,
}

impl BalanceLadder {
    pub fn at(&self, n: usize) -> Option<f64> {
        self.n_cells
            .iter()
            .position(|m| *m == n)
            .map(|k| self.relative_terminal[k])
    }

    pub fn min_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn ladder_runs(base: &RunConfig, ns: &[usize]) -> Result<Vec<RunOutput>> {
    ns.par_iter()
        .map(|&n| {
            let grid = crate::grid::Grid::new(base.grid.x_min(), base.grid.x_max(), n)?;
            run_simulation(&base.clone().with_grid(grid))
        })
        .collect()
}

/// Balance residuals for every α of `base`, one run per grid in `ns`.
pub fn balance_ladder(base: &RunConfig, ns: &[usize]) -> Result<Vec<BalanceLadder>> {
    let runs = ladder_runs(base, ns)?;
    base.alphas
        .iter()
        .map(|&alpha| {
            let rel = runs
                .iter()
                .map(|r| lp_balance_residual(r, alpha).map(|b| b.relative_terminal))
                .collect::<Result<Vec<_>>>()?;
            let ratios = rel.windows(2).map(|w| ratio(w[0], w[1])).collect();
            Ok(BalanceLadder {
                alpha,
                n_cells: ns.to_vec(),
                relative_terminal: rel,
                ratios,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassBalanceReport {
    /// Step end times.
    pub times: Vec<f64>,
    /// `|dM/dt + ε∫(∂x v)² + ½(P_R² - P_L²)|` per step, divided by `M(0)`.
    pub residual: Vec<f64>,
    pub max_residual: f64,
    pub initial_mass: f64,
    /// Closure term `½(P_R² - P_L²)` at `t = 0`.
    pub initial_closure: f64,
    /// `∫ boundary outflow dt`, trapezoid over steps.
    pub boundary_outflow: f64,
    /// `M(T) - M(0)`.
    pub mass_change: f64,
}

impl MassBalanceReport {
    pub fn pass(&self) -> bool {
        self.max_residual <= BALANCE_TOL
    }
}

fn closure(row: &DiagnosticsRow, source: bool) -> f64 {
    if source {
        0.5 * (row.p_right * row.p_right - row.p_left * row.p_left)
    } else {
        0.0
    }
}

/// Mass balance with the source integral replaced by its closed form. The time
/// derivative is differenced per step and the terms are averaged over the step ends.
pub fn mass_balance_identity(out: &RunOutput) -> Result<MassBalanceReport> {
    check_series(out)?;
    let d = &out.diagnostics;
    let a = d
        .alpha_index(0.0)
        .ok_or_else(|| Error::Data("alpha = 0 was not recorded".into()))?;
    let source = out.scheme.source;
    let m0 = d.initial.mass;
    let rate = |r: &DiagnosticsRow| r.dissipation[a] + closure(r, source);

    let mut times = Vec::with_capacity(d.steps.len());
    let mut residual = Vec::with_capacity(d.steps.len());
    let mut boundary_outflow = 0.0;
    let mut prev = &d.initial;
    for row in &d.steps {
        let dm = (row.mass - prev.mass) / row.dt;
        let r = (dm + 0.5 * (rate(prev) + rate(row))).abs();
        times.push(row.time);
        residual.push(r / m0);
        boundary_outflow += 0.5 * row.dt * (prev.boundary_flux + row.boundary_flux);
        prev = row;
    }
    Ok(MassBalanceReport {
        max_residual: residual.iter().copied().fold(0.0, f64::max),
        times,
        residual,
        initial_mass: m0,
        initial_closure: closure(&d.initial, source),
        boundary_outflow,
        mass_change: d.last().mass - m0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassBalanceLadder {
    pub n_cells: Vec<usize>,
    pub max_residual: Vec<f64>,
    pub ratios: Vec<f64>,
}

pub fn mass_balance_ladder(base: &RunConfig, ns: &[usize]) -> Result<MassBalanceLadder> {
    let runs = ladder_runs(base, ns)?;
    let max_residual = runs
        .iter()
        .map(|r| mass_balance_identity(r).map(|m| m.max_residual))
        .collect::<Result<Vec<_>>>()?;
    Ok(MassBalanceLadder {
        n_cells: ns.to_vec(),
        ratios: max_residual.windows(2).map(|w| ratio(w[0], w[1])).collect(),
        max_residual,
    })
}
