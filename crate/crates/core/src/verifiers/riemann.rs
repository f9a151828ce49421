//! Exact Riemann solutions of `∂t v + ∂x(v²/2) = 0` and the pure-transport sanity run.

use crate::error::{Error, Result};
use crate::field::FieldV;
use crate::grid::Grid;
use crate::scheme::SchemeConfig;
use crate::solver::{run_from_field, RunConfig};

use super::l1_distance;

/// Entropy solution at `(t, x)` for data `vL` on `x < 0`, `vR` on `x > 0`.
pub fn burgers_riemann_oracle(vl: f64, vr: f64, t: f64, x: f64) -> Result<f64> {
    if !(vl >= 0.0 && vr >= 0.0) {
        return Err(Error::Domain(format!(
            "oracle needs nonnegative states, got ({vl}, {vr})"
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be nonnegative, got {t}")));
    }
    if t == 0.0 || vl == vr {
        return Ok(if x < 0.0 { vl } else { vr });
    }
    if vl > vr {
        let s = 0.5 * (vl + vr);
        Ok(if x < s * t { vl } else { vr })
    } else {
        let xi = x / t;
        Ok(xi.clamp(vl, vr))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BurgersSanityReport {
    pub n_cells: usize,
    pub dx: f64,
    pub final_time: f64,
    pub shock_position: f64,
    pub shock_expected: f64,
    pub shock_error: f64,
    pub rarefaction_l1: f64,
}

impl BurgersSanityReport {
    pub fn shock_tol(&self) -> f64 {
        2.0 * self.dx
    }

    pub fn rarefaction_tol(&self) -> f64 {
        5.0 * self.dx
    }

    pub fn pass(&self) -> bool {
        self.shock_error <= self.shock_tol() && self.rarefaction_l1 <= self.rarefaction_tol()
    }
}

fn riemann_run(grid: &Grid, vl: f64, vr: f64, t: f64) -> Result<Vec<f64>> {
    let values = (0..grid.n_cells())
        .map(|i| if i < grid.anchor() { vl } else { vr })
        .collect();
    let cfg = RunConfig::new(*grid, Default::default(), SchemeConfig::pure_burgers(), t);
    let out = run_from_field(&cfg, FieldV::new(values, 0.0))?;
    Ok(out.final_snapshot().v.values.clone())
}

/// First crossing of `level` scanning left to right, linearly interpolated between centers.
fn crossing(grid: &Grid, v: &[f64], level: f64) -> Option<f64> {
    (0..v.len() - 1).find_map(|i| {
        let (a, b) = (v[i] - level, v[i + 1] - level);
        if a > 0.0 && b <= 0.0 {
            let x0 = grid.center(i);
            Some(x0 + grid.dx() * a / (a - b))
        } else {
            None
        }
    })
}

/// Shock `(2, 1)` and rarefaction `(0, 1)` on `[-4, 4]`, source and viscosity off.
pub fn burgers_sanity(n_cells: usize, final_time: f64) -> Result<BurgersSanityReport> {
    let grid = Grid::new(-4.0, 4.0, n_cells)?;

    let shock = riemann_run(&grid, 2.0, 1.0, final_time)?;
    let shock_expected = 1.5 * final_time;
    // search right of the left-boundary fan
    let start = grid.anchor();
    let pos = crossing(&grid, &shock[start..], 1.5)
        .map(|x| x + start as f64 * grid.dx())
        .ok_or_else(|| Error::State("no shock crossing found".into()))?;

    let fan = riemann_run(&grid, 0.0, 1.0, final_time)?;
    let exact = grid
        .centers()
        .iter()
        .map(|&x| burgers_riemann_oracle(0.0, 1.0, final_time, x))
        .collect::<Result<Vec<_>>>()?;

    Ok(BurgersSanityReport {
        n_cells,
        dx: grid.dx(),
        final_time,
        shock_position: pos,
        shock_expected,
        shock_error: (pos - shock_expected).abs(),
        rarefaction_l1: l1_distance(&grid, &fan, &exact),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_values() {
        assert_eq!(burgers_riemann_oracle(1.0, 1.0, 1.0, 0.3).unwrap(), 1.0);
        assert_eq!(burgers_riemann_oracle(2.0, 1.0, 1.0, 1.49).unwrap(), 2.0);
        assert_eq!(burgers_riemann_oracle(2.0, 1.0, 1.0, 1.51).unwrap(), 1.0);
        assert_eq!(burgers_riemann_oracle(0.0, 1.0, 1.0, 0.5).unwrap(), 0.5);
        assert_eq!(burgers_riemann_oracle(0.0, 1.0, 1.0, -0.5).unwrap(), 0.0);
        assert_eq!(burgers_riemann_oracle(0.0, 1.0, 1.0, 3.0).unwrap(), 1.0);
        assert_eq!(burgers_riemann_oracle(0.0, 1.0, 0.0, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn negative_states_rejected() {
        assert!(matches!(burgers_riemann_oracle(-1.0, 1.0, 1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(burgers_riemann_oracle(1.0, 1.0, -1.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn oracle_is_weak_solution_across_the_shock() {
        // Rankine-Hugoniot: mass between two fixed points changes at rate f(vL) - f(vR)
        let mass = |t: f64| {
            let n = 20000;
            let h = 4.0 / n as f64;
            (0..n)
                .map(|i| burgers_riemann_oracle(2.0, 1.0, t, -1.0 + (i as f64 + 0.5) * h).unwrap())
                .sum::<f64>()
                * h
        };
        let rate = (mass(1.0) - mass(0.5)) / 0.5;
        assert!((rate - 1.5).abs() < 1e-3, "{rate}");
    }

    #[test]
    fn coarse_sanity_run() {
        let r = burgers_sanity(256, 1.0).unwrap();
        assert!(r.pass(), "{r:?}");
    }
}
