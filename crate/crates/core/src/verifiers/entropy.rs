//! Weak Kruzhkov entropy inequality
//! `∫∫ (η(u) ∂t φ + q(u) ∂x φ) - ∫∫ η'(u) P φ + ∫ η(u0) φ(0, ·) ≥ 0`
//! tested on tensor-product hats, with `q` matched to the flux `e^u`.

use crate::error::{Error, Result};
use crate::field::{FieldV, DEFAULT_V_FLOOR};
use crate::grid::Grid;
use crate::solver::{RunOutput, Snapshot};

const SPACING_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyParams {
    /// Interior levels spread evenly over the observed range of `u`.
    pub n_levels: usize,
    pub t_hats: usize,
    pub x_hats: usize,
    /// Tolerance is `c_tol * dx` on the `‖φ‖_{L1}`-normalized weak form.
    pub c_tol: f64,
}

impl Default for EntropyParams {
    fn default() -> Self {
        EntropyParams {
            n_levels: 7,
            t_hats: 8,
            x_hats: 8,
            c_tol: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub levels: Vec<f64>,
    pub family: String,
    /// Smallest normalized weak-form value over levels and hats.
    pub worst: f64,
    pub worst_level: f64,
    /// `(t, x)` center of the worst hat.
    pub worst_hat: (f64, f64),
    pub tol: f64,
    /// Smallest normalized value for `η = u²`, for information only.
    pub quadratic_worst: f64,
    /// Largest normalized `|value|` over levels and hats.
    pub max_abs: f64,
}

impl EntropyReport {
    pub fn pass(&self) -> bool {
        self.worst >= -self.tol
    }

    /// How many tolerances the worst value lies below zero.
    pub fn violation_margin(&self) -> f64 {
        -self.worst / self.tol
    }
}

#[derive(Debug, Clone, Copy)]
struct Hat {
    center: f64,
    half: f64,
}

impl Hat {
    fn value(&self, x: f64) -> f64 {
        (1.0 - (x - self.center).abs() / self.half).max(0.0)
    }

    /// `∫_{-∞}^x` of the hat.
    fn primitive(&self, x: f64) -> f64 {
        let z = (x - self.center) / self.half;
        let h = self.half;
        if z <= -1.0 {
            0.0
        } else if z <= 0.0 {
            0.5 * h * (1.0 + z) * (1.0 + z)
        } else if z < 1.0 {
            h * (1.0 - 0.5 * (1.0 - z) * (1.0 - z))
        } else {
            h
        }
    }

    fn integral(&self, a: f64, b: f64) -> f64 {
        self.primitive(b) - self.primitive(a)
    }
}

/// Per-cell entropy, entropy flux and `η'(u)` at one level.
trait Entropy {
    fn eta(&self, u: f64) -> f64;
    fn flux(&self, u: f64) -> f64;
    fn slope(&self, u: f64) -> f64;
}

struct Kruzhkov(f64);

impl Entropy for Kruzhkov {
    fn eta(&self, u: f64) -> f64 {
        (u - self.0).abs()
    }
    fn flux(&self, u: f64) -> f64 {
        sgn(u - self.0) * (u.exp() - self.0.exp())
    }
    fn slope(&self, u: f64) -> f64 {
        sgn(u - self.0)
    }
}

struct Quadratic;

impl Entropy for Quadratic {
    fn eta(&self, u: f64) -> f64 {
        u * u
    }
    fn flux(&self, u: f64) -> f64 {
        2.0 * u.exp() * (u - 1.0)
    }
    fn slope(&self, u: f64) -> f64 {
        2.0 * u
    }
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

struct Lattice {
    t_hats: Vec<Hat>,
    x_hats: Vec<Hat>,
    /// `∫_cell ψ_b` per x hat.
    cell_int: Vec<Vec<f64>>,
    /// `ψ_b(x_{i+1/2}) - ψ_b(x_{i-1/2})` per x hat.
    cell_jump: Vec<Vec<f64>>,
}

impl Lattice {
    fn new(grid: &Grid, final_time: f64, params: &EntropyParams) -> Self {
        let ht = final_time / params.t_hats as f64;
        let t_hats = (0..params.t_hats)
            .map(|a| Hat {
                center: a as f64 * ht,
                half: ht,
            })
            .collect();
        let len = grid.x_max() - grid.x_min();
        let hx = len / (params.x_hats + 1) as f64;
        let x_hats: Vec<Hat> = (1..=params.x_hats)
            .map(|b| Hat {
                center: grid.x_min() + b as f64 * hx,
                half: hx,
            })
            .collect();
        let n = grid.n_cells();
        let cell_int = x_hats
            .iter()
            .map(|h| (0..n).map(|i| h.integral(grid.interface(i), grid.interface(i + 1))).collect())
            .collect();
        let cell_jump = x_hats
            .iter()
            .map(|h| {
                (0..n)
                    .map(|i| h.value(grid.interface(i + 1)) - h.value(grid.interface(i)))
                    .collect()
            })
            .collect();
        Lattice {
            t_hats,
            x_hats,
            cell_int,
            cell_jump,
        }
    }

    fn norm(&self, a: usize, b: usize) -> f64 {
        let t = &self.t_hats[a];
        t.integral(0.0, t.center + t.half) * self.x_hats[b].half
    }
}

/// Normalized weak-form values `W / ‖φ‖_{L1}` indexed `[a][b]`.
fn weak_form(
    snaps: &[Snapshot],
    lattice: &Lattice,
    entropy: &dyn Entropy,
    source: bool,
) -> Vec<Vec<f64>> {
    let n = snaps[0].u.values.len();
    let per_cell = |s: &Snapshot| {
        let mut eta = Vec::with_capacity(n);
        let mut q = Vec::with_capacity(n);
        let mut src = Vec::with_capacity(n);
        for (u, p) in s.u.values.iter().zip(&s.p.cells) {
            eta.push(entropy.eta(*u));
            q.push(entropy.flux(*u));
            src.push(if source { entropy.slope(*u) * p } else { 0.0 });
        }
        (eta, q, src)
    };
    let (na, nb) = (lattice.t_hats.len(), lattice.x_hats.len());
    let mut w = vec![vec![0.0; nb]; na];

    let mut prev = per_cell(&snaps[0]);
    for (b, ints) in lattice.cell_int.iter().enumerate() {
        let init: f64 = prev.0.iter().zip(ints).map(|(e, c)| e * c).sum();
        for a in 0..na {
            w[a][b] += lattice.t_hats[a].value(0.0) * init;
        }
    }
    for pair in snaps.windows(2) {
        let (t0, t1) = (pair[0].time, pair[1].time);
        let next = per_cell(&pair[1]);
        // space integrals of the slab-averaged cell data against each x hat
        for b in 0..nb {
            let (mut x_eta, mut x_q, mut x_src) = (0.0, 0.0, 0.0);
            for i in 0..n {
                let eta = 0.5 * (prev.0[i] + next.0[i]);
                let q = 0.5 * (prev.1[i] + next.1[i]);
                let src = 0.5 * (prev.2[i] + next.2[i]);
                x_eta += eta * lattice.cell_int[b][i];
                x_q += q * lattice.cell_jump[b][i];
                x_src += src * lattice.cell_int[b][i];
            }
            for (a, hat) in lattice.t_hats.iter().enumerate() {
                let d_psi = hat.value(t1) - hat.value(t0);
                let psi = hat.integral(t0, t1);
                if d_psi == 0.0 && psi == 0.0 {
                    continue;
                }
                w[a][b] += x_eta * d_psi + x_q * psi - x_src * psi;
            }
        }
        prev = next;
    }
    for (a, row) in w.iter_mut().enumerate() {
        for (b, x) in row.iter_mut().enumerate() {
            *x /= lattice.norm(a, b);
        }
    }
    w
}

fn check_sampling(grid: &Grid, snaps: &[Snapshot], final_time: f64) -> Result<()> {
    if snaps.len() < 2 || snaps[0].time != 0.0 || snaps.last().map(|s| s.time) != Some(final_time)
    {
        return Err(Error::Data(
            "entropy check needs snapshots at t = 0 and at the final time".into(),
        ));
    }
    let dx = grid.dx();
    if let Some(w) = snaps
        .windows(2)
        .find(|w| w[1].time - w[0].time > dx * (1.0 + SPACING_SLACK))
    {
        return Err(Error::Sampling {
            spacing: w[1].time - w[0].time,
            dx,
        });
    }
    Ok(())
}

fn even_levels(snaps: &[Snapshot], n: usize) -> Vec<f64> {
    let (lo, hi) = snaps
        .iter()
        .flat_map(|s| s.u.values.iter())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), u| {
            (lo.min(*u), hi.max(*u))
        });
    (1..=n)
        .map(|j| lo + (hi - lo) * j as f64 / (n + 1) as f64)
        .collect()
}

/// Weak form over explicit snapshots. `source` selects whether the `η'(u) P` term enters.
pub fn kruzhkov_residual_snapshots(
    grid: &Grid,
    snaps: &[Snapshot],
    final_time: f64,
    source: bool,
    levels: Option<&[f64]>,
    params: &EntropyParams,
) -> Result<EntropyReport> {
    check_sampling(grid, snaps, final_time)?;
    let levels = match levels {
        Some(l) => l.to_vec(),
        None => even_levels(snaps, params.n_levels),
    };
    let lattice = Lattice::new(grid, final_time, params);

    let mut worst = f64::INFINITY;
    let mut worst_level = f64::NAN;
    let mut worst_hat = (f64::NAN, f64::NAN);
    let mut max_abs: f64 = 0.0;
    for &k in &levels {
        let w = weak_form(snaps, &lattice, &Kruzhkov(k), source);
        for (a, row) in w.iter().enumerate() {
            for (b, &x) in row.iter().enumerate() {
                max_abs = max_abs.max(x.abs());
                if x < worst {
                    worst = x;
                    worst_level = k;
                    worst_hat = (lattice.t_hats[a].center, lattice.x_hats[b].center);
                }
            }
        }
    }
    let quadratic_worst = weak_form(snaps, &lattice, &Quadratic, source)
        .iter()
        .flatten()
        .copied()
        .fold(f64::INFINITY, f64::min);

    Ok(EntropyReport {
        levels,
        family: format!(
            "tensor hats {}x{}: t nodes a*T/{}, x nodes x_min + b*L/{}",
            params.t_hats,
            params.x_hats,
            params.t_hats,
            params.x_hats + 1
        ),
        worst,
        worst_level,
        worst_hat,
        tol: params.c_tol * grid.dx(),
        quadratic_worst,
        max_abs,
    })
}

pub fn kruzhkov_residual(
    out: &RunOutput,
    levels: Option<&[f64]>,
    params: &EntropyParams,
) -> Result<EntropyReport> {
    kruzhkov_residual_snapshots(
        &out.grid,
        &out.snapshots,
        out.final_time,
        out.scheme.source,
        levels,
        params,
    )
}

/// Non-entropic jump `v = vL | vR` with `vL < vR`, moving at the speed that makes it a
/// weak solution of `∂t u + ∂x e^u = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionShock {
    pub vl: f64,
    pub vr: f64,
    pub x0: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub final_time: f64,
}

impl Default for ExpansionShock {
    fn default() -> Self {
        ExpansionShock {
            vl: 1.0,
            vr: 2.0,
            x0: -0.25,
            x_min: -1.0,
            x_max: 1.0,
            final_time: 0.5,
        }
    }
}

impl ExpansionShock {
    /// `[e^u] / [u]`.
    pub fn speed(&self) -> f64 {
        (self.vr - self.vl) / (self.vr.ln() - self.vl.ln())
    }

    pub fn position(&self, t: f64) -> f64 {
        self.x0 + self.speed() * t
    }

    /// Cell averages of `v` at `t`.
    pub fn field(&self, grid: &Grid, t: f64) -> FieldV {
        let xs = self.position(t);
        let values = (0..grid.n_cells())
            .map(|i| {
                let left = grid.overlap(i, f64::NEG_INFINITY, xs);
                (self.vl * left + self.vr * (grid.dx() - left)) / grid.dx()
            })
            .collect();
        FieldV::new(values, t)
    }

    /// Frozen analytic snapshots spaced at most `dx` apart on `[0, T]`.
    pub fn snapshots(&self, n_cells: usize) -> Result<(Grid, Vec<Snapshot>)> {
        let grid = Grid::new(self.x_min, self.x_max, n_cells)?;
        let t = self.final_time;
        let k = (t / grid.dx()).ceil() as usize;
        let snaps = (0..=k)
            .map(|j| {
                let time = if j == k { t } else { t * j as f64 / k as f64 };
                Snapshot::new(&grid, self.field(&grid, time), DEFAULT_V_FLOOR)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((grid, snaps))
    }
}

/// Entropy report for the default [`ExpansionShock`], without the source term.
pub fn expansion_shock_fixture(n_cells: usize, params: &EntropyParams) -> Result<EntropyReport> {
    let fx = ExpansionShock::default();
    let (grid, snaps) = fx.snapshots(n_cells)?;
    kruzhkov_residual_snapshots(&grid, &snaps, fx.final_time, false, None, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::InitialData;
    use crate::solver::{run_simulation, RunConfig};

    #[test]
    fn hat_integrals() {
        let h = Hat {
            center: 1.0,
            half: 0.5,
        };
        assert_eq!(h.integral(-10.0, 10.0), 0.5);
        assert_eq!(h.integral(1.0, 10.0), 0.25);
        assert!((h.integral(0.75, 1.25) - 0.375).abs() < 1e-15);
        assert_eq!(h.value(1.25), 0.5);
    }

    #[test]
    fn entropy_pairs_match_flux_derivative() {
        // q' = η' f' with f = e^u
        let h = 1e-6;
        for e in [&Kruzhkov(0.3) as &dyn Entropy, &Quadratic] {
            for u in [-1.3, 0.1, 0.9] {
                let dq = (e.flux(u + h) - e.flux(u - h)) / (2.0 * h);
                assert!((dq - e.slope(u) * u.exp()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn fixture_matches_analytic_jump_term() {
        let fx = ExpansionShock::default();
        let params = EntropyParams::default();
        let (grid, snaps) = fx.snapshots(512).unwrap();
        let lattice = Lattice::new(&grid, fx.final_time, &params);
        let k = 0.5 * 2f64.ln();
        let w = weak_form(&snaps, &lattice, &Kruzhkov(k), false);
        let e = Kruzhkov(k);
        let (ul, ur) = (fx.vl.ln(), fx.vr.ln());
        let jump = fx.speed() * (e.eta(ur) - e.eta(ul)) - (e.flux(ur) - e.flux(ul));
        assert!(jump < 0.0);
        for a in 0..params.t_hats {
            for b in 0..params.x_hats {
                // W = (s[η] - [q]) ∫ φ(t, x_s(t)) dt, midpoint rule in t
                let m = 4000;
                let dt = fx.final_time / m as f64;
                let line: f64 = (0..m)
                    .map(|j| {
                        let t = (j as f64 + 0.5) * dt;
                        lattice.t_hats[a].value(t) * lattice.x_hats[b].value(fx.position(t))
                    })
                    .sum::<f64>()
                    * dt;
                let oracle = jump * line / lattice.norm(a, b);
                assert!(
                    (w[a][b] - oracle).abs() < 20.0 * grid.dx(),
                    "({a}, {b}): {} vs {oracle}",
                    w[a][b]
                );
            }
        }
    }

    #[test]
    fn fixture_fails_well_beyond_tolerance() {
        for n in [512, 1024] {
            let r = expansion_shock_fixture(n, &EntropyParams::default()).unwrap();
            assert!(!r.pass());
            assert!(r.violation_margin() >= 10.0, "{r:?}");
        }
    }

    #[test]
    fn constant_state_is_exact() {
        let fx = ExpansionShock {
            vl: 1.5,
            vr: 1.5,
            ..Default::default()
        };
        let (grid, snaps) = fx.snapshots(64).unwrap();
        let r = kruzhkov_residual_snapshots(&grid, &snaps, 0.5, false, Some(&[0.1, 0.7]), &Default::default())
            .unwrap();
        assert!(r.max_abs < 1e-12, "{}", r.max_abs);
    }

    fn stock_run(n: usize, t: f64, x: f64) -> RunOutput {
        let cfg = RunConfig {
            grid: Grid::new(-x, x, n).unwrap(),
            final_time: t,
            ..RunConfig::stock(n)
        }
        .with_dense_snapshots();
        run_simulation(&cfg).unwrap()
    }

    #[test]
    fn stock_run_passes() {
        let out = stock_run(256, 1.0, 8.0);
        let r = kruzhkov_residual(&out, None, &Default::default()).unwrap();
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn degenerate_levels_vanish() {
        let out = stock_run(256, 0.5, 5.0);
        let (lo, hi) = out
            .snapshots
            .iter()
            .flat_map(|s| s.u.values.iter())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), u| (l.min(*u), h.max(*u)));
        let r = kruzhkov_residual(&out, Some(&[lo - 1.0, hi + 1.0]), &Default::default()).unwrap();
        assert!(r.max_abs <= r.tol, "{} vs {}", r.max_abs, r.tol);
    }

    #[test]
    fn sparse_snapshots_rejected() {
        let cfg = RunConfig {
            final_time: 0.5,
            init: InitialData::default(),
            ..RunConfig::stock(256)
        }
        .with_snapshots(vec![0.0, 0.25, 0.5]);
        let out = run_simulation(&cfg).unwrap();
        assert!(matches!(
            kruzhkov_residual(&out, None, &Default::default()),
            Err(Error::Sampling { .. })
        ));
    }
}
