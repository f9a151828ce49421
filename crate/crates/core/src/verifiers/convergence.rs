//! Vanishing-viscosity and grid-refinement ladders, plus a manufactured smooth solution.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use statrs::function::erf::erf;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scheme::{Forcing, SchemeConfig};
use crate::solver::{run_simulation, RunConfig};

use super::{l1_distance, order};

pub const DEFAULT_EPSILON_LADDER: [f64; 5] = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];

#[derive(Debug, Clone, PartialEq)]
pub enum Ladder {
    Epsilon(Vec<f64>),
    Cells(Vec<usize>),
}

impl Ladder {
    pub fn len(&self) -> usize {
        match self {
            Ladder::Epsilon(e) => e.len(),
            Ladder::Cells(n) => n.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub ladder: Ladder,
    /// Epsilon ladder: `‖v_ε - v_0‖_{L1}` per rung. Grid ladder: distance between
    /// each consecutive pair, measured on the coarser grid.
    pub distances: Vec<f64>,
    /// Epsilon ladder only: distances between consecutive rungs.
    pub cauchy: Vec<f64>,
    /// Observed orders between consecutive distances (in `ε` for the epsilon ladder).
    pub orders: Vec<f64>,
    /// Distances strictly decreasing.
    pub monotone: bool,
}

impl ConvergenceReport {
    pub fn cauchy_decreasing(&self) -> bool {
        strictly_decreasing(&self.cauchy)
    }

    pub fn min_order(&self) -> f64 {
        self.orders.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn strictly_decreasing(x: &[f64]) -> bool {
    x.windows(2).all(|w| w[1] < w[0])
}

/// Average consecutive pairs: the cell averages of a field on the grid coarsened by two.
pub fn restrict(fine: &[f64]) -> Vec<f64> {
    fine.chunks_exact(2).map(|c| 0.5 * (c[0] + c[1])).collect()
}

/// Final-time `v` for every ε in `eps` and for `ε = 0`, all on the grid of `base`.
pub fn epsilon_convergence(base: &RunConfig, eps: &[f64]) -> Result<ConvergenceReport> {
    if eps.is_empty() {
        return Err(Error::InvalidParameter("epsilon ladder is empty".into()));
    }
    let all: Vec<f64> = std::iter::once(0.0).chain(eps.iter().copied()).collect();
    let finals = all
        .par_iter()
        .map(|&e| {
            let scheme = base.scheme.clone().with_epsilon(e);
            let out = run_simulation(&base.clone().with_scheme(scheme))?;
            Ok(out.final_snapshot().v.values.clone())
        })
        .collect::<Result<Vec<_>>>()?;
    let grid = &base.grid;
    let distances: Vec<f64> = finals[1..]
        .iter()
        .map(|v| l1_distance(grid, v, &finals[0]))
        .collect();
    let cauchy = finals[1..]
        .windows(2)
        .map(|w| l1_distance(grid, &w[0], &w[1]))
        .collect();
    let orders = distances
        .windows(2)
        .zip(eps.windows(2))
        .map(|(d, e)| (d[0] / d[1]).ln() / (e[0] / e[1]).ln())
        .collect();
    Ok(ConvergenceReport {
        ladder: Ladder::Epsilon(eps.to_vec()),
        monotone: strictly_decreasing(&distances),
        distances,
        cauchy,
        orders,
    })
}

fn check_doubling(ns: &[usize]) -> Result<()> {
    if ns.len() < 2 || ns.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::InvalidParameter(format!(
            "grid ladder must double at every rung, got {ns:?}"
        )));
    }
    Ok(())
}

fn ladder_finals(base: &RunConfig, ns: &[usize]) -> Result<Vec<(Grid, Vec<f64>)>> {
    ns.par_iter()
        .map(|&n| {
            let grid = Grid::new(base.grid.x_min(), base.grid.x_max(), n)?;
            let out = run_simulation(&base.clone().with_grid(grid))?;
            Ok((grid, out.final_snapshot().v.values.clone()))
        })
        .collect()
}

/// Self-convergence: fine solutions restricted onto the next coarser grid.
pub fn grid_convergence(base: &RunConfig, ns: &[usize]) -> Result<ConvergenceReport> {
    check_doubling(ns)?;
    let finals = ladder_finals(base, ns)?;
    let distances: Vec<f64> = finals
        .windows(2)
        .map(|w| l1_distance(&w[0].0, &restrict(&w[1].1), &w[0].1))
        .collect();
    Ok(ConvergenceReport {
        ladder: Ladder::Cells(ns.to_vec()),
        orders: distances.windows(2).map(|d| order(d[0], d[1])).collect(),
        monotone: strictly_decreasing(&distances),
        distances,
        cauchy: Vec::new(),
    })
}

/// `v*(t, x) = e^{-t} e^{-x²}`.
pub fn manufactured_solution(t: f64, x: f64) -> f64 {
    (-t - x * x).exp()
}

/// Forcing that makes [`manufactured_solution`] exact for
/// `∂t v + ∂x(v²/2) = -v P + ε v ∂xx v + g`.
pub fn manufactured_forcing(epsilon: f64) -> Forcing {
    Arc::new(move |t: f64, x: f64| {
        let v = manufactured_solution(t, x);
        let p = (-t).exp() * 0.5 * PI.sqrt() * erf(x);
        -v - 2.0 * x * v * v + v * p - epsilon * v * v * (4.0 * x * x - 2.0)
    })
}

/// Errors against the manufactured solution at `T`; `distances` are the per-grid errors.
pub fn mms_convergence(
    epsilon: f64,
    ns: &[usize],
    final_time: f64,
) -> Result<ConvergenceReport> {
    check_doubling(ns)?;
    let scheme = SchemeConfig {
        forcing: Some(manufactured_forcing(epsilon)),
        ..SchemeConfig::default().with_epsilon(epsilon)
    };
    let base = RunConfig {
        final_time,
        ..RunConfig::stock(ns[0])
    }
    .with_scheme(scheme);
    let errors: Vec<f64> = ladder_finals(&base, ns)?
        .iter()
        .map(|(g, v)| {
            let exact: Vec<f64> = g
                .centers()
                .iter()
                .map(|&x| manufactured_solution(final_time, x))
                .collect();
            l1_distance(g, v, &exact)
        })
        .collect();
    Ok(ConvergenceReport {
        ladder: Ladder::Cells(ns.to_vec()),
        orders: errors.windows(2).map(|d| order(d[0], d[1])).collect(),
        monotone: strictly_decreasing(&errors),
        distances: errors,
        cauchy: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restriction_averages_pairs() {
        assert_eq!(restrict(&[1.0, 3.0, 2.0, 2.0]), vec![2.0, 2.0]);
    }

    #[test]
    fn frozen_field_has_zero_differences() {
        let scheme = SchemeConfig {
            transport: false,
            source: false,
            ..Default::default()
        };
        let init = crate::field::InitialData::Plateau {
            height: 0.0,
            width: 2.0,
            steepness: 4.0,
            center: 0.0,
        };
        let base = RunConfig {
            init,
            final_time: 0.1,
            ..RunConfig::stock(64)
        }
        .with_scheme(scheme);
        let r = grid_convergence(&base, &[64, 128, 256]).unwrap();
        assert_eq!(r.distances.len(), 2);
        assert_eq!(r.orders.len(), 1);
        // a frozen run adds nothing to the sampling differences of the (floored) initial data
        let floor = SchemeConfig::default().v_floor;
        let sample = |g: &Grid| -> Vec<f64> {
            let v = crate::field::init_field(g, &init).unwrap();
            v.values.iter().map(|x| x.max(floor)).collect()
        };
        for (k, n) in [64usize, 128].iter().enumerate() {
            let coarse = Grid::new(-8.0, 8.0, *n).unwrap();
            let a = sample(&coarse);
            let b = sample(&coarse.refined());
            assert_eq!(r.distances[k], l1_distance(&coarse, &restrict(&b), &a));
        }
    }

    #[test]
    fn epsilon_zero_against_itself() {
        let base = RunConfig {
            final_time: 0.1,
            ..RunConfig::stock(64)
        };
        let r = epsilon_convergence(&base, &[0.0]).unwrap();
        assert_eq!(r.distances, vec![0.0]);
    }

    #[test]
    fn non_doubling_ladder_rejected() {
        let base = RunConfig::stock(64);
        assert!(grid_convergence(&base, &[64, 96]).is_err());
        assert!(grid_convergence(&base, &[64]).is_err());
    }

    #[test]
    fn forcing_oracle_matches_finite_differences() {
        let eps = 1e-2;
        let g = manufactured_forcing(eps);
        let h = 1e-4;
        for &(t, x) in &[(0.3, -0.7), (0.8, 0.2), (0.1, 1.3)] {
            let v = |t: f64, x: f64| manufactured_solution(t, x);
            let vt = (v(t + h, x) - v(t - h, x)) / (2.0 * h);
            let fx = (v(t, x + h).powi(2) - v(t, x - h).powi(2)) / (4.0 * h);
            let vxx = (v(t, x + h) - 2.0 * v(t, x) + v(t, x - h)) / (h * h);
            // P by composite Simpson from 0 to x
            let m = 2000;
            let dy = x / m as f64;
            let p: f64 = (0..=m)
                .map(|k| {
                    let w = if k == 0 || k == m { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
                    w * v(t, k as f64 * dy)
                })
                .sum::<f64>()
                * dy
                / 3.0;
            let expect = vt + fx + v(t, x) * p - eps * v(t, x) * vxx;
            assert!((g(t, x) - expect).abs() < 1e-6, "{} {}", g(t, x), expect);
        }
    }
}
