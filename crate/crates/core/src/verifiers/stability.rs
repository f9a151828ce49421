//! `L1(-R, R)` stability between two runs against the Gronwall-type bound
//! `e^{C(T) t} ‖u0 - w0‖_{L1(-R - C0 t, R + C0 t)}`.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::solver::{RunOutput, Snapshot};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilitySample {
    pub time: f64,
    pub measured: f64,
    /// Bound with the interval widened by `C0 t`.
    pub bound: f64,
    /// Bound with the interval widened by `C(T) t`, truncated to the domain.
    pub bound_wide: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub radius: f64,
    pub final_time: f64,
    pub sup_u0: f64,
    pub sup_w0: f64,
    pub c0: f64,
    pub c_t: f64,
    pub samples: Vec<StabilitySample>,
}

impl StabilityReport {
    pub fn max_measured(&self) -> f64 {
        self.samples.iter().map(|s| s.measured).fold(0.0, f64::max)
    }

    pub fn min_margin(&self) -> f64 {
        self.samples.iter().map(|s| s.margin).fold(f64::INFINITY, f64::min)
    }

    pub fn pass(&self) -> bool {
        self.samples.iter().all(|s| s.measured <= s.bound)
    }
}

/// `C0 = e^{sup u0} + e^{sup w0}`.
pub fn stability_constants(sup_u0: f64, sup_w0: f64, radius: f64, t: f64) -> (f64, f64) {
    let c0 = sup_u0.exp() + sup_w0.exp();
    (c0, 2.0 * radius + 2.0 * c0 * t)
}

fn weighted_l1(grid: &Grid, a: &Snapshot, b: &Snapshot, lo: f64, hi: f64) -> f64 {
    a.u.values
        .iter()
        .zip(&b.u.values)
        .enumerate()
        .map(|(i, (x, y))| (x - y).abs() * grid.overlap(i, lo, hi))
        .sum()
}

fn find<'a>(run: &'a RunOutput, t: f64, which: &str) -> Result<&'a Snapshot> {
    run.snapshot_at(t)
        .ok_or_else(|| Error::Data(format!("run {which} has no snapshot at t = {t}")))
}

/// Both runs need snapshots at `0` and at every sample time.
pub fn l1_stability_check(
    u: &RunOutput,
    w: &RunOutput,
    radius: f64,
    sample_times: &[f64],
) -> Result<StabilityReport> {
    if u.grid != w.grid {
        return Err(Error::InvalidParameter("runs must share the grid".into()));
    }
    if u.final_time != w.final_time {
        return Err(Error::InvalidParameter("runs must share the final time".into()));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    let grid = &u.grid;
    let t_end = u.final_time;
    let (sup_u0, sup_w0) = (u.sup_u0(), w.sup_u0());
    let (c0, c_t) = stability_constants(sup_u0, sup_w0, radius, t_end);
    let reach = radius + c0 * t_end;
    if -reach < grid.x_min() || reach > grid.x_max() {
        return Err(Error::Domain(format!(
            "widened interval [{}, {}] leaves the grid [{}, {}]",
            -reach,
            reach,
            grid.x_min(),
            grid.x_max()
        )));
    }

    let (u0, w0) = (find(u, 0.0, "u")?, find(w, 0.0, "w")?);
    let samples = sample_times
        .iter()
        .map(|&t| {
            let measured = weighted_l1(grid, find(u, t, "u")?, find(w, t, "w")?, -radius, radius);
            let grow = (c_t * t).exp();
            let r = radius + c0 * t;
            let bound = grow * weighted_l1(grid, u0, w0, -r, r);
            let r = radius + c_t * t;
            let bound_wide = grow * weighted_l1(grid, u0, w0, -r, r);
            Ok(StabilitySample {
                time: t,
                measured,
                bound,
                bound_wide,
                margin: bound - measured,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(StabilityReport {
        radius,
        final_time: t_end,
        sup_u0,
        sup_w0,
        c0,
        c_t,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Bump, InitialData};
    use crate::solver::{run_simulation, RunConfig};

    fn times() -> Vec<f64> {
        (1..=10).map(|k| k as f64 / 10.0).collect()
    }

    fn run(init: InitialData, n: usize) -> RunOutput {
        let mut snaps = vec![0.0];
        snaps.extend(times());
        let cfg = RunConfig { init, ..RunConfig::stock(n) }.with_snapshots(snaps);
        run_simulation(&cfg).unwrap()
    }

    fn perturbed(scale: f64) -> InitialData {
        InitialData::TwoBump(
            Bump::STANDARD,
            Bump {
                amplitude: (0.01 * scale).ln(),
                center: 1.0,
                width: 1.0,
            },
        )
    }

    #[test]
    fn constants_example() {
        let (c0, ct) = stability_constants(0.0, 0.0, 2.0, 1.0);
        assert_eq!(c0, 2.0);
        assert_eq!(ct, 8.0);
    }

    #[test]
    fn identical_runs() {
        let a = run(InitialData::default(), 128);
        let r = l1_stability_check(&a, &a, 2.0, &times()).unwrap();
        assert_eq!(r.max_measured(), 0.0);
        assert!(r.pass());
        assert!(r.samples.iter().all(|s| s.bound >= 0.0));
    }

    #[test]
    fn perturbation_within_bound() {
        let a = run(InitialData::default(), 256);
        let b = run(perturbed(1.0), 256);
        let r = l1_stability_check(&a, &b, 2.0, &times()).unwrap();
        assert!(r.pass());
        assert!(r.min_margin() > 0.0);
        assert!(r.samples.iter().all(|s| s.bound_wide >= s.bound));
    }

    #[test]
    fn measured_distance_is_linear_in_small_data() {
        let a = run(InitialData::default(), 256);
        let full = l1_stability_check(&a, &run(perturbed(1.0), 256), 2.0, &times()).unwrap();
        let half = l1_stability_check(&a, &run(perturbed(0.5), 256), 2.0, &times()).unwrap();
        for (f, h) in full.samples.iter().zip(&half.samples).take(5) {
            let q = h.measured / f.measured;
            assert!((q - 0.5).abs() <= 0.1, "t = {}: {q}", f.time);
        }
    }

    #[test]
    fn narrow_domain_rejected() {
        let cfg = RunConfig {
            grid: Grid::new(-3.0, 3.0, 96).unwrap(),
            init: InitialData::Gaussian(Bump { width: 0.5, ..Bump::STANDARD }),
            ..RunConfig::stock(96)
        }
        .with_snapshots(vec![0.0, 1.0]);
        let a = run_simulation(&cfg).unwrap();
        assert!(matches!(l1_stability_check(&a, &a, 2.0, &[1.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn missing_snapshot() {
        let a = run_simulation(&RunConfig::stock(64)).unwrap();
        assert!(matches!(l1_stability_check(&a, &a, 2.0, &[0.5]), Err(Error::Data(_))));
    }
}
