//! Finite-volume discretization of
//! `∂t v + ∂x(v²/2) = -v P + ε v ∂xx v`, `∂x P = v`, `P(0) = 0`,
//! with Dirichlet-zero ghost cells and explicit time stepping.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldV, DEFAULT_V_FLOOR};
use crate::grid::Grid;
use crate::nonlocal::{prefix_integral, NonlocalP};

/// Boundary outflow above this magnitude is reported as a warning by the solver.
pub const BOUNDARY_FLUX_WARN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flux {
    Godunov,
    Rusanov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    ForwardEuler,
    SspRk2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    DirichletZero,
}

/// Space-time forcing `g(t, x)` added to the right-hand side.
pub type Forcing = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct SchemeConfig {
    pub flux: Flux,
    pub epsilon: f64,
    pub cfl: f64,
    pub v_floor: f64,
    pub integrator: Integrator,
    pub boundary: Boundary,
    /// Include the transport term `∂x(v²/2)`.
    pub transport: bool,
    /// Include the nonlocal source `-v P`.
    pub source: bool,
    pub forcing: Option<Forcing>,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            flux: Flux::Godunov,
            epsilon: 0.0,
            cfl: 0.4,
            v_floor: DEFAULT_V_FLOOR,
            integrator: Integrator::SspRk2,
            boundary: Boundary::DirichletZero,
            transport: true,
            source: true,
            forcing: None,
        }
    }
}

impl fmt::Debug for SchemeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SchemeConfig")
            .field("flux", &self.flux)
            .field("epsilon", &self.epsilon)
            .field("cfl", &self.cfl)
            .field("v_floor", &self.v_floor)
            .field("integrator", &self.integrator)
            .field("boundary", &self.boundary)
            .field("transport", &self.transport)
            .field("source", &self.source)
            .field("forcing", &self.forcing.as_ref().map(|_| "<fn>"))
            .finish()
    }
}

impl SchemeConfig {
    /// Transport only: `∂t v + ∂x(v²/2) = 0`.
    pub fn pure_burgers() -> Self {
        SchemeConfig {
            source: false,
            ..Default::default()
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be a finite nonnegative number, got {}",
                self.epsilon
            )));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "cfl must lie in (0, 1], got {}",
                self.cfl
            )));
        }
        if !(self.v_floor > 0.0 && self.v_floor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "v_floor must be positive, got {}",
                self.v_floor
            )));
        }
        Ok(())
    }

    pub(crate) fn numerical_flux(&self, a: f64, b: f64) -> f64 {
        match self.flux {
            Flux::Godunov => godunov_flux(a, b),
            Flux::Rusanov => rusanov_flux(a, b),
        }
    }
}

#[inline]
pub fn burgers_flux(v: f64) -> f64 {
    0.5 * v * v
}

/// Exact Riemann flux for the convex flux `v²/2`, whose minimum sits at `v = 0`.
#[inline]
pub fn godunov_flux(a: f64, b: f64) -> f64 {
    burgers_flux(a.max(0.0)).max(burgers_flux(b.min(0.0)))
}

#[inline]
pub fn rusanov_flux(a: f64, b: f64) -> f64 {
    0.5 * (burgers_flux(a) + burgers_flux(b)) - 0.5 * a.abs().max(b.abs()) * (b - a)
}

/// Semi-discrete time derivative split into its three contributions.
#[derive(Debug, Clone, PartialEq)]
pub struct RhsBreakdown {
    pub flux_divergence: Vec<f64>,
    /// `-v P` plus the forcing, when configured.
    pub source: Vec<f64>,
    pub viscous: Vec<f64>,
    /// Numerical flux through the left boundary interface (positive = into the domain).
    pub left_flux: f64,
    /// Numerical flux through the right boundary interface (positive = out of the domain).
    pub right_flux: f64,
}

impl RhsBreakdown {
    pub fn total(&self) -> Vec<f64> {
        (0..self.source.len()).map(|i| self.at(i)).collect()
    }

    #[inline]
    pub fn at(&self, i: usize) -> f64 {
        self.flux_divergence[i] + self.source[i] + self.viscous[i]
    }

    /// Net flux leaving the domain.
    pub fn boundary_outflow(&self) -> f64 {
        self.right_flux - self.left_flux
    }
}

fn check_shape(grid: &Grid, len: usize) -> Result<()> {
    if len != grid.n_cells() {
        return Err(Error::Shape {
            expected: grid.n_cells(),
            found: len,
        });
    }
    Ok(())
}

pub fn semi_discrete_rhs(
    grid: &Grid,
    field: &FieldV,
    p: &NonlocalP,
    cfg: &SchemeConfig,
) -> Result<RhsBreakdown> {
    let n = grid.n_cells();
    check_shape(grid, field.len())?;
    check_shape(grid, p.cells.len())?;
    let v = &field.values;
    let dx = grid.dx();
    let ghost = |i: isize| -> f64 {
        if i < 0 || i >= n as isize {
            0.0
        } else {
            v[i as usize]
        }
    };

    let (flux_divergence, left_flux, right_flux) = if cfg.transport {
        let faces: Vec<f64> = (0..=n as isize)
            .map(|j| cfg.numerical_flux(ghost(j - 1), ghost(j)))
            .collect();
        let div = faces.windows(2).map(|w| -(w[1] - w[0]) / dx).collect();
        (div, faces[0], faces[n])
    } else {
        (vec![0.0; n], 0.0, 0.0)
    };

    let source = (0..n)
        .map(|i| {
            let s = if cfg.source { -v[i] * p.cells[i] } else { 0.0 };
            match &cfg.forcing {
                Some(g) => s + g(field.time, grid.center(i)),
                None => s,
            }
        })
        .collect();

    let viscous = if cfg.epsilon > 0.0 {
        let k = cfg.epsilon / (dx * dx);
        (0..n as isize)
            .map(|i| k * v[i as usize] * (ghost(i + 1) - 2.0 * ghost(i) + ghost(i - 1)))
            .collect()
    } else {
        vec![0.0; n]
    };

    Ok(RhsBreakdown {
        flux_divergence,
        source,
        viscous,
        left_flux,
        right_flux,
    })
}

/// Largest stable step: `cfl * min(dx / max v, dx² / (2 ε max v), 1 / sup|P|)`.
///
/// The diffusive branch is dropped for `ε = 0`, the source branch when the source is off.
pub fn cfl_dt(grid: &Grid, field: &FieldV, p: &NonlocalP, cfg: &SchemeConfig) -> Result<f64> {
    if let Some(i) = field.values.iter().position(|v| !v.is_finite()) {
        return Err(Error::State(format!(
            "non-finite value {} at cell {i}",
            field.values[i]
        )));
    }
    let vmax = field.max();
    if !(vmax > 0.0) {
        return Err(Error::State(format!("max v must be positive, got {vmax}")));
    }
    let dx = grid.dx();
    let mut limit = dx / vmax;
    if cfg.epsilon > 0.0 {
        limit = limit.min(dx * dx / (2.0 * cfg.epsilon * vmax));
    }
    if cfg.source {
        limit = limit.min(1.0 / (p.sup() + 1e-30));
    }
    Ok(cfg.cfl * limit)
}

#[derive(Debug, Clone)]
pub struct StepOutput {
    pub field: FieldV,
    /// Cells raised to `v_floor` after the update.
    pub clipped: usize,
    /// Mass added by the floor clipping.
    pub clip_mass: f64,
    /// Time-averaged net boundary outflow used by the update.
    pub boundary_outflow: f64,
}

fn check_finite(grid: &Grid, values: &[f64], time: f64) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(cell) => Err(Error::BlowUp {
            time,
            cell,
            x: grid.center(cell),
            value: values[cell],
        }),
        None => Ok(()),
    }
}

fn rhs_of(grid: &Grid, field: &FieldV, cfg: &SchemeConfig) -> Result<RhsBreakdown> {
    let p = prefix_integral(grid, &field.values)?;
    semi_discrete_rhs(grid, field, &p, cfg)
}

/// Advance by `dt`. SSP-RK2 is written in Heun form `v + dt/2 (L(v) + L(v + dt L(v)))`,
/// identical to the Shu-Osher form in exact arithmetic.
pub fn step(grid: &Grid, field: &FieldV, cfg: &SchemeConfig, dt: f64) -> Result<StepOutput> {
    check_shape(grid, field.len())?;
    let t = field.time;
    let r0 = rhs_of(grid, field, cfg)?;
    let stage: Vec<f64> = field
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| v + dt * r0.at(i))
        .collect();
    check_finite(grid, &stage, t + dt)?;

    let (mut values, boundary_outflow) = match cfg.integrator {
        Integrator::ForwardEuler => (stage, r0.boundary_outflow()),
        Integrator::SspRk2 => {
            let predicted = FieldV::new(stage, t + dt);
            let r1 = rhs_of(grid, &predicted, cfg)?;
            let half = 0.5 * dt;
            let values: Vec<f64> = field
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| v + half * (r0.at(i) + r1.at(i)))
                .collect();
            check_finite(grid, &values, t + dt)?;
            (values, 0.5 * (r0.boundary_outflow() + r1.boundary_outflow()))
        }
    };

    let mut clipped = 0;
    let mut clip_mass = 0.0;
    for v in values.iter_mut() {
        if *v < cfg.v_floor {
            clipped += 1;
            clip_mass += cfg.v_floor - *v;
            *v = cfg.v_floor;
        }
    }

    Ok(StepOutput {
        field: FieldV::new(values, t + dt),
        clipped,
        clip_mass: clip_mass * grid.dx(),
        boundary_outflow,
    })
}
