//! Finite-volume laboratory for the exp-Rabelo equation
//! `∂x(∂t u + ∂x e^u) = -e^u`, solved in its anchored integro-differential form
//! `∂t u + ∂x e^u = -∫_0^x e^u dy` through the variable `v = e^u`.
//!
//! The crate evolves vanishing-viscosity approximations and checks the a priori
//! estimates of the continuous problem on the discrete solutions: the maximum bound,
//! the `L^{α+1}` balance, the Kruzhkov entropy inequality and the `L1` stability bound.

pub mod cli;
pub mod error;
pub mod field;
pub mod grid;
pub mod io;
pub mod nonlocal;
pub mod scheme;
pub mod solver;
pub mod verifiers;

pub use error::{Error, Result};
pub use field::{init_field, u_from_v, v_from_u, Bump, FieldU, FieldV, InitialData};
pub use grid::Grid;
pub use nonlocal::{p_sup, prefix_integral, NonlocalP};
pub use scheme::{
    cfl_dt, godunov_flux, rusanov_flux, semi_discrete_rhs, step, Flux, Integrator, RhsBreakdown,
    SchemeConfig,
};
pub use solver::{
    record_diagnostics, run_from_field, run_simulation, DiagnosticsRow, DiagnosticsSeries,
    RunConfig, RunOutput, Snapshot,
};
