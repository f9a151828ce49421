//! Checks of the continuous a priori estimates on discrete runs.
//!
//! Every verifier is a pure function of completed [`RunOutput`](crate::solver::RunOutput)s.
//! Ladder drivers fan runs out over rayon and return results in parameter order.

mod balance;
mod convergence;
mod entropy;
mod riemann;
mod stability;
mod sup;

pub use balance::{
    balance_ladder, check_series, BALANCE_TOL, lp_balance_residual, mass_balance_identity, mass_balance_ladder,
    BalanceLadder, BalanceReport, MassBalanceLadder, MassBalanceReport,
};
pub use convergence::{
    epsilon_convergence, grid_convergence, manufactured_forcing, manufactured_solution,
    mms_convergence, restrict, ConvergenceReport, Ladder, DEFAULT_EPSILON_LADDER,
};
pub use entropy::{
    expansion_shock_fixture, kruzhkov_residual, kruzhkov_residual_snapshots, EntropyParams,
    EntropyReport, ExpansionShock,
};
pub use riemann::{burgers_riemann_oracle, burgers_sanity, BurgersSanityReport};
pub use stability::{l1_stability_check, stability_constants, StabilityReport, StabilitySample};
pub use sup::{sup_principle_monitor, Side, SupReport, SupViolation, DEFAULT_SUP_TOL};

use crate::grid::Grid;

/// `Σ |a_i - b_i| dx`.
pub fn l1_distance(grid: &Grid, a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() * grid.dx()
}

/// Observed order `log2(coarse / fine)` for a refinement by two.
pub(crate) fn order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

/// `coarse / fine`, with `0 / 0` read as a perfect ratio.
pub(crate) fn ratio(coarse: f64, fine: f64) -> f64 {
    if coarse == 0.0 && fine == 0.0 {
        f64::INFINITY
    } else {
        coarse / fine
    }
}
