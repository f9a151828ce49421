//! The anchored antiderivative `P(t, x) = ∫_0^x v(t, y) dy`, by prefix sums.

use crate::error::{Error, Result};
use crate::grid::Grid;

#[derive(Debug, Clone, PartialEq)]
pub struct NonlocalP {
    /// `P` at the `n_cells + 1` interfaces; exactly zero at the anchor.
    pub interfaces: Vec<f64>,
    /// `P` at cell centers, the mean of the two adjacent interfaces.
    pub cells: Vec<f64>,
}

impl NonlocalP {
    /// `max_i |P_i|` over cell values.
    pub fn sup(&self) -> f64 {
        self.cells.iter().fold(0.0, |m, p| m.max(p.abs()))
    }

    pub fn left(&self) -> f64 {
        self.interfaces[0]
    }

    pub fn right(&self) -> f64 {
        *self.interfaces.last().expect("at least one interface")
    }
}

/// Signed midpoint-rule integral of `v` from the anchor to every interface.
///
/// Both halves are accumulated outward from the anchor, so an even `v` on a
/// symmetric grid yields a bitwise odd `P`.
pub fn prefix_integral(grid: &Grid, v: &[f64]) -> Result<NonlocalP> {
    let n = grid.n_cells();
    if v.len() != n {
        return Err(Error::Shape {
            expected: n,
            found: v.len(),
        });
    }
    let dx = grid.dx();
    let a = grid.anchor();
    let mut interfaces = vec![0.0; n + 1];

    let mut sum = 0.0;
    for j in a..n {
        sum += v[j];
        interfaces[j + 1] = sum * dx;
    }
    sum = 0.0;
    for j in (0..a).rev() {
        sum += v[j];
        interfaces[j] = -(sum * dx);
    }

    let cells = interfaces.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    Ok(NonlocalP { interfaces, cells })
}

pub fn p_sup(p: &NonlocalP) -> f64 {
    p.sup()
}
