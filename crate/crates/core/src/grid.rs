//! Uniform cell grid on a truncated line, with `x = 0` pinned to an interface.
//!
//! Coordinates are generated from the anchor outward (`(j - anchor) * dx`), so the
//! anchor interface is exactly `0.0` and a symmetric grid has bitwise mirror-symmetric
//! centers.

use crate::error::{Error, Result};

const ALIGN_TOL: f64 = 1e-12;
pub const MIN_CELLS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_cells: usize,
    dx: f64,
    anchor: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "endpoints must be finite, got [{x_min}, {x_max}]"
            )));
        }
        if n_cells < MIN_CELLS {
            return Err(Error::Size { n_cells });
        }
        if !(x_min < 0.0 && 0.0 < x_max) {
            return Err(Error::InvalidGrid(format!(
                "need x_min < 0 < x_max, got [{x_min}, {x_max}]"
            )));
        }
        let dx = (x_max - x_min) / n_cells as f64;
        let left = -x_min / dx;
        let rounded = left.round();
        let aligned = (left - rounded).abs() <= ALIGN_TOL * left.abs().max(1.0);
        let anchor = rounded as usize;
        if !aligned || anchor == 0 || anchor >= n_cells {
            let (suggest_x_min, suggest_x_max) = suggest_endpoints(x_min, x_max, n_cells);
            return Err(Error::Alignment {
                x_min,
                x_max,
                n_cells,
                suggest_x_min,
                suggest_x_max,
            });
        }
        Ok(Grid {
            x_min,
            x_max,
            n_cells,
            dx,
            anchor,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Index of the interface sitting at `x = 0`; cells `0..anchor` lie left of it.
    pub fn anchor(&self) -> usize {
        self.anchor
    }

    pub fn center(&self, i: usize) -> f64 {
        (i as f64 - self.anchor as f64 + 0.5) * self.dx
    }

    /// Coordinate of interface `j` in `0..=n_cells`.
    pub fn interface(&self, j: usize) -> f64 {
        (j as f64 - self.anchor as f64) * self.dx
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }

    pub fn interfaces(&self) -> Vec<f64> {
        (0..=self.n_cells).map(|j| self.interface(j)).collect()
    }

    /// True when the anchor splits the grid into two equal halves.
    pub fn is_symmetric(&self) -> bool {
        2 * self.anchor == self.n_cells
    }

    /// Mirror index of cell `i` about `x = 0`. Only meaningful on symmetric grids.
    pub fn mirror(&self, i: usize) -> usize {
        self.n_cells - 1 - i
    }

    /// Length of the overlap between cell `i` and the interval `[a, b]`.
    pub fn overlap(&self, i: usize, a: f64, b: f64) -> f64 {
        let lo = self.interface(i).max(a);
        let hi = self.interface(i + 1).min(b);
        (hi - lo).max(0.0)
    }

    /// Same physical domain with twice the resolution.
    pub fn refined(&self) -> Grid {
        Grid::new(self.x_min, self.x_max, 2 * self.n_cells).expect("refinement keeps alignment")
    }
}

fn suggest_endpoints(x_min: f64, x_max: f64, n: usize) -> (f64, f64) {
    let dx = (x_max - x_min) / n as f64;
    let clamp = |k: f64| k.round().clamp(1.0, (n - 1) as f64);
    // keep x_min, move x_max
    let k = clamp(-x_min / dx);
    let new_x_max = -x_min / k * (n as f64 - k);
    // keep x_max, move x_min
    let k = clamp(x_max / dx);
    let new_x_min = -x_max / k * (n as f64 - k);
    (new_x_min, new_x_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_grid() {
        let g = Grid::new(-1.0, 1.0, 4).unwrap();
        assert_eq!(g.dx(), 0.5);
        assert_eq!(g.centers(), vec![-0.75, -0.25, 0.25, 0.75]);
        assert_eq!(g.anchor(), 2);
        assert_eq!(g.interface(g.anchor()), 0.0);
    }

    #[test]
    fn wider_grid_anchor() {
        let g = Grid::new(-2.0, 2.0, 8).unwrap();
        assert_eq!(g.dx(), 0.5);
        assert_eq!(g.anchor(), 4);
    }

    #[test]
    fn misaligned_endpoints() {
        match Grid::new(-1.0, 1.1, 4) {
            Err(Error::Alignment {
                suggest_x_min,
                suggest_x_max,
                ..
            }) => {
                assert!((suggest_x_max - 1.0).abs() < 1e-12);
                assert!((suggest_x_min + 1.1).abs() < 1e-12);
                // the suggestions are themselves admissible
                Grid::new(-1.0, suggest_x_max, 4).unwrap();
                Grid::new(suggest_x_min, 1.1, 4).unwrap();
            }
            other => panic!("expected alignment error, got {other:?}"),
        }
    }

    #[test]
    fn too_few_cells() {
        assert!(matches!(Grid::new(-1.0, 1.0, 2), Err(Error::Size { n_cells: 2 })));
    }

    #[test]
    fn zero_outside_domain() {
        assert!(matches!(Grid::new(0.5, 1.0, 4), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(-1.0, 0.0, 4), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn asymmetric_grid() {
        let g = Grid::new(-1.0, 3.0, 8).unwrap();
        assert_eq!(g.anchor(), 2);
        assert!(!g.is_symmetric());
        assert_eq!(g.interface(8), 3.0);
    }

    #[test]
    fn overlap_weights() {
        let g = Grid::new(-1.0, 1.0, 4).unwrap();
        assert_eq!(g.overlap(0, -2.0, 2.0), 0.5);
        assert_eq!(g.overlap(1, -0.25, 0.25), 0.25);
        assert_eq!(g.overlap(3, -0.25, 0.25), 0.0);
    }

    proptest! {
        #[test]
        fn anchor_is_exact(left in 1usize..200, right in 1usize..200, dx in 1e-3f64..1.0) {
            let x_min = -(left as f64) * dx;
            let x_max = right as f64 * dx;
            prop_assume!(left + right >= MIN_CELLS);
            let g = Grid::new(x_min, x_max, left + right).unwrap();
            prop_assert_eq!(g.anchor(), left);
            prop_assert_eq!(g.interface(g.anchor()), 0.0);
            prop_assert!(g.center(g.anchor() - 1) < 0.0 && g.center(g.anchor()) > 0.0);
        }
    }
}
