//! Monitor for `sup u(t) ≤ sup u0`.

use crate::solver::RunOutput;

pub const DEFAULT_SUP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn of(x: f64) -> Side {
        if x < 0.0 {
            Side::Left
        } else {
            Side::Right
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupViolation {
    pub time: f64,
    pub excess: f64,
    /// Cell center of the maximizer.
    pub x: f64,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupReport {
    pub sup_u0: f64,
    pub tol: f64,
    /// `max_t sup u(t)` over the recorded steps, initial row included.
    pub max_sup_u: f64,
    /// `max_t (sup u(t) - sup u0)`, negative when the bound holds strictly.
    pub worst_excess: f64,
    /// Where the worst excess occurred.
    pub worst: SupViolation,
    /// First step whose excess is above `tol`.
    pub first_violation: Option<SupViolation>,
}

impl SupReport {
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }
}

pub fn sup_principle_monitor(out: &RunOutput, tol: f64) -> SupReport {
    let d = &out.diagnostics;
    let sup_u0 = d.initial.sup_u;
    let mut worst = SupViolation {
        time: 0.0,
        excess: 0.0,
        x: d.initial.sup_x,
        side: Side::of(d.initial.sup_x),
    };
    let mut max_sup_u = sup_u0;
    let mut first_violation = None;
    for row in &d.steps {
        let excess = row.sup_u - sup_u0;
        let here = SupViolation {
            time: row.time,
            excess,
            x: row.sup_x,
            side: Side::of(row.sup_x),
        };
        if row.sup_u > max_sup_u {
            max_sup_u = row.sup_u;
            worst = here;
        }
        if excess > tol && first_violation.is_none() {
            first_violation = Some(here);
        }
    }
    SupReport {
        sup_u0,
        tol,
        max_sup_u,
        worst_excess: max_sup_u - sup_u0,
        worst,
        first_violation,
    }
}
