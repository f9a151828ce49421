//! Cell fields in the evolved variable `v = e^u` and the derived `u = ln v`, plus the
//! catalog of admissible initial data.

use std::f64::consts::PI;

use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Maximum admissible fraction of the mass of `e^{u0}` lying outside the domain.
pub const TAIL_MASS_LIMIT: f64 = 1e-10;
pub const DEFAULT_V_FLOOR: f64 = 1e-12;
const EXP_OVERFLOW: f64 = 700.0;

/// Cell averages of `v = e^u` at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldV {
    pub values: Vec<f64>,
    pub time: f64,
}

/// Cell values of `u = ln(max(v, floor))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldU {
    pub values: Vec<f64>,
    pub time: f64,
    /// Number of cells where the floor was applied.
    pub floored: usize,
}

impl FieldV {
    pub fn new(values: Vec<f64>, time: f64) -> Self {
        FieldV { values, time }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mass(&self, dx: f64) -> f64 {
        self.values.iter().sum::<f64>() * dx
    }
}

impl FieldU {
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn u_from_v(field: &FieldV, v_floor: f64) -> FieldU {
    assert!(v_floor > 0.0, "v_floor must be positive, got {v_floor}");
    let mut floored = 0;
    let values = field
        .values
        .iter()
        .map(|&v| {
            if v < v_floor {
                floored += 1;
                v_floor.ln()
            } else {
                v.ln()
            }
        })
        .collect();
    FieldU {
        values,
        time: field.time,
        floored,
    }
}

pub fn v_from_u(field: &FieldU) -> Result<FieldV> {
    let values = field
        .values
        .iter()
        .enumerate()
        .map(|(index, &u)| {
            if u > EXP_OVERFLOW || u.is_nan() {
                Err(Error::Amplitude { index, value: u })
            } else {
                Ok(u.exp())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldV::new(values, field.time))
}

/// One Gaussian bump in `v`: `v(x) = e^A exp(-((x - c)/σ)^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

impl Bump {
    pub const STANDARD: Bump = Bump {
        amplitude: 0.0,
        center: 0.0,
        width: 1.0,
    };

    fn u(&self, x: f64) -> f64 {
        let z = (x - self.center) / self.width;
        self.amplitude - z * z
    }

    fn mass(&self) -> f64 {
        self.amplitude.exp() * self.width * PI.sqrt()
    }

    fn tail(&self, a: f64, b: f64) -> f64 {
        let half = 0.5 * self.amplitude.exp() * self.width * PI.sqrt();
        half * (erfc((b - self.center) / self.width) + erfc((self.center - a) / self.width))
    }

    fn validate(&self) -> Result<()> {
        if !(self.amplitude.is_finite() && self.center.is_finite() && self.width.is_finite()) {
            return Err(Error::InvalidParameter("bump parameters must be finite".into()));
        }
        if self.width <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "bump width must be positive, got {}",
                self.width
            )));
        }
        Ok(())
    }
}

/// Preset initial data. Every preset has `sup u0 < ∞` and `∫ e^{u0} < ∞` on the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialData {
    /// `u0 = A - ((x - c)/σ)^2`.
    Gaussian(Bump),
    /// `v0` is the sum of two Gaussian bumps.
    TwoBump(Bump, Bump),
    /// Smoothed box: `v0 = e^h * (tanh(s(x - c + w/2)) - tanh(s(x - c - w/2))) / 2`.
    Plateau {
        height: f64,
        width: f64,
        steepness: f64,
        center: f64,
    },
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData::Gaussian(Bump::STANDARD)
    }
}

impl InitialData {
    pub fn name(&self) -> &'static str {
        match self {
            InitialData::Gaussian(_) => "gaussian",
            InitialData::TwoBump(..) => "two-bump",
            InitialData::Plateau { .. } => "plateau",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            InitialData::Gaussian(b) => b.validate(),
            InitialData::TwoBump(a, b) => a.validate().and(b.validate()),
            InitialData::Plateau {
                height,
                width,
                steepness,
                center,
            } => {
                if ![height, width, steepness, center].iter().all(|p| p.is_finite()) {
                    return Err(Error::InvalidParameter("plateau parameters must be finite".into()));
                }
                if *width <= 0.0 || *steepness <= 0.0 {
                    return Err(Error::InvalidParameter(
                        "plateau width and steepness must be positive".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn u0(&self, x: f64) -> f64 {
        match self {
            InitialData::Gaussian(b) => b.u(x),
            _ => self.v0(x).ln(),
        }
    }

    pub fn v0(&self, x: f64) -> f64 {
        match self {
            InitialData::Gaussian(b) => b.u(x).exp(),
            InitialData::TwoBump(a, b) => a.u(x).exp() + b.u(x).exp(),
            InitialData::Plateau {
                height,
                width,
                steepness,
                center,
            } => {
                let y = x - center;
                let h = 0.5 * width;
                height.exp() * 0.5 * ((steepness * (y + h)).tanh() - (steepness * (y - h)).tanh())
            }
        }
    }

    /// Upper bound on `sup u0`; exact for the single-bump and plateau presets.
    pub fn sup_u0_bound(&self) -> f64 {
        match self {
            InitialData::Gaussian(b) => b.amplitude,
            InitialData::TwoBump(a, b) => (a.amplitude.exp() + b.amplitude.exp()).ln(),
            InitialData::Plateau {
                height,
                width,
                steepness,
                ..
            } => height + (steepness * 0.5 * width).tanh().ln(),
        }
    }

    /// `∫_R e^{u0} dx`.
    pub fn total_mass(&self) -> f64 {
        match self {
            InitialData::Gaussian(b) => b.mass(),
            InitialData::TwoBump(a, b) => a.mass() + b.mass(),
            InitialData::Plateau { height, width, .. } => height.exp() * width,
        }
    }

    /// Mass of `e^{u0}` outside `[a, b]`.
    pub fn tail_mass(&self, a: f64, b: f64) -> f64 {
        match self {
            InitialData::Gaussian(bump) => bump.tail(a, b),
            InitialData::TwoBump(p, q) => p.tail(a, b) + q.tail(a, b),
            InitialData::Plateau {
                height,
                width,
                steepness,
                center,
            } => {
                let h = 0.5 * width;
                height.exp()
                    * (plateau_right_tail(b - center, h, *steepness)
                        + plateau_right_tail(center - a, h, *steepness))
            }
        }
    }

    pub fn tail_ratio(&self, a: f64, b: f64) -> f64 {
        self.tail_mass(a, b) / self.total_mass()
    }
}

/// `∫_b^∞ (tanh(s(y+h)) - tanh(s(y-h)))/2 dy`, evaluated without cancellation.
fn plateau_right_tail(b: f64, h: f64, s: f64) -> f64 {
    let l = |z: f64| (-2.0 * s * z.abs()).exp().ln_1p();
    let core = if b >= h {
        0.0
    } else {
        s * (2.0 * h - (b + h).abs() + (b - h).abs())
    };
    ((core + l(b - h) - l(b + h)) / (2.0 * s)).max(0.0)
}

pub fn init_field(grid: &Grid, spec: &InitialData) -> Result<FieldV> {
    spec.validate()?;
    let ratio = spec.tail_ratio(grid.x_min(), grid.x_max());
    if !(ratio < TAIL_MASS_LIMIT) {
        return Err(Error::DomainTooSmall {
            tail_ratio: ratio,
            suggested_half_width: admissible_half_width(spec, grid),
        });
    }
    let values = (0..grid.n_cells()).map(|i| spec.v0(grid.center(i))).collect();
    Ok(FieldV::new(values, 0.0))
}

/// Smallest symmetric half-width `L` (to 1%) with admissible tails on `[-L, L]`.
fn admissible_half_width(spec: &InitialData, grid: &Grid) -> f64 {
    let ok = |l: f64| spec.tail_ratio(-l, l) < TAIL_MASS_LIMIT;
    let mut hi = grid.x_max().max(-grid.x_min());
    let mut lo = 0.0;
    while !ok(hi) {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 0.01 * hi {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
