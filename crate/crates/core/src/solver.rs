//! Time loop: adaptive steps that land exactly on snapshot and final times, with one
//! diagnostics row per accepted step.

use crate::error::{Error, Result};
use crate::field::{init_field, u_from_v, FieldU, FieldV, InitialData};
use crate::grid::Grid;
use crate::nonlocal::{prefix_integral, NonlocalP};
use crate::scheme::{cfl_dt, step, SchemeConfig, BOUNDARY_FLUX_WARN};

pub const DEFAULT_ALPHAS: [f64; 3] = [0.0, 1.0, 2.0];

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub grid: Grid,
    pub init: InitialData,
    pub scheme: SchemeConfig,
    pub final_time: f64,
    /// Sorted, unique, inside `[0, final_time]`. Empty means "final time only".
    pub snapshot_times: Vec<f64>,
    pub alphas: Vec<f64>,
}

impl RunConfig {
    pub fn new(grid: Grid, init: InitialData, scheme: SchemeConfig, final_time: f64) -> Self {
        RunConfig {
            grid,
            init,
            scheme,
            final_time,
            snapshot_times: Vec::new(),
            alphas: DEFAULT_ALPHAS.to_vec(),
        }
    }

    /// Centered unit Gaussian on `[-8, 8]`, Godunov, `T = 1`.
    pub fn stock(n_cells: usize) -> Self {
        RunConfig::new(
            Grid::new(-8.0, 8.0, n_cells).expect("stock grid is aligned"),
            InitialData::default(),
            SchemeConfig::default(),
            1.0,
        )
    }

    pub fn with_snapshots(mut self, times: Vec<f64>) -> Self {
        self.snapshot_times = times;
        self
    }

    pub fn with_scheme(mut self, scheme: SchemeConfig) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_grid(mut self, grid: Grid) -> Self {
        self.grid = grid;
        self
    }

    /// Uniform snapshots from 0 to T with spacing at most `dx` (time units).
    pub fn with_dense_snapshots(mut self) -> Self {
        let t = self.final_time;
        let k = (t / self.grid.dx()).ceil().max(1.0) as usize;
        self.snapshot_times = (0..=k).map(|j| t * j as f64 / k as f64).collect();
        self
    }

    /// Snapshot times actually produced (defaults applied).
    pub fn effective_snapshots(&self) -> Vec<f64> {
        if self.snapshot_times.is_empty() {
            vec![self.final_time]
        } else {
            self.snapshot_times.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        self.init.validate()?;
        let t = self.final_time;
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "final time must be finite and nonnegative, got {t}"
            )));
        }
        let snaps = &self.snapshot_times;
        if snaps.iter().any(|s| !(0.0..=t).contains(s)) {
            return Err(Error::InvalidParameter(format!(
                "snapshot times must lie in [0, {t}]"
            )));
        }
        if snaps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "snapshot times must be sorted and unique".into(),
            ));
        }
        if self.alphas.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::InvalidParameter(
                "diagnostic alphas must be finite and nonnegative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub time: f64,
    pub v: FieldV,
    pub u: FieldU,
    pub p: NonlocalP,
}

impl Snapshot {
    pub fn new(grid: &Grid, v: FieldV, v_floor: f64) -> Result<Self> {
        let p = prefix_integral(grid, &v.values)?;
        let u = u_from_v(&v, v_floor);
        Ok(Snapshot {
            time: v.time,
            v,
            u,
            p,
        })
    }
}

/// Per-step terms of the `L^{α+1}` balance plus monitors.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRow {
    pub time: f64,
    /// Step that produced this row; 0 for the initial row.
    pub dt: f64,
    pub sup_u: f64,
    /// Cell center of the maximizer of `u`.
    pub sup_x: f64,
    pub mass: f64,
    /// `Σ v^{α+1} dx` for each configured α.
    pub lp_norms: Vec<f64>,
    /// `ε (α+1)² Σ v_i^α ((v_{i+1} - v_i)/dx)² dx`, ghosts included.
    pub dissipation: Vec<f64>,
    /// `(α+1) Σ v^{α+1} P dx`; zero when the source is switched off.
    pub source_integral: Vec<f64>,
    /// `(α+1) Σ v^α g dx` for a configured forcing `g`, otherwise zero.
    pub forcing_integral: Vec<f64>,
    /// Net outflow through the two boundary interfaces at this state.
    pub boundary_flux: f64,
    pub clip_count: usize,
    pub clip_mass: f64,
    pub p_left: f64,
    pub p_right: f64,
}

#[derive(Debug, Clone)]
pub struct DiagnosticsSeries {
    pub alphas: Vec<f64>,
    pub initial: DiagnosticsRow,
    pub steps: Vec<DiagnosticsRow>,
}

impl DiagnosticsSeries {
    /// Initial row followed by every step row.
    pub fn rows(&self) -> impl Iterator<Item = &DiagnosticsRow> {
        std::iter::once(&self.initial).chain(self.steps.iter())
    }

    pub fn last(&self) -> &DiagnosticsRow {
        self.steps.last().unwrap_or(&self.initial)
    }

    pub fn alpha_index(&self, alpha: f64) -> Option<usize> {
        self.alphas.iter().position(|a| *a == alpha)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub grid: Grid,
    pub scheme: SchemeConfig,
    pub final_time: f64,
    pub snapshots: Vec<Snapshot>,
    pub diagnostics: DiagnosticsSeries,
    pub warnings: Vec<String>,
}

impl RunOutput {
    pub fn snapshot_at(&self, time: f64) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| s.time == time)
    }

    pub fn final_snapshot(&self) -> &Snapshot {
        self.snapshots.last().expect("runs always produce a snapshot")
    }

    /// Discrete `sup u0`, from the initial diagnostics row.
    pub fn sup_u0(&self) -> f64 {
        self.diagnostics.initial.sup_u
    }
}

#[inline]
fn pow(v: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else if alpha.fract() == 0.0 && alpha < 64.0 {
        v.powi(alpha as i32)
    } else {
        v.powf(alpha)
    }
}

pub fn record_diagnostics(
    grid: &Grid,
    field: &FieldV,
    p: &NonlocalP,
    cfg: &SchemeConfig,
    alphas: &[f64],
    dt: f64,
) -> Result<DiagnosticsRow> {
    let v = &field.values;
    let n = v.len();
    let dx = grid.dx();

    let (imax, vmax) = v
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, x)| if x > bv { (i, x) } else { (bi, bv) });
    let sup_u = vmax.max(cfg.v_floor).ln();

    let mass = v.iter().sum::<f64>() * dx;
    let mut lp_norms = Vec::with_capacity(alphas.len());
    let mut dissipation = Vec::with_capacity(alphas.len());
    let mut source_integral = Vec::with_capacity(alphas.len());
    let mut forcing_integral = Vec::with_capacity(alphas.len());
    let g: Option<Vec<f64>> = cfg
        .forcing
        .as_ref()
        .map(|g| (0..n).map(|i| g(field.time, grid.center(i))).collect());
    for &a in alphas {
        let lp = if a == 0.0 {
            mass
        } else {
            v.iter().map(|x| x * pow(*x, a)).sum::<f64>() * dx
        };
        lp_norms.push(lp);

        let diss = if cfg.epsilon > 0.0 {
            // forward differences over every interface, ghost cells are zero
            let ghost = |i: isize| if i < 0 || i >= n as isize { 0.0 } else { v[i as usize] };
            let s: f64 = (-1..n as isize)
                .map(|i| {
                    let g = (ghost(i + 1) - ghost(i)) / dx;
                    pow(ghost(i), a) * g * g
                })
                .sum();
            cfg.epsilon * (a + 1.0) * (a + 1.0) * s * dx
        } else {
            0.0
        };
        dissipation.push(diss);

        let src: f64 = if cfg.source {
            v.iter()
                .zip(&p.cells)
                .map(|(x, pi)| x * pow(*x, a) * pi)
                .sum()
        } else {
            0.0
        };
        source_integral.push((a + 1.0) * src * dx);

        let forced: f64 = match &g {
            Some(g) => v.iter().zip(g).map(|(x, gi)| pow(*x, a) * gi).sum(),
            None => 0.0,
        };
        forcing_integral.push((a + 1.0) * forced * dx);
    }

    let boundary_flux = if cfg.transport {
        cfg.numerical_flux(v[n - 1], 0.0) - cfg.numerical_flux(0.0, v[0])
    } else {
        0.0
    };

    let row = DiagnosticsRow {
        time: field.time,
        dt,
        sup_u,
        sup_x: grid.center(imax),
        mass,
        lp_norms,
        dissipation,
        source_integral,
        forcing_integral,
        boundary_flux,
        clip_count: 0,
        clip_mass: 0.0,
        p_left: p.left(),
        p_right: p.right(),
    };
    let finite = [row.sup_u, row.mass, row.boundary_flux]
        .iter()
        .chain(&row.lp_norms)
        .chain(&row.dissipation)
        .chain(&row.source_integral)
        .chain(&row.forcing_integral)
        .all(|x| x.is_finite());
    if !finite {
        return Err(Error::State(format!(
            "non-finite diagnostics at t = {}",
            field.time
        )));
    }
    Ok(row)
}

pub fn run_simulation(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let initial = init_field(&cfg.grid, &cfg.init)?;
    run_from_field(cfg, initial)
}

/// Like [`run_simulation`] but starting from an arbitrary field; `cfg.init` is ignored.
pub fn run_from_field(cfg: &RunConfig, initial: FieldV) -> Result<RunOutput> {
    cfg.validate()?;
    let grid = &cfg.grid;
    let scheme = &cfg.scheme;
    if initial.len() != grid.n_cells() {
        return Err(Error::Shape {
            expected: grid.n_cells(),
            found: initial.len(),
        });
    }
    let t_end = cfg.final_time;

    // landing targets: (time, is_snapshot)
    let mut targets: Vec<(f64, bool)> = cfg
        .effective_snapshots()
        .into_iter()
        .map(|t| (t, true))
        .collect();
    if targets.last().map(|t| t.0) != Some(t_end) {
        targets.push((t_end, false));
    }

    let mut field = FieldV::new(initial.values, 0.0);
    let p0 = prefix_integral(grid, &field.values)?;
    let initial_row = record_diagnostics(grid, &field, &p0, scheme, &cfg.alphas, 0.0)?;

    let mut snapshots = Vec::new();
    let mut next = 0;
    while next < targets.len() && targets[next].0 <= 0.0 {
        if targets[next].1 {
            snapshots.push(Snapshot::new(grid, field.clone(), scheme.v_floor)?);
        }
        next += 1;
    }

    let mut steps = Vec::new();
    let mut warned = false;
    let mut warnings = Vec::new();
    if initial_row.boundary_flux.abs() > BOUNDARY_FLUX_WARN {
        warned = true;
        warnings.push(boundary_warning(&initial_row));
    }

    while next < targets.len() {
        let (target, is_snapshot) = targets[next];
        let p = prefix_integral(grid, &field.values)?;
        let mut dt = cfl_dt(grid, &field, &p, scheme)?;
        let t = field.time;
        let lands = t + dt * (1.0 + 1e-9) >= target;
        if lands {
            dt = target - t;
        }
        let out = step(grid, &field, scheme, dt)?;
        field = out.field;
        if lands {
            field.time = target;
        }
        let p = prefix_integral(grid, &field.values)?;
        let mut row = record_diagnostics(grid, &field, &p, scheme, &cfg.alphas, dt)?;
        row.clip_count = out.clipped;
        row.clip_mass = out.clip_mass;
        if !warned && row.boundary_flux.abs() > BOUNDARY_FLUX_WARN {
            warned = true;
            warnings.push(boundary_warning(&row));
        }
        steps.push(row);
        if lands {
            if is_snapshot {
                snapshots.push(Snapshot {
                    time: field.time,
                    u: u_from_v(&field, scheme.v_floor),
                    v: field.clone(),
                    p,
                });
            }
            next += 1;
        }
    }

    Ok(RunOutput {
        grid: *grid,
        scheme: scheme.clone(),
        final_time: t_end,
        snapshots,
        diagnostics: DiagnosticsSeries {
            alphas: cfg.alphas.clone(),
            initial: initial_row,
            steps,
        },
        warnings,
    })
}

fn boundary_warning(row: &DiagnosticsRow) -> String {
    format!(
        "boundary outflow {:e} exceeds {:e} at t = {}",
        row.boundary_flux, BOUNDARY_FLUX_WARN, row.time
    )
}
