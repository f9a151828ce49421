//! C interface. Handles are opaque, every call returns an [`ExrStatus`], and the
//! message of the last failure on the calling thread is available from
//! [`exr_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use exprabelo::io::{parse_config, ConfigDocument};
use exprabelo::verifiers::{
    l1_stability_check, lp_balance_residual, mass_balance_identity, sup_principle_monitor,
    DEFAULT_SUP_TOL,
};
use exprabelo::{Error, Grid, RunOutput};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Grid = 4,
    Run = 5,
    Data = 6,
    OutOfRange = 7,
    Io = 8,
    Panic = 9,
}

/// Column selector values for [`exr_run_snapshot_copy`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExrQuantity {
    X = 0,
    V = 1,
    U = 2,
    P = 3,
}

impl ExrQuantity {
    fn from_raw(which: i32) -> Option<Self> {
        [ExrQuantity::X, ExrQuantity::V, ExrQuantity::U, ExrQuantity::P]
            .into_iter()
            .find(|q| *q as i32 == which)
    }
}

/// Parsed configuration document.
pub struct ExrConfig {
    doc: ConfigDocument,
}

/// Completed run: snapshots and diagnostics.
pub struct ExrRun {
    out: RunOutput,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> ExrStatus {
    match e {
        Error::Config { .. } => ExrStatus::Config,
        Error::Size { .. }
        | Error::Alignment { .. }
        | Error::InvalidGrid(_)
        | Error::DomainTooSmall { .. } => ExrStatus::Grid,
        Error::InvalidParameter(_) | Error::Shape { .. } | Error::Domain(_) => {
            ExrStatus::InvalidArgument
        }
        Error::Amplitude { .. } | Error::State(_) | Error::BlowUp { .. } => ExrStatus::Run,
        Error::Data(_) | Error::Sampling { .. } => ExrStatus::Data,
        Error::Io { .. } => ExrStatus::Io,
    }
}

struct Fail(ExrStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(ExrStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ExrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ExrStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ExrStatus::Panic
        }
    }
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread; empty if none. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn exr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn exr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse a `key = value` document.
///
/// # Safety
/// `text` must be a NUL-terminated UTF-8 string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn exr_config_parse(text: *const c_char, out: *mut *mut ExrConfig) -> ExrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Fail(ExrStatus::InvalidArgument, "text is not UTF-8".into()))?;
        let doc = parse_config(text)?;
        *out = Box::into_raw(Box::new(ExrConfig { doc }));
        Ok(())
    })
}

/// # Safety
/// `cfg` must come from [`exr_config_parse`] and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn exr_config_free(cfg: *mut ExrConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// # Safety
/// `cfg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn exr_config_n_cells(cfg: *const ExrConfig, out: *mut usize) -> ExrStatus {
    guard(|| {
        *out_ptr(out, "out")? = handle(cfg, "cfg")?.doc.run.grid.n_cells();
        Ok(())
    })
}

/// Run the configured simulation.
///
/// # Safety
/// `cfg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn exr_simulate(cfg: *const ExrConfig, out: *mut *mut ExrRun) -> ExrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let cfg = handle(cfg, "cfg")?;
        let run = exprabelo::run_simulation(&cfg.doc.run)?;
        *out = Box::into_raw(Box::new(ExrRun { out: run }));
        Ok(())
    })
}

/// # Safety
/// `run` must come from [`exr_simulate`] and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn exr_run_free(run: *mut ExrRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// # Safety
/// `run` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn exr_run_snapshot_count(run: *const ExrRun, out: *mut usize) -> ExrStatus {
    guard(|| {
        *out_ptr(out, "out")? = handle(run, "run")?.out.snapshots.len();
        Ok(())
    })
}

/// # Safety
/// `run` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn exr_run_n_cells(run: *const ExrRun, out: *mut usize) -> ExrStatus {
    guard(|| {
        *out_ptr(out, "out")? = handle(run, "run")?.out.grid.n_cells();
        Ok(())
    })
}

/// # Safety
/// `run` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn exr_run_snapshot_time(
    run: *const ExrRun,
    index: usize,
    out: *mut f64,
) -> ExrStatus {
    guard(|| {
        let run = &handle(run, "run")?.out;
        let snap = run.snapshots.get(index).ok_or_else(|| {
            Fail(ExrStatus::OutOfRange, format!("snapshot {index} of {}", run.snapshots.len()))
        })?;
        *out_ptr(out, "out")? = snap.time;
        Ok(())
    })
}

/// Copy one column of snapshot `index` into `buf`, which must hold `len == n_cells` doubles.
/// `which` is an [`ExrQuantity`] value.
///
/// # Safety
/// `run` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn exr_run_snapshot_copy(
    run: *const ExrRun,
    index: usize,
    which: i32,
    buf: *mut f64,
    len: usize,
) -> ExrStatus {
    guard(|| {
        let run = &handle(run, "run")?.out;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let snap = run.snapshots.get(index).ok_or_else(|| {
            Fail(ExrStatus::OutOfRange, format!("snapshot {index} of {}", run.snapshots.len()))
        })?;
        let n = run.grid.n_cells();
        if len != n {
            return Err(Fail(ExrStatus::InvalidArgument, format!("buffer holds {len}, need {n}")));
        }
        let which = ExrQuantity::from_raw(which).ok_or_else(|| {
            Fail(ExrStatus::InvalidArgument, format!("unknown quantity {which}"))
        })?;
        let dst = std::slice::from_raw_parts_mut(buf, len);
        match which {
            ExrQuantity::X => dst.copy_from_slice(&run.grid.centers()),
            ExrQuantity::V => dst.copy_from_slice(&snap.v.values),
            ExrQuantity::U => dst.copy_from_slice(&snap.u.values),
            ExrQuantity::P => dst.copy_from_slice(&snap.p.cells),
        }
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn exr_godunov_flux(a: f64, b: f64) -> f64 {
    exprabelo::godunov_flux(a, b)
}

#[no_mangle]
pub extern "C" fn exr_rusanov_flux(a: f64, b: f64) -> f64 {
    exprabelo::rusanov_flux(a, b)
}

/// Cell values of `P = ∫_0^x v` on the grid `[x_min, x_max]` with `n` cells.
///
/// # Safety
/// `v` must be valid for `n` reads and `p_cells` for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn exr_prefix_integral(
    x_min: f64,
    x_max: f64,
    v: *const f64,
    n: usize,
    p_cells: *mut f64,
) -> ExrStatus {
    guard(|| {
        if v.is_null() {
            return Err(null("v"));
        }
        if p_cells.is_null() {
            return Err(null("p_cells"));
        }
        let grid = Grid::new(x_min, x_max, n)?;
        let p = exprabelo::prefix_integral(&grid, std::slice::from_raw_parts(v, n))?;
        std::slice::from_raw_parts_mut(p_cells, n).copy_from_slice(&p.cells);
        Ok(())
    })
}

/// Terminal `L^{α+1}` balance residual relative to `N_α(0)`.
///
/// # Safety
/// `run` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn exr_balance_residual(
    run: *const ExrRun,
    alpha: f64,
    out: *mut f64,
) -> ExrStatus {
    guard(|| {
        let r = lp_balance_residual(&handle(run, "run")?.out, alpha)?;
        *out_ptr(out, "out")? = r.relative_terminal;
        Ok(())
    })
}

/// Largest per-step relative mass-balance residual.
///
/// # Safety
/// `run` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn exr_mass_balance(run: *const ExrRun, out: *mut f64) -> ExrStatus {
    guard(|| {
        let r = mass_balance_identity(&handle(run, "run")?.out)?;
        *out_ptr(out, "out")? = r.max_residual;
        Ok(())
    })
}

/// `max_t sup u(t) - sup u0`.
///
/// # Safety
/// `run` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn exr_sup_excess(run: *const ExrRun, out: *mut f64) -> ExrStatus {
    guard(|| {
        let r = sup_principle_monitor(&handle(run, "run")?.out, DEFAULT_SUP_TOL);
        *out_ptr(out, "out")? = r.worst_excess;
        Ok(())
    })
}

/// L1 stability check at `n_times` sample times. Writes the smallest margin and
/// whether every sample satisfied the bound.
///
/// # Safety
/// `u` and `w` must be live handles, `times` valid for `n_times` reads and the
/// outputs valid pointers.
#[no_mangle]
pub unsafe extern "C" fn exr_stability(
    u: *const ExrRun,
    w: *const ExrRun,
    radius: f64,
    times: *const f64,
    n_times: usize,
    min_margin: *mut f64,
    pass: *mut bool,
) -> ExrStatus {
    guard(|| {
        if times.is_null() && n_times > 0 {
            return Err(null("times"));
        }
        let times = if n_times == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(times, n_times)
        };
        let r = l1_stability_check(&handle(u, "u")?.out, &handle(w, "w")?.out, radius, times)?;
        *out_ptr(min_margin, "min_margin")? = r.min_margin();
        *out_ptr(pass, "pass")? = r.pass();
        Ok(())
    })
}
