//! C ABI for the kclt toolkit.
//!
//! Patterns and limit models are opaque handles created by `kclt_*` functions
//! and released with the matching `*_free`. Every fallible call returns a
//! [`KcltStatus`]; on failure [`kclt_last_error`] describes the problem.
//! Windows are centred cubes given by dimension and volume.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use kclt::estimators::estimate_k;
use kclt::gibbs::{sample_gibbs_perfect, GibbsModel};
use kclt::limit::{GofTester, LimitModel, StatisticKind};
use kclt::samplers::{sample_lgcp, sample_poisson, LgcpParams};
use kclt::{CubeWindow, EdgeCorrection, Error, PointPattern, RGrid, RngSeed};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KcltStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnsupportedDimension = 3,
    Inadmissible = 4,
    BudgetExceeded = 5,
    Factorization = 6,
    GridMismatch = 7,
    Io = 8,
    Parse = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Edge corrections for the K-estimator.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KcltCorrection {
    None = 0,
    Translation = 1,
    RigidMotion = 2,
    Border = 3,
    Isotropic = 4,
}

impl From<KcltCorrection> for EdgeCorrection {
    fn from(c: KcltCorrection) -> Self {
        match c {
            KcltCorrection::None => EdgeCorrection::None,
            KcltCorrection::Translation => EdgeCorrection::Translation,
            KcltCorrection::RigidMotion => EdgeCorrection::RigidMotion,
            KcltCorrection::Border => EdgeCorrection::Border,
            KcltCorrection::Isotropic => EdgeCorrection::Isotropic,
        }
    }
}

/// Result of [`kclt_gof_test`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KcltGofResult {
    pub statistic: f64,
    pub quantile: f64,
    pub alpha: f64,
    pub r_max: f64,
    /// 1 if the null is rejected, else 0.
    pub reject: i32,
}

/// Opaque point pattern.
pub struct KcltPattern(PointPattern);

/// Opaque limit model.
pub struct KcltLimit(LimitModel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> KcltStatus {
    match err {
        Error::UnsupportedDimension { .. } | Error::DimensionMismatch { .. } => {
            KcltStatus::UnsupportedDimension
        }
        Error::Inadmissible { .. } => KcltStatus::Inadmissible,
        Error::EventBudgetExceeded { .. } => KcltStatus::BudgetExceeded,
        Error::Factorization { .. } => KcltStatus::Factorization,
        Error::GridMismatch(_) => KcltStatus::GridMismatch,
        Error::Io(_) => KcltStatus::Io,
        Error::Parse(_) => KcltStatus::Parse,
        _ => KcltStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (KcltStatus, String)>) -> KcltStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            KcltStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            KcltStatus::Panic
        }
    }
}

fn lift<T>(r: kclt::Result<T>) -> Result<T, (KcltStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (KcltStatus, String) {
    (KcltStatus::NullPointer, format!("{what} is null"))
}

unsafe fn put_pattern(out: *mut *mut KcltPattern, p: PointPattern) {
    *out = Box::into_raw(Box::new(KcltPattern(p)));
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next `kclt_*` call on the same thread.
#[no_mangle]
pub extern "C" fn kclt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a pattern from `n_points * dim` coordinates in the centred cube of
/// the given volume.
///
/// # Safety
/// `coords` must point to `n_points * dim` doubles (or be null when
/// `n_points` is 0) and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kclt_pattern_new(
    dim: usize,
    volume: f64,
    coords: *const f64,
    n_points: usize,
    out: *mut *mut KcltPattern,
) -> KcltStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if coords.is_null() && n_points > 0 {
            return Err(null("coords"));
        }
        let window = lift(CubeWindow::new(dim, volume))?;
        let data = if n_points == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(coords, n_points * dim).to_vec()
        };
        let p = lift(PointPattern::new(window, data))?;
        put_pattern(out, p);
        Ok(())
    })
}

/// # Safety
/// `pattern` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kclt_pattern_free(pattern: *mut KcltPattern) {
    if !pattern.is_null() {
        drop(Box::from_raw(pattern));
    }
}

/// Number of points; 0 for a null handle.
///
/// # Safety
/// `pattern` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kclt_pattern_len(pattern: *const KcltPattern) -> usize {
    pattern.as_ref().map_or(0, |p| p.0.len())
}

/// Dimension; 0 for a null handle.
///
/// # Safety
/// `pattern` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kclt_pattern_dim(pattern: *const KcltPattern) -> usize {
    pattern.as_ref().map_or(0, |p| p.0.dim())
}

/// Row-major coordinates, `len * dim` doubles owned by the handle.
///
/// # Safety
/// `pattern` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kclt_pattern_coords(pattern: *const KcltPattern) -> *const f64 {
    pattern.as_ref().map_or(ptr::null(), |p| p.0.coords().as_ptr())
}

/// Homogeneous Poisson pattern.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kclt_sample_poisson(
    dim: usize,
    volume: f64,
    rho: f64,
    seed: u64,
    stream: u64,
    out: *mut *mut KcltPattern,
) -> KcltStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let window = lift(CubeWindow::new(dim, volume))?;
        let p = lift(sample_poisson(&window, rho, RngSeed::new(seed, stream)))?;
        put_pattern(out, p);
        Ok(())
    })
}

/// Planar log-Gaussian Cox pattern of unit intensity with exponential
/// covariance `sigma2 * exp(-h / scale)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kclt_sample_lgcp(
    volume: f64,
    sigma2: f64,
    scale: f64,
    seed: u64,
    stream: u64,
    out: *mut *mut KcltPattern,
) -> KcltStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let window = lift(CubeWindow::new(2, volume))?;
        let params = LgcpParams::unit_intensity(sigma2, scale);
        let p = lift(sample_lgcp(&window, &params, RngSeed::new(seed, stream)))?;
        put_pattern(out, p);
        Ok(())
    })
}

/// Perfect sample of a planar Strauss process.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kclt_sample_strauss(
    volume: f64,
    gamma: f64,
    radius: f64,
    tau: f64,
    seed: u64,
    stream: u64,
    out: *mut *mut KcltPattern,
) -> KcltStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let window = lift(CubeWindow::new(2, volume))?;
        let model = lift(GibbsModel::strauss(gamma, radius, tau))?;
        let (p, _) = lift(sample_gibbs_perfect(window, model, RngSeed::new(seed, stream)))?;
        put_pattern(out, p);
        Ok(())
    })
}

/// Writes K on the grid `0, step, ..., r_max` into `values`. `written`
/// receives the grid length; if it exceeds `capacity` nothing is written and
/// `BufferTooSmall` is returned.
///
/// # Safety
/// `pattern` must be a live handle, `values` must hold `capacity` doubles
/// and `written` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kclt_estimate_k(
    pattern: *const KcltPattern,
    rho: f64,
    correction: KcltCorrection,
    r_max: f64,
    step: f64,
    values: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> KcltStatus {
    guard(|| {
        let p = pattern.as_ref().ok_or_else(|| null("pattern"))?;
        if written.is_null() {
            return Err(null("written"));
        }
        let grid = lift(RGrid::up_to(r_max, step))?;
        *written = grid.len();
        if grid.len() > capacity {
            return Err((
                KcltStatus::BufferTooSmall,
                format!("grid has {} radii, buffer holds {capacity}", grid.len()),
            ));
        }
        if values.is_null() {
            return Err(null("values"));
        }
        let curve = lift(estimate_k(&p.0, rho, &grid, correction.into()))?;
        std::slice::from_raw_parts_mut(values, curve.values.len()).copy_from_slice(&curve.values);
        Ok(())
    })
}

/// Closed-form planar Poisson limit on the grid `0, step, ..., r_max`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kclt_limit_poisson(
    r_max: f64,
    step: f64,
    rho: f64,
    out: *mut *mut KcltLimit,
) -> KcltStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let grid = lift(RGrid::up_to(r_max, step))?;
        let limit = lift(LimitModel::poisson(grid, rho))?;
        *out = Box::into_raw(Box::new(KcltLimit(limit)));
        Ok(())
    })
}

/// Loads a limit model directory written by the command-line tool.
///
/// # Safety
/// `dir` must be a nul-terminated UTF-8 path and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kclt_limit_load(dir: *const c_char, out: *mut *mut KcltLimit) -> KcltStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if dir.is_null() {
            return Err(null("dir"));
        }
        let path = CStr::from_ptr(dir)
            .to_str()
            .map_err(|_| (KcltStatus::InvalidArgument, "path is not UTF-8".to_string()))?;
        let limit = lift(LimitModel::load(Path::new(path)))?;
        *out = Box::into_raw(Box::new(KcltLimit(limit)));
        Ok(())
    })
}

/// Number of grid radii; 0 for a null handle.
///
/// # Safety
/// `limit` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kclt_limit_len(limit: *const KcltLimit) -> usize {
    limit.as_ref().map_or(0, |l| l.0.grid().len())
}

/// # Safety
/// `limit` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kclt_limit_free(limit: *mut KcltLimit) {
    if !limit.is_null() {
        drop(Box::from_raw(limit));
    }
}

/// Sup-type goodness-of-fit test of `pattern` against `limit` on `[0, r_max]`
/// with the quantile estimated from `paths` Gaussian paths.
///
/// # Safety
/// Handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kclt_gof_test(
    pattern: *const KcltPattern,
    limit: *const KcltLimit,
    alpha: f64,
    r_max: f64,
    correction: KcltCorrection,
    rho: f64,
    paths: usize,
    seed: u64,
    stream: u64,
    out: *mut KcltGofResult,
) -> KcltStatus {
    guard(|| {
        let p = pattern.as_ref().ok_or_else(|| null("pattern"))?;
        let l = limit.as_ref().ok_or_else(|| null("limit"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let tester = lift(GofTester::new(
            &l.0,
            alpha,
            r_max,
            StatisticKind::Sup,
            paths,
            RngSeed::new(seed, stream),
        ))?;
        let r = lift(tester.test(&p.0, correction.into(), rho))?;
        *out = KcltGofResult {
            statistic: r.statistic,
            quantile: r.quantile,
            alpha: r.alpha,
            r_max: r.r_max,
            reject: r.reject as i32,
        };
        Ok(())
    })
}
