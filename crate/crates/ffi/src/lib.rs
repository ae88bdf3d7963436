//! C interface to `sgm-core`.
//!
//! Every function returns an [`SgmStatus`]. On failure the message is kept
//! per thread and can be read with [`sgm_last_error`]. Fields cross the
//! boundary as opaque [`SgmField`] handles that the caller must release with
//! [`sgm_field_free`]. Panics never unwind into C; they surface as
//! `SGM_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use sgm_core::field::io::{read_field_file, write_field_file};
use sgm_core::field::{Cylinder, FieldSource, SpaceTimeField, TimeGrid, TorusGrid};
use sgm_core::quantities::{compute_quantities, multiscale_profile};
use sgm_core::regularity::{
    biparabolic_cover, box_dimension_estimate, campanato_estimate, detect_singular_candidates, RegularityConfig,
};
use sgm_core::solver::{integrate_sgm, ForcingSpec, Scheme, SolverConfig};
use sgm_core::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    BlowUp = 4,
    NonFinite = 5,
    Parse = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgmScheme {
    Etdrk2 = 0,
    ImexEuler = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgmSolverParams {
    /// Even, at least 8; the period is 2π.
    pub n_points: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    pub scheme: SgmScheme,
    pub dealias: bool,
    /// Store every `stride`-th step.
    pub stride: usize,
}

/// Scale-invariant quantities on one cylinder.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SgmQuantities {
    pub g: f64,
    pub u: f64,
    pub o: f64,
    pub l: f64,
    pub f: f64,
    /// The cylinder reached outside the stored time range.
    pub clipped: bool,
}

/// Space-time field sampled on the periodic grid.
pub struct SgmField {
    inner: SpaceTimeField,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(SgmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidArgument(_) | Error::MissingDerivative(_) => SgmStatus::InvalidArgument,
            Error::TimeOutOfRange { .. } | Error::EmptyWindow { .. } => SgmStatus::OutOfRange,
            Error::BlowUp { .. } => SgmStatus::BlowUp,
            Error::NonFinite(_) => SgmStatus::NonFinite,
            Error::Parse(_) => SgmStatus::Parse,
            Error::Io(_) => SgmStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Outcome) -> SgmStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SgmStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            SgmStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(SgmStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(SgmStatus::InvalidArgument, msg.into())
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn as_slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn as_pairs(p: *const f64, n: usize, what: &str) -> Result<Vec<(f64, f64)>, Failure> {
    let flat = as_slice(p, 2 * n, what)?;
    Ok(flat.chunks_exact(2).map(|c| (c[0], c[1])).collect())
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Outcome {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn path_arg(p: *const c_char) -> Result<&'static Path, Failure> {
    if p.is_null() {
        return Err(null("path"));
    }
    let s = CStr::from_ptr(p).to_str().map_err(|_| invalid("path is not UTF-8"))?;
    Ok(Path::new(s))
}

unsafe fn optional_field<'a>(f: *const SgmField) -> Option<&'a dyn FieldSource> {
    f.as_ref().map(|h| &h.inner as &dyn FieldSource)
}

fn into_handle(field: SpaceTimeField) -> *mut SgmField {
    Box::into_raw(Box::new(SgmField { inner: field }))
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sgm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn sgm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a field from `n_times × n_points` samples, stored time-major, at
/// times `t_start + n·dt`.
///
/// # Safety
/// `samples` must point to `n_times * n_points` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sgm_field_new(
    n_points: usize,
    n_times: usize,
    t_start: f64,
    dt: f64,
    samples: *const f64,
    out: *mut *mut SgmField,
) -> SgmStatus {
    guard(|| {
        if n_times == 0 {
            return Err(invalid("at least one time slice is required"));
        }
        let len = n_points.checked_mul(n_times).ok_or_else(|| invalid("size overflows"))?;
        let data = as_slice(samples, len, "samples")?.to_vec();
        let grid = TorusGrid::standard(n_points)?;
        let times = TimeGrid::new(t_start, dt, n_times - 1)?;
        let field = SpaceTimeField::new(grid, times, data)?;
        write_out(out, into_handle(field), "out")
    })
}

/// Reads a field file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sgm_field_read(path: *const c_char, out: *mut *mut SgmField) -> SgmStatus {
    guard(|| {
        let (field, _) = read_field_file(path_arg(path)?)?;
        write_out(out, into_handle(field), "out")
    })
}

/// Writes a field file.
///
/// # Safety
/// `field` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sgm_field_write(field: *const SgmField, path: *const c_char) -> SgmStatus {
    guard(|| {
        let f = as_ref(field, "field")?;
        write_field_file(&f.inner, &[], path_arg(path)?)?;
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `field` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sgm_field_free(field: *mut SgmField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// # Safety
/// `field` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sgm_field_shape(
    field: *const SgmField,
    n_points: *mut usize,
    n_times: *mut usize,
    t_start: *mut f64,
    dt: *mut f64,
) -> SgmStatus {
    guard(|| {
        let f = &as_ref(field, "field")?.inner;
        write_out(n_points, f.grid().n_points(), "n_points")?;
        write_out(n_times, f.times().n_slices(), "n_times")?;
        write_out(t_start, f.times().t_start(), "t_start")?;
        write_out(dt, f.times().dt(), "dt")
    })
}

/// Copies all samples, time-major, into `out` of length `len`.
///
/// # Safety
/// `field` must be a live handle; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sgm_field_samples(field: *const SgmField, out: *mut f64, len: usize) -> SgmStatus {
    guard(|| {
        let s = as_ref(field, "field")?.inner.samples();
        if len != s.len() {
            return Err(invalid(format!("buffer holds {len} values, field has {}", s.len())));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(s.as_ptr(), out, len);
        Ok(())
    })
}

/// Integrates from `u0` (length `params.n_points`) with an optional sampled
/// forcing (null for none).
///
/// # Safety
/// Pointers must be valid as described; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sgm_simulate(
    params: *const SgmSolverParams,
    u0: *const f64,
    forcing: *const SgmField,
    out: *mut *mut SgmField,
) -> SgmStatus {
    guard(|| {
        let p = as_ref(params, "params")?;
        let u0 = as_slice(u0, p.n_points, "u0")?;
        let scheme = match p.scheme {
            SgmScheme::Etdrk2 => Scheme::Etdrk2,
            SgmScheme::ImexEuler => Scheme::ImexEuler,
        };
        let cfg = SolverConfig::new(TorusGrid::standard(p.n_points)?, p.t_start, p.t_end, p.dt)
            .with_scheme(scheme)
            .with_dealias(p.dealias)
            .with_stride(p.stride);
        let spec = match forcing.as_ref() {
            Some(h) => ForcingSpec::Sampled(h.inner.clone()),
            None => ForcingSpec::Zero,
        };
        let field = integrate_sgm(u0, &spec, &cfg)?;
        write_out(out, into_handle(field), "out")
    })
}

/// Quantities on the cylinder of radius `r` centered at `(x0, t0)`.
///
/// # Safety
/// `u` must be a live handle, `f` null or a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sgm_quantities(
    u: *const SgmField,
    f: *const SgmField,
    x0: f64,
    t0: f64,
    r: f64,
    p: f64,
    out: *mut SgmQuantities,
) -> SgmStatus {
    guard(|| {
        let u = &as_ref(u, "u")?.inner;
        let cyl = Cylinder::new(x0, t0, r)?;
        let q = compute_quantities(u, optional_field(f), &cyl, p)?;
        let v = SgmQuantities {
            g: q.g,
            u: q.u,
            o: q.o,
            l: q.l,
            f: q.f,
            clipped: q.clipped,
        };
        write_out(out, v, "out")
    })
}

/// Applies the sufficient regularity criteria at `n_centers` centers
/// (`centers` holds `x, t` pairs) over `radii`. `is_candidate[i]` is set to 1
/// when no criterion certified center `i`. The other thresholds default from
/// `delta0` with `p = 3`, `λ = θ = 1/32`.
///
/// # Safety
/// Arrays must hold the stated number of values; `is_candidate` must hold
/// `n_centers` bytes.
#[no_mangle]
pub unsafe extern "C" fn sgm_singular_candidates(
    u: *const SgmField,
    f: *const SgmField,
    centers: *const f64,
    n_centers: usize,
    radii: *const f64,
    n_radii: usize,
    delta0: f64,
    is_candidate: *mut u8,
) -> SgmStatus {
    guard(|| {
        let u = &as_ref(u, "u")?.inner;
        let centers = as_pairs(centers, n_centers, "centers")?;
        let radii = as_slice(radii, n_radii, "radii")?;
        if n_centers > 0 && is_candidate.is_null() {
            return Err(null("is_candidate"));
        }
        let cfg = RegularityConfig::new(3.0, 1.0 / 32.0, 1.0 / 32.0, delta0)?;
        let prof = multiscale_profile(u, optional_field(f), &centers, radii, cfg.p)?;
        let rep = detect_singular_candidates(&prof, &cfg, cfg.alpha());
        for (i, v) in rep.verdicts.iter().enumerate() {
            is_candidate.add(i).write(u8::from(v.is_candidate()));
        }
        Ok(())
    })
}

/// Greedy biparabolic cover of `n` points (`x, t` pairs) by cylinders of
/// radius below `delta_cap`; returns `Σ r^exponent` and the cylinder count.
///
/// # Safety
/// `points` must hold `2n` doubles; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sgm_cover_sum(
    points: *const f64,
    n: usize,
    delta_cap: f64,
    exponent: f64,
    sum: *mut f64,
    n_cylinders: *mut usize,
) -> SgmStatus {
    guard(|| {
        let pts = as_pairs(points, n, "points")?;
        let est = biparabolic_cover(&pts, delta_cap, &[exponent])?;
        write_out(sum, est.sums[0].1, "sum")?;
        write_out(n_cylinders, est.cylinders.len(), "n_cylinders")
    })
}

/// Box-counting dimension in the biparabolic metric; `degenerate` is set
/// when every radius needed the same count.
///
/// # Safety
/// `points` must hold `2n` doubles and `radii` `n_radii`; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn sgm_box_dimension(
    points: *const f64,
    n: usize,
    radii: *const f64,
    n_radii: usize,
    dimension: *mut f64,
    degenerate: *mut bool,
) -> SgmStatus {
    guard(|| {
        let pts = as_pairs(points, n, "points")?;
        let d = box_dimension_estimate(&pts, as_slice(radii, n_radii, "radii")?)?;
        write_out(dimension, d.dimension, "dimension")?;
        write_out(degenerate, d.degenerate, "degenerate")
    })
}

/// Hölder exponent from the mean oscillation at `(x0, t0)`; NaN when the
/// oscillation vanishes at every radius.
///
/// # Safety
/// `u` must be a live handle, `radii` hold `n_radii` doubles, `alpha` writable.
#[no_mangle]
pub unsafe extern "C" fn sgm_holder_exponent(
    u: *const SgmField,
    x0: f64,
    t0: f64,
    radii: *const f64,
    n_radii: usize,
    alpha: *mut f64,
) -> SgmStatus {
    guard(|| {
        let u = &as_ref(u, "u")?.inner;
        let est = campanato_estimate(u, (x0, t0), as_slice(radii, n_radii, "radii")?)?;
        write_out(alpha, est.alpha().unwrap_or(f64::NAN), "alpha")
    })
}
