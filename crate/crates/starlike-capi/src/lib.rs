//! C ABI over the starlike verification library.
//!
//! Conventions: complex scalars cross the boundary as (re, im) double
//! pairs and series as flat [re0, im0, re1, im1, ...] buffers; series
//! built by the library are returned as opaque handles; structured
//! checks are JSON-in/JSON-out. Every fallible call returns a
//! [`StarlikeStatus`]; on any non-OK status a thread-local message is
//! available from [`starlike_last_error`] until the next call on the
//! same thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use serde::Deserialize;

use starlike::criteria::{
    alpha_threshold, lambda1_bound, lambda_max_starlike, w_bound, AlphaRegime,
};
use starlike::disk::{RadialGrid, DEFAULT_ANGULAR_COUNT, DEFAULT_RADII};
use starlike::harness::{
    is_gate_error, verify_lemma21, verify_lemma22_part1, verify_lemma22_part2, verify_theorem1,
    verify_theorem2, verify_theorem3, CriterionId, Tolerances,
};
use starlike::report::jsonl_line;
use starlike::series::{AnMember, H1nMember, PowerSeries, DEFAULT_ORDER};
use starlike::transform::{bernardi_transform, transform_identity_residual, TransformSpec};
use starlike::Error;

/// Result of every fallible call in this ABI.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarlikeStatus {
    Ok = 0,
    /// Malformed input: null pointer, bad JSON, invalid series.
    InvalidArgument = 1,
    /// Parameters outside a statement's gate.
    GateViolation = 2,
    /// Well-formed input on which the computation degenerates.
    NumericError = 3,
}

/// Opaque truncated power series handle.
pub struct StarlikeSeries {
    inner: PowerSeries,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let clean = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(clean).expect("NULs stripped"));
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &Error) -> StarlikeStatus {
    if is_gate_error(e) {
        return StarlikeStatus::GateViolation;
    }
    match e {
        Error::ZeroOnCircle { .. }
        | Error::DegenerateMaximum
        | Error::ZeroConstantTerm { .. }
        | Error::NonUnitConstantTerm { .. } => StarlikeStatus::NumericError,
        _ => StarlikeStatus::InvalidArgument,
    }
}

/// Runs a fallible body behind the FFI boundary: clears the error slot,
/// converts Err into a status plus message, and never unwinds into C.
fn ffi_boundary<F: FnOnce() -> Result<(), Error>>(body: F) -> StarlikeStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => StarlikeStatus::Ok,
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            StarlikeStatus::NumericError
        }
    }
}

fn null_arg(name: &str) -> Error {
    Error::InvalidParameter(format!("{name} must not be null"))
}

/// Message describing the most recent error on this thread, or null if
/// the last call succeeded. The pointer is valid until the next call
/// into this library from the same thread; do not free it.
#[no_mangle]
pub extern "C" fn starlike_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

/// Library version as a static NUL-terminated string; do not free it.
#[no_mangle]
pub extern "C" fn starlike_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Builds a series from `len` complex coefficients laid out as
/// [re0, im0, re1, im1, ...], index 0 first.
///
/// # Safety
/// `re_im` must point to `2 * len` readable doubles and `out` to a
/// writable pointer slot. On success `*out` owns the handle; release it
/// with [`starlike_series_free`].
#[no_mangle]
pub unsafe extern "C" fn starlike_series_new(
    re_im: *const f64,
    len: usize,
    out: *mut *mut StarlikeSeries,
) -> StarlikeStatus {
    ffi_boundary(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        if re_im.is_null() && len > 0 {
            return Err(null_arg("re_im"));
        }
        let flat = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(re_im, 2 * len)
        };
        let coeffs: Vec<Complex64> = flat
            .chunks_exact(2)
            .map(|pair| Complex64::new(pair[0], pair[1]))
            .collect();
        let series = PowerSeries::new(coeffs)?;
        *out = Box::into_raw(Box::new(StarlikeSeries { inner: series }));
        Ok(())
    })
}

/// Releases a handle from this library. Null is a no-op.
///
/// # Safety
/// `series` must be a pointer previously returned by this library and
/// not freed since.
#[no_mangle]
pub unsafe extern "C" fn starlike_series_free(series: *mut StarlikeSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Truncation order N of the series (it holds N + 1 coefficients).
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn starlike_series_order(
    series: *const StarlikeSeries,
    out: *mut usize,
) -> StarlikeStatus {
    ffi_boundary(|| {
        if series.is_null() {
            return Err(null_arg("series"));
        }
        if out.is_null() {
            return Err(null_arg("out"));
        }
        *out = (*series).inner.order();
        Ok(())
    })
}

/// Copies the coefficients out as [re0, im0, ...]; writes
/// `2 * (order + 1)` doubles and stores that count in `written`.
///
/// # Safety
/// `series` must be a live handle; `buf` must have room for `buf_len`
/// doubles; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn starlike_series_coeffs(
    series: *const StarlikeSeries,
    buf: *mut f64,
    buf_len: usize,
    written: *mut usize,
) -> StarlikeStatus {
    ffi_boundary(|| {
        if series.is_null() {
            return Err(null_arg("series"));
        }
        if buf.is_null() {
            return Err(null_arg("buf"));
        }
        if written.is_null() {
            return Err(null_arg("written"));
        }
        let coeffs = (*series).inner.coeffs();
        let needed = 2 * coeffs.len();
        if buf_len < needed {
            return Err(Error::InvalidParameter(format!(
                "buffer holds {buf_len} doubles, {needed} needed"
            )));
        }
        let target = std::slice::from_raw_parts_mut(buf, needed);
        for (k, z) in coeffs.iter().enumerate() {
            target[2 * k] = z.re;
            target[2 * k + 1] = z.im;
        }
        *written = needed;
        Ok(())
    })
}

/// Evaluates the series at z = z_re + i z_im by Horner's rule.
///
/// # Safety
/// `series` must be a live handle; `out_re` and `out_im` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn starlike_series_eval(
    series: *const StarlikeSeries,
    z_re: f64,
    z_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> StarlikeStatus {
    ffi_boundary(|| {
        if series.is_null() {
            return Err(null_arg("series"));
        }
        if out_re.is_null() || out_im.is_null() {
            return Err(null_arg("out_re/out_im"));
        }
        let value = (*series).inner.eval(Complex64::new(z_re, z_im));
        *out_re = value.re;
        *out_im = value.im;
        Ok(())
    })
}

/// |lambda1| = |lambda| |mu| / |n - mu|, the transferred subordination
/// radius. Gate: Re(mu) < n, mu nonzero, 0 < |lambda| <= 1.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn starlike_lambda1_bound(
    lambda_re: f64,
    lambda_im: f64,
    mu_re: f64,
    mu_im: f64,
    n: usize,
    out: *mut f64,
) -> StarlikeStatus {
    ffi_boundary(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        *out = lambda1_bound(
            Complex64::new(lambda_re, lambda_im),
            Complex64::new(mu_re, mu_im),
            n,
        )?;
        Ok(())
    })
}

/// Largest |lambda| under which the subordination criterion forces
/// starlikeness: |n - mu| / sqrt(|n - mu|^2 + |mu|^2).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn starlike_lambda_max(
    mu_re: f64,
    mu_im: f64,
    n: usize,
    out: *mut f64,
) -> StarlikeStatus {
    ffi_boundary(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        *out = lambda_max_starlike(Complex64::new(mu_re, mu_im), n)?;
        Ok(())
    })
}

/// Piecewise starlikeness order for factor radii (l, l1). On success
/// writes alpha, the regime (0: sum branch, 1: squares branch) and a
/// seam flag; `out_regime` and `out_boundary` may be null if unwanted.
///
/// # Safety
/// `out_alpha` must be writable; the optional outputs must be writable
/// when non-null.
#[no_mangle]
pub unsafe extern "C" fn starlike_alpha_threshold(
    l: f64,
    l1: f64,
    out_alpha: *mut f64,
    out_regime: *mut c_int,
    out_boundary: *mut c_int,
) -> StarlikeStatus {
    ffi_boundary(|| {
        if out_alpha.is_null() {
            return Err(null_arg("out_alpha"));
        }
        let result = alpha_threshold(l, l1)?;
        *out_alpha = result.alpha;
        if !out_regime.is_null() {
            *out_regime = match result.regime {
                AlphaRegime::SumAtMostOne => 0,
                AlphaRegime::SquaresAtMostOne => 1,
            };
        }
        if !out_boundary.is_null() {
            *out_boundary = result.boundary as c_int;
        }
        Ok(())
    })
}

/// Schwarz bound (l + l1)/(1 - l1) under the gate l + 2 l1 <= 1.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn starlike_w_bound(l: f64, l1: f64, out: *mut f64) -> StarlikeStatus {
    ffi_boundary(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        *out = w_bound(l, l1)?;
        Ok(())
    })
}

/// Applies the integral transform to f (given as a series handle with
/// membership index n) and returns the transformed series plus the
/// coefficient identity residual.
///
/// # Safety
/// `f` must be a live handle; `out_series` and `out_residual` must be
/// writable. On success `*out_series` owns a new handle.
#[no_mangle]
pub unsafe extern "C" fn starlike_transform(
    f: *const StarlikeSeries,
    n: usize,
    mu_re: f64,
    mu_im: f64,
    c_re: f64,
    c_im: f64,
    order: usize,
    out_series: *mut *mut StarlikeSeries,
    out_residual: *mut f64,
) -> StarlikeStatus {
    ffi_boundary(|| {
        if f.is_null() {
            return Err(null_arg("f"));
        }
        if out_series.is_null() || out_residual.is_null() {
            return Err(null_arg("out_series/out_residual"));
        }
        let member = AnMember::new((*f).inner.clone(), n)?;
        let spec = TransformSpec::new(
            Complex64::new(mu_re, mu_im),
            Complex64::new(c_re, c_im),
            order,
        )?;
        let transformed = bernardi_transform(&member, &spec)?;
        let residual = transform_identity_residual(&member, &spec)?;
        *out_series = Box::into_raw(Box::new(StarlikeSeries {
            inner: transformed.series().clone(),
        }));
        *out_residual = residual;
        Ok(())
    })
}

fn default_n() -> usize {
    1
}

/// JSON request for [`starlike_verify_json`]; see that function.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyRequest {
    theorem_id: String,
    #[serde(default = "default_n")]
    n: usize,
    mu: Option<[f64; 2]>,
    lambda: Option<[f64; 2]>,
    c: Option<[f64; 2]>,
    f: Option<Vec<[f64; 2]>>,
    p: Option<Vec<[f64; 2]>>,
    q: Option<Vec<[f64; 2]>>,
    w: Option<Vec<[f64; 2]>>,
    l: Option<f64>,
    l1: Option<f64>,
    alpha: Option<f64>,
    order: Option<usize>,
    radii: Option<Vec<f64>>,
    angles: Option<usize>,
    tol: Option<f64>,
    hypothesis_band: Option<f64>,
}

fn complex_field(v: Option<[f64; 2]>, name: &str) -> Result<Complex64, Error> {
    v.map(|p| Complex64::new(p[0], p[1]))
        .ok_or_else(|| Error::InvalidParameter(format!("missing field \"{name}\"")))
}

fn series_field(v: &Option<Vec<[f64; 2]>>, name: &str) -> Result<PowerSeries, Error> {
    let coeffs = v
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter(format!("missing field \"{name}\"")))?
        .iter()
        .map(|p| Complex64::new(p[0], p[1]))
        .collect();
    PowerSeries::new(coeffs)
}

/// Factor radii for the two-factor lemmas: direct (l, l1) if given,
/// otherwise derived from (mu, lambda) through the transfer bound.
fn two_factor_radii(req: &VerifyRequest) -> Result<(f64, f64), Error> {
    match (req.l, req.l1) {
        (Some(l), Some(l1)) => Ok((l, l1)),
        _ => {
            let mu = complex_field(req.mu, "mu")?;
            let lambda = complex_field(req.lambda, "lambda")?;
            Ok((lambda.norm(), lambda1_bound(lambda, mu, req.n)?))
        }
    }
}

fn run_verify(request: &str) -> Result<String, Error> {
    let req: VerifyRequest = serde_json::from_str(request)
        .map_err(|e| Error::InvalidParameter(format!("request: {e}")))?;
    let id: CriterionId = req.theorem_id.parse()?;
    let order = req.order.unwrap_or(DEFAULT_ORDER);
    let grid = RadialGrid::new(
        req.radii.clone().unwrap_or_else(|| DEFAULT_RADII.to_vec()),
        req.angles.unwrap_or(DEFAULT_ANGULAR_COUNT),
    )?;
    let tols = Tolerances {
        conclusion_tol: req.tol.unwrap_or(1e-6),
        boundary_band: req.hypothesis_band.unwrap_or(1e-9),
    };

    let report = match id {
        CriterionId::Lemma21 => {
            let p = H1nMember::new(series_field(&req.p, "p")?.with_order(order), req.n)?;
            verify_lemma21(
                &p,
                complex_field(req.mu, "mu")?,
                complex_field(req.lambda, "lambda")?,
                &grid,
                &tols,
            )?
        }
        CriterionId::Lemma22Part1 => {
            let (l, l1) = two_factor_radii(&req)?;
            let alpha = match req.alpha {
                Some(a) => a,
                None => alpha_threshold(l, l1)?.alpha,
            };
            let q = H1nMember::new(series_field(&req.q, "q")?.with_order(order), req.n)?;
            let p = H1nMember::new(series_field(&req.p, "p")?.with_order(order), req.n)?;
            verify_lemma22_part1(&q, &p, l, l1, alpha, &grid, &tols)?
        }
        CriterionId::Lemma22Part2 => {
            let (l, l1) = two_factor_radii(&req)?;
            let q = H1nMember::new(series_field(&req.q, "q")?.with_order(order), req.n)?;
            let w = series_field(&req.w, "w")?.with_order(order);
            verify_lemma22_part2(&q, &w, l, l1, &grid, &tols)?
        }
        CriterionId::Theorem1 => {
            let f = AnMember::new(series_field(&req.f, "f")?.with_order(order), req.n)?;
            verify_theorem1(
                &f,
                complex_field(req.mu, "mu")?,
                complex_field(req.lambda, "lambda")?,
                &grid,
                &tols,
            )?
        }
        CriterionId::Theorem2 => {
            let f = AnMember::new(series_field(&req.f, "f")?.with_order(order), req.n)?;
            verify_theorem2(
                &f,
                complex_field(req.mu, "mu")?,
                complex_field(req.lambda, "lambda")?,
                &grid,
                &tols,
            )?
        }
        CriterionId::Theorem3 => {
            let f = AnMember::new(series_field(&req.f, "f")?.with_order(order), req.n)?;
            verify_theorem3(
                &f,
                complex_field(req.mu, "mu")?,
                complex_field(req.c, "c")?,
                complex_field(req.lambda, "lambda")?,
                &grid,
                &tols,
            )?
        }
    };
    jsonl_line(&report)
}

/// Runs one verification described by a JSON request and returns the
/// report as a JSON string.
///
/// Request fields: `theorem_id` (lemma21, lemma22p1, lemma22p2, thm1,
/// thm2, thm3) and `n`; complex scalars `mu`, `lambda`, `c` as
/// [re, im]; series `f`, `p`, `q`, `w` as arrays of [re, im] pairs
/// (which ones are required depends on the criterion); the two-factor
/// lemmas take either direct radii `l`, `l1` (and optional `alpha`) or
/// derive them from (mu, lambda); optional sampling controls `order`,
/// `radii`, `angles`, `tol`, `hypothesis_band`.
///
/// # Safety
/// `request` must be a NUL-terminated UTF-8 string; `response` must be
/// writable. On success `*response` owns a NUL-terminated JSON string;
/// release it with [`starlike_string_free`].
#[no_mangle]
pub unsafe extern "C" fn starlike_verify_json(
    request: *const c_char,
    response: *mut *mut c_char,
) -> StarlikeStatus {
    ffi_boundary(|| {
        if request.is_null() {
            return Err(null_arg("request"));
        }
        if response.is_null() {
            return Err(null_arg("response"));
        }
        let text = CStr::from_ptr(request)
            .to_str()
            .map_err(|_| Error::InvalidParameter("request is not UTF-8".into()))?;
        let line = run_verify(text)?;
        let c = CString::new(line)
            .map_err(|_| Error::InvalidParameter("report contained a NUL byte".into()))?;
        *response = c.into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be a string previously returned by this library and not
/// freed since.
#[no_mangle]
pub unsafe extern "C" fn starlike_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
