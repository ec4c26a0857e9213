//! C interface. Bodies and measures are opaque heap handles released with
//! their `_free` functions. Every fallible call returns a status code (`0` on
//! success, otherwise the CLI exit code of the error, or one of the negative
//! codes below) and writes results through out-pointers; the message of the
//! last failure on the calling thread is available from
//! [`capflow_last_error_message`].

use capflow::body::{hull, ConvexBody};
use capflow::cone::{nu_star, tangent_cone};
use capflow::io;
use capflow::limits::limit_2d;
use capflow::measure::{nu_t, SphericalMeasure};
use capflow::newton::{resistance, Method};
use capflow::transport::bl_distance;
use capflow::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

pub const CAPFLOW_OK: i32 = 0;
/// A required pointer argument was null.
pub const CAPFLOW_NULL_POINTER: i32 = -1;
/// A string argument was not valid UTF-8.
pub const CAPFLOW_INVALID_UTF8: i32 = -2;
/// An index was out of range.
pub const CAPFLOW_OUT_OF_RANGE: i32 = -3;
/// The library panicked; this is a bug.
pub const CAPFLOW_PANIC: i32 = -99;

/// Opaque convex body.
pub struct CapflowBody(ConvexBody);

/// Opaque atomic measure on the unit sphere.
pub struct CapflowMeasure(SphericalMeasure);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Fail {
    Code(i32, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CAPFLOW_OK,
        Ok(Err(Fail::Lib(e))) => {
            set_error(format!("{}: {e}", e.name()));
            e.exit_code()
        }
        Ok(Err(Fail::Code(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            CAPFLOW_PANIC
        }
    }
}

fn nonnull<T>(p: *const T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail::Code(CAPFLOW_NULL_POINTER, format!("{what} is null")));
    }
    Ok(())
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    nonnull(s, what)?;
    CStr::from_ptr(s).to_str().map_err(|_| Fail::Code(CAPFLOW_INVALID_UTF8, format!("{what} is not UTF-8")))
}

unsafe fn vector(p: *const f64, d: usize, what: &str) -> Result<Vec<f64>, Fail> {
    nonnull(p, what)?;
    Ok(std::slice::from_raw_parts(p, d).to_vec())
}

unsafe fn body_ref<'a>(b: *const CapflowBody) -> Result<&'a ConvexBody, Fail> {
    nonnull(b, "body")?;
    Ok(&(*b).0)
}

unsafe fn measure_ref<'a>(m: *const CapflowMeasure) -> Result<&'a SphericalMeasure, Fail> {
    nonnull(m, "measure")?;
    Ok(&(*m).0)
}

unsafe fn put_measure(out: *mut *mut CapflowMeasure, m: SphericalMeasure) {
    *out = Box::into_raw(Box::new(CapflowMeasure(m)));
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn capflow_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a body document (the JSON accepted by the command-line tool).
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn capflow_body_from_json(json: *const c_char, out: *mut *mut CapflowBody) -> i32 {
    guard(|| {
        nonnull(out, "out")?;
        let body = io::parse_body(text(json, "json")?)?;
        *out = Box::into_raw(Box::new(CapflowBody(body)));
        Ok(())
    })
}

/// Convex hull of `n_points` points of dimension `dim`, stored row by row.
///
/// # Safety
/// `coords` must hold `dim * n_points` doubles and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn capflow_body_from_points(
    dim: usize,
    coords: *const f64,
    n_points: usize,
    out: *mut *mut CapflowBody,
) -> i32 {
    guard(|| {
        nonnull(out, "out")?;
        nonnull(coords, "coords")?;
        if dim == 0 {
            return Err(Error::UnsupportedDimension(0).into());
        }
        let flat = std::slice::from_raw_parts(coords, dim * n_points);
        let pts: Vec<Vec<f64>> = flat.chunks(dim).map(<[f64]>::to_vec).collect();
        *out = Box::into_raw(Box::new(CapflowBody(ConvexBody::Polytope(hull(&pts)?))));
        Ok(())
    })
}

/// Ambient dimension of a body, 0 for null.
///
/// # Safety
/// `body` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn capflow_body_dim(body: *const CapflowBody) -> usize {
    body.as_ref().map_or(0, |b| b.0.dim())
}

/// # Safety
/// `body` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn capflow_body_free(body: *mut CapflowBody) {
    if !body.is_null() {
        drop(Box::from_raw(body));
    }
}

/// Normalized cap measure at depth `t` below the support plane through `r0`
/// with outward normal `e`; both vectors have the body's dimension.
///
/// # Safety
/// Pointers must be valid; `r0` and `e` hold `capflow_body_dim(body)` doubles.
#[no_mangle]
pub unsafe extern "C" fn capflow_nu_t(
    body: *const CapflowBody,
    r0: *const f64,
    e: *const f64,
    t: f64,
    out: *mut *mut CapflowMeasure,
) -> i32 {
    guard(|| {
        nonnull(out, "out")?;
        let b = body_ref(body)?;
        let d = b.dim();
        let r0 = vector(r0, d, "r0")?;
        let e = vector(e, d, "e")?;
        let cap = capflow::body::cut_cap(b, &r0, &e, t)?;
        put_measure(out, nu_t(&cap)?);
        Ok(())
    })
}

/// Limit measure of the tangent cone at a conical point `r0`. A null `e`
/// picks the normalized sum of the normal-cone generators.
///
/// # Safety
/// Pointers other than `e` must be valid; vectors hold the body's dimension.
#[no_mangle]
pub unsafe extern "C" fn capflow_nu_star(
    body: *const CapflowBody,
    r0: *const f64,
    e: *const f64,
    out: *mut *mut CapflowMeasure,
) -> i32 {
    guard(|| {
        nonnull(out, "out")?;
        let b = body_ref(body)?;
        let d = b.dim();
        let cone = tangent_cone(b, &vector(r0, d, "r0")?)?;
        let e = if e.is_null() { cone.auto_direction()? } else { vector(e, d, "e")? };
        put_measure(out, nu_star(&cone, &e)?);
        Ok(())
    })
}

/// Planar two-atom limit `λ1 δ_e1 + λ2 δ_e2` with `λ1 e1 + λ2 e2 = e`.
///
/// # Safety
/// Each vector holds two doubles; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn capflow_limit_2d(
    e1: *const f64,
    e2: *const f64,
    e: *const f64,
    out: *mut *mut CapflowMeasure,
) -> i32 {
    guard(|| {
        nonnull(out, "out")?;
        let m = limit_2d(&vector(e1, 2, "e1")?, &vector(e2, 2, "e2")?, &vector(e, 2, "e")?)?;
        put_measure(out, m);
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn capflow_measure_dim(m: *const CapflowMeasure) -> usize {
    m.as_ref().map_or(0, |m| m.0.dim())
}

/// Number of atoms, 0 for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn capflow_measure_len(m: *const CapflowMeasure) -> usize {
    m.as_ref().map_or(0, |m| m.0.len())
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn capflow_measure_total_mass(m: *const CapflowMeasure) -> f64 {
    m.as_ref().map_or(0.0, |m| m.0.total_mass())
}

/// Copies atom `i`: its direction into `dir` (dimension doubles) and its
/// weight into `weight`.
///
/// # Safety
/// `dir` must have room for `capflow_measure_dim(m)` doubles.
#[no_mangle]
pub unsafe extern "C" fn capflow_measure_atom(
    m: *const CapflowMeasure,
    i: usize,
    dir: *mut f64,
    weight: *mut f64,
) -> i32 {
    guard(|| {
        let m = measure_ref(m)?;
        nonnull(dir, "dir")?;
        nonnull(weight, "weight")?;
        let a = m.atoms().get(i).ok_or_else(|| Fail::Code(CAPFLOW_OUT_OF_RANGE, format!("atom {i} of {}", m.len())))?;
        ptr::copy_nonoverlapping(a.dir.as_ptr(), dir, a.dir.len());
        *weight = a.weight;
        Ok(())
    })
}

/// Writes `∫ n dμ(n)` into `out` (dimension doubles).
///
/// # Safety
/// `out` must have room for `capflow_measure_dim(m)` doubles.
#[no_mangle]
pub unsafe extern "C" fn capflow_measure_resultant(m: *const CapflowMeasure, out: *mut f64) -> i32 {
    guard(|| {
        let m = measure_ref(m)?;
        nonnull(out, "out")?;
        let r = m.resultant();
        ptr::copy_nonoverlapping(r.as_ptr(), out, r.len());
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn capflow_measure_free(m: *mut CapflowMeasure) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Bounded-Lipschitz distance between two measures of equal dimension.
///
/// # Safety
/// Handles must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn capflow_bl_distance(a: *const CapflowMeasure, b: *const CapflowMeasure, out: *mut f64) -> i32 {
    guard(|| {
        nonnull(out, "out")?;
        *out = bl_distance(measure_ref(a)?, measure_ref(b)?)?;
        Ok(())
    })
}

/// Resistance of a convex function given as a function document. `panels`
/// of 0 selects the exact evaluation, otherwise Gauss quadrature.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn capflow_newton_resistance(json: *const c_char, panels: usize, out: *mut f64) -> i32 {
    guard(|| {
        nonnull(out, "out")?;
        let f = io::parse_function(text(json, "json")?)?;
        let method = if panels == 0 { Method::Exact } else { Method::Quadrature { panels } };
        *out = resistance(&f, method)?;
        Ok(())
    })
}
