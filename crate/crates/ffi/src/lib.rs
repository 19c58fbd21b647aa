//! C ABI over `rimix`.
//!
//! Functions return a [`RimixStatus`] and write results through out
//! pointers. Step functions, grids and spaces are opaque handles created by
//! `*_new`/`*_parse` and released with the matching `*_free`. After a
//! non-OK status, [`rimix_last_error`] describes the failure on the calling
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rimix::embed::{fournier_check, optimal_range_norm};
use rimix::error::Error;
use rimix::kfun::{k_exact, CoupleSpec};
use rimix::mixed::{mixed_norm, GridFn, MixedSpaceSpec};
use rimix::space::{ri_norm, RiSpaceSpec};
use rimix::step::StepFn;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RimixStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidStep = 3,
    InvalidGrid = 4,
    InvalidSpace = 5,
    Domain = 6,
    Unsupported = 7,
    Precondition = 8,
    Parse = 9,
    Internal = 10,
    Panic = 11,
}

/// Step function on `(0, length)`.
pub struct RimixStep(StepFn);

/// Grid function on the unit cube.
pub struct RimixGrid(GridFn);

/// Rearrangement-invariant space.
pub struct RimixSpace(RiSpaceSpec);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> RimixStatus {
    match e {
        Error::InvalidStep(_) => RimixStatus::InvalidStep,
        Error::InvalidGrid(_) => RimixStatus::InvalidGrid,
        Error::InvalidSpace(_) => RimixStatus::InvalidSpace,
        Error::Domain(_) => RimixStatus::Domain,
        Error::Unsupported(_) => RimixStatus::Unsupported,
        Error::Precondition(_) => RimixStatus::Precondition,
        Error::Parse(_) => RimixStatus::Parse,
        Error::Contract(_) | Error::Io(_) => RimixStatus::Internal,
    }
}

struct Fail(RimixStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RimixStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RimixStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            RimixStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(RimixStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(RimixStatus::NullPointer, format!("{what} is null")))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail(RimixStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn string<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(RimixStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(RimixStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message for the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rimix_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rimix_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Step function with pieces `(ends[i-1], ends[i])` of value `values[i]`.
///
/// # Safety
/// `ends` and `values` must point to `len` readable doubles; `out_step` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rimix_step_new(
    length: f64,
    ends: *const f64,
    values: *const f64,
    len: usize,
    out_step: *mut *mut RimixStep,
) -> RimixStatus {
    guard(|| {
        let dst = out(out_step, "out_step")?;
        let f = StepFn::new(length, slice(ends, len, "ends")?.to_vec(), slice(values, len, "values")?.to_vec())?;
        *dst = boxed(RimixStep(f));
        Ok(())
    })
}

/// Step function from its JSON file format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_step` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rimix_step_from_json(json: *const c_char, out_step: *mut *mut RimixStep) -> RimixStatus {
    guard(|| {
        let dst = out(out_step, "out_step")?;
        let f: StepFn = serde_json::from_str(string(json, "json")?).map_err(Error::from)?;
        *dst = boxed(RimixStep(f));
        Ok(())
    })
}

/// # Safety
/// `step` must come from a `rimix_step_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rimix_step_free(step: *mut RimixStep) {
    if !step.is_null() {
        drop(Box::from_raw(step));
    }
}

/// Grid with `cells^n` values in row-major order.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out_grid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rimix_grid_new(
    n: usize,
    cells: usize,
    values: *const f64,
    len: usize,
    out_grid: *mut *mut RimixGrid,
) -> RimixStatus {
    guard(|| {
        let dst = out(out_grid, "out_grid")?;
        let g = GridFn::new(n, cells, slice(values, len, "values")?.to_vec())?;
        *dst = boxed(RimixGrid(g));
        Ok(())
    })
}

/// Grid from its JSON file format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_grid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rimix_grid_from_json(json: *const c_char, out_grid: *mut *mut RimixGrid) -> RimixStatus {
    guard(|| {
        let dst = out(out_grid, "out_grid")?;
        let g: GridFn = serde_json::from_str(string(json, "json")?).map_err(Error::from)?;
        *dst = boxed(RimixGrid(g));
        Ok(())
    })
}

/// # Safety
/// `grid` must come from a `rimix_grid_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rimix_grid_free(grid: *mut RimixGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Parses a space such as `"L1"`, `"Lp:2"`, `"Lpq:2,1"` or `"Lambda:sqrt"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out_space` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rimix_space_parse(spec: *const c_char, out_space: *mut *mut RimixSpace) -> RimixStatus {
    guard(|| {
        let dst = out(out_space, "out_space")?;
        let x: RiSpaceSpec = string(spec, "spec")?.parse()?;
        *dst = boxed(RimixSpace(x));
        Ok(())
    })
}

/// # Safety
/// `space` must come from [`rimix_space_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rimix_space_free(space: *mut RimixSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// `‖f‖_X`.
///
/// # Safety
/// Handles must be live; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rimix_ri_norm(
    space: *const RimixSpace,
    step: *const RimixStep,
    out_value: *mut f64,
) -> RimixStatus {
    guard(|| {
        let x = deref(space, "space")?;
        let f = deref(step, "step")?;
        *out(out_value, "out_value")? = ri_norm(&x.0, &f.0);
        Ok(())
    })
}

/// `‖f‖_{R(X,Y)}`, summed over all axes when `axis < 0`.
///
/// # Safety
/// Handles must be live; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rimix_mixed_norm(
    grid: *const RimixGrid,
    x: *const RimixSpace,
    y: *const RimixSpace,
    axis: i32,
    out_value: *mut f64,
) -> RimixStatus {
    guard(|| {
        let g = deref(grid, "grid")?;
        let (x, y) = (deref(x, "x")?.0, deref(y, "y")?.0);
        let spec = if axis < 0 {
            MixedSpaceSpec::symmetric(x, y)
        } else {
            MixedSpaceSpec::single(x, y, axis as usize)
        };
        *out(out_value, "out_value")? = mixed_norm(&g.0, &spec)?;
        Ok(())
    })
}

/// `K(f, t; X, L^∞)` for a step function.
///
/// # Safety
/// Handles must be live; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rimix_k_step(
    step: *const RimixStep,
    x: *const RimixSpace,
    t: f64,
    out_value: *mut f64,
) -> RimixStatus {
    guard(|| {
        let f = deref(step, "step")?;
        let couple = CoupleSpec::RiLinf { x: deref(x, "x")?.0 };
        *out(out_value, "out_value")? = k_exact(&f.0, t, &couple)?.0;
        Ok(())
    })
}

/// `K(f, t; R(X,L^∞), L^∞)` for a grid.
///
/// # Safety
/// Handles must be live; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rimix_k_grid(
    grid: *const RimixGrid,
    x: *const RimixSpace,
    t: f64,
    out_value: *mut f64,
) -> RimixStatus {
    guard(|| {
        let g = deref(grid, "grid")?;
        let couple = CoupleSpec::MixedLinf { x: deref(x, "x")?.0 };
        *out(out_value, "out_value")? = k_exact(&g.0, t, &couple)?.0;
        Ok(())
    })
}

/// Norm of `f` in the optimal r.i. range of `R(X,L^∞)` in dimension `n`.
///
/// # Safety
/// Handles must be live; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rimix_optimal_range(
    x: *const RimixSpace,
    n: usize,
    step: *const RimixStep,
    out_value: *mut f64,
) -> RimixStatus {
    guard(|| {
        let x = deref(x, "x")?;
        let f = deref(step, "step")?;
        *out(out_value, "out_value")? = optimal_range_norm(&x.0, n, &f.0)?;
        Ok(())
    })
}

/// `‖f‖_{L^{n',1}}`, `‖f‖_{R(L1,L^∞)}` and their ratio, written to `out3[0..3]`.
///
/// # Safety
/// `grid` must be live; `out3` must point to 3 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn rimix_fournier(grid: *const RimixGrid, out3: *mut f64) -> RimixStatus {
    guard(|| {
        let g = deref(grid, "grid")?;
        if out3.is_null() {
            return Err(Fail(RimixStatus::NullPointer, "out3 is null".into()));
        }
        let (l, m, r) = fournier_check(&g.0)?;
        ptr::copy_nonoverlapping([l, m, r].as_ptr(), out3, 3);
        Ok(())
    })
}
