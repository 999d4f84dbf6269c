//! C interface to the margin-bounds library.
//!
//! Every function returns an [`MbStatus`]. On failure the message is kept in
//! a thread-local slot readable with [`mb_last_error_message`]. Classes are
//! opaque [`MbClass`] handles released with [`mb_class_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use margin_bounds::bounds::{rademacher_bound, BoundParams};
use margin_bounds::capacity::{
    covering_number_capped, fat_shattering_dim, packing_number_capped, rademacher_mc, LpNorm, Mode,
};
use margin_bounds::combinatorics::k_p;
use margin_bounds::function_class::truncate_class;
use margin_bounds::io::load_class_file;
use margin_bounds::{Error, TabulatedClass};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidClass = 3,
    CapExceeded = 4,
    Precondition = 5,
    Regime = 6,
    Io = 7,
    Format = 8,
    Panic = 9,
}

/// An immutable tabulated function class.
pub struct MbClass(TabulatedClass);

/// Inputs of [`mb_rademacher_bound`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MbBoundParams {
    pub c_categories: u64,
    pub sample_size: f64,
    pub gamma: f64,
    pub delta: f64,
    pub m_g: f64,
    pub k_g: f64,
    pub d_g: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut buf = e.borrow_mut();
        buf.clear();
        buf.extend(msg.bytes().filter(|&b| b != 0));
    });
}

fn status_of(e: &Error) -> MbStatus {
    match e {
        Error::InvalidClass(_) | Error::InvalidDataset(_) | Error::NotSeparated { .. } => MbStatus::InvalidClass,
        Error::OutOfRange { .. } => MbStatus::InvalidArgument,
        Error::CapExceeded { .. } => MbStatus::CapExceeded,
        Error::Precondition(_) => MbStatus::Precondition,
        Error::Regime(_) => MbStatus::Regime,
        Error::Io(_) => MbStatus::Io,
        Error::Format(_) => MbStatus::Format,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> MbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            MbStatus::Ok
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            MbStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            MbStatus::Panic
        }
    }
}

unsafe fn class_ref<'a>(class: *const MbClass) -> Result<&'a TabulatedClass, Fail> {
    class.as_ref().map(|c| &c.0).ok_or(Fail::Null("class"))
}

unsafe fn write<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(value);
    Ok(())
}

fn lp(p: f64) -> Result<LpNorm, Fail> {
    if p == f64::INFINITY {
        Ok(LpNorm::INFINITY)
    } else {
        Ok(LpNorm::new(p)?)
    }
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len - 1` bytes) and returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn mb_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            buf.add(n).write(0);
        }
        msg.len()
    })
}

/// Static NUL-terminated version string.
#[no_mangle]
pub extern "C" fn mb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"), "\0")
        .as_ptr()
        .cast()
}

/// Builds a class from `n_functions * n_points` row-major values.
///
/// # Safety
/// `values` must point to `n_functions * n_points` readable doubles and
/// `out` to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn mb_class_new(
    values: *const f64,
    n_functions: usize,
    n_points: usize,
    m_bound: f64,
    out: *mut *mut MbClass,
) -> MbStatus {
    guard(|| {
        if values.is_null() {
            return Err(Fail::Null("values"));
        }
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let total = n_functions
            .checked_mul(n_points)
            .ok_or(Fail::Lib(Error::InvalidClass("table size overflows".into())))?;
        let flat = std::slice::from_raw_parts(values, total);
        let rows = if n_points == 0 {
            vec![Vec::new(); n_functions]
        } else {
            flat.chunks(n_points).map(<[f64]>::to_vec).collect()
        };
        let class = TabulatedClass::new(rows, m_bound)?;
        write(out, Box::into_raw(Box::new(MbClass(class))), "out")
    })
}

/// Loads a class file; product classes are converted to their margin class.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn mb_class_from_file(path: *const c_char, out: *mut *mut MbClass) -> MbStatus {
    guard(|| {
        if path.is_null() {
            return Err(Fail::Null("path"));
        }
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let text = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Fail::Lib(Error::Io("path is not UTF-8".into())))?;
        let class = load_class_file(Path::new(text))?.margins()?;
        write(out, Box::into_raw(Box::new(MbClass(class))), "out")
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `class` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mb_class_free(class: *mut MbClass) {
    if !class.is_null() {
        drop(Box::from_raw(class));
    }
}

/// Number of distinct functions and of points.
///
/// # Safety
/// `class` must be a live handle; the outputs writable.
#[no_mangle]
pub unsafe extern "C" fn mb_class_shape(
    class: *const MbClass,
    n_functions: *mut usize,
    n_points: *mut usize,
) -> MbStatus {
    guard(|| {
        let f = class_ref(class)?;
        write(n_functions, f.len(), "n_functions")?;
        write(n_points, f.n_points(), "n_points")
    })
}

/// Clips every entry into `[0, gamma]` as a new handle.
///
/// # Safety
/// `class` must be a live handle and `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn mb_class_truncate(class: *const MbClass, gamma: f64, out: *mut *mut MbClass) -> MbStatus {
    guard(|| {
        let f = class_ref(class)?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let t = truncate_class(f, gamma)?;
        write(out, Box::into_raw(Box::new(MbClass(t))), "out")
    })
}

/// `N(epsilon, F, d_p)`; `p` may be `INFINITY`. With `exact` false a greedy
/// upper bound is returned.
///
/// # Safety
/// `class` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_covering_number(
    class: *const MbClass,
    epsilon: f64,
    p: f64,
    exact: bool,
    cap: usize,
    out: *mut usize,
) -> MbStatus {
    guard(|| {
        let f = class_ref(class)?;
        let mode = if exact { Mode::Exact } else { Mode::Greedy };
        let n = covering_number_capped(f, epsilon, lp(p)?, mode, cap)?.as_count();
        write(out, n, "out")
    })
}

/// `M(epsilon, F, d_p)`; with `exact` false a greedy lower bound.
///
/// # Safety
/// `class` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_packing_number(
    class: *const MbClass,
    epsilon: f64,
    p: f64,
    exact: bool,
    cap: usize,
    out: *mut usize,
) -> MbStatus {
    guard(|| {
        let f = class_ref(class)?;
        let mode = if exact { Mode::Exact } else { Mode::Greedy };
        let n = packing_number_capped(f, epsilon, lp(p)?, mode, cap)?.as_count();
        write(out, n, "out")
    })
}

/// Monte Carlo empirical Rademacher complexity and its standard error.
///
/// # Safety
/// `class` must be a live handle; the outputs writable.
#[no_mangle]
pub unsafe extern "C" fn mb_rademacher(
    class: *const MbClass,
    trials: usize,
    seed: u64,
    value: *mut f64,
    stderr: *mut f64,
) -> MbStatus {
    guard(|| {
        let f = class_ref(class)?;
        let est = rademacher_mc(f, trials, seed)?;
        write(value, est.value, "value")?;
        write(stderr, est.stderr, "stderr")
    })
}

/// Exact `gamma`-dim.
///
/// # Safety
/// `class` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_fat_shattering_dim(class: *const MbClass, gamma: f64, out: *mut usize) -> MbStatus {
    guard(|| {
        let f = class_ref(class)?;
        write(out, fat_shattering_dim(f, gamma)?, "out")
    })
}

/// `K_p = sum_k k^p / 2^k` for `3 <= p <= 64`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mb_k_p(p: u32, out: *mut f64) -> MbStatus {
    guard(|| write(out, k_p(p)?.value, "out"))
}

/// The Rademacher complexity bound; an inadmissible sample size yields
/// `MB_STATUS_REGIME`.
///
/// # Safety
/// `params` must be readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_rademacher_bound(params: *const MbBoundParams, out: *mut f64) -> MbStatus {
    guard(|| {
        let q = params.as_ref().ok_or(Fail::Null("params"))?;
        let bp = BoundParams::new(q.c_categories, q.sample_size, q.gamma, q.delta, q.m_g, q.k_g, q.d_g)?;
        write(out, rademacher_bound(&bp)?.value, "out")
    })
}
