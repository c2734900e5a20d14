//! C ABI over `jackson-approx`.
//!
//! Spaces, kernels and operators are opaque heap handles released with their
//! `*_free` function. Every fallible call returns a status code (`JA_OK` on
//! success) and writes results through out-pointers; on failure the message
//! is kept per thread and read back with [`ja_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use jackson_approx::jackson::{lemma51_constant, make_jackson, moment, multipliers, normalization};
use jackson_approx::kernels::{example_kernel, hoelder_modulus, kernel_eval, ZonalKernelSpec};
use jackson_approx::operators::{apply_phi, approx_numbers, op_norm_diff, operator_from_kernel, sqrt_op};
use jackson_approx::quadrature::QuadratureRule;
use jackson_approx::spaces::{choose_q, space_params, weight_alpha, Family};
use jackson_approx::{DiagonalOperator, Error, SpaceParams};

pub const JA_OK: i32 = 0;
pub const JA_ERR_NULL: i32 = 1;
pub const JA_ERR_DOMAIN: i32 = 2;
pub const JA_ERR_NON_FINITE: i32 = 3;
pub const JA_ERR_UNDER_RESOLVED: i32 = 4;
pub const JA_ERR_LAYOUT: i32 = 5;
pub const JA_ERR_PARSE: i32 = 6;
pub const JA_ERR_NUMERIC: i32 = 7;
pub const JA_ERR_BUFFER: i32 = 8;
pub const JA_ERR_PANIC: i32 = 9;

/// A two-point homogeneous space.
pub struct JaSpace(SpaceParams);

/// A zonal kernel given by its eigenvalue sequence.
pub struct JaKernel(ZonalKernelSpec);

/// An operator diagonal in the harmonic basis.
pub struct JaOperator(DiagonalOperator);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn code_for(e: &Error) -> i32 {
    match e {
        Error::Domain(_) => JA_ERR_DOMAIN,
        Error::NonFinite { .. } => JA_ERR_NON_FINITE,
        Error::UnderResolved { .. } => JA_ERR_UNDER_RESOLVED,
        Error::LayoutMismatch(_) => JA_ERR_LAYOUT,
        Error::Parse(_) => JA_ERR_PARSE,
        _ => JA_ERR_NUMERIC,
    }
}

enum Fail {
    Null(&'static str),
    Buffer(String),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => JA_OK,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            JA_ERR_NULL
        }
        Ok(Err(Fail::Buffer(msg))) => {
            set_error(msg);
            JA_ERR_BUFFER
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            code_for(&e)
        }
        Err(_) => {
            set_error("panic inside jackson-approx".into());
            JA_ERR_PANIC
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn fill(buf: *mut f64, len: usize, values: &[f64]) -> Result<(), Fail> {
    if values.len() > len {
        return Err(Fail::Buffer(format!("buffer holds {len} values, need {}", values.len())));
    }
    if values.is_empty() {
        return Ok(());
    }
    if buf.is_null() {
        return Err(Fail::Null("buffer"));
    }
    slice::from_raw_parts_mut(buf, values.len()).copy_from_slice(values);
    Ok(())
}

unsafe fn c_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Core(Error::Parse(format!("{what} is not valid UTF-8"))))
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length plus one,
/// or 0 when no error has been recorded.
///
/// # Safety
/// `buf` must be valid for `len` bytes, or null with `len == 0`.
#[no_mangle]
pub unsafe extern "C" fn ja_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes_with_nul();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len);
                ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
                *buf.add(n - 1) = 0;
            }
            bytes.len()
        }
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ja_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

// --- spaces -----------------------------------------------------------------

/// `family` is one of `sphere`, `real_projective`, `complex_projective`,
/// `quaternionic_projective`, `cayley_plane` (or `s`, `rp`, `cp`, `hp`, `op`).
///
/// # Safety
/// `family` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ja_space_new(family: *const c_char, m: u32, out: *mut *mut JaSpace) -> i32 {
    guard(|| {
        let fam: Family = c_str(family, "family")?.parse()?;
        let space = space_params(fam, m)?;
        put(out, Box::into_raw(Box::new(JaSpace(space))), "out")
    })
}

/// # Safety
/// `space` must come from `ja_space_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ja_space_free(space: *mut JaSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Dimension of the degree-`n` eigenspace, saturating at `u64::MAX`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ja_space_harmonic_dim(space: *const JaSpace, n: u64, out: *mut u64) -> i32 {
    guard(|| {
        let s = get(space, "space")?;
        put(out, u64::try_from(s.0.harmonic_dim(n)).unwrap_or(u64::MAX), "out")
    })
}

/// Weight `sin(t/2)^a sin(t)^b` for `t` in `(0, pi)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ja_space_weight(space: *const JaSpace, t: f64, out: *mut f64) -> i32 {
    guard(|| {
        let s = get(space, "space")?;
        put(out, weight_alpha(&s.0, t)?, "out")
    })
}

/// Smallest `q` with `d_n <= (q n)^m` for `1 <= n <= n_max`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ja_space_choose_q(space: *const JaSpace, n_max: u64, out: *mut u64) -> i32 {
    guard(|| {
        let s = get(space, "space")?;
        put(out, choose_q(&s.0, n_max)?, "out")
    })
}

// --- Jackson kernels ----------------------------------------------------------

/// Normalizer `k_nu` and degree `nu = l (mu - 1)` of the Jackson kernel.
///
/// # Safety
/// Pointers must be valid; `out_nu` may be null.
#[no_mangle]
pub unsafe extern "C" fn ja_jackson_normalizer(
    space: *const JaSpace,
    l: u32,
    mu: u32,
    out_k: *mut f64,
    out_nu: *mut u32,
) -> i32 {
    guard(|| {
        let s = get(space, "space")?;
        let rule = QuadratureRule::for_jackson(mu as usize, l as usize, 0);
        let jp = make_jackson(&s.0, l, mu, &rule)?;
        if !out_nu.is_null() {
            out_nu.write(jp.nu);
        }
        put(out_k, jp.k_nu, "out_k")
    })
}

/// Mass of the normalized kernel against the weight, on a finer rule.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ja_jackson_mass(space: *const JaSpace, l: u32, mu: u32, out: *mut f64) -> i32 {
    guard(|| {
        let s = get(space, "space")?;
        let rule = QuadratureRule::for_jackson(mu as usize, l as usize, 0);
        let jp = make_jackson(&s.0, l, mu, &rule)?;
        put(out, normalization(&jp, &rule.refined())?, "out")
    })
}

/// `J(mu) = int D_nu t^gamma alpha dt`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ja_jackson_moment(space: *const JaSpace, l: u32, mu: u32, gamma: f64, out: *mut f64) -> i32 {
    guard(|| {
        let s = get(space, "space")?;
        let rule = QuadratureRule::for_jackson(mu as usize, l as usize, 0);
        let jp = make_jackson(&s.0, l, mu, &rule)?;
        put(out, moment(&jp, gamma, &rule)?, "out")
    })
}

/// Writes `m_nu(0..=n_max)` into `buf`, which must hold `n_max + 1` values.
///
/// # Safety
/// `buf` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ja_jackson_multipliers(
    space: *const JaSpace,
    l: u32,
    mu: u32,
    n_max: usize,
    buf: *mut f64,
    len: usize,
) -> i32 {
    guard(|| {
        let s = get(space, "space")?;
        let rule = QuadratureRule::for_jackson(mu as usize, l as usize, n_max);
        let jp = make_jackson(&s.0, l, mu, &rule)?;
        let ms = multipliers(&jp, n_max, &rule)?;
        fill(buf, len, &ms.values)
    })
}

/// The moment-bound constant `c_{m,gamma,l}`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ja_moment_constant(m: u32, gamma: f64, l: u32, out: *mut f64) -> i32 {
    guard(|| put(out, lemma51_constant(m, gamma, l)?, "out"))
}

// --- kernels ------------------------------------------------------------------

/// Example kernel on `S^m`: `lambda_0 = tau_m`, `lambda_n = n^-(2m+beta-2)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ja_kernel_example(m: u32, beta: f64, n_trunc: usize, out: *mut *mut JaKernel) -> i32 {
    guard(|| {
        let k = example_kernel(m, beta, n_trunc)?;
        put(out, Box::into_raw(Box::new(JaKernel(k))), "out")
    })
}

/// Kernel with eigenvalues `coeffs[0..len]` on `space`.
///
/// # Safety
/// `coeffs` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ja_kernel_from_coeffs(
    space: *const JaSpace,
    coeffs: *const f64,
    len: usize,
    out: *mut *mut JaKernel,
) -> i32 {
    guard(|| {
        let s = get(space, "space")?;
        if len == 0 {
            return Err(Error::Domain("a kernel needs at least one coefficient".into()).into());
        }
        if coeffs.is_null() {
            return Err(Fail::Null("coeffs"));
        }
        let c = slice::from_raw_parts(coeffs, len).to_vec();
        let k = ZonalKernelSpec::new(s.0, c, None)?;
        put(out, Box::into_raw(Box::new(JaKernel(k))), "out")
    })
}

/// Parses a `key = value` kernel description.
///
/// # Safety
/// `text` must be NUL terminated.
#[no_mangle]
pub unsafe extern "C" fn ja_kernel_from_kv(text: *const c_char, out: *mut *mut JaKernel) -> i32 {
    guard(|| {
        let k = ZonalKernelSpec::from_kv_str(c_str(text, "text")?)?;
        put(out, Box::into_raw(Box::new(JaKernel(k))), "out")
    })
}

/// # Safety
/// `kernel` must come from a `ja_kernel_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ja_kernel_free(kernel: *mut JaKernel) {
    if !kernel.is_null() {
        drop(Box::from_raw(kernel));
    }
}

/// `K` at points with `cos(distance) = cos_theta`; `out_tail` (optional)
/// receives the truncation tail bound.
///
/// # Safety
/// Pointers must be valid; `out_tail` may be null.
#[no_mangle]
pub unsafe extern "C" fn ja_kernel_eval(
    kernel: *const JaKernel,
    cos_theta: f64,
    out_value: *mut f64,
    out_tail: *mut f64,
) -> i32 {
    guard(|| {
        let k = get(kernel, "kernel")?;
        if !(-1.0..=1.0).contains(&cos_theta) {
            return Err(Error::Domain(format!("cos_theta = {cos_theta} outside [-1, 1]")).into());
        }
        let v = kernel_eval(&k.0, cos_theta);
        if !out_tail.is_null() {
            out_tail.write(v.tail_bound);
        }
        put(out_value, v.value, "out_value")
    })
}

/// Hoelder modulus `omega(t)` with the supremum over `u_grid` points.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ja_kernel_hoelder_modulus(
    kernel: *const JaKernel,
    t: f64,
    u_grid: usize,
    out: *mut f64,
) -> i32 {
    guard(|| {
        let k = get(kernel, "kernel")?;
        put(out, hoelder_modulus(&k.0, t, u_grid)?, "out")
    })
}

// --- operators ----------------------------------------------------------------

fn new_op(op: DiagonalOperator) -> *mut JaOperator {
    Box::into_raw(Box::new(JaOperator(op)))
}

/// The integral operator of `kernel`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ja_operator_from_kernel(kernel: *const JaKernel, out: *mut *mut JaOperator) -> i32 {
    guard(|| {
        let k = get(kernel, "kernel")?;
        put(out, new_op(operator_from_kernel(&k.0)), "out")
    })
}

/// Positive square root; fails on negative eigenvalues.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ja_operator_sqrt(op: *const JaOperator, out: *mut *mut JaOperator) -> i32 {
    guard(|| {
        let o = get(op, "op")?;
        put(out, new_op(sqrt_op(&o.0)?), "out")
    })
}

/// `Phi_nu` applied to `op`, with the Jackson kernel of parameters `(l, mu)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ja_operator_smooth(op: *const JaOperator, l: u32, mu: u32, out: *mut *mut JaOperator) -> i32 {
    guard(|| {
        let o = get(op, "op")?;
        let n_max = o.0.entries.len().saturating_sub(1);
        let rule = QuadratureRule::for_jackson(mu as usize, l as usize, n_max);
        let jp = make_jackson(&o.0.space, l, mu, &rule)?;
        let ms = multipliers(&jp, n_max, &rule)?;
        put(out, new_op(apply_phi(&o.0, &ms)), "out")
    })
}

/// # Safety
/// `op` must come from a `ja_operator_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ja_operator_free(op: *mut JaOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Operator norm.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ja_operator_norm(op: *const JaOperator, out: *mut f64) -> i32 {
    guard(|| {
        let o = get(op, "op")?;
        put(out, o.0.norm(), "out")
    })
}

/// `||a - b||` for operators on the same space and degree layout.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ja_operator_norm_diff(a: *const JaOperator, b: *const JaOperator, out: *mut f64) -> i32 {
    guard(|| {
        let (a, b) = (get(a, "a")?, get(b, "b")?);
        put(out, op_norm_diff(&a.0, &b.0)?, "out")
    })
}

/// Writes `a_1..a_{j_max}` into `buf`.
///
/// # Safety
/// `buf` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ja_operator_approx_numbers(op: *const JaOperator, j_max: usize, buf: *mut f64, len: usize) -> i32 {
    guard(|| {
        let o = get(op, "op")?;
        if j_max > len {
            return Err(Fail::Buffer(format!("buffer holds {len} values, need {j_max}")));
        }
        fill(buf, len, &approx_numbers(&o.0, j_max))
    })
}
