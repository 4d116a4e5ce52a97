//! C ABI over the disco core. Matrices cross the boundary as opaque handles
//! owned by Rust; every fallible call returns a status code and leaves a
//! message retrievable with disco_last_error. Buffers are always allocated
//! by the caller.

use std::cell::RefCell;
use std::ffi::CStr;
use std::os::raw::c_char;

use disco::ensembles::{self, EnsembleSpec};
use disco::experiments::{empirical_moment, run_counterexample, sample_trial_matrix};
use disco::limits::limit_moment_disco;
use disco::matrix::SymmetricMatrix;
use disco::Error;
use num_traits::ToPrimitive;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NumericalError = 3,
}

/// Opaque dense symmetric matrix handle; release with disco_matrix_free.
pub struct DiscoMatrix {
    inner: SymmetricMatrix<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(err: &Error) -> DiscoStatus {
    match err {
        Error::Config(_) => DiscoStatus::InvalidArgument,
        _ => DiscoStatus::NumericalError,
    }
}

fn fail(err: Error) -> DiscoStatus {
    let s = status_of(&err);
    set_error(err.to_string());
    s
}

fn null_arg(what: &str) -> DiscoStatus {
    set_error(format!("null pointer: {what}"));
    DiscoStatus::NullPointer
}

/// Copies the message of the most recent failure on this thread into `buf`
/// (NUL-terminated, truncated to `len` bytes) and returns the full message
/// length in bytes, excluding the terminator. `buf` may be null to query the
/// length alone.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn disco_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

unsafe fn parse_spec(
    ensemble: *const c_char,
    order: usize,
    seed: u64,
) -> Result<EnsembleSpec, DiscoStatus> {
    if ensemble.is_null() {
        return Err(null_arg("ensemble"));
    }
    let token = CStr::from_ptr(ensemble)
        .to_str()
        .map_err(|_| {
            set_error("ensemble token is not valid UTF-8");
            DiscoStatus::InvalidArgument
        })?;
    EnsembleSpec::parse(token, order, seed).map_err(fail)
}

/// Draws one matrix of a seeded ensemble. `ensemble` uses the CLI grammar
/// (`pst`, `wigner`, `blockcirc:<m>`, `counterexample`); `stream` selects the
/// independent sub-stream of the root seed.
///
/// # Safety
/// `ensemble` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn disco_matrix_sample(
    ensemble: *const c_char,
    order: usize,
    seed: u64,
    stream: u64,
    out: *mut *mut DiscoMatrix,
) -> DiscoStatus {
    if out.is_null() {
        return null_arg("out");
    }
    let spec = match parse_spec(ensemble, order, seed) {
        Ok(s) => s,
        Err(status) => return status,
    };
    match ensembles::sample(&spec.with_stream(stream)) {
        Ok(m) => {
            *out = Box::into_raw(Box::new(DiscoMatrix { inner: m }));
            DiscoStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Draws a base matrix and stacks `depth` doubling Wigner blocks on it, the
/// same construction the experiments measure. The result has order
/// `order << depth`. `trial` selects the trial-local stream block.
///
/// # Safety
/// `ensemble` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn disco_matrix_build(
    ensemble: *const c_char,
    order: usize,
    seed: u64,
    depth: usize,
    trial: u64,
    out: *mut *mut DiscoMatrix,
) -> DiscoStatus {
    if out.is_null() {
        return null_arg("out");
    }
    let spec = match parse_spec(ensemble, order, seed) {
        Ok(s) => s,
        Err(status) => return status,
    };
    if let Err(e) = spec.validate() {
        return fail(e);
    }
    match sample_trial_matrix(&spec, depth, trial) {
        Ok(m) => {
            *out = Box::into_raw(Box::new(DiscoMatrix { inner: m }));
            DiscoStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Order of the matrix behind the handle; 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn disco_matrix_order(m: *const DiscoMatrix) -> usize {
    if m.is_null() {
        0
    } else {
        (*m).inner.order()
    }
}

/// Reads entry (i, j).
///
/// # Safety
/// `m` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn disco_matrix_entry(
    m: *const DiscoMatrix,
    i: usize,
    j: usize,
    out: *mut f64,
) -> DiscoStatus {
    if m.is_null() || out.is_null() {
        return null_arg("matrix or out");
    }
    let n = (*m).inner.order();
    if i >= n || j >= n {
        set_error(format!("index ({i}, {j}) out of range for order {n}"));
        return DiscoStatus::InvalidArgument;
    }
    *out = *(*m).inner.get(i, j);
    DiscoStatus::Ok
}

/// Tr(M^k) for k >= 1.
///
/// # Safety
/// `m` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn disco_matrix_trace_power(
    m: *const DiscoMatrix,
    k: usize,
    out: *mut f64,
) -> DiscoStatus {
    if m.is_null() || out.is_null() {
        return null_arg("matrix or out");
    }
    match (*m).inner.trace_power(k) {
        Ok(t) => {
            *out = t;
            DiscoStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// h-th empirical moment (1/n) Tr((M/normalization)^h).
///
/// # Safety
/// `m` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn disco_matrix_moment(
    m: *const DiscoMatrix,
    h: usize,
    normalization: f64,
    out: *mut f64,
) -> DiscoStatus {
    if m.is_null() || out.is_null() {
        return null_arg("matrix or out");
    }
    match empirical_moment(&(*m).inner, h, normalization) {
        Ok(v) => {
            *out = v;
            DiscoStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Writes the ascending spectrum into `buf`; `len` must be at least the
/// matrix order.
///
/// # Safety
/// `m` must be a live handle, `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn disco_matrix_eigenvalues(
    m: *const DiscoMatrix,
    buf: *mut f64,
    len: usize,
) -> DiscoStatus {
    if m.is_null() || buf.is_null() {
        return null_arg("matrix or buf");
    }
    let n = (*m).inner.order();
    if len < n {
        set_error(format!("buffer of {len} too small for order {n}"));
        return DiscoStatus::InvalidArgument;
    }
    match disco::eigen::eigenvalues_sym(&(*m).inner) {
        Ok(eigs) => {
            std::ptr::copy_nonoverlapping(eigs.as_ptr(), buf, n);
            DiscoStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Releases a handle; a null argument is a no-op.
///
/// # Safety
/// `m` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn disco_matrix_free(m: *mut DiscoMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Exact limiting 2k-th moment of the depth-d construction, as a double.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn disco_limit_moment(
    depth: usize,
    two_k: usize,
    out: *mut f64,
) -> DiscoStatus {
    if out.is_null() {
        return null_arg("out");
    }
    match limit_moment_disco(depth, two_k) {
        Ok(r) => {
            *out = r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN);
            DiscoStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Exact limiting moment as a reduced fraction. Fails with
/// INVALID_ARGUMENT when either part overflows 64 bits.
///
/// # Safety
/// `num` and `den` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn disco_limit_moment_rational(
    depth: usize,
    two_k: usize,
    num: *mut i64,
    den: *mut i64,
) -> DiscoStatus {
    if num.is_null() || den.is_null() {
        return null_arg("num or den");
    }
    let r = match limit_moment_disco(depth, two_k) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => {
            *num = n;
            *den = d;
            DiscoStatus::Ok
        }
        _ => {
            set_error(format!("{r} does not fit a 64-bit fraction"));
            DiscoStatus::InvalidArgument
        }
    }
}

/// The exact fourth-power traces of the 20x20 sandwich counterexample:
/// Tr(A^4), Tr(B^4) and the normalized middle quantity that exceeds both.
///
/// # Safety
/// All three pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn disco_counterexample_traces(
    trace_a4: *mut i64,
    trace_b4: *mut i64,
    normalized: *mut i64,
) -> DiscoStatus {
    if trace_a4.is_null() || trace_b4.is_null() || normalized.is_null() {
        return null_arg("trace_a4, trace_b4 or normalized");
    }
    let rep = match run_counterexample() {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    // the three integers are ~1e9..1e10, comfortably inside i64
    *trace_a4 = rep.trace_a4.to_i64().expect("fits i64");
    *trace_b4 = rep.trace_b4.to_i64().expect("fits i64");
    *normalized = rep.normalized_disco.to_i64().expect("fits i64");
    DiscoStatus::Ok
}

/// Independent generator draws behind one sample of the ensemble.
///
/// # Safety
/// `ensemble` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn disco_degrees_of_freedom(
    ensemble: *const c_char,
    order: usize,
    out: *mut usize,
) -> DiscoStatus {
    if out.is_null() {
        return null_arg("out");
    }
    let spec = match parse_spec(ensemble, order, 0) {
        Ok(s) => s,
        Err(status) => return status,
    };
    if let Err(e) = spec.validate() {
        return fail(e);
    }
    *out = spec.degrees_of_freedom();
    DiscoStatus::Ok
}
