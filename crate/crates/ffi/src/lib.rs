//! C ABI for `liesolv`.
//!
//! Tensors are opaque handles created by [`liesolv_tensor_parse`] and released
//! with [`liesolv_tensor_free`]. Results are returned as JSON strings owned by
//! the caller and released with [`liesolv_string_free`]. On failure the
//! message for the current thread is available from [`liesolv_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use liesolv::classify::{classify, iso_decide, ClassifyError, Verdict};
use liesolv::frontend::parse_presentation;
use liesolv::frontend::report::{to_json, ClassifyReport, IsoReport};
use liesolv::frontend::Presentation;
use liesolv::StructureTensor;

/// Status codes; the first four match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiesolvStatus {
    Ok = 0,
    /// Not isomorphic, or not solvable.
    Negative = 1,
    InputError = 2,
    InternalError = 3,
    NullArgument = 4,
    Panic = 5,
}

/// Opaque handle to a validated structure tensor.
pub struct LiesolvTensor {
    inner: StructureTensor,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: LiesolvStatus, msg: impl Into<String>) -> LiesolvStatus {
    set_error(msg);
    status
}

fn classify_status(e: &ClassifyError) -> LiesolvStatus {
    match e {
        ClassifyError::Internal(_) => LiesolvStatus::InternalError,
        ClassifyError::NotSolvable => LiesolvStatus::Negative,
        _ => LiesolvStatus::InputError,
    }
}

fn guard(f: impl FnOnce() -> LiesolvStatus) -> LiesolvStatus {
    clear_error();
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(LiesolvStatus::Panic, "panic inside liesolv"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) {
    let c = CString::new(s).expect("JSON has no interior nul");
    *out = c.into_raw();
}

/// Parses a `.lie` presentation and validates it.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn liesolv_tensor_parse(text: *const c_char, out: *mut *mut LiesolvTensor) -> LiesolvStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(LiesolvStatus::NullArgument, "null argument");
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            return fail(LiesolvStatus::InputError, "input is not UTF-8");
        };
        let parsed = match parse_presentation(text) {
            Ok(p) => p,
            Err(e) => return fail(LiesolvStatus::InputError, e.to_string()),
        };
        match parsed.to_tensor() {
            Ok(t) => {
                *out = Box::into_raw(Box::new(LiesolvTensor { inner: t }));
                LiesolvStatus::Ok
            }
            Err(v) => fail(LiesolvStatus::InputError, format!("not a Lie algebra: {v}")),
        }
    })
}

/// Releases a tensor handle. Null is ignored.
///
/// # Safety
/// `t` must come from [`liesolv_tensor_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn liesolv_tensor_free(t: *mut LiesolvTensor) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Dimension of the algebra, or 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn liesolv_tensor_dim(t: *const LiesolvTensor) -> usize {
    t.as_ref().map_or(0, |t| t.inner.dim())
}

/// Renders the tensor back to a `.lie` presentation.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn liesolv_tensor_render(t: *const LiesolvTensor, out: *mut *mut c_char) -> LiesolvStatus {
    guard(|| {
        let Some(t) = t.as_ref() else {
            return fail(LiesolvStatus::NullArgument, "null tensor");
        };
        if out.is_null() {
            return fail(LiesolvStatus::NullArgument, "null output");
        }
        write_string(out, Presentation::from_tensor(&t.inner).render());
        LiesolvStatus::Ok
    })
}

/// Classifies the tensor and writes the JSON report to `out`.
///
/// Non-solvable input still produces a report, with status `Negative`.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn liesolv_classify_json(t: *const LiesolvTensor, out: *mut *mut c_char) -> LiesolvStatus {
    guard(|| {
        let Some(t) = t.as_ref() else {
            return fail(LiesolvStatus::NullArgument, "null tensor");
        };
        if out.is_null() {
            return fail(LiesolvStatus::NullArgument, "null output");
        }
        *out = ptr::null_mut();
        let verdict = match classify(&t.inner) {
            Ok(v) => v,
            Err(e) => return fail(classify_status(&e), e.to_string()),
        };
        let report = match ClassifyReport::new(&t.inner, &verdict) {
            Ok(r) => r,
            Err(e) => return fail(LiesolvStatus::InternalError, e.to_string()),
        };
        write_string(out, to_json(&report));
        match verdict {
            Verdict::Classified(_) => LiesolvStatus::Ok,
            Verdict::NotSolvable { .. } => LiesolvStatus::Negative,
        }
    })
}

/// Decides isomorphism and writes the JSON report to `out`. Returns `Ok`
/// when isomorphic and `Negative` when not.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn liesolv_iso_json(
    a: *const LiesolvTensor,
    b: *const LiesolvTensor,
    out: *mut *mut c_char,
) -> LiesolvStatus {
    guard(|| {
        let (Some(a), Some(b)) = (a.as_ref(), b.as_ref()) else {
            return fail(LiesolvStatus::NullArgument, "null tensor");
        };
        if out.is_null() {
            return fail(LiesolvStatus::NullArgument, "null output");
        }
        *out = ptr::null_mut();
        if a.inner.field() != b.inner.field() {
            return fail(LiesolvStatus::InputError, "algebras are over different fields");
        }
        let w = match iso_decide(&a.inner, &b.inner) {
            Ok(w) => w,
            Err(e) => return fail(classify_status(&e), e.to_string()),
        };
        write_string(out, to_json(&IsoReport::new(&a.inner, w.as_ref(), "classifier")));
        if w.is_some() {
            LiesolvStatus::Ok
        } else {
            LiesolvStatus::Negative
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn liesolv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The last error message on this thread, or null. Valid until the next
/// call into the library on the same thread.
#[no_mangle]
pub extern "C" fn liesolv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
