//! C ABI for the `fanmori` library.
//!
//! The surface is a conventional handle-based C API:
//!
//! * [`FmFan`] is an opaque handle to a parsed or built fan, created by
//!   `fm_fan_parse` or one of the `fm_fan_*` builders and released with
//!   `fm_fan_free`;
//! * every fallible function returns an [`FmStatus`] and writes results
//!   through out-pointers, so the status is never ambiguous;
//! * strings returned through `char **` out-parameters are NUL-terminated,
//!   heap-allocated, and owned by the caller, who must release them with
//!   `fm_string_free`;
//! * `fm_last_error_message` returns a human-readable description of the
//!   most recent failure on the calling thread;
//! * every entry point catches panics, so a defect in the library surfaces
//!   as [`FmStatus::Internal`] instead of undefined behaviour across the
//!   language boundary.
//!
//! The C header `include/fanmori.h` is generated from this file by the
//! build script.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fanmori::classify::{classify_contact, Verdict};
use fanmori::cli::{
    parse_fan, render_classification_json, render_classification_text, serialize_fan, EXIT_SYNTAX,
};
use fanmori::divisor::picard_rank;
use fanmori::fan::Fan;
use fanmori::{builders, Error};

/// Result code of every fallible call in this API.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FmStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A text argument was not valid UTF-8.
    Utf8 = 2,
    /// Fan text could not be decoded (malformed JSON, wrong shape, or
    /// non-integer coordinates).
    Syntax = 3,
    /// The decoded data does not describe a valid fan.
    InvalidFan = 4,
    /// The fan is valid but lacks a property the operation requires
    /// (smoothness, completeness, or projectivity).
    Precondition = 5,
    /// An argument was out of range for the operation.
    BadArgument = 6,
    /// The library detected an internal inconsistency or panicked.
    Internal = 7,
}

/// Outcome of the contact classification.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FmVerdict {
    /// The variety carries no contact structure.
    NotContact = 0,
    /// The variety is the projective space `P^{2n+1}`.
    ProjectiveSpace = 1,
    /// The variety is the projectivized tangent bundle of `(P^1)^{n+1}`.
    ProjectivizedTangentBundle = 2,
}

/// Opaque handle to a fan. Allocate with `fm_fan_parse` or a builder;
/// release with `fm_fan_free`.
pub struct FmFan {
    fan: Fan,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: FmStatus, message: &str) -> FmStatus {
    set_last_error(message);
    status
}

fn fail_core(err: Error) -> FmStatus {
    let status = match err {
        Error::InvalidFan(_) => FmStatus::InvalidFan,
        Error::NotSmooth | Error::NotComplete | Error::NotProjective => FmStatus::Precondition,
        Error::Internal(_) => FmStatus::Internal,
        _ => FmStatus::BadArgument,
    };
    set_last_error(&err.to_string());
    status
}

/// Run a body with a panic guard so unwinding never crosses the C boundary.
fn guarded(body: impl FnOnce() -> FmStatus) -> FmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(
            FmStatus::Internal,
            "library panicked; the handle may be in an inconsistent state",
        ),
    }
}

/// # Safety
/// `fan` must be NULL or a live handle from this library.
unsafe fn fan_ref<'a>(fan: *const FmFan) -> Result<&'a Fan, FmStatus> {
    match unsafe { fan.as_ref() } {
        Some(handle) => Ok(&handle.fan),
        None => Err(fail(FmStatus::NullPointer, "fan handle is NULL")),
    }
}

/// # Safety
/// `text` must be NULL or a NUL-terminated C string.
unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, FmStatus> {
    if text.is_null() {
        return Err(fail(FmStatus::NullPointer, "text argument is NULL"));
    }
    unsafe { CStr::from_ptr(text) }
        .to_str()
        .map_err(|_| fail(FmStatus::Utf8, "text argument is not valid UTF-8"))
}

/// # Safety
/// `out` must be NULL or valid for a single pointer write.
unsafe fn emit_fan(fan: Fan, out: *mut *mut FmFan) -> FmStatus {
    if out.is_null() {
        return fail(FmStatus::NullPointer, "out pointer is NULL");
    }
    unsafe { *out = Box::into_raw(Box::new(FmFan { fan })) };
    FmStatus::Ok
}

/// # Safety
/// `out` must be NULL or valid for a single pointer write.
unsafe fn emit_string(text: String, out: *mut *mut c_char) -> FmStatus {
    if out.is_null() {
        return fail(FmStatus::NullPointer, "out pointer is NULL");
    }
    match CString::new(text) {
        Ok(owned) => {
            unsafe { *out = owned.into_raw() };
            FmStatus::Ok
        }
        Err(_) => fail(
            FmStatus::Internal,
            "rendered text unexpectedly contained a NUL byte",
        ),
    }
}

/// # Safety
/// `out` must be NULL or valid for a single write of `T`.
unsafe fn emit_value<T>(value: T, out: *mut T) -> FmStatus {
    if out.is_null() {
        return fail(FmStatus::NullPointer, "out pointer is NULL");
    }
    unsafe { *out = value };
    FmStatus::Ok
}

/// Version of the library as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn fm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message describing the most recent failure on the calling thread, as a
/// NUL-terminated string. The pointer stays valid until the next failing
/// call on the same thread; do not free it. Returns an empty string if no
/// call has failed yet.
#[no_mangle]
pub extern "C" fn fm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `text` must be NULL or a pointer obtained from a `char **` out-parameter
/// of this library, released at most once.
#[no_mangle]
pub unsafe extern "C" fn fm_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}

/// Parse a fan from its textual (JSON) representation and return a new
/// handle through `out`.
///
/// The text must decode to an object with `rank`, `rays`, and `max_cones`
/// fields and must describe a valid fan: decoding failures return
/// `Syntax`, validation failures return `InvalidFan`.
///
/// # Safety
/// `text` must be a NUL-terminated C string and `out` valid for a single
/// pointer write.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_parse(text: *const c_char, out: *mut *mut FmFan) -> FmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(FmStatus::NullPointer, "out pointer is NULL");
        }
        let text = match unsafe { read_str(text) } {
            Ok(text) => text,
            Err(status) => return status,
        };
        match parse_fan(text) {
            Ok(fan) => unsafe { emit_fan(fan, out) },
            Err(err) => {
                let status = if err.exit_code == EXIT_SYNTAX {
                    FmStatus::Syntax
                } else {
                    FmStatus::InvalidFan
                };
                fail(status, &err.message)
            }
        }
    })
}

/// Release a fan handle. NULL is ignored.
///
/// # Safety
/// `fan` must be NULL or a handle from this library, released at most once.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_free(fan: *mut FmFan) {
    if !fan.is_null() {
        drop(unsafe { Box::from_raw(fan) });
    }
}

/// Build the fan of the projective space `P^dim` (`dim >= 1`).
///
/// # Safety
/// `out` must be valid for a single pointer write.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_projective_space(dim: usize, out: *mut *mut FmFan) -> FmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(FmStatus::NullPointer, "out pointer is NULL");
        }
        match builders::fan_projective_space(dim) {
            Ok(fan) => unsafe { emit_fan(fan, out) },
            Err(err) => fail_core(err),
        }
    })
}

/// Build the fan of the product `(P^1)^m` (`m >= 1`).
///
/// # Safety
/// `out` must be valid for a single pointer write.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_p1_power(m: usize, out: *mut *mut FmFan) -> FmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(FmStatus::NullPointer, "out pointer is NULL");
        }
        match builders::fan_p1_power(m) {
            Ok(fan) => unsafe { emit_fan(fan, out) },
            Err(err) => fail_core(err),
        }
    })
}

/// Build the fan of the Hirzebruch surface with parameter `a`
/// (the projectivization of `O + O(a)` over `P^1`).
///
/// # Safety
/// `out` must be valid for a single pointer write.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_hirzebruch(a: u64, out: *mut *mut FmFan) -> FmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(FmStatus::NullPointer, "out pointer is NULL");
        }
        unsafe { emit_fan(builders::fan_hirzebruch(a), out) }
    })
}

/// Build the fan of the projectivized tangent bundle of `(P^1)^m`
/// (`m >= 1`), a smooth projective variety of dimension `2m - 1`.
///
/// # Safety
/// `out` must be valid for a single pointer write.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_tangent_p1_power(m: usize, out: *mut *mut FmFan) -> FmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(FmStatus::NullPointer, "out pointer is NULL");
        }
        match builders::fan_projectivized_tangent_p1_power(m) {
            Ok(fan) => unsafe { emit_fan(fan, out) },
            Err(err) => fail_core(err),
        }
    })
}

/// Rank of the fan's lattice (the dimension of the variety).
///
/// # Safety
/// `fan` must be a live handle; `out` must be valid for a single write.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_rank(fan: *const FmFan, out: *mut usize) -> FmStatus {
    guarded(|| match unsafe { fan_ref(fan) } {
        Ok(fan) => unsafe { emit_value(fan.rank(), out) },
        Err(status) => status,
    })
}

/// Number of rays of the fan.
///
/// # Safety
/// `fan` must be a live handle; `out` must be valid for a single write.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_ray_count(fan: *const FmFan, out: *mut usize) -> FmStatus {
    guarded(|| match unsafe { fan_ref(fan) } {
        Ok(fan) => unsafe { emit_value(fan.rays().len(), out) },
        Err(status) => status,
    })
}

/// Number of maximal cones of the fan.
///
/// # Safety
/// `fan` must be a live handle; `out` must be valid for a single write.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_max_cone_count(fan: *const FmFan, out: *mut usize) -> FmStatus {
    guarded(|| match unsafe { fan_ref(fan) } {
        Ok(fan) => unsafe { emit_value(fan.max_cones().len(), out) },
        Err(status) => status,
    })
}

/// Serialize the fan to its canonical textual form (rays sorted, indices
/// remapped, trailing newline). The string is written to `out` and owned
/// by the caller.
///
/// # Safety
/// `fan` must be a live handle; `out` must be valid for a single pointer
/// write.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_serialize(fan: *const FmFan, out: *mut *mut c_char) -> FmStatus {
    guarded(|| match unsafe { fan_ref(fan) } {
        Ok(fan) => unsafe { emit_string(serialize_fan(fan), out) },
        Err(status) => status,
    })
}

/// Whether every maximal cone is unimodular.
///
/// # Safety
/// `fan` must be a live handle; `out` must be valid for a single write.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_is_smooth(fan: *const FmFan, out: *mut bool) -> FmStatus {
    guarded(|| {
        let fan = match unsafe { fan_ref(fan) } {
            Ok(fan) => fan,
            Err(status) => return status,
        };
        match fan.is_smooth() {
            Ok(value) => unsafe { emit_value(value, out) },
            Err(err) => fail_core(err),
        }
    })
}

/// Whether the fan's support is the whole lattice.
///
/// # Safety
/// `fan` must be a live handle; `out` must be valid for a single write.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_is_complete(fan: *const FmFan, out: *mut bool) -> FmStatus {
    guarded(|| {
        let fan = match unsafe { fan_ref(fan) } {
            Ok(fan) => fan,
            Err(status) => return status,
        };
        match fan.is_complete() {
            Ok(value) => unsafe { emit_value(value, out) },
            Err(err) => fail_core(err),
        }
    })
}

/// Whether the fan admits a strictly convex support function (so the
/// variety is projective). Requires a smooth complete fan.
///
/// # Safety
/// `fan` must be a live handle; `out` must be valid for a single write.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_is_projective(fan: *const FmFan, out: *mut bool) -> FmStatus {
    guarded(|| {
        let fan = match unsafe { fan_ref(fan) } {
            Ok(fan) => fan,
            Err(status) => return status,
        };
        match fan.is_projective() {
            Ok(value) => unsafe { emit_value(value, out) },
            Err(err) => fail_core(err),
        }
    })
}

/// Rank of the divisor class group (`#rays - rank`). Requires a smooth
/// complete fan.
///
/// # Safety
/// `fan` must be a live handle; `out` must be valid for a single write.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_picard_rank(fan: *const FmFan, out: *mut usize) -> FmStatus {
    guarded(|| {
        let fan = match unsafe { fan_ref(fan) } {
            Ok(fan) => fan,
            Err(status) => return status,
        };
        match picard_rank(fan) {
            Ok(value) => unsafe { emit_value(value, out) },
            Err(err) => fail_core(err),
        }
    })
}

/// Decide whether the variety of the fan carries a contact structure.
/// Requires a valid, smooth, complete, projective fan.
///
/// On success `out_verdict` receives the verdict and `out_n` receives the
/// `n` with `dim = 2n + 1` for the two contact verdicts (`out_n` is set to
/// 0 when the verdict is `NotContact`).
///
/// # Safety
/// `fan` must be a live handle; `out_verdict` and `out_n` must each be
/// valid for a single write.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_classify(
    fan: *const FmFan,
    full_evidence: bool,
    out_verdict: *mut FmVerdict,
    out_n: *mut usize,
) -> FmStatus {
    guarded(|| {
        let fan = match unsafe { fan_ref(fan) } {
            Ok(fan) => fan,
            Err(status) => return status,
        };
        if out_verdict.is_null() || out_n.is_null() {
            return fail(FmStatus::NullPointer, "out pointer is NULL");
        }
        match classify_contact(fan, full_evidence) {
            Ok(report) => {
                let (verdict, n) = match report.verdict {
                    Verdict::ProjectiveSpace(n) => (FmVerdict::ProjectiveSpace, n),
                    Verdict::ProjectivizedTangentOfP1Power(n) => {
                        (FmVerdict::ProjectivizedTangentBundle, n)
                    }
                    Verdict::NotContact => (FmVerdict::NotContact, 0),
                };
                unsafe {
                    *out_verdict = verdict;
                    *out_n = n;
                }
                FmStatus::Ok
            }
            Err(err) => fail_core(err),
        }
    })
}

/// Run the contact classification and return the human-readable report
/// (verdict line followed by `key: value` evidence lines). The string is
/// owned by the caller.
///
/// # Safety
/// `fan` must be a live handle; `out` must be valid for a single pointer
/// write.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_classify_text(
    fan: *const FmFan,
    full_evidence: bool,
    out: *mut *mut c_char,
) -> FmStatus {
    guarded(|| {
        let fan = match unsafe { fan_ref(fan) } {
            Ok(fan) => fan,
            Err(status) => return status,
        };
        match classify_contact(fan, full_evidence) {
            Ok(report) => unsafe { emit_string(render_classification_text(&report), out) },
            Err(err) => fail_core(err),
        }
    })
}

/// Run the contact classification and return the machine-readable report
/// as one JSON object (identical bytes to the command-line `--machine`
/// output). The string is owned by the caller.
///
/// # Safety
/// `fan` must be a live handle; `out` must be valid for a single pointer
/// write.
#[no_mangle]
pub unsafe extern "C" fn fm_fan_classify_json(
    fan: *const FmFan,
    full_evidence: bool,
    out: *mut *mut c_char,
) -> FmStatus {
    guarded(|| {
        let fan = match unsafe { fan_ref(fan) } {
            Ok(fan) => fan,
            Err(status) => return status,
        };
        match classify_contact(fan, full_evidence) {
            Ok(report) => unsafe { emit_string(render_classification_json(&report), out) },
            Err(err) => fail_core(err),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn parse(text: &str) -> (FmStatus, *mut FmFan) {
        let c_text = CString::new(text).unwrap();
        let mut handle: *mut FmFan = ptr::null_mut();
        let status = unsafe { fm_fan_parse(c_text.as_ptr(), &mut handle) };
        (status, handle)
    }

    fn parse_ok(text: &str) -> *mut FmFan {
        let (status, handle) = parse(text);
        assert_eq!(status, FmStatus::Ok);
        assert!(!handle.is_null());
        handle
    }

    fn take_string(text: *mut c_char) -> String {
        assert!(!text.is_null());
        let owned = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_owned();
        unsafe { fm_string_free(text) };
        owned
    }

    fn last_error() -> String {
        unsafe { CStr::from_ptr(fm_last_error_message()) }
            .to_str()
            .unwrap()
            .to_owned()
    }

    #[test]
    fn version_is_the_package_version() {
        let version = unsafe { CStr::from_ptr(fm_version()) }.to_str().unwrap();
        assert_eq!(version, env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn parse_serialize_round_trip_is_canonical() {
        let p1 = "{\"rank\":1,\"rays\":[[1],[-1]],\"max_cones\":[[1],[0]]}";
        let handle = parse_ok(p1);
        let mut text: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { fm_fan_serialize(handle, &mut text) }, FmStatus::Ok);
        assert_eq!(
            take_string(text),
            "{\"rank\":1,\"rays\":[[-1],[1]],\"max_cones\":[[0],[1]]}\n"
        );
        unsafe { fm_fan_free(handle) };
    }

    #[test]
    fn null_arguments_are_rejected() {
        let mut handle: *mut FmFan = ptr::null_mut();
        assert_eq!(
            unsafe { fm_fan_parse(ptr::null(), &mut handle) },
            FmStatus::NullPointer
        );
        assert!(!last_error().is_empty());

        let text = CString::new("{}").unwrap();
        assert_eq!(
            unsafe { fm_fan_parse(text.as_ptr(), ptr::null_mut()) },
            FmStatus::NullPointer,
        );

        let mut rank = 0usize;
        assert_eq!(
            unsafe { fm_fan_rank(ptr::null(), &mut rank) },
            FmStatus::NullPointer
        );

        unsafe {
            fm_fan_free(ptr::null_mut());
            fm_string_free(ptr::null_mut());
        }
    }

    #[test]
    fn invalid_utf8_is_rejected() {
        let bytes: [c_char; 3] = [-1i8 as c_char, -2i8 as c_char, 0];
        let mut handle: *mut FmFan = ptr::null_mut();
        assert_eq!(
            unsafe { fm_fan_parse(bytes.as_ptr(), &mut handle) },
            FmStatus::Utf8
        );
    }

    #[test]
    fn malformed_text_is_a_syntax_error() {
        let (status, _) = parse("this is not a fan");
        assert_eq!(status, FmStatus::Syntax);
        assert!(!last_error().is_empty());
    }

    #[test]
    fn invalid_fan_is_reported_with_violations() {
        let (status, _) = parse("{\"rank\":2,\"rays\":[[1,0]],\"max_cones\":[[0]]}");
        assert_eq!(status, FmStatus::InvalidFan);
        assert!(last_error().contains("invalid fan"));
    }

    #[test]
    fn builders_produce_the_expected_counts() {
        let mut handle: *mut FmFan = ptr::null_mut();
        assert_eq!(
            unsafe { fm_fan_projective_space(3, &mut handle) },
            FmStatus::Ok
        );
        let (mut rank, mut rays, mut cones) = (0usize, 0usize, 0usize);
        unsafe {
            assert_eq!(fm_fan_rank(handle, &mut rank), FmStatus::Ok);
            assert_eq!(fm_fan_ray_count(handle, &mut rays), FmStatus::Ok);
            assert_eq!(fm_fan_max_cone_count(handle, &mut cones), FmStatus::Ok);
        }
        assert_eq!((rank, rays, cones), (3, 4, 4));

        let mut smooth = false;
        let mut complete = false;
        let mut projective = false;
        let mut picard = 0usize;
        unsafe {
            assert_eq!(fm_fan_is_smooth(handle, &mut smooth), FmStatus::Ok);
            assert_eq!(fm_fan_is_complete(handle, &mut complete), FmStatus::Ok);
            assert_eq!(fm_fan_is_projective(handle, &mut projective), FmStatus::Ok);
            assert_eq!(fm_fan_picard_rank(handle, &mut picard), FmStatus::Ok);
            fm_fan_free(handle);
        }
        assert!(smooth && complete && projective);
        assert_eq!(picard, 1);
    }

    #[test]
    fn bad_builder_arguments_fail() {
        let mut handle: *mut FmFan = ptr::null_mut();
        assert_eq!(
            unsafe { fm_fan_projective_space(0, &mut handle) },
            FmStatus::BadArgument
        );
        assert_eq!(
            unsafe { fm_fan_tangent_p1_power(0, &mut handle) },
            FmStatus::BadArgument
        );
    }

    #[test]
    fn classify_recognizes_projective_space() {
        let mut handle: *mut FmFan = ptr::null_mut();
        assert_eq!(
            unsafe { fm_fan_projective_space(3, &mut handle) },
            FmStatus::Ok
        );
        let mut verdict = FmVerdict::NotContact;
        let mut n = 0usize;
        assert_eq!(
            unsafe { fm_fan_classify(handle, false, &mut verdict, &mut n) },
            FmStatus::Ok
        );
        assert_eq!(verdict, FmVerdict::ProjectiveSpace);
        assert_eq!(n, 1);

        let mut text: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { fm_fan_classify_text(handle, false, &mut text) },
            FmStatus::Ok
        );
        let report = take_string(text);
        assert!(report.starts_with("CONTACT: P^3\n"));

        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { fm_fan_classify_json(handle, false, &mut json) },
            FmStatus::Ok
        );
        let report = take_string(json);
        let expected = {
            let fan = builders::fan_projective_space(3).unwrap();
            let inner = classify_contact(&fan, false).unwrap();
            render_classification_json(&inner)
        };
        assert_eq!(report, expected);
        unsafe { fm_fan_free(handle) };
    }

    #[test]
    fn classify_recognizes_the_tangent_bundle() {
        let mut handle: *mut FmFan = ptr::null_mut();
        assert_eq!(
            unsafe { fm_fan_tangent_p1_power(2, &mut handle) },
            FmStatus::Ok
        );
        let mut verdict = FmVerdict::NotContact;
        let mut n = 0usize;
        assert_eq!(
            unsafe { fm_fan_classify(handle, false, &mut verdict, &mut n) },
            FmStatus::Ok
        );
        assert_eq!(verdict, FmVerdict::ProjectivizedTangentBundle);
        assert_eq!(n, 1);
        unsafe { fm_fan_free(handle) };
    }

    #[test]
    fn classify_rejects_even_dimension_with_not_contact() {
        let mut handle: *mut FmFan = ptr::null_mut();
        assert_eq!(unsafe { fm_fan_hirzebruch(2, &mut handle) }, FmStatus::Ok);
        let mut verdict = FmVerdict::ProjectiveSpace;
        let mut n = 7usize;
        assert_eq!(
            unsafe { fm_fan_classify(handle, false, &mut verdict, &mut n) },
            FmStatus::Ok
        );
        assert_eq!(verdict, FmVerdict::NotContact);
        assert_eq!(n, 0);
        unsafe { fm_fan_free(handle) };
    }

    #[test]
    fn incomplete_fans_fail_the_precondition() {
        let handle = parse_ok("{\"rank\":2,\"rays\":[[1,0],[0,1]],\"max_cones\":[[0,1]]}");
        let mut complete = true;
        assert_eq!(
            unsafe { fm_fan_is_complete(handle, &mut complete) },
            FmStatus::Ok
        );
        assert!(!complete);

        let mut picard = 0usize;
        assert_eq!(
            unsafe { fm_fan_picard_rank(handle, &mut picard) },
            FmStatus::Precondition
        );
        assert_eq!(last_error(), "fan is not complete");

        let mut verdict = FmVerdict::NotContact;
        let mut n = 0usize;
        assert_eq!(
            unsafe { fm_fan_classify(handle, false, &mut verdict, &mut n) },
            FmStatus::Precondition
        );
        unsafe { fm_fan_free(handle) };
    }

    #[test]
    fn generated_header_declares_the_full_surface() {
        let header = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/include/fanmori.h"
        ))
        .expect("the build script generates include/fanmori.h");
        for symbol in [
            "fm_version",
            "fm_last_error_message",
            "fm_string_free",
            "fm_fan_parse",
            "fm_fan_free",
            "fm_fan_projective_space",
            "fm_fan_p1_power",
            "fm_fan_hirzebruch",
            "fm_fan_tangent_p1_power",
            "fm_fan_rank",
            "fm_fan_ray_count",
            "fm_fan_max_cone_count",
            "fm_fan_serialize",
            "fm_fan_is_smooth",
            "fm_fan_is_complete",
            "fm_fan_is_projective",
            "fm_fan_picard_rank",
            "fm_fan_classify",
            "fm_fan_classify_text",
            "fm_fan_classify_json",
            "FM_STATUS_OK",
            "FM_VERDICT_NOT_CONTACT",
        ] {
            assert!(header.contains(symbol), "header is missing {symbol}");
        }
    }
}
