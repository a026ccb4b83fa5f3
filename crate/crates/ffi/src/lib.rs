//! C ABI over the document pipeline: parse a document, execute its queries,
//! render the report.
//!
//! Documents and reports are opaque handles owned by the caller and released
//! with their `_free` function. Strings returned to C are NUL-terminated,
//! UTF-8, and released with [`sslab_string_free`]. Every fallible function
//! returns an [`SslabStatus`]; on failure the message is available from
//! [`sslab_last_error`] on the same thread. Panics never cross the boundary.
//!
//! ```c
//! SslabDocument *doc = NULL;
//! SslabReport *report = NULL;
//! char *text = NULL;
//! if (sslab_document_parse(source, &doc) != SSLAB_STATUS_OK) {
//!     fprintf(stderr, "%s\n", sslab_last_error());
//! }
//! sslab_document_execute(doc, &report);
//! sslab_report_render(report, SSLAB_FORMAT_JSON, &text);
//! puts(text);
//! sslab_string_free(text);
//! sslab_report_free(report);
//! sslab_document_free(doc);
//! ```

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sslab::document::{self, Format};

/// A parsed document.
pub struct SslabDocument(document::Document);

/// The answers to a document's queries.
pub struct SslabReport(document::Report);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SslabStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// Input text was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The document did not parse; the message carries line and column.
    ParseError = 3,
    /// At least one query failed; the report is still produced.
    QueryFailed = 4,
    /// The report cannot be rendered in the requested format.
    RenderError = 5,
    /// An internal error; the library state is unaffected.
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SslabFormat {
    Text = 0,
    Json = 1,
    Dot = 2,
}

impl From<SslabFormat> for Format {
    fn from(f: SslabFormat) -> Self {
        match f {
            SslabFormat::Text => Format::Text,
            SslabFormat::Json => Format::Json,
            SslabFormat::Dot => Format::Dot,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let mut bytes = message.into().into_bytes();
    bytes.retain(|&b| b != 0);
    let message = CString::new(bytes).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: SslabStatus, message: impl Into<String>) -> SslabStatus {
    set_error(message);
    status
}

/// Runs `body`, turning a panic into [`SslabStatus::Panic`].
fn guarded(body: impl FnOnce() -> SslabStatus) -> SslabStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let detail = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            fail(SslabStatus::Panic, format!("internal error: {detail}"))
        }
    }
}

fn into_c_string(s: String) -> *mut c_char {
    let mut bytes = s.into_bytes();
    bytes.retain(|&b| b != 0);
    CString::new(bytes).expect("NUL bytes removed").into_raw()
}

/// Parses a NUL-terminated UTF-8 document. On success `*out` receives a
/// handle to release with `sslab_document_free`; otherwise `*out` is NULL.
///
/// # Safety
/// `text` must be NULL or a valid NUL-terminated string; `out` must be NULL
/// or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sslab_document_parse(text: *const c_char, out: *mut *mut SslabDocument) -> SslabStatus {
    guarded(|| {
        if out.is_null() || text.is_null() {
            return fail(SslabStatus::NullArgument, "text and out must not be NULL");
        }
        // SAFETY: `out` is non-null and valid for writes per the contract.
        unsafe { *out = ptr::null_mut() };
        // SAFETY: `text` is a valid NUL-terminated string per the contract.
        let bytes = unsafe { CStr::from_ptr(text) };
        let Ok(text) = bytes.to_str() else {
            return fail(SslabStatus::InvalidUtf8, "document is not valid UTF-8");
        };
        match document::parse_document(text) {
            Ok(doc) => {
                // SAFETY: as above.
                unsafe { *out = Box::into_raw(Box::new(SslabDocument(doc))) };
                SslabStatus::Ok
            }
            Err(e) => fail(SslabStatus::ParseError, e.to_string()),
        }
    })
}

/// Number of queries in a document (0 for NULL).
///
/// # Safety
/// `doc` must be NULL or a live handle from `sslab_document_parse`.
#[no_mangle]
pub unsafe extern "C" fn sslab_document_query_count(doc: *const SslabDocument) -> usize {
    // SAFETY: `doc` is NULL or live per the contract.
    unsafe { doc.as_ref() }.map_or(0, |d| d.0.queries.len())
}

/// Executes every query. `*out` always receives a report when `doc` is
/// valid; the status is `SSLAB_STATUS_QUERY_FAILED` if any query failed.
///
/// # Safety
/// `doc` must be NULL or a live document handle; `out` must be NULL or valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn sslab_document_execute(doc: *const SslabDocument, out: *mut *mut SslabReport) -> SslabStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SslabStatus::NullArgument, "out must not be NULL");
        }
        // SAFETY: `out` is non-null and valid for writes per the contract.
        unsafe { *out = ptr::null_mut() };
        // SAFETY: `doc` is NULL or live per the contract.
        let Some(doc) = (unsafe { doc.as_ref() }) else {
            return fail(SslabStatus::NullArgument, "doc must not be NULL");
        };
        let report = document::execute(&doc.0);
        let failures = report.failures();
        // SAFETY: as above.
        unsafe { *out = Box::into_raw(Box::new(SslabReport(report))) };
        if failures == 0 {
            SslabStatus::Ok
        } else {
            fail(SslabStatus::QueryFailed, format!("{failures} query(ies) failed"))
        }
    })
}

/// Number of failed queries in a report (0 for NULL).
///
/// # Safety
/// `report` must be NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn sslab_report_failures(report: *const SslabReport) -> usize {
    // SAFETY: `report` is NULL or live per the contract.
    unsafe { report.as_ref() }.map_or(0, |r| r.0.failures())
}

/// Renders a report. On success `*out` receives a string to release with
/// `sslab_string_free`.
///
/// # Safety
/// `report` must be NULL or a live report handle; `out` must be NULL or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sslab_report_render(
    report: *const SslabReport,
    format: SslabFormat,
    out: *mut *mut c_char,
) -> SslabStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SslabStatus::NullArgument, "out must not be NULL");
        }
        // SAFETY: `out` is non-null and valid for writes per the contract.
        unsafe { *out = ptr::null_mut() };
        // SAFETY: `report` is NULL or live per the contract.
        let Some(report) = (unsafe { report.as_ref() }) else {
            return fail(SslabStatus::NullArgument, "report must not be NULL");
        };
        match document::render_report(&report.0, format.into()) {
            Ok(text) => {
                // SAFETY: as above.
                unsafe { *out = into_c_string(text) };
                SslabStatus::Ok
            }
            Err(e) => fail(SslabStatus::RenderError, e.to_string()),
        }
    })
}

/// Releases a document. NULL is ignored.
///
/// # Safety
/// `doc` must be NULL or a handle from `sslab_document_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sslab_document_free(doc: *mut SslabDocument) {
    if !doc.is_null() {
        // SAFETY: the handle came from `Box::into_raw` and is freed once.
        drop(unsafe { Box::from_raw(doc) });
    }
}

/// Releases a report. NULL is ignored.
///
/// # Safety
/// `report` must be NULL or a handle from `sslab_document_execute` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sslab_report_free(report: *mut SslabReport) {
    if !report.is_null() {
        // SAFETY: the handle came from `Box::into_raw` and is freed once.
        drop(unsafe { Box::from_raw(report) });
    }
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sslab_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: the string came from `CString::into_raw` and is freed once.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// The message of the last failed call on this thread, or NULL. The
/// pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn sslab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// The library version as a static string.
#[no_mangle]
pub extern "C" fn sslab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;

    const V3: &str = "space V3 = poset {o < p, o < q}\n\
                      prufer D on V3 {idempotent: points {p}}\n\
                      query lat = enumerate(D)\n\0";

    fn last_error() -> String {
        let p = sslab_last_error();
        assert!(!p.is_null());
        // SAFETY: non-null pointers from `sslab_last_error` are valid C strings.
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }

    #[test]
    fn parse_execute_render_round_trip() {
        unsafe {
            let mut doc = ptr::null_mut();
            assert_eq!(sslab_document_parse(V3.as_ptr().cast(), &mut doc), SslabStatus::Ok);
            assert!(sslab_last_error().is_null());
            assert_eq!(sslab_document_query_count(doc), 1);
            let mut report = ptr::null_mut();
            assert_eq!(sslab_document_execute(doc, &mut report), SslabStatus::Ok);
            assert_eq!(sslab_report_failures(report), 0);
            let mut text = ptr::null_mut();
            assert_eq!(sslab_report_render(report, SslabFormat::Dot, &mut text), SslabStatus::Ok);
            let dot = CStr::from_ptr(text).to_str().unwrap().to_owned();
            assert_eq!(dot.matches("[label=").count(), 7);
            sslab_string_free(text);
            sslab_report_free(report);
            sslab_document_free(doc);
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        unsafe {
            let mut doc = ptr::null_mut();
            let status = sslab_document_parse(c"space V = poset {o < p}\nquery q = qspec(R)\n".as_ptr(), &mut doc);
            assert_eq!(status, SslabStatus::ParseError);
            assert!(doc.is_null());
            assert_eq!(last_error(), "2:17: unknown name `R`");
        }
    }

    #[test]
    fn failures_and_null_arguments_are_reported() {
        unsafe {
            let mut doc = ptr::null_mut();
            assert_eq!(sslab_document_parse(ptr::null(), &mut doc), SslabStatus::NullArgument);
            let bad_utf8 = [0xffu8, 0];
            assert_eq!(sslab_document_parse(bad_utf8.as_ptr().cast(), &mut doc), SslabStatus::InvalidUtf8);

            let src = c"space C = cantor\nprufer D on C {idempotent: all}\nquery e = enumerate(D)\n";
            assert_eq!(sslab_document_parse(src.as_ptr(), &mut doc), SslabStatus::Ok);
            let mut report = ptr::null_mut();
            assert_eq!(sslab_document_execute(doc, &mut report), SslabStatus::QueryFailed);
            assert!(!report.is_null());
            assert_eq!(sslab_report_failures(report), 1);
            let mut text = ptr::null_mut();
            assert_eq!(sslab_report_render(report, SslabFormat::Dot, &mut text), SslabStatus::RenderError);
            assert!(text.is_null());
            assert!(last_error().contains("enumerate"));
            assert_eq!(sslab_report_render(ptr::null(), SslabFormat::Json, &mut text), SslabStatus::NullArgument);
            sslab_report_free(report);
            sslab_document_free(doc);
            sslab_document_free(ptr::null_mut());
            sslab_string_free(ptr::null_mut());
        }
    }

    #[test]
    fn version_matches_the_crate() {
        // SAFETY: the version is a static NUL-terminated string.
        let v = unsafe { CStr::from_ptr(sslab_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
