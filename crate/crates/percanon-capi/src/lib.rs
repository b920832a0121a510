//! C ABI for the percanon library.
//!
//! Complexes are held behind opaque handles; every function returns a
//! [`PercanonStatus`] and reports detail through a thread-local message
//! retrievable with [`percanon_last_error_message`]. Strings returned through
//! out-parameters are owned by the caller and must be released with
//! [`percanon_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use percanon::cli::analyze_complex;
use percanon::complex::{parse_filtered_complex, validate, FilteredComplex};
use percanon::field::{decimal_to_rational, FieldSpec};
use percanon::ingest::{parse_points, vietoris_rips};

/// Status codes; nonzero values match the CLI exit codes where they overlap.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PercanonStatus {
    Ok = 0,
    /// A required pointer argument was null or not valid UTF-8.
    NullArgument = 1,
    /// The input failed to parse or validate.
    InvalidInput = 2,
    /// An internal invariant or oracle check failed.
    VerificationFailed = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("nul bytes removed");
    });
}

fn input_error(message: impl ToString) -> PercanonStatus {
    set_error(&message.to_string());
    PercanonStatus::InvalidInput
}

/// An opaque filtered complex handle.
pub struct PercanonComplex {
    inner: FilteredComplex,
}

unsafe fn utf8_arg<'a>(ptr: *const c_char) -> Result<&'a str, PercanonStatus> {
    if ptr.is_null() {
        set_error("null pointer argument");
        return Err(PercanonStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        PercanonStatus::NullArgument
    })
}

fn guard(body: impl FnOnce() -> PercanonStatus) -> PercanonStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            PercanonStatus::VerificationFailed
        }
    }
}

fn field_from_prime(field_prime: u32) -> Result<FieldSpec, PercanonStatus> {
    if field_prime == 0 {
        return Ok(FieldSpec::Rationals);
    }
    FieldSpec::prime_field(field_prime as u64).map_err(input_error)
}

fn return_string(out: *mut *mut c_char, text: String) -> PercanonStatus {
    let c = match CString::new(text) {
        Ok(c) => c,
        Err(_) => return input_error("output contained a nul byte"),
    };
    unsafe { *out = c.into_raw() };
    PercanonStatus::Ok
}

/// The crate version as a static string; never freed.
#[no_mangle]
pub extern "C" fn percanon_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// The message for the most recent error on this thread. The pointer is
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn percanon_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string returned through an out-parameter.
///
/// # Safety
/// `s` must have been produced by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn percanon_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a filtered-complex file. With `close_faces`, missing faces enter at
/// the smallest compatible filtration value. The complex is validated.
///
/// # Safety
/// `text` must be a valid nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn percanon_complex_parse(
    text: *const c_char,
    close_faces: bool,
    out: *mut *mut PercanonComplex,
) -> PercanonStatus {
    guard(|| {
        if out.is_null() {
            set_error("null out pointer");
            return PercanonStatus::NullArgument;
        }
        let text = match utf8_arg(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let fc = match parse_filtered_complex(text, close_faces) {
            Ok(fc) => fc,
            Err(e) => return input_error(e),
        };
        let violations = validate(&fc);
        if let Some(first) = violations.first() {
            return input_error(format!(
                "invalid complex ({} violations, first: {first})",
                violations.len()
            ));
        }
        *out = Box::into_raw(Box::new(PercanonComplex { inner: fc }));
        PercanonStatus::Ok
    })
}

/// Build a Vietoris-Rips filtration from a point-cloud file. `max_radius` is
/// a decimal literal so that level ties are decided exactly.
///
/// # Safety
/// `points_text` and `max_radius` must be valid nul-terminated strings and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn percanon_rips(
    points_text: *const c_char,
    max_dim: usize,
    max_radius: *const c_char,
    out: *mut *mut PercanonComplex,
) -> PercanonStatus {
    guard(|| {
        if out.is_null() {
            set_error("null out pointer");
            return PercanonStatus::NullArgument;
        }
        let (text, radius) = match (utf8_arg(points_text), utf8_arg(max_radius)) {
            (Ok(t), Ok(r)) => (t, r),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let radius = match decimal_to_rational(radius) {
            Ok(r) => r,
            Err(e) => return input_error(e),
        };
        let pc = match parse_points(text) {
            Ok(pc) => pc,
            Err(e) => return input_error(e),
        };
        match vietoris_rips(&pc, max_dim, &radius) {
            Ok(fc) => {
                *out = Box::into_raw(Box::new(PercanonComplex { inner: fc }));
                PercanonStatus::Ok
            }
            Err(e) => input_error(e),
        }
    })
}

/// Release a complex handle.
///
/// # Safety
/// `complex` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn percanon_complex_free(complex: *mut PercanonComplex) {
    if !complex.is_null() {
        drop(Box::from_raw(complex));
    }
}

/// Number of cells in the complex; 0 for a null handle.
///
/// # Safety
/// `complex` must be a live handle from this library (or null).
#[no_mangle]
pub unsafe extern "C" fn percanon_complex_cell_count(complex: *const PercanonComplex) -> usize {
    if complex.is_null() {
        return 0;
    }
    (*complex).inner.len()
}

/// Serialize the complex in the filtered-complex file format.
///
/// # Safety
/// `complex` must be a live handle and `out` a valid pointer; free the
/// result with [`percanon_string_free`].
#[no_mangle]
pub unsafe extern "C" fn percanon_complex_write(
    complex: *const PercanonComplex,
    out: *mut *mut c_char,
) -> PercanonStatus {
    guard(|| {
        if complex.is_null() || out.is_null() {
            set_error("null pointer argument");
            return PercanonStatus::NullArgument;
        }
        let text = percanon::complex::write_filtered_complex(&(*complex).inner);
        return_string(out, text)
    })
}

/// Compute barcodes over the rationals (`field_prime` 0) or Z/p, as a JSON
/// array of `{degree, birth_level, death_level, birth_value?, death_value?}`.
///
/// # Safety
/// `complex` must be a live handle and `out_json` a valid pointer; free the
/// result with [`percanon_string_free`].
#[no_mangle]
pub unsafe extern "C" fn percanon_barcodes_json(
    complex: *const PercanonComplex,
    field_prime: u32,
    drop_empty: bool,
    out_json: *mut *mut c_char,
) -> PercanonStatus {
    guard(|| {
        if complex.is_null() || out_json.is_null() {
            set_error("null pointer argument");
            return PercanonStatus::NullArgument;
        }
        let field = match field_from_prime(field_prime) {
            Ok(f) => f,
            Err(status) => return status,
        };
        match analyze_complex(&(*complex).inner, field, drop_empty) {
            Ok(analysis) => {
                return_string(out_json, percanon::barcode::bars_to_json(&analysis.bars))
            }
            Err(e) => input_error(e),
        }
    })
}

/// The Krull-Schmidt summand listing as JSON.
///
/// # Safety
/// Same contract as [`percanon_barcodes_json`].
#[no_mangle]
pub unsafe extern "C" fn percanon_summands_json(
    complex: *const PercanonComplex,
    field_prime: u32,
    out_json: *mut *mut c_char,
) -> PercanonStatus {
    guard(|| {
        if complex.is_null() || out_json.is_null() {
            set_error("null pointer argument");
            return PercanonStatus::NullArgument;
        }
        let field = match field_from_prime(field_prime) {
            Ok(f) => f,
            Err(status) => return status,
        };
        match analyze_complex(&(*complex).inner, field, false) {
            Ok(analysis) => {
                let json = percanon::barcode::summands_to_json(
                    &analysis.summands,
                    analysis.basis.elements(),
                );
                return_string(out_json, json)
            }
            Err(e) => input_error(e),
        }
    })
}

/// Factor a matrix-interchange differential; the output stream holds the
/// canonical form, the normalized basis change, and the Jordan permutation
/// (plus R, V, Vhat when `emit_certificate` is set), in the same interchange
/// format the CLI prints.
///
/// # Safety
/// `matrix_text` must be a valid nul-terminated string and `out_text` a
/// valid pointer; free the result with [`percanon_string_free`].
#[no_mangle]
pub unsafe extern "C" fn percanon_reduce_matrix(
    matrix_text: *const c_char,
    emit_certificate: bool,
    out_text: *mut *mut c_char,
) -> PercanonStatus {
    guard(|| {
        if out_text.is_null() {
            set_error("null out pointer");
            return PercanonStatus::NullArgument;
        }
        let text = match utf8_arg(matrix_text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let mut args = vec!["percanon".to_string(), "reduce".to_string()];
        if emit_certificate {
            args.push("--emit-certificate".to_string());
        }
        run_via_cli_on_text(args, text, out_text)
    })
}

/// Re-derive a reduction and run the independent oracle cross-checks; the
/// report lists one line per check.
///
/// # Safety
/// Same contract as [`percanon_reduce_matrix`].
#[no_mangle]
pub unsafe extern "C" fn percanon_verify_matrix(
    matrix_text: *const c_char,
    out_report: *mut *mut c_char,
) -> PercanonStatus {
    guard(|| {
        if out_report.is_null() {
            set_error("null out pointer");
            return PercanonStatus::NullArgument;
        }
        let text = match utf8_arg(matrix_text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let args = vec!["percanon".to_string(), "verify".to_string()];
        run_via_cli_on_text(args, text, out_report)
    })
}

/// Route matrix text through the CLI entry point via a temp file, so the C
/// surface and the command line produce byte-identical output.
unsafe fn run_via_cli_on_text(
    mut args: Vec<String>,
    text: &str,
    out: *mut *mut c_char,
) -> PercanonStatus {
    static COUNTER: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);
    let serial = COUNTER.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    let dir = std::env::temp_dir();
    let path = dir.join(format!("percanon-capi-{}-{serial}.mat", std::process::id()));
    if let Err(e) = std::fs::write(&path, text) {
        return input_error(format!("writing temp file: {e}"));
    }
    args.push(path.to_string_lossy().into_owned());
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let code = percanon::cli::run(&args, &mut stdout, &mut stderr);
    let _ = std::fs::remove_file(&path);
    match code {
        0 => return_string(out, String::from_utf8_lossy(&stdout).into_owned()),
        3 => {
            set_error(String::from_utf8_lossy(&stderr).trim());
            *out = ptr::null_mut();
            PercanonStatus::VerificationFailed
        }
        _ => {
            set_error(String::from_utf8_lossy(&stderr).trim());
            *out = ptr::null_mut();
            PercanonStatus::InvalidInput
        }
    }
}
