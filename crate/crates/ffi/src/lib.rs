//! C ABI over the flexiplex library.
//!
//! Every fallible function returns a `FlexiplexStatus`. On failure the message
//! is available from `flexiplex_last_error` on the same thread. Strings handed
//! out by the library must be released with `flexiplex_string_free`; handles
//! with their matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use flexiplex::checks::{self, Bundle, CheckParams};
use flexiplex::exactmat::{self, parse_rational, parse_rational_list};
use flexiplex::families::{self, DeformationFamily};
use flexiplex::PseudoSimplex;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlexiplexStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    VerificationFailed = 3,
    Internal = 5,
}

/// Opaque deformation family handle.
pub struct FlexiplexFamily(DeformationFamily);

/// Opaque pseudo-simplex handle.
pub struct FlexiplexSimplex(PseudoSimplex);

/// Exact signature of a symmetric matrix.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FlexiplexSignature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("nul bytes removed")));
}

struct Failure(FlexiplexStatus, String);

fn invalid(e: impl ToString) -> Failure {
    Failure(FlexiplexStatus::InvalidArgument, e.to_string())
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FlexiplexStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FlexiplexStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FlexiplexStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(
            FlexiplexStatus::NullPointer,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(FlexiplexStatus::NullPointer, format!("{what} is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(
            FlexiplexStatus::NullPointer,
            "output pointer is null".into(),
        ));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s)
        .map_err(|_| Failure(FlexiplexStatus::Internal, "string contains nul".into()))?;
    if out.is_null() {
        return Err(Failure(
            FlexiplexStatus::NullPointer,
            "output pointer is null".into(),
        ));
    }
    out.write(c.into_raw());
    Ok(())
}

/// Message for the last failure on this thread, or null. Valid until the next
/// failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn flexiplex_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn flexiplex_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn flexiplex_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn family_from_lists(
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut FlexiplexFamily,
    build: fn(
        &[exactmat::Rational],
        &[exactmat::Rational],
    ) -> Result<DeformationFamily, families::FamilyError>,
) -> FlexiplexStatus {
    guard(|| {
        let a = parse_rational_list(read_str(a, "a")?).map_err(invalid)?;
        let b = parse_rational_list(read_str(b, "b")?).map_err(invalid)?;
        let family = build(&a, &b).map_err(invalid)?;
        write_out(out, Box::into_raw(Box::new(FlexiplexFamily(family))))
    })
}

/// Builds the n = 4 family from comma-separated `a = (a1,a2,a3)` and
/// `b = (b2,b3,b4)`.
///
/// # Safety
/// `a` and `b` must be valid C strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flexiplex_family_n4(
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut FlexiplexFamily,
) -> FlexiplexStatus {
    family_from_lists(a, b, out, families::family_n4)
}

/// Builds the n = 5 family from `a = (a1,a2,a3)` and `b = (b2,b4,b5)`.
///
/// # Safety
/// `a` and `b` must be valid C strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flexiplex_family_n5(
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut FlexiplexFamily,
) -> FlexiplexStatus {
    family_from_lists(a, b, out, families::family_n5)
}

/// Builds the matrix family for dimension `n >= 5`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flexiplex_family_matrix(
    n: usize,
    seed: u64,
    out: *mut *mut FlexiplexFamily,
) -> FlexiplexStatus {
    guard(|| {
        let family = families::matrix_family(n, seed).map_err(invalid)?;
        write_out(out, Box::into_raw(Box::new(FlexiplexFamily(family))))
    })
}

/// Releases a family. Null is ignored.
///
/// # Safety
/// `f` must come from a `flexiplex_family_*` constructor and not be freed.
#[no_mangle]
pub unsafe extern "C" fn flexiplex_family_free(f: *mut FlexiplexFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Order of the matrices `A`, `B`; 0 if `f` is null.
///
/// # Safety
/// `f` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn flexiplex_family_order(f: *const FlexiplexFamily) -> usize {
    f.as_ref().map_or(0, |f| f.0.order())
}

/// JSON descriptor of the family.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flexiplex_family_to_json(
    f: *const FlexiplexFamily,
    out: *mut *mut c_char,
) -> FlexiplexStatus {
    guard(|| write_string(out, deref(f, "family")?.0.to_json()))
}

/// Exact tracked determinant at rational `t` (e.g. "3/2"), as a "p/q" string.
///
/// # Safety
/// `f` must be a live handle, `t` a valid C string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn flexiplex_family_det_at(
    f: *const FlexiplexFamily,
    t: *const c_char,
    out: *mut *mut c_char,
) -> FlexiplexStatus {
    guard(|| {
        let family = &deref(f, "family")?.0;
        let t = parse_rational(read_str(t, "t")?).map_err(invalid)?;
        let c = family.at(&t).map_err(invalid)?;
        write_string(out, family.tracked_det(&c).to_string())
    })
}

/// Exact signature of `tA + B/t`.
///
/// # Safety
/// `f` must be a live handle, `t` a valid C string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn flexiplex_family_signature_at(
    f: *const FlexiplexFamily,
    t: *const c_char,
    out: *mut FlexiplexSignature,
) -> FlexiplexStatus {
    guard(|| {
        let family = &deref(f, "family")?.0;
        let t = parse_rational(read_str(t, "t")?).map_err(invalid)?;
        let s = exactmat::signature(&family.at(&t).map_err(invalid)?);
        write_out(
            out,
            FlexiplexSignature {
                positive: s.positive,
                negative: s.negative,
                zero: s.zero,
            },
        )
    })
}

/// Sweep CSV over a comma-separated grid, or the default grid if `grid` is
/// null.
///
/// # Safety
/// `f` must be a live handle, `grid` a valid C string or null, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn flexiplex_family_sweep_csv(
    f: *const FlexiplexFamily,
    grid: *const c_char,
    out: *mut *mut c_char,
) -> FlexiplexStatus {
    guard(|| {
        let family = &deref(f, "family")?.0;
        let grid = if grid.is_null() {
            families::default_grid()
        } else {
            parse_rational_list(read_str(grid, "grid")?).map_err(invalid)?
        };
        let report = families::sweep(family, &grid).map_err(invalid)?;
        let csv = report
            .to_csv()
            .map_err(|e| Failure(FlexiplexStatus::Internal, e.to_string()))?;
        write_string(out, csv)
    })
}

/// Parses a simplex from `{"n": .., "squared_edges": [[i, j, "p/q"], ..]}`.
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flexiplex_simplex_from_json(
    json: *const c_char,
    out: *mut *mut FlexiplexSimplex,
) -> FlexiplexStatus {
    guard(|| {
        let s = PseudoSimplex::from_json(read_str(json, "json")?).map_err(invalid)?;
        write_out(out, Box::into_raw(Box::new(FlexiplexSimplex(s))))
    })
}

/// Releases a simplex. Null is ignored.
///
/// # Safety
/// `s` must come from `flexiplex_simplex_from_json` and not be freed.
#[no_mangle]
pub unsafe extern "C" fn flexiplex_simplex_free(s: *mut FlexiplexSimplex) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Simplex dimension; 0 if `s` is null.
///
/// # Safety
/// `s` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn flexiplex_simplex_dimension(s: *const FlexiplexSimplex) -> usize {
    s.as_ref().map_or(0, |s| s.0.dimension())
}

/// Exact signed squared volume as a "p/q" string.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flexiplex_simplex_signed_sq_volume(
    s: *const FlexiplexSimplex,
    out: *mut *mut c_char,
) -> FlexiplexStatus {
    guard(|| {
        write_string(
            out,
            deref(s, "simplex")?.0.signed_sq_volume().value.to_string(),
        )
    })
}

/// Runs a named check bundle (e.g. "lemma-3.2"). `n = 0` selects the bundle
/// defaults. Writes the JSON report to `out` and returns
/// `VerificationFailed` if any check failed.
///
/// # Safety
/// `bundle` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flexiplex_lemma_check(
    bundle: *const c_char,
    n: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> FlexiplexStatus {
    guard(|| {
        let bundle: Bundle = read_str(bundle, "bundle")?.parse().map_err(invalid)?;
        let params = CheckParams {
            n: (n != 0).then_some(n),
            seed,
        };
        let report = checks::run_bundle(bundle, &params);
        let passed = report.passed;
        write_string(out, report.to_json())?;
        if passed {
            Ok(())
        } else {
            Err(Failure(
                FlexiplexStatus::VerificationFailed,
                format!("bundle {bundle} failed"),
            ))
        }
    })
}
