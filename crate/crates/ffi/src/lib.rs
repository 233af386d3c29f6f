//! C interface to spectra-lab.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every call returns an [`SlStatus`];
//! on failure [`sl_last_error`] describes what went wrong on this thread.
//! Strings returned by the library are released with [`sl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spectra_lab::cantor::{hausdorff_dim, sumset_contains_interval, thickness, CertificateStatus, DimensionOptions, RegularCantorSet};
use spectra_lab::cli::{self, ExperimentConfig, Rigor, RunReport};
use spectra_lab::{Error, SubshiftSft};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    ResourceCap = 4,
    NonConvergence = 5,
    Internal = 6,
    Panic = 7,
}

/// A regular Cantor set.
pub struct SlCantorSet(RegularCantorSet);

/// A subshift of finite type.
pub struct SlSubshift(SubshiftSft);

/// A finished run report.
pub struct SlReport(RunReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(SlStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::ResourceCap { .. } => SlStatus::ResourceCap,
            Error::NonConvergence { .. } => SlStatus::NonConvergence,
            Error::Io(_) => SlStatus::Internal,
            _ => SlStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SlStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            SlStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(SlStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(SlStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn owned_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| Failure(SlStatus::Internal, e.to_string()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn sl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a Cantor set from a name such as `midthird`, `affine:1/4` or
/// `C(2)`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out_set` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_cantor_set_new(name: *const c_char, out_set: *mut *mut SlCantorSet) -> SlStatus {
    guard(|| {
        let slot = out(out_set, "out_set")?;
        *slot = ptr::null_mut();
        let set = RegularCantorSet::from_name(text(name, "name")?)?;
        *slot = Box::into_raw(Box::new(SlCantorSet(set)));
        Ok(())
    })
}

/// # Safety
/// `set` must come from [`sl_cantor_set_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sl_cantor_set_free(set: *mut SlCantorSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Encloses the Hausdorff dimension in `[*lo, *hi]` with width at most `tol`.
///
/// # Safety
/// `set` must be a live handle; `lo` and `hi` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_cantor_set_dimension(
    set: *const SlCantorSet,
    tol: f64,
    lo: *mut f64,
    hi: *mut f64,
) -> SlStatus {
    guard(|| {
        let set = handle(set, "set")?;
        let (lo, hi) = (out(lo, "lo")?, out(hi, "hi")?);
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Failure(SlStatus::InvalidArgument, format!("tol must be positive, got {tol}")));
        }
        let d = hausdorff_dim(&set.0, DimensionOptions { tol, ..Default::default() })?;
        *lo = d.lo;
        *hi = d.hi;
        Ok(())
    })
}

/// Certified lower bound on the thickness from cylinders up to `depth`.
///
/// # Safety
/// `set` must be a live handle; `lower` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_cantor_set_thickness(set: *const SlCantorSet, depth: usize, lower: *mut f64) -> SlStatus {
    guard(|| {
        let set = handle(set, "set")?;
        let lower = out(lower, "lower")?;
        *lower = thickness(&set.0, depth)?.lower_bound;
        Ok(())
    })
}

/// Tries to certify `[a, b]` inside `k1 + k2` refining to at most `depth`.
/// `*certified` is false when the search stops without a certificate.
///
/// # Safety
/// `k1` and `k2` must be live handles; `certified` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_sumset_certify(
    k1: *const SlCantorSet,
    k2: *const SlCantorSet,
    a: f64,
    b: f64,
    depth: usize,
    certified: *mut bool,
) -> SlStatus {
    guard(|| {
        let (k1, k2) = (handle(k1, "k1")?, handle(k2, "k2")?);
        let certified = out(certified, "certified")?;
        let cert = sumset_contains_interval(&k1.0, &k2.0, (a, b), depth)?;
        *certified = cert.status == CertificateStatus::Certified;
        Ok(())
    })
}

/// The full shift on `k` symbols.
///
/// # Safety
/// `out_shift` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_subshift_full(k: usize, out_shift: *mut *mut SlSubshift) -> SlStatus {
    guard(|| {
        let slot = out(out_shift, "out_shift")?;
        *slot = ptr::null_mut();
        if k == 0 {
            return Err(Failure(SlStatus::InvalidArgument, "k must be positive".into()));
        }
        *slot = Box::into_raw(Box::new(SlSubshift(SubshiftSft::full_shift(k))));
        Ok(())
    })
}

/// Parses a subshift from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_shift` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_subshift_from_json(json: *const c_char, out_shift: *mut *mut SlSubshift) -> SlStatus {
    guard(|| {
        let slot = out(out_shift, "out_shift")?;
        *slot = ptr::null_mut();
        let s = SubshiftSft::from_json(text(json, "json")?)?;
        *slot = Box::into_raw(Box::new(SlSubshift(s)));
        Ok(())
    })
}

/// # Safety
/// `shift` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sl_subshift_free(shift: *mut SlSubshift) {
    if !shift.is_null() {
        drop(Box::from_raw(shift));
    }
}

/// JSON form of a subshift. Release with [`sl_string_free`].
///
/// # Safety
/// `shift` must be a live handle; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_subshift_to_json(shift: *const SlSubshift, out_json: *mut *mut c_char) -> SlStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        *slot = ptr::null_mut();
        *slot = owned_string(handle(shift, "shift")?.0.to_json())?;
        Ok(())
    })
}

/// The subshift forbidding `word`, written as symbol labels separated by
/// spaces or commas, or as a run of single-character labels.
///
/// # Safety
/// `shift` must be a live handle, `word` NUL-terminated, `out_shift` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_subshift_avoid_word(
    shift: *const SlSubshift,
    word: *const c_char,
    out_shift: *mut *mut SlSubshift,
) -> SlStatus {
    guard(|| {
        let slot = out(out_shift, "out_shift")?;
        *slot = ptr::null_mut();
        let s = &handle(shift, "shift")?.0;
        let w = s.parse_word(text(word, "word")?)?;
        *slot = Box::into_raw(Box::new(SlSubshift(s.avoid_word(&w)?)));
        Ok(())
    })
}

/// Encloses the topological entropy in `[*lo, *hi]`.
///
/// # Safety
/// `shift` must be a live handle; `lo` and `hi` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_subshift_entropy(shift: *const SlSubshift, tol: f64, lo: *mut f64, hi: *mut f64) -> SlStatus {
    guard(|| {
        let s = handle(shift, "shift")?;
        let (lo, hi) = (out(lo, "lo")?, out(hi, "hi")?);
        let h = s.0.entropy(tol)?;
        *lo = h.lo();
        *hi = h.hi();
        Ok(())
    })
}

/// Number of points fixed by the `p`-th power of the shift.
///
/// # Safety
/// `shift` must be a live handle; `count` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_subshift_fixed_points(shift: *const SlSubshift, p: usize, count: *mut u64) -> SlStatus {
    guard(|| {
        let s = handle(shift, "shift")?;
        let count = out(count, "count")?;
        if p == 0 {
            return Err(Failure(SlStatus::InvalidArgument, "p must be positive".into()));
        }
        let n = s.0.fixed_point_count(p);
        *count = u64::try_from(n).map_err(|_| Failure(SlStatus::ResourceCap, format!("{n} fixed points do not fit in 64 bits")))?;
        Ok(())
    })
}

/// Runs an experiment configuration given as JSON, as the command line
/// tool would, without writing any files.
///
/// # Safety
/// `config_json` must be NUL-terminated and `out_report` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_run(config_json: *const c_char, out_report: *mut *mut SlReport) -> SlStatus {
    guard(|| {
        let slot = out(out_report, "out_report")?;
        *slot = ptr::null_mut();
        let config = ExperimentConfig::from_json(text(config_json, "config_json")?)
            .map_err(|e| Failure(SlStatus::InvalidArgument, e.to_string()))?;
        cli::init_threads()?;
        let report = cli::run(&config).map_err(|f| Failure(SlStatus::InvalidArgument, f.messages.join("\n")))?;
        *slot = Box::into_raw(Box::new(SlReport(report)));
        Ok(())
    })
}

/// # Safety
/// `report` must come from [`sl_run`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sl_report_free(report: *mut SlReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Full report as pretty JSON. Release with [`sl_string_free`].
///
/// # Safety
/// `report` must be a live handle; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_report_to_json(report: *const SlReport, out_json: *mut *mut c_char) -> SlStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        *slot = ptr::null_mut();
        *slot = owned_string(handle(report, "report")?.0.to_json_pretty())?;
        Ok(())
    })
}

/// Report without provenance, as compact JSON. Equal configurations give
/// equal payloads. Release with [`sl_string_free`].
///
/// # Safety
/// `report` must be a live handle; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_report_payload(report: *const SlReport, out_json: *mut *mut c_char) -> SlStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        *slot = ptr::null_mut();
        *slot = owned_string(handle(report, "report")?.0.payload())?;
        Ok(())
    })
}

/// Whether every attempted certificate in the run succeeded, and whether
/// the results are certified rather than heuristic.
///
/// # Safety
/// `report` must be a live handle; both outputs writable.
#[no_mangle]
pub unsafe extern "C" fn sl_report_status(
    report: *const SlReport,
    certificate_ok: *mut bool,
    certified: *mut bool,
) -> SlStatus {
    guard(|| {
        let r = &handle(report, "report")?.0;
        *out(certificate_ok, "certificate_ok")? = r.certificate_ok;
        *out(certified, "certified")? = r.rigor == Rigor::Certified;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn last() -> String {
        unsafe { CStr::from_ptr(sl_last_error()) }.to_string_lossy().into_owned()
    }

    #[test]
    fn errors_are_reported() {
        let mut set = ptr::null_mut();
        let st = unsafe { sl_cantor_set_new(c"nonsense".as_ptr(), &mut set) };
        assert_eq!(st, SlStatus::InvalidArgument);
        assert!(set.is_null());
        assert!(!last().is_empty());
        let st = unsafe { sl_cantor_set_new(ptr::null(), &mut set) };
        assert_eq!(st, SlStatus::NullPointer);
        assert!(last().contains("name"));
        let mut lo = 0.0;
        let st = unsafe { sl_cantor_set_thickness(ptr::null(), 4, &mut lo) };
        assert_eq!(st, SlStatus::NullPointer);
    }

    #[test]
    fn success_clears_error() {
        let mut set = ptr::null_mut();
        unsafe { sl_cantor_set_new(c"bogus".as_ptr(), &mut set) };
        assert!(!sl_last_error().is_null());
        assert_eq!(unsafe { sl_cantor_set_new(c"midthird".as_ptr(), &mut set) }, SlStatus::Ok);
        assert!(sl_last_error().is_null());
        unsafe { sl_cantor_set_free(set) };
    }

    #[test]
    fn invalid_utf8() {
        let bad = [0xffu8, 0xfe, 0];
        let mut set = ptr::null_mut();
        let st = unsafe { sl_cantor_set_new(bad.as_ptr().cast(), &mut set) };
        assert_eq!(st, SlStatus::InvalidUtf8);
    }

    #[test]
    fn version() {
        let v = unsafe { CStr::from_ptr(sl_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
