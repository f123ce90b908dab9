//! C ABI over the plethysm verification library.
//!
//! All entry points are panic-safe and return a [`PlethysmStatus`]; results
//! come back either as UTF-8 JSON strings (free them with
//! [`plethysm_string_free`]) or through out-pointers. Options live behind
//! an opaque handle created with [`plethysm_options_new`]. JSON payloads
//! match the structures the CLI prints, so bindings can share one parser.

use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};

use plethysm::conjectures::{
    blacklist, check_shape, count_shape, scan, verify_proof, CheckConfig, CheckMode,
};
use plethysm::exactlinalg::{certified_rank, Certification};
use plethysm::ortho::k_source;
use plethysm::partitions::Partition;
use plethysm::report::verdicts_to_jsonl;
use plethysm::Error;

/// Result of every C entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlethysmStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Arguments were structurally invalid (bad mode, m > n, …).
    InvalidArgument = 2,
    /// A string argument did not parse.
    ParseError = 3,
    /// A configured resource cap was hit.
    ResourceLimit = 4,
    /// The library panicked; this is a bug worth reporting.
    Internal = 5,
}

/// How a rank value returned by [`plethysm_rank_k`] was established.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlethysmCertification {
    CertifiedFull = 0,
    CertifiedExact = 1,
    ModPEvidence = 2,
}

/// Opaque configuration handle: enumeration cap, exact-engine cap and the
/// prime list for the modular rank engine.
pub struct PlethysmOptions {
    cfg: CheckConfig,
}

fn status_of(err: &Error) -> PlethysmStatus {
    if err.is_resource_limit() {
        PlethysmStatus::ResourceLimit
    } else if matches!(err, Error::Parse { .. }) {
        PlethysmStatus::ParseError
    } else {
        PlethysmStatus::InvalidArgument
    }
}

fn guarded(body: impl FnOnce() -> PlethysmStatus + UnwindSafe) -> PlethysmStatus {
    catch_unwind(body).unwrap_or(PlethysmStatus::Internal)
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string for the duration of
/// the call.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, PlethysmStatus> {
    if ptr.is_null() {
        return Err(PlethysmStatus::NullArgument);
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| PlethysmStatus::ParseError)
}

fn write_string(out: *mut *mut c_char, text: String) -> PlethysmStatus {
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            PlethysmStatus::Ok
        }
        Err(_) => PlethysmStatus::Internal,
    }
}

fn options_or_default(options: *const PlethysmOptions) -> CheckConfig {
    if options.is_null() {
        CheckConfig::default()
    } else {
        unsafe { (*options).cfg.clone() }
    }
}

fn mode_of(mode: c_int) -> Result<CheckMode, PlethysmStatus> {
    match mode {
        1 => Ok(CheckMode::Conjecture1),
        2 => Ok(CheckMode::Conjecture2),
        _ => Err(PlethysmStatus::InvalidArgument),
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn plethysm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Frees a string returned by any of the `*_json` functions. Null is a
/// no-op.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn plethysm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates an options handle with the default caps and primes.
#[no_mangle]
pub extern "C" fn plethysm_options_new() -> *mut PlethysmOptions {
    Box::into_raw(Box::new(PlethysmOptions {
        cfg: CheckConfig::default(),
    }))
}

/// # Safety
/// `options` must come from [`plethysm_options_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn plethysm_options_free(options: *mut PlethysmOptions) {
    if !options.is_null() {
        drop(Box::from_raw(options));
    }
}

/// Caps the number of tableaux a single enumeration may produce.
///
/// # Safety
/// `options` must be a live handle from [`plethysm_options_new`].
#[no_mangle]
pub unsafe extern "C" fn plethysm_options_set_max_enum(
    options: *mut PlethysmOptions,
    max_enum: u64,
) -> PlethysmStatus {
    if options.is_null() {
        return PlethysmStatus::NullArgument;
    }
    (*options).cfg.max_enum = max_enum;
    PlethysmStatus::Ok
}

/// Caps the side length accepted by the exact (fraction-free) rank engine.
///
/// # Safety
/// `options` must be a live handle from [`plethysm_options_new`].
#[no_mangle]
pub unsafe extern "C" fn plethysm_options_set_max_exact(
    options: *mut PlethysmOptions,
    max_exact: usize,
) -> PlethysmStatus {
    if options.is_null() {
        return PlethysmStatus::NullArgument;
    }
    (*options).cfg.policy.max_exact = max_exact;
    PlethysmStatus::Ok
}

/// Replaces the prime list for the modular rank engine. Each prime must be
/// an actual prime below 2^31; the list must be non-empty.
///
/// # Safety
/// `options` must be a live handle and `primes` must point to `len`
/// readable values.
#[no_mangle]
pub unsafe extern "C" fn plethysm_options_set_primes(
    options: *mut PlethysmOptions,
    primes: *const u64,
    len: usize,
) -> PlethysmStatus {
    if options.is_null() || primes.is_null() {
        return PlethysmStatus::NullArgument;
    }
    if len == 0 {
        return PlethysmStatus::InvalidArgument;
    }
    let slice = std::slice::from_raw_parts(primes, len);
    (*options).cfg.policy.primes = slice.to_vec();
    PlethysmStatus::Ok
}

/// Exact |H_λ| and |V_λ| plus the dominance comparison, as JSON.
///
/// # Safety
/// `shape` must be a valid NUL-terminated string and `out_json` a valid
/// out-pointer.
#[no_mangle]
pub unsafe extern "C" fn plethysm_count_json(
    shape: *const c_char,
    out_json: *mut *mut c_char,
) -> PlethysmStatus {
    if out_json.is_null() {
        return PlethysmStatus::NullArgument;
    }
    let shape = match read_str(shape) {
        Ok(s) => s.to_owned(),
        Err(status) => return status,
    };
    guarded(move || {
        let shape: Partition = match shape.parse() {
            Ok(p) => p,
            Err(err) => return status_of(&err),
        };
        let report = count_shape(&shape);
        write_string(out_json, serde_json::to_string(&report).expect("serializes"))
    })
}

/// Checks one shape; `mode` is 1 (row independence under dominance) or 2
/// (full rank). The verdict comes back as JSON.
///
/// # Safety
/// `shape` must be a valid NUL-terminated string, `out_json` a valid
/// out-pointer, and `options` null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plethysm_check_json(
    shape: *const c_char,
    mode: c_int,
    options: *const PlethysmOptions,
    out_json: *mut *mut c_char,
) -> PlethysmStatus {
    if out_json.is_null() {
        return PlethysmStatus::NullArgument;
    }
    let shape = match read_str(shape) {
        Ok(s) => s.to_owned(),
        Err(status) => return status,
    };
    let cfg = options_or_default(options);
    guarded(move || {
        let shape: Partition = match shape.parse() {
            Ok(p) => p,
            Err(err) => return status_of(&err),
        };
        let mode = match mode_of(mode) {
            Ok(m) => m,
            Err(status) => return status,
        };
        match check_shape(&shape, mode, &cfg) {
            Ok(verdict) => write_string(
                out_json,
                serde_json::to_string(&verdict).expect("serializes"),
            ),
            Err(err) => status_of(&err),
        }
    })
}

/// One verdict per partition of `n`, as JSON lines (same bytes as the CLI
/// scan).
///
/// # Safety
/// `out_jsonl` must be a valid out-pointer; `options` null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plethysm_scan_json(
    n: usize,
    mode: c_int,
    options: *const PlethysmOptions,
    out_jsonl: *mut *mut c_char,
) -> PlethysmStatus {
    if out_jsonl.is_null() {
        return PlethysmStatus::NullArgument;
    }
    let cfg = options_or_default(options);
    guarded(move || {
        let mode = match mode_of(mode) {
            Ok(m) => m,
            Err(status) => return status,
        };
        match scan(n, mode, &cfg) {
            Ok(verdicts) => write_string(out_jsonl, verdicts_to_jsonl(&verdicts)),
            Err(err) => status_of(&err),
        }
    })
}

/// Builds `M^{m,n}`, certifies its rank against the row count and compares
/// it with the rectangle matrix; JSON report.
///
/// # Safety
/// `out_json` must be a valid out-pointer; `options` null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plethysm_blacklist_json(
    m: usize,
    n: usize,
    options: *const PlethysmOptions,
    out_json: *mut *mut c_char,
) -> PlethysmStatus {
    if out_json.is_null() {
        return PlethysmStatus::NullArgument;
    }
    let cfg = options_or_default(options);
    guarded(move || match blacklist(m, n, &cfg) {
        Ok(report) => write_string(
            out_json,
            serde_json::to_string(&report).expect("serializes"),
        ),
        Err(err) => status_of(&err),
    })
}

/// Runs the identity suite for the two-row rectangle of width `n`; JSON
/// report with one record per checked identity.
///
/// # Safety
/// `out_json` must be a valid out-pointer; `options` null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plethysm_verify_proof_json(
    n: usize,
    options: *const PlethysmOptions,
    out_json: *mut *mut c_char,
) -> PlethysmStatus {
    if out_json.is_null() {
        return PlethysmStatus::NullArgument;
    }
    let cfg = options_or_default(options);
    guarded(move || match verify_proof(n, &cfg) {
        Ok(report) => write_string(
            out_json,
            serde_json::to_string(&report).expect("serializes"),
        ),
        Err(err) => status_of(&err),
    })
}

/// Certified rank of `K_λ` for the given shape. On success writes the rank
/// and how it was certified.
///
/// # Safety
/// `shape` must be a valid NUL-terminated string; `out_rank` and
/// `out_certification` must be valid out-pointers; `options` null or a
/// live handle.
#[no_mangle]
pub unsafe extern "C" fn plethysm_rank_k(
    shape: *const c_char,
    options: *const PlethysmOptions,
    out_rank: *mut u64,
    out_certification: *mut PlethysmCertification,
) -> PlethysmStatus {
    if out_rank.is_null() || out_certification.is_null() {
        return PlethysmStatus::NullArgument;
    }
    let shape = match read_str(shape) {
        Ok(s) => s.to_owned(),
        Err(status) => return status,
    };
    let cfg = options_or_default(options);
    guarded(move || {
        let shape: Partition = match shape.parse() {
            Ok(p) => p,
            Err(err) => return status_of(&err),
        };
        let source = match k_source(&shape, cfg.max_enum) {
            Ok(s) => s,
            Err(err) => return status_of(&err),
        };
        match certified_rank(&source, &cfg.policy) {
            Ok(report) => {
                *out_rank = report.rank as u64;
                *out_certification = match report.certification {
                    Certification::CertifiedFull => PlethysmCertification::CertifiedFull,
                    Certification::CertifiedExact => PlethysmCertification::CertifiedExact,
                    Certification::ModPEvidence => PlethysmCertification::ModPEvidence,
                };
                PlethysmStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}
