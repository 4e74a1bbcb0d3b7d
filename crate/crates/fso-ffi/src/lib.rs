//! C ABI for the fso toolkit.
//!
//! Handles are opaque pointers owned by Rust; every constructor has a
//! matching destructor, and strings returned to the caller must be released
//! with [`fso_string_free`]. Functions report an [`FsoStatus`]; on any
//! non-OK status a human-readable message is available from
//! [`fso_last_error_message`] (thread-local). The generated header lives in
//! `include/fso.h`.
//!
//! Besides the handle-based seed/lattice API, [`fso_run_json`] exposes the
//! config-driven runners (develop, modularity, walk, canon, channel, sort)
//! with the same JSON schemas the CLI uses, so bindings in other languages
//! get the full toolkit from one entry point.

// pointer contracts are stated on each function; callers are foreign code
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fso_core::canon::ScenarioConfig;
use fso_core::error::Error;
use fso_core::jobs::{
    render_develop_svg, run_canon, run_channel, run_develop, run_modularity, run_sort, run_walk,
    ChannelRequest, DevelopRequest, ModularityRequest, SortRequest, WalkRequest,
};
use fso_core::lattice::{build_lattice, lattice_size, SonLattice};
use fso_core::resilience::min_replicas;
use fso_core::seed::{is_subseed, RoleSeed};
use fso_core::svg::SvgStyle;

/// Result code of every fallible call. Mirrors the CLI exit codes for the
/// first four values.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsoStatus {
    Ok = 0,
    /// A verification check did not hold (e.g. modularity refinement).
    CheckFailed = 1,
    InvalidInput = 2,
    BudgetExceeded = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    InternalError = 6,
}

/// Opaque canonical role seed.
pub struct FsoSeed(RoleSeed);

/// Opaque SON lattice.
pub struct FsoLattice(SonLattice);

/// Outcome of the conservation-of-modularity check.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FsoModularityReport {
    pub injective: bool,
    pub order_embedding: bool,
    pub edge_preserving: bool,
    pub nodes_covered: u64,
    pub nodes_total: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).ok();
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

fn status_of(err: &Error) -> FsoStatus {
    match err {
        Error::BudgetExceeded { .. } => FsoStatus::BudgetExceeded,
        Error::NotSubseed { .. } => FsoStatus::CheckFailed,
        _ => FsoStatus::InvalidInput,
    }
}

fn fail(err: Error) -> FsoStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

/// Runs `body` with panics converted to `InternalError`.
fn guarded(body: impl FnOnce() -> FsoStatus) -> FsoStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".to_string());
            FsoStatus::InternalError
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, FsoStatus> {
    if ptr.is_null() {
        set_error("null pointer argument".into());
        return Err(FsoStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        FsoStatus::InvalidUtf8
    })
}

fn give_string(text: String) -> *mut c_char {
    CString::new(text.replace('\0', " "))
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Parses a seed string (compact digits or comma-separated role ids) into a
/// canonical seed handle. The handle must be released with `fso_seed_free`.
#[no_mangle]
pub unsafe extern "C" fn fso_seed_parse(text: *const c_char, out: *mut *mut FsoSeed) -> FsoStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return FsoStatus::NullPointer;
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match RoleSeed::parse(text) {
            Ok(seed) => {
                *out = Box::into_raw(Box::new(FsoSeed(seed)));
                clear_error();
                FsoStatus::Ok
            }
            Err(err) => fail(err),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn fso_seed_free(seed: *mut FsoSeed) {
    if !seed.is_null() {
        drop(Box::from_raw(seed));
    }
}

/// Canonical text of the seed; release with `fso_string_free`. Null if the
/// handle is null.
#[no_mangle]
pub unsafe extern "C" fn fso_seed_canonical_text(seed: *const FsoSeed) -> *mut c_char {
    if seed.is_null() {
        return ptr::null_mut();
    }
    give_string((*seed).0.canonical_text().to_string())
}

/// Multiset containment: does every role of `sub` fit inside `sup`?
#[no_mangle]
pub unsafe extern "C" fn fso_seed_is_subseed(
    sub: *const FsoSeed,
    sup: *const FsoSeed,
    out: *mut bool,
) -> FsoStatus {
    guarded(|| {
        if sub.is_null() || sup.is_null() || out.is_null() {
            set_error("null pointer argument".into());
            return FsoStatus::NullPointer;
        }
        *out = is_subseed(&(*sub).0, &(*sup).0);
        clear_error();
        FsoStatus::Ok
    })
}

/// Closed-form node count of the seed's development (no materialization).
#[no_mangle]
pub unsafe extern "C" fn fso_lattice_size(seed: *const FsoSeed, out: *mut u64) -> FsoStatus {
    guarded(|| {
        if seed.is_null() || out.is_null() {
            set_error("null pointer argument".into());
            return FsoStatus::NullPointer;
        }
        match lattice_size(&(*seed).0) {
            Ok(size) if size <= u64::MAX as u128 => {
                *out = size as u64;
                clear_error();
                FsoStatus::Ok
            }
            Ok(size) => {
                set_error(format!("lattice size {size} exceeds u64"));
                FsoStatus::BudgetExceeded
            }
            Err(err) => fail(err),
        }
    })
}

/// Materializes the lattice, refusing to exceed `budget` nodes. The handle
/// must be released with `fso_lattice_free`.
#[no_mangle]
pub unsafe extern "C" fn fso_lattice_build(
    seed: *const FsoSeed,
    budget: u64,
    out: *mut *mut FsoLattice,
) -> FsoStatus {
    guarded(|| {
        if seed.is_null() || out.is_null() {
            set_error("null pointer argument".into());
            return FsoStatus::NullPointer;
        }
        match build_lattice(&(*seed).0, budget) {
            Ok(lattice) => {
                *out = Box::into_raw(Box::new(FsoLattice(lattice)));
                clear_error();
                FsoStatus::Ok
            }
            Err(err) => fail(err),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn fso_lattice_free(lattice: *mut FsoLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// Number of nodes, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn fso_lattice_node_count(lattice: *const FsoLattice) -> u64 {
    if lattice.is_null() {
        return 0;
    }
    (*lattice).0.node_count() as u64
}

/// Number of Hasse edges, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn fso_lattice_edge_count(lattice: *const FsoLattice) -> u64 {
    if lattice.is_null() {
        return 0;
    }
    (*lattice).0.edges().len() as u64
}

/// Checks that `sub`'s development embeds into `sup`'s (injective,
/// order-embedding, edge-preserving). Returns `CheckFailed` when `sub` is
/// not a subseed of `sup` at all.
#[no_mangle]
pub unsafe extern "C" fn fso_verify_modularity(
    sub: *const FsoSeed,
    sup: *const FsoSeed,
    budget: u64,
    out: *mut FsoModularityReport,
) -> FsoStatus {
    guarded(|| {
        if sub.is_null() || sup.is_null() || out.is_null() {
            set_error("null pointer argument".into());
            return FsoStatus::NullPointer;
        }
        match fso_core::modularity::verify_modularity(&(*sub).0, &(*sup).0, budget) {
            Ok(report) => {
                *out = FsoModularityReport {
                    injective: report.injective,
                    order_embedding: report.order_embedding,
                    edge_preserving: report.edge_preserving,
                    nodes_covered: report.nodes_covered as u64,
                    nodes_total: report.nodes_total as u64,
                };
                clear_error();
                if report.pass() {
                    FsoStatus::Ok
                } else {
                    set_error("modularity checks failed".into());
                    FsoStatus::CheckFailed
                }
            }
            Err(err) => fail(err),
        }
    })
}

/// Smallest replica count k with p^k <= epsilon.
#[no_mangle]
pub unsafe extern "C" fn fso_min_replicas(
    loss_probability: f64,
    epsilon: f64,
    out: *mut u32,
) -> FsoStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return FsoStatus::NullPointer;
        }
        match min_replicas(loss_probability, epsilon) {
            Ok(k) => {
                *out = k;
                clear_error();
                FsoStatus::Ok
            }
            Err(err) => fail(err),
        }
    })
}

fn dispatch_json(command: &str, config: &str) -> Result<String, Error> {
    let bad = |e: serde_json::Error| Error::InvalidConfig(e.to_string());
    match command {
        "develop" => {
            let request: DevelopRequest = serde_json::from_str(config).map_err(bad)?;
            let developed = run_develop(&request)?;
            serde_json::to_string_pretty(&developed.output).map_err(bad)
        }
        "modularity" => {
            let request: ModularityRequest = serde_json::from_str(config).map_err(bad)?;
            let report = run_modularity(&request)?;
            serde_json::to_string_pretty(&report).map_err(bad)
        }
        "walk" => {
            let request: WalkRequest = serde_json::from_str(config).map_err(bad)?;
            let output = run_walk(&request)?;
            serde_json::to_string_pretty(&output.summary).map_err(bad)
        }
        "canon" => {
            let request: ScenarioConfig = serde_json::from_str(config).map_err(bad)?;
            let trace = run_canon(&request)?;
            serde_json::to_string_pretty(&trace).map_err(bad)
        }
        "channel" => {
            let request: ChannelRequest = serde_json::from_str(config).map_err(bad)?;
            let output = run_channel(&request)?;
            serde_json::to_string_pretty(&output).map_err(bad)
        }
        "sort" => {
            let request: SortRequest = serde_json::from_str(config).map_err(bad)?;
            let output = run_sort(&request)?;
            serde_json::to_string_pretty(&output).map_err(bad)
        }
        other => Err(Error::InvalidConfig(format!(
            "unknown command {other:?} (develop|modularity|walk|canon|channel|sort)"
        ))),
    }
}

/// Runs a config-driven job and returns its JSON artifact. `command` is one
/// of develop, modularity, walk, canon, channel, sort; `config_json` uses
/// the same schemas as the CLI config files (docs/formats.md). The returned
/// string must be released with `fso_string_free`.
#[no_mangle]
pub unsafe extern "C" fn fso_run_json(
    command: *const c_char,
    config_json: *const c_char,
    out_json: *mut *mut c_char,
) -> FsoStatus {
    guarded(|| {
        if out_json.is_null() {
            set_error("null output pointer".into());
            return FsoStatus::NullPointer;
        }
        let command = match read_str(command) {
            Ok(c) => c,
            Err(status) => return status,
        };
        let config = match read_str(config_json) {
            Ok(c) => c,
            Err(status) => return status,
        };
        match dispatch_json(command, config) {
            Ok(json) => {
                *out_json = give_string(json);
                clear_error();
                FsoStatus::Ok
            }
            Err(err) => fail(err),
        }
    })
}

/// Renders the SVG figure for a develop request (same JSON schema as
/// `fso_run_json("develop", ...)`). Release the string with
/// `fso_string_free`.
#[no_mangle]
pub unsafe extern "C" fn fso_render_develop_svg(
    config_json: *const c_char,
    out_svg: *mut *mut c_char,
) -> FsoStatus {
    guarded(|| {
        if out_svg.is_null() {
            set_error("null output pointer".into());
            return FsoStatus::NullPointer;
        }
        let config = match read_str(config_json) {
            Ok(c) => c,
            Err(status) => return status,
        };
        let request: DevelopRequest = match serde_json::from_str(config) {
            Ok(r) => r,
            Err(e) => return fail(Error::InvalidConfig(e.to_string())),
        };
        match run_develop(&request) {
            Ok(developed) => {
                let svg = render_develop_svg(&developed, &SvgStyle::default());
                *out_svg = give_string(svg);
                clear_error();
                FsoStatus::Ok
            }
            Err(err) => fail(err),
        }
    })
}

/// Message for the most recent error on this thread, or null. Release with
/// `fso_string_free`.
#[no_mangle]
pub unsafe extern "C" fn fso_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(message) => give_string(message.to_string_lossy().into_owned()),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn fso_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
