//! Exercises the C ABI the way a foreign binding would: through raw
//! pointers, status codes, and the string-ownership contract.

use std::ffi::{CStr, CString};
use std::ptr;

use fso_ffi::*;

fn c(text: &str) -> CString {
    CString::new(text).unwrap()
}

unsafe fn take_string(ptr: *mut std::ffi::c_char) -> String {
    assert!(!ptr.is_null());
    let text = CStr::from_ptr(ptr).to_str().unwrap().to_string();
    fso_string_free(ptr);
    text
}

unsafe fn last_error() -> String {
    take_string(fso_last_error_message())
}

#[test]
fn seed_handles_round_trip() {
    unsafe {
        let mut seed: *mut FsoSeed = ptr::null_mut();
        let status = fso_seed_parse(c("3102").as_ptr(), &mut seed);
        assert_eq!(status, FsoStatus::Ok);
        assert_eq!(take_string(fso_seed_canonical_text(seed)), "0123");

        let mut size = 0u64;
        assert_eq!(fso_lattice_size(seed, &mut size), FsoStatus::Ok);
        assert_eq!(size, 16);

        fso_seed_free(seed);
    }
}

#[test]
fn invalid_seed_reports_status_and_message() {
    unsafe {
        let mut seed: *mut FsoSeed = ptr::null_mut();
        let status = fso_seed_parse(c("01a").as_ptr(), &mut seed);
        assert_eq!(status, FsoStatus::InvalidInput);
        assert!(seed.is_null());
        assert!(last_error().contains("invalid character"));

        assert_eq!(
            fso_seed_parse(ptr::null(), &mut seed),
            FsoStatus::NullPointer
        );
    }
}

#[test]
fn subseed_and_modularity_through_the_abi() {
    unsafe {
        let mut sub: *mut FsoSeed = ptr::null_mut();
        let mut sup: *mut FsoSeed = ptr::null_mut();
        assert_eq!(
            fso_seed_parse(c("011123334").as_ptr(), &mut sub),
            FsoStatus::Ok
        );
        assert_eq!(
            fso_seed_parse(c("011112233334").as_ptr(), &mut sup),
            FsoStatus::Ok
        );

        let mut contained = false;
        assert_eq!(fso_seed_is_subseed(sub, sup, &mut contained), FsoStatus::Ok);
        assert!(contained);
        assert_eq!(fso_seed_is_subseed(sup, sub, &mut contained), FsoStatus::Ok);
        assert!(!contained);

        let mut report = FsoModularityReport {
            injective: false,
            order_embedding: false,
            edge_preserving: false,
            nodes_covered: 0,
            nodes_total: 0,
        };
        assert_eq!(
            fso_verify_modularity(sub, sup, 1_000_000, &mut report),
            FsoStatus::Ok
        );
        assert!(report.injective && report.order_embedding && report.edge_preserving);
        assert_eq!(report.nodes_covered, 128);
        assert_eq!(report.nodes_total, 300);

        // not a subseed at all: CheckFailed, mirroring the CLI exit code
        let mut five: *mut FsoSeed = ptr::null_mut();
        assert_eq!(fso_seed_parse(c("05").as_ptr(), &mut five), FsoStatus::Ok);
        assert_eq!(
            fso_verify_modularity(five, sub, 1_000_000, &mut report),
            FsoStatus::CheckFailed
        );

        fso_seed_free(five);
        fso_seed_free(sub);
        fso_seed_free(sup);
    }
}

#[test]
fn lattice_handles_expose_counts_and_budget() {
    unsafe {
        let mut seed: *mut FsoSeed = ptr::null_mut();
        assert_eq!(
            fso_seed_parse(c("011123334").as_ptr(), &mut seed),
            FsoStatus::Ok
        );

        let mut lattice: *mut FsoLattice = ptr::null_mut();
        assert_eq!(fso_lattice_build(seed, 10, &mut lattice), FsoStatus::BudgetExceeded);
        assert!(lattice.is_null());
        assert!(last_error().contains("exceeds budget"));

        assert_eq!(fso_lattice_build(seed, 1_000_000, &mut lattice), FsoStatus::Ok);
        assert_eq!(fso_lattice_node_count(lattice), 128);
        assert!(fso_lattice_edge_count(lattice) > 0);

        fso_lattice_free(lattice);
        fso_seed_free(seed);
    }
}

#[test]
fn min_replicas_matches_the_library() {
    unsafe {
        let mut k = 0u32;
        assert_eq!(fso_min_replicas(0.5, 0.05, &mut k), FsoStatus::Ok);
        assert_eq!(k, 5);
        assert_eq!(fso_min_replicas(1.0, 0.05, &mut k), FsoStatus::InvalidInput);
    }
}

#[test]
fn json_runner_covers_every_command() {
    let cases = [
        ("develop", r#"{"seed": "01"}"#),
        (
            "modularity",
            r#"{"sub_seed": "011123334", "super_seed": "011112233334"}"#,
        ),
        (
            "walk",
            r#"{"seed": "01", "steps": 500, "laziness": 0.5, "rng_seed": 4}"#,
        ),
        (
            "canon",
            r#"{
                "levels": [[{"id": "a1", "capabilities": ["a"]}]],
                "events": [{"id": 1, "focal_level": 0, "required_roles": ["a"],
                            "arrival_tick": 0, "service_ticks": 1}]
            }"#,
        ),
        (
            "channel",
            r#"{
                "messages": 50, "rng_seed": 2,
                "channels": [{"name": "c", "kind": "constant", "p": 0.0}],
                "strategies": [{"name": "s", "kind": "entelechic", "epsilon": 0.05}]
            }"#,
        ),
        (
            "sort",
            r#"{
                "monads": [{"id": "m1", "genotype": "0", "intrinsic_quality": 1.0}],
                "environment": {"capacity": 1}
            }"#,
        ),
    ];
    for (command, config) in cases {
        unsafe {
            let mut out: *mut std::ffi::c_char = ptr::null_mut();
            let status = fso_run_json(c(command).as_ptr(), c(config).as_ptr(), &mut out);
            assert_eq!(status, FsoStatus::Ok, "command {command}");
            let json = take_string(out);
            let value: serde_json::Value = serde_json::from_str(&json).unwrap();
            assert_eq!(value["schema_version"], 1, "command {command}");
        }
    }
}

#[test]
fn json_runner_rejects_unknown_commands_and_bad_configs() {
    unsafe {
        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(
            fso_run_json(c("nope").as_ptr(), c("{}").as_ptr(), &mut out),
            FsoStatus::InvalidInput
        );
        assert!(last_error().contains("unknown command"));

        assert_eq!(
            fso_run_json(c("walk").as_ptr(), c("not json").as_ptr(), &mut out),
            FsoStatus::InvalidInput
        );

        // budget failures keep their dedicated status through the runner
        assert_eq!(
            fso_run_json(
                c("develop").as_ptr(),
                c(r#"{"seed": "011123334", "budget": 3}"#).as_ptr(),
                &mut out
            ),
            FsoStatus::BudgetExceeded
        );
    }
}

#[test]
fn svg_rendering_is_deterministic_through_the_abi() {
    let config = c(r#"{"seed": "011123334", "highlight": "011123334"}"#);
    unsafe {
        let mut first: *mut std::ffi::c_char = ptr::null_mut();
        let mut second: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(
            fso_render_develop_svg(config.as_ptr(), &mut first),
            FsoStatus::Ok
        );
        assert_eq!(
            fso_render_develop_svg(config.as_ptr(), &mut second),
            FsoStatus::Ok
        );
        let a = take_string(first);
        let b = take_string(second);
        assert_eq!(a, b);
        assert!(a.starts_with("<?xml"));
    }
}
