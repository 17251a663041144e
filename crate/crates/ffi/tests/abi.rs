use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use combq_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(combq_last_error()) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { combq_string_free(p) };
    s
}

fn parse(text: &str) -> *mut CombqCyclotomic {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { combq_cyclotomic_parse(c.as_ptr(), &mut out) }, CombqStatus::Ok, "{}", last_error());
    out
}

#[test]
fn cyclotomic_round_trip() {
    let a = parse("1/2*z - 1/2*z^3@8");
    let mut sq = ptr::null_mut();
    assert_eq!(unsafe { combq_cyclotomic_binary(CombqOp::Mul, a, a, &mut sq) }, CombqStatus::Ok);
    let mut rational = false;
    assert_eq!(unsafe { combq_cyclotomic_is_rational(sq, &mut rational) }, CombqStatus::Ok);
    assert!(rational);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { combq_cyclotomic_to_string(sq, &mut text) }, CombqStatus::Ok);
    assert_eq!(take_string(text), "1/2@8");
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { combq_cyclotomic_to_complex(a, &mut re, &mut im) }, CombqStatus::Ok);
    assert!((re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15 && im.abs() < 1e-15);

    let zero = parse("0");
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { combq_cyclotomic_binary(CombqOp::Div, a, zero, &mut q) }, CombqStatus::Contract);
    assert!(q.is_null());
    assert!(!last_error().is_empty());
    unsafe {
        combq_cyclotomic_free(a);
        combq_cyclotomic_free(sq);
        combq_cyclotomic_free(zero);
    }
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    let bad = CString::new("1/2*q@8").unwrap();
    assert_eq!(unsafe { combq_cyclotomic_parse(bad.as_ptr(), &mut out) }, CombqStatus::Parse);
    assert_eq!(unsafe { combq_cyclotomic_parse(ptr::null(), &mut out) }, CombqStatus::Null);
    assert_eq!(unsafe { combq_cyclotomic_root_of_unity(20_000, 1, &mut out) }, CombqStatus::Resource);
    assert!(last_error().contains("20000"), "{}", last_error());
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { combq_matrix_splitter(2, &mut m) }, CombqStatus::Contract);
    assert_eq!(unsafe { combq_matrix_splitter(8, ptr::null_mut()) }, CombqStatus::Null);
    let mut order = 0;
    assert_eq!(unsafe { combq_matrix_order(ptr::null(), 10, &mut order) }, CombqStatus::Null);
}

#[test]
fn matrices() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { combq_matrix_splitter(8, &mut s) }, CombqStatus::Ok);
    let mut order = 0;
    assert_eq!(unsafe { combq_matrix_order(s, 100, &mut order) }, CombqStatus::Ok);
    assert_eq!(order, 8);
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { combq_matrix_compose(s, s, &mut m) }, CombqStatus::Ok);
    let lits: Vec<CString> = ["0", "z^2@8", "z^2@8", "0"].iter().map(|s| CString::new(*s).unwrap()).collect();
    let ptrs: Vec<*const c_char> = lits.iter().map(|c| c.as_ptr()).collect();
    let mut mirror = ptr::null_mut();
    assert_eq!(unsafe { combq_matrix_from_literals(2, 2, ptrs.as_ptr(), &mut mirror) }, CombqStatus::Ok);
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    let mut eq = false;
    unsafe {
        assert_eq!(combq_matrix_get(m, 0, 1, &mut a), CombqStatus::Ok);
        assert_eq!(combq_matrix_get(mirror, 0, 1, &mut b), CombqStatus::Ok);
        assert_eq!(combq_cyclotomic_equal(a, b, &mut eq), CombqStatus::Ok);
        assert_eq!(combq_matrix_get(m, 2, 0, &mut a), CombqStatus::Contract);
    }
    assert!(eq);
    let mut unitary = false;
    assert_eq!(unsafe { combq_matrix_is_unitary(mirror, &mut unitary) }, CombqStatus::Ok);
    assert!(unitary);
    let (mut r, mut c) = (0, 0);
    assert_eq!(unsafe { combq_matrix_shape(mirror, &mut r, &mut c) }, CombqStatus::Ok);
    assert_eq!((r, c), (2, 2));
    unsafe {
        combq_cyclotomic_free(a);
        combq_cyclotomic_free(b);
        combq_matrix_free(s);
        combq_matrix_free(m);
        combq_matrix_free(mirror);
    }
}

#[test]
fn json_entry_points_match_the_cli_reports() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { combq_bomb_json(12, &mut out) }, CombqStatus::Ok);
    let bomb: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    let probs: Vec<&str> =
        bomb["outcomes"].as_array().unwrap().iter().map(|o| o["probability"]["exact"].as_str().unwrap()).collect();
    assert_eq!(probs, ["1/1", "1/2", "1/4", "1/4"]);

    assert_eq!(unsafe { combq_zeno_table_json(&mut out) }, CombqStatus::Ok);
    let table: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(table["rows"][1]["tau_z"], "2");

    assert_eq!(unsafe { combq_zeno_scan_json(100, 0, 6, &mut out) }, CombqStatus::Ok);
    let scan: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(scan["tau_z"], "25");
    assert_eq!(scan["series"].as_array().unwrap().len(), 101);

    let model = CString::new(
        r#"{"group":"cyclic_mz:8","observations":[{"t":0,"state":["1","0"]},{"t":1,"state":["1","0"]}],"bunches":[{"delta":1}]}"#,
    )
    .unwrap();
    assert_eq!(unsafe { combq_transport_json(model.as_ptr(), 12, &mut out) }, CombqStatus::Ok);
    let t: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(t["probability"]["exact"], "1/2");
    let path = CString::new("/etc/passwd").unwrap();
    assert_eq!(unsafe { combq_transport_json(path.as_ptr(), 12, &mut out) }, CombqStatus::Parse);
}

#[test]
fn header_declares_every_export() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(root.join("include/combq.h")).expect("generated header");
    let source = std::fs::read_to_string(root.join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() > 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct CombqCyclotomic CombqCyclotomic;"));
}

/// Compiles and runs a C client against the static library when a C
/// compiler is available.
#[test]
fn c_client_links_and_runs() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libcombq_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("combq_smoke");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C client failed to build");
    let out = Command::new(&exe).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}");
    assert!(stdout.contains("order 8 corner -1@8"), "{stdout}");
    assert!(stdout.contains("parse status 3") || stdout.contains("parse status 2"), "{stdout}");
    assert!(stdout.contains("bomb has good-intact 1"), "{stdout}");
}
