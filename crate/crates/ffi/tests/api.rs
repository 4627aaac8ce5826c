use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use bellkit_ffi::*;

fn last_error() -> String {
    let p = bk_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn matrix_round_trip_and_mul() {
    let re = [0.0, 1.0, 1.0, 0.0];
    let im = [0.0, 0.0, 0.0, 0.0];
    let mut x = ptr::null_mut();
    unsafe {
        assert_eq!(bk_matrix_new(2, 2, re.as_ptr(), im.as_ptr(), &mut x), BkStatus::Ok);
        let mut xx = ptr::null_mut();
        assert_eq!(bk_matrix_mul(x, x, &mut xx), BkStatus::Ok);
        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(bk_matrix_get(xx, 0, 0, &mut a, &mut b), BkStatus::Ok);
        assert_eq!((a, b), (1.0, 0.0));
        assert_eq!(bk_matrix_get(xx, 0, 1, &mut a, &mut b), BkStatus::Ok);
        assert_eq!(a, 0.0);
        assert_eq!(bk_matrix_get(xx, 2, 0, &mut a, &mut b), BkStatus::InvalidArgument);
        let (mut r, mut c) = (0, 0);
        assert_eq!(bk_matrix_shape(xx, &mut r, &mut c), BkStatus::Ok);
        assert_eq!((r, c), (2, 2));
        bk_matrix_free(xx);
        bk_matrix_free(x);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(bk_matrix_new(2, 2, ptr::null(), ptr::null(), &mut m), BkStatus::NullPointer);
        assert!(last_error().contains("re"));
        assert_eq!(bk_bell_transform(0, 1, &mut m), BkStatus::InvalidArgument);
        assert!(m.is_null());
        assert_eq!(bk_twist(99, &mut m), BkStatus::SizeLimit);
        assert_eq!(bk_multi_bell(2, 4, 0, &mut m), BkStatus::InvalidArgument);
        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        assert_eq!(bk_twist(1, &mut a), BkStatus::Ok);
        assert_eq!(bk_twist(2, &mut b), BkStatus::Ok);
        let mut out = 0.0;
        assert_eq!(bk_matrix_residual(a, b, &mut out), BkStatus::ShapeMismatch);
        assert!(last_error().contains("shape"));
        bk_matrix_free(a);
        bk_matrix_free(b);
        bk_matrix_free(ptr::null_mut());
        bk_report_free(ptr::null_mut());
        assert_eq!(bk_report_passed(ptr::null()), -1);
    }
}

#[test]
fn bell_transform_solves_ybe() {
    for (e, h) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let mut b = ptr::null_mut();
        let mut r = 1.0;
        unsafe {
            assert_eq!(bk_bell_transform(e, h, &mut b), BkStatus::Ok);
            assert_eq!(bk_yang_baxter_residual(b, 2, &mut r), BkStatus::Ok);
            bk_matrix_free(b);
        }
        assert!(r < 1e-12);
    }
}

#[test]
fn multi_bell_matches_twisted_pairs() {
    let mut state = ptr::null_mut();
    unsafe {
        assert_eq!(bk_multi_bell(1, 0, 0, &mut state), BkStatus::Ok);
        let (mut a, mut b) = (0.0, 0.0);
        bk_matrix_get(state, 0, 0, &mut a, &mut b);
        assert!((a - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        bk_matrix_get(state, 3, 0, &mut a, &mut b);
        assert!((a - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        bk_matrix_free(state);
    }
}

#[test]
fn suites_run_through_json_params() {
    let name = CString::new("gram").unwrap();
    let params = CString::new(r#"{"family":"qudit","d":4}"#).unwrap();
    let mut rep = ptr::null_mut();
    unsafe {
        assert_eq!(bk_run_suite(name.as_ptr(), params.as_ptr(), &mut rep), BkStatus::Ok);
        assert_eq!(bk_report_passed(rep), 1);
        assert!(bk_report_case_count(rep) > 0);
        assert!(bk_report_max_residual(rep) < 1e-12);
        let json = CStr::from_ptr(bk_report_json(rep)).to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(json).unwrap();
        assert_eq!(v["schema"], "bellkit-report/1");
        assert_eq!(v["params"]["dim"], "16");
        bk_report_free(rep);

        let ybe = CString::new("ybe").unwrap();
        let cnot = CString::new(r#"{"gate":"cnot"}"#).unwrap();
        assert_eq!(bk_run_suite(ybe.as_ptr(), cnot.as_ptr(), &mut rep), BkStatus::Ok);
        assert_eq!(bk_report_passed(rep), 0);
        bk_report_free(rep);

        let bad = CString::new(r#"{"family":3}"#).unwrap();
        assert_eq!(bk_run_suite(name.as_ptr(), bad.as_ptr(), &mut rep), BkStatus::BadJson);
        let missing = CString::new("nope").unwrap();
        assert_eq!(bk_run_suite(missing.as_ptr(), ptr::null(), &mut rep), BkStatus::InvalidArgument);
        assert!(last_error().contains("unknown suite"));
    }
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(bk_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|deps| deps.parent()).unwrap().to_path_buf()
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "bellkit.h"

int main(void) {
    BkMatrix *b = NULL;
    double r = 1.0;
    if (bk_bell_transform(-1, 1, &b) != BkStatus_Ok) return 10;
    if (bk_yang_baxter_residual(b, 2, &r) != BkStatus_Ok) return 11;
    bk_matrix_free(b);
    if (r > 1e-12) return 12;
    if (bk_twist(0, &b) == BkStatus_Ok) return 13;
    if (bk_last_error() == NULL) return 14;
    BkReport *rep = NULL;
    if (bk_run_suite("twist", "{\"n\":3}", &rep) != BkStatus_Ok) return 15;
    int passed = bk_report_passed(rep);
    bk_report_free(rep);
    printf("ok %s\n", bk_version());
    return passed == 1 ? 0 : 16;
}
"#;

#[test]
fn header_compiles_and_links_from_c() {
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let lib = target_dir().join("libbellkit_ffi.a");
    assert!(include.join("bellkit.h").exists());
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    let bin = dir.path().join("probe");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
