use gnum_ffi::*;
use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

fn load(source: &str) -> *mut GnumSystem {
    let src = CString::new(source).unwrap();
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { gnum_system_from_source(src.as_ptr(), &mut sys) }, GnumStatus::Ok);
    assert!(!sys.is_null());
    sys
}

fn last_error() -> String {
    let p = gnum_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn count_and_zeta_through_handles() {
    let sys = load("primes:2,3");
    let mut n = 0.0;
    assert_eq!(unsafe { gnum_count(sys, 10.0, 0.01, 5.0, &mut n) }, GnumStatus::Ok);
    assert_eq!(n, 7.0);
    let (mut re, mut im) = (0.0, 1.0);
    assert_eq!(unsafe { gnum_zeta(sys, 2.0, 0.0, &mut re, &mut im) }, GnumStatus::Ok);
    assert!((re - 1.5).abs() < 1e-3 && im.abs() < 1e-12);
    let mut m = 0.0;
    assert_eq!(unsafe { gnum_m_value(sys, 10.0, 0.01, 5.0, &mut m) }, GnumStatus::Ok);
    assert!((m - 1.0 / 3.0).abs() < 1e-14);
    let mut l = 0.0;
    assert_eq!(unsafe { gnum_ell_value(sys, 10.0, 0.01, 5.0, &mut l) }, GnumStatus::Ok);
    assert!((l - 41.0 / 72.0).abs() < 1e-14);
    unsafe { gnum_system_free(sys) };
}

#[test]
fn density_of_pi0_is_one() {
    let sys = load("builtin:pi0");
    let mut a = 0.0;
    assert_eq!(unsafe { gnum_density_constant(sys, 20.0, &mut a) }, GnumStatus::Ok);
    assert!((a - 1.0).abs() < 1e-9, "{a}");
    unsafe { gnum_system_free(sys) };
}

#[test]
fn errors_set_status_and_message() {
    let mut sys = ptr::null_mut();
    let bad = CString::new("builtin:nope").unwrap();
    assert_eq!(unsafe { gnum_system_from_source(bad.as_ptr(), &mut sys) }, GnumStatus::InvalidInput);
    assert!(sys.is_null());
    assert!(last_error().contains("nope"));

    assert_eq!(unsafe { gnum_system_from_source(ptr::null(), &mut sys) }, GnumStatus::NullPointer);
    let primes = [3.0, 2.0];
    assert_eq!(unsafe { gnum_system_from_primes(primes.as_ptr(), 2, &mut sys) }, GnumStatus::InvalidInput);

    let sys = load("primes:2,3");
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { gnum_zeta(sys, 0.5, 0.0, &mut re, &mut im) }, GnumStatus::OutsideHalfPlane);
    assert_eq!(unsafe { gnum_count(sys, 10.0, 0.01, 5.0, ptr::null_mut()) }, GnumStatus::NullPointer);
    assert_eq!(unsafe { gnum_count(ptr::null(), 10.0, 0.01, 5.0, &mut re) }, GnumStatus::NullPointer);
    unsafe { gnum_system_free(sys) };
    unsafe { gnum_system_free(ptr::null_mut()) };
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(gnum_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(manifest_dir().join("include/gnum.h")).unwrap();
    for name in [
        "gnum_last_error",
        "gnum_version",
        "gnum_system_from_source",
        "gnum_system_from_primes",
        "gnum_system_free",
        "gnum_count",
        "gnum_zeta",
        "gnum_m_value",
        "gnum_ell_value",
        "gnum_density_constant",
        "typedef struct GnumSystem GnumSystem",
        "GNUM_STATUS_OUTSIDE_HALF_PLANE = 6",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    // target/<profile>/deps/<test> -> target/<profile>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let archive = profile_dir.join("libgnum_ffi.a");
    assert!(archive.exists(), "static library not built at {}", archive.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "gnum.h"
int main(void) {
    GnumSystem *sys = NULL;
    if (gnum_system_from_source("builtin:rational:limit=1000", &sys) != GNUM_STATUS_OK) return 1;
    double n = 0.0;
    if (gnum_count(sys, 100.0, 0.01, 5.0, &n) != GNUM_STATUS_OK) return 2;
    double re = 0.0, im = 0.0;
    if (gnum_zeta(sys, 0.5, 0.0, &re, &im) != GNUM_STATUS_OUTSIDE_HALF_PLANE) return 3;
    if (gnum_last_error() == NULL) return 4;
    gnum_system_free(sys);
    printf("%.0f\n", n);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest_dir().join("include"))
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "100");
}
