//! The C ABI driven from Rust, and a C program built against the header.

use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use p2c_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(p2c_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn trajectory_lifecycle() {
    let mut traj = ptr::null_mut();
    let status = unsafe { p2c_trajectory_new(0.0, 0.5, -31.0, 16.0, 1e-10, &mut traj) };
    assert_eq!(status, P2cStatus::Ok);
    let (mut q, mut qp) = (0.0, 0.0);
    assert_eq!(unsafe { p2c_trajectory_eval(traj, 0.0, &mut q, &mut qp) }, P2cStatus::Ok);
    assert_eq!((q, qp), (0.0, 0.5));
    let poles = unsafe { p2c_trajectory_pole_count(traj) };
    assert!(poles > 0);
    let (mut t0, mut residue) = (0.0, 0.0);
    assert_eq!(unsafe { p2c_trajectory_pole(traj, 0, &mut t0, &mut residue) }, P2cStatus::Ok);
    assert!(residue.abs() == 1.0);
    assert_eq!(unsafe { p2c_trajectory_pole(traj, poles, &mut t0, &mut residue) }, P2cStatus::InvalidArgument);

    let mut fam = P2cFamily { kind: P2cFamilyKind::P2, params: [0.0; 3], residual: 0.0 };
    assert_eq!(unsafe { p2c_classify(traj, -30.0, -15.0, &mut fam) }, P2cStatus::Ok);
    assert_eq!(fam.kind, P2cFamilyKind::N1);
    assert_eq!(unsafe { p2c_classify(traj, -1.0, 1.0, &mut fam) }, P2cStatus::InvalidArgument);
    unsafe { p2c_trajectory_free(traj) };
}

#[test]
fn errors_are_reported() {
    let mut traj = ptr::null_mut();
    let status = unsafe { p2c_trajectory_new(0.0, 0.0, -1.0, 1.0, 1.0, &mut traj) };
    assert_eq!(status, P2cStatus::Integration);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { p2c_trajectory_new(0.0, 0.0, -1.0, 1.0, 1e-10, ptr::null_mut()) }, P2cStatus::NullPointer);

    let mut fam = P2cFamily { kind: P2cFamilyKind::P2, params: [0.0; 3], residual: 0.0 };
    assert_eq!(unsafe { p2c_predict_family(1.0, 1.0, &mut fam, ptr::null_mut()) }, P2cStatus::Domain);
    assert!(last_error().contains("degenerate"));
    unsafe {
        p2c_trajectory_free(ptr::null_mut());
        p2c_stokes_free(ptr::null_mut());
        p2c_string_free(ptr::null_mut());
    }
}

#[test]
fn stokes_and_predictions() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { p2c_stokes_compute(0.0, 0.0, 0.0, 0.0, &mut s) }, P2cStatus::Ok);
    let (mut re, mut im) = (1.0, 1.0);
    assert_eq!(unsafe { p2c_stokes_get(s, 2, &mut re, &mut im) }, P2cStatus::Ok);
    assert_eq!((re, im), (0.0, 0.0));
    assert_eq!(unsafe { p2c_stokes_get(s, 4, &mut re, &mut im) }, P2cStatus::InvalidArgument);
    let (mut c, mut j) = (1.0, 1.0);
    assert_eq!(unsafe { p2c_stokes_residuals(s, &mut c, &mut j) }, P2cStatus::Ok);
    assert!(c < 1e-12 && j < 1e-12);
    unsafe { p2c_stokes_free(s) };

    let mut fam = P2cFamily { kind: P2cFamilyKind::P2, params: [0.0; 3], residual: 0.0 };
    let mut index = 99;
    assert_eq!(unsafe { p2c_predict_family(1.5, 0.0, &mut fam, &mut index) }, P2cStatus::Ok);
    assert_eq!(fam.kind, P2cFamilyKind::P1);
    assert_eq!(index, 1);

    let (mut a, mut b, mut xi) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { p2c_locate_curve(1, 1, 0, 0.0, &mut a, &mut b, &mut xi) }, P2cStatus::Ok);
    assert!((a - 1.2158).abs() < 1e-3 && b == 0.0);
    assert_eq!(unsafe { p2c_locate_curve(3, 1, 0, 0.0, &mut a, &mut b, &mut xi) }, P2cStatus::InvalidArgument);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { p2c_report_json(0.0, 1.0, &mut json) }, P2cStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { p2c_string_free(json) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema_version"], 1);
}

/// Builds the static library; `cargo test` itself only produces the rlib.
fn static_library() -> PathBuf {
    let cargo = option_env!("CARGO").unwrap_or("cargo");
    let build = Command::new(cargo)
        .args(["build", "--lib", "--message-format=json", "-p", "p2c-ffi"])
        .output()
        .expect("cargo runs");
    assert!(build.status.success(), "{}", String::from_utf8_lossy(&build.stderr));
    String::from_utf8_lossy(&build.stdout)
        .lines()
        .filter_map(|l| serde_json::from_str::<serde_json::Value>(l).ok())
        .filter(|v| v["reason"] == "compiler-artifact" && v["target"]["name"] == "p2c_ffi")
        .flat_map(|v| v["filenames"].as_array().cloned().unwrap_or_default())
        .filter_map(|f| f.as_str().map(PathBuf::from))
        .find(|f| f.extension().is_some_and(|e| e == "a"))
        .expect("static library among the artifacts")
}

#[test]
fn c_program_links_against_the_header() {
    let lib = static_library();
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let out = tempfile::tempdir().unwrap();
    let exe = out.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let build = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .output()
        .expect("C compiler runs");
    assert!(build.status.success(), "{}", String::from_utf8_lossy(&build.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}{}", String::from_utf8_lossy(&run.stdout), String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).contains("ok"));
}
