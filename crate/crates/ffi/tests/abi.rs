use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use margin_bounds_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 512];
    unsafe {
        mb_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn class(values: &[f64], n_functions: usize, n_points: usize, m_bound: f64) -> *mut MbClass {
    let mut out = ptr::null_mut();
    let status = unsafe { mb_class_new(values.as_ptr(), n_functions, n_points, m_bound, &mut out) };
    assert_eq!(status, MbStatus::Ok, "{}", last_error());
    out
}

#[test]
fn capacity_through_handles() {
    let f = class(&[0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0, 0.0], 4, 2, 1.0);
    let (mut len, mut n) = (0usize, 0usize);
    unsafe {
        assert_eq!(mb_class_shape(f, &mut len, &mut n), MbStatus::Ok);
        assert_eq!((len, n), (4, 2));
        let mut count = 0usize;
        assert_eq!(mb_covering_number(f, 0.5, f64::INFINITY, true, 24, &mut count), MbStatus::Ok);
        assert_eq!(count, 4);
        assert_eq!(mb_packing_number(f, 1.0, 2.0, true, 200, &mut count), MbStatus::Ok);
        assert_eq!(count, 2);
        let mut dim = 0usize;
        assert_eq!(mb_fat_shattering_dim(f, 0.5, &mut dim), MbStatus::Ok);
        assert_eq!(dim, 2);
        let (mut v, mut se) = (0.0, 0.0);
        assert_eq!(mb_rademacher(f, 1000, 3, &mut v, &mut se), MbStatus::Ok);
        let (mut v2, mut se2) = (0.0, 0.0);
        assert_eq!(mb_rademacher(f, 1000, 3, &mut v2, &mut se2), MbStatus::Ok);
        assert_eq!((v, se), (v2, se2));
        assert!((v - 0.5).abs() < 0.05);
        let mut t = ptr::null_mut();
        assert_eq!(mb_class_truncate(f, 0.5, &mut t), MbStatus::Ok);
        assert_eq!(mb_class_shape(t, &mut len, &mut n), MbStatus::Ok);
        assert_eq!(len, 4);
        mb_class_free(t);
        mb_class_free(f);
        mb_class_free(ptr::null_mut());
    }
}

#[test]
fn constants_and_bound() {
    let mut k = 0.0;
    unsafe {
        assert_eq!(mb_k_p(3, &mut k), MbStatus::Ok);
        assert!((k - 26.0).abs() < 1e-9);
        assert_eq!(mb_k_p(2, &mut k), MbStatus::InvalidArgument);
        let q = MbBoundParams {
            c_categories: 8,
            sample_size: 1e6,
            gamma: 1.0,
            delta: 0.05,
            m_g: 1.0,
            k_g: 1.0,
            d_g: 1.0,
        };
        let mut b = 0.0;
        assert_eq!(mb_rademacher_bound(&q, &mut b), MbStatus::Ok);
        assert!((b - 7.71601763253892).abs() < 1e-9 * b);
        let bad = MbBoundParams { c_categories: 4, ..q };
        assert_eq!(mb_rademacher_bound(&bad, &mut b), MbStatus::Regime);
        assert!(last_error().contains("C > 4"));
        assert!(CStr::from_ptr(mb_version()).to_str().unwrap().starts_with("margin-bounds-ffi"));
    }
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(mb_class_new(ptr::null(), 1, 1, 1.0, &mut out), MbStatus::NullPointer);
        assert!(last_error().contains("values"));
        let v = [2.0];
        assert_eq!(mb_class_new(v.as_ptr(), 1, 1, 1.0, &mut out), MbStatus::InvalidClass);
        assert!(!last_error().is_empty());
        let mut n = 0usize;
        assert_eq!(mb_covering_number(ptr::null(), 0.5, 2.0, true, 24, &mut n), MbStatus::NullPointer);
        let path = CString::new("/nonexistent/class.json").unwrap();
        assert_eq!(mb_class_from_file(path.as_ptr(), &mut out), MbStatus::Io);
        let big: Vec<f64> = (0..30).map(|i| (i as f64) / 30.0).collect();
        let f = class(&big, 30, 1, 1.0);
        assert_eq!(mb_covering_number(f, 0.01, 2.0, true, 24, &mut n), MbStatus::CapExceeded);
        assert_eq!(mb_covering_number(f, 0.01, 2.0, false, 24, &mut n), MbStatus::Ok);
        assert_eq!(last_error(), "");
        mb_class_free(f);
    }
}

#[test]
fn class_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    std::fs::write(&path, r#"{"m_bound": 1, "values": [[0.5, -1.0], [0.0, 1.0]]}"#).unwrap();
    let c = CString::new(path.to_str().unwrap()).unwrap();
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(mb_class_from_file(c.as_ptr(), &mut f), MbStatus::Ok);
        let (mut len, mut n) = (0, 0);
        mb_class_shape(f, &mut len, &mut n);
        assert_eq!((len, n), (2, 2));
        mb_class_free(f);
    }
}

/// The generated header compiles as C against a small client.
#[test]
fn header_compiles() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let Ok(_) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(root.join("include"))
        .arg(root.join("tests/c/smoke.c"))
        .status()
        .unwrap();
    assert!(status.success());
    // link and run the client when cargo has left the static library beside the test binary
    let exe = std::env::current_exe().unwrap();
    let Some(lib) = exe.parent().and_then(|d| d.parent()).map(|d| d.join("libmargin_bounds_ffi.a")) else {
        return;
    };
    if !lib.exists() {
        eprintln!("{} not built; skipping link", lib.display());
        return;
    }
    let bin = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("mb_smoke");
    let status = Command::new("cc")
        .args(["-std=c99", "-I"])
        .arg(root.join("include"))
        .arg(root.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "client exit {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("margin-bounds-ffi"));
}
