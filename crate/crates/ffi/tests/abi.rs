use std::f64::consts::PI;
use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use sgm_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(sgm_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn params(n: usize) -> SgmSolverParams {
    SgmSolverParams {
        n_points: n,
        t_start: 0.0,
        t_end: 0.1,
        dt: 1e-3,
        scheme: SgmScheme::Etdrk2,
        dealias: true,
        stride: 10,
    }
}

#[test]
fn simulate_and_measure() {
    let n = 32;
    let amp = 1e-6;
    let u0: Vec<f64> = (0..n).map(|j| amp * (2.0 * PI * j as f64 / n as f64).sin()).collect();
    let mut u: *mut SgmField = ptr::null_mut();
    assert_eq!(
        unsafe { sgm_simulate(&params(n), u0.as_ptr(), ptr::null(), &mut u) },
        SgmStatus::Ok
    );
    let (mut np, mut nt, mut t0, mut dt) = (0, 0, 0.0, 0.0);
    assert_eq!(
        unsafe { sgm_field_shape(u, &mut np, &mut nt, &mut t0, &mut dt) },
        SgmStatus::Ok
    );
    assert_eq!((np, nt), (32, 11));
    assert!((dt - 0.01).abs() < 1e-15);

    // At small amplitude the flow is the linear decay e^{−t} sin x up to O(A²).
    let mut buf = vec![0.0; np * nt];
    assert_eq!(
        unsafe { sgm_field_samples(u, buf.as_mut_ptr(), buf.len()) },
        SgmStatus::Ok
    );
    let last = &buf[(nt - 1) * np..];
    for (j, v) in last.iter().enumerate() {
        let x = 2.0 * PI * j as f64 / np as f64;
        assert!((v - amp * (-0.1f64).exp() * x.sin()).abs() < 1e-11);
    }

    let mut q = SgmQuantities::default();
    assert_eq!(
        unsafe { sgm_quantities(u, ptr::null(), 1.0, 0.05, 0.4, 3.0, &mut q) },
        SgmStatus::Ok
    );
    assert!(q.g > 0.0 && q.u > 0.0 && q.l > 0.0 && q.f == 0.0);
    assert!(!q.clipped);

    let centers = [1.0, 0.05, 2.0, 0.05];
    let radii = [0.4, 0.3];
    let mut flags = [7u8; 2];
    let st = unsafe {
        sgm_singular_candidates(
            u,
            ptr::null(),
            centers.as_ptr(),
            2,
            radii.as_ptr(),
            2,
            0.1,
            flags.as_mut_ptr(),
        )
    };
    assert_eq!(st, SgmStatus::Ok, "{}", last_error());
    assert!(flags.iter().all(|&f| f <= 1));
    // Raising δ0 far enough certifies everything through the gradient criterion.
    let st = unsafe {
        sgm_singular_candidates(
            u,
            ptr::null(),
            centers.as_ptr(),
            2,
            radii.as_ptr(),
            2,
            1e3,
            flags.as_mut_ptr(),
        )
    };
    assert_eq!(st, SgmStatus::Ok, "{}", last_error());
    assert_eq!(flags, [0, 0]);
    unsafe { sgm_field_free(u) };
}

#[test]
fn errors_are_reported_not_raised() {
    let mut u: *mut SgmField = ptr::null_mut();
    let u0 = vec![0.0; 63];
    assert_eq!(
        unsafe { sgm_simulate(&params(63), u0.as_ptr(), ptr::null(), &mut u) },
        SgmStatus::InvalidArgument
    );
    assert!(last_error().contains("even"), "{}", last_error());
    assert!(u.is_null());
    assert_eq!(
        unsafe { sgm_simulate(ptr::null(), u0.as_ptr(), ptr::null(), &mut u) },
        SgmStatus::NullPointer
    );
    assert_eq!(
        unsafe { sgm_field_new(8, 1, 0.0, 0.1, ptr::null(), &mut u) },
        SgmStatus::NullPointer
    );

    let samples = [0.0; 16];
    assert_eq!(
        unsafe { sgm_field_new(8, 2, 0.0, 0.1, samples.as_ptr(), &mut u) },
        SgmStatus::Ok
    );
    assert_eq!(last_error(), "");
    let mut q = SgmQuantities::default();
    let st = unsafe { sgm_quantities(u, ptr::null(), 0.0, 5.0, 0.1, 3.0, &mut q) };
    assert_eq!(st, SgmStatus::OutOfRange, "{}", last_error());
    let mut small = vec![0.0; 3];
    assert_eq!(
        unsafe { sgm_field_samples(u, small.as_mut_ptr(), 3) },
        SgmStatus::InvalidArgument
    );

    let missing = CString::new("/nonexistent/field.sgmf").unwrap();
    let mut g: *mut SgmField = ptr::null_mut();
    assert_eq!(unsafe { sgm_field_read(missing.as_ptr(), &mut g) }, SgmStatus::Io);
    unsafe { sgm_field_free(u) };
    unsafe { sgm_field_free(ptr::null_mut()) };
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("f.sgmf").to_str().unwrap()).unwrap();
    let samples: Vec<f64> = (0..24).map(|i| (i as f64 * 0.37).sin()).collect();
    let mut u: *mut SgmField = ptr::null_mut();
    assert_eq!(
        unsafe { sgm_field_new(8, 3, 0.5, 0.25, samples.as_ptr(), &mut u) },
        SgmStatus::Ok
    );
    assert_eq!(unsafe { sgm_field_write(u, path.as_ptr()) }, SgmStatus::Ok);
    let mut v: *mut SgmField = ptr::null_mut();
    assert_eq!(unsafe { sgm_field_read(path.as_ptr(), &mut v) }, SgmStatus::Ok);
    let mut back = vec![0.0; 24];
    assert_eq!(unsafe { sgm_field_samples(v, back.as_mut_ptr(), 24) }, SgmStatus::Ok);
    assert_eq!(back, samples);
    unsafe {
        sgm_field_free(u);
        sgm_field_free(v);
    }
}

#[test]
fn point_set_measures() {
    // A spatial segment of length 1 has biparabolic 1-measure 1/2.
    let pts: Vec<f64> = (0..2000).flat_map(|i| [i as f64 / 1999.0, 0.0]).collect();
    let (mut sum, mut n) = (0.0, 0usize);
    assert_eq!(
        unsafe { sgm_cover_sum(pts.as_ptr(), 2000, 0.05, 1.0, &mut sum, &mut n) },
        SgmStatus::Ok
    );
    assert!((sum - 0.5).abs() < 0.05, "{sum}");
    assert!(n > 0);
    let radii = [0.3, 0.2, 0.1];
    let one = [0.2, 0.2];
    let (mut d, mut degenerate) = (f64::NAN, false);
    assert_eq!(
        unsafe { sgm_box_dimension(one.as_ptr(), 1, radii.as_ptr(), 3, &mut d, &mut degenerate) },
        SgmStatus::Ok
    );
    assert!(degenerate && d == 0.0);
    assert_eq!(
        unsafe { sgm_box_dimension(one.as_ptr(), 1, radii.as_ptr(), 2, &mut d, &mut degenerate) },
        SgmStatus::InvalidArgument
    );
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(sgm_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

/// The generated header compiles and links from C.
#[test]
fn header_links_from_c() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("sgm.h").exists());
    let exe = std::env::current_exe().unwrap();
    let target_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = target_dir.join("libsgm_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "sgm.h"
int main(void) {
    double u0[16];
    for (int j = 0; j < 16; ++j) u0[j] = 0.0;
    SgmSolverParams p = {16, 0.0, 0.01, 1e-3, SGM_SCHEME_ETDRK2, true, 1};
    SgmField *u = NULL;
    if (sgm_simulate(&p, u0, NULL, &u) != SGM_STATUS_OK) return 1;
    SgmQuantities q;
    if (sgm_quantities(u, NULL, 1.0, 0.01, 0.3, 3.0, &q) != SGM_STATUS_OK) return 2;
    sgm_field_free(u);
    p.n_points = 15;
    if (sgm_simulate(&p, u0, NULL, &u) != SGM_STATUS_INVALID_ARGUMENT) return 3;
    if (strlen(sgm_last_error()) == 0) return 4;
    printf("%g %s\n", q.g, sgm_version());
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("main");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg(&src)
        .arg("-I")
        .arg(&header_dir)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        format!("0 {}", env!("CARGO_PKG_VERSION"))
    );
}
