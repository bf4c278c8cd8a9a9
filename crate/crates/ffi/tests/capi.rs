use std::ffi::{CStr, CString};
use std::ptr;

use kerr_fvr_ffi::*;

fn coherent(q: f64, p: f64) -> KfState {
    KfState { kind: KfStateKind::Coherent, n: 0, q, p }
}

const KERR: KfDynamics = KfDynamics { kind: KfDynamicsKind::Kerr, omega0: 0.0 };

fn grid(half: f64, n: usize) -> KfGrid {
    KfGrid { q_min: -half, q_max: half, p_min: -half, p_max: half, n_q: n, n_p: n }
}

fn last_error() -> String {
    let p = kf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn values(f: *const KfField) -> Vec<f64> {
    let mut g = grid(0.0, 0);
    assert_eq!(kf_field_grid(f, &mut g), KfStatus::Ok);
    std::slice::from_raw_parts(kf_field_values(f), g.n_q * g.n_p).to_vec()
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(kf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn pointwise_functions() {
    let s = coherent(1.0, -2.0);
    let mut w = 0.0;
    assert_eq!(unsafe { kf_wigner0(&s, 1.0, -2.0, &mut w) }, KfStatus::Ok);
    assert!((w - 1.0 / std::f64::consts::PI).abs() < 1e-15);
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { kf_chord_fn(&s, 0.0, 0.0, &mut re, &mut im) }, KfStatus::Ok);
    assert!((re - 0.5 / std::f64::consts::PI).abs() < 1e-15 && im == 0.0);
    let mut a = 0.0;
    assert_eq!(unsafe { kf_autocorr_exact(&coherent(5.0, 0.0), 64, std::f64::consts::FRAC_PI_4, &mut a) }, KfStatus::Ok);
    assert!((a - 1.0).abs() < 1e-10);
}

#[test]
fn null_and_invalid_arguments() {
    let s = coherent(0.0, 0.0);
    assert_eq!(unsafe { kf_wigner0(ptr::null(), 0.0, 0.0, &mut 0.0) }, KfStatus::NullPointer);
    assert!(last_error().contains("state"));
    assert_eq!(unsafe { kf_wigner0(&s, 0.0, 0.0, ptr::null_mut()) }, KfStatus::NullPointer);
    let mut out = ptr::null_mut();
    let bad = KfGrid { q_min: 1.0, q_max: -1.0, ..grid(1.0, 8) };
    assert_eq!(unsafe { kf_quantum_field(&s, 16, 0.0, &bad, &mut out) }, KfStatus::InvalidGrid);
    assert!(out.is_null());
    assert!(!last_error().is_empty());
    let h = KfDynamics { kind: KfDynamicsKind::Harmonic, omega0: -1.0 };
    let mut q = unsafe { std::mem::zeroed::<KfQuadrature>() };
    assert_eq!(unsafe { kf_quadrature_default(&mut q) }, KfStatus::Ok);
    assert_eq!(unsafe { kf_fvr_field(&s, &h, &q, 0.1, &grid(2.0, 4), &mut out, ptr::null_mut(), ptr::null_mut()) }, KfStatus::Domain);
    assert_eq!(unsafe { kf_fvr_field(&s, &KERR, &q, -0.1, &grid(2.0, 4), &mut out, ptr::null_mut(), ptr::null_mut()) }, KfStatus::Domain);
    assert_eq!(unsafe { kf_quantum_field(&coherent(30.0, 0.0), 8, 0.0, &grid(2.0, 4), &mut out) }, KfStatus::Truncation);
    unsafe { kf_field_free(ptr::null_mut()) };
}

#[test]
fn quantum_field_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("w.wgr").to_str().unwrap()).unwrap();
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(kf_quantum_field(&coherent(2.0, 1.0), 48, 0.05, &grid(6.0, 64), &mut f), KfStatus::Ok);
        let mut integral = 0.0;
        assert_eq!(kf_field_integral(f, &mut integral), KfStatus::Ok);
        assert!((integral - 1.0).abs() < 1e-6);
        assert_eq!(kf_field_write(f, path.as_ptr()), KfStatus::Ok);
        let mut g = ptr::null_mut();
        assert_eq!(kf_field_read(path.as_ptr(), &mut g), KfStatus::Ok);
        assert_eq!(values(f), values(g));
        kf_field_free(f);
        kf_field_free(g);
        let missing = CString::new(dir.path().join("none.wgr").to_str().unwrap()).unwrap();
        assert_eq!(kf_field_read(missing.as_ptr(), &mut g), KfStatus::Io);
    }
}

#[test]
fn harmonic_fvr_matches_rotated_state() {
    let h = KfDynamics { kind: KfDynamicsKind::Harmonic, omega0: 1.0 };
    let g = grid(5.0, 9);
    unsafe {
        let mut q = std::mem::zeroed::<KfQuadrature>();
        kf_quadrature_default(&mut q);
        q.chord_samples = 128;
        q.chord_halfwidth = 12.0;
        let (mut f, mut im, mut unconverged) = (ptr::null_mut(), ptr::null_mut(), 99usize);
        assert_eq!(kf_fvr_field(&coherent(2.0, 0.0), &h, &q, 0.7, &g, &mut f, &mut im, &mut unconverged), KfStatus::Ok);
        assert_eq!(unconverged, 0);
        let mut exact = ptr::null_mut();
        assert_eq!(kf_liouville_field(&coherent(2.0, 0.0), &h, 0.7, &g, &mut exact), KfStatus::Ok);
        for (a, b) in values(f).iter().zip(values(exact)) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
        assert!(values(im).iter().all(|v| v.abs() < 1e-10));
        for p in [f, im, exact] {
            kf_field_free(p);
        }
    }
}

#[test]
fn caustic_map_has_unit_determinant_at_zero_time() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(kf_caustic_det_map(5.0, 2.0, 0.0, &grid(2.0, 11), &KERR, &mut m), KfStatus::Ok);
        assert!(values(m).iter().all(|d| (d - 1.0).abs() < 1e-15));
        kf_field_free(m);
    }
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/kerr_fvr.h")).unwrap();
    for name in [
        "kf_last_error",
        "kf_version",
        "kf_quadrature_default",
        "kf_wigner0",
        "kf_chord_fn",
        "kf_autocorr_exact",
        "kf_quantum_field",
        "kf_fvr_field",
        "kf_liouville_field",
        "kf_caustic_det_map",
        "kf_field_grid",
        "kf_field_values",
        "kf_field_integral",
        "kf_field_write",
        "kf_field_read",
        "kf_field_free",
        "typedef struct KfField KfField",
        "KF_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
