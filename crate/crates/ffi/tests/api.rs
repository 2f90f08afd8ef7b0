use std::ffi::CStr;
use std::ptr;

use vrd_ffi::*;

fn last_error() -> Option<String> {
    let p = vrd_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn noisy(theory: u32, p: f64) -> *mut VrdState {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { vrd_state_noisy(theory, p, &mut s) }, VrdStatus::Ok);
    assert!(!s.is_null());
    s
}

#[test]
fn overhead_of_noisy_bell_state() {
    let s = noisy(VRD_THEORY_ENTANGLEMENT, 0.5);
    let mut o = VrdOverhead::default();
    assert_eq!(unsafe { vrd_overhead(s, VRD_THEORY_ENTANGLEMENT, 1, 0.0, &mut o) }, VrdStatus::Ok);
    // Fidelity (1 + 3p)/4 = 5/8, so 2/f - 1 = 11/5.
    assert!((o.exact - 2.2).abs() < 1e-6, "{o:?}");
    assert!((o.closed_form - 2.2).abs() < 1e-12);
    assert!(o.lower <= o.upper + 1e-9);
    assert_eq!(o.relaxation, 0);

    let mut r = VrdRate::default();
    assert_eq!(unsafe { vrd_virtual_rate(s, VRD_THEORY_ENTANGLEMENT, 0.0, 2, &mut r) }, VrdStatus::Ok);
    assert!(r.m_star >= 1 && r.rate > 0.0);
    let mut d = usize::MAX;
    assert_eq!(unsafe { vrd_conventional_rate(s, VRD_THEORY_ENTANGLEMENT, 0.0, 2, &mut d) }, VrdStatus::Ok);
    assert_eq!(d, 0);
    unsafe { vrd_state_free(s) };
}

#[test]
fn state_from_matrix() {
    let re = [0.5, 0.5, 0.5, 0.5];
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { vrd_state_from_matrix(2, re.as_ptr(), ptr::null(), &mut s) }, VrdStatus::Ok);
    let mut dim = 0;
    assert_eq!(unsafe { vrd_state_dim(s, &mut dim) }, VrdStatus::Ok);
    assert_eq!(dim, 2);
    unsafe { vrd_state_free(s) };

    let bad = [1.0, 0.0, 0.0, 1.0];
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { vrd_state_from_matrix(2, bad.as_ptr(), ptr::null(), &mut s) }, VrdStatus::InvalidState);
    assert!(s.is_null());
    assert!(last_error().unwrap().contains("trace"));
}

#[test]
fn teleport_estimate_is_deterministic_and_unbiased() {
    let mut vop = ptr::null_mut();
    assert_eq!(unsafe { vrd_teleport_new(0.7, &mut vop) }, VrdStatus::Ok);
    let (mut lp, mut lm, mut c) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { vrd_vop_coefficients(vop, &mut lp, &mut lm, &mut c) }, VrdStatus::Ok);
    assert!((c - 4.9 / 3.1).abs() < 1e-12 && (lp - lm - 1.0).abs() < 1e-12);
    assert_eq!(unsafe { vrd_vop_coefficients(vop, ptr::null_mut(), ptr::null_mut(), &mut c) }, VrdStatus::Ok);

    let input = noisy(VRD_THEORY_ENTANGLEMENT, 0.7);
    let mut target = ptr::null_mut();
    assert_eq!(unsafe { vrd_state_target(VRD_THEORY_ENTANGLEMENT, 1, &mut target) }, VrdStatus::Ok);
    let mut a = VrdEstimate::default();
    let mut b = VrdEstimate::default();
    unsafe {
        assert_eq!(vrd_estimate_projector(vop, input, target, 20_000, 9, &mut a), VrdStatus::Ok);
        assert_eq!(vrd_estimate_projector(vop, input, target, 20_000, 9, &mut b), VrdStatus::Ok);
    }
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    assert!((a.exact - 1.0).abs() < 1e-10);
    assert!((a.mean - a.exact).abs() <= a.hoeffding_bound);
    assert_eq!(a.n_samples, 20_000);
    unsafe {
        vrd_state_free(input);
        vrd_state_free(target);
        vrd_vop_free(vop);
    }
}

#[test]
fn error_codes_and_messages() {
    let mut vop = ptr::null_mut();
    assert_eq!(unsafe { vrd_teleport_new(0.2, &mut vop) }, VrdStatus::InvalidArgument);
    assert!(vop.is_null());
    assert!(last_error().is_some());

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { vrd_state_noisy(7, 0.5, &mut s) }, VrdStatus::InvalidArgument);
    assert!(last_error().unwrap().contains("theory"));
    assert_eq!(unsafe { vrd_state_noisy(VRD_THEORY_MAGIC, 0.5, ptr::null_mut()) }, VrdStatus::NullPointer);

    let mut o = VrdOverhead::default();
    assert_eq!(unsafe { vrd_overhead(ptr::null(), VRD_THEORY_MAGIC, 1, 0.0, &mut o) }, VrdStatus::NullPointer);

    let s = noisy(VRD_THEORY_ENTANGLEMENT, 0.5);
    assert_eq!(unsafe { vrd_overhead(s, VRD_THEORY_ENTANGLEMENT, 3, 0.0, &mut o) }, VrdStatus::Unsupported);
    unsafe { vrd_state_free(s) };

    let mut n = 0u64;
    assert_eq!(unsafe { vrd_required_samples(3.0, 0.1, 0.05, &mut n) }, VrdStatus::Ok);
    assert!(last_error().is_none());
    assert_eq!(n, 1660);

    for code in 0..8 {
        assert!(!vrd_status_name(code).is_null());
    }
    assert!(vrd_status_name(8).is_null());
    unsafe { vrd_state_free(ptr::null_mut()) };
    unsafe { vrd_vop_free(ptr::null_mut()) };
}
