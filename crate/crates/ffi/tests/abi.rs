use std::ffi::CStr;
use std::ptr;

use ppxfer_ffi::*;

fn chain(n_s: usize, n_w: usize, j0: f64) -> *mut PpxChain {
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { ppx_chain_new(n_s, n_w, j0, 0.0, PpxStatistics::Fermion, &mut c) }, PpxStatus::Ok);
    c
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ppx_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn lifecycle_and_queries() {
    let c = chain(2, 41, 0.01);
    unsafe {
        assert_eq!(ppx_chain_len(c), 45);
        let mut peak = PpxPeak::default();
        assert_eq!(ppx_find_peak(c, 0.0, &mut peak), PpxStatus::Ok);
        assert!(peak.p_fermion > 0.99 && peak.p_boson > 0.99);
        let mut p = 0.0;
        assert_eq!(ppx_transfer_probability(c, peak.t_fermion, PpxStatistics::Fermion, &mut p), PpxStatus::Ok);
        assert!((p - peak.p_fermion).abs() < 1e-12);
        let mut tau = 0.0;
        assert_eq!(ppx_predict_transfer_time(c, &mut tau), PpxStatus::Ok);
        assert!((peak.t_fermion - tau).abs() / tau < 0.05);
        let mut m = 0.0;
        assert_eq!(ppx_magnetization(c, peak.t_fermion, &mut m), PpxStatus::Ok);
        assert!(m > 0.98);
        let mut occ = 0.0;
        assert_eq!(ppx_occupation(c, 0.0, 1, &mut occ), PpxStatus::Ok);
        assert_eq!(occ, 1.0);
        assert_eq!(ppx_occupation(c, 0.0, 45, &mut occ), PpxStatus::Ok);
        assert!(occ.abs() < 1e-15);
        let mut w = vec![0.0; 45];
        assert_eq!(ppx_eigenvalues(c, w.as_mut_ptr(), w.len()), PpxStatus::Ok);
        assert!(w.windows(2).all(|p| p[0] <= p[1]));
        ppx_chain_free(c);
    }
}

#[test]
fn errors_are_reported() {
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(ppx_chain_new(0, 4, 0.1, 0.0, PpxStatistics::Boson, &mut c), PpxStatus::InvalidConfig);
        assert!(c.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(ppx_chain_new(1, 4, 0.1, 0.0, PpxStatistics::Boson, ptr::null_mut()), PpxStatus::NullPointer);

        let c = chain(3, 43, 0.01);
        let mut occ = 0.0;
        assert_eq!(ppx_occupation(c, 1.0, 0, &mut occ), PpxStatus::OutOfRange);
        assert_eq!(ppx_occupation(c, 1.0, 50, &mut occ), PpxStatus::OutOfRange);
        assert!(last_error().contains("50"), "{}", last_error());
        let mut tau = 0.0;
        assert_eq!(ppx_predict_transfer_time(c, &mut tau), PpxStatus::NoTransferPredicted);
        let mut small = [0.0; 3];
        assert_eq!(ppx_eigenvalues(c, small.as_mut_ptr(), 3), PpxStatus::BufferTooSmall);
        assert_eq!(ppx_magnetization(ptr::null(), 1.0, &mut occ), PpxStatus::NullPointer);
        assert_eq!(ppx_chain_len(ptr::null()), 0);
        ppx_chain_free(c);
        ppx_chain_free(ptr::null_mut());
    }
}

#[test]
fn classification_entry_points() {
    assert_eq!(ppx_resonance_count(4, 4), 4);
    assert_eq!(ppx_resonance_count(3, 1), 1);
    assert_eq!(ppx_resonance_count(3, 7), -1);
    assert_eq!(ppx_pp_feasible(3, 41), PpxFeasibility::Pp);
    assert_eq!(ppx_pp_feasible(3, 43), PpxFeasibility::None);
    assert_eq!(ppx_pp_feasible(2, 40), PpxFeasibility::AllLengths);
    assert_eq!(ppx_pp_feasible(0, 40), PpxFeasibility::InvalidInput);
    let v = unsafe { CStr::from_ptr(ppx_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
