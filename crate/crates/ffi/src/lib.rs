//! C ABI over `ppxfer`.
//!
//! Chains are opaque handles created by `ppx_chain_new` and released with
//! `ppx_chain_free`. Every fallible call returns a `PpxStatus`; on failure
//! `ppx_last_error_message` holds a description for the calling thread.
//! Site indices are 1-based.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ppxfer::amplitudes::Propagator;
use ppxfer::observables::{magnetization_receiver, occupation};
use ppxfer::perturbation::{analyze_transfer, predict_transfer_time};
use ppxfer::resonance::{pp_feasible, resonance_count, Feasibility};
use ppxfer::{ChainSpec, Error, Statistics};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidConfig = 2,
    OutOfRange = 3,
    Numerical = 4,
    NoTransferPredicted = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpxStatistics {
    Fermion = 0,
    Boson = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpxFeasibility {
    Pp = 0,
    QuasiPp = 1,
    None = 2,
    AllLengths = 3,
    Unclassified = 4,
    InvalidInput = -1,
}

/// Best transfer found in a time window.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PpxPeak {
    pub t_fermion: f64,
    pub p_fermion: f64,
    pub t_boson: f64,
    pub p_boson: f64,
}

/// Opaque chain handle.
pub struct PpxChain {
    spec: ChainSpec,
    prop: Propagator,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(err: &Error) -> PpxStatus {
    match err {
        Error::SiteOutOfRange { .. } => PpxStatus::OutOfRange,
        Error::NoTransferPredicted { .. } => PpxStatus::NoTransferPredicted,
        Error::NoConvergence(_) | Error::Numerical(_) | Error::AmbiguousClusters(_) => PpxStatus::Numerical,
        _ => PpxStatus::InvalidConfig,
    }
}

/// Runs `f`, converting errors and panics into a status plus message.
fn guard(f: impl FnOnce() -> Result<(), PpxStatus>) -> PpxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PpxStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            PpxStatus::Panic
        }
    }
}

fn fail(err: Error) -> PpxStatus {
    set_error(err.to_string());
    status_of(&err)
}

fn null(what: &str) -> PpxStatus {
    set_error(format!("{what} is null"));
    PpxStatus::NullPointer
}

unsafe fn chain_ref<'a>(chain: *const PpxChain) -> Result<&'a PpxChain, PpxStatus> {
    chain.as_ref().ok_or_else(|| null("chain"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), PpxStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn statistics(s: PpxStatistics) -> Statistics {
    match s {
        PpxStatistics::Fermion => Statistics::Fermion,
        PpxStatistics::Boson => Statistics::Boson,
    }
}

/// Builds a chain with `n_s`-site sender and receiver blocks, an `n_w`-site
/// wire, block-wire coupling `j0` and uniform field `h`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ppx_chain_new(
    n_s: usize,
    n_w: usize,
    j0: f64,
    h: f64,
    stats: PpxStatistics,
    out: *mut *mut PpxChain,
) -> PpxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let spec = ChainSpec::new(n_s, n_w, j0, h, statistics(stats)).map_err(fail)?;
        let prop = Propagator::from_spec(&spec).map_err(fail)?;
        out.write(Box::into_raw(Box::new(PpxChain { spec, prop })));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `chain` must come from `ppx_chain_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ppx_chain_free(chain: *mut PpxChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// Number of sites, or 0 for a null handle.
///
/// # Safety
/// `chain` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ppx_chain_len(chain: *const PpxChain) -> usize {
    chain.as_ref().map_or(0, |c| c.spec.len())
}

/// Probability that the sender block's excitations all sit in the receiver
/// block at time `t`.
///
/// # Safety
/// `chain` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ppx_transfer_probability(
    chain: *const PpxChain,
    t: f64,
    stats: PpxStatistics,
    out: *mut f64,
) -> PpxStatus {
    guard(|| {
        let c = chain_ref(chain)?;
        let p = c.prop.transfer_probability(t, statistics(stats)).map_err(fail)?;
        write_out(out, p)
    })
}

/// Occupation of `site` (1-based) at time `t`.
///
/// # Safety
/// `chain` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ppx_occupation(chain: *const PpxChain, t: f64, site: usize, out: *mut f64) -> PpxStatus {
    guard(|| {
        let c = chain_ref(chain)?;
        if site == 0 {
            return Err(fail(Error::SiteOutOfRange {
                index: 0,
                len: c.spec.len(),
            }));
        }
        let v = occupation(&c.prop, t, site - 1).map_err(fail)?;
        write_out(out, v)
    })
}

/// Total magnetization of the receiver block at time `t`.
///
/// # Safety
/// `chain` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ppx_magnetization(chain: *const PpxChain, t: f64, out: *mut f64) -> PpxStatus {
    guard(|| {
        let c = chain_ref(chain)?;
        write_out(out, magnetization_receiver(&c.prop, t))
    })
}

/// Copies the ascending single-particle spectrum into `buf`, which must hold
/// at least `ppx_chain_len` values.
///
/// # Safety
/// `chain` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn ppx_eigenvalues(chain: *const PpxChain, buf: *mut f64, len: usize) -> PpxStatus {
    guard(|| {
        let c = chain_ref(chain)?;
        if buf.is_null() {
            return Err(null("buffer"));
        }
        let w = c.prop.decomposition().eigenvalues();
        if len < w.len() {
            set_error(format!("buffer holds {len} values, {} needed", w.len()));
            return Err(PpxStatus::BufferTooSmall);
        }
        std::ptr::copy_nonoverlapping(w.as_ptr(), buf, w.len());
        Ok(())
    })
}

/// Predicted transfer time from the slowest level splitting.
///
/// # Safety
/// `chain` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ppx_predict_transfer_time(chain: *const PpxChain, out: *mut f64) -> PpxStatus {
    guard(|| {
        let c = chain_ref(chain)?;
        let p = predict_transfer_time(&c.spec).map_err(fail)?;
        write_out(out, p.tau)
    })
}

/// Locates the best transfer over `[0, t_max]`. A non-positive `t_max`
/// selects the default window.
///
/// # Safety
/// `chain` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ppx_find_peak(chain: *const PpxChain, t_max: f64, out: *mut PpxPeak) -> PpxStatus {
    guard(|| {
        let c = chain_ref(chain)?;
        let window = (t_max > 0.0).then_some(t_max);
        let a = analyze_transfer(&c.spec, window).map_err(fail)?;
        write_out(
            out,
            PpxPeak {
                t_fermion: a.peak.t_fermion,
                p_fermion: a.peak.p_fermion,
                t_boson: a.peak.t_boson,
                p_boson: a.peak.p_boson,
            },
        )
    })
}

/// Number of resonant sender modes for wire lengths `n_w ≡ p (mod n_s+1)`,
/// or -1 for invalid input.
#[no_mangle]
pub extern "C" fn ppx_resonance_count(n_s: usize, p: usize) -> isize {
    if n_s == 0 || p > n_s {
        set_error(format!("residue {p} out of range for n_s={n_s}"));
        return -1;
    }
    resonance_count(n_s, p) as isize
}

/// Transfer feasibility class of an `(n_s, n_w)` chain.
#[no_mangle]
pub extern "C" fn ppx_pp_feasible(n_s: usize, n_w: usize) -> PpxFeasibility {
    if n_s == 0 || n_w == 0 {
        set_error("n_s and n_w must be positive");
        return PpxFeasibility::InvalidInput;
    }
    match pp_feasible(n_s, n_w) {
        Feasibility::Pp => PpxFeasibility::Pp,
        Feasibility::QuasiPp => PpxFeasibility::QuasiPp,
        Feasibility::None => PpxFeasibility::None,
        Feasibility::AllLengths => PpxFeasibility::AllLengths,
        Feasibility::Unclassified => PpxFeasibility::Unclassified,
    }
}

/// Message for the last failure on this thread; valid until the next call
/// into the library from the same thread. Empty if none.
#[no_mangle]
pub extern "C" fn ppx_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ppx_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
