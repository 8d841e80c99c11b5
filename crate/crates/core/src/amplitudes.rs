//! Single-particle transition amplitudes and n-excitation transfer
//! probabilities.
//!
//! `f_i^j(t) = <j| exp(-i t H) |i> = sum_k exp(-i w_k t) phi[j][k] phi[i][k]`.
//! The n-excitation sender→receiver amplitude is the determinant (fermions)
//! or permanent (bosons) of the `n_s x n_s` block of `F(t)` joining the
//! sender sites to the receiver sites.
//!
//! Site indices in this module are 0-based.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::chain::{adjacency_matrix, build_profile, ChainSpec, CouplingProfile, Statistics};
use crate::error::{Error, Result};
use crate::linalg::{determinant, permanent, CMatrix};
use crate::spectral::{diagonalize, SpectralDecomposition};

/// Probabilities above `1 + PROB_TOL` are reported as numerical failures.
pub const PROB_TOL: f64 = 1e-9;

/// `F(t)` together with its time.
#[derive(Debug, Clone)]
pub struct AmplitudeMatrix {
    pub t: f64,
    pub entries: CMatrix,
}

/// Sampled transfer probabilities for both statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferCurve {
    pub times: Vec<f64>,
    pub p_fermion: Vec<f64>,
    pub p_boson: Vec<f64>,
}

impl TransferCurve {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn argmax(values: &[f64]) -> Option<usize> {
        values
            .iter()
            .enumerate()
            .fold(None, |best: Option<(usize, f64)>, (i, &v)| match best {
                Some((_, b)) if b >= v => best,
                _ => Some((i, v)),
            })
            .map(|(i, _)| i)
    }
}

/// A diagonalized chain with its sender block size. All time-dependent
/// quantities are computed from this one decomposition.
#[derive(Debug, Clone)]
pub struct Propagator {
    dec: SpectralDecomposition,
    n_s: usize,
}

impl Propagator {
    pub fn from_spec(spec: &ChainSpec) -> Result<Self> {
        Self::from_profile(&build_profile(spec)?, spec.n_s)
    }

    pub fn from_profile(profile: &CouplingProfile, n_s: usize) -> Result<Self> {
        if n_s == 0 || 2 * n_s > profile.len() {
            return Err(Error::InvalidArgument(format!(
                "sender block of {n_s} sites does not fit a chain of {}",
                profile.len()
            )));
        }
        let dec = diagonalize(&adjacency_matrix(profile))?;
        Ok(Propagator { dec, n_s })
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.dec
    }

    pub fn n_s(&self) -> usize {
        self.n_s
    }

    pub fn len(&self) -> usize {
        self.dec.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dec.is_empty()
    }

    pub fn phases(&self, t: f64) -> Vec<Complex64> {
        mode_phases(&self.dec, t)
    }

    /// `f_i^j(t)` using precomputed `phases(t)`. `F(0)` is returned as the
    /// exact identity.
    #[inline]
    pub fn amplitude_with(&self, phases: &[Complex64], t: f64, i: usize, j: usize) -> Complex64 {
        if t == 0.0 {
            return Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0);
        }
        let ri = self.dec.site_row(i);
        let rj = self.dec.site_row(j);
        let mut acc = Complex64::new(0.0, 0.0);
        for ((p, a), b) in phases.iter().zip(ri).zip(rj) {
            acc += p * (a * b);
        }
        acc
    }

    pub fn amplitude(&self, i: usize, j: usize, t: f64) -> Result<Complex64> {
        amplitude(&self.dec, i, j, t)
    }

    pub fn amplitude_matrix(&self, t: f64) -> AmplitudeMatrix {
        amplitude_matrix(&self.dec, t)
    }

    /// Sender→receiver block at time `t`, entry `(a, b)` = `f_a^{N-1-b}`.
    pub fn sr_submatrix_at(&self, t: f64) -> CMatrix {
        let n = self.len();
        let ph = self.phases(t);
        CMatrix::from_fn(self.n_s, |a, b| self.amplitude_with(&ph, t, a, n - 1 - b))
    }

    pub fn transfer_probability(&self, t: f64, stats: Statistics) -> Result<f64> {
        let sub = self.sr_submatrix_at(t);
        let p = match stats {
            Statistics::Fermion => fermion_prob(&sub)?,
            Statistics::Boson => boson_prob(&sub)?,
        };
        checked_probability(p)
    }

    /// Fermion and boson transfer probabilities on a strictly increasing
    /// grid, evaluated in parallel with output in grid order.
    pub fn scan(&self, times: &[f64]) -> Result<TransferCurve> {
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("time grid must be strictly increasing".into()));
        }
        let rows: Vec<(f64, f64)> = times
            .par_iter()
            .map(|&t| {
                let sub = self.sr_submatrix_at(t);
                Ok((
                    checked_probability(fermion_prob(&sub)?)?,
                    checked_probability(boson_prob(&sub)?)?,
                ))
            })
            .collect::<Result<_>>()?;
        let (p_fermion, p_boson) = rows.into_iter().unzip();
        Ok(TransferCurve {
            times: times.to_vec(),
            p_fermion,
            p_boson,
        })
    }
}

/// Range-check a transfer probability and clamp it to `[0, 1]`.
pub fn checked_probability(p: f64) -> Result<f64> {
    if !p.is_finite() || p > 1.0 + PROB_TOL {
        return Err(Error::Numerical(format!("transfer probability {p} exceeds 1")));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// `f_i^j(t)` as the full sum over all modes.
pub fn amplitude(dec: &SpectralDecomposition, i: usize, j: usize, t: f64) -> Result<Complex64> {
    let n = dec.len();
    for idx in [i, j] {
        if idx >= n {
            return Err(Error::SiteOutOfRange { index: idx + 1, len: n });
        }
    }
    if !t.is_finite() {
        return Err(Error::InvalidArgument("time must be finite".into()));
    }
    if t == 0.0 {
        return Ok(Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0));
    }
    let phases = mode_phases(dec, t);
    Ok((0..n)
        .map(|k| phases[k] * (dec.component(j, k) * dec.component(i, k)))
        .sum())
}

/// `exp(-i E_k t)` for every mode, with the uniform shift applied as one
/// common factor so that long-time phase errors do not depend on it.
pub fn mode_phases(dec: &SpectralDecomposition, t: f64) -> Vec<Complex64> {
    let global = Complex64::from_polar(1.0, -dec.shift() * t);
    dec.offsets()
        .iter()
        .map(|w| global * Complex64::from_polar(1.0, -w * t))
        .collect()
}

pub fn amplitude_matrix(dec: &SpectralDecomposition, t: f64) -> AmplitudeMatrix {
    let n = dec.len();
    if t == 0.0 {
        return AmplitudeMatrix {
            t,
            entries: CMatrix::identity(n),
        };
    }
    let phases = mode_phases(dec, t);
    let mut entries = CMatrix::zeros(n);
    for i in 0..n {
        let ri = dec.site_row(i);
        for j in i..n {
            let rj = dec.site_row(j);
            let mut acc = Complex64::new(0.0, 0.0);
            for ((p, a), b) in phases.iter().zip(ri).zip(rj) {
                acc += p * (a * b);
            }
            entries[(i, j)] = acc;
            entries[(j, i)] = acc;
        }
    }
    AmplitudeMatrix { t, entries }
}

/// Sender→receiver block with the receivers counted from the far edge:
/// entry `(a, b)` is `f_a^{N-1-b}`.
pub fn sr_submatrix(f: &AmplitudeMatrix, n_s: usize) -> Result<CMatrix> {
    let n = f.entries.dim();
    if n_s == 0 || 2 * n_s > n {
        return Err(Error::InvalidArgument(format!(
            "sender block of {n_s} sites does not fit a chain of {n}"
        )));
    }
    Ok(CMatrix::from_fn(n_s, |a, b| f.entries[(a, n - 1 - b)]))
}

/// `|det|^2`.
pub fn fermion_prob(sub: &CMatrix) -> Result<f64> {
    Ok(determinant(sub)?.norm_sqr())
}

/// `|perm|^2`.
pub fn boson_prob(sub: &CMatrix) -> Result<f64> {
    Ok(permanent(sub)?.norm_sqr())
}

/// Fermion and boson transfer probabilities on `times` from one
/// diagonalization.
pub fn scan_transfer(spec: &ChainSpec, times: &[f64]) -> Result<TransferCurve> {
    Propagator::from_spec(spec)?.scan(times)
}

/// Upper bound on `max_t |f_i^j(t)|` for sender-block sites `i, j`
/// (0-based) when only the block's own modes take part:
/// `(2/(n_s+1)) sum_k |sin(k pi (j+1)/(n_s+1)) sin(k pi (i+1)/(n_s+1))|`.
pub fn single_particle_bound(n_s: usize, i: usize, j: usize) -> Result<f64> {
    if i >= n_s || j >= n_s {
        return Err(Error::SiteOutOfRange {
            index: i.max(j) + 1,
            len: n_s,
        });
    }
    let d = (n_s + 1) as f64;
    let x = std::f64::consts::PI / d;
    let sum: f64 = (1..=n_s)
        .map(|k| {
            let k = k as f64;
            ((k * x * (j + 1) as f64).sin() * (k * x * (i + 1) as f64).sin()).abs()
        })
        .sum();
    Ok(2.0 / d * sum)
}

/// Time scales steering the peak search, usually the slowest and fastest
/// cluster splittings.
#[derive(Debug, Clone, Copy)]
pub struct PeakScales {
    pub slow: f64,
    pub fast: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TransferPeak {
    pub t_fermion: f64,
    pub p_fermion: f64,
    pub t_boson: f64,
    pub p_boson: f64,
    /// `pi / (20 slow)`, the resolution of the slow envelope.
    pub coarse_step: f64,
    /// Spacing actually used by the first search tier.
    pub sample_step: f64,
}

/// Window, in units of `2 pi / J`, over which the boson maximum is taken
/// around the fermion peak.
pub const BOSON_WINDOW_PERIODS: f64 = 10.0;
const BOSON_STEP: f64 = 0.01;
const GOLDEN_ITERS: usize = 80;

/// Most samples the first search tier may take.
pub const MAX_PEAK_SAMPLES: usize = 4_000_000;

/// Locate the fermion transfer maximum on `[0, t_max]` and the boson
/// maximum in a window around it.
///
/// The fermion probability is sampled every `pi / (20 fast)`, which
/// resolves every cluster frequency; sampling only on the slow scale
/// aliases the faster cluster factors. Golden-section search polishes the
/// best sample. The boson probability also oscillates on the scale of `J`,
/// so it is sampled every `0.01` within `BOSON_WINDOW_PERIODS` periods of
/// the fermion peak before polishing.
pub fn locate_peak(prop: &Propagator, scales: PeakScales, t_max: f64) -> Result<TransferPeak> {
    if !(scales.slow > 0.0 && scales.fast > 0.0 && t_max > 0.0) {
        return Err(Error::InvalidArgument("peak search needs positive scales and t_max".into()));
    }
    let fermion = |t: f64| prop.transfer_probability(t, Statistics::Fermion);
    let boson = |t: f64| prop.transfer_probability(t, Statistics::Boson);

    let coarse_step = std::f64::consts::PI / (20.0 * scales.slow);
    let sample_step = (std::f64::consts::PI / (20.0 * scales.fast))
        .min(coarse_step)
        .max(t_max / MAX_PEAK_SAMPLES as f64);
    let (t_m, _) = best_sample(&grid(0.0, t_max, sample_step), &fermion)?;
    let (t_fermion, p_fermion) = golden_max(&fermion, (t_m - sample_step).max(0.0), t_m + sample_step)?;

    let half = BOSON_WINDOW_PERIODS * std::f64::consts::PI;
    let (t_b, _) = best_sample(&grid((t_fermion - half).max(0.0), t_fermion + half, BOSON_STEP), &boson)?;
    let (t_boson, p_boson) = golden_max(&boson, (t_b - BOSON_STEP).max(0.0), t_b + BOSON_STEP)?;

    Ok(TransferPeak {
        t_fermion,
        p_fermion,
        t_boson,
        p_boson,
        coarse_step,
        sample_step,
    })
}

/// Evenly spaced points from `lo`, step `step`, reaching at least `hi`.
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil() as usize;
    (0..=n).map(|k| lo + k as f64 * step).collect()
}

pub(crate) fn best_sample(times: &[f64], f: &(impl Fn(f64) -> Result<f64> + Sync)) -> Result<(f64, f64)> {
    let values: Vec<f64> = times.par_iter().map(|&t| f(t)).collect::<Result<_>>()?;
    let i = TransferCurve::argmax(&values)
        .ok_or_else(|| Error::InvalidArgument("empty sample grid".into()))?;
    Ok((times[i], values[i]))
}

/// Golden-section maximization on `[lo, hi]`, returning the best point seen
/// (endpoints included).
pub(crate) fn golden_max(f: &impl Fn(f64) -> Result<f64>, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut best = (a, f(a)?);
    let fb = f(b)?;
    if fb > best.1 {
        best = (b, fb);
    }
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..GOLDEN_ITERS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
        if (b - a).abs() < 1e-9 * b.abs().max(1.0) {
            break;
        }
    }
    for (t, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (t, v);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn prop(n_s: usize, n_w: usize, j0: f64, h: f64) -> Propagator {
        Propagator::from_spec(&ChainSpec::new(n_s, n_w, j0, h, Statistics::Fermion).unwrap()).unwrap()
    }

    fn uniform(n: usize) -> SpectralDecomposition {
        let p = CouplingProfile::from_raw(vec![1.0; n - 1], vec![0.0; n]).unwrap();
        diagonalize(&adjacency_matrix(&p)).unwrap()
    }

    #[test]
    fn identity_at_time_zero() {
        let dec = uniform(6);
        for i in 0..6 {
            for j in 0..6 {
                let f = amplitude(&dec, i, j, 0.0).unwrap();
                assert_eq!(f, Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0));
            }
        }
        assert_eq!(amplitude_matrix(&dec, 0.0).entries, CMatrix::identity(6));
    }

    #[test]
    fn dimer_amplitude() {
        // H = [[0, 1/2], [1/2, 0]]: f_1^2(t) = -i sin(t/2)
        let dec = uniform(2);
        for t in [0.3, 1.0, 2.7, 11.0] {
            let f = amplitude(&dec, 0, 1, t).unwrap();
            assert_abs_diff_eq!(f.re, 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(f.im, -(t / 2.0).sin(), epsilon = 1e-14);
        }
    }

    #[test]
    fn trimer_end_to_end_amplitude() {
        // modes 0, ±1/sqrt(2) with end weights 1/2, 1/4, 1/4:
        // f_1^3(t) = (cos(t/sqrt 2) - 1)/2
        let dec = uniform(3);
        for t in [0.5, 1.9, 7.3] {
            let f = amplitude(&dec, 0, 2, t).unwrap();
            assert_abs_diff_eq!(f.re, ((t / 2f64.sqrt()).cos() - 1.0) / 2.0, epsilon = 1e-14);
            assert_abs_diff_eq!(f.im, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn out_of_range_sites() {
        let dec = uniform(4);
        assert!(matches!(amplitude(&dec, 4, 0, 1.0), Err(Error::SiteOutOfRange { index: 5, len: 4 })));
    }

    #[test]
    fn rows_are_normalized() {
        let p = prop(2, 9, 0.1, 0.0);
        let f = p.amplitude_matrix(3.7);
        for i in 0..p.len() {
            let s: f64 = f.entries.row(i).iter().map(|z| z.norm_sqr()).sum();
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn twenty_site_unitarity() {
        let p = prop(3, 14, 0.2, 0.4);
        assert!(p.amplitude_matrix(123.456).entries.unitarity_error() < 1e-10);
    }

    #[test]
    fn submatrix_shape_and_values() {
        let p = prop(2, 5, 0.3, 0.0);
        let f = p.amplitude_matrix(4.0);
        let n = p.len();
        assert_eq!(sr_submatrix(&f, 1).unwrap()[(0, 0)], f.entries[(0, n - 1)]);
        let sub = sr_submatrix(&f, 2).unwrap();
        // f_1^{N-1} = f_2^N
        assert!((sub[(0, 1)] - sub[(1, 0)]).norm() < 1e-14);
        assert!((sub[(0, 1)] - f.entries[(1, n - 1)]).norm() < 1e-14);
        let fast = p.sr_submatrix_at(4.0);
        for a in 0..2 {
            for b in 0..2 {
                assert!((fast[(a, b)] - sub[(a, b)]).norm() < 1e-14);
            }
        }
        let zero = sr_submatrix(&p.amplitude_matrix(0.0), 2).unwrap();
        assert_eq!(zero, CMatrix::zeros(2));
    }

    #[test]
    fn bound_values() {
        assert_abs_diff_eq!(single_particle_bound(3, 0, 0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(single_particle_bound(1, 0, 0).unwrap(), 1.0, epsilon = 1e-15);
        // (1/2)(sin(pi/4) sin(pi/2) + 0 + sin(3pi/4) sin(3pi/2)) in absolute value
        assert_abs_diff_eq!(
            single_particle_bound(3, 0, 1).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        for n_s in 1..7 {
            for i in 0..n_s {
                for j in 0..n_s {
                    let b = single_particle_bound(n_s, i, j).unwrap();
                    let unit = i == j || i + j + 1 == n_s;
                    assert_eq!((b - 1.0).abs() < 1e-12, unit, "n_s={n_s} i={i} j={j} b={b}");
                    assert!(b <= 1.0 + 1e-12);
                }
            }
        }
        assert!(single_particle_bound(3, 3, 0).is_err());
    }

    #[test]
    fn scan_rejects_unsorted_grid() {
        let p = prop(1, 3, 0.1, 0.0);
        assert!(p.scan(&[0.0, 2.0, 1.0]).is_err());
        assert!(p.scan(&[1.0, 1.0]).is_err());
        let c = p.scan(&[0.0]).unwrap();
        assert_eq!((c.p_fermion[0], c.p_boson[0]), (0.0, 0.0));
    }

    #[test]
    fn probability_check() {
        assert_eq!(checked_probability(1.0 + 5e-10).unwrap(), 1.0);
        assert_eq!(checked_probability(-1e-17).unwrap(), 0.0);
        assert!(checked_probability(1.0 + 1e-8).is_err());
    }

    #[test]
    fn golden_section_finds_smooth_max() {
        let f = |t: f64| Ok(1.0 - (t - 0.37).powi(2));
        let (t, v) = golden_max(&f, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(t, 0.37, epsilon = 1e-6);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
    }
}
