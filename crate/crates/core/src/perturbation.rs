//! Quasi-degenerate level clusters in the weak-coupling regime.
//!
//! At `J0 -> 0` each sender-block mode `k` (energy `h + J cos(k pi/(n_s+1))`)
//! is degenerate with its receiver twin, and with one wire mode when the
//! two are resonant. The coupling splits these two (or three) levels by an
//! amount that is second (or first) order in `J0`. The cluster splitting
//! `delta` is defined so that the single-mode transfer amplitude reaches
//! unit modulus at `t = pi / (2 delta)`:
//!
//! * two levels `E± = E0 ± delta`: amplitude `sin(delta t)`;
//! * three levels `E0 - D, E0, E0 + D`: amplitude `sin^2(D t / 2)`, so
//!   `delta = D / 2`, a quarter of the cluster spread.
//!
//! Clusters come in chiral pairs `k <-> n_s + 1 - k` with identical
//! splittings (the spectrum is symmetric about `h`); the rule of thumb is
//! applied to the distinct splittings of those pairs.

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::amplitudes::{locate_peak, PeakScales, Propagator, TransferPeak};
use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::resonance::{pp_feasible, resonant_pairs, Feasibility};
use crate::spectral::{diagonalize, SpectralDecomposition};
use crate::chain::{adjacency_matrix, build_profile};

/// A slowest splitting at most this fraction of the next distinct one
/// counts as "much smaller".
pub const RULE_OF_THUMB_THRESHOLD: f64 = 0.2;

/// Couplings at which the limiting ratios are evaluated.
pub const RATIO_J0: [f64; 2] = [1e-3, 1e-4];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelCluster {
    /// Sender mode, 1-based.
    pub mode: usize,
    /// Indices into the ascending spectrum, ascending.
    pub levels: Vec<usize>,
    pub unperturbed: f64,
    pub multiplicity: usize,
    pub splitting: f64,
    /// 1 when the mode is resonant with the wire, 2 otherwise.
    pub order: u8,
    /// Distance from the cluster to the nearest level outside it.
    pub separation: f64,
}

impl LevelCluster {
    pub fn spread(&self) -> f64 {
        match self.multiplicity {
            3 => 4.0 * self.splitting,
            _ => 2.0 * self.splitting,
        }
    }
}

/// Group the levels around every unperturbed sender energy.
pub fn find_clusters(dec: &SpectralDecomposition, spec: &ChainSpec) -> Result<Vec<LevelCluster>> {
    if spec.j0 > crate::chain::WEAK_COUPLING_LIMIT * spec.j {
        log::warn!("cluster analysis at j0={} is outside the weak-coupling regime", spec.j0);
    }
    let w = dec.eigenvalues();
    let resonant: Vec<usize> = resonant_pairs(spec.n_s, spec.n_w).iter().map(|p| p.0).collect();
    let mut owner: Vec<Option<usize>> = vec![None; w.len()];
    let mut clusters = Vec::with_capacity(spec.n_s);
    for k in 1..=spec.n_s {
        let e0 = spec.h + spec.j * (k as f64 * std::f64::consts::PI / (spec.n_s + 1) as f64).cos();
        let is_resonant = resonant.contains(&k);
        let multiplicity = if is_resonant { 3 } else { 2 };
        let mut order: Vec<usize> = (0..w.len()).collect();
        order.sort_by(|&a, &b| (w[a] - e0).abs().total_cmp(&(w[b] - e0).abs()).then(a.cmp(&b)));
        let mut levels = order[..multiplicity].to_vec();
        levels.sort_unstable();
        for &l in &levels {
            if let Some(other) = owner[l] {
                return Err(Error::AmbiguousClusters(format!(
                    "level {} (E={:.6e}) claimed by sender modes {} and {} at j0={}",
                    l + 1,
                    w[l],
                    other,
                    k,
                    spec.j0
                )));
            }
            owner[l] = Some(k);
        }
        let lo = w[levels[0]];
        let hi = w[*levels.last().unwrap()];
        let splitting = if multiplicity == 3 { (hi - lo) / 4.0 } else { (hi - lo) / 2.0 };
        let below = if levels[0] > 0 { lo - w[levels[0] - 1] } else { f64::INFINITY };
        let above = levels
            .last()
            .filter(|&&l| l + 1 < w.len())
            .map_or(f64::INFINITY, |&l| w[l + 1] - hi);
        clusters.push(LevelCluster {
            mode: k,
            levels,
            unperturbed: e0,
            multiplicity,
            splitting,
            order: if is_resonant { 1 } else { 2 },
            separation: below.min(above),
        });
    }
    Ok(clusters)
}

pub fn clusters_for(spec: &ChainSpec) -> Result<Vec<LevelCluster>> {
    let dec = diagonalize(&adjacency_matrix(&build_profile(spec)?))?;
    find_clusters(&dec, spec)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleOfThumb {
    pub holds: bool,
    /// Sender mode (1-based, lowest of its chiral pair) with the slowest
    /// splitting.
    pub slow_mode: usize,
    pub slow_splitting: f64,
    /// Slowest over next-slowest distinct splitting; `None` when all
    /// clusters share one splitting.
    pub ratio: Option<f64>,
}

/// Exactly one distinct splitting much smaller than all others.
pub fn rule_of_thumb(clusters: &[LevelCluster]) -> Result<RuleOfThumb> {
    if clusters.is_empty() {
        return Err(Error::InvalidArgument("rule of thumb needs at least one cluster".into()));
    }
    let n_s = clusters.len();
    // chiral pairs k <-> n_s + 1 - k
    let mut groups: Vec<(usize, f64)> = clusters
        .iter()
        .filter(|c| c.mode <= n_s + 1 - c.mode)
        .map(|c| {
            let partner = clusters.iter().find(|p| p.mode == n_s + 1 - c.mode).unwrap_or(c);
            (c.mode, c.splitting.min(partner.splitting))
        })
        .collect();
    groups.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let (slow_mode, slow_splitting) = groups[0];
    let ratio = groups.get(1).map(|g| slow_splitting / g.1);
    Ok(RuleOfThumb {
        holds: ratio.is_none_or(|r| r <= RULE_OF_THUMB_THRESHOLD),
        slow_mode,
        slow_splitting,
        ratio,
    })
}

/// Predicted transfer time `pi / (2 delta*)` from the slowest splitting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferPrediction {
    pub tau: f64,
    /// `pi / delta*`, the alternative convention quoted for the
    /// four-excitation scaling data.
    pub tau_alt: f64,
    pub slow_splitting: f64,
    pub slow_mode: usize,
    pub feasibility: Feasibility,
}

pub fn predict_from_clusters(spec: &ChainSpec, clusters: &[LevelCluster]) -> Result<TransferPrediction> {
    let rule = rule_of_thumb(clusters)?;
    let feasibility = pp_feasible(spec.n_s, spec.n_w);
    let predicted = match feasibility {
        Feasibility::None => false,
        Feasibility::Unclassified => rule.holds,
        _ => true,
    };
    if !predicted {
        return Err(Error::NoTransferPredicted {
            n_s: spec.n_s,
            n_w: spec.n_w,
        });
    }
    Ok(TransferPrediction {
        tau: std::f64::consts::PI / (2.0 * rule.slow_splitting),
        tau_alt: std::f64::consts::PI / rule.slow_splitting,
        slow_splitting: rule.slow_splitting,
        slow_mode: rule.slow_mode,
        feasibility,
    })
}

pub fn predict_transfer_time(spec: &ChainSpec) -> Result<TransferPrediction> {
    predict_from_clusters(spec, &clusters_for(spec)?)
}

/// Slowest and fastest splittings, as used by the peak search.
pub fn peak_scales(clusters: &[LevelCluster]) -> PeakScales {
    let slow = clusters.iter().map(|c| c.splitting).fold(f64::INFINITY, f64::min);
    let fast = clusters.iter().map(|c| c.splitting).fold(0.0, f64::max);
    PeakScales { slow, fast }
}

/// Reference time scale for classes without a prediction:
/// `pi / (2 min delta)`.
pub fn reference_time(clusters: &[LevelCluster]) -> f64 {
    std::f64::consts::PI / (2.0 * peak_scales(clusters).slow)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterScaling {
    pub mode: usize,
    pub order: u8,
    /// Fitted exponent of `delta ~ J0^slope`.
    pub slope: f64,
    pub intercept: f64,
}

/// Log–log least-squares exponent of each cluster splitting against `J0`.
pub fn splitting_scaling(spec: &ChainSpec, j0_list: &[f64]) -> Result<Vec<ClusterScaling>> {
    if j0_list.len() < 3 {
        return Err(Error::InvalidArgument("scaling fit needs at least 3 couplings".into()));
    }
    if j0_list.iter().any(|&j| !(j > 0.0 && j <= crate::chain::WEAK_COUPLING_LIMIT)) {
        return Err(Error::InvalidArgument("couplings must lie in (0, 0.1]".into()));
    }
    let lo = j0_list.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = j0_list.iter().copied().fold(0.0, f64::max);
    if hi / lo < 10.0 * (1.0 - 1e-12) {
        return Err(Error::InvalidArgument("couplings must span at least one decade".into()));
    }
    let runs = j0_list
        .iter()
        .map(|&j0| clusters_for(&spec.with_j0(j0)))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = j0_list.iter().map(|j| j.ln()).collect();
    Ok((0..spec.n_s)
        .map(|c| {
            let ys: Vec<f64> = runs.iter().map(|r| r[c].splitting.ln()).collect();
            let (slope, intercept) = linear_fit(&xs, &ys);
            ClusterScaling {
                mode: runs[0][c].mode,
                order: runs[0][c].order,
                slope,
                intercept,
            }
        })
        .collect())
}

/// Ordinary least squares `y = slope x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioDiagnostic {
    pub name: &'static str,
    /// Value at `RATIO_J0[0]`.
    pub value: f64,
    /// Value at `RATIO_J0[1]`.
    pub check: f64,
    pub error_bar: f64,
}

/// Limiting splitting ratios between the outermost sender mode and its
/// inner neighbour (`delta_1 / delta_2`), evaluated at two couplings.
///
/// For three excitations this is `(E6 - E5) / (2 E4)` of the non-resonant
/// six-level picture; for four it is `omega_78 / omega_56`.
pub fn ratio_diagnostics(spec: &ChainSpec) -> Result<Option<RatioDiagnostic>> {
    let name = match spec.n_s {
        0..=2 => return Ok(None),
        3 => "(E6-E5)/(2E4)",
        4 => "omega78/omega56",
        _ => "delta1/delta2",
    };
    let ratio_at = |j0: f64| -> Result<f64> {
        let c = clusters_for(&spec.with_j0(j0))?;
        Ok(c[0].splitting / c[1].splitting)
    };
    let value = ratio_at(RATIO_J0[0])?;
    let check = ratio_at(RATIO_J0[1])?;
    Ok(Some(RatioDiagnostic {
        name,
        value,
        check,
        error_bar: (value - check).abs(),
    }))
}

/// Analytic envelope of the three-excitation transfer.
///
/// With a resonant central mode the slow outer pair rules the transfer and
/// the envelope is `sin^4(delta_1 t)`. Otherwise it is
/// `|(1/4) (sin(E4 t) + sin(d t))^2 sin(d t)|` with `E4 = delta_2` (central
/// pair) and `d = delta_1 = (E6 - E5)/2`.
pub fn envelope_3ex(clusters: &[LevelCluster], t: f64) -> Result<f64> {
    if clusters.len() != 3 {
        return Err(Error::InvalidArgument("three-excitation envelope needs n_s = 3".into()));
    }
    let outer = clusters[0].splitting;
    if clusters[1].multiplicity == 3 && clusters[0].multiplicity == 2 {
        Ok((outer * t).sin().powi(4))
    } else {
        let e4 = clusters[1].splitting;
        let s = (outer * t).sin();
        Ok((0.25 * ((e4 * t).sin() + s).powi(2) * s).abs())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Commensurability {
    pub ratio: (i64, i64),
    pub feasible: bool,
    /// Smallest non-negative `(n, m, branch)` with branch 1 meaning
    /// `(4m+1)/(4n+1)` and branch 3 meaning `(4m+3)/(4n+3)`.
    pub solution: Option<(i64, i64, u8)>,
    pub witness: String,
}

/// Can `E4 t = (4n+r) pi/2` and `(E6-E5) t / 2 = (4m+r) pi/2` hold at once
/// (`r = 1` or `3`) for the given ratio `(E6-E5)/(2 E4)`?
pub fn commensurability_check(ratio: Ratio<i64>) -> Result<Commensurability> {
    if *ratio.numer() <= 0 || *ratio.denom() <= 0 {
        return Err(Error::InvalidArgument("frequency ratio must be positive".into()));
    }
    let (a, b) = (*ratio.numer(), *ratio.denom());
    for r in [1i64, 3] {
        // (4m + r) b = (4n + r) a  <=>  4 (m b - n a) = r (a - b)
        if (r * (a - b)).rem_euclid(4) != 0 {
            continue;
        }
        let c = r * (a - b) / 4;
        let egcd = b.extended_gcd(&a);
        let (m0, n0) = (c * egcd.x, -c * egcd.y);
        // general solution m = m0 + a s, n = n0 + b s
        let s = [Integer::div_ceil(&-m0, &a), Integer::div_ceil(&-n0, &b)].into_iter().max().unwrap();
        let (m, n) = (m0 + a * s, n0 + b * s);
        debug_assert_eq!((4 * m + r) * b, (4 * n + r) * a);
        return Ok(Commensurability {
            ratio: (a, b),
            feasible: true,
            solution: Some((n, m, r as u8)),
            witness: format!("(4*{m}+{r})*{b} = (4*{n}+{r})*{a}"),
        });
    }
    // 4 b m - 4 a n = r (a - b) for r = 1, 3
    let branch = |r: i64| {
        let c = r * (a - b);
        let sign = if c < 0 { '-' } else { '+' };
        format!("{}m = {}n {sign} {}", 4 * b, 4 * a, c.abs())
    };
    let reason = if (a - b) % 2 != 0 {
        "left side even, right side odd".to_string()
    } else {
        format!("left side is 0 mod 4, right side is {} mod 4", (a - b).rem_euclid(4))
    };
    let witness = format!("{} and {}: {reason}", branch(1), branch(3));
    Ok(Commensurability {
        ratio: (a, b),
        feasible: false,
        solution: None,
        witness,
    })
}

/// Simplest fraction within `tol` of `x` (continued-fraction convergents),
/// with denominator at most `max_den`.
pub fn approximate_ratio(x: f64, tol: f64, max_den: i64) -> Result<Ratio<i64>> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::InvalidArgument(format!("cannot rationalize {x}")));
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = x;
    loop {
        let a = rest.floor() as i64;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (h1 as f64 / k1 as f64 - x).abs() <= tol {
            break;
        }
        let frac = rest - a as f64;
        if frac < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    Ok(Ratio::new(h1, k1))
}

/// Search windows, in units of the relevant time scale.
pub const PREDICTED_WINDOW: f64 = 2.0;
pub const REFERENCE_WINDOW: f64 = 10.0;

/// Exact transfer maximum located with the cluster time scales.
#[derive(Debug, Clone, Serialize)]
pub struct TransferAnalysis {
    pub peak: TransferPeak,
    pub prediction: Option<TransferPrediction>,
    /// `pi / (2 min delta)`, the search scale when nothing is predicted.
    pub reference_time: f64,
    pub t_max: f64,
}

/// Locate the transfer peak on `[0, t_max]`. Without an explicit `t_max`
/// the window is `PREDICTED_WINDOW` predicted transfer times, or
/// `REFERENCE_WINDOW` reference times when no transfer is predicted.
pub fn analyze_transfer(spec: &ChainSpec, t_max: Option<f64>) -> Result<TransferAnalysis> {
    let prop = Propagator::from_spec(spec)?;
    let clusters = find_clusters(prop.decomposition(), spec)?;
    let prediction = match predict_from_clusters(spec, &clusters) {
        Ok(p) => Some(p),
        Err(Error::NoTransferPredicted { .. }) => None,
        Err(e) => return Err(e),
    };
    let reference_time = reference_time(&clusters);
    let t_max = t_max.unwrap_or(match &prediction {
        Some(p) => PREDICTED_WINDOW * p.tau,
        None => REFERENCE_WINDOW * reference_time,
    });
    let peak = locate_peak(&prop, peak_scales(&clusters), t_max)?;
    Ok(TransferAnalysis {
        peak,
        prediction,
        reference_time,
        t_max,
    })
}

/// Everything the `perturbation` subcommand reports.
#[derive(Debug, Clone, Serialize)]
pub struct PerturbationReport {
    pub clusters: Vec<LevelCluster>,
    pub slowest_splitting: f64,
    pub rule_of_thumb: RuleOfThumb,
    pub prediction: Option<TransferPrediction>,
    pub ratios: Option<RatioDiagnostic>,
}

pub fn analyze(spec: &ChainSpec) -> Result<PerturbationReport> {
    let clusters = clusters_for(spec)?;
    let rule = rule_of_thumb(&clusters)?;
    let prediction = match predict_from_clusters(spec, &clusters) {
        Ok(p) => Some(p),
        Err(Error::NoTransferPredicted { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(PerturbationReport {
        slowest_splitting: rule.slow_splitting,
        clusters,
        rule_of_thumb: rule,
        prediction,
        ratios: ratio_diagnostics(spec)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Statistics;

    fn spec(n_s: usize, n_w: usize, j0: f64) -> ChainSpec {
        ChainSpec::new(n_s, n_w, j0, 0.0, Statistics::Fermion).unwrap()
    }

    #[test]
    fn single_sender_even_and_odd_wire() {
        let even = clusters_for(&spec(1, 40, 0.01)).unwrap();
        assert_eq!(even.len(), 1);
        assert_eq!(even[0].multiplicity, 2);
        assert_eq!(even[0].levels, vec![20, 21]);
        let odd = clusters_for(&spec(1, 41, 0.01)).unwrap();
        assert_eq!(odd[0].multiplicity, 3);
        assert_eq!(odd[0].levels, vec![20, 21, 22]);
        // even N: delta equals the exact half gap around the band centre
        let dec = diagonalize(&adjacency_matrix(&build_profile(&spec(1, 40, 0.01)).unwrap())).unwrap();
        let w = dec.eigenvalues();
        assert_eq!(even[0].splitting, (w[21] - w[20]) / 2.0);
    }

    #[test]
    fn three_senders_resonant_class() {
        let c = clusters_for(&spec(3, 41, 0.01)).unwrap();
        let mult: Vec<usize> = c.iter().map(|c| c.multiplicity).collect();
        assert_eq!(mult, vec![2, 3, 2]);
        let total: usize = mult.iter().sum();
        assert_eq!(total, 2 * 3 + 1);
        assert!(c.iter().all(|c| c.splitting > 0.0));
        let rule = rule_of_thumb(&c).unwrap();
        assert!(rule.holds);
        assert_eq!(rule.slow_mode, 1);
        // omega_76: half gap of the top pair of the seven clustered levels
        let dec = diagonalize(&adjacency_matrix(&build_profile(&spec(3, 41, 0.01)).unwrap())).unwrap();
        let w = dec.eigenvalues();
        let top = &c[0].levels;
        assert!((rule.slow_splitting - (w[top[1]] - w[top[0]]) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn three_senders_nonresonant_fails_rule() {
        let rule = rule_of_thumb(&clusters_for(&spec(3, 40, 0.01)).unwrap()).unwrap();
        assert!(!rule.holds);
        assert!(matches!(
            predict_transfer_time(&spec(3, 40, 0.01)),
            Err(Error::NoTransferPredicted { n_s: 3, n_w: 40 })
        ));
    }

    #[test]
    fn single_sender_rule_is_vacuous() {
        for n_w in [3, 10, 41] {
            let rule = rule_of_thumb(&clusters_for(&spec(1, n_w, 0.01)).unwrap()).unwrap();
            assert!(rule.holds && rule.ratio.is_none());
        }
    }

    #[test]
    fn odd_wire_transfers_faster() {
        let even = predict_transfer_time(&spec(1, 40, 0.01)).unwrap().tau;
        let odd = predict_transfer_time(&spec(1, 41, 0.01)).unwrap().tau;
        assert!(odd * 10.0 < even, "odd {odd} even {even}");
    }

    #[test]
    fn strong_coupling_is_ambiguous() {
        let r = clusters_for(&spec(7, 3, 1.0));
        assert!(matches!(r, Err(Error::AmbiguousClusters(_))), "{r:?}");
    }

    #[test]
    fn scaling_input_checks() {
        let s = spec(1, 40, 0.01);
        assert!(splitting_scaling(&s, &[1e-3, 1e-2]).is_err());
        assert!(splitting_scaling(&s, &[2e-3, 3e-3, 4e-3]).is_err());
        assert!(splitting_scaling(&s, &[1e-3, 1e-2, 0.2]).is_err());
    }

    #[test]
    fn tau_is_pi_over_two_delta() {
        let p = predict_transfer_time(&spec(2, 41, 0.01)).unwrap();
        assert_eq!(p.tau, std::f64::consts::PI / (2.0 * p.slow_splitting));
        assert_eq!(p.tau_alt, 2.0 * p.tau);
    }

    #[test]
    fn commensurability_half_is_impossible() {
        let c = commensurability_check(Ratio::new(1, 2)).unwrap();
        assert!(!c.feasible);
        assert!(c.witness.contains("even") && c.witness.contains("odd"), "{}", c.witness);
    }

    #[test]
    fn commensurability_third_is_impossible() {
        let c = commensurability_check(Ratio::new(1, 3)).unwrap();
        assert!(!c.feasible);
        assert!(c.witness.contains("mod 4"));
    }

    #[test]
    fn commensurability_unit_ratio() {
        let c = commensurability_check(Ratio::new(1, 1)).unwrap();
        assert!(c.feasible);
        let (n, m, _) = c.solution.unwrap();
        assert_eq!(n, m);
    }

    #[test]
    fn commensurability_solutions_satisfy_equation() {
        for (a, b) in [(5, 1), (1, 5), (9, 13), (3, 7), (7, 3), (2, 6)] {
            let r = Ratio::new(a, b);
            let c = commensurability_check(r).unwrap();
            let (a, b) = (*r.numer(), *r.denom());
            assert_eq!(c.feasible, (a - b).rem_euclid(4) == 0, "{a}/{b}");
            if let Some((n, m, k)) = c.solution {
                let k = k as i64;
                assert!(n >= 0 && m >= 0);
                assert_eq!((4 * m + k) * b, (4 * n + k) * a);
            }
        }
    }

    #[test]
    fn rationalize() {
        assert_eq!(approximate_ratio(0.5003, 0.02, 100).unwrap(), Ratio::new(1, 2));
        assert_eq!(approximate_ratio(0.3334, 1e-3, 100).unwrap(), Ratio::new(1, 3));
        assert_eq!(approximate_ratio(1.0, 1e-9, 100).unwrap(), Ratio::new(1, 1));
        assert_eq!(approximate_ratio(0.142857, 1e-5, 100).unwrap(), Ratio::new(1, 7));
    }

    #[test]
    fn linear_fit_recovers_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x - 1.0).collect();
        let (s, c) = linear_fit(&xs, &ys);
        assert!((s - 2.0).abs() < 1e-14 && (c + 1.0).abs() < 1e-14);
    }
}
