//! Sender–wire resonances and the wire-length classes that support
//! weak-coupling transfer.
//!
//! Sender mode `k` (energy `cos(k pi/(n_s+1))`) and wire mode `q` (energy
//! `cos(q pi/(n_w+1))`) are degenerate exactly when
//! `k (n_w + 1) = q (n_s + 1)`. Everything here is integer arithmetic.

use serde::Serialize;

/// Outcome of the length-class lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Feasibility {
    /// Unit transfer ruled by a single slow frequency.
    Pp,
    /// Near-unit transfer from two frequencies close to commensurate.
    QuasiPp,
    /// No unit transfer in the weak-coupling limit.
    None,
    /// Every wire length works (one or two excitations).
    AllLengths,
    /// Block sizes above four are not classified.
    Unclassified,
}

impl Feasibility {
    pub fn transfers(self) -> bool {
        matches!(self, Feasibility::Pp | Feasibility::QuasiPp | Feasibility::AllLengths)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResonanceReport {
    pub n_s: usize,
    pub n_w: usize,
    /// `n_w mod (n_s + 1)`.
    pub residue: usize,
    /// `n_w div (n_s + 1)`.
    pub quotient: usize,
    /// 1-based `(k, q)` mode pairs.
    pub pairs: Vec<(usize, usize)>,
    pub n_res: usize,
    pub feasibility: Feasibility,
}

/// All resonant `(k, q)`, 1-based, in increasing `k`.
pub fn resonant_pairs(n_s: usize, n_w: usize) -> Vec<(usize, usize)> {
    let d = n_s + 1;
    (1..=n_s)
        .filter(|k| (k * (n_w + 1)) % d == 0)
        .map(|k| (k, k * (n_w + 1) / d))
        .filter(|&(_, q)| (1..=n_w).contains(&q))
        .collect()
}

/// Number of resonances for the residue class `p` of `n_w mod (n_s+1)`.
pub fn resonance_count(n_s: usize, p: usize) -> usize {
    assert!(p <= n_s, "residue {p} out of range for n_s={n_s}");
    resonant_pairs(n_s, (n_s + 1) + p).len()
}

/// Transfer classes for one to four excitations.
pub fn pp_feasible(n_s: usize, n_w: usize) -> Feasibility {
    match n_s {
        1 | 2 => Feasibility::AllLengths,
        3 if n_w % 4 == 1 => Feasibility::Pp,
        3 => Feasibility::None,
        4 if matches!(n_w % 5, 1 | 2) => Feasibility::QuasiPp,
        4 => Feasibility::None,
        _ => Feasibility::Unclassified,
    }
}

pub fn report(n_s: usize, n_w: usize) -> ResonanceReport {
    let pairs = resonant_pairs(n_s, n_w);
    ResonanceReport {
        n_s,
        n_w,
        residue: n_w % (n_s + 1),
        quotient: n_w / (n_s + 1),
        n_res: pairs.len(),
        pairs,
        feasibility: pp_feasible(n_s, n_w),
    }
}

/// Wire lengths `20 l + 1` and `20 l + 17` for `l = 0..=l_max`, sorted.
/// These are compatible with transfer of one to four excitations.
pub fn universal_lengths(l_max: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (0..=l_max).flat_map(|l| [20 * l + 1, 20 * l + 17]).collect();
    out.sort_unstable();
    out
}
