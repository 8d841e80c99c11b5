//! Sender–wire–receiver chain configuration.
//!
//! A chain of `N = 2 n_s + n_w` sites: a sender block of `n_s` sites, a
//! uniform wire of `n_w` sites and a receiver block of `n_s` sites. All
//! bonds carry the hopping `J` except the two block–wire bonds, which carry
//! the weak coupling `J0`. The single-particle Hamiltonian is the symmetric
//! tridiagonal matrix with `J_i / 2` on the off-diagonals and the on-site
//! energies on the diagonal.
//!
//! Sites are 0-based inside the library. Everything printed to users is
//! 1-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Couplings above this value are outside the weak-coupling regime.
pub const WEAK_COUPLING_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Fermion,
    Boson,
}

impl std::fmt::Display for Statistics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Statistics::Fermion => f.write_str("fermion"),
            Statistics::Boson => f.write_str("boson"),
        }
    }
}

impl std::str::FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fermion" | "fermions" => Ok(Statistics::Fermion),
            "boson" | "bosons" => Ok(Statistics::Boson),
            other => Err(Error::InvalidConfig(format!("unknown statistics '{other}'"))),
        }
    }
}

fn default_j() -> f64 {
    1.0
}

fn default_statistics() -> Statistics {
    Statistics::Fermion
}

/// Full experiment configuration.
///
/// JSON form: `{"n_s": 3, "n_w": 41, "j0": 0.01, "h": 0.0, "statistics": "fermion"}`.
/// `n_r` defaults to `n_s`; `j` (the energy unit) defaults to 1 and is only
/// meant to be overridden in tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub n_s: usize,
    pub n_w: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_r: Option<usize>,
    #[serde(default = "default_j", skip_serializing_if = "is_unit")]
    pub j: f64,
    pub j0: f64,
    #[serde(default)]
    pub h: f64,
    #[serde(default = "default_statistics")]
    pub statistics: Statistics,
}

fn is_unit(x: &f64) -> bool {
    *x == 1.0
}

impl ChainSpec {
    pub fn new(n_s: usize, n_w: usize, j0: f64, h: f64, statistics: Statistics) -> Result<Self> {
        let spec = ChainSpec {
            n_s,
            n_w,
            n_r: None,
            j: 1.0,
            j0,
            h,
            statistics,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ChainSpec = serde_json::from_str(text)?;
        spec.validate()?;
        spec.check_weak_coupling();
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("ChainSpec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_s == 0 {
            return Err(Error::InvalidConfig("n_s must be positive".into()));
        }
        if self.n_w == 0 {
            return Err(Error::InvalidConfig("n_w must be positive".into()));
        }
        if let Some(n_r) = self.n_r {
            if n_r != self.n_s {
                return Err(Error::InvalidConfig(format!(
                    "receiver block size n_r={n_r} must equal n_s={}",
                    self.n_s
                )));
            }
        }
        if !(self.j0.is_finite() && self.j0 > 0.0) {
            return Err(Error::InvalidConfig(format!("j0 must be positive, got {}", self.j0)));
        }
        if !(self.j.is_finite() && self.j > 0.0) {
            return Err(Error::InvalidConfig(format!("j must be positive, got {}", self.j)));
        }
        if !self.h.is_finite() {
            return Err(Error::InvalidConfig("h must be finite".into()));
        }
        Ok(())
    }

    /// Whether `j0` is within the weak-coupling regime; logs a warning if not.
    pub fn check_weak_coupling(&self) -> bool {
        let weak = self.j0 <= WEAK_COUPLING_LIMIT * self.j;
        if !weak {
            log::warn!(
                "j0={} is outside the weak-coupling regime (j0 <= {} J)",
                self.j0,
                WEAK_COUPLING_LIMIT
            );
        }
        weak
    }

    pub fn n_r(&self) -> usize {
        self.n_s
    }

    /// Total number of sites, `2 n_s + n_w`.
    pub fn len(&self) -> usize {
        2 * self.n_s + self.n_w
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn with_j0(&self, j0: f64) -> Self {
        ChainSpec { j0, ..self.clone() }
    }

    pub fn with_statistics(&self, statistics: Statistics) -> Self {
        ChainSpec {
            statistics,
            ..self.clone()
        }
    }

    /// 0-based sender sites.
    pub fn sender_sites(&self) -> std::ops::Range<usize> {
        0..self.n_s
    }

    /// 0-based receiver sites, ordered from the wire side to the far edge.
    pub fn receiver_sites(&self) -> std::ops::Range<usize> {
        let n = self.len();
        n - self.n_s..n
    }
}

/// Physical couplings along the chain: `hop[i]` joins sites `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingProfile {
    hop: Vec<f64>,
    onsite: Vec<f64>,
}

/// Assemble the coupling profile of a validated spec.
pub fn build_profile(spec: &ChainSpec) -> Result<CouplingProfile> {
    spec.validate()?;
    let n = spec.len();
    let left = spec.n_s - 1;
    let right = spec.n_s + spec.n_w - 1;
    let hop = (0..n - 1)
        .map(|i| if i == left || i == right { spec.j0 } else { spec.j })
        .collect();
    Ok(CouplingProfile {
        hop,
        onsite: vec![spec.h; n],
    })
}

impl CouplingProfile {
    /// Build from raw couplings without the mirror-symmetry requirement.
    /// Intended for symmetry-breaking checks.
    pub fn from_raw(hop: Vec<f64>, onsite: Vec<f64>) -> Result<Self> {
        if onsite.is_empty() || hop.len() + 1 != onsite.len() {
            return Err(Error::InvalidConfig(format!(
                "need N-1 couplings for N sites, got {} and {}",
                hop.len(),
                onsite.len()
            )));
        }
        Ok(CouplingProfile { hop, onsite })
    }

    pub fn hop(&self) -> &[f64] {
        &self.hop
    }

    pub fn onsite(&self) -> &[f64] {
        &self.onsite
    }

    pub fn len(&self) -> usize {
        self.onsite.len()
    }

    pub fn is_empty(&self) -> bool {
        self.onsite.is_empty()
    }

    pub fn is_mirror_symmetric(&self) -> bool {
        let n = self.len();
        (0..self.hop.len()).all(|i| self.hop[i] == self.hop[n - 2 - i])
            && (0..n).all(|i| self.onsite[i] == self.onsite[n - 1 - i])
    }

    /// Copy with one on-site energy shifted (0-based site).
    pub fn with_onsite_shift(&self, site: usize, delta: f64) -> Self {
        let mut out = self.clone();
        out.onsite[site] += delta;
        out
    }

    /// Copy with one hopping shifted (0-based bond).
    pub fn with_hop_shift(&self, bond: usize, delta: f64) -> Self {
        let mut out = self.clone();
        out.hop[bond] += delta;
        out
    }
}

/// Symmetric tridiagonal matrix stored by its two bands.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidArgument(format!(
                "tridiagonal bands have inconsistent lengths {} and {}",
                diag.len(),
                off.len()
            )));
        }
        Ok(Tridiagonal { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag[i]
        } else if i + 1 == j {
            self.off[i]
        } else if j + 1 == i {
            self.off[j]
        } else {
            0.0
        }
    }

    /// `A[i][j] == A[N-1-j][N-1-i]`, bitwise.
    pub fn is_persymmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| self.diag[i] == self.diag[n - 1 - i])
            && (0..self.off.len()).all(|i| self.off[i] == self.off[n - 2 - i])
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off[i] * x[i + 1];
                }
                y
            })
            .collect()
    }
}

/// Single-particle Hamiltonian: `J_i / 2` off the diagonal, `h_i` on it.
pub fn adjacency_matrix(profile: &CouplingProfile) -> Tridiagonal {
    Tridiagonal {
        diag: profile.onsite.clone(),
        off: profile.hop.iter().map(|j| 0.5 * j).collect(),
    }
}
