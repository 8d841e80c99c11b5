//! Brute-force evolution in the fixed-particle-number sector of the Fock
//! space, used as ground truth for the determinant/permanent route.
//!
//! States are occupation vectors in lexicographic order. For a hop
//! `c_i^dag c_{i+1}` between neighbouring sites the Jordan–Wigner string
//! covers no occupied site in between, so fermionic matrix elements carry
//! sign `+1`. Bosonic elements carry `sqrt(n_i (n_j + 1))`.

use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::chain::{build_profile, ChainSpec, CouplingProfile, Statistics};
use crate::error::{Error, Result};

pub const MAX_SECTOR_DIM: usize = 100_000;

#[derive(Debug, Clone)]
pub struct SectorBasis {
    n_sites: usize,
    n_particles: usize,
    statistics: Statistics,
    states: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

/// Binomial coefficient, saturating on overflow.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

pub fn sector_dimension(n_sites: usize, n_particles: usize, statistics: Statistics) -> usize {
    match statistics {
        Statistics::Fermion => binomial(n_sites, n_particles),
        Statistics::Boson if n_sites == 0 => usize::from(n_particles == 0),
        Statistics::Boson => binomial(n_sites + n_particles - 1, n_particles),
    }
}

pub fn enumerate_basis(n_sites: usize, n_particles: usize, statistics: Statistics) -> Result<SectorBasis> {
    let dim = sector_dimension(n_sites, n_particles, statistics);
    if dim > MAX_SECTOR_DIM {
        return Err(Error::DimensionTooLarge {
            what: "Fock sector",
            dim,
            max: MAX_SECTOR_DIM,
        });
    }
    let cap = match statistics {
        Statistics::Fermion => 1,
        Statistics::Boson => n_particles,
    };
    let mut states = Vec::with_capacity(dim);
    let mut current = vec![0u8; n_sites];
    fill(&mut current, 0, n_particles, cap, &mut states);
    let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    Ok(SectorBasis {
        n_sites,
        n_particles,
        statistics,
        states,
        index,
    })
}

fn fill(current: &mut Vec<u8>, site: usize, left: usize, cap: usize, out: &mut Vec<Vec<u8>>) {
    if site == current.len() {
        if left == 0 {
            out.push(current.clone());
        }
        return;
    }
    let remaining_sites = current.len() - site - 1;
    for occ in 0..=left.min(cap) {
        // the sites after this one must be able to hold what is left
        if cap == 1 && left - occ > remaining_sites {
            continue;
        }
        current[site] = occ as u8;
        fill(current, site + 1, left - occ, cap, out);
    }
    current[site] = 0;
}

impl SectorBasis {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn states(&self) -> &[Vec<u8>] {
        &self.states
    }

    pub fn position(&self, occupation: &[u8]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    /// State with the given 0-based sites singly occupied.
    pub fn position_of_sites(&self, sites: impl IntoIterator<Item = usize>) -> Option<usize> {
        let mut occ = vec![0u8; self.n_sites];
        for s in sites {
            *occ.get_mut(s)? += 1;
        }
        self.position(&occ)
    }
}

/// Sector Hamiltonian `sum_i (J_i/2)(c_i^dag c_{i+1} + h.c.) + sum_i h_i n_i`.
pub fn build_sector_hamiltonian(profile: &CouplingProfile, basis: &SectorBasis) -> Result<DMatrix<f64>> {
    if profile.len() != basis.n_sites {
        return Err(Error::InvalidArgument(format!(
            "profile has {} sites, basis {}",
            profile.len(),
            basis.n_sites
        )));
    }
    let dim = basis.len();
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    let hop = profile.hop();
    let onsite = profile.onsite();
    for (col, state) in basis.states.iter().enumerate() {
        h[(col, col)] = state.iter().zip(onsite).map(|(&n, &e)| n as f64 * e).sum();
        for (bond, &j) in hop.iter().enumerate() {
            // move one particle from `from` to `to` across this bond
            for (from, to) in [(bond, bond + 1), (bond + 1, bond)] {
                let (n_from, n_to) = (state[from], state[to]);
                if n_from == 0 {
                    continue;
                }
                let factor = match basis.statistics {
                    Statistics::Fermion if n_to > 0 => continue,
                    Statistics::Fermion => 1.0,
                    Statistics::Boson => (n_from as f64 * (n_to as f64 + 1.0)).sqrt(),
                };
                let mut next = state.clone();
                next[from] -= 1;
                next[to] += 1;
                let row = basis.index[&next];
                h[(row, col)] += 0.5 * j * factor;
            }
        }
    }
    Ok(h)
}

/// Diagonalized sector Hamiltonian, ready for time evolution.
pub struct SectorEvolution {
    basis: SectorBasis,
    energies: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl SectorEvolution {
    pub fn new(profile: &CouplingProfile, n_particles: usize, statistics: Statistics) -> Result<Self> {
        let basis = enumerate_basis(profile.len(), n_particles, statistics)?;
        let h = build_sector_hamiltonian(profile, &basis)?;
        let eig = SymmetricEigen::new(h);
        Ok(SectorEvolution {
            basis,
            energies: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        })
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    /// Sector energies, ascending.
    pub fn energies(&self) -> Vec<f64> {
        let mut e = self.energies.clone();
        e.sort_by(f64::total_cmp);
        e
    }

    /// `exp(-i H t)` applied to basis state `start`.
    pub fn evolve(&self, start: usize, t: f64) -> Vec<Complex64> {
        let dim = self.basis.len();
        let coeffs: Vec<Complex64> = (0..dim)
            .map(|k| self.vectors[(start, k)] * Complex64::from_polar(1.0, -self.energies[k] * t))
            .collect();
        (0..dim)
            .map(|row| (0..dim).map(|k| coeffs[k] * self.vectors[(row, k)]).sum())
            .collect()
    }

    /// `<n_site>` for every site in the evolved state.
    pub fn occupations(&self, start: usize, t: f64) -> Vec<f64> {
        let psi = self.evolve(start, t);
        let mut occ = vec![0.0; self.basis.n_sites];
        for (amp, state) in psi.iter().zip(&self.basis.states) {
            let w = amp.norm_sqr();
            for (o, &n) in occ.iter_mut().zip(state) {
                *o += w * n as f64;
            }
        }
        occ
    }

    /// `|<target| exp(-i H t) |start>|^2`.
    pub fn transition_probability(&self, start: usize, target: usize, t: f64) -> f64 {
        let amp: Complex64 = (0..self.basis.len())
            .map(|k| {
                self.vectors[(target, k)]
                    * self.vectors[(start, k)]
                    * Complex64::from_polar(1.0, -self.energies[k] * t)
            })
            .sum();
        amp.norm_sqr()
    }
}

/// Sender-block and receiver-block configurations of a spec.
pub fn end_states(spec: &ChainSpec, basis: &SectorBasis) -> Result<(usize, usize)> {
    let missing = || Error::InvalidArgument("end configuration outside the sector".into());
    let start = basis.position_of_sites(spec.sender_sites()).ok_or_else(missing)?;
    let target = basis.position_of_sites(spec.receiver_sites()).ok_or_else(missing)?;
    Ok((start, target))
}

pub fn oracle_transfer_prob(spec: &ChainSpec, t: f64) -> Result<f64> {
    let evo = SectorEvolution::new(&build_profile(spec)?, spec.n_s, spec.statistics)?;
    let (start, target) = end_states(spec, evo.basis())?;
    Ok(evo.transition_probability(start, target, t))
}

pub fn oracle_occupation(spec: &ChainSpec, t: f64, site: usize) -> Result<f64> {
    if site >= spec.len() {
        return Err(Error::SiteOutOfRange {
            index: site + 1,
            len: spec.len(),
        });
    }
    let evo = SectorEvolution::new(&build_profile(spec)?, spec.n_s, spec.statistics)?;
    let (start, _) = end_states(spec, evo.basis())?;
    Ok(evo.occupations(start, t)[site])
}

/// All sums of `n` single-particle energies: distinct modes for fermions,
/// multisets for bosons. Ascending.
pub fn free_sector_energies(single: &[f64], n: usize, statistics: Statistics) -> Vec<f64> {
    fn rec(single: &[f64], from: usize, left: usize, distinct: bool, acc: f64, out: &mut Vec<f64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for k in from..single.len() {
            let next = if distinct { k + 1 } else { k };
            rec(single, next, left - 1, distinct, acc + single[k], out);
        }
    }
    let mut out = Vec::new();
    rec(single, 0, n, statistics == Statistics::Fermion, 0.0, &mut out);
    out.sort_by(f64::total_cmp);
    out
}
