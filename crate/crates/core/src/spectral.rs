//! Diagonalization of the single-particle Hamiltonian.
//!
//! Eigenvalues are sorted **ascending** (level index 0 is the lowest
//! energy). Each eigenvector is normalized and signed so that its first
//! component above `SIGN_TOL` is positive.
//!
//! Mirror-symmetric (persymmetric) input is split into its symmetric and
//! antisymmetric halves, each a tridiagonal problem of about half the size.
//! The resulting eigenvectors are exactly (anti)symmetric under site
//! reversal and quasi-degenerate pairs never mix across the two halves.
//! Other input goes through the same QL solver on the full matrix.
//!
//! The diagonal is shifted by its first entry before iterating, so a
//! uniform on-site field only moves the eigenvalues and leaves the
//! eigenvectors bitwise unchanged. The shift is kept separately so that
//! time evolution can factor it out as a global phase.
//!
//! With a uniform diagonal the chain is bipartite and its spectrum is
//! symmetric about the shift: level `N-1-k` is the staggered copy
//! `(-1)^i phi_k(i)` of level `k`. Partners are made exact copies of each
//! other, which keeps chirality-protected quantities at rounding level
//! even at very long times.

use crate::chain::Tridiagonal;
use crate::error::{Error, Result};

const MAX_SWEEPS_PER_VALUE: usize = 60;
const SIGN_TOL: f64 = 1e-12;
const CLUSTER_TOL: f64 = 1e-12;
const PARITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Symmetric => 1.0,
            Parity::Antisymmetric => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Parity::Symmetric => '+',
            Parity::Antisymmetric => '-',
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    shift: f64,
    offsets: Vec<f64>,
    /// Row-major `N x N`: `vectors[site * N + mode]`.
    vectors: Vec<f64>,
    parity: Vec<Option<Parity>>,
}

impl SpectralDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Uniform part of the diagonal (its first entry).
    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Eigenvalues relative to `shift()`.
    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    /// `phi[site][mode]`, both 0-based.
    #[inline]
    pub fn component(&self, site: usize, mode: usize) -> f64 {
        self.vectors[site * self.len() + mode]
    }

    /// The eigenvector of `mode` as a column.
    pub fn vector(&self, mode: usize) -> Vec<f64> {
        (0..self.len()).map(|s| self.component(s, mode)).collect()
    }

    /// Row of `phi` for one site: its overlap with every mode.
    pub fn site_row(&self, site: usize) -> &[f64] {
        let n = self.len();
        &self.vectors[site * n..(site + 1) * n]
    }

    /// Mirror parity of each mode, when it is well defined.
    pub fn parity(&self, mode: usize) -> Option<Parity> {
        self.parity[mode]
    }

    pub fn max_residual(&self, a: &Tridiagonal) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..self.len() {
            let v = self.vector(k);
            let av = a.mul_vec(&v);
            for (x, y) in av.iter().zip(&v) {
                worst = worst.max((x - self.eigenvalues[k] * y).abs());
            }
        }
        worst
    }

    pub fn orthonormality_error(&self) -> f64 {
        let n = self.len();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in a..n {
                let dot: f64 = (0..n).map(|s| self.component(s, a) * self.component(s, b)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Eigen-decomposition of a symmetric tridiagonal matrix.
pub fn diagonalize(a: &Tridiagonal) -> Result<SpectralDecomposition> {
    let n = a.len();
    let shift = a.diag[0];
    let diag: Vec<f64> = a.diag.iter().map(|d| d - shift).collect();

    let mut pairs: Vec<(f64, Vec<f64>, Option<Parity>)> = if n > 1 && a.is_persymmetric() {
        mirror_split(&diag, &a.off)?
    } else {
        let (vals, vecs) = tql2(&diag, &a.off)?;
        let mut pairs: Vec<_> = vals
            .into_iter()
            .zip(vecs)
            .map(|(w, v)| (w, v, None))
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        reorthogonalize_clusters(&mut pairs);
        for p in pairs.iter_mut() {
            p.2 = detect_parity(&p.1);
        }
        pairs
    };

    pairs.sort_by(|x, y| {
        x.0.total_cmp(&y.0)
            .then_with(|| parity_rank(x.2).cmp(&parity_rank(y.2)))
    });
    if diag.iter().all(|&d| d == 0.0) {
        pair_chiral_partners(&mut pairs);
    }

    let mut eigenvalues = Vec::with_capacity(n);
    let mut offsets = Vec::with_capacity(n);
    let mut vectors = vec![0.0; n * n];
    let mut parity = Vec::with_capacity(n);
    for (k, (w, mut v, par)) in pairs.into_iter().enumerate() {
        fix_sign(&mut v);
        for (s, x) in v.iter().enumerate() {
            vectors[s * n + k] = *x;
        }
        eigenvalues.push(w + shift);
        offsets.push(w);
        parity.push(par);
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        shift,
        offsets,
        vectors,
        parity,
    })
}

/// Make level `n-1-k` the exact staggered mirror image of level `k`.
fn pair_chiral_partners(pairs: &mut [(f64, Vec<f64>, Option<Parity>)]) {
    let n = pairs.len();
    for k in 0..n / 2 {
        let p = n - 1 - k;
        let e = 0.5 * (pairs[p].0 - pairs[k].0);
        pairs[k].0 = -e;
        pairs[p].0 = e;
        let staggered: Vec<f64> = pairs[k]
            .1
            .iter()
            .enumerate()
            .map(|(i, x)| if i % 2 == 0 { *x } else { -*x })
            .collect();
        // staggering maps mirror parity P to P (-1)^(n-1)
        let parity = match (pairs[k].2, n % 2) {
            (Some(Parity::Symmetric), 0) => Some(Parity::Antisymmetric),
            (Some(Parity::Antisymmetric), 0) => Some(Parity::Symmetric),
            (par, _) => par,
        };
        pairs[p].1 = staggered;
        pairs[p].2 = parity;
    }
    if n % 2 == 1 {
        pairs[n / 2].0 = 0.0;
    }
}

fn parity_rank(p: Option<Parity>) -> u8 {
    match p {
        Some(Parity::Symmetric) => 0,
        Some(Parity::Antisymmetric) => 1,
        None => 2,
    }
}

fn fix_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|x| x.abs() > SIGN_TOL) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn detect_parity(v: &[f64]) -> Option<Parity> {
    let n = v.len();
    let sym = (0..n).all(|i| (v[i] - v[n - 1 - i]).abs() < PARITY_TOL);
    let anti = (0..n).all(|i| (v[i] + v[n - 1 - i]).abs() < PARITY_TOL);
    match (sym, anti) {
        (true, false) => Some(Parity::Symmetric),
        (false, true) => Some(Parity::Antisymmetric),
        _ => None,
    }
}

/// Modified Gram–Schmidt inside groups of eigenvalues closer than
/// `CLUSTER_TOL`, in ascending order.
fn reorthogonalize_clusters(pairs: &mut [(f64, Vec<f64>, Option<Parity>)]) {
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end].0 - pairs[end - 1].0 < CLUSTER_TOL {
            end += 1;
        }
        for i in start..end {
            for j in start..i {
                let dot: f64 = pairs[i].1.iter().zip(&pairs[j].1).map(|(a, b)| a * b).sum();
                let prev = pairs[j].1.clone();
                pairs[i].1.iter_mut().zip(&prev).for_each(|(a, b)| *a -= dot * b);
            }
            let norm = pairs[i].1.iter().map(|x| x * x).sum::<f64>().sqrt();
            pairs[i].1.iter_mut().for_each(|x| *x /= norm);
        }
        start = end;
    }
}

/// Solve the symmetric and antisymmetric halves of a persymmetric matrix.
fn mirror_split(diag: &[f64], off: &[f64]) -> Result<Vec<(f64, Vec<f64>, Option<Parity>)>> {
    let n = diag.len();
    let m = n / 2;
    let r2 = std::f64::consts::SQRT_2;
    let inv_r2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n);

    let lift = |half: &[f64], parity: Parity, center: Option<f64>| -> Vec<f64> {
        let mut v = vec![0.0; n];
        for i in 0..m {
            v[i] = half[i] * inv_r2;
            v[n - 1 - i] = parity.sign() * half[i] * inv_r2;
        }
        if let Some(c) = center {
            v[m] = c;
        }
        v
    };

    if n % 2 == 0 {
        let mut d_sym = diag[..m].to_vec();
        let mut d_anti = diag[..m].to_vec();
        d_sym[m - 1] += off[m - 1];
        d_anti[m - 1] -= off[m - 1];
        let e = &off[..m - 1];
        for (d, parity) in [(d_sym, Parity::Symmetric), (d_anti, Parity::Antisymmetric)] {
            let (vals, vecs) = tql2(&d, e)?;
            for (w, u) in vals.into_iter().zip(vecs) {
                out.push((w, lift(&u, parity, None), Some(parity)));
            }
        }
    } else {
        // Symmetric half carries the centre site.
        let d_sym = diag[..=m].to_vec();
        let mut e_sym = off[..m].to_vec();
        if m > 0 {
            e_sym[m - 1] = r2 * off[m - 1];
        }
        let (vals, vecs) = tql2(&d_sym, &e_sym)?;
        for (w, u) in vals.into_iter().zip(vecs) {
            out.push((w, lift(&u, Parity::Symmetric, Some(u[m])), Some(Parity::Symmetric)));
        }
        if m > 0 {
            let (vals, vecs) = tql2(&diag[..m], &off[..m - 1])?;
            for (w, u) in vals.into_iter().zip(vecs) {
                out.push((w, lift(&u, Parity::Antisymmetric, Some(0.0)), Some(Parity::Antisymmetric)));
            }
        }
    }
    Ok(out)
}

/// Implicit-shift QL on a symmetric tridiagonal matrix (`off[i]` joins `i`
/// and `i + 1`). Returns eigenvalues and the matching eigenvectors.
fn tql2(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    // z[row * n + col], columns are eigenvectors
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS_PER_VALUE {
                    return Err(Error::NoConvergence(MAX_SWEEPS_PER_VALUE));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let zk = &mut z[k * n..(k + 1) * n];
                        let h = zk[i + 1];
                        zk[i + 1] = s * zk[i] + c * h;
                        zk[i] = c * zk[i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    let vectors = (0..n)
        .map(|col| (0..n).map(|row| z[row * n + col]).collect())
        .collect();
    Ok((d, vectors))
}

/// Energies `h + cos(q pi / (n_w + 1))`, `q = 1..=n_w`, of an isolated
/// uniform wire (unit hopping). Returned in `q` order, i.e. descending.
pub fn wire_spectrum(n_w: usize, h: f64) -> Vec<f64> {
    block_spectrum(n_w, h)
}

/// Energies `h + cos(k pi / (n_s + 1))`, `k = 1..=n_s`, of an isolated
/// sender (or receiver) block, in `k` order.
pub fn sender_spectrum(n_s: usize, h: f64) -> Vec<f64> {
    block_spectrum(n_s, h)
}

fn block_spectrum(len: usize, h: f64) -> Vec<f64> {
    let denom = (len + 1) as f64;
    (1..=len)
        .map(|k| h + (k as f64 * std::f64::consts::PI / denom).cos())
        .collect()
}
