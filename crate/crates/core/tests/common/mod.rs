//! Reference implementations shared by the integration tests. Nothing here
//! calls the library's eigensolver, determinant, permanent or cluster code.

#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// Single-particle chain diagonalized densely.
pub struct DenseChain {
    pub n: usize,
    pub n_s: usize,
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl DenseChain {
    /// `n_s`-site blocks joined to an `n_w`-site wire by `j0`, hopping
    /// `J = 1` elsewhere, uniform field `h`; matrix elements `J/2` and `h`.
    pub fn new(n_s: usize, n_w: usize, j0: f64, h: f64) -> Self {
        let n = 2 * n_s + n_w;
        let mut a = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            a[(i, i)] = h;
        }
        for i in 0..n - 1 {
            let j = if i + 1 == n_s || i + 1 == n_s + n_w { j0 } else { 1.0 };
            a[(i, i + 1)] = j / 2.0;
            a[(i + 1, i)] = j / 2.0;
        }
        let eig = SymmetricEigen::new(a);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
        DenseChain {
            n,
            n_s,
            values,
            vectors,
        }
    }

    pub fn amplitude(&self, i: usize, j: usize, t: f64) -> Complex64 {
        (0..self.n)
            .map(|k| Complex64::from_polar(1.0, -self.values[k] * t) * self.vectors[(i, k)] * self.vectors[(j, k)])
            .sum()
    }

    /// Sender sites against receiver sites in mirror order.
    pub fn block(&self, t: f64) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n_s, self.n_s, |a, b| self.amplitude(a, self.n - 1 - b, t))
    }

    pub fn p_fermion(&self, t: f64) -> f64 {
        self.block(t).determinant().norm_sqr()
    }

    pub fn p_boson(&self, t: f64) -> f64 {
        permanent_by_permutations(&self.block(t)).norm_sqr()
    }
}

pub fn permanent_by_permutations(m: &DMatrix<Complex64>) -> Complex64 {
    fn rec(m: &DMatrix<Complex64>, row: usize, used: &mut [bool]) -> Complex64 {
        if row == m.nrows() {
            return Complex64::new(1.0, 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for col in 0..m.ncols() {
            if !used[col] {
                used[col] = true;
                acc += m[(row, col)] * rec(m, row + 1, used);
                used[col] = false;
            }
        }
        acc
    }
    rec(m, 0, &mut vec![false; m.ncols()])
}

/// Splitting of the levels clustered at each sender energy, in mode order
/// `k = 1..=n_s`: half the spread of a pair, a quarter of the spread of a
/// resonant triple.
pub fn splittings(n_s: usize, n_w: usize, j0: f64) -> Vec<(usize, f64)> {
    let chain = DenseChain::new(n_s, n_w, j0, 0.0);
    (1..=n_s)
        .map(|k| {
            let e0 = (k as f64 * std::f64::consts::PI / (n_s + 1) as f64).cos();
            let resonant = (k * (n_w + 1)) % (n_s + 1) == 0;
            let m = if resonant { 3 } else { 2 };
            let mut near: Vec<f64> = chain.values.clone();
            near.sort_by(|a, b| (a - e0).abs().total_cmp(&(b - e0).abs()));
            let lo = near[..m].iter().copied().fold(f64::INFINITY, f64::min);
            let hi = near[..m].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (m, (hi - lo) / if resonant { 4.0 } else { 2.0 })
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

/// Deterministic points of `[lo, hi)` from the golden-ratio sequence.
pub fn spread_points(count: usize, lo: f64, hi: f64) -> Vec<f64> {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    (1..=count).map(|k| lo + (hi - lo) * (k as f64 * phi).fract()).collect()
}
