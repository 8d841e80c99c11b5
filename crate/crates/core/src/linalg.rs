//! Small dense complex matrices, determinant and permanent.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_DET_DIM: usize = 64;
pub const MAX_PERM_DIM: usize = 12;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix is not square".into()));
        }
        Ok(CMatrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Squared Frobenius norm.
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `max |M M^dagger - I|`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    s += self[(i, k)] * self[(j, k)].conj();
                }
                if i == j {
                    s -= 1.0;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Determinant by LU factorization with partial pivoting.
/// An exactly singular matrix gives zero.
pub fn determinant(m: &CMatrix) -> Result<Complex64> {
    let n = m.dim();
    if n > MAX_DET_DIM {
        return Err(Error::DimensionTooLarge {
            what: "determinant",
            dim: n,
            max: MAX_DET_DIM,
        });
    }
    let mut a = m.data.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
            .unwrap_or(col);
        let p = a[pivot * n + col];
        if p.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..n {
            let factor = a[row * n + col] / p;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in col + 1..n {
                let v = a[col * n + j];
                a[row * n + j] -= factor * v;
            }
        }
    }
    Ok(det)
}

/// Permanent by Ryser's inclusion–exclusion formula, visiting column
/// subsets in Gray-code order so each step updates the row sums by one
/// column. Cost `O(2^n n)`.
pub fn permanent(m: &CMatrix) -> Result<Complex64> {
    let n = m.dim();
    if n > MAX_PERM_DIM {
        return Err(Error::DimensionTooLarge {
            what: "permanent",
            dim: n,
            max: MAX_PERM_DIM,
        });
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut in_set = vec![false; n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut size = 0usize;
    for step in 1u64..(1u64 << n) {
        let col = step.trailing_zeros() as usize;
        let sign = if in_set[col] { -1.0 } else { 1.0 };
        in_set[col] = !in_set[col];
        if in_set[col] {
            size += 1;
        } else {
            size -= 1;
        }
        for (i, s) in row_sums.iter_mut().enumerate() {
            *s += sign * m[(i, col)];
        }
        let prod: Complex64 = row_sums.iter().product();
        if (n - size) % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}
