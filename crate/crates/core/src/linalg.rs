//! Small dense linear algebra for n <= 6: LU solves, Jacobi symmetric
//! eigendecomposition, matrix exponential, and the two volume-preserving
//! map constructors used by the position searches.

use crate::{Error, Result, TOL_DET};
use serde::{Deserialize, Serialize};

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl TryFrom<Vec<Vec<f64>>> for SquareMatrix {
    type Error = String;
    fn try_from(rows: Vec<Vec<f64>>) -> std::result::Result<Self, String> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err("matrix rows must form a nonempty square".into());
        }
        Ok(SquareMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }
}

impl From<SquareMatrix> for Vec<Vec<f64>> {
    fn from(m: SquareMatrix) -> Vec<Vec<f64>> {
        (0..m.n).map(|i| m.data[i * m.n..(i + 1) * m.n].to_vec()).collect()
    }
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1);
        SquareMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        SquareMatrix::try_from(rows.to_vec()).expect("square input")
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> SquareMatrix {
        let n = self.n;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.n, x.len());
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// y = A^T x without forming the transpose.
    pub fn matvec_t(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.n, x.len());
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let xi = x[i];
            for j in 0..self.n {
                y[j] += self[(i, j)] * xi;
            }
        }
        y
    }

    pub fn scale(&self, s: f64) -> SquareMatrix {
        SquareMatrix { n: self.n, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn add(&self, other: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, other.n);
        SquareMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn lu(&self) -> Option<(SquareMatrix, Vec<usize>, f64)> {
        let n = self.n;
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for col in 0..n {
            let (pivot_row, pivot_abs) = (col..n)
                .map(|r| (r, lu[(r, col)].abs()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if pivot_abs < 1e-304 {
                return None;
            }
            if pivot_row != col {
                for j in 0..n {
                    let tmp = lu[(col, j)];
                    lu[(col, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(col, pivot_row);
                sign = -sign;
            }
            let inv_pivot = 1.0 / lu[(col, col)];
            for r in col + 1..n {
                let f = lu[(r, col)] * inv_pivot;
                lu[(r, col)] = f;
                for j in col + 1..n {
                    lu[(r, j)] -= f * lu[(col, j)];
                }
            }
        }
        Some((lu, perm, sign))
    }

    pub fn det(&self) -> f64 {
        match self.lu() {
            None => 0.0,
            Some((lu, _, sign)) => {
                let mut d = sign;
                for i in 0..self.n {
                    d *= lu[(i, i)];
                }
                d
            }
        }
    }

    /// Solve A x = b.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let (lu, perm, _) = self.lu().ok_or(Error::Singular)?;
        let n = self.n;
        let mut x: Vec<f64> = perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                x[i] -= lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= lu[(i, j)] * x[j];
            }
            x[i] /= lu[(i, i)];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<SquareMatrix> {
        let n = self.n;
        let mut inv = Self::zeros(n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = self.solve(&e)?;
            e[j] = 0.0;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.n;
        (0..n).all(|i| (i + 1..n).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    /// Eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.
    /// Returns (eigenvalues, V) with columns of V the eigenvectors.
    pub fn sym_eigen(&self) -> Result<(Vec<f64>, SquareMatrix)> {
        if !self.is_symmetric(1e-9 * (1.0 + self.max_abs())) {
            return Err(Error::NotSpd);
        }
        let n = self.n;
        let mut a = self.clone();
        let mut v = Self::identity(n);
        for _sweep in 0..100 {
            let mut off = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    off += a[(i, j)] * a[(i, j)];
                }
            }
            if off.sqrt() <= 1e-14 * (1.0 + a.max_abs()) {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq.abs() <= 1e-300 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let eig = (0..n).map(|i| a[(i, i)]).collect();
        Ok((eig, v))
    }

    /// Symmetric square root of an SPD matrix.
    pub fn sym_sqrt(&self) -> Result<SquareMatrix> {
        self.sym_power(0.5)
    }

    /// V diag(eig^p) V^T for SPD input.
    pub fn sym_power(&self, p: f64) -> Result<SquareMatrix> {
        let (eig, v) = self.sym_eigen()?;
        if eig.iter().any(|&e| e <= 0.0) {
            return Err(Error::NotSpd);
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += v[(i, k)] * eig[k].powf(p) * v[(j, k)];
                }
                out[(i, j)] = s;
            }
        }
        Ok(out)
    }

    /// Matrix exponential by scaling-and-squaring with a [6/6] Pade
    /// approximant; plenty for the n <= 6 traceless matrices fed to it.
    pub fn expm(&self) -> SquareMatrix {
        let n = self.n;
        let norm = self.max_abs() * n as f64;
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let a = self.scale(0.5f64.powi(squarings as i32));

        // c_k = c_{k-1} * (m - k + 1) / (k (2m - k + 1)), m = 6
        let mut coef = [0.0f64; 7];
        coef[0] = 1.0;
        for k in 1..=6 {
            coef[k] = coef[k - 1] * (6 - k + 1) as f64 / (k * (12 - k + 1)) as f64;
        }

        let mut even = Self::identity(n).scale(coef[0]); // sum over even powers
        let mut odd = a.scale(coef[1]); // sum over odd powers
        let a2 = a.matmul(&a);
        let mut pow = Self::identity(n); // a^{2j}
        for j in 1..=3 {
            pow = pow.matmul(&a2);
            even = even.add(&pow.scale(coef[2 * j]));
            if 2 * j + 1 <= 6 {
                odd = odd.add(&a.matmul(&pow).scale(coef[2 * j + 1]));
            }
        }
        // p = even + odd, q = even - odd; exp ~ q^{-1} p
        let p = even.add(&odd);
        let q = even.add(&odd.scale(-1.0));
        let q_inv = q.inverse().expect("Pade denominator is well conditioned after scaling");
        let mut e = q_inv.matmul(&p);
        for _ in 0..squarings {
            e = e.matmul(&e);
        }
        e
    }
}

impl std::ops::Index<(usize, usize)> for SquareMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Parametrize SL(n) near the identity: build the traceless matrix whose
/// off-diagonal entries are the first n(n-1) components of `theta` (row
/// major, skipping the diagonal) and whose first n-1 diagonal entries are
/// the remaining components (the last diagonal entry balances the trace),
/// then exponentiate. The result always has determinant 1 up to [`TOL_DET`].
pub fn sl_param(theta: &[f64], n: usize) -> SquareMatrix {
    assert_eq!(theta.len(), n * n - 1, "theta must have n^2 - 1 entries");
    let mut m = SquareMatrix::zeros(n);
    let mut idx = 0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m[(i, j)] = theta[idx];
                idx += 1;
            }
        }
    }
    let mut diag_sum = 0.0;
    for i in 0..n - 1 {
        m[(i, i)] = theta[idx];
        diag_sum += theta[idx];
        idx += 1;
    }
    m[(n - 1, n - 1)] = -diag_sum;
    let e = m.expm();
    debug_assert!((e.det() - 1.0).abs() <= TOL_DET * 10.0);
    e
}

/// Number of parameters `sl_param` takes in dimension n.
pub fn sl_param_len(n: usize) -> usize {
    n * n - 1
}

/// Whitening map of an SPD covariance: `W = det(C)^{1/(2n)} C^{-1/2}`.
/// `W C W^T` is a scalar multiple of the identity and `det W = 1`.
pub fn whitening_map(cov: &SquareMatrix) -> Result<SquareMatrix> {
    let n = cov.order();
    let det = cov.det();
    if det <= 0.0 {
        return Err(Error::NotSpd);
    }
    let inv_sqrt = cov.sym_power(-0.5)?;
    Ok(inv_sqrt.scale(det.powf(1.0 / (2.0 * n as f64))))
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
