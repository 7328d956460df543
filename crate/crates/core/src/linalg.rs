//! Dense symmetric matrices over a generic scalar, the cyclic Jacobi
//! eigensolver, and exact rank and semidefiniteness tests over the
//! rationals.

use num_rational::BigRational;
use num_traits::{Float, One, Signed, Zero};

use crate::graphkit::Graph;
use crate::scalar::{PsdCheck, Scalar};

/// Symmetric `n x n` matrix stored in full row-major form.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    /// The all-ones matrix `J`.
    pub fn ones(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![T::one(); n * n],
        }
    }

    /// Builds a matrix from `f(i, j)` evaluated on the upper triangle.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from rows; fails unless square and symmetric.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return None;
                }
            }
        }
        Some(SymMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn adjacency(g: &Graph) -> Self {
        Self::from_fn(g.order(), |i, j| if g.has_edge(i, j) { T::one() } else { T::zero() })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    /// Sets entries `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[j * self.n + i] = v.clone();
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SymMatrix<U> {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "order mismatch");
        SymMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    /// Kronecker product `self ⊗ I_m`; entry `(i*m + a, j*m + b)` equals
    /// `self[i][j]` when `a == b` and zero otherwise.
    pub fn kron_identity(&self, m: usize) -> Self {
        let n = self.n * m;
        let mut out = Self::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                if v.is_zero() {
                    continue;
                }
                for a in 0..m {
                    out.data[(i * m + a) * n + j * m + a] = v.clone();
                }
            }
        }
        out
    }

    /// Principal submatrix on the given indices, in the given order.
    pub fn principal(&self, idx: &[usize]) -> Self {
        let k = idx.len();
        let mut out = Self::zeros(k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.data[a * k + b] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// `tr(M^2)`, the sum of squared entries.
    pub fn trace_of_square(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, x| acc + x.clone() * x.clone())
    }

    /// `(tr M)^2 / tr(M^2)`, a lower bound for the rank; zero for the zero
    /// matrix.
    pub fn trace_rank_lower_bound(&self) -> T {
        let t2 = self.trace_of_square();
        if t2.is_zero() {
            return T::zero();
        }
        let t = self.trace();
        t.clone() * t / t2
    }

    pub fn rank(&self, rel_tol: f64) -> usize {
        T::sym_rank(self, rel_tol)
    }

    pub fn psd(&self, rel_tol: f64) -> PsdCheck {
        T::sym_psd(self, rel_tol)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, x| a.max(x.to_f64_lossy().abs()))
    }
}

impl<T: Scalar + Float> SymMatrix<T> {
    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> Vec<T> {
        jacobi_eigenvalues(self)
    }

    /// Eigenvalues in increasing order with unit eigenvectors;
    /// `vectors[k]` belongs to `values[k]`.
    pub fn eigen(&self) -> (Vec<T>, Vec<Vec<T>>) {
        jacobi(self, true)
    }
}

pub(crate) fn jacobi_eigenvalues<T: Scalar + Float>(m: &SymMatrix<T>) -> Vec<T> {
    jacobi(m, false).0
}

/// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
fn jacobi<T: Scalar + Float>(m: &SymMatrix<T>, vectors: bool) -> (Vec<T>, Vec<Vec<T>>) {
    let n = m.n;
    let mut a = m.data.clone();
    let mut v: Vec<T> = if vectors {
        SymMatrix::<T>::identity(n).data
    } else {
        Vec::new()
    };
    let eps = T::from_f64(T::UNIT_ROUNDOFF.max(1e-300)).expect("representable");
    let two = T::one() + T::one();
    let total: T = a.iter().fold(T::zero(), |s, &x| s + x * x);
    for _sweep in 0..100 {
        let mut off = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                off = off + a[i * n + j] * a[i * n + j];
            }
        }
        if off <= eps * eps * total || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (two * apq);
                let sign = if theta < T::zero() { -T::one() } else { T::one() };
                let t = sign / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
                if vectors {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).expect("finite eigenvalues"));
    let values = idx.iter().map(|&i| a[i * n + i]).collect();
    let vecs = if vectors {
        idx.iter().map(|&i| (0..n).map(|k| v[k * n + i]).collect()).collect()
    } else {
        Vec::new()
    };
    (values, vecs)
}

/// Exact rank by Gaussian elimination over the rationals.
pub(crate) fn rational_rank(m: &SymMatrix<BigRational>) -> usize {
    let n = m.n;
    let mut rows = m.to_rows();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in rank + 1..n {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = &rows[r][col] / &pivot;
            for c in col..n {
                let t = &f * &rows[rank][c];
                rows[r][c] -= t;
            }
        }
        rank += 1;
    }
    rank
}

/// Exact semidefiniteness by symmetric elimination: eliminate on a positive
/// diagonal pivot; a negative diagonal entry, or a zero diagonal entry with a
/// nonzero row, certifies indefiniteness.
pub(crate) fn rational_is_psd(m: &SymMatrix<BigRational>) -> bool {
    let n = m.n;
    let mut a = m.to_rows();
    let mut alive: Vec<usize> = (0..n).collect();
    while !alive.is_empty() {
        if alive.iter().any(|&i| a[i][i].is_negative()) {
            return false;
        }
        let pivot = alive.iter().copied().find(|&i| a[i][i].is_positive());
        let Some(p) = pivot else {
            // every remaining diagonal entry is zero
            return alive.iter().all(|&i| alive.iter().all(|&j| a[i][j].is_zero()));
        };
        for &i in &alive {
            if a[i][i].is_zero() && !a[i][p].is_zero() {
                return false;
            }
        }
        alive.retain(|&i| i != p);
        let d = a[p][p].clone();
        for &i in &alive {
            if a[i][p].is_zero() {
                continue;
            }
            let f = &a[i][p] / &d;
            for &j in &alive {
                let t = &f * &a[p][j];
                a[i][j] -= t;
            }
        }
    }
    true
}

/// `(tr M)^2 / tr(M^2)` over the rationals.
pub fn trace_rank_lower_bound(m: &SymMatrix<BigRational>) -> BigRational {
    m.trace_rank_lower_bound()
}

/// Exact rank over the rationals.
pub fn rank_of(m: &SymMatrix<BigRational>) -> usize {
    rational_rank(m)
}

/// `I - A / lam` for a graph adjacency matrix and rational `lam`.
pub fn identity_minus_scaled_adjacency(g: &Graph, lam: &BigRational) -> SymMatrix<BigRational> {
    let inv = BigRational::one() / lam;
    SymMatrix::<BigRational>::identity(g.order()).sub(&SymMatrix::adjacency(g).scale(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn jacobi_on_small_graphs() {
        let k3 = SymMatrix::<f64>::adjacency(&Graph::complete(3).unwrap());
        let ev = k3.eigenvalues();
        assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] + 1.0).abs() < 1e-12 && (ev[2] - 2.0).abs() < 1e-12);
        let p3 = SymMatrix::<f64>::adjacency(&Graph::path(3).unwrap());
        let (vals, vecs) = p3.eigen();
        assert!((vals[2] - 2f64.sqrt()).abs() < 1e-12);
        let v = &vecs[2];
        assert!((v[0].abs() - 0.5).abs() < 1e-12 && (v[1].abs() - 0.5f64.sqrt()).abs() < 1e-12);
        let f32m = SymMatrix::<f32>::adjacency(&Graph::cycle(5).unwrap());
        assert!((f32m.eigenvalues()[4] - 2.0).abs() < 1e-5);
    }

    #[test]
    fn exact_rank_and_psd() {
        let j = SymMatrix::<BigRational>::ones(6);
        assert_eq!(rank_of(&j), 1);
        let m = identity_minus_scaled_adjacency(&Graph::complete(3).unwrap(), &q(2, 1));
        assert_eq!(rank_of(&m), 2);
        assert!(m.psd(0.0).psd);
        assert_eq!(trace_rank_lower_bound(&m), q(2, 1));
        let bad = identity_minus_scaled_adjacency(&Graph::complete(3).unwrap(), &q(3, 2));
        assert!(!bad.psd(0.0).psd);
        let zero_diag = SymMatrix::from_rows(vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]).unwrap();
        assert!(!zero_diag.psd(0.0).psd);
        assert_eq!(trace_rank_lower_bound(&SymMatrix::<BigRational>::identity(5)), q(5, 1));
        assert_eq!(trace_rank_lower_bound(&SymMatrix::<BigRational>::ones(4)), q(1, 1));
    }

    #[test]
    fn kronecker_with_identity() {
        let m = SymMatrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let k = m.kron_identity(2);
        assert_eq!(k.order(), 4);
        assert_eq!(*k.get(0, 2), 2.0);
        assert_eq!(*k.get(0, 3), 0.0);
        assert_eq!(*k.get(3, 3), 3.0);
    }
}
