//! Dense complex linear algebra for the 2x2 and 4x4 matrices this crate
//! deals with: eigenvalues of Hermitian matrices, trace distance, Kronecker
//! products and the Wootters concurrence.
//!
//! Nothing here is tuned for size. Matrices are stored row-major in a `Vec`
//! and every routine is a straightforward dense loop.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tolerances::{HERMITIAN_TOL, PSD_TOL, TRACE_TOL};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq, Serialize)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from rows; every row must have as many entries as there are rows.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// Projector `|v><v|`.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entry-wise deviation from Hermiticity.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Sum of squared moduli of the strictly off-diagonal entries.
    fn off_diagonal_norm_sqr(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc
    }

    fn frobenius_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: other.dim });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product of mismatched dimensions");
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum of mismatched dimensions");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference of mismatched dimensions");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A physical qubit or two-qubit state: Hermitian, unit trace, positive
/// semidefinite. Dimension is 2 or 4.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    /// Validates `m` and stores it with the lower triangle mirrored from the
    /// upper one, so stored entries are exactly Hermitian.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.dim != 2 && m.dim != 4 {
            return Err(Error::Unphysical(format!("dimension {} is not 2 or 4", m.dim)));
        }
        if !m.is_finite() {
            return Err(Error::Unphysical("non-finite entry".into()));
        }
        let defect = m.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::Unphysical(format!("not Hermitian (defect {defect:e})")));
        }
        let m = symmetrize(&m);
        let tr = m.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::Unphysical(format!("trace {tr} differs from 1")));
        }
        let lowest = hermitian_eigenvalues(&m)?[0];
        if lowest < -PSD_TOL {
            return Err(Error::Unphysical(format!("negative eigenvalue {lowest:e}")));
        }
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.0).expect("density matrices are Hermitian")
    }
}

impl Index<(usize, usize)> for DensityMatrix {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

fn symmetrize(m: &CMatrix) -> CMatrix {
    let mut out = m.clone();
    for i in 0..m.dim {
        out[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..m.dim {
            out[(j, i)] = m[(i, j)].conj();
        }
    }
    out
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// 2x2 matrices use the closed quadratic formula; anything larger goes
/// through cyclic Jacobi rotations.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    let defect = m.hermitian_defect();
    if !m.is_finite() || defect > HERMITIAN_TOL {
        return Err(Error::contract(format!("matrix is not Hermitian (defect {defect:e})")));
    }
    let mut values = match m.dim {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let mean = 0.5 * (a + d);
            let half_gap = (0.5 * (a - d)).hypot(m[(0, 1)].norm());
            vec![mean - half_gap, mean + half_gap]
        }
        _ => jacobi_eigen(&symmetrize(m), false).0,
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Cyclic complex Jacobi. Returns the (unsorted) eigenvalues and, if asked,
/// the unitary whose columns are the matching eigenvectors.
fn jacobi_eigen(m: &CMatrix, want_vectors: bool) -> (Vec<f64>, Option<CMatrix>) {
    const MAX_SWEEPS: usize = 100;
    let n = m.dim;
    let mut a = m.clone();
    let mut v = want_vectors.then(|| CMatrix::identity(n));
    let scale = a.frobenius_sqr().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm_sqr() <= 1e-32 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = 0.5 * (2.0 * mag).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                // Rotation G acting on columns p, q:
                //   col_p' = c col_p - s conj(phase) col_q
                //   col_q' = s phase col_p + c col_q
                // which zeroes (G^H A G)[p, q].
                let gpp = C64::new(c, 0.0);
                let gqp = -phase.conj() * s;
                let gpq = phase * s;
                let gqq = C64::new(c, 0.0);
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * gpp + akq * gqp;
                    a[(k, q)] = akp * gpq + akq * gqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * gpp + vkq * gqp;
                        v[(k, q)] = vkp * gpq + vkq * gqq;
                    }
                }
            }
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// `D(a, b) = 1/2 tr|a - b|`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    a.0.check_same_dim(&b.0)?;
    let diff = &a.0 - &b.0;
    let d = 0.5 * hermitian_eigenvalues(&diff)?.iter().map(|l| l.abs()).sum::<f64>();
    Ok(d.min(1.0))
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (na, nb) = (a.dim, b.dim);
    CMatrix::from_fn(na * nb, |i, j| a[(i / nb, j / nb)] * b[(i % nb, j % nb)])
}

/// `sigma_y (x) sigma_y`, which is real.
fn spin_flip() -> CMatrix {
    let mut s = CMatrix::zeros(4);
    s[(0, 3)] = -ONE;
    s[(1, 2)] = ONE;
    s[(2, 1)] = ONE;
    s[(3, 0)] = -ONE;
    s
}

/// Wootters concurrence of a two-qubit state.
///
/// The square roots `sqrt(lambda_i)` of the eigenvalues of
/// `rho (sy x sy) rho* (sy x sy)` are obtained as the singular values of
/// `tau = W^T (sy x sy) W`, where `rho = W W^H` comes from the eigen
/// decomposition of `rho`. The singular values are read off as the positive
/// eigenvalues of the Hermitian dilation `[[0, tau], [tau^H, 0]]`, which keeps
/// small roots accurate to machine precision instead of `sqrt(eps)`.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, actual: rho.dim() });
    }
    let (probs, vecs) = jacobi_eigen(rho.matrix(), true);
    let vecs = vecs.expect("eigenvectors requested");
    let w = CMatrix::from_fn(4, |i, k| vecs[(i, k)] * probs[k].max(0.0).sqrt());
    let tau = &(&w.transpose() * &spin_flip()) * &w;

    let mut dilation = CMatrix::zeros(8);
    for i in 0..4 {
        for j in 0..4 {
            dilation[(i, j + 4)] = tau[(i, j)];
            dilation[(j + 4, i)] = tau[(i, j)].conj();
        }
    }
    let mut singular = jacobi_eigen(&dilation, false).0;
    singular.sort_by(|a, b| b.total_cmp(a));
    let c = singular[0] - singular[1] - singular[2] - singular[3];
    Ok(c.clamp(0.0, 1.0))
}
