//! Dense complex linear algebra for small Hermitian matrices.
//!
//! Everything here targets dimensions up to about 8: matrices are stored
//! row-major in a flat `Vec`, and the eigensolver is a cyclic complex Jacobi
//! iteration, which is accurate to near machine precision at these sizes.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::DensityMatrix;

pub type C64 = Complex64;

/// Entrywise tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Imaginary part allowed on `Tr[ρ m]` for Hermitian `m`.
pub const EXPECTATION_IMAG_TOL: f64 = 1e-10;
/// Relative off-diagonal norm at which the Jacobi iteration stops.
pub const JACOBI_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Relative gap below which two eigenvalues are treated as equal.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::InvalidShape {
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from rows; panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let dim = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == dim),
            "rows must form a square matrix"
        );
        Self {
            dim,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// `|v⟩⟨w|`
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        assert_eq!(v.len(), w.len());
        let dim = v.len();
        let mut data = Vec::with_capacity(dim * dim);
        for vi in v {
            for wj in w {
                data.push(vi * wj.conj());
            }
        }
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max_ij |self_ij - other_ij|`; panics on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|m_ij - conj(m_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `⟨v|M|v⟩`
    pub fn quadratic_form(&self, v: &[C64]) -> C64 {
        let mv = self.mul_vec(v);
        v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn try_matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(self * other)
    }

    /// `Tr[self · other]` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<C64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let n = self.dim;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        Ok(acc)
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    s += self[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matmul");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
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

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// A Hermitian matrix together with its spectral decomposition.
///
/// Eigenvalues are stored in descending order; column `j` of
/// `eigenvectors` is the eigenvector for `eigenvalues[j]`, with its
/// largest-modulus entry rotated to be real and positive.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        eigen_decompose(&matrix)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, j: usize) -> Vec<C64> {
        self.eigenvectors.column(j)
    }

    /// `|j⟩⟨j|`
    pub fn projector(&self, j: usize) -> ComplexMatrix {
        let v = self.eigenvector(j);
        ComplexMatrix::outer(&v, &v)
    }

    /// `Σ_j f(λ_j) |j⟩⟨j|`
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for r in 0..n {
                let vr = self.eigenvectors[(r, j)] * w;
                for c in 0..n {
                    out[(r, c)] += vr * self.eigenvectors[(c, j)].conj();
                }
            }
        }
        out
    }

    pub fn is_nondegenerate(&self) -> bool {
        let ev = &self.eigenvalues;
        (0..ev.len()).all(|i| (i + 1..ev.len()).all(|j| !is_degenerate(ev[i], ev[j])))
    }

    /// `max |Σ_j λ_j |j⟩⟨j| − M|`
    pub fn reconstruction_residual(&self) -> f64 {
        self.apply_fn(|x| x).max_abs_diff(&self.matrix)
    }

    /// `max |U†U − I|`
    pub fn unitarity_defect(&self) -> f64 {
        let u = &self.eigenvectors;
        (&u.adjoint() * u).max_abs_diff(&ComplexMatrix::identity(self.dim()))
    }
}

/// Eigenvalues closer than `1e-9 · max(1, |a|, |b|)` count as degenerate.
pub fn is_degenerate(a: f64, b: f64) -> bool {
    (a - b).abs() < DEGENERACY_TOL * 1f64.max(a.abs()).max(b.abs())
}

/// Spectral decomposition by cyclic complex Jacobi rotations.
pub fn eigen_decompose(m: &ComplexMatrix) -> Result<HermitianOperator> {
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.dim;
    let mut a = m.clone();
    // symmetrize exactly so rounding in the input does not leak into the rotations
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_TOL * m.frobenius_norm();

    let mut sweeps = 0;
    while a.off_diagonal_norm() > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    // stable: ties keep Jacobi output order
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        let mut vec = v.column(src);
        fix_phase(&mut vec);
        for (r, z) in vec.into_iter().enumerate() {
            eigenvectors[(r, col)] = z;
        }
    }
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();

    Ok(HermitianOperator {
        matrix: m.clone(),
        eigenvalues,
        eigenvectors,
    })
}

/// Zeroes `a[p][q]` with a unitary acting on indices `p, q`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // phase that makes the (p,q) entry real and positive
    let phase = apq.conj() / mag;

    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U = D·R with D = diag(.., 1 at p, phase at q, ..), R the real rotation
    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = phase * (-s);
    let u_qq = phase * c;

    let n = a.dim;
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// Rotates `vec` so its largest-modulus entry (first one on near-ties) is real positive.
fn fix_phase(vec: &mut [C64]) {
    let max = vec.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = vec
        .iter()
        .position(|z| z.norm() >= max - 1e-12)
        .expect("max exists");
    let phase = vec[pivot].conj() / vec[pivot].norm();
    for z in vec.iter_mut() {
        *z *= phase;
    }
    vec[pivot] = C64::new(vec[pivot].re, 0.0);
}

/// `Re Tr[ρ m]`, rejecting a non-negligible imaginary part.
pub fn expectation(rho: &DensityMatrix, m: &ComplexMatrix) -> Result<f64> {
    let z = rho.matrix().trace_product(m)?;
    if z.im.abs() > EXPECTATION_IMAG_TOL {
        return Err(Error::NonRealExpectation(z.im));
    }
    Ok(z.re)
}

/// `C = (AB − BA) / 2i`, so that `[A, B] = 2iC`.
pub fn commutator_half_i(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let ab = a.try_matmul(b)?;
    let ba = b * a;
    Ok((&ab - &ba).scale(C64::new(0.0, -0.5)))
}

/// `Σ_k coeffs[k] · op^k`, evaluated on the spectrum.
pub fn apply_polynomial(op: &HermitianOperator, coeffs: &[f64]) -> Result<ComplexMatrix> {
    if coeffs.is_empty() {
        return Err(Error::InvalidArgument(
            "polynomial needs at least one coefficient".into(),
        ));
    }
    Ok(op.apply_fn(|x| coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)))
}
