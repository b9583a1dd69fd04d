//! Observables, Born statistics, and standard operator families.

use crate::error::{Error, Result};
use crate::linalg::{eigen_decompose, expectation, ComplexMatrix, HermitianOperator, C64};
use crate::states::{gaussian_complex, rng_from_seed, DensityMatrix};

/// Tolerance on `‖fg − gf‖_max` for the covariance of two polynomials in one observable.
pub const COMMUTE_TOL: f64 = 1e-10;
/// Negative probabilities above this are treated as rounding and clamped to zero.
pub const PROB_NEG_TOL: f64 = 1e-12;
pub const PROB_SUM_TOL: f64 = 1e-9;

/// A Hermitian operator with its spectral decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    op: HermitianOperator,
    nondegenerate: bool,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Ok(Self::from_operator(eigen_decompose(&matrix)?))
    }

    /// Subtracts `Tr[M]/N` before decomposing.
    pub fn new_traceless(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.dim();
        let shift = matrix.trace().re / n as f64;
        let shifted = &matrix - &ComplexMatrix::identity(n).scale_real(shift);
        Self::new(shifted)
    }

    pub fn from_operator(op: HermitianOperator) -> Self {
        let nondegenerate = op.is_nondegenerate();
        Self { op, nondegenerate }
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.op.eigenvalues()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    /// `A^k` evaluated spectrally.
    pub fn power(&self, k: i32) -> ComplexMatrix {
        self.op.apply_fn(|x| x.powi(k))
    }
}

/// Outcome probabilities `p_1..p_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbDist {
    probs: Vec<f64>,
}

impl ProbDist {
    /// Clamps rounding-level negatives to zero; rejects anything else invalid.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        if let Some(&bad) = probs.iter().find(|&&p| !p.is_finite() || p < -PROB_NEG_TOL) {
            return Err(Error::InvalidDistribution(format!("entry {bad}")));
        }
        let probs: Vec<f64> = probs.into_iter().map(|p| p.max(0.0)).collect();
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidDistribution(format!("sum {sum}")));
        }
        Ok(Self { probs })
    }

    /// Clamps negatives and rescales to unit sum.
    pub fn renormalized(probs: Vec<f64>) -> Result<Self> {
        let clamped: Vec<f64> = probs.into_iter().map(|p| p.max(0.0)).collect();
        let sum: f64 = clamped.iter().sum();
        if sum.is_nan() || sum <= 0.0 || sum.is_infinite() {
            return Err(Error::InvalidDistribution(format!("sum {sum}")));
        }
        Self::new(clamped.into_iter().map(|p| p / sum).collect())
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for ProbDist {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.probs[i]
    }
}

fn check_dims(rho: &DensityMatrix, n: usize) -> Result<()> {
    if rho.dim() != n {
        return Err(Error::DimensionMismatch(rho.dim(), n));
    }
    Ok(())
}

/// `p_j = ⟨j|ρ|j⟩` in the eigenbasis of `a` (descending eigenvalue order).
pub fn born_probabilities(rho: &DensityMatrix, a: &Observable) -> Result<ProbDist> {
    check_dims(rho, a.dim())?;
    let probs = (0..a.dim())
        .map(|j| rho.population(&a.op.eigenvector(j)))
        .collect();
    ProbDist::renormalized(probs)
}

/// `Tr[ρA²] − Tr[ρA]²`
pub fn variance(rho: &DensityMatrix, a: &Observable) -> Result<f64> {
    variance_of(rho, a.matrix())
}

/// Variance of an arbitrary Hermitian matrix.
pub fn variance_of(rho: &DensityMatrix, m: &ComplexMatrix) -> Result<f64> {
    check_dims(rho, m.dim())?;
    let mean = expectation(rho, m)?;
    let second = expectation(rho, &(m * m))?;
    Ok((second - mean * mean).max(0.0))
}

/// `½ Σ_{j,k} p_j p_k (λ_j − λ_k)²`
pub fn variance_pairwise(p: &ProbDist, eigenvalues: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (j, (&pj, &lj)) in p.as_slice().iter().zip(eigenvalues).enumerate() {
        for (&pk, &lk) in p.as_slice()[j + 1..].iter().zip(&eigenvalues[j + 1..]) {
            acc += pj * pk * (lj - lk) * (lj - lk);
        }
    }
    acc
}

/// `Re Tr[ρ f g] − Tr[ρ f] Tr[ρ g]` for commuting `f`, `g`.
pub fn covariance(rho: &DensityMatrix, f: &ComplexMatrix, g: &ComplexMatrix) -> Result<f64> {
    check_dims(rho, f.dim())?;
    check_dims(rho, g.dim())?;
    let fg = f * g;
    let gf = g * f;
    let defect = fg.max_abs_diff(&gf);
    if defect > COMMUTE_TOL {
        return Err(Error::NonCommuting(defect));
    }
    let joint = rho.matrix().trace_product(&fg)?.re;
    Ok(joint - expectation(rho, f)? * expectation(rho, g)?)
}

/// `ℓ_j(A) = Π_{m≠j} (A − λ_m)/(λ_j − λ_m)`, evaluated spectrally as the
/// projector onto the `j`-th eigenvector (0-based, descending order).
pub fn lagrange_basis(a: &Observable, j: usize) -> Result<ComplexMatrix> {
    if !a.nondegenerate {
        return Err(Error::DegenerateSpectrum);
    }
    if j >= a.dim() {
        return Err(Error::IndexOutOfRange {
            index: j,
            dim: a.dim(),
        });
    }
    Ok(a.op.projector(j))
}

/// Monomial coefficients (ascending powers) of the Lagrange basis polynomial `ℓ_j`.
pub fn lagrange_coefficients(eigenvalues: &[f64], j: usize) -> Vec<f64> {
    let mut coeffs = vec![1.0];
    let lj = eigenvalues[j];
    for (m, &lm) in eigenvalues.iter().enumerate() {
        if m == j {
            continue;
        }
        let d = lj - lm;
        // multiply by (x - lm)/d
        let mut next = vec![0.0; coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] += c / d;
            next[k] -= c * lm / d;
        }
        coeffs = next;
    }
    coeffs
}

/// `c_ab = max_{j,k} |⟨a_j|b_k⟩|`
pub fn overlap_bound(a: &Observable, b: &Observable) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let ua = a.op.eigenvectors();
    let ub = b.op.eigenvectors();
    let overlaps = &ua.adjoint() * ub;
    Ok(overlaps.max_abs().min(1.0))
}

/// Pauli matrices `[σ_x, σ_y, σ_z]`.
pub fn pauli_matrices() -> [ComplexMatrix; 3] {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        ComplexMatrix::from_rows(&[vec![z, one], vec![one, z]]),
        ComplexMatrix::from_rows(&[vec![z, -i], vec![i, z]]),
        ComplexMatrix::from_rows(&[vec![one, z], vec![z, -one]]),
    ]
}

/// Angular momentum matrices `[J_x, J_y, J_z]` for spin `j2/2` (ħ = 1),
/// in the basis `m = j, j−1, …, −j`.
pub fn spin_matrices(j2: u32) -> Result<[ComplexMatrix; 3]> {
    if j2 < 1 {
        return Err(Error::InvalidSpin(j2));
    }
    let j = j2 as f64 / 2.0;
    let n = j2 as usize + 1;
    let m: Vec<f64> = (0..n).map(|k| j - k as f64).collect();
    let mut jx = ComplexMatrix::zeros(n);
    let mut jy = ComplexMatrix::zeros(n);
    let mut jz = ComplexMatrix::zeros(n);
    for k in 0..n {
        jz[(k, k)] = C64::new(m[k], 0.0);
    }
    // J_+ |m⟩ = sqrt(j(j+1) − m(m+1)) |m+1⟩ ; index k−1 holds m+1
    for k in 1..n {
        let amp = (j * (j + 1.0) - m[k] * (m[k] + 1.0)).sqrt();
        jx[(k - 1, k)] = C64::new(amp / 2.0, 0.0);
        jx[(k, k - 1)] = C64::new(amp / 2.0, 0.0);
        jy[(k - 1, k)] = C64::new(0.0, -amp / 2.0);
        jy[(k, k - 1)] = C64::new(0.0, amp / 2.0);
    }
    Ok([jx, jy, jz])
}

fn check_axis(axis: [f64; 3]) -> Result<()> {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidAxis(norm));
    }
    Ok(())
}

fn axis_combination(ops: &[ComplexMatrix; 3], axis: [f64; 3]) -> ComplexMatrix {
    let [x, y, z] = ops;
    &(&x.scale_real(axis[0]) + &y.scale_real(axis[1])) + &z.scale_real(axis[2])
}

/// `J·n` for spin `j2/2`.
pub fn spin_operator(j2: u32, axis: [f64; 3]) -> Result<Observable> {
    check_axis(axis)?;
    Observable::new(axis_combination(&spin_matrices(j2)?, axis))
}

/// `σ·n`, eigenvalues ±1.
pub fn qubit_observable(axis: [f64; 3]) -> Result<Observable> {
    check_axis(axis)?;
    Observable::new(axis_combination(&pauli_matrices(), axis))
}

/// GUE-distributed observable `(G + G†)/2` with Ginibre `G`.
pub fn random_observable(dim: usize, seed: u64) -> Result<Observable> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "observable dimension must be >= 2, got {dim}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let data: Vec<C64> = (0..dim * dim).map(|_| gaussian_complex(&mut rng)).collect();
    let g = ComplexMatrix::new(dim, data)?;
    Observable::new((&g + &g.adjoint()).scale_real(0.5))
}

/// Unit axis in the x–z plane at `theta_deg` from the z axis.
pub fn axis_at_angle(theta_deg: f64) -> [f64; 3] {
    let t = theta_deg.to_radians();
    [t.sin(), 0.0, t.cos()]
}
