//! Recovering outcome distributions from second-order statistics.
//!
//! Two routes are provided:
//!
//! * **Variances of a commuting family.** Every operator diagonal in the
//!   eigenbasis of `A` has variance `Σ_{j<k} p_j p_k (λ_j − λ_k)²`, which is
//!   linear in the pair products `x_{jk} = p_j p_k`. Stacking enough such
//!   operators gives a full-column-rank system `G x = ΔA²` that is solved by
//!   least squares; the probabilities then follow from the products.
//! * **Covariances of Lagrange projectors.** For a nondegenerate `A`,
//!   `Ω_ij = −cov(ℓ_i(A), ℓ_j(A)) = p_i p_j`, so `p_i² = Ω_ij Ω_ik / Ω_jk`
//!   for any distinct triple.
//!
//! Indices are 0-based throughout; pair `(j, k)` with `j < k` is stored at
//! [`pair_index`].

use crate::error::{Error, Result};
use crate::linalg::{eigen_decompose, expectation, ComplexMatrix};
use crate::observables::{covariance, lagrange_basis, variance_of, Observable, ProbDist};
use crate::states::DensityMatrix;

/// Values of `x` or `Ω` below this are treated as zero.
pub const ZERO_TOL: f64 = 1e-10;
/// Smallest denominator accepted in a triple formula.
pub const DENOM_TOL: f64 = 1e-12;
pub const RANK_TOL: f64 = 1e-10;
pub const INCONSISTENT_TOL: f64 = 1e-6;

/// Position of pair `(j, k)`, `j < k < n`, in the packed pair vector.
pub fn pair_index(j: usize, k: usize, n: usize) -> usize {
    debug_assert!(j < k && k < n);
    j * n + k - (j + 1) * (j + 2) / 2
}

pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |j| (j + 1..n).map(move |k| (j, k)))
}

/// `A` together with operators sharing its eigenbasis, and the coefficient
/// matrix `G_il = (λ^(i)_j − λ^(i)_k)²` relating their variances to pair products.
#[derive(Clone, Debug)]
pub struct CommutativeSet {
    base: Observable,
    spectra: Vec<Vec<f64>>,
    coefficients: Vec<Vec<f64>>,
}

impl CommutativeSet {
    pub fn base(&self) -> &Observable {
        &self.base
    }

    /// Number of operators `M` (rows of `G`).
    pub fn len(&self) -> usize {
        self.spectra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spectra.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn spectra(&self) -> &[Vec<f64>] {
        &self.spectra
    }

    /// `M × L` coefficient matrix.
    pub fn coefficients(&self) -> &[Vec<f64>] {
        &self.coefficients
    }

    /// `A_i = Σ_j λ^(i)_j |j⟩⟨j|`
    pub fn member(&self, i: usize) -> ComplexMatrix {
        let spectrum = &self.spectra[i];
        let mut out = ComplexMatrix::zeros(self.dim());
        for (j, &l) in spectrum.iter().enumerate() {
            if l != 0.0 {
                out = &out + &self.base.operator().projector(j).scale_real(l);
            }
        }
        out
    }

    /// Variances of every member in `rho`.
    pub fn variances(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        (0..self.len())
            .map(|i| variance_of(rho, &self.member(i)))
            .collect()
    }
}

fn coefficient_row(spectrum: &[f64]) -> Vec<f64> {
    let n = spectrum.len();
    pairs(n)
        .map(|(j, k)| (spectrum[j] - spectrum[k]).powi(2))
        .collect()
}

/// `A` followed by `D_jk = |j⟩⟨j| − |k⟩⟨k|` for every pair `j < k`.
pub fn build_commutative_set(a: &Observable) -> Result<CommutativeSet> {
    let n = a.dim();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "commutative set needs dimension >= 2".into(),
        ));
    }
    let mut spectra = vec![a.eigenvalues().to_vec()];
    for (j, k) in pairs(n) {
        let mut s = vec![0.0; n];
        s[j] = 1.0;
        s[k] = -1.0;
        spectra.push(s);
    }
    let coefficients: Vec<Vec<f64>> = spectra.iter().map(|s| coefficient_row(s)).collect();
    let (smin, smax) = singular_value_range(&coefficients)?;
    if smin.is_nan() || smin <= RANK_TOL * smax {
        return Err(Error::RankDeficient(smin / smax));
    }
    Ok(CommutativeSet {
        base: a.clone(),
        spectra,
        coefficients,
    })
}

/// Normal-equation matrix `GᵀG`.
fn gram(g: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let l = g[0].len();
    let mut out = vec![vec![0.0; l]; l];
    for row in g {
        for a in 0..l {
            for b in 0..l {
                out[a][b] += row[a] * row[b];
            }
        }
    }
    out
}

fn singular_value_range(g: &[Vec<f64>]) -> Result<(f64, f64)> {
    let gtg = ComplexMatrix::from_real_rows(&gram(g));
    let spec = eigen_decompose(&gtg)?;
    let ev = spec.eigenvalues();
    let smax = ev[0].max(0.0).sqrt();
    let smin = ev[ev.len() - 1].max(0.0).sqrt();
    Ok((smin, smax))
}

/// Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty");
        if a[pivot][col].abs() < f64::MIN_POSITIVE {
            return Err(Error::RankDeficient(0.0));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                let (top, rest) = a.split_at_mut(r);
                for (x, p) in rest[0][col..].iter_mut().zip(&top[col][col..]) {
                    *x -= f * p;
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Ok(x)
}

/// Pair products `x_{jk} = p_j p_k`, `j < k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairProducts {
    n: usize,
    x: Vec<f64>,
}

impl PairProducts {
    /// Clamps each entry into `[0, 1/4]`; entries outside `[−1e-8, 1/4 + 1e-8]` are rejected.
    pub fn new(n: usize, x: Vec<f64>) -> Result<Self> {
        if x.len() != pair_count(n) {
            return Err(Error::InvalidShape {
                expected: pair_count(n),
                got: x.len(),
            });
        }
        if let Some(&bad) = x
            .iter()
            .find(|&&v| !v.is_finite() || !(-1e-8..=0.25 + 1e-8).contains(&v))
        {
            return Err(Error::InconsistentVariances(bad));
        }
        Ok(Self {
            n,
            x: x.into_iter().map(|v| v.clamp(0.0, 0.25)).collect(),
        })
    }

    /// Exact products of a known distribution.
    pub fn from_probs(p: &ProbDist) -> Self {
        let n = p.len();
        let x = pairs(n).map(|(j, k)| p[j] * p[k]).collect();
        Self { n, x }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.x
    }

    /// `x_{jk}` for any `j ≠ k`.
    pub fn get(&self, j: usize, k: usize) -> f64 {
        let (a, b) = if j < k { (j, k) } else { (k, j) };
        self.x[pair_index(a, b, self.n)]
    }
}

/// Least-squares solution of `G x = ΔA²`.
pub fn variances_to_pair_products(cs: &CommutativeSet, variances: &[f64]) -> Result<PairProducts> {
    if variances.len() != cs.len() {
        return Err(Error::InvalidShape {
            expected: cs.len(),
            got: variances.len(),
        });
    }
    if let Some(&bad) = variances.iter().find(|&&v| !v.is_finite() || v < -ZERO_TOL) {
        return Err(Error::InconsistentVariances(bad));
    }
    let g = cs.coefficients();
    let l = g[0].len();
    let mut rhs = vec![0.0; l];
    for (row, &d) in g.iter().zip(variances) {
        for (acc, &gij) in rhs.iter_mut().zip(row) {
            *acc += gij * d;
        }
    }
    let x = solve_dense(gram(g), rhs)?;
    let residual = g
        .iter()
        .zip(variances)
        .map(|(row, &d)| (row.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() - d).abs())
        .fold(0.0, f64::max);
    if residual > INCONSISTENT_TOL {
        return Err(Error::InconsistentVariances(residual));
    }
    PairProducts::new(cs.dim(), x)
}

/// Roots of `p(1 − p) = x`, larger first.
fn two_level_split(x: f64) -> (f64, f64) {
    let root = (1.0 - 4.0 * x.clamp(0.0, 0.25)).max(0.0).sqrt();
    let hi = (1.0 + root) / 2.0;
    (hi, x.max(0.0) / hi)
}

/// Recovers `p` from pair products.
///
/// The pivot `m` maximizes `Σ_k x_{mk}`; `p_m = √(x_{mj} x_{mk} / x_{jk})`
/// with `j, k` its two largest partners, and `p_i = x_{im}/p_m` for the rest.
/// Variances cannot tell which of two outcomes carries the larger weight in
/// a two-level problem; there the larger root goes to the lower index.
pub fn pair_products_to_probs(x: &PairProducts) -> Result<ProbDist> {
    let n = x.n;
    if n == 1 {
        return Ok(ProbDist::uniform(1));
    }
    let active: Vec<(usize, usize)> = pairs(n).filter(|&(j, k)| x.get(j, k) > ZERO_TOL).collect();
    if active.is_empty() {
        return Err(Error::AmbiguousDistribution);
    }
    if n == 2 || active.len() == 1 {
        let (j, k) = active[0];
        let (hi, lo) = two_level_split(x.get(j, k));
        let mut p = vec![0.0; n];
        p[j] = hi;
        p[k] = lo;
        return ProbDist::renormalized(p);
    }

    let m = (0..n)
        .max_by(|&a, &b| {
            let sa: f64 = (0..n).filter(|&k| k != a).map(|k| x.get(a, k)).sum();
            let sb: f64 = (0..n).filter(|&k| k != b).map(|k| x.get(b, k)).sum();
            // ties resolve to the lower index
            sa.total_cmp(&sb).then(b.cmp(&a))
        })
        .expect("n >= 3");
    let mut partners: Vec<usize> = (0..n).filter(|&k| k != m).collect();
    partners.sort_by(|&a, &b| x.get(m, b).total_cmp(&x.get(m, a)).then(a.cmp(&b)));
    let (j, k) = (partners[0], partners[1]);
    let denom = x.get(j, k);
    if denom < DENOM_TOL {
        return Err(Error::NumericallyDegenerate);
    }
    let pm = (x.get(m, j) * x.get(m, k) / denom).max(0.0).sqrt();
    let mut p = vec![0.0; n];
    p[m] = pm;
    for i in (0..n).filter(|&i| i != m) {
        p[i] = x.get(i, m) / pm;
    }
    ProbDist::renormalized(p)
}

/// The matrix `Ω_ij = −cov(ℓ_i(A), ℓ_j(A))` (diagonal left at zero).
pub fn covariance_matrix(rho: &DensityMatrix, a: &Observable) -> Result<Vec<Vec<f64>>> {
    let n = a.dim();
    let ls = (0..n)
        .map(|j| lagrange_basis(a, j))
        .collect::<Result<Vec<_>>>()?;
    let mut omega = vec![vec![0.0; n]; n];
    for (i, j) in pairs(n) {
        let w = -covariance(rho, &ls[i], &ls[j])?;
        omega[i][j] = w;
        omega[j][i] = w;
    }
    Ok(omega)
}

/// Recovers the Born distribution of `a` in `rho` from covariances of its
/// Lagrange projectors.
///
/// Each `p_i` uses the triple `(i, j, k)` whose denominator `|Ω_jk|` is
/// largest. Rows where every `Ω_ij` vanishes, and rows with no usable
/// denominator, are resolved as follows: a single such index takes the
/// complement `1 − Σ others`; support on exactly two outcomes is split by
/// `p_i p_j = Ω_ij`; all-zero `Ω` means a dispersion-free state. In the last
/// two cases the ordering ambiguity is settled by the first moment `⟨A⟩`.
pub fn probs_from_covariances(rho: &DensityMatrix, a: &Observable) -> Result<ProbDist> {
    if !a.is_nondegenerate() {
        return Err(Error::DegenerateSpectrum);
    }
    let n = a.dim();
    let omega = covariance_matrix(rho, a)?;
    let lambda = a.eigenvalues();
    let mean = || expectation(rho, a.matrix());

    let active: Vec<(usize, usize)> = pairs(n).filter(|&(i, j)| omega[i][j] >= ZERO_TOL).collect();
    if active.is_empty() {
        let m = nearest_eigenvalue(lambda, mean()?);
        let mut p = vec![0.0; n];
        p[m] = 1.0;
        return ProbDist::new(p);
    }
    if active.len() == 1 {
        let (i, j) = active[0];
        let (hi, lo) = two_level_split(omega[i][j]);
        let mu = mean()?;
        let mut p = vec![0.0; n];
        // pick the assignment that reproduces ⟨A⟩
        if (lambda[i] * hi + lambda[j] * lo - mu).abs() <= (lambda[i] * lo + lambda[j] * hi - mu).abs() {
            p[i] = hi;
            p[j] = lo;
        } else {
            p[i] = lo;
            p[j] = hi;
        }
        return ProbDist::renormalized(p);
    }

    let mut p = vec![f64::NAN; n];
    for i in 0..n {
        if (0..n).filter(|&j| j != i).all(|j| omega[i][j] < ZERO_TOL) {
            continue;
        }
        let best = pairs(n)
            .filter(|&(j, k)| j != i && k != i)
            .max_by(|&(a1, b1), &(a2, b2)| omega[a1][b1].abs().total_cmp(&omega[a2][b2].abs()));
        if let Some((j, k)) = best {
            let denom = omega[j][k];
            if denom.abs() >= DENOM_TOL {
                p[i] = (omega[i][j] * omega[i][k] / denom).max(0.0).sqrt();
            }
        }
    }
    let unresolved: Vec<usize> = (0..n).filter(|&i| p[i].is_nan()).collect();
    match unresolved.as_slice() {
        [] => {}
        [i] => {
            let others: f64 = (0..n).filter(|j| j != i).map(|j| p[j]).sum();
            p[*i] = (1.0 - others).max(0.0);
        }
        _ => return Err(Error::VanishingDenominator),
    }
    ProbDist::renormalized(p)
}

fn nearest_eigenvalue(lambda: &[f64], mean: f64) -> usize {
    (0..lambda.len())
        .min_by(|&a, &b| (lambda[a] - mean).abs().total_cmp(&(lambda[b] - mean).abs()))
        .expect("non-empty spectrum")
}

/// Result of the spin-1 closed-form reconstruction.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentReconstruction {
    pub probs: ProbDist,
    /// True when a closed-form denominator vanished and the covariance route was used.
    pub used_fallback: bool,
}

/// Low moments of a spin-1 observable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinOneMoments {
    pub mean_j: f64,
    pub mean_j2: f64,
    pub mean_j3: f64,
    pub var_j: f64,
    pub var_j2: f64,
}

impl SpinOneMoments {
    pub fn from_state(rho: &DensityMatrix, a: &Observable) -> Result<Self> {
        let m = |k: i32| expectation(rho, &a.power(k));
        let (m1, m2, m3, m4) = (m(1)?, m(2)?, m(3)?, m(4)?);
        Ok(Self {
            mean_j: m1,
            mean_j2: m2,
            mean_j3: m3,
            var_j: (m2 - m1 * m1).max(0.0),
            var_j2: (m4 - m2 * m2).max(0.0),
        })
    }

    /// `⟨J³⟩ − ⟨J²⟩⟨J⟩`
    pub fn skew(&self) -> f64 {
        self.mean_j3 - self.mean_j2 * self.mean_j
    }
}

/// Checks that `a` has spectrum `{1, 0, −1}`.
pub fn ensure_spin_one(a: &Observable) -> Result<()> {
    let ev = a.eigenvalues();
    if ev.len() != 3 || ev.iter().zip([1.0, 0.0, -1.0]).any(|(x, y)| (x - y).abs() > 1e-10) {
        return Err(Error::NotSpinOne);
    }
    Ok(())
}

/// Spin-1 probabilities from `V(J)`, `V(J²)` and `⟨J³⟩ − ⟨J²⟩⟨J⟩`.
pub fn spin1_probs_from_moments(rho: &DensityMatrix, a: &Observable) -> Result<MomentReconstruction> {
    ensure_spin_one(a)?;
    let m = SpinOneMoments::from_state(rho, a)?;
    let t = m.skew();
    // Ω_12 = (V(J²) + t)/2, Ω_13 = (V(J) − V(J²))/4, Ω_23 = (V(J²) − t)/2
    let num_den = [
        ((m.var_j2 + t) * (m.var_j - m.var_j2), 4.0 * (m.var_j2 - t)),
        (m.var_j2 * m.var_j2 - t * t, m.var_j - m.var_j2),
        ((m.var_j2 - t) * (m.var_j - m.var_j2), 4.0 * (m.var_j2 + t)),
    ];
    if num_den.iter().any(|&(_, d)| d.abs() < DENOM_TOL) {
        return Ok(MomentReconstruction {
            probs: probs_from_covariances(rho, a)?,
            used_fallback: true,
        });
    }
    let p = num_den.iter().map(|&(n, d)| (n / d).max(0.0).sqrt()).collect();
    Ok(MomentReconstruction {
        probs: ProbDist::renormalized(p)?,
        used_fallback: false,
    })
}

/// Born distribution → member variances → pair products → distribution.
pub fn reconstruct_from_variances(rho: &DensityMatrix, a: &Observable) -> Result<ProbDist> {
    let cs = build_commutative_set(a)?;
    let v = cs.variances(rho)?;
    pair_products_to_probs(&variances_to_pair_products(&cs, &v)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::{born_probabilities, qubit_observable, spin_operator};
    use crate::states::{pure_state, random_axis, random_mixed, StateVector};

    const Z: [f64; 3] = [0.0, 0.0, 1.0];

    fn sorted(p: &ProbDist) -> Vec<f64> {
        let mut v = p.as_slice().to_vec();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    #[test]
    fn pair_index_is_a_bijection() {
        for n in 2..9 {
            let idx: Vec<usize> = pairs(n).map(|(j, k)| pair_index(j, k, n)).collect();
            assert_eq!(idx, (0..pair_count(n)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn qubit_set() {
        let cs = build_commutative_set(&qubit_observable(Z).unwrap()).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs.coefficients(), &[vec![4.0], vec![4.0]]);
    }

    #[test]
    fn spin1_set_block_is_invertible() {
        let a = spin_operator(2, Z).unwrap();
        let cs = build_commutative_set(&a).unwrap();
        assert_eq!(cs.len(), 4);
        assert_eq!(cs.coefficients()[0], vec![1.0, 4.0, 1.0]);
        let block: Vec<Vec<f64>> = cs.coefficients()[1..].to_vec();
        assert_eq!(block, vec![vec![4., 1., 1.], vec![1., 4., 1.], vec![1., 1., 4.]]);
        // determinant by cofactor expansion: 4·15 − 1·3 + 1·(−3) = 54
        let d = block[0][0] * (block[1][1] * block[2][2] - block[1][2] * block[2][1])
            - block[0][1] * (block[1][0] * block[2][2] - block[1][2] * block[2][0])
            + block[0][2] * (block[1][0] * block[2][1] - block[1][1] * block[2][0]);
        assert_eq!(d, 54.0);
    }

    #[test]
    fn first_row_is_base_spectrum_and_cardinality_in_range() {
        for n in 2..=6u32 {
            let a = spin_operator(n - 1, random_axis(n as u64)).unwrap();
            let cs = build_commutative_set(&a).unwrap();
            let dim = n as usize;
            assert_eq!(cs.coefficients()[0], coefficient_row(a.eigenvalues()));
            assert!(cs.len() >= dim - 1 && cs.len() <= pair_count(dim) + 1);
            // the pair operators alone already have full column rank
            let (smin, smax) = singular_value_range(&cs.coefficients()[1..]).unwrap();
            assert!(smin > RANK_TOL * smax);
            let m = cs.member(0);
            assert!(m.max_abs_diff(a.matrix()) < 1e-12);
        }
    }

    #[test]
    fn zero_variances_give_zero_products() {
        let cs = build_commutative_set(&spin_operator(2, Z).unwrap()).unwrap();
        let x = variances_to_pair_products(&cs, &[0.0; 4]).unwrap();
        assert!(x.as_slice().iter().all(|&v| v.abs() < 1e-15));
        assert!(matches!(pair_products_to_probs(&x), Err(Error::AmbiguousDistribution)));
    }

    #[test]
    fn maximally_mixed_qubit_products() {
        let a = qubit_observable(Z).unwrap();
        let cs = build_commutative_set(&a).unwrap();
        let v = cs.variances(&DensityMatrix::maximally_mixed(2)).unwrap();
        let x = variances_to_pair_products(&cs, &v).unwrap();
        assert!((x.as_slice()[0] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn inconsistent_variances_rejected() {
        let cs = build_commutative_set(&spin_operator(2, Z).unwrap()).unwrap();
        assert!(matches!(
            variances_to_pair_products(&cs, &[1.0, 0.0, 0.0, 0.0]),
            Err(Error::InconsistentVariances(_))
        ));
        assert!(variances_to_pair_products(&cs, &[0.0; 3]).is_err());
    }

    #[test]
    fn spin1_products_match_born_rule() {
        let a = spin_operator(2, random_axis(1)).unwrap();
        let cs = build_commutative_set(&a).unwrap();
        for seed in 0..100 {
            let rho = random_mixed(3, seed).unwrap();
            let x = variances_to_pair_products(&cs, &cs.variances(&rho).unwrap()).unwrap();
            let truth = PairProducts::from_probs(&born_probabilities(&rho, &a).unwrap());
            for (got, want) in x.as_slice().iter().zip(truth.as_slice()) {
                assert!((got - want).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn products_to_probs_examples() {
        let p = pair_products_to_probs(&PairProducts::new(2, vec![0.25]).unwrap()).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        let p = pair_products_to_probs(&PairProducts::new(2, vec![3.0 / 16.0]).unwrap()).unwrap();
        assert!((p[0] - 0.75).abs() < 1e-15 && (p[1] - 0.25).abs() < 1e-15);

        let truth = ProbDist::new(vec![0.5, 1.0 / 3.0, 1.0 / 6.0]).unwrap();
        let p = pair_products_to_probs(&PairProducts::from_probs(&truth)).unwrap();
        assert!(p.max_abs_diff(&truth) < 1e-8);

        // support on two outcomes only
        let truth = ProbDist::new(vec![0.0, 0.7, 0.3]).unwrap();
        let p = pair_products_to_probs(&PairProducts::from_probs(&truth)).unwrap();
        assert!(p.max_abs_diff(&truth) < 1e-12);

        assert!(PairProducts::new(2, vec![0.3]).is_err());
        assert!(PairProducts::new(3, vec![0.1]).is_err());
    }

    #[test]
    fn covariance_route_examples() {
        let a = spin_operator(2, Z).unwrap();
        let rho = DensityMatrix::maximally_mixed(3);
        let omega = covariance_matrix(&rho, &a).unwrap();
        for (i, j) in pairs(3) {
            assert!((omega[i][j] - 1.0 / 9.0).abs() < 1e-15);
        }
        let p = probs_from_covariances(&rho, &a).unwrap();
        assert!(p.max_abs_diff(&ProbDist::uniform(3)) < 1e-15);

        for k in 0..3 {
            let eig = pure_state(&StateVector::basis(3, k));
            let p = probs_from_covariances(&eig, &a).unwrap();
            let mut want = vec![0.0; 3];
            want[k] = 1.0;
            assert!(p.max_abs_diff(&ProbDist::new(want).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn covariance_route_qubit_uses_first_moment() {
        let a = qubit_observable(Z).unwrap();
        for seed in 0..200 {
            let rho = random_mixed(2, seed).unwrap();
            let p = probs_from_covariances(&rho, &a).unwrap();
            assert!(p.max_abs_diff(&born_probabilities(&rho, &a).unwrap()) < 1e-7);
        }
    }

    #[test]
    fn covariance_route_edge_supports() {
        let a = spin_operator(2, Z).unwrap();
        // two-outcome support
        let rho = DensityMatrix::from_diagonal(&[0.0, 0.3, 0.7]).unwrap();
        let p = probs_from_covariances(&rho, &a).unwrap();
        assert!(p.max_abs_diff(&ProbDist::new(vec![0.0, 0.3, 0.7]).unwrap()) < 1e-12);
        // one index without a usable denominator
        let d = 1e-9;
        let rho = DensityMatrix::from_diagonal(&[1.0 - 2.0 * d, d, d]).unwrap();
        let p = probs_from_covariances(&rho, &a).unwrap();
        assert!(p.max_abs_diff(&born_probabilities(&rho, &a).unwrap()) < 1e-7);
        let degenerate = Observable::new(ComplexMatrix::from_diagonal(&[1.0, 1.0, 0.0])).unwrap();
        assert!(matches!(
            probs_from_covariances(&rho, &degenerate),
            Err(Error::DegenerateSpectrum)
        ));
    }

    #[test]
    fn spin1_moment_examples() {
        let a = spin_operator(2, Z).unwrap();
        let zero = pure_state(&StateVector::basis(3, 1));
        let r = spin1_probs_from_moments(&zero, &a).unwrap();
        assert!(r.used_fallback);
        assert!(r.probs.max_abs_diff(&ProbDist::new(vec![0.0, 1.0, 0.0]).unwrap()) < 1e-15);

        let mixed = DensityMatrix::maximally_mixed(3);
        let m = SpinOneMoments::from_state(&mixed, &a).unwrap();
        assert!((m.var_j - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.var_j2 - 2.0 / 9.0).abs() < 1e-15);
        let r = spin1_probs_from_moments(&mixed, &a).unwrap();
        assert!(!r.used_fallback);
        assert!(r.probs.max_abs_diff(&ProbDist::uniform(3)) < 1e-14);

        let half = spin_operator(1, Z).unwrap();
        assert!(matches!(
            spin1_probs_from_moments(&DensityMatrix::maximally_mixed(2), &half),
            Err(Error::NotSpinOne)
        ));
    }

    #[test]
    fn round_trip_through_variances() {
        for seed in 0..400u64 {
            let dim = 2 + (seed % 4) as usize;
            let rho = random_mixed(dim, seed).unwrap();
            let a = spin_operator(dim as u32 - 1, random_axis(seed + 77)).unwrap();
            let truth = born_probabilities(&rho, &a).unwrap();
            let p = reconstruct_from_variances(&rho, &a).unwrap();
            if dim == 2 {
                let diff = sorted(&p)
                    .iter()
                    .zip(sorted(&truth))
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max);
                assert!(diff < 1e-7);
            } else {
                assert!(p.max_abs_diff(&truth) < 1e-7, "seed {seed}");
            }
            let q = probs_from_covariances(&rho, &a).unwrap();
            assert!(q.max_abs_diff(&truth) < 1e-7);
        }
    }
}
