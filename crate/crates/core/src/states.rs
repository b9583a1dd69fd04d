//! Pure and mixed quantum states, plus seeded samplers.
//!
//! All randomness comes from ChaCha8 (`rand_chacha`) seeded with
//! `seed_from_u64`, and Gaussians from `rand_distr::StandardNormal`, so
//! every sample is a pure function of its seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{eigen_decompose, ComplexMatrix, C64, HERMITIAN_TOL};

pub const NORM_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;

/// Seeded generator used by every sampler in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a base seed with a stream index (SplitMix64 finalizer).
///
/// Used to give every sample of a batch its own independent seed, so batch
/// results do not depend on how work is split across threads.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn gaussian_complex(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Unit vector in `C^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if amplitudes.is_empty() || (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if amplitudes.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    /// Interprets `2N` reals as `(re_0, im_0, re_1, im_1, ...)` and normalizes.
    pub fn from_real_params(params: &[f64]) -> Result<Self> {
        if !params.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "parameter vector length {} is odd",
                params.len()
            )));
        }
        Self::normalized(
            params
                .chunks_exact(2)
                .map(|c| C64::new(c[0], c[1]))
                .collect(),
        )
    }

    pub fn to_real_params(&self) -> Vec<f64> {
        self.amplitudes.iter().flat_map(|z| [z.re, z.im]).collect()
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `|⟨v|ψ⟩|²`
    pub fn overlap_sq(&self, v: &[C64]) -> f64 {
        self.amplitudes
            .iter()
            .zip(v)
            .map(|(a, b)| b.conj() * a)
            .sum::<C64>()
            .norm_sqr()
    }
}

/// Positive semidefinite, unit-trace Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    purity: f64,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (defect {defect:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let spectrum = eigen_decompose(&matrix)?;
        let min = spectrum.eigenvalues().last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self::from_trusted(matrix))
    }

    /// For constructions that are PSD with unit trace by design.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        let purity = matrix.trace_product(&matrix).expect("square").re;
        Self { matrix, purity }
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diagonal(probs))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `Tr[ρ²]`
    pub fn purity(&self) -> f64 {
        self.purity
    }

    /// `2 Tr[ρ²] − 1`, the squared Bloch radius for a qubit.
    pub fn bloch_radius_sq(&self) -> f64 {
        2.0 * self.purity - 1.0
    }

    /// `⟨v|ρ|v⟩`
    pub fn population(&self, v: &[C64]) -> f64 {
        self.matrix.quadratic_form(v).re
    }
}

/// `|ψ⟩⟨ψ|`
pub fn pure_state(v: &StateVector) -> DensityMatrix {
    DensityMatrix::from_trusted(ComplexMatrix::outer(v.amplitudes(), v.amplitudes()))
}

/// Haar-random pure state: `2·dim` standard Gaussians, normalized.
pub fn random_pure(dim: usize, seed: u64) -> Result<StateVector> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "state dimension must be >= 2, got {dim}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let amps: Vec<C64> = (0..dim).map(|_| gaussian_complex(&mut rng)).collect();
    StateVector::normalized(amps)
}

/// Hilbert–Schmidt random mixed state `GG† / Tr[GG†]` with Ginibre `G`.
pub fn random_mixed(dim: usize, seed: u64) -> Result<DensityMatrix> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "state dimension must be >= 2, got {dim}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let g = ComplexMatrix::new(
        dim,
        (0..dim * dim).map(|_| gaussian_complex(&mut rng)).collect(),
    )?;
    let ggd = &g * &g.adjoint();
    let tr = ggd.trace().re;
    let mut rho = ggd.scale_real(1.0 / tr);
    for i in 0..dim {
        rho[(i, i)] = C64::new(rho[(i, i)].re, 0.0);
        for j in i + 1..dim {
            rho[(j, i)] = rho[(i, j)].conj();
        }
    }
    Ok(DensityMatrix::from_trusted(rho))
}

/// `ρ = (I + r n·σ) / 2`
pub fn qubit_from_bloch(n: [f64; 3], r: f64) -> Result<DensityMatrix> {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidBloch(format!("|n| = {norm}")));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidBloch(format!("r = {r}")));
    }
    let (x, y, z) = (r * n[0], r * n[1], r * n[2]);
    let m = ComplexMatrix::from_rows(&[
        vec![C64::new((1.0 + z) / 2.0, 0.0), C64::new(x / 2.0, -y / 2.0)],
        vec![C64::new(x / 2.0, y / 2.0), C64::new((1.0 - z) / 2.0, 0.0)],
    ]);
    Ok(DensityMatrix::from_trusted(m))
}

/// Uniform random unit vector in R³.
pub fn random_axis(seed: u64) -> [f64; 3] {
    let mut rng = rng_from_seed(seed);
    loop {
        let v: [f64; 3] = [
            StandardNormal.sample(&mut rng),
            StandardNormal.sample(&mut rng),
            StandardNormal.sample(&mut rng),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-8 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn check_density(rho: &DensityMatrix) {
        let m = rho.matrix();
        assert!(m.is_hermitian(1e-12));
        assert!((m.trace().re - 1.0).abs() < 1e-10);
        let spec = eigen_decompose(m).unwrap();
        assert!(*spec.eigenvalues().last().unwrap() >= -1e-10);
        let direct = m.trace_product(m).unwrap().re;
        assert!((rho.purity() - direct).abs() < 1e-12);
        let n = rho.dim() as f64;
        assert!(rho.purity() >= 1.0 / n - 1e-12 && rho.purity() <= 1.0 + 1e-12);
    }

    #[test]
    fn pure_state_examples() {
        let rho = pure_state(&StateVector::new(vec![c(1., 0.), c(0., 0.)]).unwrap());
        assert!(rho.matrix().max_abs_diff(&ComplexMatrix::from_diagonal(&[1.0, 0.0])) < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-12);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = pure_state(&StateVector::new(vec![c(h, 0.), c(h, 0.)]).unwrap());
        assert!(plus.matrix().as_slice().iter().all(|z| (z - c(0.5, 0.)).norm() < 1e-15));

        let y = pure_state(&StateVector::new(vec![c(h, 0.), c(0., h)]).unwrap());
        let expect = ComplexMatrix::from_rows(&[
            vec![c(0.5, 0.), c(0., -0.5)],
            vec![c(0., 0.5), c(0.5, 0.)],
        ]);
        assert!(y.matrix().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(matches!(
            StateVector::new(vec![c(1., 0.), c(1., 0.)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(StateVector::normalized(vec![c(0., 0.); 3]).is_err());
    }

    #[test]
    fn random_pure_is_normalized_and_deterministic() {
        for seed in 0..100 {
            let v = random_pure(2, seed).unwrap();
            let n: f64 = v.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
        assert_eq!(random_pure(4, 9).unwrap(), random_pure(4, 9).unwrap());
        assert_ne!(random_pure(4, 9).unwrap(), random_pure(4, 10).unwrap());
        assert!(random_pure(1, 0).is_err());
    }

    #[test]
    fn haar_first_moment() {
        // E|⟨e|ψ⟩|² = 1/N
        let n = 10_000;
        let mean: f64 = (0..n)
            .map(|s| random_pure(3, s).unwrap().amplitudes()[0].norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 1.0 / 3.0).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn hilbert_schmidt_mean_purity() {
        // For N = 2 the HS measure is uniform in the Bloch ball: E r² = 3/5,
        // so E Tr ρ² = (1 + 3/5) / 2 = 4/5.
        let n = 10_000;
        let mean: f64 = (0..n)
            .map(|s| random_mixed(2, s).unwrap().purity())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.8).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn sampled_states_are_valid() {
        for seed in 0..10_000u64 {
            let dim = 2 + (seed % 3) as usize;
            let rho = random_mixed(dim, seed).unwrap();
            check_density(&rho);
            let psi = random_pure(dim, seed).unwrap();
            let p = pure_state(&psi);
            assert!((p.purity() - 1.0).abs() < 1e-12);
            if dim == 2 {
                let r2 = rho.bloch_radius_sq();
                assert!((-1e-12..=1.0 + 1e-12).contains(&r2));
            }
        }
        assert_eq!(random_mixed(3, 77).unwrap(), random_mixed(3, 77).unwrap());
    }

    #[test]
    fn bloch_examples() {
        let north = qubit_from_bloch([0., 0., 1.], 1.0).unwrap();
        assert!(north.matrix().max_abs_diff(&ComplexMatrix::from_diagonal(&[1., 0.])) < 1e-15);
        let mixed = qubit_from_bloch([0., 0., 1.], 0.0).unwrap();
        assert!(mixed.matrix().max_abs_diff(&ComplexMatrix::from_diagonal(&[0.5, 0.5])) < 1e-15);
        let half = qubit_from_bloch([1., 0., 0.], 0.5).unwrap();
        let expect = ComplexMatrix::from_real_rows(&[vec![0.5, 0.25], vec![0.25, 0.5]]);
        assert!(half.matrix().max_abs_diff(&expect) < 1e-15);
        assert!((half.purity() - (1.0 + 0.25) / 2.0).abs() < 1e-15);
        assert!(matches!(qubit_from_bloch([1., 1., 0.], 0.5), Err(Error::InvalidBloch(_))));
        assert!(matches!(qubit_from_bloch([1., 0., 0.], 1.5), Err(Error::InvalidBloch(_))));
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::from_diagonal(&[0.5, 0.6]).is_err());
        assert!(DensityMatrix::from_diagonal(&[1.5, -0.5]).is_err());
        let m = ComplexMatrix::from_real_rows(&[vec![0.5, 0.7], vec![0.7, 0.5]]);
        assert!(DensityMatrix::new(m).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let a: Vec<u64> = (0..1000).map(|i| derive_seed(7, i)).collect();
        let mut b = a.clone();
        b.sort_unstable();
        b.dedup();
        assert_eq!(a.len(), b.len());
        assert_ne!(derive_seed(7, 0), derive_seed(8, 0));
    }
}
