//! Rényi entropies and the closed-form variance ↔ entropy maps.
//!
//! All entropies are in nats. For a qubit observable with eigenvalues `±λ`
//! the normalized variance `v = ΔA²/λ²` fixes the outcome distribution as
//! `a_± = (1 ± √(1 − v))/2`, which makes `H_α` a strictly increasing function
//! `f_α(v)` on `[0, 1]`; `g_α` is its inverse.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::linalg::expectation;
use crate::observables::{Observable, ProbDist};
use crate::states::DensityMatrix;

/// Half-width of the window around `α = 1` where the Shannon formula is used.
pub const SHANNON_WINDOW: f64 = 1e-6;
/// Target accuracy of the bisection inverse `g_α`.
pub const INVERSE_TOL: f64 = 1e-12;
const RANGE_SLACK: f64 = 1e-12;

/// Positive, finite Rényi order.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct RenyiIndex(f64);

impl RenyiIndex {
    pub const SHANNON: RenyiIndex = RenyiIndex(1.0);
    pub const COLLISION: RenyiIndex = RenyiIndex(2.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidRenyiIndex(alpha))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_shannon(self) -> bool {
        (self.0 - 1.0).abs() < SHANNON_WINDOW
    }
}

impl TryFrom<f64> for RenyiIndex {
    type Error = Error;
    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

/// `H_α(p) = ln(Σ p_j^α)/(1 − α)`, Shannon near `α = 1`.
pub fn renyi_entropy(p: &ProbDist, alpha: RenyiIndex) -> f64 {
    renyi_of_slice(p.as_slice(), alpha)
}

fn renyi_of_slice(p: &[f64], alpha: RenyiIndex) -> f64 {
    let h = if alpha.is_shannon() {
        -p.iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| x * x.ln())
            .sum::<f64>()
    } else {
        let a = alpha.0;
        let s: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(a)).sum();
        s.ln() / (1.0 - a)
    };
    h.clamp(0.0, (p.len() as f64).ln())
}

/// `(a_+, a_-)` for normalized variance `v`; `a_-` is formed as `v/(4 a_+)`
/// to avoid cancellation at small `v`.
pub fn qubit_probabilities(v: f64) -> (f64, f64) {
    let root = (1.0 - v).max(0.0).sqrt();
    let plus = (1.0 + root) / 2.0;
    let minus = v.max(0.0) / (4.0 * plus);
    (plus, minus)
}

fn check_variance(v: f64) -> Result<f64> {
    if !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&v) {
        return Err(Error::VarianceOutOfRange(v));
    }
    Ok(v.clamp(0.0, 1.0))
}

/// `f_α(v) = ln(a_+^α + a_-^α)/(1 − α)`.
pub fn qubit_entropy_from_variance(v: f64, alpha: RenyiIndex) -> Result<f64> {
    let v = check_variance(v)?;
    let (plus, minus) = qubit_probabilities(v);
    Ok(renyi_of_slice(&[plus, minus], alpha))
}

/// `g_α(h) = f_α^{-1}(h)` by bisection on `[0, 1]`.
pub fn qubit_variance_from_entropy(h: f64, alpha: RenyiIndex) -> Result<f64> {
    if !(-RANGE_SLACK..=LN_2 + RANGE_SLACK).contains(&h) {
        return Err(Error::EntropyOutOfRange(h));
    }
    let h = h.clamp(0.0, LN_2);
    if h == 0.0 {
        return Ok(0.0);
    }
    if h == LN_2 {
        return Ok(1.0);
    }
    let f = |v: f64| {
        let (plus, minus) = qubit_probabilities(v);
        renyi_of_slice(&[plus, minus], alpha)
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if (fm - h).abs() < INVERSE_TOL {
            return Ok(mid);
        }
        if fm < h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Closed-form collision-entropy inverse `g_2(h) = 2 − 2e^{−h}`.
pub fn collision_variance(h: f64) -> f64 {
    2.0 - 2.0 * (-h).exp()
}

fn check_log_argument(arg: f64) -> Result<f64> {
    if !arg.is_finite() || arg <= 0.0 || arg > 1.0 + RANGE_SLACK {
        return Err(Error::ArgumentOutOfRange(arg));
    }
    Ok(arg.min(1.0))
}

/// Collision entropy of a spin-1 observable from `V(J_a)` and `V(J_a²)`:
/// `−ln[1 − V(J_a)/2 − 3V(J_a²)/2]`.
pub fn spin1_collision_entropy_from_variances(var_j: f64, var_j2: f64) -> Result<f64> {
    let arg = check_log_argument(1.0 - 0.5 * var_j - 1.5 * var_j2)?;
    Ok(-arg.ln())
}

/// The moments entering the spin-3/2 collision-entropy formula.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinThreeHalvesMoments {
    pub var_j3: f64,
    pub var_j2: f64,
    pub var_j: f64,
    pub mean_j4: f64,
    pub mean_j: f64,
    pub mean_j3: f64,
}

impl SpinThreeHalvesMoments {
    pub fn from_state(rho: &DensityMatrix, a: &Observable) -> Result<Self> {
        let m = |k: i32| expectation(rho, &a.power(k));
        let (m1, m2, m3, m4, m6) = (m(1)?, m(2)?, m(3)?, m(4)?, m(6)?);
        Ok(Self {
            var_j3: m6 - m3 * m3,
            var_j2: m4 - m2 * m2,
            var_j: m2 - m1 * m1,
            mean_j4: m4,
            mean_j: m1,
            mean_j3: m3,
        })
    }
}

/// Collision entropy of a spin-3/2 observable from its low moments:
/// `−ln{1 − [5/9 V(J³) + 1/4 V(J²) + 365/144 V(J) − 41/18 (⟨J⁴⟩ − ⟨J⟩⟨J³⟩)]}`.
pub fn spin32_collision_entropy_from_moments(m: &SpinThreeHalvesMoments) -> Result<f64> {
    let bracket = 5.0 / 9.0 * m.var_j3 + 0.25 * m.var_j2 + 365.0 / 144.0 * m.var_j
        - 41.0 / 18.0 * (m.mean_j4 - m.mean_j * m.mean_j3);
    let arg = check_log_argument(1.0 - bracket)?;
    Ok(-arg.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::{born_probabilities, spin_operator, variance, variance_of};
    use crate::states::{pure_state, random_axis, random_mixed, random_pure, StateVector};
    use approx::assert_abs_diff_eq;

    fn idx(a: f64) -> RenyiIndex {
        RenyiIndex::new(a).unwrap()
    }

    #[test]
    fn renyi_examples() {
        let det = ProbDist::new(vec![1.0, 0.0]).unwrap();
        let uni = ProbDist::new(vec![0.5, 0.5]).unwrap();
        for a in [0.3, 0.5, 1.0, 2.0, 5.0, 10.0] {
            assert_abs_diff_eq!(renyi_entropy(&det, idx(a)), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(renyi_entropy(&uni, idx(a)), LN_2, epsilon = 1e-14);
        }
        let p = ProbDist::new(vec![0.75, 0.25]).unwrap();
        assert_abs_diff_eq!(renyi_entropy(&p, idx(2.0)), -(0.625f64).ln(), epsilon = 1e-15);
    }

    #[test]
    fn invalid_index() {
        assert!(RenyiIndex::new(0.0).is_err());
        assert!(RenyiIndex::new(-1.0).is_err());
        assert!(RenyiIndex::new(f64::NAN).is_err());
        assert!(RenyiIndex::try_from(f64::INFINITY).is_err());
    }

    #[test]
    fn shannon_limit_is_continuous() {
        for seed in 0..200u64 {
            let p = crate::observables::ProbDist::renormalized(
                random_pure(4, seed)
                    .unwrap()
                    .amplitudes()
                    .iter()
                    .map(|z| z.norm_sqr())
                    .collect(),
            )
            .unwrap();
            let h1 = renyi_entropy(&p, RenyiIndex::SHANNON);
            for a in [1.0 - 1e-4, 1.0 + 1e-4] {
                assert!((renyi_entropy(&p, idx(a)) - h1).abs() < 1e-3);
            }
            // just outside the switch window
            for a in [1.0 - 2e-6, 1.0 + 2e-6] {
                assert!((renyi_entropy(&p, idx(a)) - h1).abs() < 1e-6 * 4f64.ln());
            }
        }
    }

    #[test]
    fn variance_to_entropy_examples() {
        for a in [0.5, 1.0, 2.0] {
            assert_eq!(qubit_entropy_from_variance(0.0, idx(a)).unwrap(), 0.0);
            assert_abs_diff_eq!(qubit_entropy_from_variance(1.0, idx(a)).unwrap(), LN_2, epsilon = 1e-15);
        }
        let expected = -(0.75f64 * 0.75f64.ln() + 0.25 * 0.25f64.ln());
        assert_abs_diff_eq!(
            qubit_entropy_from_variance(0.75, RenyiIndex::SHANNON).unwrap(),
            expected,
            epsilon = 1e-15
        );
        assert!((expected - 0.5623).abs() < 1e-4);
        assert!(matches!(
            qubit_entropy_from_variance(1.5, RenyiIndex::SHANNON),
            Err(Error::VarianceOutOfRange(_))
        ));
        assert!(qubit_entropy_from_variance(-0.1, RenyiIndex::SHANNON).is_err());
    }

    #[test]
    fn entropy_to_variance_examples() {
        for a in [0.5, 1.0, 2.0] {
            assert_eq!(qubit_variance_from_entropy(0.0, idx(a)).unwrap(), 0.0);
            assert_eq!(qubit_variance_from_entropy(LN_2, idx(a)).unwrap(), 1.0);
        }
        let v = qubit_variance_from_entropy((1.6f64).ln(), RenyiIndex::COLLISION).unwrap();
        assert_abs_diff_eq!(v, 0.75, epsilon = 1e-10);
        assert!(matches!(
            qubit_variance_from_entropy(1.0, RenyiIndex::SHANNON),
            Err(Error::EntropyOutOfRange(_))
        ));
    }

    #[test]
    fn maps_are_strictly_increasing() {
        for a in [0.3, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let mut prev = -1.0;
            for k in 0..=1000 {
                let v = k as f64 / 1000.0;
                let h = qubit_entropy_from_variance(v, idx(a)).unwrap();
                assert!(h > prev, "alpha {a} v {v}");
                prev = h;
            }
        }
    }

    #[test]
    fn round_trips_on_grids() {
        for a in [0.3, 0.5, 1.0, 2.0, 5.0, 10.0] {
            for k in 0..=200 {
                let v = k as f64 / 200.0;
                let h = qubit_entropy_from_variance(v, idx(a)).unwrap();
                let back = qubit_variance_from_entropy(h, idx(a)).unwrap();
                assert!((back - v).abs() < 1e-9, "alpha {a} v {v} back {back}");
            }
        }
    }

    #[test]
    fn consistent_with_born_rule_for_qubits() {
        for seed in 0..500u64 {
            let rho = random_mixed(2, seed).unwrap();
            let a = crate::observables::qubit_observable(random_axis(seed + 1_000_000)).unwrap();
            let v = variance(&rho, &a).unwrap();
            let p = born_probabilities(&rho, &a).unwrap();
            for alpha in [0.5, 1.0, 2.0, 3.0] {
                let direct = renyi_entropy(&p, idx(alpha));
                let mapped = qubit_entropy_from_variance(v, idx(alpha)).unwrap();
                assert!((direct - mapped).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn spin1_examples() {
        assert_eq!(spin1_collision_entropy_from_variances(0.0, 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(spin1_collision_entropy_from_variances(1.0, 0.0).unwrap(), LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(
            spin1_collision_entropy_from_variances(2.0 / 3.0, 2.0 / 9.0).unwrap(),
            3f64.ln(),
            epsilon = 1e-14
        );
        assert!(matches!(
            spin1_collision_entropy_from_variances(2.0, 0.5),
            Err(Error::ArgumentOutOfRange(_))
        ));

        // (|1⟩ + |−1⟩)/√2 has V(J_z) = 1, V(J_z²) = 0
        let jz = spin_operator(2, [0.0, 0.0, 1.0]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = |x: f64| crate::linalg::C64::new(x, 0.0);
        let rho = pure_state(&StateVector::new(vec![c(h), c(0.0), c(h)]).unwrap());
        assert_abs_diff_eq!(variance(&rho, &jz).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(variance_of(&rho, &jz.power(2)).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn spin32_examples() {
        let a = spin_operator(3, [0.0, 0.0, 1.0]).unwrap();
        let top = pure_state(&StateVector::basis(4, 0));
        let m = SpinThreeHalvesMoments::from_state(&top, &a).unwrap();
        assert_abs_diff_eq!(m.mean_j4, 1.5 * 27.0 / 8.0, epsilon = 1e-13);
        assert_abs_diff_eq!(spin32_collision_entropy_from_moments(&m).unwrap(), 0.0, epsilon = 1e-12);

        // I/4: ⟨J²⟩ = 5/4, ⟨J⁴⟩ = 41/16, ⟨J⁶⟩ = 365/64, odd moments vanish
        let frozen = SpinThreeHalvesMoments {
            var_j3: 365.0 / 64.0,
            var_j2: 41.0 / 16.0 - 25.0 / 16.0,
            var_j: 5.0 / 4.0,
            mean_j4: 41.0 / 16.0,
            mean_j: 0.0,
            mean_j3: 0.0,
        };
        assert_abs_diff_eq!(spin32_collision_entropy_from_moments(&frozen).unwrap(), 4f64.ln(), epsilon = 1e-14);
        let computed = SpinThreeHalvesMoments::from_state(&DensityMatrix::maximally_mixed(4), &a).unwrap();
        assert_abs_diff_eq!(computed.var_j3, frozen.var_j3, epsilon = 1e-13);
        assert_abs_diff_eq!(computed.var_j2, frozen.var_j2, epsilon = 1e-13);
        assert_abs_diff_eq!(computed.mean_j4, frozen.mean_j4, epsilon = 1e-13);
    }
}
