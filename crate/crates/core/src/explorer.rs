//! State-space exploration: region sampling, multi-start minimization over
//! pure states, boundary saturation and violation scans.

use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{renyi_entropy, RenyiIndex};
use crate::error::{Error, Result};
use crate::observables::{born_probabilities, random_observable, spin_operator, variance, Observable, ProbDist};
use crate::reconstruction::{probs_from_covariances, reconstruct_from_variances};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::relations::{simple_qubit_slack, spin1_variance_bound, Relation, RelationContext, RelationId, SATISFIED_TOL};
use crate::states::{derive_seed, pure_state, random_mixed, random_pure, rng_from_seed, DensityMatrix, StateVector};

/// Restarts used when the caller does not choose.
pub const DEFAULT_RESTARTS: usize = 64;
/// Weight of the `(H_A − target)²` penalty in [`saturate_boundary`].
pub const PENALTY_WEIGHT: f64 = 1e6;
/// Each polishing round multiplies the penalty weight by this factor.
pub const PENALTY_GROWTH: f64 = 100.0;
pub const MAX_PENALTY_WEIGHT: f64 = 1e16;
/// Accepted distance between achieved and requested `H_A`.
pub const TARGET_TOL: f64 = 1e-6;
/// Accepted `|slack|` of a saturated boundary point.
pub const BOUNDARY_TOL: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionPoint {
    pub h_a: f64,
    pub h_b: f64,
    pub purity: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionSample {
    /// Angle between the two Bloch axes, degrees.
    pub theta_ab: f64,
    pub alpha: RenyiIndex,
    pub points: Vec<RegionPoint>,
    pub violations: usize,
    pub worst_slack: f64,
}

fn qubit_pair(a: &Observable, b: &Observable) -> Result<f64> {
    for o in [a, b] {
        if o.dim() != 2 {
            return Err(Error::NotQubit(o.dim()));
        }
    }
    let ctx = RelationContext::new(DensityMatrix::maximally_mixed(2), vec![a.clone(), b.clone()], vec![]);
    ctx.cos_theta(0, 1)
}

/// Samples `n` Haar pure qubit states and records `(H_α(A), H_α(B))`,
/// checking each point against the pure-state qubit relation.
pub fn map_region(a: &Observable, b: &Observable, n: usize, seed: u64, alpha: RenyiIndex) -> Result<RegionSample> {
    let cos = qubit_pair(a, b)?;
    let sampled: Vec<(RegionPoint, f64)> = (0..n as u64)
        .into_par_iter()
        .map(|i| -> Result<(RegionPoint, f64)> {
            let rho = pure_state(&random_pure(2, derive_seed(seed, i))?);
            let h_a = renyi_entropy(&born_probabilities(&rho, a)?, alpha);
            let h_b = renyi_entropy(&born_probabilities(&rho, b)?, alpha);
            let slack = simple_qubit_slack(h_a, h_b, cos, alpha)?;
            Ok((
                RegionPoint {
                    h_a,
                    h_b,
                    purity: rho.purity(),
                },
                slack,
            ))
        })
        .collect::<Result<_>>()?;

    let violations = sampled.iter().filter(|(_, s)| *s < -SATISFIED_TOL).count();
    let worst_slack = sampled.iter().map(|(_, s)| *s).fold(f64::INFINITY, f64::min);
    Ok(RegionSample {
        theta_ab: cos.acos().to_degrees(),
        alpha,
        points: sampled.into_iter().map(|(p, _)| p).collect(),
        violations,
        worst_slack,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub best_value: f64,
    /// Interleaved `(re, im)` amplitudes of the best unit state.
    pub best_params: Vec<f64>,
    pub restarts: usize,
    pub evaluations: usize,
    pub converged: bool,
}

impl OptimizationResult {
    pub fn best_state(&self) -> Result<StateVector> {
        StateVector::from_real_params(&self.best_params)
    }
}

fn start_point(dim: usize, seed: u64) -> Vec<f64> {
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = rng_from_seed(seed);
    (0..2 * dim).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// Multi-start Nelder–Mead over `2·dim` reals mapped to a normalized state.
///
/// Restart `r` starts from a Gaussian point drawn with `derive_seed(seed, r)`;
/// the best restart wins, ties going to the lower index.
pub fn minimize_over_pure<F>(objective: F, dim: usize, restarts: usize, seed: u64) -> Result<OptimizationResult>
where
    F: Fn(&StateVector) -> f64 + Sync,
{
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be >= 1".into()));
    }
    if dim < 2 {
        return Err(Error::InvalidArgument(format!("state dimension must be >= 2, got {dim}")));
    }
    let lifted = |x: &[f64]| match StateVector::from_real_params(x) {
        Ok(psi) => objective(&psi),
        Err(_) => f64::INFINITY,
    };
    let opts = NelderMeadOptions::default();
    let runs: Vec<_> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| nelder_mead(lifted, &start_point(dim, derive_seed(seed, r)), &opts))
        .collect();

    if runs.iter().all(|r| r.value >= r.initial_value) {
        return Err(Error::DegenerateObjective);
    }
    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let mut best = &runs[0];
    for r in &runs[1..] {
        if r.value < best.value {
            best = r;
        }
    }
    let psi = StateVector::from_real_params(&best.x)?;
    Ok(OptimizationResult {
        best_value: objective(&psi),
        best_params: psi.to_real_params(),
        restarts,
        evaluations,
        converged: best.converged,
    })
}

/// Spin `(dim−1)/2` objective `V(J_x) + V(J_z)`.
pub fn spin_variance_sum(dim: usize) -> Result<impl Fn(&StateVector) -> f64 + Sync> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!("spin dimension must be >= 2, got {dim}")));
    }
    let j2 = (dim - 1) as u32;
    let jx = spin_operator(j2, [1.0, 0.0, 0.0])?;
    let jz = spin_operator(j2, [0.0, 0.0, 1.0])?;
    Ok(move |psi: &StateVector| {
        let rho = pure_state(psi);
        variance(&rho, &jx).unwrap_or(f64::INFINITY) + variance(&rho, &jz).unwrap_or(f64::INFINITY)
    })
}

/// Minimum of `V(J_x) + V(J_z)` over pure states of spin `(dim−1)/2`.
pub fn minimize_spin_variance_sum(dim: usize, restarts: usize, seed: u64) -> Result<OptimizationResult> {
    minimize_over_pure(spin_variance_sum(dim)?, dim, restarts, seed)
}

/// The spin-1 variance minimum next to the collision-entropy variance bound
/// evaluated at the minimizing state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spin1Diagnostic {
    pub direct_minimum: OptimizationResult,
    /// `[2 − V(J_x) − 3V(J_x²)][2 − V(J_z) − 3V(J_z²)]` at the minimizer.
    pub bound_lhs: f64,
    /// `4e^{−c}` for the x/z pair.
    pub bound_rhs: f64,
    pub bound_slack: f64,
}

pub fn spin1_diagnostic(restarts: usize, seed: u64) -> Result<Spin1Diagnostic> {
    let direct_minimum = minimize_spin_variance_sum(3, restarts, seed)?;
    let rho = pure_state(&direct_minimum.best_state()?);
    let ctx = RelationContext::new(
        rho,
        vec![spin_operator(2, [1.0, 0.0, 0.0])?, spin_operator(2, [0.0, 0.0, 1.0])?],
        vec![],
    );
    let report = spin1_variance_bound(&ctx)?;
    Ok(Spin1Diagnostic {
        direct_minimum,
        bound_lhs: report.lhs,
        bound_rhs: report.rhs,
        bound_slack: report.slack,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub optimization: OptimizationResult,
    pub h_a: f64,
    pub h_b: f64,
    /// Slack of the pure-state qubit relation at `(h_a, h_b)`; zero on the boundary.
    pub residual: f64,
}

/// Minimizes the Shannon entropy `H(B)` over pure qubit states with
/// `H(A)` pinned to `target_ha` by a quadratic penalty.
///
/// Near `H(A) ∈ {0, ln 2}` the constraint is flat or has an unbounded
/// slope, so a single weight leaves it loose; the weight is then raised
/// and the optimum polished until `|H(A) − target| < TARGET_TOL`.
pub fn saturate_boundary(
    a: &Observable,
    b: &Observable,
    target_ha: f64,
    restarts: usize,
    seed: u64,
) -> Result<BoundaryPoint> {
    let cos = qubit_pair(a, b)?;
    let ln2 = std::f64::consts::LN_2;
    if !(0.0..=ln2 + 1e-12).contains(&target_ha) {
        return Err(Error::InfeasibleTarget(target_ha));
    }
    let entropies = |psi: &StateVector| -> Result<(f64, f64)> {
        let rho = pure_state(psi);
        Ok((
            renyi_entropy(&born_probabilities(&rho, a)?, RenyiIndex::SHANNON),
            renyi_entropy(&born_probabilities(&rho, b)?, RenyiIndex::SHANNON),
        ))
    };
    let penalized = |w: f64| {
        move |psi: &StateVector| match entropies(psi) {
            Ok((ha, hb)) => hb + w * (ha - target_ha).powi(2),
            Err(_) => f64::INFINITY,
        }
    };
    let mut optimization = minimize_over_pure(penalized(PENALTY_WEIGHT), 2, restarts, seed)?;
    let (mut h_a, mut h_b) = entropies(&optimization.best_state()?)?;
    let mut weight = PENALTY_WEIGHT;
    while (h_a - target_ha).abs() >= TARGET_TOL && weight < MAX_PENALTY_WEIGHT {
        weight *= PENALTY_GROWTH;
        let objective = penalized(weight);
        let lifted = |x: &[f64]| StateVector::from_real_params(x).map_or(f64::INFINITY, |psi| objective(&psi));
        let run = nelder_mead(lifted, &optimization.best_params, &NelderMeadOptions::default());
        let psi = StateVector::from_real_params(&run.x)?;
        optimization.best_value = objective(&psi);
        optimization.best_params = psi.to_real_params();
        optimization.evaluations += run.evaluations;
        optimization.converged = run.converged;
        (h_a, h_b) = entropies(&psi)?;
    }
    if (h_a - target_ha).abs() >= TARGET_TOL {
        return Err(Error::InfeasibleTarget(target_ha));
    }
    let residual = simple_qubit_slack(h_a, h_b, cos, RenyiIndex::SHANNON)?;
    Ok(BoundaryPoint {
        optimization,
        h_a,
        h_b,
        residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanEntry {
    pub id: String,
    pub n: usize,
    pub worst_slack: f64,
    pub violations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ScanSummary {
    pub entries: Vec<ScanEntry>,
}

impl ScanSummary {
    pub fn total_violations(&self) -> usize {
        self.entries.iter().map(|e| e.violations).sum()
    }
}

/// 64-bit FNV-1a, used to give each relation its own seed stream.
fn stream_id(id: &str) -> u64 {
    id.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Samples `n` contexts per relation and evaluates each one.
///
/// Sample `i` of relation `r` uses `derive_seed(seed ^ fnv(r.id()), i)`, so a
/// relation's results do not depend on which others are scanned with it.
pub fn scan_relations(relations: &[&dyn Relation], n: usize, seed: u64) -> Result<ScanSummary> {
    if n == 0 {
        return Ok(ScanSummary::default());
    }
    let mut entries = Vec::with_capacity(relations.len());
    for rel in relations {
        let base = seed ^ stream_id(rel.id());
        let slacks: Vec<f64> = (0..n as u64)
            .into_par_iter()
            .map(|i| {
                let ctx = rel.sample_context(derive_seed(base, i))?;
                Ok(rel.evaluate(&ctx)?.slack)
            })
            .collect::<Result<_>>()?;
        entries.push(ScanEntry {
            id: rel.id().to_string(),
            n,
            worst_slack: slacks.iter().copied().fold(f64::INFINITY, f64::min),
            violations: slacks.iter().filter(|s| **s < -SATISFIED_TOL).count(),
        });
    }
    Ok(ScanSummary { entries })
}

pub fn scan_violations(ids: &[RelationId], n: usize, seed: u64) -> Result<ScanSummary> {
    let rels: Vec<&dyn Relation> = ids.iter().map(|id| id as &dyn Relation).collect();
    scan_relations(&rels, n, seed)
}

/// Worst Born-probability error of both reconstruction paths over `n`
/// Hilbert–Schmidt states with GUE observables, plus the number of pairs
/// whose distribution is not identifiable from second moments.
pub fn reconstruction_errors(dim: usize, n: usize, seed: u64) -> Result<(f64, f64, usize)> {
    let mut var_err: f64 = 0.0;
    let mut cov_err: f64 = 0.0;
    let mut flagged = 0;
    for i in 0..n as u64 {
        let rho = random_mixed(dim, derive_seed(seed, 2 * i))?;
        let a = random_observable(dim, derive_seed(seed, 2 * i + 1))?;
        let born = born_probabilities(&rho, &a)?;
        let from_var = reconstruct_from_variances(&rho, &a);
        let from_cov = probs_from_covariances(&rho, &a);
        match (from_var, from_cov) {
            (Ok(pv), Ok(pc)) => {
                var_err = var_err.max(sorted_diff(&pv, &born));
                cov_err = cov_err.max(pc.max_abs_diff(&born));
            }
            (Err(Error::AmbiguousDistribution | Error::NumericallyDegenerate), _)
            | (_, Err(Error::AmbiguousDistribution | Error::NumericallyDegenerate)) => flagged += 1,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok((var_err, cov_err, flagged))
}

/// Largest difference after sorting; variances fix a distribution only up to
/// relabelings that preserve all pairwise products.
fn sorted_diff(p: &ProbDist, q: &ProbDist) -> f64 {
    if p.len() > 2 {
        return p.max_abs_diff(q);
    }
    let mut a = p.as_slice().to_vec();
    let mut b = q.as_slice().to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
