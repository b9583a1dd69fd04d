//! Registry of uncertainty relations, each evaluated into a [`RelationReport`].
//!
//! Reports use one sign convention for every inequality: `lhs` is the side
//! that must not exceed `rhs`, and `slack = rhs − lhs` is non-negative when
//! the relation holds. Equalities report `residual = lhs − rhs`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::entropy::{qubit_variance_from_entropy, renyi_entropy, RenyiIndex};
use crate::error::{Error, Result};
use crate::linalg::{commutator_half_i, expectation, ComplexMatrix};
use crate::observables::{
    born_probabilities, overlap_bound, pauli_matrices, qubit_observable, random_observable,
    spin_operator, variance, variance_of, Observable,
};
use crate::reconstruction::ensure_spin_one;
use crate::states::{derive_seed, pure_state, random_axis, random_mixed, random_pure, rng_from_seed, DensityMatrix};

/// Slack (or residual magnitude) accepted as "satisfied".
pub const SATISFIED_TOL: f64 = 1e-9;

/// A state, observables, and Rényi indices on which a relation is evaluated.
///
/// Derived scalars (`a²`, `κ`, `p²`, ...) are computed on demand from the
/// fields, never cached.
#[derive(Clone, Debug)]
pub struct RelationContext {
    pub rho: DensityMatrix,
    pub observables: Vec<Observable>,
    pub alphas: Vec<RenyiIndex>,
}

impl RelationContext {
    pub fn new(rho: DensityMatrix, observables: Vec<Observable>, alphas: Vec<RenyiIndex>) -> Self {
        Self {
            rho,
            observables,
            alphas,
        }
    }

    pub fn observable(&self, i: usize) -> Result<&Observable> {
        self.observables.get(i).ok_or(Error::MissingObservables {
            needed: i + 1,
            got: self.observables.len(),
        })
    }

    /// Rényi index `i`, Shannon when not supplied.
    pub fn alpha(&self, i: usize) -> RenyiIndex {
        self.alphas.get(i).copied().unwrap_or(RenyiIndex::SHANNON)
    }

    /// `Tr[A_i²]/2` of the traceless part (qubits).
    pub fn scale_sq(&self, i: usize) -> Result<f64> {
        let a = traceless(self.observable(i)?.matrix());
        Ok(a.trace_product(&a)?.re / 2.0)
    }

    /// `κ = Tr[A_i A_j]/2` of the traceless parts.
    pub fn kappa(&self, i: usize, j: usize) -> Result<f64> {
        let a = traceless(self.observable(i)?.matrix());
        let b = traceless(self.observable(j)?.matrix());
        Ok(a.trace_product(&b)?.re / 2.0)
    }

    /// `p² = 2Tr[ρ²] − 1`
    pub fn p_sq(&self) -> f64 {
        self.rho.bloch_radius_sq()
    }

    /// `cos θ_ab = κ/(ab)` for qubit observables.
    pub fn cos_theta(&self, i: usize, j: usize) -> Result<f64> {
        let denom = (self.scale_sq(i)? * self.scale_sq(j)?).sqrt();
        Ok((self.kappa(i, j)? / denom).clamp(-1.0, 1.0))
    }

    /// `c_ab`
    pub fn overlap(&self, i: usize, j: usize) -> Result<f64> {
        overlap_bound(self.observable(i)?, self.observable(j)?)
    }

    /// Shannon/Rényi entropy of observable `i` at index `alpha`.
    pub fn entropy(&self, i: usize, alpha: RenyiIndex) -> Result<f64> {
        Ok(renyi_entropy(&born_probabilities(&self.rho, self.observable(i)?)?, alpha))
    }

    fn require_qubit(&self, count: usize) -> Result<()> {
        if self.observables.len() < count {
            return Err(Error::MissingObservables {
                needed: count,
                got: self.observables.len(),
            });
        }
        if self.rho.dim() != 2 {
            return Err(Error::NotQubit(self.rho.dim()));
        }
        if let Some(o) = self.observables.iter().find(|o| o.dim() != 2) {
            return Err(Error::NotQubit(o.dim()));
        }
        Ok(())
    }

    /// `ΔA_i² / a_i²`, the variance normalized to unit eigenvalues.
    fn normalized_variance(&self, i: usize) -> Result<f64> {
        Ok((variance(&self.rho, self.observable(i)?)? / self.scale_sq(i)?).clamp(0.0, 1.0))
    }
}

fn traceless(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let shift = m.trace().re / n as f64;
    m - &ComplexMatrix::identity(n).scale_real(shift)
}

/// Outcome of evaluating one relation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationReport {
    pub relation_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub satisfied: bool,
    pub is_equality: bool,
    pub residual: f64,
}

impl RelationReport {
    pub fn inequality(id: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            relation_id: id.into(),
            lhs,
            rhs,
            slack,
            satisfied: slack >= -SATISFIED_TOL,
            is_equality: false,
            residual: 0.0,
        }
    }

    pub fn equality(id: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let residual = lhs - rhs;
        Self {
            relation_id: id.into(),
            lhs,
            rhs,
            slack: -residual.abs(),
            satisfied: residual.abs() <= SATISFIED_TOL,
            is_equality: true,
            residual,
        }
    }
}

/// `ΔAΔB ≥ |⟨C⟩|` with `[A, B] = 2iC`.
pub fn robertson(ctx: &RelationContext) -> Result<RelationReport> {
    let a = ctx.observable(0)?;
    let b = ctx.observable(1)?;
    let c = commutator_half_i(a.matrix(), b.matrix())?;
    let bound = expectation(&ctx.rho, &c)?.abs();
    let product = (variance(&ctx.rho, a)? * variance(&ctx.rho, b)?).sqrt();
    Ok(RelationReport::inequality(RelationId::Robertson.as_str(), bound, product))
}

/// `H(A) + H(B) ≥ −2 ln c_ab` (Shannon).
pub fn maassen_uffink(ctx: &RelationContext) -> Result<RelationReport> {
    let bound = -2.0 * ctx.overlap(0, 1)?.ln();
    let sum = ctx.entropy(0, RenyiIndex::SHANNON)? + ctx.entropy(1, RenyiIndex::SHANNON)?;
    Ok(RelationReport::inequality(RelationId::MaassenUffink.as_str(), bound, sum))
}

/// `x^x` with `0⁰ = 1`.
fn self_power(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else {
        x.powf(x)
    }
}

/// `a_+^{a_+} a_-^{a_-} b_+^{b_+} b_-^{b_-} ≤ c_ab²` for qubits.
pub fn mu_variance_form(ctx: &RelationContext) -> Result<RelationReport> {
    ctx.require_qubit(2)?;
    let (ap, am) = crate::entropy::qubit_probabilities(ctx.normalized_variance(0)?);
    let (bp, bm) = crate::entropy::qubit_probabilities(ctx.normalized_variance(1)?);
    let lhs = self_power(ap) * self_power(am) * self_power(bp) * self_power(bm);
    let c = ctx.overlap(0, 1)?;
    Ok(RelationReport::inequality(RelationId::MuVariance.as_str(), lhs, c * c))
}

/// `(1 + √(1 − ΔA²))(1 + √(1 − ΔB²)) ≤ (1 + c_ab)²` for qubits.
pub fn majorization_variance(ctx: &RelationContext) -> Result<RelationReport> {
    ctx.require_qubit(2)?;
    let va = ctx.normalized_variance(0)?;
    let vb = ctx.normalized_variance(1)?;
    let lhs = (1.0 + (1.0 - va).sqrt()) * (1.0 + (1.0 - vb).sqrt());
    let c = ctx.overlap(0, 1)?;
    Ok(RelationReport::inequality(
        RelationId::MajorizationVariance.as_str(),
        lhs,
        (1.0 + c) * (1.0 + c),
    ))
}

/// Variance of observable `i` recovered from its measured `H_α` (entropy first).
fn variance_from_entropy(ctx: &RelationContext, i: usize, alpha: RenyiIndex) -> Result<f64> {
    let h = ctx.entropy(i, alpha)?;
    Ok(ctx.scale_sq(i)? * qubit_variance_from_entropy(h, alpha)?)
}

fn checked_sqrt(x: f64) -> Result<f64> {
    if x < -1e-10 {
        return Err(Error::DomainError(x));
    }
    Ok(x.max(0.0).sqrt())
}

/// `[a²(p²−1) + g_α(A)][b²(p²−1) + g_β(B)] ≥ [√(a² − g_α(A))√(b² − g_β(B)) − |κ|p²]²`.
///
/// Entropies and variances are invariant under `B → −B`, which flips the
/// sign of `κ`; the bound holds for both signs only with `|κ|`.
pub fn full_qubit_bound(ctx: &RelationContext) -> Result<RelationReport> {
    ctx.require_qubit(2)?;
    let ga = variance_from_entropy(ctx, 0, ctx.alpha(0))?;
    let gb = variance_from_entropy(ctx, 1, ctx.alpha(1))?;
    full_qubit_terms(ctx.scale_sq(0)?, ctx.scale_sq(1)?, ctx.kappa(0, 1)?, ctx.p_sq(), ga, gb)
        .map(|(lhs, rhs)| RelationReport::inequality(RelationId::FullQubit.as_str(), lhs, rhs))
}

/// `(lhs, rhs)` of the full qubit bound from its scalar ingredients.
pub fn full_qubit_terms(a_sq: f64, b_sq: f64, kappa: f64, p_sq: f64, var_a: f64, var_b: f64) -> Result<(f64, f64)> {
    let rhs = (a_sq * (p_sq - 1.0) + var_a) * (b_sq * (p_sq - 1.0) + var_b);
    let inner = checked_sqrt(a_sq - var_a)? * checked_sqrt(b_sq - var_b)? - kappa.abs() * p_sq;
    Ok((inner * inner, rhs))
}

/// `(lhs, rhs)` of `g(A) g(B) ≥ [√(1 − g(A))√(1 − g(B)) − |cos θ_ab|]²`.
pub fn simple_qubit_terms(g_a: f64, g_b: f64, cos_theta: f64) -> (f64, f64) {
    let inner = (1.0 - g_a).max(0.0).sqrt() * (1.0 - g_b).max(0.0).sqrt() - cos_theta.abs();
    (inner * inner, g_a * g_b)
}

/// Slack of the pure-state qubit relation at entropies `(h_a, h_b)`.
pub fn simple_qubit_slack(h_a: f64, h_b: f64, cos_theta: f64, alpha: RenyiIndex) -> Result<f64> {
    let ga = qubit_variance_from_entropy(h_a, alpha)?;
    let gb = qubit_variance_from_entropy(h_b, alpha)?;
    let (lhs, rhs) = simple_qubit_terms(ga, gb, cos_theta);
    Ok(rhs - lhs)
}

/// Pure-state, unit-observable form of the full qubit bound.
pub fn qubit_simple(ctx: &RelationContext) -> Result<RelationReport> {
    ctx.require_qubit(2)?;
    let ga = qubit_variance_from_entropy(ctx.entropy(0, ctx.alpha(0))?, ctx.alpha(0))?;
    let gb = qubit_variance_from_entropy(ctx.entropy(1, ctx.alpha(1))?, ctx.alpha(1))?;
    let (lhs, rhs) = simple_qubit_terms(ga, gb, ctx.cos_theta(0, 1)?);
    Ok(RelationReport::inequality(RelationId::QubitSimple.as_str(), lhs, rhs))
}

fn pauli_observables() -> Result<[Observable; 3]> {
    let [x, y, z] = pauli_matrices();
    Ok([Observable::new(x)?, Observable::new(y)?, Observable::new(z)?])
}

fn require_qubit_state(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 2 {
        return Err(Error::NotQubit(rho.dim()));
    }
    Ok(())
}

/// Left side `Σ g_{α_i}(σ_i)` of the three-Pauli equality.
pub fn pauli_triple_sum(rho: &DensityMatrix, alphas: [RenyiIndex; 3]) -> Result<f64> {
    require_qubit_state(rho)?;
    let mut sum = 0.0;
    for (obs, alpha) in pauli_observables()?.iter().zip(alphas) {
        let h = renyi_entropy(&born_probabilities(rho, obs)?, alpha);
        sum += qubit_variance_from_entropy(h, alpha)?;
    }
    Ok(sum)
}

/// `Σ_i e^{−H₂(σ_i)}`
pub fn pauli_collision_sum(rho: &DensityMatrix) -> Result<f64> {
    require_qubit_state(rho)?;
    let mut sum = 0.0;
    for obs in pauli_observables()? {
        sum += (-renyi_entropy(&born_probabilities(rho, &obs)?, RenyiIndex::COLLISION)).exp();
    }
    Ok(sum)
}

/// `g_α(σ_x) + g_β(σ_y) + g_γ(σ_z) = 4 − 2Tr[ρ²]`.
///
/// Satisfied only if the collision-entropy form holds as well; the reported
/// residual is the larger of the two.
pub fn pauli_triple_equality(ctx: &RelationContext) -> Result<RelationReport> {
    let alphas = [ctx.alpha(0), ctx.alpha(1), ctx.alpha(2)];
    let lhs = pauli_triple_sum(&ctx.rho, alphas)?;
    let rhs = 4.0 - 2.0 * ctx.rho.purity();
    let mut report = RelationReport::equality(RelationId::PauliTriple.as_str(), lhs, rhs);
    let collision = pauli_collision(ctx)?;
    if collision.residual.abs() > report.residual.abs() {
        report.residual = collision.residual;
        report.slack = -collision.residual.abs();
        report.satisfied = false;
    }
    report.satisfied = report.residual.abs() <= SATISFIED_TOL;
    Ok(report)
}

/// `e^{−H₂(σ_x)} + e^{−H₂(σ_y)} + e^{−H₂(σ_z)} = 1 + Tr[ρ²]`.
pub fn pauli_collision(ctx: &RelationContext) -> Result<RelationReport> {
    let lhs = pauli_collision_sum(&ctx.rho)?;
    Ok(RelationReport::equality(
        RelationId::PauliCollision.as_str(),
        lhs,
        1.0 + ctx.rho.purity(),
    ))
}

/// Collision-entropy bound `c = −ln[((1+c_ab)/2)⁴ + (1 − ((1+c_ab)/2)²)²]`.
pub fn collision_overlap_bound(c_ab: f64) -> f64 {
    let q = (1.0 + c_ab) / 2.0;
    let q2 = q * q;
    -(q2 * q2 + (1.0 - q2) * (1.0 - q2)).ln()
}

fn spin1_pair(ctx: &RelationContext) -> Result<(&Observable, &Observable)> {
    let a = ctx.observable(0)?;
    let b = ctx.observable(1)?;
    ensure_spin_one(a)?;
    ensure_spin_one(b)?;
    Ok((a, b))
}

/// `H₂(J_a) + H₂(J_b) ≥ c` with the bound from [`collision_overlap_bound`].
pub fn spin1_collision_bound(ctx: &RelationContext) -> Result<RelationReport> {
    spin1_pair(ctx)?;
    let c = collision_overlap_bound(ctx.overlap(0, 1)?);
    let sum = ctx.entropy(0, RenyiIndex::COLLISION)? + ctx.entropy(1, RenyiIndex::COLLISION)?;
    Ok(RelationReport::inequality(RelationId::Spin1Collision.as_str(), c, sum))
}

/// `2 − V(J) − 3V(J²)`
pub fn spin1_variance_factor(rho: &DensityMatrix, j: &Observable) -> Result<f64> {
    Ok(2.0 - variance(rho, j)? - 3.0 * variance_of(rho, &j.power(2))?)
}

/// `[2 − V(J_a) − 3V(J_a²)][2 − V(J_b) − 3V(J_b²)] ≤ 4e^{−c}`.
pub fn spin1_variance_bound(ctx: &RelationContext) -> Result<RelationReport> {
    let (a, b) = spin1_pair(ctx)?;
    let c = collision_overlap_bound(ctx.overlap(0, 1)?);
    let lhs = spin1_variance_factor(&ctx.rho, a)? * spin1_variance_factor(&ctx.rho, b)?;
    Ok(RelationReport::inequality(
        RelationId::Spin1Variance.as_str(),
        lhs,
        4.0 * (-c).exp(),
    ))
}

/// Stable identifiers of the registered relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationId {
    Robertson,
    MaassenUffink,
    MuVariance,
    MajorizationVariance,
    FullQubit,
    QubitSimple,
    PauliTriple,
    PauliCollision,
    Spin1Collision,
    Spin1Variance,
}

impl RelationId {
    pub const ALL: [RelationId; 10] = [
        RelationId::Robertson,
        RelationId::MaassenUffink,
        RelationId::MuVariance,
        RelationId::MajorizationVariance,
        RelationId::FullQubit,
        RelationId::QubitSimple,
        RelationId::PauliTriple,
        RelationId::PauliCollision,
        RelationId::Spin1Collision,
        RelationId::Spin1Variance,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationId::Robertson => "robertson",
            RelationId::MaassenUffink => "maassen_uffink",
            RelationId::MuVariance => "mu_variance",
            RelationId::MajorizationVariance => "majorization_variance",
            RelationId::FullQubit => "full_qubit",
            RelationId::QubitSimple => "qubit_simple",
            RelationId::PauliTriple => "pauli_triple",
            RelationId::PauliCollision => "pauli_collision",
            RelationId::Spin1Collision => "spin1_collision",
            RelationId::Spin1Variance => "spin1_variance",
        }
    }

    pub fn is_equality(self) -> bool {
        matches!(self, RelationId::PauliTriple | RelationId::PauliCollision)
    }

    /// Parses a comma-separated list; `all` selects every relation.
    pub fn parse_list(s: &str) -> Result<Vec<RelationId>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                return Ok(Self::ALL.to_vec());
            }
            let id: RelationId = part.parse()?;
            if !out.contains(&id) {
                out.push(id);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownRelation(s.to_string()))
    }
}

/// Something that can be sampled and checked by a violation scan.
pub trait Relation: Sync {
    fn id(&self) -> &str;
    /// A random context appropriate to this relation, fixed by `seed`.
    fn sample_context(&self, seed: u64) -> Result<RelationContext>;
    fn evaluate(&self, ctx: &RelationContext) -> Result<RelationReport>;
}

/// Evaluates relation `id` on `ctx`.
pub fn evaluate(id: RelationId, ctx: &RelationContext) -> Result<RelationReport> {
    match id {
        RelationId::Robertson => robertson(ctx),
        RelationId::MaassenUffink => maassen_uffink(ctx),
        RelationId::MuVariance => mu_variance_form(ctx),
        RelationId::MajorizationVariance => majorization_variance(ctx),
        RelationId::FullQubit => full_qubit_bound(ctx),
        RelationId::QubitSimple => qubit_simple(ctx),
        RelationId::PauliTriple => pauli_triple_equality(ctx),
        RelationId::PauliCollision => pauli_collision(ctx),
        RelationId::Spin1Collision => spin1_collision_bound(ctx),
        RelationId::Spin1Variance => spin1_variance_bound(ctx),
    }
}

const ALPHA_GRID: [f64; 4] = [0.5, 1.0, 2.0, 3.0];

fn pick_alpha(rng: &mut impl Rng, grid: &[f64]) -> RenyiIndex {
    RenyiIndex::new(grid[rng.random_range(0..grid.len())]).expect("grid is positive")
}

/// Pure (Haar) for even `k`, Hilbert–Schmidt mixed for odd `k`.
fn sample_state(dim: usize, seed: u64, mixed: bool) -> Result<DensityMatrix> {
    if mixed {
        random_mixed(dim, seed)
    } else {
        Ok(pure_state(&random_pure(dim, seed)?))
    }
}

fn scaled_qubit(axis: [f64; 3], scale: f64) -> Result<Observable> {
    Observable::new(qubit_observable(axis)?.matrix().scale_real(scale))
}

impl Relation for RelationId {
    fn id(&self) -> &str {
        self.as_str()
    }

    fn sample_context(&self, seed: u64) -> Result<RelationContext> {
        let mut rng = rng_from_seed(seed);
        let sub = |k: u64| derive_seed(seed, k);
        let mixed = rng.random_bool(0.5);
        match self {
            RelationId::Robertson | RelationId::MaassenUffink => {
                let dim = rng.random_range(2..=4);
                Ok(RelationContext::new(
                    sample_state(dim, sub(0), mixed)?,
                    vec![random_observable(dim, sub(1))?, random_observable(dim, sub(2))?],
                    vec![],
                ))
            }
            RelationId::MuVariance | RelationId::MajorizationVariance => Ok(RelationContext::new(
                sample_state(2, sub(0), mixed)?,
                vec![
                    qubit_observable(random_axis(sub(1)))?,
                    qubit_observable(random_axis(sub(2)))?,
                ],
                vec![],
            )),
            RelationId::FullQubit => {
                let sa = rng.random_range(0.5..2.0);
                let sb = rng.random_range(0.5..2.0);
                let alphas = vec![pick_alpha(&mut rng, &ALPHA_GRID[..3]), pick_alpha(&mut rng, &ALPHA_GRID[..3])];
                Ok(RelationContext::new(
                    sample_state(2, sub(0), mixed)?,
                    vec![scaled_qubit(random_axis(sub(1)), sa)?, scaled_qubit(random_axis(sub(2)), sb)?],
                    alphas,
                ))
            }
            RelationId::QubitSimple => Ok(RelationContext::new(
                sample_state(2, sub(0), false)?,
                vec![
                    qubit_observable(random_axis(sub(1)))?,
                    qubit_observable(random_axis(sub(2)))?,
                ],
                vec![RenyiIndex::SHANNON, RenyiIndex::SHANNON],
            )),
            RelationId::PauliTriple | RelationId::PauliCollision => {
                let alphas = (0..3).map(|_| pick_alpha(&mut rng, &ALPHA_GRID)).collect();
                Ok(RelationContext::new(sample_state(2, sub(0), mixed)?, vec![], alphas))
            }
            RelationId::Spin1Collision | RelationId::Spin1Variance => {
                let (na, nb) = if rng.random_bool(0.5) {
                    ([1.0, 0.0, 0.0], [0.0, 0.0, 1.0])
                } else {
                    (random_axis(sub(1)), random_axis(sub(2)))
                };
                Ok(RelationContext::new(
                    sample_state(3, sub(0), mixed)?,
                    vec![spin_operator(2, na)?, spin_operator(2, nb)?],
                    vec![],
                ))
            }
        }
    }

    fn evaluate(&self, ctx: &RelationContext) -> Result<RelationReport> {
        evaluate(*self, ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{qubit_from_bloch, StateVector};
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    const X: [f64; 3] = [1.0, 0.0, 0.0];
    const Y: [f64; 3] = [0.0, 1.0, 0.0];
    const Z: [f64; 3] = [0.0, 0.0, 1.0];

    fn q(axis: [f64; 3]) -> Observable {
        qubit_observable(axis).unwrap()
    }

    fn ctx(rho: DensityMatrix, obs: Vec<Observable>) -> RelationContext {
        RelationContext::new(rho, obs, vec![])
    }

    fn up() -> DensityMatrix {
        pure_state(&StateVector::basis(2, 0))
    }

    #[test]
    fn robertson_examples() {
        let r = robertson(&ctx(up(), vec![q(X), q(Y)])).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-14 && (r.rhs - 1.0).abs() < 1e-14);
        assert!(r.satisfied && r.slack.abs() < 1e-14);
        let r = robertson(&ctx(DensityMatrix::maximally_mixed(2), vec![q(X), q(Y)])).unwrap();
        assert!(r.lhs.abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-14);
        let r = robertson(&ctx(up(), vec![q(X), spin_operator(2, X).unwrap()]));
        assert!(r.is_err());
    }

    #[test]
    fn maassen_uffink_examples() {
        let r = maassen_uffink(&ctx(up(), vec![q(Z), q(X)])).unwrap();
        assert!((r.rhs - LN_2).abs() < 1e-14 && (r.lhs - LN_2).abs() < 1e-14);
        assert!(r.satisfied);
        let r = maassen_uffink(&ctx(random_mixed(2, 3).unwrap(), vec![q(Z), q(Z)])).unwrap();
        assert!(r.lhs.abs() < 1e-14 && r.satisfied);
    }

    #[test]
    fn mu_variance_examples() {
        let r = mu_variance_form(&ctx(DensityMatrix::maximally_mixed(2), vec![q(Z), q(X)])).unwrap();
        assert!((r.lhs - 0.25).abs() < 1e-15 && (r.rhs - 0.5).abs() < 1e-14 && r.satisfied);
        let r = mu_variance_form(&ctx(up(), vec![q(Z), q(X)])).unwrap();
        assert!((r.lhs - 0.5).abs() < 1e-14 && r.slack.abs() < 1e-14 && r.satisfied);
        let jz = spin_operator(2, Z).unwrap();
        assert!(matches!(
            mu_variance_form(&ctx(DensityMatrix::maximally_mixed(3), vec![jz.clone(), jz])),
            Err(Error::NotQubit(3))
        ));
    }

    #[test]
    fn mu_variance_log_is_minus_shannon_sum() {
        for seed in 0..500 {
            let c = RelationId::MuVariance.sample_context(seed).unwrap();
            let r = mu_variance_form(&c).unwrap();
            let sum = c.entropy(0, RenyiIndex::SHANNON).unwrap() + c.entropy(1, RenyiIndex::SHANNON).unwrap();
            assert!((r.lhs.ln() + sum).abs() < 1e-9);
            assert_eq!(r.satisfied, maassen_uffink(&c).unwrap().satisfied);
        }
    }

    #[test]
    fn majorization_examples() {
        let r = majorization_variance(&ctx(up(), vec![q(Z), q(X)])).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-14);
        assert!((r.rhs - (1.0 + FRAC_1_SQRT_2).powi(2)).abs() < 1e-14);
        let r = majorization_variance(&ctx(DensityMatrix::maximally_mixed(2), vec![q(Z), q(X)])).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-14 && r.satisfied);
    }

    #[test]
    fn full_qubit_reduces_to_simple_form() {
        for seed in 0..300u64 {
            let psi = pure_state(&random_pure(2, seed).unwrap());
            let na = random_axis(derive_seed(seed, 1));
            let nb = random_axis(derive_seed(seed, 2));
            let c = RelationContext::new(psi, vec![q(na), q(nb)], vec![RenyiIndex::SHANNON; 2]);
            let full = full_qubit_bound(&c).unwrap();
            let simple = qubit_simple(&c).unwrap();
            assert!((full.lhs - simple.lhs).abs() < 1e-10);
            assert!((full.rhs - simple.rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn orthogonal_pure_case_is_sum_bound() {
        // at θ = 90°, uv ≥ (1−u)(1−v) is u + v ≥ 1
        for k in 0..=20 {
            let u = k as f64 / 20.0;
            let v = 1.0 - u;
            let (lhs, rhs) = simple_qubit_terms(u, v, 0.0);
            assert!((rhs - lhs).abs() < 1e-12);
        }
        let (lhs, rhs) = simple_qubit_terms(0.3, 0.6, 0.0);
        assert!(rhs < lhs);
    }

    #[test]
    fn parallel_axes_force_equal_entropies() {
        let (lhs, rhs) = simple_qubit_terms(0.4, 0.4, 1.0);
        assert!((rhs - lhs).abs() < 1e-15);
        let (lhs, rhs) = simple_qubit_terms(0.4, 0.5, 1.0);
        assert!(rhs < lhs);
    }

    #[test]
    fn signed_kappa_would_fail_for_obtuse_axes() {
        // Bloch vector r = (0.6, 0, ·) against axes at 0° and ~126°; the
        // invariant |κ| form holds while the signed form is violated.
        let th = 2.2f64;
        let na = [1.0, 0.0, 0.0];
        let nb = [th.cos(), 0.0, th.sin()];
        let r = [0.8, 0.0, -0.6];
        let rho = qubit_from_bloch(r, 1.0).unwrap();
        let c = RelationContext::new(rho, vec![q(na), q(nb)], vec![RenyiIndex::SHANNON; 2]);
        assert!(full_qubit_bound(&c).unwrap().satisfied);
        let va = variance(&c.rho, c.observable(0).unwrap()).unwrap();
        let vb = variance(&c.rho, c.observable(1).unwrap()).unwrap();
        let inner = (1.0 - va).sqrt() * (1.0 - vb).sqrt() - th.cos();
        assert!(va * vb < inner * inner - 1e-3);
    }

    #[test]
    fn pauli_examples() {
        let c = ctx(up(), vec![]);
        let r = pauli_triple_equality(&c).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-12 && (r.rhs - 2.0).abs() < 1e-15 && r.satisfied);
        let r = pauli_triple_equality(&ctx(DensityMatrix::maximally_mixed(2), vec![])).unwrap();
        assert!((r.lhs - 3.0).abs() < 1e-12 && (r.rhs - 3.0).abs() < 1e-15);
        let r = pauli_collision(&c).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-15 && r.is_equality);
        assert!(pauli_collision(&ctx(DensityMatrix::maximally_mixed(3), vec![])).is_err());
    }

    #[test]
    fn collision_overlap_constant_for_x_and_z() {
        let c = collision_overlap_bound(FRAC_1_SQRT_2);
        assert!((4.0 * (-c).exp() - (25.0 / 8.0 - FRAC_1_SQRT_2)).abs() < 1e-12);
        assert_eq!(collision_overlap_bound(1.0), 0.0);
    }

    #[test]
    fn spin1_examples() {
        let jx = spin_operator(2, X).unwrap();
        let jz = spin_operator(2, Z).unwrap();
        let c = ctx(random_mixed(3, 1).unwrap(), vec![jx.clone(), jz.clone()]);
        let r = spin1_variance_bound(&c).unwrap();
        assert!((r.rhs - (25.0 / 8.0 - FRAC_1_SQRT_2)).abs() < 1e-12);
        assert!(r.satisfied);
        let same = ctx(random_mixed(3, 2).unwrap(), vec![jz.clone(), jz.clone()]);
        let r = spin1_variance_bound(&same).unwrap();
        assert!((r.rhs - 4.0).abs() < 1e-12 && r.satisfied);
        assert!(spin1_collision_bound(&same).unwrap().lhs.abs() < 1e-12);
        let bad = ctx(up(), vec![q(X), q(Z)]);
        assert!(matches!(spin1_collision_bound(&bad), Err(Error::NotSpinOne)));
    }

    #[test]
    fn ids_round_trip() {
        for id in RelationId::ALL {
            assert_eq!(id.as_str().parse::<RelationId>().unwrap(), id);
        }
        assert_eq!(RelationId::parse_list("all").unwrap().len(), 10);
        assert_eq!(
            RelationId::parse_list("robertson, pauli_triple,robertson").unwrap(),
            vec![RelationId::Robertson, RelationId::PauliTriple]
        );
        assert!(matches!("nope".parse::<RelationId>(), Err(Error::UnknownRelation(_))));
    }

    #[test]
    fn sampled_contexts_satisfy_every_relation() {
        for id in RelationId::ALL {
            for seed in 0..300 {
                let c = id.sample_context(seed).unwrap();
                let r = id.evaluate(&c).unwrap();
                assert!(r.satisfied, "{id} seed {seed}: {r:?}");
                assert_eq!(r.is_equality, id.is_equality());
            }
        }
    }
}
