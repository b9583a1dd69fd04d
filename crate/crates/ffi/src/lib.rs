//! C ABI over `ur_equiv`.
//!
//! States and observables cross the boundary as opaque handles created by
//! `ur_*_new*` functions and released with the matching `ur_*_free`. Every
//! fallible function returns a [`UrStatus`]; on failure a description is
//! available from [`ur_last_error_message`] on the same thread.
//!
//! Matrices are passed as separate row-major real and imaginary arrays of
//! length `dim * dim`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use ur_equiv::entropy::{qubit_entropy_from_variance, qubit_variance_from_entropy, renyi_entropy, RenyiIndex};
use ur_equiv::explorer::minimize_spin_variance_sum;
use ur_equiv::observables::{born_probabilities, qubit_observable, spin_operator, variance, Observable, ProbDist};
use ur_equiv::reconstruction::{probs_from_covariances, reconstruct_from_variances};
use ur_equiv::relations::{self, RelationContext, RelationId};
use ur_equiv::states::{pure_state, random_mixed, random_pure, DensityMatrix};
use ur_equiv::{ComplexMatrix, Error, C64};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotHermitian = 4,
    InvalidState = 5,
    NoConvergence = 6,
    DomainError = 7,
    /// Second moments do not determine the distribution.
    Ambiguous = 8,
    UnknownRelation = 9,
    BufferTooSmall = 10,
    /// The library panicked; this is a bug.
    Internal = 99,
}

/// Opaque density matrix.
pub struct UrDensityMatrix(DensityMatrix);

/// Opaque observable.
pub struct UrObservable(Observable);

/// Outcome of [`ur_relation_evaluate`].
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct UrRelationReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs` for inequalities, `−|residual|` for equalities.
    pub slack: f64,
    pub residual: f64,
    pub satisfied: bool,
    pub is_equality: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> UrStatus {
    match e {
        Error::DimensionMismatch(..) | Error::InvalidShape { .. } | Error::MissingObservables { .. } => {
            UrStatus::DimensionMismatch
        }
        Error::NotHermitian(_) => UrStatus::NotHermitian,
        Error::NotNormalized(_) | Error::InvalidDensityMatrix(_) | Error::InvalidBloch(_) => UrStatus::InvalidState,
        Error::NoConvergence(_) => UrStatus::NoConvergence,
        Error::DomainError(_)
        | Error::VarianceOutOfRange(_)
        | Error::EntropyOutOfRange(_)
        | Error::ArgumentOutOfRange(_)
        | Error::InfeasibleTarget(_) => UrStatus::DomainError,
        Error::AmbiguousDistribution | Error::NumericallyDegenerate | Error::DegenerateSpectrum => UrStatus::Ambiguous,
        Error::UnknownRelation(_) => UrStatus::UnknownRelation,
        _ => UrStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), UrStatus>) -> UrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UrStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_last_error("internal error (panic)");
            UrStatus::Internal
        }
    }
}

fn fail(e: Error) -> UrStatus {
    set_last_error(&e.to_string());
    status_of(&e)
}

fn null(what: &str) -> UrStatus {
    set_last_error(&format!("null pointer: {what}"));
    UrStatus::NullPointer
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, UrStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(p: *mut T, value: T, what: &str) -> Result<(), UrStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

unsafe fn read_matrix(dim: usize, re: *const f64, im: *const f64) -> Result<ComplexMatrix, UrStatus> {
    if re.is_null() {
        return Err(null("re"));
    }
    let len = dim.checked_mul(dim).ok_or_else(|| fail(Error::InvalidArgument("dimension overflow".into())))?;
    let re = slice::from_raw_parts(re, len);
    let data = if im.is_null() {
        re.iter().map(|&r| C64::new(r, 0.0)).collect()
    } else {
        let im = slice::from_raw_parts(im, len);
        re.iter().zip(im).map(|(&r, &i)| C64::new(r, i)).collect()
    };
    ComplexMatrix::new(dim, data).map_err(fail)
}

unsafe fn copy_out(values: &[f64], out: *mut f64, len: usize) -> Result<(), UrStatus> {
    if out.is_null() {
        return Err(null("out"));
    }
    if len < values.len() {
        set_last_error(&format!("buffer holds {len} values, {} needed", values.len()));
        return Err(UrStatus::BufferTooSmall);
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ur_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread; valid until the next
/// failing call on the same thread. Empty if nothing failed yet.
#[no_mangle]
pub extern "C" fn ur_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Density matrix from its entries. `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` if non-null) must point to `dim * dim` doubles; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn ur_density_matrix_new(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut UrDensityMatrix,
) -> UrStatus {
    guard(|| {
        let m = read_matrix(dim, re, im)?;
        let rho = DensityMatrix::new(m).map_err(fail)?;
        write_out(out, boxed(UrDensityMatrix(rho)), "out")
    })
}

/// Haar-random pure state, `|ψ⟩⟨ψ|`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ur_density_matrix_random_pure(dim: usize, seed: u64, out: *mut *mut UrDensityMatrix) -> UrStatus {
    guard(|| {
        let psi = random_pure(dim, seed).map_err(fail)?;
        write_out(out, boxed(UrDensityMatrix(pure_state(&psi))), "out")
    })
}

/// Hilbert–Schmidt random mixed state.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ur_density_matrix_random_mixed(dim: usize, seed: u64, out: *mut *mut UrDensityMatrix) -> UrStatus {
    guard(|| {
        let rho = random_mixed(dim, seed).map_err(fail)?;
        write_out(out, boxed(UrDensityMatrix(rho)), "out")
    })
}

/// # Safety
/// `rho` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ur_density_matrix_free(rho: *mut UrDensityMatrix) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}

/// Dimension of `rho`, 0 for a null handle.
///
/// # Safety
/// `rho` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ur_density_matrix_dim(rho: *const UrDensityMatrix) -> usize {
    rho.as_ref().map_or(0, |r| r.0.dim())
}

/// `Tr[ρ²]`
///
/// # Safety
/// `rho` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ur_density_matrix_purity(rho: *const UrDensityMatrix, out: *mut f64) -> UrStatus {
    guard(|| {
        let rho = as_ref(rho, "rho")?;
        write_out(out, rho.0.purity(), "out")
    })
}

/// Observable from a Hermitian matrix. `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` if non-null) must point to `dim * dim` doubles; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn ur_observable_new(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut UrObservable,
) -> UrStatus {
    guard(|| {
        let m = read_matrix(dim, re, im)?;
        let a = Observable::new(m).map_err(fail)?;
        write_out(out, boxed(UrObservable(a)), "out")
    })
}

/// `J·n` for spin `two_j / 2`; `n` must be a unit vector.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ur_observable_spin(
    two_j: u32,
    nx: f64,
    ny: f64,
    nz: f64,
    out: *mut *mut UrObservable,
) -> UrStatus {
    guard(|| {
        let a = spin_operator(two_j, [nx, ny, nz]).map_err(fail)?;
        write_out(out, boxed(UrObservable(a)), "out")
    })
}

/// `σ·n` for a unit vector `n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ur_observable_qubit(nx: f64, ny: f64, nz: f64, out: *mut *mut UrObservable) -> UrStatus {
    guard(|| {
        let a = qubit_observable([nx, ny, nz]).map_err(fail)?;
        write_out(out, boxed(UrObservable(a)), "out")
    })
}

/// # Safety
/// `obs` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ur_observable_free(obs: *mut UrObservable) {
    if !obs.is_null() {
        drop(Box::from_raw(obs));
    }
}

/// Dimension of `obs`, 0 for a null handle.
///
/// # Safety
/// `obs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ur_observable_dim(obs: *const UrObservable) -> usize {
    obs.as_ref().map_or(0, |a| a.0.dim())
}

/// Eigenvalues in descending order.
///
/// # Safety
/// `obs` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ur_observable_eigenvalues(obs: *const UrObservable, out: *mut f64, len: usize) -> UrStatus {
    guard(|| {
        let a = as_ref(obs, "obs")?;
        copy_out(a.0.eigenvalues(), out, len)
    })
}

/// Born probabilities of `obs` in `rho`, ordered like the eigenvalues.
///
/// # Safety
/// Handles must be live and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ur_born_probabilities(
    rho: *const UrDensityMatrix,
    obs: *const UrObservable,
    out: *mut f64,
    len: usize,
) -> UrStatus {
    guard(|| {
        let p = born_probabilities(&as_ref(rho, "rho")?.0, &as_ref(obs, "obs")?.0).map_err(fail)?;
        copy_out(p.as_slice(), out, len)
    })
}

/// `Tr[ρA²] − Tr[ρA]²`
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ur_variance(rho: *const UrDensityMatrix, obs: *const UrObservable, out: *mut f64) -> UrStatus {
    guard(|| {
        let v = variance(&as_ref(rho, "rho")?.0, &as_ref(obs, "obs")?.0).map_err(fail)?;
        write_out(out, v, "out")
    })
}

/// Rényi entropy (nats) of a probability vector; `alpha = 1` is Shannon.
///
/// # Safety
/// `probs` must point to `len` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn ur_renyi_entropy(probs: *const f64, len: usize, alpha: f64, out: *mut f64) -> UrStatus {
    guard(|| {
        if probs.is_null() {
            return Err(null("probs"));
        }
        let p = ProbDist::new(slice::from_raw_parts(probs, len).to_vec()).map_err(fail)?;
        let idx = RenyiIndex::new(alpha).map_err(fail)?;
        write_out(out, renyi_entropy(&p, idx), "out")
    })
}

/// Rényi entropy of a qubit observable with normalized variance `v ∈ [0, 1]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ur_qubit_entropy_from_variance(v: f64, alpha: f64, out: *mut f64) -> UrStatus {
    guard(|| {
        let idx = RenyiIndex::new(alpha).map_err(fail)?;
        write_out(out, qubit_entropy_from_variance(v, idx).map_err(fail)?, "out")
    })
}

/// Inverse of [`ur_qubit_entropy_from_variance`] for `h ∈ [0, ln 2]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ur_qubit_variance_from_entropy(h: f64, alpha: f64, out: *mut f64) -> UrStatus {
    guard(|| {
        let idx = RenyiIndex::new(alpha).map_err(fail)?;
        write_out(out, qubit_variance_from_entropy(h, idx).map_err(fail)?, "out")
    })
}

/// Born probabilities recovered from variances of a commuting family built
/// on `obs`.
///
/// # Safety
/// Handles must be live and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ur_reconstruct_from_variances(
    rho: *const UrDensityMatrix,
    obs: *const UrObservable,
    out: *mut f64,
    len: usize,
) -> UrStatus {
    guard(|| {
        let p = reconstruct_from_variances(&as_ref(rho, "rho")?.0, &as_ref(obs, "obs")?.0).map_err(fail)?;
        copy_out(p.as_slice(), out, len)
    })
}

/// Born probabilities recovered from covariances of the spectral projectors.
///
/// # Safety
/// Handles must be live and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ur_reconstruct_from_covariances(
    rho: *const UrDensityMatrix,
    obs: *const UrObservable,
    out: *mut f64,
    len: usize,
) -> UrStatus {
    guard(|| {
        let p = probs_from_covariances(&as_ref(rho, "rho")?.0, &as_ref(obs, "obs")?.0).map_err(fail)?;
        copy_out(p.as_slice(), out, len)
    })
}

/// Evaluates the relation named `id` (e.g. `"robertson"`).
///
/// `observables` holds `n_observables` handles; `alphas` holds `n_alphas`
/// Rényi indices and may be null when `n_alphas` is 0.
///
/// # Safety
/// `id` must be a NUL-terminated string, all handles live, and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ur_relation_evaluate(
    id: *const c_char,
    rho: *const UrDensityMatrix,
    observables: *const *const UrObservable,
    n_observables: usize,
    alphas: *const f64,
    n_alphas: usize,
    out: *mut UrRelationReport,
) -> UrStatus {
    guard(|| {
        if id.is_null() {
            return Err(null("id"));
        }
        let name = CStr::from_ptr(id)
            .to_str()
            .map_err(|_| fail(Error::UnknownRelation("<invalid utf-8>".into())))?;
        let rel: RelationId = name.parse().map_err(fail)?;
        let rho = as_ref(rho, "rho")?.0.clone();
        let mut obs = Vec::with_capacity(n_observables);
        if n_observables > 0 {
            if observables.is_null() {
                return Err(null("observables"));
            }
            for &h in slice::from_raw_parts(observables, n_observables) {
                obs.push(as_ref(h, "observable")?.0.clone());
            }
        }
        let mut idx = Vec::with_capacity(n_alphas);
        if n_alphas > 0 {
            if alphas.is_null() {
                return Err(null("alphas"));
            }
            for &a in slice::from_raw_parts(alphas, n_alphas) {
                idx.push(RenyiIndex::new(a).map_err(fail)?);
            }
        }
        let r = relations::evaluate(rel, &RelationContext::new(rho, obs, idx)).map_err(fail)?;
        write_out(
            out,
            UrRelationReport {
                lhs: r.lhs,
                rhs: r.rhs,
                slack: r.slack,
                residual: r.residual,
                satisfied: r.satisfied,
                is_equality: r.is_equality,
            },
            "out",
        )
    })
}

/// Minimum of `V(J_x) + V(J_z)` over pure states of dimension `dim`
/// (spin `(dim − 1)/2`), multi-start from `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ur_minimize_spin_variance_sum(dim: usize, restarts: usize, seed: u64, out: *mut f64) -> UrStatus {
    guard(|| {
        let r = minimize_spin_variance_sum(dim, restarts, seed).map_err(fail)?;
        write_out(out, r.best_value, "out")
    })
}
