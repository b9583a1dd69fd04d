//! Nelder–Mead simplex minimization.

/// Stopping and step parameters.
#[derive(Clone, Copy, Debug)]
pub struct NelderMeadOptions {
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    /// Converged once every vertex lies within this distance of the best one.
    pub diameter_tol: f64,
    pub max_evaluations: usize,
    /// Re-seed a fresh simplex around the best point this many times.
    pub polish_rounds: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.5,
            diameter_tol: 1e-10,
            max_evaluations: 20_000,
            polish_rounds: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Objective at the starting point.
    pub initial_value: f64,
}

/// Minimizes `f` from `x0` with the standard coefficients
/// (reflection 1, expansion 2, contraction ½, shrink ½).
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    opts: &NelderMeadOptions,
) -> NelderMeadResult {
    let initial_value = f(x0);
    let mut best_x = x0.to_vec();
    let mut best_v = initial_value;
    let mut evaluations = 1;
    let mut converged = false;
    let mut step = opts.initial_step;

    for _ in 0..=opts.polish_rounds {
        let budget = opts.max_evaluations.saturating_sub(evaluations);
        if budget == 0 {
            break;
        }
        let run = simplex_run(&f, &best_x, best_v, step, opts.diameter_tol, budget);
        evaluations += run.evaluations;
        converged = run.converged;
        if run.value <= best_v {
            best_v = run.value;
            best_x = run.x;
        }
        step = (step * 0.1).max(1e-4);
    }

    NelderMeadResult {
        x: best_x,
        value: best_v,
        evaluations,
        converged,
        initial_value,
    }
}

struct Run {
    x: Vec<f64>,
    value: f64,
    evaluations: usize,
    converged: bool,
}

fn simplex_run(
    f: &impl Fn(&[f64]) -> f64,
    x0: &[f64],
    f0: f64,
    step: f64,
    diameter_tol: f64,
    budget: usize,
) -> Run {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f0));
    let mut evals = 0;
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += if x[i].abs() > 1e-12 { step * x[i].abs().max(1.0) } else { step };
        let v = f(&x);
        evals += 1;
        simplex.push((x, v));
    }

    let mut converged = false;
    while evals < budget {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| dist(x, &simplex[0].0))
            .fold(0.0, f64::max);
        if diameter < diameter_tol {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|d| simplex[..n].iter().map(|(x, _)| x[d]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let towards = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = towards(1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < simplex[0].1 {
            let xe = towards(2.0);
            let fe = f(&xe);
            evals += 1;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = towards(0.5);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = towards(-0.5);
                let fc = f(&xc);
                (xc, fc)
            };
            evals += 1;
            if fc < worst.1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&best) {
                        *xi = bi + 0.5 * (*xi - bi);
                    }
                    *v = f(x);
                    evals += 1;
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Run {
        x,
        value,
        evaluations: evals,
        converged,
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(rosen, &[-1.2, 1.0], &NelderMeadOptions::default());
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6);
        assert!(r.value < 1e-12);
    }

    #[test]
    fn minimizes_shifted_quadratic() {
        let q = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (v - i as f64).powi(2)).sum::<f64>();
        let r = nelder_mead(q, &[5.0; 5], &NelderMeadOptions::default());
        assert!(r.value < 1e-14, "{}", r.value);
        assert!((r.value - q(&r.x)).abs() < 1e-15);
    }

    #[test]
    fn constant_objective_does_not_move() {
        let r = nelder_mead(|_| 3.0, &[0.1, 0.2], &NelderMeadOptions::default());
        assert_eq!(r.value, r.initial_value);
    }
}
