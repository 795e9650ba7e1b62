//! Critical points of a Laurent potential on `(C*)ⁿ`.
//!
//! Newton's method runs on the logarithmic gradient `(zⱼ ∂W/∂zⱼ)ⱼ` in
//! coordinates `z = exp(u)`, started from a deterministic grid of moduli and
//! phases. Converged starts are deduplicated in `u` (imaginary parts taken
//! mod 2π) and sorted.

use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{pow_int, LaurentPoly};
use crate::par;

/// Largest real part allowed in a log coordinate before a start is abandoned.
const LOG_BOUND: f64 = 600.0;
/// Longest Newton step taken in log coordinates.
const MAX_STEP: f64 = 4.0;
/// Halvings tried in the backtracking line search.
const BACKTRACK: usize = 30;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOptions {
    /// Phases per coordinate, `2πk/phases`.
    pub phases: usize,
    /// Log-moduli per coordinate, evenly spaced over a range set by the
    /// coefficient magnitudes.
    pub moduli: usize,
    pub max_starts: usize,
    pub max_steps: usize,
    /// Bound on the gradient norm for a converged point.
    pub tol: f64,
    /// Points closer than this in log coordinates are merged.
    pub dedup_radius: f64,
    /// Output never depends on this flag.
    #[serde(skip, default = "par::available")]
    pub parallel: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            phases: 8,
            moduli: 7,
            max_starts: 4096,
            max_steps: 100,
            tol: 1e-12,
            dedup_radius: 1e-8,
            parallel: par::available(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultistartStats {
    pub attempted: usize,
    pub converged: usize,
    pub distinct: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalReport {
    pub t: Vec<f64>,
    pub options: SolverOptions,
    pub points: Vec<Vec<Complex64>>,
    pub values: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub multistart_stats: MultistartStats,
}

impl CriticalReport {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `(z₁∂W/∂z₁, …, zₙ∂W/∂zₙ)` at `z`, with `qⱼ = exp(−tⱼ)`.
pub fn gradient(w: &LaurentPoly, z: &[Complex64], t: &[f64]) -> Result<Vec<Complex64>> {
    (0..w.num_vars())
        .map(|j| w.log_derivative(j).evaluate(z, t))
        .collect()
}

/// `W` with its q-coefficients evaluated.
#[derive(Clone, Debug)]
struct Numeric {
    exps: Vec<Vec<i64>>,
    coeffs: Vec<f64>,
}

struct Local {
    grad: DVector<Complex64>,
    hess: DMatrix<Complex64>,
}

impl Numeric {
    fn new(w: &LaurentPoly, t: &[f64]) -> Result<Self> {
        let (exps, coeffs) = w
            .numeric_terms(t)?
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .unzip();
        Ok(Numeric { exps, coeffs })
    }

    fn dim(&self) -> usize {
        self.exps.first().map_or(0, Vec::len)
    }

    fn monomials(&self, u: &[Complex64]) -> Vec<Complex64> {
        let z: Vec<Complex64> = u.iter().map(|x| x.exp()).collect();
        self.exps
            .iter()
            .zip(&self.coeffs)
            .map(|(a, &c)| {
                a.iter()
                    .zip(&z)
                    .fold(Complex64::new(c, 0.0), |m, (&e, &zj)| m * pow_int(zj, e))
            })
            .collect()
    }

    fn gradient(&self, u: &[Complex64]) -> DVector<Complex64> {
        let n = self.dim();
        let m = self.monomials(u);
        DVector::from_fn(n, |j, _| {
            self.exps
                .iter()
                .zip(&m)
                .map(|(a, mk)| mk * a[j] as f64)
                .sum()
        })
    }

    fn local(&self, u: &[Complex64]) -> Local {
        let n = self.dim();
        let m = self.monomials(u);
        let mut grad = DVector::zeros(n);
        let mut hess = DMatrix::zeros(n, n);
        for (a, mk) in self.exps.iter().zip(&m) {
            for j in 0..n {
                let gj = mk * a[j] as f64;
                grad[j] += gj;
                for l in 0..n {
                    hess[(j, l)] += gj * a[l] as f64;
                }
            }
        }
        Local { grad, hess }
    }

    /// Half-width of the log-modulus seed range.
    fn log_radius(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.abs().ln().abs())
            .fold(0.0, f64::max)
            + 1.0
    }
}

struct Outcome {
    u: Vec<Complex64>,
    residual: f64,
    converged: bool,
}

fn newton(w: &Numeric, start: Vec<Complex64>, opts: &SolverOptions) -> Outcome {
    let mut u = start;
    let mut residual = f64::INFINITY;
    for _ in 0..=opts.max_steps {
        let Local { grad, hess } = w.local(&u);
        residual = grad.norm();
        if !residual.is_finite() {
            break;
        }
        let Some(mut step) = hess.lu().solve(&(-&grad)) else {
            break;
        };
        if residual <= opts.tol {
            // reject slow drift towards infinity
            let converged = step.norm() <= 1e-6;
            return Outcome {
                u,
                residual,
                converged,
            };
        }
        let len = step.norm();
        if !len.is_finite() {
            break;
        }
        if len > MAX_STEP {
            step *= Complex64::new(MAX_STEP / len, 0.0);
        }
        let mut accepted = false;
        let mut scale = 1.0;
        for _ in 0..BACKTRACK {
            let trial: Vec<Complex64> = u
                .iter()
                .zip(step.iter())
                .map(|(x, d)| x + d * scale)
                .collect();
            let r = w.gradient(&trial).norm();
            if r.is_finite() && r < residual {
                u = trial;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted || u.iter().any(|x| x.re.abs() > LOG_BOUND) {
            break;
        }
    }
    Outcome {
        u,
        residual,
        converged: false,
    }
}

/// Starting points in log coordinates, in a fixed order.
fn seeds(n: usize, radius: f64, opts: &SolverOptions) -> Vec<Vec<Complex64>> {
    let moduli: Vec<f64> = match opts.moduli {
        0 => vec![],
        1 => vec![0.0],
        m => (0..m)
            .map(|j| -radius + 2.0 * radius * j as f64 / (m - 1) as f64)
            .collect(),
    };
    let phases: Vec<f64> = (0..opts.phases)
        .map(|k| 2.0 * PI * k as f64 / opts.phases as f64)
        .collect();
    let per_coord: Vec<Complex64> = moduli
        .iter()
        .flat_map(|&r| phases.iter().map(move |&p| Complex64::new(r, p)))
        .collect();
    let base = per_coord.len() as u128;
    if base == 0 {
        return vec![];
    }
    let total = base.checked_pow(n as u32).unwrap_or(u128::MAX);
    let count = total.min(opts.max_starts as u128);
    (0..count)
        .map(|i| {
            let mut idx = if total > count {
                i * (total / count)
            } else {
                i
            };
            (0..n)
                .map(|_| {
                    let d = (idx % base) as usize;
                    idx /= base;
                    per_coord[d]
                })
                .collect()
        })
        .collect()
}

fn log_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let dr = x.re - y.re;
            let di = (x.im - y.im).rem_euclid(2.0 * PI);
            let di = di.min(2.0 * PI - di);
            dr * dr + di * di
        })
        .sum::<f64>()
        .sqrt()
}

fn canonical_order(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Multistart Newton search for the critical points of `W` at `qⱼ = exp(−tⱼ)`.
pub fn find_critical_points(
    w: &LaurentPoly,
    t: &[f64],
    opts: &SolverOptions,
) -> Result<CriticalReport> {
    let numeric = Numeric::new(w, t)?;
    if numeric.exps.iter().all(|a| a.iter().all(|&e| e == 0)) {
        return Err(Error::ConstantPotential);
    }
    let n = w.num_vars();
    let starts = seeds(n, numeric.log_radius(), opts);
    let outcomes = par::map(&starts, opts.parallel, |s| {
        newton(&numeric, s.clone(), opts)
    });

    let converged: Vec<&Outcome> = outcomes.iter().filter(|o| o.converged).collect();
    let mut kept: Vec<&Outcome> = Vec::new();
    for o in &converged {
        if kept
            .iter()
            .all(|k| log_distance(&k.u, &o.u) > opts.dedup_radius)
        {
            kept.push(o);
        }
    }
    if kept.is_empty() {
        let best_residual = outcomes
            .iter()
            .map(|o| o.residual)
            .filter(|r| r.is_finite())
            .fold(f64::INFINITY, f64::min);
        return Err(Error::NoConvergence {
            attempted: starts.len(),
            best_residual,
        });
    }

    let mut found: Vec<(Vec<Complex64>, f64)> = kept
        .iter()
        .map(|o| (o.u.iter().map(|x| x.exp()).collect(), o.residual))
        .collect();
    found.sort_by(|a, b| canonical_order(&a.0, &b.0));
    let values = found
        .iter()
        .map(|(z, _)| w.evaluate(z, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(CriticalReport {
        t: t.to_vec(),
        options: opts.clone(),
        multistart_stats: MultistartStats {
            attempted: starts.len(),
            converged: converged.len(),
            distinct: found.len(),
        },
        residuals: found.iter().map(|p| p.1).collect(),
        points: found.into_iter().map(|p| p.0).collect(),
        values,
    })
}
