//! Barrier potentials of `det[Z - A]^r`, root bounds driven by the diagonal,
//! the closed-form paving constants, and the inequalities behind the
//! barrier shifts together with the two known counterexamples.

mod shift;
mod statement;
mod trace;

pub use shift::{barrier_shift_check, bivariate_counterexample, BivariateReport, DeltaRule, ShiftCheck, ShiftReport};
pub use statement::{
    statement_counterexample_search, statement_empty_sweep, statement_sides, EmptySweep, SearchOutcome,
    StatementWitness,
};
pub use trace::{trace_form_residual, trace_inequality};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{max_eigenvalue, resolvent_diagonal, Matrix};
use crate::poly::max_root;
use crate::rdet::chi_r_real;
use crate::scalar::Scalar;

/// Golden-section bracket width above the largest eigenvalue.
pub const BRACKET_WIDTH: f64 = 10.0;
/// Lower end of the bracket sits this far above the largest eigenvalue.
pub const BRACKET_GAP: f64 = 1e-9;
/// Termination width of the golden-section search.
pub const SEARCH_TOL: f64 = 1e-10;
/// Largest dimension for which `root_bound` certifies against `chi_r`.
pub const MAX_CERTIFY_N: usize = 6;

const GRID_POINTS: usize = 400;

/// Result of a root bound evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub method: String,
    pub r: usize,
    pub delta: Option<f64>,
    pub b_star: Option<f64>,
    pub bound: f64,
    pub certified_max_root: Option<f64>,
}

impl BoundReport {
    pub fn to_json(&self) -> Value {
        json!({
            "method": self.method,
            "r": self.r,
            "delta": self.delta,
            "b_star": self.b_star,
            "bound": self.bound,
            "certified_max_root": self.certified_max_root,
        })
    }

    /// True unless a certified root exceeds the bound by more than `1e-8`.
    pub fn is_consistent(&self) -> bool {
        self.certified_max_root.is_none_or(|m| m <= self.bound + 1e-8)
    }
}

/// `Φ^i(b) = r e_i^* (bI - A)^{-1} e_i`, the barrier potential of
/// `det[Z - A]^r` in direction `i` at the diagonal point `b 1`.
pub fn phi<S: Scalar>(a: &Matrix<S>, r: usize, b: &S, i: usize) -> Result<S> {
    Ok(resolvent_diagonal(a, b, i)? * S::from_usize(r))
}

/// `δ/(b-1) + (1-δ)/b`, an upper bound for every resolvent diagonal entry of
/// a positive contraction whose diagonal is at most `δ`.
pub fn phi_diagonal_bound(delta: f64, b: f64) -> Result<f64> {
    check_delta(delta)?;
    if b <= 1.0 {
        return Err(Error::NotAboveRoots { b, lambda_max: 1.0 });
    }
    Ok(delta / (b - 1.0) + (1.0 - delta) / b)
}

fn check_delta(delta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidArgument(format!("delta must lie in [0, 1], got {delta}")));
    }
    Ok(())
}

fn check_bound_r(r: usize) -> Result<()> {
    if !(2..=4).contains(&r) {
        return Err(Error::InvalidArgument(format!("r must be 2, 3 or 4, got {r}")));
    }
    Ok(())
}

/// `((r-1)/r)^2`, the weight of the potential term in the root bound.
fn barrier_weight(r: usize) -> f64 {
    let t = (r as f64 - 1.0) / r as f64;
    t * t
}

/// Resolvent diagonals of a fixed Hermitian matrix from one
/// eigendecomposition: `res_i(b) = sum_k |v_k(i)|^2 / (b - λ_k)`.
struct Resolvent {
    eigenvalues: Vec<f64>,
    weights: Vec<Vec<f64>>,
}

impl Resolvent {
    fn new<S: Scalar>(a: &Matrix<S>) -> Self {
        let n = a.n();
        let m = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
            let z = a.get(i, j);
            Complex64::new(z.re_f64(), z.im_f64())
        });
        let eig = m.symmetric_eigen();
        let weights = (0..n)
            .map(|i| (0..n).map(|k| eig.eigenvectors[(i, k)].norm_sqr()).collect())
            .collect();
        Resolvent {
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            weights,
        }
    }

    fn lambda_max(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn diagonal(&self, i: usize, b: f64) -> f64 {
        self.weights[i]
            .iter()
            .zip(&self.eigenvalues)
            .map(|(w, l)| w / (b - l))
            .sum()
    }

    /// `b - c min_i 1/res_i(b)`.
    fn objective(&self, c: f64, b: f64) -> f64 {
        let max_res = (0..self.weights.len()).map(|i| self.diagonal(i, b)).fold(0.0, f64::max);
        b - c / max_res
    }
}

/// Minimizes `f` on `[lo, hi]`: a grid dense near `lo` locates the basin,
/// then golden-section refines it to [`SEARCH_TOL`].
fn minimize(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let grid: Vec<f64> = (0..=GRID_POINTS)
        .map(|k| {
            let t = k as f64 / GRID_POINTS as f64;
            lo + (hi - lo) * t * t
        })
        .collect();
    let values: Vec<f64> = grid.iter().map(|&b| f(b)).collect();
    let best = (0..values.len())
        .min_by(|&x, &y| values[x].total_cmp(&values[y]))
        .unwrap_or(0);
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(GRID_POINTS)];
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > SEARCH_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    let candidates = [(grid[best], values[best]), (mid, f(mid))];
    candidates
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap_or((mid, f(mid)))
}

/// `inf_{b > λmax} b - ((r-1)/r)^2 min_i 1/(e_i^*(bI-A)^{-1}e_i)`, an upper
/// bound for the largest root of `chi_r[A]` for `r` in `{2, 3, 4}`.
/// Matrices with `n <= 6` are certified against the exact largest root.
pub fn root_bound<S: Scalar>(a: &Matrix<S>, r: usize) -> Result<BoundReport> {
    check_bound_r(r)?;
    if a.n() == 0 {
        return Err(Error::InvalidArgument("root bound needs a nonempty matrix".into()));
    }
    let res = Resolvent::new(a);
    let lmax = if S::EXACT { max_eigenvalue(a)? } else { res.lambda_max() };
    let c = barrier_weight(r);
    let (b_star, bound) = minimize(|b| res.objective(c, b), lmax + BRACKET_GAP, lmax + BRACKET_WIDTH);
    let delta = a
        .diagonal()
        .iter()
        .map(Scalar::re_f64)
        .fold(f64::NEG_INFINITY, f64::max);
    let certified_max_root = if a.n() <= MAX_CERTIFY_N {
        Some(max_root(&chi_r_real(a, &S::from_usize(r))?)?)
    } else {
        None
    };
    Ok(BoundReport {
        method: "barrier".into(),
        r,
        delta: Some(delta),
        b_star: Some(b_star),
        bound,
        certified_max_root,
    })
}

pub fn root_bound_2<S: Scalar>(a: &Matrix<S>) -> Result<BoundReport> {
    root_bound(a, 2)
}

/// `(1/r^2)(√((2r-1)(1-δ)) + (r-1)√δ)^2` for `δ <= ((r-1)/r)^2` and `1`
/// beyond that threshold, for `r` in `{2, 3, 4}`.
pub fn closed_form_bound(delta: f64, r: usize) -> Result<f64> {
    check_bound_r(r)?;
    check_delta(delta)?;
    if delta > barrier_weight(r) {
        return Ok(1.0);
    }
    Ok(second_form(delta, r))
}

fn second_form(delta: f64, r: usize) -> f64 {
    let rf = r as f64;
    let s = ((2.0 * rf - 1.0) * (1.0 - delta)).sqrt() + (rf - 1.0) * delta.sqrt();
    s * s / (rf * rf)
}

/// The two conjectured paving constants. Neither is a proven bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConjecturedBounds {
    /// `(1/r)(√(1-δ) + √((r-1)δ))^2`.
    pub optimal: f64,
    /// `(1/r^2)(√((2r-1)(1-δ)) + (r-1)√δ)^2`.
    pub barrier: f64,
}

impl ConjecturedBounds {
    pub fn to_json(&self) -> Value {
        json!({"optimal": self.optimal, "barrier": self.barrier, "conjecture_only": true})
    }
}

pub fn conjectured_bound(delta: f64, r: usize) -> Result<ConjecturedBounds> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("r must be at least 2, got {r}")));
    }
    check_delta(delta)?;
    let rf = r as f64;
    let s = (1.0 - delta).sqrt() + ((rf - 1.0) * delta).sqrt();
    Ok(ConjecturedBounds {
        optimal: s * s / rf,
        barrier: second_form(delta, r),
    })
}

/// Bound report for the closed form at a given diagonal bound.
pub fn closed_form_report(delta: f64, r: usize) -> Result<BoundReport> {
    Ok(BoundReport {
        method: "closed-form".into(),
        r,
        delta: Some(delta),
        b_star: None,
        bound: closed_form_bound(delta, r)?,
        certified_max_root: None,
    })
}
