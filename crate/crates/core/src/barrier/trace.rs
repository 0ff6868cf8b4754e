//! Scalar inequalities left after diagonalizing `X` in the degree three and
//! four barrier shifts. `lambda` holds the nonzero eigenvalues of `X` and
//! `x` the matching diagonal entries of `Y`.

use crate::error::{Error, Result};

fn check(k: usize, lambda: &[f64], x: &[f64]) -> Result<()> {
    if k != 3 && k != 4 {
        return Err(Error::InvalidArgument(format!(
            "trace inequality needs k = 3 or 4, got {k}"
        )));
    }
    if lambda.len() != k || x.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: lambda.len().min(x.len()),
        });
    }
    if let Some(v) = lambda.iter().chain(x).find(|v| v.is_nan() || **v < 0.0) {
        return Err(Error::NegativeInput(format!("trace inequality input {v}")));
    }
    Ok(())
}

/// Reduced sum-of-squares form; nonnegative on nonnegative inputs.
///
/// `k = 3`: `sum_i 2 λ_i x_i [(λ_j - λ_k)^2 + λ_i(λ_j + λ_k)]`.
///
/// `k = 4`: `sum_i 6 λ_i x_i [λ_j(λ_k - λ_l)^2 + λ_k(λ_j - λ_l)^2
/// + λ_l(λ_j - λ_k)^2 + λ_i(λ_jλ_k + λ_jλ_l + λ_kλ_l)]`,
/// where `{j, k, l}` are the other indices.
pub fn trace_inequality(k: usize, lambda: &[f64], x: &[f64]) -> Result<f64> {
    check(k, lambda, x)?;
    let l = lambda;
    let mut total = 0.0;
    for i in 0..k {
        let o: Vec<f64> = (0..k).filter(|&t| t != i).map(|t| l[t]).collect();
        let bracket = if k == 3 {
            (o[0] - o[1]).powi(2) + l[i] * (o[0] + o[1])
        } else {
            o[0] * (o[1] - o[2]).powi(2)
                + o[1] * (o[0] - o[2]).powi(2)
                + o[2] * (o[0] - o[1]).powi(2)
                + l[i] * (o[0] * o[1] + o[0] * o[2] + o[1] * o[2])
        };
        let c = if k == 3 { 2.0 } else { 6.0 };
        total += c * l[i] * x[i] * bracket;
    }
    Ok(total)
}

/// The same quantity written with traces `T_m = sum λ^m` and
/// `TY_m = sum λ_i^m x_i`, as it comes out of the determinantal
/// representation before any simplification.
pub fn trace_form_residual(k: usize, lambda: &[f64], x: &[f64]) -> Result<f64> {
    check(k, lambda, x)?;
    let t = |m: i32| lambda.iter().map(|v| v.powi(m)).sum::<f64>();
    let ty = |m: i32| lambda.iter().zip(x).map(|(v, y)| v.powi(m) * y).sum::<f64>();
    let (t1, t2, t3) = (t(1), t(2), t(3));
    Ok(if k == 3 {
        4.0 * t2 * ty(1) + 6.0 * t1 * ty(2) - 2.0 * t1 * t1 * ty(1) - 8.0 * ty(3)
    } else {
        (24.0 * t1 * t2 - 6.0 * t1.powi(3) - 18.0 * t3) * ty(1) + (21.0 * t1 * t1 - 27.0 * t2) * ty(2)
            - 48.0 * t1 * ty(3)
            + 54.0 * ty(4)
    })
}
