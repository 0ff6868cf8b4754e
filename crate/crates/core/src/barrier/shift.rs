//! Numerical checks of the barrier shift `Φ^j_{∂_i^{r-1} q}(z - δ e_i) <=
//! Φ^j_q(z)` for `q = ∂^S det[Z - A]^r`, and the bivariate polynomial that
//! shows the single-derivative shift `δ = 1/Φ^i` fails in general.

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{is_above_spectrum, max_eigenvalue, Matrix};
use crate::poly::CappedPoly;
use crate::rdet::det_z_minus_a;
use crate::scalar::{format_rational, rat_to_f64, rational, rationalize, Scalar};

pub const MAX_SHIFT_N: usize = 4;
pub const MAX_SHIFT_R: usize = 4;

/// Step size rule `δ = c / Φ^i_q(z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaRule {
    /// `c = 1/2`, for degree two.
    Half,
    /// `c = 4/3`, for degree three.
    FourThirds,
    /// `c = 9/4`, for degree four.
    NineFourths,
}

impl DeltaRule {
    pub fn for_degree(r: usize) -> Result<Self> {
        match r {
            2 => Ok(DeltaRule::Half),
            3 => Ok(DeltaRule::FourThirds),
            4 => Ok(DeltaRule::NineFourths),
            _ => Err(Error::InvalidArgument(format!("no shift rule for degree {r}"))),
        }
    }

    pub fn factor<S: Scalar>(self) -> S {
        let (n, d) = match self {
            DeltaRule::Half => (1, 2),
            DeltaRule::FourThirds => (4, 3),
            DeltaRule::NineFourths => (9, 4),
        };
        S::from_i64(n) / S::from_i64(d)
    }

    pub fn name(self) -> &'static str {
        match self {
            DeltaRule::Half => "half",
            DeltaRule::FourThirds => "four-thirds",
            DeltaRule::NineFourths => "nine-fourths",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftCheck {
    pub b: f64,
    pub j: usize,
    pub delta: f64,
    /// `Φ^j` of the derivative at the shifted point.
    pub lhs: f64,
    /// `Φ^j_q(z)`.
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftReport {
    pub r: usize,
    pub rule: DeltaRule,
    pub s: Vec<usize>,
    pub i: usize,
    pub checks: Vec<ShiftCheck>,
}

impl ShiftReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "r": self.r,
            "rule": self.rule.name(),
            "S": self.s,
            "i": self.i,
            "holds": self.holds(),
            "checks": self.checks.iter().map(|c| json!({
                "b": c.b, "j": c.j, "delta": c.delta, "lhs": c.lhs, "rhs": c.rhs, "holds": c.holds,
            })).collect::<Vec<_>>(),
        })
    }
}

fn le<S: Scalar>(a: &S, b: &S) -> bool {
    if S::EXACT {
        a.re_rational() <= b.re_rational()
    } else {
        a.re_f64() <= b.re_f64() + 1e-12 * (1.0 + b.re_f64().abs())
    }
}

fn positive<S: Scalar>(a: &S) -> bool {
    if S::EXACT {
        a.re_rational() > rational(0, 1)
    } else {
        a.re_f64() > 0.0
    }
}

fn potential<S: Scalar>(q: &CappedPoly<S>, j: usize, z: &[S]) -> S {
    q.derivative(j).eval(z) / q.eval(z)
}

/// Checks the shifted barrier inequality for `q = ∂^S det[Z - A]^r` at the
/// diagonal points `z = b 1` with `b = λmax + offset`, for every `j` outside
/// `S`. `A` must be real symmetric.
pub fn barrier_shift_check<S: Scalar>(
    a: &Matrix<S>,
    r: usize,
    s: &[usize],
    i: usize,
    rule: DeltaRule,
    offsets: &[f64],
) -> Result<ShiftReport> {
    let n = a.n();
    if n > MAX_SHIFT_N {
        return Err(Error::size("barrier shift dimension", MAX_SHIFT_N as u128, n as u128));
    }
    if r > MAX_SHIFT_R {
        return Err(Error::size("barrier shift degree", MAX_SHIFT_R as u128, r as u128));
    }
    if r < 2 {
        return Err(Error::InvalidArgument("barrier shift needs r >= 2".into()));
    }
    a.check_index(i)?;
    for &t in s {
        a.check_index(t)?;
    }
    if s.contains(&i) {
        return Err(Error::InvalidArgument(format!("direction {i} lies in S")));
    }
    if a.rows().flatten().any(|v| !v.is_real(0.0)) {
        return Err(Error::InvalidArgument(
            "barrier shift needs a real symmetric matrix".into(),
        ));
    }
    let p = CappedPoly::power_of_multilinear(&det_z_minus_a(a), r, vec![r; n])?;
    let mult: Vec<usize> = (0..n).map(|t| usize::from(s.contains(&t))).collect();
    let q = p.derivative_multi(&mult);
    let mut dq = q.clone();
    for _ in 1..r {
        dq = dq.derivative(i);
    }
    let lmax = if n == 0 { 0.0 } else { max_eigenvalue(a)? };
    let mut checks = Vec::new();
    for &off in offsets {
        let b = S::from_rational(&rationalize(lmax + off));
        if !is_above_spectrum(a, &b)? {
            return Err(Error::NotAboveRoots {
                b: b.re_f64(),
                lambda_max: lmax,
            });
        }
        let z = vec![b.clone(); n];
        let delta = rule.factor::<S>() / potential(&q, i, &z);
        let mut shifted = z.clone();
        shifted[i] = shifted[i].clone() - delta.clone();
        let dq_at = dq.eval(&shifted);
        for j in (0..n).filter(|j| !s.contains(j)) {
            let lhs = dq.derivative(j).eval(&shifted) / dq_at.clone();
            let rhs = potential(&q, j, &z);
            checks.push(ShiftCheck {
                b: b.re_f64(),
                j,
                delta: delta.re_f64(),
                lhs: lhs.re_f64(),
                rhs: rhs.re_f64(),
                holds: positive(&dq_at) && le(&lhs, &rhs),
            });
        }
    }
    Ok(ShiftReport {
        r,
        rule,
        s: s.to_vec(),
        i,
        checks,
    })
}

/// Quantities for `p(x, y) = (7 + 8x + y)(8 + 4x + 4y)` at `(1, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariateReport {
    pub phi_x: BigRational,
    pub phi_y: BigRational,
    pub delta: BigRational,
    /// `Φ^y_{∂_x p}` at `(1 - δ, 1) = (-1/3, 1)`.
    pub shifted: BigRational,
    /// `Φ^y_{∂_x p}` at `(-4/3, 1)`, the point printed alongside the claim.
    pub shifted_alt: BigRational,
    /// The value printed for the shifted potential.
    pub printed: BigRational,
}

impl BivariateReport {
    /// The shifted potential strictly exceeds the original one.
    pub fn violation(&self) -> bool {
        self.shifted > self.phi_y
    }

    pub fn printed_matches(&self) -> bool {
        self.printed == self.shifted || self.printed == self.shifted_alt
    }

    pub fn to_json(&self) -> Value {
        let s = format_rational;
        json!({
            "polynomial": "(7+8x+y)(8+4x+4y)",
            "phi_x": s(&self.phi_x),
            "phi_y": s(&self.phi_y),
            "delta": s(&self.delta),
            "point": ["-1/3", "1"],
            "shifted_phi_y": s(&self.shifted),
            "alt_point": ["-4/3", "1"],
            "alt_shifted_phi_y": s(&self.shifted_alt),
            "printed_value": s(&self.printed),
            "printed_matches": self.printed_matches(),
            "violation": self.violation(),
            "shifted_phi_y_f64": rat_to_f64(&self.shifted),
        })
    }
}

pub fn bivariate_counterexample() -> Result<BivariateReport> {
    let q = |v: i64| rational(v, 1);
    let lin = |c: i64, x: i64, y: i64| {
        CappedPoly::from_terms(
            vec![2, 2],
            &[(vec![0, 0], q(c)), (vec![1, 0], q(x)), (vec![0, 1], q(y))],
        )
    };
    let p = lin(7, 8, 1)?.mul(&lin(8, 4, 4)?)?;
    let one = vec![q(1), q(1)];
    let phi_x = potential(&p, 0, &one);
    let phi_y = potential(&p, 1, &one);
    let delta = q(1) / phi_x.clone();
    let dx = p.derivative(0);
    let shifted = potential(&dx, 1, &[q(1) - delta.clone(), q(1)]);
    let shifted_alt = potential(&dx, 1, &[-delta.clone(), q(1)]);
    Ok(BivariateReport {
        phi_x,
        phi_y,
        delta,
        shifted,
        shifted_alt,
        printed: rational(27, 73),
    })
}
