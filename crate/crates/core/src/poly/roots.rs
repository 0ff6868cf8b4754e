//! Exact real-root analysis for rational polynomials.
//!
//! Roots are isolated with Sturm sequences on the square-free parts of a
//! Yun decomposition, so multiplicities are exact. Isolating intervals are
//! refined by Sturm-count bisection until narrower than [`ROOT_WIDTH`].

use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::poly::univariate::UniPoly;
use crate::scalar::{rat_to_f64, rational, Ring};

/// Width of refined isolating intervals.
pub const ROOT_WIDTH: f64 = 1e-12;

/// Root comparisons in the interlacing predicates treat values closer than
/// this as equal.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct IsolatedRoot {
    pub lo: BigRational,
    pub hi: BigRational,
    pub multiplicity: usize,
}

impl IsolatedRoot {
    pub fn value(&self) -> f64 {
        if self.lo == self.hi {
            rat_to_f64(&self.lo)
        } else {
            0.5 * (rat_to_f64(&self.lo) + rat_to_f64(&self.hi))
        }
    }
}

struct Sturm {
    chain: Vec<UniPoly>,
}

impl Sturm {
    fn new(f: &UniPoly) -> Self {
        let mut chain = vec![f.clone(), f.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero_poly() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero");
            if r.is_zero_poly() {
                break;
            }
            chain.push(-r);
        }
        Sturm { chain }
    }

    fn variations_at(&self, x: &BigRational) -> usize {
        count_variations(self.chain.iter().map(|p| sign(&p.eval(x))))
    }

    fn variations_at_neg_inf(&self) -> usize {
        count_variations(self.chain.iter().map(|p| {
            let d = p.degree().unwrap_or(0);
            let s = sign(p.leading().expect("nonzero"));
            if d % 2 == 0 {
                s
            } else {
                -s
            }
        }))
    }

    fn variations_at_pos_inf(&self) -> usize {
        count_variations(self.chain.iter().map(|p| sign(p.leading().expect("nonzero"))))
    }

    /// Distinct roots in `(a, b]`.
    fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }
}

fn sign(q: &BigRational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

fn count_variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Yun square-free decomposition: returns `(f_k, k)` with `p = c * prod f_k^k`.
fn squarefree_parts(p: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    if a0.degree() == Some(0) {
        out.push((p.monic(), 1));
        return out;
    }
    let mut b = p.div_rem(&a0).expect("nonzero").0;
    let mut c = dp.div_rem(&a0).expect("nonzero").0;
    let mut d = c - b.derivative();
    let mut k = 1;
    loop {
        if b.degree().unwrap_or(0) == 0 {
            break;
        }
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), k));
        }
        b = b.div_rem(&a).expect("nonzero").0;
        c = d.div_rem(&a).expect("nonzero").0;
        d = c - b.derivative();
        k += 1;
    }
    out
}

/// Strict upper bound on the modulus of every root (Cauchy).
fn cauchy_bound(p: &UniPoly) -> BigRational {
    let lead = p.leading().expect("nonzero").abs();
    let m = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs() / lead.clone())
        .fold(<BigRational as Ring>::zero(), |a, b| if b > a { b } else { a });
    m + <BigRational as Ring>::one()
}

fn isolate_squarefree(f: &UniPoly, multiplicity: usize, out: &mut Vec<IsolatedRoot>) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let sturm = Sturm::new(f);
    let total = sturm.variations_at_neg_inf() - sturm.variations_at_pos_inf();
    if total == 0 {
        return;
    }
    let bound = cauchy_bound(f);
    let width = rational(1, 1_000_000_000_000);
    let two = BigRational::from_i64(2);
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let k = sturm.count(&a, &b);
        if k == 0 {
            continue;
        }
        if k > 1 {
            let m = (a.clone() + b.clone()) / two.clone();
            stack.push((m.clone(), b));
            stack.push((a, m));
            continue;
        }
        // exactly one root in (a, b]
        let (mut lo, mut hi) = (a, b);
        if f.eval(&hi).is_zero() {
            out.push(IsolatedRoot {
                lo: hi.clone(),
                hi,
                multiplicity,
            });
            continue;
        }
        while hi.clone() - lo.clone() > width {
            let m = (lo.clone() + hi.clone()) / two.clone();
            if f.eval(&m).is_zero() {
                lo = m.clone();
                hi = m;
                break;
            }
            if sturm.count(&lo, &m) == 1 {
                hi = m;
            } else {
                lo = m;
            }
        }
        // snap to the simplest rational in the interval when it is a root
        let s = simplest_between(&lo, &hi);
        if f.eval(&s).is_zero() {
            lo = s.clone();
            hi = s;
        }
        out.push(IsolatedRoot { lo, hi, multiplicity });
    }
}

/// Rational with the smallest denominator in `[lo, hi]`.
fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    let zero = <BigRational as Ring>::zero();
    if *lo <= zero && zero <= *hi {
        return zero;
    }
    if *hi < zero {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    let next = fl.clone() + <BigRational as Ring>::one();
    if next <= *hi {
        return next;
    }
    let inner = simplest_between(
        &(<BigRational as Ring>::one() / (hi.clone() - fl.clone())),
        &(<BigRational as Ring>::one() / (lo.clone() - fl.clone())),
    );
    fl + <BigRational as Ring>::one() / inner
}

/// All real roots with multiplicity, sorted ascending.
pub fn isolate_real_roots(p: &UniPoly) -> Result<Vec<IsolatedRoot>> {
    if p.is_zero_poly() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (f, k) in squarefree_parts(p) {
        isolate_squarefree(&f, k, &mut out);
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}

/// Sorted `(root, multiplicity)` pairs.
pub fn real_roots(p: &UniPoly) -> Result<Vec<(f64, usize)>> {
    Ok(isolate_real_roots(p)?
        .iter()
        .map(|r| (r.value(), r.multiplicity))
        .collect())
}

/// Roots listed with repetition, ascending.
pub fn sorted_roots_with_repetition(p: &UniPoly) -> Result<Vec<f64>> {
    let mut v = Vec::new();
    for (x, m) in real_roots(p)? {
        v.extend(std::iter::repeat_n(x, m));
    }
    Ok(v)
}

pub fn is_real_rooted(p: &UniPoly) -> Result<bool> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    let count: usize = squarefree_parts(p)
        .iter()
        .map(|(f, k)| {
            if f.degree().unwrap_or(0) == 0 {
                return 0;
            }
            let s = Sturm::new(f);
            k * (s.variations_at_neg_inf() - s.variations_at_pos_inf())
        })
        .sum();
    Ok(count == deg)
}

pub fn max_root(p: &UniPoly) -> Result<f64> {
    isolate_real_roots(p)?
        .last()
        .map(IsolatedRoot::value)
        .ok_or(Error::NoRealRoots)
}

/// Number of distinct real roots `>= b`, decided exactly.
pub fn count_roots_at_least(p: &UniPoly, b: &BigRational) -> Result<usize> {
    if p.is_zero_poly() {
        return Err(Error::ZeroPolynomial);
    }
    let f = squarefree_parts(p)
        .into_iter()
        .fold(UniPoly::constant(<BigRational as Ring>::one()), |acc, (f, _)| acc * f);
    if f.degree().unwrap_or(0) == 0 {
        return Ok(0);
    }
    let s = Sturm::new(&f);
    let at_b = if f.eval(b).is_zero() { 1 } else { 0 };
    Ok(s.variations_at(b) - s.variations_at_pos_inf() + at_b)
}

fn require_real_rooted(p: &UniPoly) -> Result<Vec<f64>> {
    if !is_real_rooted(p)? {
        return Err(Error::NotRealRooted);
    }
    sorted_roots_with_repetition(p)
}

fn le(a: f64, b: f64) -> bool {
    a <= b + TIE_TOL
}

/// Weak interlacing of sorted root sequences. `q` has degree `deg p - 1`
/// (`p_1 <= q_1 <= p_2 <= ... <= q_{d-1} <= p_d`) or the same degree as `p`,
/// in which case either alternation order is accepted.
pub fn interlaces(p: &UniPoly, q: &UniPoly) -> Result<bool> {
    let a = require_real_rooted(p)?;
    let b = require_real_rooted(q)?;
    let dp = a.len();
    let dq = b.len();
    if dq + 1 == dp {
        Ok((0..dq).all(|k| le(a[k], b[k]) && le(b[k], a[k + 1])))
    } else if dq == dp {
        let a_first = (0..dp).all(|k| le(a[k], b[k]) && (k + 1 == dp || le(b[k], a[k + 1])));
        let b_first = (0..dp).all(|k| le(b[k], a[k]) && (k + 1 == dp || le(a[k], b[k + 1])));
        Ok(a_first || b_first)
    } else {
        Err(Error::DegreeMismatch(format!(
            "interlacing needs deg q in {{deg p - 1, deg p}}, got {dp} and {dq}"
        )))
    }
}

fn check_pair(p: &UniPoly, q: &UniPoly) -> Result<()> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch(format!(
            "common interlacer needs equal degrees, got {:?} and {:?}",
            p.degree(),
            q.degree()
        )));
    }
    let pos = |x: &UniPoly| x.leading().is_some_and(|l| l.is_positive());
    if !pos(p) || !pos(q) {
        return Err(Error::NonPositiveLeading);
    }
    Ok(())
}

/// Exact decision via the sorted-root criterion: with roots `a_k`, `b_k`
/// sorted ascending, a common interlacer exists iff
/// `max(a_k, b_k) <= min(a_{k+1}, b_{k+1})` for every `k`. The result is
/// cross-checked on a 101-point grid of convex combinations; a disagreement
/// is reported as [`Error::CrossCheck`].
pub fn has_common_interlacer(p: &UniPoly, q: &UniPoly) -> Result<bool> {
    check_pair(p, q)?;
    let a = require_real_rooted(p)?;
    let b = require_real_rooted(q)?;
    let exact = (0..a.len().saturating_sub(1)).all(|k| le(a[k].max(b[k]), a[k + 1].min(b[k + 1])));
    if exact && !convex_combinations_real_rooted(p, q, 101)? {
        return Err(Error::CrossCheck(
            "sorted-root criterion accepted a pair with a non-real-rooted combination".into(),
        ));
    }
    Ok(exact)
}

/// True when `a p + (1 - a) q` is real rooted for every `a` on a uniform
/// grid of `points` values in `[0, 1]`.
pub fn convex_combinations_real_rooted(p: &UniPoly, q: &UniPoly, points: usize) -> Result<bool> {
    check_pair(p, q)?;
    let steps = points.max(2) - 1;
    for k in 0..=steps {
        let alpha = rational(k as i64, steps as i64);
        let beta = <BigRational as Ring>::one() - alpha.clone();
        let combo = p.scale(&alpha) + q.scale(&beta);
        if !is_real_rooted(&combo)? {
            return Ok(false);
        }
    }
    Ok(true)
}
