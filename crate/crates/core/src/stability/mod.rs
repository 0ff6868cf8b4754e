//! Discrete measures on subsets, a randomized real-stability test for
//! multiaffine polynomials, and the two measures that drive the paving
//! argument: `μ(S) ∝ r^{|S|} det_r[A_S]` and the uniform paving measure.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{check_psd, submatrix_removed, Matrix};
use crate::poly::{mask_to_set, Multilinear, MAX_VARS};
use crate::random::trial_rng;
use crate::rdet::det_r_perm;
use crate::scalar::{format_rational, pow, rat_to_f64, rational, Ring, Scalar};

pub const MAX_SR_N: usize = 8;
pub const MAX_PAVING_MEASURE_VARS: usize = 20;
/// `|P(w)|` below this marks `w` as a zero.
pub const ZERO_TOL: f64 = 1e-10;
/// Rayleigh differences above `-SURROGATE_TOL` count as nonnegative.
pub const SURROGATE_TOL: f64 = 1e-12;

/// A measure on subsets of `0..n`, stored by bitmask.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    pub n: usize,
    pub weights: BTreeMap<u32, BigRational>,
    pub normalized: bool,
}

impl DiscreteMeasure {
    /// Builds a measure from nonnegative weights; zero weights are dropped.
    pub fn new(n: usize, weights: impl IntoIterator<Item = (u32, BigRational)>) -> Result<Self> {
        if n > MAX_VARS {
            return Err(Error::size("measure ground set", MAX_VARS as u128, n as u128));
        }
        let mut map = BTreeMap::new();
        for (mask, w) in weights {
            if n < 32 && mask >> n != 0 {
                return Err(Error::IndexOutOfRange {
                    index: 31 - mask.leading_zeros() as usize,
                    n,
                });
            }
            if w < rational(0, 1) {
                return Err(Error::NegativeWeight {
                    subset: mask_to_set(mask),
                    weight: rat_to_f64(&w),
                });
            }
            if !w.is_zero() {
                let slot = map.entry(mask).or_insert_with(|| rational(0, 1));
                *slot += w;
            }
        }
        let mut m = DiscreteMeasure {
            n,
            weights: map,
            normalized: false,
        };
        m.normalized = m.total() == rational(1, 1);
        Ok(m)
    }

    pub fn total(&self) -> BigRational {
        self.weights.values().fold(rational(0, 1), |acc, w| acc + w)
    }

    /// Rescales to total mass one.
    pub fn normalize(&self) -> Result<Self> {
        let t = self.total();
        if t.is_zero() {
            return Err(Error::InvalidDistribution("measure has zero total mass".into()));
        }
        Ok(DiscreteMeasure {
            n: self.n,
            weights: self.weights.iter().map(|(&k, w)| (k, w / &t)).collect(),
            normalized: true,
        })
    }

    pub fn weight(&self, set: &[usize]) -> BigRational {
        self.weights
            .get(&crate::poly::set_to_mask(set))
            .cloned()
            .unwrap_or_else(|| rational(0, 1))
    }

    /// `sum_S μ(S) z^S`.
    pub fn generating_polynomial(&self) -> Multilinear<BigRational> {
        Multilinear::from_terms(self.n, self.weights.iter().map(|(&k, w)| (k, w.clone())))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "atoms": self.weights.iter().map(|(&k, w)| json!({
                "set": mask_to_set(k),
                "w": format_rational(w),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Outcome of the randomized stability test.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Stable,
    /// A point with every coordinate in the open upper half-plane at which
    /// the polynomial vanishes (up to [`ZERO_TOL`]).
    Unstable(Vec<Complex64>),
    Undetermined,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::Unstable(_) => "unstable",
            Verdict::Undetermined => "undetermined",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Unstable(w) => json!({
                "verdict": "unstable",
                "witness": w.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            }),
            v => json!({"verdict": v.name()}),
        }
    }
}

fn eval_c(p: &Multilinear<f64>, z: &[Complex64]) -> Complex64 {
    p.terms()
        .iter()
        .map(|(&mask, &c)| {
            (0..p.nvars())
                .filter(|&i| mask >> i & 1 == 1)
                .fold(Complex64::new(c, 0.0), |acc, i| acc * z[i])
        })
        .sum()
}

/// Coefficients `(a, b)` with `P = a + b z_k` once every other variable is
/// fixed to `z`.
fn affine_in(p: &Multilinear<f64>, k: usize, z: &[Complex64]) -> (Complex64, Complex64) {
    let (mut a, mut b) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for (&mask, &c) in p.terms() {
        let v = (0..p.nvars())
            .filter(|&i| i != k && mask >> i & 1 == 1)
            .fold(Complex64::new(c, 0.0), |acc, i| acc * z[i]);
        if mask >> k & 1 == 1 {
            b += v;
        } else {
            a += v;
        }
    }
    (a, b)
}

/// Looks for a zero in the upper half-plane along one coordinate: with the
/// other coordinates in the upper half-plane, the affine root in `z_k`
/// must lie in the closed lower half-plane for a stable polynomial.
fn upper_zero(p: &Multilinear<f64>, z: &[Complex64]) -> Option<Vec<Complex64>> {
    if eval_c(p, z).norm() < ZERO_TOL {
        return Some(z.to_vec());
    }
    for k in 0..p.nvars() {
        let (a, b) = affine_in(p, k, z);
        if b.norm() < ZERO_TOL {
            continue;
        }
        let root = -a / b;
        if root.im > ZERO_TOL {
            let mut w = z.to_vec();
            w[k] = root;
            if eval_c(p, &w).norm() < ZERO_TOL {
                return Some(w);
            }
        }
    }
    None
}

/// `min_{i<j} ∂_iP ∂_jP - P ∂_i∂_jP` at a real point.
fn min_rayleigh(p: &Multilinear<f64>, x: &[f64]) -> f64 {
    let n = p.nvars();
    let v = p.eval(x);
    let d: Vec<f64> = (0..n).map(|i| p.differentiate(1 << i).eval(x)).collect();
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let dij = p.differentiate(1 << i | 1 << j).eval(x);
            best = best.min(d[i] * d[j] - v * dij);
        }
    }
    best
}

/// Randomized real-stability test for a multiaffine polynomial with real
/// coefficients.
///
/// Each trial draws a point in the open upper half-plane and solves for a
/// zero along every coordinate, and evaluates the Rayleigh differences
/// `∂_iP ∂_jP - P ∂_i∂_jP` at a random real point. A zero gives
/// `Unstable`; otherwise nonnegative differences everywhere give `Stable`
/// and a negative one gives `Undetermined`.
pub fn is_real_stable_multiaffine<S: Scalar>(p: &Multilinear<S>, trials: u64, seed: u64) -> Result<Verdict> {
    if let Some((mask, _)) = p.terms().iter().find(|(_, c)| !c.is_real(0.0)) {
        return Err(Error::InvalidArgument(format!(
            "coefficient of {:?} is not real",
            mask_to_set(*mask)
        )));
    }
    if p.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let pf = p.map(|c| c.re_f64());
    let n = pf.nvars();
    let i = Complex64::new(0.0, 1.0);
    if let Some(w) = upper_zero(&pf, &vec![i; n]) {
        return Ok(Verdict::Unstable(w));
    }
    let outcomes: Vec<(Option<Vec<Complex64>>, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut g = trial_rng(seed, t);
            let z: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(g.random_range(-3.0..3.0), g.random_range(0.05..3.0)))
                .collect();
            let x: Vec<f64> = (0..n).map(|_| g.random_range(-3.0..3.0)).collect();
            (upper_zero(&pf, &z), min_rayleigh(&pf, &x) >= -SURROGATE_TOL)
        })
        .collect();
    let mut rayleigh_ok = true;
    for (zero, ok) in outcomes {
        if let Some(w) = zero {
            return Ok(Verdict::Unstable(w));
        }
        rayleigh_ok &= ok;
    }
    Ok(if rayleigh_ok {
        Verdict::Stable
    } else {
        Verdict::Undetermined
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SrMeasure {
    pub measure: DiscreteMeasure,
    pub verdict: Verdict,
}

impl SrMeasure {
    pub fn to_json(&self) -> Value {
        let mut v = self.measure.to_json();
        v["stability"] = self.verdict.to_json();
        v
    }
}

/// `μ(S) ∝ r^{|S|} det_r[A_S]` for positive semidefinite `A`, with `A_S`
/// the matrix with rows and columns in `S` removed, normalized and tested
/// for stability.
pub fn sr_measure_from_matrix<S: Scalar>(a: &Matrix<S>, r: usize, trials: u64, seed: u64) -> Result<SrMeasure> {
    let n = a.n();
    if n > MAX_SR_N {
        return Err(Error::size(
            "strongly Rayleigh measure dimension",
            MAX_SR_N as u128,
            n as u128,
        ));
    }
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    check_psd(a)?;
    let rs = S::from_usize(r);
    let mut weights = Vec::with_capacity(1 << n);
    for mask in 0u32..1 << n {
        let s = mask_to_set(mask);
        let d = det_r_perm(&submatrix_removed(a, &s)?, &rs)? * pow(&rs, s.len());
        if !d.is_real(1e-9) {
            return Err(Error::InvalidDistribution(format!("weight of {s:?} is not real")));
        }
        let w = d.re_rational();
        if w < rational(0, 1) {
            return Err(Error::NegativeWeight {
                subset: s,
                weight: rat_to_f64(&w),
            });
        }
        weights.push((mask, w));
    }
    let measure = DiscreteMeasure::new(n, weights)?.normalize()?;
    let verdict = is_real_stable_multiaffine(&measure.generating_polynomial(), trials, seed)?;
    Ok(SrMeasure { measure, verdict })
}

/// Bit of element `(copy k, index i)` in the ground set of `r` copies of
/// `0..n`.
pub fn paving_bit(n: usize, k: usize, i: usize) -> usize {
    k * n + i
}

fn check_paving_size(n: usize, r: usize) -> Result<()> {
    let vars = n.saturating_mul(r);
    if vars > MAX_PAVING_MEASURE_VARS {
        return Err(Error::size(
            "paving measure ground set",
            MAX_PAVING_MEASURE_VARS as u128,
            vars as u128,
        ));
    }
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    Ok(())
}

/// Uniform measure on `r` copies of `0..n`: one atom per paving
/// `X_0 ⨿ ... ⨿ X_{r-1}`, namely the set of `(k, i)` with `i` outside
/// `X_k`, each of weight `r^{-n}`.
pub fn paving_measure(n: usize, r: usize) -> Result<DiscreteMeasure> {
    check_paving_size(n, r)?;
    let count = (r as u64).pow(n as u32);
    let w = rational(1, count as i64);
    let atoms = (0..count).map(|code| {
        let mut mask = 0u32;
        let mut c = code;
        for i in 0..n {
            let block = (c % r as u64) as usize;
            c /= r as u64;
            for k in (0..r).filter(|&k| k != block) {
                mask |= 1 << paving_bit(n, k, i);
            }
        }
        (mask, w.clone())
    });
    DiscreteMeasure::new(n * r, atoms)
}

/// `r^{-n} prod_i (∂_{z_i^{(0)}} + ... + ∂_{z_i^{(r-1)}}) prod_{k,i} z_i^{(k)}`,
/// the generating polynomial of the paving measure written as a
/// differential operator.
pub fn paving_measure_by_differentiation(n: usize, r: usize) -> Result<Multilinear<BigRational>> {
    check_paving_size(n, r)?;
    let vars = n * r;
    let full = if vars == 0 { 0 } else { u32::MAX >> (32 - vars) };
    let mut p = Multilinear::monomial(vars, full, rational(1, 1));
    for i in 0..n {
        let mut next = Multilinear::zero_with(vars);
        for k in 0..r {
            next = next + p.differentiate(1 << paving_bit(n, k, i));
        }
        p = next;
    }
    let scale = rational(1, (r as i64).pow(n as u32));
    Ok(p.scale(&scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paving::sr_expected_charpoly;
    use crate::poly::{is_real_rooted, set_to_mask};
    use crate::random::{gram, real_symmetric, rng};
    use crate::rdet::chi_r;

    fn ml(n: usize, terms: &[(&[usize], i64)]) -> Multilinear<BigRational> {
        Multilinear::from_terms(n, terms.iter().map(|(s, c)| (set_to_mask(s), rational(*c, 1))))
    }

    #[test]
    fn stability_examples() {
        let sum = ml(2, &[(&[0], 1), (&[1], 1)]);
        assert_eq!(is_real_stable_multiaffine(&sum, 500, 1).unwrap(), Verdict::Stable);
        let plus = ml(2, &[(&[0, 1], 1), (&[], 1)]);
        match is_real_stable_multiaffine(&plus, 500, 1).unwrap() {
            Verdict::Unstable(w) => {
                assert_eq!(w, vec![Complex64::new(0.0, 1.0); 2]);
            }
            v => panic!("expected unstable, got {v:?}"),
        }
        let minus = ml(2, &[(&[0, 1], 1), (&[], -1)]);
        assert_eq!(is_real_stable_multiaffine(&minus, 500, 1).unwrap(), Verdict::Stable);
    }

    #[test]
    fn unstable_witness_found_off_the_diagonal_point() {
        // z_0 - z_1 vanishes at z_0 = z_1 = i, so perturb: z_0 - 2 z_1 + 1.
        let p = ml(2, &[(&[0], 1), (&[1], -2), (&[], 1)]);
        match is_real_stable_multiaffine(&p, 200, 3).unwrap() {
            Verdict::Unstable(w) => {
                assert!(w.iter().all(|z| z.im > 0.0));
                let pf = p.map(rat_to_f64);
                assert!(eval_c(&pf, &w).norm() < ZERO_TOL);
            }
            v => panic!("expected unstable, got {v:?}"),
        }
    }

    #[test]
    fn rejects_complex_and_zero() {
        let p = Multilinear::from_terms(1, [(1u32, Complex64::new(0.0, 1.0))]);
        assert!(is_real_stable_multiaffine(&p, 10, 1).is_err());
        let z = Multilinear::<f64>::zero_with(2);
        assert!(matches!(
            is_real_stable_multiaffine(&z, 10, 1),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn zero_matrix_gives_point_mass() {
        let sr = sr_measure_from_matrix(&Matrix::<BigRational>::zeros(3), 2, 100, 1).unwrap();
        assert_eq!(sr.measure.weights.len(), 1);
        assert_eq!(sr.measure.weight(&[0, 1, 2]), rational(1, 1));
        assert!(sr.measure.normalized);
        assert_eq!(sr.verdict, Verdict::Stable);
    }

    #[test]
    fn diagonal_matrix_factors() {
        let (a, b) = (rational(1, 3), rational(2, 1));
        let d = Matrix::diag(&[a.clone(), b.clone()]);
        let sr = sr_measure_from_matrix(&d, 2, 500, 2).unwrap();
        let t = (a.clone() + rational(1, 1)) * (b.clone() + rational(1, 1));
        assert_eq!(sr.measure.weight(&[]), a.clone() * b.clone() / t.clone());
        assert_eq!(sr.measure.weight(&[0]), b / t.clone());
        assert_eq!(sr.measure.weight(&[0, 1]), rational(1, 1) / t);
        assert_eq!(sr.verdict, Verdict::Stable);
    }

    #[test]
    fn gram_measures_are_stable() {
        let mut g = rng(21);
        for _ in 0..3 {
            let a = gram(&mut g, 3, 2);
            let sr = sr_measure_from_matrix(&a, 2, 10_000, 5).unwrap();
            assert_eq!(sr.verdict, Verdict::Stable);
            assert!(sr.measure.weights.values().all(|w| *w >= rational(0, 1)));
        }
    }

    #[test]
    fn rejects_indefinite() {
        let a = Matrix::diag(&[rational(-1, 1), rational(1, 1)]);
        assert!(matches!(
            sr_measure_from_matrix(&a, 2, 10, 1),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn paving_measure_atoms() {
        let m = paving_measure(1, 2).unwrap();
        assert_eq!(m.weights.len(), 2);
        let m = paving_measure(2, 2).unwrap();
        assert_eq!(m.weights.len(), 4);
        assert!(m.weights.values().all(|w| *w == rational(1, 4)));
        assert!(m.normalized);
        assert!(paving_measure(7, 3).is_err());
    }

    #[test]
    fn paving_measure_matches_differential_formula() {
        for (n, r) in [(1, 2), (2, 2), (2, 3), (3, 2), (2, 4)] {
            let direct = paving_measure(n, r).unwrap().generating_polynomial();
            assert_eq!(
                direct,
                paving_measure_by_differentiation(n, r).unwrap(),
                "n = {n}, r = {r}"
            );
        }
    }

    #[test]
    fn paving_measure_reproduces_chi_r() {
        let mut g = rng(9);
        for n in 1..=3 {
            let a = real_symmetric(&mut g, n);
            let big = a.direct_sum(&a);
            let mu = paving_measure(n, 2).unwrap().generating_polynomial();
            let expected = sr_expected_charpoly(&big, &mu).unwrap();
            let chi = chi_r(&a, &rational(2, 1)).unwrap();
            assert_eq!(expected.scale(&rational(2i64.pow(n as u32), 1)), chi, "n = {n}");
        }
    }

    #[test]
    fn sr_expected_charpolys_are_real_rooted() {
        let mut g = rng(13);
        for n in 2..=4 {
            let psd = gram(&mut g, n, n);
            let mu = sr_measure_from_matrix(&psd, 2, 200, 1).unwrap();
            assert_eq!(mu.verdict, Verdict::Stable);
            let a = real_symmetric(&mut g, n);
            let p = sr_expected_charpoly(&a, &mu.measure.generating_polynomial()).unwrap();
            assert!(is_real_rooted(&p).unwrap(), "n = {n}");
        }
    }
}
