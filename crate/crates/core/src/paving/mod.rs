//! Pavings of `0..n` into `r` labelled blocks, the paving sum of
//! characteristic polynomials, the binary interlacing tree for `r = 2`, and
//! searches for pavings with small pinched norm.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::barrier::BoundReport;
use crate::error::{Error, Result};
use crate::linalg::{char_poly, eigenvalues_f64, max_eigenvalue, pinch, Matrix, Paving};
use crate::poly::{
    apply_diff_operator, has_common_interlacer, is_real_rooted, max_root, multilinear_det, Multilinear, Poly, UniPoly,
};
use crate::random::rng;
use crate::rdet::chi_r_real;
use crate::scalar::{rational, Ring, Scalar};

pub const MAX_PAVINGS: u128 = 100_000_000;
pub const MAX_FAMILY_N: usize = 10;

/// `r^n`, or an error when it exceeds `budget`.
pub fn paving_count(n: usize, r: usize, budget: u128) -> Result<u128> {
    let count = (r as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > budget {
        return Err(Error::size("paving enumeration", budget, count));
    }
    Ok(count)
}

/// All `r^n` ordered pavings, lexicographic in the assignment vector.
pub fn enumerate_pavings(n: usize, r: usize) -> Result<PavingIter> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    paving_count(n, r, MAX_PAVINGS)?;
    Ok(PavingIter {
        r,
        next: Some(vec![0; n]),
    })
}

pub struct PavingIter {
    r: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for PavingIter {
    type Item = Paving;

    fn next(&mut self) -> Option<Paving> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut pos = succ.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < self.r {
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(Paving::new(self.r, cur).expect("valid labels"))
    }
}

/// Paving number `idx` in lexicographic order.
pub fn paving_at(n: usize, r: usize, mut idx: u128) -> Paving {
    let mut assign = vec![0; n];
    for slot in assign.iter_mut().rev() {
        *slot = (idx % r as u128) as usize;
        idx /= r as u128;
    }
    Paving::new(r, assign).expect("valid labels")
}

fn all_pavings(n: usize, r: usize) -> Result<Vec<Paving>> {
    Ok(enumerate_pavings(n, r)?.collect())
}

/// `sum_X chi[A_X]` over all `r^n` ordered pavings.
pub fn paving_charpoly_sum<S: Scalar>(a: &Matrix<S>, r: usize) -> Result<Poly<S>> {
    let pavings = all_pavings(a.n(), r)?;
    let polys = pavings
        .par_iter()
        .map(|x| Ok(char_poly(&pinch(a, x)?)))
        .collect::<Result<Vec<Poly<S>>>>()?;
    Ok(polys.into_iter().fold(Poly::zero(), |acc, p| acc + p))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PavingReport {
    pub paving: Paving,
    pub pinch_max_eig: f64,
    pub charpoly: UniPoly,
    pub bound_used: Option<BoundReport>,
}

impl PavingReport {
    pub fn to_json(&self) -> Value {
        json!({
            "assign": self.paving.assign(),
            "value": self.pinch_max_eig,
            "charpoly": {"coeffs": self.charpoly.coeff_strings()},
            "bound": self.bound_used.as_ref().map(BoundReport::to_json),
        })
    }
}

/// Largest eigenvalue of the pinching, taken block by block.
pub fn pinch_value<S: Scalar>(a: &Matrix<S>, x: &Paving) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for block in x.blocks().into_iter().filter(|b| !b.is_empty()) {
        best = best.max(max_eigenvalue(&a.select(&block))?);
    }
    Ok(best)
}

fn pinch_value_fast<S: Scalar>(a: &Matrix<S>, x: &Paving) -> f64 {
    x.blocks()
        .into_iter()
        .filter(|b| !b.is_empty())
        .map(|b| {
            eigenvalues_f64(&a.select(&b))
                .last()
                .copied()
                .unwrap_or(f64::NEG_INFINITY)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn report<S: Scalar>(a: &Matrix<S>, x: Paving) -> Result<PavingReport> {
    let charpoly = char_poly(&pinch(a, &x)?).to_real()?;
    let pinch_max_eig = if S::EXACT {
        max_root(&charpoly)?
    } else {
        pinch_value(a, &x)?
    };
    Ok(PavingReport {
        paving: x,
        pinch_max_eig,
        charpoly,
        bound_used: None,
    })
}

/// Paving minimizing the largest eigenvalue of the pinching. Ties go to the
/// lexicographically first paving. When `chi_r` is affordable the optimum is
/// checked against its largest root.
pub fn best_paving_exhaustive<S: Scalar>(a: &Matrix<S>, r: usize) -> Result<PavingReport> {
    let n = a.n();
    let pavings = all_pavings(n, r)?;
    let values = pavings
        .par_iter()
        .map(|x| pinch_value(a, x))
        .collect::<Result<Vec<f64>>>()?;
    let mut best = 0;
    for (k, &v) in values.iter().enumerate() {
        if v < values[best] - 1e-12 {
            best = k;
        }
    }
    let rep = report(a, pavings[best].clone())?;
    if n <= crate::rdet::MAX_PERM_N && n > 0 {
        let chi = chi_r_real(a, &S::from_usize(r))?;
        let top = max_root(&chi)?;
        if rep.pinch_max_eig > top + 1e-9 {
            return Err(Error::CrossCheck(format!(
                "best paving value {} exceeds the largest root {top} of chi_{r}",
                rep.pinch_max_eig
            )));
        }
    }
    Ok(rep)
}

/// Local search over single-index block moves with first improvement. The
/// start paving and the scan order are drawn from `seed`.
pub fn best_paving_greedy<S: Scalar>(a: &Matrix<S>, r: usize, seed: u64) -> Result<PavingReport> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let n = a.n();
    let mut rng = rng(seed);
    let mut assign: Vec<usize> = (0..n).map(|_| rng.random_range(0..r)).collect();
    let mut moves: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..r).map(move |b| (i, b))).collect();
    moves.shuffle(&mut rng);
    let value = |assign: &[usize]| pinch_value_fast(a, &Paving::new(r, assign.to_vec()).expect("valid"));
    let mut current = value(&assign);
    loop {
        let mut improved = false;
        for &(i, b) in &moves {
            if assign[i] == b {
                continue;
            }
            let old = assign[i];
            assign[i] = b;
            let v = value(&assign);
            if v < current - 1e-12 {
                current = v;
                improved = true;
                break;
            }
            assign[i] = old;
        }
        if !improved {
            break;
        }
    }
    report(a, Paving::new(r, assign)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyReport {
    pub passed: bool,
    pub nodes_checked: usize,
    pub distributions_checked: usize,
    pub root: UniPoly,
    pub first_failure: Option<String>,
}

/// Node polynomial of the binary tree: the sum of `chi[A(X_1)] chi[A(X_2)]`
/// over every 2-paving extending the partial assignment `prefix` of the
/// first `prefix.len()` indices. Built from the coefficients of
/// [`multilinear_det`]: the kept block `X_1` is the removed set `X_2`.
fn node_poly(f: &Multilinear<UniPoly>, n: usize, prefix: &[usize]) -> UniPoly {
    let k = prefix.len();
    let fixed_second: u32 = prefix
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .fold(0, |m, (i, _)| m | 1 << i);
    let fixed_first: u32 = prefix
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == 0)
        .fold(0, |m, (i, _)| m | 1 << i);
    let rest = n - k;
    let mut acc = UniPoly::zero();
    for u in 0u32..1 << rest {
        let second = fixed_second | (u << k);
        let first = fixed_first | ((!u & ((1 << rest) - 1)) << k);
        acc = acc + f.coeff(second) * f.coeff(first);
    }
    acc
}

/// Checks the interlacing-family structure of 2-pavings: node recursion,
/// real-rootedness of every node, common interlacers for sibling pairs,
/// agreement of leaves with pinched characteristic polynomials, the root
/// with `chi_2`, and real-rootedness of 20 sampled product-measure averages.
pub fn interlacing_family_check<S: Scalar>(a: &Matrix<S>, seed: u64) -> Result<FamilyReport> {
    let n = a.n();
    if n > MAX_FAMILY_N {
        return Err(Error::size(
            "interlacing family dimension",
            MAX_FAMILY_N as u128,
            n as u128,
        ));
    }
    let f = multilinear_det(a)?;
    let f = Multilinear::from_terms(
        n,
        f.terms()
            .iter()
            .map(|(&m, c)| Ok((m, c.to_real()?)))
            .collect::<Result<Vec<_>>>()?,
    );
    let mut failure: Option<String> = None;
    let mut nodes = 0;
    let fail = |msg: String, failure: &mut Option<String>| {
        if failure.is_none() {
            *failure = Some(msg);
        }
    };

    // levels[k][code]: node for prefix given by the k low bits of code
    let mut levels: Vec<Vec<UniPoly>> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let level: Vec<UniPoly> = (0u32..1 << k)
            .into_par_iter()
            .map(|code| {
                let prefix: Vec<usize> = (0..k).map(|i| (code >> i & 1) as usize).collect();
                node_poly(&f, n, &prefix)
            })
            .collect();
        levels.push(level);
    }

    let root = levels[0][0].clone();
    let chi2 = chi_r_real(a, &S::from_i64(2))?;
    if root != chi2 {
        fail("root polynomial differs from chi_2".into(), &mut failure);
    }

    for k in 0..n {
        for code in 0u32..1 << k {
            nodes += 1;
            let q = &levels[k][code as usize];
            let left = &levels[k + 1][code as usize];
            let right = &levels[k + 1][(code | 1 << k) as usize];
            let label = || {
                format!(
                    "node level {k}, prefix {:?}",
                    (0..k).map(|i| code >> i & 1).collect::<Vec<_>>()
                )
            };
            if *q != left.clone() + right.clone() {
                fail(format!("{}: not the sum of its children", label()), &mut failure);
            }
            if !is_real_rooted(q)? {
                fail(format!("{}: not real rooted", label()), &mut failure);
            }
            if !has_common_interlacer(left, right)? {
                fail(format!("{}: children lack a common interlacer", label()), &mut failure);
            }
        }
    }

    for (code, leaf) in levels[n].iter().enumerate() {
        let assign: Vec<usize> = (0..n).map(|i| (code >> i) & 1).collect();
        let x = Paving::new(2, assign)?;
        let direct = char_poly(&pinch(a, &x)?).to_real()?;
        if *leaf != direct {
            fail(
                format!(
                    "leaf {:?}: differs from the pinched characteristic polynomial",
                    x.assign()
                ),
                &mut failure,
            );
        }
    }

    let mut rng = rng(seed);
    let distributions = 20;
    for d in 0..distributions {
        let p: Vec<_> = (0..n).map(|_| rational(rng.random_range(0..=100), 100)).collect();
        let mut q = UniPoly::zero();
        for (code, leaf) in levels[n].iter().enumerate() {
            let w = (0..n).fold(rational(1, 1), |w, i| {
                if code >> i & 1 == 0 {
                    w * p[i].clone()
                } else {
                    w * (rational(1, 1) - p[i].clone())
                }
            });
            q = q + leaf.scale(&w);
        }
        if !is_real_rooted(&q)? {
            fail(
                format!("product distribution {d}: average not real rooted"),
                &mut failure,
            );
        }
    }

    Ok(FamilyReport {
        passed: failure.is_none(),
        nodes_checked: nodes,
        distributions_checked: distributions,
        root,
        first_failure: failure,
    })
}

/// Expected characteristic polynomial of `A_S` for `S ~ mu`, where `mu` is
/// given by its multiaffine generating polynomial.
pub fn sr_expected_charpoly<S: Scalar>(a: &Matrix<S>, mu: &Multilinear<S>) -> Result<Poly<S>> {
    let mut total = S::zero();
    for (&mask, w) in mu.terms() {
        if !w.is_real(1e-12) || w.re_f64() < 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "weight of {:?} is not a nonnegative real",
                crate::poly::mask_to_set(mask)
            )));
        }
        total = total + w.clone();
    }
    let one_off = (total - S::one()).modulus();
    if (S::EXACT && one_off != 0.0) || one_off > 1e-12 {
        return Err(Error::InvalidDistribution("weights must sum to 1".into()));
    }
    apply_diff_operator(mu, &multilinear_det(a)?)
}
