//! Randomized search for Hermitian `B` violating the `det_2` ratio
//! inequality that would give the optimal barrier shift.
//!
//! With `d(T) = det_2[B(T)]` on kept multiset submatrices, indices `0` and
//! `1` in the roles of the two distinguished directions, and `S` drawn from
//! `2..n`, the inequality reads
//!
//! `d(S0)d(S01) + d(S00)d(S1) <= d(S0)^2 d(S1)/d(S) + d(S001) d(S)`
//!
//! after multiplying the ratio form through by `d(S)^2`. The comparison is
//! done on the ratios themselves, so the sign of `d(S)` does not matter.

use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{submatrix_kept, HermitianMatrix, IndexMultiset, Matrix};
use crate::random::{complex_hermitian, trial_rng};
use crate::rdet::{det_r_perm, Sides};
use crate::scalar::{format_rational, gauss, rational, GaussRational, Ring};

fn det2(b: &Matrix<GaussRational>, idx: &[usize]) -> Result<BigRational> {
    let v = det_r_perm(
        &submatrix_kept(b, &IndexMultiset::from_indices(idx))?,
        &gauss(rational(2, 1), rational(0, 1)),
    )?;
    if !v.im.is_zero() {
        return Err(Error::NotHermitian {
            deviation: crate::scalar::rat_to_f64(&v.im).abs(),
        });
    }
    Ok(v.re)
}

/// Both sides of the ratio inequality for the set `s` (disjoint from
/// `{0, 1}`), or `None` when `d(S) = 0`.
pub fn statement_sides(b: &Matrix<GaussRational>, s: &[usize]) -> Result<Option<Sides<BigRational>>> {
    if b.n() < 2 {
        return Err(Error::InvalidArgument("statement needs n >= 2".into()));
    }
    if s.iter().any(|&t| t < 2) {
        return Err(Error::InvalidArgument("S must avoid indices 0 and 1".into()));
    }
    let with = |extra: &[usize]| -> Result<BigRational> {
        let idx: Vec<usize> = s.iter().chain(extra).copied().collect();
        det2(b, &idx)
    };
    let base = with(&[])?;
    if base.is_zero() {
        return Ok(None);
    }
    let ratio = |extra: &[usize]| -> Result<BigRational> { Ok(with(extra)? / base.clone()) };
    let (r0, r1, r01, r00, r001) = (
        ratio(&[0])?,
        ratio(&[1])?,
        ratio(&[0, 1])?,
        ratio(&[0, 0])?,
        ratio(&[0, 0, 1])?,
    );
    Ok(Some(Sides {
        lhs: r0.clone() * r01 + r00 * r1.clone(),
        rhs: r0.clone() * r0 * r1 + r001,
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StatementWitness {
    pub trial: u64,
    pub matrix: Matrix<GaussRational>,
    pub s: Vec<usize>,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl StatementWitness {
    pub fn to_json(&self) -> Value {
        let matrix = HermitianMatrix::exact(self.matrix.clone())
            .map(|h| h.to_json())
            .unwrap_or(Value::Null);
        json!({
            "trial": self.trial,
            "matrix": matrix,
            "S": self.s,
            "lhs": format_rational(&self.lhs),
            "rhs": format_rational(&self.rhs),
        })
    }

    /// Recomputes both sides from the stored matrix.
    pub fn verify(&self) -> Result<bool> {
        Ok(match statement_sides(&self.matrix, &self.s)? {
            Some(sides) => sides.lhs == self.lhs && sides.rhs == self.rhs && sides.lhs > sides.rhs,
            None => false,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Witness(Box<StatementWitness>),
    Exhausted { trials: u64 },
}

impl SearchOutcome {
    pub fn to_json(&self) -> Value {
        match self {
            SearchOutcome::Witness(w) => json!({"status": "witness", "witness": w.to_json()}),
            SearchOutcome::Exhausted { trials } => json!({"status": "exhausted", "trials": trials}),
        }
    }
}

fn trial_instance(n: usize, seed: u64, t: u64, singleton: bool) -> (Matrix<GaussRational>, Vec<usize>) {
    use rand::Rng;
    let mut g = trial_rng(seed, t);
    let b = complex_hermitian(&mut g, n);
    let s = if singleton {
        vec![g.random_range(2..n)]
    } else {
        Vec::new()
    };
    (b, s)
}

fn violation(b: Matrix<GaussRational>, s: Vec<usize>, t: u64) -> Result<Option<StatementWitness>> {
    Ok(match statement_sides(&b, &s)? {
        Some(sides) if sides.lhs > sides.rhs => Some(StatementWitness {
            trial: t,
            matrix: b,
            s,
            lhs: sides.lhs,
            rhs: sides.rhs,
        }),
        _ => None,
    })
}

/// Draws up to `budget` random Hermitian matrices with a singleton `S`
/// and returns the lowest-numbered violating trial. Trials are independent
/// streams of the seed, so the outcome does not depend on the thread count.
pub fn statement_counterexample_search(n: usize, budget: u64, seed: u64) -> Result<SearchOutcome> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "statement search needs n >= 3, got {n}"
        )));
    }
    let found = (0..budget).into_par_iter().find_map_first(|t| {
        let (b, s) = trial_instance(n, seed, t, true);
        violation(b, s, t).transpose()
    });
    match found {
        Some(w) => Ok(SearchOutcome::Witness(Box::new(w?))),
        None => Ok(SearchOutcome::Exhausted { trials: budget }),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmptySweep {
    pub trials: u64,
    pub degenerate: u64,
    pub violations: u64,
    pub first_violation: Option<StatementWitness>,
}

/// Evaluates the inequality with `S` empty on `trials` random matrices.
pub fn statement_empty_sweep(n: usize, trials: u64, seed: u64) -> Result<EmptySweep> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("statement sweep needs n >= 2, got {n}")));
    }
    let results: Vec<Result<(bool, Option<StatementWitness>)>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (b, s) = trial_instance(n, seed, t, false);
            let degenerate = statement_sides(&b, &s)?.is_none();
            Ok((degenerate, violation(b, s, t)?))
        })
        .collect();
    let mut sweep = EmptySweep {
        trials,
        degenerate: 0,
        violations: 0,
        first_violation: None,
    };
    for r in results {
        let (degenerate, w) = r?;
        sweep.degenerate += u64::from(degenerate);
        if let Some(w) = w {
            sweep.violations += 1;
            sweep.first_violation.get_or_insert(w);
        }
    }
    Ok(sweep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrices_give_equality() {
        let d: Vec<GaussRational> = [3, -2, 5, 7]
            .iter()
            .map(|&v| gauss(rational(v, 1), rational(0, 1)))
            .collect();
        let b = Matrix::diag(&d);
        for s in [vec![], vec![2], vec![3], vec![2, 3]] {
            let sides = statement_sides(&b, &s).unwrap().unwrap();
            assert_eq!(sides.lhs, sides.rhs, "S = {s:?}");
        }
    }

    #[test]
    fn empty_set_never_violates() {
        let sweep = statement_empty_sweep(3, 1000, 7).unwrap();
        assert_eq!(sweep.violations, 0, "{:?}", sweep.first_violation.map(|w| w.to_json()));
        assert!(sweep.degenerate < sweep.trials);
    }

    #[test]
    fn singleton_search_finds_a_verified_witness() {
        match statement_counterexample_search(4, 100_000, 1).unwrap() {
            SearchOutcome::Witness(w) => {
                assert!(w.verify().unwrap());
                assert_eq!(w.s.len(), 1);
                assert!((2..4).contains(&w.s[0]));
            }
            SearchOutcome::Exhausted { .. } => panic!("no violation found"),
        }
    }

    #[test]
    fn search_is_reproducible() {
        let a = statement_counterexample_search(4, 2000, 3).unwrap();
        let b = statement_counterexample_search(4, 2000, 3).unwrap();
        assert_eq!(a, b);
        assert!(statement_counterexample_search(2, 10, 1).is_err());
    }
}
