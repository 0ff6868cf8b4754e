use rayon::prelude::*;
use serde_json::{json, Value};

use rand::Rng;
use rpaving_core::linalg::{submatrix_removed, HermitianMatrix, IndexMultiset, Matrix, Mode};
use rpaving_core::paving::paving_charpoly_sum;
use rpaving_core::poly::{interlaces, is_real_rooted, Poly};
use rpaving_core::random::{complex_hermitian, gram, to_gauss, trial_rng};
use rpaving_core::rdet::{
    chi_r, chi_r_real, defect_k_residual, det_r_derivative, det_r_macmahon, det_r_perm, koteljanskii_residual,
    multilinearization_residual, pd_det_residual, thompson_residual, vere_jones_vanishing,
};
use rpaving_core::scalar::{gauss_to_complex, GaussRational, Ring, Scalar};

use crate::config::{CliError, Report, RunConfig};

pub const INSTANCES: u64 = 12;

/// `(tag, description)` for every check, in report order.
pub const CHECKS: [(&str, &str); 10] = [
    ("chiexp", "paving sum of characteristic polynomials equals chi_r"),
    (
        "rdet-methods",
        "cycle sum, derivative and MacMahon det_r agree; det_1 = det",
    ),
    ("real-rooted", "chi_r of a Hermitian matrix is real-rooted"),
    ("cauchy-interlacing", "chi_r[A_i] interlaces chi_r[A]"),
    ("thompson", "r sum_i chi_r[A_i] = chi_r'[A]"),
    ("defect-k", "r^k k! sum_|S|=k chi_r[A_S] = chi_r^(k)[A]"),
    ("multilinearization", "det_r[Z + A] = sum_S z^S r^|S| det_r[A_S]"),
    ("pddet", "derivatives of det[Z - A]^2 at a point above the spectrum"),
    ("vere-jones", "det_2 vanishes on an index repeated three times"),
    (
        "koteljanskii",
        "det_r[A_S] det_r[A_T] >= det_r[A_(S&T)] det_r[A_(S|T)] for PSD A",
    ),
];

struct Instance {
    n: usize,
    r: usize,
    a: Matrix<GaussRational>,
    gram: Matrix<GaussRational>,
    pd_s: IndexMultiset,
    vj_s: IndexMultiset,
    kot_s: Vec<usize>,
    kot_t: Vec<usize>,
}

impl Instance {
    fn generate(seed: u64, t: u64) -> Self {
        let mut rng = trial_rng(seed, t);
        let n = 2 + (t % 3) as usize;
        let r = 2 + ((t / 3) % 2) as usize;
        let a = complex_hermitian(&mut rng, n);
        let gram = to_gauss(&gram(&mut rng, n, n));
        let mut pd_s = IndexMultiset::new();
        for i in 0..n {
            pd_s.add(i, rng.random_range(0..=2));
        }
        let mut vj_s = IndexMultiset::new();
        vj_s.add(rng.random_range(0..n), 3);
        vj_s.add(rng.random_range(0..n), rng.random_range(0..=1));
        let subset = |rng: &mut rpaving_core::random::TestRng| (0..n).filter(|_| rng.random_bool(0.5)).collect();
        let kot_s = subset(&mut rng);
        let kot_t = subset(&mut rng);
        Instance {
            n,
            r,
            a,
            gram,
            pd_s,
            vj_s,
            kot_s,
            kot_t,
        }
    }

    fn to_json(&self, index: u64) -> Value {
        json!({
            "instance": index,
            "n": self.n,
            "r": self.r,
            "matrix": HermitianMatrix::Exact(self.a.clone()).to_json(),
        })
    }
}

#[derive(Clone, Copy, Debug)]
struct Outcome {
    residual: f64,
    passed: bool,
}

/// Evaluates identities in one arithmetic mode; `fault` corrupts the check
/// at that index.
struct Checker {
    tol: f64,
    fault: Option<usize>,
}

impl Checker {
    fn poly<S: Scalar>(&self, idx: usize, mut diff: Poly<S>, scale: f64) -> Outcome {
        if self.fault == Some(idx) {
            diff = diff + Poly::constant(S::one());
        }
        let residual = diff.max_abs_coeff() / scale.max(1.0);
        let passed = if S::EXACT {
            diff.is_zero_poly()
        } else {
            residual <= self.tol
        };
        Outcome { residual, passed }
    }

    fn scalar<S: Scalar>(&self, idx: usize, mut diff: S, scale: f64) -> Outcome {
        if self.fault == Some(idx) {
            diff = diff + S::one();
        }
        let residual = diff.modulus() / scale.max(1.0);
        let passed = if S::EXACT { diff.is_zero() } else { residual <= self.tol };
        Outcome { residual, passed }
    }

    fn truth(&self, idx: usize, ok: bool) -> Outcome {
        let ok = ok != (self.fault == Some(idx));
        Outcome {
            residual: if ok { 0.0 } else { 1.0 },
            passed: ok,
        }
    }

    /// Nonnegativity of the real part of `value`.
    fn nonneg<S: Scalar>(&self, idx: usize, mut value: S, scale: f64) -> Outcome {
        if self.fault == Some(idx) {
            value = value.clone() - S::from_f64(value.modulus() + 1.0);
        }
        let residual = (-value.re_f64()).max(0.0) / scale.max(1.0);
        let passed = if S::EXACT {
            value.re_rational() >= num_rational::BigRational::from_integer(0.into())
        } else {
            residual <= self.tol
        };
        Outcome { residual, passed }
    }

    fn run<S: Scalar>(&self, inst: &Instance, conv: impl Fn(&GaussRational) -> S) -> Result<Vec<Outcome>, CliError> {
        let a = inst.a.map(&conv);
        let (n, r) = (inst.n, inst.r);
        let rs = S::from_usize(r);
        let chi = chi_r(&a, &rs)?;
        let scale = chi.max_abs_coeff();
        let chi_real = chi_r_real(&a, &rs)?;
        let mut out = Vec::with_capacity(CHECKS.len());

        out.push(self.poly(0, paving_charpoly_sum(&a, r)? - chi.clone(), scale));

        let perm = det_r_perm(&a, &rs)?;
        let diffs = [
            perm.clone() - det_r_derivative(&a, r)?,
            perm.clone() - det_r_macmahon(&a, &rs)?,
            det_r_perm(&a, &S::one())? - a.determinant(),
        ];
        let worst = diffs
            .into_iter()
            .max_by(|x, y| x.modulus().total_cmp(&y.modulus()))
            .unwrap_or_else(S::zero);
        out.push(self.scalar(1, worst, perm.modulus()));

        out.push(self.truth(2, is_real_rooted(&chi_real)?));

        let mut interlaced = true;
        for i in 0..n {
            let sub = chi_r_real(&submatrix_removed(&a, &[i])?, &rs)?;
            interlaced &= interlaces(&chi_real, &sub)?;
        }
        out.push(self.truth(3, interlaced));

        out.push(self.poly(4, thompson_residual(&a, r)?, scale));

        let mut defect = Poly::zero();
        let mut worst = 0.0;
        for k in 1..=n {
            let d = defect_k_residual(&a, r, k)?;
            if d.max_abs_coeff() >= worst {
                worst = d.max_abs_coeff();
                defect = d;
            }
        }
        out.push(self.poly(5, defect, scale));

        let ml = multilinearization_residual(&a, r)? + if self.fault == Some(6) { 1.0 } else { 0.0 };
        out.push(Outcome {
            residual: ml / scale.max(1.0),
            passed: if S::EXACT {
                ml == 0.0
            } else {
                ml / scale.max(1.0) <= self.tol
            },
        });

        let z: Vec<S> = (0..n).map(|i| S::from_usize(13 + i)).collect();
        let sides = pd_det_residual(&a, &z, &inst.pd_s)?;
        out.push(self.scalar(7, sides.difference(), sides.lhs.modulus().max(sides.rhs.modulus())));

        out.push(self.scalar(8, vere_jones_vanishing(&a, &inst.vj_s)?, 1.0));

        let g = inst.gram.map(&conv);
        let kot = koteljanskii_residual(&g, r, &inst.kot_s, &inst.kot_t)?;
        let kscale = det_r_perm(&g, &rs)?.modulus().max(g.trace().modulus().powi(n as i32));
        out.push(self.nonneg(9, kot, kscale));
        Ok(out)
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let fault = match &cfg.fault {
        Some(tag) => Some(
            CHECKS
                .iter()
                .position(|(t, _)| t == tag)
                .ok_or_else(|| CliError::Input(format!("unknown fault tag {tag}")))?,
        ),
        None => None,
    };
    let checker = Checker {
        tol: cfg.tolerance,
        fault,
    };
    let instances: Vec<Instance> = (0..INSTANCES).map(|t| Instance::generate(cfg.seed, t)).collect();
    let results: Vec<Vec<Outcome>> = instances
        .par_iter()
        .map(|inst| match cfg.mode {
            Mode::Exact => checker.run(inst, GaussRational::clone),
            Mode::Float => checker.run(inst, gauss_to_complex),
        })
        .collect::<Result<_, _>>()?;

    let mut checks = Vec::with_capacity(CHECKS.len());
    let mut rows = vec![vec![
        "tag".to_string(),
        "name".to_string(),
        "passed".to_string(),
        "instances".to_string(),
        "max_residual".to_string(),
    ]];
    let mut all_passed = true;
    for (c, (tag, name)) in CHECKS.iter().enumerate() {
        let outcomes = results.iter().map(|r| r[c]);
        let max_residual = outcomes.clone().map(|o| o.residual).fold(0.0, f64::max);
        let failure = outcomes
            .clone()
            .position(|o| !o.passed)
            .map(|t| instances[t].to_json(t as u64));
        let passed = failure.is_none();
        all_passed &= passed;
        rows.push(vec![
            tag.to_string(),
            name.to_string(),
            passed.to_string(),
            INSTANCES.to_string(),
            max_residual.to_string(),
        ]);
        checks.push(json!({
            "tag": tag,
            "name": name,
            "passed": passed,
            "instances": INSTANCES,
            "max_residual": max_residual,
            "failure": failure,
        }));
        if !passed {
            eprintln!("FAIL {tag}: {name}");
        }
    }
    Ok(Report {
        json: json!({
            "command": "verify",
            "seed": cfg.seed,
            "mode": cfg.mode_name(),
            "tolerance": cfg.tolerance,
            "checks": checks,
            "passed": all_passed,
        }),
        rows: Some(rows),
        failed: !all_passed,
    })
}
