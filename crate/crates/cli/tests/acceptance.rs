//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;

use rpaving_core::barrier::{
    bivariate_counterexample, closed_form_bound, statement_counterexample_search, trace_inequality, SearchOutcome,
};
use rpaving_core::linalg::{harmonic_projection, submatrix_removed, HermitianMatrix, IndexMultiset, Matrix};
use rpaving_core::paving::paving_charpoly_sum;
use rpaving_core::poly::{interlaces, is_real_rooted, max_root};
use rpaving_core::random::{complex_hermitian, general_rational, gram, real_symmetric, to_gauss, trial_rng};
use rpaving_core::rdet::{
    chi_r, chi_r_real, defect_k_residual, det_r_derivative, det_r_macmahon, det_r_perm, koteljanskii_residual,
    multilinearization_residual, pd_det_residual, thompson_residual, vere_jones_vanishing,
};
use rpaving_core::scalar::{gauss_to_complex, rational, GaussRational, Ring, Scalar};

const SEED: u64 = 20_240_601;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

/// Criterion outcome: PASS, FAIL, or SOFT-FAIL (reported, not fatal).
enum Verdict {
    Pass(String),
    Fail(String),
    Soft(String),
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || {
        format!("took {:.1} s, limit {} s", t.as_secs_f64(), limit.as_secs())
    })
}

fn e(err: rpaving_core::Error) -> String {
    err.to_string()
}

/// 50 Hermitian matrices, n in {2, 3, 4}, entries in [-2, 2]: real
/// symmetric for even trials, complex for odd ones.
fn hermitian_set() -> Vec<Matrix<GaussRational>> {
    (0..50u64)
        .map(|t| {
            let mut rng = trial_rng(SEED, t);
            let n = 2 + (t % 3) as usize;
            if t % 2 == 0 {
                to_gauss(&real_symmetric(&mut rng, n))
            } else {
                complex_hermitian(&mut rng, n)
            }
        })
        .collect()
}

fn criterion_1(set: &[Matrix<GaussRational>]) -> Check {
    let start = Instant::now();
    for (t, a) in set.iter().enumerate() {
        for r in [2, 3] {
            let sum = paving_charpoly_sum(a, r).map_err(e)?;
            let chi = chi_r(a, &GaussRational::from_usize(r)).map_err(e)?;
            ensure(sum == chi, || {
                format!("matrix {t}, r = {r}: paving sum differs from chi_r")
            })?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{} matrices x r in {{2, 3}} exact", set.len()))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    for t in 0..50u64 {
        let mut rng = trial_rng(SEED + 1, t);
        let n = 1 + (t % 4) as usize;
        let a = general_rational(&mut rng, n);
        for r in [2usize, 3] {
            let rq = BigRational::from_usize(r);
            let perm = det_r_perm(&a, &rq).map_err(e)?;
            let der = det_r_derivative(&a, r).map_err(e)?;
            let mac = det_r_macmahon(&a, &rq).map_err(e)?;
            ensure(perm == der && perm == mac, || {
                format!("matrix {t}, r = {r}: perm {perm}, derivative {der}, macmahon {mac}")
            })?;
        }
        let one = det_r_perm(&a, &BigRational::one()).map_err(e)?;
        ensure(one == a.determinant(), || format!("matrix {t}: det_1 differs from det"))?;
    }
    within(start, Duration::from_secs(30))?;
    Ok("50 matrices, n <= 4, r in {2, 3}, plus det_1 = det".into())
}

fn criterion_3(set: &[Matrix<GaussRational>]) -> Check {
    for (t, a) in set.iter().enumerate() {
        for r in [2, 3] {
            let rs = GaussRational::from_usize(r);
            let chi = chi_r_real(a, &rs).map_err(e)?;
            ensure(is_real_rooted(&chi).map_err(e)?, || {
                format!("matrix {t}, r = {r}: not real-rooted")
            })?;
            for i in 0..a.n() {
                let sub = chi_r_real(&submatrix_removed(a, &[i]).map_err(e)?, &rs).map_err(e)?;
                ensure(interlaces(&chi, &sub).map_err(e)?, || {
                    format!("matrix {t}, r = {r}, i = {i}: no interlacing")
                })?;
            }
        }
    }
    Ok("real-rooted and Cauchy-interlacing on all 100 cases".into())
}

fn criterion_4(set: &[Matrix<GaussRational>]) -> Check {
    let mut worst_pd = 0.0f64;
    for (t, a) in set.iter().enumerate() {
        let n = a.n();
        for r in [2, 3] {
            ensure(thompson_residual(a, r).map_err(e)?.is_zero_poly(), || {
                format!("matrix {t}, r = {r}: Thompson residual nonzero")
            })?;
            for k in 1..=n {
                ensure(defect_k_residual(a, r, k).map_err(e)?.is_zero_poly(), || {
                    format!("matrix {t}, r = {r}, k = {k}: defect-k residual nonzero")
                })?;
            }
            let ml = multilinearization_residual(a, r).map_err(e)?;
            ensure(ml == 0.0, || {
                format!("matrix {t}, r = {r}: multilinearization residual {ml}")
            })?;
        }
        let mut rng = trial_rng(SEED + 2, t as u64);
        let af = a.map(gauss_to_complex);
        for p in 0..5 {
            let z: Vec<BigRational> = (0..n).map(|_| rational(rng.random_range(12..=40), 4)).collect();
            let mut s = IndexMultiset::new();
            for i in 0..n {
                s.add(i, rng.random_range(0..=2));
            }
            let zg: Vec<GaussRational> = z.iter().map(GaussRational::from_rational).collect();
            let exact = pd_det_residual(a, &zg, &s).map_err(e)?;
            ensure(exact.lhs == exact.rhs, || {
                format!("matrix {t}, point {p}: PDdet sides differ")
            })?;
            let zf: Vec<Complex64> = z.iter().map(Complex64::from_rational).collect();
            let rel = pd_det_residual(&af, &zf, &s).map_err(e)?.relative();
            worst_pd = worst_pd.max(rel);
            ensure(rel < 1e-8, || {
                format!("matrix {t}, point {p}: float PDdet residual {rel:e}")
            })?;
        }
        let mut vj = IndexMultiset::new();
        vj.add(rng.random_range(0..n), 3);
        vj.add(rng.random_range(0..n), rng.random_range(0..=2));
        ensure(vere_jones_vanishing(a, &vj).map_err(e)?.is_zero(), || {
            format!("matrix {t}: Vere-Jones value nonzero")
        })?;
    }
    Ok(format!(
        "all residuals exactly zero; float PDdet max relative residual {worst_pd:.1e}"
    ))
}

fn criterion_5() -> Check {
    let four = closed_form_bound(0.5, 4).map_err(e)?;
    let target = (3.0 + 7f64.sqrt()).powi(2) / 32.0;
    ensure((four - target).abs() <= 1e-12, || {
        format!("r = 4, delta = 1/2: {four} vs {target}")
    })?;
    let zero = closed_form_bound(1e-20, 2).map_err(e)?;
    ensure((zero - 0.75).abs() <= 1e-9, || format!("r = 2, delta -> 0: {zero}"))?;
    let exact_zero = closed_form_bound(0.0, 2).map_err(e)?;
    ensure((exact_zero - 0.75).abs() <= 1e-9, || {
        format!("r = 2, delta = 0: {exact_zero}")
    })?;
    let quarter = closed_form_bound(0.25, 2).map_err(e)?;
    ensure((quarter - 1.0).abs() <= 1e-12, || {
        format!("r = 2, delta = 1/4: {quarter}")
    })?;
    Ok(format!("{four:.12}, {zero:.12}, {quarter:.12}"))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut cases = 0;
    for (n, k) in [(4, 1), (8, 1), (8, 2), (6, 3)] {
        let p = harmonic_projection(n, k).map_err(e)?;
        let delta = k as f64 / n as f64;
        for r in 2..=4usize {
            if delta > ((r as f64 - 1.0) / r as f64).powi(2) {
                continue;
            }
            let chi = match &p {
                HermitianMatrix::Exact(m) => chi_r_real(m, &GaussRational::from_usize(r)),
                HermitianMatrix::Float(m) => chi_r_real(m, &Complex64::from_usize(r)),
            };
            let root = max_root(&chi.map_err(e)?).map_err(e)?;
            let bound = closed_form_bound(delta, r).map_err(e)?;
            ensure(root <= bound + 1e-8, || {
                format!("(n, k) = ({n}, {k}), r = {r}: {root} > {bound}")
            })?;
            cases += 1;
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{cases} projection/r cases certified"))
}

/// The deterministic parts must hold; the statement search soft-fails when
/// it exhausts its budget.
fn criterion_7() -> Verdict {
    let hard = || -> Check {
        let b = bivariate_counterexample().map_err(e)?;
        ensure(b.phi_x == rational(3, 4) && b.phi_y == rational(5, 16), || {
            format!("potentials {} and {}", b.phi_x, b.phi_y)
        })?;
        ensure(b.delta == rational(4, 3), || format!("delta {}", b.delta))?;
        ensure(b.violation(), || {
            format!("no violation: shifted {} vs {}", b.shifted, b.phi_y)
        })?;
        let j = Matrix::from_fn(4, |_, _| BigRational::one());
        for r in 1..=3 {
            ensure(
                is_real_rooted(&chi_r_real(&j, &BigRational::from_usize(r)).map_err(e)?).map_err(e)?,
                || format!("chi_{r}[J_4] not real-rooted"),
            )?;
        }
        ensure(
            !is_real_rooted(&chi_r_real(&j, &rational(3, 2)).map_err(e)?).map_err(e)?,
            || "chi_1.5[J_4] reported real-rooted".into(),
        )?;
        Ok(format!(
            "bivariate shift {} > {}; J_4 behaves as expected",
            b.shifted, b.phi_y
        ))
    };
    let fixed = match hard() {
        Ok(m) => m,
        Err(m) => return Verdict::Fail(m),
    };
    match statement_counterexample_search(4, 100_000, 1) {
        Ok(SearchOutcome::Witness(w)) => match w.verify() {
            Ok(true) => Verdict::Pass(format!("{fixed}; statement witness at trial {}", w.trial)),
            Ok(false) => Verdict::Fail("statement witness failed re-verification".into()),
            Err(err) => Verdict::Fail(err.to_string()),
        },
        Ok(out @ SearchOutcome::Exhausted { .. }) => {
            Verdict::Soft(format!("{fixed}; statement search {}", out.to_json()))
        }
        Err(err) => Verdict::Fail(err.to_string()),
    }
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let mut worst = f64::INFINITY;
    for k in [3usize, 4] {
        let mut rng = trial_rng(SEED + 3, k as u64);
        for s in 0..100_000 {
            let lambda: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..1.0)).collect();
            let x: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..1.0)).collect();
            let v = trace_inequality(k, &lambda, &x).map_err(e)?;
            worst = worst.min(v);
            ensure(v >= -1e-12, || format!("k = {k}, sample {s}: residual {v:e}"))?;
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("2 x 10^5 samples, minimum residual {worst:.3e}"))
}

fn criterion_9() -> Check {
    let mut rng = trial_rng(SEED + 4, 0);
    let subset =
        |rng: &mut rpaving_core::random::TestRng| -> Vec<usize> { (0..4).filter(|_| rng.random_bool(0.5)).collect() };
    for t in 0..1000 {
        let g = gram(&mut rng, 4, 4);
        let (s, u) = (subset(&mut rng), subset(&mut rng));
        let v = koteljanskii_residual(&g, 2, &s, &u).map_err(e)?;
        ensure(v >= rational(0, 1), || {
            format!("matrix {t}, S = {s:?}, T = {u:?}: residual {v}")
        })?;
    }
    Ok("1000 Gram matrices, exact residuals nonnegative".into())
}

fn run_verify(threads: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_rpaving"))
        .args(["verify", "--seed", "7", "--threads", threads])
        .output()
        .map_err(|err| err.to_string())?;
    ensure(out.status.success(), || format!("verify exited with {}", out.status))?;
    Ok(out.stdout)
}

fn criterion_10() -> Check {
    let first = run_verify("1")?;
    ensure(first == run_verify("1")?, || "two identical runs differ".into())?;
    ensure(first == run_verify("4")?, || {
        "--threads 1 and --threads 4 differ".into()
    })?;
    Ok(format!("{} identical bytes across runs and thread counts", first.len()))
}

fn main() -> ExitCode {
    let set = hermitian_set();
    let criteria: Vec<Criterion> = vec![
        ("central identity", Box::new(|| criterion_1(&set).into())),
        ("three-method det_r agreement", Box::new(|| criterion_2().into())),
        ("real-rootedness and interlacing", Box::new(|| criterion_3(&set).into())),
        ("identity residuals", Box::new(|| criterion_4(&set).into())),
        ("closed-form constants", Box::new(|| criterion_5().into())),
        ("bound certification", Box::new(|| criterion_6().into())),
        ("counterexamples", Box::new(criterion_7)),
        ("trace inequalities", Box::new(|| criterion_8().into())),
        ("Koteljanskii analogue", Box::new(|| criterion_9().into())),
        ("determinism", Box::new(|| criterion_10().into())),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, msg) = match verdict {
            Verdict::Pass(m) => ("PASS", m),
            Verdict::Soft(m) => ("SOFT-FAIL", m),
            Verdict::Fail(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("{tag} criterion {}: {name} ({secs:.2} s): {msg}", i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

impl From<Check> for Verdict {
    fn from(c: Check) -> Self {
        match c {
            Ok(m) => Verdict::Pass(m),
            Err(m) => Verdict::Fail(m),
        }
    }
}
