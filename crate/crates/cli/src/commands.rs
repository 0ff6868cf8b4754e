use std::fs;

use num_complex::Complex64;
use serde_json::{json, Value};

use rpaving_core::barrier::{
    closed_form_bound, closed_form_report, conjectured_bound, root_bound, statement_counterexample_search,
    SearchOutcome,
};
use rpaving_core::linalg::{HermitianMatrix, Matrix};
use rpaving_core::paving::{
    best_paving_exhaustive, best_paving_greedy, paving_charpoly_sum, paving_count, MAX_PAVINGS,
};
use rpaving_core::poly::{is_real_rooted, max_root, real_roots, Poly};
use rpaving_core::rdet::{
    chi_r, chi_r_real, det_r_derivative, det_r_macmahon, det_r_perm, RDetMethod, MAX_DERIVATIVE_N, MAX_DERIVATIVE_R,
    MAX_MACMAHON_N, MAX_PERM_N,
};
use rpaving_core::scalar::{format_rational, GaussRational, Scalar};
use rpaving_core::stability::{paving_measure, paving_measure_by_differentiation, sr_measure_from_matrix};

use crate::config::{CliError, Report, RunConfig, SearchKind};

pub const DEFAULT_STATEMENT_BUDGET: u64 = 100_000;
pub const DEFAULT_STABILITY_TRIALS: u64 = 10_000;

/// Canonical text form of a scalar for reports.
pub trait Render: Scalar {
    fn render(&self) -> String;
}

impl Render for GaussRational {
    fn render(&self) -> String {
        if self.im == num_rational::BigRational::from_integer(0.into()) {
            format_rational(&self.re)
        } else {
            format!("{}+{}i", format_rational(&self.re), format_rational(&self.im)).replace("+-", "-")
        }
    }
}

impl Render for Complex64 {
    fn render(&self) -> String {
        if self.im == 0.0 {
            format!("{}", self.re)
        } else {
            format!("{}+{}i", self.re, self.im).replace("+-", "-")
        }
    }
}

/// Equality in exact mode, relative closeness within `tol` in float mode.
pub fn close<S: Scalar>(a: &S, b: &S, tol: f64) -> bool {
    if S::EXACT {
        a == b
    } else {
        (a.clone() - b.clone()).modulus() <= tol * a.modulus().max(b.modulus()).max(1.0)
    }
}

pub fn poly_close<S: Scalar>(p: &Poly<S>, q: &Poly<S>, tol: f64) -> bool {
    let len = p.coeffs().len().max(q.coeffs().len());
    (0..len).all(|k| close(&p.coeff(k), &q.coeff(k), tol))
}

pub fn coeff_strings<S: Render>(p: &Poly<S>) -> Vec<String> {
    p.coeffs().iter().map(Render::render).collect()
}

/// Calls `$body` with `$a` bound to the matrix in whichever arithmetic mode
/// it was loaded.
macro_rules! with_matrix {
    ($h:expr, $a:ident => $body:expr) => {
        match $h {
            HermitianMatrix::Exact(m) => {
                let $a = &m;
                $body
            }
            HermitianMatrix::Float(m) => {
                let $a = &m;
                $body
            }
        }
    };
}

fn load_matrix(cfg: &RunConfig) -> Result<HermitianMatrix, CliError> {
    let path = cfg
        .matrix
        .as_ref()
        .ok_or_else(|| CliError::Input("this command needs --matrix".into()))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: invalid JSON: {e}", path.display())))?;
    Ok(HermitianMatrix::from_json(&v)?.with_mode(cfg.mode))
}

fn header(cfg: &RunConfig, command: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("mode".into(), json!(cfg.mode_name()));
    m.insert("r".into(), json!(format_rational(&cfg.r)));
    m
}

pub fn detr(cfg: &RunConfig) -> Result<Report, CliError> {
    let h = load_matrix(cfg)?;
    with_matrix!(h, a => detr_with(a, cfg))
}

fn detr_with<S: Render>(a: &Matrix<S>, cfg: &RunConfig) -> Result<Report, CliError> {
    let n = a.n();
    let r = S::from_rational(&cfg.r);
    let int_r = cfg.r.is_integer().then(|| cfg.r_integer()).transpose()?;
    let mut computed: Vec<(RDetMethod, S)> = Vec::new();
    let mut skipped = Vec::new();
    let mut attempt =
        |method: RDetMethod, allowed: Result<(), String>, f: &dyn Fn() -> rpaving_core::Result<S>| match allowed {
            Ok(()) => f().map(|v| computed.push((method, v))),
            Err(reason) => {
                skipped.push(json!({"method": method.name(), "reason": reason}));
                Ok(())
            }
        };
    let within = |ok: bool, why: String| if ok { Ok(()) } else { Err(why) };
    let perm_ok = within(n <= MAX_PERM_N, format!("n > {MAX_PERM_N}"));
    let deriv_ok = match int_r {
        Some(k) => within(
            n <= MAX_DERIVATIVE_N && k <= MAX_DERIVATIVE_R,
            format!("needs n <= {MAX_DERIVATIVE_N} and r <= {MAX_DERIVATIVE_R}"),
        ),
        None => Err("needs an integer r".into()),
    };
    let mac_ok = within(n <= MAX_MACMAHON_N, format!("n > {MAX_MACMAHON_N}"));
    let primary_macmahon = int_r.is_none();
    if primary_macmahon {
        attempt(RDetMethod::Macmahon, mac_ok, &|| det_r_macmahon(a, &r))?;
        attempt(RDetMethod::PermCycle, perm_ok, &|| det_r_perm(a, &r))?;
    } else {
        attempt(RDetMethod::PermCycle, perm_ok, &|| det_r_perm(a, &r))?;
        attempt(RDetMethod::Derivative, deriv_ok, &|| {
            det_r_derivative(a, int_r.unwrap_or(1))
        })?;
        attempt(RDetMethod::Macmahon, mac_ok, &|| det_r_macmahon(a, &r))?;
    }
    let Some((method, value)) = computed.first().cloned() else {
        return Err(CliError::Limit(format!("no det_r method can handle n = {n}")));
    };
    let agreement = computed.iter().all(|(_, v)| close(v, &value, cfg.tolerance));
    let mut m = header(cfg, "detr");
    m.insert("n".into(), json!(n));
    m.insert("value".into(), json!(value.render()));
    m.insert("method".into(), json!(method.name()));
    m.insert("agreement".into(), json!(agreement));
    m.insert(
        "methods".into(),
        json!(computed
            .iter()
            .map(|(k, v)| json!({"method": k.name(), "value": v.render()}))
            .collect::<Vec<_>>()),
    );
    m.insert("skipped".into(), json!(skipped));
    Ok(Report {
        json: Value::Object(m),
        rows: None,
        failed: !agreement,
    })
}

pub fn chir(cfg: &RunConfig) -> Result<Report, CliError> {
    let h = load_matrix(cfg)?;
    with_matrix!(h, a => chir_with(a, cfg))
}

fn chir_with<S: Render>(a: &Matrix<S>, cfg: &RunConfig) -> Result<Report, CliError> {
    let r = S::from_rational(&cfg.r);
    let chi = chi_r(a, &r)?;
    let real = chi_r_real(a, &r)?;
    let rooted = is_real_rooted(&real)?;
    let roots: Vec<Value> = real_roots(&real)?
        .into_iter()
        .map(|(v, k)| json!({"value": v, "multiplicity": k}))
        .collect();
    let mut m = header(cfg, "chir");
    m.insert("n".into(), json!(a.n()));
    m.insert("coeffs".into(), json!(coeff_strings(&chi)));
    m.insert("real_rooted".into(), json!(rooted));
    m.insert("real_roots".into(), json!(roots));
    m.insert(
        "max_root".into(),
        if rooted { json!(max_root(&real)?) } else { Value::Null },
    );
    Ok(Report::new(Value::Object(m)))
}

pub fn pavings(cfg: &RunConfig) -> Result<Report, CliError> {
    let h = load_matrix(cfg)?;
    with_matrix!(h, a => pavings_with(a, cfg))
}

fn pavings_with<S: Render>(a: &Matrix<S>, cfg: &RunConfig) -> Result<Report, CliError> {
    let r = cfg.r_integer()?;
    let count = paving_count(a.n(), r, MAX_PAVINGS)?;
    let sum = paving_charpoly_sum(a, r)?;
    let chi = chi_r(a, &S::from_usize(r))?;
    let holds = poly_close(&sum, &chi, cfg.tolerance);
    let mut m = header(cfg, "pavings");
    m.insert("n".into(), json!(a.n()));
    m.insert("count".into(), json!(count.to_string()));
    m.insert("paving_sum".into(), json!(coeff_strings(&sum)));
    m.insert("chi_r".into(), json!(coeff_strings(&chi)));
    m.insert("identity_holds".into(), json!(holds));
    m.insert("best".into(), best_paving(a, r, cfg)?);
    Ok(Report {
        json: Value::Object(m),
        rows: None,
        failed: !holds,
    })
}

fn best_paving<S: Scalar>(a: &Matrix<S>, r: usize, cfg: &RunConfig) -> Result<Value, CliError> {
    let mut rep = if cfg.greedy {
        best_paving_greedy(a, r, cfg.seed)?
    } else {
        best_paving_exhaustive(a, r)?
    };
    if cfg.certify && (2..=4).contains(&r) {
        rep.bound_used = Some(root_bound(a, r)?);
    }
    let mut v = rep.to_json();
    v["search"] = json!(if cfg.greedy { "greedy" } else { "exhaustive" });
    Ok(v)
}

pub fn bound(cfg: &RunConfig) -> Result<Report, CliError> {
    let r = cfg.r_integer()?;
    if let Some(delta) = cfg.delta {
        if !(0.0..=1.0).contains(&delta) {
            return Err(CliError::Input(format!("delta must lie in [0, 1], got {delta}")));
        }
        let threshold = ((r as f64 - 1.0) / r as f64).powi(2);
        if delta > threshold {
            eprintln!("warning: delta {delta} exceeds {threshold}; the bound clamps to 1");
        }
        let rep = closed_form_report(delta, r)?;
        let mut v = rep.to_json();
        v["command"] = json!("bound");
        v["conjectured"] = conjectured_bound(delta, r)?.to_json();
        return Ok(Report::new(v));
    }
    let h = load_matrix(cfg)?;
    with_matrix!(h, a => bound_with(a, r, cfg))
}

fn bound_with<S: Scalar>(a: &Matrix<S>, r: usize, cfg: &RunConfig) -> Result<Report, CliError> {
    let mut rep = root_bound(a, r)?;
    if cfg.certify && rep.certified_max_root.is_none() {
        rep.certified_max_root = Some(max_root(&chi_r_real(a, &S::from_usize(r))?)?);
    }
    let mut v = rep.to_json();
    v["command"] = json!("bound");
    v["mode"] = json!(cfg.mode_name());
    if let Some(delta) = rep.delta.filter(|d| (0.0..=1.0).contains(d)) {
        v["closed_form"] = json!(closed_form_bound(delta, r)?);
        v["conjectured"] = conjectured_bound(delta, r)?.to_json();
    }
    let failed = !rep.is_consistent();
    Ok(Report {
        json: v,
        rows: None,
        failed,
    })
}

pub fn search(cfg: &RunConfig, kind: SearchKind) -> Result<Report, CliError> {
    match kind {
        SearchKind::Statement => {
            let n = cfg.n.unwrap_or(4);
            let budget = cfg.budget.unwrap_or(DEFAULT_STATEMENT_BUDGET);
            let outcome = statement_counterexample_search(n, budget, cfg.seed)?;
            if let SearchOutcome::Witness(w) = &outcome {
                if !w.verify()? {
                    return Err(CliError::Check("witness failed re-verification".into()));
                }
            }
            let mut v = outcome.to_json();
            v["command"] = json!("search");
            v["kind"] = json!("statement");
            v["n"] = json!(n);
            v["seed"] = json!(cfg.seed);
            v["budget"] = json!(budget);
            Ok(Report::new(v))
        }
        SearchKind::Paving => {
            let h = load_matrix(cfg)?;
            let r = cfg.r_integer()?;
            let best = with_matrix!(h, a => best_paving(a, r, cfg))?;
            let mut m = header(cfg, "search");
            m.insert("kind".into(), json!("paving"));
            m.insert("seed".into(), json!(cfg.seed));
            m.insert("best".into(), best);
            Ok(Report::new(Value::Object(m)))
        }
    }
}

pub fn stability(cfg: &RunConfig) -> Result<Report, CliError> {
    let r = cfg.r_integer()?;
    if cfg.matrix.is_some() {
        let h = load_matrix(cfg)?;
        let trials = cfg.budget.unwrap_or(DEFAULT_STABILITY_TRIALS);
        let sr = with_matrix!(h, a => sr_measure_from_matrix(a, r, trials, cfg.seed))?;
        let mut v = sr.to_json();
        v["command"] = json!("stability");
        v["r"] = json!(r);
        v["trials"] = json!(trials);
        return Ok(Report::new(v));
    }
    let n = cfg
        .n
        .ok_or_else(|| CliError::Input("stability needs --matrix or --n".into()))?;
    let measure = paving_measure(n, r)?;
    let matches = measure.generating_polynomial() == paving_measure_by_differentiation(n, r)?;
    let mut v = measure.to_json();
    v["command"] = json!("stability");
    v["r"] = json!(r);
    v["kind"] = json!("paving-measure");
    v["differential_formula_matches"] = json!(matches);
    Ok(Report {
        json: v,
        rows: None,
        failed: !matches,
    })
}
