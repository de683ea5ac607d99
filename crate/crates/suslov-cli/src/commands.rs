use crate::config::{read_tensor, BranchArg, Format, RunConfig, SweepKind, Which};
use crate::{AngleArgs, ClassifyArgs, CliError, GaloisArgs, IntegralsArgs, SimulateArgs, SolutionsArgs, SweepArgs};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use suslov::algebra::Rational;
use suslov::closed_form::{OmegaForm, OmegaSolution};
use suslov::galois::{
    default_exact_m, liouvillian_verdict, log_flags_exact, reduced_equation_exact, singular_exponents, GaloisError,
    VERIFIED_RANGE,
};
use suslov::hyper::Branch;
use suslov::integrals::{build_extra_integral, f3_evaluate, verify_pde_system, IntegralError, IntegralTable};
use suslov::integrator::{
    integrate, project_unit_gamma, uniform_samples, BodyState, Dynamics, IntegratorError, Options,
};
use suslov::meromorphic::{fixture, fixture_branch, gram_matrix, MeroError, RealBasis};
use suslov::model::{meromorphicity_class, params_from_inertia, validate_inertia, InertiaTensor, SignBranch, SuslovParams};
use suslov::scattering::{delta_psi_formula, delta_psi_numeric, formula_result, NumericOptions, ScatterError};

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>, CliError> {
    let mut s = serde_json::to_vec_pretty(v).map_err(|e| CliError::Numerical(e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>, CliError> {
    w.into_inner().map_err(|e| CliError::Numerical(e.to_string()))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Numerical(e.to_string())
}

fn require(v: Option<f64>, name: &str) -> Result<f64, CliError> {
    match v {
        Some(x) if x.is_finite() => Ok(x),
        Some(x) => Err(invalid(format!("--{name} must be finite, got {x}"))),
        None => Err(invalid(format!("--{name} is required"))),
    }
}

fn positive_d(d: f64) -> Result<f64, CliError> {
    if d > 0.0 {
        Ok(d)
    } else {
        Err(invalid(format!("d must be positive, got {d}")))
    }
}

fn sign_branch(b: Option<BranchArg>) -> SignBranch {
    match b {
        Some(BranchArg::Plus) => SignBranch::Plus,
        _ => SignBranch::Minus,
    }
}

fn integrator_error(e: IntegratorError) -> CliError {
    match e {
        IntegratorError::InvalidTolerance { .. } | IntegratorError::EmptyInterval => invalid(e.to_string()),
        _ => CliError::Numerical(e.to_string()),
    }
}

fn mero_error(e: MeroError) -> CliError {
    match e {
        MeroError::PoleHit(_) | MeroError::Degenerate => CliError::Numerical(e.to_string()),
        _ => invalid(e.to_string()),
    }
}

fn galois_error(e: GaloisError) -> CliError {
    match e {
        GaloisError::ZeroP | GaloisError::DegenerateC => invalid(e.to_string()),
        _ => CliError::Numerical(e.to_string()),
    }
}

fn scatter_error(e: ScatterError) -> CliError {
    match e {
        ScatterError::InvalidInput(_) => invalid(e.to_string()),
        _ => CliError::Numerical(e.to_string()),
    }
}

fn integer_p(p: f64) -> Result<i64, CliError> {
    if p.fract() != 0.0 || p.abs() > 1e6 {
        return Err(invalid(format!("p must be an integer, got {p}")));
    }
    Ok(p as i64)
}

/// Normalizes to `det = 1` and checks positivity.
fn checked_tensor(t: InertiaTensor) -> Result<InertiaTensor, CliError> {
    let n = t.normalized().map_err(|e| invalid(e.to_string()))?;
    let diag = validate_inertia(&n);
    if !diag.pass {
        let list: Vec<String> = diag.violations.iter().map(|v| v.to_string()).collect();
        return Err(invalid(format!("tensor violates: {}", list.join(", "))));
    }
    Ok(n)
}

fn tensor_source(path: &Option<std::path::PathBuf>, cfg: &RunConfig) -> Result<Option<InertiaTensor>, CliError> {
    match path {
        Some(p) => read_tensor(p).map(Some),
        None => Ok(cfg.tensor),
    }
}

pub fn classify(a: &ClassifyArgs, cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let raw = tensor_source(&a.tensor, cfg)?.ok_or_else(|| invalid("--tensor is required"))?;
    let t = checked_tensor(raw)?;
    let verdict = meromorphicity_class(&t);
    let mut v = serde_json::to_value(verdict).map_err(|e| CliError::Numerical(e.to_string()))?;
    v["tensor"] = serde_json::to_value(t).map_err(|e| CliError::Numerical(e.to_string()))?;
    to_json(&v)
}

pub fn simulate(a: &SimulateArgs, cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let tensor = tensor_source(&a.tensor, cfg)?;
    let p = a.p.or(cfg.p);
    let d = a.d.or(cfg.d);
    let t0 = a.t0.or(cfg.t0).unwrap_or(0.0);
    let t1 = a.t1.or(cfg.t1).unwrap_or(10.0);
    let n = a.samples.or(cfg.samples).unwrap_or(200);
    let rel = a.rel_tol.or(cfg.rel_tol).unwrap_or(1e-10);
    let abs = a.abs_tol.or(cfg.abs_tol).unwrap_or(1e-12);
    let branch = sign_branch(a.branch.or(cfg.branch));
    let format = a.format.or(cfg.format).unwrap_or(Format::Csv);
    let want_f3 = a.f3 || cfg.f3.unwrap_or(false);
    let project = a.project || cfg.project.unwrap_or(false);
    let fixture_row = a.fixture_row.or(cfg.fixture_row);
    if !t0.is_finite() || !t1.is_finite() || t0 == t1 {
        return Err(invalid(format!("need finite t0 != t1, got {t0}, {t1}")));
    }
    if n == 0 {
        return Err(invalid("--samples must be positive"));
    }

    let (dynamics, omega, special) = match (tensor, p, d) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            return Err(invalid("give either a tensor or (p, d), not both"))
        }
        (Some(t), None, None) => {
            let t = checked_tensor(t)?;
            let prm = params_from_inertia(&t, Some(branch)).map_err(|e| invalid(e.to_string()))?;
            (Dynamics::Tensor(t), OmegaSolution::new(prm, OmegaForm::General), None)
        }
        (None, Some(p), Some(d)) => {
            let d = positive_d(require(Some(d), "d")?)?;
            let p = require(Some(p), "p")?;
            if p == 0.0 {
                return Err(invalid("p must be nonzero"));
            }
            let prm = SuslovParams::special(p, d, branch);
            (Dynamics::Special { p, d }, OmegaSolution::new(prm, OmegaForm::SpecialI13Zero), Some((p, d)))
        }
        _ => return Err(invalid("give a tensor or both --p and --d")),
    };

    let x0 = match (a.x0.clone().or(cfg.x0.map(|x| x.to_vec())), fixture_row) {
        (Some(_), Some(_)) => return Err(invalid("--x0 and --fixture-row are exclusive")),
        (Some(x), None) => {
            if x.len() != 5 || x.iter().any(|v| !v.is_finite()) {
                return Err(invalid("--x0 needs five finite values"));
            }
            BodyState::new(x[0], x[1], x[2], x[3], x[4])
        }
        (None, Some(row)) => {
            let (p, d) = special.ok_or_else(|| invalid("--fixture-row needs --p and --d"))?;
            if row > 2 {
                return Err(invalid("--fixture-row must be 0, 1 or 2"));
            }
            let g = fixture(p, d, t0).map_err(mero_error)?[row];
            let (w1, w2) = omega.eval(t0);
            BodyState::new(w1, w2, g[0], g[1], g[2])
        }
        (None, None) => {
            let (w1, w2) = omega.eval(t0);
            BodyState::new(w1, w2, 0.0, 0.0, 1.0)
        }
    };

    let extra = if want_f3 {
        let (p, d) = special.ok_or_else(|| invalid("--f3 needs --p and --d"))?;
        Some(build_extra_integral(p, &d).map_err(|e: IntegralError| invalid(e.to_string()))?)
    } else {
        None
    };

    let mut opts = Options::new(rel, abs);
    if project {
        opts.projection = Some(&project_unit_gamma);
    }
    let mut traj = integrate(&dynamics, x0, t0, t1, n, &opts).map_err(integrator_error)?;
    if let Some(e) = &extra {
        traj.attach_f3(|x| f3_evaluate(e, x));
    }

    if format == Format::Json {
        return to_json(&traj);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t", "omega1", "omega2", "gamma1", "gamma2", "gamma3", "F1", "F2"];
    if traj.has_f3() {
        header.push("F3");
    }
    w.write_record(&header).map_err(csv_err)?;
    for s in &traj.samples {
        let x = s.state;
        let mut row = vec![num(s.t), num(x.omega1), num(x.omega2), num(x.gamma1), num(x.gamma2), num(x.gamma3), num(s.f1), num(s.f2)];
        if let Some(f3) = s.f3 {
            row.push(num(f3));
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    finish_csv(w)
}

fn angle_options(
    horizon: Option<f64>,
    tol: Option<f64>,
    energy_scale: Option<f64>,
    branch: Option<BranchArg>,
) -> NumericOptions {
    let mut o = NumericOptions::default();
    if let Some(h) = horizon {
        o.horizon = h;
    }
    if let Some(t) = tol {
        o.tol = t;
    }
    if let Some(a) = energy_scale {
        o.energy_scale = a;
    }
    o.branch = sign_branch(branch);
    o
}

pub fn angle(a: &AngleArgs, cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let p = require(a.p.or(cfg.p), "p")?;
    let d = positive_d(require(a.d.or(cfg.d), "d")?)?;
    let numeric = a.numeric || cfg.numeric.unwrap_or(false);
    let r = if numeric {
        let o = angle_options(
            a.horizon.or(cfg.horizon),
            a.tol.or(cfg.tol),
            a.energy_scale.or(cfg.energy_scale),
            a.branch.or(cfg.branch),
        );
        delta_psi_numeric(p, d, &o).map_err(scatter_error)?
    } else {
        formula_result(p, d)
    };
    to_json(&r)
}

fn mero_branch(b: Option<BranchArg>, p: f64) -> Branch {
    match b {
        Some(BranchArg::Plus) => Branch::Plus,
        Some(BranchArg::Minus) => Branch::Minus,
        None => fixture_branch(p),
    }
}

pub fn solutions(a: &SolutionsArgs, cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let p = require(a.p.or(cfg.p), "p")?;
    let d = positive_d(require(a.d.or(cfg.d), "d")?)?;
    let which = a.which.or(cfg.which).unwrap_or(Which::Generated);
    let t0 = a.t0.or(cfg.t0).unwrap_or(-5.0);
    let t1 = a.t1.or(cfg.t1).unwrap_or(5.0);
    let n = a.samples.or(cfg.samples).unwrap_or(100);
    let gram = a.gram || cfg.gram.unwrap_or(false);
    let branch = mero_branch(a.branch.or(cfg.branch), p);
    if !t0.is_finite() || !t1.is_finite() || n == 0 {
        return Err(invalid("need finite t0, t1 and positive --samples"));
    }
    let basis = match which {
        Which::Generated => Some(RealBasis::new(p, d, branch).map_err(mero_error)?),
        Which::Fixture => None,
    };
    let eval = |t: f64| match &basis {
        Some(b) => b.eval(t),
        None => fixture(p, d, t),
    };
    let times = uniform_samples(t0, t1, n);
    let mut rows = Vec::with_capacity(times.len());
    for &t in &times {
        rows.push((t, eval(t).map_err(mero_error)?));
    }

    if gram {
        let mut worst = (f64::NAN, [[0.0; 3]; 3], -1.0f64);
        for (t, s) in &rows {
            let g = gram_matrix(s);
            let dev = (0..3)
                .flat_map(|i| (0..3).map(move |j| (i, j)))
                .map(|(i, j)| (g[i][j] - if i == j { 1.0 } else { 0.0 }).abs())
                .fold(0.0, f64::max);
            if dev > worst.2 {
                worst = (*t, g, dev);
            }
        }
        let report = json!({
            "p": p,
            "d": d,
            "which": match which { Which::Generated => "generated", Which::Fixture => "fixture" },
            "branch": branch,
            "samples": rows.len(),
            "gram": worst.1,
            "worst_t": worst.0,
            "max_deviation": worst.2,
        });
        return to_json(&report);
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    for i in 1..=3 {
        for k in 1..=3 {
            header.push(format!("s{i}_gamma{k}"));
        }
    }
    w.write_record(&header).map_err(csv_err)?;
    for (t, s) in &rows {
        let mut row = vec![num(*t)];
        row.extend(s.iter().flatten().map(|x| num(*x)));
        w.write_record(&row).map_err(csv_err)?;
    }
    finish_csv(w)
}

pub fn integrals(a: &IntegralsArgs, cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let p = require(a.p.or(cfg.p), "p")?;
    let d = positive_d(require(a.d.or(cfg.d), "d")?)?;
    let verify = a.verify || cfg.verify.unwrap_or(false);
    let e = build_extra_integral(p, &d).map_err(|e| invalid(e.to_string()))?;
    let table = IntegralTable::from(&e);
    let mut v = serde_json::to_value(&table).map_err(|e| CliError::Numerical(e.to_string()))?;
    if verify {
        let dr = Rational::from_float(d).ok_or_else(|| invalid("d has no exact value"))?;
        let exact = build_extra_integral(p, &dr).map_err(|e| invalid(e.to_string()))?;
        v["pde_residual_zero"] = json!(verify_pde_system(&exact).iter().all(|r| r.is_zero()));
    }
    to_json(&v)
}

#[derive(Serialize)]
struct GaloisReport {
    p: i64,
    singular_points: Vec<suslov::galois::SingularPointData>,
    log_flags: Option<[bool; 4]>,
    degree_bound: Option<suslov::galois::DegreeBound>,
    verdict: suslov::galois::VerdictKind,
    extension: bool,
}

fn galois_report(p: i64, extend: bool) -> Result<GaloisReport, CliError> {
    let v = liouvillian_verdict(p, extend).map_err(galois_error)?;
    let flags = match v.log_flags {
        Some(f) => Some(f),
        None if p.abs() <= VERIFIED_RANGE || extend => Some(log_flags_exact(p).map_err(galois_error)?),
        None => None,
    };
    let eqn = reduced_equation_exact(&Rational::from_integer(p.into()), &default_exact_m()).map_err(galois_error)?;
    let mut pts = singular_exponents(&eqn).map_err(galois_error)?;
    if let Some(f) = flags {
        for pt in pts.iter_mut().filter(|s| (1..=4).contains(&s.index)) {
            pt.logarithmic = Some(f[pt.index - 1]);
        }
    }
    Ok(GaloisReport { p, singular_points: pts, log_flags: flags, degree_bound: v.degree_bound, verdict: v.verdict, extension: v.extension })
}

pub fn galois(a: &GaloisArgs, cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let p = integer_p(require(a.p.or(cfg.p), "p")?)?;
    let extend = a.extend || cfg.extend.unwrap_or(false);
    to_json(&galois_report(p, extend)?)
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(s) = std::env::var("SUSLOV_THREADS") {
        let n: usize = s.trim().parse().map_err(|_| invalid(format!("SUSLOV_THREADS must be a positive integer, got '{s}'")))?;
        if n == 0 {
            return Err(invalid("SUSLOV_THREADS must be positive"));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Numerical(e.to_string()))
}

pub fn sweep(a: &SweepArgs, cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let kind = a.kind.or(cfg.kind).unwrap_or(SweepKind::Angle);
    let ps = a.p_values.clone().or(cfg.p_values.clone()).ok_or_else(|| invalid("--p list is required"))?;
    if ps.is_empty() || ps.iter().any(|x| !x.is_finite()) {
        return Err(invalid("--p needs finite values"));
    }
    let pool = thread_pool()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    match kind {
        SweepKind::Angle => {
            let ds = a.d_values.clone().or(cfg.d_values.clone()).ok_or_else(|| invalid("--d list is required"))?;
            for &d in &ds {
                positive_d(d)?;
            }
            let numeric = a.numeric || cfg.numeric.unwrap_or(false);
            let o = angle_options(a.horizon.or(cfg.horizon), a.tol.or(cfg.tol), None, None);
            let jobs: Vec<(f64, f64)> = ps.iter().flat_map(|&p| ds.iter().map(move |&d| (p, d))).collect();
            let rows: Vec<Vec<String>> = pool.install(|| {
                jobs.par_iter()
                    .map(|&(p, d)| {
                        let f = delta_psi_formula(p, d);
                        let (nv, diff, status) = if numeric {
                            match delta_psi_numeric(p, d, &o) {
                                Ok(r) => (num(r.delta_psi_rad), num((r.delta_psi_rad - f).abs()), "ok".to_string()),
                                Err(e) => (String::new(), String::new(), e.to_string()),
                            }
                        } else {
                            (String::new(), String::new(), "ok".to_string())
                        };
                        vec![num(p), num(d), num(f), nv, diff, status]
                    })
                    .collect()
            });
            w.write_record(["p", "d", "formula_rad", "numeric_rad", "abs_diff", "status"]).map_err(csv_err)?;
            for r in rows {
                w.write_record(&r).map_err(csv_err)?;
            }
        }
        SweepKind::Galois => {
            let ints = ps.iter().map(|&p| integer_p(p)).collect::<Result<Vec<_>, _>>()?;
            let extend = a.extend || cfg.extend.unwrap_or(false);
            let rows: Vec<Vec<String>> = pool.install(|| {
                ints.par_iter()
                    .map(|&p| match galois_report(p, extend) {
                        Ok(r) => {
                            let flag = |k: usize| r.log_flags.map(|f| f[k].to_string()).unwrap_or_default();
                            let cands = r
                                .degree_bound
                                .as_ref()
                                .map(|b| b.candidates.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";"))
                                .unwrap_or_default();
                            let verdict = serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                            vec![p.to_string(), verdict, flag(0), flag(1), flag(2), flag(3), cands, "ok".into()]
                        }
                        Err(e) => {
                            let mut v = vec![p.to_string()];
                            v.extend(std::iter::repeat_n(String::new(), 6));
                            v.push(e.to_string());
                            v
                        }
                    })
                    .collect()
            });
            w.write_record(["p", "verdict", "log_s1", "log_s2", "log_s3", "log_s4", "degree_candidates", "status"])
                .map_err(csv_err)?;
            for r in rows {
                w.write_record(&r).map_err(csv_err)?;
            }
        }
    }
    finish_csv(w)
}
