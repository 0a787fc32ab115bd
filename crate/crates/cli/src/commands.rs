use dirichlet_moments::config::Tolerances;
use dirichlet_moments::hypergeo::{
    appell_f4, f4_via_moments, lauricella_fb, lauricella_poly, r_function, s_function, LauricellaMethod,
    LauricellaSpec, RMethod, SMethod, SeriesControl,
};
use dirichlet_moments::moments::{dirichlet_moment_auto, dirichlet_moment_report, MomentStrategy};
use dirichlet_moments::multiindex::{enumerate_indices, IndexConstraint};
use dirichlet_moments::simplex::oracle_moment;
use dirichlet_moments::verify::{run_suites, Suite};
use dirichlet_moments::{DirichletParams, Error, Estimate, IntegrationControl, MultiIndex};
use serde_json::Value;

use crate::input::{finite, multi_index, params, read_knots, CliError, CliResult};
use crate::output::{num, Report};
use crate::{
    F4Args, F4MethodArg, FbArgs, LauricellaArgs, LauricellaMethodArg, MomentArgs, RArgs, RMethodArg, SArgs,
    SMethodArg, StrategyArg, VerifyArgs,
};

fn floats(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

pub fn moment(a: &MomentArgs) -> CliResult<Report> {
    let knots = read_knots(&a.knots)?;
    let p = params(&a.params, knots.len())?;
    let betas: Vec<MultiIndex> = match (&a.beta, a.max_order) {
        (Some(b), _) => vec![multi_index("beta", b)?],
        (None, Some(m)) => (0..=m)
            .flat_map(|r| enumerate_indices(IndexConstraint::Order(r), knots.dim()))
            .collect(),
        (None, None) => return Err(CliError::Usage("give --beta or --max-order".into())),
    };
    let tol = Tolerances::default();
    let mut report = Report::new("moment");
    report
        .set("knots", knots.len())
        .set("dimension", knots.dim())
        .set("params", floats(p.b()));
    for beta in &betas {
        let r = match a.strategy {
            StrategyArg::Auto => dirichlet_moment_auto(&p, &knots, beta)?,
            StrategyArg::Expansion => dirichlet_moment_report(&p, &knots, beta, MomentStrategy::Expansion)?,
            StrategyArg::CoalescentKnots => {
                dirichlet_moment_report(&p, &knots, beta, MomentStrategy::CoalescentKnots)?
            }
            StrategyArg::Recurrence54 => dirichlet_moment_report(&p, &knots, beta, MomentStrategy::Recurrence)?,
            StrategyArg::Elevation => dirichlet_moment_report(&p, &knots, beta, MomentStrategy::Elevation)?,
        };
        let mut fields = vec![
            ("beta", Value::from(beta.to_string())),
            ("value", num(r.value)),
            ("strategy", r.strategy.name().into()),
            ("table-size", r.table_size.into()),
        ];
        if a.check {
            let oracle = oracle_moment(&p, &knots, beta)?;
            let agree = tol.close(r.value, oracle);
            report.ok &= agree;
            fields.push(("expansion", num(oracle)));
            fields.push(("difference", num((r.value - oracle).abs())));
            fields.push(("agree", agree.into()));
        }
        report.row(fields);
    }
    Ok(report)
}

pub fn lauricella(a: &LauricellaArgs, ctrl: &SeriesControl) -> CliResult<Report> {
    let j = multi_index("j", &a.j)?;
    finite("beta", &a.beta)?;
    finite("x", &a.x)?;
    finite("gamma", &[a.gamma])?;
    let spec = LauricellaSpec::polynomial(j.clone(), a.beta.clone(), a.gamma, a.x.clone())?;
    let methods: &[(LauricellaMethod, &str)] = match a.method {
        LauricellaMethodArg::Series => &[(LauricellaMethod::Series, "series")],
        LauricellaMethodArg::Moments => &[(LauricellaMethod::Moments, "moments")],
        LauricellaMethodArg::Recurrence => &[(LauricellaMethod::Recurrence, "recurrence")],
        LauricellaMethodArg::All => &[
            (LauricellaMethod::Series, "series"),
            (LauricellaMethod::Moments, "moments"),
            (LauricellaMethod::Recurrence, "recurrence"),
        ],
    };
    let mut report = Report::new("lauricella");
    report
        .set("j", j.to_string())
        .set("beta", floats(&a.beta))
        .set("gamma", num(a.gamma))
        .set("x", floats(&a.x));
    let mut values = Vec::new();
    for &(m, name) in methods {
        let v = lauricella_poly(&spec, m, ctrl)?;
        values.push(v);
        report.row(vec![("method", name.into()), ("value", num(v))]);
    }
    if values.len() > 1 {
        let tol = Tolerances::default();
        let agree = values.iter().all(|&v| tol.close(v, values[0]));
        report.set("agree", agree);
        report.ok &= agree;
    }
    Ok(report)
}

fn estimate_row(report: &mut Report, method: &str, e: &Estimate) {
    report.row(vec![
        ("method", method.into()),
        ("value", num(e.value)),
        ("error-estimate", num(e.error)),
        ("effort", e.effort.into()),
    ]);
}

pub fn r_hyper(a: &RArgs, series: &SeriesControl, integration: &IntegrationControl) -> CliResult<Report> {
    finite("params", &a.params)?;
    finite("z", &a.z)?;
    finite("a", &[a.a])?;
    let p = DirichletParams::new(a.params.clone())?;
    let (method, name) = match a.method {
        RMethodArg::Quadrature => (RMethod::Quadrature, "quadrature"),
        RMethodArg::Series => (RMethod::Series, "series"),
    };
    let e = r_function(a.a, &p, &a.z, method, series, integration)?;
    let mut report = Report::new("r-hyper");
    report.set("a", num(a.a)).set("params", floats(p.b())).set("z", floats(&a.z));
    estimate_row(&mut report, name, &e);
    Ok(report)
}

pub fn s_hyper(a: &SArgs, series: &SeriesControl) -> CliResult<Report> {
    finite("params", &a.params)?;
    finite("z", &a.z)?;
    let p = DirichletParams::new(a.params.clone())?;
    let (method, name) = match a.method {
        SMethodArg::Series => (SMethod::Series, "series"),
        SMethodArg::DividedDifference => (SMethod::DividedDifference, "divided-difference"),
    };
    let e = s_function(&p, &a.z, method, series)?;
    let mut report = Report::new("s-hyper");
    report.set("params", floats(p.b())).set("z", floats(&a.z));
    estimate_row(&mut report, name, &e);
    Ok(report)
}

pub fn f4(a: &F4Args, series: &SeriesControl, integration: &IntegrationControl) -> CliResult<Report> {
    finite("parameters", &[a.alpha, a.beta, a.gamma, a.delta, a.x1, a.x2])?;
    let (y1, y2) = (a.x1 * (1.0 - a.x2), a.x2 * (1.0 - a.x1));
    let mut report = Report::new("f4");
    report
        .set("alpha", num(a.alpha))
        .set("beta", num(a.beta))
        .set("gamma", num(a.gamma))
        .set("delta", num(a.delta))
        .set("x", floats(&[a.x1, a.x2]))
        .set("arguments", floats(&[y1, y2]));
    let mut values = Vec::new();
    if matches!(a.method, F4MethodArg::Series | F4MethodArg::Both) {
        let v = appell_f4(a.alpha, a.beta, a.gamma, a.delta, y1, y2, series)?;
        values.push(v);
        report.row(vec![("method", "series".into()), ("value", num(v))]);
    }
    if matches!(a.method, F4MethodArg::Moments | F4MethodArg::Both) {
        let e = f4_via_moments(a.alpha, a.beta, a.gamma, a.delta, a.x1, a.x2, integration)?;
        values.push(e.value);
        estimate_row(&mut report, "moments", &e);
    }
    if values.len() > 1 {
        let agree = (values[0] - values[1]).abs() <= 1e-7 * values[0].abs().max(1.0);
        report.set("agree", agree);
        report.ok &= agree;
    }
    Ok(report)
}

pub fn fb(a: &FbArgs, series: &SeriesControl) -> CliResult<Report> {
    finite("alpha", &a.alpha)?;
    finite("beta", &a.beta)?;
    finite("x", &a.x)?;
    finite("gamma", &[a.gamma])?;
    let spec = LauricellaSpec::series(a.alpha.clone(), a.beta.clone(), a.gamma, a.x.clone())?;
    let v = lauricella_fb(&spec, series)?;
    let mut report = Report::new("fb");
    report
        .set("alpha", floats(&a.alpha))
        .set("beta", floats(&a.beta))
        .set("gamma", num(a.gamma))
        .set("x", floats(&a.x));
    report.row(vec![("method", "series".into()), ("value", num(v))]);
    Ok(report)
}

pub fn verify(a: &VerifyArgs) -> CliResult<Report> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?]
    };
    let results = run_suites(&suites, a.seed);
    let passed = results.iter().all(|r| r.passed);
    let mut report = Report::new("verify");
    report.set("seed", a.seed).set("passed", passed);
    for r in &results {
        for i in &r.identities {
            report.row(vec![
                ("suite", r.suite.name().into()),
                ("identity", i.identity.clone().into()),
                ("cases", i.cases.into()),
                ("max-residual", num(i.max_residual)),
                ("tolerance", num(i.tolerance)),
                ("passed", i.passed.into()),
                ("worst", i.worst.clone().map_or(Value::Null, Value::from)),
            ]);
        }
    }
    report.ok = passed;
    Ok(report)
}
