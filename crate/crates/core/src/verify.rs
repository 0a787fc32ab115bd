//! Seeded identity sweeps. Each suite draws random admissible inputs,
//! evaluates both sides of one or more identities and reports the largest
//! residual against a fixed tolerance.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hypergeo::{
    appell_f4, build_lauricella_knots, f4_via_moments, lauricella_genfun_check, lauricella_grid, lauricella_poly,
    r_function, r_series_partial_sums, s_function, s_series, watson_product, GenfunCheck, LauricellaMethod,
    LauricellaSpec, RMethod, SMethod, SeriesControl,
};
use crate::moments::identities::{recurrence_54_residual, recurrence_616_residual, zill_55_residual, zill_56_residual};
use crate::moments::{base_moment, degree_elevate_check, param_elevate_617, simplex_moment};
use crate::multiindex::MultiIndex;
use crate::quadrature::IntegrationControl;
use crate::simplex::{dirichlet_density, negative_moment, oracle_moment, DirichletParams, KnotSet, NegativeMomentMethod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Desk,
    Density,
    Oracle,
    Elevation,
    Watson,
    Euler,
    ConstantArgument,
    SFunction,
    Lauricella,
    LogConvexity,
    Recurrence,
    Genfun,
    F4,
    NegativeMoment,
}

impl Suite {
    pub const ALL: [Suite; 14] = [
        Suite::Desk,
        Suite::Density,
        Suite::Oracle,
        Suite::Elevation,
        Suite::Watson,
        Suite::Euler,
        Suite::ConstantArgument,
        Suite::SFunction,
        Suite::Lauricella,
        Suite::LogConvexity,
        Suite::Recurrence,
        Suite::Genfun,
        Suite::F4,
        Suite::NegativeMoment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Desk => "desk",
            Suite::Density => "density",
            Suite::Oracle => "oracle",
            Suite::Elevation => "elevation",
            Suite::Watson => "watson",
            Suite::Euler => "euler",
            Suite::ConstantArgument => "constant-argument",
            Suite::SFunction => "s-function",
            Suite::Lauricella => "lauricella",
            Suite::LogConvexity => "log-convexity",
            Suite::Recurrence => "recurrence",
            Suite::Genfun => "genfun",
            Suite::F4 => "f4",
            Suite::NegativeMoment => "negative-moment",
        }
    }

    fn index(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).unwrap() as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .map_or_else(|| invalid(format!("unknown suite `{s}`")), Ok)
    }
}

/// Outcome for one identity within a suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Description of the case with the largest residual, or of the first
    /// evaluation error.
    pub worst: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: bool,
    pub identities: Vec<IdentityReport>,
}

struct Tracker {
    identity: String,
    tolerance: f64,
    cases: usize,
    max_residual: f64,
    worst: Option<String>,
    failed: bool,
}

impl Tracker {
    fn new(identity: &str, tolerance: f64) -> Self {
        Self {
            identity: identity.to_string(),
            tolerance,
            cases: 0,
            max_residual: 0.0,
            worst: None,
            failed: false,
        }
    }

    fn record(&mut self, residual: f64, case: impl FnOnce() -> String) {
        self.cases += 1;
        if residual.is_nan() || residual > self.max_residual {
            self.max_residual = if residual.is_nan() { f64::INFINITY } else { residual };
            if !self.failed || residual > self.tolerance {
                self.worst = Some(case());
            }
        }
        if !(residual <= self.tolerance) {
            self.failed = true;
        }
    }

    fn check(&mut self, ok: bool, case: impl FnOnce() -> String) {
        self.record(if ok { 0.0 } else { f64::INFINITY }, case);
    }

    fn fold(&mut self, outcome: Result<f64>, case: impl Fn() -> String) {
        match outcome {
            Ok(r) => self.record(r, case),
            Err(e) => {
                self.cases += 1;
                self.max_residual = f64::INFINITY;
                if !self.failed {
                    self.worst = Some(format!("{}: {e}", case()));
                }
                self.failed = true;
            }
        }
    }

    fn finish(self) -> IdentityReport {
        IdentityReport {
            identity: self.identity,
            cases: self.cases,
            max_residual: self.max_residual,
            tolerance: self.tolerance,
            passed: !self.failed && self.cases > 0,
            worst: self.worst,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn rng_for(suite: Suite, seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (suite.index() + 1))
}

fn random_knots(rng: &mut ChaCha8Rng, s: usize, n: usize, lo: f64, hi: f64) -> KnotSet {
    assert!(n >= s, "need at least s + 1 knots for positive volume");
    loop {
        let pts = (0..=n)
            .map(|_| (0..s).map(|_| rng.random_range(lo..hi)).collect())
            .collect();
        let k = KnotSet::new(pts).expect("finite knots");
        if k.volume_positive() {
            return k;
        }
    }
}

fn random_params(rng: &mut ChaCha8Rng, len: usize, lo: f64, hi: f64) -> DirichletParams {
    DirichletParams::new((0..len).map(|_| rng.random_range(lo..hi)).collect()).expect("positive")
}

fn random_index(rng: &mut ChaCha8Rng, dim: usize, max_order: u32) -> MultiIndex {
    let order = rng.random_range(0..=max_order);
    let mut e = vec![0u32; dim];
    for _ in 0..order {
        e[rng.random_range(0..dim)] += 1;
    }
    MultiIndex::new(e)
}

fn describe(params: &DirichletParams, knots: &KnotSet, beta: &MultiIndex) -> String {
    format!("b = {:?}, X = {:?}, β = {beta}", params.b(), knots.points())
}

/// Runs one suite with the given seed.
pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    let mut rng = rng_for(suite, seed);
    let identities = match suite {
        Suite::Desk => desk(),
        Suite::Density => density(&mut rng),
        Suite::Oracle => oracle(&mut rng),
        Suite::Elevation => elevation(&mut rng),
        Suite::Watson => watson(&mut rng),
        Suite::Euler => euler(&mut rng),
        Suite::ConstantArgument => constant_argument(&mut rng),
        Suite::SFunction => s_consistency(&mut rng),
        Suite::Lauricella => lauricella(&mut rng),
        Suite::LogConvexity => log_convexity(&mut rng),
        Suite::Recurrence => recurrence(&mut rng),
        Suite::Genfun => genfun(&mut rng),
        Suite::F4 => f4(&mut rng),
        Suite::NegativeMoment => negative(&mut rng),
    };
    SuiteReport {
        suite,
        seed,
        passed: identities.iter().all(|r| r.passed),
        identities,
    }
}

/// Runs several suites on separate threads and returns the reports in the
/// order requested.
pub fn run_suites(suites: &[Suite], seed: u64) -> Vec<SuiteReport> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = suites
            .iter()
            .map(|&suite| scope.spawn(move || run_suite(suite, seed)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    })
}

fn desk() -> Vec<IdentityReport> {
    let mut t = Tracker::new("analytic values", 1e-12);
    let cases: Vec<(&str, Result<f64>, f64)> = vec![
        (
            "m_2 on {0,1}",
            KnotSet::univariate(&[0.0, 1.0]).and_then(|k| simplex_moment(&k, &[2].into())),
            1.0 / 3.0,
        ),
        (
            "m_2 on {0,1,2}",
            KnotSet::univariate(&[0.0, 1.0, 2.0]).and_then(|k| simplex_moment(&k, &[2].into())),
            7.0 / 6.0,
        ),
        (
            "m_(1,1) on (1,0),(0,1),(1,1)",
            KnotSet::new(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]])
                .and_then(|k| simplex_moment(&k, &[1, 1].into())),
            5.0 / 12.0,
        ),
        (
            "base m_1 on {1,2}",
            KnotSet::univariate(&[1.0, 2.0]).and_then(|k| base_moment(&k, &[1].into())),
            1.5,
        ),
        (
            "base m_2 on {1,2}",
            KnotSet::univariate(&[1.0, 2.0]).and_then(|k| base_moment(&k, &[2].into())),
            7.0 / 3.0,
        ),
    ];
    for (name, got, want) in cases {
        t.fold(got.map(|g| rel(g, want)), || name.to_string());
    }
    vec![t.finish()]
}

fn density(rng: &mut ChaCha8Rng) -> Vec<IdentityReport> {
    let mut t = Tracker::new("t_i φ_b(t) = w_i φ_(b+e_i)(t)", 1e-12);
    for _ in 0..100 {
        let n = rng.random_range(1..=4);
        let p = random_params(rng, n + 1, 0.3, 4.0);
        let raw: Vec<f64> = (0..=n).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let full: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let i = rng.random_range(0..=n);
        let outcome = dirichlet_density(&p, &full[1..]).and_then(|lhs| {
            let rhs = dirichlet_density(&p.elevated(i), &full[1..])?;
            Ok(rel(full[i] * lhs, p.weight(i) * rhs))
        });
        t.fold(outcome, || format!("b = {:?}, t = {full:?}, i = {i}", p.b()));
    }
    vec![t.finish()]
}

fn oracle(rng: &mut ChaCha8Rng) -> Vec<IdentityReport> {
    let mut t = Tracker::new("knot recursion = expansion (b = ones)", 1e-9);
    for _ in 0..200 {
        let s = rng.random_range(1..=3);
        let n = rng.random_range(s..=6);
        let knots = random_knots(rng, s, n, 0.0, 1.0);
        let beta = random_index(rng, s, 5);
        let ones = DirichletParams::ones(n + 1);
        let outcome = simplex_moment(&knots, &beta).and_then(|got| Ok(rel(got, oracle_moment(&ones, &knots, &beta)?)));
        t.fold(outcome, || describe(&ones, &knots, &beta));
    }
    vec![t.finish()]
}

fn elevation(rng: &mut ChaCha8Rng) -> Vec<IdentityReport> {
    let tol = 1e-10;
    let mut mass = Tracker::new("weight split", tol);
    let mut elev = Tracker::new("degree elevation", tol);
    let mut red = Tracker::new("parameter reduction", tol);
    let mut z5 = Tracker::new("pair difference", tol);
    let mut z6 = Tracker::new("pair determinant", tol);
    for _ in 0..100 {
        let s = rng.random_range(1..=2);
        let n = rng.random_range(s + 1..=4);
        let knots = random_knots(rng, s, n, -1.0, 2.0);
        let beta = random_index(rng, s, 3);

        let p = random_params(rng, n + 1, 0.2, 3.0);
        match degree_elevate_check(&p, &knots, &beta) {
            Ok(r) => {
                mass.record(r.mass.relative(), || describe(&p, &knots, &beta));
                let worst = r.coordinates.iter().map(|c| c.relative()).fold(0.0, f64::max);
                elev.record(worst, || describe(&p, &knots, &beta));
            }
            Err(e) => {
                mass.fold(Err(e.clone()), || describe(&p, &knots, &beta));
                elev.fold(Err(e), || describe(&p, &knots, &beta));
            }
        }

        // The remaining identities need b_i, b_j >= 1.
        let q = random_params(rng, n + 1, 1.0, 3.5);
        let j = rng.random_range(0..=n);
        red.fold(recurrence_54_residual(&q, &knots, &beta, j).map(|r| r.relative()), || {
            format!("{}, j = {j}", describe(&q, &knots, &beta))
        });
        let i = (j + rng.random_range(1..=n)) % (n + 1);
        z5.fold(zill_55_residual(&q, &knots, &beta, i, j).map(|r| r.relative()), || {
            format!("{}, i = {i}, j = {j}", describe(&q, &knots, &beta))
        });
        let k = rng.random_range(0..s);
        z6.fold(zill_56_residual(&q, &knots, &beta, i, j, k).map(|r| r.relative()), || {
            format!("{}, i = {i}, j = {j}, k = {k}", describe(&q, &knots, &beta))
        });
    }
    vec![mass.finish(), elev.finish(), red.finish(), z5.finish(), z6.finish()]
}

/// Truncation order beyond which Watson residuals must decrease.
const WATSON_THRESHOLD: usize = 3;
const WATSON_ORDER: u32 = 32;

fn watson(rng: &mut ChaCha8Rng) -> Vec<IdentityReport> {
    let mut value = Tracker::new("series (a = c) = product", 1e-9);
    let mut mono = Tracker::new("residual decreases with truncation order", 0.0);
    let mut cases: Vec<(DirichletParams, KnotSet, Vec<f64>)> = vec![(
        DirichletParams::ones(2),
        KnotSet::univariate(&[0.0, 1.0]).unwrap(),
        vec![0.5],
    )];
    for _ in 0..20 {
        let s = rng.random_range(1..=2);
        let n = rng.random_range(1..=2);
        let knots = KnotSet::new(
            (0..=n)
                .map(|_| (0..s).map(|_| rng.random_range(0.0..1.0)).collect())
                .collect(),
        )
        .unwrap();
        // λ·x^j in [0, 0.25): all series terms are nonnegative.
        let lambda: Vec<f64> = (0..s).map(|_| rng.random_range(0.0..0.25 / s as f64)).collect();
        cases.push((random_params(rng, n + 1, 0.3, 2.0), knots, lambda));
    }
    for (p, k, lambda) in &cases {
        let desc = || format!("{}, λ = {lambda:?}", describe(p, k, &MultiIndex::zeros(k.dim())));
        let outcome = watson_product(lambda, k, p).and_then(|prod| {
            let sums = r_series_partial_sums(p.c(), p, k, lambda, WATSON_ORDER)?;
            Ok((prod, sums))
        });
        match outcome {
            Ok((prod, sums)) => {
                value.record(rel(*sums.last().unwrap(), prod), desc);
                let res: Vec<f64> = sums.iter().map(|s| (s - prod).abs()).collect();
                let floor = 1e-13 * prod.abs();
                let ok = res[WATSON_THRESHOLD..]
                    .windows(2)
                    .all(|w| w[1] <= w[0] || w[1] <= floor);
                mono.check(ok, desc);
            }
            Err(e) => {
                value.fold(Err(e.clone()), desc);
                mono.fold(Err(e), desc);
            }
        }
    }
    vec![value.finish(), mono.finish()]
}

fn euler(rng: &mut ChaCha8Rng) -> Vec<IdentityReport> {
    let mut t = Tracker::new("R_{-a}(b;Z) = ∏ z^{-b} R_{a-c}(b;1/Z)", 1e-8);
    let (sc, ic) = (SeriesControl::default(), IntegrationControl::default());
    for _ in 0..50 {
        let n = rng.random_range(1..=2);
        let p = random_params(rng, n + 1, 0.4, 3.0);
        let z: Vec<f64> = (0..=n).map(|_| rng.random_range(0.5..2.0)).collect();
        let a = rng.random_range(-2.0..3.0);
        let outcome = (|| {
            let lhs = r_function(a, &p, &z, RMethod::Quadrature, &sc, &ic)?.value;
            let inv: Vec<f64> = z.iter().map(|v| 1.0 / v).collect();
            let inner = r_function(p.c() - a, &p, &inv, RMethod::Quadrature, &sc, &ic)?.value;
            let pre: f64 = z.iter().zip(p.b()).map(|(zj, bj)| zj.powf(-bj)).product();
            Ok(rel(pre * inner, lhs))
        })();
        t.fold(outcome, || format!("a = {a}, b = {:?}, Z = {z:?}", p.b()));
    }
    vec![t.finish()]
}

fn constant_argument(rng: &mut ChaCha8Rng) -> Vec<IdentityReport> {
    let mut t = Tracker::new("R_{-c}(b;Z) = ∏ z^{-b}", 1e-9);
    let (sc, ic) = (SeriesControl::default(), IntegrationControl::default());
    for _ in 0..30 {
        let n = rng.random_range(1..=2);
        let p = random_params(rng, n + 1, 0.4, 3.0);
        let z: Vec<f64> = (0..=n).map(|_| rng.random_range(0.3..3.0)).collect();
        let want: f64 = z.iter().zip(p.b()).map(|(zj, bj)| zj.powf(-bj)).product();
        let outcome = r_function(p.c(), &p, &z, RMethod::Quadrature, &sc, &ic).map(|e| rel(e.value, want));
        t.fold(outcome, || format!("b = {:?}, Z = {z:?}", p.b()));
    }
    vec![t.finish()]
}

fn s_consistency(rng: &mut ChaCha8Rng) -> Vec<IdentityReport> {
    let mut desk = Tracker::new("S((1,1); {0,1}) = e - 1", 1e-12);
    let mut t = Tracker::new("moment series = k!·divided difference", 1e-10);
    let ctrl = SeriesControl::default();
    let outcome = KnotSet::univariate(&[0.0, 1.0])
        .and_then(|k| s_series(&DirichletParams::ones(2), &k, &[1.0], &ctrl))
        .map(|s| rel(s.value, std::f64::consts::E - 1.0));
    desk.fold(outcome, || "X = {0,1}, b = (1,1), λ = 1".into());
    for _ in 0..50 {
        let s = rng.random_range(1..=2);
        let n = rng.random_range(s..=4);
        let knots = random_knots(rng, s, n, -1.0, 1.0);
        let mut b = vec![1u32; n + 1];
        let extra = rng.random_range(0..=(11 - n) as u32);
        for _ in 0..extra {
            b[rng.random_range(0..=n)] += 1;
        }
        let p = DirichletParams::new(b.iter().map(|&v| f64::from(v)).collect()).unwrap();
        let lambda: Vec<f64> = (0..s).map(|_| rng.random_range(-1.0..1.0)).collect();
        let outcome = (|| {
            let series = s_series(&p, &knots, &lambda, &ctrl)?.value;
            let z = knots.ridge(&lambda);
            let dd = s_function(&p, &z, SMethod::DividedDifference, &ctrl)?.value;
            Ok(rel(series, dd))
        })();
        t.fold(outcome, || format!("{}, λ = {lambda:?}", describe(&p, &knots, &MultiIndex::zeros(s))));
    }
    vec![desk.finish(), t.finish()]
}

fn random_lauricella(rng: &mut ChaCha8Rng, max_n: usize, max_order: u32, x_lo: f64) -> LauricellaSpec {
    let n = rng.random_range(1..=max_n);
    let beta: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();
    let gamma = beta.iter().sum::<f64>() + rng.random_range(0.05..3.0);
    let x: Vec<f64> = (0..n).map(|_| rng.random_range(x_lo..1.0)).collect();
    let j = random_index(rng, n, max_order);
    LauricellaSpec::polynomial(j, beta, gamma, x).expect("admissible")
}

fn describe_spec(s: &LauricellaSpec) -> String {
    format!("{:?}, β = {:?}, γ = {}, x = {:?}", s.kind, s.beta, s.gamma, s.x)
}

fn lauricella(rng: &mut ChaCha8Rng) -> Vec<IdentityReport> {
    let mut t = Tracker::new("series = moments = recurrence", 1e-10);
    let ctrl = SeriesControl::default();
    for _ in 0..100 {
        let spec = random_lauricella(rng, 4, 6, 0.0);
        let outcome = (|| {
            let a = lauricella_poly(&spec, LauricellaMethod::Series, &ctrl)?;
            let b = lauricella_poly(&spec, LauricellaMethod::Moments, &ctrl)?;
            let c = lauricella_poly(&spec, LauricellaMethod::Recurrence, &ctrl)?;
            Ok(rel(a, b).max(rel(b, c)).max(rel(a, c)))
        })();
        t.fold(outcome, || describe_spec(&spec));
    }
    vec![t.finish()]
}

fn log_convexity(rng: &mut ChaCha8Rng) -> Vec<IdentityReport> {
    let mut convex = Tracker::new("L_j² <= L_(j-e_m) L_(j+e_m)", 1e-12);
    let mut positive = Tracker::new("L_j > 0", 0.0);
    let ctrl = SeriesControl::default();
    for _ in 0..500 {
        let mut spec = random_lauricella(rng, 3, 5, 0.0);
        let n = spec.n();
        let m = rng.random_range(0..n);
        let mut j = match &spec.kind {
            crate::hypergeo::LauricellaKind::Polynomial(j) => j.clone(),
            _ => unreachable!(),
        };
        if j[m] == 0 {
            j = j.plus_unit(m);
        }
        spec = spec.with_index(j.plus_unit(m));
        let outcome = lauricella_grid(&spec, &ctrl).map(|grid| {
            let mid = grid[&j];
            let lo = grid[&j.minus_unit(m).unwrap()];
            let hi = grid[&j.plus_unit(m)];
            (mid, (mid * mid - lo * hi).max(0.0))
        });
        let desc = || format!("{}, j = {j}, m = {m}", describe_spec(&spec));
        match outcome {
            Ok((mid, excess)) => {
                convex.record(excess, desc);
                positive.check(mid > 0.0, desc);
            }
            Err(e) => convex.fold(Err(e), desc),
        }
    }
    vec![convex.finish(), positive.finish()]
}

fn recurrence(rng: &mut ChaCha8Rng) -> Vec<IdentityReport> {
    let mut l614 = Tracker::new("three-term recurrence with series values, scaled by γ+|k|", 1e-10);
    let mut m616 = Tracker::new("moment recurrence", 1e-10);
    let mut p617 = Tracker::new("parameter elevation = expansion", 1e-10);
    let ctrl = SeriesControl::default();
    for _ in 0..100 {
        let spec = random_lauricella(rng, 3, 4, -0.9);
        let n = spec.n();
        let m = rng.random_range(0..n);
        let k = match &spec.kind {
            crate::hypergeo::LauricellaKind::Polynomial(j) => j.clone(),
            _ => unreachable!(),
        };
        let outcome = (|| {
            let eval = |idx: Option<MultiIndex>| -> Result<f64> {
                match idx {
                    Some(i) => lauricella_poly(&spec.with_index(i), LauricellaMethod::Series, &ctrl),
                    None => Ok(0.0),
                }
            };
            let g = spec.gamma;
            let kk = f64::from(k.order());
            let w = spec.beta[m] / g;
            let mut res = (g + kk) * eval(Some(k.plus_unit(m)))? - (g * (1.0 - w * spec.x[m]) + kk) * eval(Some(k.clone()))?;
            for l in 0..n {
                if let Some(down) = k.minus_unit(l) {
                    let e = if l == m { 1.0 - spec.x[m] } else { 1.0 };
                    res += f64::from(k[l]) * e * (eval(Some(down.clone()))? - eval(Some(down.plus_unit(m)))?);
                }
            }
            Ok(res.abs() / (g + kk))
        })();
        l614.fold(outcome, || format!("{}, k = {k}, m = {m}", describe_spec(&spec)));

        let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.02..0.98)).collect();
        let knots = build_lauricella_knots(&x).unwrap();
        let p = random_params(rng, n + 1, 0.2, 3.0);
        let beta = random_index(rng, n, 4);
        m616.fold(recurrence_616_residual(&p, &knots, &beta, m).map(|r| r.relative()), || {
            format!("{}, m = {m}", describe(&p, &knots, &beta))
        });
        let beta3 = random_index(rng, n, 3);
        let outcome = param_elevate_617(&p, &knots, &beta3, m)
            .and_then(|got| Ok(rel(got, oracle_moment(&p.elevated(m), &knots, &beta3)?)));
        p617.fold(outcome, || format!("{}, m = {m}", describe(&p, &knots, &beta3)));
    }
    vec![l614.finish(), m616.finish(), p617.finish()]
}

const GENFUN_ORDER: u32 = 12;

/// Bound on the tail `Σ_{m>N} (a,m)/m! E[(λ·Xt)^m]` of the R generating
/// function, with `ρ = max_i |λ·x^i|` over the Lauricella knots.
fn genfun_tail_bound(a: f64, spec: &LauricellaSpec, lambda: &[f64]) -> Result<f64> {
    let knots = build_lauricella_knots(&spec.x)?;
    let rho = knots.ridge(lambda).iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let n = GENFUN_ORDER + 1;
    let first = crate::multiindex::appell_symbol(a, n).abs() / crate::multiindex::factorial(n) * rho.powi(n as i32);
    // Successive coefficient ratios are |a+m|/(m+1) <= max(1, (|a|+n)/(n+1)).
    let q = rho * 1f64.max((a.abs() + f64::from(n)) / f64::from(n + 1));
    Ok(first / (1.0 - q))
}

fn genfun(rng: &mut ChaCha8Rng) -> Vec<IdentityReport> {
    let mut exp = Tracker::new("exponential generating function, N = 12", 1e-8);
    let mut r = Tracker::new("R generating function, N = 12", 1e-8);
    let mut bound = Tracker::new("R generating function within its truncation bound, wide domain", 1e-12);
    let (sc, ic) = (SeriesControl::default(), IntegrationControl::default());
    let check = |spec: &LauricellaSpec, lambda: &[f64], which| {
        lauricella_genfun_check(spec, lambda, which, GENFUN_ORDER, &sc, &ic).map(|g| g.residual)
    };
    for _ in 0..20 {
        // 0 < x < 1 and a in (-1, 1.5) keep the order-13 tail below 1e-8.
        let spec = random_lauricella(rng, 2, 0, 0.0);
        let lambda: Vec<f64> = (0..spec.n()).map(|_| rng.random_range(-0.1..0.1)).collect();
        let a = rng.random_range(-1.0..1.5);
        let desc = || format!("{}, λ = {lambda:?}", describe_spec(&spec));
        exp.fold(check(&spec, &lambda, GenfunCheck::Exp), desc);
        r.fold(check(&spec, &lambda, GenfunCheck::R { a }), || format!("{}, a = {a}", desc()));

        let wide = random_lauricella(rng, 2, 0, -1.0);
        let lambda: Vec<f64> = (0..wide.n()).map(|_| rng.random_range(-0.1..0.1)).collect();
        let a = rng.random_range(-1.5..2.5);
        let outcome = check(&wide, &lambda, GenfunCheck::R { a })
            .and_then(|res| Ok((res - genfun_tail_bound(a, &wide, &lambda)?).max(0.0)));
        bound.fold(outcome, || format!("{}, λ = {lambda:?}, a = {a}", describe_spec(&wide)));
    }
    vec![exp.finish(), r.finish(), bound.finish()]
}

/// Random `(α, β, γ, δ)` with `b = (β, γ-β)` and `d` positive; every fourth
/// draw has `γ = α`.
fn random_f4_params(rng: &mut ChaCha8Rng, equal: bool) -> (f64, f64, f64, f64) {
    loop {
        let beta = rng.random_range(0.3..1.5);
        if equal {
            let alpha = beta + rng.random_range(0.2..1.5);
            let delta = rng.random_range(1.0f64.max(beta)..beta + 1.0);
            if delta > 1.0 && delta > beta {
                return (alpha, beta, alpha, delta);
            }
        } else {
            let alpha = rng.random_range(0.3..2.0);
            let total = rng.random_range(alpha + 1.0..alpha + beta + 1.0);
            let gamma = rng.random_range(0.0..total);
            let delta = total - gamma;
            if gamma > beta && delta > beta && gamma != alpha {
                return (alpha, beta, gamma, delta);
            }
        }
    }
}

fn f4(rng: &mut ChaCha8Rng) -> Vec<IdentityReport> {
    let mut origin = Tracker::new("F4 at (0,0) = 1", 0.0);
    let mut t = Tracker::new("double series = segment average", 1e-7);
    let (sc, ic) = (SeriesControl::default(), IntegrationControl::default());
    origin.fold(
        f4_via_moments(1.0, 0.9, 1.3, 1.2, 0.0, 0.0, &ic).map(|e| (e.value - 1.0).abs()),
        || "segment".into(),
    );
    origin.fold(appell_f4(1.0, 0.9, 1.3, 1.2, 0.0, 0.0, &sc).map(|v| (v - 1.0).abs()), || "series".into());
    for case in 0..20 {
        let (a, b, g, d) = random_f4_params(rng, case % 4 == 3);
        let (x1, x2) = loop {
            let x1: f64 = rng.random_range(-0.25..0.25);
            let x2: f64 = rng.random_range(-0.25..0.25);
            let (y1, y2) = (x1 * (1.0 - x2), x2 * (1.0 - x1));
            if x1.abs() > 0.01 && x2.abs() > 0.01 && y1.abs().sqrt() + y2.abs().sqrt() < 0.9 {
                break (x1, x2);
            }
        };
        let outcome = (|| {
            let series = appell_f4(a, b, g, d, x1 * (1.0 - x2), x2 * (1.0 - x1), &sc)?;
            let moments = f4_via_moments(a, b, g, d, x1, x2, &ic)?.value;
            Ok((series - moments).abs())
        })();
        t.fold(outcome, || format!("α = {a}, β = {b}, γ = {g}, δ = {d}, x = ({x1}, {x2})"));
    }
    vec![origin.finish(), t.finish()]
}

fn negative(rng: &mut ChaCha8Rng) -> Vec<IdentityReport> {
    let mut quad = Tracker::new("quadrature desk values (ln 2, 1/2)", 1e-9);
    let mut mc = Tracker::new("Monte Carlo within 3 standard errors", 3.0);
    let mut overlap = Tracker::new("polynomial orders match expansion", 1e-10);
    let knots = KnotSet::univariate(&[1.0, 2.0]).unwrap();
    let ones = DirichletParams::ones(2);
    let mc_ctrl = IntegrationControl {
        abs_tol: 2e-4,
        rel_tol: 0.0,
        ..IntegrationControl::default()
    };
    for (a, want) in [(1.0, std::f64::consts::LN_2), (2.0, 0.5)] {
        let desc = || format!("X = {{1,2}}, b = (1,1), a = {a}");
        quad.fold(
            negative_moment(&ones, &knots, &[a], NegativeMomentMethod::Quadrature, &IntegrationControl::default())
                .map(|e| rel(e.value, want)),
            desc,
        );
        mc.fold(
            negative_moment(&ones, &knots, &[a], NegativeMomentMethod::MonteCarlo, &mc_ctrl)
                .map(|e| (e.value - want).abs() / e.error.max(f64::MIN_POSITIVE)),
            desc,
        );
    }
    for _ in 0..30 {
        let s = rng.random_range(1..=2);
        let n = rng.random_range(s..=3);
        let k = random_knots(rng, s, n, -1.0, 2.0);
        let p = random_params(rng, n + 1, 0.3, 3.0);
        let beta = random_index(rng, s, 4);
        let a: Vec<f64> = beta.entries().iter().map(|&e| -f64::from(e)).collect();
        let outcome = (|| {
            let est = negative_moment(&p, &k, &a, NegativeMomentMethod::Quadrature, &IntegrationControl::default())?;
            let want = oracle_moment(&p, &k, &beta)?;
            Ok((est.value - want).abs() / want.abs().max(1.0))
        })();
        overlap.fold(outcome, || describe(&p, &k, &beta));
    }
    vec![quad.finish(), mc.finish(), overlap.finish()]
}
