//! Verification suites. Every check binds one inequality or identity to a
//! probe, a tolerance (overridable through `tol.<id>` in the config) and a
//! verdict that separates a violated inequality from a margin lost in
//! quadrature error.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::funcexpr::FuncExpr;
use crate::lab::{Config, Lab};
use crate::operators::{
    apply, apply_series, deddens_ratio, intertwine_residual, operator_matrix, Image, OpKind, OperatorSpec,
};
use crate::probes::{
    cphi_bounded_probe, deddens_constant, ig_essnorm_lower, neumann_tail, opnorm_lower,
    product_constant_search, radial_sequence_to_max, resolvent_portrait, tg_essnorm_decay, Corpus, Flag,
    ProbeError, Rect, PRODUCT_CEILING,
};
use crate::quadrature::monotone_weight_check;
use crate::series::TaylorSeries;
use crate::spaces::{
    b1_on, norm_b1, norm_dirichlet_type, norm_fpqs, norm_hardy, norm_s1, norm_sup, norm_z1_alt, norm_zp,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown check id {0:?}")]
    UnknownCheck(String),
    #[error("no checks selected")]
    Empty,
    #[error("cannot serialize report: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    /// The margin is smaller than the quadrature error estimate.
    Inconclusive,
    Violated,
    /// The probe itself failed; the message is in `witness`.
    Error,
}

/// Running worst case over the sub-claims of a check.
#[derive(Debug, Clone)]
struct Tally {
    verdict: Verdict,
    worst: Option<(f64, f64, f64, f64, String)>,
    count: usize,
}

impl Tally {
    fn new() -> Self {
        Tally {
            verdict: Verdict::Pass,
            worst: None,
            count: 0,
        }
    }

    /// Records `lhs ≤ rhs`, with `err` the quadrature error of the margin.
    fn le(&mut self, lhs: f64, rhs: f64, err: f64, witness: impl FnOnce() -> String) {
        self.record(lhs, rhs, rhs - lhs, err, witness)
    }

    /// Records `lhs ≥ rhs`.
    fn ge(&mut self, lhs: f64, rhs: f64, err: f64, witness: impl FnOnce() -> String) {
        self.record(lhs, rhs, lhs - rhs, err, witness)
    }

    fn record(&mut self, lhs: f64, rhs: f64, margin: f64, err: f64, witness: impl FnOnce() -> String) {
        self.count += 1;
        let v = if margin.is_nan() {
            Verdict::Violated
        } else if margin >= 0.0 {
            Verdict::Pass
        } else if -margin <= err {
            Verdict::Inconclusive
        } else {
            Verdict::Violated
        };
        self.verdict = self.verdict.max(v);
        let rel = margin / rhs.abs().max(lhs.abs()).max(1e-300);
        let rel = if rel.is_nan() { f64::NEG_INFINITY } else { rel };
        if self.worst.as_ref().map_or(true, |w| rel < w.0) {
            self.worst = Some((rel, lhs, rhs, err, witness()));
        }
    }

    fn finish(self, tolerance: f64, grid: Option<String>, details: Value) -> Outcome {
        let (_, lhs, rhs, err, witness) = self.worst.unwrap_or((0.0, 0.0, 0.0, 0.0, String::new()));
        Outcome {
            verdict: self.verdict,
            measured: lhs,
            bound: rhs,
            tolerance,
            err_est: err,
            witness,
            grid,
            details: merge(details, json!({ "comparisons": self.count })),
        }
    }
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

/// Result of one check before timing is attached.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub verdict: Verdict,
    /// Left side of the tightest comparison.
    pub measured: f64,
    /// Right side of the tightest comparison, tolerance included.
    pub bound: f64,
    pub tolerance: f64,
    pub err_est: f64,
    pub witness: String,
    /// Sup-grid or rule the check depends on.
    pub grid: Option<String>,
    pub details: Value,
}

/// Inputs handed to a check.
pub struct Ctx<'a> {
    pub lab: &'a Lab,
    pub seed: u64,
    pub tolerance: f64,
}

impl Ctx<'_> {
    fn corpus(&self, size: usize) -> Corpus {
        Corpus::generate(self.lab, self.seed, size)
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn a_grid_label(&self) -> String {
        let c = &self.lab.config;
        format!("a-grid radii {:?} x {} angles", c.a_radii, c.a_angles)
    }

    fn rule_label(&self) -> String {
        let c = &self.lab.config;
        format!("disk rule R={} M={} (refined 2R, 2M)", c.radial, c.angular)
    }
}

type RunFn = fn(&Ctx) -> Result<Outcome, ProbeError>;

pub struct CheckSpec {
    pub id: &'static str,
    pub statement: &'static str,
    pub default_tolerance: f64,
    run: RunFn,
}

impl std::fmt::Debug for CheckSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CheckSpec")
            .field("id", &self.id)
            .field("statement", &self.statement)
            .field("default_tolerance", &self.default_tolerance)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub statement: String,
    pub pass: bool,
    #[serde(flatten)]
    pub outcome: Outcome,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub inconclusive: usize,
    pub violated: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: Config,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Copy with runtimes zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.runtime_ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per check: `id,pass,measured,bound,tolerance,runtime_ms`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,pass,measured,bound,tolerance,runtime_ms\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{:e},{:e},{:e},{}\n",
                c.id, c.pass, c.outcome.measured, c.outcome.bound, c.outcome.tolerance, c.runtime_ms
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub fn emit(report: &Report, format: Format) -> Result<Vec<u8>, HarnessError> {
    Ok(match format {
        Format::Json => report.to_json()?.into_bytes(),
        Format::Csv => report.to_csv().into_bytes(),
    })
}

/// 64-bit FNV-1a.
pub fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

pub fn registry() -> &'static [CheckSpec] {
    REGISTRY
}

/// Expands `all` and comma-separated lists; unknown ids are rejected before
/// anything runs. Order follows the registry; duplicates collapse.
pub fn resolve(names: &[String]) -> Result<Vec<&'static CheckSpec>, HarnessError> {
    let mut wanted = BTreeSet::new();
    for name in names.iter().flat_map(|n| n.split(',')).map(str::trim).filter(|n| !n.is_empty()) {
        if name == "all" {
            wanted.extend(REGISTRY.iter().map(|c| c.id));
        } else if let Some(c) = REGISTRY.iter().find(|c| c.id == name) {
            wanted.insert(c.id);
        } else {
            return Err(HarnessError::UnknownCheck(name.to_string()));
        }
    }
    if wanted.is_empty() {
        return Err(HarnessError::Empty);
    }
    Ok(REGISTRY.iter().filter(|c| wanted.contains(c.id)).collect())
}

pub fn run_check(lab: &Lab, spec: &CheckSpec) -> CheckResult {
    let tolerance = lab.config.tolerance(spec.id, spec.default_tolerance);
    let ctx = Ctx {
        lab,
        seed: lab.config.seed ^ fnv1a(spec.id),
        tolerance,
    };
    let start = Instant::now();
    let outcome = (spec.run)(&ctx).unwrap_or_else(|e| Outcome {
        verdict: Verdict::Error,
        measured: f64::NAN,
        bound: f64::NAN,
        tolerance,
        err_est: f64::NAN,
        witness: e.to_string(),
        grid: None,
        details: Value::Null,
    });
    CheckResult {
        id: spec.id.to_string(),
        statement: spec.statement.to_string(),
        pass: outcome.verdict == Verdict::Pass,
        outcome,
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

pub fn run_suite(lab: &Lab, names: &[String]) -> Result<Report, HarnessError> {
    let specs = resolve(names)?;
    Ok(assemble(lab, specs.into_iter().map(|s| run_check(lab, s)).collect()))
}

/// Like [`run_suite`], calling `progress` after each check.
pub fn run_suite_with(
    lab: &Lab,
    names: &[String],
    mut progress: impl FnMut(&CheckResult),
) -> Result<Report, HarnessError> {
    let specs = resolve(names)?;
    let mut checks = Vec::with_capacity(specs.len());
    for s in specs {
        let r = run_check(lab, s);
        progress(&r);
        checks.push(r);
    }
    Ok(assemble(lab, checks))
}

fn assemble(lab: &Lab, checks: Vec<CheckResult>) -> Report {
    let count = |v: Verdict| checks.iter().filter(|c| c.outcome.verdict == v).count();
    let summary = Summary {
        total: checks.len(),
        passed: count(Verdict::Pass),
        inconclusive: count(Verdict::Inconclusive),
        violated: count(Verdict::Violated),
        errors: count(Verdict::Error),
    };
    Report {
        config: lab.config.clone(),
        checks,
        summary,
    }
}

// ---------------------------------------------------------------------------
// helpers

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_series(rng: &mut ChaCha8Rng, max_degree: usize) -> TaylorSeries {
    let d = rng.gen_range(0..=max_degree);
    TaylorSeries::new(
        (0..=d)
            .map(|_| c(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
            .collect(),
    )
    .expect("finite coefficients")
}

fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize, scale: f64) -> FuncExpr {
    let s = random_series(rng, max_degree);
    FuncExpr::poly(s.coeffs().iter().map(|v| v * scale).collect()).expect("finite coefficients")
}

fn moebius(a: f64) -> FuncExpr {
    FuncExpr::moebius(c(a, 0.0)).expect("parameter inside disk")
}

fn spec(kind: OpKind, g: &FuncExpr) -> Result<OperatorSpec, ProbeError> {
    Ok(OperatorSpec::with_symbol(kind, g.clone())?)
}

/// Self-maps fixing the origin used by the composition checks.
fn origin_fixing_maps() -> Vec<FuncExpr> {
    vec![
        FuncExpr::z(),
        FuncExpr::monomial(2),
        FuncExpr::poly_real(&[0.0, 0.5]),
        FuncExpr::poly_real(&[0.0, 0.7, 0.3]),
        FuncExpr::poly_real(&[0.0, 0.5, 0.5]),
    ]
}

// ---------------------------------------------------------------------------
// checks

fn check_quad(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let rule = &ctx.lab.rule;
    let mut t = Tally::new();
    let area = rule.sum(|_| 1.0)?;
    let m1 = rule.sum(|z| z.norm())?;
    let m2 = rule.sum(|z| z.norm_sqr())?;
    t.le((area - 1.0).abs(), ctx.tolerance, 0.0, || "∫dA".into());
    t.le((m1 - 2.0 / 3.0).abs(), 100.0 * ctx.tolerance, 0.0, || "∫|z|dA".into());
    t.le((m2 - 0.5).abs(), 100.0 * ctx.tolerance, 0.0, || "∫|z|²dA".into());
    Ok(t.finish(
        ctx.tolerance,
        Some(ctx.rule_label()),
        json!({ "area": area, "first_moment": m1, "second_moment": m2 }),
    ))
}

fn check_lemma1(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let corpus = ctx.corpus(500);
    let n = 512;
    let mut t = Tally::new();
    let mut worst_ratio = 0.0f64;
    for f in corpus.members() {
        let approx = f.to_series(n);
        let lhs: f64 = approx
            .series
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, a)| a.norm() / (k + 1) as f64)
            .sum::<f64>()
            + approx.tail_bound / (n + 2) as f64;
        let h1 = norm_hardy(ctx.lab, f, 1.0)?;
        worst_ratio = worst_ratio.max(lhs / (PI * h1.value));
        t.le(lhs, PI * h1.value + ctx.tolerance, PI * h1.err_est, || f.render());
    }
    Ok(t.finish(
        ctx.tolerance,
        Some(format!("{} circle samples, series degree {n}", ctx.lab.config.angular)),
        json!({ "corpus": corpus.len(), "max_ratio": worst_ratio }),
    ))
}

fn check_lemma2(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let corpus = ctx.corpus(ctx.lab.config.corpus);
    let m = ctx.lab.config.angular;
    let mut t = Tally::new();
    let mut failures = 0usize;
    let run = |t: &mut Tally, failures: &mut usize, name: String, f: &dyn Fn(f64) -> f64| {
        let ok = monotone_weight_check(f, 32);
        if !ok {
            *failures += 1;
        }
        t.le(if ok { 0.0 } else { 1.0 }, 0.0, 0.0, || name);
    };
    for k in 0..6 {
        run(&mut t, &mut failures, format!("x^{k}"), &|x: f64| x.powi(k));
    }
    run(&mut t, &mut failures, "exp(4x)".into(), &|x: f64| (4.0 * x).exp());
    run(&mut t, &mut failures, "tanh(20(x-0.3))".into(), &|x: f64| (20.0 * (x - 0.3)).tanh());
    for f in corpus.members() {
        let mean = |r: f64| {
            if r == 0.0 {
                return f.jet(c(0.0, 0.0)).d1.norm();
            }
            (0..m)
                .map(|j| f.jet(C64::from_polar(r, 2.0 * PI * j as f64 / m as f64)).d1.norm())
                .sum::<f64>()
                / m as f64
        };
        run(&mut t, &mut failures, format!("circle mean of |f'| for f = {}", f.render()), &mean);
        // the circle means themselves are nondecreasing
        let samples: Vec<f64> = (0..=32).map(|k| mean(k as f64 / 32.0)).collect();
        for w in samples.windows(2) {
            t.le(w[0], w[1] + 1e-12 * w[1].abs().max(1.0), 0.0, || f.render());
        }
    }
    Ok(t.finish(
        ctx.tolerance,
        Some("Gauss–Legendre orders 32 and 64 on [0, 1]".into()),
        json!({ "failures": failures }),
    ))
}

fn check_lemma3(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let corpus = ctx.corpus(ctx.lab.config.corpus);
    let mut t = Tally::new();
    let mut max_ratio = 0.0f64;
    for f in corpus.members() {
        let h = norm_hardy(ctx.lab, f, 1.0)?;
        let d = norm_dirichlet_type(ctx.lab, f, 1.0)?;
        max_ratio = max_ratio.max(h.value / d.value);
        t.le(h.value, d.value * (1.0 + ctx.tolerance), h.err_est + d.err_est, || f.render());
    }
    let (h, d) = sharpness(ctx.lab)?;
    t.le((h - 1.0).abs(), 1e-10, 0.0, || "‖z‖_{H¹} = 1".into());
    t.le((d - 1.0).abs(), 1e-10, 0.0, || "‖z‖_{𝒟¹} = 1".into());
    Ok(t.finish(
        ctx.tolerance,
        Some(ctx.rule_label()),
        json!({ "max_ratio": max_ratio, "hardy_z": h, "dirichlet_z": d }),
    ))
}

fn sharpness(lab: &Lab) -> Result<(f64, f64), ProbeError> {
    let z = FuncExpr::z();
    Ok((norm_hardy(lab, &z, 1.0)?.value, norm_dirichlet_type(lab, &z, 1.0)?.value))
}

fn check_remark1(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let mut t = Tally::new();
    let (h, d) = sharpness(ctx.lab)?;
    t.le((h - d).abs(), ctx.tolerance, 0.0, || "f = z".into());
    t.le((h - 1.0).abs(), ctx.tolerance, 0.0, || "‖z‖_{H¹}".into());
    // the constant 2 of the earlier estimate is never approached
    let mut best = 0.0f64;
    for k in 0..=16 {
        let f = FuncExpr::monomial(k);
        let r = norm_hardy(ctx.lab, &f, 1.0)?.value / norm_dirichlet_type(ctx.lab, &f, 1.0)?.value;
        best = best.max(r);
    }
    t.le(best, 1.0 + ctx.tolerance, 0.0, || "sup over monomials".into());
    Ok(t.finish(
        ctx.tolerance,
        Some(ctx.rule_label()),
        json!({ "hardy_z": h, "dirichlet_z": d, "monomial_max_ratio": best }),
    ))
}

fn check_lemma4(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let corpus = ctx.corpus(ctx.lab.config.corpus);
    let mut t = Tally::new();
    for f in corpus.members() {
        let sup = norm_sup(ctx.lab, f);
        let s1 = norm_s1(ctx.lab, f)?;
        let b1 = norm_b1(ctx.lab, f)?;
        let tol = ctx.tolerance;
        t.le(sup.value, PI * s1.value + tol, sup.err_est + PI * s1.err_est, || f.render());
        t.le(sup.value, PI * b1.value + tol, sup.err_est + PI * b1.err_est, || f.render());
    }
    Ok(t.finish(
        ctx.tolerance,
        Some(format!("sup grid {} points; {}", ctx.lab.config.sup_grid, ctx.rule_label())),
        json!({ "corpus": corpus.len() }),
    ))
}

fn check_remark2(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let corpus = ctx.corpus(ctx.lab.config.corpus);
    let mut t = Tally::new();
    for f in corpus.members() {
        let s1 = norm_s1(ctx.lab, f)?;
        let b1 = norm_b1(ctx.lab, f)?;
        t.le(s1.value, b1.value + ctx.tolerance, s1.err_est + b1.err_est, || f.render());
    }
    Ok(t.finish(ctx.tolerance, Some(ctx.rule_label()), json!({ "corpus": corpus.len() })))
}

fn check_lemma5(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let corpus = ctx.corpus(20);
    let bound = ctx.tolerance;
    let mut t = Tally::new();
    let mut ratios = Vec::new();
    for f in corpus.nonconstant() {
        let d1 = f.jet(c(0.0, 0.0)).d1.norm();
        let first = norm_fpqs(ctx.lab, f, 1.0, -1.0, 1.0, 1)?;
        let second = norm_fpqs(ctx.lab, f, 1.0, -1.0, 1.0, 2)?.derivative_form;
        let a = first.derivative_form;
        let r = a.value / (second.value + d1);
        ratios.push(r);
        t.le(r, bound, 0.0, || f.render());
        t.ge(r, 1.0 / bound, 0.0, || f.render());
        if let Some(log) = first.log_kernel {
            let r = a.value / log.value;
            t.le(r, bound, 0.0, || format!("log kernel, {}", f.render()));
            t.ge(r, 1.0 / bound, 0.0, || format!("log kernel, {}", f.render()));
        }
    }
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
    Ok(t.finish(
        bound,
        Some(ctx.a_grid_label()),
        json!({ "min_ratio": lo, "max_ratio": hi }),
    ))
}

fn check_lemma6(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let lab = ctx.lab;
    let mut maps = origin_fixing_maps();
    maps.push(FuncExpr::poly_real(&[0.5, 0.5]));
    let mut t = Tally::new();
    let mut rows = Vec::new();
    for phi in &maps {
        let mut inner = 0.0f64;
        let mut outer = 0.0f64;
        for &a in lab.a_grid() {
            let comp = FuncExpr::compose(FuncExpr::moebius(a)?, phi.clone())?;
            let v = b1_on(&lab.rule, &comp)?;
            if a.norm() <= 0.9 + 1e-12 {
                inner = inner.max(v);
            }
            outer = outer.max(v);
        }
        rows.push(json!({ "phi": phi.render(), "sup_r_le_0.9": inner, "sup_grid": outer }));
        t.le(outer, ctx.tolerance * inner, 0.0, || phi.render());
    }
    Ok(t.finish(ctx.tolerance, Some(ctx.a_grid_label()), json!({ "maps": rows })))
}

fn check_thm1(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let lab = ctx.lab;
    let symbols = ctx.corpus(50);
    let mut fs = Corpus::generate(lab, ctx.seed.wrapping_add(1), 20).members().to_vec();
    fs.push(FuncExpr::poly_real(&[1.0]));
    let mut t = Tally::new();
    let mut max_ratio = 0.0f64;
    for g in symbols.members() {
        let op = spec(OpKind::Tg, g)?;
        let r = opnorm_lower(lab, &op, &fs)?;
        let centered = b1_on(&lab.rule, &g.centered())?;
        let upper = r.upper.expect("Tg has an upper bound");
        if centered > 0.0 {
            max_ratio = max_ratio.max(r.lower / centered);
        }
        t.ge(r.lower, centered * (1.0 - ctx.tolerance), 0.0, || g.render());
        t.le(r.lower, upper * (1.0 + ctx.tolerance), r.err_est, || g.render());
    }
    Ok(t.finish(
        ctx.tolerance,
        Some(ctx.rule_label()),
        json!({ "symbols": symbols.len(), "test_functions": fs.len(), "max_lower_over_norm": max_ratio }),
    ))
}

fn check_thm2(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let lab = ctx.lab;
    let mut rng = ctx.rng();
    let mut symbols = vec![
        FuncExpr::z(),
        FuncExpr::poly_real(&[1.0, 0.0, 1.0]),
        FuncExpr::scaled(c(0.5, 0.0), moebius(0.5))?,
    ];
    symbols.extend((0..3).map(|_| random_poly(&mut rng, 4, 1.0)));
    let witnesses: Vec<C64> = lab.a_grid().iter().copied().filter(|a| a.norm() <= 0.9 + 1e-12).collect();
    let mut fs = ctx.corpus(20).members().to_vec();
    for &a in &witnesses {
        if a.norm() >= 0.8 - 1e-12 {
            fs.push(FuncExpr::sum(FuncExpr::moebius(a)?, FuncExpr::constant(-a)?));
        }
    }
    let mut t = Tally::new();
    let mut rows = Vec::new();
    for g in &symbols {
        let op = spec(OpKind::Ig, g)?;
        let r = opnorm_lower(lab, &op, &fs)?;
        let upper = r.upper.expect("Ig has a declared bound");
        t.le(r.lower, upper * (1.0 + 1e-6), r.err_est, || g.render());
        let mut min_gap = f64::INFINITY;
        for &a in &witnesses {
            let atom = FuncExpr::moebius(a)?;
            let image = norm_b1(lab, &Image::new(&op, &atom)?)?;
            let ga = g.jet(a).value.norm();
            min_gap = min_gap.min(image.value - ga);
            t.ge(image.value, ga - ctx.tolerance, image.err_est, || format!("g = {}, a = {a}", g.render()));
        }
        rows.push(json!({
            "g": g.render(),
            "lower": r.lower,
            "upper": upper,
            "sup_g": r.constants.get("sup(g)"),
            "min_image_minus_g_at_a": min_gap,
        }));
    }
    Ok(t.finish(
        ctx.tolerance,
        Some(ctx.a_grid_label()),
        json!({ "ig_constant": lab.config.ig_constant, "symbols": rows }),
    ))
}

fn check_thm3(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let mut rng = ctx.rng();
    let mut t = Tally::new();
    let tz = OperatorSpec::bare(OpKind::Tz)?;
    let d = OperatorSpec::bare(OpKind::D)?;
    for _ in 0..100 {
        let f = random_series(&mut rng, 64);
        let n = f.degree() + 1;
        let back = apply(&d, &apply(&tz, &f, n)?, n)?;
        t.le(back.max_abs_diff(&f), ctx.tolerance, 0.0, || format!("degree {}", f.degree()));
        // T_z D F = F − F(0)
        let g = apply(&tz, &apply(&d, &f, n)?, n)?;
        let centered = &f - &TaylorSeries::constant(f.coeff(0));
        t.le(g.max_abs_diff(&centered), ctx.tolerance, 0.0, || format!("degree {}", f.degree()));
    }
    // ‖T_z f‖_{B₁} = ‖f‖_{𝒟¹}
    let lab = ctx.lab;
    let mut iso = 0.0f64;
    for f in ctx.corpus(10).members() {
        let lhs = norm_b1(lab, &Image::new(&tz, f)?)?;
        let rhs = norm_dirichlet_type(lab, f, 1.0)?;
        let gap = (lhs.value - rhs.value).abs();
        iso = iso.max(gap);
        t.le(gap, 1e-10 * rhs.value.max(1.0), lhs.err_est + rhs.err_est, || f.render());
    }
    Ok(t.finish(ctx.tolerance, None, json!({ "random_series": 100, "isometry_gap": iso })))
}

fn check_thm4(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let mut rng = ctx.rng();
    let mut t = Tally::new();
    let p = OperatorSpec::bare(OpKind::P)?;
    let tz = OperatorSpec::bare(OpKind::Tz)?;
    let d = OperatorSpec::bare(OpKind::D)?;
    let mz = OperatorSpec::with_symbol(OpKind::Mg, FuncExpr::z())?;
    for _ in 0..100 {
        let f = random_series(&mut rng, 64);
        let n = f.degree() + 2;
        let pf = apply(&p, &f, n)?;
        let conj = apply(&d, &apply(&mz, &apply(&tz, &f, n + 1)?, n + 1)?, n)?;
        let sum = &apply(&mz, &f, n)? + &apply(&tz, &f, n)?;
        t.le(pf.max_abs_diff(&conj), ctx.tolerance, 0.0, || format!("degree {}", f.degree()));
        t.le(pf.max_abs_diff(&sum), ctx.tolerance, 0.0, || format!("degree {}", f.degree()));
    }
    Ok(t.finish(ctx.tolerance, None, json!({ "random_series": 100 })))
}

fn check_thm5(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let lab = ctx.lab;
    let corpus = ctx.corpus(40);
    let r = product_constant_search(lab, ctx.seed, lab.config.search_iters, corpus.members())?;
    let mut t = Tally::new();
    for fam in [&r.quadratic, &r.atomic, &r.corpus] {
        t.le(fam.ratio, PRODUCT_CEILING, fam.err_est, || format!("f = {}; g = {}", fam.f, fam.g));
    }
    t.ge(r.quadratic.ratio, r.oracle * (1.0 - ctx.tolerance), r.quadratic.err_est, || {
        "search reproduces the quadratic oracle".into()
    });
    let runs: Vec<f64> = r.runs.iter().map(|x| x.ratio).collect();
    Ok(t.finish(
        ctx.tolerance,
        Some("search rule R=32 M=64; witnesses re-evaluated on the main rule".into()),
        json!({
            "ceiling": r.ceiling,
            "oracle": r.oracle,
            "oracle_grid": r.oracle_grid,
            "oracle_witness": r.oracle_witness,
            "quadratic": r.quadratic,
            "atomic": r.atomic,
            "corpus": r.corpus,
            "restart_ratios": runs,
        }),
    ))
}

fn check_thm6(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let mut t = Tally::new();
    let mut rows = Vec::new();
    for phi in origin_fixing_maps() {
        let r = cphi_bounded_probe(ctx.lab, &phi)?;
        let upper = r.upper.expect("origin-fixing map");
        t.le(r.lower, upper * (1.0 + ctx.tolerance), r.err_est, || phi.render());
        rows.push(json!({ "phi": phi.render(), "report": r }));
    }
    Ok(t.finish(ctx.tolerance, Some(ctx.a_grid_label()), json!({ "maps": rows })))
}

fn check_thm7(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let lab = ctx.lab;
    let symbols = ctx.corpus(15);
    let fs = Corpus::generate(lab, ctx.seed.wrapping_add(1), 15);
    let mut t = Tally::new();
    for g in symbols.members() {
        let op = spec(OpKind::Mg, g)?;
        let one = FuncExpr::poly_real(&[1.0]);
        let image = b1_on(&lab.rule, &Image::new(&op, &one)?)?;
        let norm = b1_on(&lab.rule, g)?;
        t.le((image - norm).abs(), 1e-12 * norm.max(1.0), 0.0, || g.render());
        let r = opnorm_lower(lab, &op, fs.members())?;
        t.ge(r.lower.max(image), norm * (1.0 - ctx.tolerance), 0.0, || g.render());
        t.le(r.lower, r.upper.expect("Mg bound") * (1.0 + ctx.tolerance), r.err_est, || g.render());
    }
    Ok(t.finish(ctx.tolerance, Some(ctx.rule_label()), json!({ "symbols": symbols.len() })))
}

fn check_thm8(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let lab = ctx.lab;
    let mut rng = ctx.rng();
    let maps = [
        FuncExpr::poly_real(&[0.0, 0.5]),
        FuncExpr::monomial(2),
        FuncExpr::poly_real(&[0.0, 0.7, 0.3]),
    ];
    let symbols = [
        FuncExpr::poly_real(&[0.5, 1.0]),
        FuncExpr::poly_real(&[1.0, 0.0, 1.0]),
        random_poly(&mut rng, 3, 1.0),
    ];
    let fs = [
        FuncExpr::z(),
        FuncExpr::poly_real(&[1.0, 1.0, 1.0]),
        random_poly(&mut rng, 3, 1.0),
    ];
    let n_series = lab.degree();
    let mut t = Tally::new();
    let mut max_residual = 0.0f64;
    let mut max_ratio_over_constant = 0.0f64;
    for phi in &maps {
        for kind in [OpKind::Mg, OpKind::Tg, OpKind::Ig] {
            for (gi, g) in symbols.iter().enumerate() {
                let inner = spec(kind, g)?;
                for f in &fs {
                    for n in 0..=5 {
                        let res = intertwine_residual(phi, &inner, f, n, n_series)?;
                        max_residual = max_residual.max(res);
                        t.le(res, ctx.tolerance, 0.0, || {
                            format!("{kind}, φ = {}, g = {}, f = {}, n = {n}", phi.render(), g.render(), f.render())
                        });
                    }
                }
                if gi > 0 {
                    continue;
                }
                for f in &fs[..2] {
                    for n in 0..=6 {
                        let ratio = deddens_ratio(lab, phi, &inner, f, n)?;
                        let bound = deddens_constant(lab, &inner, phi, n)?;
                        max_ratio_over_constant = max_ratio_over_constant.max(ratio / bound);
                        t.le(ratio, bound * (1.0 + 1e-6), 0.0, || {
                            format!("Deddens {kind}, φ = {}, f = {}, n = {n}", phi.render(), f.render())
                        });
                    }
                }
            }
        }
    }
    Ok(t.finish(
        ctx.tolerance,
        Some(format!("series degree {n_series}; {}", ctx.rule_label())),
        json!({ "max_residual": max_residual, "max_ratio_over_constant": max_ratio_over_constant }),
    ))
}

fn check_thm9(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let lab = ctx.lab;
    let mut rng = ctx.rng();
    let mut symbols = vec![moebius(0.7), moebius(0.9)];
    for _ in 0..4 {
        let pairs: Vec<(C64, C64)> = (0..3)
            .map(|_| {
                let w = c(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
                let a = C64::from_polar(0.9 * rng.gen::<f64>().sqrt(), 2.0 * PI * rng.gen::<f64>());
                (w, a)
            })
            .collect();
        symbols.push(FuncExpr::atoms(pairs)?);
    }
    let radii = [0.9, 0.99, 0.999];
    let mut t = Tally::new();
    let mut rows = Vec::new();
    for g in &symbols {
        let table = tg_essnorm_decay(lab, g, &radii)?;
        for w in table.windows(2) {
            t.le(w[1].distance, w[0].distance, w[0].err_est + w[1].err_est, || g.render());
        }
        let (first, last) = (table[0], table[table.len() - 1]);
        t.le(last.distance, ctx.tolerance * first.distance, last.err_est, || g.render());
        rows.push(json!({ "g": g.render(), "decay": table }));
    }
    Ok(t.finish(ctx.tolerance, Some(ctx.rule_label()), json!({ "symbols": rows })))
}

fn check_thm10(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let lab = ctx.lab;
    let mut rng = ctx.rng();
    let mut symbols = vec![FuncExpr::z(), FuncExpr::monomial(4), FuncExpr::poly_real(&[0.2, -0.5, 0.0, 0.3])];
    symbols.extend((0..5).map(|_| random_poly(&mut rng, 4, 1.0)));
    let radii = [0.9, 0.99, 0.999];
    let fs = ctx.corpus(20);
    let mut t = Tally::new();
    let mut rows = Vec::new();
    for g in &symbols {
        let sup = norm_sup(lab, g);
        let seq = radial_sequence_to_max(lab, g, &radii);
        let r = ig_essnorm_lower(lab, g, &seq)?;
        t.ge(r.lower, ctx.tolerance * sup.value, sup.err_est, || g.render());
        // ‖I_g‖ ≥ ‖I_g‖_e: the operator-norm lower bound over the corpus and
        // the normalized witnesses must dominate the essential lower bound
        let op = spec(OpKind::Ig, g)?;
        let on = opnorm_lower(lab, &op, fs.members())?;
        // ‖I_g f_a‖/‖f_a‖ tends to |g(ζ)| from below as a → ζ, lagging
        // |g(a)|; one radius deeper than the sequence closes the gap
        let deeper = radial_sequence_to_max(lab, g, &[1.0 - (1.0 - radii[radii.len() - 1]) / 10.0]);
        let deep = ig_essnorm_lower(lab, g, &deeper)?;
        let (best_witness, witness_err) = r
            .rows
            .iter()
            .chain(&deep.rows)
            .map(|w| (w.normalized, w.err_est))
            .fold((0.0, 0.0), |acc, w| if w.0 > acc.0 { w } else { acc });
        let (lower, err) = if best_witness > on.lower {
            (best_witness, witness_err)
        } else {
            (on.lower, on.err_est)
        };
        rows.push(json!({
            "g": g.render(),
            "sup": sup.value,
            "ess_lower": r.lower,
            "opnorm_lower_corpus": on.lower,
            "opnorm_lower_witnesses": best_witness,
            "witnesses": r.rows,
        }));
        t.le(r.lower, lower * (1.0 + 1e-6), err, || format!("‖I_g‖ consistency, g = {}", g.render()));
    }
    Ok(t.finish(
        ctx.tolerance,
        Some(format!("radial a-sequence {radii:?} toward the boundary maximizer")),
        json!({ "symbols": rows }),
    ))
}

fn check_thm11(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let lab = ctx.lab;
    let g = FuncExpr::z();
    let op = spec(OpKind::Mg, &g)?;
    let radii = [0.3, 0.6, 0.9, 0.99, 0.999];
    let mut ratios = Vec::new();
    for &r in &radii {
        let (num, den) = crate::probes::normalized_witness(lab, &op, c(r, 0.0))?;
        ratios.push((r, num.value / den.value, (num.err_est + den.err_est) / den.value));
    }
    let decay = tg_essnorm_decay(lab, &g, &[0.9, 0.99, 0.999])?;
    let mut t = Tally::new();
    // a compact operator maps the weakly null witnesses to a null sequence
    let (first, last) = (ratios[0], ratios[ratios.len() - 1]);
    t.le(last.1, ctx.tolerance * first.1, last.2, || {
        format!("‖M_z f_a‖/‖f_a‖ at a = {}, f_a = σ_a − a", last.0)
    });
    let rows: Vec<Value> = ratios
        .iter()
        .map(|(r, v, e)| json!({ "a": r, "normalized_image": v, "err_est": e }))
        .collect();
    Ok(t.finish(
        ctx.tolerance,
        Some(ctx.rule_label()),
        json!({ "g": g.render(), "witnesses": rows, "symbol_decay": decay }),
    ))
}

fn portrait_check(ctx: &Ctx, kind: OpKind) -> Result<(Tally, Value), ProbeError> {
    let lab = ctx.lab;
    let g = FuncExpr::z();
    let mut corpus = vec![FuncExpr::poly_real(&[1.0]), FuncExpr::z()];
    corpus.extend(ctx.corpus(10).members().iter().skip(1).take(6).cloned());
    let rect = Rect {
        x0: -2.0,
        x1: 2.0,
        y0: -2.0,
        y1: 2.0,
    };
    let portrait = resolvent_portrait(lab, kind, &g, rect, 0.1, &corpus)?;
    let mut t = Tally::new();
    let mut considered = 0usize;
    let mut blowups = 0usize;
    let mut max_finite_lb = 0.0f64;
    for cell in &portrait.cells {
        let r = cell.lambda.norm();
        if r > 0.9 && r < 1.1 {
            continue;
        }
        considered += 1;
        let label = || format!("λ = {}", cell.lambda);
        match (cell.flag, cell.winding) {
            (Flag::Indeterminate, _) | (_, None) => t.le(1.0, 0.0, 0.0, label),
            (flag, Some(w)) => {
                let blow = flag == Flag::Blowup;
                blowups += blow as usize;
                t.le(if blow == (w >= 1) { 0.0 } else { 1.0 }, 0.0, 0.0, label);
                if !blow {
                    max_finite_lb = max_finite_lb.max(cell.resolvent_lb.unwrap_or(0.0));
                }
            }
        }
    }
    Ok((
        t,
        json!({
            "g": g.render(),
            "grid": "[-2,2]x[-2,2] step 0.1, annulus 0.9<|λ|<1.1 excluded",
            "cells_checked": considered,
            "blowup_cells": blowups,
            "max_finite_resolvent_lb": max_finite_lb,
        }),
    ))
}

fn check_thm12(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let (mut t, details) = portrait_check(ctx, OpKind::Mg)?;
    let lab = ctx.lab;
    let corpus = [FuncExpr::poly_real(&[1.0]), FuncExpr::z()];
    let (flag, lb, _) = crate::probes::resolvent_estimate(lab, OpKind::Mg, &FuncExpr::z(), c(2.0, 0.0), &corpus)?;
    let lb = lb.unwrap_or(f64::INFINITY);
    t.le(if flag == Flag::Finite { 0.0 } else { 1.0 }, 0.0, 0.0, || "λ = 2 finite".into());
    t.le(lb, ctx.tolerance, 0.0, || "resolvent estimate at λ = 2".into());
    Ok(t.finish(
        ctx.tolerance,
        Some(format!("λ-grid step 0.1; {} boundary samples", crate::probes::WINDING_SAMPLES)),
        merge(details, json!({ "resolvent_lb_at_2": lb })),
    ))
}

fn check_thm14(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let (mut t, details) = portrait_check(ctx, OpKind::Ig)?;
    let mut rng = ctx.rng();
    let mut symbols = vec![FuncExpr::z()];
    symbols.extend((0..5).map(|_| random_poly(&mut rng, 6, 1.0)));
    let n = ctx.lab.degree();
    for g in &symbols {
        let op = spec(OpKind::Ig, g)?;
        let k = c(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        let image = apply(&op, &TaylorSeries::constant(k), n)?;
        let peak = image.coeffs().iter().map(|v| v.norm()).fold(0.0, f64::max);
        t.le(peak, 0.0, 0.0, || format!("I_g(const) for g = {}", g.render()));
    }
    let corpus = [FuncExpr::poly_real(&[1.0]), FuncExpr::z()];
    let (flag, lb, _) = crate::probes::resolvent_estimate(ctx.lab, OpKind::Ig, &FuncExpr::z(), c(2.0, 0.0), &corpus)?;
    t.le(if flag == Flag::Finite { 0.0 } else { 1.0 }, 0.0, 0.0, || "λ = 2 finite".into());
    Ok(t.finish(
        ctx.tolerance,
        Some(format!("λ-grid step 0.1; {} boundary samples", crate::probes::WINDING_SAMPLES)),
        merge(details, json!({ "resolvent_lb_at_2": lb })),
    ))
}

fn check_thm13(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let lab = ctx.lab;
    let mut rng = ctx.rng();
    let mut t = Tally::new();
    let n = lab.degree();
    for i in 0..20 {
        let g = if i % 2 == 0 {
            random_poly(&mut rng, 8, 1.0)
        } else {
            let a = C64::from_polar(0.9 * rng.gen::<f64>(), 2.0 * PI * rng.gen::<f64>());
            FuncExpr::moebius(a)?
        };
        let m = operator_matrix(&spec(OpKind::Tg, &g)?, n)?;
        t.le(m.max_upper(), 1e-14, 0.0, || format!("T_g section, g = {}", g.render()));
    }
    let degree = 256;
    let k_max = 64;
    let symbols = [
        FuncExpr::z(),
        FuncExpr::monomial(2),
        moebius(0.5),
        FuncExpr::poly_real(&[0.1, 0.3, -0.2]),
    ];
    let fs = [
        FuncExpr::poly_real(&[1.0]),
        FuncExpr::monomial(3),
        FuncExpr::sum(moebius(0.3), FuncExpr::constant(c(-0.3, 0.0))?),
        random_poly(&mut rng, 8, 1.0),
    ];
    let mut worst = 0.0f64;
    for g in &symbols {
        let gs = g.to_series(degree + 1).series;
        for f in &fs {
            let f_s = f.to_series(degree).series;
            for lambda in [c(0.5, 0.0), c(1.0, 1.0), c(-2.0, 0.0)] {
                let tail = neumann_tail(&gs, &f_s, lambda, k_max, degree)?;
                worst = worst.max(tail);
                t.le(tail, ctx.tolerance, 0.0, || {
                    format!("g = {}, f = {}, λ = {lambda}", g.render(), f.render())
                });
            }
        }
    }
    let check = apply_series(OpKind::Tg, Some(&TaylorSeries::monomial(1)), &TaylorSeries::constant(c(1.0, 0.0)), 4)?;
    t.le((check.coeff(1) - c(1.0, 0.0)).norm(), 1e-15, 0.0, || "T_z 1 = z".into());
    Ok(t.finish(
        ctx.tolerance,
        Some(format!("sections of size {}; Neumann K = {k_max}, series degree {degree}", n + 1)),
        json!({ "max_tail": worst }),
    ))
}

fn check_remark3(ctx: &Ctx) -> Result<Outcome, ProbeError> {
    let lab = ctx.lab;
    let corpus = ctx.corpus(30);
    let mut t = Tally::new();
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for f in corpus.members() {
        let alt = norm_z1_alt(lab, f)?;
        let b1 = norm_b1(lab, f)?;
        t.le(alt.value, b1.value + 1e-6, alt.err_est + b1.err_est, || f.render());
        let zp = norm_zp(lab, f, 1.0)?;
        let d1 = f.jet(c(0.0, 0.0)).d1.norm();
        let ratio = zp.value / (alt.value + d1);
        if ratio.is_finite() {
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        t.le(ratio, ctx.tolerance, 0.0, || f.render());
        t.ge(ratio, 1.0 / ctx.tolerance, 0.0, || f.render());
        let sup = norm_sup(lab, f);
        t.le(sup.value, PI * b1.value + 1e-6, sup.err_est + PI * b1.err_est, || f.render());
    }
    Ok(t.finish(
        ctx.tolerance,
        Some(ctx.a_grid_label()),
        json!({ "min_ratio": lo, "max_ratio": hi }),
    ))
}

static REGISTRY: &[CheckSpec] = &[
    CheckSpec {
        id: "quad",
        statement: "∫dA = 1, ∫|z|dA = 2/3, ∫|z|²dA = 1/2 on the disk rule",
        default_tolerance: 1e-12,
        run: check_quad,
    },
    CheckSpec {
        id: "lemma1",
        statement: "∑|aₙ|/(n+1) ≤ π‖f‖_{H¹}",
        default_tolerance: 1e-8,
        run: check_lemma1,
    },
    CheckSpec {
        id: "lemma2",
        statement: "∫₀¹ xF(x)dx ≥ ½∫₀¹ F(x)dx for nondecreasing F",
        default_tolerance: 0.0,
        run: check_lemma2,
    },
    CheckSpec {
        id: "lemma3",
        statement: "‖f‖_{H¹} ≤ ‖f‖_{𝒟¹}, with equality at f = z",
        default_tolerance: 1e-12,
        run: check_lemma3,
    },
    CheckSpec {
        id: "lemma4",
        statement: "‖f‖_∞ ≤ π‖f‖_{S¹} and ‖f‖_∞ ≤ π‖f‖_{B₁}",
        default_tolerance: 1e-6,
        run: check_lemma4,
    },
    CheckSpec {
        id: "lemma5",
        statement: "first- and second-derivative forms of F(1,−1,1) are equivalent",
        default_tolerance: 20.0,
        run: check_lemma5,
    },
    CheckSpec {
        id: "lemma6",
        statement: "sup_a ‖σ_a∘φ‖_{B₁} stays finite for bounded C_φ (grid sup ≤ tol × sup over |a| ≤ 0.9)",
        default_tolerance: 2.0,
        run: check_lemma6,
    },
    CheckSpec {
        id: "thm1",
        statement: "‖g−g(0)‖_{B₁} ≤ ‖T_g‖ ≤ (1+π)‖g−g(0)‖_{B₁}",
        default_tolerance: 1e-6,
        run: check_thm1,
    },
    CheckSpec {
        id: "thm2",
        statement: "‖I_gσ_a‖_{B₁} ≥ |g(a)| and ‖I_g‖ ≤ C(‖g‖_∞ + ‖g‖_{Z₁})",
        default_tolerance: 1e-6,
        run: check_thm2,
    },
    CheckSpec {
        id: "thm3",
        statement: "T_z: 𝒟¹ → B₁⁰ is an isometric bijection with inverse D",
        default_tolerance: 1e-13,
        run: check_thm3,
    },
    CheckSpec {
        id: "thm4",
        statement: "P = M_z + T_z = D M_z T_z",
        default_tolerance: 1e-13,
        run: check_thm4,
    },
    CheckSpec {
        id: "thm5",
        statement: "‖fg‖_{B₁} ≤ (2π+2)‖f‖_{B₁}‖g‖_{B₁}; search reproduces the quadratic oracle",
        default_tolerance: 0.01,
        run: check_thm5,
    },
    CheckSpec {
        id: "thm6",
        statement: "‖C_φ‖ ≤ C(‖φ'‖²_∞ + ‖φ‖_{Z₁}‖φ'‖_∞ + ‖φ'‖_∞ + 1) for φ(0) = 0",
        default_tolerance: 1e-6,
        run: check_thm6,
    },
    CheckSpec {
        id: "thm7",
        statement: "‖M_g1‖_{B₁} = ‖g‖_{B₁} ≤ ‖M_g‖ ≤ (2π+2)‖g‖_{B₁}",
        default_tolerance: 1e-6,
        run: check_thm7,
    },
    CheckSpec {
        id: "thm8",
        statement: "C_φⁿ X = X_{g∘φₙ} C_φⁿ and sup_n ‖C_φⁿ X f‖/‖C_φⁿ f‖ < ∞ for X ∈ {M_g, T_g, I_g}",
        default_tolerance: 1e-10,
        run: check_thm8,
    },
    CheckSpec {
        id: "thm9",
        statement: "‖g − g_r‖_{B₁} decreases to 0, so T_g is compact",
        default_tolerance: 0.1,
        run: check_thm9,
    },
    CheckSpec {
        id: "thm10",
        statement: "‖I_g‖_e ≥ sup|g(a_n)| → ‖g‖_∞ along σ_{a_n} − a_n",
        default_tolerance: 0.95,
        run: check_thm10,
    },
    CheckSpec {
        id: "thm11",
        statement: "M_g compact: ‖M_g f_n‖/‖f_n‖ → 0 for f_n = σ_{a_n} − a_n",
        default_tolerance: 0.1,
        run: check_thm11,
    },
    CheckSpec {
        id: "thm12",
        statement: "σ(M_g) = closure of g(𝔻): BLOWUP ⟺ winding ≥ 1",
        default_tolerance: 1e3,
        run: check_thm12,
    },
    CheckSpec {
        id: "thm13",
        statement: "σ(T_g) = {0}: strictly lower triangular sections and convergent Neumann series",
        default_tolerance: 1e-8,
        run: check_thm13,
    },
    CheckSpec {
        id: "thm14",
        statement: "σ(I_g) = {0} ∪ closure of g(𝔻): BLOWUP ⟺ winding ≥ 1; I_g kills constants",
        default_tolerance: 1e3,
        run: check_thm14,
    },
    CheckSpec {
        id: "remark1",
        statement: "‖z‖_{H¹} = ‖z‖_{𝒟¹} = 1",
        default_tolerance: 1e-10,
        run: check_remark1,
    },
    CheckSpec {
        id: "remark2",
        statement: "‖f‖_{S¹} ≤ ‖f‖_{B₁}",
        default_tolerance: 1e-6,
        run: check_remark2,
    },
    CheckSpec {
        id: "remark3",
        statement: "|f(0)| + sup_a ∫|f''|(1−|σ_a|²)dA ≤ ‖f‖_{B₁}; the two Z₁ forms agree within tol",
        default_tolerance: 20.0,
        run: check_remark3,
    },
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_covers_all_statements() {
        let ids: Vec<&str> = registry().iter().map(|c| c.id).collect();
        assert!(ids.len() >= 23);
        for k in 1..=6 {
            assert!(ids.contains(&format!("lemma{k}").as_str()));
        }
        for k in 1..=14 {
            assert!(ids.contains(&format!("thm{k}").as_str()));
        }
        for k in 1..=3 {
            assert!(ids.contains(&format!("remark{k}").as_str()));
        }
        let unique: BTreeSet<&str> = ids.iter().copied().collect();
        assert_eq!(unique.len(), ids.len());
    }

    #[test]
    fn resolve_rejects_unknown_ids() {
        assert!(matches!(resolve(&["unknown".into()]), Err(HarnessError::UnknownCheck(_))));
        assert!(matches!(resolve(&["quad,nope".into()]), Err(HarnessError::UnknownCheck(_))));
        assert_eq!(resolve(&["thm3,quad".into()]).unwrap().len(), 2);
        assert_eq!(resolve(&["all".into()]).unwrap().len(), registry().len());
    }

    #[test]
    fn tally_separates_violation_from_inconclusive() {
        let mut t = Tally::new();
        t.le(1.0, 2.0, 0.0, String::new);
        assert_eq!(t.verdict, Verdict::Pass);
        t.le(2.05, 2.0, 0.1, || "close".into());
        assert_eq!(t.verdict, Verdict::Inconclusive);
        t.le(3.0, 2.0, 0.1, || "far".into());
        assert_eq!(t.verdict, Verdict::Violated);
        t.ge(f64::NAN, 0.0, 0.0, String::new);
        assert_eq!(t.verdict, Verdict::Violated);
    }

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a(""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a("a"), 0xaf63_dc4c_8601_ec8c);
    }

    #[test]
    fn csv_shapes() {
        let lab = Lab::with_defaults();
        let empty = assemble(&lab, Vec::new());
        assert_eq!(empty.to_csv(), "id,pass,measured,bound,tolerance,runtime_ms\n");
        let one = run_suite(&lab, &["quad".into()]).unwrap();
        assert_eq!(one.to_csv().lines().count(), 2);
        assert!(one.all_pass());
    }
}
