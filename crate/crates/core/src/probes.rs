//! Quantitative instruments: operator-norm lower bounds over a test corpus,
//! essential-norm constructions, resolvent portraits and the search for the
//! product constant in `‖fg‖ ≤ C‖f‖‖g‖`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::analytic::{integrate_from_origin, Analytic, Jet};
use crate::funcexpr::{ExprError, FuncExpr};
use crate::lab::Lab;
use crate::operators::{apply_series, Image, OpKind, OperatorError, OperatorSpec};
use crate::quadrature::{DiskRule, QuadError};
use crate::series::{SeriesError, TaylorSeries};
use crate::spaces::{b1_on, norm_b1, norm_b1_at, norm_sup, norm_zp, NormValue, SpaceError};

/// The constant `2π + 2` of the product estimate.
pub const PRODUCT_CEILING: f64 = 2.0 * PI + 2.0;
/// Portrait cells whose resolvent estimate exceeds this are marked BLOWUP.
pub const BLOWUP_RESOLVENT: f64 = 1e3;
/// Portrait cells whose reciprocal series has a coefficient above this are
/// marked BLOWUP.
pub const BLOWUP_COEFFICIENT: f64 = 1e6;
/// Boundary samples for winding numbers.
pub const WINDING_SAMPLES: usize = 1024;
/// Winding numbers are refused closer than this to the image curve.
pub const CURVE_CLEARANCE: f64 = 1e-9;
/// Largest Möbius parameter reached by the constant search.
pub const SEARCH_RADIUS: f64 = 0.95;
/// Largest atom radius in the corpus; larger radii are under-resolved by the
/// default angular rule.
pub const CORPUS_ATOM_RADIUS: f64 = 0.9;

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("λ = {lambda} lies within {distance:e} of the boundary curve; refine the grid")]
    NearCurve { lambda: C64, distance: f64 },
    #[error("invalid probe input: {0}")]
    Input(String),
}

// ---------------------------------------------------------------------------
// corpus

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    Monomial,
    Atom,
    ShiftedAtom,
    AtomicCombination,
    RandomPolynomial,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub seed: u64,
    members: Vec<FuncExpr>,
    families: Vec<Family>,
}

fn random_in_disk(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    let r = radius * rng.gen::<f64>().sqrt();
    C64::from_polar(r, 2.0 * PI * rng.gen::<f64>())
}

fn random_unit_box(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

impl Corpus {
    /// Deterministic corpus of `size` functions, cycling through monomials
    /// `z⁰…z¹⁶`, atoms `σ_a`, shifted atoms `σ_a − a`, random combinations
    /// of two or three atoms with unit `ℓ¹` weight, and random polynomials of
    /// degree at most 32 with coefficients in the unit box.
    pub fn generate(lab: &Lab, seed: u64, size: usize) -> Corpus {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let centres: Vec<C64> = lab
            .a_grid()
            .iter()
            .copied()
            .filter(|a| a.norm() <= CORPUS_ATOM_RADIUS + 1e-12)
            .collect();
        let mut members = Vec::with_capacity(size);
        let mut families = Vec::with_capacity(size);
        for i in 0..size {
            let k = i / 5;
            let (family, expr) = match i % 5 {
                0 => (Family::Monomial, FuncExpr::monomial(k % 17)),
                1 => {
                    let a = centres[k % centres.len()];
                    (Family::Atom, FuncExpr::moebius(a).expect("grid inside disk"))
                }
                2 => {
                    let a = centres[(k + 1) % centres.len()];
                    let e = FuncExpr::sum(
                        FuncExpr::moebius(a).expect("grid inside disk"),
                        FuncExpr::constant(-a).expect("finite"),
                    );
                    (Family::ShiftedAtom, e)
                }
                3 => {
                    let count = rng.gen_range(2..=3);
                    let raw: Vec<(C64, C64)> = (0..count)
                        .map(|_| (random_unit_box(&mut rng), random_in_disk(&mut rng, CORPUS_ATOM_RADIUS)))
                        .collect();
                    let total: f64 = raw.iter().map(|(c, _)| c.norm()).sum::<f64>().max(1e-300);
                    let pairs = raw.into_iter().map(|(c, a)| (c / total, a)).collect();
                    (
                        Family::AtomicCombination,
                        FuncExpr::atoms(pairs).expect("parameters inside disk"),
                    )
                }
                _ => {
                    let degree = rng.gen_range(0..=32);
                    let coeffs = (0..=degree).map(|_| random_unit_box(&mut rng)).collect();
                    (Family::RandomPolynomial, FuncExpr::poly(coeffs).expect("finite"))
                }
            };
            members.push(expr);
            families.push(family);
        }
        Corpus {
            seed,
            members,
            families,
        }
    }

    pub fn members(&self) -> &[FuncExpr] {
        &self.members
    }

    pub fn family(&self, i: usize) -> Family {
        self.families[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members whose value is not constant on the disk.
    pub fn nonconstant(&self) -> impl Iterator<Item = &FuncExpr> {
        self.members.iter().filter(|f| !is_constant(f))
    }
}

fn is_constant(f: &FuncExpr) -> bool {
    [C64::new(0.3, 0.1), C64::new(-0.5, 0.4), C64::new(0.1, -0.7)]
        .iter()
        .all(|&z| f.jet(z).d1 == C64::new(0.0, 0.0))
}

// ---------------------------------------------------------------------------
// operator-norm bounds

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub lower: f64,
    pub upper: Option<f64>,
    /// Quadrature error of the lower bound at the witness.
    pub err_est: f64,
    pub witness: String,
    pub constants: BTreeMap<String, f64>,
}

/// `f'` as a pointwise function; only values are available.
struct Derivative<'a>(&'a FuncExpr);

impl Analytic for Derivative<'_> {
    fn value(&self, z: C64) -> C64 {
        self.0.jet(z).d1
    }
    fn derivs(&self, z: C64) -> (C64, C64) {
        (self.0.jet(z).d2, C64::new(f64::NAN, f64::NAN))
    }
}

/// `‖op f‖_{B₁}` on a single rule; `D` goes through the series of `f`.
fn image_b1(lab: &Lab, rule: &DiskRule, op: &OperatorSpec, f: &FuncExpr) -> Result<f64, ProbeError> {
    if op.kind() == OpKind::D {
        let s = f.to_series(lab.degree()).series.derivative();
        return Ok(b1_on(rule, &s)?);
    }
    let image = Image::new(op, f)?;
    Ok(b1_on(rule, &image)?)
}

/// Upper bound constants for `op`, where one is available.
pub fn upper_constant(lab: &Lab, op: &OperatorSpec) -> Result<(Option<f64>, BTreeMap<String, f64>), ProbeError> {
    let mut c = BTreeMap::new();
    let upper = match (op.kind(), op.symbol()) {
        (OpKind::Tg, Some(g)) => {
            let centered = norm_b1(lab, &g.centered())?.value;
            c.insert("1+pi".into(), 1.0 + PI);
            c.insert("b1(g-g(0))".into(), centered);
            Some((1.0 + PI) * centered)
        }
        (OpKind::Mg, Some(g)) => {
            let n = norm_b1(lab, g)?.value;
            c.insert("2pi+2".into(), PRODUCT_CEILING);
            c.insert("b1(g)".into(), n);
            Some(PRODUCT_CEILING * n)
        }
        (OpKind::Ig, Some(g)) => {
            let sup = norm_sup(lab, g).value;
            let z1 = norm_zp(lab, g, 1.0)?.value;
            c.insert("ig_constant".into(), lab.config.ig_constant);
            c.insert("sup(g)".into(), sup);
            c.insert("z1(g)".into(), z1);
            Some(lab.config.ig_constant * (sup + z1))
        }
        (OpKind::Cphi, Some(phi)) => cphi_upper(lab, phi, &mut c)?,
        (OpKind::Tz, None) => {
            // ‖T_z f‖_{B₁} = ‖f‖_{𝒟¹} ≤ ‖f‖_{B₁}·(1 + π)
            c.insert("1+pi".into(), 1.0 + PI);
            Some(1.0 + PI)
        }
        (OpKind::P, None) => {
            // P = M_z + T_z
            c.insert("3pi+3".into(), 3.0 * PI + 3.0);
            Some(3.0 * PI + 3.0)
        }
        _ => None,
    };
    Ok((upper, c))
}

fn cphi_upper(
    lab: &Lab,
    phi: &FuncExpr,
    c: &mut BTreeMap<String, f64>,
) -> Result<Option<f64>, ProbeError> {
    if phi.jet(C64::new(0.0, 0.0)).value.norm() > crate::operators::ORIGIN_SLACK {
        return Ok(None);
    }
    let d_inf = norm_sup(lab, &Derivative(phi)).value;
    let z1 = norm_zp(lab, phi, 1.0)?.value;
    let bracket = d_inf * d_inf + z1 * d_inf + d_inf + 1.0;
    c.insert("sup(phi')".into(), d_inf);
    c.insert("z1(phi)".into(), z1);
    c.insert("bracket".into(), bracket);
    c.insert("cphi_constant".into(), lab.config.cphi_constant);
    Ok(Some(lab.config.cphi_constant * bracket))
}

/// `max_f ‖op f‖_{B₁}/‖f‖_{B₁}` over `corpus` on the base rule, with the
/// maximizer re-evaluated on the refined rule for the error estimate.
pub fn opnorm_lower(lab: &Lab, op: &OperatorSpec, corpus: &[FuncExpr]) -> Result<BoundReport, ProbeError> {
    let mut best: Option<(f64, usize)> = None;
    for (i, f) in corpus.iter().enumerate() {
        let den = b1_on(&lab.rule, f)?;
        if !(den > 1e-12) {
            continue;
        }
        let ratio = image_b1(lab, &lab.rule, op, f)? / den;
        if best.map_or(true, |(b, _)| ratio > b) {
            best = Some((ratio, i));
        }
    }
    let (lower, i) = best.ok_or_else(|| ProbeError::Input("corpus has no nonzero member".into()))?;
    let err_est = match lab.rule.refined() {
        Some(fine) => {
            let f = &corpus[i];
            (image_b1(lab, fine, op, f)? / b1_on(fine, f)? - lower).abs()
        }
        None => 0.0,
    };
    let (upper, constants) = upper_constant(lab, op)?;
    Ok(BoundReport {
        lower,
        upper,
        err_est,
        witness: corpus[i].render(),
        constants,
    })
}

// ---------------------------------------------------------------------------
// essential norms

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayRow {
    pub r: f64,
    pub distance: f64,
    pub err_est: f64,
}

/// Rows `(r, ‖g − g_r‖_{B₁})`.
pub fn tg_essnorm_decay(lab: &Lab, g: &FuncExpr, radii: &[f64]) -> Result<Vec<DecayRow>, ProbeError> {
    radii
        .iter()
        .map(|&r| {
            let gr = FuncExpr::dilate(r, g.clone())?;
            let v = norm_b1(lab, &FuncExpr::difference(g.clone(), gr))?;
            Ok(DecayRow {
                r,
                distance: v.value,
                err_est: v.err_est,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IgWitness {
    pub a: C64,
    /// `|g(a)|`.
    pub g_abs: f64,
    /// `‖I_g f_a‖_{B₁}` with `f_a = σ_a − a`.
    pub image_norm: f64,
    /// `‖f_a‖_{B₁}`.
    pub witness_norm: f64,
    /// `‖I_g f_a‖ / ‖f_a‖`.
    pub normalized: f64,
    /// Quadrature error of `normalized`.
    pub err_est: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IgEssReport {
    /// `max_n |g(a_n)|`.
    pub lower: f64,
    pub rows: Vec<IgWitness>,
}

/// Lower bound `max |g(a_n)|` for `‖I_g‖_e` with witnesses `σ_{a_n} − a_n`.
/// Witness norms are integrated in coordinates adapted to `a_n`.
pub fn ig_essnorm_lower(lab: &Lab, g: &FuncExpr, a_seq: &[C64]) -> Result<IgEssReport, ProbeError> {
    let op = OperatorSpec::with_symbol(OpKind::Ig, g.clone())?;
    let mut rows = Vec::with_capacity(a_seq.len());
    for &a in a_seq {
        let (image, witness) = normalized_witness(lab, &op, a)?;
        rows.push(IgWitness {
            a,
            g_abs: g.jet(a).value.norm(),
            image_norm: image.value,
            witness_norm: witness.value,
            normalized: image.value / witness.value,
            err_est: (image.err_est + witness.err_est * image.value / witness.value) / witness.value,
        });
    }
    let lower = rows.iter().map(|r| r.g_abs).fold(0.0, f64::max);
    Ok(IgEssReport { lower, rows })
}

/// `(‖op f_a‖_{B₁}, ‖f_a‖_{B₁})` for `f_a = σ_a − a`, integrated in
/// coordinates adapted to `a`.
pub fn normalized_witness(lab: &Lab, op: &OperatorSpec, a: C64) -> Result<(NormValue, NormValue), ProbeError> {
    let f = FuncExpr::sum(FuncExpr::moebius(a)?, FuncExpr::constant(-a)?);
    let image = norm_b1_at(lab, &Image::new(op, &f)?, a)?;
    let witness = norm_b1_at(lab, &f, a)?;
    Ok((image, witness))
}

/// `a_n = ρ_n e^{iθ}` with `θ` the boundary maximizer of `|g|`.
pub fn radial_sequence_to_max(lab: &Lab, g: &FuncExpr, radii: &[f64]) -> Vec<C64> {
    let dir = norm_sup(lab, g).argmax.unwrap_or(C64::new(1.0, 0.0));
    radii.iter().map(|&r| dir * r).collect()
}

// ---------------------------------------------------------------------------
// winding numbers and portraits

fn boundary_samples(g: &FuncExpr, m: usize) -> Vec<C64> {
    (0..m)
        .map(|j| g.jet(C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)).value)
        .collect()
}

fn winding_from_samples(samples: &[C64], lambda: C64) -> Result<i64, ProbeError> {
    let shifted: Vec<C64> = samples.iter().map(|&w| w - lambda).collect();
    if let Some(d) = shifted.iter().map(|w| w.norm()).reduce(f64::min) {
        if d <= CURVE_CLEARANCE {
            return Err(ProbeError::NearCurve { lambda, distance: d });
        }
    }
    let m = shifted.len();
    let total: f64 = (0..m).map(|j| (shifted[(j + 1) % m] / shifted[j]).arg()).sum();
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Winding number of `θ ↦ g(e^{iθ}) − λ` about `0` from `m` samples.
pub fn winding_number(g: &FuncExpr, lambda: C64, m: usize) -> Result<i64, ProbeError> {
    if m < 3 {
        return Err(ProbeError::Input(format!("winding needs at least 3 samples, got {m}")));
    }
    winding_from_samples(&boundary_samples(g, m), lambda)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl FromStr for Rect {
    type Err = ProbeError;
    fn from_str(s: &str) -> Result<Self, ProbeError> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| ProbeError::Input(format!("bad rectangle {s:?}")))?;
        match v[..] {
            [x0, x1, y0, y1] if x0 <= x1 && y0 <= y1 => Ok(Rect { x0, x1, y0, y1 }),
            _ => Err(ProbeError::Input(format!("rectangle must be x0,x1,y0,y1 with x0≤x1, y0≤y1; got {s:?}"))),
        }
    }
}

impl Rect {
    /// Grid points in row-major order (`y` outer, `x` inner).
    pub fn grid(&self, step: f64) -> Result<Vec<C64>, ProbeError> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(ProbeError::Input(format!("step {step} must be positive")));
        }
        let nx = ((self.x1 - self.x0) / step + 1e-9).floor() as usize + 1;
        let ny = ((self.y1 - self.y0) / step + 1e-9).floor() as usize + 1;
        let mut pts = Vec::with_capacity(nx * ny);
        for iy in 0..ny {
            for ix in 0..nx {
                pts.push(C64::new(self.x0 + ix as f64 * step, self.y0 + iy as f64 * step));
            }
        }
        Ok(pts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Flag {
    #[serde(rename = "FINITE")]
    Finite,
    #[serde(rename = "BLOWUP")]
    Blowup,
    #[serde(rename = "INDETERMINATE")]
    Indeterminate,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Finite => "FINITE",
            Flag::Blowup => "BLOWUP",
            Flag::Indeterminate => "INDETERMINATE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub lambda: C64,
    pub winding: Option<i64>,
    pub resolvent_lb: Option<f64>,
    /// Largest coefficient of the reciprocal series, when it was formed.
    pub growth: Option<f64>,
    /// Distance from `λ` to the sampled boundary curve.
    pub distance: f64,
    pub flag: Flag,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Portrait {
    pub kind: OpKind,
    pub symbol: String,
    pub step: f64,
    pub cells: Vec<Cell>,
}

impl Portrait {
    /// CSV with columns `re,im,winding,resolvent_lb,flag`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,winding,resolvent_lb,flag\n");
        for c in &self.cells {
            let w = c.winding.map(|w| w.to_string()).unwrap_or_default();
            let lb = c.resolvent_lb.map(|v| format!("{v:e}")).unwrap_or_default();
            out.push_str(&format!("{},{},{},{},{}\n", c.lambda.re, c.lambda.im, w, lb, c.flag.as_str()));
        }
        out
    }
}

/// `f ↦ h·f` for a series multiplier `h`.
struct SeriesMultiplier<'a> {
    f: &'a FuncExpr,
    h: &'a TaylorSeries,
}

impl Analytic for SeriesMultiplier<'_> {
    fn value(&self, z: C64) -> C64 {
        self.f.jet(z).value * self.h.jet_at(z).value
    }
    fn derivs(&self, z: C64) -> (C64, C64) {
        let j = self.f.jet(z) * self.h.jet_at(z);
        (j.d1, j.d2)
    }
}

/// `f ↦ I_k f + f(0)` for a series symbol `k`.
struct IgResolvent<'a> {
    f: &'a FuncExpr,
    k: &'a TaylorSeries,
}

impl Analytic for IgResolvent<'_> {
    fn value(&self, z: C64) -> C64 {
        self.f.jet(C64::new(0.0, 0.0)).value
            + integrate_from_origin(z, |w| self.f.jet(w).d1 * self.k.jet_at(w).value)
    }
    fn derivs(&self, z: C64) -> (C64, C64) {
        let (f, k): (Jet, Jet) = (self.f.jet(z), self.k.jet_at(z));
        (f.d1 * k.value, f.d2 * k.value + f.d1 * k.d1)
    }
}

/// Drops trailing coefficients below `1e-17` of the largest one.
fn trim(s: TaylorSeries) -> TaylorSeries {
    let peak = s.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let last = s
        .coeffs()
        .iter()
        .rposition(|c| c.norm() > 1e-17 * peak)
        .unwrap_or(0);
    s.truncate(last)
}

/// Series degree used for the reciprocal in portraits.
pub fn portrait_degree(lab: &Lab) -> usize {
    4 * lab.degree()
}

/// Resolvent estimate at one `λ`, ignoring the winding number. Returns
/// `(flag, resolvent_lb, growth)`; the estimate is
/// `max_f ‖(M_g − λ)⁻¹f‖/‖f‖` for `Mg` and `max_f ‖(I_g − λ)⁻¹f‖/‖f‖`
/// for `Ig`, where `(I_g − λ)⁻¹ = −λ⁻¹R_λ` and `R_λ f = I_k f + f(0)` with
/// `k = (1 − g/λ)⁻¹`.
pub fn resolvent_estimate(
    lab: &Lab,
    kind: OpKind,
    g: &FuncExpr,
    lambda: C64,
    corpus: &[FuncExpr],
) -> Result<(Flag, Option<f64>, Option<f64>), ProbeError> {
    let n = portrait_degree(lab);
    let gs = g.to_series(n).series;
    let one = TaylorSeries::constant(C64::new(1.0, 0.0));
    let base = match kind {
        OpKind::Mg => &gs - &TaylorSeries::constant(lambda),
        OpKind::Ig => {
            if lambda.norm() < 1e-12 {
                return Ok((Flag::Blowup, None, None));
            }
            &one - &gs.scale(lambda.inv())
        }
        k => return Err(ProbeError::Input(format!("portraits support Mg and Ig, not {k}"))),
    };
    if base.coeff(0).norm() < 1e-12 {
        return Ok((Flag::Blowup, None, None));
    }
    let recip = base.reciprocal(n)?;
    let growth = recip.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    if !(growth <= BLOWUP_COEFFICIENT) {
        return Ok((Flag::Blowup, None, Some(growth)));
    }
    let h = trim(recip);
    let rule = &lab.search_rule;
    let mut lb = 0.0f64;
    for f in corpus {
        let den = b1_on(rule, f)?;
        if !(den > 1e-12) {
            continue;
        }
        let num = match kind {
            OpKind::Mg => b1_on(rule, &SeriesMultiplier { f, h: &h })?,
            _ => b1_on(rule, &IgResolvent { f, k: &h })? / lambda.norm(),
        };
        lb = lb.max(num / den);
    }
    let flag = if lb > BLOWUP_RESOLVENT {
        Flag::Blowup
    } else {
        Flag::Finite
    };
    Ok((flag, Some(lb), Some(growth)))
}

/// Resolvent portrait over a rectangle of `λ` values. Cells closer to the
/// sampled curve `g(𝕋)` than its longest chord are INDETERMINATE; elsewhere
/// the winding number and the resolvent estimate are recorded and the flag
/// is BLOWUP when the estimate or the reciprocal series exceeds its
/// threshold.
pub fn resolvent_portrait(
    lab: &Lab,
    kind: OpKind,
    g: &FuncExpr,
    rect: Rect,
    step: f64,
    corpus: &[FuncExpr],
) -> Result<Portrait, ProbeError> {
    let samples = boundary_samples(g, WINDING_SAMPLES);
    let chord = (0..samples.len())
        .map(|j| (samples[(j + 1) % samples.len()] - samples[j]).norm())
        .fold(0.0, f64::max);
    let mut cells = Vec::new();
    for lambda in rect.grid(step)? {
        let distance = samples.iter().map(|w| (w - lambda).norm()).fold(f64::INFINITY, f64::min);
        if distance <= chord.max(CURVE_CLEARANCE) {
            cells.push(Cell {
                lambda,
                winding: None,
                resolvent_lb: None,
                growth: None,
                distance,
                flag: Flag::Indeterminate,
            });
            continue;
        }
        let winding = winding_from_samples(&samples, lambda)?;
        let (flag, resolvent_lb, growth) = resolvent_estimate(lab, kind, g, lambda, corpus)?;
        cells.push(Cell {
            lambda,
            winding: Some(winding),
            resolvent_lb,
            growth,
            distance,
            flag,
        });
    }
    Ok(Portrait {
        kind,
        symbol: g.render(),
        step,
        cells,
    })
}

// ---------------------------------------------------------------------------
// spectrum of T_g

/// `‖p‖_{B₁} ≤ ∑ ‖zⁿ‖_{B₁}|pₙ|` with `‖zⁿ‖_{B₁} = 1` for `n ≤ 1` and
/// `2(n−1)` otherwise.
pub fn b1_majorant(s: &TaylorSeries) -> f64 {
    s.b1_majorant()
}

/// Terms `k = K+1 … 2K` of `∑ T_gᵏ f / λ^{k+1}`, bounded by the monomial
/// majorant. Series are carried to degree `degree`.
pub fn neumann_tail(
    g: &TaylorSeries,
    f: &TaylorSeries,
    lambda: C64,
    k_max: usize,
    degree: usize,
) -> Result<f64, ProbeError> {
    if lambda.norm() == 0.0 {
        return Err(ProbeError::Input("λ must be nonzero".into()));
    }
    let g = g.truncate(degree + 1);
    let mut term = f.truncate(degree);
    let inv = 1.0 / lambda.norm();
    let mut tail = 0.0;
    for k in 1..=2 * k_max {
        term = apply_series(OpKind::Tg, Some(&g), &term, degree)?;
        if k > k_max {
            tail += b1_majorant(&term) * inv.powi(k as i32 + 1);
        }
    }
    Ok(tail)
}

// ---------------------------------------------------------------------------
// product constant

/// `‖fg‖/(‖f‖‖g‖)` on one rule, with the three integrals taken in one pass.
pub fn product_ratio(rule: &DiskRule, f: &FuncExpr, g: &FuncExpr) -> f64 {
    let zero = C64::new(0.0, 0.0);
    let head = |j: Jet| j.value.norm() + j.d1.norm();
    let (f0, g0) = (f.jet(zero), g.jet(zero));
    let mut vf = Vec::with_capacity(rule.nodes().len());
    let mut vg = Vec::with_capacity(rule.nodes().len());
    let mut vp = Vec::with_capacity(rule.nodes().len());
    for n in rule.nodes() {
        let (a, b) = (f.jet(n.z), g.jet(n.z));
        vf.push(a.d2.norm());
        vg.push(b.d2.norm());
        vp.push((a * b).d2.norm());
    }
    let nf = head(f0) + rule.weighted_sum(&vf);
    let ng = head(g0) + rule.weighted_sum(&vg);
    let np = head(f0 * g0) + rule.weighted_sum(&vp);
    if !(nf > 1e-12 && ng > 1e-12) {
        return f64::NEG_INFINITY;
    }
    np / (nf * ng)
}

/// Parametrized search family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchFamily {
    /// Pairs of combinations of three atoms.
    Atomic,
    /// Pairs of polynomials of degree at most two.
    Quadratic,
}

impl SearchFamily {
    fn dimension(self) -> usize {
        match self {
            SearchFamily::Atomic => 24,
            SearchFamily::Quadratic => 12,
        }
    }

    fn project(self, x: &mut [f64]) {
        for v in x.iter_mut() {
            *v = v.clamp(-1.0, 1.0);
        }
        if self == SearchFamily::Atomic {
            for atom in x.chunks_mut(4) {
                let r = atom[2].hypot(atom[3]);
                if r > SEARCH_RADIUS {
                    atom[2] *= SEARCH_RADIUS / r;
                    atom[3] *= SEARCH_RADIUS / r;
                }
            }
        }
    }

    fn decode(self, x: &[f64]) -> (FuncExpr, FuncExpr) {
        let half = x.len() / 2;
        let one = |p: &[f64]| match self {
            SearchFamily::Atomic => FuncExpr::atoms(
                p.chunks(4)
                    .map(|a| (C64::new(a[0], a[1]), C64::new(a[2], a[3])))
                    .collect(),
            )
            .expect("projected parameters"),
            SearchFamily::Quadratic => {
                FuncExpr::poly(p.chunks(2).map(|c| C64::new(c[0], c[1])).collect()).expect("finite")
            }
        };
        (one(&x[..half]), one(&x[half..]))
    }
}

/// Coordinate pattern search maximizing `obj` from `x`. Steps start at
/// `step` and halve after a sweep without improvement until below `floor`.
fn pattern_search(
    mut x: Vec<f64>,
    project: impl Fn(&mut [f64]),
    mut obj: impl FnMut(&[f64]) -> f64,
    step: f64,
    floor: f64,
    max_evals: usize,
) -> (Vec<f64>, f64, usize) {
    project(&mut x);
    let mut best = obj(&x);
    let mut evals = 1;
    let mut h = step;
    while h >= floor && evals < max_evals {
        let mut improved = false;
        'sweep: for i in 0..x.len() {
            for sign in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += sign * h;
                project(&mut y);
                if y == x {
                    continue;
                }
                let v = obj(&y);
                evals += 1;
                if v > best {
                    best = v;
                    x = y;
                    improved = true;
                    break 'sweep;
                }
                if evals >= max_evals {
                    break 'sweep;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    (x, best, evals)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchRun {
    pub family: SearchFamily,
    pub restart: usize,
    pub ratio: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyBest {
    /// Ratio of the best witness on the main rule.
    pub ratio: f64,
    pub err_est: f64,
    pub f: String,
    pub g: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub ceiling: f64,
    /// Dense-grid maximum over real quadratic pairs, re-evaluated on the
    /// main rule at the grid maximizer.
    pub oracle: f64,
    /// The same maximum on the oracle's own coarse rule.
    pub oracle_grid: f64,
    pub oracle_witness: (String, String),
    pub quadratic: FamilyBest,
    pub atomic: FamilyBest,
    pub corpus: FamilyBest,
    pub runs: Vec<SearchRun>,
}

impl SearchReport {
    pub fn best(&self) -> f64 {
        self.quadratic.ratio.max(self.atomic.ratio).max(self.corpus.ratio)
    }

    pub fn as_bound(&self) -> BoundReport {
        let best = [&self.quadratic, &self.atomic, &self.corpus]
            .into_iter()
            .max_by(|a, b| a.ratio.total_cmp(&b.ratio))
            .expect("three families");
        let mut constants = BTreeMap::new();
        constants.insert("oracle".into(), self.oracle);
        constants.insert("quadratic".into(), self.quadratic.ratio);
        constants.insert("atomic".into(), self.atomic.ratio);
        constants.insert("corpus".into(), self.corpus.ratio);
        BoundReport {
            lower: best.ratio,
            upper: Some(self.ceiling),
            err_est: best.err_est,
            witness: format!("f = {}; g = {}", best.f, best.g),
            constants,
        }
    }
}

fn family_best(lab: &Lab, f: &FuncExpr, g: &FuncExpr) -> FamilyBest {
    let ratio = product_ratio(&lab.rule, f, g);
    let err_est = lab
        .rule
        .refined()
        .map_or(0.0, |fine| (product_ratio(fine, f, g) - ratio).abs());
    FamilyBest {
        ratio,
        err_est,
        f: f.render(),
        g: g.render(),
    }
}

/// Maximum of `‖fg‖/(‖f‖‖g‖)` over pairs of real quadratics on the simplex
/// `|a₀| + |a₁| + 2|a₂| = 1` (where `‖f‖_{B₁} = 1` exactly), with grid step
/// `1/steps` and all sign patterns. `(fg)''` is a quadratic, integrated by
/// its own product rule.
pub fn quadratic_oracle(steps: usize) -> (f64, [f64; 3], [f64; 3]) {
    let rule = DiskRule::single(24, 48).expect("nonempty rule");
    let nodes: Vec<(C64, C64, f64)> = rule.nodes().iter().map(|n| (n.z, n.z * n.z, n.weight)).collect();
    let mut fns = Vec::new();
    for i in 0..=steps {
        for j in 0..=steps - i {
            let k = steps - i - j;
            let t = [i as f64, j as f64, k as f64].map(|v| v / steps as f64);
            for s1 in [1.0, -1.0] {
                for s2 in [1.0, -1.0] {
                    fns.push([t[0], s1 * t[1], s2 * t[2] / 2.0]);
                }
            }
        }
    }
    let mut best = (f64::NEG_INFINITY, fns[0], fns[0]);
    for (p, a) in fns.iter().enumerate() {
        for b in &fns[p..] {
            let c0 = a[0] * b[0];
            let c1 = a[0] * b[1] + a[1] * b[0];
            let q0 = 2.0 * (a[0] * b[2] + a[1] * b[1] + a[2] * b[0]);
            let q1 = 6.0 * (a[1] * b[2] + a[2] * b[1]);
            let q2 = 12.0 * a[2] * b[2];
            let area: f64 = nodes
                .iter()
                .map(|&(z, z2, w)| (z * q1 + z2 * q2 + q0).norm() * w)
                .sum();
            let v = c0.abs() + c1.abs() + area;
            if v > best.0 {
                best = (v, *a, *b);
            }
        }
    }
    best
}

/// Seeded restarts of the pattern search on both families plus a survey of
/// corpus pairs; the best witness of each is re-evaluated on the main rule.
pub fn product_constant_search(
    lab: &Lab,
    seed: u64,
    iters: usize,
    corpus: &[FuncExpr],
) -> Result<SearchReport, ProbeError> {
    if iters == 0 {
        return Err(ProbeError::Input("iters must be at least 1".into()));
    }
    let (oracle_raw, oa, ob) = quadratic_oracle(20);
    let real_poly = |c: [f64; 3]| FuncExpr::poly_real(&c);
    let (of, og) = (real_poly(oa), real_poly(ob));
    let oracle = product_ratio(&lab.rule, &of, &og);
    let mut runs = Vec::new();
    let mut bests = Vec::new();
    for family in [SearchFamily::Quadratic, SearchFamily::Atomic] {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for restart in 0..iters {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let x0: Vec<f64> = (0..family.dimension()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let (x, v, evals) = pattern_search(
                x0,
                |x| family.project(x),
                |x| {
                    let (f, g) = family.decode(x);
                    product_ratio(&lab.search_rule, &f, &g)
                },
                0.2,
                1e-4,
                lab.config.search_evals,
            );
            runs.push(SearchRun {
                family,
                restart,
                ratio: v,
                evaluations: evals,
            });
            if best.as_ref().map_or(true, |(b, _)| v > *b) {
                best = Some((v, x));
            }
        }
        let (_, x) = best.expect("at least one restart");
        let (f, g) = family.decode(&x);
        bests.push(family_best(lab, &f, &g));
    }
    let atomic = bests.pop().expect("atomic");
    let quadratic = bests.pop().expect("quadratic");
    Ok(SearchReport {
        ceiling: PRODUCT_CEILING,
        oracle,
        oracle_grid: oracle_raw,
        oracle_witness: (of.render(), og.render()),
        quadratic,
        atomic,
        corpus: corpus_pair_survey(lab, corpus)?,
        runs,
    })
}

/// Largest product ratio over all pairs `i ≤ j` of `corpus`.
pub fn corpus_pair_survey(lab: &Lab, corpus: &[FuncExpr]) -> Result<FamilyBest, ProbeError> {
    if corpus.is_empty() {
        return Err(ProbeError::Input("empty corpus".into()));
    }
    let zero = C64::new(0.0, 0.0);
    let rule = &lab.rule;
    let tables: Vec<Vec<Jet>> = corpus
        .iter()
        .map(|f| rule.nodes().iter().map(|n| f.jet(n.z)).collect())
        .collect();
    let origins: Vec<Jet> = corpus.iter().map(|f| f.jet(zero)).collect();
    let head = |j: Jet| j.value.norm() + j.d1.norm();
    let norms: Vec<f64> = tables
        .iter()
        .zip(&origins)
        .map(|(t, &o)| head(o) + rule.weighted_sum(&t.iter().map(|j| j.d2.norm()).collect::<Vec<_>>()))
        .collect();
    let mut best = (f64::NEG_INFINITY, 0, 0);
    let mut scratch = vec![0.0; rule.nodes().len()];
    for i in 0..corpus.len() {
        if !(norms[i] > 1e-12) {
            continue;
        }
        for j in i..corpus.len() {
            if !(norms[j] > 1e-12) {
                continue;
            }
            for (s, (a, b)) in scratch.iter_mut().zip(tables[i].iter().zip(&tables[j])) {
                *s = (*a * *b).d2.norm();
            }
            let np = head(origins[i] * origins[j]) + rule.weighted_sum(&scratch);
            let ratio = np / (norms[i] * norms[j]);
            if ratio > best.0 {
                best = (ratio, i, j);
            }
        }
    }
    let (_, i, j) = best;
    Ok(family_best(lab, &corpus[i], &corpus[j]))
}

// ---------------------------------------------------------------------------
// composition operators

/// `max_a ‖σ_a∘φ‖_{B₁}` over the a-grid, with the assembled bound when
/// `φ(0) = 0`.
pub fn cphi_bounded_probe(lab: &Lab, phi: &FuncExpr) -> Result<BoundReport, ProbeError> {
    let mut best = (f64::NEG_INFINITY, 0.0, C64::new(0.0, 0.0));
    for &a in lab.a_grid() {
        let comp = FuncExpr::compose(FuncExpr::moebius(a)?, phi.clone())?;
        let v = norm_b1(lab, &comp)?;
        if v.value > best.0 {
            best = (v.value, v.err_est, a);
        }
    }
    let mut constants = BTreeMap::new();
    let upper = cphi_upper(lab, phi, &mut constants)?;
    Ok(BoundReport {
        lower: best.0,
        upper,
        err_est: best.1,
        witness: format!("a = {}", best.2),
        constants,
    })
}

/// Per-`n` bound for the Deddens ratio of `inner` under `C_φ`:
/// `(2π+2)‖g∘φₙ‖` for `M_g`, `(1+π)‖g∘φₙ − g(0)‖` for `T_g` and
/// `(3π+4)‖g∘φₙ‖` for `I_g` (from `I_h = M_h − h(0)δ₀ − T_h`).
pub fn deddens_constant(lab: &Lab, inner: &OperatorSpec, phi: &FuncExpr, n: usize) -> Result<f64, ProbeError> {
    let g = inner
        .symbol()
        .ok_or_else(|| ProbeError::Input("inner operator needs a symbol".into()))?;
    let phi_n = crate::operators::iterate_phi(phi, n)?;
    let g_phi = FuncExpr::compose(g.clone(), phi_n)?;
    Ok(match inner.kind() {
        OpKind::Mg => PRODUCT_CEILING * b1_on(&lab.rule, &g_phi)?,
        OpKind::Tg => (1.0 + PI) * b1_on(&lab.rule, &g_phi.centered())?,
        OpKind::Ig => (3.0 * PI + 4.0) * b1_on(&lab.rule, &g_phi)?,
        k => return Err(OperatorError::UnsupportedInner(k).into()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn lab() -> &'static Lab {
        static LAB: OnceLock<Lab> = OnceLock::new();
        LAB.get_or_init(Lab::with_defaults)
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn corpus_is_deterministic_and_round_robin() {
        let a = Corpus::generate(lab(), 7, 25);
        let b = Corpus::generate(lab(), 7, 25);
        assert_eq!(a.members(), b.members());
        assert_eq!(a.family(0), Family::Monomial);
        assert_eq!(a.family(4), Family::RandomPolynomial);
        assert_eq!(a.family(23), Family::AtomicCombination);
        let other = Corpus::generate(lab(), 8, 25);
        assert_ne!(a.members(), other.members());
    }

    #[test]
    fn opnorm_examples() {
        let lab = lab();
        let corpus = Corpus::generate(lab, 3, 15);
        let mc = OperatorSpec::with_symbol(OpKind::Mg, FuncExpr::constant(c(0.0, 2.0)).unwrap()).unwrap();
        let r = opnorm_lower(lab, &mc, corpus.members()).unwrap();
        assert!((r.lower - 2.0).abs() < 1e-12);
        let tz = OperatorSpec::with_symbol(OpKind::Tg, FuncExpr::z()).unwrap();
        let r = opnorm_lower(lab, &tz, corpus.members()).unwrap();
        assert!(r.lower >= 1.0 - 1e-12 && r.lower <= r.upper.unwrap());
        let d = OperatorSpec::bare(OpKind::D).unwrap();
        let monomials: Vec<FuncExpr> = (2..=16).map(FuncExpr::monomial).collect();
        let ratios: Vec<f64> = monomials
            .iter()
            .map(|m| opnorm_lower(lab, &d, std::slice::from_ref(m)).unwrap().lower)
            .collect();
        assert!(ratios.windows(2).all(|w| w[1] > w[0]));
        assert!(opnorm_lower(lab, &d, &monomials).unwrap().upper.is_none());
    }

    #[test]
    fn decay_examples() {
        let lab = lab();
        let rows = tg_essnorm_decay(lab, &FuncExpr::poly_real(&[0.5, 1.0, -2.0]), &[1.0]).unwrap();
        assert_eq!(rows[0].distance, 0.0);
        let rows = tg_essnorm_decay(lab, &FuncExpr::monomial(2), &[0.5]).unwrap();
        assert!((rows[0].distance - 1.5).abs() < 1e-12);
        let g = FuncExpr::moebius(c(0.7, 0.0)).unwrap();
        let rows = tg_essnorm_decay(lab, &g, &[0.9, 0.99, 0.999]).unwrap();
        assert!(rows[0].distance > rows[1].distance && rows[1].distance > rows[2].distance);
    }

    #[test]
    fn ig_essnorm_examples() {
        let lab = lab();
        let k = FuncExpr::constant(c(0.6, -0.8)).unwrap();
        let seq: Vec<C64> = (1..=5).map(|n| c(1.0 - 0.5f64.powi(n), 0.0)).collect();
        let r = ig_essnorm_lower(lab, &k, &seq).unwrap();
        assert!((r.lower - 1.0).abs() < 1e-15);
        for row in &r.rows {
            assert!((row.normalized - 1.0).abs() < 1e-12);
        }
        let r = ig_essnorm_lower(lab, &FuncExpr::z(), &seq).unwrap();
        assert!((r.lower - (1.0 - 1.0 / 32.0)).abs() < 1e-15);
        let dir = C64::from_polar(1.0, PI / 4.0);
        let seq: Vec<C64> = [0.5, 0.9, 0.99].iter().map(|&t| dir * t).collect();
        let r = ig_essnorm_lower(lab, &FuncExpr::monomial(2), &seq).unwrap();
        assert!((r.lower - 0.99 * 0.99).abs() < 1e-14);
    }

    #[test]
    fn winding_examples() {
        assert_eq!(winding_number(&FuncExpr::z(), c(0.5, 0.0), 256).unwrap(), 1);
        assert_eq!(winding_number(&FuncExpr::z(), c(2.0, 0.0), 256).unwrap(), 0);
        assert_eq!(winding_number(&FuncExpr::monomial(2), c(0.25, 0.0), 256).unwrap(), 2);
        assert!(matches!(
            winding_number(&FuncExpr::z(), c(1.0, 0.0), 256),
            Err(ProbeError::NearCurve { .. })
        ));
    }

    #[test]
    fn resolvent_examples() {
        let lab = lab();
        let corpus = vec![FuncExpr::poly_real(&[1.0]), FuncExpr::z()];
        let (flag, lb, _) = resolvent_estimate(lab, OpKind::Mg, &FuncExpr::z(), c(2.0, 0.0), &corpus).unwrap();
        assert_eq!(flag, Flag::Finite);
        // ‖1/(z−2)‖_{B₁} at f = 1: h(0) = −1/2, h'(0) = −1/4, h'' = 2/(z−2)³
        assert!(lb.unwrap() >= 0.5 + 0.25);
        let (flag, ..) = resolvent_estimate(lab, OpKind::Mg, &FuncExpr::z(), c(0.5, 0.0), &corpus).unwrap();
        assert_eq!(flag, Flag::Blowup);
        let (flag, ..) = resolvent_estimate(lab, OpKind::Ig, &FuncExpr::z(), c(2.0, 0.0), &corpus).unwrap();
        assert_eq!(flag, Flag::Finite);
        let (flag, ..) = resolvent_estimate(lab, OpKind::Ig, &FuncExpr::z(), c(0.0, 0.0), &corpus).unwrap();
        assert_eq!(flag, Flag::Blowup);
    }

    #[test]
    fn portrait_shape_and_csv() {
        let lab = lab();
        let corpus = vec![FuncExpr::poly_real(&[1.0])];
        let rect: Rect = "1.5,2.5,-0.5,0.5".parse().unwrap();
        let p = resolvent_portrait(lab, OpKind::Mg, &FuncExpr::z(), rect, 0.5, &corpus).unwrap();
        assert_eq!(p.cells.len(), 9);
        let csv = p.to_csv();
        assert_eq!(csv.lines().count(), 10);
        assert_eq!(csv.lines().next().unwrap(), "re,im,winding,resolvent_lb,flag");
        assert!("1,2,3".parse::<Rect>().is_err());
    }

    #[test]
    fn neumann_tail_is_tiny() {
        let g = TaylorSeries::from_real(&[0.0, 1.0]).unwrap();
        let f = TaylorSeries::from_real(&[1.0]).unwrap();
        let t = neumann_tail(&g, &f, c(0.5, 0.0), 64, 256).unwrap();
        assert!(t < 1e-8, "{t}");
        // T_z^k 1 = z^k/k!
        let mut term = f.clone();
        for _ in 0..3 {
            term = apply_series(OpKind::Tg, Some(&g), &term, 8).unwrap();
        }
        assert!((term.coeff(3) - c(1.0 / 6.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn product_ratio_examples() {
        let rule = &lab().rule;
        let one = FuncExpr::poly_real(&[1.0]);
        assert!((product_ratio(rule, &one, &one) - 1.0).abs() < 1e-15);
        let z = FuncExpr::z();
        assert!((product_ratio(rule, &z, &z) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_oracle_small_grid() {
        let (v, a, b) = quadratic_oracle(4);
        assert!((v - 2.0).abs() < 1e-3, "{v} {a:?} {b:?}");
    }

    #[test]
    fn pattern_search_climbs_concave_objective() {
        let (x, v, _) = pattern_search(
            vec![0.9, -0.9],
            |_| {},
            |x| -(x[0] - 0.3).powi(2) - (x[1] + 0.1).powi(2),
            0.2,
            1e-6,
            10_000,
        );
        assert!(v > -1e-10 && (x[0] - 0.3).abs() < 1e-5 && (x[1] + 0.1).abs() < 1e-5);
    }

    #[test]
    fn cphi_examples() {
        let lab = lab();
        let r = cphi_bounded_probe(lab, &FuncExpr::constant(c(0.0, 0.0)).unwrap()).unwrap();
        let max_a = lab.a_grid().iter().map(|a| a.norm()).fold(0.0, f64::max);
        assert!((r.lower - max_a).abs() < 1e-12);
        let r = cphi_bounded_probe(lab, &FuncExpr::monomial(2)).unwrap();
        assert!(r.lower.is_finite() && r.lower <= r.upper.unwrap());
    }
}
