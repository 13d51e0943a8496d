//! Norms of the function spaces on the disk.
//!
//! Every norm takes any [`Analytic`] function and returns a [`NormValue`]
//! whose `err_est` is the change under the doubled quadrature rule. Norms
//! defined by a supremum (`H^∞`, Bloch, `Z_p`, `F(p,q,s)`) are maxima over a
//! finite sample and therefore lower bounds of the true supremum.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::analytic::Analytic;
use crate::lab::Lab;
use crate::quadrature::{circle_mean, disk_integral, DiskRule, QuadError, QuadResult};

/// Radius of the inner circle used to cross-check Hardy norms.
pub const HARDY_CHECK_RADIUS: f64 = 0.999;
/// Nodes with `|σ_a(z)|` below this are dropped from the log kernel.
pub const LOG_KERNEL_EXCLUSION: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error(
        "corpus violation: Hardy norm {at_one} at r=1 and {inner} at r={HARDY_CHECK_RADIUS} \
         differ by more than {allowed}"
    )]
    CorpusViolation { at_one: f64, inner: f64, allowed: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormValue {
    pub value: f64,
    pub err_est: f64,
    /// Maximizing point for sup-type norms (`a` for `Z_p` and `F(p,q,s)`,
    /// `z` for `H^∞` and Bloch).
    pub argmax: Option<C64>,
}

impl NormValue {
    fn plain(value: f64, err_est: f64) -> Self {
        NormValue {
            value,
            err_est,
            argmax: None,
        }
    }
}

/// Derivative form and, when computed, the logarithmic-kernel form of an
/// `F(p,q,s)` norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FpqsValue {
    pub derivative_form: NormValue,
    pub log_kernel: Option<NormValue>,
}

fn positive(name: &str, p: f64) -> Result<(), SpaceError> {
    if p.is_finite() && p > 0.0 {
        Ok(())
    } else {
        Err(SpaceError::Parameter(format!("{name} = {p} must be positive and finite")))
    }
}

/// `(∫ h)^{1/p}` with the error carried through the root.
fn root(q: QuadResult<f64>, p: f64) -> (f64, f64) {
    let v = q.value.max(0.0).powf(1.0 / p);
    let r = q.refined.max(0.0).powf(1.0 / p);
    (v, (v - r).abs())
}

fn origin<F: Analytic + ?Sized>(f: &F) -> C64 {
    f.value(C64::new(0.0, 0.0))
}

/// `‖f‖_{H^p}` from the circle mean at `r = 1`, cross-checked at
/// `r = 0.999`. The two may differ by at most `10⁻³·max|f'| + 10⁻⁴`, the
/// Lipschitz bound on `|f(e^{iθ}) − f(0.999e^{iθ})|`.
pub fn norm_hardy<F: Analytic + ?Sized>(lab: &Lab, f: &F, p: f64) -> Result<NormValue, SpaceError> {
    positive("p", p)?;
    let m = lab.config.angular;
    let at_one = circle_mean(|z| f.value(z).norm().powf(p), 1.0, m)?;
    let inner = circle_mean(|z| f.value(z).norm().powf(p), HARDY_CHECK_RADIUS, m)?;
    let (value, err_est) = root(at_one, p);
    let inner = inner.value.powf(1.0 / p);
    let slope = (0..m)
        .map(|j| f.derivs(C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)).0.norm())
        .fold(0.0, f64::max);
    let allowed = (1.0 - HARDY_CHECK_RADIUS) * slope + 1e-4;
    if !((value - inner).abs() <= allowed) {
        return Err(SpaceError::CorpusViolation {
            at_one: value,
            inner,
            allowed,
        });
    }
    Ok(NormValue::plain(value, err_est))
}

/// `max |f|` over the boundary grid, refined by a parabola through the
/// largest sample and its neighbours.
pub fn norm_sup<F: Analytic + ?Sized>(lab: &Lab, f: &F) -> NormValue {
    let m = lab.config.sup_grid;
    let h = 2.0 * PI / m as f64;
    let vals: Vec<f64> = (0..m)
        .map(|j| f.value(C64::from_polar(1.0, h * j as f64)).norm())
        .collect();
    let (j, &y0) = vals
        .iter()
        .enumerate()
        .fold((0, &f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    let ym = vals[(j + m - 1) % m];
    let yp = vals[(j + 1) % m];
    let curvature = ym - 2.0 * y0 + yp;
    let mut theta = h * j as f64;
    let mut best = y0;
    if curvature < 0.0 {
        let delta = (0.5 * (ym - yp) / curvature).clamp(-0.5, 0.5);
        let t = theta + delta * h;
        let v = f.value(C64::from_polar(1.0, t)).norm();
        if v > best {
            best = v;
            theta = t;
        }
    }
    NormValue {
        value: best,
        err_est: best - y0,
        argmax: Some(C64::from_polar(1.0, theta)),
    }
}

/// `‖f‖_{A^p} = (∫|f|^p dA)^{1/p}`.
pub fn norm_bergman<F: Analytic + ?Sized>(lab: &Lab, f: &F, p: f64) -> Result<NormValue, SpaceError> {
    positive("p", p)?;
    let q = disk_integral(|z| f.value(z).norm().powf(p), &lab.rule)?;
    let (v, e) = root(q, p);
    Ok(NormValue::plain(v, e))
}

/// `‖f‖_{𝒟^p} = (|f(0)|^p + ∫|f'|^p dA)^{1/p}`.
pub fn norm_dirichlet_type<F: Analytic + ?Sized>(
    lab: &Lab,
    f: &F,
    p: f64,
) -> Result<NormValue, SpaceError> {
    positive("p", p)?;
    let c = origin(f).norm().powf(p);
    let q = disk_integral(|z| f.derivs(z).0.norm().powf(p), &lab.rule)?;
    let (v, e) = root(QuadResult::new(q.value + c, q.refined + c), p);
    Ok(NormValue::plain(v, e))
}

/// `‖f‖_{B_p} = |f(0)| + (∫(1−|z|²)^{p−2}|f'|^p dA)^{1/p}` for `1 < p < ∞`.
pub fn norm_besov<F: Analytic + ?Sized>(lab: &Lab, f: &F, p: f64) -> Result<NormValue, SpaceError> {
    if !(p.is_finite() && p > 1.0) {
        return Err(SpaceError::Parameter(format!("Besov exponent p = {p} must lie in (1, ∞)")));
    }
    let q = disk_integral(
        |z| (1.0 - z.norm_sqr()).powf(p - 2.0) * f.derivs(z).0.norm().powf(p),
        &lab.rule,
    )?;
    let (v, e) = root(q, p);
    Ok(NormValue::plain(origin(f).norm() + v, e))
}

/// `‖f‖_ℬ = |f(0)| + sup (1−|z|²)|f'(z)|` over the rule nodes (both orders)
/// and the circles at the Bloch radii.
pub fn norm_bloch<F: Analytic + ?Sized>(lab: &Lab, f: &F) -> NormValue {
    let weight = |z: C64| (1.0 - z.norm_sqr()) * f.derivs(z).0.norm();
    let pick = |best: (f64, C64), z: C64| {
        let v = weight(z);
        if v > best.0 {
            (v, z)
        } else {
            best
        }
    };
    let zero = C64::new(0.0, 0.0);
    let mut best = lab.rule.nodes().iter().map(|n| n.z).fold((weight(zero), zero), pick);
    let coarse = best.0;
    if let Some(fine) = lab.rule.refined() {
        best = fine.nodes().iter().map(|n| n.z).fold(best, pick);
    }
    let m = lab.config.angular;
    for &r in &lab.config.bloch_radii {
        best = (0..m)
            .map(|j| C64::from_polar(r, 2.0 * PI * j as f64 / m as f64))
            .fold(best, pick);
    }
    NormValue {
        value: origin(f).norm() + best.0,
        err_est: best.0 - coarse,
        argmax: Some(best.1),
    }
}

/// `|f(0)| + |f'(0)| + ∫|f''| dA` on one rule, without refinement.
pub fn b1_on<F: Analytic + ?Sized>(rule: &DiskRule, f: &F) -> Result<f64, SpaceError> {
    let j = f.jet(C64::new(0.0, 0.0));
    let area = rule.sum(|z| f.derivs(z).1.norm())?;
    Ok(j.value.norm() + j.d1.norm() + area)
}

/// `‖f‖_{B₁} = |f(0)| + |f'(0)| + ∫|f''| dA`.
pub fn norm_b1<F: Analytic + ?Sized>(lab: &Lab, f: &F) -> Result<NormValue, SpaceError> {
    let j = f.jet(C64::new(0.0, 0.0));
    let q = disk_integral(|z| f.derivs(z).1.norm(), &lab.rule)?;
    let head = j.value.norm() + j.d1.norm();
    Ok(NormValue::plain(head + q.value, q.err_est))
}

/// `‖f‖_{B₁}` for `f` concentrated near the boundary point `a/|a|`, with
/// the area integral pulled back by `σ_b`:
/// `∫|f''| dA = ∫|f''(σ_b(w))||σ_b'(w)|² dA(w)`. `b` points toward `a` with
/// `1 − |b| = (1 − |a|)^{1/2}`, so both the peak at `a/|a|` and the bulk of
/// the disk are stretched to width `(1 − |a|)^{1/2}`; the angular order is
/// raised to match.
pub fn norm_b1_at<F: Analytic + ?Sized>(lab: &Lab, f: &F, a: C64) -> Result<NormValue, SpaceError> {
    let r = a.norm();
    if !(r < 1.0) {
        return Err(SpaceError::Parameter(format!("centre {a} must lie in the open disk")));
    }
    let width = (1.0 - r).sqrt();
    let b = if r > 0.0 { a / r * (1.0 - width) } else { a };
    let angular = lab
        .config
        .angular
        .max(((16.0 / width).ceil() as usize).next_power_of_two());
    let rule = DiskRule::new(lab.config.radial, angular)?;
    let one = C64::new(1.0, 0.0);
    let k = 1.0 - b.norm_sqr();
    let q = disk_integral(
        |w| {
            let d = one - b.conj() * w;
            let z = (b - w) / d;
            let jac = k * k / d.norm_sqr().powi(2);
            f.derivs(z).1.norm() * jac
        },
        &rule,
    )?;
    let j = f.jet(C64::new(0.0, 0.0));
    Ok(NormValue::plain(j.value.norm() + j.d1.norm() + q.value, q.err_est))
}

/// `‖f‖_{S¹} = |f(0)| + ‖f'‖_{H¹}`.
pub fn norm_s1<F: Analytic + ?Sized>(lab: &Lab, f: &F) -> Result<NormValue, SpaceError> {
    let q = circle_mean(|z| f.derivs(z).0.norm(), 1.0, lab.config.angular)?;
    Ok(NormValue::plain(origin(f).norm() + q.value, q.err_est))
}

/// `sup_a ∑ wᵢ vᵢ k(a, zᵢ)` over the lab's a-grid, with the error estimated
/// by the refined rule at the maximizer. `values(z)` is sampled once per
/// node; `kernel` is the a-dependent weight.
fn sup_over_a(
    lab: &Lab,
    values: &dyn Fn(C64) -> f64,
    kernel: &dyn Fn(C64, C64) -> f64,
) -> Result<(f64, f64, C64), SpaceError> {
    let sample = |rule: &DiskRule| -> Result<Vec<f64>, SpaceError> {
        rule.nodes()
            .iter()
            .map(|n| {
                let v = values(n.z);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(SpaceError::Quad(QuadError::NonFinite(n.z)))
                }
            })
            .collect()
    };
    let integrate = |rule: &DiskRule, vals: &[f64], a: C64| -> f64 {
        let terms: Vec<f64> = rule
            .nodes()
            .iter()
            .zip(vals)
            .map(|(n, &v)| if v == 0.0 { 0.0 } else { v * kernel(a, n.z) })
            .collect();
        rule.weighted_sum(&terms)
    };
    let base = sample(&lab.rule)?;
    let mut best = (f64::NEG_INFINITY, C64::new(0.0, 0.0));
    for &a in lab.a_grid() {
        let v = integrate(&lab.rule, &base, a);
        if v > best.0 {
            best = (v, a);
        }
    }
    let err = match lab.rule.refined() {
        Some(fine) => {
            let fine_vals = sample(fine)?;
            (integrate(fine, &fine_vals, best.1) - best.0).abs()
        }
        None => 0.0,
    };
    Ok((best.0, err, best.1))
}

/// `1 − |σ_a(z)|² = (1−|a|²)(1−|z|²)/|1−āz|²`.
pub fn moebius_defect(a: C64, z: C64) -> f64 {
    (1.0 - a.norm_sqr()) * (1.0 - z.norm_sqr()) / (C64::new(1.0, 0.0) - a.conj() * z).norm_sqr()
}

/// `‖f‖_{Z_p} = |f(0)| + sup_a ∫|(f∘σ_a)'|(1−|z|²)^{p−1} dA`, with
/// `(f∘σ_a)'(z) = f'(σ_a(z))σ_a'(z)` evaluated pointwise.
pub fn norm_zp<F: Analytic + ?Sized>(lab: &Lab, f: &F, p: f64) -> Result<NormValue, SpaceError> {
    positive("p", p)?;
    let one = C64::new(1.0, 0.0);
    let integral = |rule: &DiskRule, a: C64| -> Result<f64, QuadError> {
        let k = 1.0 - a.norm_sqr();
        rule.sum(|z| {
            let d = one - a.conj() * z;
            let w = (a - z) / d;
            let dsigma = k / d.norm_sqr();
            f.derivs(w).0.norm() * dsigma * (1.0 - z.norm_sqr()).powf(p - 1.0)
        })
    };
    let mut best = (f64::NEG_INFINITY, C64::new(0.0, 0.0));
    for &a in lab.a_grid() {
        let v = integral(&lab.rule, a)?;
        if v > best.0 {
            best = (v, a);
        }
    }
    let err = match lab.rule.refined() {
        Some(fine) => (integral(fine, best.1)? - best.0).abs(),
        None => 0.0,
    };
    Ok(NormValue {
        value: origin(f).norm() + best.0,
        err_est: err,
        argmax: Some(best.1),
    })
}

/// `|f(0)| + sup_a ∫|f''(z)|(1−|σ_a(z)|²) dA`.
pub fn norm_z1_alt<F: Analytic + ?Sized>(lab: &Lab, f: &F) -> Result<NormValue, SpaceError> {
    let (v, e, a) = sup_over_a(lab, &|z| f.derivs(z).1.norm(), &moebius_defect)?;
    Ok(NormValue {
        value: origin(f).norm() + v,
        err_est: e,
        argmax: Some(a),
    })
}

/// `F(p,q,s)` norm in the derivative form
/// `|f(0)| + sup_a ∫|f^{(n)}|^p (1−|z|²)^{np−p+q} (1−|σ_a|²)^s dA`
/// for `n ≤ 2`. When `s ≤ 2` the logarithmic-kernel form
/// `|f(0)| + sup_a ∫|f'|^p (1−|z|²)^q log^s(1/|σ_a|) dA` is computed too.
pub fn norm_fpqs<F: Analytic + ?Sized>(
    lab: &Lab,
    f: &F,
    p: f64,
    q: f64,
    s: f64,
    n: usize,
) -> Result<FpqsValue, SpaceError> {
    positive("p", p)?;
    if !(q > -2.0 && q.is_finite()) {
        return Err(SpaceError::Parameter(format!("q = {q} must lie in (-2, ∞)")));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(SpaceError::Parameter(format!("s = {s} must lie in [0, ∞)")));
    }
    if n > 2 {
        return Err(SpaceError::Parameter(format!("derivative order n = {n} must be at most 2")));
    }
    let admissible = if n >= 1 { q + s > -1.0 } else { q + s - p > -1.0 };
    if !admissible {
        return Err(SpaceError::Parameter(format!(
            "(p, q, s, n) = ({p}, {q}, {s}, {n}) violates q+s > -1 (n ≥ 1) or q+s-p > -1 (n = 0)"
        )));
    }
    let f0 = origin(f).norm();
    let e = n as f64 * p - p + q;
    let values = |z: C64| {
        let j = f.jet(z);
        let d = j.order(n).norm();
        if d == 0.0 {
            0.0
        } else {
            d.powf(p) * (1.0 - z.norm_sqr()).powf(e)
        }
    };
    let kernel = |a: C64, z: C64| moebius_defect(a, z).powf(s);
    let (v, err, a) = sup_over_a(lab, &values, &kernel)?;
    let derivative_form = NormValue {
        value: f0 + v,
        err_est: err,
        argmax: Some(a),
    };
    let log_kernel = if s <= 2.0 {
        let values = |z: C64| {
            let d = f.derivs(z).0.norm();
            if d == 0.0 {
                0.0
            } else {
                d.powf(p) * (1.0 - z.norm_sqr()).powf(q)
            }
        };
        let kernel = |a: C64, z: C64| {
            let sigma = ((a - z) / (C64::new(1.0, 0.0) - a.conj() * z)).norm();
            if sigma < LOG_KERNEL_EXCLUSION {
                0.0
            } else {
                (-sigma.ln()).powf(s)
            }
        };
        let (v, err, a) = sup_over_a(lab, &values, &kernel)?;
        Some(NormValue {
            value: f0 + v,
            err_est: err,
            argmax: Some(a),
        })
    } else {
        None
    };
    Ok(FpqsValue {
        derivative_form,
        log_kernel,
    })
}

/// Space selector used by the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Space {
    Hp(f64),
    Hinf,
    Ap(f64),
    Dp(f64),
    Bp(f64),
    B1,
    Bloch,
    S1,
    Zp(f64),
    Z1Alt,
    Fpqs { p: f64, q: f64, s: f64, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceTag {
    Hp,
    Hinf,
    Ap,
    Dp,
    Bp,
    B1,
    Bloch,
    S1,
    Zp,
    Z1Alt,
    Fpqs,
}

impl FromStr for SpaceTag {
    type Err = SpaceError;
    fn from_str(s: &str) -> Result<Self, SpaceError> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "hp" => SpaceTag::Hp,
            "hinf" => SpaceTag::Hinf,
            "ap" => SpaceTag::Ap,
            "dp" => SpaceTag::Dp,
            "bp" => SpaceTag::Bp,
            "b1" => SpaceTag::B1,
            "bloch" => SpaceTag::Bloch,
            "s1" => SpaceTag::S1,
            "zp" => SpaceTag::Zp,
            "z1alt" => SpaceTag::Z1Alt,
            "fpqs" => SpaceTag::Fpqs,
            _ => return Err(SpaceError::Parameter(format!("unknown space tag {s:?}"))),
        })
    }
}

impl Space {
    /// Combines a tag with the exponents given on the command line.
    pub fn from_tag(
        tag: SpaceTag,
        p: Option<f64>,
        q: Option<f64>,
        s: Option<f64>,
        n: Option<usize>,
    ) -> Result<Self, SpaceError> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| SpaceError::Parameter(format!("space needs --{name}")))
        };
        Ok(match tag {
            SpaceTag::Hp => Space::Hp(need(p, "p")?),
            SpaceTag::Hinf => Space::Hinf,
            SpaceTag::Ap => Space::Ap(need(p, "p")?),
            SpaceTag::Dp => Space::Dp(need(p, "p")?),
            SpaceTag::Bp => Space::Bp(need(p, "p")?),
            SpaceTag::B1 => Space::B1,
            SpaceTag::Bloch => Space::Bloch,
            SpaceTag::S1 => Space::S1,
            SpaceTag::Zp => Space::Zp(p.unwrap_or(1.0)),
            SpaceTag::Z1Alt => Space::Z1Alt,
            SpaceTag::Fpqs => Space::Fpqs {
                p: need(p, "p")?,
                q: need(q, "q")?,
                s: need(s, "s")?,
                n: n.unwrap_or(1),
            },
        })
    }
}

/// Evaluates the norm of `f` in `space`.
pub fn norm<F: Analytic + ?Sized>(lab: &Lab, f: &F, space: Space) -> Result<NormValue, SpaceError> {
    match space {
        Space::Hp(p) => norm_hardy(lab, f, p),
        Space::Hinf => Ok(norm_sup(lab, f)),
        Space::Ap(p) => norm_bergman(lab, f, p),
        Space::Dp(p) => norm_dirichlet_type(lab, f, p),
        Space::Bp(p) => norm_besov(lab, f, p),
        Space::B1 => norm_b1(lab, f),
        Space::Bloch => Ok(norm_bloch(lab, f)),
        Space::S1 => norm_s1(lab, f),
        Space::Zp(p) => norm_zp(lab, f, p),
        Space::Z1Alt => norm_z1_alt(lab, f),
        Space::Fpqs { p, q, s, n } => Ok(norm_fpqs(lab, f, p, q, s, n)?.derivative_form),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcexpr::FuncExpr;
    use std::sync::OnceLock;

    fn lab() -> &'static Lab {
        static LAB: OnceLock<Lab> = OnceLock::new();
        LAB.get_or_init(Lab::with_defaults)
    }

    /// Smaller rule for the a-grid sweeps.
    fn small_lab() -> &'static Lab {
        static LAB: OnceLock<Lab> = OnceLock::new();
        LAB.get_or_init(|| {
            let cfg = crate::lab::Config {
                radial: 48,
                angular: 128,
                ..Default::default()
            };
            Lab::new(cfg).unwrap()
        })
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn konst(v: C64) -> FuncExpr {
        FuncExpr::constant(v).unwrap()
    }

    /// `∫dA/|1−āz|³ = ∑ ((3/2)_n/n!)² |a|^{2n}/(n+1)`.
    fn cube_kernel_mass(a: f64) -> f64 {
        let mut coef = 1.0;
        let mut total = 0.0;
        let mut power = 1.0;
        let mut n = 0.0;
        loop {
            let term = coef * coef * power / (n + 1.0);
            total += term;
            if term < 1e-18 * total {
                return total;
            }
            coef *= (1.5 + n) / (n + 1.0);
            power *= a * a;
            n += 1.0;
        }
    }

    #[test]
    fn hardy_examples() {
        let lab = lab();
        assert!((norm_hardy(lab, &FuncExpr::z(), 1.0).unwrap().value - 1.0).abs() < 1e-14);
        let m = FuncExpr::moebius(c(0.4, 0.3)).unwrap();
        assert!((norm_hardy(lab, &m, 1.0).unwrap().value - 1.0).abs() < 1e-12);
        let k = konst(c(-3.0, 4.0));
        assert!((norm_hardy(lab, &k, 2.0).unwrap().value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn sup_examples() {
        let lab = lab();
        assert!((norm_sup(lab, &FuncExpr::z()).value - 1.0).abs() < 1e-14);
        let m = FuncExpr::moebius(c(0.5, 0.0)).unwrap();
        assert!((norm_sup(lab, &m).value - 1.0).abs() < 1e-12);
        let v = norm_sup(lab, &FuncExpr::poly_real(&[1.0, 1.0]));
        assert!((v.value - 2.0).abs() < 1e-14);
        // maximum between grid points is found by the parabola
        let rotated = FuncExpr::poly(vec![c(1.0, 0.0), C64::from_polar(1.0, 0.001)]).unwrap();
        assert!((norm_sup(lab, &rotated).value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn area_norm_examples() {
        let lab = lab();
        let d = |f: &FuncExpr| norm_dirichlet_type(lab, f, 1.0).unwrap().value;
        assert!((d(&FuncExpr::z()) - 1.0).abs() < 1e-13);
        assert!((d(&FuncExpr::monomial(2)) - 4.0 / 3.0).abs() < 1e-12);
        let k = konst(c(0.0, 2.5));
        assert!((norm_bergman(lab, &k, 3.0).unwrap().value - 2.5).abs() < 1e-12);
        // ‖z‖_{A²} = (∫|z|² dA)^{1/2}
        assert!((norm_bergman(lab, &FuncExpr::z(), 2.0).unwrap().value - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn besov_and_bloch_examples() {
        let lab = lab();
        let k = konst(c(1.5, 0.0));
        assert!((norm_besov(lab, &k, 2.0).unwrap().value - 1.5).abs() < 1e-14);
        assert!((norm_bloch(lab, &k).value - 1.5).abs() < 1e-14);
        assert!((norm_bloch(lab, &FuncExpr::z()).value - 1.0).abs() < 1e-14);
        assert!((norm_besov(lab, &FuncExpr::z(), 2.0).unwrap().value - 1.0).abs() < 1e-12);
        assert!(norm_besov(lab, &FuncExpr::z(), 1.0).is_err());
    }

    #[test]
    fn b1_examples() {
        let lab = lab();
        assert!((norm_b1(lab, &FuncExpr::z()).unwrap().value - 1.0).abs() < 1e-14);
        assert!((norm_b1(lab, &FuncExpr::monomial(2)).unwrap().value - 2.0).abs() < 1e-12);
        // σ_a'' = −2ā(1−|a|²)/(1−āz)³
        let a = 0.5;
        let m = FuncExpr::moebius(c(a, 0.0)).unwrap();
        let want = a + (1.0 - a * a) + 2.0 * a * (1.0 - a * a) * cube_kernel_mass(a);
        let got = norm_b1(lab, &m).unwrap();
        assert!((got.value - want).abs() < 1e-10, "{} vs {want}", got.value);
        assert!(got.err_est < 1e-10);
        // ‖zⁿ‖ = 2(n−1) for n ≥ 2
        for n in 2..12 {
            let v = norm_b1(lab, &FuncExpr::monomial(n)).unwrap().value;
            assert!((v - 2.0 * (n as f64 - 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn pulled_back_b1_resolves_boundary_atoms() {
        let lab = lab();
        for a in [0.5, 0.99, 0.999, 0.9999] {
            let m = FuncExpr::moebius(c(0.0, a)).unwrap();
            let want = a + (1.0 - a * a) + 2.0 * a * (1.0 - a * a) * cube_kernel_mass(a);
            let got = norm_b1_at(lab, &m, c(0.0, a)).unwrap();
            assert!((got.value - want).abs() < 1e-8 * want, "a = {a}: {} vs {want}", got.value);
            assert!(got.err_est < 1e-8 * want);
        }
        let v = norm_b1_at(lab, &FuncExpr::monomial(3), c(0.3, 0.2)).unwrap().value;
        assert!((v - 4.0).abs() < 1e-7, "{v}");
        assert!(norm_b1_at(lab, &FuncExpr::z(), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn s1_examples() {
        let lab = lab();
        assert!((norm_s1(lab, &FuncExpr::z()).unwrap().value - 1.0).abs() < 1e-14);
        let k = konst(c(0.0, -0.7));
        assert!((norm_s1(lab, &k).unwrap().value - 0.7).abs() < 1e-14);
        assert!((norm_s1(lab, &FuncExpr::monomial(2)).unwrap().value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn z_norm_examples() {
        let lab = small_lab();
        let k = konst(c(0.3, 0.4));
        assert!((norm_zp(lab, &k, 1.0).unwrap().value - 0.5).abs() < 1e-14);
        assert_eq!(norm_z1_alt(lab, &FuncExpr::z()).unwrap().value, 0.0);
        // a = 0 slice for z² is 2∫(1−|z|²) dA = 1; the sup is at least that
        let v = norm_z1_alt(lab, &FuncExpr::monomial(2)).unwrap().value;
        assert!(v >= 1.0 - 1e-12 && v <= 2.0, "{v}");
        // ∫|σ_a'| dA = (1−|a|²)∑|a|^{2n}/(n+1) ≤ 1 with equality at a = 0
        let zp = norm_zp(lab, &FuncExpr::z(), 1.0).unwrap();
        assert!((zp.value - 1.0).abs() < 1e-3, "{zp:?}");
    }

    #[test]
    fn fpqs_examples() {
        let lab = small_lab();
        let k = konst(c(2.0, 0.0));
        let v = norm_fpqs(lab, &k, 1.0, -1.0, 1.0, 1).unwrap();
        assert_eq!(v.derivative_form.value, 2.0);
        // f = z, (p,q,s,n) = (1,−1,1,1): the a = 0 slice is ∫1 dA = 1
        let v = norm_fpqs(lab, &FuncExpr::z(), 1.0, -1.0, 1.0, 1).unwrap();
        assert!(v.derivative_form.value >= 1.0 - 1e-12);
        assert!(v.log_kernel.is_some());
        assert!(norm_fpqs(lab, &k, 1.0, -1.5, 0.0, 1).is_err());
        assert!(norm_fpqs(lab, &k, 1.0, 0.0, 0.0, 3).is_err());
        assert!(norm_fpqs(lab, &k, 1.0, 0.0, 3.0, 1).unwrap().log_kernel.is_none());
    }

    #[test]
    fn homogeneity() {
        let lab = small_lab();
        let f = FuncExpr::atoms(vec![(c(0.4, 0.1), c(0.3, -0.5)), (c(-0.2, 0.0), c(0.1, 0.6))]).unwrap();
        let spaces = [
            Space::Hp(1.0),
            Space::Hinf,
            Space::Ap(2.0),
            Space::Dp(1.0),
            Space::Bp(2.0),
            Space::B1,
            Space::Bloch,
            Space::S1,
            Space::Z1Alt,
        ];
        for space in spaces {
            let base = norm(lab, &f, space).unwrap().value;
            for scale in [c(0.5, 0.0), c(2.0, 0.0), c(0.0, 1.0), c(0.0, -2.0)] {
                let g = FuncExpr::scaled(scale, f.clone()).unwrap();
                let v = norm(lab, &g, space).unwrap().value;
                assert!((v - scale.norm() * base).abs() < 1e-10 * (1.0 + v), "{space:?} {scale}");
            }
        }
    }
}
