//! Product Gauss–Legendre × trapezoid rules for the normalized area measure
//! on the unit disk, and trapezoid means over circles.
//!
//! In polar form `∫_𝔻 h dA = ∫₀¹ 2r · (1/2π)∫₀^{2π} h(re^{iθ}) dθ dr`, so a
//! rule is a Gauss–Legendre rule on `[0, 1]` with weights multiplied by `2r`,
//! times a uniform angular rule with weight `1/M`. Error estimates come from
//! comparing against the rule of doubled order in both directions.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("integrand is not finite at node {0}")]
    NonFinite(C64),
    #[error("rule needs at least one radial and one angular node (got {radial} × {angular})")]
    EmptyRule { radial: usize, angular: usize },
    #[error("circle radius {0} outside (0, 1]")]
    Radius(f64),
}

/// Values a rule can integrate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn finite(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

/// An integral with the value of the refined rule kept alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult<T> {
    pub value: T,
    pub refined: T,
    pub err_est: f64,
}

impl<T: QuadValue> QuadResult<T> {
    pub fn new(value: T, refined: T) -> Self {
        QuadResult {
            value,
            refined,
            err_est: (value - refined).magnitude(),
        }
    }

    /// Exact value with no quadrature error.
    pub fn exact(value: T) -> Self {
        QuadResult {
            value,
            refined: value,
            err_est: 0.0,
        }
    }

    /// Apply `g` to both rule values; the error estimate is recomputed.
    pub fn map<U: QuadValue>(self, g: impl Fn(T) -> U) -> QuadResult<U> {
        QuadResult::new(g(self.value), g(self.refined))
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let wt = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wt;
        w[n - 1 - i] = wt;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// One quadrature node of a disk rule.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub z: C64,
    pub weight: f64,
}

/// Tensor rule for the normalized area measure. Holds its own refinement of
/// doubled order for error estimation.
#[derive(Debug, Clone)]
pub struct DiskRule {
    radial: Vec<(f64, f64)>,
    angular: usize,
    nodes: Vec<Node>,
    refined: Option<Box<DiskRule>>,
}

impl DiskRule {
    /// Rule with `radial` Gauss nodes and `angular` equispaced angles, plus
    /// its `(2R, 2M)` refinement.
    pub fn new(radial: usize, angular: usize) -> Result<Self, QuadError> {
        let mut rule = Self::single(radial, angular)?;
        rule.refined = Some(Box::new(Self::single(2 * radial, 2 * angular)?));
        Ok(rule)
    }

    /// Rule without a refinement; integrals report a zero error estimate.
    pub fn single(radial: usize, angular: usize) -> Result<Self, QuadError> {
        if radial == 0 || angular == 0 {
            return Err(QuadError::EmptyRule { radial, angular });
        }
        let (x, w) = gauss_legendre(radial);
        // map to [0, 1] and fold in the polar Jacobian 2r
        let radial_nodes: Vec<(f64, f64)> = x
            .iter()
            .zip(&w)
            .map(|(&x, &w)| {
                let r = (x + 1.0) / 2.0;
                (r, w * r)
            })
            .collect();
        let angles: Vec<C64> = (0..angular)
            .map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / angular as f64))
            .collect();
        let inv_m = 1.0 / angular as f64;
        let nodes = radial_nodes
            .iter()
            .flat_map(|&(r, u)| {
                angles.iter().map(move |&e| Node {
                    z: e * r,
                    weight: u * inv_m,
                })
            })
            .collect();
        Ok(DiskRule {
            radial: radial_nodes,
            angular,
            nodes,
            refined: None,
        })
    }

    /// `(r_i, u_i)` pairs; `u_i` already includes the factor `2r_i`.
    pub fn radial_nodes(&self) -> &[(f64, f64)] {
        &self.radial
    }

    pub fn radial_order(&self) -> usize {
        self.radial.len()
    }

    pub fn angular_count(&self) -> usize {
        self.angular
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn refined(&self) -> Option<&DiskRule> {
        self.refined.as_deref()
    }

    /// `∑ wᵢ vᵢ` for integrand values given in node order.
    pub fn weighted_sum<T: QuadValue>(&self, values: &[T]) -> T {
        debug_assert_eq!(values.len(), self.nodes.len());
        let terms: Vec<T> = self
            .nodes
            .iter()
            .zip(values)
            .map(|(n, &v)| v * n.weight)
            .collect();
        pairwise_sum(&terms)
    }

    /// Integral over this rule only.
    pub fn sum<T: QuadValue>(&self, h: impl Fn(C64) -> T) -> Result<T, QuadError> {
        let mut terms = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let v = h(n.z);
            if !v.finite() {
                return Err(QuadError::NonFinite(n.z));
            }
            terms.push(v * n.weight);
        }
        Ok(pairwise_sum(&terms))
    }
}

/// Deterministic tree reduction.
pub fn pairwise_sum<T: QuadValue>(xs: &[T]) -> T {
    if xs.len() <= 16 {
        return xs.iter().fold(T::zero(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `∫_𝔻 h dA` with an order-doubling error estimate.
pub fn disk_integral<T: QuadValue>(
    h: impl Fn(C64) -> T,
    rule: &DiskRule,
) -> Result<QuadResult<T>, QuadError> {
    let value = rule.sum(&h)?;
    match rule.refined() {
        Some(fine) => Ok(QuadResult::new(value, fine.sum(&h)?)),
        None => Ok(QuadResult::exact(value)),
    }
}

fn circle_sum<T: QuadValue>(h: &impl Fn(C64) -> T, r: f64, m: usize) -> Result<T, QuadError> {
    let mut terms = Vec::with_capacity(m);
    for j in 0..m {
        let z = C64::from_polar(r, 2.0 * PI * j as f64 / m as f64);
        let v = h(z);
        if !v.finite() {
            return Err(QuadError::NonFinite(z));
        }
        terms.push(v);
    }
    Ok(pairwise_sum(&terms) * (1.0 / m as f64))
}

/// `(1/2π)∫₀^{2π} h(re^{iθ}) dθ` with `m` samples, checked against `2m`.
pub fn circle_mean<T: QuadValue>(
    h: impl Fn(C64) -> T,
    r: f64,
    m: usize,
) -> Result<QuadResult<T>, QuadError> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(QuadError::Radius(r));
    }
    if m == 0 {
        return Err(QuadError::EmptyRule {
            radial: 1,
            angular: 0,
        });
    }
    Ok(QuadResult::new(circle_sum(&h, r, m)?, circle_sum(&h, r, 2 * m)?))
}

/// Checks `∫₀¹ x F(x) dx ≥ ½ ∫₀¹ F(x) dx` with Gauss rules of order `order`
/// and `2·order`; the inequality is accepted within the doubling estimate.
pub fn monotone_weight_check(f: impl Fn(f64) -> f64, order: usize) -> bool {
    let integrate = |n: usize| {
        let (x, w) = gauss_legendre(n);
        let mut lhs = 0.0;
        let mut mass = 0.0;
        for (&x, &w) in x.iter().zip(&w) {
            let t = (x + 1.0) / 2.0;
            let v = f(t) * w / 2.0;
            lhs += t * v;
            mass += v;
        }
        (lhs, 0.5 * mass)
    };
    let (l1, r1) = integrate(order.max(1));
    let (l2, r2) = integrate(2 * order.max(1));
    let err = (l1 - l2).abs() + (r1 - r2).abs();
    let scale = l1.abs().max(r1.abs());
    l1 - r1 >= -(err + 16.0 * f64::EPSILON * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1, 2, 5, 16, 128, 256] {
            let (x, w) = gauss_legendre(n);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n}");
            // ∫ x^{2n-2} = 2/(2n-1)
            let k = 2 * n - 2;
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
            assert!((got - 2.0 / (k as f64 + 1.0)).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn disk_rule_normalization_and_moments() {
        let rule = DiskRule::new(16, 32).unwrap();
        let one = disk_integral(|_| 1.0, &rule).unwrap();
        assert!((one.value - 1.0).abs() < 1e-14);
        let r1 = disk_integral(|z| z.norm(), &rule).unwrap();
        assert!((r1.value - 2.0 / 3.0).abs() < 1e-14);
        let r2 = disk_integral(|z| z.norm_sqr(), &rule).unwrap();
        assert!((r2.value - 0.5).abs() < 1e-14);
        assert!(rule.nodes().iter().all(|n| n.z.norm() < 1.0));
    }

    #[test]
    fn non_finite_integrand_names_node() {
        let rule = DiskRule::single(2, 2).unwrap();
        let err = disk_integral(|_| f64::NAN, &rule).unwrap_err();
        assert!(matches!(err, QuadError::NonFinite(_)));
    }

    #[test]
    fn circle_mean_examples() {
        let c = circle_mean(|_| C64::new(2.0, -1.0), 0.7, 16).unwrap();
        assert!((c.value - C64::new(2.0, -1.0)).norm() < 1e-15);
        let r = circle_mean(|z| z.norm(), 0.4, 16).unwrap();
        assert!((r.value - 0.4).abs() < 1e-15);
        let a = C64::new(0.3, 0.5);
        let m = circle_mean(|z| ((a - z) / (1.0 - a.conj() * z)).norm(), 1.0, 64).unwrap();
        assert!((m.value - 1.0).abs() < 1e-14);
        assert!(circle_mean(|_| 1.0, 1.5, 8).is_err());
    }

    #[test]
    fn angular_rule_kills_nonconstant_monomials() {
        let m = 64;
        for n in 1..m {
            let v = circle_mean(|z| z.powu(n as u32), 0.8, m).unwrap();
            assert!(v.value.norm() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn monotone_weight_examples() {
        assert!(monotone_weight_check(|_| 1.0, 32));
        assert!(monotone_weight_check(|x| x, 32));
        assert!(monotone_weight_check(|x| x * x, 32));
        // decreasing weights fail
        assert!(!monotone_weight_check(|x| 1.0 - x, 32));
    }
}
