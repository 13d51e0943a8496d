//! Truncated complex power series `∑ aₙ zⁿ`.

use std::ops::{Add, Neg, Sub};

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::analytic::{Analytic, Jet};

/// Slack allowed on `|z| ≤ 1` to absorb rounding in `e^{iθ}`.
pub(crate) const DISK_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("point {0} lies outside the closed unit disk")]
    OutsideDisk(C64),
    #[error("inner series has constant term {0}; composition needs it to be exactly 0")]
    InnerNotOriginFixing(C64),
    #[error("Möbius parameter has |a| = {0}, must be < 1")]
    MoebiusParameter(f64),
    #[error("dilation factor {0} outside [0, 1]")]
    DilationFactor(f64),
    #[error("coefficient {0} is not finite")]
    NonFinite(usize),
    #[error("series has zero constant term and no reciprocal")]
    NotInvertible,
}

/// A power series truncated at `degree()`. Always holds at least one
/// coefficient, all of them finite.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    coeffs: Vec<C64>,
}

/// Result of a truncating operation, flagged when terms above the requested
/// degree were discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated {
    pub series: TaylorSeries,
    pub truncated: bool,
}

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

impl TaylorSeries {
    pub fn new(coeffs: Vec<C64>) -> Result<Self, SeriesError> {
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(SeriesError::NonFinite(i));
        }
        Ok(Self::from_vec(coeffs))
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self, SeriesError> {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    /// Internal constructor for coefficient vectors produced by finite
    /// arithmetic on finite inputs.
    pub(crate) fn from_vec(mut coeffs: Vec<C64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        TaylorSeries { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        TaylorSeries {
            coeffs: vec![ZERO; degree + 1],
        }
    }

    pub fn constant(c: C64) -> Self {
        TaylorSeries { coeffs: vec![c] }
    }

    /// `zᵏ`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = ONE;
        TaylorSeries { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    /// Coefficient of `zⁿ`, zero above the stored degree.
    pub fn coeff(&self, n: usize) -> C64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    /// Pad with zeros or cut so that the degree is exactly `n`.
    pub fn truncate(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n + 1, ZERO);
        TaylorSeries { coeffs }
    }

    pub fn eval(&self, z: C64) -> Result<C64, SeriesError> {
        if z.norm() > 1.0 + DISK_SLACK {
            return Err(SeriesError::OutsideDisk(z));
        }
        Ok(self.horner(z))
    }

    pub(crate) fn horner(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Nested evaluation of the value and first two derivatives.
    pub fn jet_at(&self, z: C64) -> Jet {
        let (mut p, mut d1, mut d2) = (ZERO, ZERO, ZERO);
        for &c in self.coeffs.iter().rev() {
            d2 = d2 * z + d1 * 2.0;
            d1 = d1 * z + p;
            p = p * z + c;
        }
        Jet::new(p, d1, d2)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return TaylorSeries::constant(ZERO);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(n, &c)| c * (n + 1) as f64)
            .collect();
        TaylorSeries { coeffs }
    }

    /// Primitive vanishing at the origin.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, &c)| c / (n + 1) as f64),
        );
        TaylorSeries { coeffs }
    }

    /// Cauchy product truncated at degree `n`.
    pub fn product(&self, other: &TaylorSeries, n: usize) -> Truncated {
        let mut coeffs = vec![ZERO; n + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a == ZERO {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        Truncated {
            series: TaylorSeries { coeffs },
            truncated: self.degree() + other.degree() > n,
        }
    }

    /// `self ∘ inner` up to degree `n`, by Horner's scheme with truncation at
    /// every step. The inner series must fix the origin.
    pub fn compose(&self, inner: &TaylorSeries, n: usize) -> Result<Self, SeriesError> {
        if inner.coeffs[0] != ZERO {
            return Err(SeriesError::InnerNotOriginFixing(inner.coeffs[0]));
        }
        let inner = inner.truncate(n);
        let mut acc = TaylorSeries::zero(n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.product(&inner, n).series;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// `z ↦ f(rz)`.
    pub fn dilate(&self, r: f64) -> Result<Self, SeriesError> {
        if !(0.0..=1.0).contains(&r) {
            return Err(SeriesError::DilationFactor(r));
        }
        let mut scale = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let out = c * scale;
                scale *= r;
                out
            })
            .collect();
        Ok(TaylorSeries { coeffs })
    }

    /// `1/f` up to degree `n`.
    pub fn reciprocal(&self, n: usize) -> Result<Self, SeriesError> {
        let a0 = self.coeffs[0];
        if a0 == ZERO {
            return Err(SeriesError::NotInvertible);
        }
        let inv = ONE / a0;
        let mut out = vec![ZERO; n + 1];
        out[0] = inv;
        for k in 1..=n {
            let mut acc = ZERO;
            for j in 1..=k.min(self.degree()) {
                acc += self.coeffs[j] * out[k - j];
            }
            out[k] = -acc * inv;
        }
        let out = TaylorSeries { coeffs: out };
        match out.coeffs.iter().position(|c| !c.is_finite()) {
            Some(i) => Err(SeriesError::NonFinite(i)),
            None => Ok(out),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        TaylorSeries {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    /// `z · f`.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend_from_slice(&self.coeffs);
        TaylorSeries { coeffs }
    }

    /// Largest coefficient difference, treating missing coefficients as zero.
    pub fn max_abs_diff(&self, other: &TaylorSeries) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|n| (self.coeff(n) - other.coeff(n)).norm())
            .fold(0.0, f64::max)
    }

    /// Upper bound for the B₁ norm by the triangle inequality on monomials,
    /// using `‖zⁿ‖_{B₁} = 2(n−1)` for `n ≥ 2`.
    pub fn b1_majorant(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                let weight = if n < 2 { 1.0 } else { 2.0 * (n - 1) as f64 };
                weight * c.norm()
            })
            .sum()
    }
}

fn zip_with(a: &TaylorSeries, b: &TaylorSeries, op: impl Fn(C64, C64) -> C64) -> TaylorSeries {
    let len = a.coeffs.len().max(b.coeffs.len());
    TaylorSeries {
        coeffs: (0..len).map(|n| op(a.coeff(n), b.coeff(n))).collect(),
    }
}

impl Add for &TaylorSeries {
    type Output = TaylorSeries;
    fn add(self, rhs: &TaylorSeries) -> TaylorSeries {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &TaylorSeries {
    type Output = TaylorSeries;
    fn sub(self, rhs: &TaylorSeries) -> TaylorSeries {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Neg for &TaylorSeries {
    type Output = TaylorSeries;
    fn neg(self) -> TaylorSeries {
        self.scale(-ONE)
    }
}

impl Analytic for TaylorSeries {
    fn value(&self, z: C64) -> C64 {
        self.horner(z)
    }
    fn derivs(&self, z: C64) -> (C64, C64) {
        let j = self.jet_at(z);
        (j.d1, j.d2)
    }
    fn jet(&self, z: C64) -> Jet {
        self.jet_at(z)
    }
}

/// Taylor coefficients of `σ_a(z) = (a − z)/(1 − āz)` up to degree `n`.
pub fn moebius_series(a: C64, n: usize) -> Result<TaylorSeries, SeriesError> {
    let r = a.norm();
    if r >= 1.0 || !r.is_finite() {
        return Err(SeriesError::MoebiusParameter(r));
    }
    let lead = -(1.0 - a.norm_sqr());
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(a);
    let mut power = ONE;
    for _ in 1..=n {
        coeffs.push(power * lead);
        power *= a.conj();
    }
    Ok(TaylorSeries { coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[f64]) -> TaylorSeries {
        TaylorSeries::from_real(c).unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(s(&[1.0, 2.0, 1.0]).eval(c(1.0, 0.0)).unwrap(), c(4.0, 0.0));
        assert_eq!(s(&[0.0, 1.0]).eval(c(0.0, 1.0)).unwrap(), c(0.0, 1.0));
        let m = moebius_series(c(0.5, 0.0), 40).unwrap();
        let got = m.eval(c(0.3, 0.0)).unwrap();
        // closed form (a − z)/(1 − āz); truncation tail ~ 0.5^40 · 0.3^41
        assert!((got - c(0.2 / 0.85, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eval_rejects_outside() {
        assert_eq!(
            s(&[1.0]).eval(c(1.1, 0.0)),
            Err(SeriesError::OutsideDisk(c(1.1, 0.0)))
        );
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(s(&[1.0, 2.0, 1.0]).derivative(), s(&[2.0, 2.0]));
        assert_eq!(s(&[3.0]).derivative(), s(&[0.0]));
        assert_eq!(s(&[0.0, 0.0, 0.0, 1.0]).derivative(), s(&[0.0, 0.0, 3.0]));
    }

    #[test]
    fn antiderivative_examples() {
        assert_eq!(s(&[1.0]).antiderivative(), s(&[0.0, 1.0]));
        assert_eq!(s(&[0.0, 2.0]).antiderivative(), s(&[0.0, 0.0, 1.0]));
        let t = s(&[3.0, 1.0, 4.0]);
        assert_eq!(t.antiderivative().derivative(), t);
    }

    #[test]
    fn product_examples() {
        let p = s(&[1.0, 1.0]).product(&s(&[1.0, 1.0]), 4);
        assert_eq!(p.series, s(&[1.0, 2.0, 1.0, 0.0, 0.0]));
        assert!(!p.truncated);
        let t = s(&[0.3, -1.0, 2.0]);
        assert_eq!(t.product(&s(&[1.0]), 2).series, t);
        let q = s(&[1.0, 1.0, 1.0]).product(&s(&[1.0, -1.0]), 4);
        assert_eq!(q.series, s(&[1.0, 0.0, 0.0, -1.0, 0.0]));
        let cut = s(&[1.0, 1.0, 1.0]).product(&s(&[1.0, 1.0]), 2);
        assert!(cut.truncated);
        assert_eq!(cut.series, s(&[1.0, 2.0, 2.0]));
    }

    #[test]
    fn compose_examples() {
        let t = s(&[0.0, 0.5, -0.25]);
        assert_eq!(s(&[0.0, 1.0]).compose(&t, 2).unwrap(), t);
        assert_eq!(
            s(&[0.0, 0.0, 1.0]).compose(&s(&[0.0, 0.0, 1.0]), 4).unwrap(),
            s(&[0.0, 0.0, 0.0, 0.0, 1.0])
        );
        assert_eq!(
            s(&[1.0, 1.0]).compose(&s(&[0.0, 0.5]), 2).unwrap(),
            s(&[1.0, 0.5, 0.0])
        );
        assert!(matches!(
            s(&[1.0, 1.0]).compose(&s(&[0.1, 0.5]), 2),
            Err(SeriesError::InnerNotOriginFixing(_))
        ));
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(
            moebius_series(c(0.0, 0.0), 3).unwrap(),
            s(&[0.0, -1.0, 0.0, 0.0])
        );
        // (a − z)(1 + āz + ā²z² + …) with a = 1/2
        let m = moebius_series(c(0.5, 0.0), 3).unwrap();
        let want = [0.5, -0.75, -0.375, -0.1875];
        for (got, w) in m.coeffs().iter().zip(want) {
            assert!((got - c(w, 0.0)).norm() < 1e-15);
        }
        let a = c(0.3, 0.4);
        let m = moebius_series(a, 64).unwrap();
        assert!(m.eval(a).unwrap().norm() < 1e-12);
        assert!(moebius_series(c(1.0, 0.0), 3).is_err());
    }

    #[test]
    fn dilate_examples() {
        let t = s(&[1.0, 2.0, 4.0]);
        assert_eq!(t.dilate(1.0).unwrap(), t);
        assert_eq!(t.dilate(0.0).unwrap(), s(&[1.0, 0.0, 0.0]));
        assert_eq!(t.dilate(0.5).unwrap(), s(&[1.0, 1.0, 1.0]));
        assert!(t.dilate(1.5).is_err());
        assert!(t.dilate(-0.1).is_err());
    }

    #[test]
    fn reciprocal_of_one_minus_z() {
        let r = s(&[1.0, -1.0]).reciprocal(5).unwrap();
        assert_eq!(r, s(&[1.0; 6]));
        assert_eq!(s(&[0.0, 1.0]).reciprocal(3), Err(SeriesError::NotInvertible));
    }

    #[test]
    fn non_finite_rejected() {
        assert_eq!(
            TaylorSeries::from_real(&[1.0, f64::NAN]),
            Err(SeriesError::NonFinite(1))
        );
    }

    #[test]
    fn moebius_involution_on_low_coefficients() {
        let a = c(0.4, -0.3);
        let n = 64;
        let m = moebius_series(a, n).unwrap();
        // σ_a ∘ σ_a = id, but σ_a(0) = a ≠ 0, so compose the centred pieces:
        // σ_a(σ_a(z)) evaluated on coefficients via the identity
        // σ_a(w) = a − (1−|a|²) w / (1 − ā w) with w = σ_a(z).
        let w = m.clone();
        let one_minus = &TaylorSeries::constant(ONE) - &w.scale(a.conj());
        let inv = one_minus.reciprocal(n).unwrap();
        let frac = w.product(&inv, n).series.scale(C64::from(-(1.0 - a.norm_sqr())));
        let back = &TaylorSeries::constant(a) + &frac;
        let tol = 10.0 * a.norm().powf(n as f64 / 2.0);
        for k in 0..=n / 2 {
            let want = if k == 1 { ONE } else { ZERO };
            assert!((back.coeff(k) - want).norm() <= tol.max(1e-12), "k={k}");
        }
    }

    #[test]
    fn b1_majorant_of_monomials() {
        assert_eq!(TaylorSeries::monomial(1).b1_majorant(), 1.0);
        assert_eq!(TaylorSeries::monomial(4).b1_majorant(), 6.0);
    }
}
