//! Pointwise evaluation of analytic functions together with their first two
//! derivatives.
//!
//! Every norm in this crate only ever needs `f`, `f'` and `f''`, so a [`Jet`]
//! of order two is the common currency between the expression trees, the
//! truncated series and the operator images.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

/// Value and first two derivatives of a function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: C64,
    pub d1: C64,
    pub d2: C64,
}

impl Jet {
    pub const ZERO: Jet = Jet {
        value: C64::new(0.0, 0.0),
        d1: C64::new(0.0, 0.0),
        d2: C64::new(0.0, 0.0),
    };

    pub fn new(value: C64, d1: C64, d2: C64) -> Self {
        Jet { value, d1, d2 }
    }

    pub fn constant(c: C64) -> Self {
        Jet::new(c, C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    /// The jet of `z ↦ z` at `z`.
    pub fn identity(z: C64) -> Self {
        Jet::new(z, C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    /// Derivative of order `n` (0, 1 or 2).
    pub fn order(&self, n: usize) -> C64 {
        match n {
            0 => self.value,
            1 => self.d1,
            _ => self.d2,
        }
    }

    pub fn scale(self, c: C64) -> Self {
        Jet::new(self.value * c, self.d1 * c, self.d2 * c)
    }

    /// Chain rule: `self` is the outer jet evaluated at `inner.value`.
    pub fn chain(self, inner: Jet) -> Self {
        Jet::new(
            self.value,
            self.d1 * inner.d1,
            self.d2 * inner.d1 * inner.d1 + self.d1 * inner.d2,
        )
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        Jet::new(self.value + rhs.value, self.d1 + rhs.d1, self.d2 + rhs.d2)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        Jet::new(self.value - rhs.value, self.d1 - rhs.d1, self.d2 - rhs.d2)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.value, -self.d1, -self.d2)
    }
}

/// Leibniz rule.
impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        Jet::new(
            self.value * rhs.value,
            self.d1 * rhs.value + self.value * rhs.d1,
            self.d2 * rhs.value + self.d1 * rhs.d1 * 2.0 + self.value * rhs.d2,
        )
    }
}

/// An analytic function on a neighbourhood of the closed unit disk that can be
/// sampled pointwise.
///
/// `derivs` must be cheap; `value` may be expensive for images of integral
/// operators (it is then computed by a line integral from the origin).
pub trait Analytic {
    fn value(&self, z: C64) -> C64;

    /// `(f'(z), f''(z))`.
    fn derivs(&self, z: C64) -> (C64, C64);

    fn jet(&self, z: C64) -> Jet {
        let (d1, d2) = self.derivs(z);
        Jet::new(self.value(z), d1, d2)
    }
}

impl<T: Analytic + ?Sized> Analytic for &T {
    fn value(&self, z: C64) -> C64 {
        (**self).value(z)
    }
    fn derivs(&self, z: C64) -> (C64, C64) {
        (**self).derivs(z)
    }
    fn jet(&self, z: C64) -> Jet {
        (**self).jet(z)
    }
}

impl<T: Analytic + ?Sized> Analytic for Box<T> {
    fn value(&self, z: C64) -> C64 {
        (**self).value(z)
    }
    fn derivs(&self, z: C64) -> (C64, C64) {
        (**self).derivs(z)
    }
    fn jet(&self, z: C64) -> Jet {
        (**self).jet(z)
    }
}

/// `f - f(0)`.
pub struct Centered<F> {
    inner: F,
    shift: C64,
}

impl<F: Analytic> Centered<F> {
    pub fn new(inner: F) -> Self {
        let shift = inner.value(C64::new(0.0, 0.0));
        Centered { inner, shift }
    }
}

impl<F: Analytic> Analytic for Centered<F> {
    fn value(&self, z: C64) -> C64 {
        self.inner.value(z) - self.shift
    }
    fn derivs(&self, z: C64) -> (C64, C64) {
        self.inner.derivs(z)
    }
}

/// `outer ∘ inner`, both given as pointwise evaluators.
pub struct Composed<O, I> {
    pub outer: O,
    pub inner: I,
}

impl<O: Analytic, I: Analytic> Analytic for Composed<O, I> {
    fn value(&self, z: C64) -> C64 {
        self.outer.value(self.inner.value(z))
    }
    fn derivs(&self, z: C64) -> (C64, C64) {
        let inner = self.inner.jet(z);
        let (o1, o2) = self.outer.derivs(inner.value);
        (o1 * inner.d1, o2 * inner.d1 * inner.d1 + o1 * inner.d2)
    }
}

/// Gauss–Legendre nodes on `[0, 1]` for line integrals from the origin.
pub(crate) fn segment_rule() -> &'static [(f64, f64)] {
    use std::sync::OnceLock;
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let (x, w) = crate::quadrature::gauss_legendre(32);
        x.iter()
            .zip(&w)
            .map(|(&x, &w)| ((x + 1.0) / 2.0, w / 2.0))
            .collect()
    })
}

/// `∫₀^z h(w) dw` along the straight segment.
pub(crate) fn integrate_from_origin(z: C64, h: impl Fn(C64) -> C64) -> C64 {
    if z == C64::new(0.0, 0.0) {
        return z;
    }
    segment_rule()
        .iter()
        .map(|&(t, w)| h(z * t) * w)
        .sum::<C64>()
        * z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leibniz_matches_polynomial_product() {
        // (1 + z)(z^2) = z^2 + z^3 at z = 0.5
        let z = C64::new(0.5, 0.0);
        let a = Jet::new(1.0 + z, C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        let b = Jet::new(z * z, z * 2.0, C64::new(2.0, 0.0));
        let p = a * b;
        assert!((p.value - (z * z + z * z * z)).norm() < 1e-15);
        assert!((p.d1 - (z * 2.0 + z * z * 3.0)).norm() < 1e-15);
        assert!((p.d2 - (C64::new(2.0, 0.0) + z * 6.0)).norm() < 1e-15);
    }

    #[test]
    fn line_integral_of_polynomial() {
        let z = C64::new(0.3, -0.4);
        let got = integrate_from_origin(z, |w| w * w * 3.0);
        assert!((got - z * z * z).norm() < 1e-15);
    }
}
