//! The operators `T_g`, `I_g`, `M_g`, `C_φ`, `D`, `T_z` and `P`.
//!
//! Each operator acts on truncated series ([`apply`]) and, except `D`, on
//! pointwise evaluators ([`image`]): the first two derivatives of an image
//! follow from those of `f` and the symbol by the Leibniz and chain rules,
//! so norms of images carry no truncation error.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::analytic::{integrate_from_origin, Analytic, Composed, Jet};
use crate::funcexpr::{ExprError, FuncExpr};
use crate::lab::Lab;
use crate::series::{SeriesError, TaylorSeries};
use crate::spaces::{b1_on, SpaceError};

/// Denominators below this make a Deddens ratio meaningless.
pub const DEGENERATE_NORM: f64 = 1e-12;
/// `|φ(0)|` at or below this counts as origin-fixing for closed-form paths.
pub const ORIGIN_SLACK: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("operator {0} needs a symbol")]
    MissingSymbol(OpKind),
    #[error("operator {0} takes no symbol")]
    UnexpectedSymbol(OpKind),
    #[error("φ(0) = {0}; this path needs φ(0) = 0")]
    NotOriginFixing(C64),
    #[error("operator {0} has no closed-form image; use the series path")]
    NoClosedForm(OpKind),
    #[error("inner operator must be Tg, Ig or Mg, got {0}")]
    UnsupportedInner(OpKind),
    #[error("degenerate input: ‖C_φ^n f‖ = {0} is below {DEGENERATE_NORM}")]
    Degenerate(f64),
    #[error("unknown operator {0:?}")]
    UnknownKind(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OpKind {
    Tg,
    Ig,
    Mg,
    Cphi,
    D,
    Tz,
    P,
}

impl OpKind {
    pub fn needs_symbol(self) -> bool {
        matches!(self, OpKind::Tg | OpKind::Ig | OpKind::Mg | OpKind::Cphi)
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OpKind::Tg => "Tg",
            OpKind::Ig => "Ig",
            OpKind::Mg => "Mg",
            OpKind::Cphi => "Cphi",
            OpKind::D => "D",
            OpKind::Tz => "Tz",
            OpKind::P => "P",
        };
        f.write_str(s)
    }
}

impl FromStr for OpKind {
    type Err = OperatorError;
    fn from_str(s: &str) -> Result<Self, OperatorError> {
        Ok(match s {
            "Tg" => OpKind::Tg,
            "Ig" => OpKind::Ig,
            "Mg" => OpKind::Mg,
            "Cphi" => OpKind::Cphi,
            "D" => OpKind::D,
            "Tz" => OpKind::Tz,
            "P" => OpKind::P,
            _ => return Err(OperatorError::UnknownKind(s.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    kind: OpKind,
    symbol: Option<FuncExpr>,
}

impl OperatorSpec {
    /// Validates that a symbol is present exactly when the kind needs one.
    /// `C_φ` symbols must map the disk into itself.
    pub fn new(kind: OpKind, symbol: Option<FuncExpr>) -> Result<Self, OperatorError> {
        match (&symbol, kind.needs_symbol()) {
            (None, true) => return Err(OperatorError::MissingSymbol(kind)),
            (Some(_), false) => return Err(OperatorError::UnexpectedSymbol(kind)),
            _ => {}
        }
        if let (OpKind::Cphi, Some(phi)) = (kind, &symbol) {
            let m = phi.boundary_max_modulus(crate::funcexpr::SELF_MAP_GRID);
            if !(m <= 1.0 + 1e-12) {
                return Err(ExprError::NotSelfMap(m).into());
            }
        }
        Ok(OperatorSpec { kind, symbol })
    }

    pub fn with_symbol(kind: OpKind, symbol: FuncExpr) -> Result<Self, OperatorError> {
        Self::new(kind, Some(symbol))
    }

    pub fn bare(kind: OpKind) -> Result<Self, OperatorError> {
        Self::new(kind, None)
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    pub fn symbol(&self) -> Option<&FuncExpr> {
        self.symbol.as_ref()
    }

    /// Series of the symbol to degree `n + 1`, enough for `g'` to degree `n`.
    fn symbol_series(&self, n: usize) -> Option<TaylorSeries> {
        self.symbol.as_ref().map(|s| s.to_series(n + 1).series)
    }
}

/// Applies `kind` with the symbol given by its series. The result has
/// degree exactly `n`; it is exact modulo `z^{n+1}` when `f` has degree at
/// least `n` and the symbol at least `n + 1`.
pub fn apply_series(
    kind: OpKind,
    symbol: Option<&TaylorSeries>,
    f: &TaylorSeries,
    n: usize,
) -> Result<TaylorSeries, OperatorError> {
    let sym = || symbol.ok_or(OperatorError::MissingSymbol(kind));
    let out = match kind {
        OpKind::Tg => f.product(&sym()?.derivative(), n).series.antiderivative(),
        OpKind::Ig => f.derivative().product(sym()?, n).series.antiderivative(),
        OpKind::Mg => f.product(sym()?, n).series,
        OpKind::Cphi => f.compose(sym()?, n)?,
        OpKind::D => f.derivative(),
        OpKind::Tz => f.antiderivative(),
        OpKind::P => {
            let mut c = vec![C64::new(0.0, 0.0); n + 1];
            for (k, slot) in c.iter_mut().enumerate().skip(1) {
                *slot = f.coeff(k - 1) * ((k + 1) as f64 / k as f64);
            }
            TaylorSeries::from_vec(c)
        }
    };
    Ok(out.truncate(n))
}

/// `op f` truncated to degree `n`.
pub fn apply(op: &OperatorSpec, f: &TaylorSeries, n: usize) -> Result<TaylorSeries, OperatorError> {
    let sym = op.symbol_series(n);
    if let (OpKind::Cphi, Some(s)) = (op.kind, &sym) {
        if s.coeff(0) != C64::new(0.0, 0.0) {
            return Err(OperatorError::NotOriginFixing(s.coeff(0)));
        }
    }
    apply_series(op.kind, sym.as_ref(), f, n)
}

/// Finite section of an operator in the monomial basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorMatrix {
    pub size: usize,
    /// `columns[k][m]` is the coefficient of `z^m` in `op(z^k)`.
    pub columns: Vec<Vec<C64>>,
}

impl OperatorMatrix {
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.columns[col][row]
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.size).map(|k| self.entry(k, k)).collect()
    }

    /// Largest modulus on or above the diagonal.
    pub fn max_upper(&self) -> f64 {
        let mut best = 0.0f64;
        for k in 0..self.size {
            for m in 0..=k {
                best = best.max(self.entry(m, k).norm());
            }
        }
        best
    }
}

/// Columns `apply(op, zᵏ, n−1)` for `k < n`.
pub fn operator_matrix(op: &OperatorSpec, n: usize) -> Result<OperatorMatrix, OperatorError> {
    let top = n.saturating_sub(1);
    let sym = op.symbol_series(top);
    if let (OpKind::Cphi, Some(s)) = (op.kind, &sym) {
        if s.coeff(0) != C64::new(0.0, 0.0) {
            return Err(OperatorError::NotOriginFixing(s.coeff(0)));
        }
    }
    let columns = (0..n)
        .map(|k| {
            let e = TaylorSeries::monomial(k).truncate(top);
            apply_series(op.kind, sym.as_ref(), &e, top).map(TaylorSeries::into_coeffs)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OperatorMatrix { size: n, columns })
}

/// `op f` as a pointwise evaluator. Derivatives are exact; values of the
/// integral operators come from a Gauss–Legendre line integral from `0`.
pub struct Image<'a, F: ?Sized> {
    kind: OpKind,
    symbol: Option<&'a FuncExpr>,
    f: &'a F,
}

impl<'a, F: Analytic + ?Sized> Image<'a, F> {
    pub fn new(op: &'a OperatorSpec, f: &'a F) -> Result<Self, OperatorError> {
        Self::with_symbol(op.kind, op.symbol(), f)
    }

    pub fn with_symbol(
        kind: OpKind,
        symbol: Option<&'a FuncExpr>,
        f: &'a F,
    ) -> Result<Self, OperatorError> {
        if kind == OpKind::D {
            return Err(OperatorError::NoClosedForm(kind));
        }
        if kind.needs_symbol() && symbol.is_none() {
            return Err(OperatorError::MissingSymbol(kind));
        }
        Ok(Image { kind, symbol, f })
    }

    fn g(&self, z: C64) -> Jet {
        self.symbol.expect("validated symbol").jet(z)
    }
}

impl<F: Analytic + ?Sized> Analytic for Image<'_, F> {
    fn value(&self, z: C64) -> C64 {
        match self.kind {
            OpKind::Tg => integrate_from_origin(z, |w| self.f.value(w) * self.g(w).d1),
            OpKind::Ig => integrate_from_origin(z, |w| self.f.derivs(w).0 * self.g(w).value),
            OpKind::Mg => self.f.value(z) * self.g(z).value,
            OpKind::Cphi => self.f.value(self.g(z).value),
            OpKind::Tz => integrate_from_origin(z, |w| self.f.value(w)),
            OpKind::P => z * self.f.value(z) + integrate_from_origin(z, |w| self.f.value(w)),
            OpKind::D => unreachable!("rejected at construction"),
        }
    }

    fn derivs(&self, z: C64) -> (C64, C64) {
        match self.kind {
            OpKind::Tg => {
                let (f, g) = (self.f.jet(z), self.g(z));
                (f.value * g.d1, f.d1 * g.d1 + f.value * g.d2)
            }
            OpKind::Ig => {
                let (f1, f2) = self.f.derivs(z);
                let g = self.g(z);
                (f1 * g.value, f2 * g.value + f1 * g.d1)
            }
            OpKind::Mg => {
                let j = self.f.jet(z) * self.g(z);
                (j.d1, j.d2)
            }
            OpKind::Cphi => {
                let phi = self.g(z);
                let (o1, o2) = self.f.derivs(phi.value);
                (o1 * phi.d1, o2 * phi.d1 * phi.d1 + o1 * phi.d2)
            }
            OpKind::Tz => {
                let f = self.f.jet(z);
                (f.value, f.d1)
            }
            OpKind::P => {
                let f = self.f.jet(z);
                (f.value * 2.0 + z * f.d1, f.d1 * 3.0 + z * f.d2)
            }
            OpKind::D => unreachable!("rejected at construction"),
        }
    }

    fn jet(&self, z: C64) -> Jet {
        let (d1, d2) = self.derivs(z);
        Jet::new(self.value(z), d1, d2)
    }
}

/// `φ ∘ ⋯ ∘ φ` (`n` times); `n = 0` gives the identity.
pub fn iterate_phi(phi: &FuncExpr, n: usize) -> Result<FuncExpr, OperatorError> {
    if n == 0 {
        return Ok(FuncExpr::z());
    }
    let mut acc = phi.clone();
    for _ in 1..n {
        acc = FuncExpr::compose(phi.clone(), acc)?;
    }
    Ok(acc)
}

fn check_origin_fixing(phi: &FuncExpr) -> Result<(), OperatorError> {
    let p0 = phi.jet(C64::new(0.0, 0.0)).value;
    if p0.norm() > ORIGIN_SLACK {
        return Err(OperatorError::NotOriginFixing(p0));
    }
    Ok(())
}

fn check_inner(inner: &OperatorSpec) -> Result<(), OperatorError> {
    match inner.kind {
        OpKind::Tg | OpKind::Ig | OpKind::Mg => Ok(()),
        k => Err(OperatorError::UnsupportedInner(k)),
    }
}

/// `‖C_φⁿ(inner f)‖_{B₁} / ‖C_φⁿ f‖_{B₁}`, evaluated in closed form on the
/// base rule.
pub fn deddens_ratio(
    lab: &Lab,
    phi: &FuncExpr,
    inner: &OperatorSpec,
    f: &FuncExpr,
    n: usize,
) -> Result<f64, OperatorError> {
    check_origin_fixing(phi)?;
    check_inner(inner)?;
    let phi_n = iterate_phi(phi, n)?;
    let denom = b1_on(
        &lab.rule,
        &Composed {
            outer: f,
            inner: &phi_n,
        },
    )?;
    if !(denom > DEGENERATE_NORM) {
        return Err(OperatorError::Degenerate(denom));
    }
    let image = Image::new(inner, f)?;
    let num = b1_on(
        &lab.rule,
        &Composed {
            outer: &image,
            inner: &phi_n,
        },
    )?;
    Ok(num / denom)
}

/// Largest coefficient difference between `C_φⁿ(inner f)` and
/// `inner_{g∘φₙ}(C_φⁿ f)`, both truncated at degree `big_n`.
pub fn intertwine_residual(
    phi: &FuncExpr,
    inner: &OperatorSpec,
    f: &FuncExpr,
    n: usize,
    big_n: usize,
) -> Result<f64, OperatorError> {
    check_origin_fixing(phi)?;
    check_inner(inner)?;
    let phi_n = iterate_phi(phi, n)?.to_series(big_n + 1).series;
    if phi_n.coeff(0) != C64::new(0.0, 0.0) {
        return Err(OperatorError::NotOriginFixing(phi_n.coeff(0)));
    }
    let g = inner
        .symbol()
        .ok_or(OperatorError::MissingSymbol(inner.kind))?
        .to_series(big_n + 1)
        .series;
    let f = f.to_series(big_n).series;
    let lhs = apply_series(inner.kind, Some(&g), &f, big_n)?.compose(&phi_n, big_n)?;
    let g_phi = g.compose(&phi_n, big_n + 1)?;
    let rhs = apply_series(inner.kind, Some(&g_phi), &f.compose(&phi_n, big_n)?, big_n)?;
    Ok(lhs.max_abs_diff(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn lab() -> &'static Lab {
        static LAB: OnceLock<Lab> = OnceLock::new();
        LAB.get_or_init(Lab::with_defaults)
    }

    fn s(c: &[f64]) -> TaylorSeries {
        TaylorSeries::from_real(c).unwrap()
    }

    fn op(kind: OpKind, sym: Option<FuncExpr>) -> OperatorSpec {
        OperatorSpec::new(kind, sym).unwrap()
    }

    #[test]
    fn apply_examples() {
        let tz = op(OpKind::Tg, Some(FuncExpr::z()));
        assert_eq!(apply(&tz, &s(&[1.0]), 3).unwrap(), s(&[0.0, 1.0, 0.0, 0.0]));
        let tz2 = op(OpKind::Tg, Some(FuncExpr::monomial(2)));
        assert_eq!(apply(&tz2, &s(&[1.0]), 3).unwrap(), s(&[0.0, 0.0, 1.0, 0.0]));
        let p = op(OpKind::P, None);
        assert_eq!(apply(&p, &s(&[1.0]), 2).unwrap(), s(&[0.0, 2.0, 0.0]));
        let ig = op(OpKind::Ig, Some(FuncExpr::z()));
        assert_eq!(apply(&ig, &s(&[0.0, 1.0]), 3).unwrap(), s(&[0.0, 0.0, 0.5, 0.0]));
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(OperatorSpec::bare(OpKind::Tg), Err(OperatorError::MissingSymbol(_))));
        assert!(matches!(
            OperatorSpec::with_symbol(OpKind::D, FuncExpr::z()),
            Err(OperatorError::UnexpectedSymbol(_))
        ));
        let big = FuncExpr::poly_real(&[0.0, 2.0]);
        assert!(OperatorSpec::with_symbol(OpKind::Cphi, big).is_err());
        let shifted = op(OpKind::Cphi, Some(FuncExpr::poly_real(&[0.5, 0.5])));
        assert!(matches!(
            apply(&shifted, &s(&[1.0]), 4),
            Err(OperatorError::NotOriginFixing(_))
        ));
        assert!("Xg".parse::<OpKind>().is_err());
    }

    #[test]
    fn matrix_examples() {
        let g = FuncExpr::poly_real(&[0.3, -1.0, 0.5, 2.0]);
        let tg = operator_matrix(&op(OpKind::Tg, Some(g.clone())), 12).unwrap();
        assert_eq!(tg.max_upper(), 0.0);
        let mg = operator_matrix(&op(OpKind::Mg, Some(g)), 12).unwrap();
        assert!(mg.diagonal().iter().all(|&d| d == C64::new(0.3, 0.0)));
        // Toeplitz
        assert_eq!(mg.entry(5, 2), mg.entry(4, 1));
        let d = operator_matrix(&op(OpKind::D, None), 8).unwrap();
        for k in 0..7 {
            assert_eq!(d.entry(k, k + 1), C64::new((k + 1) as f64, 0.0));
        }
    }

    #[test]
    fn iterate_examples() {
        let half = FuncExpr::poly_real(&[0.0, 0.5]);
        let it = iterate_phi(&half, 3).unwrap().to_series(4).series;
        assert_eq!(it, s(&[0.0, 0.125, 0.0, 0.0, 0.0]));
        let sq = iterate_phi(&FuncExpr::monomial(2), 2).unwrap().to_series(5).series;
        assert_eq!(sq, s(&[0.0, 0.0, 0.0, 0.0, 1.0, 0.0]));
        let phi = FuncExpr::poly_real(&[0.0, 0.7, 0.3]);
        for n in 1..=8 {
            assert_eq!(iterate_phi(&phi, n).unwrap().jet(C64::new(0.0, 0.0)).value.norm(), 0.0);
        }
    }

    #[test]
    fn images_match_series() {
        let g = FuncExpr::poly_real(&[0.2, 0.5, -0.3]);
        let f = FuncExpr::moebius(C64::new(0.3, 0.2)).unwrap();
        let fs = f.to_series(80).series;
        let z = C64::new(0.35, -0.4);
        for kind in [OpKind::Tg, OpKind::Ig, OpKind::Mg, OpKind::Tz, OpKind::P] {
            let sym = kind.needs_symbol().then(|| g.clone());
            let spec = op(kind, sym);
            let image = Image::new(&spec, &f).unwrap();
            let series = apply(&spec, &fs, 80).unwrap();
            let want = series.jet_at(z);
            let got = image.jet(z);
            assert!((got - want).value.norm() < 1e-13, "{kind}");
            assert!((got - want).d1.norm() < 1e-13, "{kind}");
            assert!((got - want).d2.norm() < 1e-12, "{kind}");
        }
    }

    #[test]
    fn deddens_examples() {
        let lab = lab();
        let half = FuncExpr::poly_real(&[0.0, 0.5]);
        let tz = op(OpKind::Tg, Some(FuncExpr::z()));
        let one = FuncExpr::poly_real(&[1.0]);
        let r = deddens_ratio(lab, &half, &tz, &one, 1).unwrap();
        assert!((r - 0.5).abs() < 1e-14);
        let mc = op(OpKind::Mg, Some(FuncExpr::constant(C64::new(0.0, 1.5)).unwrap()));
        let f = FuncExpr::poly_real(&[0.1, 1.0, 0.4]);
        for n in 1..=4 {
            let r = deddens_ratio(lab, &FuncExpr::monomial(2), &mc, &f, n).unwrap();
            assert!((r - 1.5).abs() < 1e-12);
        }
        let zero_f = FuncExpr::poly_real(&[0.0]);
        assert!(matches!(
            deddens_ratio(lab, &half, &tz, &zero_f, 1),
            Err(OperatorError::Degenerate(_))
        ));
    }

    #[test]
    fn intertwine_examples() {
        let one = FuncExpr::poly_real(&[1.0]);
        for kind in [OpKind::Tg, OpKind::Mg, OpKind::Ig] {
            let inner = op(kind, Some(FuncExpr::z()));
            let r = intertwine_residual(&FuncExpr::monomial(2), &inner, &one, 2, 16).unwrap();
            assert!(r <= 1e-13, "{kind}: {r}");
        }
        let phi = FuncExpr::poly_real(&[0.0, 0.7, 0.3]);
        let g = FuncExpr::poly_real(&[0.5, -0.2, 0.1]);
        let f = FuncExpr::poly_real(&[1.0, 0.3, 0.0, -0.4]);
        for kind in [OpKind::Tg, OpKind::Mg, OpKind::Ig] {
            let inner = op(kind, Some(g.clone()));
            for n in 1..=5 {
                let r = intertwine_residual(&phi, &inner, &f, n, 64).unwrap();
                assert!(r <= 1e-12, "{kind} n={n}: {r}");
            }
        }
    }

    #[test]
    fn structural_identities() {
        let f = s(&[0.3, -1.0, 2.0, 0.5, 0.25]);
        let n = 8;
        let d = op(OpKind::D, None);
        let tz = op(OpKind::Tz, None);
        let p = op(OpKind::P, None);
        let dt = apply(&d, &apply(&tz, &f, n + 1).unwrap(), n).unwrap();
        assert!(dt.max_abs_diff(&f.truncate(n)) < 1e-15);
        let td = apply(&tz, &apply(&d, &f, n).unwrap(), n).unwrap();
        let mut centered = f.truncate(n).into_coeffs();
        centered[0] = C64::new(0.0, 0.0);
        assert!(td.max_abs_diff(&TaylorSeries::new(centered).unwrap()) < 1e-15);
        let pf = apply(&p, &f, n).unwrap();
        let other = f.antiderivative().shift_up().derivative().truncate(n);
        assert!(pf.max_abs_diff(&other) < 1e-14);
        let ig = op(OpKind::Ig, Some(FuncExpr::z()));
        assert_eq!(apply(&ig, &s(&[3.0]), 5).unwrap(), TaylorSeries::zero(5));
    }
}
