//! Closed-form test functions: polynomials, Möbius atoms, finite atomic
//! combinations and their sums, products, compositions and dilations.
//!
//! Textual literals follow this grammar (whitespace is ignored):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := atom (('∘' | '*') atom)*
//! atom  := "poly:" clist | "moebius:" c | "atoms:" pair (';' pair)*
//!        | "dilate:" real ":" expr | "const:" c | '(' expr ')'
//!        | "compose(" expr ',' expr ')' | "prod(" expr ',' expr ')'
//! pair  := c '*' c
//! clist := c (',' c)*
//! c     := complex literal such as 1, -0.5, 0.3+0.4i, -2i
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::analytic::{Analytic, Jet};
use crate::series::{moebius_series, SeriesError, TaylorSeries, DISK_SLACK};

/// Boundary samples used to certify that a composition's inner function maps
/// the disk into itself.
pub const SELF_MAP_GRID: usize = 1024;

/// Projection radii for Taylor coefficients of compositions whose inner
/// function does not fix the origin.
const PROJECTION_RADIUS: f64 = 0.9;
const RICHARDSON_RADIUS: f64 = 0.95;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("inner function of a composition is not a self-map of the disk (max modulus {0})")]
    NotSelfMap(f64),
    #[error("derivative order {0} not supported (at most 2)")]
    Order(usize),
    #[error("point {0} lies outside the closed unit disk")]
    OutsideDisk(C64),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(C64),
    Poly(Vec<C64>),
    Moebius(C64),
    /// `∑ c_k σ_{a_k}` as `(c_k, a_k)` pairs.
    Atoms(Vec<(C64, C64)>),
    Sum(Box<FuncExpr>, Box<FuncExpr>),
    Prod(Box<FuncExpr>, Box<FuncExpr>),
    Compose(Box<FuncExpr>, Box<FuncExpr>),
    Dilate(f64, Box<FuncExpr>),
}

/// A validated expression tree. Construct through the associated functions
/// or by parsing; both enforce the parameter domains and the self-map
/// condition on composition.
#[derive(Debug, Clone, PartialEq)]
pub struct FuncExpr {
    node: Node,
}

/// Taylor coefficients with a bound on `∑_{n>N} |cₙ|`.
#[derive(Debug, Clone)]
pub struct SeriesApprox {
    pub series: TaylorSeries,
    pub tail_bound: f64,
}

fn check_parameter(a: C64) -> Result<(), ExprError> {
    if a.is_finite() && a.norm() < 1.0 {
        Ok(())
    } else {
        Err(ExprError::Domain(format!(
            "Möbius parameter {a} must satisfy |a| < 1"
        )))
    }
}

fn check_finite(c: C64) -> Result<(), ExprError> {
    if c.is_finite() {
        Ok(())
    } else {
        Err(ExprError::Domain(format!("coefficient {c} is not finite")))
    }
}

impl FuncExpr {
    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn constant(c: C64) -> Result<Self, ExprError> {
        check_finite(c)?;
        Ok(FuncExpr {
            node: Node::Const(c),
        })
    }

    pub fn poly(coeffs: Vec<C64>) -> Result<Self, ExprError> {
        coeffs.iter().try_for_each(|&c| check_finite(c))?;
        let coeffs = if coeffs.is_empty() {
            vec![C64::new(0.0, 0.0)]
        } else {
            coeffs
        };
        Ok(FuncExpr {
            node: Node::Poly(coeffs),
        })
    }

    pub fn poly_real(coeffs: &[f64]) -> Self {
        Self::poly(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
            .expect("finite real coefficients")
    }

    /// `zᵏ`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); k + 1];
        coeffs[k] = C64::new(1.0, 0.0);
        FuncExpr {
            node: Node::Poly(coeffs),
        }
    }

    /// The identity `z`.
    pub fn z() -> Self {
        Self::monomial(1)
    }

    pub fn moebius(a: C64) -> Result<Self, ExprError> {
        check_parameter(a)?;
        Ok(FuncExpr {
            node: Node::Moebius(a),
        })
    }

    pub fn atoms(pairs: Vec<(C64, C64)>) -> Result<Self, ExprError> {
        if pairs.is_empty() {
            return Err(ExprError::Domain("atomic combination needs at least one atom".into()));
        }
        for &(c, a) in &pairs {
            check_finite(c)?;
            check_parameter(a)?;
        }
        Ok(FuncExpr {
            node: Node::Atoms(pairs),
        })
    }

    pub fn sum(l: FuncExpr, r: FuncExpr) -> Self {
        FuncExpr {
            node: Node::Sum(Box::new(l), Box::new(r)),
        }
    }

    pub fn prod(l: FuncExpr, r: FuncExpr) -> Self {
        FuncExpr {
            node: Node::Prod(Box::new(l), Box::new(r)),
        }
    }

    /// `l − r`, encoded as `l + (−1)·r`.
    pub fn difference(l: FuncExpr, r: FuncExpr) -> Self {
        let minus = FuncExpr {
            node: Node::Const(C64::new(-1.0, 0.0)),
        };
        Self::sum(l, Self::prod(minus, r))
    }

    pub fn scaled(c: C64, e: FuncExpr) -> Result<Self, ExprError> {
        Ok(Self::prod(Self::constant(c)?, e))
    }

    /// `outer ∘ inner`; `inner` must map the disk into itself on the
    /// boundary grid.
    pub fn compose(outer: FuncExpr, inner: FuncExpr) -> Result<Self, ExprError> {
        let m = inner.boundary_max_modulus(SELF_MAP_GRID);
        if !(m <= 1.0 + DISK_SLACK) {
            return Err(ExprError::NotSelfMap(m));
        }
        Ok(FuncExpr {
            node: Node::Compose(Box::new(outer), Box::new(inner)),
        })
    }

    /// `z ↦ e(rz)`.
    pub fn dilate(r: f64, e: FuncExpr) -> Result<Self, ExprError> {
        if !(0.0..=1.0).contains(&r) {
            return Err(ExprError::Domain(format!("dilation factor {r} outside [0, 1]")));
        }
        Ok(FuncExpr {
            node: Node::Dilate(r, Box::new(e)),
        })
    }

    /// `f − f(0)`.
    pub fn centered(&self) -> Self {
        let c = self.jet(C64::new(0.0, 0.0)).value;
        Self::sum(
            self.clone(),
            FuncExpr {
                node: Node::Const(-c),
            },
        )
    }

    /// Maximum of `|e|` over `m` equispaced boundary points.
    pub fn boundary_max_modulus(&self, m: usize) -> f64 {
        (0..m)
            .map(|j| {
                let z = C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
                self.jet(z).value.norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn contains_moebius(&self) -> bool {
        match &self.node {
            Node::Const(_) | Node::Poly(_) => false,
            Node::Moebius(_) | Node::Atoms(_) => true,
            Node::Sum(l, r) | Node::Prod(l, r) | Node::Compose(l, r) => {
                l.contains_moebius() || r.contains_moebius()
            }
            Node::Dilate(_, e) => e.contains_moebius(),
        }
    }

    /// `f`, `f'` or `f''` at `z` by exact differentiation of the tree.
    pub fn eval_closed(&self, z: C64, order: usize) -> Result<C64, ExprError> {
        if order > 2 {
            return Err(ExprError::Order(order));
        }
        if !(z.norm() <= 1.0 + DISK_SLACK) {
            return Err(ExprError::OutsideDisk(z));
        }
        Ok(self.jet(z).order(order))
    }

    /// Value and first two derivatives; no domain check.
    pub fn jet(&self, z: C64) -> Jet {
        match &self.node {
            Node::Const(c) => Jet::constant(*c),
            Node::Poly(cs) => poly_jet(cs, z),
            Node::Moebius(a) => moebius_jet(*a, z),
            Node::Atoms(pairs) => pairs
                .iter()
                .fold(Jet::ZERO, |acc, &(c, a)| acc + moebius_jet(a, z).scale(c)),
            Node::Sum(l, r) => l.jet(z) + r.jet(z),
            Node::Prod(l, r) => l.jet(z) * r.jet(z),
            Node::Compose(outer, inner) => {
                let i = inner.jet(z);
                outer.jet(i.value).chain(i)
            }
            Node::Dilate(r, e) => {
                let j = e.jet(z * *r);
                Jet::new(j.value, j.d1 * *r, j.d2 * (*r * *r))
            }
        }
    }

    /// Taylor coefficients up to degree `n` with a tail bound.
    ///
    /// The series is computed to degree `4n`; the bound is the ℓ¹ mass of the
    /// coefficients above `n` plus a geometric extrapolation of the rest and
    /// any disagreement between the two projection radii used for
    /// compositions that do not fix the origin.
    pub fn to_series(&self, n: usize) -> SeriesApprox {
        let long = 4 * n.max(1);
        let (full, projection_err) = self.series_with_error(long);
        let coeffs = full.coeffs();
        let listed: f64 = coeffs.iter().skip(n + 1).map(|c| c.norm()).sum();
        SeriesApprox {
            series: full.truncate(n),
            tail_bound: listed + geometric_remainder(coeffs) + projection_err,
        }
    }

    fn series_with_error(&self, n: usize) -> (TaylorSeries, f64) {
        match &self.node {
            Node::Const(c) => (TaylorSeries::constant(*c).truncate(n), 0.0),
            Node::Poly(cs) => (TaylorSeries::from_vec(cs.clone()).truncate(n), 0.0),
            Node::Moebius(a) => (moebius_series(*a, n).expect("validated parameter"), 0.0),
            Node::Atoms(pairs) => {
                let mut acc = TaylorSeries::zero(n);
                for &(c, a) in pairs {
                    let s = moebius_series(a, n).expect("validated parameter");
                    acc = &acc + &s.scale(c);
                }
                (acc, 0.0)
            }
            Node::Sum(l, r) => {
                let (a, ea) = l.series_with_error(n);
                let (b, eb) = r.series_with_error(n);
                (&a + &b, ea + eb)
            }
            Node::Prod(l, r) => {
                let (a, ea) = l.series_with_error(n);
                let (b, eb) = r.series_with_error(n);
                let err = ea * b.b1_majorant_sup() + eb * a.b1_majorant_sup();
                (a.product(&b, n).series, err)
            }
            Node::Compose(outer, inner) => {
                let (i, ei) = inner.series_with_error(n);
                if i.coeff(0) == C64::new(0.0, 0.0) && ei == 0.0 {
                    let (o, eo) = outer.series_with_error(n);
                    (o.compose(&i, n).expect("origin-fixing inner"), eo)
                } else {
                    self.circle_projection(n)
                }
            }
            Node::Dilate(r, e) => {
                let (s, err) = e.series_with_error(n);
                (s.dilate(*r).expect("validated factor"), err)
            }
        }
    }

    /// Coefficients from samples on circles of radius 0.9 and 0.95 with
    /// `4n` points; returns the 0.95 coefficients and their ℓ¹ distance to
    /// the 0.9 ones.
    fn circle_projection(&self, n: usize) -> (TaylorSeries, f64) {
        let fine = project_on_circle(|z| self.jet(z).value, RICHARDSON_RADIUS, n);
        let coarse = project_on_circle(|z| self.jet(z).value, PROJECTION_RADIUS, n);
        let diff = (0..=n).map(|k| (fine.coeff(k) - coarse.coeff(k)).norm()).sum();
        (fine, diff)
    }

    /// Canonical textual form; parses back to an identical tree.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl TaylorSeries {
    /// `∑|cₙ|`, an upper bound for the sup norm on the closed disk.
    fn b1_majorant_sup(&self) -> f64 {
        self.coeffs().iter().map(|c| c.norm()).sum()
    }
}

fn geometric_remainder(coeffs: &[C64]) -> f64 {
    let len = coeffs.len();
    if len < 32 {
        return 0.0;
    }
    let window = 8;
    let peak = |range: std::ops::Range<usize>| {
        coeffs[range].iter().map(|c| c.norm()).fold(0.0, f64::max)
    };
    let mid = peak(len / 2 - window..len / 2);
    let last = peak(len - window..len);
    if last == 0.0 {
        return 0.0;
    }
    if mid == 0.0 {
        return last * len as f64;
    }
    let q = (last / mid).powf(1.0 / (len / 2) as f64).min(0.999);
    last * q / (1.0 - q)
}

/// Discrete orthogonality of `zᵏ` on `|z| = ρ` with `4n` samples.
fn project_on_circle(f: impl Fn(C64) -> C64, rho: f64, n: usize) -> TaylorSeries {
    let samples = 4 * n.max(1);
    let values: Vec<C64> = (0..samples)
        .map(|j| f(C64::from_polar(rho, 2.0 * PI * j as f64 / samples as f64)))
        .collect();
    let coeffs = (0..=n)
        .map(|k| {
            let sum: C64 = values
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    let angle = -2.0 * PI * ((j * k) % samples) as f64 / samples as f64;
                    v * C64::from_polar(1.0, angle)
                })
                .sum();
            sum / (samples as f64 * rho.powi(k as i32))
        })
        .collect();
    TaylorSeries::from_vec(coeffs)
}

fn poly_jet(cs: &[C64], z: C64) -> Jet {
    let zero = C64::new(0.0, 0.0);
    let (mut p, mut d1, mut d2) = (zero, zero, zero);
    for &c in cs.iter().rev() {
        d2 = d2 * z + d1 * 2.0;
        d1 = d1 * z + p;
        p = p * z + c;
    }
    Jet::new(p, d1, d2)
}

/// `σ_a`, `σ_a' = −(1−|a|²)/(1−āz)²` and `σ_a'' = −2ā(1−|a|²)/(1−āz)³`.
pub fn moebius_jet(a: C64, z: C64) -> Jet {
    let abar = a.conj();
    let denom = C64::new(1.0, 0.0) - abar * z;
    let inv = denom.inv();
    let k = 1.0 - a.norm_sqr();
    let d1 = -inv * inv * k;
    Jet::new((a - z) * inv, d1, d1 * inv * abar * 2.0)
}

impl Analytic for FuncExpr {
    fn value(&self, z: C64) -> C64 {
        self.jet(z).value
    }
    fn derivs(&self, z: C64) -> (C64, C64) {
        let j = self.jet(z);
        (j.d1, j.d2)
    }
    fn jet(&self, z: C64) -> Jet {
        FuncExpr::jet(self, z)
    }
}

// ---------------------------------------------------------------------------
// rendering

fn fmt_complex(c: C64) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", c.re, sign, c.im.abs())
}

impl fmt::Display for FuncExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Node::Const(c) => write!(f, "const:{}", fmt_complex(*c)),
            Node::Poly(cs) => {
                let list: Vec<String> = cs.iter().map(|&c| fmt_complex(c)).collect();
                write!(f, "poly:{}", list.join(","))
            }
            Node::Moebius(a) => write!(f, "moebius:{}", fmt_complex(*a)),
            Node::Atoms(pairs) => {
                let list: Vec<String> = pairs
                    .iter()
                    .map(|&(c, a)| format!("{}*{}", fmt_complex(c), fmt_complex(a)))
                    .collect();
                write!(f, "atoms:{}", list.join(";"))
            }
            Node::Sum(l, r) => write!(f, "({l})+({r})"),
            Node::Prod(l, r) => write!(f, "prod({l},{r})"),
            Node::Compose(l, r) => write!(f, "compose({l},{r})"),
            Node::Dilate(r, e) => write!(f, "dilate:{r}:({e})"),
        }
    }
}

// ---------------------------------------------------------------------------
// parsing

impl FromStr for FuncExpr {
    type Err = ExprError;
    fn from_str(s: &str) -> Result<Self, ExprError> {
        parse(s)
    }
}

/// Parse a function literal.
pub fn parse(text: &str) -> Result<FuncExpr, ExprError> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    /// Peek at the character after the next one, skipping whitespace.
    fn peek_second(&mut self) -> Option<char> {
        self.skip_ws();
        let mut chars = self.rest().chars();
        chars.next()?;
        chars.as_str().trim_start().chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ExprError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{token}'")))
        }
    }

    fn domain<T>(&self, start: usize, r: Result<T, ExprError>) -> Result<T, ExprError> {
        r.map_err(|e| match e {
            ExprError::Domain(msg) => ExprError::Domain(format!("{msg} (at byte {start})")),
            other => other,
        })
    }

    fn expr(&mut self) -> Result<FuncExpr, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat("+") {
                acc = FuncExpr::sum(acc, self.term()?);
            } else if self.eat("-") || self.eat("\u{2212}") {
                acc = FuncExpr::difference(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FuncExpr, ExprError> {
        let mut acc = self.atom()?;
        loop {
            let start = self.pos;
            if self.eat("\u{2218}") {
                let rhs = self.atom()?;
                acc = self.domain(start, FuncExpr::compose(acc, rhs))?;
            } else if self.eat("*") {
                acc = FuncExpr::prod(acc, self.atom()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn atom(&mut self) -> Result<FuncExpr, ExprError> {
        self.skip_ws();
        let start = self.pos;
        if self.eat("poly:") {
            let mut coeffs = vec![self.complex()?];
            while self.list_continues() {
                self.expect(",")?;
                coeffs.push(self.complex()?);
            }
            self.domain(start, FuncExpr::poly(coeffs))
        } else if self.eat("moebius:") {
            let a = self.complex()?;
            self.domain(start, FuncExpr::moebius(a))
        } else if self.eat("atoms:") {
            let mut pairs = vec![self.pair()?];
            while self.eat(";") {
                pairs.push(self.pair()?);
            }
            self.domain(start, FuncExpr::atoms(pairs))
        } else if self.eat("dilate:") {
            let r = self.real()?;
            self.expect(":")?;
            let inner = self.expr()?;
            self.domain(start, FuncExpr::dilate(r, inner))
        } else if self.eat("const:") {
            let c = self.complex()?;
            self.domain(start, FuncExpr::constant(c))
        } else if self.eat("compose(") {
            let outer = self.expr()?;
            self.expect(",")?;
            let inner = self.expr()?;
            self.expect(")")?;
            self.domain(start, FuncExpr::compose(outer, inner))
        } else if self.eat("prod(") {
            let l = self.expr()?;
            self.expect(",")?;
            let r = self.expr()?;
            self.expect(")")?;
            Ok(FuncExpr::prod(l, r))
        } else if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            Ok(e)
        } else {
            Err(self.error("expected a function atom"))
        }
    }

    /// A ',' continues a coefficient list only when a number follows it.
    fn list_continues(&mut self) -> bool {
        if self.peek() != Some(',') {
            return false;
        }
        match self.peek_second() {
            Some(c) => starts_number(c),
            None => false,
        }
    }

    fn pair(&mut self) -> Result<(C64, C64), ExprError> {
        let c = self.complex()?;
        self.expect("*")?;
        let a = self.complex()?;
        Ok((c, a))
    }

    fn sign(&mut self) -> f64 {
        if self.eat("-") || self.eat("\u{2212}") {
            -1.0
        } else {
            self.eat("+");
            1.0
        }
    }

    /// Unsigned decimal number, returned with its byte length.
    fn unsigned(&mut self) -> Option<f64> {
        self.skip_ws();
        let rest = self.rest();
        let bytes = rest.as_bytes();
        let mut i = 0;
        let digits = |i: &mut usize| {
            let s = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            *i > s
        };
        let int = digits(&mut i);
        let mut frac = false;
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            frac = digits(&mut i);
        }
        if !int && !frac {
            return None;
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            let exp_start = j;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j > exp_start {
                i = j;
            }
        }
        let v = rest[..i].parse::<f64>().ok()?;
        self.pos += i;
        Some(v)
    }

    fn real(&mut self) -> Result<f64, ExprError> {
        let s = self.sign();
        self.unsigned()
            .map(|v| s * v)
            .ok_or_else(|| self.error("expected a number"))
    }

    /// `±a`, `±bi`, `±i` or `±a±bi`.
    fn complex(&mut self) -> Result<C64, ExprError> {
        let s = self.sign();
        let first = self.unsigned();
        if self.eat("i") {
            return Ok(C64::new(0.0, s * first.unwrap_or(1.0)));
        }
        let re = match first {
            Some(v) => s * v,
            None => return Err(self.error("expected a complex number")),
        };
        // look for an imaginary part: sign, optional number, then 'i'
        let save = self.pos;
        if matches!(self.peek(), Some('+' | '-' | '\u{2212}')) {
            let s2 = self.sign();
            let mag = self.unsigned();
            if self.eat("i") {
                return Ok(C64::new(re, s2 * mag.unwrap_or(1.0)));
            }
        }
        self.pos = save;
        Ok(C64::new(re, 0.0))
    }
}

fn starts_number(c: char) -> bool {
    c.is_ascii_digit() || matches!(c, '.' | '+' | '-' | '\u{2212}' | 'i')
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse("poly:1,0,2").unwrap(),
            FuncExpr::poly(vec![c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]).unwrap()
        );
        assert_eq!(
            parse("moebius:0.5+0i").unwrap(),
            FuncExpr::moebius(c(0.5, 0.0)).unwrap()
        );
        assert_eq!(
            parse("atoms:1*0.3+0.4i;\u{2212}2*0.1").unwrap(),
            FuncExpr::atoms(vec![(c(1.0, 0.0), c(0.3, 0.4)), (c(-2.0, 0.0), c(0.1, 0.0))])
                .unwrap()
        );
    }

    #[test]
    fn parse_complex_forms() {
        let e = parse("poly: -1.5e-1-2i, i, -i, 3").unwrap();
        assert_eq!(
            e.node(),
            &Node::Poly(vec![c(-0.15, -2.0), c(0.0, 1.0), c(0.0, -1.0), c(3.0, 0.0)])
        );
    }

    #[test]
    fn parse_operators() {
        let e = parse("poly:1 + moebius:0.5 * const:2").unwrap();
        // product binds tighter than sum
        assert!(matches!(e.node(), Node::Sum(_, r) if matches!(r.node(), Node::Prod(..))));
        let e = parse("compose(poly:0,0,1, poly:0,0.5)").unwrap();
        let z = c(0.4, 0.2);
        assert!((e.jet(z).value - (z * 0.5) * (z * 0.5)).norm() < 1e-15);
        let e = parse("poly:0,0,1 \u{2218} poly:0,0.5").unwrap();
        assert!((e.jet(z).value - (z * 0.5) * (z * 0.5)).norm() < 1e-15);
        let e = parse("dilate:0.5:poly:1,2,4").unwrap();
        assert!((e.jet(c(1.0, 0.0)).value - c(3.0, 0.0)).norm() < 1e-15);
        let e = parse("poly:1 - poly:0,1").unwrap();
        assert!((e.jet(z).value - (c(1.0, 0.0) - z)).norm() < 1e-15);
    }

    #[test]
    fn parse_errors() {
        match parse("poly:1,").unwrap_err() {
            ExprError::Syntax { offset, .. } => assert_eq!(offset, 6),
            e => panic!("{e:?}"),
        }
        assert!(matches!(parse("bogus"), Err(ExprError::Syntax { offset: 0, .. })));
        assert!(matches!(parse("moebius:1"), Err(ExprError::Domain(_))));
        assert!(matches!(parse("dilate:1.5:poly:1"), Err(ExprError::Domain(_))));
        assert!(matches!(
            parse("compose(poly:0,1, poly:0,2)"),
            Err(ExprError::NotSelfMap(_))
        ));
        assert!(matches!(parse("poly:1 )"), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn eval_closed_examples() {
        let m = FuncExpr::moebius(c(0.6, 0.0)).unwrap();
        assert!((m.eval_closed(c(0.0, 0.0), 1).unwrap() - c(-0.64, 0.0)).norm() < 1e-15);
        let p = FuncExpr::poly_real(&[0.0, 0.0, 1.0]);
        assert_eq!(p.eval_closed(c(0.5, 0.0), 2).unwrap(), c(2.0, 0.0));
        let a = FuncExpr::atoms(vec![(c(1.0, 0.0), c(0.5, 0.0))]).unwrap();
        assert!(a.eval_closed(c(0.5, 0.0), 0).unwrap().norm() < 1e-16);
        assert!(matches!(p.eval_closed(c(0.0, 0.0), 3), Err(ExprError::Order(3))));
        assert!(matches!(
            m.eval_closed(c(1.5, 0.0), 0),
            Err(ExprError::OutsideDisk(_))
        ));
    }

    #[test]
    fn to_series_examples() {
        let p = FuncExpr::poly_real(&[1.0, 2.0]).to_series(4);
        assert_eq!(p.series, TaylorSeries::from_real(&[1.0, 2.0, 0.0, 0.0, 0.0]).unwrap());
        assert_eq!(p.tail_bound, 0.0);
        let m = FuncExpr::moebius(c(0.5, 0.0)).unwrap().to_series(3).series;
        let want = [0.5, -0.75, -0.375, -0.1875];
        for (k, w) in want.iter().enumerate() {
            assert!((m.coeff(k) - c(*w, 0.0)).norm() < 1e-15);
        }
        let s = FuncExpr::sum(FuncExpr::poly_real(&[1.0]), FuncExpr::z()).to_series(5);
        assert_eq!(s.series.coeff(0), c(1.0, 0.0));
        assert_eq!(s.series.coeff(1), c(1.0, 0.0));
        assert_eq!(s.series.coeff(2), c(0.0, 0.0));
    }

    #[test]
    fn non_origin_fixing_composition_projects() {
        // (w ↦ w²) ∘ σ_{0.3}: compare with the exact series of σ² by product
        let inner = FuncExpr::moebius(c(0.3, 0.0)).unwrap();
        let e = FuncExpr::compose(FuncExpr::monomial(2), inner).unwrap();
        let approx = e.to_series(24);
        let m = moebius_series(c(0.3, 0.0), 24).unwrap();
        let exact = m.product(&m, 24).series;
        assert!(approx.series.max_abs_diff(&exact) < 1e-12);
        assert!(approx.tail_bound < 1e-9);
    }

    #[test]
    fn self_map_boundary_case_accepted() {
        let phi = FuncExpr::poly_real(&[0.0, 0.7, 0.3]);
        assert!(FuncExpr::compose(FuncExpr::z(), phi).is_ok());
    }
}
