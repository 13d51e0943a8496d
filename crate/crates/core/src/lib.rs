//! Numerical laboratory for analytic function spaces on the unit disk and the
//! Volterra-type operators acting on the Besov space `B₁`.
//!
//! Functions are represented either as truncated Taylor series
//! ([`series::TaylorSeries`]) or as closed-form expression trees
//! ([`funcexpr::FuncExpr`]) that can be differentiated exactly. Norms are
//! computed by product Gauss rules on the disk ([`quadrature`]), operators act
//! on both representations ([`operators`]), and the [`harness`] binds every
//! inequality under test to a probe with an explicit tolerance.

pub mod analytic;
pub mod funcexpr;
pub mod harness;
pub mod lab;
pub mod operators;
pub mod probes;
pub mod quadrature;
pub mod series;
pub mod spaces;

pub use num_complex::Complex64 as C64;

pub use analytic::{Analytic, Jet};
pub use funcexpr::{parse, FuncExpr};
pub use lab::{Config, Lab};
pub use operators::{OpKind, OperatorSpec};
pub use quadrature::{DiskRule, QuadResult};
pub use series::TaylorSeries;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Series(#[from] series::SeriesError),
    #[error(transparent)]
    Expr(#[from] funcexpr::ExprError),
    #[error(transparent)]
    Quad(#[from] quadrature::QuadError),
    #[error(transparent)]
    Space(#[from] spaces::SpaceError),
    #[error(transparent)]
    Operator(#[from] operators::OperatorError),
    #[error(transparent)]
    Probe(#[from] probes::ProbeError),
    #[error(transparent)]
    Config(#[from] lab::ConfigError),
    #[error(transparent)]
    Harness(#[from] harness::HarnessError),
}
