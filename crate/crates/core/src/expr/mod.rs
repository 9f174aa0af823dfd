//! Exact symbolic arithmetic: canonical rational functions over the rationals
//! in chart coordinates and jets of opaque functions.

mod expression;
pub mod gcd;
mod parse;
pub mod poly;
mod render;
pub mod symbol;

use thiserror::Error;

pub use expression::{gcd_term_budget, set_gcd_term_budget, Expression, Substitution};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use parse::parse_expression;
pub use symbol::{
    Chart, Coord, CoordSet, FnName, FunctionRegistry, Jet, MultiIndex, OpaqueFunction, Symbol,
};

/// Exact rational number.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("division by zero at {pos}")]
    DivisionByZero { pos: usize },
    #[error("denominator vanishes identically")]
    ZeroDenominator,
    #[error("denominator evaluates to zero at the given point")]
    SingularPoint,
    #[error("no value assigned to `{0}`")]
    Unassigned(String),
    #[error("coordinate `{coord}` is not in chart {chart}")]
    UnknownCoordinate { coord: String, chart: String },
    #[error("opaque function `{0}` is already declared")]
    NameCollision(String),
    #[error("opaque function `{0}` needs at least one argument")]
    EmptyArguments(String),
    #[error("opaque function `{function}` lists `{coord}` twice")]
    DuplicateArgument { function: String, coord: String },
    #[error("invalid function name `{0}`")]
    InvalidFunctionName(String),
}

/// Shorthand for a coordinate as an expression.
pub fn coord(c: Coord) -> Expression {
    Expression::coord(c)
}

/// Shorthand for an integer constant.
pub fn int(n: i64) -> Expression {
    Expression::from(n)
}

/// Shorthand for the rational constant `n/d`.
pub fn frac(n: i64, d: i64) -> Expression {
    Expression::from_rational(BigRational::new(n.into(), d.into()))
}
