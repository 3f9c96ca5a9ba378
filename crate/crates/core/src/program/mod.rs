//! Terms of non-branching interval programs.
//!
//! Terms form the free algebra over a [`Signature`]; evaluation in any
//! [`Algebra`] is the structural fold [`fold`], and [`eval_term`] is the
//! fold into intervals with partial operations. Straight-line programs
//! and their flow-graph paths live in [`path`].

mod eval;
mod parse;
pub mod path;
mod signature;
mod term;

pub use eval::{eval_term, fold, term_width, Algebra, Env, EvalError, IntervalAlgebra, Partial};
pub use parse::{literal_enclosure, parse_term, ParseError};
pub use path::{path_eval, FlowGraph, Path, PathError, Step};
pub use signature::{DuplicateSymbol, Signature};
pub use term::{Term, TermError};

/// `Δ = (τ + σ)(1 + τ^p)^{-1/p}(1 + σ^p)^{-1/p}` in the variables `p`,
/// `sigma`, `tau`.
pub const DELTA_TERM: &str =
    "mul(mul(add(tau, sigma), pow(add(1, pow(tau, p)), neg(inv(p)))), pow(add(1, pow(sigma, p)), neg(inv(p))))";

pub fn delta_term() -> Term {
    parse_term(DELTA_TERM, &Signature::standard()).expect("well-formed constant term")
}
