//! Rigorous interval certification on the Minkowski–Cohn moduli space.
//!
//! The crate is organised bottom-up:
//!
//! * [`interval`] – outward-rounded interval arithmetic.
//! * [`jet`] – second-order interval jets used for Taylor-form enclosures.
//! * [`moduli`] – enclosures of σ_p, τ_p, τ(p,σ) and Δ(p,σ).
//! * [`covering`] – interval cells, coverings, adjacency and constant-sign
//!   continuation.
//! * [`verifier`] – the subdivision prover, certificates and the fiber
//!   envelope minimizer.
//! * [`program`] – terms of non-branching interval programs, their
//!   evaluation and flow paths.

pub mod covering;
pub mod interval;
pub mod jet;
pub mod moduli;
pub mod program;
pub mod verifier;

#[cfg(test)]
mod testing;

pub use interval::{Interval, IntervalError, SignClass};
