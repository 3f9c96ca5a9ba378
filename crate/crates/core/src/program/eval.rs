use std::collections::BTreeMap;

use thiserror::Error;

use super::term::Term;
use crate::interval::Interval;

/// Variable bindings.
pub type Env = BTreeMap<String, Interval>;

/// Result of a partial interval function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Partial<T> {
    Defined(T),
    Undefined,
}

impl<T> Partial<T> {
    pub fn is_defined(&self) -> bool {
        matches!(self, Partial::Defined(_))
    }

    pub fn defined(self) -> Option<T> {
        match self {
            Partial::Defined(x) => Some(x),
            Partial::Undefined => None,
        }
    }

    pub fn and_then<U>(self, f: impl FnOnce(T) -> Partial<U>) -> Partial<U> {
        match self {
            Partial::Defined(x) => f(x),
            Partial::Undefined => Partial::Undefined,
        }
    }
}

impl<T, E> From<Result<T, E>> for Partial<T> {
    fn from(r: Result<T, E>) -> Self {
        r.map_or(Partial::Undefined, Partial::Defined)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable {0:?} is not bound")]
    UnboundVariable(String),
    #[error("operation {0:?} is not interpreted by the algebra")]
    UnknownSymbol(String),
}

/// An interpretation of constants and operation symbols.
pub trait Algebra {
    type Value: Clone;

    fn constant(&self, text: &str, value: &Interval) -> Self::Value;

    /// `None` when `op` has no interpretation.
    fn apply(&self, op: &str, args: &[Self::Value]) -> Option<Self::Value>;
}

/// The homomorphism from terms into `alg` that extends `env`.
pub fn fold<A: Algebra>(t: &Term, alg: &A, env: &BTreeMap<String, A::Value>) -> Result<A::Value, EvalError> {
    match t {
        Term::Const { text, value } => Ok(alg.constant(text, value)),
        Term::Var(v) => env.get(v).cloned().ok_or_else(|| EvalError::UnboundVariable(v.clone())),
        Term::App { op, args } => {
            let vals = args.iter().map(|a| fold(a, alg, env)).collect::<Result<Vec<_>, _>>()?;
            alg.apply(op, &vals).ok_or_else(|| EvalError::UnknownSymbol(op.clone()))
        }
    }
}

/// Intervals with partial operations: kernel errors and empty
/// intersections are undefined, and undefined is absorbing.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntervalAlgebra;

impl IntervalAlgebra {
    pub fn op(op: &str, a: &[Interval]) -> Option<Partial<Interval>> {
        let r = match (op, a) {
            ("neg", [x]) => Ok(x.neg()),
            ("inv", [x]) => x.recip(),
            ("exp", [x]) => x.exp(),
            ("ln", [x]) => x.ln(),
            ("sqr", [x]) => x.sqr(),
            ("add", [x, y]) => x.add(y),
            ("sub", [x, y]) => x.sub(y),
            ("mul", [x, y]) => x.mul(y),
            ("div", [x, y]) => x.div(y),
            ("pow", [x, y]) => x.pow(y),
            ("min", [x, y]) => Ok(x.min_i(y)),
            ("max", [x, y]) => Ok(x.max_i(y)),
            ("hull", [x, y]) => Ok(x.hull(y)),
            ("intersect", [x, y]) => return Some(x.intersect(y).map_or(Partial::Undefined, Partial::Defined)),
            _ => return None,
        };
        Some(r.into())
    }
}

impl Algebra for IntervalAlgebra {
    type Value = Partial<Interval>;

    fn constant(&self, _: &str, value: &Interval) -> Self::Value {
        Partial::Defined(*value)
    }

    fn apply(&self, op: &str, args: &[Self::Value]) -> Option<Self::Value> {
        let defined: Option<Vec<Interval>> = args.iter().map(|a| a.defined()).collect();
        match defined {
            Some(a) => IntervalAlgebra::op(op, &a),
            None => IntervalAlgebra::op(op, &vec![Interval::ZERO; args.len()]).map(|_| Partial::Undefined),
        }
    }
}

pub fn eval_term(t: &Term, env: &Env) -> Result<Partial<Interval>, EvalError> {
    let env: BTreeMap<String, Partial<Interval>> = env.iter().map(|(k, v)| (k.clone(), Partial::Defined(*v))).collect();
    fold(t, &IntervalAlgebra, &env)
}

/// Width of the value of `t`, or `None` when it is undefined.
pub fn term_width(t: &Term, env: &Env) -> Result<Option<f64>, EvalError> {
    Ok(eval_term(t, env)?.defined().map(|x| x.width()))
}
