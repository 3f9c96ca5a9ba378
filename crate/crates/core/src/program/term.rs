use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::signature::Signature;
use crate::interval::Interval;

/// A term of the free algebra over a [`Signature`].
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    /// A literal, kept with its source text and its enclosure.
    Const { text: String, value: Interval },
    Var(String),
    App { op: String, args: Vec<Term> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unknown operation {0:?}")]
    UnknownSymbol(String),
    #[error("{op} takes {expected} argument(s), got {found}")]
    ArityMismatch { op: String, expected: usize, found: usize },
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    /// A degenerate constant.
    pub fn constant(x: f64) -> Term {
        Term::Const { text: ryu::Buffer::new().format(x).to_string(), value: Interval::point(x) }
    }

    /// Applies `op`, checking its arity against `sig`.
    pub fn app(sig: &Signature, op: &str, args: Vec<Term>) -> Result<Term, TermError> {
        let expected = sig.arity(op).ok_or_else(|| TermError::UnknownSymbol(op.to_string()))?;
        if expected != args.len() {
            return Err(TermError::ArityMismatch { op: op.to_string(), expected, found: args.len() });
        }
        Ok(Term::App { op: op.to_string(), args })
    }

    /// Number of symbol occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::App { args, .. } => 1 + args.iter().map(Term::size).sum::<usize>(),
            _ => 1,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::App { args, .. } => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
            Term::Const { .. } => {}
        }
    }

    /// Replaces every occurrence of the variable `name` by `by`.
    pub fn substitute(&self, name: &str, by: &Term) -> Term {
        match self {
            Term::Var(v) if v == name => by.clone(),
            Term::App { op, args } => Term::App { op: op.clone(), args: args.iter().map(|a| a.substitute(name, by)).collect() },
            other => other.clone(),
        }
    }

    /// Checks every application against `sig`.
    pub fn check(&self, sig: &Signature) -> Result<(), TermError> {
        if let Term::App { op, args } = self {
            let expected = sig.arity(op).ok_or_else(|| TermError::UnknownSymbol(op.clone()))?;
            if expected != args.len() {
                return Err(TermError::ArityMismatch { op: op.clone(), expected, found: args.len() });
            }
            args.iter().try_for_each(|a| a.check(sig))?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const { text, .. } => f.write_str(text),
            Term::Var(v) => f.write_str(v),
            Term::App { op, args } => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}
