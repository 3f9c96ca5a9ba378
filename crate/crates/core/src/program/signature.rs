use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("symbol {0:?} is already registered")]
pub struct DuplicateSymbol(pub String);

/// Operation symbols grouped by arity.
///
/// Nullary symbols are not listed: decimal literals and any identifier
/// that is not an operation name are constants and variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    arity: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// The interval operations used by the moduli formulas.
    pub fn standard() -> Self {
        let mut s = Signature::new();
        for name in ["neg", "inv", "exp", "ln", "sqr"] {
            s.register(name, 1).expect("distinct names");
        }
        for name in ["add", "sub", "mul", "div", "pow", "min", "max", "hull", "intersect"] {
            s.register(name, 2).expect("distinct names");
        }
        s
    }

    pub fn register(&mut self, name: &str, arity: usize) -> Result<(), DuplicateSymbol> {
        if self.arity.contains_key(name) {
            return Err(DuplicateSymbol(name.to_string()));
        }
        self.arity.insert(name.to_string(), arity);
        Ok(())
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.arity.get(name).copied()
    }

    /// Operation names of the given arity, sorted.
    pub fn ops_of_arity(&self, n: usize) -> Vec<&str> {
        self.arity.iter().filter(|(_, &a)| a == n).map(|(k, _)| k.as_str()).collect()
    }

    pub fn ops(&self) -> impl Iterator<Item = (&str, usize)> {
        self.arity.iter().map(|(k, &a)| (k.as_str(), a))
    }
}
