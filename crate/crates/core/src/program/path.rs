//! Paths through the flow graph of a straight-line interval program.
//!
//! A state binds a fixed list of variables. An arrow `x := t` replaces the
//! value of `x` by the value of `t` in the current state, and is undefined
//! when `t` is. A path is a sequence of arrows; paths over the same state
//! variables compose by concatenation.

use std::fmt;

use thiserror::Error;

use super::eval::{eval_term, Env, Partial};
use super::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("step target {0:?} is not a state variable")]
    UnknownTarget(String),
    #[error("step reads {0:?}, which is not a state variable")]
    FreeVariable(String),
    #[error("paths over different state variables do not compose")]
    NotComposable,
    #[error("node {0} is outside the program")]
    NoSuchNode(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub target: String,
    pub term: Term,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} := {}", self.target, self.term)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    vars: Vec<String>,
    steps: Vec<Step>,
}

impl Path {
    /// The empty path on the given state variables.
    pub fn identity(vars: &[&str]) -> Path {
        let mut vars: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        vars.sort();
        vars.dedup();
        Path { vars, steps: Vec::new() }
    }

    pub fn new(vars: &[&str], steps: Vec<Step>) -> Result<Path, PathError> {
        let mut p = Path::identity(vars);
        for s in steps {
            p = p.then(s)?;
        }
        Ok(p)
    }

    /// Appends one arrow.
    pub fn then(mut self, step: Step) -> Result<Path, PathError> {
        if !self.vars.contains(&step.target) {
            return Err(PathError::UnknownTarget(step.target));
        }
        if let Some(v) = step.term.variables().into_iter().find(|v| !self.vars.contains(v)) {
            return Err(PathError::FreeVariable(v));
        }
        self.steps.push(step);
        Ok(self)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `self` followed by `next`.
    pub fn concat(&self, next: &Path) -> Result<Path, PathError> {
        if self.vars != next.vars {
            return Err(PathError::NotComposable);
        }
        let mut steps = self.steps.clone();
        steps.extend(next.steps.iter().cloned());
        Ok(Path { vars: self.vars.clone(), steps })
    }
}

/// Runs the arrows of `path` left to right. The state must bind exactly
/// the path's variables.
pub fn path_eval(path: &Path, state: &Env) -> Result<Partial<Env>, PathError> {
    if state.len() != path.vars.len() || path.vars.iter().any(|v| !state.contains_key(v)) {
        return Err(PathError::NotComposable);
    }
    let mut cur = state.clone();
    for s in &path.steps {
        // well-formedness was checked when the step was added
        let v = eval_term(&s.term, &cur).expect("step variables are state variables");
        match v {
            Partial::Defined(x) => {
                cur.insert(s.target.clone(), x);
            }
            Partial::Undefined => return Ok(Partial::Undefined),
        }
    }
    Ok(Partial::Defined(cur))
}

/// A straight-line program viewed as its flow graph: nodes `0..=n`, with
/// the `i`-th arrow from node `i` to node `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowGraph {
    program: Path,
}

impl FlowGraph {
    pub fn new(program: Path) -> Self {
        FlowGraph { program }
    }

    pub fn nodes(&self) -> usize {
        self.program.len() + 1
    }

    /// The unique path from node `i` to node `j`, for `i <= j`.
    pub fn path(&self, i: usize, j: usize) -> Result<Path, PathError> {
        if j >= self.nodes() {
            return Err(PathError::NoSuchNode(j));
        }
        if i > j {
            return Err(PathError::NoSuchNode(i));
        }
        Ok(Path { vars: self.program.vars.clone(), steps: self.program.steps[i..j].to_vec() })
    }
}
