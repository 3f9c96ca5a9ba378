//! Random compositions of kernel operations, evaluated both with the
//! interval kernel and with the ball oracle.

use critdet::Interval;
use rand::Rng;

use super::ball::{Ball, Verdict};

#[derive(Debug, Clone)]
pub enum Expr {
    Var(usize),
    Const(f64),
    Un(&'static str, Box<Expr>),
    Bin(&'static str, Box<Expr>, Box<Expr>),
}

const UNARY: [&str; 5] = ["neg", "recip", "sqr", "exp", "ln"];
const BINARY: [&str; 7] = ["add", "sub", "mul", "div", "pow", "min", "max"];

pub fn random_expr<R: Rng>(rng: &mut R, vars: usize, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.7) { Expr::Var(rng.gen_range(0..vars)) } else { Expr::Const(rng.gen_range(-3.0..3.0)) };
    }
    if rng.gen_bool(0.35) {
        let op = UNARY[rng.gen_range(0..UNARY.len())];
        Expr::Un(op, Box::new(random_expr(rng, vars, depth - 1)))
    } else {
        let op = BINARY[rng.gen_range(0..BINARY.len())];
        Expr::Bin(op, Box::new(random_expr(rng, vars, depth - 1)), Box::new(random_expr(rng, vars, depth - 1)))
    }
}

pub fn random_box<R: Rng>(rng: &mut R) -> Interval {
    let lo: f64 = rng.gen_range(-3.0..3.0);
    let w = match rng.gen_range(0..3) {
        0 => 0.0,
        1 => rng.gen_range(0.0..1e-6),
        _ => rng.gen_range(0.0..1.0),
    };
    Interval::new(lo, lo + w).unwrap()
}

pub fn point_in<R: Rng>(rng: &mut R, x: &Interval) -> f64 {
    let t: f64 = rng.gen_range(0.0..=1.0);
    (x.lo() + t * (x.hi() - x.lo())).clamp(x.lo(), x.hi())
}

impl Expr {
    pub fn eval(&self, env: &[Interval]) -> Option<Interval> {
        Some(match self {
            Expr::Var(i) => env[*i],
            Expr::Const(c) => Interval::point(*c),
            Expr::Un(op, a) => {
                let a = a.eval(env)?;
                match *op {
                    "neg" => a.neg(),
                    "recip" => a.recip().ok()?,
                    "sqr" => a.sqr().ok()?,
                    "exp" => a.exp().ok()?,
                    _ => a.ln().ok()?,
                }
            }
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(env)?, b.eval(env)?);
                match *op {
                    "add" => a.add(&b).ok()?,
                    "sub" => a.sub(&b).ok()?,
                    "mul" => a.mul(&b).ok()?,
                    "div" => a.div(&b).ok()?,
                    "pow" => a.pow(&b).ok()?,
                    "min" => a.min_i(&b),
                    _ => a.max_i(&b),
                }
            }
        })
    }

    pub fn oracle(&self, x: &[f64]) -> Option<Ball> {
        Some(match self {
            Expr::Var(i) => Ball::from_f64(x[*i]),
            Expr::Const(c) => Ball::from_f64(*c),
            Expr::Un(op, a) => {
                let a = a.oracle(x)?;
                match *op {
                    "neg" => a.neg(),
                    "recip" => Ball::int(1).div(&a)?,
                    "sqr" => a.sqr(),
                    "exp" => a.exp()?,
                    _ => a.ln()?,
                }
            }
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.oracle(x)?, b.oracle(x)?);
                match *op {
                    "add" => a.add(&b),
                    "sub" => a.sub(&b),
                    "mul" => a.mul(&b),
                    "div" => a.div(&b)?,
                    "pow" => a.pow(&b)?,
                    "min" => a.min(&b),
                    _ => a.max(&b),
                }
            }
        })
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Tally {
    pub trials: usize,
    pub violations: usize,
    pub undecided: usize,
}

/// Draws random expressions, boxes and points until `trials` cases have
/// a defined interval value, and checks the oracle value at the point
/// against it.
pub fn containment_trials<R: Rng>(rng: &mut R, trials: usize) -> Tally {
    let mut t = Tally::default();
    while t.trials < trials {
        let e = random_expr(rng, 3, 3);
        let boxes: Vec<Interval> = (0..3).map(|_| random_box(rng)).collect();
        let Some(v) = e.eval(&boxes) else { continue };
        let x: Vec<f64> = boxes.iter().map(|b| point_in(rng, b)).collect();
        t.trials += 1;
        match e.oracle(&x).map(|b| b.within(v.lo(), v.hi())) {
            Some(Verdict::Inside) => {}
            Some(Verdict::Outside) => t.violations += 1,
            // the oracle cannot separate the value from an endpoint, or
            // lost definedness through its own radius
            Some(Verdict::Unknown) | None => t.undecided += 1,
        }
    }
    t
}

/// Checks `f(Y) ⊆ f(X)` for random sub-boxes `Y ⊆ X`.
pub fn monotonicity_trials<R: Rng>(rng: &mut R, trials: usize) -> Tally {
    let mut t = Tally::default();
    while t.trials < trials {
        let e = random_expr(rng, 3, 3);
        let outer: Vec<Interval> = (0..3).map(|_| random_box(rng)).collect();
        let Some(v) = e.eval(&outer) else { continue };
        let inner: Vec<Interval> = outer
            .iter()
            .map(|b| {
                let (a, c) = (point_in(rng, b), point_in(rng, b));
                Interval::new(a.min(c), a.max(c)).unwrap()
            })
            .collect();
        t.trials += 1;
        match e.eval(&inner) {
            Some(w) if w.is_subset_of(&v) => {}
            _ => t.violations += 1,
        }
    }
    t
}
