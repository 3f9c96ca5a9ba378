mod common;

use common::expr::{containment_trials, monotonicity_trials};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn composed_operations_contain_the_exact_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let t = containment_trials(&mut rng, 20_000);
    assert_eq!(t.violations, 0, "{t:?}");
    assert!(t.undecided * 100 < t.trials, "{t:?}");
}

#[test]
fn composed_operations_are_inclusion_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let t = monotonicity_trials(&mut rng, 20_000);
    assert_eq!(t.violations, 0, "{t:?}");
}

#[test]
fn ball_oracle_constants() {
    use common::ball::{Ball, Verdict};
    let e = Ball::int(1).exp().unwrap();
    assert_eq!(e.within(2.718281828459045, 2.7182818284590455), Verdict::Inside);
    let l = Ball::int(10).ln().unwrap();
    assert_eq!(l.within(2.3025850929940455, 2.302585092994046), Verdict::Inside);
    let s = Ball::int(2).pow(&Ball::from_f64(0.5)).unwrap();
    assert_eq!(s.within(1.414213562373095, 1.4142135623730951), Verdict::Inside);
    assert_eq!(Ball::from_f64(0.1).within(0.1, 0.1), Verdict::Inside);
    let third = Ball::int(1).div(&Ball::int(3)).unwrap();
    assert_eq!(third.within(0.3333333333333333, 0.3333333333333333), Verdict::Outside);
    assert_eq!(Ball::from_f64(-2.5).min(&Ball::int(1)).within(-2.5, -2.5), Verdict::Inside);
}
