//! Test helpers for comparing floats against long decimal constants.

use std::cmp::Ordering;

use crate::interval::Interval;

/// Exact comparison between a finite float and a decimal literal such as
/// `"-0.8660254037844386467637"`.
pub(crate) fn cmp_f64_decimal(x: f64, decimal: &str) -> Ordering {
    let (dneg, digits) = match decimal.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, decimal),
    };
    let xneg = x < 0.0;
    let exact = format!("{:.1100}", x.abs());
    let mag = cmp_unsigned(&exact, digits);
    match (xneg, dneg) {
        (false, false) => mag,
        (true, true) => mag.reverse(),
        (false, true) => {
            if x == 0.0 && is_zero(digits) {
                Ordering::Equal
            } else {
                Ordering::Greater
            }
        }
        (true, false) => {
            if is_zero(digits) && x == 0.0 {
                Ordering::Equal
            } else {
                Ordering::Less
            }
        }
    }
}

fn is_zero(d: &str) -> bool {
    d.chars().all(|c| c == '0' || c == '.')
}

fn split(d: &str) -> (String, String) {
    let (i, f) = d.split_once('.').unwrap_or((d, ""));
    let i = i.trim_start_matches('0').to_string();
    let f = f.trim_end_matches('0').to_string();
    (i, f)
}

fn cmp_unsigned(a: &str, b: &str) -> Ordering {
    let (ai, af) = split(a);
    let (bi, bf) = split(b);
    ai.len()
        .cmp(&bi.len())
        .then_with(|| ai.cmp(&bi))
        .then_with(|| {
            let n = af.len().max(bf.len());
            let pa = format!("{af:0<n$}");
            let pb = format!("{bf:0<n$}");
            pa.cmp(&pb)
        })
}

/// True when the interval contains the real number denoted by `decimal`.
pub(crate) fn encloses_decimal(iv: &Interval, decimal: &str) -> bool {
    cmp_f64_decimal(iv.lo(), decimal) != Ordering::Greater
        && cmp_f64_decimal(iv.hi(), decimal) != Ordering::Less
}

#[test]
fn decimal_comparison() {
    assert_eq!(cmp_f64_decimal(0.5, "0.5"), Ordering::Equal);
    assert_eq!(cmp_f64_decimal(0.1, "0.1"), Ordering::Greater);
    assert_eq!(cmp_f64_decimal(-0.1, "-0.1"), Ordering::Less);
    assert_eq!(cmp_f64_decimal(2.0, "10"), Ordering::Less);
    assert_eq!(cmp_f64_decimal(-2.0, "1"), Ordering::Less);
}
