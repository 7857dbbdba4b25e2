//! Wide class numbers counted from ideals alone: every class holds a
//! primitive ideal `[a, (b + √Δ)/2]` with `4a² ≤ Δ`, and two ideals are
//! equivalent exactly when the continued fractions of `(b + √Δ)/(2a)` have
//! the same period up to rotation.

use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;

use crate::arith;

/// Purely periodic part of the continued fraction of `(p + √disc)/q`,
/// rotated to its lexicographically smallest form.
pub fn canonical_period(disc: i64, p: i64, q: i64) -> Vec<i64> {
    debug_assert_eq!((disc - p * p) % q, 0);
    let s = arith::isqrt(disc as u64) as i64;
    let (mut p, mut q) = (p, q);
    let mut seen: HashMap<(i64, i64), usize> = HashMap::new();
    let mut quotients = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p, q)) {
            return min_rotation(&quotients[start..]);
        }
        seen.insert((p, q), quotients.len());
        let a = if q > 0 {
            Integer::div_floor(&(p + s), &q)
        } else {
            Integer::div_floor(&(p + s + 1), &q)
        };
        quotients.push(a);
        p = a * q - p;
        q = (disc - p * p) / q;
    }
}

fn min_rotation(v: &[i64]) -> Vec<i64> {
    (0..v.len())
        .map(|r| {
            let mut w = v[r..].to_vec();
            w.extend_from_slice(&v[..r]);
            w
        })
        .min()
        .unwrap_or_default()
}

/// Number of wide ideal classes of the fundamental discriminant `disc`.
pub fn wide_class_number(disc: i64) -> u64 {
    let mut periods = BTreeSet::new();
    let mut a = 1i64;
    while 4 * a * a <= disc {
        for b in 0..2 * a {
            if (b * b - disc).rem_euclid(4 * a) == 0 {
                periods.insert(canonical_period(disc, b, 2 * a));
            }
        }
        a += 1;
    }
    periods.len() as u64
}
