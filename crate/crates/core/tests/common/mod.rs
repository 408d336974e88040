//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's own enumeration code.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// Integer vectors of length `n` with `sum m = sum` and `sum m^2 = squares`,
/// in lexicographic order, pruned only by Cauchy-Schwarz.
pub fn vectors_with(n: usize, sum: i64, squares: i64) -> Vec<Vec<i64>> {
    fn go(k: usize, sum: i64, squares: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == 0 {
            if sum == 0 && squares == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if squares < 0 || sum * sum > k as i64 * squares {
            return;
        }
        let bound = (squares as f64).sqrt() as i64 + 1;
        for v in -bound..=bound {
            if v * v > squares {
                continue;
            }
            cur.push(v);
            go(k - 1, sum - v, squares - v * v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, sum, squares, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All `(d; m)` on `n` points with the given square and `K.C`, `d <= d_max`.
/// For `(-2)`-classes of degree zero only `Ei - Ej` with `i < j` is kept.
pub fn minus_classes(n: usize, square: i64, kdot: i64, d_max: i64) -> BTreeSet<(i64, Vec<i64>)> {
    let mut out = BTreeSet::new();
    for d in 0..=d_max {
        // K.C = -3d + sum m, C^2 = d^2 - sum m^2
        for m in vectors_with(n, kdot + 3 * d, d * d - square) {
            if d == 0 && square == -2 && m.iter().find(|v| **v != 0) != Some(&-1) {
                continue;
            }
            out.insert((d, m));
        }
    }
    out
}

pub fn minus1(n: usize, d_max: i64) -> BTreeSet<(i64, Vec<i64>)> {
    minus_classes(n, -1, -1, d_max)
}

pub fn minus2(n: usize, d_max: i64) -> BTreeSet<(i64, Vec<i64>)> {
    minus_classes(n, -2, 0, d_max)
}

pub fn dot(a: (i64, &[i64]), b: (i64, &[i64])) -> i64 {
    a.0 * b.0 - a.1.iter().zip(b.1).map(|(x, y)| x * y).sum::<i64>()
}
