use num_bigint::BigInt;
use proptest::prelude::*;
use seshadri_core::{
    euler_characteristic, expected_dim, ncon_forces_nonreduced, strong_shgh_forces_nonreduced, FatPointSystem,
};

/// Non-increasing multisets of `len` values in `0..=max`.
fn multisets(len: usize, max: i64) -> Vec<Vec<i64>> {
    fn go(len: usize, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in 0..=max {
            cur.push(v);
            go(len, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, max, &mut Vec::new(), &mut out);
    out
}

fn b2(n: i64) -> i64 {
    if n < 2 { 0 } else { n * (n - 1) / 2 }
}

/// The weakened hypothesis `V <= C(t,2)` sits inside the strong one, so any
/// system the weakened test declares non-reduced is declared so by the
/// strong test too. The converse fails, e.g. `(2; 1, 1)` with `t = 3`.
#[test]
fn weak_predicate_implies_strong_on_the_grid() {
    // Zeros pad shorter systems, so ten slots cover every r <= 10.
    let mut checked = 0u64;
    for m in multisets(10, 6) {
        for d in 1..=12 {
            for t in 2..=6 {
                let sys = FatPointSystem::from_i64(d, &m, t);
                if ncon_forces_nonreduced(&sys).unwrap() {
                    assert!(strong_shgh_forces_nonreduced(&sys).unwrap(), "d={d} m={m:?} t={t}");
                }
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 8008 * 12 * 5);
    let sys = FatPointSystem::from_i64(2, &[1, 1], 3);
    assert!(strong_shgh_forces_nonreduced(&sys).unwrap());
    assert!(!ncon_forces_nonreduced(&sys).unwrap());
}

#[test]
fn strong_test_matches_genus_bound_for_t_at_least_two() {
    // Curves through the t-point with chi of the strict transform <= -2.
    for m in multisets(6, 5) {
        for d in 1..=10 {
            for t in 1..=6 {
                let sys = FatPointSystem::from_i64(d, &m, t);
                let chi = euler_characteristic(&sys.to_extended().as_divisor());
                let by_chi = chi <= BigInt::from(-2);
                let strong = strong_shgh_forces_nonreduced(&sys).unwrap();
                if t >= 2 {
                    assert_eq!(strong, by_chi, "d={d} m={m:?} t={t}");
                } else {
                    let v = sys.virtual_sections();
                    assert_eq!(strong != by_chi, v == BigInt::from(0), "d={d} m={m:?} t=1");
                }
            }
        }
    }
}

#[test]
fn expected_dim_matches_direct_formula() {
    for m in multisets(5, 4) {
        for d in 0..=9 {
            let direct = (b2(d + 2) - m.iter().map(|x| b2(x + 1)).sum::<i64>() - 1).max(-1);
            assert_eq!(expected_dim(&FatPointSystem::from_i64(d, &m, 0)), BigInt::from(direct));
        }
    }
}

#[test]
fn domain_errors() {
    assert!(ncon_forces_nonreduced(&FatPointSystem::from_i64(3, &[1], 1)).is_err());
    assert!(strong_shgh_forces_nonreduced(&FatPointSystem::from_i64(3, &[1], 0)).is_err());
    assert!(strong_shgh_forces_nonreduced(&FatPointSystem::from_i64(3, &[-1], 2)).is_err());
    assert!(strong_shgh_forces_nonreduced(&FatPointSystem::from_i64(0, &[], 2)).is_err());
}

proptest! {
    #[test]
    fn predicates_ignore_point_order(d in 1i64..15, m in prop::collection::vec(0i64..7, 0..10), t in 2i64..7, seed in any::<u64>()) {
        let mut p = m.clone();
        let n = p.len();
        if n > 1 {
            p.rotate_left((seed % n as u64) as usize);
            p.swap(0, (seed / 7 % n as u64) as usize);
        }
        let a = FatPointSystem::from_i64(d, &m, t);
        let b = FatPointSystem::from_i64(d, &p, t);
        prop_assert_eq!(strong_shgh_forces_nonreduced(&a).unwrap(), strong_shgh_forces_nonreduced(&b).unwrap());
        prop_assert_eq!(ncon_forces_nonreduced(&a).unwrap(), ncon_forces_nonreduced(&b).unwrap());
        prop_assert_eq!(expected_dim(&a), expected_dim(&b));
    }

    #[test]
    fn expected_dim_is_monotone(d in 0i64..15, m in prop::collection::vec(0i64..7, 1..10), i in any::<prop::sample::Index>()) {
        let a = FatPointSystem::from_i64(d, &m, 0);
        let mut more = m.clone();
        more[i.index(m.len())] += 1;
        let b = FatPointSystem::from_i64(d, &more, 0);
        let bigger = FatPointSystem::from_i64(d + 1, &m, 0);
        prop_assert!(expected_dim(&b) <= expected_dim(&a));
        prop_assert!(expected_dim(&bigger) >= expected_dim(&a));
        prop_assert!(expected_dim(&a) >= BigInt::from(-1));
    }
}
