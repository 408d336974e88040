use num_bigint::BigInt;
use proptest::prelude::*;
use seshadri_core::{
    arithmetic_genus, canonical_class, canonical_dot, euler_characteristic, intersect, intersect_extended, DivisorClass,
    ExtendedClass,
};

fn class(r: usize) -> impl Strategy<Value = DivisorClass> {
    (-30i64..30, prop::collection::vec(-15i64..15, r)).prop_map(|(d, m)| DivisorClass::from_i64(d, &m))
}

fn triple() -> impl Strategy<Value = (DivisorClass, DivisorClass, DivisorClass)> {
    (0usize..10).prop_flat_map(|r| (class(r), class(r), class(r)))
}

fn add(a: &DivisorClass, b: &DivisorClass) -> DivisorClass {
    let m = a.multiplicities().iter().zip(b.multiplicities()).map(|(x, y)| x + y).collect();
    DivisorClass::new(a.degree() + b.degree(), m)
}

proptest! {
    #[test]
    fn intersection_is_symmetric_bilinear((a, b, c) in triple(), k in -7i64..7) {
        let k = BigInt::from(k);
        prop_assert_eq!(intersect(&a, &b).unwrap(), intersect(&b, &a).unwrap());
        prop_assert_eq!(
            intersect(&add(&a, &b), &c).unwrap(),
            intersect(&a, &c).unwrap() + intersect(&b, &c).unwrap()
        );
        prop_assert_eq!(intersect(&a.scaled(&k), &c).unwrap(), k * intersect(&a, &c).unwrap());
        prop_assert_eq!(intersect(&a, &a).unwrap(), a.self_intersection());
    }

    #[test]
    fn riemann_roch_and_genus_agree((a, _, _) in triple()) {
        // chi + p_a = D^2 + 2
        prop_assert_eq!(euler_characteristic(&a) + arithmetic_genus(&a), a.self_intersection() + 2);
        let k = canonical_class(a.r());
        prop_assert_eq!(canonical_dot(&a), intersect(&k, &a).unwrap());
        // 2 chi = D.(D - K) + 2
        let minus_k = DivisorClass::new(-k.degree(), k.multiplicities().iter().map(|x| -x).collect());
        prop_assert_eq!(
            euler_characteristic(&a) * 2,
            intersect(&a, &add(&a, &minus_k)).unwrap() + 2
        );
    }

    #[test]
    fn text_and_json_round_trip((a, _, _) in triple(), t in -5i64..5) {
        let text = a.to_string();
        prop_assert_eq!(text.parse::<DivisorClass>().unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<DivisorClass>(&json).unwrap(), a.clone());
        let x = a.extend(t);
        prop_assert_eq!(x.to_string().parse::<ExtendedClass>().unwrap(), x.clone());
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<ExtendedClass>(&json).unwrap(), x);
    }

    #[test]
    fn extended_classes_live_on_one_more_point((a, b, _) in triple(), s in -5i64..5, t in -5i64..5) {
        let (x, y) = (a.extend(s), b.extend(t));
        prop_assert_eq!(intersect_extended(&x, &y).unwrap(), intersect(&x.as_divisor(), &y.as_divisor()).unwrap());
        prop_assert_eq!(x.self_intersection(), a.self_intersection() - BigInt::from(s * s));
    }
}

#[test]
fn canonical_class_values() {
    for r in 0..12 {
        let k = canonical_class(r);
        assert_eq!(k.self_intersection(), BigInt::from(9 - r as i64));
        let minus_k = k.scaled(&BigInt::from(-1));
        assert_eq!(arithmetic_genus(&minus_k), BigInt::from(1));
        assert_eq!(arithmetic_genus(&k), BigInt::from(10 - r as i64));
    }
}

#[test]
fn big_entries_do_not_overflow() {
    let big: BigInt = "123456789012345678901234567890".parse().unwrap();
    let a = DivisorClass::new(big.clone(), vec![big.clone()]);
    assert_eq!(a.self_intersection(), BigInt::from(0));
    let b = DivisorClass::new(big.clone(), vec![BigInt::from(0)]);
    assert_eq!(intersect(&b, &b).unwrap(), &big * &big);
}

#[test]
fn malformed_text_is_rejected() {
    for bad in ["", "3;", "a;1,1", "3;1,,1", "3;1;2;4"] {
        assert!(bad.parse::<ExtendedClass>().is_err(), "{bad:?}");
    }
    assert!("3;1,1".parse::<DivisorClass>().is_ok());
    assert!("3;".parse::<DivisorClass>().is_ok() || "3".parse::<DivisorClass>().is_ok());
}
