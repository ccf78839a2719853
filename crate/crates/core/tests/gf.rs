use linset::gf::{is_irreducible, BinOp, Field, FieldError, FieldTower, Level, TowerDescriptor};
use linset::pg::task_rng;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn tower_orders() {
    let t = FieldTower::new(7, 1, 3).unwrap();
    assert_eq!((t.p(), t.q(), t.top_order()), (7, 7, 343));
    let t = FieldTower::new(2, 1, 3).unwrap();
    assert_eq!((t.p(), t.q(), t.top_order()), (2, 2, 8));
    assert_eq!(FieldTower::new(4, 1, 3).unwrap_err(), FieldError::NotPrime(4));
    let t = FieldTower::new(2, 2, 3).unwrap();
    assert_eq!(t.top().elements().count(), 64);
    assert_eq!(t.mid().elements().count(), 4);
}

#[test]
fn moduli_are_irreducible() {
    for (p, h, t) in [(2, 1, 3), (3, 1, 3), (2, 2, 3), (2, 3, 2), (5, 1, 3), (7, 1, 3), (3, 2, 2)] {
        let tw = FieldTower::new(p, h, t).unwrap();
        assert!(is_irreducible(tw.prime(), tw.modulus_mid()), "{p} {h} {t}");
        assert!(is_irreducible(tw.mid(), tw.modulus_top()), "{p} {h} {t}");
    }
}

#[test]
fn inverses_in_gf343() {
    let t = FieldTower::new(7, 1, 3).unwrap();
    let f = t.top();
    for a in 1..343 {
        assert_eq!(f.mul(a, f.inv(a)), 1);
        assert_eq!(f.add(a, 0), a);
    }
    assert_eq!(f.div(3, 0), Err(FieldError::DivisionByZero));
}

#[test]
fn frobenius_fixes_embedded_subfield() {
    for (p, h) in [(2, 2), (3, 1), (5, 1)] {
        let t = FieldTower::new(p, h, 3).unwrap();
        let q = t.q();
        for c in 0..q {
            let e = t.embed(t.element(Level::Mid, c as u64).unwrap());
            assert_eq!(e.level, Level::Top);
            assert_eq!(t.pow(e, q as u64), e);
        }
        // nothing outside the subfield is fixed
        let fixed = (0..t.top_order()).filter(|&a| t.top().pow(a, q as u64) == a).count();
        assert_eq!(fixed as u32, q);
    }
}

#[test]
fn embedding_is_a_ring_morphism() {
    let t = FieldTower::new(3, 2, 2).unwrap();
    let (mid, top) = (t.mid(), t.top());
    for a in 0..9 {
        for b in 0..9 {
            assert_eq!(top.add(a, b), mid.add(a, b));
            assert_eq!(top.mul(a, b), mid.mul(a, b));
        }
    }
}

#[test]
fn multiplication_is_associative_and_commutative() {
    let f = FieldTower::new(2, 3, 3).unwrap().top().clone();
    assert_eq!(f.order(), 512);
    let mut rng = task_rng(1, 1);
    for _ in 0..20_000 {
        let (a, b, c) = (rng.gen_range(0..512), rng.gen_range(0..512), rng.gen_range(0..512));
        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        assert_eq!(f.mul(a, b), f.mul(b, a));
        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
    }
}

#[test]
fn decompose_examples() {
    let t = FieldTower::new(3, 1, 3).unwrap();
    for c in 0..3 {
        assert_eq!(t.decompose(c), vec![c, 0, 0]);
    }
    assert_eq!(t.decompose(t.omega()), vec![0, 1, 0]);
    // exhaustive round trip for q <= 8
    for (p, h) in [(2, 1), (3, 1), (2, 2), (2, 3)] {
        let t = FieldTower::new(p, h, 3).unwrap();
        for x in 0..t.top_order() {
            assert_eq!(t.compose(&t.decompose(x)).unwrap(), x);
        }
    }
    assert!(matches!(t.compose(&[0, 1]), Err(FieldError::WrongLength { .. })));
    assert!(matches!(t.compose(&[0, 3, 0]), Err(FieldError::OutOfRange { .. })));
}

#[test]
fn tagged_arithmetic() {
    let t = FieldTower::new(2, 2, 3).unwrap();
    let a = t.element(Level::Top, 17).unwrap();
    let b = t.element(Level::Mid, 3).unwrap();
    assert!(matches!(t.binary(a, b, BinOp::Add), Err(FieldError::LevelMismatch(..))));
    let b = t.embed(b);
    let s = t.binary(a, b, BinOp::Mul).unwrap();
    assert_eq!(t.binary(s, b, BinOp::Div).unwrap(), a);
    let zero = t.element(Level::Top, 0).unwrap();
    assert_eq!(t.inv(zero), Err(FieldError::DivisionByZero));
    assert_eq!(t.coeffs(a), vec![1, 0, 0, 0, 1, 0]);
    assert_eq!(t.coeffs(t.element(Level::Mid, 2).unwrap()), vec![0, 1]);
}

#[test]
fn descriptor_round_trip() {
    let t = FieldTower::new(5, 1, 3).unwrap();
    let d = t.descriptor();
    let back = FieldTower::from_descriptor(&d).unwrap();
    assert_eq!(back.descriptor(), d);
    let bad = TowerDescriptor {
        modulus_top: vec![0, 0, 0, 1],
        ..d
    };
    assert!(FieldTower::from_descriptor(&bad).is_err());
}

#[test]
fn polynomial_path_agrees_with_tables() {
    // GF(3^11) is above the table limit
    let big = FieldTower::new(3, 1, 11).unwrap();
    assert!(big.top_order() > 1 << 16);
    let f = big.top();
    let mut rng = task_rng(3, 3);
    for _ in 0..500 {
        let a = rng.gen_range(1..f.order());
        assert_eq!(f.mul(a, f.inv(a)), 1);
        assert_eq!(f.pow(a, f.order() as u64 - 1), 1);
    }
    let small = Field::prime(3).unwrap();
    assert_eq!(small.order(), 3);
}

proptest! {
    #[test]
    fn decompose_is_linear(a in 0u32..343, b in 0u32..343, c in 0u32..7) {
        let t = FieldTower::new(7, 1, 3).unwrap();
        let (top, mid) = (t.top(), t.mid());
        let lhs = t.decompose(top.add(a, top.mul(c, b)));
        let rhs: Vec<u32> = t
            .decompose(a)
            .iter()
            .zip(t.decompose(b))
            .map(|(&x, y)| mid.add(x, mid.mul(c, y)))
            .collect();
        prop_assert_eq!(lhs, rhs);
    }
}
