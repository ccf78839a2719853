use std::sync::Arc;

use linset::gf::FieldTower;
use linset::pg::{self, gaussian_coeff, rref, task_rng, PgError, ProjSpace};
use num_bigint::BigUint;

fn space(p: u32, h: u32, n: u32) -> ProjSpace {
    ProjSpace::new(FieldTower::new(p, h, 1).unwrap().mid().clone(), n)
}

#[test]
fn gaussian_values() {
    assert_eq!(gaussian_coeff(2, 1, 7), BigUint::from(8u32));
    assert_eq!(gaussian_coeff(5, 0, 3), BigUint::from(1u32));
    assert_eq!(gaussian_coeff(5, 5, 3), BigUint::from(1u32));
    assert_eq!(gaussian_coeff(2, 3, 3), BigUint::from(0u32));
    for n in 0..7 {
        for k in 0..=n {
            assert_eq!(gaussian_coeff(n, k, 4), gaussian_coeff(n, n - k, 4));
        }
    }
}

#[test]
fn lines_of_pg32_by_brute_force() {
    let s = space(2, 1, 3);
    let mut lines = std::collections::BTreeSet::new();
    for a in 0..15 {
        for b in 0..15 {
            if a != b {
                let pa = s.point_subspace(a);
                lines.insert(s.points_of(&s.span_with(&pa, &s.point(b).coords)));
            }
        }
    }
    assert_eq!(BigUint::from(lines.len()), gaussian_coeff(4, 2, 2));
}

#[test]
fn point_enumeration() {
    assert_eq!(space(3, 1, 2).enumerate_points(u64::MAX).unwrap().len(), 13);
    assert_eq!(space(2, 1, 5).enumerate_points(u64::MAX).unwrap().len(), 63);
    let big = ProjSpace::new(FieldTower::new(7, 1, 3).unwrap().top().clone(), 2);
    let pts = big.enumerate_points(u64::MAX).unwrap();
    assert_eq!(pts.len(), 117_993);
    assert!(pts.windows(2).all(|w| w[0].coords < w[1].coords));
    assert!(matches!(
        big.enumerate_points(1000),
        Err(PgError::BoundExceeded { .. })
    ));
}

#[test]
fn subspace_streams() {
    assert_eq!(space(2, 1, 2).subspaces(1).unwrap().len(), 7);
    assert_eq!(space(2, 1, 5).subspaces(4).unwrap().len(), 63);
    let planes = space(2, 2, 5).subspaces(2).unwrap();
    let cells: u64 = planes.cell_sizes().iter().sum();
    assert_eq!(BigUint::from(cells), gaussian_coeff(6, 3, 4));
    assert_eq!(BigUint::from(planes.len()), gaussian_coeff(6, 3, 4));
    assert!(planes.check_bound(10).is_err());
}

#[test]
fn duality_and_canonicity() {
    for (p, h, n) in [(2, 1, 3), (3, 1, 3), (2, 2, 3), (2, 1, 4)] {
        let s = space(p, h, n);
        let hyper = s.subspaces(n - 1).unwrap();
        assert_eq!(hyper.len(), s.num_points());
        for sub in hyper.iter() {
            assert_eq!(rref(s.field(), sub.rows().to_vec()), sub.rows());
        }
    }
}

#[test]
fn incidence_double_count() {
    let s = space(3, 1, 3);
    for d in 0..=3 {
        let total: u64 = s.subspaces(d).unwrap().iter().map(|x| s.num_points_of(&x)).sum();
        let expected = gaussian_coeff(4, d + 1, 3) * gaussian_coeff(d + 1, 1, 3);
        assert_eq!(BigUint::from(total), expected);
    }
}

#[test]
fn span_meet_and_incidence() {
    let s = space(3, 1, 5);
    let mut rng = task_rng(42, 0);
    for _ in 0..1000 {
        let a = s.random_subspace(rand::Rng::gen_range(&mut rng, 0..5), &mut rng);
        let b = s.random_subspace(rand::Rng::gen_range(&mut rng, 0..5), &mut rng);
        let span = s.span(&[&a, &b]).unwrap();
        let meet = s.meet(&a, &b).unwrap();
        assert_eq!(span.dim() + meet.dim(), a.dim() + b.dim());
        assert!(s.contains(&span, &a) && s.contains(&span, &b));
        assert!(s.contains(&a, &meet) && s.contains(&b, &meet));
    }
    let h = s.subspaces(4).unwrap().get(9);
    assert_eq!(s.meet(&h, &h).unwrap(), h);
    let p = s.point(100);
    assert_eq!(s.span(&[&s.point_subspace(100)]).unwrap().dim(), 0);
    assert!(s.incident(&p, &s.whole()).unwrap());
}

#[test]
fn through_counts() {
    let s = space(2, 1, 2);
    for i in 0..7 {
        assert_eq!(s.subspaces_through(&s.point_subspace(i), 1).unwrap().len(), 3);
    }
    let s = space(3, 1, 3);
    let line = s.subspaces(1).unwrap().get(20);
    let planes: Vec<_> = s.subspaces_through(&line, 2).unwrap().iter().collect();
    assert_eq!(planes.len(), 4);
    assert!(planes.iter().all(|p| s.contains(p, &line)));
    // (n-k+1)-spaces through an (n-k)-space of PG(n, q^3)
    let s = ProjSpace::new(FieldTower::new(2, 1, 3).unwrap().top().clone(), 3);
    let k = 2;
    let pi = s.subspaces(3 - k).unwrap().get(0);
    let through = s.subspaces_through(&pi, 3 - k + 1).unwrap();
    assert_eq!(through.len(), (8u64.pow(k) - 1) / 7);
}

#[test]
fn text_formats() {
    let s = ProjSpace::new(FieldTower::new(2, 1, 3).unwrap().top().clone(), 2);
    let sub = s.subspaces(1).unwrap().get(33);
    let line = pg::format_subspace(&sub);
    assert!(line.contains(';'));
    assert_eq!(pg::parse_subspace(&s, &line).unwrap(), sub);
    assert!(pg::parse_subspace(&s, "1 2").is_err());
    assert!(pg::parse_subspace(&s, "1 9 0").is_err());
    let p = s.point(50);
    assert_eq!(pg::parse_point(&pg::format_point(&p.coords)).unwrap(), p.coords);
    let _ = Arc::clone(s.field());
}
