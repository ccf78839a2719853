use std::collections::HashSet;
use std::sync::Arc;

use linset::gf::FieldTower;
use linset::pg::task_rng;
use linset::reduction::{
    enumerate_baer_sublines, enumerate_sublines, subline_count, Certification, DesarguesianSpread,
    LineSetKind, PointSet, ReductionError, SearchMode, SpreadExport,
};
use rand::Rng;

fn spread(p: u32, h: u32, t: u32, n: u32) -> DesarguesianSpread {
    DesarguesianSpread::new(Arc::new(FieldTower::new(p, h, t).unwrap()), n).unwrap()
}

#[test]
fn spread_counts() {
    for (p, h, t, n, count, big) in [
        (2, 1, 3, 1, 9, 63),
        (3, 1, 3, 1, 28, 364),
        (3, 1, 3, 2, 757, 9841),
        (2, 3, 2, 1, 65, 585),
    ] {
        let s = spread(p, h, t, n);
        assert_eq!(s.num_elements(), count);
        assert_eq!(s.big().num_points(), big);
        assert!(s.check_partition());
        for e in (0..count as u32).step_by(7) {
            assert_eq!(s.element(e).dim(), t as i32 - 1);
        }
    }
}

#[test]
fn lookup_agrees_with_membership() {
    let s = spread(2, 1, 3, 1);
    for e in 0..9 {
        let el = s.element(e);
        for &b in s.element_points(e) {
            let coords = s.big().point(b).coords;
            assert!(s.big().contains_vec(&el, &coords));
            assert_eq!(s.spread_element_of(&coords).unwrap(), e);
        }
    }
}

#[test]
fn desarguesian_property_on_triples() {
    let s = spread(3, 1, 3, 2);
    let mut rng = task_rng(2, 2);
    for _ in 0..30 {
        let elems: Vec<u32> = (0..3).map(|_| rng.gen_range(0..757)).collect();
        assert!(s.span_is_partitioned(&elems));
    }
}

#[test]
fn linear_set_examples() {
    let s = spread(2, 1, 3, 1);
    let e = s.element(4);
    assert_eq!(s.linear_set(&e).unwrap().members(), &[4]);
    assert_eq!(s.classify_line_linear_set(&e).unwrap(), LineSetKind::Point);
    let line_in = s.big().subspace(e.rows()[..2].to_vec()).unwrap();
    assert_eq!(s.classify_line_linear_set(&line_in).unwrap(), LineSetKind::Point);
    let planes = s.big().subspaces(2).unwrap();
    let scattered = planes.iter().filter(|u| s.is_scattered(u).unwrap()).count();
    assert!(scattered > 0);
    let whole = s.big().whole();
    assert_eq!(s.classify_line_linear_set(&whole).unwrap(), LineSetKind::FullLine);
    let wrong = spread(2, 1, 3, 2).big().whole();
    assert!(matches!(
        s.linear_set(&wrong),
        Err(ReductionError::AmbientMismatch(_))
    ));
}

#[test]
fn monotone_on_chains() {
    let s = spread(2, 1, 3, 1);
    let big = s.big();
    for u in big.subspaces(1).unwrap().iter() {
        let bu = s.linear_set(&u).unwrap();
        for v in big.subspaces_through(&u, 2).unwrap().iter() {
            assert!(bu.is_subset(&s.linear_set(&v).unwrap()));
        }
    }
}

#[test]
fn sublines_and_baer() {
    let t = FieldTower::new(5, 1, 3).unwrap();
    let subs = enumerate_sublines(&t, 1 << 20).unwrap();
    assert_eq!(subs.len(), 16275);
    assert_eq!(subline_count(125, 5), 16275);
    assert!(subs.iter().all(|s| s.len() == 6));
    let distinct: HashSet<_> = subs.iter().map(|s| s.members().to_vec()).collect();
    assert_eq!(distinct.len(), 16275);
    assert!(enumerate_sublines(&t, 100).is_err());

    let t = FieldTower::new(2, 2, 3).unwrap();
    let baer = enumerate_baer_sublines(&t, 1 << 20).unwrap();
    assert_eq!(baer.len() as u64, subline_count(64, 8));
    // every Baer subline of PG(1,64) contains sublines PG(1,2): any frame in it closes inside it
    let t2 = FieldTower::new(2, 1, 6).unwrap();
    assert!(enumerate_baer_sublines(&t2, 1 << 20).is_err());
    let sub2 = linset::reduction::sublines(
        &linset::pg::ProjSpace::new(t.top().clone(), 1),
        &t.top().subfield(2),
    );
    let b0: HashSet<u32> = baer[0].members().iter().copied().collect();
    let inside = sub2
        .iter()
        .filter(|l| l.iter().all(|p| b0.contains(p)))
        .count();
    assert_eq!(inside as u64, subline_count(8, 2));
}

#[test]
fn anchored_certification_everywhere() {
    let s = spread(3, 1, 3, 1);
    let mut rng = task_rng(8, 0);
    let u = s.big().random_subspace(2, &mut rng);
    let b = s.linear_set(&u).unwrap();
    for &p in b.members() {
        for &x in s.element_points(p).iter().step_by(3) {
            let c = s.certify_linear_anchored(&b, x, SearchMode::Exhaustive).unwrap();
            let Certification::Linear(w) = c else {
                panic!("anchor {x} failed");
            };
            assert_eq!(s.linear_set(&w).unwrap(), b);
        }
    }
}

/// Oracle: the set of all linear sets of PG(1,27) from every subspace of PG(5,3).
#[test]
fn certification_against_exhaustive_oracle() {
    let s = spread(3, 1, 3, 1);
    let mut all = HashSet::new();
    for d in 0..=5 {
        for u in s.big().subspaces(d).unwrap().iter() {
            all.insert(s.linear_set(&u).unwrap().members().to_vec());
        }
    }
    let amb = s.small_ambient();
    let mut rng = task_rng(77, 0);
    let mut linear = 0;
    for i in 0..60 {
        let b = if i % 2 == 0 {
            let u = s.big().random_subspace(rng.gen_range(1..4), &mut rng);
            let b = s.linear_set(&u).unwrap();
            let drop = b.members()[rng.gen_range(0..b.len())];
            b.without(drop)
        } else {
            let n = rng.gen_range(1..8);
            PointSet::new(amb, (0..n).map(|_| rng.gen_range(0..28)).collect()).unwrap()
        };
        let truth = all.contains(b.members());
        let got = s.certify_linear(&b, SearchMode::Exhaustive).unwrap();
        match got {
            Certification::Linear(w) => {
                assert!(truth);
                assert_eq!(s.linear_set(&w).unwrap(), b);
                linear += 1;
            }
            Certification::NonLinear => assert!(!truth, "{:?}", b.members()),
            Certification::Inconclusive { .. } => unreachable!(),
        }
    }
    assert!(linear > 0);
}

#[test]
fn witnesses_are_deterministic() {
    let s = spread(3, 1, 3, 2);
    let u = s.big().random_subspace(3, &mut task_rng(5, 5));
    let b = s.linear_set(&u).unwrap();
    let a = s.certify_linear(&b, SearchMode::Exhaustive).unwrap();
    assert_eq!(a, s.certify_linear(&b, SearchMode::Exhaustive).unwrap());
}

#[test]
fn export_round_trip() {
    let s = spread(2, 3, 2, 1);
    let text = s.export().to_text();
    assert!(text.starts_with("spread p=2 h=3 t=2 n=1 format-version=1\n"));
    let parsed = SpreadExport::parse(&text).unwrap();
    assert_eq!(parsed.elements.len(), 65);
    assert!(DesarguesianSpread::from_export(&parsed).is_ok());
    let mut wrong = parsed.clone();
    wrong.manifest.format_version = 2;
    assert!(DesarguesianSpread::from_export(&wrong).is_err());
    assert!(SpreadExport::parse("nonsense").is_err());
}
