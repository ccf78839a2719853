use std::collections::BTreeMap;
use std::sync::Arc;

use linset::blocking::{BlockingContext, BlockingError, ScanOptions, SpaceClass};
use linset::gf::FieldTower;
use linset::pg::{gaussian_coeff, task_rng, Subspace};
use linset::reduction::{DesarguesianSpread, PointSet};
use num_bigint::BigUint;

fn setup(p: u32, h: u32, n: u32, k: u32) -> (BlockingContext, DesarguesianSpread) {
    let tw = Arc::new(FieldTower::new(p, h, 3).unwrap());
    (
        BlockingContext::new(tw.clone(), n, k).unwrap(),
        DesarguesianSpread::new(tw, n).unwrap(),
    )
}

#[test]
fn bad_index() {
    let tw = Arc::new(FieldTower::new(2, 1, 3).unwrap());
    assert!(matches!(
        BlockingContext::new(tw.clone(), 2, 0),
        Err(BlockingError::BadIndex { .. })
    ));
    assert!(BlockingContext::new(tw, 2, 3).is_err());
}

#[test]
fn linear_sets_of_rank_tk_block() {
    for (p, n, k) in [(3, 2, 1), (2, 3, 2), (2, 3, 1)] {
        let (ctx, spread) = setup(p, 1, n, k);
        let mut rng = task_rng(p as u64, n as u64);
        for _ in 0..4 {
            let u = spread.big().random_subspace(3 * k, &mut rng);
            let b = spread.linear_set(&u).unwrap();
            assert!(ctx.is_k_blocking(&b).unwrap());
        }
    }
}

#[test]
fn tangents_on_two_concurrent_lines() {
    let (ctx, _) = setup(2, 1, 2, 1);
    let s = ctx.space();
    let l1 = s.subspaces(1).unwrap().get(0);
    let l2 = s.subspaces(1).unwrap().get(40);
    let common = s.meet(&l1, &l2).unwrap();
    assert_eq!(common.dim(), 0);
    let mut pts = s.points_of(&l1);
    pts.extend(s.points_of(&l2));
    let b = PointSet::new(ctx.ambient(), pts).unwrap();
    let p = s.points_of(&common)[0];
    let lines: Vec<Subspace> = s.subspaces(1).unwrap().iter().collect();
    for &x in b.members() {
        let xv = s.point(x).coords;
        let brute = lines
            .iter()
            .any(|l| s.contains_vec(l, &xv) && ctx.intersection_count(&b, l).unwrap() == 1);
        assert_eq!(ctx.tangent_space_exists(&b, x).unwrap(), brute);
    }
    // every line through the common point meets B there and nowhere else, except l1, l2
    assert!(ctx.tangent_space_exists(&b, p).unwrap());
    assert!(!ctx.is_minimal(&b).unwrap());
}

#[test]
fn linear_blocking_set_of_pg2_27() {
    let (ctx, spread) = setup(3, 1, 2, 1);
    let u = spread.big().random_subspace(3, &mut task_rng(27, 0));
    let b = spread.linear_set(&u).unwrap();
    assert!(ctx.is_k_blocking(&b).unwrap());
    let by_tangent = ctx.is_minimal_by_tangents(&b).unwrap();
    assert_eq!(by_tangent, ctx.is_minimal_by_removal(&b).unwrap());
    assert!(ctx.minimality_criterion(&b).unwrap());
    assert!(by_tangent);
    let r = ctx.mod_profile(&b, 1, 3, &ScanOptions::default()).unwrap();
    assert!(r.mod_ok());
    assert_eq!(BigUint::from(r.total), gaussian_coeff(3, 2, 27));
}

#[test]
fn secant_buckets_against_line_scan() {
    let (ctx, spread) = setup(3, 1, 2, 1);
    let mut rng = task_rng(31, 0);
    let (b, p) = loop {
        let u = spread.big().random_subspace(3, &mut rng);
        let b = spread.linear_set(&u).unwrap();
        let p = b
            .members()
            .iter()
            .copied()
            .find(|&p| ctx.secant_census(&b, p).unwrap().sublines > 0);
        if let Some(p) = p {
            break (b, p);
        }
    };
    let cen = ctx.secant_census(&b, p).unwrap();
    let s = ctx.space();
    let pv = s.point(p).coords;
    let mut brute = BTreeMap::new();
    for l in s.subspaces(1).unwrap().iter() {
        if s.contains_vec(&l, &pv) {
            *brute.entry(ctx.intersection_count(&b, &l).unwrap()).or_insert(0u64) += 1;
        }
    }
    assert_eq!(cen.histogram, brute);
    assert_eq!(cen.lines, 28);
    assert_eq!(cen.full_lines, brute.get(&28).copied().unwrap_or(0));
    assert_eq!(cen.conservation_sum(), b.len() as u64 - 1);
    assert_eq!(cen.baer, None);
}

#[test]
fn secant_census_of_a_subline() {
    let (ctx, _) = setup(2, 1, 2, 1);
    let s = ctx.space();
    // points (1, x, 0) with x in GF(2) plus (0, 1, 0): a subline of the line z = 0
    let pts: Vec<u32> = [vec![1, 0, 0], vec![1, 1, 0], vec![0, 1, 0]]
        .iter()
        .map(|v| s.index_of(v).unwrap())
        .collect();
    let b = PointSet::new(ctx.ambient(), pts).unwrap();
    let cen = ctx.secant_census(&b, b.members()[0]).unwrap();
    assert_eq!(cen.histogram, BTreeMap::from([(1, 8), (3, 1)]));
    assert_eq!(cen.sublines, 1);

    let (ctx, _) = setup(2, 2, 2, 1);
    let line = ctx.space().subspaces(1).unwrap().get(0);
    let b = PointSet::new(ctx.ambient(), ctx.space().points_of(&line)).unwrap();
    let cen = ctx.secant_census(&b, b.members()[0]).unwrap();
    assert_eq!(cen.full_lines, 1);
    assert_eq!(cen.baer, Some(0));
}

#[test]
fn scans_independent_of_thread_count() {
    let (ctx, spread) = setup(3, 1, 2, 1);
    let u = spread.big().random_subspace(4, &mut task_rng(3, 9));
    let b = spread.linear_set(&u).unwrap().with(0).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| ctx.mod_profile(&b, 1, 3, &ScanOptions::default()).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn classify_examples() {
    let (ctx, _) = setup(2, 1, 3, 2);
    let empty = PointSet::new(ctx.ambient(), vec![]).unwrap();
    let plane = ctx.space().subspaces(2).unwrap().get(7);
    assert_eq!(ctx.classify_space(&empty, &plane).unwrap(), SpaceClass::Small);
    let full = PointSet::new(ctx.ambient(), ctx.space().points_of(&plane)).unwrap();
    assert_eq!(ctx.classify_space(&full, &plane).unwrap(), SpaceClass::Large);
}
