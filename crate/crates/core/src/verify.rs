//! Exact checks of the counting identities, intersection scans and the
//! linearity audit built on top of [`crate::blocking`] and [`crate::reduction`].

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocking::{BlockingContext, BlockingError, Counter, Offender, ScanOptions};
use crate::gf::{self, FieldError, FieldTower};
use crate::pg::{self, task_rng, PgError, Subspace};
use crate::reduction::{
    enumerate_baer_sublines, enumerate_sublines, Certification, DesarguesianSpread, LineSetKind,
    PointSet, ReductionError, SearchMode,
};

const CHUNK: u64 = 4096;

/// Big integers as decimal strings in reports.
mod decimal {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use std::fmt::Display;
    use std::str::FromStr;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("bad integer {s:?}")))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Pg(#[from] PgError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Blocking(#[from] BlockingError),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("invalid parameters: {0}")]
    Params(String),
}

/// Split q = p^h.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut r = q;
    let mut h = 0;
    while r.is_multiple_of(p) {
        r /= p;
        h += 1;
    }
    (r == 1 && gf::is_prime(p)).then_some((p as u32, h))
}

/// Gaussian coefficient that is zero for a negative lower index.
fn gauss(n: i64, k: i64, q: u64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    pg::gaussian_coeff(n as u32, k as u32, q)
}

/// The three moments of the intersection numbers of B_π = B ∩ π with the
/// (n-k)-spaces inside an (n-k+s)-space π.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentCheck {
    pub n: u32,
    pub k: u32,
    pub s: u32,
    /// subfield order q of the GF(q^t) ambient
    pub q: u32,
    pub ambient_order: u32,
    pub b_pi: u64,
    /// intersection size i → x_i
    pub x: BTreeMap<u64, u64>,
    #[serde(with = "decimal")]
    pub sum0: BigUint,
    #[serde(with = "decimal")]
    pub sum1: BigUint,
    #[serde(with = "decimal")]
    pub sum2: BigUint,
    #[serde(with = "decimal")]
    pub expected0: BigUint,
    #[serde(with = "decimal")]
    pub expected1: BigUint,
    #[serde(with = "decimal")]
    pub expected2: BigUint,
    /// Σ (i-1)(i-1-q) x_i
    #[serde(with = "decimal")]
    pub weighted: BigInt,
    /// every (n-k)-space of π meets B_π in 1 mod q points
    pub one_mod_q: bool,
}

impl MomentCheck {
    pub fn identities_hold(&self) -> bool {
        self.sum0 == self.expected0 && self.sum1 == self.expected1 && self.sum2 == self.expected2
    }

    /// Identities hold, and the weighted sum is nonnegative whenever the
    /// 1 mod q condition holds.
    pub fn passes(&self) -> bool {
        self.identities_hold() && (!self.one_mod_q || !self.weighted.is_negative())
    }
}

pub fn moment_counts(
    ctx: &BlockingContext,
    b: &PointSet,
    pi: &Subspace,
) -> Result<MomentCheck, VerifyError> {
    let space = ctx.space();
    let m = ctx.blocking_dim();
    let s = pi.dim() - m as i32;
    if s < 1 || s > ctx.k() as i32 {
        return Err(VerifyError::Params(format!(
            "pi has dimension {}, need n-k+s with 1 <= s <= k",
            pi.dim()
        )));
    }
    let s = s as u32;
    let counter = Counter::new(space, b);
    let b_pi = counter.count(pi);
    let within = space.subspaces_within(pi, m)?;
    let mut x = BTreeMap::new();
    for sub in within.iter() {
        *x.entry(counter.count(&sub)).or_insert(0u64) += 1;
    }
    let q = ctx.tower().q() as u64;
    let big_q = ctx.order();
    let (mut sum0, mut sum1, mut sum2) = (BigUint::zero(), BigUint::zero(), BigUint::zero());
    let mut weighted = BigInt::zero();
    for (&i, &xi) in &x {
        sum0 += xi;
        sum1 += BigUint::from(i) * xi;
        sum2 += BigUint::from(i) * i.saturating_sub(1) * xi;
        weighted += (BigInt::from(i) - 1) * (BigInt::from(i) - 1 - q) * xi;
    }
    let (mi, si) = (m as i64, s as i64);
    let bp = BigUint::from(b_pi);
    Ok(MomentCheck {
        n: ctx.n(),
        k: ctx.k(),
        s,
        q: q as u32,
        ambient_order: big_q as u32,
        b_pi,
        one_mod_q: x.keys().all(|&i| i % q == 1 % q),
        x,
        sum0,
        sum1,
        sum2,
        expected0: gauss(mi + si + 1, mi + 1, big_q),
        expected1: &bp * gauss(mi + si, mi, big_q),
        expected2: &bp * b_pi.saturating_sub(1) * gauss(mi + si - 1, mi - 1, big_q),
        weighted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundary {
    /// q^{3s} + q^{3s-1} + q^{3s-2} + 3q^{3s-3}
    Lower,
    /// q^{3s+1} - q^{3s-1} - q^{3s-2} - 3q^{3s-3}
    Upper,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapEvaluation {
    pub n: u32,
    pub k: u32,
    pub s: u32,
    pub q: u64,
    pub boundary: Boundary,
    #[serde(with = "decimal")]
    pub size: BigUint,
    #[serde(with = "decimal")]
    pub value: BigInt,
    pub negative: bool,
}

pub fn boundary_size(q: u64, s: u32, boundary: Boundary) -> BigUint {
    let (small, large) = crate::blocking::space_thresholds(q, s);
    match boundary {
        Boundary::Lower => small,
        Boundary::Upper => large,
    }
}

/// The quadratic in |B_π| obtained from Σ (i-1)(i-1-q) x_i ≥ 0, in the
/// form |B|(|B|-1)(Q^m-1)(Q^{m+1}-1) - (q+1)|B|(Q^{m+s}-1)(Q^{m+1}-1)
/// + (q+1)(Q^{m+s+1}-1)(Q^{m+s}-1) with Q = q³ and m = n-k.
pub fn gap_expression(n: u32, k: u32, s: u32, q: u64, size: &BigUint) -> BigInt {
    let m = n - k;
    let big_q = BigInt::from(q).pow(3);
    let e = |j: u32| big_q.pow(j) - 1;
    let b = BigInt::from(size.clone());
    let q1 = BigInt::from(q + 1);
    &b * (&b - 1) * e(m) * e(m + 1) - &q1 * &b * e(m + s) * e(m + 1)
        + &q1 * e(m + s + 1) * e(m + s)
}

pub fn gap_evaluate(
    n: u32,
    k: u32,
    s: u32,
    q: u64,
    boundary: Boundary,
) -> Result<GapEvaluation, VerifyError> {
    if !(1 <= s && s <= k && k <= n) {
        return Err(VerifyError::Params(format!(
            "need 1 <= s <= k <= n, got s={s} k={k} n={n}"
        )));
    }
    if prime_power(q).is_none() {
        return Err(VerifyError::NotPrimePower(q));
    }
    let size = boundary_size(q, s, boundary);
    let value = gap_expression(n, k, s, q, &size);
    Ok(GapEvaluation {
        n,
        k,
        s,
        q,
        boundary,
        negative: value.is_negative(),
        size,
        value,
    })
}

/// Both boundaries for every q in `qs`, 1 ≤ s ≤ `max_s`, 1 ≤ n-k ≤ `max_m`.
pub fn gap_batch(qs: &[u64], max_s: u32, max_m: u32) -> Result<Vec<GapEvaluation>, VerifyError> {
    let mut out = Vec::new();
    for &q in qs {
        for s in 1..=max_s {
            for m in 1..=max_m {
                for b in [Boundary::Lower, Boundary::Upper] {
                    out.push(gap_evaluate(s + m, s, s, q, b)?);
                }
            }
        }
    }
    Ok(out)
}

/// Exhaustive enumeration or a seeded sample of the planes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlaneScan {
    Exhaustive,
    Sampled { planes: u64, seed: u64 },
}

fn line_spread(q: u64) -> Result<DesarguesianSpread, VerifyError> {
    let (p, h) = prime_power(q).ok_or(VerifyError::NotPrimePower(q))?;
    let tower = Arc::new(FieldTower::new(p, h, 3)?);
    Ok(DesarguesianSpread::new(tower, 1)?)
}

/// Distinct linear sets B(U) over the planes U of the big space, sorted.
pub fn plane_linear_sets(
    spread: &DesarguesianSpread,
    scan: PlaneScan,
) -> Result<(u64, Vec<Vec<u32>>), VerifyError> {
    let planes = spread.big().subspaces(2)?;
    let indices: Vec<u64> = match scan {
        PlaneScan::Exhaustive => {
            planes.check_bound(pg::DEFAULT_MAX_CANONICAL)?;
            Vec::new()
        }
        PlaneScan::Sampled { planes: count, seed } => {
            let mut v = planes.sample_indices(count, seed);
            v.sort_unstable();
            v.dedup();
            v
        }
    };
    let total = match scan {
        PlaneScan::Exhaustive => planes.len(),
        PlaneScan::Sampled { .. } => indices.len() as u64,
    };
    let index = |pos: u64| match scan {
        PlaneScan::Exhaustive => pos,
        PlaneScan::Sampled { .. } => indices[pos as usize],
    };
    let sets = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut local = HashSet::new();
            for pos in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let u = planes.get(index(pos));
                let b = spread.linear_set(&u).expect("plane of the big space");
                local.insert(b.members().to_vec());
            }
            local
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    let mut sets: Vec<Vec<u32>> = sets.into_iter().collect();
    sets.sort_unstable();
    Ok((total, sets))
}

/// For each point, the ids of the families containing it.
fn point_index(points: usize, families: &[PointSet]) -> Vec<Vec<u32>> {
    let mut idx = vec![Vec::new(); points];
    for (i, f) in families.iter().enumerate() {
        for &p in f.members() {
            idx[p as usize].push(i as u32);
        }
    }
    idx
}

/// Histogram of |F ∩ S| over all families F and sets S, plus the maximum.
fn intersection_histogram(
    families: &[PointSet],
    index: &[Vec<u32>],
    sets: &[&[u32]],
) -> BTreeMap<u64, u64> {
    let nf = families.len();
    sets.par_iter()
        .fold(
            || (vec![0u32; nf], Vec::new(), BTreeMap::new()),
            |(mut counts, mut touched, mut hist): (Vec<u32>, Vec<u32>, BTreeMap<u64, u64>), set| {
                for &p in set.iter() {
                    for &f in &index[p as usize] {
                        if counts[f as usize] == 0 {
                            touched.push(f);
                        }
                        counts[f as usize] += 1;
                    }
                }
                *hist.entry(0).or_insert(0) += (nf - touched.len()) as u64;
                for &f in &touched {
                    *hist.entry(counts[f as usize] as u64).or_insert(0) += 1;
                    counts[f as usize] = 0;
                }
                touched.clear();
                (counts, touched, hist)
            },
        )
        .map(|(_, _, h)| h)
        .reduce(BTreeMap::new, merge_hist)
}

fn merge_hist(mut a: BTreeMap<u64, u64>, b: BTreeMap<u64, u64>) -> BTreeMap<u64, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Result4Report {
    pub q: u64,
    pub exhaustive: bool,
    pub seed: Option<u64>,
    pub planes_scanned: u64,
    pub distinct_linear_sets: u64,
    pub sublines: u64,
    /// |subline ∩ linear set| → number of (subline, linear set) pairs
    pub histogram: BTreeMap<u64, u64>,
    pub allowed: Vec<u64>,
    /// sizes seen outside the allowed list
    pub violations: Vec<u64>,
}

impl Result4Report {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Intersection sizes of the sublines PG(1, q) of PG(1, q³) with the linear
/// sets B(U), U a plane of PG(5, q).
pub fn scan_result4(q: u64, scan: PlaneScan) -> Result<Result4Report, VerifyError> {
    let spread = line_spread(q)?;
    let sublines = enumerate_sublines(spread.tower(), pg::DEFAULT_MAX_CANONICAL)?;
    let (planes_scanned, sets) = plane_linear_sets(&spread, scan)?;
    let index = point_index(spread.small().num_points() as usize, &sublines);
    let refs: Vec<&[u32]> = sets.iter().map(|s| s.as_slice()).collect();
    let histogram = intersection_histogram(&sublines, &index, &refs);
    let allowed = vec![0, 1, 2, 3, q + 1];
    let violations = histogram
        .keys()
        .copied()
        .filter(|s| !allowed.contains(s))
        .collect();
    let (exhaustive, seed) = match scan {
        PlaneScan::Exhaustive => (true, None),
        PlaneScan::Sampled { seed, .. } => (false, Some(seed)),
    };
    Ok(Result4Report {
        q,
        exhaustive,
        seed,
        planes_scanned,
        distinct_linear_sets: sets.len() as u64,
        sublines: sublines.len() as u64,
        histogram,
        allowed,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Result5Report {
    pub q: u64,
    pub sublines: u64,
    pub baer_sublines: u64,
    pub linear_sets: u64,
    pub subline_baer_pairs: u64,
    pub baer_linear_pairs: u64,
    pub subline_baer_histogram: BTreeMap<u64, u64>,
    pub baer_linear_histogram: BTreeMap<u64, u64>,
    pub subline_baer_max: u64,
    pub baer_linear_max: u64,
    /// √q + 1
    pub subline_baer_bound: u64,
    /// q + √q + 1
    pub baer_linear_bound: u64,
}

impl Result5Report {
    pub fn passes(&self) -> bool {
        self.subline_baer_max <= self.subline_baer_bound
            && self.baer_linear_max <= self.baer_linear_bound
    }
}

/// Intersections of Baer sublines PG(1, q√q) of PG(1, q³) with sublines and
/// with the linear sets of size q²+1 and q²+q+1, q a square.
pub fn scan_result5(q: u64) -> Result<Result5Report, VerifyError> {
    let spread = line_spread(q)?;
    let tower = spread.tower();
    let baer = enumerate_baer_sublines(tower, pg::DEFAULT_MAX_CANONICAL)?;
    let root = (tower.p() as u64).pow(tower.h() / 2);
    let sublines = enumerate_sublines(tower, pg::DEFAULT_MAX_CANONICAL)?;
    let (_, sets) = plane_linear_sets(&spread, PlaneScan::Exhaustive)?;
    let sets: Vec<&[u32]> = sets
        .iter()
        .filter(|s| s.len() as u64 == q * q + 1 || s.len() as u64 == q * q + q + 1)
        .map(|s| s.as_slice())
        .collect();
    let index = point_index(spread.small().num_points() as usize, &baer);
    let sub_refs: Vec<&[u32]> = sublines.iter().map(|s| s.members()).collect();
    let h1 = intersection_histogram(&baer, &index, &sub_refs);
    let h2 = intersection_histogram(&baer, &index, &sets);
    let max = |h: &BTreeMap<u64, u64>| h.keys().next_back().copied().unwrap_or(0);
    Ok(Result5Report {
        q,
        sublines: sublines.len() as u64,
        baer_sublines: baer.len() as u64,
        linear_sets: sets.len() as u64,
        subline_baer_pairs: h1.values().sum(),
        baer_linear_pairs: h2.values().sum(),
        subline_baer_max: max(&h1),
        baer_linear_max: max(&h2),
        subline_baer_histogram: h1,
        baer_linear_histogram: h2,
        subline_baer_bound: root + 1,
        baer_linear_bound: q + root + 1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxonomyReport {
    pub q: u64,
    pub planes: u64,
    /// |B(U)| → number of planes
    pub sizes: BTreeMap<u64, u64>,
    pub kinds: BTreeMap<LineSetKind, u64>,
    /// planes whose size and meet pattern disagree
    pub mismatches: u64,
}

impl TaxonomyReport {
    pub fn passes(&self) -> bool {
        let q = self.q;
        self.mismatches == 0
            && self
                .sizes
                .keys()
                .all(|&s| s == 1 || s == q * q + 1 || s == q * q + q + 1)
    }
}

/// Every plane U of PG(5, q): |B(U)| against how U meets the spread.
/// Size 1 must come from U inside an element, size q²+1 from U meeting one
/// element in a line and the rest in at most a point, size q²+q+1 from a
/// scattered U.
pub fn taxonomy_scan(q: u64) -> Result<TaxonomyReport, VerifyError> {
    let spread = line_spread(q)?;
    let planes = spread.big().subspaces(2)?;
    planes.check_bound(pg::DEFAULT_MAX_CANONICAL)?;
    let total = planes.len();
    let plane_points = q * q + q + 1;
    let (sizes, kinds, mismatches) = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut sizes = BTreeMap::new();
            let mut kinds = BTreeMap::new();
            let mut bad = 0u64;
            for i in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let u = planes.get(i);
                let pattern = spread.meet_pattern(&u).expect("plane of the big space");
                let kind = spread.classify_line_linear_set(&u).expect("n = 1");
                let size = pattern.len() as u64;
                let ok = match kind {
                    LineSetKind::Point => pattern.values().all(|&c| c == plane_points),
                    LineSetKind::Pencil | LineSetKind::ScatteredPlane => true,
                    _ => false,
                };
                if !ok {
                    bad += 1;
                }
                *sizes.entry(size).or_insert(0u64) += 1;
                *kinds.entry(kind).or_insert(0u64) += 1;
            }
            (sizes, kinds, bad)
        })
        .reduce(
            || (BTreeMap::new(), BTreeMap::new(), 0),
            |a, b| {
                let mut kinds = a.1;
                for (k, v) in b.1 {
                    *kinds.entry(k).or_insert(0) += v;
                }
                (merge_hist(a.0, b.0), kinds, a.2 + b.2)
            },
        );
    Ok(TaxonomyReport {
        q,
        planes: total,
        sizes,
        kinds,
        mismatches,
    })
}

/// How to pick the tk-dimensional subspace U.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    /// A hyperplane of the field reduction of the given k-space (the least
    /// k-space when `None`); B(U) is that k-space.
    SpannedSpreadElements(Option<Subspace>),
    /// Span of e_0, e_t, …, e_{nt}, then e_1, e_{t+1}, …, e_2, … truncated to
    /// tk + 1 vectors.
    CanonicalSubgeometry,
    SeededRandom(u64),
}

pub fn construct_linear_blocking(
    ctx: &BlockingContext,
    spread: &DesarguesianSpread,
    source: &Source,
) -> Result<(PointSet, Subspace), VerifyError> {
    let t = ctx.tower().t();
    let (n, k) = (ctx.n(), ctx.k());
    if spread.n() != n || spread.tower().descriptor() != ctx.tower().descriptor() {
        return Err(VerifyError::Params("spread and context disagree".into()));
    }
    let big = spread.big();
    let rank = (t * k + 1) as usize;
    let u = match source {
        Source::SpannedSpreadElements(pi) => {
            let pi = match pi {
                Some(p) => p.clone(),
                None => ctx.space().subspaces(k)?.get(0),
            };
            if pi.dim() != k as i32 {
                return Err(VerifyError::Params(format!("need a {k}-space")));
            }
            let full = spread.reduce_subspace(&pi)?;
            big.subspace(full.rows()[..rank].to_vec())?
        }
        Source::CanonicalSubgeometry => {
            let len = big.len();
            let rows: Vec<Vec<u32>> = (0..t)
                .flat_map(|j| (0..=n).map(move |i| (i * t + j) as usize))
                .take(rank)
                .map(|pos| {
                    let mut r = vec![0; len];
                    r[pos] = 1;
                    r
                })
                .collect();
            big.subspace(rows)?
        }
        Source::SeededRandom(seed) => big.random_subspace(t * k, &mut task_rng(*seed, 0)),
    };
    let b = spread.linear_set(&u)?;
    Ok((b, u))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuditCertificate {
    /// Rows of U with B(U) = B.
    Linear(Vec<Vec<u32>>),
    NonLinear,
    Inconclusive { nodes: u64 },
    /// Some hypothesis failed, so no certification was attempted.
    NotAttempted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub size: u64,
    pub blocking: bool,
    pub small: bool,
    pub minimal: bool,
    pub one_mod_q: bool,
    pub one_mod_witness: Option<Offender>,
    /// k = 1 only: |B| ≡ 1 mod q and |B| ≤ q³ + q² + q + 1
    pub size_filter: Option<bool>,
    pub certificate: AuditCertificate,
}

impl AuditReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.blocking && self.small && self.minimal && self.one_mod_q
    }
}

/// Checks smallness, minimality and the 1 mod q condition; when all hold,
/// looks for a subspace U with B(U) = B. Never assumes the answer.
pub fn theorem1_audit(
    ctx: &BlockingContext,
    spread: &DesarguesianSpread,
    b: &PointSet,
    mode: SearchMode,
) -> Result<AuditReport, VerifyError> {
    let q = ctx.tower().q() as u64;
    let blocking = ctx.is_k_blocking(b)?;
    let small = ctx.is_small(b);
    let minimal = blocking && ctx.is_minimal(b)?;
    let scan = ctx.one_mod_scan(b, q as u32, &ScanOptions::default())?;
    let one_mod_q = scan.mod_ok();
    let size = b.len() as u64;
    let size_filter = (ctx.k() == 1).then(|| size % q == 1 % q && size <= q.pow(3) + q * q + q + 1);
    let mut report = AuditReport {
        size,
        blocking,
        small,
        minimal,
        one_mod_q,
        one_mod_witness: scan.offenders.first().cloned(),
        size_filter,
        certificate: AuditCertificate::NotAttempted,
    };
    if !report.hypotheses_hold() {
        return Ok(report);
    }
    report.certificate = match subspace_of(ctx, b)? {
        Some(pi) => AuditCertificate::Linear(spread.reduce_subspace(&pi)?.rows().to_vec()),
        None => match spread.certify_linear(b, mode)? {
            Certification::Linear(u) => AuditCertificate::Linear(u.rows().to_vec()),
            Certification::NonLinear => AuditCertificate::NonLinear,
            Certification::Inconclusive { nodes } => AuditCertificate::Inconclusive { nodes },
        },
    };
    Ok(report)
}

/// The subspace whose point set is exactly B, if there is one.
pub fn subspace_of(ctx: &BlockingContext, b: &PointSet) -> Result<Option<Subspace>, VerifyError> {
    let space = ctx.space();
    let mut span = space.empty();
    for &p in b.members() {
        let v = space.point(p).coords;
        if !space.contains_vec(&span, &v) {
            span = space.span_with(&span, &v);
        }
    }
    if span.rank() == 0 || space.num_points_of(&span) != b.len() as u64 {
        return Ok(None);
    }
    Ok(Some(span))
}
