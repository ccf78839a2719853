//! Blocking-set predicates and intersection diagnostics in PG(n, q^t).

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::gf::{Elem, FieldTower};
use crate::pg::{self, PgError, ProjSpace, Subspace, SubspaceEnumerator};
use crate::reduction::{Ambient, DesarguesianSpread, PointSet, ReductionError};

pub const DEFAULT_OFFENDER_CAP: usize = 16;
/// Default cap on the number of subspaces a scan may visit.
pub const DEFAULT_SCAN_BOUND: u64 = 50_000_000;

const CHUNK: u64 = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockingError {
    #[error(transparent)]
    Pg(#[from] PgError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("need 1 <= k <= n, got n = {n}, k = {k}")]
    BadIndex { n: u32, k: u32 },
    #[error("point set lives in PG({}, {}), context is PG({}, {})", .got.n, .got.order, .expected.n, .expected.order)]
    AmbientMismatch { expected: Ambient, got: Ambient },
    #[error("the set is not a {k}-blocking set")]
    NotBlocking { k: u32 },
    #[error("point {0} is not in the set")]
    NotInSet(u32),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Ambient PG(n, q^t) together with the blocking index k.
#[derive(Debug, Clone)]
pub struct BlockingContext {
    tower: Arc<FieldTower>,
    space: ProjSpace,
    k: u32,
    bound: u64,
}

/// Scan settings shared by [`BlockingContext::spectrum`] and friends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    pub bound: u64,
    pub offender_cap: usize,
    /// When the full scan exceeds `bound`, draw this many seeded samples
    /// instead of failing.
    pub sample: Option<Sample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub count: u64,
    pub seed: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            bound: DEFAULT_SCAN_BOUND,
            offender_cap: DEFAULT_OFFENDER_CAP,
            sample: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Offender {
    pub size: u64,
    pub index: u64,
    pub subspace: String,
}

/// Intersection sizes of a point set with the d-spaces of the ambient space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub n: u32,
    pub order: u32,
    pub d: u32,
    pub set_size: u64,
    pub condition: Option<Condition>,
    /// intersection size → number of d-spaces
    pub histogram: BTreeMap<u64, u64>,
    pub total: u64,
    pub exhaustive: bool,
    pub seed: Option<u64>,
    /// Least-index witnesses per offending size, at most the cap for each.
    pub offenders: Vec<Offender>,
    /// Exact number of offending d-spaces scanned.
    pub offender_count: u64,
}

/// Which intersection sizes are acceptable in a residue scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// size ≡ 0 or 1 (mod m)
    ZeroOrOne(u32),
    /// size ≡ 1 (mod m)
    One(u32),
}

impl Condition {
    pub fn accepts(&self, size: u64) -> bool {
        match *self {
            Condition::ZeroOrOne(m) => size % m as u64 <= 1,
            Condition::One(m) => size % m as u64 == 1 % m as u64,
        }
    }
}

impl SpectrumReport {
    /// Every scanned d-space satisfied the condition.
    pub fn mod_ok(&self) -> bool {
        self.offender_count == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceClass {
    Small,
    Large,
    /// The count falls in the closed gap between the thresholds.
    Neither,
    /// Both strict comparisons hold; only possible when the thresholds cross.
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecantCensus {
    pub point: u32,
    pub lines: u64,
    /// |line ∩ B| → number of lines through the point
    pub histogram: BTreeMap<u64, u64>,
    pub full_lines: u64,
    pub sublines: u64,
    /// (q√q+1)-secants, present only when q is a square.
    pub baer: Option<u64>,
}

impl SecantCensus {
    /// Σ (size - 1) over the lines through the point; should equal |B| - 1.
    pub fn conservation_sum(&self) -> u64 {
        self.histogram.iter().map(|(&s, &c)| (s - 1) * c).sum()
    }
}

/// Counts |S ∩ B| for subspaces S of one space.
pub(crate) struct Counter<'a> {
    space: &'a ProjSpace,
    bits: BitSet,
    coords: Vec<Vec<Elem>>,
}

impl<'a> Counter<'a> {
    pub(crate) fn new(space: &'a ProjSpace, b: &PointSet) -> Self {
        Counter {
            space,
            bits: b.to_bitset(),
            coords: b.members().iter().map(|&p| space.point(p).coords).collect(),
        }
    }

    pub(crate) fn count(&self, s: &Subspace) -> u64 {
        let points = self.space.num_points_of(s);
        if points <= (self.coords.len() * s.rank().max(1)) as u64 {
            let mut c = 0;
            self.space.for_each_point(s, |p| {
                if self.bits.contains(p as usize) {
                    c += 1;
                }
            });
            c
        } else {
            self.coords
                .iter()
                .filter(|v| self.space.contains_vec(s, v))
                .count() as u64
        }
    }
}

#[derive(Default)]
struct Partial {
    histogram: BTreeMap<u64, u64>,
    offenders: BTreeMap<u64, Vec<u64>>,
    offender_count: u64,
}

impl Partial {
    fn merge(mut self, other: Partial, cap: usize) -> Partial {
        for (s, c) in other.histogram {
            *self.histogram.entry(s).or_insert(0) += c;
        }
        for (s, mut v) in other.offenders {
            let e = self.offenders.entry(s).or_default();
            e.append(&mut v);
            e.sort_unstable();
            e.dedup();
            e.truncate(cap);
        }
        self.offender_count += other.offender_count;
        self
    }
}

/// Scan the given subspace indices in parallel chunks. `anomalous` marks
/// sizes whose witnesses are kept.
fn scan_indices(
    enumer: &SubspaceEnumerator,
    indices: &IndexSource,
    counter: &Counter,
    cap: usize,
    anomalous: impl Fn(u64) -> bool + Sync,
) -> Partial {
    let len = indices.len();
    let chunks = len.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut part = Partial::default();
            for pos in c * CHUNK..((c + 1) * CHUNK).min(len) {
                let idx = indices.get(pos);
                let size = counter.count(&enumer.get(idx));
                *part.histogram.entry(size).or_insert(0) += 1;
                if anomalous(size) {
                    part.offender_count += 1;
                    let e = part.offenders.entry(size).or_default();
                    if e.len() < cap || e.last().is_some_and(|&l| idx < l) {
                        e.push(idx);
                        e.sort_unstable();
                        e.dedup();
                        e.truncate(cap);
                    }
                }
            }
            part
        })
        .reduce(Partial::default, |a, b| a.merge(b, cap))
}

enum IndexSource {
    All(u64),
    Sampled(Vec<u64>),
}

impl IndexSource {
    fn len(&self) -> u64 {
        match self {
            IndexSource::All(n) => *n,
            IndexSource::Sampled(v) => v.len() as u64,
        }
    }

    fn get(&self, pos: u64) -> u64 {
        match self {
            IndexSource::All(_) => pos,
            IndexSource::Sampled(v) => v[pos as usize],
        }
    }
}

/// Exact thresholds (small, large) for an (n-k+s)-space: a space is small
/// below `q^{3s} + q^{3s-1} + q^{3s-2} + 3q^{3s-3}` and large above
/// `q^{3s+1} - q^{3s-1} - q^{3s-2} - 3q^{3s-3}`.
pub fn space_thresholds(q: u64, s: u32) -> (BigUint, BigUint) {
    assert!(s >= 1, "s must be positive");
    let q = BigUint::from(q);
    let pw = |e: u32| q.pow(e);
    let small = pw(3 * s) + pw(3 * s - 1) + pw(3 * s - 2) + pw(3 * s - 3) * 3u32;
    let large = pw(3 * s + 1) - pw(3 * s - 1) - pw(3 * s - 2) - pw(3 * s - 3) * 3u32;
    (small, large)
}

pub fn classify_count(count: u64, q: u64, s: u32) -> SpaceClass {
    let (small, large) = space_thresholds(q, s);
    let c = BigUint::from(count);
    match (c < small, c > large) {
        (true, true) => SpaceClass::Both,
        (true, false) => SpaceClass::Small,
        (false, true) => SpaceClass::Large,
        (false, false) => SpaceClass::Neither,
    }
}

impl BlockingContext {
    pub fn new(tower: Arc<FieldTower>, n: u32, k: u32) -> Result<Self, BlockingError> {
        if k == 0 || k > n {
            return Err(BlockingError::BadIndex { n, k });
        }
        let space = ProjSpace::new(tower.top().clone(), n);
        Ok(BlockingContext {
            tower,
            space,
            k,
            bound: DEFAULT_SCAN_BOUND,
        })
    }

    pub fn with_bound(mut self, bound: u64) -> Self {
        self.bound = bound;
        self
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn space(&self) -> &ProjSpace {
        &self.space
    }

    pub fn n(&self) -> u32 {
        self.space.n()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Order of the ambient field GF(q^t).
    pub fn order(&self) -> u64 {
        self.space.order() as u64
    }

    pub fn ambient(&self) -> Ambient {
        Ambient::of(&self.space)
    }

    fn check(&self, b: &PointSet) -> Result<(), BlockingError> {
        if b.ambient() != self.ambient() {
            return Err(BlockingError::AmbientMismatch {
                expected: self.ambient(),
                got: b.ambient(),
            });
        }
        Ok(())
    }

    pub fn blocking_dim(&self) -> u32 {
        self.n() - self.k
    }

    /// `None` when every (n-k)-space meets B, otherwise the least-index
    /// (n-k)-space missing it.
    pub fn blocking_witness(&self, b: &PointSet) -> Result<Option<Subspace>, BlockingError> {
        self.check(b)?;
        let enumer = self.space.subspaces(self.blocking_dim())?;
        enumer.check_bound(self.bound)?;
        let counter = Counter::new(&self.space, b);
        let hit = (0..enumer.len())
            .into_par_iter()
            .find_first(|&i| counter.count(&enumer.get(i)) == 0);
        Ok(hit.map(|i| enumer.get(i)))
    }

    pub fn is_k_blocking(&self, b: &PointSet) -> Result<bool, BlockingError> {
        Ok(self.blocking_witness(b)?.is_none())
    }

    /// An (n-k)-space meeting B exactly in P, if any.
    pub fn tangent_space(&self, b: &PointSet, p: u32) -> Result<Option<Subspace>, BlockingError> {
        self.check(b)?;
        if !b.contains(p) {
            return Err(BlockingError::NotInSet(p));
        }
        let counter = Counter::new(&self.space, b);
        self.tangent_with(&counter, p)
    }

    fn tangent_with(&self, counter: &Counter, p: u32) -> Result<Option<Subspace>, BlockingError> {
        let through = self
            .space
            .subspaces_through(&self.space.point_subspace(p), self.blocking_dim())?;
        if through.len() > self.bound {
            return Err(PgError::BoundExceeded {
                what: "subspaces through a point",
                count: through.len().to_string(),
                bound: self.bound,
            }
            .into());
        }
        let found = through.iter().find(|s| counter.count(s) == 1);
        Ok(found)
    }

    pub fn tangent_space_exists(&self, b: &PointSet, p: u32) -> Result<bool, BlockingError> {
        Ok(self.tangent_space(b, p)?.is_some())
    }

    fn require_blocking(&self, b: &PointSet) -> Result<(), BlockingError> {
        if !self.is_k_blocking(b)? {
            return Err(BlockingError::NotBlocking { k: self.k });
        }
        Ok(())
    }

    /// Minimality via tangent spaces: every point of B has one.
    pub fn is_minimal_by_tangents(&self, b: &PointSet) -> Result<bool, BlockingError> {
        self.require_blocking(b)?;
        let counter = Counter::new(&self.space, b);
        let results: Vec<Result<bool, BlockingError>> = b
            .members()
            .par_iter()
            .map(|&p| Ok(self.tangent_with(&counter, p)?.is_some()))
            .collect();
        for r in results {
            if !r? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Minimality by definition: removing any single point breaks coverage.
    pub fn is_minimal_by_removal(&self, b: &PointSet) -> Result<bool, BlockingError> {
        self.require_blocking(b)?;
        for &p in b.members() {
            if self.is_k_blocking(&b.without(p))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_minimal(&self, b: &PointSet) -> Result<bool, BlockingError> {
        self.is_minimal_by_tangents(b)
    }

    /// |B| < 3(Q^k + 1)/2 with Q the ambient field order, compared exactly.
    pub fn is_small(&self, b: &PointSet) -> bool {
        let qk = BigUint::from(self.order()).pow(self.k);
        BigUint::from(2 * b.len() as u64) < (qk + 1u32) * 3u32
    }

    /// |B| ≤ 2Q^k and every (n-k)-space meets B in 1 mod p points.
    pub fn minimality_criterion(&self, b: &PointSet) -> Result<bool, BlockingError> {
        self.check(b)?;
        let qk = BigUint::from(self.order()).pow(self.k);
        if BigUint::from(b.len() as u64) > qk * 2u32 {
            return Ok(false);
        }
        let p = self.tower.p() as u64;
        let enumer = self.space.subspaces(self.blocking_dim())?;
        enumer.check_bound(self.bound)?;
        let counter = Counter::new(&self.space, b);
        Ok((0..enumer.len())
            .into_par_iter()
            .all(|i| counter.count(&enumer.get(i)) % p == 1))
    }

    /// Intersection sizes of B with every d-space. Sizes rejected by the
    /// condition are offenders.
    pub fn spectrum(
        &self,
        b: &PointSet,
        d: u32,
        condition: Option<Condition>,
        opts: &ScanOptions,
    ) -> Result<SpectrumReport, BlockingError> {
        self.check(b)?;
        let enumer = self.space.subspaces(d)?;
        let (indices, exhaustive, seed) = if enumer.len() <= opts.bound {
            (IndexSource::All(enumer.len()), true, None)
        } else if let Some(s) = opts.sample {
            (
                IndexSource::Sampled(enumer.sample_indices(s.count, s.seed)),
                false,
                Some(s.seed),
            )
        } else {
            enumer.check_bound(opts.bound)?;
            unreachable!()
        };
        let counter = Counter::new(&self.space, b);
        let anomalous = |size: u64| condition.is_some_and(|c| !c.accepts(size));
        let part = scan_indices(&enumer, &indices, &counter, opts.offender_cap, anomalous);
        let offenders = part
            .offenders
            .iter()
            .flat_map(|(&size, idx)| {
                let enumer = &enumer;
                idx.iter().map(move |&index| Offender {
                    size,
                    index,
                    subspace: pg::format_subspace(&enumer.get(index)),
                })
            })
            .collect();
        Ok(SpectrumReport {
            n: self.n(),
            order: self.space.order(),
            d,
            set_size: b.len() as u64,
            condition,
            total: part.histogram.values().sum(),
            histogram: part.histogram,
            exhaustive,
            seed,
            offenders,
            offender_count: part.offender_count,
        })
    }

    /// Whether every d-space meets B in 0 or 1 points mod m.
    pub fn mod_profile(
        &self,
        b: &PointSet,
        d: u32,
        m: u32,
        opts: &ScanOptions,
    ) -> Result<SpectrumReport, BlockingError> {
        self.spectrum(b, d, Some(Condition::ZeroOrOne(m)), opts)
    }

    /// Whether every (n-k)-space meets B in 1 mod m points.
    pub fn one_mod_scan(
        &self,
        b: &PointSet,
        m: u32,
        opts: &ScanOptions,
    ) -> Result<SpectrumReport, BlockingError> {
        self.spectrum(b, self.blocking_dim(), Some(Condition::One(m)), opts)
    }

    pub fn intersection_count(&self, b: &PointSet, s: &Subspace) -> Result<u64, BlockingError> {
        self.check(b)?;
        if s.ambient_len() != self.space.len() {
            return Err(BlockingError::Dimension("subspace of another space".into()));
        }
        Ok(Counter::new(&self.space, b).count(s))
    }

    /// Large/small classification of an (n-k+s)-space, with q the subfield
    /// order of the tower (not the ambient order).
    pub fn classify_space(&self, b: &PointSet, s: &Subspace) -> Result<SpaceClass, BlockingError> {
        let dim = s.dim();
        let sv = dim - self.blocking_dim() as i32;
        if sv <= 0 || sv >= self.k as i32 {
            return Err(BlockingError::Dimension(format!(
                "a {dim}-space is not an (n-k+s)-space with 0 < s < k = {}",
                self.k
            )));
        }
        let count = self.intersection_count(b, s)?;
        Ok(classify_count(count, self.tower.q() as u64, sv as u32))
    }

    /// Sizes of the secants of B through one of its points.
    pub fn secant_census(&self, b: &PointSet, p: u32) -> Result<SecantCensus, BlockingError> {
        self.check(b)?;
        if !b.contains(p) {
            return Err(BlockingError::NotInSet(p));
        }
        let counter = Counter::new(&self.space, b);
        let lines = self.space.subspaces_through(&self.space.point_subspace(p), 1)?;
        let mut histogram = BTreeMap::new();
        for l in lines.iter() {
            *histogram.entry(counter.count(&l)).or_insert(0u64) += 1;
        }
        let q = self.tower.q() as u64;
        let get = |s: u64| histogram.get(&s).copied().unwrap_or(0);
        let baer = self.tower.h().is_multiple_of(2)
            .then(|| get(q * (self.tower.p() as u64).pow(self.tower.h() / 2) + 1));
        Ok(SecantCensus {
            point: p,
            lines: lines.len(),
            full_lines: get(self.order() + 1),
            sublines: get(q + 1),
            baer,
            histogram,
        })
    }
}

/// With B(U1) and B(U2) inside B, whether B(⟨U1, U2⟩) is too.
pub fn span_closure_check(
    spread: &DesarguesianSpread,
    b: &PointSet,
    u1: &Subspace,
    u2: &Subspace,
) -> Result<bool, BlockingError> {
    let b1 = spread.linear_set(u1)?;
    let b2 = spread.linear_set(u2)?;
    if b.ambient() != spread.small_ambient() {
        return Err(BlockingError::AmbientMismatch {
            expected: spread.small_ambient(),
            got: b.ambient(),
        });
    }
    if !b1.is_subset(b) || !b2.is_subset(b) {
        return Err(BlockingError::Precondition(
            "B(U1) and B(U2) must lie in B".into(),
        ));
    }
    let span = spread.big().span(&[u1, u2])?;
    Ok(spread.linear_set(&span)?.is_subset(b))
}
