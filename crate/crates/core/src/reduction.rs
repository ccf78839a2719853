//! Field reduction PG(n, q^t) → PG((n+1)t - 1, q) and everything built on the
//! resulting Desarguesian spread: the linear set B(U) of a subspace U, the
//! spread element S(P) of a point, scatteredness, sublines, and a search for
//! a subspace U realising a given point set as a linear set.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::gf::{Elem, Field, FieldError, FieldTower, TowerDescriptor};
use crate::pg::{self, PgError, ProjSpace, Subspace};

pub const SPREAD_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error(transparent)]
    Pg(#[from] PgError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("q = {0} is not a square")]
    NotSquare(u32),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("point index {index} out of range for {points} points")]
    PointOutOfRange { index: u32, points: u64 },
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Which projective space a point set lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ambient {
    pub n: u32,
    pub order: u32,
}

impl Ambient {
    pub fn of(space: &ProjSpace) -> Self {
        Ambient {
            n: space.n(),
            order: space.order(),
        }
    }

    pub fn num_points(&self) -> u64 {
        pg::gaussian_u64(self.n + 1, 1, self.order as u64).unwrap_or(u64::MAX)
    }
}

/// A sorted, duplicate-free set of point indices of a fixed space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    ambient: Ambient,
    members: Vec<u32>,
}

impl PointSet {
    pub fn new(ambient: Ambient, mut members: Vec<u32>) -> Result<Self, ReductionError> {
        members.sort_unstable();
        members.dedup();
        let points = ambient.num_points();
        if let Some(&bad) = members.last().filter(|&&m| m as u64 >= points) {
            return Err(ReductionError::PointOutOfRange { index: bad, points });
        }
        Ok(PointSet { ambient, members })
    }

    /// `members` must already be sorted, deduplicated and in range.
    pub(crate) fn from_sorted(ambient: Ambient, members: Vec<u32>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        PointSet { ambient, members }
    }

    pub fn from_bitset(ambient: Ambient, bits: &BitSet) -> Self {
        PointSet {
            ambient,
            members: bits.iter().collect(),
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: u32) -> bool {
        self.members.binary_search(&p).is_ok()
    }

    pub fn to_bitset(&self) -> BitSet {
        BitSet::from_indices(self.ambient.num_points() as usize, self.members.iter().copied())
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn with(&self, p: u32) -> Result<PointSet, ReductionError> {
        let mut m = self.members.clone();
        m.push(p);
        PointSet::new(self.ambient, m)
    }

    pub fn without(&self, p: u32) -> PointSet {
        PointSet {
            ambient: self.ambient,
            members: self.members.iter().copied().filter(|&m| m != p).collect(),
        }
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet, ReductionError> {
        if self.ambient != other.ambient {
            return Err(ReductionError::AmbientMismatch(format!(
                "{:?} vs {:?}",
                self.ambient, other.ambient
            )));
        }
        let mut m = self.members.clone();
        m.extend_from_slice(&other.members);
        PointSet::new(self.ambient, m)
    }

    pub fn intersection_count(&self, other: &[u32]) -> usize {
        other.iter().filter(|&&p| self.contains(p)).count()
    }

    /// Header line `ambient n=<n> order=<q>` followed by one index per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("ambient n={} order={}\n", self.ambient.n, self.ambient.order);
        for m in &self.members {
            writeln!(s, "{m}").unwrap();
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<PointSet, ReductionError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| ReductionError::Parse("empty point-set file".into()))?;
        let mut n = None;
        let mut order = None;
        for tok in header.split_whitespace().skip(1) {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| ReductionError::Parse(format!("bad header token {tok:?}")))?;
            let v: u32 = v
                .parse()
                .map_err(|_| ReductionError::Parse(format!("bad header value {tok:?}")))?;
            match k {
                "n" => n = Some(v),
                "order" => order = Some(v),
                _ => return Err(ReductionError::Parse(format!("unknown header key {k:?}"))),
            }
        }
        if !header.starts_with("ambient") {
            return Err(ReductionError::Parse("missing ambient header".into()));
        }
        let ambient = Ambient {
            n: n.ok_or_else(|| ReductionError::Parse("header lacks n".into()))?,
            order: order.ok_or_else(|| ReductionError::Parse("header lacks order".into()))?,
        };
        let members = lines
            .map(|l| {
                l.trim()
                    .parse::<u32>()
                    .map_err(|_| ReductionError::Parse(format!("bad point index {l:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        PointSet::new(ambient, members)
    }
}

/// Rough size of a linear set of PG(1, q^t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LineSetKind {
    Empty,
    Point,
    /// q + 1 points, from a line not inside a spread element.
    Subline,
    /// q² + 1 points, from a plane meeting one spread element in a line.
    Pencil,
    /// q² + q + 1 points, from a scattered plane.
    ScatteredPlane,
    FullLine,
    Other,
}

/// Outcome of [`DesarguesianSpread::certify_linear`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certification {
    /// `B(witness)` equals the input set.
    Linear(Subspace),
    /// The search was exhaustive and found nothing.
    NonLinear,
    /// The node budget ran out first.
    Inconclusive { nodes: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Budget(u64),
}

/// The Desarguesian (t-1)-spread of PG((n+1)t - 1, q).
#[derive(Debug, Clone)]
pub struct DesarguesianSpread {
    tower: Arc<FieldTower>,
    n: u32,
    small: ProjSpace,
    big: ProjSpace,
    /// big point index → element (= small point) index
    lookup: Vec<u32>,
    offsets: Vec<u32>,
    members: Vec<u32>,
}

impl DesarguesianSpread {
    pub fn new(tower: Arc<FieldTower>, n: u32) -> Result<Self, ReductionError> {
        Self::with_bound(tower, n, pg::DEFAULT_MAX_CANONICAL)
    }

    pub fn with_bound(tower: Arc<FieldTower>, n: u32, bound: u64) -> Result<Self, ReductionError> {
        let t = tower.t() as usize;
        let small = ProjSpace::new(tower.top().clone(), n);
        let big_n = ((n + 1) * tower.t())
            .checked_sub(1)
            .ok_or_else(|| ReductionError::Unsupported("empty big space".into()))?;
        let big = ProjSpace::new(tower.mid().clone(), big_n);
        let big_points = big.num_points();
        if big_points > bound || big_points > u32::MAX as u64 {
            return Err(PgError::BoundExceeded {
                what: "big-space points",
                count: big_points.to_string(),
                bound,
            }
            .into());
        }
        let mut lookup = vec![0u32; big_points as usize];
        let mut bv = vec![0; big.len()];
        let mut sv = vec![0; small.len()];
        for (i, slot) in lookup.iter_mut().enumerate() {
            big.point_into(i as u32, &mut bv);
            for (j, x) in sv.iter_mut().enumerate() {
                *x = tower.compose_unchecked(&bv[j * t..(j + 1) * t]);
            }
            small.canonicalize(&mut sv);
            *slot = small.point_index(&sv);
        }
        let elements = small.num_points() as usize;
        let mut offsets = vec![0u32; elements + 1];
        for &e in &lookup {
            offsets[e as usize + 1] += 1;
        }
        for i in 0..elements {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut members = vec![0u32; lookup.len()];
        for (i, &e) in lookup.iter().enumerate() {
            members[fill[e as usize] as usize] = i as u32;
            fill[e as usize] += 1;
        }
        Ok(DesarguesianSpread {
            tower,
            n,
            small,
            big,
            lookup,
            offsets,
            members,
        })
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// PG(n, q^t).
    pub fn small(&self) -> &ProjSpace {
        &self.small
    }

    /// PG((n+1)t - 1, q).
    pub fn big(&self) -> &ProjSpace {
        &self.big
    }

    pub fn small_ambient(&self) -> Ambient {
        Ambient::of(&self.small)
    }

    pub fn num_elements(&self) -> usize {
        self.offsets.len() - 1
    }

    /// The element containing a big-space point.
    #[inline]
    pub fn element_of(&self, big_point: u32) -> u32 {
        self.lookup[big_point as usize]
    }

    /// The element containing a big-space point given by coordinates.
    pub fn spread_element_of(&self, coords: &[Elem]) -> Result<u32, ReductionError> {
        Ok(self.element_of(self.big.index_of(coords)?))
    }

    /// Big-space points of S(P), increasing.
    pub fn element_points(&self, small_point: u32) -> &[u32] {
        let i = small_point as usize;
        &self.members[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    /// Write a small-space vector over GF(q) coordinates.
    pub fn to_big(&self, v: &[Elem]) -> Vec<Elem> {
        let t = self.tower.t() as usize;
        let mut out = vec![0; v.len() * t];
        for (j, &x) in v.iter().enumerate() {
            self.tower.decompose_into(x, &mut out[j * t..(j + 1) * t]);
        }
        out
    }

    pub fn to_small(&self, v: &[Elem]) -> Vec<Elem> {
        let t = self.tower.t() as usize;
        v.chunks(t)
            .map(|c| self.tower.compose_unchecked(c))
            .collect()
    }

    /// The rows `ω^j v` (j < t) rewritten over GF(q).
    fn reduce_vector(&self, v: &[Elem]) -> Vec<Vec<Elem>> {
        let top = self.tower.top();
        let omega = self.tower.omega();
        let mut scale = 1;
        (0..self.tower.t())
            .map(|_| {
                let row: Vec<Elem> = v.iter().map(|&x| top.mul(scale, x)).collect();
                scale = top.mul(scale, omega);
                self.to_big(&row)
            })
            .collect()
    }

    /// S(P) as a (t-1)-subspace of the big space.
    pub fn element(&self, small_point: u32) -> Subspace {
        let v = self.small.point(small_point).coords;
        self.big.subspace_unchecked(self.reduce_vector(&v))
    }

    /// The field reduction of a subspace of the small space: the span of the
    /// elements S(P) for P in it.
    pub fn reduce_subspace(&self, s: &Subspace) -> Result<Subspace, ReductionError> {
        if s.ambient_len() != self.small.len() {
            return Err(ReductionError::AmbientMismatch(
                "subspace does not live in the small space".into(),
            ));
        }
        let rows = s.rows().iter().flat_map(|r| self.reduce_vector(r)).collect();
        Ok(self.big.subspace_unchecked(rows))
    }

    fn check_big(&self, u: &Subspace) -> Result<(), ReductionError> {
        if u.ambient_len() != self.big.len() {
            return Err(ReductionError::AmbientMismatch(format!(
                "expected a subspace of PG({}, {})",
                self.big.n(),
                self.big.order()
            )));
        }
        Ok(())
    }

    pub fn linear_set_bits(&self, u: &Subspace, out: &mut BitSet) {
        out.clear();
        self.big.for_each_point(u, |i| {
            out.insert(self.lookup[i as usize] as usize);
        });
    }

    /// B(U): the elements meeting U, as points of the small space.
    pub fn linear_set(&self, u: &Subspace) -> Result<PointSet, ReductionError> {
        self.check_big(u)?;
        let mut m = Vec::new();
        self.big.for_each_point(u, |i| m.push(self.lookup[i as usize]));
        m.sort_unstable();
        m.dedup();
        Ok(PointSet::from_sorted(self.small_ambient(), m))
    }

    /// Element → number of points of U inside it, for elements meeting U.
    pub fn meet_pattern(&self, u: &Subspace) -> Result<BTreeMap<u32, u64>, ReductionError> {
        self.check_big(u)?;
        let mut pattern = BTreeMap::new();
        self.big.for_each_point(u, |i| {
            *pattern.entry(self.lookup[i as usize]).or_insert(0) += 1;
        });
        Ok(pattern)
    }

    /// Every element meets U in at most one point.
    pub fn is_scattered(&self, u: &Subspace) -> Result<bool, ReductionError> {
        Ok(self.linear_set(u)?.len() as u64 == self.big.num_points_of(u))
    }

    /// Sorts a linear set of PG(1, q³) into the known families.
    pub fn classify_line_linear_set(&self, u: &Subspace) -> Result<LineSetKind, ReductionError> {
        if self.n != 1 {
            return Err(ReductionError::Unsupported(
                "line classification needs n = 1".into(),
            ));
        }
        let pattern = self.meet_pattern(u)?;
        let q = self.tower.q() as u64;
        let size = pattern.len() as u64;
        let line_points = q + 1;
        let max_meet = pattern.values().copied().max().unwrap_or(0);
        let lines_met = pattern.values().filter(|&&c| c == line_points).count();
        let kind = match (u.dim(), size) {
            (_, 0) => LineSetKind::Empty,
            (_, 1) => LineSetKind::Point,
            (_, s) if s == self.small.num_points() => LineSetKind::FullLine,
            (1, s) if s == q + 1 && max_meet == 1 => LineSetKind::Subline,
            (2, s) if s == q * q + 1 && lines_met == 1 && max_meet == line_points => {
                LineSetKind::Pencil
            }
            (2, s) if s == q * q + q + 1 && max_meet == 1 => LineSetKind::ScatteredPlane,
            _ => LineSetKind::Other,
        };
        Ok(kind)
    }

    /// Every big point lies in exactly one element and elements have
    /// (q^t - 1)/(q - 1) points each.
    pub fn check_partition(&self) -> bool {
        let q = self.tower.q() as u64;
        let per = (q.pow(self.tower.t()) - 1) / (q - 1);
        let expected_elements = self.small.num_points();
        if self.num_elements() as u64 != expected_elements {
            return false;
        }
        let sizes_ok = (0..self.num_elements() as u32)
            .all(|e| self.element_points(e).len() as u64 == per);
        let total: u64 = (0..self.num_elements() as u32)
            .map(|e| self.element_points(e).len() as u64)
            .sum();
        sizes_ok && total == self.big.num_points()
    }

    /// Whether the span of the given elements is a union of elements.
    pub fn span_is_partitioned(&self, elements: &[u32]) -> bool {
        let parts: Vec<Subspace> = elements.iter().map(|&e| self.element(e)).collect();
        let refs: Vec<&Subspace> = parts.iter().collect();
        let span = self.big.span(&refs).expect("same ambient");
        let pattern = self.meet_pattern(&span).expect("same ambient");
        pattern
            .iter()
            .all(|(&e, &count)| count == self.element_points(e).len() as u64)
    }

    /// Search for U with B(U) = B.
    ///
    /// The search anchors at the first point of S(P) for the least P in B.
    /// Since multiplication by GF(q^t)^* fixes every element and is
    /// transitive on its points, a witness exists iff one exists through
    /// that anchor. From a partial U it picks the least Q in B \ B(U) and
    /// branches over the points of S(Q), pruning as soon as B(U) leaves B.
    pub fn certify_linear(
        &self,
        b: &PointSet,
        mode: SearchMode,
    ) -> Result<Certification, ReductionError> {
        let Some(&first) = b.members().first() else {
            return Ok(Certification::Linear(self.big.empty()));
        };
        self.certify_linear_anchored(b, self.element_points(first)[0], mode)
    }

    pub fn certify_linear_anchored(
        &self,
        b: &PointSet,
        anchor: u32,
        mode: SearchMode,
    ) -> Result<Certification, ReductionError> {
        if b.ambient() != self.small_ambient() {
            return Err(ReductionError::AmbientMismatch(
                "point set is not in the small space".into(),
            ));
        }
        if !b.contains(self.element_of(anchor)) {
            return Err(ReductionError::Unsupported(
                "anchor must lie in S(P) for some P in the set".into(),
            ));
        }
        let mut search = Search {
            spread: self,
            target: b.to_bitset(),
            target_len: b.len(),
            nodes: 0,
            limit: match mode {
                SearchMode::Exhaustive => u64::MAX,
                SearchMode::Budget(n) => n,
            },
            scratch: BitSet::new(self.small.num_points() as usize),
        };
        let start = self.big.point_subspace(anchor);
        Ok(match search.dfs(start) {
            Ok(Some(w)) => Certification::Linear(w),
            Ok(None) => Certification::NonLinear,
            Err(OutOfBudget) => Certification::Inconclusive {
                nodes: search.nodes,
            },
        })
    }

    pub fn export(&self) -> SpreadExport {
        let d = self.tower.descriptor();
        SpreadExport {
            manifest: SpreadManifest {
                p: d.p,
                h: d.h,
                t: d.t,
                n: self.n,
                format_version: SPREAD_FORMAT_VERSION,
            },
            elements: (0..self.num_elements() as u32)
                .map(|e| self.element(e).rows().to_vec())
                .collect(),
        }
    }

    /// Rebuild from an export, checking every element against the rebuilt spread.
    pub fn from_export(e: &SpreadExport) -> Result<Self, ReductionError> {
        if e.manifest.format_version != SPREAD_FORMAT_VERSION {
            return Err(ReductionError::Parse(format!(
                "unsupported spread format version {}",
                e.manifest.format_version
            )));
        }
        let m = &e.manifest;
        let tower = Arc::new(FieldTower::new(m.p, m.h, m.t)?);
        let spread = DesarguesianSpread::new(tower, m.n)?;
        if e.elements.len() != spread.num_elements() {
            return Err(ReductionError::Parse("element count mismatch".into()));
        }
        for (i, rows) in e.elements.iter().enumerate() {
            if spread.element(i as u32).rows() != rows.as_slice() {
                return Err(ReductionError::Parse(format!("element {i} differs")));
            }
        }
        Ok(spread)
    }

    pub fn tower_descriptor(&self) -> TowerDescriptor {
        self.tower.descriptor()
    }
}

struct OutOfBudget;

struct Search<'a> {
    spread: &'a DesarguesianSpread,
    target: BitSet,
    target_len: usize,
    nodes: u64,
    limit: u64,
    scratch: BitSet,
}

impl Search<'_> {
    fn dfs(&mut self, u: Subspace) -> Result<Option<Subspace>, OutOfBudget> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(OutOfBudget);
        }
        self.spread.linear_set_bits(&u, &mut self.scratch);
        if !self.scratch.is_subset(&self.target) {
            return Ok(None);
        }
        if self.scratch.count() == self.target_len {
            return Ok(Some(u));
        }
        let next_point = self
            .target
            .iter()
            .find(|&p| !self.scratch.contains(p as usize))
            .expect("target strictly larger than cover");
        let big = self.spread.big();
        let mut tried: Vec<Subspace> = Vec::new();
        for &y in self.spread.element_points(next_point) {
            let yv = big.point(y).coords;
            if tried.iter().any(|s| big.contains_vec(s, &yv)) {
                continue;
            }
            let next = big.span_with(&u, &yv);
            if let Some(w) = self.dfs(next.clone())? {
                return Ok(Some(w));
            }
            tried.push(next);
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadManifest {
    pub p: u32,
    pub h: u32,
    pub t: u32,
    pub n: u32,
    pub format_version: u32,
}

/// Text export of a spread: a manifest line, then `index: row; row; …` per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpreadExport {
    pub manifest: SpreadManifest,
    pub elements: Vec<Vec<Vec<Elem>>>,
}

impl SpreadExport {
    pub fn to_text(&self) -> String {
        let m = &self.manifest;
        let mut s = format!(
            "spread p={} h={} t={} n={} format-version={}\n",
            m.p, m.h, m.t, m.n, m.format_version
        );
        for (i, rows) in self.elements.iter().enumerate() {
            let body: Vec<String> = rows.iter().map(|r| pg::format_point(r)).collect();
            writeln!(s, "{i}: {}", body.join("; ")).unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let bad = |m: String| ReductionError::Parse(m);
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty spread file".into()))?;
        let mut fields = BTreeMap::new();
        let mut toks = header.split_whitespace();
        if toks.next() != Some("spread") {
            return Err(bad("missing spread header".into()));
        }
        for tok in toks {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| bad(format!("bad header token {tok:?}")))?;
            let v: u32 = v.parse().map_err(|_| bad(format!("bad value in {tok:?}")))?;
            fields.insert(k.to_string(), v);
        }
        let get = |k: &str| {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| ReductionError::Parse(format!("header lacks {k}")))
        };
        let manifest = SpreadManifest {
            p: get("p")?,
            h: get("h")?,
            t: get("t")?,
            n: get("n")?,
            format_version: get("format-version")?,
        };
        let mut elements = Vec::new();
        for (expected, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
            let (idx, body) = line
                .split_once(':')
                .ok_or_else(|| bad(format!("bad element line {line:?}")))?;
            if idx.trim().parse::<usize>().ok() != Some(expected) {
                return Err(bad(format!("element index {idx:?} out of sequence")));
            }
            let rows = body
                .split(';')
                .map(pg::parse_point)
                .collect::<Result<Vec<_>, _>>()?;
            elements.push(rows);
        }
        Ok(SpreadExport { manifest, elements })
    }
}

/// The sublines PG(1, F') of a projective line PG(1, F), where `sub` lists the
/// elements of the subfield F' ⊂ F. Each is returned once, as a sorted list of
/// point indices, in lexicographic order of their three least points.
///
/// A subline is determined by any three of its points: with `c = αa + βb`
/// its points are `b` and `αa + λβb` for λ in F'.
pub fn sublines(line: &ProjSpace, sub: &[Elem]) -> Vec<Vec<u32>> {
    assert_eq!(line.n(), 1, "sublines live on a projective line");
    let f = line.field();
    let n = line.num_points() as u32;
    let coords: Vec<[Elem; 2]> = (0..n)
        .map(|i| {
            let p = line.point(i).coords;
            [p[0], p[1]]
        })
        .collect();
    let mut out = Vec::new();
    let mut pts = Vec::with_capacity(sub.len() + 1);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                subline_through(f, line, &coords, [i, j, k], sub, &mut pts);
                if pts[..3] == [i, j, k] {
                    out.push(pts.clone());
                }
            }
        }
    }
    out
}

fn subline_through(
    f: &Field,
    line: &ProjSpace,
    coords: &[[Elem; 2]],
    frame: [u32; 3],
    sub: &[Elem],
    out: &mut Vec<u32>,
) {
    let [a, b, c] = frame.map(|i| coords[i as usize]);
    let det = f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0]));
    let dinv = f.inv(det);
    let alpha = f.mul(f.sub(f.mul(c[0], b[1]), f.mul(c[1], b[0])), dinv);
    let beta = f.mul(f.sub(f.mul(a[0], c[1]), f.mul(a[1], c[0])), dinv);
    let aa = [f.mul(alpha, a[0]), f.mul(alpha, a[1])];
    let bb = [f.mul(beta, b[0]), f.mul(beta, b[1])];
    out.clear();
    out.push(frame[1]);
    let mut v = [0; 2];
    for &lambda in sub {
        v[0] = f.add(aa[0], f.mul(lambda, bb[0]));
        v[1] = f.add(aa[1], f.mul(lambda, bb[1]));
        line.canonicalize(&mut v);
        out.push(line.point_index(&v));
    }
    out.sort_unstable();
}

/// Number of sublines PG(1, r) of PG(1, Q): (Q³ - Q)/(r³ - r).
pub fn subline_count(big_order: u64, sub_order: u64) -> u64 {
    (big_order.pow(3) - big_order) / (sub_order.pow(3) - sub_order)
}

/// All sublines PG(1, q) of PG(1, q^t).
pub fn enumerate_sublines(tower: &FieldTower, bound: u64) -> Result<Vec<PointSet>, ReductionError> {
    if tower.t() < 2 {
        return Err(ReductionError::Unsupported("sublines need t >= 2".into()));
    }
    let line = ProjSpace::new(tower.top().clone(), 1);
    let count = subline_count(tower.top_order() as u64, tower.q() as u64);
    if count > bound {
        return Err(PgError::BoundExceeded {
            what: "sublines",
            count: count.to_string(),
            bound,
        }
        .into());
    }
    let sub: Vec<Elem> = (0..tower.q()).collect();
    let ambient = Ambient::of(&line);
    Ok(sublines(&line, &sub)
        .into_iter()
        .map(|m| PointSet::from_sorted(ambient, m))
        .collect())
}

/// All Baer sublines PG(1, q√q) of PG(1, q³), q a square.
pub fn enumerate_baer_sublines(
    tower: &FieldTower,
    bound: u64,
) -> Result<Vec<PointSet>, ReductionError> {
    if tower.t() != 3 {
        return Err(ReductionError::Unsupported("Baer sublines need t = 3".into()));
    }
    if !tower.h().is_multiple_of(2) {
        return Err(ReductionError::NotSquare(tower.q()));
    }
    let root = tower.p().pow(tower.h() / 2);
    let baer_order = tower.q() * root;
    let line = ProjSpace::new(tower.top().clone(), 1);
    let count = subline_count(tower.top_order() as u64, baer_order as u64);
    if count > bound {
        return Err(PgError::BoundExceeded {
            what: "Baer sublines",
            count: count.to_string(),
            bound,
        }
        .into());
    }
    let sub = tower.top().subfield(baer_order);
    let ambient = Ambient::of(&line);
    Ok(sublines(&line, &sub)
        .into_iter()
        .map(|m| PointSet::from_sorted(ambient, m))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pg::task_rng;
    use std::collections::HashSet;

    fn spread(p: u32, h: u32, t: u32, n: u32) -> DesarguesianSpread {
        DesarguesianSpread::new(Arc::new(FieldTower::new(p, h, t).unwrap()), n).unwrap()
    }

    #[test]
    fn spread_sizes() {
        let s = spread(2, 1, 3, 1);
        assert_eq!(s.num_elements(), 9);
        assert_eq!(s.big().num_points(), 63);
        assert!(s.check_partition());
        let s = spread(2, 3, 2, 1);
        assert_eq!(s.num_elements(), 65);
        assert_eq!(s.big().num_points(), 585);
        assert!(s.check_partition());
    }

    #[test]
    fn elements_match_lookup() {
        let s = spread(3, 1, 3, 1);
        for e in 0..s.num_elements() as u32 {
            let sub = s.element(e);
            assert_eq!(sub.dim(), 2);
            assert_eq!(s.big().points_of(&sub), s.element_points(e));
            assert_eq!(s.linear_set(&sub).unwrap().members(), &[e]);
            assert!(!s.is_scattered(&sub).unwrap());
        }
        // S is a partition census: each big point exactly once
        let mut seen = vec![0u32; s.big().num_points() as usize];
        for e in 0..s.num_elements() as u32 {
            for &p in s.element_points(e) {
                seen[p as usize] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn points_are_scattered_and_lines_give_sublines() {
        let s = spread(2, 1, 3, 1);
        for p in 0..63 {
            assert!(s.is_scattered(&s.big().point_subspace(p)).unwrap());
        }
        for l in s.big().subspaces(1).unwrap().iter() {
            let b = s.linear_set(&l).unwrap();
            let kind = s.classify_line_linear_set(&l).unwrap();
            match b.len() {
                1 => assert_eq!(kind, LineSetKind::Point),
                3 => assert_eq!(kind, LineSetKind::Subline),
                other => panic!("line gave {other} points"),
            }
        }
    }

    #[test]
    fn scattered_planes_exist_in_pg52() {
        let s = spread(2, 1, 3, 1);
        let planes = s.big().subspaces(2).unwrap();
        assert_eq!(planes.len(), 1395);
        let scattered: Vec<_> = planes
            .iter()
            .filter(|u| s.is_scattered(u).unwrap())
            .collect();
        assert!(!scattered.is_empty());
        for u in &scattered {
            assert_eq!(s.linear_set(u).unwrap().len(), 7);
            assert_eq!(
                s.classify_line_linear_set(u).unwrap(),
                LineSetKind::ScatteredPlane
            );
        }
    }

    #[test]
    fn pencil_classification() {
        let s = spread(3, 1, 3, 1);
        // a line of S(0) plus a point outside
        let e = s.element(0);
        let line = s.big().subspace(e.rows()[..2].to_vec()).unwrap();
        assert_eq!(s.classify_line_linear_set(&line).unwrap(), LineSetKind::Point);
        let outside = s.element_points(5)[0];
        let plane = s.big().span_with(&line, &s.big().point(outside).coords);
        assert_eq!(s.linear_set(&plane).unwrap().len(), 10);
        assert_eq!(s.classify_line_linear_set(&plane).unwrap(), LineSetKind::Pencil);
    }

    #[test]
    fn linear_sets_are_monotone() {
        let s = spread(2, 1, 3, 1);
        let big = s.big();
        let mut rng = task_rng(7, 0);
        for _ in 0..200 {
            let u = big.random_subspace(1, &mut rng);
            let extra = big.random_point(&mut rng);
            let v = big.span_with(&u, &big.point(extra).coords);
            assert!(s.linear_set(&u).unwrap().is_subset(&s.linear_set(&v).unwrap()));
        }
    }

    #[test]
    fn reduce_subspace_of_line() {
        let s = spread(3, 1, 3, 2);
        let line = s.small().subspaces(1).unwrap().get(11);
        let u = s.reduce_subspace(&line).unwrap();
        assert_eq!(u.dim(), 5);
        assert_eq!(
            s.linear_set(&u).unwrap().members(),
            s.small().points_of(&line).as_slice()
        );
    }

    #[test]
    fn subline_counts() {
        let t = FieldTower::new(2, 1, 3).unwrap();
        let subs = enumerate_sublines(&t, 1 << 20).unwrap();
        assert_eq!(subs.len(), 84);
        assert!(subs.iter().all(|s| s.len() == 3));
        let t = FieldTower::new(2, 2, 3).unwrap();
        let subs = enumerate_sublines(&t, 1 << 20).unwrap();
        assert_eq!(subs.len() as u64, subline_count(64, 4));
        assert_eq!(subs.len(), 4368);
        let distinct: HashSet<_> = subs.iter().map(|s| s.members().to_vec()).collect();
        assert_eq!(distinct.len(), subs.len());
        assert!(subs.iter().all(|s| s.len() == 5));
    }

    #[test]
    fn sublines_are_linear_sets_of_lines() {
        // Route two: B(L) over all lines L of PG(5, 3) not inside an element.
        let s = spread(3, 1, 3, 1);
        let from_lines: HashSet<Vec<u32>> = s
            .big()
            .subspaces(1)
            .unwrap()
            .iter()
            .map(|l| s.linear_set(&l).unwrap().members().to_vec())
            .filter(|m| m.len() > 1)
            .collect();
        let from_frames: HashSet<Vec<u32>> = enumerate_sublines(s.tower(), 1 << 20)
            .unwrap()
            .into_iter()
            .map(|p| p.members().to_vec())
            .collect();
        assert_eq!(from_frames.len() as u64, subline_count(27, 3));
        assert_eq!(from_lines, from_frames);
    }

    #[test]
    fn baer_sublines() {
        let t = FieldTower::new(2, 2, 3).unwrap();
        let baer = enumerate_baer_sublines(&t, 1 << 20).unwrap();
        assert_eq!(baer.len(), 520);
        assert!(baer.iter().all(|b| b.len() == 9));
        let t = FieldTower::new(3, 1, 3).unwrap();
        assert_eq!(
            enumerate_baer_sublines(&t, 1 << 20).unwrap_err(),
            ReductionError::NotSquare(3)
        );
    }

    #[test]
    fn certify_single_point_and_random() {
        let s = spread(3, 1, 3, 1);
        let amb = s.small_ambient();
        let b = PointSet::new(amb, vec![7]).unwrap();
        match s.certify_linear(&b, SearchMode::Exhaustive).unwrap() {
            Certification::Linear(u) => {
                assert_eq!(u.dim(), 0);
                assert_eq!(s.linear_set(&u).unwrap(), b);
            }
            other => panic!("{other:?}"),
        }
        let mut rng = task_rng(3, 0);
        for d in 0..4 {
            let u0 = s.big().random_subspace(d, &mut rng);
            let b = s.linear_set(&u0).unwrap();
            let Certification::Linear(w) = s.certify_linear(&b, SearchMode::Exhaustive).unwrap()
            else {
                panic!("no witness");
            };
            assert_eq!(s.linear_set(&w).unwrap(), b);
        }
    }

    #[test]
    fn certify_every_anchor() {
        // Any anchor inside S(P), P in B, admits a witness.
        let s = spread(2, 1, 3, 1);
        let mut rng = task_rng(11, 0);
        let u0 = s.big().random_subspace(2, &mut rng);
        let b = s.linear_set(&u0).unwrap();
        for &p in b.members() {
            for &x in s.element_points(p) {
                let c = s
                    .certify_linear_anchored(&b, x, SearchMode::Exhaustive)
                    .unwrap();
                assert!(matches!(c, Certification::Linear(_)));
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let s = spread(3, 1, 3, 1);
        let b = PointSet::new(s.small_ambient(), (0..27).collect()).unwrap();
        assert_eq!(
            s.certify_linear(&b, SearchMode::Budget(2)).unwrap(),
            Certification::Inconclusive { nodes: 3 }
        );
    }

    #[test]
    fn point_set_text() {
        let b = PointSet::new(Ambient { n: 2, order: 8 }, vec![5, 1, 5, 70]).unwrap();
        assert_eq!(b.members(), &[1, 5, 70]);
        assert_eq!(PointSet::parse_text(&b.to_text()).unwrap(), b);
        assert!(PointSet::new(Ambient { n: 2, order: 8 }, vec![73]).is_err());
        assert!(PointSet::parse_text("ambient n=2\n1\n").is_err());
    }

    #[test]
    fn spread_export_round_trip() {
        let s = spread(2, 1, 3, 1);
        let text = s.export().to_text();
        let parsed = SpreadExport::parse(&text).unwrap();
        assert_eq!(parsed.to_text(), text);
        let rebuilt = DesarguesianSpread::from_export(&parsed).unwrap();
        assert_eq!(rebuilt.num_elements(), 9);
        let mut broken = parsed.clone();
        broken.elements[0].swap(0, 1);
        assert!(DesarguesianSpread::from_export(&broken).is_err());
    }
}
