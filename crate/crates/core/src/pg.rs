//! Points and subspaces of PG(n, F) in canonical form.
//!
//! A point is stored by its canonical representative (leftmost nonzero
//! coordinate equal to 1) and addressed by its rank in lexicographic order on
//! those representatives. A subspace is the reduced row-echelon basis of its
//! underlying vector space.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf::{Elem, Field};

/// Default cap on the number of canonical forms a single enumeration may yield.
pub const DEFAULT_MAX_CANONICAL: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PgError {
    #[error("ambient mismatch: expected vectors of length {expected}, got {got}")]
    AmbientMismatch { expected: usize, got: usize },
    #[error("{what}: {count} objects exceeds the configured bound {bound}")]
    BoundExceeded {
        what: &'static str,
        count: String,
        bound: u64,
    },
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("invalid dimension: {0}")]
    BadDimension(String),
    #[error("coordinate {value} out of range for a field of order {order}")]
    OutOfRange { value: u64, order: u32 },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Number of (k-1)-subspaces of PG(n-1, q), by the product formula.
/// Returns 0 when `k > n`.
pub fn gaussian_coeff(n: u32, k: u32, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow(n - i) - &one;
        den *= q.pow(i + 1) - &one;
    }
    num / den
}

/// [`gaussian_coeff`] when it fits in a `u64`.
pub fn gaussian_u64(n: u32, k: u32, q: u64) -> Option<u64> {
    gaussian_coeff(n, k, q).to_u64()
}

/// A projective point by canonical coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    pub coords: Vec<Elem>,
}

/// A subspace by its reduced row-echelon basis. Zero rows means the empty
/// subspace (projective dimension -1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    len: usize,
    rows: Vec<Vec<Elem>>,
}

impl Subspace {
    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    /// Vector length, i.e. `n + 1` for a subspace of PG(n, F).
    pub fn ambient_len(&self) -> usize {
        self.len
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Projective dimension.
    pub fn dim(&self) -> i32 {
        self.rows.len() as i32 - 1
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).unwrap())
            .collect()
    }
}

/// Row-reduce in place to RREF and drop zero rows.
pub fn rref(field: &Field, mut rows: Vec<Vec<Elem>>) -> Vec<Vec<Elem>> {
    let Some(len) = rows.first().map(|r| r.len()) else {
        return rows;
    };
    let mut rank = 0;
    for col in 0..len {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = field.inv(rows[rank][col]);
        if inv != 1 {
            for x in rows[rank].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let c = field.neg(row[col]);
            for (x, &pv) in row[col..].iter_mut().zip(&pivot[col..]) {
                *x = field.add(*x, field.mul(c, pv));
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows
}

/// PG(n, F).
#[derive(Debug, Clone)]
pub struct ProjSpace {
    field: Arc<Field>,
    n: u32,
}

impl ProjSpace {
    pub fn new(field: Arc<Field>, n: u32) -> Self {
        ProjSpace { field, n }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Vector length `n + 1`.
    pub fn len(&self) -> usize {
        self.n as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    pub fn num_points(&self) -> u64 {
        gaussian_u64(self.n + 1, 1, self.order() as u64).unwrap_or(u64::MAX)
    }

    fn check_len(&self, got: usize) -> Result<(), PgError> {
        if got != self.len() {
            return Err(PgError::AmbientMismatch {
                expected: self.len(),
                got,
            });
        }
        Ok(())
    }

    fn check_coords(&self, v: &[Elem]) -> Result<(), PgError> {
        self.check_len(v.len())?;
        if let Some(&bad) = v.iter().find(|&&x| x >= self.order()) {
            return Err(PgError::OutOfRange {
                value: bad as u64,
                order: self.order(),
            });
        }
        Ok(())
    }

    /// Scale so the leftmost nonzero entry is 1. Returns false on the zero
    /// vector.
    pub fn canonicalize(&self, v: &mut [Elem]) -> bool {
        let Some(lead) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let c = v[lead];
        if c != 1 {
            let inv = self.field.inv(c);
            for x in v[lead..].iter_mut() {
                *x = self.field.mul(*x, inv);
            }
        }
        true
    }

    /// Rank of a canonical vector.
    #[inline]
    pub fn point_index(&self, v: &[Elem]) -> u32 {
        let q = self.order() as u64;
        let lead = v.iter().position(|&x| x != 0).expect("zero vector");
        let tail_len = v.len() - 1 - lead;
        // Points with a later lead come first: there are (q^tail_len - 1)/(q - 1) of them.
        let mut idx = (q.pow(tail_len as u32) - 1) / (q - 1);
        let mut tail = 0u64;
        for &x in &v[lead + 1..] {
            tail = tail * q + x as u64;
        }
        idx += tail;
        idx as u32
    }

    /// Rank of an arbitrary nonzero vector.
    pub fn index_of(&self, v: &[Elem]) -> Result<u32, PgError> {
        self.check_coords(v)?;
        let mut w = v.to_vec();
        if !self.canonicalize(&mut w) {
            return Err(PgError::ZeroVector);
        }
        Ok(self.point_index(&w))
    }

    pub fn point_into(&self, idx: u32, out: &mut [Elem]) {
        let q = self.order() as u64;
        let len = self.len();
        let mut idx = idx as u64;
        // find the tail length
        let mut tail_len = 0usize;
        let mut block = 1u64;
        while idx >= block {
            idx -= block;
            block *= q;
            tail_len += 1;
        }
        let lead = len - 1 - tail_len;
        out[..lead].iter_mut().for_each(|x| *x = 0);
        out[lead] = 1;
        for j in (lead + 1..len).rev() {
            out[j] = (idx % q) as Elem;
            idx /= q;
        }
    }

    pub fn point(&self, idx: u32) -> ProjPoint {
        let mut coords = vec![0; self.len()];
        self.point_into(idx, &mut coords);
        ProjPoint { coords }
    }

    pub fn enumerate_points(&self, bound: u64) -> Result<Vec<ProjPoint>, PgError> {
        let n = self.num_points();
        if n > bound || n > u32::MAX as u64 {
            return Err(PgError::BoundExceeded {
                what: "points",
                count: n.to_string(),
                bound,
            });
        }
        Ok((0..n as u32).map(|i| self.point(i)).collect())
    }

    pub fn subspace(&self, rows: Vec<Vec<Elem>>) -> Result<Subspace, PgError> {
        for r in &rows {
            self.check_coords(r)?;
        }
        Ok(self.subspace_unchecked(rows))
    }

    pub(crate) fn subspace_unchecked(&self, rows: Vec<Vec<Elem>>) -> Subspace {
        Subspace {
            len: self.len(),
            rows: rref(&self.field, rows),
        }
    }

    pub fn empty(&self) -> Subspace {
        Subspace {
            len: self.len(),
            rows: Vec::new(),
        }
    }

    pub fn whole(&self) -> Subspace {
        let rows = (0..self.len())
            .map(|i| {
                let mut r = vec![0; self.len()];
                r[i] = 1;
                r
            })
            .collect();
        Subspace {
            len: self.len(),
            rows,
        }
    }

    pub fn point_subspace(&self, idx: u32) -> Subspace {
        Subspace {
            len: self.len(),
            rows: vec![self.point(idx).coords],
        }
    }

    pub fn span(&self, parts: &[&Subspace]) -> Result<Subspace, PgError> {
        let mut rows = Vec::new();
        for s in parts {
            self.check_len(s.len)?;
            rows.extend(s.rows.iter().cloned());
        }
        Ok(self.subspace_unchecked(rows))
    }

    /// Span of a subspace and one extra vector.
    pub fn span_with(&self, s: &Subspace, v: &[Elem]) -> Subspace {
        let mut rows = s.rows.clone();
        rows.push(v.to_vec());
        self.subspace_unchecked(rows)
    }

    /// Basis of the annihilator `{y : r·y = 0 for all rows r}`.
    fn annihilator(&self, s: &Subspace) -> Vec<Vec<Elem>> {
        let pivots = s.pivots();
        let f = &self.field;
        (0..self.len())
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut y = vec![0; self.len()];
                y[free] = 1;
                for (row, &pc) in s.rows.iter().zip(&pivots) {
                    y[pc] = f.neg(row[free]);
                }
                y
            })
            .collect()
    }

    pub fn meet(&self, a: &Subspace, b: &Subspace) -> Result<Subspace, PgError> {
        self.check_len(a.len)?;
        self.check_len(b.len)?;
        let mut dual = self.annihilator(a);
        dual.extend(self.annihilator(b));
        let dual = Subspace {
            len: self.len(),
            rows: rref(&self.field, dual),
        };
        Ok(self.subspace_unchecked(self.annihilator(&dual)))
    }

    /// Whether the vector lies in the row space of `s`.
    pub fn contains_vec(&self, s: &Subspace, v: &[Elem]) -> bool {
        let f = &self.field;
        let mut w = v.to_vec();
        for row in &s.rows {
            let pc = row.iter().position(|&x| x != 0).unwrap();
            let c = w[pc];
            if c != 0 {
                let c = f.neg(c);
                for (x, &r) in w.iter_mut().zip(row).skip(pc) {
                    *x = f.add(*x, f.mul(c, r));
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn incident(&self, p: &ProjPoint, s: &Subspace) -> Result<bool, PgError> {
        self.check_len(p.coords.len())?;
        self.check_len(s.len)?;
        Ok(self.contains_vec(s, &p.coords))
    }

    /// Whether `inner ⊆ outer`.
    pub fn contains(&self, outer: &Subspace, inner: &Subspace) -> bool {
        inner.rows.iter().all(|r| self.contains_vec(outer, r))
    }

    /// Calls `f` with the canonical coordinates of every point of `s`.
    pub fn for_each_point_vec(&self, s: &Subspace, mut f: impl FnMut(&[Elem])) {
        let r = s.rows.len();
        if r == 0 {
            return;
        }
        let field = &self.field;
        let q = field.order() as usize;
        let len = self.len();
        // scaled[m][c] = c * row_m
        let scaled: Vec<Vec<Vec<Elem>>> = s
            .rows
            .iter()
            .map(|row| {
                (0..q as Elem)
                    .map(|c| row.iter().map(|&x| field.mul(c, x)).collect())
                    .collect()
            })
            .collect();
        let mut v = vec![0; len];
        let mut digits = vec![0usize; r];
        for lead in 0..r {
            digits.iter_mut().for_each(|d| *d = 0);
            let count = q.pow((r - lead - 1) as u32);
            for _ in 0..count {
                v.copy_from_slice(&s.rows[lead]);
                for m in lead + 1..r {
                    if digits[m] != 0 {
                        for (x, &a) in v.iter_mut().zip(&scaled[m][digits[m]]) {
                            *x = field.add(*x, a);
                        }
                    }
                }
                f(&v);
                for m in (lead + 1..r).rev() {
                    digits[m] += 1;
                    if digits[m] < q {
                        break;
                    }
                    digits[m] = 0;
                }
            }
        }
    }

    pub fn for_each_point(&self, s: &Subspace, mut f: impl FnMut(u32)) {
        self.for_each_point_vec(s, |v| f(self.point_index(v)));
    }

    /// Point indices of `s`, in increasing order.
    pub fn points_of(&self, s: &Subspace) -> Vec<u32> {
        let mut out = Vec::new();
        self.for_each_point(s, |i| out.push(i));
        out.sort_unstable();
        out
    }

    pub fn num_points_of(&self, s: &Subspace) -> u64 {
        gaussian_u64(s.rank() as u32, 1, self.order() as u64).unwrap()
    }

    /// All `d`-dimensional subspaces, ordered by pivot pattern then free entries.
    pub fn subspaces(&self, d: u32) -> Result<SubspaceEnumerator, PgError> {
        SubspaceEnumerator::new(self.order(), self.n, d)
    }

    /// The `d`-subspaces through `s`.
    pub fn subspaces_through(&self, s: &Subspace, d: u32) -> Result<Through, PgError> {
        self.check_len(s.len)?;
        let r = s.rank();
        if d as usize + 1 < r || d > self.n {
            return Err(PgError::BadDimension(format!(
                "no {d}-spaces through a {}-space of PG({}, {})",
                s.dim(),
                self.n,
                self.order()
            )));
        }
        let pivots = s.pivots();
        let complement: Vec<usize> = (0..self.len()).filter(|c| !pivots.contains(c)).collect();
        let inner = if d as usize + 1 == r {
            None
        } else {
            Some(SubspaceEnumerator::new(
                self.order(),
                complement.len() as u32 - 1,
                d - r as u32,
            )?)
        };
        Ok(Through {
            space: self.clone(),
            base: s.clone(),
            complement,
            inner,
        })
    }

    /// The `d`-subspaces contained in `pi`.
    pub fn subspaces_within(&self, pi: &Subspace, d: u32) -> Result<Within, PgError> {
        self.check_len(pi.len)?;
        if d as usize + 1 > pi.rank() {
            return Err(PgError::BadDimension(format!(
                "no {d}-spaces inside a {}-space",
                pi.dim()
            )));
        }
        Ok(Within {
            space: self.clone(),
            pi: pi.clone(),
            inner: SubspaceEnumerator::new(self.order(), pi.rank() as u32 - 1, d)?,
        })
    }

    /// Map a coefficient row w.r.t. the basis of `pi` into ambient coordinates.
    fn combine(&self, pi: &Subspace, coeffs: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut v = vec![0; self.len()];
        for (&c, row) in coeffs.iter().zip(&pi.rows) {
            if c == 0 {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(c, r));
            }
        }
        v
    }

    /// A uniformly random `d`-subspace drawn from a seeded stream.
    pub fn random_subspace(&self, d: u32, rng: &mut impl Rng) -> Subspace {
        let q = self.order();
        loop {
            let rows: Vec<Vec<Elem>> = (0..=d)
                .map(|_| (0..self.len()).map(|_| rng.gen_range(0..q)).collect())
                .collect();
            let s = self.subspace_unchecked(rows);
            if s.rank() == d as usize + 1 {
                return s;
            }
        }
    }

    pub fn random_point(&self, rng: &mut impl Rng) -> u32 {
        rng.gen_range(0..self.num_points() as u32)
    }
}

/// Seeded generator for a `(seed, task)` pair, so samples do not depend on
/// how work is partitioned.
pub fn task_rng(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

#[derive(Debug, Clone)]
struct Cell {
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    start: u64,
}

/// Random-access enumeration of the `d`-subspaces of PG(n, q).
///
/// Cells are the pivot patterns in lexicographic order; inside a cell the free
/// entries (row-major) are read as a base-q number, first entry most
/// significant.
#[derive(Debug, Clone)]
pub struct SubspaceEnumerator {
    q: u32,
    n: u32,
    d: u32,
    cells: Vec<Cell>,
    total: u64,
}

impl SubspaceEnumerator {
    pub fn new(q: u32, n: u32, d: u32) -> Result<Self, PgError> {
        if d > n {
            return Err(PgError::BadDimension(format!(
                "{d}-spaces of PG({n}, {q})"
            )));
        }
        let len = n as usize + 1;
        let r = d as usize + 1;
        let mut cells = Vec::new();
        let mut total: u64 = 0;
        let mut pivots: Vec<usize> = (0..r).collect();
        loop {
            let mut free = Vec::new();
            for (i, &pc) in pivots.iter().enumerate() {
                for c in pc + 1..len {
                    if !pivots.contains(&c) {
                        free.push((i, c));
                    }
                }
            }
            let size = (q as u64).checked_pow(free.len() as u32);
            let next = size.and_then(|s| total.checked_add(s));
            let Some(next) = next else {
                return Err(PgError::BoundExceeded {
                    what: "subspaces",
                    count: gaussian_coeff(n + 1, d + 1, q as u64).to_string(),
                    bound: u64::MAX,
                });
            };
            cells.push(Cell {
                pivots: pivots.clone(),
                free,
                start: total,
            });
            total = next;
            // next combination in lexicographic order
            let mut i = r;
            loop {
                if i == 0 {
                    return Ok(SubspaceEnumerator {
                        q,
                        n,
                        d,
                        cells,
                        total,
                    });
                }
                i -= 1;
                if pivots[i] < len - r + i {
                    pivots[i] += 1;
                    for j in i + 1..r {
                        pivots[j] = pivots[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    /// Sizes of the pivot-pattern cells, in order.
    pub fn cell_sizes(&self) -> Vec<u64> {
        self.cells
            .iter()
            .map(|c| (self.q as u64).pow(c.free.len() as u32))
            .collect()
    }

    /// Fail unless the enumeration fits inside `bound`.
    pub fn check_bound(&self, bound: u64) -> Result<(), PgError> {
        if self.total > bound {
            return Err(PgError::BoundExceeded {
                what: "subspaces",
                count: self.total.to_string(),
                bound,
            });
        }
        Ok(())
    }

    pub fn rows_at(&self, index: u64) -> Vec<Vec<Elem>> {
        assert!(index < self.total, "subspace index out of range");
        let ci = self.cells.partition_point(|c| c.start <= index) - 1;
        let cell = &self.cells[ci];
        let len = self.n as usize + 1;
        let mut rows = vec![vec![0; len]; self.d as usize + 1];
        for (i, &pc) in cell.pivots.iter().enumerate() {
            rows[i][pc] = 1;
        }
        let mut off = index - cell.start;
        for &(i, c) in cell.free.iter().rev() {
            rows[i][c] = (off % self.q as u64) as Elem;
            off /= self.q as u64;
        }
        rows
    }

    pub fn get(&self, index: u64) -> Subspace {
        Subspace {
            len: self.n as usize + 1,
            rows: self.rows_at(index),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Subspace> + '_ {
        (0..self.total).map(move |i| self.get(i))
    }

    /// `count` indices drawn uniformly (with replacement) from a seeded stream.
    pub fn sample_indices(&self, count: u64, seed: u64) -> Vec<u64> {
        let mut rng = task_rng(seed, 0);
        (0..count).map(|_| rng.gen_range(0..self.total)).collect()
    }
}

/// Random-access enumeration of the subspaces through a fixed subspace.
#[derive(Debug, Clone)]
pub struct Through {
    space: ProjSpace,
    base: Subspace,
    complement: Vec<usize>,
    inner: Option<SubspaceEnumerator>,
}

impl Through {
    pub fn len(&self) -> u64 {
        self.inner.as_ref().map_or(1, |e| e.len())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, index: u64) -> Subspace {
        let Some(inner) = &self.inner else {
            assert_eq!(index, 0);
            return self.base.clone();
        };
        let mut rows = self.base.rows.clone();
        for r in inner.rows_at(index) {
            let mut v = vec![0; self.space.len()];
            for (&c, &pos) in r.iter().zip(&self.complement) {
                v[pos] = c;
            }
            rows.push(v);
        }
        self.space.subspace_unchecked(rows)
    }

    pub fn iter(&self) -> impl Iterator<Item = Subspace> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

/// Random-access enumeration of the subspaces inside a fixed subspace.
#[derive(Debug, Clone)]
pub struct Within {
    space: ProjSpace,
    pi: Subspace,
    inner: SubspaceEnumerator,
}

impl Within {
    pub fn len(&self) -> u64 {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn get(&self, index: u64) -> Subspace {
        let rows = self
            .inner
            .rows_at(index)
            .iter()
            .map(|c| self.space.combine(&self.pi, c))
            .collect();
        self.space.subspace_unchecked(rows)
    }

    pub fn iter(&self) -> impl Iterator<Item = Subspace> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

// Text format: coordinates separated by whitespace, subspace rows by ';'.

pub fn format_point(coords: &[Elem]) -> String {
    let mut s = String::new();
    for (i, c) in coords.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{c}").unwrap();
    }
    s
}

pub fn format_subspace(s: &Subspace) -> String {
    s.rows
        .iter()
        .map(|r| format_point(r))
        .collect::<Vec<_>>()
        .join("; ")
}

pub fn parse_point(line: &str) -> Result<Vec<Elem>, PgError> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<Elem>()
                .map_err(|e| PgError::Parse(format!("{t:?}: {e}")))
        })
        .collect()
}

pub fn parse_subspace(space: &ProjSpace, line: &str) -> Result<Subspace, PgError> {
    let rows = line
        .split(';')
        .filter(|r| !r.trim().is_empty())
        .map(parse_point)
        .collect::<Result<Vec<_>, _>>()?;
    space.subspace(rows)
}
