//! Exact arithmetic in a tower of finite fields GF(p) ⊂ GF(q) ⊂ GF(q^t).
//!
//! Every element is an index into a fixed enumeration of its field. For a
//! field built as `base[x]/(f)` the index of `c_0 + c_1 x + … + c_{d-1} x^{d-1}`
//! is `c_0 + c_1 r + … + c_{d-1} r^{d-1}` where `r` is the base order and each
//! `c_j` is itself a base index. Two consequences are used throughout:
//!
//! - the embedding of a subfield level is the identity on indices, and
//! - decomposing a top-level element over GF(q) is reading its base-q digits
//!   (the basis is `1, ω, …, ω^{t-1}`).
//!
//! Element order is numeric order on indices, i.e. lexicographic on the
//! prime-field coefficient vectors read from the highest degree down.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An element of some level of a tower, as a bare index.
pub type Elem = u32;

/// Default cap on the order of the top field.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

/// Fields up to this order get log/antilog tables.
const TABLE_LIMIT: u32 = 1 << 16;

/// Fields up to this order with odd characteristic get a full addition table.
const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degrees must be at least 1 (got h={h}, t={t})")]
    ZeroDegree { h: u32, t: u32 },
    #[error("field order {p}^{degree} exceeds the configured bound {bound}")]
    TooLarge { p: u64, degree: u32, bound: u64 },
    #[error("internal error: no irreducible polynomial of degree {degree} over GF({base})")]
    NoIrreducible { base: u32, degree: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("descriptor moduli differ from the canonical ones")]
    ModulusMismatch,
    #[error("operands live at different levels ({0:?} vs {1:?})")]
    LevelMismatch(Level, Level),
    #[error("element {value} out of range for a field of order {order}")]
    OutOfRange { value: u64, order: u32 },
    #[error("expected {expected} subfield coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },
}

#[derive(Debug, Clone)]
enum MulRepr {
    Prime,
    Tables { exp: Vec<Elem>, log: Vec<u32> },
    Poly { base: Box<Field>, modulus: Vec<Elem> },
}

/// A finite field GF(p^degree) with index-encoded elements.
#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    degree: u32,
    order: u32,
    add_table: Option<Vec<Elem>>,
    mul: MulRepr,
}

impl Field {
    /// The prime field GF(p). `p` must be prime.
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        let mut f = Field {
            p,
            degree: 1,
            order: p,
            add_table: None,
            mul: MulRepr::Prime,
        };
        f.build_add_table();
        Ok(f)
    }

    /// `base[x]/(modulus)`, where `modulus` is monic (low-to-high, leading 1
    /// included) and irreducible over `base`.
    pub fn extension(base: &Field, modulus: &[Elem]) -> Self {
        let ext_degree = (modulus.len() - 1) as u32;
        if ext_degree == 1 {
            // base[x]/(x - a) is base itself.
            return base.clone();
        }
        let order = base.order.pow(ext_degree);
        let mut f = Field {
            p: base.p,
            degree: base.degree * ext_degree,
            order,
            add_table: None,
            mul: MulRepr::Poly {
                base: Box::new(base.clone()),
                modulus: modulus.to_vec(),
            },
        };
        f.build_add_table();
        if order <= TABLE_LIMIT {
            f.build_log_tables();
        }
        f
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order
    }

    fn build_add_table(&mut self) {
        if self.p == 2 || self.degree == 1 || self.order > ADD_TABLE_LIMIT {
            return;
        }
        let n = self.order as usize;
        let mut table = vec![0; n * n];
        for a in 0..self.order {
            for b in 0..self.order {
                table[a as usize * n + b as usize] = self.add_digits(a, b);
            }
        }
        self.add_table = Some(table);
    }

    fn build_log_tables(&mut self) {
        let n = self.order;
        let group = (n - 1) as usize;
        let mut exp = vec![0; 2 * group];
        let mut log = vec![0; n as usize];
        'search: for g in 2..n {
            let mut x = 1;
            for (i, slot) in exp.iter_mut().take(group).enumerate() {
                if i > 0 && x == 1 {
                    continue 'search;
                }
                *slot = x;
                x = self.mul(x, g);
            }
            if x != 1 {
                continue;
            }
            for i in 0..group {
                exp[i + group] = exp[i];
                log[exp[i] as usize] = i as u32;
            }
            self.mul = MulRepr::Tables { exp, log };
            return;
        }
        // GF(2)-like degenerate sizes never reach here; order >= 4 always has
        // a primitive element >= 2.
        unreachable!("no primitive element in GF({n})");
    }

    fn add_digits(&self, mut a: Elem, mut b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p;
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        if self.degree == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        match &self.add_table {
            Some(t) => t[a as usize * self.order as usize + b as usize],
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let p = self.p;
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.mul {
            MulRepr::Prime => ((a as u64 * b as u64) % self.p as u64) as Elem,
            MulRepr::Tables { exp, log } => exp[(log[a as usize] + log[b as usize]) as usize],
            MulRepr::Poly { base, modulus } => poly_mulmod(base, modulus, a, b),
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        if let MulRepr::Tables { exp, log } = &self.mul {
            if a == 0 {
                return if e == 0 { 1 } else { 0 };
            }
            let group = (self.order - 1) as u64;
            return exp[((log[a as usize] as u64 * (e % group)) % group) as usize];
        }
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero; use [`Field::try_inv`] for a
    /// checked version.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.try_inv(a).expect("inverse of zero")
    }

    pub fn try_inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.mul {
            MulRepr::Tables { exp, log } => {
                let group = self.order - 1;
                exp[((group - log[a as usize]) % group) as usize]
            }
            _ => self.pow(a, self.order as u64 - 2),
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.try_inv(b)?))
    }

    /// The elements fixed by `x -> x^sub_order`, i.e. the subfield of that
    /// order, in increasing index order.
    pub fn subfield(&self, sub_order: u32) -> Vec<Elem> {
        self.elements()
            .filter(|&x| self.pow(x, sub_order as u64) == x)
            .collect()
    }
}

// Polynomial helpers over a base field. Polynomials are coefficient vectors,
// low degree first.

fn digits(mut x: Elem, radix: u32, len: usize) -> Vec<Elem> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = x % radix;
        x /= radix;
    }
    out
}

fn undigits(ds: &[Elem], radix: u32) -> Elem {
    ds.iter().rev().fold(0, |acc, &d| acc * radix + d)
}

fn poly_mulmod(base: &Field, modulus: &[Elem], a: Elem, b: Elem) -> Elem {
    let d = modulus.len() - 1;
    let r = base.order;
    let a = digits(a, r, d);
    let b = digits(b, r, d);
    let mut prod = vec![0; 2 * d - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = base.add(prod[i + j], base.mul(x, y));
        }
    }
    for i in (d..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        for (j, &m) in modulus.iter().enumerate().take(d) {
            let k = i - d + j;
            prod[k] = base.sub(prod[k], base.mul(c, m));
        }
        prod[i] = 0;
    }
    undigits(&prod[..d], r)
}

/// Remainder of `num` divided by the monic `den`.
fn poly_rem(base: &Field, num: &[Elem], den: &[Elem]) -> Vec<Elem> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    while rem.len() > dd {
        let c = *rem.last().unwrap();
        let shift = rem.len() - 1 - dd;
        if c != 0 {
            for (j, &m) in den.iter().enumerate() {
                rem[shift + j] = base.sub(rem[shift + j], base.mul(c, m));
            }
        }
        rem.pop();
    }
    rem
}

/// Irreducibility of a monic polynomial by trial division with every monic
/// polynomial of degree at most half its degree.
pub fn is_irreducible(base: &Field, poly: &[Elem]) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    let r = base.order as u64;
    for fd in 1..=deg / 2 {
        for code in 0..r.pow(fd as u32) {
            let mut factor = digits(code as Elem, base.order, fd);
            factor.push(1);
            if poly_rem(base, poly, &factor).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically least monic irreducible polynomial of the given degree,
/// comparing coefficient vectors `(c_0, c_1, …)` with `c_0` most significant.
pub fn least_irreducible(base: &Field, degree: u32) -> Result<Vec<Elem>, FieldError> {
    let r = base.order as u64;
    let d = degree as usize;
    for code in 0..r.pow(degree) {
        // c_0 is the most significant digit of `code`.
        let mut poly: Vec<Elem> = digits(code as Elem, base.order, d);
        poly.reverse();
        poly.push(1);
        if is_irreducible(base, &poly) {
            return Ok(poly);
        }
    }
    Err(FieldError::NoIrreducible {
        base: base.order,
        degree,
    })
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Level of an element inside a tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    Prime,
    Mid,
    Top,
}

/// An element tagged with its tower level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub level: Level,
    pub value: Elem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Serializable description of a tower.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDescriptor {
    pub p: u32,
    pub h: u32,
    pub t: u32,
    pub modulus_mid: Vec<u32>,
    pub modulus_top: Vec<u32>,
}

/// The chain GF(p) ⊂ GF(q) ⊂ GF(q^t), q = p^h.
#[derive(Debug, Clone)]
pub struct FieldTower {
    p: u32,
    h: u32,
    t: u32,
    modulus_mid: Vec<Elem>,
    modulus_top: Vec<Elem>,
    prime: Arc<Field>,
    mid: Arc<Field>,
    top: Arc<Field>,
}

impl FieldTower {
    pub fn new(p: u32, h: u32, t: u32) -> Result<Self, FieldError> {
        Self::with_bound(p, h, t, DEFAULT_MAX_ORDER)
    }

    pub fn with_bound(p: u32, h: u32, t: u32, max_order: u64) -> Result<Self, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if h == 0 || t == 0 {
            return Err(FieldError::ZeroDegree { h, t });
        }
        let degree = h.checked_mul(t).ok_or(FieldError::TooLarge {
            p: p as u64,
            degree: u32::MAX,
            bound: max_order,
        })?;
        let too_large = FieldError::TooLarge {
            p: p as u64,
            degree,
            bound: max_order,
        };
        match (p as u64).checked_pow(degree) {
            Some(o) if o <= max_order && o <= u32::MAX as u64 => {}
            _ => return Err(too_large),
        }
        let prime = Field::prime(p)?;
        let modulus_mid = least_irreducible(&prime, h)?;
        let mid = Field::extension(&prime, &modulus_mid);
        let modulus_top = least_irreducible(&mid, t)?;
        let top = Field::extension(&mid, &modulus_top);
        Ok(FieldTower {
            p,
            h,
            t,
            modulus_mid,
            modulus_top,
            prime: Arc::new(prime),
            mid: Arc::new(mid),
            top: Arc::new(top),
        })
    }

    pub fn from_descriptor(d: &TowerDescriptor) -> Result<Self, FieldError> {
        let tower = Self::new(d.p, d.h, d.t)?;
        if tower.modulus_mid != d.modulus_mid || tower.modulus_top != d.modulus_top {
            return Err(FieldError::ModulusMismatch);
        }
        Ok(tower)
    }

    pub fn descriptor(&self) -> TowerDescriptor {
        TowerDescriptor {
            p: self.p,
            h: self.h,
            t: self.t,
            modulus_mid: self.modulus_mid.clone(),
            modulus_top: self.modulus_top.clone(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn h(&self) -> u32 {
        self.h
    }
    pub fn t(&self) -> u32 {
        self.t
    }
    /// q = p^h.
    pub fn q(&self) -> u32 {
        self.mid.order
    }
    /// q^t.
    pub fn top_order(&self) -> u32 {
        self.top.order
    }
    pub fn modulus_mid(&self) -> &[Elem] {
        &self.modulus_mid
    }
    pub fn modulus_top(&self) -> &[Elem] {
        &self.modulus_top
    }
    pub fn prime(&self) -> &Arc<Field> {
        &self.prime
    }
    pub fn mid(&self) -> &Arc<Field> {
        &self.mid
    }
    pub fn top(&self) -> &Arc<Field> {
        &self.top
    }

    pub fn field(&self, level: Level) -> &Field {
        match level {
            Level::Prime => &self.prime,
            Level::Mid => &self.mid,
            Level::Top => &self.top,
        }
    }

    pub fn element(&self, level: Level, value: u64) -> Result<FieldElement, FieldError> {
        let order = self.field(level).order;
        if value >= order as u64 {
            return Err(FieldError::OutOfRange { value, order });
        }
        Ok(FieldElement {
            level,
            value: value as Elem,
        })
    }

    pub fn binary(
        &self,
        a: FieldElement,
        b: FieldElement,
        op: BinOp,
    ) -> Result<FieldElement, FieldError> {
        if a.level != b.level {
            return Err(FieldError::LevelMismatch(a.level, b.level));
        }
        let f = self.field(a.level);
        let value = match op {
            BinOp::Add => f.add(a.value, b.value),
            BinOp::Sub => f.sub(a.value, b.value),
            BinOp::Mul => f.mul(a.value, b.value),
            BinOp::Div => f.div(a.value, b.value)?,
        };
        Ok(FieldElement {
            level: a.level,
            value,
        })
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        FieldElement {
            level: a.level,
            value: self.field(a.level).pow(a.value, e),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(FieldElement {
            level: a.level,
            value: self.field(a.level).try_inv(a.value)?,
        })
    }

    /// Coefficients over GF(p), lowest first; as many as the level's degree.
    pub fn coeffs(&self, a: FieldElement) -> Vec<Elem> {
        let f = self.field(a.level);
        let degree = match a.level {
            Level::Prime => 1,
            Level::Mid => self.h,
            Level::Top => self.h * self.t,
        };
        debug_assert_eq!(f.order, self.p.pow(degree));
        digits(a.value, self.p, degree as usize)
    }

    /// Embed an element one level up (prime → mid, mid → top).
    pub fn embed(&self, a: FieldElement) -> FieldElement {
        let level = match a.level {
            Level::Prime => Level::Mid,
            Level::Mid | Level::Top => Level::Top,
        };
        FieldElement {
            level,
            value: a.value,
        }
    }

    /// Coordinates of a top-level element over GF(q) w.r.t. `1, ω, …, ω^{t-1}`.
    pub fn decompose(&self, x: Elem) -> Vec<Elem> {
        digits(x, self.q(), self.t as usize)
    }

    pub fn decompose_into(&self, x: Elem, out: &mut [Elem]) {
        let q = self.q();
        let mut x = x;
        for d in out.iter_mut() {
            *d = x % q;
            x /= q;
        }
    }

    pub fn compose(&self, coords: &[Elem]) -> Result<Elem, FieldError> {
        if coords.len() != self.t as usize {
            return Err(FieldError::WrongLength {
                expected: self.t as usize,
                got: coords.len(),
            });
        }
        if let Some(&bad) = coords.iter().find(|&&c| c >= self.q()) {
            return Err(FieldError::OutOfRange {
                value: bad as u64,
                order: self.q(),
            });
        }
        Ok(undigits(coords, self.q()))
    }

    /// `compose` without validation, for hot loops.
    #[inline]
    pub fn compose_unchecked(&self, coords: &[Elem]) -> Elem {
        undigits(coords, self.q())
    }

    /// The generator ω of GF(q^t) over GF(q).
    pub fn omega(&self) -> Elem {
        if self.t == 1 {
            // basis is just (1)
            1
        } else {
            self.q()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let t = FieldTower::new(7, 1, 3).unwrap();
        assert_eq!((t.p(), t.q(), t.top_order()), (7, 7, 343));
        let t = FieldTower::new(2, 1, 3).unwrap();
        assert_eq!((t.p(), t.q(), t.top_order()), (2, 2, 8));
        assert_eq!(FieldTower::new(4, 1, 3).unwrap_err(), FieldError::NotPrime(4));
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(
            FieldTower::new(2, 7, 3),
            Err(FieldError::TooLarge { .. })
        ));
        assert!(FieldTower::with_bound(3, 1, 3, 26).is_err());
        assert!(FieldTower::with_bound(3, 1, 3, 27).is_ok());
    }

    #[test]
    fn moduli_are_least_irreducible() {
        let t = FieldTower::new(2, 1, 3).unwrap();
        assert_eq!(t.modulus_mid(), &[0, 1]);
        // (c0,c1,c2) = (1,0,1) precedes (1,1,0): x^3 + x^2 + 1.
        assert_eq!(t.modulus_top(), &[1, 0, 1, 1]);
        let t = FieldTower::new(2, 2, 1).unwrap();
        assert_eq!(t.modulus_mid(), &[1, 1, 1]);
        for (p, h, tt) in [(3, 1, 3), (5, 1, 3), (2, 2, 3), (2, 3, 2), (3, 2, 2)] {
            let t = FieldTower::new(p, h, tt).unwrap();
            assert!(is_irreducible(t.prime(), t.modulus_mid()));
            assert!(is_irreducible(t.mid(), t.modulus_top()));
        }
    }

    #[test]
    fn inverses_in_gf343() {
        let t = FieldTower::new(7, 1, 3).unwrap();
        let f = t.top();
        for a in 1..f.order() {
            assert_eq!(f.mul(a, f.inv(a)), 1);
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
        }
        assert_eq!(f.try_inv(0), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn frobenius_fixes_embedded_subfield() {
        for (p, h) in [(7, 1), (2, 2), (3, 1), (5, 1)] {
            let t = FieldTower::new(p, h, 3).unwrap();
            let q = t.q() as u64;
            let top = t.top();
            for c in 0..t.q() {
                assert_eq!(top.pow(c, q), c);
            }
            // and nothing else is fixed
            assert_eq!(top.subfield(t.q()).len() as u32, t.q());
        }
    }

    #[test]
    fn embedding_is_a_ring_morphism() {
        let t = FieldTower::new(2, 2, 3).unwrap();
        let (mid, top) = (t.mid(), t.top());
        for a in 0..t.q() {
            for b in 0..t.q() {
                assert_eq!(mid.add(a, b), top.add(a, b));
                assert_eq!(mid.mul(a, b), top.mul(a, b));
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, h, tt) in [(2, 1, 3), (3, 1, 3), (2, 3, 2), (2, 2, 3), (5, 1, 2)] {
            let t = FieldTower::new(p, h, tt).unwrap();
            let f = t.top();
            let n = f.order();
            assert_eq!(n, p.pow(h * tt));
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.add(a, b), f.add(b, a));
                    if n <= 64 {
                        for c in 0..n {
                            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                            assert_eq!(
                                f.mul(a, f.add(b, c)),
                                f.add(f.mul(a, b), f.mul(a, c))
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn poly_path_agrees_with_tables() {
        // GF(3^11) is above the table limit and uses polynomial arithmetic.
        let t = FieldTower::with_bound(3, 1, 11, 1 << 18).unwrap();
        let f = t.top();
        assert!(matches!(f.mul, MulRepr::Poly { .. }));
        for a in [1, 2, 5, 77, 1000, 177146] {
            assert_eq!(f.mul(a, f.inv(a)), 1);
            assert_eq!(f.pow(a, f.order() as u64 - 1), 1);
        }
        let g = FieldTower::new(3, 1, 5).unwrap();
        let small = g.top();
        assert!(matches!(small.mul, MulRepr::Tables { .. }));
        let poly = Field {
            p: 3,
            degree: 5,
            order: 243,
            add_table: None,
            mul: MulRepr::Poly {
                base: Box::new((**g.mid()).clone()),
                modulus: g.modulus_top().to_vec(),
            },
        };
        for a in 0..243 {
            for b in 0..243 {
                assert_eq!(poly.mul(a, b), small.mul(a, b));
            }
        }
    }

    #[test]
    fn decompose_basics() {
        let t = FieldTower::new(2, 1, 3).unwrap();
        assert_eq!(t.decompose(t.omega()), vec![0, 1, 0]);
        for c in 0..t.q() {
            assert_eq!(t.decompose(c), vec![c, 0, 0]);
        }
        let t = FieldTower::new(2, 2, 2).unwrap();
        for a in 0..t.q() {
            for b in 0..t.q() {
                let x = t.compose(&[a, b]).unwrap();
                assert_eq!(t.decompose(x), vec![a, b]);
            }
        }
        assert!(t.compose(&[1]).is_err());
    }

    #[test]
    fn tagged_arith() {
        let t = FieldTower::new(3, 1, 3).unwrap();
        let a = t.element(Level::Top, 5).unwrap();
        let b = t.element(Level::Mid, 2).unwrap();
        assert_eq!(
            t.binary(a, b, BinOp::Add),
            Err(FieldError::LevelMismatch(Level::Top, Level::Mid))
        );
        let b = t.embed(b);
        let s = t.binary(a, b, BinOp::Mul).unwrap();
        assert_eq!(t.binary(s, b, BinOp::Div).unwrap(), a);
        let zero = t.element(Level::Top, 0).unwrap();
        assert_eq!(
            t.binary(a, zero, BinOp::Div),
            Err(FieldError::DivisionByZero)
        );
        assert!(t.element(Level::Mid, 3).is_err());
        assert_eq!(t.pow(a, 26).value, 1);
        let ai = t.inv(a).unwrap();
        assert_eq!(t.binary(a, ai, BinOp::Mul).unwrap().value, 1);
    }

    #[test]
    fn descriptor_round_trip() {
        let t = FieldTower::new(2, 3, 2).unwrap();
        let d = t.descriptor();
        let back = FieldTower::from_descriptor(&d).unwrap();
        assert_eq!(back.descriptor(), d);
    }
}
