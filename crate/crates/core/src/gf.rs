//! GF(p^m) arithmetic for field orders up to 2^16.
//!
//! An element is an index in `0..q`: its base-`p` digits, least significant
//! first, are the coefficients of a polynomial over Z_p, and arithmetic is
//! performed modulo a canonical irreducible polynomial of degree `m`. Index 0
//! is zero and index 1 is the multiplicative identity. Fields of order at
//! most 2^12 build log/exp tables at construction; larger fields multiply by
//! polynomial reduction and invert by exponentiation.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// A field element index. Valid values are `0..field.order()`.
pub type Symbol = u16;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Orders up to this limit get log/exp multiplication tables.
const TABLE_LIMIT: u32 = 1 << 12;

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    /// Monic irreducible modulus, coefficients low degree first, length m+1.
    modulus: Vec<u16>,
    /// exp[i] = g^i for a fixed generator g, doubled so that
    /// `exp[log[a] + log[b]]` needs no reduction mod q-1.
    exp: Vec<u16>,
    /// log[a] for a in 1..q; log[0] is unused.
    log: Vec<u16>,
}

/// Handle to a finite field GF(p^m). Cheap to clone; all state is immutable.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.m == other.0.m
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Base-p digits of `idx`, least significant first, padded to `len`.
fn to_digits(mut idx: u32, p: u32, len: usize) -> Vec<u16> {
    let mut out = vec![0u16; len];
    for d in out.iter_mut() {
        *d = (idx % p) as u16;
        idx /= p;
    }
    debug_assert_eq!(idx, 0);
    out
}

fn from_digits(digits: &[u16], p: u32) -> u32 {
    digits
        .iter()
        .rev()
        .fold(0u32, |acc, &d| acc * p + u32::from(d))
}

/// Remainder of `a` divided by monic `b` over Z_p. Coefficients low first.
fn poly_rem(a: &[u16], b: &[u16], p: u32) -> Vec<u16> {
    let mut r: Vec<u32> = a.iter().map(|&c| u32::from(c)).collect();
    let db = b.len() - 1;
    debug_assert_eq!(b[db], 1, "divisor must be monic");
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for i in 0..db {
                let sub = lead * u32::from(b[i]) % p;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
    }
    r.resize(db, 0);
    r.iter().map(|&c| c as u16).collect()
}

/// Schoolbook product of two coefficient vectors over Z_p.
fn poly_mul(a: &[u16], b: &[u16], p: u32) -> Vec<u16> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + u32::from(ai) * u32::from(bj)) % p;
        }
    }
    out.iter().map(|&c| c as u16).collect()
}

/// True when the monic polynomial (low coefficients first) has no monic
/// divisor of degree between 1 and deg/2.
fn poly_irreducible(poly: &[u16], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for c in 0..count {
            let mut div = to_digits(c, p, d);
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible polynomial of degree m over Z_p whose non-leading
/// coefficient vector encodes the smallest integer in base p.
fn lowest_irreducible(p: u32, m: u32) -> Vec<u16> {
    if m == 1 {
        // Arithmetic modulo x is plain arithmetic in Z_p.
        return vec![0, 1];
    }
    let count = p
        .checked_pow(m)
        .expect("field order fits in u32 by construction");
    for c in 0..count {
        let mut poly = to_digits(c, p, m as usize);
        poly.push(1);
        if poly_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over Z_p")
}

/// Constructs GF(p^m) with its canonical modulus.
///
/// Deterministic: the same (p, m) always yields the same field. Fails when p
/// is not prime, m is zero, or p^m exceeds [`MAX_ORDER`].
pub fn field_build(p: u32, m: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::Infeasible(format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(Error::Infeasible("extension degree must be >= 1".into()));
    }
    let q = (0..m).try_fold(1u32, |acc, _| {
        acc.checked_mul(p).filter(|&v| v <= MAX_ORDER)
    });
    let Some(q) = q else {
        return Err(Error::Infeasible(format!(
            "field order {p}^{m} exceeds {MAX_ORDER}"
        )));
    };
    let modulus = lowest_irreducible(p, m);
    let mut inner = Inner {
        p,
        m,
        q,
        modulus,
        exp: Vec::new(),
        log: Vec::new(),
    };
    if q <= TABLE_LIMIT {
        build_tables(&mut inner);
    }
    Ok(Field(Arc::new(inner)))
}

fn build_tables(inner: &mut Inner) {
    let q = inner.q as usize;
    let mut gen = 0u16;
    'candidates: for g in 1..inner.q {
        let g = g as u16;
        let mut seen = 1u32;
        let mut x = mul_poly(inner, g, 1);
        while x != 1 {
            x = mul_poly(inner, x, g);
            seen += 1;
            if seen > inner.q {
                continue 'candidates;
            }
        }
        if seen == inner.q - 1 {
            gen = g;
            break;
        }
    }
    assert!(gen != 0 || inner.q == 2, "multiplicative group is cyclic");
    if inner.q == 2 {
        gen = 1;
    }
    let period = q - 1;
    let mut exp = vec![0u16; 2 * period];
    let mut log = vec![0u16; q];
    let mut x = 1u16;
    for (i, e) in exp.iter_mut().take(period).enumerate() {
        *e = x;
        log[x as usize] = i as u16;
        x = mul_poly(inner, x, gen);
    }
    for i in period..2 * period {
        exp[i] = exp[i - period];
    }
    inner.exp = exp;
    inner.log = log;
}

/// Table-free product used to bootstrap tables and for large fields.
fn mul_poly(inner: &Inner, a: Symbol, b: Symbol) -> Symbol {
    if a == 0 || b == 0 {
        return 0;
    }
    if inner.m == 1 {
        return (u32::from(a) * u32::from(b) % inner.p) as Symbol;
    }
    let da = to_digits(u32::from(a), inner.p, inner.m as usize);
    let db = to_digits(u32::from(b), inner.p, inner.m as usize);
    let prod = poly_mul(&da, &db, inner.p);
    let rem = poly_rem(&prod, &inner.modulus, inner.p);
    from_digits(&rem, inner.p) as Symbol
}

impl Field {
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    /// Number of elements q = p^m.
    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients, low degree first, length m+1, monic.
    pub fn modulus(&self) -> &[u16] {
        &self.0.modulus
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Symbol> {
        (0..self.0.q).map(|v| v as Symbol)
    }

    pub fn contains(&self, a: Symbol) -> bool {
        u32::from(a) < self.0.q
    }

    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        debug_assert!(self.contains(a) && self.contains(b));
        let inner = &*self.0;
        if inner.p == 2 {
            return a ^ b;
        }
        if inner.m == 1 {
            return ((u32::from(a) + u32::from(b)) % inner.p) as Symbol;
        }
        let mut out = 0u32;
        let mut scale = 1u32;
        let (mut x, mut y) = (u32::from(a), u32::from(b));
        for _ in 0..inner.m {
            out += (x + y) % inner.p * scale;
            x /= inner.p;
            y /= inner.p;
            scale *= inner.p;
        }
        out as Symbol
    }

    pub fn neg(&self, a: Symbol) -> Symbol {
        debug_assert!(self.contains(a));
        let inner = &*self.0;
        if inner.p == 2 {
            return a;
        }
        if inner.m == 1 {
            return ((inner.p - u32::from(a)) % inner.p) as Symbol;
        }
        let mut out = 0u32;
        let mut scale = 1u32;
        let mut x = u32::from(a);
        for _ in 0..inner.m {
            out += (inner.p - x % inner.p) % inner.p * scale;
            x /= inner.p;
            scale *= inner.p;
        }
        out as Symbol
    }

    pub fn sub(&self, a: Symbol, b: Symbol) -> Symbol {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        debug_assert!(self.contains(a) && self.contains(b));
        let inner = &*self.0;
        if a == 0 || b == 0 {
            return 0;
        }
        if !inner.exp.is_empty() {
            let la = inner.log[a as usize] as usize;
            let lb = inner.log[b as usize] as usize;
            return inner.exp[la + lb];
        }
        mul_poly(inner, a, b)
    }

    pub fn inv(&self, a: Symbol) -> Result<Symbol> {
        debug_assert!(self.contains(a));
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let inner = &*self.0;
        if !inner.exp.is_empty() {
            let period = (inner.q - 1) as usize;
            let la = inner.log[a as usize] as usize;
            return Ok(inner.exp[(period - la) % period]);
        }
        Ok(self.pow(a, u64::from(inner.q) - 2))
    }

    pub fn div(&self, a: Symbol, b: Symbol) -> Result<Symbol> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e with the convention a^0 = 1 for every a, including zero.
    pub fn pow(&self, a: Symbol, mut e: u64) -> Symbol {
        let mut base = a;
        let mut acc: Symbol = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}
