//! Finite fields GF(q), q = p^e.
//!
//! Elements are stored by index: for prime fields the index is the residue,
//! for extension fields it is the base-p digit encoding of the polynomial
//! representative (`idx = c_0 + c_1 p + ... + c_{e-1} p^{e-1}`). Multiplication
//! in extension fields goes through log/antilog tables and addition through a
//! Zech logarithm table (XOR in characteristic 2).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the field order.
pub const DEFAULT_MAX_ORDER: u64 = 1024;

/// A field element, identified by its index in `0..q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// Wraps a raw index. The caller is responsible for `idx < q`.
    pub const fn from_idx(idx: u16) -> Self {
        Elem(idx)
    }

    pub const fn idx(self) -> usize {
        self.0 as usize
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    p: u32,
    e: u32,
    q: u32,
    /// Coefficients c_0..c_e of the monic modulus, low degree first.
    modulus: Vec<u32>,
    generator: Elem,
    /// exp[i] = g^i for i in 0..2(q-1), doubled to skip a reduction.
    exp: Vec<u16>,
    /// log[a] for a != 0; log[0] is unused.
    log: Vec<u16>,
    /// zech[d] = log(1 + g^d), or NONE when 1 + g^d = 0.
    zech: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

const NONE: u16 = u16::MAX;

/// An immutable finite field description. Cheap to clone.
#[derive(Clone)]
pub struct Field {
    t: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field").field("p", &self.t.p).field("e", &self.t.e).field("modulus", &self.t.modulus).finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.t.q == other.t.q
    }
}

impl Eq for Field {}

/// Splits `q` as `p^e` with `p` prime, or `None`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > q {
        return Some((q, 1));
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

pub fn is_prime(q: u64) -> bool {
    matches!(prime_power(q), Some((_, 1)))
}

impl Field {
    /// Builds GF(q) with the default order cap.
    pub fn new(q: u64) -> Result<Self> {
        Self::with_cap(q, DEFAULT_MAX_ORDER)
    }

    pub fn with_cap(q: u64, cap: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotAPrimePower(q))?;
        if q > cap || q > u64::from(u16::MAX) {
            return Err(Error::FieldTooLarge { q, cap });
        }
        let (p, q) = (p as u32, q as u32);
        let modulus = if e == 1 { vec![0, 1] } else { smallest_irreducible(p, e) };
        Ok(Field { t: Arc::new(Tables::build(p, e, q, modulus)) })
    }

    pub fn p(&self) -> u32 {
        self.t.p
    }

    pub fn e(&self) -> u32 {
        self.t.e
    }

    pub fn q(&self) -> u32 {
        self.t.q
    }

    pub fn order(&self) -> usize {
        self.t.q as usize
    }

    /// Monic modulus coefficients, low degree first (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }

    /// A generator of the multiplicative group.
    pub fn generator(&self) -> Elem {
        self.t.generator
    }

    /// Element with the given index, if in range.
    pub fn elem(&self, idx: usize) -> Option<Elem> {
        (idx < self.order()).then_some(Elem(idx as u16))
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.t.q as u16).map(Elem)
    }

    /// Nonzero elements in index order.
    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..self.t.q as u16).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let t = &*self.t;
        if t.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if t.e == 1 {
            let s = a.0 as u32 + b.0 as u32;
            return Elem(if s >= t.q { s - t.q } else { s } as u16);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let m = t.q - 1;
        let (i, j) = (t.log[a.idx()] as u32, t.log[b.idx()] as u32);
        let d = if j >= i { j - i } else { j + m - i };
        match t.zech[d as usize] {
            NONE => Elem::ZERO,
            z => Elem(t.exp[(i + z as u32) as usize]),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.t.neg[a.idx()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let t = &*self.t;
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        if t.e == 1 {
            return Elem(((a.0 as u32 * b.0 as u32) % t.q) as u16);
        }
        Elem(t.exp[t.log[a.idx()] as usize + t.log[b.idx()] as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Elem(self.t.inv[a.idx()]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut k: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Elem) -> Result<u32> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut x = a;
        let mut k = 1;
        while x != Elem::ONE {
            x = self.mul(x, a);
            k += 1;
        }
        Ok(k)
    }
}

impl Tables {
    fn build(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Self {
        let qs = q as usize;
        let m = qs - 1;
        let mul_raw = |a: u32, b: u32| -> u32 {
            if e == 1 {
                (a * b) % p
            } else {
                poly_mulmod(a, b, p, e, &modulus)
            }
        };
        let order_of = |g: u32| -> usize {
            let mut x = g;
            let mut k = 1;
            while x != 1 {
                x = mul_raw(x, g);
                k += 1;
            }
            k
        };
        let generator = (1..q).find(|&g| order_of(g) == m).expect("multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u16; 2 * m.max(1)];
        let mut log = vec![0u16; qs];
        let mut x = 1u32;
        for i in 0..m {
            exp[i] = x as u16;
            exp[i + m] = x as u16;
            log[x as usize] = i as u16;
            x = mul_raw(x, generator);
        }

        let add_raw = |a: u32, b: u32| -> u32 { digit_add(a, b, p, e) };
        let neg: Vec<u16> = (0..q).map(|a| digit_neg(a, p, e) as u16).collect();
        let mut inv = vec![0u16; qs];
        for a in 1..qs {
            inv[a] = exp[(m - log[a] as usize) % m];
        }
        let zech = (0..m)
            .map(|d| match add_raw(1, exp[d] as u32) {
                0 => NONE,
                s => log[s as usize],
            })
            .collect();

        Tables { p, e, q, modulus, generator: Elem(generator as u16), exp, log, zech, neg, inv }
    }
}

fn to_digits(mut a: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn digit_add(a: u32, b: u32, p: u32, e: u32) -> u32 {
    let (x, y) = (to_digits(a, p, e), to_digits(b, p, e));
    let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
    from_digits(&s, p)
}

fn digit_neg(a: u32, p: u32, e: u32) -> u32 {
    let s: Vec<u32> = to_digits(a, p, e).iter().map(|&u| (p - u) % p).collect();
    from_digits(&s, p)
}

/// Product of two encoded polynomials reduced by the monic `modulus`.
fn poly_mulmod(a: u32, b: u32, p: u32, e: u32, modulus: &[u32]) -> u32 {
    let (x, y) = (to_digits(a, p, e), to_digits(b, p, e));
    let mut prod = vec![0u32; 2 * e as usize];
    for (i, &u) in x.iter().enumerate() {
        for (j, &v) in y.iter().enumerate() {
            prod[i + j] = (prod[i + j] + u * v) % p;
        }
    }
    let r = poly_rem(&prod, modulus, p);
    let mut out = r;
    out.resize(e as usize, 0);
    from_digits(&out, p)
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let lead = r.pop().unwrap_or(0);
        if lead != 0 {
            let shift = r.len() - dm;
            for (k, &c) in m[..dm].iter().enumerate() {
                r[shift + k] = (r[shift + k] + (p - c) * lead) % p;
            }
        }
    }
    r
}

/// Whether the monic polynomial `f` (low degree first) is irreducible over
/// GF(p), by trial division against every monic polynomial of degree at most
/// `deg f / 2`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for t in 0..count {
            let mut g = to_digits(t, p, d as u32);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `e`, with the
/// coefficient tuple `(c_0, ..., c_{e-1})` compared low degree first.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = p.pow(e);
    for t in 0..count {
        // c_0 is the most significant digit of t.
        let mut f: Vec<u32> = (0..e).map(|i| (t / p.pow(e - 1 - i)) % p).collect();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
