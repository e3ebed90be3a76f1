//! Exact arithmetic in finite fields F_q, q = p^e.
//!
//! Elements are stored as their index `sum c_i p^i`, where `c_0 + c_1 t + ...` is the
//! residue modulo the defining polynomial. For prime fields the index is the residue.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

const TABLE_LIMIT: u64 = 1 << 20;
const ADD_TABLE_LIMIT: u64 = 256;

/// An element of some [`Field`]. Only meaningful together with its field.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(u64);

impl FieldElem {
    /// The canonical index of the element, in `0..q`.
    pub fn index(self) -> u64 {
        self.0
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Inner {
    p: u64,
    e: u32,
    q: u64,
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Vec<u32>,
}

/// A finite field with a fixed defining polynomial. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.e)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut a: u64, mut n: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while n > 0 {
        if n & 1 == 1 {
            r = ((r as u128 * a as u128) % p as u128) as u64;
        }
        a = ((a as u128 * a as u128) % p as u128) as u64;
        n >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

// Polynomials over F_p, low-to-high coefficients.

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        for i in 0..=db {
            let idx = dr - db + i;
            r[idx] = (r[idx] + p - c * b[i] % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_rem(&out, m, p)
}

fn digits(mut t: u64, p: u64, e: u32) -> Vec<u64> {
    let mut v = Vec::with_capacity(e as usize);
    for _ in 0..e {
        v.push(t % p);
        t /= p;
    }
    v
}

fn undigits(c: &[u64], p: u64) -> u64 {
    c.iter().rev().fold(0u64, |acc, &x| acc * p + x)
}

/// Trial division by every monic polynomial of degree at most e/2.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let e = m.len() - 1;
    for d in 1..=e / 2 {
        let count = p.pow(d as u32);
        for t in 0..count {
            let mut f = digits(t, p, d as u32);
            f.push(1);
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The first monic irreducible of degree e in lex order, constant term varying fastest.
fn default_modulus(p: u64, e: u32) -> Vec<u64> {
    let mut t = 0u64;
    loop {
        let mut m = digits(t, p, e);
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
        t += 1;
    }
}

impl Field {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// F_{p^e}. `modulus` is monic of degree e, low-to-high; `None` picks the default.
    pub fn new(p: u64, e: u32, modulus: Option<&[u64]>) -> Result<Field> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::NotIrreducible);
        }
        let q = (p as u128).checked_pow(e).filter(|&q| q < 1u128 << 63).ok_or(Error::Overflow)? as u64;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 || m[e as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::NotIrreducible);
                }
                if !is_irreducible(m, p) {
                    return Err(Error::NotIrreducible);
                }
                m.to_vec()
            }
            None => {
                if e == 1 {
                    vec![0, 1]
                } else {
                    default_modulus(p, e)
                }
            }
        };
        let mut inner = Inner { p, e, q, modulus, exp: Vec::new(), log: Vec::new(), add: Vec::new() };
        if e > 1 && q <= TABLE_LIMIT {
            build_tables(&mut inner);
        }
        Ok(Field(Arc::new(inner)))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn e(&self) -> u32 {
        self.0.e
    }
    pub fn q(&self) -> u64 {
        self.0.q
    }
    /// Defining polynomial, low-to-high, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }
    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// The element with the given index, if in range.
    pub fn elem(&self, index: u64) -> Option<FieldElem> {
        (index < self.0.q).then_some(FieldElem(index))
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.0.p as i64) as u64)
    }

    /// Element from its coefficient vector (low-to-high, length at most e).
    pub fn from_coeffs(&self, c: &[u64]) -> Result<FieldElem> {
        if c.len() > self.0.e as usize || c.iter().any(|&x| x >= self.0.p) {
            return Err(Error::InvalidInput("element coefficients out of range".into()));
        }
        Ok(FieldElem(undigits(c, self.0.p)))
    }

    /// Coefficient vector of length e, low-to-high.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u64> {
        digits(a.0, self.0.p, self.0.e)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.0.q).map(FieldElem)
    }

    /// Nonzero elements in index order.
    pub fn units(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.0.q).map(FieldElem)
    }

    #[inline]
    pub fn is_zero(&self, a: FieldElem) -> bool {
        a.0 == 0
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let f = &*self.0;
        if f.e == 1 {
            let s = a.0 + b.0;
            return FieldElem(if s >= f.p { s - f.p } else { s });
        }
        if !f.add.is_empty() {
            return FieldElem(f.add[(a.0 * f.q + b.0) as usize] as u64);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u64, 1u64);
        while x > 0 || y > 0 {
            out += ((x % f.p + y % f.p) % f.p) * place;
            x /= f.p;
            y /= f.p;
            place *= f.p;
        }
        FieldElem(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let f = &*self.0;
        if f.e == 1 {
            return FieldElem(if a.0 == 0 { 0 } else { f.p - a.0 });
        }
        let (mut x, mut out, mut place) = (a.0, 0u64, 1u64);
        while x > 0 {
            out += ((f.p - x % f.p) % f.p) * place;
            x /= f.p;
            place *= f.p;
        }
        FieldElem(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let f = &*self.0;
        if f.e == 1 {
            return FieldElem(a.0 * b.0 % f.p);
        }
        if a.0 == 0 || b.0 == 0 {
            return FieldElem(0);
        }
        if !f.exp.is_empty() {
            let s = f.log[a.0 as usize] as u64 + f.log[b.0 as usize] as u64;
            return FieldElem(f.exp[(s % (f.q - 1)) as usize] as u64);
        }
        let r = poly_mulmod(&digits(a.0, f.p, f.e), &digits(b.0, f.p, f.e), &f.modulus, f.p);
        FieldElem(undigits(&r, f.p))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let f = &*self.0;
        if f.e == 1 {
            return Ok(FieldElem(inv_mod(a.0, f.p)));
        }
        if !f.exp.is_empty() {
            let l = f.log[a.0 as usize] as u64;
            return Ok(FieldElem(f.exp[((f.q - 1 - l) % (f.q - 1)) as usize] as u64));
        }
        Ok(self.pow_u(a, f.q - 2))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    fn pow_u(&self, a: FieldElem, mut n: u64) -> FieldElem {
        let mut base = a;
        let mut r = self.one();
        while n > 0 {
            if n & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        r
    }

    /// `a^n`; negative exponents invert first. `0^0 = 1`.
    pub fn pow(&self, a: FieldElem, n: i64) -> Result<FieldElem> {
        if n >= 0 {
            Ok(self.pow_u(a, n as u64))
        } else {
            Ok(self.pow_u(self.inv(a)?, n.unsigned_abs()))
        }
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow_u(a, self.0.p)
    }

    /// Sum of a slice of elements.
    pub fn sum(&self, it: impl IntoIterator<Item = FieldElem>) -> FieldElem {
        it.into_iter().fold(self.zero(), |acc, x| self.add(acc, x))
    }
}

fn build_tables(f: &mut Inner) {
    let (p, e, q) = (f.p, f.e, f.q);
    let m = f.modulus.clone();
    // find a primitive element by brute force
    let mut exp = vec![0u32; (q - 1) as usize];
    'cand: for g in 2..q {
        let gd = digits(g, p, e);
        let mut cur = vec![1u64];
        for i in 0..(q - 1) {
            let idx = undigits(&cur, p);
            if i > 0 && idx == 1 {
                continue 'cand;
            }
            exp[i as usize] = idx as u32;
            cur = poly_mulmod(&cur, &gd, &m, p);
        }
        break;
    }
    let mut log = vec![0u32; q as usize];
    for (i, &x) in exp.iter().enumerate() {
        log[x as usize] = i as u32;
    }
    f.exp = exp;
    f.log = log;
    if q <= ADD_TABLE_LIMIT {
        let mut add = vec![0u32; (q * q) as usize];
        for a in 0..q {
            let da = digits(a, p, e);
            for b in 0..q {
                let db = digits(b, p, e);
                let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s, p) as u32;
            }
        }
        f.add = add;
    }
}
