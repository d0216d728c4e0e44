//! Number theory and finite-field arithmetic used by the plane constructions.
//!
//! Fields are small here (orders up to a few thousand in practice), so
//! elements are stored as packed coefficient vectors: the element
//! `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` is the integer `sum c_i p^i`.

use std::fmt;

use thiserror::Error;

/// Default cap on the order of a constructed field.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("search for the next prime (power) starting at {0} overflowed u64")]
    Overflow(u64),
    #[error("field order {order} exceeds the configured cap {cap}")]
    CapExceeded { order: u64, cap: u64 },
    #[error("argument {0} is out of range (must be at least 2)")]
    OutOfRange(u64),
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve primes as witnesses suffice
/// for every 64-bit input.
pub fn is_prime(x: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if x < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if x.is_multiple_of(p) {
            return x == p;
        }
    }
    let mut d = x - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut y = pow_mod(a, d, x);
        if y == 1 || y == x - 1 {
            continue;
        }
        for _ in 1..s {
            y = mul_mod(y, y, x);
            if y == x - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `p >= x`, found by direct upward search.
pub fn next_prime_at_least(x: u64) -> Result<u64, AlgebraError> {
    if x < 2 {
        return Err(AlgebraError::OutOfRange(x));
    }
    let mut candidate = x;
    loop {
        if is_prime(candidate) {
            return Ok(candidate);
        }
        candidate = candidate.checked_add(1).ok_or(AlgebraError::Overflow(x))?;
    }
}

/// `q = p^e` with `p` prime and `e >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    q: u64,
    p: u64,
    e: u32,
}

impl PrimePower {
    pub fn new(q: u64) -> Result<Self, AlgebraError> {
        prime_power_decompose(q)
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "{}", self.q)
        } else {
            write!(f, "{} = {}^{}", self.q, self.p, self.e)
        }
    }
}

/// Largest `r` with `r^e <= q`.
fn integer_root(q: u64, e: u32) -> u64 {
    if e == 1 {
        return q;
    }
    let mut r = (q as f64).powf(1.0 / e as f64).round() as u64;
    let fits = |r: u64| r.checked_pow(e).is_some_and(|v| v <= q);
    while r > 0 && !fits(r) {
        r -= 1;
    }
    while fits(r + 1) {
        r += 1;
    }
    r
}

pub fn prime_power_decompose(q: u64) -> Result<PrimePower, AlgebraError> {
    if q < 2 {
        return Err(AlgebraError::NotPrimePower(q));
    }
    // Exactly one exponent can give a prime root.
    for e in 1..64 {
        let r = integer_root(q, e);
        if r < 2 {
            break;
        }
        if r.checked_pow(e) == Some(q) && is_prime(r) {
            return Ok(PrimePower { q, p: r, e });
        }
    }
    Err(AlgebraError::NotPrimePower(q))
}

/// Smallest prime power `q >= x`.
pub fn next_prime_power_at_least(x: u64) -> Result<PrimePower, AlgebraError> {
    if x < 2 {
        return Err(AlgebraError::OutOfRange(x));
    }
    let mut candidate = x;
    loop {
        if let Ok(pp) = prime_power_decompose(candidate) {
            return Ok(pp);
        }
        candidate = candidate.checked_add(1).ok_or(AlgebraError::Overflow(x))?;
    }
}

/// Packed field element (see module docs).
pub type Element = u32;

/// GF(p^e) with a monic irreducible modulus of degree `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    order: PrimePower,
    /// Low-to-high coefficients, length `e + 1`, leading coefficient 1.
    modulus: Vec<u64>,
}

impl FiniteField {
    /// Builds the field with the default order cap.
    pub fn new(order: PrimePower) -> Result<Self, AlgebraError> {
        Self::with_cap(order, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(order: PrimePower, cap: u64) -> Result<Self, AlgebraError> {
        if order.q > cap {
            return Err(AlgebraError::CapExceeded { order: order.q, cap });
        }
        let modulus = smallest_irreducible(order.p, order.e as usize);
        Ok(Self { order, modulus })
    }

    pub fn order(&self) -> PrimePower {
        self.order
    }

    pub fn size(&self) -> usize {
        self.order.q as usize
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        0..self.order.q as Element
    }

    pub fn zero(&self) -> Element {
        0
    }

    pub fn one(&self) -> Element {
        1
    }

    pub fn to_coeffs(&self, a: Element) -> Vec<u64> {
        let p = self.order.p;
        let mut a = a as u64;
        (0..self.order.e)
            .map(|_| {
                let c = a % p;
                a /= p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Element {
        let p = self.order.p;
        coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c % p) as Element
    }

    pub fn add(&self, a: Element, b: Element) -> Element {
        let p = self.order.p;
        if self.order.e == 1 {
            return ((a as u64 + b as u64) % p) as Element;
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.order.e {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out as Element
    }

    pub fn neg(&self, a: Element) -> Element {
        let p = self.order.p;
        let coeffs: Vec<u64> = self.to_coeffs(a).into_iter().map(|c| (p - c) % p).collect();
        self.from_coeffs(&coeffs)
    }

    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Element, b: Element) -> Element {
        let p = self.order.p;
        if self.order.e == 1 {
            return mul_mod(a as u64, b as u64, p) as Element;
        }
        let product = poly_mul(&self.to_coeffs(a), &self.to_coeffs(b), p);
        let reduced = poly_rem(&product, &self.modulus, p);
        let mut coeffs = reduced;
        coeffs.resize(self.order.e as usize, 0);
        self.from_coeffs(&coeffs)
    }

    pub fn pow(&self, mut base: Element, mut exp: u64) -> Element {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Element) -> Option<Element> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.order.q - 2))
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Element) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let mut x = a;
        let mut k = 1;
        while x != self.one() {
            x = self.mul(x, a);
            k += 1;
        }
        Some(k)
    }
}

fn trim(poly: &mut Vec<u64>) {
    while poly.len() > 1 && *poly.last().unwrap() == 0 {
        poly.pop();
    }
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    while r.len() >= m.len() {
        let lead = *r.last().unwrap();
        let shift = r.len() - m.len();
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - mul_mod(lead, c, p)) % p;
            }
        }
        r.pop();
    }
    if r.is_empty() {
        r.push(0);
    }
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients encode `index`
/// in base `p` (constant term least significant).
fn monic_from_index(index: u64, deg: usize, p: u64) -> Vec<u64> {
    let mut coeffs = Vec::with_capacity(deg + 1);
    let mut k = index;
    for _ in 0..deg {
        coeffs.push(k % p);
        k /= p;
    }
    coeffs.push(1);
    coeffs
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        for index in 0..p.pow(d as u32) {
            let g = monic_from_index(index, d, p);
            let r = poly_rem(f, &g, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The first monic irreducible of degree `deg` over GF(p) when lower
/// coefficients are read as a base-`p` number, constant term least
/// significant. For `deg == 1` this is `x`.
pub fn smallest_irreducible(p: u64, deg: usize) -> Vec<u64> {
    (0..p.pow(deg as u32))
        .map(|i| monic_from_index(i, deg, p))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}
