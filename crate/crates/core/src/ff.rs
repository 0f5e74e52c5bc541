//! Exact arithmetic in the finite field `F_{l^d}`.
//!
//! Elements are polynomials of degree `< d` over `F_l`, packed as base-`l`
//! digits into a `u64` (coefficient of `t^i` is digit `i`). For `l = 2`
//! the packing is plain bits and addition is XOR. Fields with at most
//! `2^22` elements carry exp/log tables (and Zech logarithms for odd `l`),
//! so multiplication is two lookups.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

const TABLE_LIMIT: u64 = 1 << 22;
const MAX_DEGREE: usize = 24;
const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {0} outside 1..={MAX_DEGREE}")]
    BadDegree(usize),
    #[error("field of order {0} exceeds the supported range")]
    TooLarge(u64),
    #[error("F_{{{q}}} is not a splitting field for C_{m}: {m} does not divide {q} - 1")]
    NoRootOfUnity { q: u64, m: u64 },
}

/// A field element: packed coefficient digits, meaningful only together
/// with the [`FieldContext`] that produced it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(u64);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The packed integer encoding (base-`l` digits, little-endian).
    #[inline]
    pub fn index(self) -> u64 {
        self.0
    }
}

struct Tables {
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)`.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, `NO_LOG` where `1 + g^k = 0`. Odd `l` only.
    zech: Vec<u32>,
}

pub struct FieldContext {
    ell: u64,
    d: usize,
    q: u64,
    modulus: Vec<u64>,
    generator: FieldElem,
    pow_ell: Vec<u64>,
    tables: Option<Tables>,
}

impl std::fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldContext")
            .field("ell", &self.ell)
            .field("d", &self.d)
            .field("modulus", &self.modulus)
            .field("generator", &self.coeffs(self.generator))
            .finish()
    }
}

impl FieldContext {
    /// Builds `F_{ell^d}` with the least irreducible modulus (monic, lower
    /// coefficients read as a base-`ell` integer with `c_0` least significant)
    /// and the least primitive element in the packed order.
    pub fn new(ell: u64, d: usize) -> Result<Self, FieldError> {
        if !arith::is_prime(ell) {
            return Err(FieldError::NotPrime(ell));
        }
        if d == 0 || d > MAX_DEGREE {
            return Err(FieldError::BadDegree(d));
        }
        let q = (ell as u128).pow(d as u32);
        if q > (1u128 << 62) {
            return Err(FieldError::TooLarge(u64::MAX));
        }
        let q = q as u64;
        let mut pow_ell = vec![1u64; d + 1];
        for i in 1..=d {
            pow_ell[i] = pow_ell[i - 1] * ell;
        }
        let modulus = least_irreducible(ell, d);
        let mut ctx = FieldContext {
            ell,
            d,
            q,
            modulus,
            generator: FieldElem::ONE,
            pow_ell,
            tables: None,
        };
        ctx.generator = ctx.find_generator();
        if q <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    pub fn characteristic(&self) -> u64 {
        self.ell
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// Number of elements `l^d`.
    pub fn order(&self) -> u64 {
        self.q
    }

    /// Coefficients of the monic modulus, constant term first (length `d + 1`).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.ell as i64) as u64)
    }

    pub fn from_index(&self, idx: u64) -> FieldElem {
        assert!(idx < self.q, "index {idx} outside F_{}", self.q);
        FieldElem(idx)
    }

    /// Builds an element from little-endian coefficients (reduced mod `l`,
    /// missing high coefficients are zero).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElem {
        assert!(coeffs.len() <= self.d, "too many coefficients");
        let mut v = 0;
        for (i, &c) in coeffs.iter().enumerate() {
            v += (c % self.ell) * self.pow_ell[i];
        }
        FieldElem(v)
    }

    /// Little-endian coefficient vector of length exactly `d`.
    pub fn coeffs(&self, x: FieldElem) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.d);
        let mut v = x.0;
        for _ in 0..self.d {
            out.push(v % self.ell);
            v /= self.ell;
        }
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.ell == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        if let Some(t) = &self.tables {
            let n = self.q - 1;
            let la = t.log[a.0 as usize] as u64;
            let lb = t.log[b.0 as usize] as u64;
            let k = (lb + n - la) % n;
            let z = t.zech[k as usize];
            if z == NO_LOG {
                return FieldElem::ZERO;
            }
            return FieldElem(t.exp[(la + z as u64) as usize] as u64);
        }
        self.add_digits(a, b)
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.ell == 2 || a.0 == 0 {
            return a;
        }
        let mut v = a.0;
        let mut out = 0;
        for i in 0..self.d {
            let c = v % self.ell;
            v /= self.ell;
            out += ((self.ell - c) % self.ell) * self.pow_ell[i];
        }
        FieldElem(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        if let Some(t) = &self.tables {
            let s = t.log[a.0 as usize] + t.log[b.0 as usize];
            return FieldElem(t.exp[s as usize] as u64);
        }
        self.mul_poly(a, b)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            return None;
        }
        if let Some(t) = &self.tables {
            let n = (self.q - 1) as u32;
            let l = t.log[a.0 as usize];
            return Some(FieldElem(t.exp[((n - l) % n) as usize] as u64));
        }
        Some(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        if a.0 == 0 {
            return if e == 0 { FieldElem::ONE } else { FieldElem::ZERO };
        }
        if let Some(t) = &self.tables {
            let n = self.q - 1;
            let l = t.log[a.0 as usize] as u64;
            let k = arith::mul_mod(l, e % n, n);
            return FieldElem(t.exp[k as usize] as u64);
        }
        let mut acc = FieldElem::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    /// Signed integer power (negative exponents invert).
    pub fn pow_signed(&self, a: FieldElem, e: i64) -> FieldElem {
        if e >= 0 {
            self.pow(a, e as u64)
        } else {
            let ai = self.inv(a).expect("negative power of zero");
            self.pow(ai, e.unsigned_abs())
        }
    }

    /// `x^(l^m)`, the `m`-th power of the Frobenius automorphism.
    pub fn frobenius(&self, x: FieldElem, m: u64) -> FieldElem {
        let m = m % self.d as u64;
        let mut y = x;
        for _ in 0..m {
            y = self.pow(y, self.ell);
        }
        y
    }

    /// `generator^((q-1)/m)`, an element of exact multiplicative order `m`.
    pub fn root_of_unity(&self, m: u64) -> Result<FieldElem, FieldError> {
        if m == 0 || (self.q - 1) % m != 0 {
            return Err(FieldError::NoRootOfUnity { q: self.q, m });
        }
        Ok(self.pow(self.generator, (self.q - 1) / m))
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: FieldElem) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        let mut ord = self.q - 1;
        for p in arith::prime_divisors(self.q - 1) {
            while ord % p == 0 && self.pow(x, ord / p) == FieldElem::ONE {
                ord /= p;
            }
        }
        Some(ord)
    }

    pub fn sum<I: IntoIterator<Item = FieldElem>>(&self, it: I) -> FieldElem {
        it.into_iter().fold(FieldElem::ZERO, |a, b| self.add(a, b))
    }

    fn add_digits(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        for i in 0..self.d {
            let c = (x % self.ell + y % self.ell) % self.ell;
            x /= self.ell;
            y /= self.ell;
            out += c * self.pow_ell[i];
        }
        FieldElem(out)
    }

    fn mul_poly(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.ell == 2 {
            return FieldElem(gf2_mulmod(a.0, b.0, self.modulus_bits(), self.d));
        }
        let pa = self.coeffs(a);
        let pb = self.coeffs(b);
        let prod = poly_mul(&pa, &pb, self.ell);
        let r = poly_rem(&prod, &self.modulus, self.ell);
        self.from_coeffs(&r[..r.len().min(self.d)])
    }

    fn modulus_bits(&self) -> u64 {
        self.modulus
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &c)| acc | (c << i))
    }

    fn find_generator(&self) -> FieldElem {
        if self.q == 2 {
            return FieldElem::ONE;
        }
        let primes = arith::prime_divisors(self.q - 1);
        (1..self.q)
            .map(FieldElem)
            .find(|&g| {
                primes
                    .iter()
                    .all(|&p| self.pow(g, (self.q - 1) / p) != FieldElem::ONE)
            })
            .expect("the multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&self) -> Tables {
        let n = (self.q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![NO_LOG; self.q as usize];
        let mut x = FieldElem::ONE;
        for i in 0..n {
            exp[i] = x.0 as u32;
            log[x.0 as usize] = i as u32;
            x = self.mul_poly(x, self.generator);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        let mut zech = Vec::new();
        if self.ell != 2 {
            zech = vec![NO_LOG; n];
            for (k, z) in zech.iter_mut().enumerate() {
                let s = self.add_digits(FieldElem::ONE, FieldElem(exp[k] as u64));
                if !s.is_zero() {
                    *z = log[s.0 as usize];
                }
            }
        }
        if n == 0 {
            exp.clear();
        }
        Tables { exp, log, zech }
    }
}

impl Serialize for FieldElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        // Bare elements carry no context; the report layer serializes
        // coefficient arrays through `FieldContext::coeffs`.
        s.serialize_u64(self.0)
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        u64::deserialize(d).map(FieldElem)
    }
}

fn gf2_mulmod(a: u64, b: u64, modulus: u64, d: usize) -> u64 {
    let mut prod: u64 = 0;
    let mut x = a;
    let mut y = b;
    while y != 0 {
        if y & 1 == 1 {
            prod ^= x;
        }
        y >>= 1;
        x <<= 1;
        if x >> d & 1 == 1 {
            x ^= modulus;
        }
    }
    prod
}

// Dense polynomials over F_ell, constant term first, no trailing zeros
// unless the polynomial is zero (empty vector).

fn trim(mut p: Vec<u64>) -> Vec<u64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[u64], b: &[u64], ell: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % ell;
        }
    }
    trim(out)
}

fn poly_rem(a: &[u64], m: &[u64], ell: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = arith::inv_mod(m[dm], ell).expect("nonzero leading coefficient");
    while r.len() > dm && !r.is_empty() {
        let shift = r.len() - 1 - dm;
        let f = r[r.len() - 1] * lead_inv % ell;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + ell - f * c % ell) % ell;
        }
        r = trim(r);
    }
    r
}

fn poly_sub(a: &[u64], b: &[u64], ell: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + ell - y) % ell
        })
        .collect();
    trim(out)
}

fn poly_gcd(a: &[u64], b: &[u64], ell: u64) -> Vec<u64> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = poly_rem(&x, &y, ell);
        x = y;
        y = r;
    }
    x
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], ell: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, ell);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, ell), m, ell);
        }
        b = poly_rem(&poly_mul(&b, &b, ell), m, ell);
        e >>= 1;
    }
    acc
}

/// Ben-Or irreducibility test: `gcd(x^(l^i) - x, f) = 1` for `i <= deg f / 2`.
pub(crate) fn is_irreducible(f: &[u64], ell: u64) -> bool {
    let f = trim(f.to_vec());
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut xp = x.clone();
    for _ in 1..=deg / 2 {
        xp = poly_powmod(&xp, ell, &f, ell);
        let g = poly_gcd(&f, &poly_sub(&xp, &x, ell), ell);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn least_irreducible(ell: u64, d: usize) -> Vec<u64> {
    let count = ell.pow(d as u32);
    for k in 0..count {
        let mut f = Vec::with_capacity(d + 1);
        let mut v = k;
        for _ in 0..d {
            f.push(v % ell);
            v /= ell;
        }
        f.push(1);
        if is_irreducible(&f, ell) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial division by every monic polynomial of degree <= d/2.
    fn irreducible_by_trial_division(f: &[u64], ell: u64) -> bool {
        let d = f.len() - 1;
        for deg in 1..=d / 2 {
            for k in 0..ell.pow(deg as u32) {
                let mut g = Vec::new();
                let mut v = k;
                for _ in 0..deg {
                    g.push(v % ell);
                    v /= ell;
                }
                g.push(1);
                if poly_rem(f, &g, ell).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn prime_field_f2() {
        let f = FieldContext::new(2, 1).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.generator(), FieldElem::ONE);
        assert_eq!(f.add(f.one(), f.one()), f.zero());
    }

    #[test]
    fn moduli_are_irreducible_by_trial_division() {
        for (ell, d) in [(2, 2), (2, 3), (2, 6), (2, 8), (3, 2), (3, 4), (5, 3), (7, 2), (2, 12)] {
            let f = FieldContext::new(ell, d).unwrap();
            assert!(irreducible_by_trial_division(f.modulus(), ell), "{ell} {d}");
        }
    }

    #[test]
    fn ben_or_matches_trial_division() {
        for ell in [2u64, 3] {
            for d in 1..=5usize {
                for k in 0..ell.pow(d as u32) {
                    let mut f = Vec::new();
                    let mut v = k;
                    for _ in 0..d {
                        f.push(v % ell);
                        v /= ell;
                    }
                    f.push(1);
                    assert_eq!(
                        is_irreducible(&f, ell),
                        irreducible_by_trial_division(&f, ell),
                        "{f:?}"
                    );
                }
            }
        }
    }

    fn brute_order(f: &FieldContext, x: FieldElem) -> u64 {
        let mut y = x;
        let mut k = 1;
        while y != f.one() {
            y = f.mul(y, x);
            k += 1;
        }
        k
    }

    #[test]
    fn generator_orders_by_brute_force() {
        let f64 = FieldContext::new(2, 6).unwrap();
        assert_eq!(brute_order(&f64, f64.generator()), 63);
        let f81 = FieldContext::new(3, 4).unwrap();
        assert_eq!(brute_order(&f81, f81.generator()), 80);
    }

    #[test]
    fn exhaustive_inverses_and_frobenius_homomorphism() {
        for (ell, d) in [(2, 6), (3, 4), (5, 2)] {
            let f = FieldContext::new(ell, d).unwrap();
            for x in f.elements() {
                if !x.is_zero() {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
                }
                assert_eq!(f.frobenius(x, d as u64), x);
                for y in f.elements() {
                    let fx = f.frobenius(x, 1);
                    let fy = f.frobenius(y, 1);
                    assert_eq!(f.frobenius(f.add(x, y), 1), f.add(fx, fy));
                    assert_eq!(f.frobenius(f.mul(x, y), 1), f.mul(fx, fy));
                }
            }
        }
    }

    #[test]
    fn table_and_polynomial_paths_agree() {
        for (ell, d) in [(2, 6), (3, 4)] {
            let f = FieldContext::new(ell, d).unwrap();
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!(f.mul(x, y), f.mul_poly(x, y));
                    assert_eq!(f.add(x, y), f.add_digits(x, y));
                }
            }
        }
    }

    #[test]
    fn frobenius_squares_t() {
        let f = FieldContext::new(2, 6).unwrap();
        let t = f.from_coeffs(&[0, 1]);
        assert_eq!(f.frobenius(t, 1), f.mul(t, t));
        let one = f.one();
        assert_eq!(f.frobenius(one, 3), one);
    }

    #[test]
    fn roots_of_unity() {
        let f = FieldContext::new(2, 6).unwrap();
        assert_eq!(f.root_of_unity(1).unwrap(), f.one());
        let z3 = f.root_of_unity(3).unwrap();
        assert_ne!(z3, f.one());
        assert_eq!(f.pow(z3, 3), f.one());
        assert!(matches!(
            f.root_of_unity(5),
            Err(FieldError::NoRootOfUnity { .. })
        ));
        let z7 = f.root_of_unity(7).unwrap();
        for k in 0..30 {
            assert_eq!(f.pow(z7, k) == f.one(), k % 7 == 0);
        }
    }

    #[test]
    fn errors() {
        assert_eq!(FieldContext::new(4, 2).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(FieldContext::new(2, 0).unwrap_err(), FieldError::BadDegree(0));
        assert_eq!(FieldContext::new(2, 25).unwrap_err(), FieldError::BadDegree(25));
    }

    #[test]
    fn large_field_without_tables() {
        let f = FieldContext::new(2, 24).unwrap();
        assert!(f.tables.is_none());
        let g = f.generator();
        assert_eq!(f.pow(g, f.order() - 1), f.one());
        let x = f.from_coeffs(&[1, 0, 1, 1]);
        assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
        let g3 = FieldContext::new(3, 16).unwrap();
        let y = g3.from_coeffs(&[2, 1, 0, 2]);
        assert_eq!(g3.mul(y, g3.inv(y).unwrap()), g3.one());
        assert_eq!(g3.add(y, g3.neg(y)), g3.zero());
    }
}
