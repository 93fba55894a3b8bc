//! Finite fields GF(p^e) of at most 2^16 elements.
//!
//! An element is a `u32` whose base-`p` digits, lowest first, are its
//! coefficients as a polynomial over GF(p) reduced modulo the field's
//! modulus. `0` is zero and `1` is one. Multiplication goes through
//! log/exp tables built from the smallest primitive element.

use thiserror::Error;

pub const MAX_FIELD_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field size {p}^{e} exceeds the cap of {MAX_FIELD_SIZE}")]
    TooLarge { p: u64, e: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl std::fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({}^{}; modulus {:?})", self.p, self.e, self.modulus)
    }
}

fn is_small_prime(n: u64) -> bool {
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

/// `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power_decompose(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p - (lead * c) % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Monic polynomials of degree `deg`, lowest coefficient first.
fn monic_of_degree(deg: usize, p: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(deg as u32);
    (0..count).map(move |mut n| {
        let mut c = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            c.push((n % p as u64) as u32);
            n /= p as u64;
        }
        c.push(1);
        c
    })
}

/// Irreducible over GF(p): no monic factor of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    (1..=deg / 2).all(|d| monic_of_degree(d, p).all(|f| !poly_rem(poly, &f, p).is_empty()))
}

/// Smallest monic irreducible of degree `e`, comparing `c0` first.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let e = e as usize;
    let count = (p as u64).pow(e as u32);
    for n in 0..count {
        let mut c = vec![0u32; e + 1];
        let mut rest = n;
        for i in (0..e).rev() {
            c[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        c[e] = 1;
        if is_irreducible(&c, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    pub fn new(p: u64, e: u32) -> Result<Self, FieldError> {
        if !is_small_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        match p.checked_pow(e) {
            Some(q) if q <= MAX_FIELD_SIZE => {}
            _ => return Err(FieldError::TooLarge { p, e }),
        }
        let p = p as u32;
        let q = p.pow(e);
        let modulus = smallest_irreducible(p, e);
        let mut field = FiniteField {
            p,
            e,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    /// GF(q) for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        let (p, e) = prime_power_decompose(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, e)
    }

    fn to_poly(&self, mut x: u32) -> Vec<u32> {
        let mut c = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            c.push(x % self.p);
            x /= self.p;
        }
        trim(c)
    }

    fn encode_poly(&self, c: &[u32]) -> u32 {
        c.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let prod = poly_mul(&self.to_poly(a), &self.to_poly(b), self.p);
        self.encode_poly(&poly_rem(&prod, &self.modulus, self.p))
    }

    fn build_tables(&mut self) {
        let n = self.q - 1;
        for g in 1..self.q {
            let mut exp = Vec::with_capacity(n as usize);
            let mut x = 1u32;
            loop {
                exp.push(x);
                x = self.slow_mul(x, g);
                if x == 1 {
                    break;
                }
            }
            if exp.len() as u32 == n {
                let mut log = vec![0u32; self.q as usize];
                for (i, &y) in exp.iter().enumerate() {
                    log[y as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients `c0 … c_e` of the modulus (monic, so `c_e = 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The generator of the multiplicative group used for the log tables.
    pub fn primitive_element(&self) -> u32 {
        self.exp.get(1).copied().unwrap_or(1)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.e {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let mut a = a;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.e {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(s % n) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (k % n)) % n) as usize]
    }

    /// `ω^k` for the primitive element `ω`.
    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % (self.q as u64 - 1)) as usize]
    }

    /// The Frobenius automorphism `x ↦ x^p`.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn prime_fields() {
        let f = FiniteField::new(3, 1).unwrap();
        assert_eq!(f.order(), 3);
        assert_eq!(f.add(2, 2), 1);
        assert_eq!(f.mul(2, 2), 1);
        assert_eq!(f.inv(2), Some(2));
        assert_eq!(f.neg(1), 2);
    }

    #[test]
    fn field_of_four() {
        let f = FiniteField::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // x * x = x + 1
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn modulus_of_gf25_is_smallest_irreducible() {
        // oracle: a monic quadratic is irreducible iff it has no root
        let p = 5u32;
        let mut irreducible = Vec::new();
        for c0 in 0..p {
            for c1 in 0..p {
                let has_root = (0..p).any(|x| (x * x + c1 * x + c0) % p == 0);
                if !has_root {
                    irreducible.push(vec![c0, c1, 1]);
                }
            }
        }
        assert_eq!(irreducible.len(), 10);
        irreducible.sort();
        let f = FiniteField::new(5, 2).unwrap();
        assert_eq!(f.modulus(), irreducible[0].as_slice());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FiniteField::new(4, 1), Err(FieldError::NotPrime(4)));
        assert!(matches!(FiniteField::new(2, 17), Err(FieldError::TooLarge { .. })));
        assert_eq!(FiniteField::new(2, 0), Err(FieldError::ZeroDegree));
        assert_eq!(FiniteField::of_order(6), Err(FieldError::NotPrimePower(6)));
        assert_eq!(FiniteField::of_order(8).unwrap().degree(), 3);
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for (p, e) in [(2, 3), (3, 2), (5, 2), (2, 4), (7, 1), (3, 3)] {
            let f = FiniteField::new(p, e).unwrap();
            let q = f.order();
            for a in 1..q {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for _ in 0..200 {
                let (a, b, c) = (rng.gen_range(0..q), rng.gen_range(0..q), rng.gen_range(0..q));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
                assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
            }
        }
    }

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power_decompose(27), Some((3, 3)));
        assert_eq!(prime_power_decompose(7), Some((7, 1)));
        assert_eq!(prime_power_decompose(12), None);
        assert_eq!(prime_power_decompose(1), None);
    }
}
