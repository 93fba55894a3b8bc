//! Primitive parts, factorization, Gaussian binomials and the bounded
//! Diophantine searches.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default iteration budget for one Pollard–Brent run.
pub const DEFAULT_RHO_BUDGET: u64 = 1 << 22;
/// Trial division limit.
pub const TRIAL_LIMIT: u64 = 1_000_000;
/// Largest bound accepted by the sieve-based searches.
pub const MAX_SEARCH_BOUND: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumthError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{a}^{e} - 1 does not fit in 64 bits")]
    Overflow { a: u64, e: u32 },
    #[error("factorization budget exhausted; found {found:?}, cofactor {cofactor} unfactored")]
    FactorizationBudget { found: Vec<(u64, u32)>, cofactor: u64 },
    #[error("search bound {bound} exceeds the cap of {MAX_SEARCH_BOUND}")]
    BoundTooLarge { bound: u64 },
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// One nontrivial factor of the odd composite `n`, or `None` when the
/// budget runs out.
fn pollard_brent(n: u64, budget: u64) -> Option<u64> {
    let mut spent = 0u64;
    for c in 1..n {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, m) = (2u64, 128u64);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
                spent += m;
                if spent > budget {
                    return None;
                }
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
pub fn factorize(n: u64, budget: u64) -> Result<Vec<(u64, u32)>, NumthError> {
    if n == 0 {
        return Err(NumthError::InvalidInput("cannot factor 0".into()));
    }
    let mut found: Vec<u64> = Vec::new();
    let mut rest = n;
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && p * p <= rest {
        while rest.is_multiple_of(p) {
            found.push(p);
            rest /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![rest];
    let mut stuck = 1u64;
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            found.push(m);
            continue;
        }
        match pollard_brent(m, budget) {
            Some(f) => {
                stack.push(f);
                stack.push(m / f);
            }
            None => stuck *= m,
        }
    }
    let collect = |mut v: Vec<u64>| {
        v.sort_unstable();
        let mut out: Vec<(u64, u32)> = Vec::new();
        for p in v {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    };
    if stuck != 1 {
        return Err(NumthError::FactorizationBudget { found: collect(found), cofactor: stuck });
    }
    Ok(collect(found))
}

/// The largest divisor of `a^e − 1` coprime to every `a^i − 1`, `i < e`.
pub fn primitive_part(a: u64, e: u32) -> Result<u64, NumthError> {
    primitive_part_with_budget(a, e, DEFAULT_RHO_BUDGET)
}

pub fn primitive_part_with_budget(a: u64, e: u32, budget: u64) -> Result<u64, NumthError> {
    if a < 2 || e < 1 {
        return Err(NumthError::InvalidInput(format!("need a >= 2 and e >= 1, got a = {a}, e = {e}")));
    }
    let n = a.checked_pow(e).ok_or(NumthError::Overflow { a, e })? - 1;
    let mut out = 1u64;
    for (p, k) in factorize(n, budget)? {
        if (1..e).all(|i| pow_mod(a, i as u64, p) != 1) {
            out *= p.pow(k);
        }
    }
    Ok(out)
}

/// Number of `t`-dimensional subspaces of an `h`-dimensional space over a
/// field of `q` elements; zero when `t > h`.
pub fn gaussian_binomial(h: u32, t: u32, q: u64) -> BigUint {
    if t > h {
        return BigUint::zero();
    }
    let qb = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..t {
        num *= qb.pow(h - i) - 1u32;
        den *= qb.pow(i + 1) - 1u32;
    }
    num / den
}

/// One divisibility test `[h, t]_q | v² − 8v + 11` with `v = (q^h−1)/(q−1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RidCheck {
    pub t: u32,
    pub binomial: BigUint,
    pub value: BigInt,
    pub divides: bool,
}

/// The checks for `t = 1, …, ⌊h/2⌋`.
pub fn check_eq_rid(h: u32, q: u64) -> Result<Vec<RidCheck>, NumthError> {
    if h < 2 || q < 2 {
        return Err(NumthError::InvalidInput(format!("need h >= 2 and q >= 2, got h = {h}, q = {q}")));
    }
    let qb = BigInt::from(q);
    let v: BigInt = (qb.pow(h) - 1) / (&qb - 1);
    let value: BigInt = &v * &v - 8 * &v + 11;
    Ok((1..=h / 2)
        .map(|t| {
            let binomial = gaussian_binomial(h, t, q);
            let divides = (&value % BigInt::from(binomial.clone())).is_zero();
            RidCheck { t, binomial, value: value.clone(), divides }
        })
        .collect())
}

/// `(s + 2) / gcd(s + 2, 3(a − 1)·aut_order)`.
pub fn compute_rho(s: u64, a: u64, aut_order: &BigUint) -> Result<BigUint, NumthError> {
    if a < 2 || aut_order.is_zero() {
        return Err(NumthError::InvalidInput("need a >= 2 and a positive automorphism order".into()));
    }
    let top = BigUint::from(s) + 2u32;
    let other = BigUint::from(3 * (a - 1)) * aut_order;
    let g = top.gcd(&other);
    Ok(top / g)
}

/// Smallest-prime-factor table for `0..=n`.
fn spf_sieve(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// `(p, m)` with `n = p^m`, using the table.
fn as_prime_power(n: usize, spf: &[u32]) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = spf[n] as usize;
    let (mut rest, mut m) = (n, 0);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u64, m))
}

fn check_bound(bound: u64) -> Result<(), NumthError> {
    if bound > MAX_SEARCH_BOUND {
        return Err(NumthError::BoundTooLarge { bound });
    }
    Ok(())
}

/// A solution `(p^m, u, z)` with `u = p^m + 2` prime and `u | p^z − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivSolution {
    pub pm: u64,
    pub p: u64,
    pub m: u32,
    pub u: u64,
    pub z: u32,
}

/// All odd prime powers `p^m ≤ pm_max` with `u = p^m + 2` prime and all
/// `0 < z ≤ 4m` such that `u | p^z − 1`.
pub fn lemma_div_solutions(pm_max: u64) -> Result<Vec<DivSolution>, NumthError> {
    check_bound(pm_max)?;
    let spf = spf_sieve(pm_max as usize + 2);
    let mut out = Vec::new();
    for pm in (3..=pm_max).step_by(2) {
        let Some((p, m)) = as_prime_power(pm as usize, &spf) else { continue };
        let u = pm + 2;
        if spf[u as usize] as u64 != u {
            continue;
        }
        for z in 1..=4 * m {
            if pow_mod(p, z as u64, u) == 1 {
                out.push(DivSolution { pm, p, m, u, z });
            }
        }
    }
    Ok(out)
}

/// A solution of `u^h = p^m + 2` in primes `p`, `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PillaiSolution {
    pub p: u64,
    pub m: u32,
    pub u: u64,
    pub h: u32,
}

/// All `(p, m, u, h)` with `u^h = p^m + 2` and `3 ≤ p^m ≤ bound`, ordered by
/// `p^m`.
pub fn pillai_solutions(bound: u64) -> Result<Vec<PillaiSolution>, NumthError> {
    check_bound(bound)?;
    let spf = spf_sieve(bound as usize + 2);
    let mut out = Vec::new();
    for pm in 3..=bound as usize {
        let Some((p, m)) = as_prime_power(pm, &spf) else { continue };
        if let Some((u, h)) = as_prime_power(pm + 2, &spf) {
            out.push(PillaiSolution { p, m, u, h });
        }
    }
    Ok(out)
}

/// `d | n` for signed `n`, as in `(q − 1) | (h − 6)`.
pub fn divides_signed(d: i64, n: i64) -> bool {
    if d == 0 {
        return n == 0;
    }
    (BigInt::from(n) % BigInt::from(d).abs()).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..50).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(80, DEFAULT_RHO_BUDGET).unwrap(), vec![(2, 4), (5, 1)]);
        let n = 1_000_003u64 * 998_244_353;
        assert_eq!(factorize(n, DEFAULT_RHO_BUDGET).unwrap(), vec![(1_000_003, 1), (998_244_353, 1)]);
        assert_eq!(factorize(1, DEFAULT_RHO_BUDGET).unwrap(), vec![]);
        assert!(matches!(
            factorize(n, 0),
            Err(NumthError::FactorizationBudget { cofactor, .. }) if cofactor == n
        ));
    }

    #[test]
    fn primitive_parts() {
        assert_eq!(primitive_part(2, 6).unwrap(), 1);
        assert_eq!(primitive_part(3, 4).unwrap(), 5);
        assert_eq!(primitive_part(7, 2).unwrap(), 1);
        assert_eq!(primitive_part(3, 5).unwrap(), 121);
        assert_eq!(primitive_part(2, 1).unwrap(), 1);
        assert!(matches!(primitive_part(10, 30), Err(NumthError::Overflow { .. })));
        assert!(primitive_part(1, 3).is_err());
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 1, 7), BigUint::from(8u32));
        assert_eq!(gaussian_binomial(4, 2, 2), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(5, 0, 3), BigUint::one());
        assert_eq!(gaussian_binomial(2, 3, 3), BigUint::zero());
    }

    #[test]
    fn rid_rejects_known_pairs() {
        let c = check_eq_rid(6, 2).unwrap();
        assert_eq!(c[0].binomial, BigUint::from(63u32));
        assert_eq!(c[0].value, BigInt::from(3476));
        assert!(c.iter().all(|r| !r.divides));
        assert!(check_eq_rid(1, 2).is_err());
    }

    #[test]
    fn rho_values() {
        assert_eq!(compute_rho(27, 3, &BigUint::from(336u32)).unwrap(), BigUint::from(29u32));
        assert_eq!(compute_rho(125, 5, &BigUint::from(336u32)).unwrap(), BigUint::from(127u32));
        assert!(compute_rho(27, 3, &BigUint::zero()).is_err());
    }

    #[test]
    fn small_searches() {
        let d = lemma_div_solutions(3).unwrap();
        assert_eq!(d, vec![DivSolution { pm: 3, p: 3, m: 1, u: 5, z: 4 }]);
        assert_eq!(lemma_div_solutions(8).unwrap().len(), 1);
        let p = pillai_solutions(30).unwrap();
        assert!(p.contains(&PillaiSolution { p: 5, m: 2, u: 3, h: 3 }));
        assert!(matches!(pillai_solutions(MAX_SEARCH_BOUND + 1), Err(NumthError::BoundTooLarge { .. })));
    }

    #[test]
    fn signed_divisibility() {
        assert!(divides_signed(3, -3));
        assert!(divides_signed(1, -2));
        assert!(!divides_signed(7, 3));
        assert!(divides_signed(0, 0));
    }
}
