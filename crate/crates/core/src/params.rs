//! Closed-form parameter families of symmetric designs with an invariant
//! partition, and the arithmetic filters applied to them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::prime_power_decompose;
use crate::numth::divides_signed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("lambda = {lambda} is below the minimum {min}")]
    LambdaTooSmall { lambda: u64, min: u64 },
    #[error("lambda = {0} is not 1 or 3 mod 6")]
    Congruence(u64),
    #[error("lambda = {0} is neither 0 mod 4 nor 2u^2 with u odd, u >= 3 and 2(u^2 - 1) a square")]
    SecondVariant(u64),
    #[error("arithmetic overflow for lambda = {0}")]
    Overflow(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("h = {0} is below 2")]
    DimensionTooSmall(u64),
    #[error("r = lambda(v-1)/(k-1) = {numerator}/{denominator} is not an integer")]
    NonIntegralR { numerator: u64, denominator: u64 },
    #[error("block size k = {0} must be at least 2")]
    BlockSizeTooSmall(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `k₀ = λ`, `(c, d) = (λ², λ + 2)`.
    Type1,
    /// `k₀ = 3`, `c = λ + 6`.
    Type2,
    /// `k₀ = 2`, `(c, d) = (λ + 2, λ²)`.
    PairsFirst,
    /// `k₀ = 2`, `(c, d) = ((λ + 2)/2, (λ² − 2λ + 2)/2)`.
    PairsSecond,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Type1 => "type1",
            Family::Type2 => "type2",
            Family::PairsFirst => "k0eq2-first",
            Family::PairsSecond => "k0eq2-second",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairsVariant {
    First,
    Second,
}

/// Parameters of a symmetric 2-(v, k, λ) design with `d` classes of size
/// `c` and trace size `k₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignParameters {
    pub family: Family,
    pub lambda: u64,
    pub v: u64,
    pub b: u64,
    pub k: u64,
    pub r: u64,
    pub c: u64,
    pub d: u64,
    pub k0: u64,
}

impl DesignParameters {
    fn symmetric(family: Family, lambda: u64, v: u64, k: u64, c: u64, d: u64, k0: u64) -> Self {
        let p = DesignParameters { family, lambda, v, b: v, k, r: k, c, d, k0 };
        debug_assert!(p.identities_hold());
        p
    }

    /// `λ(v − 1) = k(k − 1)` and `v = c·d`.
    pub fn identities_hold(&self) -> bool {
        let lhs = self.lambda as u128 * (self.v as u128 - 1);
        let rhs = self.k as u128 * (self.k as u128 - 1);
        lhs == rhs && self.v as u128 == self.c as u128 * self.d as u128
    }
}

fn checked(lambda: u64, f: impl FnOnce(u128) -> Option<u128>) -> Result<u64, ParamError> {
    f(lambda as u128)
        .and_then(|x| u64::try_from(x).ok())
        .ok_or(ParamError::Overflow(lambda))
}

/// `v = λ²(λ+2)`, `k = λ(λ+1)`, `(c, d) = (λ², λ+2)`, `k₀ = λ`.
pub fn type1_params(lambda: u64) -> Result<DesignParameters, ParamError> {
    if lambda < 3 {
        return Err(ParamError::LambdaTooSmall { lambda, min: 3 });
    }
    let v = checked(lambda, |l| l.checked_mul(l)?.checked_mul(l + 2))?;
    let k = checked(lambda, |l| l.checked_mul(l + 1))?;
    let c = checked(lambda, |l| l.checked_mul(l))?;
    Ok(DesignParameters::symmetric(Family::Type1, lambda, v, k, c, lambda + 2, lambda))
}

/// `v = (λ+6)(λ²+4λ−1)/4`, `k = λ(λ+5)/2`, `(c, d) = (λ+6, (λ²+4λ−1)/4)`,
/// `k₀ = 3`, for `λ ≡ 1, 3 (mod 6)`.
pub fn type2_params(lambda: u64) -> Result<DesignParameters, ParamError> {
    if lambda < 3 {
        return Err(ParamError::LambdaTooSmall { lambda, min: 3 });
    }
    if lambda % 6 != 1 && lambda % 6 != 3 {
        return Err(ParamError::Congruence(lambda));
    }
    let q = checked(lambda, |l| l.checked_mul(l)?.checked_add(4 * l)?.checked_sub(1))?;
    assert_eq!(q % 4, 0, "lambda^2 + 4 lambda - 1 is divisible by 4 for odd lambda");
    let d = q / 4;
    let c = lambda + 6;
    let v = checked(lambda, |_| (c as u128).checked_mul(d as u128))?;
    let k = checked(lambda, |l| Some(l * (l + 5) / 2))?;
    Ok(DesignParameters::symmetric(Family::Type2, lambda, v, k, c, d, 3))
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Whether `λ` satisfies the side condition of the second `k₀ = 2` variant.
pub fn second_variant_admissible(lambda: u64) -> bool {
    if lambda.is_multiple_of(4) {
        return lambda > 0;
    }
    if !lambda.is_multiple_of(2) {
        return false;
    }
    let half = lambda / 2;
    let u = isqrt(half);
    u * u == half && u % 2 == 1 && u >= 3 && is_square(2 * (u * u - 1))
}

/// The two `k₀ = 2` families.
pub fn k0eq2_params(lambda: u64, variant: PairsVariant) -> Result<DesignParameters, ParamError> {
    if lambda < 2 {
        return Err(ParamError::LambdaTooSmall { lambda, min: 2 });
    }
    match variant {
        PairsVariant::First => {
            let v = checked(lambda, |l| l.checked_mul(l)?.checked_mul(l + 2))?;
            let k = checked(lambda, |l| l.checked_mul(l + 1))?;
            let d = checked(lambda, |l| l.checked_mul(l))?;
            Ok(DesignParameters::symmetric(Family::PairsFirst, lambda, v, k, lambda + 2, d, 2))
        }
        PairsVariant::Second => {
            if !second_variant_admissible(lambda) {
                return Err(ParamError::SecondVariant(lambda));
            }
            let c = (lambda + 2) / 2;
            let d = checked(lambda, |l| Some((l.checked_mul(l)? - 2 * l + 2) / 2))?;
            let v = checked(lambda, |_| (c as u128).checked_mul(d as u128))?;
            let k = checked(lambda, |l| Some(l.checked_mul(l)? / 2))?;
            Ok(DesignParameters::symmetric(Family::PairsSecond, lambda, v, k, c, d, 2))
        }
    }
}

/// All admissible rows of one family for `λ ≤ lambda_max`.
pub fn enumerate(family: Family, lambda_max: u64) -> Result<Vec<DesignParameters>, ParamError> {
    let mut out = Vec::new();
    for lambda in 2..=lambda_max {
        let row = match family {
            Family::Type1 => type1_params(lambda),
            Family::Type2 => type2_params(lambda),
            Family::PairsFirst => k0eq2_params(lambda, PairsVariant::First),
            Family::PairsSecond => k0eq2_params(lambda, PairsVariant::Second),
        };
        match row {
            Ok(p) => out.push(p),
            Err(ParamError::Overflow(l)) => return Err(ParamError::Overflow(l)),
            Err(_) => {}
        }
    }
    Ok(out)
}

/// `λ² ≤ λ(λ+5)/2`, i.e. `λ ≤ 5`.
pub fn type2_theta_filter(lambda: u64) -> bool {
    2 * (lambda as u128) * (lambda as u128) <= (lambda as u128) * (lambda as u128 + 5)
}

/// Evaluation of the constraints on the projective triple families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleFamilyConstraints {
    pub h: u64,
    pub q: u64,
    pub v: u64,
    pub q_even: bool,
    pub v_mod_3_ok: bool,
    /// `(q − 1) | (h − 6)`.
    pub q_minus_1_divides_h_minus_6: bool,
    pub collinear_lambda: u64,
    /// `(q − 1) | (v − 6)`.
    pub collinear_lambda_divides_v_minus_6: bool,
    /// `q²(q^{h−2} − 1)/(q − 1)`.
    pub noncollinear_lambda: u64,
    pub noncollinear_lambda_divides_v_minus_6: bool,
    /// The first four checks together.
    pub collinear_family_passes: bool,
}

pub fn appendix_family_constraints(h: u64, q: u64) -> Result<TripleFamilyConstraints, ParamError> {
    if h < 2 {
        return Err(ParamError::DimensionTooSmall(h));
    }
    prime_power_decompose(q).ok_or(ParamError::NotPrimePower(q))?;
    let overflow = || ParamError::Overflow(q);
    let qh = q.checked_pow(h as u32).ok_or_else(overflow)?;
    let v = (qh - 1) / (q - 1);
    let noncollinear_lambda = q
        .checked_mul(q)
        .and_then(|q2| q2.checked_mul((q.pow(h as u32 - 2) - 1) / (q - 1)))
        .ok_or_else(overflow)?;
    let vm6 = v as i64 - 6;
    let q_even = q.is_multiple_of(2);
    let v_mod_3_ok = v % 3 != 2;
    let q_minus_1_divides_h_minus_6 = divides_signed(q as i64 - 1, h as i64 - 6);
    let collinear_lambda_divides_v_minus_6 = divides_signed(q as i64 - 1, vm6);
    let noncollinear_lambda_divides_v_minus_6 =
        noncollinear_lambda != 0 && divides_signed(noncollinear_lambda as i64, vm6);
    Ok(TripleFamilyConstraints {
        h,
        q,
        v,
        q_even,
        v_mod_3_ok,
        q_minus_1_divides_h_minus_6,
        collinear_lambda: q - 1,
        collinear_lambda_divides_v_minus_6,
        noncollinear_lambda,
        noncollinear_lambda_divides_v_minus_6,
        collinear_family_passes: q_even
            && v_mod_3_ok
            && q_minus_1_divides_h_minus_6
            && collinear_lambda_divides_v_minus_6,
    })
}

/// `r = λ(v−1)/(k−1)` and whether `2r = λ(v − 1)`, which is an identity
/// exactly when `k = 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplicationRatio {
    pub r: u64,
    pub holds: bool,
    pub applicable: bool,
}

pub fn lemma_pp_ratio(v: u64, k: u64, lambda: u64) -> Result<ReplicationRatio, ParamError> {
    if k < 2 {
        return Err(ParamError::BlockSizeTooSmall(k));
    }
    let numerator = lambda
        .checked_mul(v.saturating_sub(1))
        .ok_or(ParamError::Overflow(lambda))?;
    let denominator = k - 1;
    if numerator % denominator != 0 {
        return Err(ParamError::NonIntegralR { numerator, denominator });
    }
    let r = numerator / denominator;
    let holds = 2 * r as u128 == numerator as u128;
    if k == 3 {
        assert!(holds, "r/lambda = (v-1)/2 is an identity for k = 3");
    }
    Ok(ReplicationRatio { r, holds, applicable: k == 3 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type1_rows() {
        let p = type1_params(3).unwrap();
        assert_eq!((p.v, p.k, p.lambda, p.c, p.d, p.k0), (45, 12, 3, 9, 5, 3));
        let p = type1_params(4).unwrap();
        assert_eq!((p.v, p.k, p.c, p.d), (96, 20, 16, 6));
        assert!(type1_params(2).is_err());
    }

    #[test]
    fn type2_rows() {
        let p = type2_params(3).unwrap();
        assert_eq!((p.v, p.k, p.c, p.d), (45, 12, 9, 5));
        let p = type2_params(7).unwrap();
        assert_eq!((p.v, p.k, p.c, p.d), (247, 42, 13, 19));
        assert_eq!(type2_params(5), Err(ParamError::Congruence(5)));
    }

    #[test]
    fn pairs_rows() {
        let p = k0eq2_params(4, PairsVariant::Second).unwrap();
        assert_eq!((p.v, p.k, p.c, p.d), (15, 8, 3, 5));
        let p = k0eq2_params(18, PairsVariant::Second).unwrap();
        assert_eq!((p.v, p.k, p.c, p.d), (1450, 162, 10, 145));
        assert_eq!(k0eq2_params(6, PairsVariant::Second), Err(ParamError::SecondVariant(6)));
        let p = k0eq2_params(3, PairsVariant::First).unwrap();
        assert_eq!((p.v, p.c, p.d, p.k0), (45, 5, 9, 2));
    }

    #[test]
    fn identities_for_all_rows() {
        for fam in [Family::Type1, Family::Type2, Family::PairsFirst, Family::PairsSecond] {
            for p in enumerate(fam, 1000).unwrap() {
                assert!(p.identities_hold(), "{p:?}");
            }
        }
    }

    #[test]
    fn theta_filter() {
        assert!(type2_theta_filter(3));
        assert!(type2_theta_filter(5));
        assert!(!type2_theta_filter(7));
    }

    #[test]
    fn triple_family_constraints() {
        let c = appendix_family_constraints(4, 2).unwrap();
        assert!(c.collinear_family_passes);
        assert_eq!(c.v, 15);
        let c = appendix_family_constraints(3, 5).unwrap();
        assert_eq!(c.noncollinear_lambda, 25);
        assert!(c.noncollinear_lambda_divides_v_minus_6);
        assert!(!c.q_even);
        let c = appendix_family_constraints(3, 4).unwrap();
        assert!(c.q_minus_1_divides_h_minus_6 && c.v_mod_3_ok && c.collinear_lambda_divides_v_minus_6);
        assert_eq!(appendix_family_constraints(3, 6), Err(ParamError::NotPrimePower(6)));
    }

    #[test]
    fn replication_ratio() {
        let r = lemma_pp_ratio(31, 3, 25).unwrap();
        assert_eq!((r.r, r.holds, r.applicable), (375, true, true));
        let r = lemma_pp_ratio(45, 12, 3).unwrap();
        assert_eq!((r.r, r.holds, r.applicable), (12, false, false));
        assert!(matches!(lemma_pp_ratio(11, 4, 1), Err(ParamError::NonIntegralR { .. })));
    }
}
