//! Known flag-transitive designs that can occur as induced designs on a
//! class, as a data table with parameter predicates.
//!
//! Two families are listed. The square family covers induced designs
//! 2-(λ², λ, λ/θ); the plus-six family covers 2-(λ+6, 3, λ/θ) with
//! `λ ≡ 1, 3 (mod 6)`. Group clauses are carried as text only.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::prime_power_decompose;
use crate::numth::divides_signed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("theta = {theta} does not divide lambda = {lambda}")]
    ThetaNotDividing { theta: u64, lambda: u64 },
}

/// Induced-design parameters `2-(c, k₀, λ/θ)` together with `λ` and `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogQuery {
    pub c: u64,
    pub k0: u64,
    pub lambda: u64,
    pub theta: u64,
}

impl CatalogQuery {
    fn induced_lambda(&self) -> u64 {
        self.lambda / self.theta
    }

    fn square_premise(&self) -> bool {
        self.c == self.lambda * self.lambda && self.k0 == self.lambda
    }

    fn plus_six_premise(&self) -> bool {
        self.c == self.lambda + 6 && self.k0 == 3 && self.lambda >= 3 && matches!(self.lambda % 6, 1 | 3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogFamily {
    Square,
    PlusSix,
}

/// One row of the table.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub label: &'static str,
    pub family: CatalogFamily,
    pub pattern: &'static str,
    pub group: &'static str,
    /// Smallest and largest group order allowed by the group clause, when
    /// the clause names fixed groups.
    pub order_bounds: Option<(u64, u64)>,
    /// Returns a description of the fitted parameters when the row applies.
    pub predicate: fn(&CatalogQuery) -> Option<String>,
}

/// A row that applies to a query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogMatch {
    pub label: String,
    pub family: CatalogFamily,
    pub pattern: String,
    pub group: String,
    pub order_bounds: Option<(u64, u64)>,
    pub fit: String,
}

fn two_power(n: u64) -> Option<u32> {
    n.is_power_of_two().then(|| n.trailing_zeros())
}

fn fixed(q: &CatalogQuery, c: u64, k0: u64, induced: u64, theta: u64) -> Option<String> {
    (q.c == c && q.k0 == k0 && q.induced_lambda() == induced && q.theta == theta)
        .then(|| format!("2-({c},{k0},{induced}), theta = {theta}"))
}

fn square(q: &CatalogQuery, f: impl FnOnce(&CatalogQuery) -> Option<String>) -> Option<String> {
    if q.square_premise() {
        f(q)
    } else {
        None
    }
}

/// `λ = p^m` and the induced design is a plane (`θ = λ`).
fn plane_order(q: &CatalogQuery) -> Option<(u64, u32)> {
    if q.theta != q.lambda {
        return None;
    }
    prime_power_decompose(q.lambda)
}

fn sq_1a(q: &CatalogQuery) -> Option<String> {
    square(q, |q| fixed(q, 36, 6, 2, 3))
}
fn sq_1b(q: &CatalogQuery) -> Option<String> {
    square(q, |q| fixed(q, 36, 6, 6, 1))
}
fn sq_1c(q: &CatalogQuery) -> Option<String> {
    square(q, |q| fixed(q, 144, 12, 3, 4))
}
fn sq_1d(q: &CatalogQuery) -> Option<String> {
    square(q, |q| fixed(q, 144, 12, 6, 2))
}
fn sq_2a_i(q: &CatalogQuery) -> Option<String> {
    square(q, |q| plane_order(q).map(|(p, m)| format!("affine plane of order {p}^{m}")))
}
fn sq_2a_ii(q: &CatalogQuery) -> Option<String> {
    square(q, |q| {
        let (p, m) = plane_order(q)?;
        (p == 2 && m % 4 == 2 && m >= 6).then(|| format!("order 2^{m}"))
    })
}
fn sq_2a_iii(q: &CatalogQuery) -> Option<String> {
    square(q, |q| (plane_order(q).is_some() && q.lambda == 9).then(|| "order 9".to_string()))
}
fn sq_2a_iv(q: &CatalogQuery) -> Option<String> {
    square(q, |q| (plane_order(q).is_some() && q.lambda == 27).then(|| "order 27".to_string()))
}
fn sq_2b(q: &CatalogQuery) -> Option<String> {
    square(q, |q| {
        let (p, m) = prime_power_decompose(q.lambda)?;
        let (tp, t) = if q.theta == 1 { (p, 0) } else { prime_power_decompose(q.theta)? };
        (tp == p && t <= m).then(|| format!("p = {p}, m = {m}, t = {t}"))
    })
}
fn sq_2c_i(q: &CatalogQuery) -> Option<String> {
    square(q, |q| {
        let m = two_power(q.c)?;
        (m % 4 == 0 && m > 0 && q.k0 == 1 << (m / 2) && q.induced_lambda() == 1 << (m / 4) && q.theta == 1 << (m / 4))
            .then(|| format!("m = {m}"))
    })
}
fn sq_2c_ii(q: &CatalogQuery) -> Option<String> {
    square(q, |q| {
        let m = two_power(q.c)?;
        (m % 4 == 2 && q.k0 == 1 << (m / 2) && matches!(q.theta, 1 | 2) && q.induced_lambda() * q.theta == 1 << (m / 2))
            .then(|| format!("m = {m}"))
    })
}
fn sq_2c_iii(q: &CatalogQuery) -> Option<String> {
    square(q, |q| {
        let m = two_power(q.c)?;
        (m % 3 == 0 && m > 0 && q.k0 == 1 << (m / 3) && q.induced_lambda() == 1 << (m / 3) && q.theta == 1)
            .then(|| format!("m = {m}"))
    })
}
fn sq_2c_iv(q: &CatalogQuery) -> Option<String> {
    square(q, |q| fixed(q, 16, 4, 4, 1))
}
fn sq_2c_v(q: &CatalogQuery) -> Option<String> {
    square(q, |q| fixed(q, 81, 9, 3, 3))
}

fn ps_1(q: &CatalogQuery) -> Option<String> {
    if !q.plus_six_premise() {
        return None;
    }
    let qq = q.induced_lambda() + 1;
    let f = two_power(qq).filter(|&f| f >= 1)?;
    let mut h = 1u32;
    let mut v = 1u64;
    while v < q.c {
        v = v * qq + 1;
        h += 1;
    }
    if v != q.c || h < 2 {
        return None;
    }
    let qh = qq.checked_pow(h)?;
    let theta_num = qh - 6 * qq + 5;
    let theta_den = (qq - 1) * (qq - 1);
    let ok = q.c % 3 != 2
        && divides_signed(qq as i64 - 1, h as i64 - 6)
        && theta_num.is_multiple_of(theta_den)
        && theta_num / theta_den == q.theta;
    ok.then(|| format!("q = 2^{f}, h = {h}"))
}
fn ps_2(q: &CatalogQuery) -> Option<String> {
    if !q.plus_six_premise() {
        return None;
    }
    fixed(q, 31, 3, 25, 1)
}
fn ps_3(q: &CatalogQuery) -> Option<String> {
    if !q.plus_six_premise() {
        return None;
    }
    let (p, h) = prime_power_decompose(q.c)?;
    (p == 3 && h >= 2 && q.lambda == q.c - 6 && q.theta == q.lambda).then(|| format!("h = {h}"))
}

/// The full table, in a fixed order.
pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        label: "square-1a",
        family: CatalogFamily::Square,
        pattern: "2-(36,6,2), theta = 3",
        group: "PSL(2,8) <= G <= PGammaL(2,8)",
        order_bounds: Some((504, 1512)),
        predicate: sq_1a,
    },
    CatalogEntry {
        label: "square-1b",
        family: CatalogFamily::Square,
        pattern: "2-(36,6,6), theta = 1",
        group: "G = PGammaL(2,8)",
        order_bounds: Some((1512, 1512)),
        predicate: sq_1b,
    },
    CatalogEntry {
        label: "square-1c",
        family: CatalogFamily::Square,
        pattern: "2-(144,12,3), theta = 4",
        group: "G = PSL(3,3)",
        order_bounds: Some((5616, 5616)),
        predicate: sq_1c,
    },
    CatalogEntry {
        label: "square-1d",
        family: CatalogFamily::Square,
        pattern: "2-(144,12,6), theta = 2",
        group: "G = PSL(3,3):2",
        order_bounds: Some((11232, 11232)),
        predicate: sq_1d,
    },
    CatalogEntry {
        label: "square-2a-i",
        family: CatalogFamily::Square,
        pattern: "desarguesian plane AG(2,p^m), theta = p^m",
        group: "G = T:G0",
        order_bounds: None,
        predicate: sq_2a_i,
    },
    CatalogEntry {
        label: "square-2a-ii",
        family: CatalogFamily::Square,
        pattern: "Luneburg plane of order 2^m, m = 2 mod 4, m >= 6, theta = 2^m",
        group: "Sz(2^(m/2)) <= G0 <= (Z_(2^(m/2)-1) x Sz(2^(m/2))).Z_(m/2)",
        order_bounds: None,
        predicate: sq_2a_ii,
    },
    CatalogEntry {
        label: "square-2a-iii",
        family: CatalogFamily::Square,
        pattern: "Hall plane of order 9, theta = 9",
        group: "G = T:G0",
        order_bounds: None,
        predicate: sq_2a_iii,
    },
    CatalogEntry {
        label: "square-2a-iv",
        family: CatalogFamily::Square,
        pattern: "Hering plane of order 27, theta = 27",
        group: "G0 = SL(2,13)",
        order_bounds: Some((2184, 2184)),
        predicate: sq_2a_iv,
    },
    CatalogEntry {
        label: "square-2b",
        family: CatalogFamily::Square,
        pattern: "2-(p^2m,p^m,p^(m-t)), theta = p^t, 0 <= t <= m",
        group: "G0 <= GammaL(1,p^2m)",
        order_bounds: None,
        predicate: sq_2b,
    },
    CatalogEntry {
        label: "square-2c-i",
        family: CatalogFamily::Square,
        pattern: "2-(2^m,2^(m/2),2^(m/4)), m = 0 mod 4, theta = 2^(m/4)",
        group: "SL(2,2^(m/2)) <= G0 <= GammaL(2,2^(m/2))",
        order_bounds: None,
        predicate: sq_2c_i,
    },
    CatalogEntry {
        label: "square-2c-ii",
        family: CatalogFamily::Square,
        pattern: "2-(2^m,2^(m/2),2^(m/2)/theta), m = 2 mod 4, theta in {1,2}",
        group: "Sz(2^(m/2)) <= G0 <= (Z_(2^(m/2)-1) x Sz(2^(m/2))).Z_(m/2)",
        order_bounds: None,
        predicate: sq_2c_ii,
    },
    CatalogEntry {
        label: "square-2c-iii",
        family: CatalogFamily::Square,
        pattern: "2-(2^m,2^(m/3),2^(m/3)), m = 0 mod 3, theta = 1",
        group: "G2(2^(m/3)) <= G0 <= (Z_(2^(m/3)-1) x G2(2^(m/3))).Z_(m/3)",
        order_bounds: None,
        predicate: sq_2c_iii,
    },
    CatalogEntry {
        label: "square-2c-iv",
        family: CatalogFamily::Square,
        pattern: "2-(16,4,4), theta = 1",
        group: "A6 <= G0 <= S6",
        order_bounds: Some((360, 720)),
        predicate: sq_2c_iv,
    },
    CatalogEntry {
        label: "square-2c-v",
        family: CatalogFamily::Square,
        pattern: "2-(81,9,3), theta = 3",
        group: "SL(2,5) <= G0 <= (Z_2.S5-):Z_2",
        order_bounds: Some((120, 480)),
        predicate: sq_2c_v,
    },
    CatalogEntry {
        label: "plus-six-1",
        family: CatalogFamily::PlusSix,
        pattern: "2-((q^h-1)/(q-1),3,q-1), q even, v = 0,1 mod 3, q-1 | h-6, theta = (q^h-6q+5)/(q-1)^2",
        group: "PSL(h,q) <= G <= PGammaL(h,q), or G = A7 with (h,q) = (4,2)",
        order_bounds: None,
        predicate: ps_1,
    },
    CatalogEntry {
        label: "plus-six-2",
        family: CatalogFamily::PlusSix,
        pattern: "2-(31,3,25), theta = 1",
        group: "PSL(3,5) <= G <= PGL(3,5)",
        order_bounds: Some((372000, 372000)),
        predicate: ps_2,
    },
    CatalogEntry {
        label: "plus-six-3",
        family: CatalogFamily::PlusSix,
        pattern: "AG(h,3), h >= 2, lambda = theta = 3^h - 6",
        group: "G affine",
        order_bounds: None,
        predicate: ps_3,
    },
];

/// All rows whose pattern and constraints admit `(c, k₀, λ, θ)`.
pub fn match_catalog(c: u64, k0: u64, lambda: u64, theta: u64) -> Result<Vec<CatalogMatch>, CatalogError> {
    if theta == 0 || !lambda.is_multiple_of(theta) {
        return Err(CatalogError::ThetaNotDividing { theta, lambda });
    }
    let q = CatalogQuery { c, k0, lambda, theta };
    Ok(CATALOG
        .iter()
        .filter_map(|e| {
            (e.predicate)(&q).map(|fit| CatalogMatch {
                label: e.label.to_string(),
                family: e.family,
                pattern: e.pattern.to_string(),
                group: e.group.to_string(),
                order_bounds: e.order_bounds,
                fit,
            })
        })
        .collect())
}
