//! Projective and affine point sets over small fields, the triple designs
//! and line designs built on them, and their classical groups.
//!
//! Projective points are normalized so the first nonzero coordinate is 1.
//! Both point lists are sorted lexicographically by coordinates, where a
//! coordinate is compared by its field-element index. Matrices act on row
//! vectors from the right, which keeps products left to right.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use thiserror::Error;

use crate::design::IncidenceStructure;
use crate::field::{FieldError, FiniteField};
use crate::group::{GroupError, PermutationGroup};
use crate::perm::Permutation;

/// Largest point count for any point set.
pub const MAX_POINTS: u64 = 1 << 16;
/// Largest block count for a constructed design.
pub const MAX_BLOCKS: u64 = 2_000_000;
/// Largest degree for the classical group constructions.
pub const MAX_GROUP_DEGREE: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("dimension h = {h} is below the minimum {min}")]
    DimensionTooSmall { h: usize, min: usize },
    #[error("{what} count {count} exceeds the cap of {cap}")]
    TooLarge { what: &'static str, count: BigUint, cap: u64 },
    #[error("group order {found} differs from the expected {expected}")]
    OrderMismatch { found: BigUint, expected: BigUint },
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn cap(what: &'static str, count: BigUint, limit: u64) -> Result<(), GeometryError> {
    if count > BigUint::from(limit) {
        return Err(GeometryError::TooLarge { what, count, cap: limit });
    }
    Ok(())
}

fn field_and_size(h: usize, q: u64, min_h: usize) -> Result<FiniteField, GeometryError> {
    if h < min_h {
        return Err(GeometryError::DimensionTooSmall { h, min: min_h });
    }
    let f = FiniteField::of_order(q)?;
    cap("point", BigUint::from(q).pow(h as u32), MAX_POINTS)?;
    Ok(f)
}

/// All vectors of length `h` over `f`, in lexicographic order.
fn all_vectors(f: &FiniteField, h: usize) -> Vec<Vec<u32>> {
    let q = f.order();
    let total = (q as usize).pow(h as u32);
    (0..total)
        .map(|mut n| {
            let mut v = vec![0u32; h];
            for c in v.iter_mut().rev() {
                *c = (n % q as usize) as u32;
                n /= q as usize;
            }
            v
        })
        .collect()
}

fn normalize(f: &FiniteField, v: &[u32]) -> Option<Vec<u32>> {
    let lead = *v.iter().find(|&&c| c != 0)?;
    let inv = f.inv(lead).expect("nonzero");
    Some(v.iter().map(|&c| f.mul(c, inv)).collect())
}

/// A projective or affine point set with a coordinate index.
#[derive(Debug, Clone)]
pub struct PointSet {
    field: FiniteField,
    h: usize,
    points: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    projective: bool,
}

impl PointSet {
    /// Points of `PG_{h−1}(q)`, as normalized vectors of length `h`.
    pub fn projective(h: usize, q: u64) -> Result<Self, GeometryError> {
        let field = field_and_size(h, q, 1)?;
        let points: Vec<Vec<u32>> = all_vectors(&field, h)
            .into_iter()
            .filter(|v| v.iter().find(|&&c| c != 0) == Some(&1))
            .collect();
        Ok(Self::from_points(field, h, points, true))
    }

    /// Points of `AG_h(q)`, all vectors of length `h`.
    pub fn affine(h: usize, q: u64) -> Result<Self, GeometryError> {
        let field = field_and_size(h, q, 1)?;
        let points = all_vectors(&field, h);
        Ok(Self::from_points(field, h, points, false))
    }

    fn from_points(field: FiniteField, h: usize, points: Vec<Vec<u32>>, projective: bool) -> Self {
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        PointSet { field, h, points, index, projective }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn dimension(&self) -> usize {
        self.h
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<u32>] {
        &self.points
    }

    /// Index of a coordinate vector; projective vectors are normalized first.
    pub fn index_of(&self, v: &[u32]) -> Option<usize> {
        if self.projective {
            self.index.get(&normalize(&self.field, v)?).copied()
        } else {
            self.index.get(v).copied()
        }
    }

    /// `a·u + b·w`, coordinatewise.
    fn combine(&self, a: u32, u: &[u32], b: u32, w: &[u32]) -> Vec<u32> {
        let f = &self.field;
        u.iter().zip(w).map(|(&x, &y)| f.add(f.mul(a, x), f.mul(b, y))).collect()
    }

    /// Sorted point indices of the line through points `i ≠ j`.
    pub fn line_through(&self, i: usize, j: usize) -> Vec<usize> {
        let (u, w) = (&self.points[i], &self.points[j]);
        let q = self.field.order();
        let mut line: Vec<usize> = if self.projective {
            std::iter::once(i)
                .chain((0..q).map(|a| self.index_of(&self.combine(a, u, 1, w)).unwrap()))
                .collect()
        } else {
            let dir = self.combine(1, w, self.field.neg(1), u);
            (0..q).map(|a| self.index_of(&self.combine(1, u, a, &dir)).unwrap()).collect()
        };
        line.sort_unstable();
        line
    }

    /// All lines, each sorted, ordered by their two smallest points.
    pub fn lines(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let line = self.line_through(i, j);
                if line[0] == i && line[1] == j {
                    out.push(line);
                }
            }
        }
        out
    }

    /// The permutation of points induced by `x ↦ x·m + t` (with `x ↦ x^σ`
    /// applied to coordinates first, when given).
    fn semilinear_perm(&self, m: &[Vec<u32>], t: Option<&[u32]>, frob: bool) -> Permutation {
        let f = &self.field;
        let images = self
            .points
            .iter()
            .map(|x| {
                let x: Vec<u32> = if frob { x.iter().map(|&c| f.frobenius(c)).collect() } else { x.clone() };
                let mut y: Vec<u32> = (0..self.h)
                    .map(|col| (0..self.h).fold(0, |acc, row| f.add(acc, f.mul(x[row], m[row][col]))))
                    .collect();
                if let Some(t) = t {
                    y = y.iter().zip(t).map(|(&a, &b)| f.add(a, b)).collect();
                }
                self.index_of(&y).expect("image of a point is a point")
            })
            .collect();
        Permutation::from_images(images).expect("invertible maps permute points")
    }
}

/// Normalized points of `PG_{h−1}(q)`.
pub fn pg_points(h: usize, q: u64) -> Result<Vec<Vec<u32>>, GeometryError> {
    Ok(PointSet::projective(h, q)?.points)
}

/// Points of `AG_h(q)`.
pub fn ag_points(h: usize, q: u64) -> Result<Vec<Vec<u32>>, GeometryError> {
    Ok(PointSet::affine(h, q)?.points)
}

fn binom3(n: u64) -> BigUint {
    let n = BigUint::from(n);
    if n < BigUint::from(3u32) {
        return BigUint::from(0u32);
    }
    &n * (&n - 1u32) * (&n - 2u32) / 6u32
}

fn projective_counts(h: usize, q: u64) -> (u64, BigUint) {
    let v = (q.pow(h as u32) - 1) / (q - 1);
    let lines = BigUint::from(v) * (v - 1) / ((q + 1) * q);
    (v, lines)
}

/// Collinear triples of `PG_{h−1}(q)`: a 2-((q^h−1)/(q−1), 3, q−1) design.
pub fn collinear_triples_design(h: usize, q: u64) -> Result<IncidenceStructure, GeometryError> {
    if h < 3 {
        return Err(GeometryError::DimensionTooSmall { h, min: 3 });
    }
    field_and_size(h, q, 3)?;
    let (_, lines) = projective_counts(h, q);
    cap("block", lines * binom3(q + 1), MAX_BLOCKS)?;
    let space = PointSet::projective(h, q)?;
    let mut blocks = Vec::new();
    for line in space.lines() {
        let m = line.len();
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    blocks.push(vec![line[a], line[b], line[c]]);
                }
            }
        }
    }
    blocks.sort_unstable();
    Ok(IncidenceStructure::new(space.len(), blocks).expect("distinct triples"))
}

/// Triples of `PG_{h−1}(q)` not on a line:
/// a 2-((q^h−1)/(q−1), 3, q²(q^{h−2}−1)/(q−1)) design.
pub fn noncollinear_triples_design(h: usize, q: u64) -> Result<IncidenceStructure, GeometryError> {
    if h < 3 {
        return Err(GeometryError::DimensionTooSmall { h, min: 3 });
    }
    field_and_size(h, q, 3)?;
    let (v, lines) = projective_counts(h, q);
    cap("block", binom3(v) - lines * binom3(q + 1), MAX_BLOCKS)?;
    let space = PointSet::projective(h, q)?;
    let n = space.len();
    let mut line_of = vec![u32::MAX; n * n];
    for (li, line) in space.lines().iter().enumerate() {
        for &a in line {
            for &b in line {
                line_of[a * n + b] = li as u32;
            }
        }
    }
    let mut blocks = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let l = line_of[a * n + b];
            for c in b + 1..n {
                if line_of[a * n + c] != l {
                    blocks.push(vec![a, b, c]);
                }
            }
        }
    }
    Ok(IncidenceStructure::new(n, blocks).expect("distinct triples"))
}

/// Lines of `AG_h(q)`: a 2-(q^h, q, 1) design.
pub fn ag_lines_design(h: usize, q: u64) -> Result<IncidenceStructure, GeometryError> {
    field_and_size(h, q, 2)?;
    let v = q.pow(h as u32);
    cap("block", BigUint::from(v) * (v - 1) / (q * (q - 1)), MAX_BLOCKS)?;
    let space = PointSet::affine(h, q)?;
    Ok(IncidenceStructure::new(space.len(), space.lines()).expect("distinct lines"))
}

fn identity_matrix(h: usize) -> Vec<Vec<u32>> {
    (0..h).map(|i| (0..h).map(|j| u32::from(i == j)).collect()).collect()
}

/// Transvections `I + ω^k E_{i,i+1}` and `I + ω^k E_{i+1,i}` for `k < e`.
fn sl_generators(f: &FiniteField, h: usize) -> Vec<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    for i in 0..h.saturating_sub(1) {
        for k in 0..f.degree() as u64 {
            for (r, c) in [(i, i + 1), (i + 1, i)] {
                let mut m = identity_matrix(h);
                m[r][c] = f.exp(k);
                out.push(m);
            }
        }
    }
    out
}

fn checked_group(gens: Vec<Permutation>, degree: usize, expected: BigUint) -> Result<PermutationGroup, GeometryError> {
    let g = PermutationGroup::new(gens, degree)?;
    let found = g.order();
    if found != expected {
        return Err(GeometryError::OrderMismatch { found, expected });
    }
    Ok(g)
}

/// `q^{h(h−1)/2} ∏_{i=2}^{h} (q^i − 1) / gcd(h, q − 1)`.
pub fn psl_order(h: usize, q: u64) -> BigUint {
    let qb = BigUint::from(q);
    let mut n = qb.pow((h * (h - 1) / 2) as u32);
    for i in 2..=h {
        n *= qb.pow(i as u32) - 1u32;
    }
    n / (h as u64).gcd(&(q - 1))
}

/// `q^h ∏_{i=0}^{h−1} (q^h − q^i)`.
pub fn agl_order(h: usize, q: u64) -> BigUint {
    let qb = BigUint::from(q);
    let qh = qb.pow(h as u32);
    let mut n = qh.clone();
    for i in 0..h {
        n *= &qh - qb.pow(i as u32);
    }
    n
}

/// `PSL_h(q)` on the points of `PG_{h−1}(q)`, extended by the Frobenius
/// map when requested. The order is checked against the closed form.
pub fn projective_group(h: usize, q: u64, include_frobenius: bool) -> Result<PermutationGroup, GeometryError> {
    if h < 2 {
        return Err(GeometryError::DimensionTooSmall { h, min: 2 });
    }
    let space = PointSet::projective(h, q)?;
    cap("group degree", BigUint::from(space.len()), MAX_GROUP_DEGREE)?;
    let f = space.field();
    let mut gens: Vec<Permutation> = sl_generators(f, h)
        .iter()
        .map(|m| space.semilinear_perm(m, None, false))
        .collect();
    let mut expected = psl_order(h, q);
    if include_frobenius && f.degree() > 1 {
        gens.push(space.semilinear_perm(&identity_matrix(h), None, true));
        expected *= f.degree();
    }
    checked_group(gens, space.len(), expected)
}

/// `AGL_h(q)` on the points of `AG_h(q)`, extended by the Frobenius map
/// when requested. The order is checked against the closed form.
pub fn affine_group(h: usize, q: u64, include_frobenius: bool) -> Result<PermutationGroup, GeometryError> {
    if h < 1 {
        return Err(GeometryError::DimensionTooSmall { h, min: 1 });
    }
    let space = PointSet::affine(h, q)?;
    cap("group degree", BigUint::from(space.len()), MAX_GROUP_DEGREE)?;
    let f = space.field();
    let id = identity_matrix(h);
    let mut e1 = vec![0u32; h];
    e1[0] = 1;
    let mut gens = vec![space.semilinear_perm(&id, Some(&e1), false)];
    gens.extend(sl_generators(f, h).iter().map(|m| space.semilinear_perm(m, None, false)));
    if f.order() > 2 {
        let mut diag = id.clone();
        diag[0][0] = f.primitive_element();
        gens.push(space.semilinear_perm(&diag, None, false));
    }
    let mut expected = agl_order(h, q);
    if include_frobenius && f.degree() > 1 {
        gens.push(space.semilinear_perm(&id, None, true));
        expected *= f.degree();
    }
    checked_group(gens, space.len(), expected)
}
