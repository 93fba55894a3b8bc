//! Permutation groups backed by a base and strong generating set.
//!
//! The stabilizer chain is built by deterministic Schreier–Sims: base points
//! are taken greedily as the first point moved by a generator, and every
//! Schreier generator is sifted exactly once. Transversals are stored
//! explicitly, so memory is `O(Σ |orbit_i| · degree)`.

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("point {point} is out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
}

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Level {
    base_point: u32,
    strong: Vec<Permutation>,
    orbit: Vec<u32>,
    /// point -> index into `orbit`/`reps`, or `NONE`
    slot: Vec<u32>,
    /// `reps[i]` maps `base_point` to `orbit[i]`
    reps: Vec<Permutation>,
    inv_reps: Vec<Permutation>,
    /// per orbit index: how many strong generators have had their Schreier
    /// generator sifted
    checked: Vec<usize>,
    cursor: usize,
}

impl Level {
    fn new(base_point: usize, degree: usize) -> Level {
        let mut slot = vec![NONE; degree];
        slot[base_point] = 0;
        Level {
            base_point: base_point as u32,
            strong: Vec::new(),
            orbit: vec![base_point as u32],
            slot,
            reps: vec![Permutation::identity(degree)],
            inv_reps: vec![Permutation::identity(degree)],
            checked: vec![0],
            cursor: 0,
        }
    }

    fn add_strong(&mut self, g: Permutation) {
        if self.strong.contains(&g) {
            return;
        }
        self.strong.push(g);
        self.cursor = 0;
        self.extend_orbit();
    }

    fn extend_orbit(&mut self) {
        let mut i = 0;
        while i < self.orbit.len() {
            let p = self.orbit[i] as usize;
            for s in 0..self.strong.len() {
                let q = self.strong[s].apply(p);
                if self.slot[q] == NONE {
                    let rep = self.reps[i].then(&self.strong[s]);
                    self.slot[q] = self.orbit.len() as u32;
                    self.orbit.push(q as u32);
                    self.inv_reps.push(rep.inverse());
                    self.reps.push(rep);
                    self.checked.push(0);
                }
            }
            i += 1;
        }
    }

    fn next_unchecked(&mut self) -> Option<(usize, usize)> {
        while self.cursor < self.orbit.len() {
            let o = self.cursor;
            if self.checked[o] < self.strong.len() {
                let s = self.checked[o];
                self.checked[o] += 1;
                return Some((o, s));
            }
            self.cursor += 1;
        }
        None
    }
}

/// A permutation group of fixed degree, with exact order and membership.
#[derive(Debug, Clone)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: Vec<Level>,
}

impl PermutationGroup {
    /// Group generated by `gens`; an empty list gives the trivial group.
    pub fn new(gens: Vec<Permutation>, degree: usize) -> Result<Self, GroupError> {
        Self::with_base_prefix(gens, degree, &[])
    }

    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            generators: Vec::new(),
            chain: Vec::new(),
        }
    }

    /// Like [`PermutationGroup::new`], but the base starts with `prefix`.
    pub fn with_base_prefix(
        gens: Vec<Permutation>,
        degree: usize,
        prefix: &[usize],
    ) -> Result<Self, GroupError> {
        for (index, g) in gens.iter().enumerate() {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    index,
                    found: g.degree(),
                    expected: degree,
                });
            }
        }
        for &p in prefix {
            if p >= degree {
                return Err(GroupError::PointOutOfRange { point: p, degree });
            }
        }
        let chain = schreier_sims(&gens, degree, prefix);
        Ok(PermutationGroup {
            degree,
            generators: gens,
            chain,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain.iter().map(|l| l.base_point as usize).collect()
    }

    /// The strong generating set (generators of the first chain level,
    /// which contains every other level's generators).
    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for level in &self.chain {
            for s in &level.strong {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// Fundamental orbits, one per base point, in discovery order.
    pub fn fundamental_orbits(&self) -> Vec<Vec<usize>> {
        self.chain
            .iter()
            .map(|l| l.orbit.iter().map(|&x| x as usize).collect())
            .collect()
    }

    /// Transversal element of chain level `level` sending its base point to
    /// `point`, if `point` lies in that fundamental orbit.
    pub fn transversal_element(&self, level: usize, point: usize) -> Option<&Permutation> {
        let l = self.chain.get(level)?;
        match l.slot.get(point) {
            Some(&idx) if idx != NONE => Some(&l.reps[idx as usize]),
            _ => None,
        }
    }

    pub fn order(&self) -> BigUint {
        self.chain
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn is_trivial(&self) -> bool {
        self.chain.iter().all(|l| l.orbit.len() == 1)
    }

    /// Sifts `g` through the chain, returning the residue and the level at
    /// which sifting stopped (`chain length` if it passed every level).
    pub fn sift(&self, g: &Permutation) -> (Permutation, usize) {
        sift(&self.chain, g.clone(), 0)
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool, GroupError> {
        if g.degree() != self.degree {
            return Err(GroupError::DegreeMismatch {
                index: 0,
                found: g.degree(),
                expected: self.degree,
            });
        }
        let (residue, level) = self.sift(g);
        Ok(level == self.chain.len() && residue.is_identity())
    }

    /// The stabilizer `G_x`. The chain is rebuilt with `x` as first base
    /// point and the tail of the chain is kept as the stabilizer's own chain.
    pub fn point_stabilizer(&self, x: usize) -> Result<PermutationGroup, GroupError> {
        if x >= self.degree {
            return Err(GroupError::PointOutOfRange {
                point: x,
                degree: self.degree,
            });
        }
        let source = if self.base().first() == Some(&x) {
            self.clone()
        } else {
            let gens = self.strong_generators();
            let mut prefix = vec![x];
            prefix.extend(self.base().into_iter().filter(|&b| b != x));
            PermutationGroup::with_base_prefix(gens, self.degree, &prefix)?
        };
        let tail: Vec<Level> = source.chain.into_iter().skip(1).collect();
        let generators = tail.first().map(|l| l.strong.clone()).unwrap_or_default();
        Ok(PermutationGroup {
            degree: self.degree,
            generators,
            chain: tail,
        })
    }

    /// Every element, by running through all transversal products. Only
    /// meant for small groups.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        for level in self.chain.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.reps.len());
            for h in &out {
                for r in &level.reps {
                    next.push(h.then(r));
                }
            }
            out = next;
        }
        out
    }
}

fn sift(chain: &[Level], mut g: Permutation, from: usize) -> (Permutation, usize) {
    for (m, level) in chain.iter().enumerate().skip(from) {
        let p = g.apply(level.base_point as usize);
        let idx = level.slot[p];
        if idx == NONE {
            return (g, m);
        }
        if idx != 0 {
            g = g.then(&level.inv_reps[idx as usize]);
        }
    }
    (g, chain.len())
}

fn schreier_sims(gens: &[Permutation], degree: usize, prefix: &[usize]) -> Vec<Level> {
    let mut gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    gens.dedup();

    let mut base: Vec<usize> = Vec::new();
    for &p in prefix {
        if !base.contains(&p) {
            base.push(p);
        }
    }
    for g in &gens {
        if base.iter().all(|&b| g.apply(b) == b) {
            base.push(g.first_moved().expect("non-identity generator"));
        }
    }
    let mut chain: Vec<Level> = base.iter().map(|&b| Level::new(b, degree)).collect();
    for g in &gens {
        for (i, level) in chain.iter_mut().enumerate() {
            if base[..i].iter().all(|&b| g.apply(b) == b) {
                level.add_strong(g.clone());
            } else {
                break;
            }
        }
    }

    let mut i = chain.len() as isize - 1;
    'outer: while i >= 0 {
        let li = i as usize;
        while let Some((o, s)) = chain[li].next_unchecked() {
            let level = &chain[li];
            let g = &level.strong[s];
            let img = g.apply(level.orbit[o] as usize);
            let j = level.slot[img] as usize;
            let schreier = level.reps[o].then(g).then(&level.inv_reps[j]);
            if schreier.is_identity() {
                continue;
            }
            let (h, stop) = sift(&chain, schreier, li + 1);
            if h.is_identity() {
                continue;
            }
            if stop == chain.len() {
                let moved = h.first_moved().expect("non-identity residue");
                chain.push(Level::new(moved, degree));
            }
            for level in chain.iter_mut().take(stop + 1).skip(li + 1) {
                level.add_strong(h.clone());
            }
            i = stop as isize;
            continue 'outer;
        }
        i -= 1;
    }
    chain
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, n: usize) -> Permutation {
        Permutation::from_cycles(text, n).unwrap()
    }

    fn group(gens: &[&str], n: usize) -> PermutationGroup {
        PermutationGroup::new(gens.iter().map(|g| p(g, n)).collect(), n).unwrap()
    }

    #[test]
    fn symmetric_group_on_four_points() {
        let g = group(&["(0 1)", "(0 1 2 3)"], 4);
        assert_eq!(g.order(), BigUint::from(24u32));
        assert_eq!(g.point_stabilizer(0).unwrap().order(), BigUint::from(6u32));
    }

    #[test]
    fn trivial_and_cyclic() {
        let t = PermutationGroup::new(vec![], 7).unwrap();
        assert_eq!(t.order(), BigUint::one());
        assert_eq!(t.point_stabilizer(3).unwrap().order(), BigUint::one());
        let c = group(&["(0 1 2 3)"], 4);
        assert_eq!(c.order(), BigUint::from(4u32));
        assert!(c.contains(&p("(0 2)(1 3)", 4)).unwrap());
        assert!(!c.contains(&p("(0 1)", 4)).unwrap());
    }

    #[test]
    fn rejects_degree_mismatch() {
        let err = PermutationGroup::new(vec![p("(0 1)", 3), p("(0 1)", 4)], 3).unwrap_err();
        assert!(matches!(err, GroupError::DegreeMismatch { index: 1, .. }));
        let g = group(&["(0 1)"], 3);
        assert!(g.contains(&p("(0 1)", 4)).is_err());
        assert!(g.point_stabilizer(3).is_err());
    }

    #[test]
    fn mathieu_eleven_order() {
        // M11 on 11 points
        let g = group(&["(0 1 2 3 4 5 6 7 8 9 10)", "(2 6 10 7)(3 9 4 5)"], 11);
        assert_eq!(g.order(), BigUint::from(7920u32));
    }

    #[test]
    fn strong_generators_are_members() {
        let g = group(&["(0 1 2 3 4 5 6 7)", "(0 4)(2 6)", "(1 2)(5 6)"], 8);
        for s in g.strong_generators() {
            assert!(g.contains(&s).unwrap());
        }
        // every generator sifts to the identity
        for s in g.generators() {
            let (r, _) = g.sift(s);
            assert!(r.is_identity());
        }
    }

    #[test]
    fn order_independent_of_base_prefix() {
        let gens = vec![p("(0 1 2 3 4 5)", 6), p("(0 1)", 6)];
        let a = PermutationGroup::new(gens.clone(), 6).unwrap();
        let b = PermutationGroup::with_base_prefix(gens, 6, &[5, 3, 1]).unwrap();
        assert_eq!(a.order(), BigUint::from(720u32));
        assert_eq!(a.order(), b.order());
        assert_eq!(&b.base()[..3], &[5, 3, 1]);
    }

    #[test]
    fn elements_enumerates_group() {
        let g = group(&["(0 1 2)", "(0 1)"], 3);
        let mut e = g.elements();
        e.sort();
        e.dedup();
        assert_eq!(e.len(), 6);
    }
}
