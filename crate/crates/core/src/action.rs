//! Orbits, transitivity, block systems and induced actions.
//!
//! Set stabilizers are never searched for directly: a setwise stabilizer is
//! obtained as a point stabilizer in the action on the set's orbit, and its
//! order as `|G| / orbit length`. Set orbits are held as sorted vectors, so
//! memory is `O(orbit length · |S|)`.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_integer::Integer;
use thiserror::Error;

use crate::group::{GroupError, PermutationGroup};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("point {point} is out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("the group is not transitive")]
    Intransitive,
    #[error("degree {degree} is too small for this query")]
    DegreeTooSmall { degree: usize },
    #[error("points {a} and {b} must be distinct")]
    SamePoint { a: usize, b: usize },
    #[error("partition covers {found} points, group has degree {expected}")]
    PartitionSize { found: usize, expected: usize },
    #[error("class ids must be 0..d-1 with equal class sizes ({0})")]
    RaggedPartition(String),
    #[error("generator {generator} maps points {x} and {y} of class {class} into different classes")]
    NotInvariant {
        generator: usize,
        class: usize,
        x: usize,
        y: usize,
    },
    #[error("class id {class} out of range (d = {classes})")]
    ClassOutOfRange { class: usize, classes: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Orbit of `x` under the generators, sorted.
pub fn orbit(g: &PermutationGroup, x: usize) -> Result<Vec<usize>, ActionError> {
    let n = g.degree();
    if x >= n {
        return Err(ActionError::PointOutOfRange { point: x, degree: n });
    }
    let mut seen = vec![false; n];
    seen[x] = true;
    let mut queue = vec![x];
    let mut i = 0;
    while i < queue.len() {
        let p = queue[i];
        for gen in g.generators() {
            let q = gen.apply(p);
            if !seen[q] {
                seen[q] = true;
                queue.push(q);
            }
        }
        i += 1;
    }
    queue.sort_unstable();
    Ok(queue)
}

/// All orbits, ordered by smallest element.
pub fn orbits(g: &PermutationGroup) -> Vec<Vec<usize>> {
    let n = g.degree();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for x in 0..n {
        if assigned[x] {
            continue;
        }
        let o = orbit(g, x).expect("x < degree");
        for &y in &o {
            assigned[y] = true;
        }
        out.push(o);
    }
    out
}

pub fn is_transitive(g: &PermutationGroup) -> bool {
    g.degree() > 0 && orbit(g, 0).map(|o| o.len() == g.degree()).unwrap_or(false)
}

/// Transitive, and the stabilizer of point 0 is transitive on the rest.
pub fn is_2_transitive(g: &PermutationGroup) -> Result<bool, ActionError> {
    let n = g.degree();
    if n < 2 {
        return Err(ActionError::DegreeTooSmall { degree: n });
    }
    if !is_transitive(g) {
        return Ok(false);
    }
    let stab = g.point_stabilizer(0)?;
    Ok(orbit(&stab, 1)?.len() == n - 1)
}

/// A partition of `{0, …, n−1}` into `d` classes of equal size `c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockSystem {
    class_of: Vec<usize>,
    num_classes: usize,
    class_size: usize,
}

impl BlockSystem {
    /// From a class id per point; ids must be exactly `0..d` and classes
    /// must all have the same size.
    pub fn from_class_ids(class_of: Vec<usize>) -> Result<Self, ActionError> {
        let n = class_of.len();
        if n == 0 {
            return Err(ActionError::RaggedPartition("empty partition".into()));
        }
        let d = class_of.iter().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0usize; d];
        for &c in &class_of {
            sizes[c] += 1;
        }
        if let Some(missing) = sizes.iter().position(|&s| s == 0) {
            return Err(ActionError::RaggedPartition(format!("class {missing} is empty")));
        }
        if let Some(bad) = sizes.iter().position(|&s| s != sizes[0]) {
            return Err(ActionError::RaggedPartition(format!(
                "class 0 has {} points but class {bad} has {}",
                sizes[0], sizes[bad]
            )));
        }
        Ok(BlockSystem {
            class_of,
            num_classes: d,
            class_size: sizes[0],
        })
    }

    /// From explicit classes; class ids follow the order given.
    pub fn from_classes(classes: &[Vec<usize>], degree: usize) -> Result<Self, ActionError> {
        let mut class_of = vec![usize::MAX; degree];
        let mut count = 0;
        for (i, class) in classes.iter().enumerate() {
            for &x in class {
                if x >= degree {
                    return Err(ActionError::PointOutOfRange { point: x, degree });
                }
                if class_of[x] != usize::MAX {
                    return Err(ActionError::RaggedPartition(format!(
                        "point {x} lies in two classes"
                    )));
                }
                class_of[x] = i;
                count += 1;
            }
        }
        if count != degree {
            return Err(ActionError::PartitionSize {
                found: count,
                expected: degree,
            });
        }
        Self::from_class_ids(class_of)
    }

    pub fn singletons(degree: usize) -> Self {
        BlockSystem {
            class_of: (0..degree).collect(),
            num_classes: degree,
            class_size: 1,
        }
    }

    pub fn degree(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn class_ids(&self) -> &[usize] {
        &self.class_of
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn class_size(&self) -> usize {
        self.class_size
    }

    /// `1 < c < degree`.
    pub fn is_nontrivial(&self) -> bool {
        self.class_size > 1 && self.class_size < self.degree()
    }

    /// Members of class `i`, in increasing order.
    pub fn class(&self, i: usize) -> Vec<usize> {
        (0..self.degree()).filter(|&x| self.class_of[x] == i).collect()
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::with_capacity(self.class_size); self.num_classes];
        for (x, &c) in self.class_of.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    /// The permutation induced on class ids by `g`, or the violation.
    pub fn class_image(&self, g: &Permutation, gen_index: usize) -> Result<Permutation, ActionError> {
        let mut img = vec![usize::MAX; self.num_classes];
        let mut rep = vec![usize::MAX; self.num_classes];
        for x in 0..self.degree() {
            let c = self.class_of[x];
            let t = self.class_of[g.apply(x)];
            if img[c] == usize::MAX {
                img[c] = t;
                rep[c] = x;
            } else if img[c] != t {
                return Err(ActionError::NotInvariant {
                    generator: gen_index,
                    class: c,
                    x: rep[c],
                    y: x,
                });
            }
        }
        Permutation::from_images(img).map_err(|_| {
            ActionError::RaggedPartition("generator merges two classes".into())
        })
    }

    /// Checks that every generator of `g` permutes the classes.
    pub fn check_invariant(&self, g: &PermutationGroup) -> Result<(), ActionError> {
        if g.degree() != self.degree() {
            return Err(ActionError::PartitionSize {
                found: self.degree(),
                expected: g.degree(),
            });
        }
        for (i, gen) in g.generators().iter().enumerate() {
            self.class_image(gen, i)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinimalBlocks {
    /// The only invariant partition joining the two points is the whole set.
    Trivial,
    System(BlockSystem),
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined. The smaller root survives.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Finest invariant partition in which `a` and `b` share a class
/// (Atkinson's merging procedure).
pub fn minimal_block_system(
    g: &PermutationGroup,
    a: usize,
    b: usize,
) -> Result<MinimalBlocks, ActionError> {
    let n = g.degree();
    for x in [a, b] {
        if x >= n {
            return Err(ActionError::PointOutOfRange { point: x, degree: n });
        }
    }
    if a == b {
        return Err(ActionError::SamePoint { a, b });
    }
    if !is_transitive(g) {
        return Err(ActionError::Intransitive);
    }
    let mut uf = UnionFind::new(n);
    uf.union(a, b);
    let mut queue = VecDeque::from([(a, b)]);
    while let Some((x, y)) = queue.pop_front() {
        for gen in g.generators() {
            let (gx, gy) = (uf.find(gen.apply(x)), uf.find(gen.apply(y)));
            if uf.union(gx, gy) {
                queue.push_back((gx, gy));
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
    let mut ids = HashMap::new();
    let class_of: Vec<usize> = roots
        .iter()
        .map(|r| {
            let next = ids.len();
            *ids.entry(*r).or_insert(next)
        })
        .collect();
    if ids.len() == 1 {
        return Ok(MinimalBlocks::Trivial);
    }
    Ok(MinimalBlocks::System(BlockSystem::from_class_ids(class_of)?))
}

/// Primitive iff every `minimal_block_system(G, 0, b)` is trivial.
pub fn is_primitive(g: &PermutationGroup) -> Result<bool, ActionError> {
    let n = g.degree();
    if n < 2 {
        return Err(ActionError::DegreeTooSmall { degree: n });
    }
    if !is_transitive(g) {
        return Err(ActionError::Intransitive);
    }
    for b in 1..n {
        if let MinimalBlocks::System(_) = minimal_block_system(g, 0, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A homomorphic image of `source` together with the kernel order.
///
/// `points` lists, in order, the objects the target acts on: class ids for
/// the action on a partition, global point indices for a restriction.
#[derive(Debug, Clone)]
pub struct InducedAction {
    pub source: PermutationGroup,
    pub target: PermutationGroup,
    pub points: Vec<usize>,
    pub kernel_order: BigUint,
}

fn kernel_order(source: &BigUint, target: &BigUint) -> BigUint {
    let (q, r) = source.div_rem(target);
    assert!(r == BigUint::from(0u32), "image order must divide group order");
    q
}

/// The action `G^Σ` on the classes of `sigma`.
pub fn induced_action_on_classes(
    g: &PermutationGroup,
    sigma: &BlockSystem,
) -> Result<InducedAction, ActionError> {
    sigma.check_invariant(g)?;
    let gens = g
        .generators()
        .iter()
        .enumerate()
        .map(|(i, gen)| sigma.class_image(gen, i))
        .collect::<Result<Vec<_>, _>>()?;
    let target = PermutationGroup::new(gens, sigma.num_classes())?;
    let source_order = g.order();
    let kernel_order = kernel_order(&source_order, &target.order());
    Ok(InducedAction {
        source: g.clone(),
        target,
        points: (0..sigma.num_classes()).collect(),
        kernel_order,
    })
}

/// Stabilizer of object `target` in an action of `g` on `m` objects, given
/// by one image permutation per generator. Computed as a point stabilizer of
/// the combined action on `degree + m` points, then restricted back.
pub fn stabilizer_in_action(
    g: &PermutationGroup,
    object_images: &[Permutation],
    target: usize,
) -> Result<PermutationGroup, ActionError> {
    let n = g.degree();
    let m = object_images.first().map_or(0, |p| p.degree());
    if target >= m.max(1) && !(m == 0 && target == 0) {
        return Err(ActionError::PointOutOfRange {
            point: target,
            degree: m,
        });
    }
    if g.generators().is_empty() || m <= 1 {
        return Ok(g.clone());
    }
    let combined: Vec<Permutation> = g
        .generators()
        .iter()
        .zip(object_images)
        .map(|(gen, obj)| {
            let mut images: Vec<u32> = gen.raw().to_vec();
            images.extend(obj.raw().iter().map(|&x| x + n as u32));
            Permutation::from_images_unchecked(images)
        })
        .collect();
    let big = PermutationGroup::with_base_prefix(combined, n + m, &[n + target])?;
    let stab = big.point_stabilizer(n + target)?;
    let all: Vec<usize> = (0..n).collect();
    let gens: Vec<Permutation> = stab
        .strong_generators()
        .iter()
        .map(|s| s.restrict(&all).expect("points are invariant"))
        .collect();
    Ok(PermutationGroup::new(gens, n)?)
}

/// `G_Δ` for class `i`, restricted to the `c` points of `Δ`.
///
/// The target acts on `0..c`, indexed by the class members in increasing
/// order; `points` records that order.
pub fn class_stabilizer_restricted(
    g: &PermutationGroup,
    sigma: &BlockSystem,
    i: usize,
) -> Result<InducedAction, ActionError> {
    if i >= sigma.num_classes() {
        return Err(ActionError::ClassOutOfRange {
            class: i,
            classes: sigma.num_classes(),
        });
    }
    sigma.check_invariant(g)?;
    let class_gens = g
        .generators()
        .iter()
        .enumerate()
        .map(|(k, gen)| sigma.class_image(gen, k))
        .collect::<Result<Vec<_>, _>>()?;
    let source = stabilizer_in_action(g, &class_gens, i)?;
    let members = sigma.class(i);
    let restricted: Vec<Permutation> = source
        .generators()
        .iter()
        .map(|s| s.restrict(&members).expect("stabilizer preserves its class"))
        .collect();
    let target = PermutationGroup::new(restricted, members.len())?;
    let kernel_order = kernel_order(&source.order(), &target.order());
    Ok(InducedAction {
        source,
        target,
        points: members,
        kernel_order,
    })
}

fn check_set(g: &PermutationGroup, set: &[usize]) -> Result<Vec<usize>, ActionError> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&bad) = s.iter().find(|&&x| x >= g.degree()) {
        return Err(ActionError::PointOutOfRange {
            point: bad,
            degree: g.degree(),
        });
    }
    Ok(s)
}

/// Orbit of a point set together with the generator action on that orbit.
fn set_orbit_with_action(
    g: &PermutationGroup,
    set: &[usize],
) -> Result<(Vec<Vec<usize>>, Vec<Permutation>), ActionError> {
    let start = check_set(g, set)?;
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut orbit = vec![start.clone()];
    index.insert(start, 0);
    let mut images: Vec<Vec<u32>> = vec![Vec::new(); g.generators().len()];
    let mut i = 0;
    while i < orbit.len() {
        for (k, gen) in g.generators().iter().enumerate() {
            let img = gen.image_of_set(&orbit[i]);
            let j = match index.get(&img) {
                Some(&j) => j,
                None => {
                    let j = orbit.len();
                    index.insert(img.clone(), j);
                    orbit.push(img);
                    j
                }
            };
            images[k].push(j as u32);
        }
        i += 1;
    }
    let perms = images
        .into_iter()
        .map(Permutation::from_images_unchecked)
        .collect();
    Ok((orbit, perms))
}

/// The orbit of `set` under `g`, as sorted sets; the first entry is `set`.
pub fn set_orbit(g: &PermutationGroup, set: &[usize]) -> Result<Vec<Vec<usize>>, ActionError> {
    Ok(set_orbit_with_action(g, set)?.0)
}

/// `|G| / |orbit of S|`.
pub fn setwise_stabilizer_order(g: &PermutationGroup, set: &[usize]) -> Result<BigUint, ActionError> {
    let len = set_orbit(g, set)?.len();
    Ok(kernel_order(&g.order(), &BigUint::from(len)))
}

/// The setwise stabilizer `G_S` as a group.
pub fn setwise_stabilizer(g: &PermutationGroup, set: &[usize]) -> Result<PermutationGroup, ActionError> {
    let (_, action) = set_orbit_with_action(g, set)?;
    stabilizer_in_action(g, &action, 0)
}
