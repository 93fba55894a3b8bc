//! Incidence structures, 2-design checks, flags, and the partition
//! invariants: trace size `k₀`, overlap number `θ`, induced designs on
//! classes and the orbit pattern of a normal subgroup.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::{self, ActionError, BlockSystem};
use crate::group::{GroupError, PermutationGroup};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("block {block} contains point {point}, but v = {v}")]
    PointOutOfRange { block: usize, point: usize, v: usize },
    #[error("block {block} repeats point {point}")]
    RepeatedPoint { block: usize, point: usize },
    #[error("block {block} is empty")]
    EmptyBlock { block: usize },
    #[error("blocks {first} and {second} are equal (use a multiset structure to allow this)")]
    DuplicateBlock { first: usize, second: usize },
    #[error("operation needs a simple design, but the structure has repeated blocks")]
    MultisetNotAllowed,
    #[error("group degree {group} does not match v = {v}")]
    DegreeMismatch { group: usize, v: usize },
    #[error("partition covers {partition} points, but v = {v}")]
    PartitionMismatch { partition: usize, v: usize },
    #[error("generator {generator} maps block {block} to a non-block")]
    NotAutomorphism { generator: usize, block: usize },
    #[error("point {point} is not on block {block}")]
    NotAFlag { point: usize, block: usize },
    #[error("block index {0} out of range")]
    BlockOutOfRange(usize),
    #[error("class index {class} out of range (d = {classes})")]
    ClassOutOfRange { class: usize, classes: usize },
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A point count plus a list of blocks, each stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceStructure {
    v: usize,
    blocks: Vec<Vec<usize>>,
    multiset: bool,
}

impl IncidenceStructure {
    /// A simple incidence structure; repeated blocks are an error.
    pub fn new(v: usize, blocks: Vec<Vec<usize>>) -> Result<Self, DesignError> {
        let s = Self::build(v, blocks, false)?;
        let mut seen: HashMap<&[usize], usize> = HashMap::new();
        for (i, b) in s.blocks.iter().enumerate() {
            if let Some(&j) = seen.get(b.as_slice()) {
                return Err(DesignError::DuplicateBlock { first: j, second: i });
            }
            seen.insert(b, i);
        }
        Ok(s)
    }

    /// An incidence structure that may repeat blocks.
    pub fn new_multiset(v: usize, blocks: Vec<Vec<usize>>) -> Result<Self, DesignError> {
        Self::build(v, blocks, true)
    }

    fn build(v: usize, blocks: Vec<Vec<usize>>, multiset: bool) -> Result<Self, DesignError> {
        let mut out = Vec::with_capacity(blocks.len());
        for (i, mut b) in blocks.into_iter().enumerate() {
            if b.is_empty() {
                return Err(DesignError::EmptyBlock { block: i });
            }
            b.sort_unstable();
            if let Some(&p) = b.iter().find(|&&p| p >= v) {
                return Err(DesignError::PointOutOfRange { block: i, point: p, v });
            }
            if let Some(w) = b.windows(2).find(|w| w[0] == w[1]) {
                return Err(DesignError::RepeatedPoint { block: i, point: w[0] });
            }
            out.push(b);
        }
        Ok(IncidenceStructure {
            v,
            blocks: out,
            multiset,
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn is_multiset(&self) -> bool {
        self.multiset
    }

    /// Indices of the blocks through each point.
    pub fn point_blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.v];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                out[x].push(i);
            }
        }
        out
    }

    /// Block index by content. Fails on repeated blocks.
    fn block_index(&self) -> Result<HashMap<&[usize], usize>, DesignError> {
        if self.multiset {
            let mut index = HashMap::new();
            for (i, b) in self.blocks.iter().enumerate() {
                if index.insert(b.as_slice(), i).is_some() {
                    return Err(DesignError::MultisetNotAllowed);
                }
            }
            return Ok(index);
        }
        Ok(self
            .blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (b.as_slice(), i))
            .collect())
    }
}

/// Parameters of a verified 2-design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignParams {
    pub v: usize,
    pub b: usize,
    pub k: usize,
    pub r: usize,
    pub lambda: usize,
    pub symmetric: bool,
}

impl std::fmt::Display for DesignParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "2-({},{},{})", self.v, self.k, self.lambda)
    }
}

/// Why a structure is not a non-trivial 2-design.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Error)]
pub enum DesignFailure {
    #[error("fewer than 2 points")]
    TooFewPoints,
    #[error("no blocks")]
    NoBlocks,
    #[error("block {block} has size {size}, block 0 has size {expected}")]
    BlockSize { block: usize, size: usize, expected: usize },
    #[error("block size {k} is trivial for v = {v} (need 2 < k < v)")]
    Trivial { k: usize, v: usize },
    #[error("pair ({x},{y}) lies in {count} blocks, pair (0,1) lies in {expected}")]
    PairCount { x: usize, y: usize, count: usize, expected: usize },
}

/// Checks the 2-design axioms and returns the parameters, or the first
/// violation: a block of the wrong size, or the lexicographically first pair
/// whose count differs from that of the pair `(0, 1)`.
pub fn is_2design(d: &IncidenceStructure) -> Result<DesignParams, DesignFailure> {
    let v = d.v;
    if v < 2 {
        return Err(DesignFailure::TooFewPoints);
    }
    let Some(first) = d.blocks.first() else {
        return Err(DesignFailure::NoBlocks);
    };
    let k = first.len();
    if let Some((i, b)) = d.blocks.iter().enumerate().find(|(_, b)| b.len() != k) {
        return Err(DesignFailure::BlockSize { block: i, size: b.len(), expected: k });
    }
    if k <= 2 || k >= v {
        return Err(DesignFailure::Trivial { k, v });
    }
    let through = d.point_blocks();
    let mut counts = vec![0usize; v];
    let mut expected = None;
    for (x, incident) in through.iter().enumerate() {
        counts.iter_mut().for_each(|c| *c = 0);
        for &bi in incident {
            for &y in &d.blocks[bi] {
                counts[y] += 1;
            }
        }
        for (y, &count) in counts.iter().enumerate().skip(x + 1) {
            let lambda = *expected.get_or_insert(count);
            if count != lambda {
                return Err(DesignFailure::PairCount { x, y, count, expected: lambda });
            }
        }
    }
    let lambda = expected.expect("v >= 2");
    let b = d.b();
    let r = through[0].len();
    debug_assert_eq!(lambda * (v - 1), r * (k - 1));
    debug_assert_eq!(b * k, v * r);
    Ok(DesignParams {
        v,
        b,
        k,
        r,
        lambda,
        symmetric: b == v && !d.multiset,
    })
}

/// The permutation each generator induces on block indices.
pub fn block_action(
    d: &IncidenceStructure,
    g: &PermutationGroup,
) -> Result<Vec<Permutation>, DesignError> {
    if g.degree() != d.v {
        return Err(DesignError::DegreeMismatch { group: g.degree(), v: d.v });
    }
    let index = d.block_index()?;
    g.generators()
        .iter()
        .enumerate()
        .map(|(gi, gen)| {
            let images = d
                .blocks
                .iter()
                .enumerate()
                .map(|(bi, b)| {
                    index
                        .get(gen.image_of_set(b).as_slice())
                        .copied()
                        .ok_or(DesignError::NotAutomorphism { generator: gi, block: bi })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Permutation::from_images(images).expect("block images of a bijection"))
        })
        .collect()
}

/// Result of a flag orbit computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagOrbit {
    pub orbit_size: usize,
    pub flags: usize,
    pub transitive: bool,
}

/// Orbit of the flag (first point of block 0, block 0) under `g`.
pub fn flag_orbit(d: &IncidenceStructure, g: &PermutationGroup) -> Result<FlagOrbit, DesignError> {
    let blocks_action = block_action(d, g)?;
    let mut offset = Vec::with_capacity(d.b() + 1);
    offset.push(0);
    for b in &d.blocks {
        offset.push(offset.last().unwrap() + b.len());
    }
    let flags = *offset.last().unwrap();
    if flags == 0 {
        return Ok(FlagOrbit { orbit_size: 0, flags: 0, transitive: true });
    }
    let mut seen = vec![false; flags];
    seen[0] = true;
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    let mut size = 1;
    while let Some((bi, pos)) = queue.pop_front() {
        let x = d.blocks[bi][pos];
        for (gen, bact) in g.generators().iter().zip(&blocks_action) {
            let nb = bact.apply(bi);
            let npos = d.blocks[nb]
                .binary_search(&gen.apply(x))
                .expect("automorphism maps flags to flags");
            let id = offset[nb] + npos;
            if !seen[id] {
                seen[id] = true;
                size += 1;
                queue.push_back((nb, npos));
            }
        }
    }
    Ok(FlagOrbit { orbit_size: size, flags, transitive: size == flags })
}

pub fn is_flag_transitive(d: &IncidenceStructure, g: &PermutationGroup) -> Result<bool, DesignError> {
    Ok(flag_orbit(d, g)?.transitive)
}

fn check_partition(d: &IncidenceStructure, sigma: &BlockSystem) -> Result<(), DesignError> {
    if sigma.degree() != d.v {
        return Err(DesignError::PartitionMismatch { partition: sigma.degree(), v: d.v });
    }
    Ok(())
}

/// One nonzero trace `|B ∩ Δ|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceWitness {
    pub block: usize,
    pub class: usize,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceProfile {
    pub k0: usize,
    /// `|Σ(B)|`, the number of classes each block meets.
    pub classes_met: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Error)]
pub enum TraceFailure {
    #[error("nonzero traces differ: block {} meets class {} in {} points, block {} meets class {} in {}",
        .first.block, .first.class, .first.size, .second.block, .second.class, .second.size)]
    Mismatch { first: TraceWitness, second: TraceWitness },
}

/// Per-block map class → trace (sorted points).
fn traces(d: &IncidenceStructure, sigma: &BlockSystem) -> Vec<BTreeMap<usize, Vec<usize>>> {
    d.blocks
        .iter()
        .map(|b| {
            let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &x in b {
                m.entry(sigma.class_of(x)).or_default().push(x);
            }
            m
        })
        .collect()
}

/// The constant nonzero trace size `k₀`, or two traces of different size.
pub fn trace_profile(
    d: &IncidenceStructure,
    sigma: &BlockSystem,
) -> Result<Result<TraceProfile, TraceFailure>, DesignError> {
    check_partition(d, sigma)?;
    let mut reference: Option<TraceWitness> = None;
    let mut classes_met = Vec::with_capacity(d.b());
    for (bi, t) in traces(d, sigma).into_iter().enumerate() {
        for (&class, pts) in &t {
            let w = TraceWitness { block: bi, class, size: pts.len() };
            let r = *reference.get_or_insert(w);
            if r.size != w.size {
                return Ok(Err(TraceFailure::Mismatch { first: r, second: w }));
            }
        }
        classes_met.push(t.len());
    }
    let k0 = reference.map_or(0, |r| r.size);
    Ok(Ok(TraceProfile { k0, classes_met }))
}

/// `θ(i, B)` for one class and block, with the blocks sharing the trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapWitness {
    pub class: usize,
    pub block: usize,
    pub theta: usize,
    /// The blocks `B′` with `B′ ∩ Δ = B ∩ Δ`.
    pub sharing: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub theta: usize,
    pub k0: usize,
    pub witness: OverlapWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Error)]
pub enum OverlapFailure {
    #[error(transparent)]
    Trace(#[from] TraceFailure),
    #[error("no block meets any class")]
    NoTraces,
    #[error("overlap numbers differ: {} on class {} for block {}, {} on class {} for block {}",
        .first.theta, .first.class, .first.block, .second.theta, .second.class, .second.block)]
    NonConstant { first: OverlapWitness, second: OverlapWitness },
}

/// Groups, per class, the blocks by their trace on that class.
fn trace_groups(
    d: &IncidenceStructure,
    sigma: &BlockSystem,
) -> Vec<BTreeMap<Vec<usize>, Vec<usize>>> {
    let mut groups: Vec<BTreeMap<Vec<usize>, Vec<usize>>> = vec![BTreeMap::new(); sigma.num_classes()];
    for (bi, t) in traces(d, sigma).into_iter().enumerate() {
        for (class, pts) in t {
            groups[class].entry(pts).or_default().push(bi);
        }
    }
    groups
}

/// The overlap number `θ`: how many blocks share each nonempty trace.
/// Computed by counting, over every class and every block meeting it.
pub fn overlap_number(
    d: &IncidenceStructure,
    sigma: &BlockSystem,
) -> Result<Result<OverlapReport, OverlapFailure>, DesignError> {
    let profile = match trace_profile(d, sigma)? {
        Ok(p) => p,
        Err(e) => return Ok(Err(e.into())),
    };
    let groups = trace_groups(d, sigma);
    let mut reference: Option<OverlapWitness> = None;
    for (bi, t) in traces(d, sigma).into_iter().enumerate() {
        for (class, pts) in t {
            let sharing = groups[class][&pts].clone();
            let w = OverlapWitness { class, block: bi, theta: sharing.len(), sharing };
            match &reference {
                None => reference = Some(w),
                Some(r) if r.theta != w.theta => {
                    return Ok(Err(OverlapFailure::NonConstant { first: r.clone(), second: w }))
                }
                Some(_) => {}
            }
        }
    }
    Ok(match reference {
        Some(w) => Ok(OverlapReport { theta: w.theta, k0: profile.k0, witness: w }),
        None => Err(OverlapFailure::NoTraces),
    })
}

/// The design of distinct traces on one class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedDesign {
    pub class: usize,
    /// Global indices of the class members; local point `j` is `points[j]`.
    pub points: Vec<usize>,
    pub design: IncidenceStructure,
    pub params: DesignParams,
    pub theta: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Error)]
pub enum InducedFailure {
    #[error("the structure is not a 2-design: {0}")]
    NotADesign(DesignFailure),
    #[error(transparent)]
    Overlap(#[from] OverlapFailure),
    #[error("trace size k0 = {k0} is below 3")]
    K0TooSmall { k0: usize },
    #[error("theta = {theta} does not divide lambda = {lambda}")]
    ThetaNotDividing { theta: usize, lambda: usize },
    #[error("traces on class {class} do not form a 2-design: {failure}")]
    NotInduced { class: usize, failure: DesignFailure },
    #[error("traces on class {class} form a design with lambda {found}, expected {expected}")]
    WrongLambda { class: usize, found: usize, expected: usize },
}

/// The induced design on class `i`, verified as a 2-(c, k₀, λ/θ) design.
pub fn induced_design(
    d: &IncidenceStructure,
    sigma: &BlockSystem,
    i: usize,
) -> Result<Result<InducedDesign, InducedFailure>, DesignError> {
    check_partition(d, sigma)?;
    if i >= sigma.num_classes() {
        return Err(DesignError::ClassOutOfRange { class: i, classes: sigma.num_classes() });
    }
    let params = match is_2design(d) {
        Ok(p) => p,
        Err(f) => return Ok(Err(InducedFailure::NotADesign(f))),
    };
    let overlap = match overlap_number(d, sigma)? {
        Ok(o) => o,
        Err(f) => return Ok(Err(f.into())),
    };
    if overlap.k0 < 3 {
        return Ok(Err(InducedFailure::K0TooSmall { k0: overlap.k0 }));
    }
    if params.lambda % overlap.theta != 0 {
        return Ok(Err(InducedFailure::ThetaNotDividing {
            theta: overlap.theta,
            lambda: params.lambda,
        }));
    }
    let points = sigma.class(i);
    let mut local = vec![usize::MAX; d.v];
    for (j, &x) in points.iter().enumerate() {
        local[x] = j;
    }
    let groups = trace_groups(d, sigma);
    let blocks: Vec<Vec<usize>> = groups[i]
        .keys()
        .map(|t| t.iter().map(|&x| local[x]).collect())
        .collect();
    let design = IncidenceStructure::new(points.len(), blocks).expect("distinct traces");
    let induced = match is_2design(&design) {
        Ok(p) => p,
        Err(failure) => return Ok(Err(InducedFailure::NotInduced { class: i, failure })),
    };
    let expected = params.lambda / overlap.theta;
    if induced.lambda != expected {
        return Ok(Err(InducedFailure::WrongLambda { class: i, found: induced.lambda, expected }));
    }
    Ok(Ok(InducedDesign { class: i, points, design, params: induced, theta: overlap.theta }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum OverlapIndexVerdict {
    Matches,
    Mismatch,
    /// The group is not flag-transitive, so agreement is not guaranteed.
    HypothesisNotMet,
}

/// Comparison of the overlap number with a stabilizer index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapIndex {
    pub point: usize,
    pub block: usize,
    /// `|G_{x, B∩Δ}|` where `Δ` is the class of `x`.
    pub trace_stabilizer_order: BigUint,
    /// `|G_{x, B}|`.
    pub block_stabilizer_order: BigUint,
    pub index: BigUint,
    pub theta: Option<usize>,
    pub verdict: OverlapIndexVerdict,
}

/// Computes `[G_{x,B∩Δ} : G_{x,B}]` for the flag `(x, B)` from set-orbit
/// lengths under `G_x` and compares it with `θ`.
pub fn check_overlap_index(
    d: &IncidenceStructure,
    g: &PermutationGroup,
    sigma: &BlockSystem,
    x: usize,
    block: usize,
) -> Result<OverlapIndex, DesignError> {
    check_partition(d, sigma)?;
    if block >= d.b() {
        return Err(DesignError::BlockOutOfRange(block));
    }
    let b = d.block(block);
    if b.binary_search(&x).is_err() {
        return Err(DesignError::NotAFlag { point: x, block });
    }
    let transitive = is_flag_transitive(d, g)?;
    let gx = g.point_stabilizer(x)?;
    let class = sigma.class_of(x);
    let trace: Vec<usize> = b.iter().copied().filter(|&y| sigma.class_of(y) == class).collect();
    let trace_stabilizer_order = action::setwise_stabilizer_order(&gx, &trace)?;
    let block_stabilizer_order = action::setwise_stabilizer_order(&gx, b)?;
    let index = &trace_stabilizer_order / &block_stabilizer_order;
    let theta = overlap_number(d, sigma)?.ok().map(|o| o.theta);
    let verdict = if !transitive {
        OverlapIndexVerdict::HypothesisNotMet
    } else if theta.map(BigUint::from) == Some(index.clone()) {
        OverlapIndexVerdict::Matches
    } else {
        OverlapIndexVerdict::Mismatch
    };
    Ok(OverlapIndex {
        point: x,
        block,
        trace_stabilizer_order,
        block_stabilizer_order,
        index,
        theta,
        verdict,
    })
}

/// Check that every block meets `λ + 1 = d − 1` classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCheck {
    pub lambda_plus_one: usize,
    pub d_minus_one: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaProfile {
    /// `|Σ(B)|` → number of blocks.
    pub histogram: BTreeMap<usize, usize>,
    pub constant: Option<usize>,
    /// Present when the design has the parameters
    /// `(λ²(λ+2), λ(λ+1), λ)` with `d = λ + 2`.
    pub cover: Option<CoverCheck>,
}

/// Statistics of `|Σ(B)|` over all blocks.
pub fn sigma_of_block_profile(
    d: &IncidenceStructure,
    sigma: &BlockSystem,
) -> Result<Result<SigmaProfile, TraceFailure>, DesignError> {
    let profile = match trace_profile(d, sigma)? {
        Ok(p) => p,
        Err(e) => return Ok(Err(e)),
    };
    let mut histogram = BTreeMap::new();
    for &m in &profile.classes_met {
        *histogram.entry(m).or_insert(0) += 1;
    }
    let constant = (histogram.len() == 1).then(|| *histogram.keys().next().unwrap());
    let cover = is_2design(d).ok().and_then(|p| {
        let l = p.lambda;
        let type1 = p.v == l * l * (l + 2) && p.k == l * (l + 1) && sigma.num_classes() == l + 2;
        type1.then(|| CoverCheck {
            lambda_plus_one: l + 1,
            d_minus_one: sigma.num_classes() - 1,
            holds: profile.classes_met.iter().all(|&m| m == l + 1),
        })
    });
    Ok(Ok(SigmaProfile { histogram, constant, cover }))
}

/// Sub-claims checked when the orbits of `N` form a second partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecondPartitionClaims {
    pub classes: Vec<Vec<usize>>,
    pub class_size: usize,
    /// Class size equals `λ + 2`; `None` if the structure is not a 2-design.
    pub size_is_lambda_plus_two: Option<bool>,
    /// Every block meets every new class in 0 or 2 points.
    pub traces_zero_or_two: bool,
    /// Every old class meets every new class in exactly one point.
    pub meets_in_one_point: bool,
    /// The new partition is invariant under the ambient group.
    pub ambient_invariant: Option<bool>,
    /// Each new-class stabilizer in the ambient group acts 2-transitively on
    /// its class.
    pub class_actions_2_transitive: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitPattern {
    /// The orbits of `N` are the classes of `Σ`.
    OrbitsAreClasses,
    /// `N` is transitive on points.
    Transitive,
    /// The orbits form another equal-sized partition.
    SecondPartition(SecondPartitionClaims),
    /// None of the three patterns holds.
    None { orbit_sizes: Vec<usize> },
}

/// Classifies the orbits of `n` relative to `sigma`. When an ambient group
/// is given, the 2-transitivity sub-claim and invariance of the orbit
/// partition are checked against it.
pub fn normal_orbit_trichotomy(
    d: &IncidenceStructure,
    sigma: &BlockSystem,
    n: &PermutationGroup,
    ambient: Option<&PermutationGroup>,
) -> Result<OrbitPattern, DesignError> {
    check_partition(d, sigma)?;
    block_action(d, n)?;
    if let Some(g) = ambient {
        block_action(d, g)?;
    }
    let orbits = action::orbits(n);
    let mut classes = sigma.classes();
    classes.sort();
    if orbits == classes {
        return Ok(OrbitPattern::OrbitsAreClasses);
    }
    if orbits.len() == 1 {
        return Ok(OrbitPattern::Transitive);
    }
    let size = orbits[0].len();
    if size == 1 || orbits.iter().any(|o| o.len() != size) {
        return Ok(OrbitPattern::None { orbit_sizes: orbits.iter().map(Vec::len).collect() });
    }
    let second = BlockSystem::from_classes(&orbits, d.v)?;
    let size_is_lambda_plus_two = is_2design(d).ok().map(|p| size == p.lambda + 2);
    let traces_zero_or_two = traces(d, &second)
        .iter()
        .all(|t| t.values().all(|pts| pts.len() == 2));
    let meets_in_one_point = sigma.classes().iter().all(|c| {
        let mut hit = vec![0usize; second.num_classes()];
        for &x in c {
            hit[second.class_of(x)] += 1;
        }
        hit.iter().all(|&h| h == 1)
    });
    let (ambient_invariant, class_actions_2_transitive) = match ambient {
        None => (None, None),
        Some(g) => {
            if second.check_invariant(g).is_err() {
                (Some(false), None)
            } else {
                let mut all = true;
                for j in 0..second.num_classes() {
                    let r = action::class_stabilizer_restricted(g, &second, j)?;
                    if r.target.degree() < 2 || !action::is_2_transitive(&r.target)? {
                        all = false;
                        break;
                    }
                }
                (Some(true), Some(all))
            }
        }
    };
    Ok(OrbitPattern::SecondPartition(SecondPartitionClaims {
        classes: orbits,
        class_size: size,
        size_is_lambda_plus_two,
        traces_zero_or_two,
        meets_in_one_point,
        ambient_invariant,
        class_actions_2_transitive,
    }))
}
