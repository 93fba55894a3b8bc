//! Permutations of `{0, …, n−1}` stored as image sequences.
//!
//! Products act left to right: `a.then(&b)` sends `x` to `b(a(x))`, which is
//! also the reading order of cycle notation.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("malformed cycle notation at byte {pos}: {msg}")]
    Malformed { pos: usize, msg: &'static str },
    #[error("point {point} appears more than once")]
    RepeatedPoint { point: usize },
    #[error("point {point} is out of range for degree {degree}")]
    OutOfRange { point: usize, degree: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("image sequence is not a bijection (value {value} repeated or missing)")]
    NotBijection { value: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image sequence, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n {
                return Err(PermError::OutOfRange { point: x, degree: n });
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(PermError::NotBijection { value: x });
            }
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// Trusted constructor for internal callers that already know the
    /// sequence is a bijection.
    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| i as u32 == x)
        });
        Permutation { images }
    }

    /// Parses disjoint-cycle notation such as `"(0 1 2)(3 4)"`.
    ///
    /// Grammar: `perm := cycle* ; cycle := '(' int (' ' int)* ')'`, with
    /// whitespace allowed only between cycles. The empty string is the
    /// identity.
    pub fn from_cycles(text: &str, degree: usize) -> Result<Self, PermError> {
        let bytes = text.as_bytes();
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        let mut pos = 0;
        while pos < bytes.len() {
            match bytes[pos] {
                b' ' | b'\t' => {
                    pos += 1;
                }
                b'(' => {
                    pos += 1;
                    let mut cycle = Vec::new();
                    loop {
                        let start = pos;
                        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                            pos += 1;
                        }
                        if start == pos {
                            return Err(PermError::Malformed {
                                pos,
                                msg: "expected a point index",
                            });
                        }
                        let point: usize = text[start..pos].parse().map_err(|_| {
                            PermError::Malformed {
                                pos: start,
                                msg: "point index too large",
                            }
                        })?;
                        if point >= degree {
                            return Err(PermError::OutOfRange { point, degree });
                        }
                        if std::mem::replace(&mut used[point], true) {
                            return Err(PermError::RepeatedPoint { point });
                        }
                        cycle.push(point);
                        match bytes.get(pos) {
                            Some(b' ') => pos += 1,
                            Some(b')') => {
                                pos += 1;
                                break;
                            }
                            Some(_) => {
                                return Err(PermError::Malformed {
                                    pos,
                                    msg: "expected ' ' or ')'",
                                })
                            }
                            None => {
                                return Err(PermError::Malformed {
                                    pos,
                                    msg: "unterminated cycle",
                                })
                            }
                        }
                    }
                    for (i, &x) in cycle.iter().enumerate() {
                        images[x] = cycle[(i + 1) % cycle.len()] as u32;
                    }
                }
                _ => {
                    return Err(PermError::Malformed {
                        pos,
                        msg: "expected '('",
                    })
                }
            }
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.images
    }

    /// The product "first `self`, then `other`". Degrees must agree.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in product");
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, mut exp: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            exp >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn first_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &x)| i as u32 != x)
            .map(|(i, _)| i)
    }

    /// Image of a point set, sorted.
    pub fn image_of_set(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&x| self.apply(x)).collect();
        out.sort_unstable();
        out
    }

    /// Non-trivial cycles, each starting at its smallest point, ordered by
    /// that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Multiplicative order (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }

    /// Restriction to `points`, re-indexed by position in `points`.
    /// Returns `None` if `points` is not invariant.
    pub fn restrict(&self, points: &[usize]) -> Option<Permutation> {
        let mut local = vec![u32::MAX; self.degree()];
        for (i, &p) in points.iter().enumerate() {
            local[p] = i as u32;
        }
        let mut images = Vec::with_capacity(points.len());
        for &p in points {
            let q = local[self.apply(p)];
            if q == u32::MAX {
                return None;
            }
            images.push(q);
        }
        Some(Permutation { images })
    }
}

/// `x ↦ b(a(x))`, with a degree check.
pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation, PermError> {
    if a.degree() != b.degree() {
        return Err(PermError::DegreeMismatch {
            left: a.degree(),
            right: b.degree(),
        });
    }
    Ok(a.then(b))
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.cycles() {
            f.write_str("(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            write!(f, "Permutation(id; n={})", self.degree())
        } else {
            write!(f, "Permutation({self}; n={})", self.degree())
        }
    }
}
