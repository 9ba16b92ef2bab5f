//! Permutations on site labels, cycle decomposition, and the reduction of
//! any permutation to at most two stages of disjoint transpositions.
//!
//! Composition convention, used everywhere in this crate: `compose(p, q)`
//! applies the *right* argument first, `compose(p, q)(i) = p(q(i))`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graphs::{Region, Tripartition};

/// A bijection on `0..n`; entry `i` of `images` is the destination `p(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

/// One stage of pairwise-disjoint transpositions; an involution.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TranspositionStage {
    pairs: BTreeSet<(usize, usize)>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img >= n {
                return Err(Error::NotAPermutation(format!(
                    "image {img} out of range for size {n}"
                )));
            }
            if seen[img] {
                return Err(Error::NotAPermutation(format!("image {img} repeated")));
            }
            seen[img] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.size()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img] = i;
        }
        Self { images }
    }

    /// `result(i) = self(other(i))`: `other` acts first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.size() != other.size() {
            return Err(Error::DimensionMismatch {
                context: "permutation compose",
                expected: self.size(),
                actual: other.size(),
            });
        }
        Ok(Self {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        })
    }

    /// Disjoint cycles covering all non-fixed points. Each cycle starts at
    /// its minimum element; cycles are sorted by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut visited = vec![false; self.size()];
        let mut cycles = Vec::new();
        for start in 0..self.size() {
            if visited[start] || self.images[start] == start {
                visited[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            visited[start] = true;
            let mut current = self.images[start];
            while current != start {
                visited[current] = true;
                cycle.push(current);
                current = self.images[current];
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Splits the permutation into two stages of disjoint transpositions
    /// such that `stage_b ∘ stage_a = p` (stage A acts first).
    ///
    /// Each cycle is written as the product of two reflections: for a cycle
    /// `(a_0 a_1 … a_{m-1})`, stage A reflects positions about the midpoint
    /// (`a_i ↔ a_{m-1-i}`) and stage B reflects about position 0
    /// (`a_i ↔ a_{m-i}`). Disjoint cycles keep the stages disjoint.
    pub fn two_stage_decomposition(&self) -> (TranspositionStage, TranspositionStage) {
        let mut stage_a = TranspositionStage::default();
        let mut stage_b = TranspositionStage::default();
        for cycle in self.cycles() {
            let m = cycle.len();
            for i in 0..m {
                let j = m - 1 - i;
                if i < j {
                    stage_a.insert(cycle[i], cycle[j]);
                }
            }
            for i in 1..m {
                let j = m - i;
                if i < j {
                    stage_b.insert(cycle[i], cycle[j]);
                }
            }
        }
        (stage_a, stage_b)
    }

    /// Parses `p:3,0,1,2` (image list) or `c:(0 1 2 3)(4 5)` (cycles; size is
    /// the largest mentioned element plus one).
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("permutation '{text}': {msg}"));
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| bad("expected 'p:<images>' or 'c:(<cycle>)...'"))?;
        match kind {
            "p" => {
                let images: Vec<usize> = rest
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|_| bad("image not a number")))
                    .collect::<Result<_>>()?;
                Self::new(images)
            }
            "c" => {
                let mut cycles: Vec<Vec<usize>> = Vec::new();
                let mut remaining = rest.trim();
                while !remaining.is_empty() {
                    let open = remaining
                        .strip_prefix('(')
                        .ok_or_else(|| bad("cycles must be parenthesized"))?;
                    let close = open.find(')').ok_or_else(|| bad("unclosed cycle"))?;
                    let cycle: Vec<usize> = open[..close]
                        .split_whitespace()
                        .map(|s| s.parse().map_err(|_| bad("cycle element not a number")))
                        .collect::<Result<_>>()?;
                    cycles.push(cycle);
                    remaining = open[close + 1..].trim();
                }
                let n = cycles
                    .iter()
                    .flatten()
                    .max()
                    .map_or(0, |&max| max + 1);
                let mut images: Vec<usize> = (0..n).collect();
                for cycle in &cycles {
                    for window in 0..cycle.len() {
                        let from = cycle[window];
                        let to = cycle[(window + 1) % cycle.len()];
                        images[from] = to;
                    }
                }
                Self::new(images)
            }
            other => Err(bad(&format!("unknown format '{other}'"))),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p:")?;
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{img}")?;
        }
        Ok(())
    }
}

impl TranspositionStage {
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn insert(&mut self, a: usize, b: usize) {
        debug_assert_ne!(a, b);
        let pair = (a.min(b), a.max(b));
        debug_assert!(
            self.pairs.iter().all(|&(x, y)| x != pair.0
                && x != pair.1
                && y != pair.0
                && y != pair.1),
            "transposition stages must stay disjoint"
        );
        self.pairs.insert(pair);
    }

    /// The stage as a permutation on `0..n`.
    pub fn as_permutation(&self, n: usize) -> Permutation {
        let mut images: Vec<usize> = (0..n).collect();
        for &(a, b) in &self.pairs {
            images.swap(a, b);
        }
        Permutation { images }
    }
}

/// The permutation swapping each listed `(L site, R site)` pair of the
/// tripartition and fixing everything else.
pub fn global_transposition(t: &Tripartition, pairing: &[(usize, usize)]) -> Result<Permutation> {
    let mut images: Vec<usize> = (0..t.n()).collect();
    let mut used = BTreeSet::new();
    for &(l, r) in pairing {
        if l >= t.n() || r >= t.n() {
            return Err(Error::VertexOutOfRange {
                vertex: l.max(r),
                n: t.n(),
            });
        }
        if t.region_of(l) != Region::L || t.region_of(r) != Region::R {
            return Err(Error::PairingNotLtoR(l, r));
        }
        for site in [l, r] {
            if !used.insert(site) {
                return Err(Error::DuplicatePairedSite(site));
            }
        }
        images.swap(l, r);
    }
    Ok(Permutation { images })
}

/// Pairs the `j`-th `L` vertex with the `j`-th `R` vertex for all of `R`.
pub fn full_star_pairing(t: &Tripartition) -> Vec<(usize, usize)> {
    t.l_vertices().zip(t.r_vertices()).collect()
}
