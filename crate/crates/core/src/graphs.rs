//! Architecture graphs carrying a tripartition `L | C | R`.
//!
//! Vertices are labeled globally: the `L` block first (`0..n_l`), then `C`,
//! then `R`. Every module in the crate indexes sites with this convention.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Which block of the tripartition a vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    L,
    C,
    R,
}

/// A graph with vertex sets `L`, `C`, `R` and no edge joining `L` to `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tripartition {
    n_l: usize,
    n_c: usize,
    n_r: usize,
    edges: BTreeSet<(usize, usize)>,
}

/// Diagnostic produced by [`Tripartition::validate`].
#[derive(Debug, Clone)]
pub struct BottleneckReport {
    /// True when no edge joins an `L` vertex to an `R` vertex.
    pub no_lr_edges: bool,
    /// Edges violating the tripartite constraint, if any.
    pub violating_edges: Vec<(usize, usize)>,
    /// True when `N_L >= N_R >= N_C`.
    pub sizes_ordered: bool,
    /// True when both checks above hold, i.e. `C` is a vertex bottleneck.
    pub is_bottleneck: bool,
}

impl Tripartition {
    /// Builds a tripartition from block sizes and an explicit edge list,
    /// rejecting self-loops, out-of-range vertices, and `L`-`R` edges.
    pub fn new(n_l: usize, n_c: usize, n_r: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        let n = n_l + n_c + n_r;
        let mut edges = BTreeSet::new();
        for &(a, b) in edge_list {
            if a >= n || b >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: a.max(b),
                    n,
                });
            }
            if a == b {
                return Err(Error::InvalidArgument {
                    context: "tripartition edge",
                    expected: format!("no self-loop at vertex {a}"),
                });
            }
            let edge = (a.min(b), a.max(b));
            let t = Self {
                n_l,
                n_c,
                n_r,
                edges: BTreeSet::new(),
            };
            if matches!(
                (t.region_of(edge.0), t.region_of(edge.1)),
                (Region::L, Region::R) | (Region::R, Region::L)
            ) {
                return Err(Error::ForbiddenEdge(edge.0, edge.1));
            }
            edges.insert(edge);
        }
        Ok(Self { n_l, n_c, n_r, edges })
    }

    /// Star graph with `leaves` leaves: a single-vertex bottleneck with the
    /// leaves split `N_L = ⌈leaves/2⌉`, `N_R = ⌊leaves/2⌋` (the odd leaf goes
    /// to `L`, which is taken to be the larger side).
    pub fn star(leaves: usize) -> Result<Self> {
        if leaves < 2 {
            return Err(Error::TooFewLeaves(leaves));
        }
        let n_l = leaves.div_ceil(2);
        let n_r = leaves / 2;
        let center = n_l;
        let edges: Vec<(usize, usize)> = (0..leaves + 1)
            .filter(|&v| v != center)
            .map(|v| (v, center))
            .collect();
        Self::new(n_l, 1, n_r, &edges)
    }

    /// Vertex barbell: two `K_n` cliques joined through one cut vertex that
    /// is adjacent to every other vertex.
    pub fn vertex_barbell(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::BarbellTooSmall(n));
        }
        let center = n;
        let mut edges = Vec::new();
        for block in [0..n, n + 1..2 * n + 1] {
            let vertices: Vec<usize> = block.collect();
            for (i, &a) in vertices.iter().enumerate() {
                for &b in &vertices[i + 1..] {
                    edges.push((a, b));
                }
            }
            for &a in &vertices {
                edges.push((a, center));
            }
        }
        Self::new(n, 1, n, &edges)
    }

    pub fn n_l(&self) -> usize {
        self.n_l
    }

    pub fn n_c(&self) -> usize {
        self.n_c
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    /// Total vertex count `N = N_L + N_C + N_R`.
    pub fn n(&self) -> usize {
        self.n_l + self.n_c + self.n_r
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn region_of(&self, vertex: usize) -> Region {
        if vertex < self.n_l {
            Region::L
        } else if vertex < self.n_l + self.n_c {
            Region::C
        } else {
            Region::R
        }
    }

    pub fn l_vertices(&self) -> std::ops::Range<usize> {
        0..self.n_l
    }

    pub fn c_vertices(&self) -> std::ops::Range<usize> {
        self.n_l..self.n_l + self.n_c
    }

    pub fn r_vertices(&self) -> std::ops::Range<usize> {
        self.n_l + self.n_c..self.n()
    }

    /// Checks the no-`L`-`R`-edge constraint and the bottleneck ordering
    /// `N_L >= N_R >= N_C`. Purely diagnostic; never fails.
    pub fn validate(&self) -> BottleneckReport {
        let violating_edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| {
                matches!(
                    (self.region_of(a), self.region_of(b)),
                    (Region::L, Region::R) | (Region::R, Region::L)
                )
            })
            .collect();
        let no_lr_edges = violating_edges.is_empty();
        let sizes_ordered = self.n_l >= self.n_r && self.n_r >= self.n_c;
        BottleneckReport {
            no_lr_edges,
            violating_edges,
            sizes_ordered,
            is_bottleneck: no_lr_edges && sizes_ordered,
        }
    }

    /// Parses the graph-spec text format: `star:<leaves>`, `barbell:<n>`, or
    /// `tri:<n_l>,<n_c>,<n_r>:<i-j;i-j;...>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("graph spec '{spec}': {msg}"));
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| bad("expected 'star:<leaves>', 'barbell:<n>', or 'tri:...'"))?;
        match kind {
            "star" => {
                let leaves: usize = rest.parse().map_err(|_| bad("leaf count not a number"))?;
                Self::star(leaves)
            }
            "barbell" => {
                let n: usize = rest.parse().map_err(|_| bad("clique size not a number"))?;
                Self::vertex_barbell(n)
            }
            "tri" => {
                let (sizes, edges_text) = rest
                    .split_once(':')
                    .ok_or_else(|| bad("expected tri:<n_l>,<n_c>,<n_r>:<edges>"))?;
                let sizes: Vec<usize> = sizes
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|_| bad("block size not a number")))
                    .collect::<Result<_>>()?;
                if sizes.len() != 3 {
                    return Err(bad("expected three block sizes"));
                }
                let mut edges = Vec::new();
                for pair in edges_text.split(';').filter(|s| !s.trim().is_empty()) {
                    let (a, b) = pair
                        .split_once('-')
                        .ok_or_else(|| bad("edge must look like i-j"))?;
                    let a = a.trim().parse().map_err(|_| bad("edge endpoint not a number"))?;
                    let b = b.trim().parse().map_err(|_| bad("edge endpoint not a number"))?;
                    edges.push((a, b));
                }
                Self::new(sizes[0], sizes[1], sizes[2], &edges)
            }
            other => Err(bad(&format!("unknown graph kind '{other}'"))),
        }
    }
}

impl fmt::Display for Tripartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "tri:{},{},{} ({} edges)",
            self.n_l,
            self.n_c,
            self.n_r,
            self.edges.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_eight_leaves() {
        let s = Tripartition::star(8).unwrap();
        assert_eq!(s.n(), 9);
        assert_eq!(s.edge_count(), 8);
        let center = s.c_vertices().next().unwrap();
        assert!(s.edges().all(|(a, b)| a == center || b == center));
        assert_eq!((s.n_l(), s.n_c(), s.n_r()), (4, 1, 4));
    }

    #[test]
    fn star_two_leaves_is_a_path() {
        let s = Tripartition::star(2).unwrap();
        assert_eq!(s.n(), 3);
        assert_eq!(s.edge_count(), 2);
    }

    #[test]
    fn star_odd_leaves_enlarges_left() {
        let s = Tripartition::star(5).unwrap();
        assert_eq!((s.n_l(), s.n_c(), s.n_r()), (3, 1, 2));
        let report = s.validate();
        assert!(report.is_bottleneck);
        // Every leaf is adjacent only to the center.
        for leaf in s.l_vertices().chain(s.r_vertices()) {
            let degree = s.edges().filter(|&(a, b)| a == leaf || b == leaf).count();
            assert_eq!(degree, 1);
        }
    }

    #[test]
    fn star_rejects_single_leaf() {
        assert!(matches!(Tripartition::star(1), Err(Error::TooFewLeaves(1))));
    }

    #[test]
    fn barbell_vertex_and_edge_counts() {
        let b = Tripartition::vertex_barbell(5).unwrap();
        assert_eq!(b.n(), 11);

        let b2 = Tripartition::vertex_barbell(2).unwrap();
        assert_eq!(b2.n(), 5);
        // 2·C(2,2 choose 2) + 2·2 = 2·1 + 4.
        assert_eq!(b2.edge_count(), 6);

        let b3 = Tripartition::vertex_barbell(3).unwrap();
        let center = b3.c_vertices().next().unwrap();
        let degree = b3.edges().filter(|&(a, b)| a == center || b == center).count();
        assert_eq!(degree, 6);
    }

    #[test]
    fn validate_flags_lr_edge() {
        // Triangle with one vertex per block is rejected at construction.
        assert!(matches!(
            Tripartition::new(1, 1, 1, &[(0, 1), (1, 2), (0, 2)]),
            Err(Error::ForbiddenEdge(0, 2))
        ));
    }

    #[test]
    fn validate_flags_size_ordering() {
        // N_C > N_R: valid graph but not a bottleneck.
        let t = Tripartition::new(3, 2, 1, &[(0, 3), (4, 5)]).unwrap();
        let report = t.validate();
        assert!(report.no_lr_edges);
        assert!(!report.sizes_ordered);
        assert!(!report.is_bottleneck);
    }

    #[test]
    fn star_bottleneck_for_all_sizes() {
        for n in 2..=12 {
            let s = Tripartition::star(n).unwrap();
            assert!(s.validate().is_bottleneck, "star({n})");
            assert_eq!(s.edge_count(), n);
        }
    }

    #[test]
    fn deleting_center_disconnects_star() {
        let s = Tripartition::star(6).unwrap();
        let center = s.c_vertices().next().unwrap();
        // Without the center no edge remains, so L cannot reach R.
        let edges: Vec<_> = s
            .edges()
            .filter(|&(a, b)| a != center && b != center)
            .collect();
        assert!(edges.is_empty());
    }

    #[test]
    fn parse_round_trips() {
        let s = Tripartition::parse("star:8").unwrap();
        assert_eq!(s, Tripartition::star(8).unwrap());
        let b = Tripartition::parse("barbell:3").unwrap();
        assert_eq!(b, Tripartition::vertex_barbell(3).unwrap());
        let t = Tripartition::parse("tri:2,1,1:0-2;1-2;2-3").unwrap();
        assert_eq!((t.n_l(), t.n_c(), t.n_r()), (2, 1, 1));
        assert_eq!(t.edge_count(), 3);
    }

    #[test]
    fn parse_rejects_lr_edge_and_garbage() {
        assert!(Tripartition::parse("tri:1,1,1:0-2").is_err());
        assert!(Tripartition::parse("star:x").is_err());
        assert!(Tripartition::parse("ring:5").is_err());
    }
}
