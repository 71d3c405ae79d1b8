//! Edge-colored complete graphs, monochromatic diameters and the two-set
//! cover of a 3-colored complete graph.

use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("a graph needs at least two colors, got {0}")]
    TooFewColors(u8),
    #[error("color {color} on edge ({u}, {v}) is outside 1..={k}")]
    BadColor { u: usize, v: usize, color: u8, k: u8 },
    #[error("vertex {vertex} out of range for {n} vertices")]
    BadVertex { vertex: usize, n: usize },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("edge ({u}, {v}) is missing from the edge list")]
    MissingEdge { u: usize, v: usize },
    #[error("the cover needs exactly 3 colors, graph has {0}")]
    NotThreeColored(u8),
    #[error("diameter of an empty vertex set is undefined")]
    EmptySubset,
    #[error("cover verification failed ({reason}) on graph:\n{edges}")]
    CoverVerification { reason: String, edges: String },
}

/// A complete graph on `0..n` with every edge colored from `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoredCompleteGraph {
    n: usize,
    k: u8,
    /// Upper triangle, row-major.
    colors: Vec<u8>,
}

fn tri_index(n: usize, u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

impl ColoredCompleteGraph {
    pub fn from_fn(n: usize, k: u8, mut color: impl FnMut(usize, usize) -> u8) -> Result<Self, GraphError> {
        if k < 2 {
            return Err(GraphError::TooFewColors(k));
        }
        let mut colors = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in (u + 1)..n {
                let c = color(u, v);
                if c == 0 || c > k {
                    return Err(GraphError::BadColor { u, v, color: c, k });
                }
                colors.push(c);
            }
        }
        Ok(Self { n, k, colors })
    }

    pub fn uniform(n: usize, k: u8, color: u8) -> Result<Self, GraphError> {
        Self::from_fn(n, k, |_, _| color)
    }

    pub fn random<R: Rng>(n: usize, k: u8, rng: &mut R) -> Result<Self, GraphError> {
        if k < 2 {
            return Err(GraphError::TooFewColors(k));
        }
        Self::from_fn(n, k, |_, _| rng.gen_range(1..=k))
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn k_colors(&self) -> u8 {
        self.k
    }

    pub fn color(&self, u: usize, v: usize) -> u8 {
        assert!(u != v && u < self.n && v < self.n, "edge ({u}, {v})");
        self.colors[tri_index(self.n, u, v)]
    }

    /// Parses `u v c` lines (0-based vertices); blank lines and `#` comments
    /// are skipped. Every pair must appear exactly once.
    pub fn from_edge_list(text: &str, k: u8) -> Result<Self, GraphError> {
        if k < 2 {
            return Err(GraphError::TooFewColors(k));
        }
        let mut edges = Vec::new();
        let mut n = 0;
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |reason: String| GraphError::Parse { line: ln + 1, reason };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(parse_err(format!("expected `u v c`, found {} fields", fields.len())));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|e| parse_err(format!("`{s}`: {e}")));
            let (u, v, c) = (num(fields[0])?, num(fields[1])?, num(fields[2])?);
            if u == v {
                return Err(parse_err(format!("self-loop at {u}")));
            }
            if c == 0 || c > k as usize {
                return Err(GraphError::BadColor { u, v, color: c.min(255) as u8, k });
            }
            n = n.max(u + 1).max(v + 1);
            edges.push((ln + 1, u, v, c as u8));
        }
        let mut colors = vec![0u8; n * n.saturating_sub(1) / 2];
        for (line, u, v, c) in edges {
            let slot = &mut colors[tri_index(n, u, v)];
            if *slot != 0 {
                return Err(GraphError::Parse {
                    line,
                    reason: format!("edge ({u}, {v}) listed twice"),
                });
            }
            *slot = c;
        }
        for u in 0..n {
            for v in (u + 1)..n {
                if colors[tri_index(n, u, v)] == 0 {
                    return Err(GraphError::MissingEdge { u, v });
                }
            }
        }
        Ok(Self { n, k, colors })
    }

    /// One `u v c` line per edge, `u < v`, lexicographic.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v, c) in self.edges() {
            out.push_str(&format!("{u} {v} {c}\n"));
        }
        out
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u8)> + '_ {
        (0..self.n).flat_map(move |u| ((u + 1)..self.n).map(move |v| (u, v, self.color(u, v))))
    }

    /// Adjacency bitsets of the color-`c` subgraph.
    fn adjacency(&self, c: u8) -> Vec<Bitset> {
        let mut adj = vec![Bitset::new(self.n); self.n];
        for (u, v, col) in self.edges() {
            if col == c {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
        adj
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bitset(Vec<u64>);

impl Bitset {
    fn new(n: usize) -> Self {
        Self(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    k * 64 + b
                })
            })
        })
    }
}

/// Diameter of a (possibly disconnected) graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Diameter {
    Finite(usize),
    Infinite,
}

impl Diameter {
    pub fn finite(self) -> Option<usize> {
        match self {
            Diameter::Finite(d) => Some(d),
            Diameter::Infinite => None,
        }
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => f.write_str("inf"),
        }
    }
}

fn diameter_with(adj: &[Bitset], n: usize, subset: &[usize]) -> Result<Diameter, GraphError> {
    if subset.is_empty() {
        return Err(GraphError::EmptySubset);
    }
    let mut within = Bitset::new(n);
    for &v in subset {
        if v >= n {
            return Err(GraphError::BadVertex { vertex: v, n });
        }
        within.insert(v);
    }
    let size = within.count();
    let mut diam = 0;
    for src in within.iter() {
        let mut seen = Bitset::new(n);
        seen.insert(src);
        let mut frontier = seen.clone();
        let mut reached = 1;
        let mut depth = 0;
        while reached < size {
            let mut next = Bitset::new(n);
            for v in frontier.iter() {
                for (w, (a, (s, m))) in next.0.iter_mut().zip(adj[v].0.iter().zip(seen.0.iter().zip(&within.0))) {
                    *w |= a & m & !s;
                }
            }
            let found = next.count();
            if found == 0 {
                return Ok(Diameter::Infinite);
            }
            for (s, w) in seen.0.iter_mut().zip(&next.0) {
                *s |= w;
            }
            reached += found;
            depth += 1;
            frontier = next;
        }
        diam = diam.max(depth);
    }
    Ok(Diameter::Finite(diam))
}

/// Diameter of the subgraph induced on `subset` keeping only edges of color `c`.
pub fn mono_diameter(graph: &ColoredCompleteGraph, c: u8, subset: &[usize]) -> Result<Diameter, GraphError> {
    diameter_with(&graph.adjacency(c), graph.n, subset)
}

/// Two vertex sets covering the graph, each of small diameter in its color.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverResult {
    pub a: Vec<usize>,
    pub color_a: u8,
    pub b: Vec<usize>,
    pub color_b: u8,
    pub diam_a: usize,
    pub diam_b: usize,
    /// Which branch of the case analysis produced the cover.
    pub case: CoverCase,
    /// The pivot was added to both sets to make them intersect.
    pub pivot_added: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverCase {
    EmptyNeighborhood,
    DisjointAbsorption,
    AbsorbFirst,
    AbsorbSecond,
    EscapeSecondColor,
    EscapeFirstColor,
    FinalSplit,
}

/// Largest monochromatic diameter the cover guarantees.
pub const COVER_DIAMETER_BOUND: usize = 8;

/// Covers the vertices of a 3-colored complete graph by two sets of
/// monochromatic diameter at most 8, pivoting on vertex 0.
///
/// The pivot's color classes `A_i` and the absorption sets
/// `B_{i,j} = {a ∈ A_i : no edge of color j from a into A_j}` drive a fixed
/// case ladder; the result is checked by BFS before it is returned.
pub fn cover_two_sets(graph: &ColoredCompleteGraph) -> Result<CoverResult, GraphError> {
    if graph.k != 3 {
        return Err(GraphError::NotThreeColored(graph.k));
    }
    let n = graph.n;
    if n == 0 {
        return Err(GraphError::EmptySubset);
    }
    let x = 0usize;
    let c = |u: usize, v: usize| graph.color(u, v);
    // color classes indexed 1..=3; slot 0 unused
    let mut class: [Vec<usize>; 4] = Default::default();
    for v in 1..n {
        class[c(x, v) as usize].push(v);
    }
    let absorb = |i: usize, j: usize| -> Vec<usize> {
        class[i]
            .iter()
            .copied()
            .filter(|&a| class[j].iter().all(|&b| c(a, b) as usize != j))
            .collect()
    };
    let union = |parts: &[&[usize]]| -> Vec<usize> {
        let mut v: Vec<usize> = parts.iter().flat_map(|p| p.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let minus = |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().copied().filter(|v| !b.contains(v)).collect() };

    let (a, ca, b, cb, case) = 'ladder: {
        if let Some(i) = (1..=3).find(|&i| class[i].is_empty()) {
            let others: Vec<usize> = (1..=3).filter(|&j| j != i).collect();
            let (j, k) = (others[0], others[1]);
            break 'ladder (
                union(&[&class[j], &[x]]),
                j as u8,
                union(&[&class[k], &[x]]),
                k as u8,
                CoverCase::EmptyNeighborhood,
            );
        }
        for j in 1..=3 {
            let others: Vec<usize> = (1..=3).filter(|&t| t != j).collect();
            let (i, k) = (others[0], others[1]);
            let bji = absorb(j, i);
            let bjk = absorb(j, k);
            if bji.iter().all(|v| !bjk.contains(v)) {
                break 'ladder (
                    union(&[&[x], &class[i], &minus(&class[j], &bji)]),
                    i as u8,
                    union(&[&[x], &class[k], &minus(&class[j], &bjk)]),
                    k as u8,
                    CoverCase::DisjointAbsorption,
                );
            }
        }
        let b12 = absorb(1, 2);
        let b21 = absorb(2, 1);
        let b31 = absorb(3, 1);
        let b32 = absorb(3, 2);
        let a3 = *b31
            .iter()
            .find(|v| b32.contains(v))
            .expect("absorption sets of class 3 intersect past the disjoint case");
        if b12.iter().any(|&a1| c(a1, a3) == 3) {
            break 'ladder (
                union(&[&b12, &b21, &class[3], &[x]]),
                3,
                union(&[&class[1], &minus(&class[2], &b21), &[x]]),
                1,
                CoverCase::AbsorbFirst,
            );
        }
        if b21.iter().any(|&a2| c(a2, a3) == 3) {
            break 'ladder (
                union(&[&b12, &b21, &class[3], &[x]]),
                3,
                union(&[&class[2], &minus(&class[1], &b12), &[x]]),
                2,
                CoverCase::AbsorbSecond,
            );
        }
        if minus(&class[1], &b12).iter().any(|&a1| c(a1, a3) == 2) {
            break 'ladder (
                union(&[&class[1], &class[2], &[x, a3]]),
                2,
                union(&[&class[3], &[x]]),
                3,
                CoverCase::EscapeSecondColor,
            );
        }
        if minus(&class[2], &b21).iter().any(|&a2| c(a2, a3) == 1) {
            break 'ladder (
                union(&[&class[1], &class[2], &[x, a3]]),
                1,
                union(&[&class[3], &[x]]),
                3,
                CoverCase::EscapeFirstColor,
            );
        }
        let split = union(&[&b12, &b21]);
        let rest = minus(&(0..n).collect::<Vec<_>>(), &split);
        (split, 3, rest, 3, CoverCase::FinalSplit)
    };

    let mut result = CoverResult {
        a,
        color_a: ca,
        b,
        color_b: cb,
        diam_a: 0,
        diam_b: 0,
        case,
        pivot_added: false,
    };
    if result.color_a != result.color_b && result.a.iter().all(|v| !result.b.contains(v)) {
        for set in [&mut result.a, &mut result.b] {
            if !set.contains(&x) {
                set.push(x);
                set.sort_unstable();
            }
        }
        result.pivot_added = true;
    }
    verify_cover(graph, &mut result)?;
    Ok(result)
}

fn verify_cover(graph: &ColoredCompleteGraph, r: &mut CoverResult) -> Result<(), GraphError> {
    let fail = |reason: String| GraphError::CoverVerification {
        reason,
        edges: graph.to_edge_list(),
    };
    let mut covered = vec![false; graph.n];
    for &v in r.a.iter().chain(&r.b) {
        covered[v] = true;
    }
    if let Some(v) = covered.iter().position(|&c| !c) {
        return Err(fail(format!("vertex {v} uncovered ({:?})", r.case)));
    }
    let check = |set: &[usize], color: u8| -> Result<usize, GraphError> {
        match mono_diameter(graph, color, set)? {
            Diameter::Finite(d) if d <= COVER_DIAMETER_BOUND => Ok(d),
            d => Err(fail(format!("diameter {d} in color {color} ({:?})", r.case))),
        }
    };
    r.diam_a = check(&r.a, r.color_a)?;
    r.diam_b = check(&r.b, r.color_b)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_diameters() {
        let g = ColoredCompleteGraph::uniform(6, 2, 1).unwrap();
        assert_eq!(mono_diameter(&g, 1, &[0, 3, 5]).unwrap(), Diameter::Finite(1));
        assert_eq!(mono_diameter(&g, 1, &[4]).unwrap(), Diameter::Finite(0));
        assert_eq!(mono_diameter(&g, 2, &[0, 1]).unwrap(), Diameter::Infinite);
        assert_eq!(mono_diameter(&g, 1, &[]), Err(GraphError::EmptySubset));
    }

    #[test]
    fn path_has_diameter_three() {
        let g = ColoredCompleteGraph::from_fn(4, 2, |u, v| if v == u + 1 { 1 } else { 2 }).unwrap();
        assert_eq!(mono_diameter(&g, 1, &[0, 1, 2, 3]).unwrap(), Diameter::Finite(3));
        assert_eq!(mono_diameter(&g, 2, &[0, 1, 2, 3]).unwrap(), Diameter::Finite(3));
    }

    #[test]
    fn edge_list_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = ColoredCompleteGraph::random(7, 3, &mut rng).unwrap();
        let back = ColoredCompleteGraph::from_edge_list(&g.to_edge_list(), 3).unwrap();
        assert_eq!(g, back);
        assert!(matches!(
            ColoredCompleteGraph::from_edge_list("0 1 1\n0 2 1\n", 2),
            Err(GraphError::MissingEdge { u: 1, v: 2 })
        ));
        assert!(matches!(
            ColoredCompleteGraph::from_edge_list("0 1 4\n", 3),
            Err(GraphError::BadColor { .. })
        ));
    }

    #[test]
    fn uniform_cover() {
        let g = ColoredCompleteGraph::uniform(5, 3, 1).unwrap();
        let r = cover_two_sets(&g).unwrap();
        assert_eq!((r.a.clone(), r.color_a, r.diam_a), (vec![0, 1, 2, 3, 4], 1, 1));
        assert_eq!((r.b.clone(), r.diam_b), (vec![0], 0));
    }

    #[test]
    fn triangle_cover() {
        let g = ColoredCompleteGraph::from_fn(3, 3, |u, v| match (u, v) {
            (0, 1) => 1,
            (0, 2) => 2,
            _ => 3,
        })
        .unwrap();
        let r = cover_two_sets(&g).unwrap();
        assert_eq!(r.case, CoverCase::EmptyNeighborhood);
        assert_eq!((r.a, r.color_a, r.diam_a), (vec![0, 1], 1, 1));
        assert_eq!((r.b, r.color_b, r.diam_b), (vec![0, 2], 2, 1));
    }

    #[test]
    fn every_case_is_reachable() {
        use std::collections::BTreeSet;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut seen = BTreeSet::new();
        for trial in 0..20_000 {
            let n = 3 + trial % 9;
            // skewed weights make the rarer branches show up
            let w = [rng.gen_range(1..10), rng.gen_range(1..10), rng.gen_range(1..10)];
            let g = ColoredCompleteGraph::from_fn(n, 3, |_, _| {
                let r = rng.gen_range(0..w[0] + w[1] + w[2]);
                if r < w[0] { 1 } else if r < w[0] + w[1] { 2 } else { 3 }
            })
            .unwrap();
            seen.insert(format!("{:?}", cover_two_sets(&g).unwrap().case));
        }
        assert_eq!(seen.len(), 7, "{seen:?}");
    }

    #[test]
    fn random_covers_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 5, 12, 40] {
            for _ in 0..20 {
                let g = ColoredCompleteGraph::random(n, 3, &mut rng).unwrap();
                cover_two_sets(&g).unwrap();
            }
        }
    }
}
