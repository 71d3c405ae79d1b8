//! Evidence search for the cover constant `C_k`: for every examined
//! `k`-coloring of `K_n`, the smallest `C` such that `k - 1` sets cover the
//! vertices with each set of monochromatic diameter at most `C` in some color.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::graph::ColoredCompleteGraph;

/// Largest vertex count the search supports.
pub const MAX_SEARCH_VERTICES: usize = 16;

/// Default cap on `colorings × per-coloring cover work` for exhaustive runs.
pub const DEFAULT_EXHAUSTIVE_BUDGET: u64 = 1 << 24;

const INF: u8 = u8::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("the search needs at least two colors, got {0}")]
    TooFewColors(u8),
    #[error("vertex range {min}..={max} must lie within 2..={MAX_SEARCH_VERTICES}")]
    BadRange { min: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CkSearchOptions {
    pub k: u8,
    pub min_n: usize,
    pub max_n: usize,
    /// Colorings drawn per `n` when the exhaustive budget is exceeded.
    pub samples: usize,
    pub seed: u64,
    pub exhaustive_budget: u64,
}

impl CkSearchOptions {
    pub fn new(k: u8, max_n: usize) -> Self {
        Self {
            k,
            min_n: 2,
            max_n,
            samples: 2000,
            seed: 0,
            exhaustive_budget: DEFAULT_EXHAUSTIVE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerN {
    pub n: usize,
    pub exhaustive: bool,
    pub examined: u64,
    /// Largest cover value over the examined colorings; `None` when some
    /// coloring admits no finite cover.
    pub forced: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    #[serde(rename = "C")]
    pub c: usize,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CkSearchReport {
    pub k: u8,
    pub n_range: [usize; 2],
    /// True when every `n` in range was enumerated exhaustively.
    pub exhaustive: bool,
    #[serde(rename = "min_passing_C")]
    pub min_passing_c: Option<usize>,
    /// Edge list `[u, v, c]` of a coloring that forces `min_passing_C`.
    pub witness: Vec<[usize; 3]>,
    pub witness_n: usize,
    pub per_n: Vec<PerN>,
    pub candidates: Vec<Candidate>,
}

/// Colorings of `K_n` as flat upper-triangular color vectors.
struct Instance {
    n: usize,
    k: u8,
}

impl Instance {
    fn edges(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// The `index`-th coloring with edge `(0, 1)` pinned to color 1.
    fn decode(&self, mut index: u64, out: &mut [u8]) {
        out[0] = 1;
        for c in out[1..].iter_mut() {
            *c = (index % self.k as u64) as u8 + 1;
            index /= self.k as u64;
        }
    }

    fn adjacency(&self, colors: &[u8]) -> Vec<Vec<u32>> {
        let mut adj = vec![vec![0u32; self.n]; self.k as usize + 1];
        let mut e = 0;
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                let c = colors[e] as usize;
                adj[c][u] |= 1 << v;
                adj[c][v] |= 1 << u;
                e += 1;
            }
        }
        adj
    }
}

fn diameter(adj: &[u32], set: u32) -> u8 {
    if set.count_ones() <= 1 {
        return 0;
    }
    let mut diam = 0;
    let mut rest = set;
    while rest != 0 {
        let src = rest.trailing_zeros();
        rest &= rest - 1;
        let mut seen = 1u32 << src;
        let mut frontier = seen;
        let mut depth = 0;
        while seen != set {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[v];
            }
            next &= set & !seen;
            if next == 0 {
                return INF;
            }
            seen |= next;
            frontier = next;
            depth += 1;
        }
        diam = diam.max(depth);
    }
    diam
}

/// Best cover value of one coloring by `k - 1` sets.
fn cover_value(inst: &Instance, colors: &[u8]) -> u8 {
    let adj = inst.adjacency(colors);
    let n = inst.n;
    let full = (1u32 << n) - 1;
    let best_color = |set: u32| (1..=inst.k as usize).map(|c| diameter(&adj[c], set)).min().expect("k >= 2");
    let parts = inst.k as usize - 1;
    if parts == 1 {
        return best_color(full);
    }
    let size = 1usize << n;
    // g[U] = min over supersets B of U of d(B); d(empty) = 0
    let mut g: Vec<u8> = (0..size as u32).map(|s| if s == 0 { 0 } else { best_color(s) }).collect();
    for bit in 0..n {
        for s in 0..size {
            if s & (1 << bit) == 0 {
                g[s] = g[s].min(g[s | (1 << bit)]);
            }
        }
    }
    let mut f = g.clone();
    for _ in 1..parts {
        let mut next = vec![INF; size];
        for (u, slot) in next.iter_mut().enumerate() {
            let u = u as u32;
            let mut a = u;
            loop {
                *slot = (*slot).min(g[a as usize].max(f[(u & !a) as usize]));
                if a == 0 {
                    break;
                }
                a = (a - 1) & u;
            }
        }
        f = next;
    }
    f[full as usize]
}

fn cover_work(k: u8, n: usize) -> u64 {
    if k == 2 {
        1
    } else {
        3u64.saturating_pow(n as u32)
    }
}

/// `(value, ordinal)`, largest value first, then smallest ordinal.
fn pick(a: (u8, u64), b: (u8, u64)) -> (u8, u64) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// Searches `K_n` for `n` in range, exhaustively where the budget allows and
/// by seeded sampling elsewhere. Results do not depend on thread scheduling.
pub fn ck_search(opts: &CkSearchOptions) -> Result<CkSearchReport, SearchError> {
    if opts.k < 2 {
        return Err(SearchError::TooFewColors(opts.k));
    }
    if opts.min_n < 2 || opts.max_n > MAX_SEARCH_VERTICES || opts.min_n > opts.max_n {
        return Err(SearchError::BadRange {
            min: opts.min_n,
            max: opts.max_n,
        });
    }
    let mut per_n = Vec::new();
    let mut overall: Option<(u8, usize, Vec<u8>)> = None;
    for n in opts.min_n..=opts.max_n {
        let inst = Instance { n, k: opts.k };
        let e = inst.edges();
        let count = (opts.k as u64).checked_pow(e as u32 - 1);
        let exhaustive = count.is_some_and(|c| c.saturating_mul(cover_work(opts.k, n)) <= opts.exhaustive_budget);
        let (value, colors, examined) = if exhaustive {
            let count = count.expect("checked above");
            let (value, ordinal) = (0..count)
                .into_par_iter()
                .map_init(
                    || vec![0u8; e],
                    |buf, idx| {
                        inst.decode(idx, buf);
                        (cover_value(&inst, buf), idx)
                    },
                )
                .reduce(|| (0, u64::MAX), pick);
            let mut colors = vec![0u8; e];
            inst.decode(ordinal, &mut colors);
            (value, colors, count)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(n as u64);
            let samples: Vec<Vec<u8>> = (0..opts.samples)
                .map(|_| {
                    let mut c: Vec<u8> = (0..e).map(|_| rng.gen_range(1..=opts.k)).collect();
                    c[0] = 1;
                    c
                })
                .collect();
            let (value, ordinal) = samples
                .par_iter()
                .enumerate()
                .map(|(i, c)| (cover_value(&inst, c), i as u64))
                .reduce(|| (0, u64::MAX), pick);
            let colors = samples.get(ordinal as usize).cloned().unwrap_or_default();
            (value, colors, opts.samples as u64)
        };
        per_n.push(PerN {
            n,
            exhaustive,
            examined,
            forced: (value != INF).then_some(value as usize),
        });
        if examined > 0 && overall.as_ref().is_none_or(|(v, _, _)| value > *v) {
            overall = Some((value, n, colors));
        }
    }
    let (value, witness_n, colors) = overall.unwrap_or((0, 0, Vec::new()));
    let min_passing_c = (value != INF).then_some(value as usize);
    let mut witness = Vec::with_capacity(colors.len());
    let mut idx = 0;
    for u in 0..witness_n {
        for v in (u + 1)..witness_n {
            witness.push([u, v, colors[idx] as usize]);
            idx += 1;
        }
    }
    let top = min_passing_c.unwrap_or_else(|| per_n.iter().filter_map(|p| p.forced).max().unwrap_or(0)) + 1;
    let candidates = (1..=top.max(1))
        .map(|c| Candidate {
            c,
            passes: min_passing_c.is_some_and(|m| m <= c),
        })
        .collect();
    Ok(CkSearchReport {
        k: opts.k,
        n_range: [opts.min_n, opts.max_n],
        exhaustive: per_n.iter().all(|p| p.exhaustive),
        min_passing_c,
        witness,
        witness_n,
        per_n,
        candidates,
    })
}

impl CkSearchReport {
    /// The witness as a graph, if there is one.
    pub fn witness_graph(&self) -> Option<ColoredCompleteGraph> {
        if self.witness_n < 2 {
            return None;
        }
        let w = &self.witness;
        ColoredCompleteGraph::from_fn(self.witness_n, self.k, |u, v| {
            w.iter().find(|e| e[0] == u && e[1] == v).map_or(0, |e| e[2] as u8)
        })
        .ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::graph::{mono_diameter, Diameter};

    #[test]
    fn single_edge_gives_one() {
        let r = ck_search(&CkSearchOptions::new(2, 2)).unwrap();
        assert_eq!(r.min_passing_c, Some(1));
        assert!(r.exhaustive);
        assert_eq!(r.witness, vec![[0, 1, 1]]);
    }

    #[test]
    fn two_colors_up_to_six() {
        let r = ck_search(&CkSearchOptions::new(2, 6)).unwrap();
        assert_eq!(r.min_passing_c, Some(3));
        assert_eq!(r.per_n[0].forced, Some(1));
        // P4 and its complement both have diameter 3
        assert_eq!(r.per_n[2].forced, Some(3));
        let g = r.witness_graph().unwrap();
        let all: Vec<usize> = (0..g.n_vertices()).collect();
        let best = (1..=2).map(|c| mono_diameter(&g, c, &all).unwrap()).min().unwrap();
        assert_eq!(best, Diameter::Finite(3));
        assert!(r.candidates.iter().any(|c| c.c == 3 && c.passes));
        assert!(r.candidates.iter().any(|c| c.c == 2 && !c.passes));
    }

    #[test]
    fn sampled_runs_are_labelled_and_deterministic() {
        let mut opts = CkSearchOptions::new(3, 5);
        opts.exhaustive_budget = 1000;
        opts.samples = 300;
        opts.seed = 9;
        let a = ck_search(&opts).unwrap();
        let b = ck_search(&opts).unwrap();
        assert_eq!(a, b);
        assert!(!a.exhaustive);
        assert!(a.per_n.iter().any(|p| !p.exhaustive));
    }

    #[test]
    fn json_field_names() {
        let r = ck_search(&CkSearchOptions::new(2, 3)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["k", "n_range", "exhaustive", "min_passing_C", "witness"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(ck_search(&CkSearchOptions::new(1, 4)), Err(SearchError::TooFewColors(1)));
        assert!(ck_search(&CkSearchOptions::new(2, 40)).is_err());
    }
}
