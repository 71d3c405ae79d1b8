//! Contraction diagrams of a grid point in `N_0^3` and their classification
//! up to relabeling of the axes.
//!
//! The diagram of `x` records which operator contracts each of the six pairs
//! in `{x} ∪ N(x)`: the short edges `(x, x + e_i)` and the long edges
//! `(x + e_i, x + e_j)`.

pub mod configs;

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::grid::{GridIndex, OrbitGrid};

pub use configs::{check_tps, scan_forbidden_configs, scan_si_and_forbidden_t};

/// Long edges in code order.
pub const LONG_EDGES: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// The six axis permutations in lexicographic order.
pub const AXIS_PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("diagrams need exactly three operators, the grid has {0}")]
    Dimension(usize),
    #[error("center {0} does not match the grid dimension")]
    Center(GridIndex),
}

/// How one pair of the diagram is contracted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeContraction {
    /// 0-based; smallest among the minimizers of the post distance.
    pub direction: usize,
    pub pre_distance: f64,
    /// `d(a + e_i, b + e_i)` for each `i`.
    pub post_by_direction: [f64; 3],
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagram {
    pub center: GridIndex,
    /// `(x, x + e_i)` for `i = 1, 2, 3`.
    pub short: [EdgeContraction; 3],
    /// `(x + e_1, x + e_2)`, `(x + e_1, x + e_3)`, `(x + e_2, x + e_3)`.
    pub long: [EdgeContraction; 3],
}

impl Diagram {
    pub fn code(&self) -> DiagramCode {
        let mut c = [0u8; 6];
        for i in 0..3 {
            c[i] = self.short[i].direction as u8;
            c[3 + i] = self.long[i].direction as u8;
        }
        DiagramCode(c)
    }

    /// Edge contractions in code order.
    pub fn edges(&self) -> impl Iterator<Item = &EdgeContraction> {
        self.short.iter().chain(&self.long)
    }

    /// `{"center", "short", "long": {"12", "13", "23"}, "canonical"}` with
    /// 1-based directions.
    pub fn to_json(&self) -> serde_json::Value {
        let d = |e: &EdgeContraction| e.direction + 1;
        json!({
            "center": self.center,
            "short": [d(&self.short[0]), d(&self.short[1]), d(&self.short[2])],
            "long": {"12": d(&self.long[0]), "13": d(&self.long[1]), "23": d(&self.long[2])},
            "canonical": canonicalize(self.code()).canonical_code.to_string(),
            "satisfied": self.edges().all(|e| e.satisfied),
            "pre_distances": self.edges().map(|e| e.pre_distance).collect::<Vec<_>>(),
        })
    }
}

fn contraction(grid: &OrbitGrid, a: &GridIndex, b: &GridIndex) -> EdgeContraction {
    let w = grid.contracting_direction(a, b);
    let mut post = [0.0; 3];
    for (i, p) in post.iter_mut().enumerate() {
        *p = grid.grid_distance(&a.step(i), &b.step(i));
    }
    EdgeContraction {
        direction: w.direction,
        pre_distance: w.pre_distance,
        post_by_direction: post,
        satisfied: w.satisfied,
    }
}

/// Evaluates the contraction witness on all six pairs around `x`.
pub fn compute_diagram(grid: &OrbitGrid, x: &GridIndex) -> Result<Diagram, DiagramError> {
    if grid.n() != 3 {
        return Err(DiagramError::Dimension(grid.n()));
    }
    if x.dim() != 3 {
        return Err(DiagramError::Center(x.clone()));
    }
    let nb: Vec<GridIndex> = (0..3).map(|i| x.step(i)).collect();
    let short = [0, 1, 2].map(|i| contraction(grid, x, &nb[i]));
    let long = LONG_EDGES.map(|(i, j)| contraction(grid, &nb[i], &nb[j]));
    Ok(Diagram {
        center: x.clone(),
        short,
        long,
    })
}

/// `(s_1, s_2, s_3, l_12, l_13, l_23)` with 0-based directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DiagramCode(pub [u8; 6]);

impl DiagramCode {
    pub fn short(&self) -> [u8; 3] {
        [self.0[0], self.0[1], self.0[2]]
    }

    pub fn long(&self, i: usize, j: usize) -> u8 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let k = LONG_EDGES.iter().position(|&e| e == (a, b)).expect("distinct axes");
        self.0[3 + k]
    }

    /// Relabels axis `i` as `p[i]`, on edge labels and directions alike.
    pub fn permute(&self, p: &[usize; 3]) -> DiagramCode {
        let mut out = [0u8; 6];
        for i in 0..3 {
            out[p[i]] = p[self.0[i] as usize] as u8;
        }
        for (k, &(i, j)) in LONG_EDGES.iter().enumerate() {
            let (a, b) = if p[i] < p[j] { (p[i], p[j]) } else { (p[j], p[i]) };
            let slot = LONG_EDGES.iter().position(|&e| e == (a, b)).expect("edge");
            out[3 + slot] = p[self.0[3 + k] as usize] as u8;
        }
        DiagramCode(out)
    }

    /// The three long edges use three different directions.
    pub fn is_admissible(&self) -> bool {
        let l = [self.0[3], self.0[4], self.0[5]];
        l[0] != l[1] && l[0] != l[2] && l[1] != l[2]
    }

    /// Number of short edges contracted like their orthogonal long edge.
    pub fn orthogonal_matches(&self) -> usize {
        (0..3)
            .filter(|&i| {
                let (j, k) = match i {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                self.0[i] == self.long(j, k)
            })
            .count()
    }

    /// If a short edge `(x, x + e_i)` shares its direction with a long edge
    /// `(x + e_i, x + e_j)`, the remaining short edge uses another direction.
    pub fn satisfies_pairing_rule(&self) -> bool {
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let k = 3 - i - j;
                if self.0[i] == self.long(i, j) && self.0[k] == self.0[i] {
                    return false;
                }
            }
        }
        true
    }

    /// All `3^6` codes in lexicographic order.
    pub fn all() -> impl Iterator<Item = DiagramCode> {
        (0..729u32).map(|mut v| {
            let mut c = [0u8; 6];
            for slot in c.iter_mut().rev() {
                *slot = (v % 3) as u8;
                v /= 3;
            }
            DiagramCode(c)
        })
    }
}

impl fmt::Display for DiagramCode {
    /// `s1s2s3/l12l13l23`, 1-based.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, d) in self.0.iter().enumerate() {
            if k == 3 {
                f.write_str("/")?;
            }
            write!(f, "{}", d + 1)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    /// Ordinal among admissible classes in canonical-code order, 1-based.
    pub id: Option<usize>,
    pub canonical_code: DiagramCode,
    pub admissible: bool,
    pub orthogonal_matches: usize,
    pub pairing_rule: bool,
}

/// Lexicographic minimum of the code over the six axis relabelings.
pub fn canonical_code(code: DiagramCode) -> DiagramCode {
    AXIS_PERMUTATIONS.iter().map(|p| code.permute(p)).min().expect("six permutations")
}

pub fn canonicalize(code: DiagramCode) -> CatalogEntry {
    let canonical = canonical_code(code);
    let admissible = canonical.is_admissible();
    CatalogEntry {
        id: admissible
            .then(|| catalog().iter().position(|e| e.canonical_code == canonical).map(|k| k + 1))
            .flatten(),
        canonical_code: canonical,
        admissible,
        orthogonal_matches: canonical.orthogonal_matches(),
        pairing_rule: canonical.satisfies_pairing_rule(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum Classification {
    Admissible { id: usize },
    Noncanonical,
}

/// Places an entry in the admissible catalog.
pub fn classify_appendix(entry: &CatalogEntry) -> Classification {
    match (entry.admissible, entry.id) {
        (true, Some(id)) => Classification::Admissible { id },
        _ => Classification::Noncanonical,
    }
}

/// Admissible classes, one entry per canonical code, in code order.
pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut codes: Vec<DiagramCode> = DiagramCode::all()
            .filter(DiagramCode::is_admissible)
            .map(canonical_code)
            .collect();
        codes.sort_unstable();
        codes.dedup();
        codes
            .into_iter()
            .enumerate()
            .map(|(k, c)| CatalogEntry {
                id: Some(k + 1),
                canonical_code: c,
                admissible: true,
                orthogonal_matches: c.orthogonal_matches(),
                pairing_rule: c.satisfies_pairing_rule(),
            })
            .collect()
    })
}

/// Number of orbit classes of all `3^6` codes.
pub fn orbit_class_count() -> usize {
    let mut codes: Vec<DiagramCode> = DiagramCode::all().map(canonical_code).collect();
    codes.sort_unstable();
    codes.dedup();
    codes.len()
}

/// Permutation `p` with `p[perm[k]] = k`: relabels the axes of a grid to
/// those of the same grid built from `family.permuted(perm)`.
pub fn axis_relabeling(perm: &[usize; 3]) -> [usize; 3] {
    let mut p = [0; 3];
    for (k, &old) in perm.iter().enumerate() {
        p[old] = k;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_and_half_diagrams_are_all_first_direction() {
        for fam in [fixtures::identity_family(3), fixtures::half_family(3)] {
            let g = OrbitGrid::new(fam, vec![1.0]).unwrap();
            let d = compute_diagram(&g, &GridIndex::zeros(3)).unwrap();
            assert_eq!(d.code(), DiagramCode([0; 6]));
            assert!(d.edges().all(|e| e.satisfied));
        }
    }

    #[test]
    fn l1triple_diagram_matches_enumeration() {
        let g = OrbitGrid::new(fixtures::l1_family(true), vec![1.0, 1.0]).unwrap();
        let d = compute_diagram(&g, &GridIndex::zeros(3)).unwrap();
        // orbit point of a is (2^-(a1+a3), 2^-(a2+a3)) under l1
        let pt = |a: [i32; 3]| [0.5f64.powi(a[0] + a[2]), 0.5f64.powi(a[1] + a[2])];
        let dist = |p: [f64; 2], q: [f64; 2]| (p[0] - q[0]).abs() + (p[1] - q[1]).abs();
        let e = |i: usize| {
            let mut v = [0; 3];
            v[i] = 1;
            v
        };
        let add = |a: [i32; 3], b: [i32; 3]| [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
        let argmin = |a: [i32; 3], b: [i32; 3]| {
            let posts: Vec<f64> = (0..3).map(|i| dist(pt(add(a, e(i))), pt(add(b, e(i))))).collect();
            (0..3).fold(0, |best, i| if posts[i] < posts[best] { i } else { best })
        };
        let mut expect = [0u8; 6];
        for i in 0..3 {
            expect[i] = argmin([0; 3], e(i)) as u8;
        }
        for (k, &(i, j)) in LONG_EDGES.iter().enumerate() {
            expect[3 + k] = argmin(e(i), e(j)) as u8;
        }
        assert_eq!(d.code(), DiagramCode(expect));
    }

    #[test]
    fn swapping_axes_keeps_the_class() {
        let c = DiagramCode([0, 2, 1, 0, 1, 2]);
        let swapped = c.permute(&[1, 0, 2]);
        assert_ne!(c, swapped);
        assert_eq!(canonical_code(c), canonical_code(swapped));
    }

    #[test]
    fn counts() {
        assert_eq!(orbit_class_count(), 129);
        assert_eq!(catalog().len(), 33);
        assert_eq!(catalog().iter().filter(|e| e.pairing_rule).count(), 17);
    }

    #[test]
    fn classification() {
        let e = canonicalize(DiagramCode([0, 1, 2, 0, 0, 0]));
        assert_eq!(classify_appendix(&e), Classification::Noncanonical);
        let e = canonicalize(DiagramCode([2, 2, 0, 1, 0, 2]));
        assert!(matches!(classify_appendix(&e), Classification::Admissible { .. }));
        assert_eq!(DiagramCode([0, 1, 2, 0, 1, 2]).to_string(), "123/123");
    }

    #[test]
    fn json_shape() {
        let g = OrbitGrid::new(fixtures::half_family(3), vec![1.0]).unwrap();
        let v = compute_diagram(&g, &GridIndex::from([1, 0, 2])).unwrap().to_json();
        assert_eq!(v["center"], json!([1, 0, 2]));
        assert_eq!(v["short"], json!([1, 1, 1]));
        assert_eq!(v["long"]["23"], json!(1));
        assert_eq!(v["canonical"], json!("111/111"));
    }
}
