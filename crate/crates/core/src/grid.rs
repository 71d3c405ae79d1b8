//! The orbit grid: `N_0^n` with the pseudometric pulled back from an operator
//! family along the orbit of a base point,
//! `d(a, b) = d(a(p0), b(p0))`.

use std::collections::HashMap;
use std::fmt;
use std::io;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::metric::{ContractionWitness, MetricError, OperatorFamily, Point};
use crate::report::fmt_f64;

/// A point of `N_0^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GridIndex(Vec<u32>);

impl GridIndex {
    pub fn new(coords: Vec<u32>) -> Self {
        Self(coords)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// The standard basis vector `e_i` (0-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self(v)
    }

    /// `(k, k, ..., k)`.
    pub fn diagonal(n: usize, k: u32) -> Self {
        Self(vec![k; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// `self + e_i`.
    pub fn step(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] += 1;
        Self(v)
    }

    pub fn add(&self, other: &GridIndex) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `|a| = a_1 + ... + a_n`.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    /// Whether `other` lies in the translate cone `self + N_0^n`.
    pub fn dominated_by(&self, other: &GridIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Index of the first non-zero coordinate, if any.
    fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|&c| c != 0)
    }
}

impl<const N: usize> From<[u32; N]> for GridIndex {
    fn from(v: [u32; N]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for GridIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// All indices of `anchor + [0, side]^n` in lexicographic order.
pub fn box_indices(anchor: &GridIndex, side: u32) -> impl Iterator<Item = GridIndex> + '_ {
    let n = anchor.dim();
    let per_axis = side as u64 + 1;
    let count = per_axis.pow(n as u32);
    (0..count).map(move |mut flat| {
        let mut v = vec![0u32; n];
        for i in (0..n).rev() {
            v[i] = anchor.get(i) + (flat % per_axis) as u32;
            flat /= per_axis;
        }
        GridIndex(v)
    })
}

/// `ρ(x)` together with the neighbor attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoReport {
    pub index: GridIndex,
    pub rho: f64,
    /// 0-based; smallest index on ties.
    pub argmax_direction: usize,
}

/// The pseudometric grid `G(p0)` with a memo of orbit points.
///
/// Orbit points are cached behind a lock, so a grid may be shared between
/// threads. Every cached value is bit-identical to
/// [`OperatorFamily::apply_multi`] on the same index.
#[derive(Debug)]
pub struct OrbitGrid {
    family: OperatorFamily,
    base: Point,
    memo: RwLock<HashMap<GridIndex, Arc<[f64]>>>,
}

impl OrbitGrid {
    pub fn new(family: OperatorFamily, base: Point) -> Result<Self, MetricError> {
        if base.len() != family.space().dim() {
            return Err(MetricError::DimensionMismatch {
                what: "base point",
                expected: family.space().dim(),
                actual: base.len(),
            });
        }
        Ok(Self {
            family,
            base,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn family(&self) -> &OperatorFamily {
        &self.family
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    /// Grid dimension, i.e. the number of operators.
    pub fn n(&self) -> usize {
        self.family.len()
    }

    pub fn lambda(&self) -> f64 {
        self.family.lambda()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }

    /// The orbit point `a(p0)`.
    pub fn point(&self, a: &GridIndex) -> Arc<[f64]> {
        assert_eq!(a.dim(), self.n(), "grid index dimension");
        if let Some(p) = self.memo.read().expect("memo lock").get(a) {
            return Arc::clone(p);
        }
        // a(p0) = f_i((a - e_i)(p0)) with i the first non-zero coordinate;
        // this replays apply_multi's evaluation order exactly.
        let mut chain = Vec::new();
        let mut cur = a.clone();
        let mut seed: Arc<[f64]> = {
            let memo = self.memo.read().expect("memo lock");
            loop {
                if let Some(p) = memo.get(&cur) {
                    break Arc::clone(p);
                }
                match cur.first_nonzero() {
                    None => break Arc::from(self.base.clone()),
                    Some(i) => {
                        chain.push((cur.clone(), i));
                        cur.0[i] -= 1;
                    }
                }
            }
        };
        let mut computed = Vec::with_capacity(chain.len());
        for (idx, i) in chain.into_iter().rev() {
            seed = Arc::from(self.family.apply(i, &seed));
            computed.push((idx, Arc::clone(&seed)));
        }
        let mut memo = self.memo.write().expect("memo lock");
        for (idx, p) in computed {
            memo.entry(idx).or_insert(p);
        }
        seed
    }

    pub fn grid_distance(&self, a: &GridIndex, b: &GridIndex) -> f64 {
        if a == b {
            return 0.0;
        }
        self.family.distance(&self.point(a), &self.point(b))
    }

    pub fn rho(&self, x: &GridIndex) -> RhoReport {
        let p = self.point(x);
        let mut best = (0usize, f64::NEG_INFINITY);
        for i in 0..self.n() {
            let d = self.family.distance(&p, &self.point(&x.step(i)));
            if d > best.1 {
                best = (i, d);
            }
        }
        RhoReport {
            index: x.clone(),
            rho: best.1,
            argmax_direction: best.0,
        }
    }

    /// Contraction witness for the grid pair `(a, b)` under the family's λ.
    pub fn contracting_direction(&self, a: &GridIndex, b: &GridIndex) -> ContractionWitness {
        self.contracting_direction_with(a, b, self.lambda())
    }

    /// As [`contracting_direction`](Self::contracting_direction) with an
    /// explicit λ.
    pub fn contracting_direction_with(&self, a: &GridIndex, b: &GridIndex, lambda: f64) -> ContractionWitness {
        let pre = self.grid_distance(a, b);
        let posts: Vec<(usize, f64)> = (0..self.n())
            .map(|i| (i, self.grid_distance(&a.step(i), &b.step(i))))
            .collect();
        ContractionWitness::select(pre, posts, lambda, self.family.tolerances().contract)
    }

    /// Whether `d(a + e_i, b + e_i) <= λ d(a, b)`.
    pub fn contracts(&self, i: usize, a: &GridIndex, b: &GridIndex, lambda: f64) -> bool {
        self.grid_distance(&a.step(i), &b.step(i)) <= lambda * self.grid_distance(a, b)
    }

    /// Diameter of a finite set of grid indices.
    pub fn diameter<'a>(&self, points: impl IntoIterator<Item = &'a GridIndex>) -> f64 {
        let pts: Vec<Arc<[f64]>> = points.into_iter().map(|p| self.point(p)).collect();
        let mut diam: f64 = 0.0;
        for (k, p) in pts.iter().enumerate() {
            for q in &pts[k + 1..] {
                diam = diam.max(self.family.distance(p, q));
            }
        }
        diam
    }
}

/// Window minimum of `ρ`; an upper bound on `μ = inf ρ`, never a lower one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuEstimate {
    pub mu_hat: f64,
    /// Lexicographically smallest minimizer.
    pub argmin: GridIndex,
    pub window_side: u32,
    pub anchor: GridIndex,
    /// Always true: the estimate only bounds the infimum from above.
    pub upper_bound_only: bool,
}

/// `min ρ` over `[0, W]^n`.
pub fn estimate_mu(grid: &OrbitGrid, window_side: u32) -> MuEstimate {
    estimate_mu_at(grid, &GridIndex::zeros(grid.n()), window_side)
}

/// `min ρ` over `anchor + [0, W]^n`.
pub fn estimate_mu_at(grid: &OrbitGrid, anchor: &GridIndex, window_side: u32) -> MuEstimate {
    let mut best: Option<RhoReport> = None;
    for x in box_indices(anchor, window_side) {
        let r = grid.rho(&x);
        if best.as_ref().is_none_or(|b| r.rho < b.rho) {
            best = Some(r);
        }
    }
    let best = best.expect("a box always has at least one point");
    MuEstimate {
        mu_hat: best.rho,
        argmin: best.index,
        window_side,
        anchor: anchor.clone(),
        upper_bound_only: true,
    }
}

/// Window minima over boxes anchored at `(k, ..., k)` for each `k`.
///
/// Explores how `inf ρ` over translate cones behaves along the diagonal; no
/// limit is claimed.
pub fn mu_infinity_table(grid: &OrbitGrid, ks: &[u32], window_side: u32) -> Vec<MuEstimate> {
    ks.iter()
        .map(|&k| estimate_mu_at(grid, &GridIndex::diagonal(grid.n(), k), window_side))
        .collect()
}

/// `ρ` for every index of `[0, W]^n`, lexicographic order.
pub fn window_scan(grid: &OrbitGrid, window_side: u32) -> Vec<RhoReport> {
    box_indices(&GridIndex::zeros(grid.n()), window_side)
        .map(|x| grid.rho(&x))
        .collect()
}

/// Writes `index_1..index_n,rho,argmax_direction` rows (direction 1-based).
pub fn write_rho_csv<W: io::Write>(rows: &[RhoReport], n: usize, mut out: W) -> io::Result<()> {
    let header: Vec<String> = (1..=n)
        .map(|i| format!("index_{i}"))
        .chain(["rho".to_string(), "argmax_direction".to_string()])
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for r in rows {
        let mut fields: Vec<String> = r.index.coords().iter().map(|c| c.to_string()).collect();
        fields.push(fmt_f64(r.rho));
        fields.push((r.argmax_direction + 1).to_string());
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FniViolation {
    pub a: GridIndex,
    pub b: GridIndex,
    pub distance: f64,
    /// `(ρ(a) + ρ(b)) / (1 - λ)`.
    pub bound: f64,
}

/// A window pair that no direction contracts, so the inequality's premise
/// fails there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PremiseFailure {
    pub a: GridIndex,
    pub b: GridIndex,
    pub witness: ContractionWitness,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FniReport {
    pub window_side: u32,
    pub lambda: f64,
    pub pairs_checked: usize,
    pub violations: Vec<FniViolation>,
    pub premise_failures: Vec<PremiseFailure>,
}

impl FniReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.premise_failures.is_empty()
    }
}

/// Checks `d(a, b) <= (ρ(a) + ρ(b)) / (1 - λ)` on every pair of `[0, W]^n`.
///
/// Pairs without a contracting direction are reported as premise failures
/// and are not tested against the inequality.
pub fn check_fni(grid: &OrbitGrid, window_side: u32, lambda: f64) -> FniReport {
    let tol = grid.family().tolerances().contract;
    let idx: Vec<GridIndex> = box_indices(&GridIndex::zeros(grid.n()), window_side).collect();
    // warm the memo, neighbors included, before the parallel sweep
    for x in box_indices(&GridIndex::zeros(grid.n()), window_side + 1) {
        grid.point(&x);
    }
    let rhos: Vec<f64> = idx.iter().map(|x| grid.rho(x).rho).collect();

    let per_row: Vec<(Vec<FniViolation>, Vec<PremiseFailure>)> = (0..idx.len())
        .into_par_iter()
        .map(|i| {
            let mut viol = Vec::new();
            let mut prem = Vec::new();
            for j in (i + 1)..idx.len() {
                let (a, b) = (&idx[i], &idx[j]);
                let w = grid.contracting_direction_with(a, b, lambda);
                if !w.satisfied {
                    prem.push(PremiseFailure {
                        a: a.clone(),
                        b: b.clone(),
                        witness: w,
                    });
                    continue;
                }
                let bound = (rhos[i] + rhos[j]) / (1.0 - lambda);
                if w.pre_distance > bound + tol {
                    viol.push(FniViolation {
                        a: a.clone(),
                        b: b.clone(),
                        distance: w.pre_distance,
                        bound,
                    });
                }
            }
            (viol, prem)
        })
        .collect();

    let n = idx.len();
    let mut violations = Vec::new();
    let mut premise_failures = Vec::new();
    for (v, p) in per_row {
        violations.extend(v);
        premise_failures.extend(p);
    }
    FniReport {
        window_side,
        lambda,
        pairs_checked: n * n.saturating_sub(1) / 2,
        violations,
        premise_failures,
    }
}
