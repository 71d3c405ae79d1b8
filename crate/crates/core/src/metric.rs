//! Finite-dimensional metric spaces, operator families and the contraction
//! oracle.
//!
//! A family `{f_1, ..., f_n}` of self-maps is *λ-contractive* when every pair
//! of points is contracted by a factor `λ` under at least one member. The
//! [`ContractionWitness`] returned by [`OperatorFamily::contracting_direction`]
//! records which member does it. Directions are 0-based throughout the API;
//! reports and file formats print them 1-based.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::GridIndex;

/// A point of `R^dim`.
pub type Point = Vec<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("operator family must contain at least one operator")]
    EmptyFamily,
    #[error("lambda must lie in (0, 1), got {0}")]
    InvalidLambda(f64),
    #[error("dimension mismatch: expected {expected}, got {actual} ({what})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("operator {op} produced a non-finite value")]
    NonFinite { op: usize },
    #[error("axiom validation needs a non-empty sample")]
    EmptySample,
    #[error("direction {direction} is out of range for a family of {n} operators")]
    BadDirection { direction: usize, n: usize },
}

/// The norms a [`Space`] may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    Sup,
    L1,
    L2,
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::Sup => "sup",
            Norm::L1 => "l1",
            Norm::L2 => "l2",
        })
    }
}

/// `R^dim` with a fixed norm; distances are `norm(p - q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Space {
    dim: usize,
    norm: Norm,
}

impl Space {
    pub fn new(dim: usize, norm: Norm) -> Self {
        Self { dim, norm }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn distance(&self, p: &[f64], q: &[f64]) -> f64 {
        debug_assert_eq!(p.len(), q.len());
        let diffs = p.iter().zip(q).map(|(a, b)| (a - b).abs());
        match self.norm {
            Norm::Sup => diffs.fold(0.0, f64::max),
            Norm::L1 => diffs.sum(),
            Norm::L2 => diffs.map(|d| d * d).sum::<f64>().sqrt(),
        }
    }
}

/// Slack used when comparing floating distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute slack on `d(f(p), f(q)) <= λ d(p, q)`.
    pub contract: f64,
    /// Absolute slack on `d(f_i f_j p, f_j f_i p)`.
    pub commute: f64,
    /// Absolute slack on the metric axioms.
    pub metric: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            contract: 1e-12,
            commute: 1e-9,
            metric: 1e-9,
        }
    }
}

type MapFn = dyn Fn(&[f64]) -> Point + Send + Sync;

/// A self-map of `R^dim`.
#[derive(Clone)]
pub enum Operator {
    /// `p ↦ matrix · p + offset`.
    Affine {
        matrix: Vec<Vec<f64>>,
        offset: Vec<f64>,
    },
    /// Any other map given in closed form.
    ClosedForm { name: String, map: Arc<MapFn> },
}

impl Operator {
    pub fn affine(matrix: Vec<Vec<f64>>, offset: Vec<f64>) -> Self {
        Operator::Affine { matrix, offset }
    }

    /// `p ↦ factor · p` on `R^dim`.
    pub fn scaling(dim: usize, factor: f64) -> Self {
        let matrix = (0..dim)
            .map(|r| (0..dim).map(|c| if r == c { factor } else { 0.0 }).collect())
            .collect();
        Operator::Affine {
            matrix,
            offset: vec![0.0; dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scaling(dim, 1.0)
    }

    pub fn closed_form<F>(name: impl Into<String>, map: F) -> Self
    where
        F: Fn(&[f64]) -> Point + Send + Sync + 'static,
    {
        Operator::ClosedForm {
            name: name.into(),
            map: Arc::new(map),
        }
    }

    pub fn apply(&self, p: &[f64]) -> Point {
        match self {
            Operator::Affine { matrix, offset } => matrix
                .iter()
                .zip(offset)
                .map(|(row, b)| row.iter().zip(p).map(|(m, x)| m * x).sum::<f64>() + b)
                .collect(),
            Operator::ClosedForm { map, .. } => map(p),
        }
    }

    /// `k`-fold application.
    pub fn apply_power(&self, k: usize, p: &[f64]) -> Point {
        let mut cur = p.to_vec();
        for _ in 0..k {
            cur = self.apply(&cur);
        }
        cur
    }

    fn check_dim(&self, dim: usize) -> Result<(), MetricError> {
        if let Operator::Affine { matrix, offset } = self {
            if matrix.len() != dim {
                return Err(MetricError::DimensionMismatch {
                    what: "matrix rows",
                    expected: dim,
                    actual: matrix.len(),
                });
            }
            if let Some(row) = matrix.iter().find(|r| r.len() != dim) {
                return Err(MetricError::DimensionMismatch {
                    what: "matrix columns",
                    expected: dim,
                    actual: row.len(),
                });
            }
            if offset.len() != dim {
                return Err(MetricError::DimensionMismatch {
                    what: "offset",
                    expected: dim,
                    actual: offset.len(),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Affine { matrix, offset } => f
                .debug_struct("Affine")
                .field("matrix", matrix)
                .field("offset", offset)
                .finish(),
            Operator::ClosedForm { name, .. } => write!(f, "ClosedForm({name})"),
        }
    }
}

/// Outcome of asking which operator contracts a pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionWitness {
    /// 0-based operator index; smallest among minimizers of `post_distance`.
    pub direction: usize,
    pub pre_distance: f64,
    pub post_distance: f64,
    /// Whether `post_distance <= λ · pre_distance + tol`.
    pub satisfied: bool,
}

impl ContractionWitness {
    /// Picks the witness from candidate `(direction, post_distance)` pairs.
    ///
    /// Ties on the post distance resolve to the earliest candidate, so callers
    /// must supply candidates in increasing direction order.
    pub fn select(
        pre_distance: f64,
        candidates: impl IntoIterator<Item = (usize, f64)>,
        lambda: f64,
        tol: f64,
    ) -> Self {
        let mut candidates = candidates.into_iter();
        let first = candidates.next().expect("at least one candidate direction");
        if pre_distance == 0.0 {
            // The inequality is vacuous for a zero-distance pair.
            return Self {
                direction: first.0,
                pre_distance,
                post_distance: first.1,
                satisfied: true,
            };
        }
        let mut best = first;
        for (dir, post) in candidates {
            if post < best.1 {
                best = (dir, post);
            }
        }
        let (direction, post_distance) = best;
        let satisfied = post_distance <= lambda * pre_distance + tol;
        Self {
            direction,
            pre_distance,
            post_distance,
            satisfied,
        }
    }
}

/// `n` self-maps of a common [`Space`] together with a contractivity constant.
#[derive(Debug, Clone)]
pub struct OperatorFamily {
    space: Space,
    ops: Vec<Operator>,
    lambda: f64,
    tol: Tolerances,
}

impl OperatorFamily {
    pub fn new(space: Space, ops: Vec<Operator>, lambda: f64) -> Result<Self, MetricError> {
        if ops.is_empty() {
            return Err(MetricError::EmptyFamily);
        }
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(MetricError::InvalidLambda(lambda));
        }
        for op in &ops {
            op.check_dim(space.dim())?;
        }
        Ok(Self {
            space,
            ops,
            lambda,
            tol: Tolerances::default(),
        })
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self, MetricError> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(MetricError::InvalidLambda(lambda));
        }
        Ok(Self {
            lambda,
            ..self.clone()
        })
    }

    /// The family with operators reordered so that new operator `k` is old
    /// operator `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, MetricError> {
        if perm.len() != self.len() {
            return Err(MetricError::DimensionMismatch {
                what: "permutation",
                expected: self.len(),
                actual: perm.len(),
            });
        }
        let ops = perm
            .iter()
            .map(|&k| {
                self.ops.get(k).cloned().ok_or(MetricError::BadDirection {
                    direction: k,
                    n: self.len(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            ops,
            ..self.clone()
        })
    }

    /// The sub-family formed by the listed operators, in the listed order.
    pub fn restricted(&self, dirs: &[usize]) -> Result<Self, MetricError> {
        if dirs.is_empty() {
            return Err(MetricError::EmptyFamily);
        }
        let ops = dirs
            .iter()
            .map(|&k| {
                self.ops.get(k).cloned().ok_or(MetricError::BadDirection {
                    direction: k,
                    n: self.len(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            ops,
            ..self.clone()
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn ops(&self) -> &[Operator] {
        &self.ops
    }

    /// Number of operators.
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn distance(&self, p: &[f64], q: &[f64]) -> f64 {
        self.space.distance(p, q)
    }

    /// `f_i(p)` for 0-based `i`.
    pub fn apply(&self, i: usize, p: &[f64]) -> Point {
        self.ops[i].apply(p)
    }

    /// `a(p) = f_1^{a_1} ∘ f_2^{a_2} ∘ ... ∘ f_n^{a_n}(p)`.
    ///
    /// The innermost power is applied first, so `f_1` acts last. Orbit grids
    /// rely on this exact evaluation order for bit-identical memoization.
    pub fn apply_multi(&self, a: &GridIndex, p: &[f64]) -> Result<Point, MetricError> {
        if a.dim() != self.len() {
            return Err(MetricError::DimensionMismatch {
                what: "grid index",
                expected: self.len(),
                actual: a.dim(),
            });
        }
        if p.len() != self.space.dim() {
            return Err(MetricError::DimensionMismatch {
                what: "point",
                expected: self.space.dim(),
                actual: p.len(),
            });
        }
        let mut cur = p.to_vec();
        for i in (0..self.len()).rev() {
            for _ in 0..a.get(i) {
                cur = self.ops[i].apply(&cur);
            }
        }
        Ok(cur)
    }

    /// Which operator contracts `(p, q)` best.
    pub fn contracting_direction(&self, p: &[f64], q: &[f64]) -> Result<ContractionWitness, MetricError> {
        let all: Vec<usize> = (0..self.len()).collect();
        self.contracting_direction_among(&all, p, q)
    }

    /// As [`contracting_direction`](Self::contracting_direction) but only the
    /// listed operators are candidates. `dirs` must be increasing.
    pub fn contracting_direction_among(
        &self,
        dirs: &[usize],
        p: &[f64],
        q: &[f64],
    ) -> Result<ContractionWitness, MetricError> {
        let pre = self.distance(p, q);
        let mut posts = Vec::with_capacity(dirs.len());
        for &i in dirs {
            if i >= self.len() {
                return Err(MetricError::BadDirection {
                    direction: i,
                    n: self.len(),
                });
            }
            let post = self.distance(&self.apply(i, p), &self.apply(i, q));
            if !post.is_finite() {
                return Err(MetricError::NonFinite { op: i });
            }
            posts.push((i, post));
        }
        Ok(ContractionWitness::select(pre, posts, self.lambda, self.tol.contract))
    }

    /// `d(f_i(f_j(p)), f_j(f_i(p)))`.
    pub fn commute_residual(&self, i: usize, j: usize, p: &[f64]) -> f64 {
        let ij = self.apply(i, &self.apply(j, p));
        let ji = self.apply(j, &self.apply(i, p));
        self.distance(&ij, &ji)
    }

    /// Largest commutator residual over all operator pairs at `p`.
    pub fn max_commute_residual(&self, p: &[f64]) -> f64 {
        let n = self.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max(self.commute_residual(i, j, p));
            }
        }
        worst
    }
}

/// Which metric axiom a sampled triple broke.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum AxiomViolation {
    Identity { residual: f64 },
    Symmetry { residual: f64 },
    Triangle { excess: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct PairCheck {
    pub p: Point,
    pub q: Point,
    /// Largest commutator residual at `p` and `q`.
    pub commute_residual: f64,
    pub witness: ContractionWitness,
    pub metric_violations: Vec<AxiomViolation>,
}

impl PairCheck {
    fn passed(&self, tol: &Tolerances) -> bool {
        self.commute_residual <= tol.commute && self.witness.satisfied && self.metric_violations.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub pairs: Vec<PairCheck>,
    pub passed: bool,
}

impl AxiomReport {
    /// Indices and checks of the pairs that failed any axiom.
    pub fn failures(&self, tol: &Tolerances) -> Vec<(usize, &PairCheck)> {
        self.pairs.iter().enumerate().filter(|(_, c)| !c.passed(tol)).collect()
    }
}

/// Checks commutativity, λ-contractivity and the metric axioms on a sample.
pub fn validate_family_axioms(
    family: &OperatorFamily,
    sample: &[(Point, Point)],
) -> Result<AxiomReport, MetricError> {
    if sample.is_empty() {
        return Err(MetricError::EmptySample);
    }
    let tol = *family.tolerances();
    let dim = family.space().dim();
    let mut pairs = Vec::with_capacity(sample.len());
    for (p, q) in sample {
        for pt in [p, q] {
            if pt.len() != dim {
                return Err(MetricError::DimensionMismatch {
                    what: "sample point",
                    expected: dim,
                    actual: pt.len(),
                });
            }
        }
        let commute_residual = family.max_commute_residual(p).max(family.max_commute_residual(q));
        let witness = family.contracting_direction(p, q)?;

        let mut points = vec![p.clone(), q.clone()];
        for i in 0..family.len() {
            points.push(family.apply(i, p));
            points.push(family.apply(i, q));
        }
        let metric_violations = metric_axiom_violations(family.space(), &points, tol.metric);
        pairs.push(PairCheck {
            p: p.clone(),
            q: q.clone(),
            commute_residual,
            witness,
            metric_violations,
        });
    }
    let passed = pairs.iter().all(|c| c.passed(&tol));
    Ok(AxiomReport { pairs, passed })
}

fn metric_axiom_violations(space: &Space, points: &[Point], tol: f64) -> Vec<AxiomViolation> {
    let mut out = Vec::new();
    for a in points {
        let r = space.distance(a, a);
        if r > tol {
            out.push(AxiomViolation::Identity { residual: r });
        }
    }
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let r = (space.distance(a, b) - space.distance(b, a)).abs();
            if r > tol {
                out.push(AxiomViolation::Symmetry { residual: r });
            }
            for c in points {
                let excess = space.distance(a, c) - space.distance(a, b) - space.distance(b, c);
                if excess > tol {
                    out.push(AxiomViolation::Triangle { excess });
                }
            }
        }
    }
    out
}

/// `count` seeded pairs drawn uniformly from `[-radius, radius]^dim`.
pub fn sample_pairs(dim: usize, count: usize, radius: f64, seed: u64) -> Vec<(Point, Point)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Point { (0..dim).map(|_| rng.gen_range(-radius..=radius)).collect() };
    (0..count)
        .map(|_| {
            let p = draw(&mut rng);
            let q = draw(&mut rng);
            (p, q)
        })
        .collect()
}
