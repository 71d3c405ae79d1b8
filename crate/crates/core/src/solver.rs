//! Iterative solvers for common fixed points.
//!
//! [`common_fixed_point`] runs the greedy walk directly in the space: at each
//! iterate `z` the target is the furthest neighbor `f_j z` (largest residual),
//! and `z` moves along an operator that contracts `(z, f_j z)`. Once a stage
//! settles, its most used operator is retired and the walk continues with the
//! rest; a final residual check over all operators guards the result.

use std::collections::VecDeque;
use std::io;

use serde::Serialize;
use thiserror::Error;

use crate::grid::GridIndex;
use crate::metric::{ContractionWitness, MetricError, Operator, OperatorFamily, Point, Space};
use crate::report::fmt_f64;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("operators {i} and {j} fail to commute at iteration {iteration} (residual {residual:e})")]
    NotCommuting {
        iteration: usize,
        i: usize,
        j: usize,
        residual: f64,
        point: Point,
    },
    #[error("no operator contracts the iterate pair at iteration {iteration}")]
    PremiseFailure {
        iteration: usize,
        point: Point,
        witness: ContractionWitness,
    },
    #[error("no convergence within {iterations} iterations; best residual {best_residual:e}")]
    NonConvergence {
        iterations: usize,
        best: Point,
        best_residual: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Every residual `d(z, f_i z)` must end at or below this.
    pub tol: f64,
    pub max_iters: usize,
    /// Iterates kept to judge whether a stage has settled.
    pub window: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iters: 100_000,
            window: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub step: usize,
    /// 0-based operator applied at this step.
    pub direction: usize,
    /// `d(z, f_i z)` for every operator, before the step.
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage {
    /// 0-based operators the stage walked with.
    pub active: Vec<usize>,
    pub first_step: usize,
    pub last_step: usize,
    /// Operator retired at the end of the stage, if it settled.
    pub retired: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub point: Point,
    /// Multi-index of the final iterate relative to the start.
    pub index: GridIndex,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub restarts: usize,
    pub stages: Vec<Stage>,
    pub trace: Vec<TraceRow>,
}

impl Solution {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// `step,direction,residual_1..residual_n`; direction 1-based.
    pub fn write_trace_csv<W: io::Write>(&self, mut out: W) -> io::Result<()> {
        let n = self.residuals.len();
        let mut header = vec!["step".to_string(), "direction".to_string()];
        header.extend((1..=n).map(|i| format!("residual_{i}")));
        writeln!(out, "{}", header.join(","))?;
        for row in &self.trace {
            let mut fields = vec![row.step.to_string(), (row.direction + 1).to_string()];
            fields.extend(row.residuals.iter().map(|&r| fmt_f64(r)));
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

fn residuals(family: &OperatorFamily, z: &[f64]) -> Vec<f64> {
    (0..family.len()).map(|i| family.distance(z, &family.apply(i, z))).collect()
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}

/// Most frequent direction in the window, smallest on ties.
fn dominant(window: &VecDeque<(Point, usize)>, n: usize) -> usize {
    let mut counts = vec![0usize; n];
    for (_, d) in window {
        counts[*d] += 1;
    }
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

/// Finds a common fixed point of a commuting λ-contractive family.
///
/// Returns once every residual is at most `tol / 100`, or at most `tol`
/// with no improvement over the last `window` iterations.
pub fn common_fixed_point(family: &OperatorFamily, start: &[f64], opts: SolveOptions) -> Result<Solution, SolveError> {
    let n = family.len();
    let dim = family.space().dim();
    if start.len() != dim {
        return Err(MetricError::DimensionMismatch {
            what: "start point",
            expected: dim,
            actual: start.len(),
        }
        .into());
    }
    let tol_commute = family.tolerances().commute;
    let eps = opts.tol * 0.01;
    let all: Vec<usize> = (0..n).collect();

    let mut z: Point = start.to_vec();
    let mut index = GridIndex::zeros(n);
    let mut active = all.clone();
    let mut stage_no = 0usize;
    let mut restarts = 0usize;
    let mut stages = Vec::new();
    let mut stage_start = 0usize;
    let mut window: VecDeque<(Point, usize)> = VecDeque::with_capacity(opts.window + 1);
    let mut trace = Vec::new();
    let mut best = (z.clone(), f64::INFINITY);
    let mut since_best = 0usize;

    for iter in 0..opts.max_iters {
        for i in 0..n {
            for j in (i + 1)..n {
                let r = family.commute_residual(i, j, &z);
                if !(r <= tol_commute) {
                    return Err(SolveError::NotCommuting {
                        iteration: iter,
                        i,
                        j,
                        residual: r,
                        point: z,
                    });
                }
            }
        }
        let res = residuals(family, &z);
        if let Some(op) = res.iter().position(|r| !r.is_finite()) {
            return Err(MetricError::NonFinite { op }.into());
        }
        let worst = max_of(res.iter().copied());
        if worst < best.1 {
            best = (z.clone(), worst);
            since_best = 0;
        } else {
            since_best += 1;
        }
        // polish past `tol` so independent starts agree, unless stalled
        if worst <= eps || (worst <= opts.tol && since_best >= opts.window) {
            stages.push(Stage {
                active: active.clone(),
                first_step: stage_start,
                last_step: iter,
                retired: None,
            });
            return Ok(Solution {
                point: z,
                index,
                residuals: res,
                iterations: iter,
                restarts,
                stages,
                trace,
            });
        }

        // stage bookkeeping
        let settled = window.len() >= opts.window && {
            let spread = window
                .iter()
                .flat_map(|(p, _)| window.iter().map(move |(q, _)| family.distance(p, q)))
                .fold(0.0, f64::max);
            spread < eps || max_of(active.iter().map(|&i| res[i])) <= opts.tol / 2.0
        };
        if settled {
            let retired = dominant(&window, n);
            stages.push(Stage {
                active: active.clone(),
                first_step: stage_start,
                last_step: iter,
                retired: Some(retired),
            });
            active.retain(|&i| i != retired);
            if active.is_empty() {
                active = all.clone();
                restarts += 1;
                stage_no = 0;
            } else {
                stage_no += 1;
            }
            stage_start = iter;
            window.clear();
        }

        let target_op = active
            .iter()
            .copied()
            .fold(None::<usize>, |b, i| match b {
                Some(b) if res[b] >= res[i] => Some(b),
                _ => Some(i),
            })
            .expect("active set is non-empty");
        let target = family.apply(target_op, &z);
        let w = family.contracting_direction_among(&active, &z, &target)?;
        if stage_no == 0 && !w.satisfied {
            return Err(SolveError::PremiseFailure {
                iteration: iter,
                point: z,
                witness: w,
            });
        }
        trace.push(TraceRow {
            step: iter,
            direction: w.direction,
            residuals: res,
        });
        z = family.apply(w.direction, &z);
        index = index.step(w.direction);
        window.push_back((z.clone(), w.direction));
        if window.len() > opts.window {
            window.pop_front();
        }
    }
    Err(SolveError::NonConvergence {
        iterations: opts.max_iters,
        best: best.0,
        best_residual: best.1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitOptions {
    /// Largest power `m` searched for a contracting iterate.
    pub max_power: usize,
    pub lambda: f64,
    pub tol: f64,
    pub max_iters: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitSolution {
    pub point: Point,
    pub residual: f64,
    pub iterations: usize,
    /// Power chosen at each step.
    pub powers: Vec<usize>,
}

/// Iterates a single map whose powers `f, ..., f^n` form a contractive
/// family, stopping at the first `z` with `d(f z, z) <= tol`.
///
/// At each step some power must contract the consecutive pair
/// `(z_k, z_{k+1})` by λ; otherwise the premise fails.
pub fn gbct_orbit_solve(space: &Space, f: &Operator, start: &[f64], opts: OrbitOptions) -> Result<OrbitSolution, SolveError> {
    if start.len() != space.dim() {
        return Err(MetricError::DimensionMismatch {
            what: "start point",
            expected: space.dim(),
            actual: start.len(),
        }
        .into());
    }
    if !(opts.lambda > 0.0 && opts.lambda < 1.0) {
        return Err(MetricError::InvalidLambda(opts.lambda).into());
    }
    let mut z = start.to_vec();
    let mut powers = Vec::new();
    let mut best = (z.clone(), f64::INFINITY);
    for iter in 0..opts.max_iters {
        let next = f.apply(&z);
        let residual = space.distance(&z, &next);
        if !residual.is_finite() {
            return Err(MetricError::NonFinite { op: 0 }.into());
        }
        if residual < best.1 {
            best = (z.clone(), residual);
        }
        if residual <= opts.tol {
            return Ok(OrbitSolution {
                point: z,
                residual,
                iterations: iter,
                powers,
            });
        }
        let (mut a, mut b) = (z.clone(), next.clone());
        let mut posts = Vec::with_capacity(opts.max_power);
        for m in 1..=opts.max_power {
            a = f.apply(&a);
            b = f.apply(&b);
            posts.push((m, space.distance(&a, &b)));
        }
        let w = ContractionWitness::select(residual, posts, opts.lambda, 1e-12);
        if !w.satisfied {
            return Err(SolveError::PremiseFailure {
                iteration: iter,
                point: z,
                witness: w,
            });
        }
        powers.push(w.direction);
        z = next;
    }
    Err(SolveError::NonConvergence {
        iterations: opts.max_iters,
        best: best.0,
        best_residual: best.1,
    })
}
