//! Greedy contraction walks on the orbit grid.
//!
//! From `x_k` the walk steps along a direction that contracts the pair
//! `(target, x_k)`. Unrolling the triangle inequality gives
//! `d(t, x_k) <= λ^k d(t, x_0) + ρ(t) / (1 - λ)`, which is checked at every step.

use std::io;

use serde::Serialize;
use thiserror::Error;

use crate::grid::{GridIndex, OrbitGrid};
use crate::metric::ContractionWitness;
use crate::report::fmt_f64;

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("index {index} has dimension {actual}, grid has {expected}")]
    Dimension {
        index: GridIndex,
        expected: usize,
        actual: usize,
    },
    #[error("no direction contracts ({target}, {at}) at step {step}")]
    PremiseFailure {
        step: usize,
        target: GridIndex,
        at: GridIndex,
        witness: ContractionWitness,
    },
    #[error("phase {phase} did not reach its threshold within {budget} steps")]
    PhaseBudget { phase: usize, budget: usize },
    #[error("a multi-target walk needs at least one target")]
    NoTargets,
}

/// The bound evaluated at one walk position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub step: usize,
    pub distance: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Walk {
    /// `x_0, ..., x_K`.
    pub steps: Vec<GridIndex>,
    /// 0-based; `directions[k]` leads from `x_k` to `x_{k+1}`.
    pub directions: Vec<usize>,
    /// One entry per element of `steps`.
    pub checks: Vec<BoundCheck>,
    /// Step index at which each phase ended; a single entry for a plain walk.
    pub phase_ends: Vec<usize>,
}

impl Walk {
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn last(&self) -> &GridIndex {
        self.steps.last().expect("a walk has a start")
    }

    pub fn bound_holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn first_violation(&self) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| !c.holds)
    }

    /// `step,index_1..index_n,direction,distance,bound`; the direction column
    /// is 1-based and empty on the final row.
    pub fn write_csv<W: io::Write>(&self, mut out: W) -> io::Result<()> {
        let n = self.steps[0].dim();
        let mut header = vec!["step".to_string()];
        header.extend((1..=n).map(|i| format!("index_{i}")));
        header.extend(["direction", "distance", "bound"].map(String::from));
        writeln!(out, "{}", header.join(","))?;
        for (k, x) in self.steps.iter().enumerate() {
            let mut row = vec![k.to_string()];
            row.extend(x.coords().iter().map(|c| c.to_string()));
            row.push(self.directions.get(k).map(|d| (d + 1).to_string()).unwrap_or_default());
            row.push(fmt_f64(self.checks[k].distance));
            row.push(fmt_f64(self.checks[k].bound));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn check_dim(grid: &OrbitGrid, x: &GridIndex) -> Result<(), WalkError> {
    if x.dim() != grid.n() {
        return Err(WalkError::Dimension {
            index: x.clone(),
            expected: grid.n(),
            actual: x.dim(),
        });
    }
    Ok(())
}

/// One greedy step toward `target`.
fn greedy_step(grid: &OrbitGrid, target: &GridIndex, at: &GridIndex, step: usize) -> Result<usize, WalkError> {
    let w = grid.contracting_direction(target, at);
    if !w.satisfied {
        return Err(WalkError::PremiseFailure {
            step,
            target: target.clone(),
            at: at.clone(),
            witness: w,
        });
    }
    Ok(w.direction)
}

/// Walks from `start` toward `target` for at most `max_steps` steps.
///
/// Stops early once `λ^k d(target, start) < epsilon`; a non-positive
/// `epsilon` disables the early stop.
pub fn greedy_walk(
    grid: &OrbitGrid,
    target: &GridIndex,
    start: &GridIndex,
    max_steps: usize,
    epsilon: f64,
) -> Result<Walk, WalkError> {
    check_dim(grid, target)?;
    check_dim(grid, start)?;
    let lambda = grid.lambda();
    let tol = grid.family().tolerances().contract;
    let slack = grid.rho(target).rho / (1.0 - lambda);
    let d0 = grid.grid_distance(target, start);

    let mut walk = Walk {
        steps: vec![start.clone()],
        directions: Vec::new(),
        checks: Vec::new(),
        phase_ends: Vec::new(),
    };
    let mut decay = 1.0;
    let mut cur = start.clone();
    for k in 0.. {
        let distance = grid.grid_distance(target, &cur);
        let bound = decay * d0 + slack;
        walk.checks.push(BoundCheck {
            step: k,
            distance,
            bound,
            holds: distance <= bound + tol,
        });
        if k == max_steps || (epsilon > 0.0 && decay * d0 < epsilon) {
            break;
        }
        let i = greedy_step(grid, target, &cur, k)?;
        cur = cur.step(i);
        walk.directions.push(i);
        walk.steps.push(cur.clone());
        decay *= lambda;
    }
    walk.phase_ends.push(walk.len());
    Ok(walk)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiTargetWalk {
    pub walk: Walk,
    /// Per phase: whether its threshold already held when the phase began.
    pub threshold_met_at_entry: Vec<bool>,
}

/// Visits `targets` in order, starting from the origin.
///
/// Phase `j` walks greedily toward `t_j` and ends at the first position
/// within `2ρ(t_j) / (1 - λ) + slack` of it. The first phase may end at step
/// 0; later phases take at least one step, so phase ends strictly increase.
/// Each phase may use at most `phase_budget` steps.
pub fn multi_target_walk(
    grid: &OrbitGrid,
    targets: &[GridIndex],
    slack: f64,
    phase_budget: usize,
) -> Result<MultiTargetWalk, WalkError> {
    if targets.is_empty() {
        return Err(WalkError::NoTargets);
    }
    for t in targets {
        check_dim(grid, t)?;
    }
    let lambda = grid.lambda();
    let tol = grid.family().tolerances().contract;
    let mut cur = GridIndex::zeros(grid.n());
    let mut walk = Walk {
        steps: vec![cur.clone()],
        directions: Vec::new(),
        checks: Vec::new(),
        phase_ends: Vec::new(),
    };
    let mut met_at_entry = Vec::with_capacity(targets.len());

    for (j, t) in targets.iter().enumerate() {
        let rho_t = grid.rho(t).rho;
        let threshold = 2.0 * rho_t / (1.0 - lambda) + slack;
        let d_entry = grid.grid_distance(t, &cur);
        met_at_entry.push(d_entry <= threshold);
        let mut decay = 1.0;
        let mut taken = 0;
        loop {
            let distance = grid.grid_distance(t, &cur);
            if taken > 0 || j == 0 {
                let bound = decay * d_entry + rho_t / (1.0 - lambda);
                walk.checks.push(BoundCheck {
                    step: walk.len(),
                    distance,
                    bound,
                    holds: distance <= bound + tol,
                });
            }
            if distance <= threshold && (j == 0 || taken > 0) {
                break;
            }
            if taken == phase_budget {
                return Err(WalkError::PhaseBudget {
                    phase: j + 1,
                    budget: phase_budget,
                });
            }
            let i = greedy_step(grid, t, &cur, walk.len())?;
            cur = cur.step(i);
            walk.directions.push(i);
            walk.steps.push(cur.clone());
            decay *= lambda;
            taken += 1;
        }
        walk.phase_ends.push(walk.len());
    }
    Ok(MultiTargetWalk {
        walk,
        threshold_met_at_entry: met_at_entry,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn half_grid() -> OrbitGrid {
        OrbitGrid::new(fixtures::half_family(3), vec![1.0]).unwrap()
    }

    #[test]
    fn walk_from_target_to_itself_stays_put() {
        let g = half_grid();
        let x = GridIndex::from([1, 2, 0]);
        let w = greedy_walk(&g, &x, &x, 0, 0.0).unwrap();
        assert_eq!(w.steps, vec![x]);
        assert!(w.directions.is_empty());
        assert!(w.bound_holds());
    }

    #[test]
    fn half3_walk_takes_first_direction() {
        let g = half_grid();
        let w = greedy_walk(&g, &GridIndex::from([3, 0, 0]), &GridIndex::zeros(3), 5, 0.0).unwrap();
        assert_eq!(w.len(), 5);
        // every direction contracts equally, so the tie-break picks the first
        assert!(w.directions.iter().all(|&d| d == 0));
        assert!(w.bound_holds());
    }

    #[test]
    fn epsilon_stops_early() {
        let g = half_grid();
        let w = greedy_walk(&g, &GridIndex::from([3, 0, 0]), &GridIndex::zeros(3), 100, 1e-3).unwrap();
        // d(x, y) = 7/8 and λ^k d < 1e-3 first at k = 10
        assert_eq!(w.len(), 10);
    }

    #[test]
    fn premise_failure_aborts() {
        let fam = crate::metric::OperatorFamily::new(
            crate::metric::Space::new(1, crate::metric::Norm::Sup),
            vec![crate::metric::Operator::affine(vec![vec![1.0]], vec![1.0])],
            0.5,
        )
        .unwrap();
        let g = OrbitGrid::new(fam, vec![0.0]).unwrap();
        let err = greedy_walk(&g, &GridIndex::from([3]), &GridIndex::from([0]), 4, 0.0).unwrap_err();
        assert!(matches!(err, WalkError::PremiseFailure { step: 0, .. }));
    }

    #[test]
    fn multi_target_phases_increase() {
        let g = OrbitGrid::new(fixtures::l1_family(false), vec![1.0, 1.0]).unwrap();
        let targets = [GridIndex::from([2, 0]), GridIndex::from([0, 3]), GridIndex::from([5, 5])];
        let m = multi_target_walk(&g, &targets, 1e-9, 1000).unwrap();
        assert_eq!(m.walk.phase_ends.len(), 3);
        assert!(m.walk.phase_ends.windows(2).all(|w| w[0] < w[1]));
        assert!(m.walk.bound_holds());
        for (j, t) in targets.iter().enumerate() {
            let end = &m.walk.steps[m.walk.phase_ends[j]];
            let thr = 2.0 * g.rho(t).rho / (1.0 - g.lambda()) + 1e-9;
            assert!(g.grid_distance(t, end) <= thr);
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let g = half_grid();
        assert!(matches!(
            greedy_walk(&g, &GridIndex::from([1, 1]), &GridIndex::zeros(3), 3, 0.0),
            Err(WalkError::Dimension { .. })
        ));
    }

    #[test]
    fn csv_has_one_row_per_position() {
        let g = half_grid();
        let w = greedy_walk(&g, &GridIndex::from([1, 0, 0]), &GridIndex::zeros(3), 3, 0.0).unwrap();
        let mut buf = Vec::new();
        w.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + w.steps.len());
        assert!(text.starts_with("step,index_1,index_2,index_3,direction,distance,bound\n0,0,0,0,1,"));
    }
}
