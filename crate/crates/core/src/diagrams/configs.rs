//! Finite scanners for the grid configurations used in the displacement
//! argument. All of them take `μ̂` explicitly, since `μ` itself is not
//! computable; findings are observations, not contradictions.
//!
//! A configuration counts as inside the window `[0, W]^n` only when every
//! grid point it touches lies in the window.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::grid::{box_indices, GridIndex, OrbitGrid};
use crate::ledger::{build_ledger, rational_from_f64};

/// One hypothesis or conclusion inequality `lhs <= rhs` (strict where noted).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inequality {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Inequality {
    fn le(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }

    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TpsConclusion {
    /// 0-based `(a, b, c)` with `{a, b, c} = {0, 1, 2}`.
    pub axes: [usize; 3],
    /// `d(x + e_a, x + e_b) <= λKμ̂` and `d(x, x0) <= Kμ̂`.
    pub applicable: bool,
    /// `d(x + e_c, x_c + e_c) <= 16λKμ̂`, evaluated when applicable.
    pub bound: Option<Inequality>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum TpsStatus {
    PremisesFail,
    Evaluated { conclusion_holds: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TpsReport {
    pub hypotheses: Vec<Inequality>,
    pub status: TpsStatus,
    pub conclusions: Vec<TpsConclusion>,
}

#[derive(Debug, Clone)]
pub struct TpsInput {
    pub x0: GridIndex,
    /// `x_1, x_2, x_3`.
    pub xs: [GridIndex; 3],
    pub x: GridIndex,
    pub k: f64,
    pub lambda: f64,
    pub mu_hat: f64,
}

/// Evaluates the two-point step: under its hypotheses on `x0, x1, x2, x3`,
/// any `x` near `x0` with `d(x + e_a, x + e_b) <= λKμ̂` has
/// `d(x + e_c, x_c + e_c) <= 16λKμ̂`.
pub fn check_tps(grid: &OrbitGrid, input: &TpsInput) -> TpsReport {
    let TpsInput {
        x0,
        xs,
        x,
        k,
        lambda,
        mu_hat,
    } = input;
    let (k, lambda, mu) = (*k, *lambda, *mu_hat);
    let d = |a: &GridIndex, b: &GridIndex| grid.grid_distance(a, b);
    let small = lambda * k * mu;
    let big = k * mu;

    let cross: Vec<GridIndex> = (0..3)
        .flat_map(|i| (0..3).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| xs[i].step(j))
        .collect();
    let mut hypotheses = vec![
        Inequality::le("K >= 1", 1.0, k),
        Inequality::le("diam{x_i + e_j : i != j} <= λKμ̂", grid.diameter(&cross), small),
        Inequality::le("ρ(x0) <= Kμ̂", grid.rho(x0).rho, big),
    ];
    for (i, xi) in xs.iter().enumerate() {
        hypotheses.push(Inequality::le(format!("d(x0, x_{}) <= Kμ̂", i + 1), d(x0, xi), big));
    }
    let c1 = build_ledger().constants.c1;
    let lambda_ok = match (rational_from_f64(lambda), rational_from_f64(k)) {
        (Some(l), Some(kk)) => l * BigRational::from_integer((BigUint::from(820u32) * c1.clone()).into()) * kk < BigRational::one(),
        _ => false,
    };
    let c1f = c1.to_f64().unwrap_or(f64::INFINITY);
    hypotheses.push(Inequality {
        name: "λ < 1/(820·C1·K)".into(),
        lhs: lambda,
        rhs: 1.0 / (820.0 * c1f * k),
        holds: lambda_ok,
    });

    if !hypotheses.iter().all(|h| h.holds) {
        return TpsReport {
            hypotheses,
            status: TpsStatus::PremisesFail,
            conclusions: Vec::new(),
        };
    }
    let mut conclusions = Vec::new();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let c = 3 - a - b;
        let applicable = d(&x.step(a), &x.step(b)) <= small && d(x, x0) <= big;
        let bound = applicable.then(|| {
            Inequality::le(
                format!("d(x + e_{c1}, x_{c1} + e_{c1}) <= 16λKμ̂", c1 = c + 1),
                d(&x.step(c), &xs[c].step(c)),
                16.0 * small,
            )
        });
        conclusions.push(TpsConclusion {
            axes: [a, b, c],
            applicable,
            bound,
        });
    }
    let conclusion_holds = conclusions.iter().all(|c| c.bound.as_ref().is_none_or(|b| b.holds));
    TpsReport {
        hypotheses,
        status: TpsStatus::Evaluated { conclusion_holds },
        conclusions,
    }
}

/// Points `y` with `d(x0, y) <= Kμ̂` and `d(y, y + e_i) <= Kμ̂`, per `i`.
fn s_sets(grid: &OrbitGrid, x0: &GridIndex, big: f64, window: u32) -> Vec<Vec<GridIndex>> {
    let n = grid.n();
    (0..n)
        .map(|i| {
            box_indices(&GridIndex::zeros(n), window)
                .filter(|y| y.get(i) < window)
                .filter(|y| grid.grid_distance(x0, y) <= big && grid.grid_distance(y, &y.step(i)) <= big)
                .collect()
        })
        .collect()
}

/// A target no member of `S_i` contracts toward in direction `i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForbiddenTarget {
    pub t: GridIndex,
    /// 0-based.
    pub direction: usize,
    pub distance_to_x0: f64,
    /// `S_i` is empty in the window, so the condition holds trivially.
    pub vacuous: bool,
}

/// First `(t, i)` in the window with `d(t, x0) <= radius` and no `s ∈ S_i`
/// contracting `(s, t)` along `i`.
fn first_forbidden_target(
    grid: &OrbitGrid,
    x0: &GridIndex,
    s: &[Vec<GridIndex>],
    radius: f64,
    lambda: f64,
    window: u32,
) -> Option<ForbiddenTarget> {
    let n = grid.n();
    for t in box_indices(&GridIndex::zeros(n), window.saturating_sub(1)) {
        if window == 0 {
            break;
        }
        let dt = grid.grid_distance(&t, x0);
        if dt > radius {
            continue;
        }
        for (i, si) in s.iter().enumerate() {
            if si.iter().all(|y| !grid.contracts(i, y, &t, lambda)) {
                return Some(ForbiddenTarget {
                    t,
                    direction: i,
                    distance_to_x0: dt,
                    vacuous: si.is_empty(),
                });
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SiStatus {
    /// `μ̂ = 0`: every inequality collapses.
    Degenerate,
    PreconditionFailure { rho_x0: f64, two_mu_hat: f64 },
    Scanned,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiReport {
    pub status: SiStatus,
    pub window_side: u32,
    /// `S_1, S_2, S_3` restricted to the window.
    pub s_sets: Vec<Vec<GridIndex>>,
    pub forbidden_target: Option<ForbiddenTarget>,
    /// `1 > 10λK·C1`, the side condition under which a target must exist.
    pub side_condition_holds: bool,
}

/// Enumerates `S_i(K, x0)` in the window and looks for a target `t` within
/// `3Kμ̂` of `x0` that, for some `i`, no `s ∈ S_i` contracts toward along `i`.
pub fn scan_si_and_forbidden_t(grid: &OrbitGrid, x0: &GridIndex, k: f64, lambda: f64, mu_hat: f64, window_side: u32) -> SiReport {
    let c1 = build_ledger().constants.c1.to_f64().unwrap_or(f64::INFINITY);
    let mut report = SiReport {
        status: SiStatus::Scanned,
        window_side,
        s_sets: Vec::new(),
        forbidden_target: None,
        side_condition_holds: 1.0 > 10.0 * lambda * k * c1,
    };
    if mu_hat == 0.0 {
        report.status = SiStatus::Degenerate;
        return report;
    }
    let rho0 = grid.rho(x0).rho;
    if rho0 >= 2.0 * mu_hat {
        report.status = SiStatus::PreconditionFailure {
            rho_x0: rho0,
            two_mu_hat: 2.0 * mu_hat,
        };
        return report;
    }
    report.s_sets = s_sets(grid, x0, k * mu_hat, window_side);
    report.forbidden_target = first_forbidden_target(grid, x0, &report.s_sets, 3.0 * k * mu_hat, lambda, window_side);
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConfigKind {
    /// `ρ(x0) <= Kμ̂` with `N(x0)` and its cross neighbors within `λKμ̂`.
    TightStar,
    /// `ρ(x) <= Kμ̂` but `ρ(x + e_i) > 7Kμ̂` for every `i`.
    NeighborGrowth,
    /// `ρ(x) <= Kμ̂` and `diam N(x) <= λKμ̂`.
    NeighborhoodDiameter,
    /// Forbidden target for `S_i(C4, x0)` with `d(t + e_j, t + e_k) <= Kλμ̂`.
    CloseCase,
    /// Forbidden target for `S_i(C5, x0)` with `d(t + e_j, t + e_k) > 10·C5·λμ̂`.
    FarCase,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Occurrence {
    pub config: ConfigKind,
    pub point: GridIndex,
    /// 0-based direction `i` for the target cases.
    pub direction: Option<usize>,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ScanStatus {
    Degenerate,
    Scanned,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigScanReport {
    pub status: ScanStatus,
    pub window_side: u32,
    /// Base point used by the target cases: first window point with `ρ < 2μ̂`.
    pub x0: Option<GridIndex>,
    pub occurrences: Vec<Occurrence>,
}

impl ConfigScanReport {
    pub fn count(&self, kind: ConfigKind) -> usize {
        self.occurrences.iter().filter(|o| o.config == kind).count()
    }
}

/// Points `x` of `[0, W]^n` with `x + reach·(1, ..., 1)` still inside.
fn fitting(n: usize, window: u32, reach: u32) -> Vec<GridIndex> {
    if window < reach {
        return Vec::new();
    }
    box_indices(&GridIndex::zeros(n), window - reach).collect()
}

/// Reports every window occurrence of the forbidden configurations.
pub fn scan_forbidden_configs(grid: &OrbitGrid, k: f64, lambda: f64, mu_hat: f64, window_side: u32) -> ConfigScanReport {
    let mut report = ConfigScanReport {
        status: ScanStatus::Scanned,
        window_side,
        x0: None,
        occurrences: Vec::new(),
    };
    if mu_hat == 0.0 {
        report.status = ScanStatus::Degenerate;
        return report;
    }
    let n = grid.n();
    let big = k * mu_hat;
    let small = lambda * k * mu_hat;
    let push = |r: &mut ConfigScanReport, config, point: &GridIndex, direction, value, threshold| {
        r.occurrences.push(Occurrence {
            config,
            point: point.clone(),
            direction,
            value,
            threshold,
        })
    };

    for x in fitting(n, window_side, 2) {
        let rho = grid.rho(&x).rho;
        if rho > big {
            continue;
        }
        let mut star: Vec<GridIndex> = (0..n).map(|i| x.step(i)).collect();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    star.push(x.step(i).step(j));
                }
            }
        }
        let diam = grid.diameter(&star);
        if diam <= small {
            push(&mut report, ConfigKind::TightStar, &x, None, diam, small);
        }
        let growth = (0..n).map(|i| grid.rho(&x.step(i)).rho).fold(f64::INFINITY, f64::min);
        if growth > 7.0 * big {
            push(&mut report, ConfigKind::NeighborGrowth, &x, None, growth, 7.0 * big);
        }
    }
    for x in fitting(n, window_side, 1) {
        if grid.rho(&x).rho > big {
            continue;
        }
        let nb: Vec<GridIndex> = (0..n).map(|i| x.step(i)).collect();
        let diam = grid.diameter(&nb);
        if diam <= small {
            push(&mut report, ConfigKind::NeighborhoodDiameter, &x, None, diam, small);
        }
    }

    let consts = build_ledger().constants;
    let c4 = consts.c4.to_f64().unwrap_or(f64::INFINITY);
    let c5 = consts.c5.to_f64().unwrap_or(f64::INFINITY);
    let x0 = fitting(n, window_side, 1)
        .into_iter()
        .find(|x| grid.rho(x).rho < 2.0 * mu_hat);
    if let (Some(x0), true) = (&x0, n == 3) {
        for (kind, kk) in [(ConfigKind::CloseCase, c4), (ConfigKind::FarCase, c5)] {
            let s = s_sets(grid, x0, kk * mu_hat, window_side);
            for t in fitting(n, window_side, 1) {
                if grid.grid_distance(&t, x0) > 3.0 * kk * mu_hat {
                    continue;
                }
                for (i, si) in s.iter().enumerate() {
                    if !si.iter().all(|y| !grid.contracts(i, y, &t, lambda)) {
                        continue;
                    }
                    let (j, l) = match i {
                        0 => (1, 2),
                        1 => (0, 2),
                        _ => (0, 1),
                    };
                    let gap = grid.grid_distance(&t.step(j), &t.step(l));
                    let hit = match kind {
                        ConfigKind::CloseCase => gap <= k * lambda * mu_hat,
                        _ => gap > 10.0 * c5 * lambda * mu_hat,
                    };
                    if hit {
                        let threshold = match kind {
                            ConfigKind::CloseCase => k * lambda * mu_hat,
                            _ => 10.0 * c5 * lambda * mu_hat,
                        };
                        push(&mut report, kind, &t, Some(i), gap, threshold);
                    }
                }
            }
        }
    }
    report.x0 = x0;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::grid::estimate_mu;

    fn half_grid() -> OrbitGrid {
        OrbitGrid::new(fixtures::half_family(3), vec![1.0]).unwrap()
    }

    fn identity_grid() -> OrbitGrid {
        OrbitGrid::new(fixtures::identity_family(3), vec![1.0]).unwrap()
    }

    fn tps_input(lambda: f64) -> TpsInput {
        TpsInput {
            x0: GridIndex::zeros(3),
            xs: [GridIndex::from([1, 0, 0]), GridIndex::from([0, 1, 0]), GridIndex::from([0, 0, 1])],
            x: GridIndex::from([2, 2, 2]),
            k: 1.0,
            lambda,
            mu_hat: 1.0,
        }
    }

    #[test]
    fn tps_on_identity_grid() {
        let r = check_tps(&identity_grid(), &tps_input(1e-9));
        assert_eq!(r.status, TpsStatus::Evaluated { conclusion_holds: true });
        for c in &r.conclusions {
            let b = c.bound.as_ref().unwrap();
            assert_eq!(b.lhs, 0.0);
            assert_eq!(b.slack(), 16.0 * 1e-9);
        }
    }

    #[test]
    fn tps_gates_on_lambda() {
        let r = check_tps(&identity_grid(), &tps_input(0.5));
        assert_eq!(r.status, TpsStatus::PremisesFail);
        assert!(r.conclusions.is_empty());
        assert!(!r.hypotheses.last().unwrap().holds);
    }

    #[test]
    fn tps_on_half_grid_lists_hypotheses() {
        let r = check_tps(&half_grid(), &tps_input(1e-9));
        // x_i + e_j sit at level 2 (value 1/4) while x0 is at level 0, so the
        // cross diameter is 0 and ρ(x0) = 1/2 <= Kμ̂ = 1
        assert!(r.hypotheses.iter().all(|h| h.holds), "{:?}", r.hypotheses);
        // d(x + e_a, x + e_b) = 0 and d(x, x0) < 1, so every conclusion applies
        assert!(r.conclusions.iter().all(|c| c.applicable));
        // μ̂ = 1 is far above the true infimum 0, so the conclusion fails
        assert_eq!(r.status, TpsStatus::Evaluated { conclusion_holds: false });
        for c in &r.conclusions {
            assert_eq!(c.bound.as_ref().unwrap().lhs, 0.25 - 0.5f64.powi(7));
        }
    }

    #[test]
    fn si_scan_cases() {
        let r = scan_si_and_forbidden_t(&identity_grid(), &GridIndex::zeros(3), 2.0, 0.5, 0.0, 3);
        assert_eq!(r.status, SiStatus::Degenerate);

        let g = half_grid();
        let mu = estimate_mu(&g, 5).mu_hat;
        let r = scan_si_and_forbidden_t(&g, &GridIndex::zeros(3), 2.0, 0.5, mu, 5);
        assert!(matches!(r.status, SiStatus::PreconditionFailure { .. }));

        // x0 = (5,5,5) has ρ = μ̂ < 2μ̂
        let x0 = GridIndex::from([5, 5, 5]);
        let r = scan_si_and_forbidden_t(&g, &x0, 2.0, 0.5, mu, 5);
        assert_eq!(r.status, SiStatus::Scanned);
        // direct evaluation of the S_i inequalities
        for i in 0..3 {
            let expect: Vec<GridIndex> = box_indices(&GridIndex::zeros(3), 5)
                .filter(|y| y.get(i) < 5)
                .filter(|y| {
                    let v = |a: &GridIndex| 0.5f64.powi(a.total() as i32);
                    (v(y) - v(&x0)).abs() <= 2.0 * mu && v(y) / 2.0 <= 2.0 * mu
                })
                .collect();
            assert_eq!(r.s_sets[i], expect);
        }
    }

    #[test]
    fn config_scan_cases() {
        let r = scan_forbidden_configs(&identity_grid(), 1.0, 0.5, 0.0, 4);
        assert_eq!(r.status, ScanStatus::Degenerate);

        let g = half_grid();
        let r = scan_forbidden_configs(&g, 1.0, 0.5, 0.25, 0);
        assert!(r.occurrences.is_empty());

        let mu = estimate_mu(&g, 4).mu_hat;
        let r = scan_forbidden_configs(&g, 1.0, 0.5, mu, 4);
        // the half family never grows ρ, so neighbor growth cannot occur
        assert_eq!(r.count(ConfigKind::NeighborGrowth), 0);
        // every neighborhood is a single point, so any x with ρ(x) <= μ̂ qualifies
        let expect = box_indices(&GridIndex::zeros(3), 3)
            .filter(|x| 0.5f64.powi(x.total() as i32 + 1) <= mu)
            .count();
        assert_eq!(r.count(ConfigKind::NeighborhoodDiameter), expect);
    }
}
