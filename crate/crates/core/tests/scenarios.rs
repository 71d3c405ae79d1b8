use cofix_core::combinatorics::kway::WindowSet;
use cofix_core::diagrams::configs::scan_forbidden_configs;
use cofix_core::fixtures::bundled;
use cofix_core::grid::window_scan;
use cofix_core::*;

fn grid_of(id: &str) -> OrbitGrid {
    let f = bundled(id).unwrap();
    OrbitGrid::new(f.family, f.base).unwrap()
}

#[test]
fn fni_holds_on_every_bundled_family() {
    for id in ["half3", "l1pair", "l1triple", "affine-triple", "gbct-swap"] {
        let grid = grid_of(id);
        let report = check_fni(&grid, 4, grid.lambda());
        assert!(report.passed(), "{id}: {:?}", report.violations.first());
    }
}

#[test]
fn half3_rho_and_mu() {
    let grid = grid_of("half3");
    // ρ at (a,b,c) is 2^-(a+b+c+1)
    for row in window_scan(&grid, 3) {
        assert_eq!(row.rho, 0.5f64.powi(row.index.total() as i32 + 1));
    }
    let est = estimate_mu(&grid, 3);
    assert_eq!(est.mu_hat, 0.5f64.powi(10));
    assert!(est.upper_bound_only);
}

#[test]
fn multi_target_walk_visits_targets_in_order() {
    let grid = grid_of("l1triple");
    let targets = [GridIndex::from([3, 1, 0]), GridIndex::from([5, 5, 2]), GridIndex::from([8, 6, 6])];
    let m = multi_target_walk(&grid, &targets, 1e-9, 1000).unwrap();
    assert_eq!(m.walk.phase_ends.len(), 3);
    assert!(m.walk.phase_ends.windows(2).all(|w| w[0] < w[1]));
    for (t, &end) in targets.iter().zip(&m.walk.phase_ends) {
        let d = grid.grid_distance(t, &m.walk.steps[end]);
        let threshold = 2.0 * grid.rho(t).rho / (1.0 - grid.lambda()) + 1e-9;
        assert!(d <= threshold, "{t}: {d} > {threshold}");
    }
}

#[test]
fn translate_cones_are_three_way() {
    let cone = WindowSet::translate_cone(&GridIndex::from([1, 2, 0]), 6);
    let report = verify_kway(&cone, 3);
    assert!(report.holds());
    assert!(report.checked > 0);
    assert!(detect_quarter_plane(&cone).is_none());
}

#[test]
fn quarter_planes_are_two_way_and_recognized() {
    let corner = GridIndex::from([1, 1, 3]);
    let plane = WindowSet::from_predicate(GridIndex::zeros(3), 6, |x| corner.dominated_by(x) && x.get(2) == 3);
    assert!(verify_kway(&plane, 2).holds());
    let q = detect_quarter_plane(&plane).unwrap();
    assert_eq!((q.i1, q.i2, q.corner), (0, 1, corner));
}

#[test]
fn permuted_family_permutes_the_grid() {
    let grid = grid_of("affine-triple");
    let perm = [2, 0, 1];
    let pgrid = OrbitGrid::new(grid.family().permuted(&perm).unwrap(), grid.base().to_vec()).unwrap();
    let a = GridIndex::from([3, 1, 2]);
    let b = GridIndex::new((0..3).map(|k| a.get(perm[k])).collect());
    // operators are applied in a different order, so agreement is up to round-off
    let (p, q) = (grid.point(&a), pgrid.point(&b));
    assert!(grid.family().distance(&p, &q) <= 1e-12, "{p:?} vs {q:?}");
}

#[test]
fn empty_window_scans_nothing() {
    let grid = grid_of("l1triple");
    let report = scan_forbidden_configs(&grid, 1.0, grid.lambda(), 0.1, 0);
    assert!(report.occurrences.is_empty());
}

#[test]
fn solver_reports_non_commuting_families() {
    let cfg = FamilyConfig {
        dim: 2,
        norm: Norm::Sup,
        lambda: 0.5,
        ops: vec![
            cofix_core::config::OpConfig { matrix: vec![vec![0.5, 0.0], vec![0.0, 0.5]], offset: vec![1.0, 0.0] },
            cofix_core::config::OpConfig { matrix: vec![vec![0.5, 0.0], vec![0.0, 0.5]], offset: vec![0.0, 1.0] },
        ],
    };
    let family = cfg.build().unwrap();
    let err = common_fixed_point(&family, &[0.0, 0.0], SolveOptions::default()).unwrap_err();
    assert!(matches!(err, SolveError::NotCommuting { i: 0, j: 1, .. }), "{err}");
}

#[test]
fn solver_budget_exhaustion_carries_best_iterate() {
    let f = bundled("affine-triple").unwrap();
    let opts = SolveOptions { max_iters: 3, ..SolveOptions::default() };
    match common_fixed_point(&f.family, &[50.0, 50.0, 50.0], opts) {
        Err(SolveError::NonConvergence { iterations, best, best_residual }) => {
            assert_eq!(iterations, 3);
            assert_eq!(best.len(), 3);
            assert!(best_residual.is_finite() && best_residual > 0.0);
        }
        other => panic!("{other:?}"),
    }
}
