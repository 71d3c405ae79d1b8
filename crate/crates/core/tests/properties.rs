use std::collections::VecDeque;

use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cofix_core::config::OpConfig;
use cofix_core::diagrams::{canonical_code, AXIS_PERMUTATIONS};
use cofix_core::fixtures::bundled;
use cofix_core::ledger::parse_rational;
use cofix_core::*;

fn grid_of(id: &str) -> OrbitGrid {
    let f = bundled(id).unwrap();
    OrbitGrid::new(f.family, f.base).unwrap()
}

fn fixture_id() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["half3", "l1pair", "l1triple", "affine-triple", "gbct-swap"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn memo_matches_direct_application(id in fixture_id(), seeds in prop::collection::vec(0u32..20, 1..12)) {
        let grid = grid_of(id);
        let n = grid.n();
        for (k, s) in seeds.iter().enumerate() {
            let a = GridIndex::new((0..n).map(|i| (s + 3 * i as u32 + k as u32) % 13).collect());
            let direct = grid.family().apply_multi(&a, grid.base()).unwrap();
            let memo = grid.point(&a);
            let same = direct.iter().zip(memo.iter()).all(|(x, y)| x.to_bits() == y.to_bits());
            prop_assert!(same, "{} at {}: {:?} vs {:?}", id, a, direct, memo);
        }
    }

    #[test]
    fn walk_bound_holds(id in fixture_id(), seed in 0u64..1000) {
        use rand::Rng;
        let grid = grid_of(id);
        let n = grid.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = GridIndex::new((0..n).map(|_| rng.gen_range(0..10)).collect());
        let y = GridIndex::new((0..n).map(|_| rng.gen_range(0..10)).collect());
        let walk = greedy_walk(&grid, &x, &y, 25, 0.0).unwrap();
        prop_assert_eq!(walk.steps.len(), walk.directions.len() + 1);
        prop_assert!(walk.bound_holds(), "{:?}", walk.first_violation());
        for k in 1..walk.steps.len() {
            prop_assert_eq!(walk.steps[k].total(), walk.steps[k - 1].total() + 1);
        }
    }

    #[test]
    fn kkr_recursion(k in 2u32..40, r in 1u64..1_000_000) {
        prop_assert_eq!(kkr_constant(k + 1, r), kkr_constant(k, 2 * r + 1));
        prop_assert_eq!(kkr_constant(2, r), BigUint::from(2 * r + 8));
        prop_assert_eq!(kkr_constant(1, r), BigUint::from(r));
    }

    #[test]
    fn canonical_code_is_a_class_invariant(raw in prop::array::uniform6(0u8..3)) {
        let code = DiagramCode(raw);
        let c = canonical_code(code);
        prop_assert_eq!(canonical_code(c), c);
        prop_assert!(c <= code);
        for p in AXIS_PERMUTATIONS.iter() {
            let moved = code.permute(p);
            prop_assert_eq!(canonical_code(moved), c);
            prop_assert_eq!(moved.is_admissible(), code.is_admissible());
            prop_assert_eq!(moved.satisfies_pairing_rule(), code.satisfies_pairing_rule());
        }
    }

    #[test]
    fn cover_is_a_small_diameter_cover(n in 1usize..40, seed in any::<u64>()) {
        let g = ColoredCompleteGraph::random(n, 3, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let cover = cover_two_sets(&g).unwrap();
        let mut seen = vec![false; n];
        for &v in cover.a.iter().chain(&cover.b) {
            seen[v] = true;
        }
        prop_assert!(seen.iter().all(|&s| s));
        prop_assert_eq!(Some(cover.diam_a), bfs_diameter(&g, cover.color_a, &cover.a));
        prop_assert_eq!(Some(cover.diam_b), bfs_diameter(&g, cover.color_b, &cover.b));
        prop_assert!(cover.diam_a <= 8 && cover.diam_b <= 8);
    }

    #[test]
    fn diagonal_families_solve_to_their_shared_point(
        diag in prop::collection::vec(prop::collection::vec(0.0f64..0.9, 2), 1..4),
        center in prop::collection::vec(-10.0f64..10.0, 2),
        start in prop::collection::vec(-100.0f64..100.0, 2),
    ) {
        let ops = diag
            .iter()
            .map(|d| OpConfig {
                matrix: vec![vec![d[0], 0.0], vec![0.0, d[1]]],
                offset: (0..2).map(|r| (1.0 - d[r]) * center[r]).collect(),
            })
            .collect();
        let cfg = FamilyConfig { dim: 2, norm: Norm::Sup, lambda: 0.9, ops };
        let family = cfg.build().unwrap();
        let sol = common_fixed_point(&family, &start, SolveOptions::default()).unwrap();
        prop_assert!(sol.max_residual() <= 1e-10);
        for (z, c) in sol.point.iter().zip(&center) {
            prop_assert!((z - c).abs() <= 1e-8, "{:?} vs {:?}", sol.point, center);
        }
    }

    #[test]
    fn config_json_round_trips(id in fixture_id()) {
        let cfg = cofix_core::fixtures::bundled_config(id).unwrap();
        prop_assert_eq!(FamilyConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn rationals_parse_exactly(p in -1_000_000i64..1_000_000, q in 1i64..1_000_000, e in 0u32..30) {
        prop_assert_eq!(parse_rational(&format!("{p}/{q}")).unwrap(), BigRational::new(p.into(), q.into()));
        let scaled = BigRational::new(p.into(), BigUint::from(10u32).pow(e).into());
        prop_assert_eq!(parse_rational(&format!("{p}e-{e}")).unwrap(), scaled);
    }
}

fn bfs_diameter(g: &ColoredCompleteGraph, c: u8, set: &[usize]) -> Option<usize> {
    let mut diam = 0;
    for &s in set {
        let mut dist = vec![usize::MAX; g.n_vertices()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in set {
                if v != u && dist[v] == usize::MAX && g.color(u, v) == c {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for &v in set {
            diam = diam.max(dist[v]);
        }
    }
    (diam != usize::MAX).then_some(diam)
}
