//! Numerical and combinatorial tooling around common fixed points of commuting
//! contractive operator families.
//!
//! A family `f_1, ..., f_n` on a normed space is λ-contractive when every pair
//! of points is contracted by at least one member. Its orbit grid pulls the
//! metric back to `N_0^n`, where greedy walks, displacement estimates and the
//! supporting combinatorics (k-way sets, colored-graph covers, grid-coloring
//! trivialization, neighborhood diagrams) live.

pub mod combinatorics;
pub mod config;
pub mod diagrams;
pub mod fixtures;
pub mod grid;
pub mod ledger;
pub mod metric;
pub mod report;
pub mod solver;
pub mod walks;

pub use combinatorics::{
    ck_search, cover_two_sets, detect_quarter_plane, kkr_constant, mono_diameter, signature, trivialize_coloring,
    verify_kway, ColoredCompleteGraph, CoverResult, Diameter, GridColoring, WindowSet,
};
pub use config::{load_family_config, ConfigError, FamilyConfig, LoadedFamily};
pub use grid::{check_fni, estimate_mu, mu_infinity_table, FniReport, GridIndex, MuEstimate, OrbitGrid, RhoReport};
pub use metric::{ContractionWitness, MetricError, Norm, Operator, OperatorFamily, Point, Space, Tolerances};
pub use diagrams::{canonicalize, classify_appendix, compute_diagram, Diagram, DiagramCode};
pub use ledger::{build_ledger, check_lambda, Ledger};
pub use solver::{common_fixed_point, gbct_orbit_solve, Solution, SolveError, SolveOptions};
pub use walks::{greedy_walk, multi_target_walk, Walk, WalkError};
