//! Combinatorial tools: k-way sets, colored complete graphs, grid colorings,
//! the `K_{k,r}` recursion and the `C_k` search.

pub mod coloring;
pub mod graph;
pub mod kkr;
pub mod kway;
pub mod search;

pub use coloring::{signature, trivialize_coloring, ColoringError, GridColoring, HypothesisViolation, Trivialization};
pub use graph::{cover_two_sets, mono_diameter, ColoredCompleteGraph, CoverResult, Diameter, GraphError};
pub use kkr::kkr_constant;
pub use kway::{detect_quarter_plane, verify_kway, KwayReport, QuarterPlane, WindowSet};
pub use search::{ck_search, CkSearchOptions, CkSearchReport};
