//! Bundled operator families.
//!
//! | id             | space        | operators                                | λ    |
//! |----------------|--------------|------------------------------------------|------|
//! | `half3`        | R, any norm  | three copies of `x ↦ x/2`                | 1/2  |
//! | `l1pair`       | R², ℓ1       | `(x/2, y)`, `(x, y/2)`                   | 3/4  |
//! | `l1triple`     | R², ℓ1       | `l1pair` plus `(x/2, y/2)`               | 3/4  |
//! | `affine-triple`| R³, ℓ1       | three commuting affine maps, common fixed point `(1, -2, 1/2)` | 1/2 |
//! | `gbct-swap`    | R², sup      | `f(x, y) = (y, x/2)` and `f²`            | 1/2  |
//!
//! In `l1pair` neither map is a contraction on its own; in `affine-triple`
//! every map has ℓ1 operator norm at least 0.65 while the family as a whole
//! contracts every pair by 1/2.

use crate::config::{FamilyConfig, OpConfig};
use crate::metric::{Norm, Operator, OperatorFamily, Point, Space};

/// Identifiers accepted by [`bundled`].
pub const BUNDLED_IDS: [&str; 5] = ["half3", "l1pair", "l1triple", "affine-triple", "gbct-swap"];

/// Common fixed point of the `affine-triple` fixture.
pub const AFFINE_TRIPLE_FIXED_POINT: [f64; 3] = [1.0, -2.0, 0.5];

/// A bundled family together with the base point used for its orbit grid.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub id: &'static str,
    pub family: OperatorFamily,
    pub base: Point,
}

/// Looks up a bundled fixture by id.
pub fn bundled(id: &str) -> Option<Fixture> {
    let id = BUNDLED_IDS.iter().copied().find(|&b| b == id)?;
    let config = bundled_config(id)?;
    let family = config.build().expect("bundled configs are well formed");
    let base = match id {
        "half3" => vec![1.0],
        "l1pair" | "l1triple" | "gbct-swap" => vec![1.0, 1.0],
        _ => vec![0.0, 0.0, 0.0],
    };
    Some(Fixture { id, family, base })
}

/// The JSON-schema form of a bundled fixture.
pub fn bundled_config(id: &str) -> Option<FamilyConfig> {
    let diag = |d: &[f64]| -> Vec<Vec<f64>> {
        (0..d.len())
            .map(|r| (0..d.len()).map(|c| if r == c { d[r] } else { 0.0 }).collect())
            .collect()
    };
    let op = |matrix: Vec<Vec<f64>>, offset: Vec<f64>| OpConfig { matrix, offset };
    let cfg = match id {
        "half3" => FamilyConfig {
            dim: 1,
            norm: Norm::Sup,
            lambda: 0.5,
            ops: vec![op(vec![vec![0.5]], vec![0.0]); 3],
        },
        "l1pair" | "l1triple" => {
            let mut ops = vec![
                op(diag(&[0.5, 1.0]), vec![0.0, 0.0]),
                op(diag(&[1.0, 0.5]), vec![0.0, 0.0]),
            ];
            if id == "l1triple" {
                ops.push(op(diag(&[0.5, 0.5]), vec![0.0, 0.0]));
            }
            FamilyConfig {
                dim: 2,
                norm: Norm::L1,
                lambda: 0.75,
                ops,
            }
        }
        "affine-triple" => {
            let mats = [
                vec![vec![0.2, 0.1, 0.0], vec![0.0, 0.2, 0.0], vec![0.0, 0.0, 0.7]],
                diag(&[0.7, 0.7, 0.2]),
                vec![vec![0.6, 0.05, 0.0], vec![0.0, 0.6, 0.0], vec![0.0, 0.0, 0.6]],
            ];
            let c = AFFINE_TRIPLE_FIXED_POINT;
            let ops = mats
                .into_iter()
                .map(|m| {
                    // offset = (I - A) c, so that c is fixed
                    let offset = (0..3)
                        .map(|r| c[r] - (0..3).map(|k| m[r][k] * c[k]).sum::<f64>())
                        .collect();
                    op(m, offset)
                })
                .collect();
            FamilyConfig {
                dim: 3,
                norm: Norm::L1,
                lambda: 0.5,
                ops,
            }
        }
        "gbct-swap" => FamilyConfig {
            dim: 2,
            norm: Norm::Sup,
            lambda: 0.5,
            ops: vec![
                op(vec![vec![0.0, 1.0], vec![0.5, 0.0]], vec![0.0, 0.0]),
                op(diag(&[0.5, 0.5]), vec![0.0, 0.0]),
            ],
        },
        _ => return None,
    };
    Some(cfg)
}

/// `n` copies of `x ↦ x/2` on the real line, λ = 1/2.
pub fn half_family(n: usize) -> OperatorFamily {
    OperatorFamily::new(Space::new(1, Norm::Sup), vec![Operator::scaling(1, 0.5); n], 0.5)
        .expect("valid family")
}

/// `n` identity maps on the real line, λ = 1/2.
///
/// Only zero-distance pairs are contracted, so this is a degenerate fixture.
pub fn identity_family(n: usize) -> OperatorFamily {
    OperatorFamily::new(Space::new(1, Norm::Sup), vec![Operator::identity(1); n], 0.5)
        .expect("valid family")
}

/// `(x/2, y)`, `(x, y/2)` and optionally `(x/2, y/2)` on ℓ1, λ = 3/4.
pub fn l1_family(with_third: bool) -> OperatorFamily {
    let id = if with_third { "l1triple" } else { "l1pair" };
    bundled(id).expect("bundled").family
}

pub fn affine_triple() -> OperatorFamily {
    bundled("affine-triple").expect("bundled").family
}

/// The family `{f, f²}` for `f(x, y) = (y, x/2)` on the sup norm.
pub fn gbct_swap() -> OperatorFamily {
    bundled("gbct-swap").expect("bundled").family
}

/// `f(x, y) = (y, x/2)`.
pub fn gbct_swap_map() -> Operator {
    Operator::affine(vec![vec![0.0, 1.0], vec![0.5, 0.0]], vec![0.0, 0.0])
}

/// Three copies of `x ↦ x/2 + 1` on the real line, λ = 1/2.
pub fn shifted_half_family() -> OperatorFamily {
    OperatorFamily::new(
        Space::new(1, Norm::Sup),
        vec![Operator::affine(vec![vec![0.5]], vec![1.0]); 3],
        0.5,
    )
    .expect("valid family")
}
