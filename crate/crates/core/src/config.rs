//! Family configuration files.
//!
//! ```json
//! { "dim": 2, "norm": "l1", "lambda": 0.75,
//!   "ops": [ {"matrix": [[0.5, 0], [0, 1]], "offset": [0, 0]},
//!            {"matrix": [[1, 0], [0, 0.5]], "offset": [0, 0]} ] }
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fixtures;
use crate::metric::{self, AxiomReport, MetricError, Norm, Operator, OperatorFamily, Point, Space};

/// Pairs drawn for the load-time axiom check.
pub const VALIDATION_SAMPLE: usize = 64;
/// Half-width of the box the validation pairs are drawn from.
pub const VALIDATION_RADIUS: f64 = 4.0;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed family config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid field `{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error("family violates its axioms on {failures} of {sampled} sampled pairs")]
    Axioms {
        failures: usize,
        sampled: usize,
        report: Box<AxiomReport>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpConfig {
    pub matrix: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub dim: usize,
    pub norm: Norm,
    pub lambda: f64,
    pub ops: Vec<OpConfig>,
}

impl FamilyConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Builds the family, naming the offending field on shape errors.
    pub fn build(&self) -> Result<OperatorFamily, ConfigError> {
        let invalid = |field: String, reason: String| ConfigError::Invalid { field, reason };
        if self.dim == 0 {
            return Err(invalid("dim".into(), "must be positive".into()));
        }
        if self.ops.is_empty() {
            return Err(invalid("ops".into(), "at least one operator is required".into()));
        }
        for (k, op) in self.ops.iter().enumerate() {
            if op.matrix.len() != self.dim {
                return Err(invalid(
                    format!("ops[{k}].matrix"),
                    format!("expected {} rows, found {}", self.dim, op.matrix.len()),
                ));
            }
            if let Some((r, row)) = op.matrix.iter().enumerate().find(|(_, r)| r.len() != self.dim) {
                return Err(invalid(
                    format!("ops[{k}].matrix[{r}]"),
                    format!("expected {} entries, found {}", self.dim, row.len()),
                ));
            }
            if op.offset.len() != self.dim {
                return Err(invalid(
                    format!("ops[{k}].offset"),
                    format!("expected {} entries, found {}", self.dim, op.offset.len()),
                ));
            }
            if op.matrix.iter().flatten().chain(&op.offset).any(|x| !x.is_finite()) {
                return Err(invalid(format!("ops[{k}]"), "entries must be finite".into()));
            }
        }
        let ops = self
            .ops
            .iter()
            .map(|o| Operator::affine(o.matrix.clone(), o.offset.clone()))
            .collect();
        OperatorFamily::new(Space::new(self.dim, self.norm), ops, self.lambda).map_err(|e| match e {
            MetricError::InvalidLambda(l) => invalid("lambda".into(), format!("must lie in (0, 1), got {l}")),
            other => invalid("ops".into(), other.to_string()),
        })
    }
}

/// A resolved family plus the base point for its orbit grid.
#[derive(Debug, Clone)]
pub struct LoadedFamily {
    pub source: String,
    pub family: OperatorFamily,
    pub base: Point,
    pub axioms: AxiomReport,
}

/// Resolves a bundled id or reads a config file, then validates the axioms on
/// a seeded sample.
///
/// Families loaded from files use the origin as the base point.
pub fn load_family_config(source: &str, seed: u64) -> Result<LoadedFamily, ConfigError> {
    let (family, base) = match fixtures::bundled(source) {
        Some(fx) => (fx.family, fx.base),
        None => {
            let path = Path::new(source);
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
                path: path.to_path_buf(),
                source: e,
            })?;
            let family = FamilyConfig::from_json(&text)?.build()?;
            let base = vec![0.0; family.space().dim()];
            (family, base)
        }
    };
    let sample = metric::sample_pairs(family.space().dim(), VALIDATION_SAMPLE, VALIDATION_RADIUS, seed);
    let axioms = metric::validate_family_axioms(&family, &sample).expect("sample is non-empty and well shaped");
    if !axioms.passed {
        let failures = axioms.failures(family.tolerances()).len();
        return Err(ConfigError::Axioms {
            failures,
            sampled: sample.len(),
            report: Box::new(axioms),
        });
    }
    Ok(LoadedFamily {
        source: source.to_string(),
        family,
        base,
        axioms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn bundled_half3_loads() {
        let loaded = load_family_config("half3", 1).unwrap();
        assert_eq!(loaded.family.len(), 3);
        assert_eq!(loaded.family.lambda(), 0.5);
        assert_eq!(loaded.base, vec![1.0]);
    }

    #[test]
    fn bundled_l1pair_passes_axiom_sample() {
        let loaded = load_family_config("l1pair", 7).unwrap();
        assert_eq!(loaded.family.len(), 2);
        assert_eq!(loaded.family.lambda(), 0.75);
        assert!(loaded.axioms.passed);
    }

    #[test]
    fn every_bundled_config_passes_validation() {
        for id in fixtures::BUNDLED_IDS {
            load_family_config(id, 42).unwrap_or_else(|e| panic!("{id}: {e}"));
        }
    }

    #[test]
    fn malformed_file_names_the_field() {
        let err = FamilyConfig::from_json(r#"{"dim": 1, "norm": "sup", "ops": []}"#).unwrap_err();
        assert!(err.to_string().contains("lambda"), "{err}");

        let err = FamilyConfig::from_json(r#"{"dim": 1, "norm": "max", "lambda": 0.5, "ops": []}"#).unwrap_err();
        assert!(err.to_string().contains("max"), "{err}");

        let cfg = FamilyConfig::from_json(
            r#"{"dim": 2, "norm": "l2", "lambda": 0.5, "ops": [{"matrix": [[0.5, 0], [0]], "offset": [0, 0]}]}"#,
        )
        .unwrap();
        let err = cfg.build().unwrap_err();
        assert!(err.to_string().contains("ops[0].matrix[1]"), "{err}");
    }

    #[test]
    fn lambda_out_of_range_names_lambda() {
        let cfg = FamilyConfig {
            dim: 1,
            norm: Norm::Sup,
            lambda: 1.5,
            ops: vec![OpConfig {
                matrix: vec![vec![0.5]],
                offset: vec![0.0],
            }],
        };
        let err = cfg.build().unwrap_err();
        assert!(err.to_string().contains("`lambda`"), "{err}");
    }

    #[test]
    fn file_round_trip_and_axiom_failure() {
        let dir = std::env::temp_dir().join(format!("cofix-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();

        let good = dir.join("good.json");
        std::fs::File::create(&good)
            .unwrap()
            .write_all(fixtures::bundled_config("affine-triple").unwrap().to_json().as_bytes())
            .unwrap();
        let loaded = load_family_config(good.to_str().unwrap(), 3).unwrap();
        assert_eq!(loaded.family.len(), 3);

        // ℓ1 pair at λ = 0.7 is not contractive on diagonal displacements.
        let mut cfg = fixtures::bundled_config("l1pair").unwrap();
        cfg.lambda = 0.7;
        let bad = dir.join("bad.json");
        std::fs::write(&bad, cfg.to_json()).unwrap();
        match load_family_config(bad.to_str().unwrap(), 3) {
            Err(ConfigError::Axioms { failures, .. }) => assert!(failures > 0),
            other => panic!("expected axiom failure, got {other:?}"),
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_family_config("/definitely/not/here.json", 0),
            Err(ConfigError::Io { .. })
        ));
    }
}
