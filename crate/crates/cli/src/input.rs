//! Input files: generator sets and inverse semigroup tables.

use std::path::Path;

use pisomlab_core::invsg::InverseSemigroupTable;
use pisomlab_core::numlin::{ComplexMatrix, ToleranceConfig};
use pisomlab_core::sgroup::{GeneratorSet, Limits};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eq_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proj_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_elements: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_word_length: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: ComplexMatrix,
}

/// `{dim, tolerance?, generators: [{name, matrix}], include_identity?, limits?}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<ToleranceOverrides>,
    pub generators: Vec<NamedMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub include_identity: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<LimitOverrides>,
}

impl GeneratorFile {
    pub fn new(dim: usize, generators: Vec<(String, ComplexMatrix)>) -> Self {
        Self {
            dim,
            tolerance: None,
            generators: generators
                .into_iter()
                .map(|(name, matrix)| NamedMatrix { name, matrix })
                .collect(),
            include_identity: None,
            limits: None,
        }
    }

    /// File tolerances over the defaults, then a uniform command-line override.
    pub fn tolerance_config(&self, uniform: Option<f64>) -> Result<ToleranceConfig, CliError> {
        let schema =
            |e: pisomlab_core::numlin::LinalgError| CliError::Schema(format!("tolerance: {e}"));
        if let Some(t) = uniform {
            return ToleranceConfig::uniform(t).map_err(schema);
        }
        let d = ToleranceConfig::default();
        let o = self.tolerance.unwrap_or_default();
        ToleranceConfig::new(
            o.eq_tol.unwrap_or(d.eq_tol),
            o.proj_tol.unwrap_or(d.proj_tol),
            o.rank_tol.unwrap_or(d.rank_tol),
        )
        .map_err(schema)
    }

    pub fn limits(
        &self,
        max_elements: Option<usize>,
        max_word_length: Option<usize>,
    ) -> Result<Limits, CliError> {
        let d = Limits::default();
        let o = self.limits.unwrap_or_default();
        let limits = Limits {
            max_elements: max_elements.or(o.max_elements).unwrap_or(d.max_elements),
            max_word_length: max_word_length
                .or(o.max_word_length)
                .unwrap_or(d.max_word_length),
        };
        if limits.max_elements == 0 || limits.max_word_length == 0 {
            return Err(CliError::Schema("limits must be positive".into()));
        }
        Ok(limits)
    }

    pub fn generator_set(&self, cfg: &ToleranceConfig) -> Result<GeneratorSet, CliError> {
        if self.dim == 0 {
            return Err(CliError::Schema("dim must be positive".into()));
        }
        let gens = self
            .generators
            .iter()
            .map(|g| (g.name.clone(), g.matrix.clone()))
            .collect();
        let set =
            GeneratorSet::new(self.dim, gens, cfg).map_err(|e| CliError::Schema(e.to_string()))?;
        Ok(set.with_identity(self.include_identity.unwrap_or(true)))
    }
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn parse_generator_file(text: &str) -> Result<GeneratorFile, CliError> {
    parse(text)
}

pub fn load_generator_file(path: &Path) -> Result<GeneratorFile, CliError> {
    parse_generator_file(&read(path)?)
}

pub fn load_table(path: &Path) -> Result<InverseSemigroupTable, CliError> {
    parse(&read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_carry_position() {
        let err =
            parse_generator_file("{\n  \"dim\": 2,\n  \"generators\": [oops]\n}").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 3, .. }));
        let err = parse_generator_file(r#"{"dim": 2, "generators": [], "extra": 1}"#).unwrap_err();
        assert!(matches!(err, CliError::Parse { .. }));
    }

    #[test]
    fn overrides_apply_in_order() {
        let mut f =
            parse_generator_file(r#"{"dim": 1, "generators": [], "tolerance": {"eq_tol": 1e-6}}"#)
                .unwrap();
        let cfg = f.tolerance_config(None).unwrap();
        assert_eq!(cfg.eq_tol, 1e-6);
        assert_eq!(cfg.proj_tol, 1e-8);
        assert_eq!(f.tolerance_config(Some(1e-5)).unwrap().eq_tol, 1e-5);
        assert!(matches!(
            f.tolerance_config(Some(0.5)),
            Err(CliError::Schema(_))
        ));
        f.limits = Some(LimitOverrides {
            max_elements: Some(10),
            max_word_length: None,
        });
        let l = f.limits(None, Some(3)).unwrap();
        assert_eq!((l.max_elements, l.max_word_length), (10, 3));
    }

    #[test]
    fn schema_errors() {
        let f = parse_generator_file(
            r#"{"dim": 2, "generators": [{"name": "X", "matrix": [[[2,0],[0,0]],[[0,0],[0,0]]]}]}"#,
        )
        .unwrap();
        let err = f.generator_set(&ToleranceConfig::default()).unwrap_err();
        assert!(matches!(err, CliError::Schema(_)));
    }
}
