//! JSON run configuration.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, IntersectionAlgebra};
use crate::error::{Error, Result};
use crate::scheme::{RelationId, SchemeDescriptor, SchemeKind};

fn default_probability() -> f64 {
    0.1
}

fn default_realizations() -> usize {
    1
}

/// A run configuration. Coefficients are keyed by relation name; identity
/// relations default to 1 and a relation given without its adjoint copies
/// its value to the adjoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scheme: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default)]
    pub coefficients: BTreeMap<String, f64>,
    #[serde(default = "default_probability")]
    pub edge_probability: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_realizations")]
    pub realizations: usize,
    /// Target all-ones eigenvalue; when set the disjoint coefficient(s) are
    /// solved for.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub balance_target: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Written by `generate`; ignored on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunRecord>,
}

/// What a generate run produced, recorded alongside its configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub version: String,
    pub resolved_coefficients: Vec<f64>,
    pub sqrt_coefficients: Vec<f64>,
    pub threshold: f64,
    /// Realization `k` uses ChaCha20 seeded with `seed`, stream `k`.
    pub rng: String,
    pub files: Vec<String>,
}

impl RunConfig {
    pub fn new(kind: SchemeKind, n: usize) -> Self {
        RunConfig {
            scheme: kind.name().to_string(),
            n,
            coefficients: BTreeMap::new(),
            edge_probability: default_probability(),
            seed: 0,
            realizations: default_realizations(),
            balance_target: None,
            output_dir: None,
            manifest: None,
        }
    }

    pub fn from_json_str(text: &str, path: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text, path)
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn kind(&self) -> Result<SchemeKind> {
        self.scheme.parse()
    }

    pub fn descriptor(&self) -> Result<SchemeDescriptor> {
        SchemeDescriptor::new(self.kind()?, self.n)
    }

    /// Coefficient vector in relation-id order, before balancing.
    pub fn raw_coefficients(&self, scheme: &SchemeDescriptor) -> Result<Vec<f64>> {
        let size = scheme.relation_count();
        let mut given: Vec<Option<f64>> = vec![None; size];
        for (name, &value) in &self.coefficients {
            let k = scheme.relation_by_name(name).ok_or_else(|| {
                let names: Vec<&str> = scheme.relations().iter().map(|r| r.name.as_str()).collect();
                Error::Config(format!(
                    "unknown relation '{name}' for {} (expected one of {})",
                    scheme.name(),
                    names.join(", ")
                ))
            })?;
            if !value.is_finite() {
                return Err(Error::Config(format!("coefficient '{name}' is not finite")));
            }
            given[k.0] = Some(value);
        }
        let mut coeffs = vec![0.0; size];
        for k in 0..size {
            let id = RelationId(k);
            let adj = scheme.adjoint(id);
            coeffs[k] = match (given[k], given[adj.0]) {
                (Some(a), Some(b)) if a != b => {
                    return Err(Error::Config(format!(
                        "coefficients of {} ({a}) and {} ({b}) must match for a symmetric covariance",
                        scheme.relation_name(id),
                        scheme.relation_name(adj)
                    )))
                }
                (Some(a), _) | (None, Some(a)) => a,
                (None, None) if scheme.relations()[k].identity => 1.0,
                (None, None) => 0.0,
            };
        }
        Ok(coeffs)
    }

    /// The covariance element, balanced if a target is set.
    pub fn covariance(&self, algebra: &IntersectionAlgebra) -> Result<AlgebraElement> {
        let raw = algebra.element(self.raw_coefficients(algebra.scheme())?)?;
        match self.balance_target {
            Some(t) => algebra.balance_disjoint(&raw, t),
            None => Ok(raw),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::nz;

    fn parse(text: &str) -> Result<RunConfig> {
        RunConfig::from_json_str(text, Path::new("test.json"))
    }

    #[test]
    fn defaults_and_anti_copy() {
        let c = parse(r#"{"scheme": "nykamp-zhao", "N": 10, "coefficients": {"chain": 0.2}}"#).unwrap();
        assert_eq!(c.edge_probability, 0.1);
        assert_eq!(c.realizations, 1);
        let s = c.descriptor().unwrap();
        let coeffs = c.raw_coefficients(&s).unwrap();
        assert_eq!(coeffs[nz::ID.0], 1.0);
        assert_eq!(coeffs[nz::ANTI.0], 0.2);
    }

    #[test]
    fn mismatched_adjoints_rejected() {
        let c = parse(r#"{"scheme": "nz", "N": 10, "coefficients": {"chain": 0.2, "anti": 0.1}}"#)
            .unwrap();
        let err = c.raw_coefficients(&c.descriptor().unwrap()).unwrap_err();
        assert!(err.to_string().contains("must match"), "{err}");
    }

    #[test]
    fn unknown_relation_rejected() {
        let c = parse(r#"{"scheme": "johnson", "N": 10, "coefficients": {"recip": 0.2}}"#).unwrap();
        let err = c.raw_coefficients(&c.descriptor().unwrap()).unwrap_err();
        assert!(err.to_string().contains("unknown relation 'recip'"), "{err}");
    }

    #[test]
    fn parse_error_has_line() {
        let err = parse("{\n  \"scheme\": \"nz\",\n  \"N\": ,\n}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("{other}"),
        }
        assert!(parse(r#"{"scheme": "nz", "N": 5, "sed": 3}"#).is_err());
    }

    #[test]
    fn balanced_covariance() {
        let mut c = RunConfig::new(SchemeKind::NykampZhao, 100);
        c.coefficients.insert("recip".into(), 0.75);
        c.balance_target = Some(0.0);
        let alg = IntersectionAlgebra::new(&c.descriptor().unwrap()).unwrap();
        let cov = c.covariance(&alg).unwrap();
        assert!((cov.coeffs[nz::DISJ.0] + 1.75 / 9506.0).abs() < 1e-15);
    }

    #[test]
    fn manifest_is_a_config() {
        let mut c = RunConfig::new(SchemeKind::Johnson, 8);
        c.manifest = Some(RunRecord {
            version: "0".into(),
            resolved_coefficients: vec![1.0, 0.0, 0.0],
            sqrt_coefficients: vec![1.0, 0.0, 0.0],
            threshold: 1.28,
            rng: "chacha20".into(),
            files: vec!["a.csv".into()],
        });
        let back = parse(&c.to_json_pretty().unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
