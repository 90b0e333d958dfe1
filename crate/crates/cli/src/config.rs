//! Run configuration: a TOML file, with dotted-key overrides from the command line.

use std::collections::BTreeMap;
use std::path::Path;

use casimir_core::geometry::Geometry;
use casimir_core::hk_coeff::{BoundaryCondition, FieldKind};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeometryConfig {
    Interval {
        length: f64,
    },
    Box {
        lengths: Vec<f64>,
    },
    Ball {
        dim: usize,
        radius: f64,
    },
    Generic {
        dim: usize,
        volume: f64,
        boundary_volume: f64,
        /// ∫ scalar curvature over the region
        #[serde(default)]
        curvature_integral: f64,
        /// ∫ Tr L over the boundary
        #[serde(default)]
        mean_curvature_integral: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldName {
    Scalar,
    PForm,
    Electromagnetic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: Format,
    pub path: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Largest accepted bound on a headline value, absolute
    pub max_bound: Option<f64>,
    /// Largest accepted bound relative to the value
    pub max_relative_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatKernelConfig {
    /// Sample times; a log grid over the usable range when empty
    #[serde(default)]
    pub times: Vec<f64>,
    pub n_max: Option<usize>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaConfig {
    #[serde(default)]
    pub s_values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShellConfig {
    /// Scale factors of the outer copy
    #[serde(default)]
    pub r_list: Vec<f64>,
    /// Externally supplied Q with its uncertainty
    pub q: Option<f64>,
    #[serde(default)]
    pub q_bound: f64,
    /// Externally supplied ĉ_n, keyed by n
    #[serde(default)]
    pub c_hat: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    #[serde(default = "default_field")]
    pub field: FieldName,
    /// Form degree, used when field = "p-form"
    pub p: Option<usize>,
    pub bc: String,
    #[serde(default)]
    pub temperatures: Vec<f64>,
    #[serde(default = "default_mu")]
    pub mu: f64,
    pub omega_max: Option<f64>,
    #[serde(default)]
    pub lambdas: Vec<f64>,
    #[serde(default)]
    pub heat_kernel: HeatKernelConfig,
    #[serde(default)]
    pub zeta: ZetaConfig,
    pub shell: Option<ShellConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_field() -> FieldName {
    FieldName::Scalar
}

fn default_mu() -> f64 {
    1.0
}

/// Read the file (if any), apply `key=value` overrides and deserialize.
pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<RunConfig, ConfigError> {
    let mut table = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Io { path: p.display().to_string(), source })?;
            text.parse::<toml::Table>().map_err(|e| ConfigError::Parse(e.to_string()))?
        }
        None => toml::Table::new(),
    };
    for (key, value) in overrides {
        set_dotted(&mut table, key, parse_value(value))?;
    }
    toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))
}

/// A TOML literal if it parses as one, otherwise a bare string.
fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

fn set_dotted(table: &mut toml::Table, key: &str, value: toml::Value) -> Result<(), ConfigError> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().filter(|s| !s.is_empty()).ok_or_else(|| ConfigError::Parse(format!("empty key in '{key}'")))?;
    let mut cur = table;
    for part in parts {
        let entry = cur.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry.as_table_mut().ok_or_else(|| ConfigError::Parse(format!("'{part}' in '{key}' is not a table")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

/// Inputs after alias normalization and range checks.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub geometry: Geometry,
    pub field: FieldKind,
    pub bc: BoundaryCondition,
}

impl RunConfig {
    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let invalid = |m: String| ConfigError::Invalid(m);
        let geometry = match &self.geometry {
            GeometryConfig::Interval { length } => Geometry::interval(*length),
            GeometryConfig::Box { lengths } => Geometry::cuboid(lengths),
            GeometryConfig::Ball { dim, radius } => Geometry::ball(*dim, *radius),
            GeometryConfig::Generic { dim, volume, boundary_volume, curvature_integral, mean_curvature_integral } => {
                Geometry::generic(*dim, *volume, *boundary_volume, *curvature_integral, *mean_curvature_integral)
            }
        }
        .map_err(|e| invalid(e.to_string()))?;
        let field = match (self.field, self.p) {
            (FieldName::Scalar, None) => FieldKind::Scalar,
            (FieldName::Electromagnetic, None) => FieldKind::Electromagnetic,
            (FieldName::PForm, Some(p)) if p <= geometry.dim() => FieldKind::PForm(p),
            (FieldName::PForm, Some(p)) => return Err(invalid(format!("p = {p} exceeds D = {}", geometry.dim()))),
            (FieldName::PForm, None) => return Err(invalid("field = \"p-form\" needs p".into())),
            (_, Some(_)) => return Err(invalid("p is only meaningful for field = \"p-form\"".into())),
        };
        let bc = BoundaryCondition::parse(&self.bc).map_err(|e| invalid(e.to_string()))?;
        let alias = self.bc.to_ascii_lowercase().replace('_', "-");
        let functions = matches!(field, FieldKind::Scalar | FieldKind::PForm(0));
        let one_forms = matches!(field, FieldKind::Electromagnetic | FieldKind::PForm(1));
        match alias.as_str() {
            "dirichlet" | "neumann" if !functions => {
                return Err(invalid(format!("'{}' applies to scalar fields, not {field}", self.bc)));
            }
            "perfectly-conducting" | "infinitely-permeable" if !one_forms => {
                return Err(invalid(format!("'{}' applies to one-forms and the electromagnetic field, not {field}", self.bc)));
            }
            _ => {}
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(invalid(format!("mu must be positive, got {}", self.mu)));
        }
        if let Some(t) = self.temperatures.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
            return Err(invalid(format!("temperatures must be nonnegative, got {t}")));
        }
        if let Some(l) = self.lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return Err(invalid(format!("cut-off parameters must be positive, got {l}")));
        }
        if let Some(w) = self.omega_max.filter(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(invalid(format!("omega_max must be positive, got {w}")));
        }
        if let Some(shell) = &self.shell {
            if shell.r_list.windows(2).any(|w| !(w[1] > w[0])) || shell.r_list.iter().any(|r| !(*r > 1.0)) {
                return Err(invalid("shell.r_list must increase and exceed 1".into()));
            }
            for key in shell.c_hat.keys() {
                key.parse::<usize>().map_err(|_| invalid(format!("shell.c_hat key '{key}' is not an order")))?;
            }
        }
        Ok(Resolved { geometry, field, bc })
    }

    /// SHA-256 of the canonical JSON form, after overrides.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with(overrides: &[(&str, &str)]) -> Result<RunConfig, ConfigError> {
        let o: Vec<_> = overrides.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        load(None, &o)
    }

    #[test]
    fn overrides_build_a_config() {
        let c = with(&[("geometry.kind", "interval"), ("geometry.length", "2.5"), ("bc", "dirichlet"), ("temperatures", "[0.1, 1]")])
            .unwrap();
        assert_eq!(c.geometry, GeometryConfig::Interval { length: 2.5 });
        assert_eq!(c.temperatures, vec![0.1, 1.0]);
        assert_eq!(c.mu, 1.0);
        let r = c.resolve().unwrap();
        assert_eq!(r.bc, BoundaryCondition::Relative);
    }

    #[test]
    fn alias_compatibility() {
        let base = [("geometry.kind", "ball"), ("geometry.dim", "3"), ("geometry.radius", "1")];
        let em = |bc| {
            let mut o = base.to_vec();
            o.push(("field", "electromagnetic"));
            o.push(("bc", bc));
            with(&o).unwrap().resolve()
        };
        assert_eq!(em("perfectly-conducting").unwrap().bc, BoundaryCondition::Relative);
        assert!(matches!(em("dirichlet"), Err(ConfigError::Invalid(_))));
        let mut o = base.to_vec();
        o.push(("bc", "infinitely-permeable"));
        assert!(matches!(with(&o).unwrap().resolve(), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn hash_tracks_content() {
        let a = with(&[("geometry.kind", "interval"), ("geometry.length", "1"), ("bc", "relative")]).unwrap();
        let b = with(&[("geometry.kind", "interval"), ("geometry.length", "1"), ("bc", "relative"), ("mu", "1.0")]).unwrap();
        let c = with(&[("geometry.kind", "interval"), ("geometry.length", "2"), ("bc", "relative")]).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(with(&[("geometry.kind", "torus")]), Err(ConfigError::Parse(_))));
        assert!(matches!(with(&[("bogus", "1")]), Err(ConfigError::Parse(_))));
        let bad_mu = with(&[("geometry.kind", "interval"), ("geometry.length", "1"), ("bc", "relative"), ("mu", "-1")]).unwrap();
        assert!(matches!(bad_mu.resolve(), Err(ConfigError::Invalid(_))));
    }
}
