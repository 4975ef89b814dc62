//! Run configuration and report serialization plumbing.
//!
//! Reports are JSON objects, one per line in JSONL streams; summary
//! tables are CSV. Floats are written with Rust's shortest round-trip
//! formatting, which is deterministic, so identical inputs and seeds
//! produce byte-identical files.

use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::disk::{RadialGrid, DEFAULT_ANGULAR_COUNT, DEFAULT_RADII};
use crate::series::DEFAULT_ORDER;
use crate::{Error, Result};

/// Complex values serialize as a two-element array [re, im].
pub mod c64_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex64, D::Error> {
        let pair = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(pair[0], pair[1]))
    }
}

/// Same encoding for optional complex values; absent fields stay absent.
pub mod c64_pair_opt {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        c: &Option<Complex64>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        c.map(|v| [v.re, v.im]).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Complex64>, D::Error> {
        let pair = Option::<[f64; 2]>::deserialize(d)?;
        Ok(pair.map(|p| Complex64::new(p[0], p[1])))
    }
}

/// Knobs shared by the CLI commands. A config file supplies any subset;
/// command-line flags override file values, which override defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default = "default_radii")]
    pub radii: Vec<f64>,
    #[serde(default = "default_angles")]
    pub angles: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Conclusion violations beyond this are failures.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Margins within this band of zero are boundary cases.
    #[serde(default = "default_hypothesis_band")]
    pub hypothesis_band: f64,
}

fn default_order() -> usize {
    DEFAULT_ORDER
}
fn default_radii() -> Vec<f64> {
    DEFAULT_RADII.to_vec()
}
fn default_angles() -> usize {
    DEFAULT_ANGULAR_COUNT
}
fn default_trials() -> usize {
    1000
}
fn default_tol() -> f64 {
    1e-6
}
fn default_hypothesis_band() -> f64 {
    1e-9
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            order: default_order(),
            radii: default_radii(),
            angles: default_angles(),
            seed: 0,
            trials: default_trials(),
            tol: default_tol(),
            hypothesis_band: default_hypothesis_band(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 1 {
            return Err(Error::Config("order must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Config("tol must be positive".into()));
        }
        if !(self.hypothesis_band > 0.0 && self.hypothesis_band.is_finite()) {
            return Err(Error::Config("hypothesis_band must be positive".into()));
        }
        self.grid().map(|_| ())
    }

    pub fn grid(&self) -> Result<RadialGrid> {
        RadialGrid::new(self.radii.clone(), self.angles)
    }
}

/// One compact JSON line. Fails on non-finite floats instead of writing
/// the `null` serde_json would silently substitute.
pub fn jsonl_line<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    ensure_finite(&v)?;
    Ok(serde_json::to_string(&v)?)
}

// serde_json encodes non-finite floats as null, so a null anywhere means
// either NaN leaked in or an absent Option was not skipped. Reports use
// skip_serializing_if for optional fields, so both are defects here.
fn ensure_finite(v: &serde_json::Value) -> Result<()> {
    match v {
        serde_json::Value::Null => Err(Error::Config(
            "null in report (non-finite float or unskipped optional)".into(),
        )),
        serde_json::Value::Array(items) => items.iter().try_for_each(ensure_finite),
        serde_json::Value::Object(map) => map.values().try_for_each(ensure_finite),
        _ => Ok(()),
    }
}

pub fn write_lines(path: &Path, lines: &[String]) -> Result<()> {
    let mut out = std::fs::File::create(path)?;
    for line in lines {
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// CSV cell for a float; empty cell for absent values.
pub fn csv_cell(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v}"),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_overrides() {
        let cfg: RunConfig = serde_json::from_str(r#"{"seed": 7, "angles": 512}"#).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.angles, 512);
        assert_eq!(cfg.order, DEFAULT_ORDER);
        assert_eq!(cfg.radii, DEFAULT_RADII.to_vec());
        cfg.validate().unwrap();
    }

    #[test]
    fn config_rejects_unknown_fields() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"sede": 7}"#).is_err());
    }

    #[test]
    fn jsonl_rejects_non_finite() {
        #[derive(Serialize)]
        struct Bad {
            x: f64,
        }
        assert!(jsonl_line(&Bad { x: f64::NAN }).is_err());
        assert!(jsonl_line(&Bad { x: 1.5 }).is_ok());
    }
}
