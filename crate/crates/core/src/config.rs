//! Embedded defaults (`config/defaults.toml`).

use std::sync::OnceLock;

use serde::Deserialize;

use crate::analyze::Thresholds;
use crate::error::{Error, Result};
use crate::sim::{CalibrationTargets, CostModel, RecognitionModel};

const DEFAULTS_TOML: &str = include_str!("../config/defaults.toml");

#[derive(Debug, Clone, Deserialize)]
pub struct Defaults {
    pub schema: SchemaDefaults,
    pub analyzer: AnalyzerDefaults,
    pub cost: CostModel,
    pub calibration: CalibrationTargets,
    pub recognition: RecognitionModel,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SchemaDefaults {
    pub countries: Vec<String>,
    pub menu_capacity: usize,
}

#[derive(Debug, Clone, Deserialize)]
pub struct AnalyzerDefaults {
    #[serde(flatten)]
    pub thresholds: Thresholds,
    pub coverage_target: f64,
    pub max_menu_entries: usize,
}

impl Defaults {
    pub fn parse(text: &str) -> Result<Self> {
        let defaults: Defaults = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        defaults.cost.validate()?;
        defaults.recognition.validate()?;
        Ok(defaults)
    }
}

/// The built-in defaults, parsed once.
pub fn defaults() -> &'static Defaults {
    static DEFAULTS: OnceLock<Defaults> = OnceLock::new();
    DEFAULTS.get_or_init(|| Defaults::parse(DEFAULTS_TOML).expect("embedded defaults.toml is valid"))
}

/// Raw text of the embedded defaults file.
pub fn defaults_toml() -> &'static str {
    DEFAULTS_TOML
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_defaults_parse() {
        let d = defaults();
        assert_eq!(d.schema.countries.len(), 13);
        assert_eq!(d.analyzer.max_menu_entries, 23);
        assert_eq!(d.calibration.preload_records, 200);
    }

    #[test]
    fn negative_cost_is_rejected() {
        let bad = DEFAULTS_TOML.replace("tap_field = 1.2", "tap_field = -1.0");
        assert!(Defaults::parse(&bad).is_err());
    }
}
