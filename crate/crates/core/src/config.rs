//! Flat `key = value` parameter files.
//!
//! ```text
//! # colony and quorum
//! n_total = 200
//! rho = 0.25
//! theta = 30
//! alpha_sa = 0.01
//! ...
//! ```
//!
//! Every rate and colony key is required; unknown keys are rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ColonyConfig, RateParams};

/// Keys accepted in a parameter file, in canonical output order.
pub const KEYS: [&str; 11] = [
    "alpha_sa", "alpha_as", "alpha_al", "alpha_ls", "alpha_lc", "alpha_cs", "beta_ls", "beta_cs", "n_total", "rho",
    "theta",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlatConfig {
    alpha_sa: f64,
    alpha_as: f64,
    alpha_al: f64,
    alpha_ls: f64,
    alpha_lc: f64,
    alpha_cs: f64,
    beta_ls: f64,
    beta_cs: f64,
    n_total: f64,
    rho: f64,
    theta: f64,
}

/// A validated parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub params: RateParams,
    pub colony: ColonyConfig,
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.colony.validate()
    }

    /// Canonical file text; parses back to the same values.
    pub fn to_config_string(&self) -> String {
        let p = &self.params;
        let c = &self.colony;
        let values = [
            p.alpha_sa, p.alpha_as, p.alpha_al, p.alpha_ls, p.alpha_lc, p.alpha_cs, p.beta_ls, p.beta_cs, c.n_total,
            c.rho, c.theta,
        ];
        KEYS.iter()
            .zip(values)
            .map(|(k, v)| format!("{k} = {v:?}\n"))
            .collect()
    }
}

fn parse_table(text: &str) -> Result<toml::Table> {
    text.parse::<toml::Table>()
        .map_err(|e| Error::ConfigParse(e.message().to_string()))
}

fn parse_value(key: &str, raw: &str) -> Result<f64> {
    raw.trim()
        .parse::<f64>()
        .map_err(|_| Error::ConfigParse(format!("value for `{key}` is not a number: `{raw}`")))
}

/// Splits a `key=value` override.
pub fn parse_override(item: &str) -> Result<(String, f64)> {
    let (key, value) = item
        .split_once('=')
        .ok_or_else(|| Error::ConfigParse(format!("override `{item}` is not of the form key=value")))?;
    let key = key.trim();
    if !KEYS.contains(&key) {
        return Err(Error::ConfigParse(format!("unknown key `{key}`")));
    }
    Ok((key.to_string(), parse_value(key, value)?))
}

/// Parses and validates a parameter file, applying overrides on top.
pub fn parse_config(text: &str, overrides: &[(String, f64)]) -> Result<ModelConfig> {
    let mut table = parse_table(text)?;
    for (key, value) in overrides {
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::ConfigParse(format!("unknown key `{key}`")));
        }
        table.insert(key.clone(), toml::Value::Float(*value));
    }
    let flat: FlatConfig = table
        .try_into()
        .map_err(|e: toml::de::Error| Error::ConfigParse(e.message().to_string()))?;
    let cfg = ModelConfig {
        params: RateParams {
            alpha_sa: flat.alpha_sa,
            alpha_as: flat.alpha_as,
            alpha_al: flat.alpha_al,
            alpha_ls: flat.alpha_ls,
            alpha_lc: flat.alpha_lc,
            alpha_cs: flat.alpha_cs,
            beta_ls: flat.beta_ls,
            beta_cs: flat.beta_cs,
        },
        colony: ColonyConfig {
            n_total: flat.n_total,
            rho: flat.rho,
            theta: flat.theta,
        },
    };
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::presets;

    const FIG2: &str = "# comment\nalpha_sa = 0.01\nalpha_as = 0.24\nalpha_al = 0.007\nalpha_ls = 0.018\n\
        alpha_lc = 0.15\nalpha_cs = 0.07\nbeta_ls = 0.049\nbeta_cs = 0.079\nn_total = 200\nrho = 0.25\ntheta = 30 # quorum\n";

    #[test]
    fn parses_integers_and_comments() {
        let cfg = parse_config(FIG2, &[]).unwrap();
        assert_eq!(cfg.params, presets::fig2_rates());
        assert_eq!(cfg.colony, presets::colony(200.0, 30.0));
    }

    #[test]
    fn round_trips_through_canonical_text() {
        let cfg = parse_config(FIG2, &[]).unwrap();
        assert_eq!(parse_config(&cfg.to_config_string(), &[]).unwrap(), cfg);
    }

    #[test]
    fn overrides_replace_values() {
        let o = parse_override(" n_total = 150").unwrap();
        let cfg = parse_config(FIG2, &[o]).unwrap();
        assert_eq!(cfg.colony.n_total, 150.0);
    }

    #[test]
    fn rejects_unknown_missing_and_malformed() {
        let unknown = format!("{FIG2}gamma = 1\n");
        assert!(matches!(parse_config(&unknown, &[]), Err(Error::ConfigParse(_))));
        let missing = FIG2.replace("beta_cs = 0.079\n", "");
        assert!(matches!(parse_config(&missing, &[]), Err(Error::ConfigParse(_))));
        assert!(matches!(parse_config("alpha_sa = = 1", &[]), Err(Error::ConfigParse(_))));
        let text = FIG2.replace("alpha_sa = 0.01", "alpha_sa = \"fast\"");
        assert!(matches!(parse_config(&text, &[]), Err(Error::ConfigParse(_))));
        assert!(parse_override("gamma=1").is_err());
        assert!(parse_override("theta").is_err());
        assert!(parse_override("theta=x").is_err());
    }

    #[test]
    fn validation_errors_are_distinct_from_parse_errors() {
        let text = FIG2.replace("rho = 0.25", "rho = 1.5");
        assert!(matches!(
            parse_config(&text, &[]),
            Err(Error::InvalidParameter { name: "rho", .. })
        ));
    }
}
