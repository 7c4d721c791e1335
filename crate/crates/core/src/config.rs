//! JSON schedule configuration.
//!
//! ```json
//! {"K": 2, "depth": 3, "seed": 7, "smallness": "geometric",
//!  "levels": [{"M": 4, "eps": 0.36, "d": "example2"}]}
//! ```
//!
//! `d` is a number, `"example2"` (`d_j = (j+1)/j`) or `{"sharpness_q": q}`
//! (`d_j = ((j+1)/j)^e` for the sharpness exponent `e`). A single level is
//! repeated for every generation; otherwise `levels` lists one entry per
//! generation and must cover `depth`.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::cantor::{
    example2_multiplier, sharpness_exponent, CantorTree, LevelSchedule, Smallness,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Multiplier {
    Value(f64),
    Named(NamedMultiplier),
    Sharpness { sharpness_q: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedMultiplier {
    Example2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelConfig {
    #[serde(rename = "M")]
    pub branching: usize,
    pub eps: f64,
    pub d: Multiplier,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    #[serde(rename = "K")]
    pub k: f64,
    pub depth: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub smallness: Smallness,
    pub levels: Vec<LevelConfig>,
}

fn field(path: &str, reason: impl std::fmt::Display) -> Error {
    Error::Config(format!("{path}: {reason}"))
}

impl ScheduleConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Structural checks plus the per-level schedule invariants.
    pub fn validate(&self) -> Result<()> {
        if !(self.k.is_finite() && self.k >= 1.0) {
            return Err(field("/K", format!("{} must be ≥ 1", self.k)));
        }
        if self.levels.is_empty() {
            return Err(field("/levels", "at least one level is required"));
        }
        if self.levels.len() > 1 && self.levels.len() < self.depth {
            return Err(field(
                "/levels",
                format!(
                    "{} levels do not cover depth {}",
                    self.levels.len(),
                    self.depth
                ),
            ));
        }
        self.schedule()?;
        Ok(())
    }

    fn level_config(&self, j: usize) -> (usize, &LevelConfig) {
        if self.levels.len() == 1 {
            (0, &self.levels[0])
        } else {
            (j - 1, &self.levels[j - 1])
        }
    }

    /// The level schedules for generations `1..=depth`.
    pub fn schedule(&self) -> Result<Vec<LevelSchedule>> {
        (1..=self.depth)
            .map(|j| {
                let (i, lc) = self.level_config(j);
                let at = |name: &str| format!("/levels/{i}/{name}");
                let d = match lc.d {
                    Multiplier::Value(v) => v,
                    Multiplier::Named(NamedMultiplier::Example2) => example2_multiplier(j),
                    Multiplier::Sharpness { sharpness_q } => {
                        let e = sharpness_exponent(self.k, sharpness_q)
                            .map_err(|e| field(&at("d"), e))?;
                        example2_multiplier(j).powf(e)
                    }
                };
                let level = LevelSchedule::from_eps(lc.branching, lc.eps, d)
                    .map_err(|e| field(&at("eps"), e))?;
                level
                    .validate(j, self.smallness)
                    .map_err(|e| field(&format!("/levels/{i}"), e))?;
                Ok(level)
            })
            .collect()
    }

    /// Builds the tree and, in geometric mode, realizes its centers.
    pub fn tree(&self) -> Result<CantorTree> {
        let tree = CantorTree::build(self.k, &self.schedule()?, self.depth, self.smallness)?;
        if self.smallness == Smallness::Geometric {
            tree.realize_centers(self.seed)
        } else {
            Ok(tree)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"{"K": 2, "depth": 3, "seed": 7, "smallness": "geometric",
        "levels": [{"M": 4, "eps": 0.36, "d": "example2"}]}"#;

    fn config_error(text: &str) -> String {
        match ScheduleConfig::from_json(text) {
            Err(Error::Config(m)) => m,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn parses_a_repeated_level() {
        let cfg = ScheduleConfig::from_json(GOOD).unwrap();
        assert_eq!(cfg.schedule().unwrap().len(), 3);
        assert_eq!(
            cfg.levels[0].d,
            Multiplier::Named(NamedMultiplier::Example2)
        );
    }

    #[test]
    fn multiplier_forms() {
        let v: Multiplier = serde_json::from_str("1.5").unwrap();
        assert_eq!(v, Multiplier::Value(1.5));
        let s: Multiplier = serde_json::from_str(r#"{"sharpness_q": 3}"#).unwrap();
        assert_eq!(s, Multiplier::Sharpness { sharpness_q: 3.0 });
    }

    #[test]
    fn errors_name_the_offending_field() {
        assert!(config_error(&GOOD.replace("\"K\": 2", "\"K\": 0.5")).starts_with("/K:"));
        assert!(config_error(r#"{"K": 2, "depth": 1, "levels": []}"#).starts_with("/levels:"));
        let short = r#"{"K": 2, "depth": 3, "levels": [
            {"M": 4, "eps": 0.36, "d": 1}, {"M": 4, "eps": 0.36, "d": 1}]}"#;
        assert!(config_error(short).starts_with("/levels:"));
        let bad_eps = GOOD.replace("0.36", "1.5");
        assert!(config_error(&bad_eps).starts_with("/levels/0/eps:"));
        let strict = GOOD.replace("geometric", "strict");
        assert!(config_error(&strict).starts_with("/levels/0:"));
    }

    #[test]
    fn unknown_fields_are_rejected_with_a_position() {
        let m = config_error(&GOOD.replace("\"seed\"", "\"sead\""));
        assert!(m.contains("line 1") && m.contains("sead"), "{m}");
    }
}
