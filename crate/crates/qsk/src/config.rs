//! Suite configuration read from JSON.

use serde::{Deserialize, Serialize};

use crate::suite::{expand_tags, Check};
use crate::QskError;
use qsk_core::genfun::EvalContext;

/// Everything that determines a suite run. Identical configs give
/// byte-identical reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Bases cycled through by point index.
    pub q_grid: Vec<f64>,
    pub seed: u64,
    pub points_per_identity: usize,
    /// Replaces every class tolerance when set. The exactness checks on
    /// collapsed identities keep their own `1e-12`.
    pub tolerance: Option<f64>,
    pub caps: Caps,
    /// Tags from `list-identities` or group names (`ALL`, `POCH`, `LEMMA1`,
    /// `QBINOMIAL`, `CONNECTION`, `SOURCES`, `GENERALIZED`, `ORTHO`,
    /// `COROLLARIES`). An empty list selects nothing.
    pub tags: Vec<String>,
}

/// Truncation and degree limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Term cap of every series.
    pub max_terms: usize,
    /// Largest outer truncation of a generating-function expansion.
    pub outer_cap: usize,
    /// Starting Gauss–Legendre order on `[-1, 1]`.
    pub quad_order: usize,
    /// Largest degree expanded by the connection suite.
    pub connection_degree: usize,
    /// Gram matrices run over `m, n <= gram_degree`.
    pub gram_degree: usize,
    /// Corollary points cycle through `n = 0..=corollary_degree`.
    pub corollary_degree: usize,
}

impl Default for Caps {
    fn default() -> Self {
        let ctx = EvalContext::default();
        Caps {
            max_terms: ctx.max_terms,
            outer_cap: ctx.outer_cap,
            quad_order: ctx.quad_order,
            connection_degree: 8,
            gram_degree: 5,
            corollary_degree: 4,
        }
    }
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            q_grid: vec![0.2, 0.35, 0.5, 0.65, 0.8],
            seed: 0x7153_6b31,
            points_per_identity: 5,
            tolerance: None,
            caps: Caps::default(),
            tags: vec!["ALL".into()],
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self, QskError> {
        let cfg: SuiteConfig = serde_json::from_str(text).map_err(|e| QskError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_tags<S: Into<String>>(mut self, tags: impl IntoIterator<Item = S>) -> Self {
        self.tags = tags.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_points(mut self, points: usize) -> Self {
        self.points_per_identity = points;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), QskError> {
        let bad = |m: &str| Err(QskError::Config(m.into()));
        if self.q_grid.is_empty() {
            return bad("q_grid is empty");
        }
        if self.q_grid.iter().any(|&q| !(q > 0.0 && q < 1.0)) {
            return bad("every q_grid entry must lie in (0, 1)");
        }
        if self.points_per_identity == 0 {
            return bad("points_per_identity must be positive");
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return bad("tolerance must be a positive finite number");
            }
        }
        let c = &self.caps;
        if c.max_terms == 0 || c.outer_cap == 0 || c.quad_order < 2 {
            return bad("caps must be positive and quad_order at least 2");
        }
        self.checks().map(|_| ())
    }

    /// Selected checks in catalog order.
    pub fn checks(&self) -> Result<Vec<Check>, QskError> {
        expand_tags(&self.tags)
    }

    pub fn context(&self) -> EvalContext {
        EvalContext {
            max_terms: self.caps.max_terms,
            outer_cap: self.caps.outer_cap,
            quad_order: self.caps.quad_order,
            ..EvalContext::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_json_fills_defaults() {
        let cfg = SuiteConfig::from_json(r#"{"tags": ["T3"], "seed": 7}"#).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.caps, Caps::default());
        assert_eq!(cfg.q_grid, SuiteConfig::default().q_grid);
    }

    #[test]
    fn rejects_bad_fields() {
        for text in [
            r#"{"q_grid": [1.0]}"#,
            r#"{"q_grid": []}"#,
            r#"{"points_per_identity": 0}"#,
            r#"{"tolerance": -1}"#,
            r#"{"tags": ["T99"]}"#,
            r#"{"unknown": 1}"#,
        ] {
            assert!(matches!(SuiteConfig::from_json(text), Err(QskError::Config(_))), "{text}");
        }
    }

    #[test]
    fn round_trips() {
        let cfg = SuiteConfig::default().with_tags(["C26", "SOURCES"]);
        let back = SuiteConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}
