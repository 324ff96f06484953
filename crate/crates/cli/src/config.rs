//! Instance files: flat TOML with one optional section per suite.
//!
//! ```toml
//! name = "flagship"
//! p = 2
//! l = 2
//! lambda = "1 - z"
//! ring = { ring = "cyclotomic-quotient", p = 2, l = 2 }
//! lift = { ring = "cyclotomic-lift", p = 2, l = 2 }
//! window = 3
//! order = 8
//!
//! [lemma2]
//! variables = 3
//! ```
//!
//! Unknown keys are rejected everywhere. Omitted keys take the defaults of
//! the section structs below.

use std::path::Path;

use serde::Deserialize;
use wittlab_core::dualitylab::InstanceSpec;
use wittlab_core::exactring::RingDescriptor;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("{path}: {reason}")]
    Parse { path: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub name: String,
    pub p: u64,
    pub l: u32,
    pub lambda: String,
    pub ring: RingDescriptor,
    pub lift: RingDescriptor,
    #[serde(default = "defaults::window")]
    pub window: usize,
    #[serde(default = "defaults::order")]
    pub order: usize,
    #[serde(default, rename = "witt-axioms")]
    pub witt_axioms: WittAxioms,
    #[serde(default, rename = "series-identities")]
    pub series_identities: SeriesIdentities,
    #[serde(default)]
    pub lemma2: Symbolic,
    #[serde(default)]
    pub pairing: Pairing,
    #[serde(default = "defaults::diagram")]
    pub diagram: Symbolic,
}

mod defaults {
    use super::Symbolic;

    pub fn window() -> usize {
        3
    }
    pub fn order() -> usize {
        8
    }
    pub fn diagram() -> Symbolic {
        Symbolic { variables: 3, order: Some(6), points_order: None }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WittAxioms {
    /// Depth of the structure tables checked symbolically.
    pub depth: usize,
    /// Random pairs and triples per axiom.
    pub trials: usize,
    /// Length of the random vectors.
    pub length: usize,
}

impl Default for WittAxioms {
    fn default() -> Self {
        Self { depth: 4, trials: 200, length: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SeriesIdentities {
    /// Length of the symbolic Witt vectors.
    pub length: usize,
    /// `X`-degree of one-variable identities; `None` uses the instance order.
    pub order: Option<usize>,
    /// Total degree of two-variable identities.
    pub order2: usize,
    /// Degree of the integrality checks on `E_p(X)` and `E_p(U, Λ; X)`.
    pub integrality_order: usize,
    /// Total degree of the symmetric 2-cocycle check.
    pub cocycle_order: usize,
}

impl Default for SeriesIdentities {
    fn default() -> Self {
        Self { length: 3, order: None, order2: 6, integrality_order: 12, cocycle_order: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Symbolic {
    /// Length of the generic Witt vector.
    pub variables: usize,
    pub order: Option<usize>,
    /// Series order of the pointwise kernel check; `None` skips it.
    pub points_order: Option<usize>,
}

impl Default for Symbolic {
    fn default() -> Self {
        Self { variables: 3, order: None, points_order: Some(4) }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Pairing {
    /// Length of the generic vectors in the well-definedness check.
    pub variables: usize,
    pub order: Option<usize>,
}

impl Default for Pairing {
    fn default() -> Self {
        Self { variables: 2, order: None }
    }
}

impl InstanceFile {
    pub fn parse(text: &str, path: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse { path: path.into(), reason: e.to_string() })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let shown = path.display().to_string();
        let text =
            std::fs::read_to_string(path).map_err(|e| ConfigError::Io { path: shown.clone(), reason: e.to_string() })?;
        Self::parse(&text, &shown)
    }

    pub fn spec(&self) -> InstanceSpec {
        InstanceSpec {
            name: self.name.clone(),
            p: self.p,
            l: self.l,
            lambda: self.lambda.clone(),
            ring: self.ring.clone(),
            lift: self.lift.clone(),
            window: self.window,
            order: self.order,
        }
    }

    /// Applies `--order` and `--window`; the order override reaches every suite.
    pub fn override_with(&mut self, order: Option<usize>, window: Option<usize>) {
        if let Some(n) = order {
            self.order = n;
            self.series_identities.order = Some(n);
            self.lemma2.order = Some(n);
            self.diagram.order = Some(n);
            self.pairing.order = Some(n);
        }
        if let Some(w) = window {
            self.window = w;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "char-p"
p = 2
l = 2
lambda = "1"
ring = { ring = "modular", n = 2 }
lift = { ring = "p-local-rationals", p = 2 }
"#;

    #[test]
    fn defaults_fill_missing_sections() {
        let f = InstanceFile::parse(MINIMAL, "m").unwrap();
        assert_eq!((f.window, f.order), (3, 8));
        assert_eq!(f.diagram.order, Some(6));
        assert_eq!(f.lemma2, Symbolic::default());
        assert_eq!(f.spec().ring, RingDescriptor::Modular { n: 2 });
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = format!("{MINIMAL}colour = 3\n");
        assert!(matches!(InstanceFile::parse(&bad, "m"), Err(ConfigError::Parse { .. })));
        let bad = format!("{MINIMAL}[lemma2]\nvars = 3\n");
        assert!(InstanceFile::parse(&bad, "m").is_err());
        let bad = MINIMAL.replace("modular", "octonions");
        assert!(InstanceFile::parse(&bad, "m").is_err());
    }

    #[test]
    fn overrides_reach_every_suite() {
        let mut f = InstanceFile::parse(MINIMAL, "m").unwrap();
        f.override_with(Some(5), Some(2));
        assert_eq!((f.order, f.window, f.diagram.order, f.lemma2.order), (5, 2, Some(5), Some(5)));
    }
}
