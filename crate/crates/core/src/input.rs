//! Input formats: series literals and the extension specification file.
//!
//! A series literal is a JSON array of [exponent, coefficient] pairs, e.g.
//! [[-7, 1], [2, 4]]; coefficients are arbitrary integers reduced mod p on
//! ingestion. An extension file is a JSON object with fields "p", "kind"
//! ("abelian" or "cyclic"), "beta1", "beta2" and an optional "precision".

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::extension::ExtensionKind;
use crate::fp::Prime;
use crate::series::LaurentSeries;

#[derive(Debug, Clone, Deserialize)]
pub struct ExtensionSpec {
    pub p: u32,
    pub kind: String,
    pub beta1: Vec<(i64, i64)>,
    pub beta2: Vec<(i64, i64)>,
    #[serde(default)]
    pub precision: Option<i64>,
}

impl ExtensionSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("bad extension spec: {e}")))
    }

    pub fn prime(&self) -> Result<Prime> {
        Prime::new(self.p)
    }

    pub fn extension_kind(&self) -> Result<ExtensionKind> {
        ExtensionKind::parse(&self.kind)
    }

    pub fn beta1_series(&self) -> Result<LaurentSeries> {
        series_from_pairs(self.prime()?, &self.beta1)
    }

    pub fn beta2_series(&self) -> Result<LaurentSeries> {
        series_from_pairs(self.prime()?, &self.beta2)
    }
}

pub fn series_from_pairs(p: Prime, pairs: &[(i64, i64)]) -> Result<LaurentSeries> {
    if pairs.is_empty() {
        return Err(Error::InvalidInput("empty series literal".into()));
    }
    Ok(LaurentSeries::from_pairs(p, pairs))
}

/// Parse an inline series literal such as "[[-7,1],[2,4]]".
pub fn parse_series_literal(p: Prime, text: &str) -> Result<LaurentSeries> {
    let pairs: Vec<(i64, i64)> = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("bad series literal {text:?}: {e}")))?;
    series_from_pairs(p, &pairs)
}
