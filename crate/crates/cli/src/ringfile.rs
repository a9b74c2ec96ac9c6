//! The `.ring` format: structure constants of a finite ring, optionally with
//! a right action on a finite abelian group.

use serde::{Deserialize, Serialize};

use extiso_core::finring::{ActionRing, StructuredRing};
use extiso_core::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionBlock {
    pub invariant_factors: Vec<u64>,
    /// `coefficients[i][j][k]`: `a_i e_j = sum_k c_ijk a_k`
    pub coefficients: Vec<Vec<Vec<u64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingFile {
    pub invariant_factors: Vec<u64>,
    pub one: Vec<u64>,
    /// `alpha[i][j][k]`: `e_i e_j = sum_k alpha_ijk e_k`
    pub alpha: Vec<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<ActionBlock>,
}

impl RingFile {
    pub fn parse(text: &str) -> Result<RingFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("ring file: {e}")))
    }

    pub fn ring(&self) -> Result<StructuredRing> {
        StructuredRing::new(self.invariant_factors.clone(), &self.alpha, self.one.clone())
    }

    pub fn action(&self, ring: &StructuredRing) -> Result<Option<ActionRing>> {
        self.beta
            .as_ref()
            .map(|b| ActionRing::new(ring.clone(), b.invariant_factors.clone(), &b.coefficients))
            .transpose()
    }
}
