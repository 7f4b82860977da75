//! JSON run configuration.
//!
//! ```json
//! { "chain": [1.0, 0.5, 0.0], "nu1": [1, 0], "nu2": {"angle": 3.14159},
//!   "method": "all", "steps": 100000, "seed": 7 }
//! ```
//!
//! Exactly one of `coins` (interior `[[re, im], [re, im]]` pairs, L then R)
//! and `chain` (full `p_0..=p_{n+1}` or interior `p_1..=p_n`) is required.
//! `nu1`, `nu2` default to `1` and `-1`.

use std::path::Path;

use serde::Deserialize;

use qwpath_core::chain::coins_from_chain;
use qwpath_core::{BirthDeathChain, CoinSpec, Complex64};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ComplexInput {
    Pair([f64; 2]),
    Angle { angle: f64 },
}

impl ComplexInput {
    pub fn value(self) -> Complex64 {
        match self {
            ComplexInput::Pair([re, im]) => Complex64::new(re, im),
            ComplexInput::Angle { angle } => Complex64::from_polar(1.0, angle),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub coins: Option<Vec<[[f64; 2]; 2]>>,
    pub chain: Option<Vec<f64>>,
    /// Per-vertex coin phases for `chain` input.
    pub phases: Option<Vec<f64>>,
    pub nu1: Option<ComplexInput>,
    pub nu2: Option<ComplexInput>,
    pub method: Option<String>,
    pub steps: Option<usize>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn nus(&self) -> (Complex64, Complex64) {
        (
            self.nu1.map_or(Complex64::new(1.0, 0.0), ComplexInput::value),
            self.nu2.map_or(Complex64::new(-1.0, 0.0), ComplexInput::value),
        )
    }

    /// The validated walk described by this configuration.
    pub fn walk(&self) -> Result<CoinSpec, CliError> {
        let (nu1, nu2) = self.nus();
        match (&self.coins, &self.chain) {
            (Some(_), Some(_)) => Err(CliError::Config(
                "give exactly one of \"coins\" and \"chain\", not both".into(),
            )),
            (None, None) => Err(CliError::Config(
                "missing input: give \"coins\" or \"chain\"".into(),
            )),
            (Some(coins), None) => {
                if self.phases.is_some() {
                    return Err(CliError::Config("\"phases\" only applies to \"chain\" input".into()));
                }
                let w = coins
                    .iter()
                    .map(|[l, r]| [Complex64::new(l[0], l[1]), Complex64::new(r[0], r[1])])
                    .collect();
                Ok(CoinSpec::new(nu1, nu2, w)?)
            }
            (None, Some(p)) => {
                let chain = chain_from_array(p)?;
                Ok(coins_from_chain(&chain, nu1, nu2, self.phases.as_deref())?)
            }
        }
    }
}

/// A full array is recognized by `p_0 = 1` and `p_{n+1} = 0`; anything else is interior.
pub fn chain_from_array(p: &[f64]) -> Result<BirthDeathChain, CliError> {
    let full = p.len() >= 2 && p[0] == 1.0 && p[p.len() - 1] == 0.0;
    Ok(if full {
        BirthDeathChain::new(p.to_vec())?
    } else {
        BirthDeathChain::from_interior(p)?
    })
}
