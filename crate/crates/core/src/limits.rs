use serde::{Deserialize, Serialize};

pub const MONOMIAL_CEILING_ENV: &str = "NVAR_MONOMIAL_CEILING";
pub const SUBSTITUTION_CEILING_ENV: &str = "NVAR_SUBSTITUTION_CEILING";

/// Resource ceilings for expansion and exhaustive sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Limits {
    /// Upper bound on monomial products formed by a single expansion step.
    pub monomial_ceiling: u128,
    /// Upper bound on matrix-unit substitutions in a deterministic PI check.
    pub substitution_ceiling: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            monomial_ceiling: 10_000_000,
            substitution_ceiling: 100_000_000,
        }
    }
}

impl Limits {
    /// Defaults, overridden by `NVAR_MONOMIAL_CEILING` and
    /// `NVAR_SUBSTITUTION_CEILING` when those parse as integers.
    pub fn from_env() -> Self {
        let read = |key: &str| std::env::var(key).ok().and_then(|v| v.trim().parse::<u128>().ok());
        let mut limits = Limits::default();
        if let Some(v) = read(MONOMIAL_CEILING_ENV) {
            limits.monomial_ceiling = v;
        }
        if let Some(v) = read(SUBSTITUTION_CEILING_ENV) {
            limits.substitution_ceiling = v;
        }
        limits
    }
}
