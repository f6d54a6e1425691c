//! Constant profiles.
//!
//! The asymptotic constants (mincut threshold 200·ln n/ε², sampling rate
//! C·ln³n/ε², spanner count C·log²n/ε², ...) make every precondition
//! unsatisfiable on graphs with a few dozen vertices. The `desk` profile
//! keeps the same functional forms with small constants so the pipelines do
//! real work at n ≤ 64; `paper` keeps the asymptotic values.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub name: ProfileName,
    /// Rounding mincut threshold: fractional graphs need mincut ≥ c_round·ln n/ε².
    pub c_round: f64,
    /// Weak-edge threshold: λ = c_lambda·ln n/ε² (clamped to ≥ 1).
    pub c_lambda: f64,
    /// Constant C of effective-resistance sampling; the small-ER
    /// de-sparsification precondition is R_eff ≤ ε²/(2C·ln n).
    pub c_sampling: f64,
    /// Spectral sketch rate φ = c_phi·ln³n/ε² (clamped to ≥ 1).
    pub c_phi: f64,
    /// Candidate-pair threshold R_eff ≤ ε²/(c_ehat·ln²n) for the sketch pipeline.
    pub c_ehat: f64,
    /// Spanner count ℓ = ⌈c_ell·log₂²n/ε²⌉.
    pub c_ell: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileName {
    Paper,
    Desk,
}

impl Profile {
    pub const PAPER: Profile = Profile {
        name: ProfileName::Paper,
        c_round: 200.0,
        c_lambda: 200.0,
        c_sampling: 9.0,
        c_phi: 9.0,
        c_ehat: 100.0,
        c_ell: 9.0,
    };

    pub const DESK: Profile = Profile {
        name: ProfileName::Desk,
        c_round: 2.0,
        c_lambda: 0.1,
        c_sampling: 0.1,
        c_phi: 0.1,
        c_ehat: 0.05,
        c_ell: 0.05,
    };

    pub fn by_name(name: ProfileName) -> Profile {
        match name {
            ProfileName::Paper => Self::PAPER,
            ProfileName::Desk => Self::DESK,
        }
    }

    fn ln_n(n: usize) -> f64 {
        (n.max(2) as f64).ln()
    }

    pub fn lambda(&self, n: usize, eps: f64) -> f64 {
        (self.c_lambda * Self::ln_n(n) / (eps * eps)).max(1.0)
    }

    pub fn round_threshold(&self, n: usize, eps: f64) -> f64 {
        self.c_round * Self::ln_n(n) / (eps * eps)
    }

    /// Clamped to ≥ 1 so an edge of effective resistance 1 (a bridge) is
    /// always recovered.
    pub fn phi(&self, n: usize, eps: f64) -> f64 {
        (self.c_phi * Self::ln_n(n).powi(3) / (eps * eps)).max(1.0)
    }

    pub fn max_er_threshold(&self, n: usize, eps: f64) -> f64 {
        eps * eps / (2.0 * self.c_sampling * Self::ln_n(n))
    }

    pub fn ehat_threshold(&self, n: usize, eps: f64) -> f64 {
        eps * eps / (self.c_ehat * Self::ln_n(n).powi(2))
    }

    pub fn spanner_count(&self, n: usize, eps: f64) -> usize {
        let l2 = (n.max(2) as f64).log2();
        ((self.c_ell * l2 * l2 / (eps * eps)).ceil() as usize).max(1)
    }
}

impl Default for Profile {
    fn default() -> Self {
        Self::DESK
    }
}

impl std::str::FromStr for ProfileName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(ProfileName::Paper),
            "desk" => Ok(ProfileName::Desk),
            other => Err(format!("unknown profile '{other}' (expected paper|desk)")),
        }
    }
}
