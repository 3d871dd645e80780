use serde::{Deserialize, Serialize};

use super::generalized_k::GeneralizedK;
use super::mixture::MixtureExpansion;
use crate::error::{Error, Result};

/// Probability that the coherent (LOS plus coupled) power is blocked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockageConfig {
    pub p_b: f64,
}

impl BlockageConfig {
    pub fn new(p_b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_b) {
            return Err(Error::InvalidParameter(format!("p_b must lie in [0, 1], got {p_b}")));
        }
        Ok(BlockageConfig { p_b })
    }

    pub fn none() -> Self {
        BlockageConfig { p_b: 0.0 }
    }
}

/// Mixture expansion plus blockage: the full irradiance law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MalagaChannel {
    pub expansion: MixtureExpansion,
    pub blockage: BlockageConfig,
}

impl MalagaChannel {
    pub fn new(expansion: MixtureExpansion, blockage: BlockageConfig) -> Self {
        MalagaChannel { expansion, blockage }
    }

    /// Every Generalized-K component with its overall weight; the blocked
    /// branch comes first. Zero-weight components are skipped.
    pub fn components(&self) -> Vec<(f64, GeneralizedK)> {
        let pb = self.blockage.p_b;
        let mut out = Vec::with_capacity(self.expansion.k_max + 1);
        if pb > 0.0 {
            out.push((pb, self.expansion.blocked_channel()));
        }
        if pb < 1.0 {
            for (_, w, g) in self.expansion.subchannels() {
                if w > 0.0 {
                    out.push(((1.0 - pb) * w, g));
                }
            }
        }
        out
    }

    fn combine(&self, f: impl Fn(&GeneralizedK) -> Result<f64>) -> Result<f64> {
        self.components().iter().try_fold(0.0, |acc, (w, g)| Ok(acc + w * f(g)?))
    }

    pub fn pdf(&self, i: f64) -> Result<f64> {
        self.combine(|g| g.pdf(i))
    }

    pub fn cdf(&self, i: f64) -> Result<f64> {
        self.combine(|g| g.cdf(i))
    }

    pub fn mgf(&self, s: f64) -> Result<f64> {
        self.combine(|g| g.mgf(s))
    }

    /// P_b ξ_g + (1 - P_b) Σ m̃ₖ μ̃ₖ.
    pub fn mean(&self) -> f64 {
        let pb = self.blockage.p_b;
        pb * self.expansion.xi_g + (1.0 - pb) * self.expansion.mean()
    }
}

/// Unblocked Málaga density Σ m̃ₖ K_G(i; α, k, μ̃ₖ).
pub fn malaga_pdf(i: f64, expansion: &MixtureExpansion) -> Result<f64> {
    MalagaChannel::new(expansion.clone(), BlockageConfig::none()).pdf(i)
}

pub fn malaga_cdf(i: f64, expansion: &MixtureExpansion) -> Result<f64> {
    MalagaChannel::new(expansion.clone(), BlockageConfig::none()).cdf(i)
}

pub fn malaga_mgf(s: f64, expansion: &MixtureExpansion) -> Result<f64> {
    MalagaChannel::new(expansion.clone(), BlockageConfig::none()).mgf(s)
}

/// P_b K_G(i; α, 1, ξ_g) + (1 - P_b) Σ m̃ₖ K_G(i; α, k, μ̃ₖ).
pub fn malaga_blockage_pdf(i: f64, expansion: &MixtureExpansion, blockage: &BlockageConfig) -> Result<f64> {
    MalagaChannel::new(expansion.clone(), *blockage).pdf(i)
}

pub fn malaga_blockage_cdf(i: f64, expansion: &MixtureExpansion, blockage: &BlockageConfig) -> Result<f64> {
    MalagaChannel::new(expansion.clone(), *blockage).cdf(i)
}

pub fn malaga_blockage_mgf(s: f64, expansion: &MixtureExpansion, blockage: &BlockageConfig) -> Result<f64> {
    MalagaChannel::new(expansion.clone(), *blockage).mgf(s)
}
