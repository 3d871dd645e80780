//! Outage probability, diversity order and gain, and power penalties under
//! LOS blockage.
//!
//! With γ = I²γ₀, an outage (γ < γ_th) is the event I < γ_n^{-1/2} where
//! γ_n = γ₀/γ_th. Decibels are 10·log₁₀ of an SNR ratio throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::malaga::{subchannel_decay, BlockageConfig, MalagaChannel, MixtureExpansion};

/// Electrical SNR without turbulence (γ₀) and the outage threshold (γ_th).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrPoint {
    pub gamma0: f64,
    pub gamma_th: f64,
}

impl SnrPoint {
    pub fn new(gamma0: f64, gamma_th: f64) -> Result<Self> {
        if !(gamma0 > 0.0) || !(gamma_th > 0.0) || !gamma0.is_finite() || !gamma_th.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma0 and gamma_th must be positive and finite, got {gamma0} and {gamma_th}"
            )));
        }
        Ok(SnrPoint { gamma0, gamma_th })
    }

    /// Point with γ_th = 1.
    pub fn from_gamma_n(gamma_n: f64) -> Result<Self> {
        SnrPoint::new(gamma_n, 1.0)
    }

    pub fn from_db(gamma_n_db: f64) -> Result<Self> {
        SnrPoint::from_gamma_n(db_to_linear(gamma_n_db))
    }

    pub fn gamma_n(&self) -> f64 {
        self.gamma0 / self.gamma_th
    }

    pub fn gamma_n_db(&self) -> f64 {
        10.0 * self.gamma_n().log10()
    }

    /// Irradiance below which the link is in outage, γ_n^{-1/2}.
    pub fn threshold(&self) -> f64 {
        self.gamma_n().powf(-0.5)
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubchannelOutage {
    pub k: usize,
    pub weight: f64,
    pub p_out: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutageResult {
    pub gamma_n: f64,
    pub exact: f64,
    /// `None` when α ≤ 1, where the gain coefficient diverges.
    pub asymptotic: Option<f64>,
    pub diversity_order: f64,
    pub gain_coeff: Option<f64>,
    pub p_b: f64,
    /// Outage of the blocked branch, F(γ_n^{-1/2}; α, 1, ξ_g).
    pub blocked_p_out: f64,
    /// Outage of each unblocked sub-channel with its mixture weight.
    pub per_subchannel: Vec<SubchannelOutage>,
}

impl OutageResult {
    /// P_b·P_blocked + (1 - P_b)·Σ m̃ₖ P_k.
    pub fn recombine(&self) -> f64 {
        let open: f64 = self.per_subchannel.iter().map(|s| s.weight * s.p_out).sum();
        self.p_b * self.blocked_p_out + (1.0 - self.p_b) * open
    }
}

/// Exact outage with its per-sub-channel decomposition.
pub fn outage_exact(snr: &SnrPoint, expansion: &MixtureExpansion, blockage: &BlockageConfig) -> Result<OutageResult> {
    let t = snr.threshold();
    let pb = blockage.p_b;
    let blocked_p_out = if pb > 0.0 { expansion.blocked_channel().cdf(t)? } else { 0.0 };
    let per_subchannel = expansion
        .subchannels()
        .map(|(k, weight, g)| {
            let p_out = if weight > 0.0 && pb < 1.0 { g.cdf(t)? } else { 0.0 };
            Ok(SubchannelOutage { k, weight, p_out })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = OutageResult {
        gamma_n: snr.gamma_n(),
        exact: 0.0,
        asymptotic: None,
        diversity_order: expansion.alpha.min(1.0),
        gain_coeff: None,
        p_b: pb,
        blocked_p_out,
        per_subchannel,
    };
    out.exact = out.recombine().clamp(0.0, 1.0);
    if expansion.alpha > 1.0 {
        let b_m = gain_coefficient(expansion, blockage)?;
        out.gain_coeff = Some(b_m);
        out.asymptotic = Some(b_m * snr.threshold());
    }
    Ok(out)
}

/// Exact outage probability at γ_n.
pub fn outage_probability(gamma_n: f64, expansion: &MixtureExpansion, blockage: &BlockageConfig) -> Result<f64> {
    let snr = SnrPoint::from_gamma_n(gamma_n)?;
    MalagaChannel::new(expansion.clone(), *blockage).cdf(snr.threshold()).map(|p| p.clamp(0.0, 1.0))
}

/// (D_k, b_k) with D_k = min(α, k) and s^{D_k} M_k(s) → b_k.
///
/// b_k = Γ(|α-k|)/Γ(max(α,k)) · (αk/μ̃ₖ)^{D_k}; for k = 1 < α this is
/// α/((α-1) μ̃₁).
pub fn subchannel_diversity(alpha: f64, k: f64, mean: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0) || !(k > 0.0) || !(mean > 0.0) {
        return Err(Error::domain("subchannel_diversity", "alpha, k and mean must be positive"));
    }
    subchannel_decay(alpha, k, mean)
}

/// b_M = α/(α-1) [P_b/ξ_g + (1 - P_b) m̃₁/μ̃₁]; the diversity order is 1.
pub fn gain_coefficient(expansion: &MixtureExpansion, blockage: &BlockageConfig) -> Result<f64> {
    let a = expansion.alpha;
    if !(a > 1.0) {
        return Err(Error::domain("gain_coefficient", format!("alpha must exceed 1, got {a}")));
    }
    let pb = blockage.p_b;
    let open = expansion.weights[0] / expansion.means[0];
    Ok(a / (a - 1.0) * (pb / expansion.xi_g + (1.0 - pb) * open))
}

/// High-SNR outage b_M γ_n^{-1/2}.
pub fn asymptotic_outage(snr: &SnrPoint, expansion: &MixtureExpansion, blockage: &BlockageConfig) -> Result<f64> {
    Ok(gain_coefficient(expansion, blockage)? * snr.threshold())
}

/// High-SNR outage without blockage.
pub fn asymptotic_outage_unblocked(snr: &SnrPoint, expansion: &MixtureExpansion) -> Result<f64> {
    asymptotic_outage(snr, expansion, &BlockageConfig::none())
}

/// Generic high-SNR form (a/D) γ_n^{-D/2} for diversity gain `a` and order `d`.
pub fn asymptotic_from_diversity(a: f64, d: f64, gamma_n: f64) -> f64 {
    a / d * gamma_n.powf(-0.5 * d)
}

/// μ̃₁/(ξ_g m̃₁): ratio of the blocked to unblocked gain coefficients.
fn blockage_gain_ratio(expansion: &MixtureExpansion) -> Result<f64> {
    let (m1, mu1) = (expansion.weights[0], expansion.means[0]);
    if !(m1 > 0.0) || !(expansion.xi_g > 0.0) {
        return Err(Error::domain("power_penalty", "first-order weight or scatter power is zero"));
    }
    Ok(mu1 / (expansion.xi_g * m1))
}

/// Extra γ_n (dB) needed at high SNR to keep the unblocked outage when
/// blockage occurs with probability P_b: 20 log₁₀[1 + P_b(μ̃₁/(ξ_g m̃₁) - 1)].
pub fn power_penalty(expansion: &MixtureExpansion, blockage: &BlockageConfig) -> Result<f64> {
    require_gain(expansion)?;
    let r = blockage_gain_ratio(expansion)?;
    Ok(20.0 * (1.0 + blockage.p_b * (r - 1.0)).log10())
}

/// Penalty at P_b = 1: 20 log₁₀[μ̃₁/(ξ_g m̃₁)].
pub fn max_power_penalty(expansion: &MixtureExpansion) -> Result<f64> {
    require_gain(expansion)?;
    Ok(20.0 * blockage_gain_ratio(expansion)?.log10())
}

fn require_gain(expansion: &MixtureExpansion) -> Result<()> {
    if !(expansion.alpha > 1.0) {
        return Err(Error::domain("power_penalty", format!("alpha must exceed 1, got {}", expansion.alpha)));
    }
    Ok(())
}

/// Penalty from the exact curves at a target outage: 10 log₁₀ of the ratio of
/// required γ_n with and without blockage.
pub fn power_penalty_exact(target: f64, expansion: &MixtureExpansion, blockage: &BlockageConfig) -> Result<f64> {
    let with = required_gamma_n(target, expansion, blockage, OutageMode::Exact)?;
    let without = required_gamma_n(target, expansion, &BlockageConfig::none(), OutageMode::Exact)?;
    Ok(10.0 * (with / without).log10())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutageMode {
    Exact,
    Asymptotic,
}

/// Search interval for [`required_gamma_n`], in dB.
pub const GAMMA_N_BRACKET_DB: (f64, f64) = (0.0, 200.0);

/// γ_n at which the outage equals `target`. The asymptotic mode inverts
/// b_M γ_n^{-1/2} directly; the exact mode bisects in dB over
/// [`GAMMA_N_BRACKET_DB`] until γ_n is fixed to 1e-10 relative.
pub fn required_gamma_n(
    target: f64,
    expansion: &MixtureExpansion,
    blockage: &BlockageConfig,
    mode: OutageMode,
) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidParameter(format!("target outage must lie in (0, 1), got {target}")));
    }
    match mode {
        OutageMode::Asymptotic => Ok((gain_coefficient(expansion, blockage)? / target).powi(2)),
        OutageMode::Exact => {
            let f = |db: f64| outage_probability(db_to_linear(db), expansion, blockage).map(|p| p - target);
            let (mut lo, mut hi) = GAMMA_N_BRACKET_DB;
            if f(lo)? < 0.0 {
                return Err(Error::Bracket(format!("outage at {lo} dB is already below {target}")));
            }
            if f(hi)? > 0.0 {
                return Err(Error::Bracket(format!("outage at {hi} dB still exceeds {target}")));
            }
            // γ_n relative step = ln(10)/10 · Δ(dB)
            while hi - lo > 1e-10 / (std::f64::consts::LN_10 / 10.0) {
                let mid = 0.5 * (lo + hi);
                if f(mid)? > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(db_to_linear(0.5 * (lo + hi)))
        }
    }
}
