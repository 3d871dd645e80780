use serde::{Deserialize, Serialize};

use super::generalized_k::GeneralizedK;
use super::params::{AlphaNudge, MalagaParams};
use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// Truncation tolerance used when β is not an integer.
pub const DEFAULT_EPSILON: f64 = 1e-8;
/// Hard limit on the number of sub-channels.
pub const K_MAX_CAP: usize = 200;

/// Discrete Generalized-K mixture equivalent to a [`MalagaParams`] set.
///
/// `weights[k-1]` and `means[k-1]` belong to the sub-channel of order k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureExpansion {
    /// α used by every sub-channel (after any integer nudge).
    pub alpha: f64,
    pub beta: f64,
    pub beta_natural: bool,
    pub p: f64,
    pub weights: Vec<f64>,
    pub means: Vec<f64>,
    pub k_max: usize,
    pub epsilon: f64,
    pub omega_prime: f64,
    pub xi_g: f64,
    pub alpha_nudge: Option<AlphaNudge>,
}

/// p = Ω'/(Ω' + βξ_g), the chance that a sub-channel path couples to the LOS term.
pub fn coupling_probability(params: &MalagaParams) -> Result<f64> {
    params.validate()?;
    let pw = params.powers();
    if !(pw.xi_g > 0.0) {
        return Err(degenerate_rho());
    }
    Ok(pw.omega_prime / (pw.omega_prime + params.beta * pw.xi_g))
}

fn degenerate_rho() -> Error {
    Error::DegenerateModel(
        "rho = 1 leaves no independent scatter; use GammaGammaLimit for this case".into(),
    )
}

/// Builds the truncated mixture. `epsilon` bounds the discarded weight when
/// β is real and is recorded but unused when β is natural.
pub fn mixture_weights(params: &MalagaParams, epsilon: f64) -> Result<MixtureExpansion> {
    let p = coupling_probability(params)?;
    let pw = params.powers();
    let natural = params.beta_is_natural();
    if !natural && !(epsilon > 0.0 && epsilon <= 1e-3) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1e-3], got {epsilon}")));
    }
    let (alpha, alpha_nudge) = params.effective_alpha();
    let beta = if natural { params.beta.round() } else { params.beta };
    let weights = if natural { binomial_weights(beta, p)? } else { negative_binomial_weights(beta, p, epsilon)? };
    let k_max = weights.len();
    let means = (1..=k_max)
        .map(|k| subchannel_mean(k as f64, beta, natural, pw.omega_prime, pw.xi_g))
        .collect();
    Ok(MixtureExpansion {
        alpha,
        beta,
        beta_natural: natural,
        p,
        weights,
        means,
        k_max,
        epsilon,
        omega_prime: pw.omega_prime,
        xi_g: pw.xi_g,
        alpha_nudge,
    })
}

fn subchannel_mean(k: f64, beta: f64, natural: bool, omega_prime: f64, xi_g: f64) -> f64 {
    if natural {
        k / beta * (xi_g * beta + omega_prime)
    } else {
        k * xi_g
    }
}

fn binomial_weights(beta: f64, p: f64) -> Result<Vec<f64>> {
    let n = beta as usize;
    if n > K_MAX_CAP {
        return Err(cap_error(n));
    }
    if p == 0.0 {
        let mut w = vec![0.0; n];
        w[0] = 1.0;
        return Ok(w);
    }
    let ln_norm = ln_gamma(beta)?;
    (1..=n)
        .map(|k| {
            let kf = k as f64;
            let ln_c = ln_norm - ln_gamma(kf)? - ln_gamma(beta - kf + 1.0)?;
            Ok((ln_c + (kf - 1.0) * p.ln() + (beta - kf) * (-p).ln_1p()).exp())
        })
        .collect()
}

fn negative_binomial_weights(beta: f64, p: f64, epsilon: f64) -> Result<Vec<f64>> {
    if p == 0.0 {
        return Ok(vec![1.0]);
    }
    let ln_gb = ln_gamma(beta)?;
    let tail = beta * (-p).ln_1p();
    let mut w = Vec::new();
    let mut cum = 0.0;
    for k in 1..=K_MAX_CAP {
        let kf = k as f64;
        let ln_w = ln_gamma(kf - 1.0 + beta)? - ln_gamma(kf)? - ln_gb + (kf - 1.0) * p.ln() + tail;
        let m = ln_w.exp();
        w.push(m);
        cum += m;
        if cum >= 1.0 - epsilon {
            return Ok(w);
        }
    }
    Err(cap_error(K_MAX_CAP + 1))
}

fn cap_error(needed: usize) -> Error {
    Error::accuracy(
        "mixture_weights",
        format!("truncation needs at least {needed} sub-channels; the cap is {K_MAX_CAP}"),
    )
}

impl MixtureExpansion {
    pub fn new(params: &MalagaParams) -> Result<Self> {
        mixture_weights(params, DEFAULT_EPSILON)
    }

    /// μ̃ₖ for any order k ≥ 1, including orders past the truncation.
    pub fn mean_of(&self, k: u64) -> f64 {
        subchannel_mean(k as f64, self.beta, self.beta_natural, self.omega_prime, self.xi_g)
    }

    /// Sub-channel of order `k` (1-based).
    pub fn subchannel(&self, k: usize) -> GeneralizedK {
        GeneralizedK { alpha: self.alpha, k: k as f64, mean: self.means[k - 1] }
    }

    /// (k, m̃ₖ, law) for every retained order.
    pub fn subchannels(&self) -> impl Iterator<Item = (usize, f64, GeneralizedK)> + '_ {
        (1..=self.k_max).map(move |k| (k, self.weights[k - 1], self.subchannel(k)))
    }

    /// The law left when the coherent power is blocked: order one, mean ξ_g.
    pub fn blocked_channel(&self) -> GeneralizedK {
        GeneralizedK { alpha: self.alpha, k: 1.0, mean: self.xi_g }
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Σ m̃ₖ μ̃ₖ.
    pub fn mean(&self) -> f64 {
        self.weights.iter().zip(&self.means).map(|(w, m)| w * m).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn raw(alpha: f64, beta: f64, omega_prime: f64, xi_g: f64) -> MalagaParams {
        // ρ = 0 so Ω' = Ω and ξ_g = ξ
        MalagaParams::new(alpha, beta, 0.0, omega_prime, xi_g, 0.0, false).unwrap()
    }

    #[test]
    fn coupling_probability_values() {
        assert_eq!(coupling_probability(&raw(4.2, 3.0, 0.0, 0.1)).unwrap(), 0.0);
        assert!((coupling_probability(&raw(4.2, 3.0, 0.9, 0.1)).unwrap() - 0.75).abs() < 1e-15);
        assert!(coupling_probability(&raw(4.2, 3.0, 1e12, 0.1)).unwrap() > 1.0 - 1e-12);
        let err = coupling_probability(&MalagaParams::paper_figures(1.0)).unwrap_err();
        assert!(matches!(err, Error::DegenerateModel(_)));
    }

    #[test]
    fn binomial_branch() {
        let e = MixtureExpansion::new(&raw(4.2, 3.0, 0.9, 0.1)).unwrap();
        assert_eq!(e.k_max, 3);
        for (w, want) in e.weights.iter().zip([0.0625, 0.375, 0.5625]) {
            assert!((w - want).abs() < 1e-15);
        }
        for (m, want) in e.means.iter().zip([0.4, 0.8, 1.2]) {
            assert!((m - want).abs() < 1e-15);
        }
        assert!((e.total_weight() - 1.0).abs() < 1e-12);
        assert!((e.mean() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn blocked_state_keeps_only_first_order() {
        for beta in [3.0, 2.5] {
            let e = MixtureExpansion::new(&raw(4.2, beta, 0.0, 0.3)).unwrap();
            assert_eq!(e.weights[0], 1.0);
            assert!(e.weights[1..].iter().all(|&w| w == 0.0));
            assert!((e.means[0] - 0.3).abs() < 1e-15);
        }
    }

    #[test]
    fn negative_binomial_branch_truncates_at_epsilon() {
        let p = MalagaParams { beta: 2.5, ..MalagaParams::paper_figures(0.5) };
        let e = mixture_weights(&p, 1e-8).unwrap();
        assert!(!e.beta_natural);
        assert!(e.total_weight() >= 1.0 - 1e-8);
        let shorter = &e.weights[..e.k_max - 1];
        assert!(shorter.iter().sum::<f64>() < 1.0 - 1e-8);
        assert!((e.mean() - 1.0).abs() < 1e-6);
        assert!(mixture_weights(&p, 0.0).is_err());
        assert!(mixture_weights(&p, 0.01).is_err());
    }

    #[test]
    fn truncation_cap_is_reported() {
        let p = MalagaParams { beta: 2.5, ..MalagaParams::paper_figures(0.99) };
        assert!(matches!(mixture_weights(&p, 1e-8), Err(Error::Accuracy { .. })));
        let p = MalagaParams { beta: 250.0, ..MalagaParams::paper_figures(0.5) };
        assert!(mixture_weights(&p, 1e-8).is_err());
    }

    #[test]
    fn integer_alpha_is_recorded() {
        let p = MalagaParams { alpha: 3.0, ..MalagaParams::paper_figures(0.5) };
        let e = MixtureExpansion::new(&p).unwrap();
        assert_eq!(e.alpha, 3.0 + super::super::params::ALPHA_NUDGE);
        assert!(e.alpha_nudge.is_some());
    }

    proptest! {
        #[test]
        fn expectation_is_total_power(rho in 0.0f64..0.97, beta in 0.5f64..12.0, omega in 0.0f64..3.0, natural in any::<bool>()) {
            let beta = if natural { beta.round().max(1.0) } else { beta };
            let p = MalagaParams::new(2.3, beta, rho, omega, 1.0, 0.3, true).unwrap();
            if let Ok(e) = mixture_weights(&p, 1e-10) {
                let target = e.omega_prime + e.xi_g;
                if e.beta_natural {
                    prop_assert!((e.total_weight() - 1.0).abs() < 1e-12);
                    prop_assert!((e.mean() - target).abs() < 1e-12);
                } else {
                    prop_assert!(e.total_weight() >= 1.0 - 1e-10);
                    prop_assert!(e.mean() <= target + 1e-12 && e.mean() > target - 1e-6);
                }
                prop_assert!(e.weights.iter().all(|&w| w >= 0.0));
            }
        }
    }
}
