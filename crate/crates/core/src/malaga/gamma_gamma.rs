use serde::{Deserialize, Serialize};

use super::generalized_k::GeneralizedK;
use super::params::{AlphaNudge, MalagaParams};
use crate::error::{Error, Result};
use crate::special::near_integer;

/// The ρ = 1 model. All scatter is coupled to the LOS term, so the unblocked
/// law is Gamma-Gamma (a Generalized-K law with k = β) and a blocked link
/// receives nothing: an atom of mass P_b at I = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaGammaLimit {
    pub continuous: GeneralizedK,
    pub p_b: f64,
    pub alpha_nudge: Option<AlphaNudge>,
}

impl GammaGammaLimit {
    pub fn new(alpha: f64, beta: f64, mean: f64, p_b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_b) {
            return Err(Error::InvalidParameter(format!("p_b must lie in [0, 1], got {p_b}")));
        }
        let (alpha, alpha_nudge) = if near_integer(alpha - beta, 1e-9) {
            let used = alpha + super::params::ALPHA_NUDGE;
            (used, Some(AlphaNudge { requested: alpha, used }))
        } else {
            (alpha, None)
        };
        Ok(GammaGammaLimit { continuous: GeneralizedK::new(alpha, beta, mean)?, p_b, alpha_nudge })
    }

    /// Limit of `params` as ρ → 1; the mean is the coherent power Ω'.
    pub fn from_params(params: &MalagaParams, p_b: f64) -> Result<Self> {
        params.validate()?;
        let pw = MalagaParams { rho: 1.0, ..*params }.powers();
        GammaGammaLimit::new(params.alpha, params.beta, pw.omega_prime, p_b)
    }

    /// Mass of the atom at zero.
    pub fn atom(&self) -> f64 {
        self.p_b
    }

    /// Density of the continuous part, (1 - P_b) f_GG(i).
    pub fn pdf(&self, i: f64) -> Result<f64> {
        Ok((1.0 - self.p_b) * self.continuous.pdf(i)?)
    }

    /// P(I <= i), including the atom for every i >= 0.
    pub fn cdf(&self, i: f64) -> Result<f64> {
        Ok(self.p_b + (1.0 - self.p_b) * self.continuous.cdf(i)?)
    }

    pub fn mgf(&self, s: f64) -> Result<f64> {
        Ok(self.p_b + (1.0 - self.p_b) * self.continuous.mgf(s)?)
    }
}

/// Gamma-Gamma density with shapes α, β and the given mean.
pub fn gamma_gamma_pdf(i: f64, alpha: f64, beta: f64, mean: f64) -> Result<f64> {
    GeneralizedK::new(alpha, beta, mean)?.pdf(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::malaga::{BlockageConfig, MalagaChannel, MixtureExpansion};

    #[test]
    fn limit_of_nearly_full_coupling() {
        let params = MalagaParams::paper_figures(1.0 - 1e-4);
        let e = MixtureExpansion::new(&params).unwrap();
        let gg = GammaGammaLimit::from_params(&params, 0.0).unwrap();
        let open = MalagaChannel::new(e.clone(), BlockageConfig::none());
        let mut sup: f64 = 0.0;
        for j in 0..=290 {
            let i = 0.1 + 0.01 * j as f64;
            let a = open.pdf(i).unwrap();
            let b = gg.pdf(i).unwrap();
            sup = sup.max((a - b).abs() / b.max(1e-3));
        }
        assert!(sup < 0.01, "sup-norm relative gap {sup}");
        // the blocked branch collapses towards the origin
        let blocked = e.blocked_channel();
        assert!(blocked.cdf(10.0 * e.xi_g).unwrap() >= 0.99);
    }

    #[test]
    fn atom_and_mgf() {
        let gg = GammaGammaLimit::new(4.2, 3.0, 1.0, 0.25).unwrap();
        assert_eq!(gg.cdf(0.0).unwrap(), 0.25);
        assert!((gg.mgf(1e-9).unwrap() - 1.0).abs() < 1e-8);
        assert!((gg.mgf(1e12).unwrap() - 0.25).abs() < 1e-6);
    }

    #[test]
    fn integer_shape_gap_is_nudged() {
        let gg = GammaGammaLimit::new(4.0, 2.0, 1.0, 0.0).unwrap();
        assert!(gg.alpha_nudge.is_some());
        assert!(gg.mgf(2.0).unwrap() < 1.0);
    }
}
