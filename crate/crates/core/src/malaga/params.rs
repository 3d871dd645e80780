use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::near_integer;

/// Offset added to an integer α so that α - k is never an integer.
pub const ALPHA_NUDGE: f64 = 1e-6;

/// Physical parameters of the Málaga model.
///
/// `omega` is the LOS power Ω, `xi` the total scatter power ξ and `rho` the
/// fraction of ξ coupled to the LOS term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MalagaParams {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub omega: f64,
    pub xi: f64,
    pub delta_phi: f64,
    pub normalize: bool,
}

/// Average powers after the optional normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Powers {
    /// Coherent power Ω' (LOS plus coupled scatter).
    pub omega_prime: f64,
    pub xi_c: f64,
    pub xi_g: f64,
    /// Factor applied to the raw powers (1 without normalization).
    pub scale: f64,
}

/// Record of an integer α being moved off the integers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaNudge {
    pub requested: f64,
    pub used: f64,
}

impl MalagaParams {
    pub fn new(
        alpha: f64,
        beta: f64,
        rho: f64,
        omega: f64,
        xi: f64,
        delta_phi: f64,
        normalize: bool,
    ) -> Result<Self> {
        let p = MalagaParams { alpha, beta, rho, omega, xi, delta_phi, normalize };
        p.validate()?;
        Ok(p)
    }

    /// α = 4.2, β = 3, Ω = 0.2ξ, Δφ = 0, normalized. With these values the
    /// maximum power penalty is 36.1 dB at ρ = 0.8 and 7.5 dB at ρ = 0.2.
    pub fn paper_figures(rho: f64) -> Self {
        MalagaParams { alpha: 4.2, beta: 3.0, rho, omega: 0.2, xi: 1.0, delta_phi: 0.0, normalize: true }
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return bad(format!("beta must be positive, got {}", self.beta));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return bad(format!("rho must lie in [0, 1], got {}", self.rho));
        }
        if !(self.omega >= 0.0) || !self.omega.is_finite() {
            return bad(format!("omega must be non-negative, got {}", self.omega));
        }
        if !(self.xi > 0.0) || !self.xi.is_finite() {
            return bad(format!("xi must be positive, got {}", self.xi));
        }
        if !self.delta_phi.is_finite() {
            return bad(format!("delta_phi must be finite, got {}", self.delta_phi));
        }
        Ok(())
    }

    /// β counts as natural when it is within 1e-9 of a positive integer.
    pub fn beta_is_natural(&self) -> bool {
        near_integer(self.beta, 1e-9) && self.beta.round() >= 1.0
    }

    pub fn powers(&self) -> Powers {
        let xi_c = self.rho * self.xi;
        let xi_g = (1.0 - self.rho) * self.xi;
        let omega_prime =
            (self.omega + xi_c + 2.0 * (self.omega * xi_c).sqrt() * self.delta_phi.cos()).max(0.0);
        let scale = if self.normalize { 1.0 / (omega_prime + xi_g) } else { 1.0 };
        Powers { omega_prime: omega_prime * scale, xi_c: xi_c * scale, xi_g: xi_g * scale, scale }
    }

    /// α actually used by the closed forms, moved by [`ALPHA_NUDGE`] when
    /// it is an integer.
    pub fn effective_alpha(&self) -> (f64, Option<AlphaNudge>) {
        if near_integer(self.alpha, 1e-9) {
            let used = self.alpha.round() + ALPHA_NUDGE;
            (used, Some(AlphaNudge { requested: self.alpha, used }))
        } else {
            (self.alpha, None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_makes_unit_mean() {
        for &rho in &[0.0, 0.2, 0.75, 0.99] {
            let p = MalagaParams::paper_figures(rho).powers();
            assert!((p.omega_prime + p.xi_g - 1.0).abs() < 1e-15);
        }
        let raw = MalagaParams::new(2.5, 3.0, 0.5, 2.0, 4.0, 0.0, false).unwrap().powers();
        assert_eq!(raw.xi_g, 2.0);
        assert!((raw.omega_prime - (2.0f64.sqrt() + 2.0f64.sqrt()).powi(2)).abs() < 1e-14);
    }

    #[test]
    fn out_of_phase_terms_cancel() {
        let p = MalagaParams::new(2.5, 3.0, 0.5, 1.0, 2.0, std::f64::consts::PI, false).unwrap();
        assert!(p.powers().omega_prime < 1e-15);
    }

    #[test]
    fn calibration_ratio() {
        // Ω'/ξ_g = (√0.2 + √ρ)² / (1 - ρ) under the figure preset
        let p = MalagaParams::paper_figures(0.8).powers();
        assert!((p.omega_prime / p.xi_g - 9.0).abs() < 1e-12);
        let p = MalagaParams::paper_figures(0.2).powers();
        assert!((p.omega_prime / p.xi_g - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(MalagaParams::new(0.0, 3.0, 0.5, 1.0, 1.0, 0.0, true).is_err());
        assert!(MalagaParams::new(2.0, 3.0, 1.5, 1.0, 1.0, 0.0, true).is_err());
        assert!(MalagaParams::new(2.0, 3.0, 0.5, -1.0, 1.0, 0.0, true).is_err());
        assert!(MalagaParams::new(2.0, 3.0, 0.5, 1.0, 0.0, 0.0, true).is_err());
    }

    #[test]
    fn integer_alpha_is_nudged() {
        let p = MalagaParams::paper_figures(0.5);
        assert_eq!(p.effective_alpha(), (4.2, None));
        let q = MalagaParams { alpha: 4.0, ..p };
        let (a, nudge) = q.effective_alpha();
        assert_eq!(a, 4.0 + ALPHA_NUDGE);
        assert_eq!(nudge.unwrap().requested, 4.0);
    }

    #[test]
    fn beta_branch_is_deterministic() {
        let p = MalagaParams::paper_figures(0.5);
        assert!(p.beta_is_natural());
        assert!(MalagaParams { beta: 3.0 + 1e-11, ..p }.beta_is_natural());
        assert!(!MalagaParams { beta: 2.5, ..p }.beta_is_natural());
    }
}
