use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::special::{ln_bessel_k, ln_gamma, ln_gamma_signed, near_integer, tricomi_u_scaled};

const EPS: f64 = f64::EPSILON;
// Relative error accepted from the residue series before falling back to quadrature.
const SERIES_TOL: f64 = 1e-11;
const QUAD_TOL: f64 = 1e-12;

/// Generalized-K law: the product of independent unit-mean Gamma(α) and
/// Gamma(k) variates scaled to mean `mean`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedK {
    pub alpha: f64,
    pub k: f64,
    pub mean: f64,
}

impl GeneralizedK {
    pub fn new(alpha: f64, k: f64, mean: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("k", k), ("mean", mean)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain("generalized_k", format!("{name} must be positive, got {v}")));
            }
        }
        Ok(GeneralizedK { alpha, k, mean })
    }

    /// B = αk / mean.
    pub fn rate(&self) -> f64 {
        self.alpha * self.k / self.mean
    }

    fn check_point(&self, i: f64) -> Result<()> {
        if i.is_nan() || i < 0.0 {
            return Err(Error::domain("generalized_k", format!("irradiance must be non-negative, got {i}")));
        }
        Ok(())
    }

    /// Limit of the density at I = 0: zero when both shapes exceed one,
    /// B/|α - k| when the smaller shape is one, infinite otherwise.
    pub fn pdf_at_zero(&self) -> f64 {
        let lo = self.alpha.min(self.k);
        let nu = (self.alpha - self.k).abs();
        if lo > 1.0 {
            0.0
        } else if lo == 1.0 && nu > 0.0 {
            self.rate() / nu
        } else {
            f64::INFINITY
        }
    }

    /// ln f(i); -∞ where the density vanishes.
    pub fn ln_pdf(&self, i: f64) -> Result<f64> {
        self.check_point(i)?;
        if i == 0.0 {
            return Ok(self.pdf_at_zero().ln());
        }
        if i.is_infinite() {
            return Ok(f64::NEG_INFINITY);
        }
        let b = self.rate();
        let h = 0.5 * (self.alpha + self.k);
        let ln_k = ln_bessel_k(self.alpha - self.k, 2.0 * (b * i).sqrt())?;
        Ok(LN_2 + h * b.ln() - ln_gamma(self.alpha)? - ln_gamma(self.k)? + (h - 1.0) * i.ln() + ln_k)
    }

    pub fn pdf(&self, i: f64) -> Result<f64> {
        Ok(self.ln_pdf(i)?.exp())
    }

    /// F(i). Uses the two residue series in powers of B·i and falls back to
    /// quadrature of the density when they cancel or α - k is an integer.
    pub fn cdf(&self, i: f64) -> Result<f64> {
        self.check_point(i)?;
        if i == 0.0 {
            return Ok(0.0);
        }
        if i.is_infinite() {
            return Ok(1.0);
        }
        if let Some(v) = self.cdf_series(self.rate() * i) {
            return Ok(v);
        }
        self.cdf_quadrature(i)
    }

    /// 1 - F(i) without cancellation in the upper tail.
    pub fn sf(&self, i: f64) -> Result<f64> {
        self.check_point(i)?;
        if i == 0.0 {
            return Ok(1.0);
        }
        if i.is_infinite() {
            return Ok(0.0);
        }
        if i <= self.mean {
            return Ok(1.0 - self.cdf(i)?);
        }
        self.tail_integral(i)
    }

    pub(crate) fn cdf_series(&self, x: f64) -> Option<f64> {
        let nu = self.alpha - self.k;
        if near_integer(nu, 1e-9) || 2.0 * x.sqrt() > 60.0 {
            return None;
        }
        let ln_norm = ln_gamma(self.alpha).ok()? + ln_gamma(self.k).ok()?;
        let (a1, e1) = residue_series(x, self.k, nu, ln_norm)?;
        let (a2, e2) = residue_series(x, self.alpha, -nu, ln_norm)?;
        let v = a1 + a2;
        if !(v > 0.0) || e1 + e2 > SERIES_TOL * v {
            return None;
        }
        Some(v.min(1.0))
    }

    pub(crate) fn cdf_quadrature(&self, i: f64) -> Result<f64> {
        if i <= self.mean {
            let q = quadrature::tanh_sinh(|t| self.pdf(t).unwrap_or(f64::NAN), 0.0, i, QUAD_TOL)?;
            Ok(q.value.clamp(0.0, 1.0))
        } else {
            Ok((1.0 - self.tail_integral(i)?).clamp(0.0, 1.0))
        }
    }

    fn tail_integral(&self, i: f64) -> Result<f64> {
        let q = quadrature::exp_sinh(|t| self.pdf(t).unwrap_or(f64::NAN), i, QUAD_TOL)?;
        Ok(q.value.clamp(0.0, 1.0))
    }

    /// E[e^{-sI}] = z^α U(α, α - k + 1, z) with z = αk/(mean·s).
    ///
    /// U comes from the two-term ₁F₁ form when that is well conditioned and
    /// from its Laplace integral otherwise; direct quadrature of the
    /// transform is the last resort.
    pub fn mgf(&self, s: f64) -> Result<f64> {
        if s.is_nan() || s < 0.0 {
            return Err(Error::domain("generalized_k_mgf", format!("s must be non-negative, got {s}")));
        }
        if s == 0.0 {
            return Ok(1.0);
        }
        if s.is_infinite() {
            return Ok(0.0);
        }
        let z = self.rate() / s;
        match tricomi_u_scaled(self.alpha, self.alpha - self.k + 1.0, z) {
            Ok(v) => Ok(v),
            Err(_) => self.mgf_quadrature(s),
        }
    }

    /// ∫ e^{-si} f(i) di by quadrature, substituting u = s·i.
    pub fn mgf_quadrature(&self, s: f64) -> Result<f64> {
        if s.is_nan() || s < 0.0 {
            return Err(Error::domain("generalized_k_mgf", format!("s must be non-negative, got {s}")));
        }
        if s == 0.0 {
            return Ok(1.0);
        }
        let q = quadrature::exp_sinh(
            |u| (-u + self.ln_pdf(u / s).unwrap_or(f64::NAN) - s.ln()).exp(),
            0.0,
            QUAD_TOL,
        )?;
        Ok(q.value)
    }

    /// Coefficient of the leading s^{-min(α,k)} term of the MGF.
    pub fn mgf_decay(&self) -> Result<(f64, f64)> {
        subchannel_decay(self.alpha, self.k, self.mean)
    }
}

/// (order, coefficient) of s^{D} M(s) → b as s → ∞ for one sub-channel.
pub(crate) fn subchannel_decay(alpha: f64, k: f64, mean: f64) -> Result<(f64, f64)> {
    if near_integer(alpha - k, 1e-12) {
        return Err(Error::degenerate("subchannel_diversity", format!("alpha = k = {k}")));
    }
    let b = alpha * k / mean;
    let (lo, hi) = if alpha < k { (alpha, k) } else { (k, alpha) };
    let (ln_num, sign) = ln_gamma_signed(hi - lo)?;
    let coef = sign * (ln_num - ln_gamma(hi)? + lo * b.ln()).exp();
    Ok((lo, coef))
}

/// Γ(σ)/(Γ(α)Γ(k)) Σ_m x^{c+m} / ((c+m) m! Π_{j<=m}(j - σ)) and an error bound.
fn residue_series(x: f64, c: f64, sigma: f64, ln_norm: f64) -> Option<(f64, f64)> {
    const MAX_TERMS: usize = 5000;
    let (ln_g, sign) = ln_gamma_signed(sigma).ok()?;
    let ln_pre = ln_g + c * x.ln() - ln_norm;
    let pre = ln_pre.exp();
    let mut u = 1.0f64;
    let mut sum = 1.0 / c;
    let mut weighted = sum;
    for m in 1..MAX_TERMS {
        let mf = m as f64;
        u *= x / (mf * (mf - sigma));
        let t = u / (c + mf);
        sum += t;
        weighted += (mf + 2.0) * t.abs();
        if mf > sigma && t.abs() <= 0.25 * EPS * sum.abs() && x / (mf * (mf - sigma)) < 0.5 {
            let value = sign * pre * sum;
            let ln_err = 4.0 * EPS * (ln_g.abs() + (c * x.ln()).abs() + ln_norm.abs() + 1.0);
            let err = pre * (3.0 * EPS * weighted + ln_err * sum.abs());
            return Some((value, err));
        }
    }
    None
}

/// Density of the Generalized-K law at `i`.
pub fn gk_pdf(i: f64, alpha: f64, k: f64, mean: f64) -> Result<f64> {
    GeneralizedK::new(alpha, k, mean)?.pdf(i)
}

pub fn gk_cdf(i: f64, alpha: f64, k: f64, mean: f64) -> Result<f64> {
    GeneralizedK::new(alpha, k, mean)?.cdf(i)
}

pub fn gk_mgf(s: f64, alpha: f64, k: f64, mean: f64) -> Result<f64> {
    GeneralizedK::new(alpha, k, mean)?.mgf(s)
}
