use rand::Rng;
use rand_distr::{Binomial, Distribution, Gamma, Poisson};

use crate::error::{Error, Result};
use crate::malaga::{BlockageConfig, MixtureExpansion};

/// How the sub-channel order is drawn.
#[derive(Debug, Clone)]
enum OrderLaw {
    /// p = 0: only the first order carries weight.
    First,
    /// k - 1 ~ Binomial(β - 1, p).
    Binomial(Binomial),
    /// k - 1 ~ NegBin(β, p), drawn as Poisson(λ) with λ ~ Gamma(β, p/(1-p)).
    NegativeBinomial(Gamma<f64>),
    /// Inverse lookup in the truncated weight table (cumulative, unnormalized).
    Table(Vec<f64>),
}

/// Draws irradiance from the blocked ℳ model. Each draw picks the blocked
/// branch with probability P_b, then an order k, and returns
/// Gamma(α, 1/α) · Gamma(k, μ̃ₖ/k).
#[derive(Debug, Clone)]
pub struct IrradianceSampler {
    large_scale: Gamma<f64>,
    order: OrderLaw,
    p_b: f64,
    expansion: MixtureExpansion,
}

impl IrradianceSampler {
    /// Generative sampler: exact Binomial or Negative-Binomial orders, so a
    /// real β carries no truncation bias.
    pub fn new(expansion: &MixtureExpansion, blockage: &BlockageConfig) -> Result<Self> {
        let order = if expansion.p == 0.0 {
            OrderLaw::First
        } else if expansion.beta_natural {
            OrderLaw::Binomial(
                Binomial::new(expansion.beta as u64 - 1, expansion.p).map_err(|e| sampler_error(e.to_string()))?,
            )
        } else {
            let scale = expansion.p / (1.0 - expansion.p);
            OrderLaw::NegativeBinomial(Gamma::new(expansion.beta, scale).map_err(|e| sampler_error(e.to_string()))?)
        };
        Self::build(expansion, blockage, order)
    }

    /// Table sampler: the order is read off the mixture weights.
    pub fn direct(expansion: &MixtureExpansion, blockage: &BlockageConfig) -> Result<Self> {
        let cumulative = expansion
            .weights
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w;
                Some(*acc)
            })
            .collect();
        Self::build(expansion, blockage, OrderLaw::Table(cumulative))
    }

    fn build(expansion: &MixtureExpansion, blockage: &BlockageConfig, order: OrderLaw) -> Result<Self> {
        let large_scale = Gamma::new(expansion.alpha, 1.0 / expansion.alpha).map_err(|e| sampler_error(e.to_string()))?;
        Ok(IrradianceSampler { large_scale, order, p_b: blockage.p_b, expansion: expansion.clone() })
    }

    /// Sub-channel order and mean for one draw; the blocked branch is order one with mean ξ_g.
    fn draw_order<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        if self.p_b > 0.0 && rng.random::<f64>() < self.p_b {
            return (1.0, self.expansion.xi_g);
        }
        let k = match &self.order {
            OrderLaw::First => 1,
            OrderLaw::Binomial(b) => 1 + b.sample(rng),
            OrderLaw::NegativeBinomial(g) => {
                let lambda = g.sample(rng);
                if lambda > 0.0 {
                    1 + Poisson::new(lambda).map(|p| p.sample(rng) as u64).unwrap_or(u64::MAX - 1)
                } else {
                    1
                }
            }
            OrderLaw::Table(cum) => {
                let u = rng.random::<f64>() * cum[cum.len() - 1];
                1 + cum.partition_point(|&c| c <= u).min(cum.len() - 1) as u64
            }
        };
        (k as f64, self.expansion.mean_of(k))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (k, mean) = self.draw_order(rng);
        let x = self.large_scale.sample(rng);
        // k ≥ 1 is always a valid shape
        let y = Gamma::new(k, mean / k).map(|g| g.sample(rng)).unwrap_or(0.0);
        x * y
    }
}

fn sampler_error(msg: String) -> Error {
    Error::InvalidParameter(format!("sampler: {msg}"))
}
