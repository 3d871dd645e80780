//! The Málaga (ℳ) irradiance law as a Generalized-K mixture, with LOS blockage.

mod channel;
mod gamma_gamma;
mod generalized_k;
mod mixture;
mod params;

pub use channel::{
    malaga_blockage_cdf, malaga_blockage_mgf, malaga_blockage_pdf, malaga_cdf, malaga_mgf, malaga_pdf,
    BlockageConfig, MalagaChannel,
};
pub use gamma_gamma::{gamma_gamma_pdf, GammaGammaLimit};
pub use generalized_k::{gk_cdf, gk_mgf, gk_pdf, GeneralizedK};
pub use mixture::{coupling_probability, mixture_weights, MixtureExpansion, DEFAULT_EPSILON, K_MAX_CAP};
pub use params::{AlphaNudge, MalagaParams, Powers, ALPHA_NUDGE};

#[allow(unused_imports)]
pub(crate) use generalized_k::subchannel_decay;
