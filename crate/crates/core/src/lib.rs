//! Link-budget toolkit for free-space optical channels under Málaga (ℳ)
//! turbulence with line-of-sight blockage.

pub mod beam;
pub mod cli;
pub mod error;
pub mod malaga;
pub mod montecarlo;
pub mod outage;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
