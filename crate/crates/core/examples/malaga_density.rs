//! Mixture expansion of the Málaga law and its density, distribution and
//! transform under LOS blockage.

use fso_linklab::malaga::{BlockageConfig, MalagaChannel, MalagaParams, MixtureExpansion};

fn main() -> fso_linklab::Result<()> {
    let params = MalagaParams::paper_figures(0.75);
    let e = MixtureExpansion::new(&params)?;
    println!("alpha = {}, beta = {}, p = {:.6}, Omega' = {:.6}, xi_g = {:.6}", e.alpha, e.beta, e.p, e.omega_prime, e.xi_g);
    for (k, w, g) in e.subchannels() {
        println!("  k = {k}: weight {w:.6}, mean {:.6}", g.mean);
    }

    // a real beta gives an infinite series truncated at epsilon
    let real = MixtureExpansion::new(&MalagaParams { beta: 2.5, ..params })?;
    println!("beta = 2.5 keeps {} terms, weight {:.10}", real.k_max, real.total_weight());

    println!("{:>6} {:>14} {:>14} {:>14}", "I", "pdf P_b=0", "pdf P_b=0.3", "cdf P_b=0.3");
    let clear = MalagaChannel::new(e.clone(), BlockageConfig::none());
    let blocked = MalagaChannel::new(e.clone(), BlockageConfig::new(0.3)?);
    for j in 0..=12 {
        let i = 0.25 * j as f64;
        println!("{i:>6.2} {:>14.8} {:>14.8} {:>14.8}", clear.pdf(i)?, blocked.pdf(i)?, blocked.cdf(i)?);
    }

    println!("{:>8} {:>14}", "s", "E[exp(-sI)]");
    for s in [1e-2, 1.0, 1e2, 1e4, 1e6] {
        println!("{s:>8.0e} {:>14.8e}", blocked.mgf(s)?);
    }
    println!("mean irradiance {:.6} (blocked), {:.6} (clear)", blocked.mean(), clear.mean());
    Ok(())
}
