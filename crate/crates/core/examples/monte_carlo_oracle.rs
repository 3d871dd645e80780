//! Checks the analytic law against 10⁷ simulated draws.
//!
//! cargo run --release --example monte_carlo_oracle -- [rho] [p_b] [samples]

use std::time::Instant;

use fso_linklab::malaga::{BlockageConfig, MalagaChannel, MalagaParams, MixtureExpansion};
use fso_linklab::montecarlo::{oracle_run, McConfig};
use fso_linklab::outage::{outage_probability, SnrPoint};

fn main() -> fso_linklab::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let rho = args.first().copied().unwrap_or(0.5);
    let p_b = args.get(1).copied().unwrap_or(0.1);
    let samples = args.get(2).copied().unwrap_or(1e7) as u64;

    let expansion = MixtureExpansion::new(&MalagaParams::paper_figures(rho))?;
    let channel = MalagaChannel::new(expansion, BlockageConfig::new(p_b)?);
    let cfg = McConfig::for_channel(samples, 2024, &channel)?;
    let snrs = [SnrPoint::from_db(20.0)?, SnrPoint::from_db(40.0)?];
    let thresholds: Vec<f64> = snrs.iter().map(|s| s.threshold()).collect();

    let t = Instant::now();
    let (summary, gof) = oracle_run(&channel, &cfg, &thresholds, 0.01)?;
    println!("rho={rho} p_b={p_b} samples={samples} ({:.1?})", t.elapsed());
    println!("mean {:.6} (analytic {:.6}, se {:.1e})", summary.mean, channel.mean(), summary.std_error());
    println!(
        "chi-square {:.1} on {} dof, p = {:.3}; KS D = {:.2e}, p = {:.3}; {}",
        gof.chi_square.statistic,
        gof.chi_square.dof,
        gof.chi_square.p_value,
        gof.ks.statistic,
        gof.ks.p_value,
        if gof.pass { "PASS" } else { "FAIL" }
    );
    for (snr, est) in snrs.iter().zip(&summary.outages) {
        let exact = outage_probability(snr.gamma_n(), &channel.expansion, &channel.blockage)?;
        println!(
            "{:>4.0} dB: simulated {:.4e} [{:.4e}, {:.4e}], exact {:.4e}, z = {:.2}",
            snr.gamma_n_db(),
            est.estimate,
            est.ci95.0,
            est.ci95.1,
            exact,
            est.z_score(exact)
        );
    }
    Ok(())
}
