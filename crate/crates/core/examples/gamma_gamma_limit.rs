//! Full coupling (rho = 1): the unblocked law is Gamma-Gamma and a blocked
//! link receives nothing, so the outage floor is P_b.

use fso_linklab::malaga::{BlockageConfig, GammaGammaLimit, MalagaChannel, MalagaParams, MixtureExpansion};
use fso_linklab::Error;

fn main() -> fso_linklab::Result<()> {
    let params = MalagaParams::paper_figures(1.0);
    match MixtureExpansion::new(&params) {
        Err(Error::DegenerateModel(msg)) => println!("mixture at rho = 1: {msg}"),
        other => println!("unexpected: {other:?}"),
    }
    let gg = GammaGammaLimit::from_params(&params, 0.01)?;
    println!("Gamma-Gamma mean {:.6}, atom at zero {}", gg.continuous.mean, gg.atom());

    let near = MalagaParams::paper_figures(1.0 - 1e-4);
    let m = MalagaChannel::new(MixtureExpansion::new(&near)?, BlockageConfig::none());
    println!("{:>5} {:>14} {:>14}", "I", "rho -> 1", "Gamma-Gamma");
    for j in 1..=8 {
        let i = 0.25 * j as f64;
        println!("{i:>5.2} {:>14.8} {:>14.8}", m.pdf(i)?, gg.continuous.pdf(i)?);
    }

    println!("{:>6} {:>14} {:>14}", "dB", "rho = 0.999", "rho = 1");
    let e = MixtureExpansion::new(&MalagaParams::paper_figures(0.999))?;
    let blocked = MalagaChannel::new(e, BlockageConfig::new(0.01)?);
    for db in [40.0, 80.0, 120.0, 160.0] {
        let t = 10f64.powf(-db / 20.0);
        println!("{db:>6} {:>14.6e} {:>14.6e}", blocked.cdf(t)?, gg.cdf(t)?);
    }
    Ok(())
}
