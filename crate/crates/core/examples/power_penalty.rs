//! Transmit power needed to offset LOS blockage, from the asymptote and from
//! the exact outage curves.

use fso_linklab::malaga::{BlockageConfig, MalagaParams, MixtureExpansion};
use fso_linklab::outage::{max_power_penalty, power_penalty, power_penalty_exact, required_gamma_n, OutageMode};

fn main() -> fso_linklab::Result<()> {
    println!("{:>5} {:>10}", "rho", "max (dB)");
    for rho in [0.2, 0.5, 0.8, 0.9] {
        let e = MixtureExpansion::new(&MalagaParams::paper_figures(rho))?;
        println!("{rho:>5} {:>10.3}", max_power_penalty(&e)?);
    }

    let target = 1e-3;
    println!("penalty at P_out = {target:e}");
    println!("{:>5} {:>6} {:>12} {:>12}", "rho", "P_b", "asymptotic", "exact");
    for rho in [0.1, 0.5, 0.9] {
        let e = MixtureExpansion::new(&MalagaParams::paper_figures(rho))?;
        for p_b in [0.01, 0.1, 0.5] {
            let blk = BlockageConfig::new(p_b)?;
            println!("{rho:>5} {p_b:>6} {:>12.3} {:>12.3}", power_penalty(&e, &blk)?, power_penalty_exact(target, &e, &blk)?);
        }
    }

    let e = MixtureExpansion::new(&MalagaParams::paper_figures(0.5))?;
    let blk = BlockageConfig::new(0.1)?;
    for mode in [OutageMode::Exact, OutageMode::Asymptotic] {
        let g = required_gamma_n(1e-6, &e, &blk, mode)?;
        println!("gamma_n for P_out = 1e-6 ({mode:?}): {:.4} dB", 10.0 * g.log10());
    }
    Ok(())
}
