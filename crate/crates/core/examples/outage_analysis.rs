//! Exact and high-SNR outage, its decomposition over sub-channels and the
//! diversity order.

use fso_linklab::malaga::{BlockageConfig, MalagaParams, MixtureExpansion};
use fso_linklab::outage::{gain_coefficient, outage_exact, subchannel_diversity, SnrPoint};

fn main() -> fso_linklab::Result<()> {
    let e = MixtureExpansion::new(&MalagaParams::paper_figures(0.5))?;
    let blk = BlockageConfig::new(0.1)?;
    println!("b_M = {:.6} with P_b = 0.1, {:.6} without", gain_coefficient(&e, &blk)?, gain_coefficient(&e, &BlockageConfig::none())?);
    for (k, _, g) in e.subchannels() {
        let (d, b) = subchannel_diversity(e.alpha, k as f64, g.mean)?;
        println!("  sub-channel {k}: diversity {d}, gain {b:.6}");
    }

    println!("{:>6} {:>14} {:>14} {:>8}", "dB", "exact", "asymptotic", "ratio");
    for db in (0..=120).step_by(10) {
        let r = outage_exact(&SnrPoint::from_db(db as f64)?, &e, &blk)?;
        let a = r.asymptotic.unwrap_or(f64::NAN);
        println!("{db:>6} {:>14.6e} {:>14.6e} {:>8.4}", r.exact, a, a / r.exact);
    }

    let r = outage_exact(&SnrPoint::new(2e4, 2.0)?, &e, &blk)?;
    println!("at 40 dB: blocked branch {:.4e}", r.blocked_p_out);
    for s in &r.per_subchannel {
        println!("  k = {}: weight {:.4}, outage {:.4e}", s.k, s.weight, s.p_out);
    }
    Ok(())
}
