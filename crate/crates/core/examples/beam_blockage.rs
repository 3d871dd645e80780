//! Beam spreading, coherence radius and obstacle classification.

use fso_linklab::beam::BeamScenario;

fn main() -> fso_linklab::Result<()> {
    for (name, s) in [("moderate", BeamScenario::moderate()), ("strong", BeamScenario::strong())] {
        println!(
            "{name}: L = {} m, sigma_1^2 = {:.3}, W = {:.4} m, W_e = {:.4} m, rho0 = {:.4} m",
            s.length,
            s.rytov_variance(),
            s.beam_radius(),
            s.effective_beam_radius(),
            s.coherence_radius()
        );
        println!("  total blockage from D_b = {:.2} cm, LOS blockage from D_c = {:.2} cm", 100.0 * s.total_blockage_diameter(), 100.0 * s.los_blockage_diameter());
        for d in [0.02, 0.06, 0.16, 0.2] {
            println!("  obstacle {:>4.0} cm: {}", 100.0 * d, s.with_obstacle(d).classify_blockage()?);
        }
        for w in s.warnings() {
            println!("  warning: {w}");
        }
    }

    println!("{:>6} {:>10} {:>10}", "L", "D_b (cm)", "D_c (cm)");
    let base = BeamScenario::new(0.02, None, 1550e-9, 1e-14, 100.0)?;
    for l in [250.0, 500.0, 1000.0, 2000.0, 4000.0] {
        let s = base.with_length(l);
        println!("{l:>6.0} {:>10.2} {:>10.2}", 100.0 * s.total_blockage_diameter(), 100.0 * s.los_blockage_diameter());
    }
    Ok(())
}
