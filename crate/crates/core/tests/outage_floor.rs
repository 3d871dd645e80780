//! Where the outage floor at P_b appears as ρ → 1. The blocked branch keeps a
//! scatter component of mean ξ_g, so P_out/P_b is close to 1 only while the
//! threshold γ_n^{-1/2} is far above ξ_g.

use fso_linklab::malaga::{gk_cdf, BlockageConfig, GammaGammaLimit, MalagaParams, MixtureExpansion};
use fso_linklab::outage::{db_to_linear, outage_exact, outage_probability, SnrPoint};

fn ratio(rho: f64, p_b: f64, db: f64) -> f64 {
    let e = MixtureExpansion::new(&MalagaParams::paper_figures(rho)).unwrap();
    outage_probability(db_to_linear(db), &e, &BlockageConfig::new(p_b).unwrap()).unwrap() / p_b
}

#[test]
fn floor_at_rho_0999_is_left_before_120_db() {
    for p_b in [1e-3, 1e-2] {
        let r = ratio(0.999, p_b, 120.0);
        assert!(r < 0.01, "{r}");
        assert!(ratio(0.999, p_b, 60.0) > 0.85);
    }
}

#[test]
fn ratio_is_the_blocked_branch_cdf() {
    let e = MixtureExpansion::new(&MalagaParams::paper_figures(0.999)).unwrap();
    let snr = SnrPoint::from_db(120.0).unwrap();
    let r = outage_exact(&snr, &e, &BlockageConfig::new(1e-2).unwrap()).unwrap();
    let blocked = gk_cdf(snr.threshold(), e.alpha, 1.0, e.xi_g).unwrap();
    assert!((r.blocked_p_out / blocked - 1.0).abs() < 1e-12);
    assert!((r.exact / 1e-2 / blocked - 1.0).abs() < 0.01);
}

#[test]
fn ratio_depends_on_threshold_over_scatter_mean() {
    // ξ_g scales with 1 - ρ, so 10⁴ less scatter matches 80 dB more SNR
    let a = ratio(0.999, 1e-2, 120.0);
    let b = ratio(1.0 - 1e-7, 1e-2, 200.0);
    assert!((a / b - 1.0).abs() < 1e-3, "{a} {b}");
}

#[test]
fn floor_holds_at_120_db_once_scatter_vanishes() {
    for p_b in [1e-3, 1e-2] {
        let r = ratio(1.0 - 1e-7, p_b, 120.0);
        assert!((0.99..=1.01).contains(&r), "{r}");
        let gg = GammaGammaLimit::from_params(&MalagaParams::paper_figures(1.0), p_b).unwrap();
        assert!((gg.cdf(1e-6).unwrap() / p_b - 1.0).abs() < 1e-9);
    }
}
