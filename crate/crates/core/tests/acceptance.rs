//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::time::Instant;

use fso_linklab::beam::BeamScenario;
use fso_linklab::malaga::{BlockageConfig, MalagaChannel, MalagaParams, MixtureExpansion};
use fso_linklab::montecarlo::{oracle_run, McConfig};
use fso_linklab::outage::{
    asymptotic_outage, gain_coefficient, max_power_penalty, outage_probability, power_penalty, SnrPoint,
};
use fso_linklab::quadrature::exp_sinh;

const ORACLE_RHO: [f64; 3] = [0.2, 0.5, 0.8];
const ORACLE_P_B: [f64; 3] = [0.0, 0.1, 1.0];
const MC_SAMPLES: u64 = 10_000_000;
const SIGNIFICANCE: f64 = 0.01;

fn expansion(rho: f64) -> MixtureExpansion {
    MixtureExpansion::new(&MalagaParams::paper_figures(rho)).expect("preset expands")
}

fn channel(rho: f64, p_b: f64) -> MalagaChannel {
    MalagaChannel::new(expansion(rho), BlockageConfig::new(p_b).unwrap())
}

fn oracle_sets() -> impl Iterator<Item = (f64, f64)> {
    ORACLE_RHO.into_iter().flat_map(|r| ORACLE_P_B.into_iter().map(move |p| (r, p)))
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|j| 10f64.powf(lo.log10() + (hi / lo).log10() * j as f64 / (n - 1) as f64)).collect()
}

/// Least-squares slope of log10(y) against log10(x).
fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.log10()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.log10()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

type Outcome = Result<(bool, String), fso_linklab::Error>;

fn c1_max_penalty() -> Outcome {
    let hi = max_power_penalty(&expansion(0.8))?;
    let lo = max_power_penalty(&expansion(0.2))?;
    let ok = (hi - 36.1).abs() <= 0.15 && (lo - 7.5).abs() <= 0.15;
    Ok((ok, format!("rho=0.8: {hi:.3} dB (36.1), rho=0.2: {lo:.3} dB (7.5), tol 0.15")))
}

fn c2_beam() -> Outcome {
    let m = BeamScenario::new(0.01, None, 1550e-9, 1e-14, 1600.0)?;
    let s = BeamScenario::new(0.01, None, 1550e-9, 0.5e-13, 800.0)?;
    let cm = |d: f64| 100.0 * d;
    let (mb, mc) = (cm(m.total_blockage_diameter()), cm(m.los_blockage_diameter()));
    let (sb, sc) = (cm(s.total_blockage_diameter()), cm(s.los_blockage_diameter()));
    let ok = (15.5..=17.0).contains(&mb) && (5.4..=6.3).contains(&mc) && (8.5..=9.5).contains(&sb) && (2.7..=3.3).contains(&sc);
    Ok((ok, format!("moderate D_b={mb:.2} D_c={mc:.2} cm, strong D_b={sb:.2} D_c={sc:.2} cm")))
}

fn c3_power_boost() -> Outcome {
    let d = power_penalty(&expansion(0.9), &BlockageConfig::new(0.1)?)?;
    Ok(((31.0..=34.0).contains(&d), format!("Delta = {d:.3} dB, window [31, 34]")))
}

fn c4_outage_floor() -> Outcome {
    let e = expansion(0.999);
    let g = 1e12;
    let mut ok = true;
    let mut parts = Vec::new();
    for p_b in [1e-3, 1e-2] {
        let ratio = outage_probability(g, &e, &BlockageConfig::new(p_b)?)? / p_b;
        ok &= (0.99..=1.01).contains(&ratio);
        parts.push(format!("P_b={p_b:e}: P_out/P_b={ratio:.5}"));
    }
    Ok((ok, format!("{}, window [0.99, 1.01]", parts.join(", "))))
}

fn c5_oracle() -> Outcome {
    let thresholds = [SnrPoint::from_db(20.0)?.threshold(), SnrPoint::from_db(40.0)?.threshold()];
    let mut ok = true;
    let mut worst = (f64::INFINITY, f64::INFINITY, 0.0f64);
    for (seed, (rho, p_b)) in oracle_sets().enumerate() {
        let ch = channel(rho, p_b);
        let cfg = McConfig::for_channel(MC_SAMPLES, seed as u64, &ch)?;
        let (summary, gof) = oracle_run(&ch, &cfg, &thresholds, SIGNIFICANCE)?;
        let mut set_ok = gof.pass;
        for (est, db) in summary.outages.iter().zip([20.0, 40.0]) {
            let exact = outage_probability(10f64.powf(db / 10.0), &ch.expansion, &ch.blockage)?;
            let z = est.z_score(exact);
            worst.2 = worst.2.max(z);
            set_ok &= z <= 3.0;
        }
        worst.0 = worst.0.min(gof.chi_square.p_value);
        worst.1 = worst.1.min(gof.ks.p_value);
        if !set_ok {
            println!("    rho={rho} P_b={p_b}: chi2 p={:.4}, KS p={:.4}", gof.chi_square.p_value, gof.ks.p_value);
        }
        ok &= set_ok;
    }
    Ok((ok, format!("9 sets x 1e7: min chi2 p={:.4}, min KS p={:.4}, max outage z={:.2}", worst.0, worst.1, worst.2)))
}

fn c6_mgf_identity() -> Outcome {
    let mut worst = 0.0f64;
    for (rho, p_b) in oracle_sets() {
        let ch = channel(rho, p_b);
        for s in log_grid(1e-2, 1e6, 30) {
            let closed = ch.mgf(s)?;
            let quad = exp_sinh(|u| (-u).exp() * ch.pdf(u / s).unwrap_or(f64::NAN) / s, 0.0, 1e-12)?.value;
            worst = worst.max(((closed - quad) / quad).abs());
        }
    }
    Ok((worst <= 1e-6, format!("max relative error {worst:.3e} over 9 sets x 30 points, tol 1e-6")))
}

fn c7_asymptote() -> Outcome {
    let snr = SnrPoint::from_db(60.0)?;
    let mut worst = 0.0f64;
    for (rho, p_b) in oracle_sets() {
        let e = expansion(rho);
        let blk = BlockageConfig::new(p_b)?;
        let exact = outage_probability(snr.gamma_n(), &e, &blk)?;
        worst = worst.max((asymptotic_outage(&snr, &e, &blk)? / exact - 1.0).abs());
    }
    Ok((worst <= 0.05, format!("max |asymptotic/exact - 1| = {worst:.4e} at 60 dB, tol 0.05")))
}

fn c8_slope() -> Outcome {
    let e = expansion(0.5);
    let blk = BlockageConfig::none();
    let dbs: Vec<f64> = (80..=120).map(f64::from).collect();
    let gs: Vec<f64> = dbs.iter().map(|d| 10f64.powf(d / 10.0)).collect();
    let asym = dbs.iter().map(|&d| asymptotic_outage(&SnrPoint::from_db(d)?, &e, &blk)).collect::<Result<Vec<_>, _>>()?;
    let exact = gs.iter().map(|&g| outage_probability(g, &e, &blk)).collect::<Result<Vec<_>, _>>()?;
    let sa = loglog_slope(&gs, &asym);
    let se = loglog_slope(&gs, &exact);
    let ok = (sa + 0.5).abs() <= 1e-12 && (se + 0.5).abs() <= 0.02;
    Ok((ok, format!("asymptotic slope {sa:.15}, exact slope {se:.5} over [80, 120] dB")))
}

fn c9_mgf_tail() -> Outcome {
    let s = 1e8;
    let mut worst = 0.0f64;
    for (rho, p_b) in oracle_sets() {
        let ch = channel(rho, p_b);
        let b = gain_coefficient(&ch.expansion, &ch.blockage)?;
        worst = worst.max((s * ch.mgf(s)? / b - 1.0).abs());
    }
    Ok((worst <= 1e-4, format!("max |s M(s)/b_M - 1| = {worst:.3e} at s=1e8, tol 1e-4")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 max power penalty anchors", c1_max_penalty),
        ("2 beam geometry anchors", c2_beam),
        ("3 power boost at rho=0.9, P_b=0.1", c3_power_boost),
        ("4 outage floor at rho=0.999, 120 dB", c4_outage_floor),
        ("5 Monte-Carlo oracle equivalence", c5_oracle),
        ("6 MGF closed form vs quadrature", c6_mgf_identity),
        ("7 asymptote at 60 dB", c7_asymptote),
        ("8 diversity slope", c8_slope),
        ("9 MGF tail coefficient", c9_mgf_tail),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!("{} criterion {name}: {detail} [{:.2?}]", if ok { "PASS" } else { "FAIL" }, t.elapsed());
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
