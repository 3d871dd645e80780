use clap::ValueEnum;
use rayon::prelude::*;

use super::config::Resolved;
use super::output::{Cell, Table};
use crate::beam::BeamScenario;
use crate::error::{Error, Result};
use crate::malaga::{BlockageConfig, GammaGammaLimit, MalagaChannel, MixtureExpansion};
use crate::outage::{
    asymptotic_outage, db_to_linear, outage_probability, power_penalty, required_gamma_n, OutageMode, SnrPoint,
};

/// Coupling factors drawn as separate curves.
pub const RHO_CURVES: [f64; 6] = [0.1, 0.25, 0.5, 0.75, 0.9, 0.99];
/// Blockage probabilities for the single-ρ panels.
pub const P_B_CURVES: [f64; 6] = [0.0, 1e-3, 1e-2, 1e-1, 0.5, 1.0];
/// Outage target for the power-boost panel.
pub const PENALTY_TARGET: f64 = 1e-3;
/// ρ used by the single-ρ panels.
pub const WORST_RHO: f64 = 0.99;
pub const FIG6_P_B: [f64; 3] = [1e-3, 1e-2, 1e-1];
pub const FIG6_GAMMA_DB: [f64; 4] = [30.0, 60.0, 90.0, 120.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureName {
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4,
    Fig5a,
    Fig5b,
    Fig6,
}

impl FigureName {
    pub fn as_str(self) -> &'static str {
        match self {
            FigureName::Fig2b => "fig2b",
            FigureName::Fig3a => "fig3a",
            FigureName::Fig3b => "fig3b",
            FigureName::Fig4 => "fig4",
            FigureName::Fig5a => "fig5a",
            FigureName::Fig5b => "fig5b",
            FigureName::Fig6 => "fig6",
        }
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect()
}

pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    linspace(lo.log10(), hi.log10(), n).into_iter().map(|e| 10f64.powf(e)).collect()
}

fn channel(base: &Resolved, rho: f64, p_b: f64) -> Result<MalagaChannel> {
    let r = base.with_rho(rho);
    Ok(MalagaChannel::new(r.expansion()?, BlockageConfig::new(p_b)?))
}

pub fn build(name: FigureName, base: &Resolved) -> Result<Vec<Table>> {
    match name {
        FigureName::Fig2b => fig2b(base),
        FigureName::Fig3a => fig3a(base),
        FigureName::Fig3b => fig3b(base),
        FigureName::Fig4 => fig4(base),
        FigureName::Fig5a => fig5a(base),
        FigureName::Fig5b => fig5b(base),
        FigureName::Fig6 => fig6(base),
    }
}

/// W_e and ρ₀ against distance for both turbulence strengths and waists of 1 and 2 cm.
fn fig2b(base: &Resolved) -> Result<Vec<Table>> {
    let lengths = linspace(10.0, 3000.0, 300);
    let mut out = Vec::new();
    for (file, preset) in [("fig2b_moderate.csv", BeamScenario::moderate()), ("fig2b_strong.csv", BeamScenario::strong())] {
        let mut t = Table::new(file, vec!["w0", "L", "W", "W_e", "rho0", "D_b", "D_c"]);
        for w0 in [0.01, 0.02] {
            for &l in &lengths {
                let s = BeamScenario { w0, lambda: base.beam.lambda, length: l, ..preset };
                t.rows.push(vec![
                    w0.into(),
                    l.into(),
                    s.beam_radius().into(),
                    s.effective_beam_radius().into(),
                    s.coherence_radius().into(),
                    s.total_blockage_diameter().into(),
                    s.los_blockage_diameter().into(),
                ]);
            }
        }
        out.push(t);
    }
    Ok(out)
}

fn pdf_rows(base: &Resolved, curves: &[(f64, f64)], label: impl Fn(f64, f64) -> f64 + Sync) -> Result<Vec<Vec<Cell>>> {
    let grid = linspace(0.0, 3.0, 301);
    let blocks = curves
        .par_iter()
        .map(|&(rho, p_b)| {
            let ch = channel(base, rho, p_b)?;
            grid.iter().map(|&i| Ok(vec![label(rho, p_b).into(), i.into(), ch.pdf(i)?.into()])).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

/// Density against irradiance for each ρ, without and with certain blockage.
fn fig3a(base: &Resolved) -> Result<Vec<Table>> {
    [(0.0, "fig3a_pb0.csv"), (1.0, "fig3a_pb1.csv")]
        .into_iter()
        .map(|(p_b, file)| {
            let curves: Vec<(f64, f64)> = RHO_CURVES.iter().map(|&r| (r, p_b)).collect();
            let mut t = Table::new(file, vec!["rho", "irradiance", "pdf"]);
            t.rows = pdf_rows(base, &curves, |rho, _| rho)?;
            Ok(t)
        })
        .collect()
}

/// Density against irradiance at ρ = 0.99 for each P_b.
fn fig3b(base: &Resolved) -> Result<Vec<Table>> {
    let curves: Vec<(f64, f64)> = P_B_CURVES.iter().map(|&p| (WORST_RHO, p)).collect();
    let mut t = Table::new("fig3b.csv", vec!["p_b", "irradiance", "pdf"]);
    t.rows = pdf_rows(base, &curves, |_, p_b| p_b)?;
    Ok(vec![t])
}

fn outage_rows(base: &Resolved, curves: &[(f64, f64)], label: impl Fn(f64, f64) -> f64 + Sync) -> Result<Vec<Vec<Cell>>> {
    let grid = linspace(0.0, 120.0, 121);
    let blocks = curves
        .par_iter()
        .map(|&(rho, p_b)| {
            let ch = channel(base, rho, p_b)?;
            grid.iter()
                .map(|&db| {
                    let snr = SnrPoint::from_db(db)?;
                    let exact = outage_probability(snr.gamma_n(), &ch.expansion, &ch.blockage)?;
                    let asym = asymptotic_outage(&snr, &ch.expansion, &ch.blockage).ok();
                    Ok(vec![label(rho, p_b).into(), db.into(), exact.into(), asym.into()])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

/// Exact and asymptotic outage against γ_n for each ρ at P_b = 0 and 1.
fn fig4(base: &Resolved) -> Result<Vec<Table>> {
    [(0.0, "fig4_pb0.csv"), (1.0, "fig4_pb1.csv")]
        .into_iter()
        .map(|(p_b, file)| {
            let curves: Vec<(f64, f64)> = RHO_CURVES.iter().map(|&r| (r, p_b)).collect();
            let mut t = Table::new(file, vec!["rho", "gamma_n_db", "p_out_exact", "p_out_asymptotic"]);
            t.rows = outage_rows(base, &curves, |rho, _| rho)?;
            Ok(t)
        })
        .collect()
}

/// Power boost for P_out = 1e-3 against P_b, from the exact curves and from the asymptote.
fn fig5a(base: &Resolved) -> Result<Vec<Table>> {
    let p_bs = logspace(1e-3, 1.0, 31);
    let mut t = Table::new("fig5a.csv", vec!["rho", "p_b", "delta_db_exact", "delta_db_asymptotic"]);
    let blocks = RHO_CURVES
        .par_iter()
        .map(|&rho| {
            let e = base.with_rho(rho).expansion()?;
            let none = BlockageConfig::none();
            let reference = required_gamma_n(PENALTY_TARGET, &e, &none, OutageMode::Exact)?;
            p_bs.par_iter()
                .map(|&p_b| {
                    let blk = BlockageConfig::new(p_b)?;
                    let exact = match required_gamma_n(PENALTY_TARGET, &e, &blk, OutageMode::Exact) {
                        Ok(g) => Some(10.0 * (g / reference).log10()),
                        Err(Error::Bracket(_)) => None,
                        Err(e) => return Err(e),
                    };
                    Ok(vec![rho.into(), p_b.into(), exact.into(), power_penalty(&e, &blk)?.into()])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    t.rows = blocks.into_iter().flatten().collect();
    Ok(vec![t])
}

/// Exact and asymptotic outage against γ_n at ρ = 0.99 for each P_b.
fn fig5b(base: &Resolved) -> Result<Vec<Table>> {
    let curves: Vec<(f64, f64)> = P_B_CURVES.iter().map(|&p| (WORST_RHO, p)).collect();
    let mut t = Table::new("fig5b.csv", vec!["p_b", "gamma_n_db", "p_out_exact", "p_out_asymptotic"]);
    t.rows = outage_rows(base, &curves, |_, p_b| p_b)?;
    Ok(vec![t])
}

/// Outage against ρ for several P_b and γ_n; ρ = 1 uses the Gamma-Gamma limit.
fn fig6(base: &Resolved) -> Result<Vec<Table>> {
    let mut rhos = linspace(0.0, 0.99, 100);
    rhos.extend([0.995, 0.999, 0.9999, 1.0]);
    let mut t = Table::new("fig6.csv", vec!["gamma_n_db", "p_b", "rho", "p_out"]);
    let mut curves = Vec::new();
    for &db in &FIG6_GAMMA_DB {
        for &p_b in &FIG6_P_B {
            curves.push((db, p_b));
        }
    }
    let blocks = curves
        .par_iter()
        .map(|&(db, p_b)| {
            let g = db_to_linear(db);
            rhos.iter()
                .map(|&rho| {
                    let p = if rho == 1.0 {
                        GammaGammaLimit::from_params(&base.with_rho(rho).model, p_b)?.cdf(g.powf(-0.5))?
                    } else {
                        let e: MixtureExpansion = base.with_rho(rho).expansion()?;
                        outage_probability(g, &e, &BlockageConfig::new(p_b)?)?
                    };
                    Ok(vec![db.into(), p_b.into(), rho.into(), p.into()])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    t.rows = blocks.into_iter().flatten().collect();
    Ok(vec![t])
}
