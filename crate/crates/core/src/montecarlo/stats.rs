use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::special::upper_incomplete_gamma_regularized;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Outage fraction with its 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageEstimate {
    pub threshold: f64,
    pub count: u64,
    pub samples: u64,
    pub estimate: f64,
    pub ci95: (f64, f64),
    /// Binomial standard error √(p(1-p)/n) at the estimate.
    pub std_error: f64,
}

impl OutageEstimate {
    /// Wilson interval, or [0, 3/n] when nothing was observed.
    pub fn new(threshold: f64, count: u64, samples: u64) -> Self {
        let n = samples as f64;
        let p = count as f64 / n;
        let ci95 = if count == 0 { (0.0, (3.0 / n).min(1.0)) } else { wilson_interval(count, samples, Z95) };
        OutageEstimate { threshold, count, samples, estimate: p, ci95, std_error: (p * (1.0 - p) / n).sqrt() }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci95.0 <= p && p <= self.ci95.1
    }

    /// |estimate - p| in units of the binomial standard error at p.
    pub fn z_score(&self, p: f64) -> f64 {
        let se = (p * (1.0 - p) / self.samples as f64).sqrt();
        (self.estimate - p).abs() / se
    }
}

pub fn wilson_interval(count: u64, samples: u64, z: f64) -> (f64, f64) {
    let n = samples as f64;
    let p = count as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// P(K > λ) for the Kolmogorov distribution.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    if lambda < 1.0 {
        // Jacobi-transformed series converges fast for small λ
        let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let s: f64 = (0..20).map(|j| (-(2 * j + 1) as f64 * (2 * j + 1) as f64 * c).exp()).sum();
        return (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0);
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = (-2.0 * jf * jf * lambda * lambda).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Asymptotic KS p-value with Stephens' small-sample correction.
pub fn ks_p_value(d: f64, n_eff: f64) -> f64 {
    let sq = n_eff.sqrt();
    kolmogorov_sf((sq + 0.12 + 0.11 / sq) * d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sample KS test. Sorts both slices in place.
pub fn two_sample_ks(a: &mut [f64], b: &mut [f64]) -> KsResult {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    KsResult { statistic: d, p_value: ks_p_value(d, n * m / (n + m)) }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Bins left after merging those with expected count below 5.
    pub bins_used: usize,
}

/// Pearson test of observed counts against expected counts. Neighbouring
/// bins are pooled left to right until each group expects at least 5.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> Result<ChiSquareResult> {
    let mut groups: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&ob, &ex) in observed.iter().zip(expected) {
        o += ob as f64;
        e += ex;
        if e >= 5.0 {
            groups.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if o > 0.0 || e > 0.0 {
        match groups.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => groups.push((o, e)),
        }
    }
    let statistic: f64 = groups.iter().map(|&(o, e)| if e > 0.0 { (o - e).powi(2) / e } else { 0.0 }).sum();
    let dof = groups.len().saturating_sub(1).max(1);
    let p_value = upper_incomplete_gamma_regularized(0.5 * dof as f64, 0.5 * statistic)?;
    Ok(ChiSquareResult { statistic, dof, p_value, bins_used: groups.len() })
}
