//! Monte-Carlo oracle for the blocked ℳ model.
//!
//! Samples are produced in chunks of [`CHUNK`] draws. Chunk `c` uses
//! ChaCha8 seeded with `seed_from_u64(seed)` on stream `c`, so the sequence
//! depends only on the seed and chunks can run on any thread. Partial
//! statistics are merged in chunk order, which keeps every result
//! bit-identical whatever the thread count.

mod sampler;
mod stats;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::malaga::{BlockageConfig, MalagaChannel, MixtureExpansion};
use crate::outage::SnrPoint;
use crate::quadrature;

pub use sampler::IrradianceSampler;
pub use stats::{
    chi_square, kolmogorov_sf, ks_p_value, two_sample_ks, wilson_interval, ChiSquareResult, KsResult,
    OutageEstimate, Z95,
};

/// Draws per generator stream.
pub const CHUNK: u64 = 1 << 16;
/// Chunks merged per parallel batch; bounds memory independently of `samples`.
const BATCH: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub histogram_bins: usize,
    pub histogram_range: (f64, f64),
}

impl McConfig {
    pub fn new(samples: u64, seed: u64, histogram_bins: usize, histogram_range: (f64, f64)) -> Result<Self> {
        let c = McConfig { samples, seed, histogram_bins, histogram_range };
        c.validate()?;
        Ok(c)
    }

    /// 64 bins from 0 up to the 0.9999 quantile of `channel`.
    pub fn for_channel(samples: u64, seed: u64, channel: &MalagaChannel) -> Result<Self> {
        let hi = quantile(channel, 0.9999)?;
        McConfig::new(samples, seed, 64, (0.0, hi))
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.histogram_range;
        if self.samples == 0 {
            return Err(Error::InvalidParameter("samples must be at least 1".into()));
        }
        if self.histogram_bins == 0 {
            return Err(Error::InvalidParameter("histogram_bins must be at least 1".into()));
        }
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!("histogram_range needs lo < hi, got ({lo}, {hi})")));
        }
        Ok(())
    }
}

/// x with F(x) = q, by bisection.
pub fn quantile(channel: &MalagaChannel, q: f64) -> Result<f64> {
    let mut hi = channel.mean().max(f64::MIN_POSITIVE);
    while channel.cdf(hi)? < q {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::accuracy("quantile", format!("no bracket for q = {q}")));
        }
    }
    let mut lo = 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if channel.cdf(mid)? < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Lazy, constant-memory sample sequence; the same values the parallel
/// runner sees, in chunk order.
#[derive(Debug, Clone)]
pub struct IrradianceStream {
    sampler: IrradianceSampler,
    seed: u64,
    chunk: u64,
    in_chunk: u64,
    remaining: u64,
    rng: ChaCha8Rng,
}

impl Iterator for IrradianceStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if self.remaining == 0 {
            return None;
        }
        if self.in_chunk == CHUNK {
            self.chunk += 1;
            self.in_chunk = 0;
            self.rng = chunk_rng(self.seed, self.chunk);
        }
        self.remaining -= 1;
        self.in_chunk += 1;
        Some(self.sampler.sample(&mut self.rng))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}

/// `cfg.samples` draws from the generative sampler.
pub fn sample_irradiance(
    expansion: &MixtureExpansion,
    blockage: &BlockageConfig,
    cfg: &McConfig,
) -> Result<IrradianceStream> {
    cfg.validate()?;
    stream(IrradianceSampler::new(expansion, blockage)?, cfg)
}

pub fn stream(sampler: IrradianceSampler, cfg: &McConfig) -> Result<IrradianceStream> {
    cfg.validate()?;
    Ok(IrradianceStream { sampler, seed: cfg.seed, chunk: 0, in_chunk: 0, remaining: cfg.samples, rng: chunk_rng(cfg.seed, 0) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    /// Samples below `lo`.
    pub underflow: u64,
    /// Samples at or above `hi`.
    pub overflow: u64,
}

impl Histogram {
    pub fn new(bins: usize, (lo, hi): (f64, f64)) -> Self {
        Histogram { lo, hi, counts: vec![0; bins], underflow: 0, overflow: 0 }
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn edges(&self, j: usize) -> (f64, f64) {
        let w = self.width();
        (self.lo + w * j as f64, if j + 1 == self.counts.len() { self.hi } else { self.lo + w * (j + 1) as f64 })
    }

    fn add(&mut self, x: f64) {
        if x < self.lo {
            self.underflow += 1;
        } else if x >= self.hi {
            self.overflow += 1;
        } else {
            let last = self.counts.len() - 1;
            let j = ((x - self.lo) / self.width()) as usize;
            self.counts[j.min(last)] += 1;
        }
    }

    fn merge(&mut self, other: &Histogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.underflow += other.underflow;
        self.overflow += other.overflow;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.underflow + self.overflow
    }

    /// count / (n · width) per bin.
    pub fn density(&self, j: usize) -> f64 {
        self.counts[j] as f64 / (self.total() as f64 * self.width())
    }

    /// Pearson test against `cdf`, with the two tails as extra bins.
    pub fn chi_square(&self, cdf: impl Fn(f64) -> Result<f64>) -> Result<ChiSquareResult> {
        let n = self.total() as f64;
        let bins = self.counts.len();
        let mut f = Vec::with_capacity(bins + 1);
        for j in 0..=bins {
            f.push(cdf(if j == bins { self.hi } else { self.edges(j).0 })?);
        }
        let mut observed = vec![self.underflow];
        let mut expected = vec![n * f[0]];
        for j in 0..bins {
            observed.push(self.counts[j]);
            expected.push(n * (f[j + 1] - f[j]).max(0.0));
        }
        observed.push(self.overflow);
        expected.push(n * (1.0 - f[bins]).max(0.0));
        chi_square(&observed, &expected)
    }
}

/// Points 0 = g₀ < g₁ < … with F(g_{j+1}) - F(g_j) ≤ tol and 1 - F(g_last) ≤ tol.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfGrid {
    pub points: Vec<f64>,
    pub cdf: Vec<f64>,
}

/// Anchor spacing in probability; anchors come straight from the CDF.
const ANCHOR_TOL: f64 = 1e-2;
/// Largest accepted gap between accumulated pdf pieces and the next anchor.
const ANCHOR_MISMATCH: f64 = 1e-10;

impl CdfGrid {
    /// Anchors are placed by bisection on `cdf`. Between anchors the grid is
    /// refined by accumulating 7-point Gauss–Legendre integrals of `pdf`; an
    /// interval whose accumulated mass misses the next anchor by more than
    /// 1e-10 is refined on `cdf` directly instead.
    pub fn build(
        cdf: impl Fn(f64) -> Result<f64> + Sync,
        pdf: impl Fn(f64) -> Result<f64> + Sync,
        scale: f64,
        tol: f64,
    ) -> Result<Self> {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::InvalidParameter(format!("grid tolerance must lie in (0, 1), got {tol}")));
        }
        let mut hi = scale.max(f64::MIN_POSITIVE);
        while 1.0 - cdf(hi)? > tol {
            hi *= 2.0;
            if hi > 1e12 * scale {
                return Err(Error::accuracy("CdfGrid::build", "upper tail does not fall below tolerance"));
            }
        }
        let start: Vec<(f64, f64)> =
            (0..=64).map(|j| hi * j as f64 / 64.0).map(|x| Ok((x, cdf(x)?))).collect::<Result<_>>()?;
        let anchors = refine_on_cdf(&cdf, start, tol.max(ANCHOR_TOL))?;
        if tol >= ANCHOR_TOL {
            return Ok(CdfGrid::from_pairs(&anchors));
        }
        let pieces = anchors
            .par_windows(2)
            .map(|w| match accumulate_pdf(&pdf, w[0], w[1], tol) {
                Some(v) => Ok(v),
                None => refine_on_cdf(&cdf, vec![w[0], w[1]], tol),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut pairs = vec![anchors[0]];
        for p in pieces {
            pairs.extend_from_slice(&p[1..]);
        }
        Ok(CdfGrid::from_pairs(&pairs))
    }

    fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        CdfGrid { points: pairs.iter().map(|p| p.0).collect(), cdf: pairs.iter().map(|p| p.1).collect() }
    }

    pub fn for_channel(channel: &MalagaChannel, tol: f64) -> Result<Self> {
        CdfGrid::build(|x| channel.cdf(x), |x| channel.pdf(x), channel.mean(), tol)
    }

    /// Cell of `x`: j with g_{j-1} < x ≤ g_j; the last cell is (g_last, ∞).
    fn cell(&self, x: f64) -> usize {
        self.points.partition_point(|&g| g < x)
    }

    /// Upper bound on the KS distance from cell counts. Within a cell both
    /// CDFs are monotone, so the gap is bounded by the cell's corners.
    pub fn ks(&self, counts: &[u64]) -> KsResult {
        let n: u64 = counts.iter().sum();
        let nf = n as f64;
        let mut cum = counts[0];
        let mut d: f64 = (cum as f64 / nf - self.cdf[0]).abs();
        for j in 0..self.points.len() {
            let f_lo = self.cdf[j];
            let f_hi = self.cdf.get(j + 1).copied().unwrap_or(1.0);
            let c_lo = cum as f64 / nf;
            cum += counts[j + 1];
            let c_hi = cum as f64 / nf;
            d = d.max(c_hi - f_lo).max(f_hi - c_lo);
        }
        KsResult { statistic: d, p_value: ks_p_value(d, nf) }
    }
}

/// Bisects every interval whose CDF increment exceeds `tol`.
fn refine_on_cdf(cdf: &(impl Fn(f64) -> Result<f64> + Sync), mut pts: Vec<(f64, f64)>, tol: f64) -> Result<Vec<(f64, f64)>> {
    loop {
        let mids: Vec<f64> =
            pts.windows(2).filter(|w| w[1].1 - w[0].1 > tol).map(|w| 0.5 * (w[0].0 + w[1].0)).collect();
        if mids.is_empty() {
            return Ok(pts);
        }
        let vals = mids.par_iter().map(|&x| Ok((x, cdf(x)?))).collect::<Result<Vec<_>>>()?;
        pts.extend(vals);
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pts.len() > 50_000_000 {
            return Err(Error::accuracy("CdfGrid::build", "grid refinement did not terminate"));
        }
    }
}

/// Points between two anchors from accumulated pdf integrals, or `None`
/// when the pdf is unusable or the total misses the right anchor.
fn accumulate_pdf(pdf: &impl Fn(f64) -> Result<f64>, a: (f64, f64), b: (f64, f64), tol: f64) -> Option<Vec<(f64, f64)>> {
    let f = |x: f64| pdf(x).ok().filter(|v| v.is_finite()).unwrap_or(f64::NAN);
    let mut out = vec![a];
    // stack of (lo, hi, mass), processed left to right
    let mut stack = vec![(a.0, b.0, quadrature::gauss_legendre7(f, a.0, b.0))];
    let mut acc = a.1;
    while let Some((lo, hi, mass)) = stack.pop() {
        if !mass.is_finite() {
            return None;
        }
        if mass > tol {
            let mid = 0.5 * (lo + hi);
            if !(mid > lo && mid < hi) {
                return None;
            }
            stack.push((mid, hi, quadrature::gauss_legendre7(f, mid, hi)));
            stack.push((lo, mid, quadrature::gauss_legendre7(f, lo, mid)));
        } else {
            acc += mass;
            out.push((hi, acc));
        }
    }
    if (acc - b.1).abs() > ANCHOR_MISMATCH {
        return None;
    }
    let last = out.len() - 1;
    out[last] = b;
    Some(out)
}

#[derive(Debug, Clone)]
struct Partial {
    n: u64,
    mean: f64,
    m2: f64,
    hist: Histogram,
    below: Vec<u64>,
    cells: Vec<u64>,
}

impl Partial {
    fn new(cfg: &McConfig, thresholds: usize, cells: usize) -> Self {
        Partial {
            n: 0,
            mean: 0.0,
            m2: 0.0,
            hist: Histogram::new(cfg.histogram_bins, cfg.histogram_range),
            below: vec![0; thresholds],
            cells: vec![0; cells],
        }
    }

    fn merge(&mut self, o: &Partial) {
        let n = self.n + o.n;
        if n == 0 {
            return;
        }
        let delta = o.mean - self.mean;
        let (na, nb) = (self.n as f64, o.n as f64);
        self.mean += delta * nb / n as f64;
        self.m2 += o.m2 + delta * delta * na * nb / n as f64;
        self.n = n;
        self.hist.merge(&o.hist);
        for (a, b) in self.below.iter_mut().zip(&o.below) {
            *a += b;
        }
        for (a, b) in self.cells.iter_mut().zip(&o.cells) {
            *a += b;
        }
    }
}

/// Streaming statistics of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub samples: u64,
    pub seed: u64,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub histogram: Histogram,
    pub outages: Vec<OutageEstimate>,
    /// Counts per [`CdfGrid`] cell when a grid was supplied.
    #[serde(skip)]
    pub grid_counts: Option<Vec<u64>>,
}

impl McSummary {
    pub fn std_error(&self) -> f64 {
        (self.variance / self.samples as f64).sqrt()
    }
}

/// Runs `cfg.samples` draws in parallel, counting draws below each threshold
/// and, when `grid` is given, per grid cell.
pub fn simulate(
    sampler: &IrradianceSampler,
    cfg: &McConfig,
    thresholds: &[f64],
    grid: Option<&CdfGrid>,
) -> Result<McSummary> {
    cfg.validate()?;
    let cells = grid.map_or(0, |g| g.points.len() + 1);
    let n_chunks = cfg.samples.div_ceil(CHUNK);
    let mut total = Partial::new(cfg, thresholds.len(), cells);
    let mut start = 0;
    while start < n_chunks {
        let end = (start + BATCH).min(n_chunks);
        let parts: Vec<Partial> = (start..end)
            .into_par_iter()
            .map(|c| {
                let mut rng = chunk_rng(cfg.seed, c);
                let len = CHUNK.min(cfg.samples - c * CHUNK);
                let mut p = Partial::new(cfg, thresholds.len(), cells);
                for _ in 0..len {
                    let x = sampler.sample(&mut rng);
                    p.n += 1;
                    let delta = x - p.mean;
                    p.mean += delta / p.n as f64;
                    p.m2 += delta * (x - p.mean);
                    p.hist.add(x);
                    for (b, &t) in p.below.iter_mut().zip(thresholds) {
                        if x < t {
                            *b += 1;
                        }
                    }
                    if let Some(g) = grid {
                        p.cells[g.cell(x)] += 1;
                    }
                }
                p
            })
            .collect();
        for p in &parts {
            total.merge(p);
        }
        start = end;
    }
    let n = total.n;
    Ok(McSummary {
        samples: n,
        seed: cfg.seed,
        mean: total.mean,
        variance: if n > 1 { total.m2 / (n - 1) as f64 } else { 0.0 },
        outages: thresholds.iter().zip(&total.below).map(|(&t, &c)| OutageEstimate::new(t, c, n)).collect(),
        histogram: total.hist,
        grid_counts: grid.map(|_| total.cells),
    })
}

/// Fraction of draws with I < γ_n^{-1/2}, with its 95% interval.
pub fn empirical_outage(
    snr: &SnrPoint,
    expansion: &MixtureExpansion,
    blockage: &BlockageConfig,
    cfg: &McConfig,
) -> Result<OutageEstimate> {
    let sampler = IrradianceSampler::new(expansion, blockage)?;
    let s = simulate(&sampler, cfg, &[snr.threshold()], None)?;
    Ok(s.outages[0])
}

/// Result of checking a run against the analytic law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodnessOfFit {
    pub chi_square: ChiSquareResult,
    pub ks: KsResult,
    pub significance: f64,
    pub pass: bool,
}

/// Default KS grid resolution in probability.
pub const KS_GRID_TOL: f64 = 2e-5;

/// Simulates with the generative sampler and tests the histogram
/// (chi-square) and the grid counts (KS) against the analytic law.
pub fn oracle_run(
    channel: &MalagaChannel,
    cfg: &McConfig,
    thresholds: &[f64],
    significance: f64,
) -> Result<(McSummary, GoodnessOfFit)> {
    let sampler = IrradianceSampler::new(&channel.expansion, &channel.blockage)?;
    let grid = CdfGrid::for_channel(channel, KS_GRID_TOL)?;
    let summary = simulate(&sampler, cfg, thresholds, Some(&grid))?;
    let chi = summary.histogram.chi_square(|x| channel.cdf(x))?;
    let ks = grid.ks(summary.grid_counts.as_deref().unwrap_or(&[]));
    let pass = chi.p_value > significance && ks.p_value > significance;
    Ok((summary, GoodnessOfFit { chi_square: chi, ks, significance, pass }))
}
