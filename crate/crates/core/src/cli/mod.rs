//! Command-line front end. Every subcommand writes CSV whose first line is a
//! `# {json}` manifest; `replay` re-runs a manifest and reproduces the file
//! byte for byte.
//!
//! Exit codes: 0 success, 2 usage, configuration or I/O error, 3 accuracy
//! failure, 4 goodness-of-fit failure.

pub mod config;
pub mod figures;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::error::Error;
use crate::malaga::MalagaChannel;
use crate::montecarlo::{oracle_run, quantile, simulate, IrradianceSampler, McConfig};
use crate::outage::{asymptotic_outage, outage_probability, SnrPoint};
use config::{Focus, Resolved, ScenarioConfig, PRESETS};
use figures::{linspace, logspace, FigureName};
use output::{fmt_num, Cell, RunManifest, Sink, Table};

/// Caps the worker threads when set to a positive integer.
pub const THREADS_ENV: &str = "FSO_LINKLAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "fso-linklab", version, about = "Málaga fading with LOS blockage: curves, outage, beam geometry and Monte-Carlo checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Density of the irradiance.
    Pdf(CurveArgs),
    /// Distribution function of the irradiance.
    Cdf(CurveArgs),
    /// E[exp(-sI)] on a grid of s.
    Mgf(CurveArgs),
    /// Exact and asymptotic outage against γ_n in dB.
    Outage(OutageArgs),
    /// Beam radius, coherence radius and blockage diameters against distance.
    Beam(BeamArgs),
    /// Data behind one of the reference figures.
    Figure(FigureArgs),
    /// Monte-Carlo histogram, outage estimates and goodness of fit.
    Mc(McArgs),
    /// Re-run the manifest embedded in an output file.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args)]
struct ScenarioArgs {
    /// Built-in parameter set applied before the config file.
    #[arg(long, value_parser = PRESETS)]
    preset: Option<String>,
    /// JSON file with scenario keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    delta_phi: Option<f64>,
    #[arg(long)]
    normalize: Option<bool>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    p_b: Option<f64>,
    #[arg(long)]
    w0: Option<f64>,
    /// Phase-front radius in metres, or "inf".
    #[arg(long, value_parser = Focus::parse)]
    f0: Option<Focus>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    cn2: Option<f64>,
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    obstacle_d: Option<f64>,
}

impl ScenarioArgs {
    fn resolve(&self) -> Result<Resolved, Error> {
        let mut layers = ScenarioConfig::default();
        if let Some(p) = &self.preset {
            layers = layers.overlay(&ScenarioConfig::preset(p)?);
        }
        if let Some(path) = &self.config {
            layers = layers.overlay(&ScenarioConfig::from_json_file(path)?);
        }
        let flags = ScenarioConfig {
            alpha: self.alpha,
            beta: self.beta,
            rho: self.rho,
            omega: self.omega,
            xi: self.xi,
            delta_phi: self.delta_phi,
            normalize: self.normalize,
            epsilon: self.epsilon,
            p_b: self.p_b,
            w0: self.w0,
            f0: self.f0,
            lambda: self.lambda,
            cn2: self.cn2,
            length: self.length,
            obstacle_d: self.obstacle_d,
        };
        layers.overlay(&flags).resolve()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Args)]
struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum)]
    scale: Option<Scale>,
}

/// A grid with every field decided.
struct Grid {
    lo: f64,
    hi: f64,
    points: usize,
    scale: Scale,
}

impl GridArgs {
    fn resolve(&self, lo: f64, hi: f64, points: usize, scale: Scale) -> Result<Grid, Error> {
        let g = Grid {
            lo: self.lo.unwrap_or(lo),
            hi: self.hi.unwrap_or(hi),
            points: self.points.unwrap_or(points),
            scale: self.scale.unwrap_or(scale),
        };
        if g.points == 0 || !(g.lo <= g.hi) || !g.lo.is_finite() || !g.hi.is_finite() {
            return Err(Error::InvalidParameter(format!("bad grid: lo {} hi {} points {}", g.lo, g.hi, g.points)));
        }
        if g.scale == Scale::Log && !(g.lo > 0.0) {
            return Err(Error::InvalidParameter("a log grid needs lo > 0".into()));
        }
        Ok(g)
    }
}

impl Grid {
    fn values(&self) -> Vec<f64> {
        match self.scale {
            Scale::Linear => linspace(self.lo, self.hi, self.points),
            Scale::Log => logspace(self.lo, self.hi, self.points),
        }
    }

    fn args(&self) -> Vec<String> {
        let scale = match self.scale {
            Scale::Linear => "linear",
            Scale::Log => "log",
        };
        vec![
            "--lo".into(),
            fmt_num(self.lo),
            "--hi".into(),
            fmt_num(self.hi),
            "--points".into(),
            self.points.to_string(),
            "--scale".into(),
            scale.into(),
        ]
    }
}

#[derive(Debug, Clone, Args)]
struct CurveArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Directory for output files; standard output when omitted.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutageColumns {
    Exact,
    Asymptotic,
    Both,
}

#[derive(Debug, Clone, Args)]
struct OutageArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// γ_n grid in dB.
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value = "both")]
    mode: OutageColumns,
    /// Sweep over these ρ values instead of the scenario's.
    #[arg(long, value_delimiter = ',')]
    rho_list: Vec<f64>,
    /// Sweep over these P_b values instead of the scenario's.
    #[arg(long, value_delimiter = ',')]
    p_b_list: Vec<f64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct BeamArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Distance grid in metres.
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct FigureArgs {
    #[arg(value_enum)]
    name: FigureName,
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
struct McArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    bins: usize,
    /// Histogram range; defaults to [0, 0.9999 quantile].
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    range: Option<Vec<f64>>,
    /// Add analytic columns and a goodness-of-fit verdict.
    #[arg(long)]
    analytic: bool,
    #[arg(long, default_value_t = 0.01)]
    significance: f64,
    /// γ_n values (dB) at which to estimate the outage.
    #[arg(long, value_delimiter = ',', default_values_t = [20.0, 40.0], allow_hyphen_values = true)]
    gamma_n_db: Vec<f64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct ReplayArgs {
    /// Output file whose manifest line is re-run.
    file: PathBuf,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// Why a run stopped.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Model(Error),
    Io(String),
    Fit(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 2,
            Failure::Model(Error::Accuracy { .. }) => 3,
            Failure::Model(_) => 2,
            Failure::Fit(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Io(_) => "io",
            Failure::Fit(_) => "goodness_of_fit",
            Failure::Model(e) => match e {
                Error::Domain { .. } => "domain",
                Error::Accuracy { .. } => "accuracy",
                Error::DegenerateParameter { .. } => "degenerate_parameter",
                Error::DegenerateModel(_) => "degenerate_model",
                Error::InvalidParameter(_) => "invalid_parameter",
                Error::Bracket(_) => "bracket",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Fit(m) => m.clone(),
            Failure::Model(e) => e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code. Errors are reported on standard error as
/// one JSON object.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            return report(&Failure::Usage(e.render().to_string().trim().to_string()));
        }
    };
    limit_threads();
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(f) => report(&f),
    }
}

fn report(f: &Failure) -> i32 {
    let code = f.code();
    eprintln!("{}", json!({ "error": f.kind(), "message": f.message(), "exit_code": code }));
    code
}

fn limit_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            // fails harmlessly if the global pool already exists
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Pdf(a) => curve("pdf", a),
        Command::Cdf(a) => curve("cdf", a),
        Command::Mgf(a) => curve("mgf", a),
        Command::Outage(a) => outage(a),
        Command::Beam(a) => beam(a),
        Command::Figure(a) => figure(a),
        Command::Mc(a) => mc(a),
        Command::Replay(a) => replay(a),
    }
}

fn manifest(sub: &str, mut argv: Vec<String>, resolved: &Resolved, files: &[&str]) -> RunManifest {
    argv.insert(0, sub.to_string());
    let mut m = RunManifest::new(sub, argv, resolved.config.clone());
    m.alpha_nudge = resolved.model.effective_alpha().1;
    if let Some(n) = m.alpha_nudge {
        m.warnings.push(format!("alpha = {} is an integer; evaluated at {}", n.requested, n.used));
    }
    m.outputs = files.iter().map(|f| f.to_string()).collect();
    m
}

fn emit(out_dir: Option<PathBuf>, m: &RunManifest, tables: &[Table]) -> Result<(), Failure> {
    let files: Vec<(String, String)> = tables.iter().map(|t| (t.file.clone(), t.render(m))).collect();
    Sink::new(out_dir).emit(&files)?;
    Ok(())
}

fn curve(sub: &str, a: CurveArgs) -> Result<(), Failure> {
    let r = a.scenario.resolve()?;
    let grid = match sub {
        "mgf" => a.grid.resolve(1e-2, 1e6, 81, Scale::Log)?,
        _ => a.grid.resolve(0.0, 5.0, 501, Scale::Linear)?,
    };
    let channel = MalagaChannel::new(r.expansion()?, r.blockage);
    let xs = grid.values();
    let values = xs
        .par_iter()
        .map(|&x| match sub {
            "pdf" => channel.pdf(x),
            "cdf" => channel.cdf(x),
            _ => channel.mgf(x),
        })
        .collect::<Result<Vec<f64>, Error>>()?;
    let file = format!("{sub}.csv");
    let mut t = Table::new(file.clone(), vec!["x", "value"]);
    t.rows = xs.iter().zip(&values).map(|(&x, &v)| vec![x.into(), v.into()]).collect();
    let mut argv = r.config.to_args();
    argv.extend(grid.args());
    emit(a.out_dir, &manifest(sub, argv, &r, &[&file]), &[t])
}

fn outage(a: OutageArgs) -> Result<(), Failure> {
    let r = a.scenario.resolve()?;
    let grid = a.grid.resolve(0.0, 120.0, 121, Scale::Linear)?;
    let rhos = if a.rho_list.is_empty() { vec![r.model.rho] } else { a.rho_list.clone() };
    let p_bs = if a.p_b_list.is_empty() { vec![r.blockage.p_b] } else { a.p_b_list.clone() };
    let dbs = grid.values();
    let mut curves = Vec::new();
    for &rho in &rhos {
        for &p_b in &p_bs {
            curves.push((rho, p_b));
        }
    }
    let (want_exact, want_asym) = match a.mode {
        OutageColumns::Exact => (true, false),
        OutageColumns::Asymptotic => (false, true),
        OutageColumns::Both => (true, true),
    };
    let blocks = curves
        .par_iter()
        .map(|&(rho, p_b)| {
            let e = r.with_rho(rho).expansion()?;
            let blk = crate::malaga::BlockageConfig::new(p_b)?;
            dbs.iter()
                .map(|&db| {
                    let snr = SnrPoint::from_db(db)?;
                    let exact = if want_exact { Some(outage_probability(snr.gamma_n(), &e, &blk)?) } else { None };
                    let asym = if want_asym { asymptotic_outage(&snr, &e, &blk).ok() } else { None };
                    Ok(vec![rho.into(), p_b.into(), db.into(), exact.into(), asym.into()])
                })
                .collect::<Result<Vec<Vec<Cell>>, Error>>()
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut t = Table::new("outage.csv", vec!["rho", "p_b", "gamma_n_db", "p_out_exact", "p_out_asymptotic"]);
    t.rows = blocks.into_iter().flatten().collect();
    let mut argv = r.config.to_args();
    argv.extend(grid.args());
    let mode = match a.mode {
        OutageColumns::Exact => "exact",
        OutageColumns::Asymptotic => "asymptotic",
        OutageColumns::Both => "both",
    };
    argv.extend(["--mode".to_string(), mode.to_string()]);
    argv.extend(["--rho-list".to_string(), join_nums(&rhos), "--p-b-list".to_string(), join_nums(&p_bs)]);
    emit(a.out_dir, &manifest("outage", argv, &r, &["outage.csv"]), &[t])
}

fn join_nums(v: &[f64]) -> String {
    v.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(",")
}

fn beam(a: BeamArgs) -> Result<(), Failure> {
    let r = a.scenario.resolve()?;
    let grid = a.grid.resolve(100.0, 3000.0, 30, Scale::Linear)?;
    let classify = r.beam.obstacle_d.is_some();
    let mut header = vec!["L", "W", "W_e", "rho0", "D_b", "D_c"];
    if classify {
        header.push("class");
    }
    let mut t = Table::new("beam.csv", header);
    let mut warnings = Vec::new();
    for l in grid.values() {
        let s = r.beam.with_length(l);
        s.validate()?;
        let mut row: Vec<Cell> = vec![
            l.into(),
            s.beam_radius().into(),
            s.effective_beam_radius().into(),
            s.coherence_radius().into(),
            s.total_blockage_diameter().into(),
            s.los_blockage_diameter().into(),
        ];
        if classify {
            row.push(Cell::Text(s.classify_blockage()?.to_string()));
        }
        for w in s.warnings() {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
        t.rows.push(row);
    }
    let mut argv = r.config.to_args();
    argv.extend(grid.args());
    let mut m = manifest("beam", argv, &r, &["beam.csv"]);
    m.warnings.extend(warnings);
    emit(a.out_dir, &m, &[t])
}

fn figure(a: FigureArgs) -> Result<(), Failure> {
    let mut scenario = a.scenario.clone();
    scenario.preset.get_or_insert_with(|| "paper-figures".to_string());
    let r = scenario.resolve()?;
    let tables = figures::build(a.name, &r)?;
    let files: Vec<&str> = tables.iter().map(|t| t.file.as_str()).collect();
    let argv = std::iter::once(a.name.as_str().to_string()).chain(r.config.to_args()).collect();
    let m = manifest("figure", argv, &r, &files);
    emit(Some(a.out_dir), &m, &tables)
}

fn mc(a: McArgs) -> Result<(), Failure> {
    let r = a.scenario.resolve()?;
    if a.samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    if !(a.significance > 0.0 && a.significance < 1.0) {
        return Err(Failure::Usage("--significance must lie in (0, 1)".into()));
    }
    let channel = MalagaChannel::new(r.expansion()?, r.blockage);
    let range = match &a.range {
        Some(v) => (v[0], v[1]),
        None => (0.0, quantile(&channel, 0.9999)?),
    };
    let cfg = McConfig::new(a.samples, a.seed, a.bins, range)?;
    let snrs = a.gamma_n_db.iter().map(|&db| SnrPoint::from_db(db)).collect::<Result<Vec<_>, Error>>()?;
    let thresholds: Vec<f64> = snrs.iter().map(|s| s.threshold()).collect();
    let (summary, fit) = if a.analytic {
        let (s, g) = oracle_run(&channel, &cfg, &thresholds, a.significance)?;
        (s, Some(g))
    } else {
        let sampler = IrradianceSampler::new(&channel.expansion, &channel.blockage)?;
        (simulate(&sampler, &cfg, &thresholds, None)?, None)
    };

    let h = &summary.histogram;
    let mut header = vec!["bin_lo", "bin_hi", "count", "density"];
    if a.analytic {
        header.push("analytic_density");
    }
    let mut t = Table::new("mc.csv", header);
    for j in 0..h.counts.len() {
        let (lo, hi) = h.edges(j);
        let mut row: Vec<Cell> = vec![lo.into(), hi.into(), h.counts[j].into(), h.density(j).into()];
        if a.analytic {
            row.push(((channel.cdf(hi)? - channel.cdf(lo)?) / (hi - lo)).into());
        }
        t.rows.push(row);
    }

    let mut argv = r.config.to_args();
    argv.extend([
        "--samples".into(),
        a.samples.to_string(),
        "--seed".into(),
        a.seed.to_string(),
        "--bins".into(),
        a.bins.to_string(),
        "--range".into(),
        fmt_num(range.0),
        fmt_num(range.1),
        "--significance".into(),
        fmt_num(a.significance),
        "--gamma-n-db".into(),
        join_nums(&a.gamma_n_db),
    ]);
    if a.analytic {
        argv.push("--analytic".into());
    }
    let mut m = manifest("mc", argv, &r, &["mc.csv", "mc_summary.json"]);
    m.seed = Some(a.seed);

    let outages = snrs
        .iter()
        .zip(&summary.outages)
        .map(|(snr, o)| {
            let mut v = json!({
                "gamma_n_db": snr.gamma_n_db(),
                "threshold": o.threshold,
                "count": o.count,
                "estimate": o.estimate,
                "ci95": [o.ci95.0, o.ci95.1],
            });
            if a.analytic {
                v["exact"] = json!(outage_probability(snr.gamma_n(), &channel.expansion, &channel.blockage)?);
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut doc = json!({
        "manifest": m,
        "samples": summary.samples,
        "seed": summary.seed,
        "mean": summary.mean,
        "variance": summary.variance,
        "std_error": summary.std_error(),
        "underflow": h.underflow,
        "overflow": h.overflow,
        "outages": outages,
    });
    if let Some(g) = &fit {
        doc["analytic_mean"] = json!(channel.mean());
        doc["goodness_of_fit"] = json!(g);
        doc["verdict"] = json!(if g.pass { "PASS" } else { "FAIL" });
    }
    let files = vec![
        ("mc.csv".to_string(), t.render(&m)),
        ("mc_summary.json".to_string(), format!("{}\n", serde_json::to_string_pretty(&doc).expect("summary serializes"))),
    ];
    Sink::new(a.out_dir).emit(&files)?;
    match fit {
        Some(g) if !g.pass => Err(Failure::Fit(format!(
            "goodness of fit rejected at {}: chi-square p = {}, KS p = {}",
            fmt_num(g.significance),
            fmt_num(g.chi_square.p_value),
            fmt_num(g.ks.p_value)
        ))),
        _ => Ok(()),
    }
}

fn replay(a: ReplayArgs) -> Result<(), Failure> {
    let m = RunManifest::from_output_file(&a.file).map_err(Failure::Usage)?;
    if m.tool != env!("CARGO_PKG_NAME") {
        return Err(Failure::Usage(format!("manifest was written by {:?}", m.tool)));
    }
    if m.argv.first() != Some(&m.subcommand) {
        return Err(Failure::Usage("manifest argv does not start with its subcommand".into()));
    }
    let mut args: Vec<String> = std::iter::once(m.tool.clone()).chain(m.argv.iter().cloned()).collect();
    if let Some(d) = &a.out_dir {
        args.push("--out-dir".into());
        args.push(d.display().to_string());
    } else if m.subcommand == "figure" {
        return Err(Failure::Usage("replaying a figure needs --out-dir".into()));
    }
    let cli = Cli::try_parse_from(&args).map_err(|e| Failure::Usage(e.render().to_string().trim().to_string()))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(Failure::Usage("a manifest cannot replay another replay".into()));
    }
    dispatch(cli.command)
}
