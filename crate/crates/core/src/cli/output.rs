use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ScenarioConfig;
use crate::malaga::AlphaNudge;

/// Shortest round-trip text; scientific outside [1e-4, 1e15).
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Text(t) => t.clone(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File name inside the output directory.
    pub file: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(file: impl Into<String>, header: Vec<&'static str>) -> Self {
        Table { file: file.into(), header, rows: Vec::new() }
    }

    pub fn render(&self, manifest: &RunManifest) -> String {
        let mut s = format!("# {}\n{}\n", manifest.to_json(), self.header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// Everything needed to regenerate an output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// Canonical arguments; replaying them reproduces the output.
    pub argv: Vec<String>,
    /// Scenario after presets, config file and flags.
    pub scenario: ScenarioConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_nudge: Option<AlphaNudge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str, argv: Vec<String>, scenario: ScenarioConfig) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            subcommand: subcommand.into(),
            argv,
            scenario,
            alpha_nudge: None,
            seed: None,
            outputs: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("manifest serializes")
    }

    /// Reads the manifest line at the top of an output file.
    pub fn from_output_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let first = text.lines().next().unwrap_or_default();
        let json = first
            .strip_prefix("# ")
            .ok_or_else(|| format!("{} does not start with a manifest line", path.display()))?;
        serde_json::from_str(json).map_err(|e| format!("invalid manifest in {}: {e}", path.display()))
    }
}

/// Destination of a run's files.
#[derive(Debug, Clone, PartialEq)]
pub enum Sink {
    Stdout,
    Dir(PathBuf),
}

impl Sink {
    pub fn new(dir: Option<PathBuf>) -> Self {
        dir.map_or(Sink::Stdout, Sink::Dir)
    }

    /// Writes `files` (name, contents). On stdout only the first file is
    /// printed and the rest go to standard error.
    pub fn emit(&self, files: &[(String, String)]) -> std::io::Result<()> {
        match self {
            Sink::Stdout => {
                let mut out = std::io::stdout().lock();
                if let Some((_, body)) = files.first() {
                    out.write_all(body.as_bytes())?;
                }
                out.flush()?;
                let mut err = std::io::stderr().lock();
                for (_, body) in files.iter().skip(1) {
                    err.write_all(body.as_bytes())?;
                }
                Ok(())
            }
            Sink::Dir(dir) => {
                std::fs::create_dir_all(dir)?;
                for (name, body) in files {
                    // names are fixed by the tool and never contain separators
                    debug_assert!(!name.contains(['/', '\\']));
                    std::fs::write(dir.join(name), body)?;
                }
                Ok(())
            }
        }
    }
}
