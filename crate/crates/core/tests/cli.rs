use std::path::Path;
use std::process::{Command, Output};

use fso_linklab::malaga::{BlockageConfig, MalagaChannel, MalagaParams, MixtureExpansion};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fso-linklab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

/// (header, rows) of a CSV after its manifest line.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# {"));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(rows: &[Vec<String>], header: &[String], name: &str) -> Vec<f64> {
    let j = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[j].parse().unwrap()).collect()
}

fn stdout_table(args: &[&str]) -> (Vec<String>, Vec<Vec<String>>) {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    parse_csv(&String::from_utf8(out.stdout).unwrap())
}

#[test]
fn pdf_integrates_to_one() {
    let (h, rows) = stdout_table(&["pdf", "--rho", "0.75", "--lo", "0", "--hi", "50", "--points", "50001"]);
    let x = column(&rows, &h, "x");
    let f = column(&rows, &h, "value");
    let trapz: f64 = x.windows(2).zip(f.windows(2)).map(|(x, f)| 0.5 * (x[1] - x[0]) * (f[0] + f[1])).sum();
    let ch = MalagaChannel::new(MixtureExpansion::new(&MalagaParams::paper_figures(0.75)).unwrap(), BlockageConfig::none());
    let tail = 1.0 - ch.cdf(50.0).unwrap();
    assert!((trapz + tail - 1.0).abs() < 1e-6, "{}", trapz + tail);
}

#[test]
fn mgf_origin_and_cdf_tail() {
    let (h, rows) = stdout_table(&["mgf", "--p-b", "0.3", "--lo", "1e-9", "--hi", "1e-9", "--points", "1"]);
    assert!((column(&rows, &h, "value")[0] - 1.0).abs() < 1e-6);
    let (h, rows) = stdout_table(&["cdf", "--lo", "0", "--hi", "50", "--points", "11"]);
    assert!(*column(&rows, &h, "value").last().unwrap() >= 0.9999);
}

#[test]
fn outage_columns_are_monotone_and_converge() {
    let (h, rows) = stdout_table(&["outage", "--rho", "0.5", "--p-b-list", "0,1"]);
    let db = column(&rows, &h, "gamma_n_db");
    let exact = column(&rows, &h, "p_out_exact");
    let asym = column(&rows, &h, "p_out_asymptotic");
    for j in 1..db.len() {
        if db[j] > db[j - 1] {
            assert!(exact[j] <= exact[j - 1] && asym[j] <= asym[j - 1]);
        }
        if db[j] >= 60.0 {
            assert!((asym[j] / exact[j] - 1.0).abs() <= 0.05);
        }
    }
}

#[test]
fn beam_rows_match_anchor_diameters() {
    for (preset, l, db, dc) in [("beam-moderate", "1600", 0.16, 0.06), ("beam-strong", "800", 0.09, 0.03)] {
        let (h, rows) = stdout_table(&["beam", "--preset", preset, "--lo", l, "--hi", l, "--points", "1"]);
        assert!((column(&rows, &h, "D_b")[0] - db).abs() < 0.01);
        assert!((column(&rows, &h, "D_c")[0] - dc).abs() < 0.005);
    }
    let (h, rows) = stdout_table(&["beam", "--cn2", "0"]);
    assert_eq!(column(&rows, &h, "W"), column(&rows, &h, "W_e"));
}

#[test]
fn exit_codes_and_error_json() {
    let cases: [(&[&str], i32, &str); 5] = [
        (&["mc", "--samples", "0"], 2, "usage"),
        (&["cdf", "--p-b", "2"], 2, "invalid_parameter"),
        (&["frobnicate"], 2, "usage"),
        (&["pdf", "--beta", "2.5", "--epsilon", "1e-300", "--points", "2"], 3, "accuracy"),
        (&["mc", "--samples", "70000", "--analytic", "--significance", "0.9999"], 4, ""),
    ];
    for (args, code, kind) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        if !kind.is_empty() {
            let err = String::from_utf8(out.stderr).unwrap();
            let v: serde_json::Value = serde_json::from_str(err.trim().lines().last().unwrap()).unwrap();
            assert_eq!(v["error"], kind);
            assert_eq!(v["exit_code"], code);
        }
    }
}

fn read(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap()
}

#[test]
fn replay_reproduces_outputs_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let d = |s: &str| dir.path().join(s);
    let cfg = d("scenario.json");
    std::fs::write(&cfg, r#"{"rho": 0.3, "p_b": 0.05, "f0": 2000}"#).unwrap();
    let first = d("first");
    assert!(run(&["outage", "--preset", "paper-figures", "--config", cfg.to_str().unwrap(), "--alpha", "5.5", "--out-dir", first.to_str().unwrap()])
        .status
        .success());
    assert!(run(&["figure", "fig5a", "--out-dir", first.to_str().unwrap()]).status.success());
    assert!(run(&["mc", "--samples", "100000", "--seed", "9", "--analytic", "--out-dir", first.to_str().unwrap()]).status.success());
    let again = d("again");
    for file in ["outage.csv", "fig5a.csv", "mc.csv"] {
        let out = run(&["replay", first.join(file).to_str().unwrap(), "--out-dir", again.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(read(&first.join(file)), read(&again.join(file)), "{file}");
    }
    assert_eq!(read(&first.join("mc_summary.json")), read(&again.join("mc_summary.json")));
}

#[test]
fn mc_is_deterministic_across_thread_counts() {
    let args = ["mc", "--rho", "0.75", "--samples", "300000", "--seed", "3", "--analytic"];
    let a = bin().args(args).env("FSO_LINKLAB_THREADS", "1").output().unwrap();
    let b = bin().args(args).env("FSO_LINKLAB_THREADS", "4").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let (h, rows) = parse_csv(&String::from_utf8(a.stdout).unwrap());
    assert_eq!(h, ["bin_lo", "bin_hi", "count", "density", "analytic_density"]);
    assert_eq!(rows.len(), 64);
}

#[test]
fn figure_writes_only_into_its_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("figs");
    assert!(run(&["figure", "fig6", "--out-dir", out.to_str().unwrap()]).status.success());
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(entries, ["figs"]);
    let (h, rows) = parse_csv(&std::fs::read_to_string(out.join("fig6.csv")).unwrap());
    let rho = column(&rows, &h, "rho");
    let p_b = column(&rows, &h, "p_b");
    let db = column(&rows, &h, "gamma_n_db");
    let p = column(&rows, &h, "p_out");
    for j in 0..rows.len() {
        if rho[j] == 1.0 {
            assert!(p[j] >= p_b[j]);
            if db[j] == 120.0 {
                assert!((p[j] / p_b[j] - 1.0).abs() <= 1e-9);
            }
        }
    }
}
