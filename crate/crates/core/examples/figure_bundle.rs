//! Writes every figure bundle through the command-line entry point and
//! replays one of them.
//!
//! cargo run --release --example figure_bundle -- [out_dir]

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "figures".into());
    for name in ["fig2b", "fig3a", "fig3b", "fig4", "fig5a", "fig5b", "fig6"] {
        let code = fso_linklab::cli::run(["fso-linklab", "figure", name, "--out-dir", &out]);
        assert_eq!(code, 0, "{name} failed");
    }
    let replay = format!("{out}/replay");
    let code = fso_linklab::cli::run(["fso-linklab", "replay", &format!("{out}/fig4_pb0.csv"), "--out-dir", &replay]);
    assert_eq!(code, 0);
    let a = std::fs::read(format!("{out}/fig4_pb0.csv")).unwrap();
    let b = std::fs::read(format!("{replay}/fig4_pb0.csv")).unwrap();
    println!("wrote figure data to {out}; replay identical: {}", a == b);
}
