//! Runs a subcommand from a JSON run configuration and reports where the
//! output files went, the same way the `lagflow` binary does.
//!
//! ```text
//! cargo run --release --example from_config -- configs/unstable_n2.json stability out/
//! ```

use std::path::PathBuf;

use lagflow::io::{
    connect_command, decompose_command, flow_command, localmodel_command, shoot_command, stability_command, Config,
};

fn main() {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(args.next().expect("config path"));
    let what = args.next().unwrap_or_else(|| "stability".into());
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out".into()));
    let cfg = match Config::from_file(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(4);
        }
    };
    let summary = match what.as_str() {
        "flow" => flow_command(&cfg, &out).map(|r| format!("{:?}, {} final pieces", r.verdict, r.finals.len())),
        "shoot" => shoot_command(&cfg, &out).map(|s| format!("{} samples", s.curve.len())),
        "connect" => connect_command(&cfg, &out).map(|s| format!("phase {:.12}", s.phi_star)),
        "stability" => stability_command(&cfg, &out).map(|r| format!("phase condition {}, volume condition {}", r.close_ok, r.vclose_ok)),
        "decompose" => decompose_command(&cfg, &out).map(|d| format!("{} pieces", d.pieces.len())),
        "localmodel" => localmodel_command(&cfg, &out).map(|v| format!("{} curves", v.len())),
        other => {
            eprintln!("unknown command {other}");
            std::process::exit(4);
        }
    };
    match summary {
        Ok(s) => println!("{s}; output in {}", out.display()),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
