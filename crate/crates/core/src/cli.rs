//! Command-line dispatch. Exit codes: 0 success, 2 the flow split, 3 a
//! computation or output failure, 4 a configuration error.

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};

use crate::io::{
    connect_command, crosscheck_command, decompose_command, flow_command, localmodel_command, shoot_command,
    stability_command, Config, ConfigError, RunError,
};

#[derive(Debug, Parser)]
#[command(name = "lagflow", version, about = "Flow, shoot and decompose O(n)-invariant Lagrangian spheres")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Fan out over a parameter grid, e.g. `numerics.c_safety=0.2,0.4`.
    #[arg(long, global = true)]
    pub sweep: Option<String>,
    /// Seed for randomised cross-checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the flow from the initial curve.
    Flow,
    /// Constant-phase curves.
    Slag {
        #[command(subcommand)]
        action: SlagAction,
    },
    /// Phase and volume conditions for the initial curve.
    Stability,
    /// Jordan–Hölder decomposition of the initial curve's class.
    Decompose,
    /// Agreement of the three velocity formulas on random curves.
    Crosscheck,
    /// Local-model curves and their phase.
    Localmodel,
}

#[derive(Debug, Subcommand)]
pub enum SlagAction {
    /// Shoot from `slag.root` at phase `slag.phi` along branch `slag.branch`.
    Shoot,
    /// Connector from `slag.root` to `slag.target` with phase in `slag.window`, and the atlas.
    Connect,
}

fn run_one(command: &Command, cfg: &Config, out: &Path, seed: u64) -> Result<i32, RunError> {
    match command {
        Command::Flow => {
            let r = flow_command(cfg, out)?;
            println!("verdict: {:?}", r.verdict);
            for f in &r.finals {
                if let Some(ph) = &f.phase {
                    println!("piece {:?} -> {:?}: phi = {:.9}", f.left_root, f.right_root, ph.phi);
                }
            }
            Ok(r.exit_code())
        }
        Command::Slag { action: SlagAction::Shoot } => {
            let s = shoot_command(cfg, out)?;
            println!("shot {} samples, captured {:?}", s.curve.len(), s.captured);
            Ok(0)
        }
        Command::Slag { action: SlagAction::Connect } => {
            let c = connect_command(cfg, out)?;
            println!("phi_star = {:.12}, branch {}", c.phi_star, c.branch);
            Ok(0)
        }
        Command::Stability => {
            let r = stability_command(cfg, out)?;
            println!("close: {}, vclose: {}, splittings: {}", r.close_ok, r.vclose_ok, r.splittings.len());
            Ok(0)
        }
        Command::Decompose => {
            let d = decompose_command(cfg, out)?;
            for piece in &d.pieces {
                println!("{:?}: phi = {:.9}", piece.root_pair, piece.phi);
            }
            Ok(0)
        }
        Command::Crosscheck => {
            let r = crosscheck_command(cfg, seed, out)?;
            println!("max relative velocity disagreement: {:e}", r.max_relative_disagreement);
            Ok(0)
        }
        Command::Localmodel => {
            let entries = localmodel_command(cfg, out)?;
            for e in &entries {
                println!("c = {}: max |phase| = {:e}", e.c, e.max_abs_phase);
            }
            Ok(0)
        }
    }
}

fn parse_sweep(spec: &str) -> Result<(String, Vec<serde_json::Value>), String> {
    let (key, values) = spec.split_once('=').ok_or("--sweep expects KEY=v1,v2,...")?;
    let values = values
        .split(',')
        .map(|v| serde_json::from_str(v).unwrap_or_else(|_| serde_json::Value::String(v.to_string())))
        .collect();
    Ok((key.to_string(), values))
}

fn set_path(root: &mut serde_json::Value, key: &str, value: serde_json::Value) -> Result<(), String> {
    let mut cur = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let obj = cur.as_object_mut().ok_or_else(|| format!("--sweep: {key} does not name a config field"))?;
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        cur = obj.entry(part.to_string()).or_insert_with(|| serde_json::json!({}));
    }
    Ok(())
}

fn report(e: &RunError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 4 } else { 0 };
        }
    };
    let Some(path) = cli.config.as_deref() else {
        eprintln!("error: --config is required");
        return 4;
    };
    let base = match Config::from_file(path) {
        Ok(c) => c,
        Err(e) => return report(&e.into()),
    };
    let Some(sweep) = &cli.sweep else {
        return run_one(&cli.command, &base, &cli.out, cli.seed).unwrap_or_else(|e| report(&e));
    };
    let (key, values) = match parse_sweep(sweep) {
        Ok(kv) => kv,
        Err(message) => return report(&ConfigError::Invalid { path: path.display().to_string(), message }.into()),
    };
    let mut configs = Vec::new();
    for v in &values {
        let mut json = serde_json::to_value(&base).expect("config serialises");
        let label = format!("{key}={}", v.to_string().trim_matches('"'));
        let cfg = set_path(&mut json, &key, v.clone())
            .map_err(|message| ConfigError::Invalid { path: label.clone(), message })
            .and_then(|_| Config::from_value(json, &label));
        match cfg {
            Ok(c) => configs.push((label, c)),
            Err(e) => return report(&e.into()),
        }
    }
    let codes: Vec<i32> = std::thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .map(|(label, cfg)| {
                let out = cli.out.join(label);
                let command = &cli.command;
                s.spawn(move || {
                    println!("[{label}]");
                    run_one(command, cfg, &out, cli.seed).unwrap_or_else(|e| report(&e))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or(3)).collect()
    });
    codes.into_iter().max().unwrap_or(0)
}
