use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use paralab::commands::{self, ExampleOptions, Expectation};
use paralab::config::parse_exponents;
use paralab::{Format, Report, Result, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "paralab",
    version,
    about = "Paraproduct, Carleson and compact bilinear operator experiments on the torus"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalFlags,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalFlags {
    /// Grid size N (power of two, >= 16).
    #[arg(long, global = true)]
    grid_size: Option<usize>,
    #[arg(long, global = true)]
    jmin: Option<u32>,
    #[arg(long, global = true)]
    jmax: Option<u32>,
    /// zero | cos:k | bump:center:width | lacunary:J:seed | file:path
    #[arg(long, global = true)]
    symbol: Option<String>,
    /// Exponent pairs "p:q,p:q" with 1/p + 1/q = 1/2.
    #[arg(long, global = true)]
    exponents: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report destination (stdout when absent).
    #[arg(long, global = true)]
    out: Option<String>,
    /// csv | json
    #[arg(long, global = true)]
    format: Option<Format>,
    /// JSON file mirroring the run configuration; its keys override flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// smooth | raised-cosine
    #[arg(long, global = true)]
    bridge: Option<String>,
    #[arg(long, global = true)]
    max_level: Option<u32>,
    #[arg(long, global = true)]
    restarts: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Partition of unity, Calderon reconstruction and square function.
    Lpcheck,
    /// T(1) identities, duality, Holder-Carleson chain and weak-null decay.
    Paraproduct,
    /// Dyadic Carleson constant and vanishing profile of the symbol.
    Carleson {
        /// Gate the tail/head profile ratio: vanishing (< 0.05) or non-vanishing (> 0.3).
        #[arg(long)]
        expect: Option<Expectation>,
    },
    /// Gallery of bilinear operators: pairing | bessel | diagonal.
    Examples {
        name: String,
        /// Sobolev order of the Bessel example.
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        /// Frequency window M.
        #[arg(long, default_value_t = 64)]
        window: i64,
    },
    /// Rellich tail bound for H^s -> L^2.
    Rellich {
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        /// Comma-separated tail cuts.
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<i64>>,
    },
}

fn build_config(flags: &GlobalFlags) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(v) = flags.grid_size {
        cfg.grid_size = v;
    }
    if let Some(v) = flags.jmin {
        cfg.j_min = v;
    }
    if let Some(v) = flags.jmax {
        cfg.j_max = v;
    }
    if let Some(v) = &flags.symbol {
        cfg.symbol_spec = v.clone();
    }
    if let Some(v) = &flags.exponents {
        cfg.exponents = parse_exponents(v)?;
    }
    if let Some(v) = flags.seed {
        cfg.seed = v;
    }
    if let Some(v) = &flags.out {
        cfg.output_path = Some(v.clone());
    }
    if let Some(v) = flags.format {
        cfg.format = v;
    }
    if let Some(v) = flags.trials {
        cfg.trials = v;
    }
    if let Some(v) = &flags.bridge {
        cfg.bridge = v.clone();
    }
    if flags.max_level.is_some() {
        cfg.max_level = flags.max_level;
    }
    if let Some(v) = flags.restarts {
        cfg.restarts = v;
    }
    if let Some(path) = &flags.config {
        cfg = cfg.overridden_by_file(path)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<Report> {
    let cfg = build_config(&cli.global)?;
    match &cli.command {
        Command::Lpcheck => commands::cmd_lpcheck(&cfg),
        Command::Paraproduct => commands::cmd_paraproduct(&cfg),
        Command::Carleson { expect } => commands::cmd_carleson(&cfg, *expect),
        Command::Examples { name, s, window } => commands::cmd_examples(
            name,
            ExampleOptions {
                window: *window,
                s: *s,
            },
            &cfg,
        ),
        Command::Rellich { s, k } => {
            let ks = k.clone().unwrap_or_else(commands::default_rellich_ks);
            commands::cmd_rellich(*s, &ks, &cfg)
        }
    }
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    let record = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{record}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.to_string().trim(), 2),
    };
    let outcome = run(&cli).and_then(|report| {
        report.emit()?;
        Ok(report)
    });
    match outcome {
        Ok(report) if report.passed => ExitCode::SUCCESS,
        Ok(report) => {
            let failed: Vec<&str> = report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name.as_str())
                .collect();
            let record = serde_json::json!({ "error": "check_failed", "failed": failed });
            eprintln!("{record}");
            ExitCode::from(1)
        }
        Err(e) => fail(e.kind(), &e.to_string(), e.exit_code() as u8),
    }
}
