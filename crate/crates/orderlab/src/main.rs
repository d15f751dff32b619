//! Command-line experiment runner: parse group/window/oracle specs, run
//! solve/probe/certify commands, emit JSON certificates.
//!
//! Exit codes: 0 for a completed run (including unsat / not-found
//! results), 2 when a budget was exhausted, 1 on usage or config errors.

use std::path::PathBuf;
use std::process::exit;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use orderlab::report::{render_artifact, run_config, verify_artifact, ExperimentConfig};
use orderlab::Error;

#[derive(Parser)]
#[command(name = "orderlab", version, about = "experiments on spaces of orders on groups")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Group spec: z:n | heis | free:k | klein | cyclic:k | affine, or a
    /// '+'-joined direct product.
    #[arg(long)]
    group: Option<String>,
    /// Order oracle: lex | norm | magnus | affine-dyn | affine-bi | cone:<file>.
    #[arg(long)]
    oracle: Option<String>,
    /// Axiom class: partial-order | total-order | left-invariant |
    /// bi-invariant | locally-invariant | conradian.
    #[arg(long)]
    class: Option<String>,
    /// Use the ball of this radius as the window.
    #[arg(long)]
    radius: Option<u32>,
    /// ';'-separated window items (words or element literals).
    #[arg(long = "window-words")]
    window_words: Option<String>,
    /// Window file: one word per line, '#' comments.
    #[arg(long = "window-file")]
    window_file: Option<PathBuf>,
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    /// Probe bound.
    #[arg(long = "N")]
    n: Option<u64>,
    /// Coset chain half-length.
    #[arg(long)]
    k: Option<u64>,
    /// Search node budget (decision points).
    #[arg(long)]
    budget: Option<u64>,
    /// Cap on witnesses kept by enumerate.
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long = "max-radius")]
    max_radius: Option<u32>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Read the whole experiment config from a JSON file instead of flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON artifact here (default: print it to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Clone)]
enum Cmd {
    /// Decide window-satisfiability of an axiom class.
    Solve(CommonArgs),
    /// Count/collect all violation-free relations on a window.
    Enumerate(CommonArgs),
    /// Find the smallest ball radius with an unsat certificate.
    Obstruct(CommonArgs),
    /// Bounded recurrence probe for a (g,h) pair on a window.
    Probe(CommonArgs),
    /// Bounded probe for the least n with x y^n > y.
    Conradian(CommonArgs),
    /// Sample the orbit of a window restriction and its limit.
    Orbit(CommonArgs),
    /// Coset-chain linearity and positive-cone closure checks.
    #[command(name = "certify-prop41")]
    CertifyProp41(CommonArgs),
    /// Sample random pairs and check the conjugate telescoping identity.
    #[command(name = "identity-check")]
    IdentityCheck(CommonArgs),
    /// Replay a JSON artifact and recompute it from its embedded config.
    Verify {
        file: PathBuf,
    },
}

fn build_config(command: &str, args: &CommonArgs) -> Result<ExperimentConfig, Error> {
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text)?;
        if cfg.command.is_empty() {
            cfg.command = command.to_string();
        } else if cfg.command != command {
            return Err(Error::Parse(format!(
                "config file is for command `{}`, not `{command}`",
                cfg.command
            )));
        }
        return Ok(cfg);
    }
    let group = args
        .group
        .clone()
        .ok_or_else(|| Error::Parse("missing --group (or --config)".into()))?;
    // a window file is inlined so the embedded config stays replayable
    let window_words = match (&args.window_file, &args.window_words) {
        (Some(_), Some(_)) => {
            return Err(Error::Parse("give either --window-words or --window-file".into()))
        }
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            let items: Vec<String> = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
                .filter(|l| !l.is_empty())
                .collect();
            if items.is_empty() {
                return Err(Error::Parse(format!("window file {} is empty", path.display())));
            }
            Some(items.join(";"))
        }
        (None, ww) => ww.clone(),
    };
    Ok(ExperimentConfig {
        command: command.to_string(),
        group,
        oracle: args.oracle.clone(),
        class: args.class.clone(),
        radius: args.radius,
        window_words,
        g: args.g.clone(),
        h: args.h.clone(),
        x: args.x.clone(),
        y: args.y.clone(),
        n: args.n,
        k: args.k,
        budget: args.budget,
        limit: args.limit,
        max_radius: args.max_radius,
        samples: args.samples,
        seed: args.seed,
    })
}

fn check_thread_env() -> Result<(), Error> {
    // accepted and validated; the current implementation is serial, so a
    // cap of any positive size is already honored
    if let Ok(v) = std::env::var("ORDERLAB_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Error::Parse(format!("ORDERLAB_THREADS must be a positive integer, got `{v}`")))?;
        if n == 0 {
            return Err(Error::Parse("ORDERLAB_THREADS must be a positive integer, got `0`".into()));
        }
    }
    Ok(())
}

fn real_main() -> Result<i32, Error> {
    check_thread_env()?;
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(0);
            }
            eprint!("{e}");
            return Ok(1);
        }
    };
    let start = Instant::now();
    let (command, args) = match &cli.command {
        Cmd::Verify { file } => {
            let text = std::fs::read_to_string(file)?;
            let artifact: serde_json::Value = serde_json::from_str(&text)?;
            verify_artifact(&artifact)?;
            println!("verified {}", file.display());
            println!("wall_ms={}", start.elapsed().as_millis());
            return Ok(0);
        }
        Cmd::Solve(a) => ("solve", a),
        Cmd::Enumerate(a) => ("enumerate", a),
        Cmd::Obstruct(a) => ("obstruct", a),
        Cmd::Probe(a) => ("probe", a),
        Cmd::Conradian(a) => ("conradian", a),
        Cmd::Orbit(a) => ("orbit", a),
        Cmd::CertifyProp41(a) => ("certify-prop41", a),
        Cmd::IdentityCheck(a) => ("identity-check", a),
    };
    let cfg = build_config(command, args)?;
    let run = run_config(&cfg)?;
    for line in &run.summary {
        println!("{line}");
    }
    println!("wall_ms={}", start.elapsed().as_millis());
    let rendered = render_artifact(&run.artifact);
    match &args.out {
        Some(path) => std::fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(run.exit)
}

fn main() {
    match real_main() {
        Ok(code) => exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            exit(1);
        }
    }
}
