mod commands;
mod config;
mod failure;
mod scan;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use failure::{CliError, EXIT_OK, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "g2rank", version, about = "Genus-2 Jacobian rank experiments")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand; each falls back to `--config`.
#[derive(Args, Debug, Clone, Default)]
struct GlobalArgs {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the effective configuration here before running.
    #[arg(long, global = true)]
    save_config: Option<PathBuf>,
    /// Box: c1, c2, s1, s2, s1sq or u11.
    #[arg(long = "box", global = true)]
    box_kind: Option<String>,
    #[arg(long, global = true)]
    x: Option<u64>,
    #[arg(long, global = true)]
    y: Option<u64>,
    /// Restrict to one `h`, given as a 4-bit mask with `h3` highest.
    #[arg(long, global = true)]
    h_mask: Option<u8>,
    /// Comma-separated primes.
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Continue from the checkpoint next to `--out`.
    #[arg(long, global = true)]
    resume: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stream the valid models of a box as NDJSON.
    Enumerate(commands::EnumerateArgs),
    /// Certify alpha on one curve, or scan a box.
    Certify(commands::CertifyArgs),
    /// Re-check every record of an NDJSON file.
    Verify(commands::VerifyArgs),
    /// Split family members up to a height bound, checked at good primes.
    SplitFamily(commands::SplitFamilyArgs),
    /// Glue two cubics along their 2-torsion.
    Glue(commands::GlueArgs),
    /// Twist parameter and witness point for a pair of roots.
    Twist(commands::TwistArgs),
    /// Box counts and torsion fractions over a grid.
    Density(commands::DensityArgs),
    /// Counts for the family y^2 = x^5 + a.
    XaExperiment(commands::XaArgs),
    /// Measured multi-scalar multiplication cost against d + n/d.
    RegevCost(commands::RegevArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Enumerate(_) => "enumerate",
            Command::Certify(_) => "certify",
            Command::Verify(_) => "verify",
            Command::SplitFamily(_) => "split-family",
            Command::Glue(_) => "glue",
            Command::Twist(_) => "twist",
            Command::Density(_) => "density",
            Command::XaExperiment(_) => "xa-experiment",
            Command::RegevCost(_) => "regev-cost",
        }
    }
}

fn effective_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.global.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let g = &cli.global;
    cfg.subcommand = cli.command.name().to_string();
    if g.box_kind.is_some() || g.x.is_some() {
        let mut b = cfg.box_spec.take().unwrap_or_default();
        if let Some(k) = &g.box_kind {
            b.kind = k.clone();
        }
        if let Some(x) = g.x {
            b.x = x;
        }
        cfg.box_spec = Some(b);
    }
    if let Some(b) = cfg.box_spec.as_mut() {
        b.y = g.y.or(b.y);
        b.h_mask = g.h_mask.or(b.h_mask);
    }
    if let Some(p) = &g.primes {
        cfg.primes = p.clone();
    }
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if g.out.is_some() {
        cfg.out = g.out.clone();
        cfg.checkpoint = None;
    }
    if cfg.checkpoint.is_none() {
        cfg.checkpoint = cfg.out.as_deref().map(scan::default_checkpoint);
    }
    cfg.check()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = effective_config(&cli)?;
    if let Some(path) = &cli.global.save_config {
        cfg.save(path)?;
    }
    cfg.apply_guards();
    let ctx = commands::Context { cfg, resume: cli.global.resume, h_mask: cli.global.h_mask };
    match cli.command {
        Command::Enumerate(a) => commands::enumerate(&ctx, a),
        Command::Certify(a) => commands::certify(&ctx, a),
        Command::Verify(a) => commands::verify(&ctx, a),
        Command::SplitFamily(a) => commands::split_family(&ctx, a),
        Command::Glue(a) => commands::glue(&ctx, a),
        Command::Twist(a) => commands::twist(&ctx, a),
        Command::Density(a) => commands::density(&ctx, a),
        Command::XaExperiment(a) => commands::xa_experiment(&ctx, a),
        Command::RegevCost(a) => commands::regev_cost(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("g2rank: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
