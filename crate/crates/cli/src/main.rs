use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use tms_cli::report::write_reports;
use tms_cli::{run_command, Command, RunConfig};

/// Numerics for the regularized three-boson contact model.
#[derive(Parser, Debug)]
#[command(name = "tms", version)]
struct Args {
    /// Config file: `key = value` lines or a flat JSON object.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `out_dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed of random test charges; overrides `seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of grid nodes; overrides `grid_n`.
    #[arg(long = "grid-n", global = true)]
    grid_n: Option<usize>,
    /// Print nothing but errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Critical constants and form-factor constants.
    Constants,
    /// Table of the real-line partial-wave symbols.
    Symbols,
    /// Bound states from zero modes of the charge operator.
    Spectrum,
    /// Stability verdicts and collapse probes over a range of gamma.
    Thomas,
    /// Charge solver round trip and regularity of a smooth solution.
    Charge,
    /// Convergence study of the finite-range approximation.
    Approx,
    /// Property suite; exits nonzero when any property fails.
    Verify {
        /// Run only the properties with this name or topic.
        #[arg(long)]
        suite: Option<String>,
    },
    /// Print the effective configuration.
    Config,
}

fn load(args: &Args) -> Result<RunConfig, tms_cli::CliError> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::parse(&std::fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &args.out {
        cfg.set("out_dir", &out.to_string_lossy())?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(n) = args.grid_n {
        cfg.grid_n = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: Args) -> Result<u8, tms_cli::CliError> {
    let cfg = load(&args)?;
    let cmd = match args.cmd {
        Cmd::Constants => Command::Constants,
        Cmd::Symbols => Command::Symbols,
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Thomas => Command::Thomas,
        Cmd::Charge => Command::Charge,
        Cmd::Approx => Command::Approx,
        Cmd::Verify { suite } => Command::Verify { suite },
        Cmd::Config => {
            print!("{}", cfg.emit());
            return Ok(0);
        }
    };
    let out = run_command(&cmd, &cfg)?;
    let paths = write_reports(&PathBuf::from(&cfg.out_dir), out.command, &out.tables, &out.json)?;
    if !args.quiet {
        for line in &out.lines {
            println!("{line}");
        }
        for p in paths {
            println!("wrote {}", p.display());
        }
    }
    Ok(out.status as u8)
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("tms: {e}");
            ExitCode::from(2)
        }
    }
}
