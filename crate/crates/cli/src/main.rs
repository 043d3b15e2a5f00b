//! `sepinv`: separating-invariant checks from the command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sepinv::group::DEFAULT_MAX_ORDER;
use sepinv::io::{OutputFormat, RunConfig};
use sepinv::points::DEFAULT_POINT_BUDGET;

#[derive(Parser)]
#[command(
    name = "sepinv",
    version,
    about = "Separating invariants of finite matrix groups"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Exit with status 1 unless the verdict equals this value.
    #[arg(long, global = true)]
    expect: Option<String>,
    /// Worker threads for parallel scans.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of points enumerated per scan.
    #[arg(long, global = true, default_value_t = DEFAULT_POINT_BUDGET)]
    budget: u64,
    /// Maximum group order accepted by the closure.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ORDER)]
    max_order: usize,
    /// Record wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Finite matrix groups.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Separation checks for candidate invariants.
    Separating {
        #[command(subcommand)]
        command: SeparatingCommand,
    },
    /// Intersection graph of the separating scheme.
    Scheme {
        #[command(subcommand)]
        command: SchemeCommand,
    },
    /// Built-in groups and fixtures.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
    /// Hypersurface refuter for the five-variable torus.
    Derksen {
        #[command(subcommand)]
        command: DerksenCommand,
    },
    /// Generators of the ideal of `f(x) - f(x')`.
    Delta {
        #[command(subcommand)]
        command: DeltaCommand,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Order, reflections and class generation.
    Analyze {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum SeparatingCommand {
    Verify {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        polys: PathBuf,
        /// Highest extension degree scanned.
        #[arg(long = "ext-max", alias = "ext", default_value_t = 2)]
        ext_max: u32,
        /// Sample this many points per level instead of scanning all of them.
        #[arg(long)]
        samples: Option<u64>,
    },
    Compare {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        polys: PathBuf,
        #[arg(long)]
        other: PathBuf,
        #[arg(long, default_value_t = 1)]
        ext: u32,
    },
}

#[derive(Subcommand)]
enum SchemeCommand {
    /// Weighted graph of pairwise intersection dimensions (json or dot).
    Graph {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// The unipotent group over GF(p^p) and its invariants.
    Myeg {
        #[arg(long)]
        p: u64,
        /// Write the group file and the polynomial file.
        #[arg(long, num_args = 2, value_names = ["GROUP", "POLYS"])]
        emit: Option<Vec<PathBuf>>,
        /// `separating` or `generators`.
        #[arg(long, default_value = "separating")]
        set: String,
    },
    /// Every check on the unipotent example.
    VerifyMyeg {
        #[arg(long)]
        p: u64,
        #[arg(long = "ext", alias = "ext-max", default_value_t = 2)]
        ext: u32,
    },
    /// Other built-in groups: sign_2d, cyclic_perm, myeg.
    Builtin {
        #[arg(long)]
        name: String,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, num_args = 2, value_names = ["GROUP", "POLYS"])]
        emit: Option<Vec<PathBuf>>,
        /// Label of the candidate set written with `--emit`.
        #[arg(long)]
        set: Option<String>,
    },
}

#[derive(Subcommand)]
enum DerksenCommand {
    Refute {
        /// Five candidates in the slot variables z1..z6.
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long = "char")]
        characteristic: Option<u64>,
        #[arg(long = "ext-max", alias = "ext", default_value_t = 2)]
        ext_max: u32,
    },
}

#[derive(Subcommand)]
enum DeltaCommand {
    Emit {
        #[arg(long)]
        polys: PathBuf,
        #[arg(long = "char")]
        characteristic: Option<u64>,
    },
}

impl Global {
    fn config(&self) -> RunConfig {
        RunConfig {
            budget: self.budget,
            max_order: self.max_order,
            seed: self.seed,
            workers: self.workers,
            format: match self.format {
                Format::Json => OutputFormat::Json,
                Format::Text => OutputFormat::Text,
                Format::Dot => OutputFormat::Dot,
            },
            timing: self.timing,
            ..RunConfig::default()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.global.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let config = cli.global.config();
    let outcome = match commands::run(&cli.command, &config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.global.output {
        Some(path) => std::fs::write(path, &outcome.text),
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match &cli.global.expect {
        Some(want) if want != &outcome.verdict => {
            eprintln!("expected verdict `{want}`, got `{}`", outcome.verdict);
            ExitCode::from(1)
        }
        _ => ExitCode::SUCCESS,
    }
}
