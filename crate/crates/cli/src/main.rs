mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{ArgGroup, CommandFactory, Parser, Subcommand};

use commands::Opts;
use report::Report;

/// Exact checks for quantum affine algebras in the Chevalley and Drinfeld presentations.
#[derive(Parser)]
#[command(name = "qaffine", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Affine type, e.g. A2^1, D4^3.
    #[arg(long = "type", global = true)]
    ty: Option<String>,
    /// Write the report as JSON to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Reduction step budget.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Mode window for series relations.
    #[arg(long, global = true, default_value_t = 4)]
    window: i64,
    /// Treat inconclusive and unspecified-constant goals as failures.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Randomized bracket identity checks.
    Identities {
        /// Instances per identity.
        #[arg(long, default_value_t = 500)]
        instances: usize,
    },
    /// Cartan data and the highest root.
    Cartan,
    /// The ε-sequence of a type.
    Epsilon,
    /// Certify one relation instance (twisted: every instance in the window).
    Relations {
        #[arg(long)]
        kind: String,
        /// JSON object with the relation parameters.
        #[arg(long, default_value = "{}")]
        params: String,
    },
    /// Chevalley images under the Drinfeld map.
    Map {
        /// Certify the Chevalley relations and the [e_0, f_0] checkpoint.
        #[arg(long)]
        goals: bool,
        /// Recover Drinfeld generators and the constants a, b.
        #[arg(long)]
        inverse: bool,
    },
    /// Reduce an expression (file path or inline) to normal form.
    Reduce {
        #[arg(long)]
        expr: String,
    },
    /// Replay derivations.
    #[command(group(ArgGroup::new("src").required(true).args(["file", "all"])))]
    Replay {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        all: bool,
    },
    /// Identities, Cartan data, ε-sequence, map goals and bundled replays for a type.
    Suite,
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Identities { .. } => "identities",
            Cmd::Cartan => "cartan",
            Cmd::Epsilon => "epsilon",
            Cmd::Relations { .. } => "relations",
            Cmd::Map { .. } => "map",
            Cmd::Reduce { .. } => "reduce",
            Cmd::Replay { .. } => "replay",
            Cmd::Suite => "suite",
        }
    }
}

fn run(cli: &Cli, report: &mut Report, opts: &Opts) -> qaffine::Result<Option<serde_json::Value>> {
    let cfg = opts.cfg();
    match &cli.cmd {
        Cmd::Identities { instances } => commands::identities(report, *instances, opts.seed)?,
        Cmd::Cartan => commands::cartan(report, &commands::cartan_of(opts)?)?,
        Cmd::Epsilon => commands::epsilon(report, &commands::cartan_of(opts)?)?,
        Cmd::Relations { kind, params } => commands::relations(report, &commands::cartan_of(opts)?, kind, params, opts)?,
        Cmd::Map { goals, inverse } => commands::map(report, &commands::cartan_of(opts)?, *goals, *inverse, &cfg)?,
        Cmd::Reduce { expr } => {
            let c = commands::cartan_of(opts)?;
            return commands::reduce(report, &c.ty.to_string(), expr, &cfg).map(Some);
        }
        Cmd::Replay { file: Some(f), .. } => commands::replay_file(report, f)?,
        Cmd::Replay { .. } => commands::replay_all(report)?,
        Cmd::Suite => commands::suite(report, &commands::cartan_of(opts)?, opts)?,
    }
    Ok(None)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            let usage = Cli::command().render_usage().to_string();
            if !e.to_string().contains(&usage) {
                eprintln!("\n{usage}");
            }
            return ExitCode::from(2);
        }
    };
    let opts = Opts { ty: cli.ty.clone(), seed: cli.seed, budget: cli.budget, window: cli.window };
    let start = Instant::now();
    let mut report = Report::new(cli.cmd.name(), cli.ty.clone());
    let out = run(&cli, &mut report, &opts);
    report.finish(start.elapsed());
    let stdout_json = match out {
        Ok(v) => v,
        Err(e) => {
            eprintln!("qaffine: {e}");
            return ExitCode::from(1);
        }
    };
    match stdout_json {
        Some(v) => println!("{}", serde_json::to_string_pretty(&v).expect("serializable")),
        None => print!("{}", report.to_text()),
    }
    if let Some(path) = &cli.json {
        let body = serde_json::to_string_pretty(&report).expect("serializable");
        if let Err(e) = std::fs::write(path, body + "\n") {
            eprintln!("qaffine: {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(report.exit_code(cli.strict) as u8)
}
