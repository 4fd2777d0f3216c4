use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use colop_cli::commands::{self, PushoutArgs};
use colop_cli::{load, Preset, Report};

/// Exact computations with colored operads in finite sets.
///
/// Exit status: 0 on success, 1 when a check fails (violations found, an
/// oracle disagreement, a stage that misses its orbit count), 2 on usage or
/// document errors.
#[derive(Parser)]
#[command(name = "colop", version)]
struct Cli {
    /// JSON document declaring colors, symmetric sequences, operads and maps.
    #[arg(long, global = true)]
    doc: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Emit::Text)]
    emit: Emit,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the operad axioms on every instance up to an arity bound.
    Validate {
        /// Operad declared in the document, or a preset (assoc, com, trivial).
        #[arg(long)]
        operad: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Entry sizes of the circle product X∘Y.
    Circle {
        /// Symmetric sequence name, or I for the unit.
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Largest arity computed (all when omitted).
        #[arg(long)]
        bound: Option<usize>,
    },
    /// One entry of the free operad on a symmetric sequence.
    Free {
        #[arg(long)]
        x: String,
        /// Entry as `out:in1,in2,...`.
        #[arg(long)]
        entry: String,
        #[arg(long, default_value_t = 6)]
        max_vertices: usize,
    },
    /// Stages of the free extension along a declared map at one entry.
    Pushout {
        #[arg(long)]
        map: String,
        /// Orbit-representative entry as `out:in1,in2,...`.
        #[arg(long)]
        entry: String,
        #[arg(long, default_value_t = 4)]
        stages: usize,
        #[arg(long, default_value_t = 6)]
        max_vertices: usize,
        /// Also count classes by congruence closure over terms of at most
        /// this many vertices and compare.
        #[arg(long)]
        oracle: Option<usize>,
    },
    /// Arity-0 stages after adjoining a free constant, against |A(j)/Σ_j|.
    #[command(group(ArgGroup::new("source").required(true).args(["preset", "operad"])))]
    Dwyer {
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        #[arg(long)]
        operad: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_j: usize,
    },
    /// Marked trees.
    Trees {
        #[command(subcommand)]
        action: TreesCommand,
    },
}

#[derive(Subcommand)]
enum TreesCommand {
    /// Every marked tree within the bounds, one encoding and |Aut| per line.
    Enumerate {
        #[arg(long, default_value_t = 1)]
        colors: usize,
        #[arg(long, default_value_t = 6)]
        max_vertices: usize,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
    },
}

fn run(cli: &Cli) -> colop_cli::Result<Report> {
    if let Command::Trees { action: TreesCommand::Enumerate { colors, max_vertices, max_arity } } = cli.command {
        return commands::trees(colors, max_vertices, max_arity);
    }
    let model = load(cli.doc.as_deref())?;
    match &cli.command {
        Command::Validate { operad, bound } => commands::validate(&model, operad, *bound),
        Command::Circle { x, y, bound } => commands::circle(&model, x, y, *bound),
        Command::Free { x, entry, max_vertices } => commands::free(&model, x, entry, *max_vertices),
        Command::Pushout { map, entry, stages, max_vertices, oracle } => {
            commands::pushout(&model, &PushoutArgs { map, entry, stages: *stages, max_vertices: *max_vertices, oracle: *oracle })
        }
        Command::Dwyer { preset, operad, max_j } => commands::dwyer(&model, *preset, operad.as_deref(), *max_j),
        Command::Trees { .. } => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.emit {
                Emit::Text => print!("{report}"),
                Emit::Json => println!("{}", report.to_json()),
            }
            if report.failed() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
