//! `dendrite`: verify, render and export the four-map similarity system.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dendrite_core::dendrite::adjacency_graph;
use dendrite_core::rational::parse_rational;
use dendrite_core::render::{render_scene, Overlay, SceneSpec};
use dendrite_core::suite::{run_suite, Check, RunConfig};
use dendrite_core::ternary::digits_to_string;
use dendrite_core::{DigitStream, EnumerationMode, Error, Rational};

const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Parser, Debug)]
#[command(
    name = "dendrite",
    version,
    about = "Exact verification of the {0, 1, 2, h} similarity system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the first base-3 digits of c.
    CDigits {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Run one check, or all of them, and print the report document.
    Verify {
        /// all, separation, disjoint, osc, onepoint, tree or density
        #[arg(value_parser = parse_target)]
        target: Target,
        /// Depth for the selected check(s); each check has its own default.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        depth: Option<u64>,
        #[command(flatten)]
        system: SystemArgs,
        /// Also write the report document here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Draw the depth-N cells as SVG.
    Render {
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=10))]
        depth: u64,
        #[arg(long)]
        out: PathBuf,
        /// D, delta, delta-family:M, segment, labels (repeatable or comma-separated)
        #[arg(long, value_delimiter = ',', value_parser = parse_overlay)]
        overlay: Vec<Overlay>,
        #[command(flatten)]
        system: SystemArgs,
    },
    /// Write the depth-N adjacency graph as an edge list.
    Graph {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=7))]
        depth: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        system: SystemArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct SourceArgs {
    /// `canonical`, or `file PATH` for an explicit digit file.
    #[arg(long, num_args = 1..=2, value_names = ["MODE", "PATH"], default_value = "canonical")]
    mode: Vec<String>,
}

#[derive(Args, Debug, Clone)]
struct SystemArgs {
    /// The parameter h as an exact rational P/Q.
    #[arg(long, default_value = "2/9", value_parser = parse_h)]
    h: Rational,
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u64).range(1..))]
    precision_start: u64,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    precision_cap: u64,
    #[command(flatten)]
    source: SourceArgs,
}

#[derive(Debug, Clone, Copy)]
enum Target {
    All,
    One(Check),
}

fn parse_target(s: &str) -> Result<Target, String> {
    if s == "all" {
        return Ok(Target::All);
    }
    s.parse().map(Target::One).map_err(|e: Error| e.to_string())
}

fn parse_overlay(s: &str) -> Result<Overlay, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_h(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A failure with the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("cannot write {}: {e}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::usage(e)
    }
}

fn open_source(args: &SourceArgs) -> Result<(EnumerationMode, String), Failure> {
    match args.mode.as_slice() {
        [m] if m == "canonical" => Ok((EnumerationMode::Canonical, "canonical".into())),
        [m, path] if m == "file" => {
            let stream = DigitStream::from_file(Path::new(path))?;
            Ok((stream.mode().clone(), format!("file:{path}")))
        }
        [m] if m == "file" => Err(Failure::usage("--mode file needs a PATH")),
        other => Err(Failure::usage(format!(
            "unknown mode {:?} (expected canonical or file PATH)",
            other.join(" ")
        ))),
    }
}

fn run_config(args: &SystemArgs) -> Result<RunConfig, Failure> {
    let (mode, mode_label) = open_source(&args.source)?;
    if args.precision_start > args.precision_cap {
        return Err(Failure::usage(
            "--precision-start must not exceed --precision-cap",
        ));
    }
    Ok(RunConfig {
        h: args.h.clone(),
        precision_start: args.precision_start as usize,
        precision_cap: args.precision_cap as usize,
        mode,
        mode_label,
        ..RunConfig::default()
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::CDigits { count, source } => {
            let (mode, _) = open_source(&source)?;
            let digits = DigitStream::from_mode(mode).c_digits(count as usize)?;
            println!("{}", digits_to_string(&digits));
            Ok(0)
        }
        Command::Verify {
            target,
            depth,
            system,
            report,
        } => {
            let mut config = run_config(&system)?;
            let checks: Vec<Check> = match target {
                Target::All => Check::ALL.to_vec(),
                Target::One(check) => vec![check],
            };
            if let Some(d) = depth {
                for &check in &checks {
                    config.set_depth(check, d as usize);
                }
            }
            let doc = run_suite(&config, &checks)?;
            let text = doc.render();
            if let Some(path) = &report {
                write_file(path, &text)?;
            }
            io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::io(Path::new("<stdout>"), e))?;
            for r in &doc.reports {
                eprintln!(
                    "{:<11} depth {:<2} {:>8} items  {}",
                    r.check_name, r.depth, r.items_checked, r.result
                );
            }
            Ok(doc.overall().exit_code() as u8)
        }
        Command::Render {
            depth,
            out,
            overlay,
            system,
        } => {
            let config = run_config(&system)?;
            let sys = config.system()?;
            sys.base_triangle()?;
            let spec = SceneSpec::new(depth as usize).with_overlays(&overlay);
            let svg = render_scene(&sys, &spec)?;
            write_file(&out, &svg)?;
            eprintln!("wrote {} cells to {}", 1u64 << (2 * depth), out.display());
            Ok(0)
        }
        Command::Graph { depth, out, system } => {
            let config = run_config(&system)?;
            let sys = config.system()?;
            sys.base_triangle()?;
            let g = adjacency_graph(&sys, depth as usize)?;
            write_file(&out, &g.edge_list())?;
            eprintln!(
                "{} vertices, {} edges, {} undecided pairs",
                g.vertices.len(),
                g.edges.len(),
                g.unknown_pairs.len()
            );
            Ok(if g.is_conclusive() { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
