use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use mwp_core::report::{analyze_source, ReportOptions, WitnessPolicy};

#[derive(Parser)]
#[command(name = "mwp", version, about = "Certifies polynomial growth bounds with the mwp flow analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze every function of a source file.
    Analyze {
        file: PathBuf,
        /// Decide boundedness from the delta graph only; emit no witnesses.
        #[arg(long)]
        fast: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_enum, default_value_t = Witnesses::First)]
        witnesses: Witnesses,
        /// Include the index of assignments leading to ∞.
        #[arg(long)]
        dump_delta_graph: bool,
        /// Compare with the exhaustive nondeterministic calculus (small programs only).
        #[arg(long)]
        oracle_check: bool,
        /// Report wall-clock time per phase.
        #[arg(long)]
        timing: bool,
    },
    /// Analyze every `.c` file of a directory and print a summary table.
    Bench {
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = TableFormat::Markdown)]
        format: TableFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Witnesses {
    All,
    First,
    None,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Markdown,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            file,
            fast,
            format,
            witnesses,
            dump_delta_graph,
            oracle_check,
            timing,
        } => {
            let opts = ReportOptions {
                fast,
                witnesses: match witnesses {
                    Witnesses::All => WitnessPolicy::All,
                    Witnesses::First => WitnessPolicy::First,
                    Witnesses::None => WitnessPolicy::None,
                },
                dump_delta_graph,
                oracle_check,
                timing,
                ..ReportOptions::default()
            };
            analyze(&file, format, &opts)
        }
        Command::Bench { dir, format } => bench(&dir, format),
    }
}

fn analyze(file: &Path, format: Format, opts: &ReportOptions) -> ExitCode {
    let src = match std::fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            return ExitCode::from(1);
        }
    };
    let report = match analyze_source(&src, opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            return ExitCode::from(1);
        }
    };
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    if report.all_bounded() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

struct Row {
    name: String,
    variables: String,
    loc: usize,
    time_ms: String,
    bound: Option<bool>,
    error: Option<String>,
}

fn bench_file(path: &Path) -> Row {
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => {
            return Row {
                name,
                variables: String::new(),
                loc: 0,
                time_ms: String::new(),
                bound: None,
                error: Some(e.to_string()),
            }
        }
    };
    let loc = src.lines().filter(|l| !l.trim().is_empty()).count();
    let opts = ReportOptions {
        fast: true,
        ..ReportOptions::default()
    };
    let t = Instant::now();
    let res = analyze_source(&src, &opts);
    let time_ms = format!("{:.1}", t.elapsed().as_secs_f64() * 1e3);
    match res {
        Ok(r) => Row {
            name,
            variables: r
                .functions
                .iter()
                .map(|f| f.vars.len().to_string())
                .collect::<Vec<_>>()
                .join("+"),
            loc,
            time_ms,
            bound: Some(r.all_bounded()),
            error: None,
        },
        Err(e) => Row {
            name,
            variables: String::new(),
            loc,
            time_ms,
            bound: None,
            error: Some(e.to_string()),
        },
    }
}

fn bench(dir: &Path, format: TableFormat) -> ExitCode {
    let entries = match std::fs::read_dir(dir) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {}: {e}", dir.display());
            return ExitCode::from(1);
        }
    };
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "c"))
        .collect();
    files.sort();
    let rows: Vec<Row> = files.iter().map(|p| bench_file(p)).collect();
    for r in &rows {
        if let Some(e) = &r.error {
            eprintln!("{}: {e}", r.name);
        }
    }
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            let _ = w.write_record(["name", "variables", "loc", "time_ms", "bound"]);
            for r in &rows {
                let bound = match r.bound {
                    Some(true) => "yes",
                    Some(false) => "no",
                    None => "error",
                };
                let _ = w.write_record([r.name.as_str(), &r.variables, &r.loc.to_string(), &r.time_ms, bound]);
            }
            let _ = w.flush();
        }
        TableFormat::Markdown => {
            println!("| program | variables | LOC | time (ms) | bound |");
            println!("|---|---|---|---|---|");
            for r in &rows {
                let bound = match r.bound {
                    Some(true) => "✓",
                    Some(false) => "∞",
                    None => "error",
                };
                println!("| {} | {} | {} | {} | {} |", r.name, r.variables, r.loc, r.time_ms, bound);
            }
        }
    }
    ExitCode::SUCCESS
}
