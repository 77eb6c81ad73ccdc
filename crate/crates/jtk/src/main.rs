use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::json;

use jtk::commands::{run, Command, Options};
use jtk::dsl::{parse, Instance};
use jtk::{hunt, report};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Koszul,
    Jfunction,
    Jcoeffs,
    Localcohom,
    Structure,
    Verify,
    Hunt,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Table,
}

/// j-transforms, Koszul homology and local cohomology of graded modules.
#[derive(Parser, Debug)]
#[command(name = "jtk", version)]
struct Cli {
    command: Cmd,
    /// Instance file (not used by `hunt`).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Sequence to use; defaults to the first one declared.
    #[arg(long)]
    seq: Option<String>,
    /// Degree through which ψ is reported.
    #[arg(long)]
    max_degree: Option<u32>,
    /// Exponent bound for bounded certifications.
    #[arg(long)]
    exp_bound: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of hunt instances.
    #[arg(long, default_value_t = 100)]
    count: u64,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Report file; for `hunt`, the JSON-lines results file (appended to).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(cli: &Cli, doc: &serde_json::Value) -> std::io::Result<()> {
    let text = match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(doc).unwrap()),
        Format::Table => report::table(doc),
    };
    match (&cli.out, cli.command) {
        (Some(p), c) if !matches!(c, Cmd::Hunt) => fs::write(p, text),
        _ => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn threads() -> Option<usize> {
    std::env::var("JTK_THREADS").ok()?.parse().ok().filter(|&n| n > 0)
}

fn run_hunt(cli: &Cli) -> Result<ExitCode, String> {
    let seed = cli.seed.unwrap_or(0);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads() {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| e.to_string())?;
    let sum = pool.install(|| hunt::hunt(seed, cli.count));
    let mut doc = json!({
        "schema": report::SCHEMA,
        "command": "hunt",
        "seed": seed,
        "count": cli.count,
        "results": sum.to_json(),
    });
    match &cli.out {
        Some(p) => {
            let mut f =
                OpenOptions::new().create(true).append(true).open(p).map_err(|e| format!("{}: {e}", p.display()))?;
            for l in &sum.lines {
                writeln!(f, "{l}").map_err(|e| e.to_string())?;
            }
        }
        None => {
            let lines: Vec<serde_json::Value> = sum.lines.iter().map(|l| serde_json::from_str(l).unwrap()).collect();
            doc["records"] = json!(lines);
        }
    }
    emit(cli, &doc).map_err(|e| e.to_string())?;
    Ok(if sum.counterexample_candidates > 0 { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Cmd::Hunt = cli.command {
        return run_hunt(&cli).unwrap_or_else(|e| {
            eprintln!("jtk: {e}");
            ExitCode::from(2)
        });
    }
    let Some(path) = &cli.input else {
        eprintln!("jtk: --input is required for {:?}", cli.command);
        return ExitCode::from(2);
    };
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("jtk: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    let spec = match parse(&text) {
        Ok(s) => s,
        Err(d) => {
            eprintln!("{}:{d}", path.display());
            return ExitCode::from(2);
        }
    };
    let inst = match Instance::build(spec) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    let cmd = match cli.command {
        Cmd::Koszul => Command::Koszul,
        Cmd::Jfunction => Command::JFunction,
        Cmd::Jcoeffs => Command::JCoeffs,
        Cmd::Localcohom => Command::LocalCohom,
        Cmd::Structure => Command::Structure,
        Cmd::Verify => Command::Verify,
        Cmd::Hunt => unreachable!(),
    };
    let opts = Options { seq: cli.seq.clone(), max_degree: cli.max_degree, exp_bound: cli.exp_bound, seed: cli.seed };
    let out = match run(cmd, &inst, &opts) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &out.doc) {
        eprintln!("jtk: {e}");
        return ExitCode::from(2);
    }
    for d in &out.diagnostics {
        eprintln!("jtk: {d}");
    }
    if out.diagnostics.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
