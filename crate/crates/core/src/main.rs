use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sslab::document::{execute, parse_document, render_report, Document, Format, Operation};
use sslab::oracle::Lattice;
use sslab::verify::{run_suite, Suite, VerifyConfig};

/// Decidable models of prime spectra, semistar and stable operations.
#[derive(Debug, Parser)]
#[command(name = "sslab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Execute every query in a document and print the report.
    Eval {
        file: PathBuf,
        /// Print the report as JSON.
        #[arg(long, conflicts_with = "dot")]
        json: bool,
        /// Also write the Hasse diagrams of enumerated lattices to OUT.
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
    },
    /// Summarize the definitions of a document and classify its operations.
    Analyze { file: PathBuf },
    /// Run a self-verification suite (all suites when none is given).
    Verify {
        #[arg(long)]
        suite: Option<Suite>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest catalog poset used by exhaustive checks.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..=6))]
        poset_size: u64,
        /// Random cases per randomized check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Enumerate the stable-operation lattice of every Prüfer descriptor.
    Enumerate { file: PathBuf },
}

const PARSE_FAILURE: u8 = 2;

fn load(path: &Path) -> Result<Document, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("sslab: cannot read {}: {e}", path.display());
        ExitCode::from(PARSE_FAILURE)
    })?;
    parse_document(&text).map_err(|e| {
        eprintln!("{}:{e}", path.display());
        ExitCode::from(PARSE_FAILURE)
    })
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn eval(file: &Path, json: bool, dot: Option<&Path>) -> Result<ExitCode, ExitCode> {
    let doc = load(file)?;
    let report = execute(&doc);
    let format = if json { Format::Json } else { Format::Text };
    print!("{}", render_report(&report, format).expect("text and json always render"));
    if let Some(out) = dot {
        let diagram = render_report(&report, Format::Dot).map_err(|e| {
            eprintln!("sslab: {e}");
            ExitCode::FAILURE
        })?;
        fs::write(out, diagram).map_err(|e| {
            eprintln!("sslab: cannot write {}: {e}", out.display());
            ExitCode::FAILURE
        })?;
    }
    Ok(status(report.failures() == 0))
}

fn analyze(file: &Path) -> Result<ExitCode, ExitCode> {
    let doc = load(file)?;
    print!("{doc}");
    let mut ok = true;
    for d in &doc.operations {
        let facts = match &d.value {
            Operation::Spectral(s) => Ok(format!("spectral; trivial={}", s.is_trivial())),
            Operation::Stable(p) => Ok(format!("stable; radical={}", p.is_radical())),
            Operation::Radical(r) => r.is_trivial().and_then(|trivial| {
                let verdict = r.is_spectral()?;
                let (qspec, how) = r.qspec()?;
                Ok(format!(
                    "radical; complexity={} trivial={trivial} spectral={} [{}] qspec={} [{how}]",
                    r.complexity(),
                    verdict.answer,
                    verdict.provenance,
                    r.space().render_set(&qspec),
                ))
            }),
        };
        match facts {
            Ok(text) => println!("analysis {}: {text}", d.name),
            Err(e) => {
                ok = false;
                println!("analysis {}: error: {e}", d.name);
            }
        }
    }
    Ok(status(ok))
}

fn enumerate(file: &Path) -> Result<ExitCode, ExitCode> {
    let doc = load(file)?;
    let mut ok = true;
    for d in &doc.descriptors {
        match Lattice::enumerate(&d.value) {
            Ok(lattice) => {
                println!("lattice {} = {}: {} pairs", d.name, d.value.render(), lattice.len());
                for (i, (pair, table)) in lattice.pairs.iter().zip(&lattice.tables).enumerate() {
                    let bits: String = table.bits().iter().map(|&b| if b { '1' } else { '0' }).collect();
                    println!("  [{i}] {} F={bits}", pair.render());
                }
                let covers: Vec<String> = lattice.covers().iter().map(|(a, b)| format!("{a}<{b}")).collect();
                println!("  covers: {}", covers.join(" "));
            }
            Err(e) => {
                ok = false;
                println!("lattice {}: error: {e}", d.name);
            }
        }
    }
    Ok(status(ok))
}

fn verify(suite: Option<Suite>, config: VerifyConfig) -> ExitCode {
    let suites = suite.map_or(Suite::ALL.to_vec(), |s| vec![s]);
    let mut ok = true;
    for suite in suites {
        let report = run_suite(suite, &config);
        for check in &report.checks {
            println!("[{suite}] {check}");
        }
        ok &= report.passed();
    }
    status(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval { file, json, dot } => eval(&file, json, dot.as_deref()),
        Command::Analyze { file } => analyze(&file),
        Command::Enumerate { file } => enumerate(&file),
        Command::Verify { suite, seed, poset_size, samples } => {
            Ok(verify(suite, VerifyConfig { seed, poset_size: poset_size as usize, samples }))
        }
    };
    result.unwrap_or_else(|code| code)
}
