//! `betakit`: command-line front end. Every command prints one JSON document
//! on stdout and, with `--out DIR`, also writes its artifact files there.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use betakit::example::{example_report, perturb_to_periodic_with, verify_periodic, DEFAULT_ORBIT_BUDGET};
use betakit::language::{enumerate_words, word_counts};
use betakit::pressure::{pressure_by_counting, DEFAULT_ENUMERATION_BUDGET};
use betakit::sequences::sequences_report;
use betakit::{
    is_admissible, spec_verdict, transfer_pressure, Error, HofbauerGraph, KneadingPair, Parameters, Potential, Word,
};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "betakit",
    version,
    about = "Symbolic dynamics of intermediate beta transformations"
)]
struct Cli {
    /// Directory for artifact files (created if missing).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Precision ceiling in bits for certified arithmetic (BETAKIT_MAX_BITS).
    #[arg(long, global = true)]
    max_bits: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Params {
    /// Decimal, `p/q`, or `inv-beta`.
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    /// Decimal, `p/q`, `poly:c0,c1,...@lo,hi`, or `eta-root`.
    #[arg(long)]
    beta: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certified prefixes of the kneading sequences a and b.
    Kneading {
        #[command(flatten)]
        params: Params,
        #[arg(short = 'n', long, default_value_t = 50)]
        n: usize,
    },
    /// Window test of a word against the kneading sequences.
    Admissible {
        word: String,
        #[command(flatten)]
        params: Params,
    },
    /// Counts of admissible words of each length up to `n`.
    Enumerate {
        n: usize,
        #[command(flatten)]
        params: Params,
        /// Also list the words of length `n`.
        #[arg(long)]
        words: bool,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
    },
    /// Hofbauer graph truncated at a depth (DOT and JSON).
    Graph {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// D-sets and the specification verdict.
    Spec {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 400)]
        scan: usize,
    },
    /// Entropy by transfer operator and by word counts.
    Entropy {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 40)]
        depth: usize,
        #[arg(short = 'n', long, default_value_t = 18)]
        n: usize,
    },
    /// Pressure of a potential read from a JSON file.
    Pressure {
        #[command(flatten)]
        params: Params,
        /// `{"range": r, "values": {"<word>": number}}`.
        #[arg(long)]
        potential: PathBuf,
        #[arg(long, default_value_t = 40)]
        depth: usize,
        #[arg(short = 'n', long, default_value_t = 18)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
    },
    /// Decomposition of b and the comparison sequences c and d.
    Sequences {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 200)]
        depth: usize,
        /// Kneading digits scanned for `L = max D(a)`; at least `depth`.
        #[arg(long, default_value_t = 400)]
        scan: usize,
    },
    /// The worked example with a non-specified shift.
    Example {
        #[arg(long, default_value_t = 200)]
        depth: usize,
    },
    /// Nudge alpha so that the orbit of 0 becomes periodic.
    Perturb {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_ORBIT_BUDGET)]
        budget: usize,
    },
}

/// What a command produced: the stdout document plus named artifact files.
struct Output {
    doc: Value,
    files: Vec<(&'static str, String)>,
    /// Set when the command ran but its own checks failed.
    failure: Option<Error>,
}

impl Output {
    fn json(doc: Value, file: &'static str) -> Self {
        let text = pretty(&doc);
        Output {
            doc,
            files: vec![(file, text)],
            failure: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Io(_) => "Io",
            CliError::Json(_) => "Json",
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

fn error_json(code: &str, message: &str) -> String {
    serde_json::to_string(&json!({"error": code, "message": message})).expect("json serializes")
}

fn pair(p: &Params, n: usize) -> Result<KneadingPair, Error> {
    KneadingPair::compute(&Parameters::parse(&p.alpha, &p.beta)?, n)
}

fn run(cmd: Command) -> Result<Output, CliError> {
    Ok(match cmd {
        Command::Kneading { params, n } => Output::json(pair(&params, n)?.to_json(), "kneading.json"),
        Command::Admissible { word, params } => {
            let w: Word = word.parse()?;
            let kp = pair(&params, w.len().max(1))?;
            let report = is_admissible(&w, &kp)?;
            let doc = json!({"word": w, "admissible": report.admissible, "failing_window": report.failing_window});
            Output::json(doc, "admissible.json")
        }
        Command::Enumerate {
            n,
            params,
            words,
            budget,
        } => {
            let kp = pair(&params, n.max(1))?;
            let counts = word_counts(n, &kp)?;
            let mut csv = String::from("n,count\n");
            for (i, c) in counts.iter().enumerate() {
                csv.push_str(&format!("{i},{c}\n"));
            }
            let mut doc = json!({
                "n": n,
                "counts_from_zero": counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            });
            if words {
                let total = counts
                    .last()
                    .map(|c| c.to_string().parse::<f64>().unwrap_or(f64::INFINITY))
                    .unwrap_or(1.0);
                if total > budget as f64 {
                    return Err(Error::EnumerationBudgetExceeded {
                        estimated: total,
                        budget,
                    }
                    .into());
                }
                doc["words"] = json!(enumerate_words(n, &kp)?);
            }
            let text = pretty(&doc);
            Output {
                doc,
                files: vec![("enumerate.json", text), ("counts.csv", csv)],
                failure: None,
            }
        }
        Command::Graph { params, depth } => {
            let kp = pair(&params, depth.max(1))?;
            let g = HofbauerGraph::build(&kp, depth)?;
            let doc = g.to_json();
            let text = pretty(&doc);
            Output {
                doc,
                files: vec![("graph.json", text), ("graph.dot", g.export_dot())],
                failure: None,
            }
        }
        Command::Spec { params, scan } => {
            let kp = pair(&params, scan)?;
            let g = HofbauerGraph::build(&kp, scan)?;
            Output::json(spec_verdict(&kp, &g, scan)?.to_json(), "spec.json")
        }
        Command::Entropy { params, depth, n } => {
            let p = Parameters::parse(&params.alpha, &params.beta)?;
            let kp = KneadingPair::compute(&p, depth.max(n).max(1))?;
            let g = HofbauerGraph::build(&kp, depth)?;
            let phi = Potential::zero(&kp)?;
            let transfer = transfer_pressure(&g, &phi)?;
            let counting = pressure_by_counting(&phi, &kp, n)?;
            let doc = json!({
                "log_beta": p.beta().to_f64().ln(),
                "transfer": transfer,
                "counting": counting.per_n,
            });
            Output::json(doc, "entropy.json")
        }
        Command::Pressure {
            params,
            potential,
            depth,
            n,
            budget,
        } => {
            let kp = pair(&params, depth.max(n).max(1))?;
            let raw: Value = serde_json::from_str(&std::fs::read_to_string(&potential)?)?;
            let phi = Potential::from_json(&raw, &kp)?;
            let words = word_counts(n, &kp)?
                .last()
                .map(|c| c.to_string().parse::<f64>().unwrap_or(f64::INFINITY));
            if let Some(w) = words.filter(|&w| w > budget as f64) {
                return Err(Error::EnumerationBudgetExceeded { estimated: w, budget }.into());
            }
            let g = HofbauerGraph::build(&kp, depth)?;
            let transfer = transfer_pressure(&g, &phi)?;
            let mut estimate = pressure_by_counting(&phi, &kp, n)?;
            estimate.spectral = Some(betakit::pressure::Spectral {
                depth,
                value: transfer.value,
            });
            estimate.methods.push("transfer".into());
            let doc = json!({"range": phi.range(), "estimate": estimate, "transfer": transfer});
            let text = pretty(&doc);
            Output {
                doc,
                files: vec![("pressure.json", text), ("pressure.csv", estimate.to_csv())],
                failure: None,
            }
        }
        Command::Sequences { params, depth, scan } => {
            let kp = pair(&params, depth.max(scan))?;
            let g = HofbauerGraph::build(&kp, depth)?;
            Output::json(sequences_report(&kp, &g, depth)?, "sequences.json")
        }
        Command::Example { depth } => {
            let report = example_report(depth)?;
            let failure = report
                .checks
                .iter()
                .find(|c| !c.passed)
                .map(|c| Error::VerificationFailed(format!("{}: {}", c.name, c.detail)));
            let mut out = Output::json(report.to_json(), "example.json");
            out.failure = failure;
            out
        }
        Command::Perturb { params, tol, budget } => {
            let p = Parameters::parse(&params.alpha, &params.beta)?;
            let pert = perturb_to_periodic_with(&p, tol, budget)?;
            verify_periodic(&pert, p.beta(), 256)?;
            let mut doc = pert.to_json();
            doc["alpha"] = json!(p.alpha().describe());
            doc["beta"] = json!(p.beta().describe());
            doc["tolerance"] = json!(tol);
            doc["verified_bits"] = json!(256);
            Output::json(doc, "perturb.json")
        }
    })
}

fn write_files(dir: &Path, files: &[(&'static str, String)]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, text) in files {
        std::fs::write(dir.join(name), text)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", error_json("Usage", e.to_string().trim()));
            return ExitCode::from(2);
        }
    };
    if let Some(bits) = cli.max_bits {
        std::env::set_var("BETAKIT_MAX_BITS", bits.to_string());
    }
    let result = run(cli.command).and_then(|out| {
        if let Some(dir) = &cli.out {
            write_files(dir, &out.files)?;
        }
        Ok(out)
    });
    match result {
        Ok(out) => {
            print!("{}", pretty(&out.doc));
            match out.failure {
                Some(e) => {
                    eprintln!("{}", error_json(e.code(), &e.to_string()));
                    ExitCode::FAILURE
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("{}", error_json(e.code(), &e.to_string()));
            ExitCode::FAILURE
        }
    }
}
