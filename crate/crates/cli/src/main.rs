use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use diffgoppa::code::{build_code, dual_code_residue, min_distance, verify_duality, DistanceMethod, Metric, DEFAULT_BUDGET};
use diffgoppa::design::{
    achieve_block_distance, column_permutation, nmds_g4, nmds_g4_spec, realize_linear_code, reverse_rows, roth_lempel, roth_lempel_spec,
    search_parameters, strong_obstruction, SearchConfig, DEFAULT_SEED,
};
use diffgoppa::io;
use diffgoppa::matrix::row_space_equal;
use diffgoppa::taylor::{act_on_code, seeded_elements, TaylorElement};
use diffgoppa::{Error, Field, FqMatrix};

mod render;

#[derive(Parser)]
#[command(name = "diffgoppa", version, about = "Differential Goppa codes: build, verify, transform and search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; csv applies to matrix outputs only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Cap on enumerated codewords or column subsets (default: $DIFFGOPPA_BUDGET or 10^7).
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[arg(long, global = true)]
    target_distance: Option<usize>,
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Copy, Clone, ValueEnum)]
enum MetricArg {
    Hamming,
    Block,
    Rt,
    Rank,
}

#[derive(Copy, Clone, ValueEnum)]
enum MethodArg {
    Exhaustive,
    Minors,
}

#[derive(Copy, Clone, ValueEnum)]
enum NamedArg {
    RothLempel,
    NmdsG4,
}

#[derive(Subcommand)]
enum Command {
    /// Generator matrix of a spec.
    Build { input: PathBuf },
    /// Minimum distance in one metric.
    Distance {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = MetricArg::Hamming)]
        metric: MetricArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Exhaustive)]
        method: MethodArg,
    },
    /// Dual code from residues of differentials.
    Dual { input: PathBuf },
    /// Compare the residue dual with the linear dual; exit 2 on any failure.
    VerifyDuality { input: PathBuf },
    /// Apply one Taylor element per block (from a file, or seeded at random).
    Act {
        input: PathBuf,
        #[arg(long)]
        elements: Option<PathBuf>,
    },
    /// Change units so that the Hamming distance equals the block distance.
    Sparsify { input: PathBuf },
    /// Randomized unit search for a target Hamming distance.
    Search {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Exhaustive)]
        method: MethodArg,
    },
    /// One-point spec realizing a linear code given as {"field", "matrix"}.
    Realize { input: PathBuf },
    /// Strong-code obstruction for length n and dimension k over F_q.
    Obstruction {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Named generator matrices.
    Named {
        #[arg(value_enum)]
        name: NamedArg,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
    /// Re-emit a generator written by `build` or `dual`.
    Export { input: PathBuf },
}

/// What a command produces: a report, or a matrix with its JSON form.
enum Output {
    Report(Value),
    Matrix(FqMatrix, Value),
}

struct Outcome {
    output: Output,
    verified: bool,
}

impl Outcome {
    fn report(v: Value) -> Outcome {
        Outcome { output: Output::Report(v), verified: true }
    }

    fn matrix(m: FqMatrix, v: Value) -> Outcome {
        Outcome { output: Output::Matrix(m, v), verified: true }
    }
}

struct CliError {
    error: Error,
    context: Value,
}

impl From<Error> for CliError {
    fn from(error: Error) -> CliError {
        CliError { error, context: Value::Null }
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let ctx = json!({"path": path.display().to_string()});
    let text = fs::read_to_string(path).map_err(|e| CliError { error: Error::Parse(e.to_string()), context: ctx.clone() })?;
    serde_json::from_str(&text).map_err(|e| CliError { error: Error::Parse(e.to_string()), context: ctx })
}

fn read_spec(path: &Path) -> Result<diffgoppa::code::CodeSpec, CliError> {
    io::spec_from_json(&read_json(path)?).map_err(|error| CliError { error, context: json!({"path": path.display().to_string()}) })
}

fn budget(cli: &Cli) -> Result<u128, CliError> {
    if let Some(b) = cli.budget {
        return Ok(b);
    }
    match std::env::var("DIFFGOPPA_BUDGET") {
        Ok(s) => s.trim().parse().map_err(|_| CliError {
            error: Error::Parse(format!("DIFFGOPPA_BUDGET={:?} is not a non-negative integer", s)),
            context: Value::Null,
        }),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn method(m: MethodArg) -> DistanceMethod {
    match m {
        MethodArg::Exhaustive => DistanceMethod::Exhaustive,
        MethodArg::Minors => DistanceMethod::MinorCertificate,
    }
}

fn metric(m: MetricArg) -> Metric {
    match m {
        MetricArg::Hamming => Metric::Hamming,
        MetricArg::Block => Metric::Block,
        MetricArg::Rt => Metric::Rt,
        MetricArg::Rank => Metric::Rank,
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let budget = budget(cli)?;
    match &cli.command {
        Command::Build { input } => {
            let code = build_code(&read_spec(input)?)?;
            Ok(Outcome::matrix(code.generator.clone(), io::code_to_json(&code)))
        }
        Command::Distance { input, metric: m, method: meth } => {
            let code = build_code(&read_spec(input)?)?;
            let r = min_distance(&code, metric(*m), method(*meth), budget)?;
            let mut v = io::distance_to_json(code.field(), &r);
            v["length"] = json!(code.length());
            v["dimension"] = json!(code.dimension());
            v["blocks"] = json!(code.blocks);
            Ok(Outcome::report(v))
        }
        Command::Dual { input } => {
            let code = dual_code_residue(&read_spec(input)?)?;
            Ok(Outcome::matrix(code.generator.clone(), io::code_to_json(&code)))
        }
        Command::VerifyDuality { input } => {
            let r = verify_duality(&read_spec(input)?)?;
            let checks: Vec<Value> = r
                .checks
                .iter()
                .zip(['a', 'b', 'c', 'd', 'e'])
                .map(|(c, label)| {
                    let mut v = json!({
                        "check": label.to_string(),
                        "name": c.name,
                        "description": c.description,
                        "status": if c.passed { "pass" } else { "fail" },
                    });
                    if let Some(w) = &c.witness {
                        v["witness"] = json!(w);
                    }
                    v
                })
                .collect();
            let passed = r.all_passed();
            let v = json!({
                "length": r.length,
                "primal_dimension": r.primal_dimension,
                "dual_dimension": r.dual_dimension,
                "checks": checks,
                "status": if passed { "pass" } else { "fail" },
            });
            Ok(Outcome { output: Output::Report(v), verified: passed })
        }
        Command::Act { input, elements } => {
            let spec = read_spec(input)?;
            let code = build_code(&spec)?;
            let f = &spec.field;
            let elems: Vec<TaylorElement> = match elements {
                Some(path) => {
                    let v = read_json(path)?;
                    let arr = v.as_array().ok_or_else(|| CliError::from(Error::Parse("elements file must hold an array".into())))?;
                    arr.iter().map(|e| io::taylor_from_json(f, e)).collect::<Result<_, _>>()?
                }
                None => seeded_elements(f, &code.blocks, cli.seed),
            };
            let moved = act_on_code(&code, &elems)?;
            let uniform = code.blocks.iter().all(|&n| n == code.blocks[0]);
            let mut metrics = serde_json::Map::new();
            for m in [Metric::Hamming, Metric::Block, Metric::Rt, Metric::Rank] {
                if m == Metric::Rank && !uniform {
                    continue;
                }
                let before = min_distance(&code, m, DistanceMethod::Exhaustive, budget)?.value;
                let after = min_distance(&moved, m, DistanceMethod::Exhaustive, budget)?.value;
                let name = serde_json::to_value(m).expect("plain enum");
                metrics.insert(name.as_str().unwrap_or_default().to_string(), json!({"before": before, "after": after, "unchanged": before == after}));
            }
            let mut v = io::code_to_json(&moved);
            v["elements"] = Value::Array(elems.iter().map(io::taylor_to_json).collect());
            v["seed"] = if elements.is_none() { json!(cli.seed) } else { Value::Null };
            v["distances"] = Value::Object(metrics);
            Ok(Outcome::matrix(moved.generator.clone(), v))
        }
        Command::Sparsify { input } => {
            let spec = read_spec(input)?;
            let (new_spec, cert) = achieve_block_distance(&spec, budget)?;
            let v = json!({"spec": io::spec_to_json(&new_spec), "certificate": io::certificate_to_json(&spec.field, &cert)});
            Ok(Outcome { output: Output::Report(v), verified: cert.holds() })
        }
        Command::Search { input, method: meth } => {
            let spec = read_spec(input)?;
            let d = cli.target_distance.ok_or_else(|| CliError::from(Error::InvalidTarget("search needs --target-distance".into())))?;
            let config = SearchConfig { target_distance: d, trials: cli.trials, seed: cli.seed, mode: method(*meth), budget };
            let r = search_parameters(&spec, &config)?;
            Ok(Outcome::report(io::search_to_json(&spec.field, &r)))
        }
        Command::Realize { input } => {
            let v = read_json(input)?;
            let f = io::field_from_json(v.get("field").ok_or_else(|| CliError::from(Error::Parse("missing field \"field\"".into())))?)?;
            let rows = v.get("matrix").or_else(|| v.get("generator"));
            let rows = rows.ok_or_else(|| CliError::from(Error::Parse("missing field \"matrix\"".into())))?;
            let g = io::matrix_from_json(&f, rows, None)?;
            let spec = realize_linear_code(&g)?;
            let rebuilt = build_code(&spec)?;
            let same = row_space_equal(&rebuilt.generator, &g)?;
            let out = json!({"spec": io::spec_to_json(&spec), "row_space_equal": same});
            Ok(Outcome { output: Output::Report(out), verified: same })
        }
        Command::Obstruction { q, n, k } => {
            let r = strong_obstruction(*q, *n, *k)?;
            let mut v = io::obstruction_to_json(&r);
            if let Some(w) = &r.witness {
                v["witness_dimension"] = json!(build_code(w)?.dimension());
            }
            Ok(Outcome::report(v))
        }
        Command::Named { name, q, k } => {
            let f = Field::with_order(*q)?;
            let (label, g, spec) = match name {
                NamedArg::RothLempel => ("roth-lempel", roth_lempel(&f, *k)?, roth_lempel_spec(&f, *k)?),
                NamedArg::NmdsG4 => ("nmds-g4", nmds_g4(&f)?, nmds_g4_spec(&f)?),
            };
            let built = reverse_rows(&build_code(&spec)?.generator);
            let perm = column_permutation(&built, &g);
            let v = json!({
                "name": label,
                "field": io::field_to_json(&f),
                "generator": io::matrix_to_json(&g),
                "spec": io::spec_to_json(&spec),
                "matches_build": perm.is_some(),
                "column_permutation": perm,
            });
            let verified = perm.is_some();
            Ok(Outcome { output: Output::Matrix(g, v), verified })
        }
        Command::Export { input } => {
            let v = read_json(input)?;
            let (g, blocks) = io::generator_from_json(&v)?;
            let out = json!({"field": io::field_to_json(g.field()), "blocks": blocks, "generator": io::matrix_to_json(&g)});
            Ok(Outcome::matrix(g, out))
        }
    }
}

fn emit(cli: &Cli, output: &Output) -> Result<(), CliError> {
    let text = match (cli.format, output) {
        (Format::Json, Output::Report(v) | Output::Matrix(_, v)) => {
            let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
            s.push('\n');
            s
        }
        (Format::Csv, Output::Matrix(m, _)) => m.to_csv(),
        (Format::Csv, Output::Report(_)) => return Err(Error::Unsupported("csv output applies to matrices only".into()).into()),
        (Format::Pretty, Output::Matrix(m, _)) => render::matrix(m),
        (Format::Pretty, Output::Report(v)) => render::value(v),
    };
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError {
            error: Error::Parse(e.to_string()),
            context: json!({"path": path.display().to_string()}),
        }),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn report_error(e: &CliError) {
    let mut context = e.context.clone();
    if let Error::BudgetExceeded { needed, budget, bounds } = &e.error {
        context = json!({"needed": needed.to_string(), "budget": budget.to_string(), "bounds": bounds});
    }
    let v = json!({"error": {"code": e.error.code(), "message": e.error.to_string(), "context": context}});
    eprintln!("{}", v);
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let v = json!({"error": {"code": "Usage", "message": e.kind().to_string(), "context": e.to_string()}});
            eprintln!("{}", v);
            return ExitCode::from(1);
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            report_error(&e);
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit(&cli, &outcome.output) {
        report_error(&e);
        return ExitCode::from(1);
    }
    if outcome.verified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
