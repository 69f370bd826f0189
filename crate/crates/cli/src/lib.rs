//! Batch command-line frontend: stage inspection, axiom queries, coding
//! utilities, ordinal notation utilities, compilation of recursive
//! function programs and the verification harness.
//!
//! Every command is a pure function of its arguments, the [`RunConfig`] and
//! the cache contents. [`run`] returns the output and exit code instead of
//! printing, so tests drive the same code path as the binary.
//!
//! Exit codes: see [`exit`]. With `--format structured`, every line on
//! stdout is a JSON object carrying `"schema"` and `"kind"` fields; errors
//! go to stderr as a JSON object of kind `"error"`.

pub mod config;

use std::path::{Path, PathBuf};

use arith_compiler::text::parse_program;
use arith_compiler::{compile_pr_graph, eval_formula, Truth};
use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::Num;
use ordinals::{parse_ordinal, Class, Ordinal};
use serde_json::{json, Value};
use syntax::{numeral_above, parse_formula, print_formula, substitute, var_name};
use thiserror::Error;
use tower::verify::verify_tower;
use tower::{cache, CacheError, Tower, TowerError};

pub use config::{Diagonal, Format, GridConfig, RunConfig};

/// Version of the line format of structured output.
pub const OUTPUT_SCHEMA: u32 = 1;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// I/O and other unexpected failures.
    pub const FAILURE: i32 = 1;
    /// Unparsable arguments, notations, formulas, codes, programs or config.
    pub const PARSE: i32 = 2;
    /// Stage axiom codes failed to grow.
    pub const MONOTONICITY: i32 = 3;
    /// `verify` ran and some check failed.
    pub const CHECK_FAILED: i32 = 4;
    /// The cache file was refused: version mismatch, corruption or tampering.
    pub const CACHE: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => exit::PARSE,
            CliError::Tower(TowerError::MonotonicityViolation { .. }) => exit::MONOTONICITY,
            CliError::Tower(TowerError::Cache(_)) | CliError::Cache(_) => exit::CACHE,
            CliError::Tower(TowerError::TooLarge(_) | TowerError::NotALimit(_)) => exit::PARSE,
            CliError::Io(_) => exit::FAILURE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "tower-cli", version, about = "Stages of a transfinite progression of arithmetic theories")]
pub struct Cli {
    /// Run configuration file (TOML, or JSON by extension).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Memo cache directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Evaluator step budget.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Sign override, repeatable; `default=neg` changes the default.
    #[arg(long = "sign", global = true, value_name = "NOTATION=rosser|neg")]
    pub signs: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect the stage with notation ALPHA.
    Stage {
        alpha: String,
        #[command(subcommand)]
        query: StageQuery,
    },
    /// Run the verification harness over the grid.
    Verify {
        /// Comma-separated stages; empty for an empty grid.
        #[arg(long, num_args = 0.., value_delimiter = ',')]
        stages: Option<Vec<String>>,
        /// Sample codes up to q̃ of this stage.
        #[arg(long)]
        bound: Option<String>,
        #[arg(long, value_parser = ["stream", "formula"])]
        diagonal: Option<String>,
    },
    /// Gödel coding of formulas.
    Godel {
        #[command(subcommand)]
        op: GodelOp,
    },
    /// Ordinal notations below epsilon-zero.
    Ordinal {
        #[command(subcommand)]
        op: OrdinalOp,
    },
    /// Compile programs to formulas.
    Compile {
        #[command(subcommand)]
        what: CompileWhat,
    },
    /// Print the resolved run configuration.
    Config,
}

#[derive(Debug, Subcommand)]
pub enum StageQuery {
    /// The stage axiom: the Rosser sentence or its negation.
    ShowAxiom,
    /// The code of the stage axiom, in hexadecimal.
    QTilde,
    /// The Rosser sentence of the stage.
    Rosser,
    /// Whether a code (decimal, 0x-hex, or @file) or a formula is an axiom.
    IsAxiom { input: String },
}

#[derive(Debug, Subcommand)]
pub enum GodelOp {
    Encode {
        formula: String,
        #[arg(long)]
        hex: bool,
    },
    /// Decode a code given in decimal, 0x-hex, or as @file.
    Decode { code: String },
}

#[derive(Debug, Subcommand)]
pub enum OrdinalOp {
    Compare { a: String, b: String },
    Classify { alpha: String },
    /// The n-th element of the fundamental sequence of a limit.
    Fs { alpha: String, n: u64 },
}

#[derive(Debug, Subcommand)]
pub enum CompileWhat {
    /// Compile the program in FILE to its graph formula.
    PrFn {
        file: PathBuf,
        /// Evaluate the formula at inputs and output `x1,..,xk,y`.
        #[arg(long, value_delimiter = ',')]
        at: Option<Vec<String>>,
    },
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: exit::SUCCESS, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: exit::PARSE, stdout: String::new(), stderr: text },
            };
        }
    };
    let format = cli.format;
    let config = match resolve_config(&cli) {
        Ok(c) => c,
        Err(e) => return failure(format.unwrap_or_default(), &e),
    };
    match execute(&config, &cli.command) {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(e) => failure(config.format, &e),
    }
}

fn failure(format: Format, e: &CliError) -> Outcome {
    let code = e.exit_code();
    let stderr = match format {
        Format::Human => format!("error: {e}\n"),
        Format::Structured => line(json!({"kind": "error", "exit": code, "message": e.to_string()})),
    };
    Outcome { code, stdout: String::new(), stderr }
}

/// The config file (or the defaults) with the command-line flags applied.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(c) = &cli.cache {
        config.cache = Some(c.clone());
    }
    if let Some(f) = cli.format {
        config.format = f;
    }
    if let Some(b) = cli.budget {
        config.budget = b;
    }
    for s in &cli.signs {
        let (k, v) = s.split_once('=').ok_or_else(|| CliError::Parse(format!("expected `<notation>=rosser|neg`, found `{s}`")))?;
        let key = match k.trim() {
            "default" => "default".to_string(),
            k => ordinal(k)?.to_string(),
        };
        config.signs.insert(key, v.trim().to_string());
    }
    config.policy()?;
    Ok(config)
}

fn line(mut v: Value) -> String {
    v.as_object_mut().expect("object").insert("schema".into(), OUTPUT_SCHEMA.into());
    let mut s = serde_json::to_string(&v).expect("serializes");
    s.push('\n');
    s
}

fn ordinal(s: &str) -> Result<Ordinal, CliError> {
    parse_ordinal(s).map_err(|e| CliError::Parse(format!("notation `{s}`: {e}")))
}

/// A number in decimal or `0x` hexadecimal; `@path` reads it from a file.
pub fn parse_number(s: &str) -> Result<BigUint, CliError> {
    let text = match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?,
        None => s.to_string(),
    };
    let t = text.trim();
    let parsed = match t.strip_prefix("0x") {
        Some(h) => BigUint::from_str_radix(h, 16),
        None => BigUint::from_str_radix(t, 10),
    };
    parsed.map_err(|_| CliError::Parse(format!("not a number: `{}`", abbreviate(t))))
}

fn abbreviate(s: &str) -> String {
    match s.char_indices().nth(40) {
        Some((i, _)) => format!("{}...", &s[..i]),
        None => s.to_string(),
    }
}

fn looks_numeric(s: &str) -> bool {
    s.starts_with('@') || s.starts_with("0x") || (!s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()))
}

fn execute(config: &RunConfig, command: &Command) -> Result<(i32, String), CliError> {
    match command {
        Command::Stage { alpha, query } => cmd_stage(config, &ordinal(alpha)?, query).map(|s| (exit::SUCCESS, s)),
        Command::Verify { stages, bound, diagonal } => {
            let mut config = config.clone();
            if let Some(s) = stages {
                config.grid.stages = s.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            }
            if let Some(b) = bound {
                config.grid.bound = Some(b.clone());
            }
            if let Some(d) = diagonal {
                config.grid.diagonal = if d == "formula" { Diagonal::Formula } else { Diagonal::Stream };
            }
            cmd_verify(&config)
        }
        Command::Godel { op } => cmd_godel(config, op).map(|s| (exit::SUCCESS, s)),
        Command::Ordinal { op } => cmd_ordinal(config, op).map(|s| (exit::SUCCESS, s)),
        Command::Compile { what: CompileWhat::PrFn { file, at } } => {
            cmd_compile(config, file, at.as_deref()).map(|s| (exit::SUCCESS, s))
        }
        Command::Config => Ok((
            exit::SUCCESS,
            match config.format {
                Format::Human => config.to_toml(),
                Format::Structured => line(json!({"kind": "config", "config": config})),
            },
        )),
    }
}

/// Runs `f` on a tower for the configured policy, with the memo loaded
/// from and stored back to the cache directory when one is configured.
pub fn with_tower<T>(config: &RunConfig, f: impl FnOnce(&mut Tower) -> Result<T, CliError>) -> Result<T, CliError> {
    let policy = config.policy()?;
    let mut tower = Tower::new(policy.clone());
    if let Some(dir) = &config.cache {
        if let Some(memo) = cache::load(dir, &policy)? {
            tower.load_memo(memo);
        }
    }
    let before = tower.memo().len();
    let out = f(&mut tower);
    if let Some(dir) = &config.cache {
        if tower.memo().len() != before {
            cache::store(dir, &policy, tower.memo())?;
        }
    }
    out
}

pub fn cmd_stage(config: &RunConfig, alpha: &Ordinal, query: &StageQuery) -> Result<String, CliError> {
    tower::stage_code(alpha)?;
    with_tower(config, |t| {
        let stage = alpha.to_string();
        let structured = config.format == Format::Structured;
        Ok(match query {
            StageQuery::ShowAxiom => {
                let (phi, _) = t.stage_axiom(alpha)?;
                let sign = t.policy().sign(alpha).to_string();
                let text = print_formula(&phi);
                if structured {
                    line(json!({"kind": "stage", "stage": stage, "query": "show-axiom", "sign": sign, "formula": text}))
                } else {
                    format!("sign: {sign}\n{text}\n")
                }
            }
            StageQuery::QTilde => {
                let digits = t.qtilde_digits(alpha)?.len();
                let hex = format!("0x{}", t.qtilde(alpha)?.to_str_radix(16));
                if structured {
                    line(json!({"kind": "stage", "stage": stage, "query": "q-tilde", "digits": digits, "code": hex}))
                } else {
                    format!("{hex}\n")
                }
            }
            StageQuery::Rosser => {
                let text = print_formula(&t.rosser_sentence(alpha)?);
                if structured {
                    line(json!({"kind": "stage", "stage": stage, "query": "rosser", "formula": text}))
                } else {
                    format!("{text}\n")
                }
            }
            StageQuery::IsAxiom { input } => {
                let r = if looks_numeric(input) {
                    parse_number(input)?
                } else {
                    coding::encode_formula(&parse_formula(input).map_err(|e| CliError::Parse(e.to_string()))?)
                };
                let member = t.is_axiom(alpha, &r)?;
                if structured {
                    let witness = member.as_ref().map(|m| match m {
                        tower::Membership::Base => "base".to_string(),
                        tower::Membership::Stage(g) => g.to_string(),
                    });
                    line(json!({"kind": "stage", "stage": stage, "query": "is-axiom", "member": member.is_some(), "witness": witness}))
                } else {
                    match member {
                        Some(m) => format!("true ({m})\n"),
                        None => "false\n".to_string(),
                    }
                }
            }
        })
    })
}

/// Runs the harness over the configured grid, up to its largest stage.
/// Exit code 0 when every check passes, 4 otherwise.
pub fn cmd_verify(config: &RunConfig) -> Result<(i32, String), CliError> {
    let grid = config.grid()?;
    let up_to = grid.stages.iter().max().cloned().unwrap_or_else(Ordinal::zero);
    let report = with_tower(config, |t| Ok(verify_tower(t, &up_to, &grid)))?;
    let text = match config.format {
        Format::Human => report.to_human(),
        Format::Structured => report.to_structured(),
    };
    Ok((if report.passed() { exit::SUCCESS } else { exit::CHECK_FAILED }, text))
}

pub fn cmd_godel(config: &RunConfig, op: &GodelOp) -> Result<String, CliError> {
    let structured = config.format == Format::Structured;
    match op {
        GodelOp::Encode { formula, hex } => {
            let phi = parse_formula(formula).map_err(|e| CliError::Parse(e.to_string()))?;
            let code = coding::encode_formula(&phi);
            let text = if *hex { format!("0x{}", code.to_str_radix(16)) } else { code.to_str_radix(10) };
            Ok(if structured { line(json!({"kind": "godel", "op": "encode", "code": text})) } else { format!("{text}\n") })
        }
        GodelOp::Decode { code } => {
            let phi = coding::decode_formula(&parse_number(code)?).map_err(|e| CliError::Parse(e.to_string()))?;
            let text = print_formula(&phi);
            Ok(if structured { line(json!({"kind": "godel", "op": "decode", "formula": text})) } else { format!("{text}\n") })
        }
    }
}

pub fn cmd_ordinal(config: &RunConfig, op: &OrdinalOp) -> Result<String, CliError> {
    let (value, text) = match op {
        OrdinalOp::Compare { a, b } => {
            let (a, b) = (ordinal(a)?, ordinal(b)?);
            let rel = match a.cmp(&b) {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            (json!({"kind": "ordinal", "op": "compare", "a": a.to_string(), "b": b.to_string(), "relation": rel}), format!("{a} {rel} {b}"))
        }
        OrdinalOp::Classify { alpha } => {
            let a = ordinal(alpha)?;
            let (class, pred, text) = match a.classify() {
                Class::Zero => ("zero", None, "zero".to_string()),
                Class::Successor(p) => ("successor", Some(p.to_string()), format!("successor of {p}")),
                Class::Limit => ("limit", None, "limit".to_string()),
            };
            (json!({"kind": "ordinal", "op": "classify", "alpha": a.to_string(), "class": class, "predecessor": pred}), text)
        }
        OrdinalOp::Fs { alpha, n } => {
            let a = ordinal(alpha)?;
            let x = a.fundamental_sequence(*n).map_err(|e| CliError::Parse(e.to_string()))?;
            (json!({"kind": "ordinal", "op": "fs", "alpha": a.to_string(), "n": n, "value": x.to_string()}), x.to_string())
        }
    };
    Ok(match config.format {
        Format::Human => format!("{text}\n"),
        Format::Structured => line(value),
    })
}

pub fn cmd_compile(config: &RunConfig, file: &Path, at: Option<&[String]>) -> Result<String, CliError> {
    let src = std::fs::read_to_string(file).map_err(|e| CliError::Io(format!("{}: {e}", file.display())))?;
    let f = parse_program(&src).map_err(|e| CliError::Parse(format!("{}: {e}", file.display())))?;
    let compiled = compile_pr_graph(&f);
    let text = print_formula(&compiled.formula);
    let inputs: Vec<String> = compiled.inputs.iter().map(|&v| var_name(v)).collect();
    let output = var_name(compiled.output);
    let eval = match at {
        None => None,
        Some(values) => {
            if values.len() != f.arity() + 1 {
                return Err(CliError::Parse(format!("--at needs {} values (inputs, then output), found {}", f.arity() + 1, values.len())));
            }
            let values: Vec<BigUint> = values.iter().map(|v| parse_number(v)).collect::<Result<_, _>>()?;
            let mut phi = compiled.formula.clone();
            for (x, v) in compiled.inputs.iter().chain([&compiled.output]).zip(&values) {
                phi = substitute(&phi, *x, &numeral_above(v, config.numeral_threshold));
            }
            let truth = eval_formula(&phi, config.budget).map_err(|e| CliError::Parse(e.to_string()))?;
            let shown: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            Some((shown, truth))
        }
    };
    let truth_text = |t: Truth| match t {
        Truth::True => "true",
        Truth::False => "false",
        Truth::BudgetExceeded => "budget-exceeded",
    };
    Ok(match config.format {
        Format::Structured => {
            let mut v = json!({"kind": "compile", "formula": text, "inputs": inputs, "output": output});
            if let Some((at, t)) = &eval {
                v["at"] = json!(at);
                v["eval"] = json!(truth_text(*t));
            }
            line(v)
        }
        Format::Human => {
            let mut out = format!("{text}\n");
            if let Some((at, t)) = eval {
                out.push_str(&format!("at ({}): {}\n", at.join(", "), truth_text(t)));
            }
            out
        }
    })
}
