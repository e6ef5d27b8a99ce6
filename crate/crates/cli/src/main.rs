//! `necklace`: command-line access to slime migration, necklaces, and the
//! code/necklace bijection.
//!
//! Exit status: 0 on success, 1 when a verification fails or a mathematical
//! precondition does not hold, 2 on usage or parse errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use necklace_core::bijection::{build_sigma, prime_bijection_with, Chooser, TableMap};
use necklace_core::necklace::{code_to_word, word_to_code};
use necklace_core::verify::{run_cell, summary_table, sweep, Check};
use necklace_core::{
    canonicalize, count_necklaces, enumerate_codes, enumerate_necklaces, riwi_coprime,
    slime, verify_riwi, BeadWord, Code, Envelope, Error,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "necklace", version, about = "Slime migration on cyclic codes and the necklace bijection")]
struct Cli {
    /// Output format; each command has its own default
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RiwiChoice {
    Slime,
    Rotation,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChooserArg {
    Lexmin,
    Lexmax,
}

impl From<ChooserArg> for Chooser {
    fn from(c: ChooserArg) -> Self {
        match c {
            ChooserArg::Lexmin => Chooser::LexMin,
            ChooserArg::Lexmax => Chooser::LexMax,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the slime decomposition of a code
    Slimes { code: String },
    /// Apply forward (or backward) migration
    Migrate {
        #[arg(long)]
        backward: bool,
        #[arg(long, default_value_t = 1)]
        steps: u64,
        code: String,
    },
    /// Apply φ (or its inverse)
    Phi {
        #[arg(long)]
        inverse: bool,
        code: String,
    },
    /// Weighted sum Σ j·f[j] mod n
    Ws { code: String },
    /// Rotate left by S positions (negative rotates right)
    Rotate {
        #[arg(long, allow_hyphen_values = true)]
        steps: i64,
        code: String,
    },
    /// Smallest period dividing n
    Period { code: String },
    /// Canonical (least) rotation
    Canon { code: String },
    /// Bead word of a code
    Word { code: String },
    /// Code read off a bead word
    Unword { word: String },
    /// Enumerate codes or necklaces
    #[command(subcommand)]
    Enum(EnumCommand),
    /// Closed-form and enumerated necklace counts
    Count { n: usize, k: u64 },
    /// Emit the code → necklace table
    Bijection {
        n: usize,
        k: u64,
        #[arg(long, value_enum, default_value = "slime")]
        riwi: RiwiChoice,
        /// JSON file of {"from": [...], "to": [...]} pairs used as the riwi-map
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "lexmin")]
        chooser: ChooserArg,
    },
    /// Run verification checks and emit certificates
    Verify {
        n: Option<usize>,
        k: Option<u64>,
        /// Check name, or `all`
        #[arg(long, default_value = "all")]
        check: String,
        /// Sweep the whole default envelope instead of one cell
        #[arg(long)]
        sweep: bool,
        /// Write certificates (JSON lines) here and print the summary table
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a user-supplied map for the riwi properties
    VerifyRiwi {
        #[arg(long)]
        map: PathBuf,
        n: usize,
        k: u64,
    },
}

#[derive(Subcommand)]
enum EnumCommand {
    Codes {
        n: usize,
        k: u64,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        full_period: bool,
    },
    Necklaces {
        n: usize,
        k: u64,
        #[arg(long)]
        full_period: bool,
    },
}

/// A failure with its exit status.
struct Failure {
    status: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { status: 2, message: message.into() }
    }

    fn math(message: impl Into<String>) -> Self {
        Failure { status: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::EmptyCode
            | Error::NegativeEntry { .. }
            | Error::ParseCode { .. }
            | Error::ParseWord(_)
            | Error::MapFile(_) => Failure::usage(e.to_string()),
            _ => Failure::math(e.to_string()),
        }
    }
}

type Outcome = Result<(String, bool), Failure>;

fn parse_code(s: &str) -> Result<Code, Failure> {
    s.parse::<Code>().map_err(Failure::from)
}

fn to_json<T: serde::Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("output types serialize")
}

fn code_output(f: &Code, format: Format) -> String {
    match format {
        Format::Json => to_json(f),
        _ => f.to_string(),
    }
}

fn load_map(path: &Path) -> Result<TableMap, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("map");
    Ok(TableMap::from_json(name, &text)?)
}

fn run(cli: Cli) -> Outcome {
    let fmt = |default: Format| cli.format.unwrap_or(default);
    let out = match cli.command {
        Command::Slimes { code } => {
            let f = parse_code(&code)?;
            let d = slime::decompose(&f);
            match fmt(Format::Json) {
                Format::Text => {
                    let slimes: Vec<String> = d.slimes.iter().map(|s| format!("{}+{}", s.start, s.len)).collect();
                    let weight = d.weight.map_or("-".to_string(), |w| w.to_string());
                    format!("m={} valid={} weight={} slimes=[{}]", d.m, d.valid, weight, slimes.join(", "))
                }
                _ => to_json(&d),
            }
        }
        Command::Migrate { backward, steps, code } => {
            let mut f = parse_code(&code)?;
            for _ in 0..steps {
                f = if backward { slime::migrate_backward(&f)? } else { slime::migrate_forward(&f)? };
            }
            code_output(&f, fmt(Format::Text))
        }
        Command::Phi { inverse, code } => {
            let f = parse_code(&code)?;
            let g = if inverse { slime::phi_inverse(&f)? } else { slime::phi(&f)? };
            code_output(&g, fmt(Format::Text))
        }
        Command::Ws { code } => {
            let f = parse_code(&code)?;
            match fmt(Format::Text) {
                Format::Json => to_json(&json!({"code": f.entries(), "weighted_sum": f.weighted_sum()})),
                _ => f.weighted_sum().to_string(),
            }
        }
        Command::Rotate { steps, code } => code_output(&parse_code(&code)?.rotate(steps), fmt(Format::Text)),
        Command::Period { code } => {
            let f = parse_code(&code)?;
            match fmt(Format::Text) {
                Format::Json => to_json(&json!({"code": f.entries(), "period": f.period()})),
                _ => f.period().to_string(),
            }
        }
        Command::Canon { code } => {
            let neck = canonicalize(&parse_code(&code)?);
            match fmt(Format::Text) {
                Format::Json => to_json(&neck),
                _ => neck.canonical().to_string(),
            }
        }
        Command::Word { code } => {
            let word = code_to_word(&parse_code(&code)?);
            match fmt(Format::Text) {
                Format::Json => to_json(&json!({"word": word})),
                _ => word.to_string(),
            }
        }
        Command::Unword { word } => {
            let word: BeadWord = word.parse()?;
            code_output(&word_to_code(&word)?, fmt(Format::Text))
        }
        Command::Enum(EnumCommand::Codes { n, k, t, full_period }) => {
            if n == 0 {
                return Err(Failure::usage("n must be at least 1"));
            }
            if t.is_some_and(|t| t >= n) {
                return Err(Failure::usage(format!("residue t must be below n = {n}")));
            }
            let format = fmt(Format::Json);
            let mut lines: Vec<String> = Vec::new();
            if format == Format::Csv {
                lines.push("code".into());
            }
            lines.extend(enumerate_codes(n, k, t, full_period).map(|f| match format {
                Format::Json => to_json(&f),
                Format::Csv => format!("\"{f}\""),
                Format::Text => f.to_string(),
            }));
            lines.join("\n")
        }
        Command::Enum(EnumCommand::Necklaces { n, k, full_period }) => {
            if n == 0 {
                return Err(Failure::usage("n must be at least 1"));
            }
            let format = fmt(Format::Json);
            let mut lines: Vec<String> = Vec::new();
            if format == Format::Csv {
                lines.push("necklace,word".into());
            }
            lines.extend(enumerate_necklaces(n, k, full_period).map(|x| match format {
                Format::Json => to_json(&x),
                Format::Csv => format!("\"{}\",{}", x.canonical(), x.word()),
                Format::Text => format!("{}  {}", x.canonical(), x.word()),
            }));
            lines.join("\n")
        }
        Command::Count { n, k } => {
            if n == 0 {
                return Err(Failure::usage("n must be at least 1"));
            }
            let formula = count_necklaces(n, k)?;
            let enumerated = enumerate_necklaces(n, k, false).count();
            let agree = formula == enumerated.into();
            let text = match fmt(Format::Text) {
                Format::Json => to_json(&json!({
                    "n": n, "k": k, "formula": formula.to_string(), "enumerated": enumerated, "agree": agree
                })),
                _ => format!("formula={formula} enumerated={enumerated}"),
            };
            return Ok((text, agree));
        }
        Command::Bijection { n, k, riwi, map, chooser } => {
            let chooser = Chooser::from(chooser);
            let table = match (map, riwi) {
                (Some(path), _) => build_sigma(n, k, &load_map(&path)?, chooser)?,
                (None, RiwiChoice::Rotation) => build_sigma(n, k, &riwi_coprime(n, k)?, chooser)?,
                (None, RiwiChoice::Slime) => match prime_bijection_with(n, k, chooser) {
                    Err(Error::NotPrime(_)) => {
                        return Err(Failure::math(format!(
                            "n = {n} is not prime: the construction needs a riwi-map on F'({n},{k}), \
                             and none is known for composite n; supply one with --map FILE"
                        )))
                    }
                    other => other?,
                },
            };
            match fmt(Format::Json) {
                Format::Json => to_json(&table),
                Format::Csv => table.to_csv().trim_end().to_string(),
                Format::Text => table.to_text().trim_end().to_string(),
            }
        }
        Command::Verify { n, k, check, sweep: full, out } => {
            let checks: Vec<Check> = if check == "all" {
                Check::ALL.to_vec()
            } else {
                vec![check.parse::<Check>().map_err(|e| Failure::usage(e.to_string()))?]
            };
            let certificates = match (full, n, k) {
                (true, None, None) => sweep(&Envelope::default(), &checks)?,
                (false, Some(n), Some(k)) => {
                    if n == 0 {
                        return Err(Failure::usage("n must be at least 1"));
                    }
                    if check == "all" {
                        run_cell(n, k, &checks)?
                    } else {
                        // an explicitly requested check reports its precondition failure
                        vec![checks[0].run(n, k)?]
                    }
                }
                _ => return Err(Failure::usage("give either <n> <k> or --sweep")),
            };
            let ok = certificates.iter().all(|c| c.passed());
            let lines: Vec<String> = certificates.iter().map(to_json).collect();
            let text = if let Some(path) = out {
                fs::write(&path, lines.join("\n") + "\n")
                    .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
                summary_table(&certificates).trim_end().to_string()
            } else {
                match fmt(Format::Json) {
                    Format::Text => summary_table(&certificates).trim_end().to_string(),
                    _ => lines.join("\n"),
                }
            };
            return Ok((text, ok));
        }
        Command::VerifyRiwi { map, n, k } => {
            let chi = load_map(&map)?;
            let report = verify_riwi(&chi, n, k);
            let text = match fmt(Format::Json) {
                Format::Text => report.to_string(),
                _ => to_json(&report),
            };
            return Ok((text, report.passed));
        }
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok((text, ok)) => {
            let mut stdout = io::stdout().lock();
            let _ = writeln!(stdout, "{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.status)
        }
    }
}
