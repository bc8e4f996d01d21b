//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use qform_core::decider::{decide_binary_squareclass, decide_binary_tree, decide_general};
use qform_core::{
    approximate_quotient, coverage, cross_check, decide, exclusion_certificate, CoverageSchedule,
    Error, GeneralForm, Prime, QuadraticForm, Verdict,
};

use crate::config;
use crate::report;

/// Environment variable capping the witness search bound.
pub const BUDGET_VAR: &str = "QFORM_MAX_BUDGET";

const DEFAULT_WITNESS_BOUND: u64 = 200;
const DEFAULT_CERTIFICATE_BOUND: u64 = 30;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;

/// p-adic density of quotient sets of integral quadratic forms.
#[derive(Debug, Parser)]
#[command(name = "qform", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    plain: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide density with both binary deciders and check they agree.
    Decide(FormArgs),
    /// Print the decision path as an indented question/answer trace.
    Explain(FormArgs),
    /// A witness quotient for dense forms, or an exclusion certificate.
    Witness(WitnessArgs),
    /// Brute-force residue coverage of quotients mod p^r.
    Oracle(OracleArgs),
    /// Cross-check every entry of a config file against the oracle.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct FormArgs {
    /// Binary form "a,b,c", or "r; a11,a12,...,arr".
    #[arg(long, allow_hyphen_values = true)]
    form: Option<String>,

    /// Number of variables, with --coeffs.
    #[arg(long)]
    rank: Option<usize>,

    /// Upper-triangular coefficients a11,a12,...,arr, with --rank.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,

    #[arg(long)]
    prime: u64,
}

#[derive(Debug, Args)]
struct WitnessArgs {
    #[command(flatten)]
    form: FormArgs,

    /// Target quotient "num/den" or an integer.
    #[arg(long, allow_hyphen_values = true)]
    target: Option<String>,

    /// Required precision: the witness lies within p^-r of the target.
    #[arg(long, default_value_t = 1)]
    r: u32,

    /// Coordinate bound for enumeration (witness) or verification (certificate).
    #[arg(long)]
    bound: Option<u64>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    form: FormArgs,

    #[arg(long, default_value_t = 1)]
    r: u32,

    /// Coordinate bound; defaults to 10 * p^r.
    #[arg(long)]
    bound: Option<u64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// File with one "a,b,c p" or "r; coeffs p" entry per line.
    #[arg(long)]
    config: PathBuf,

    /// Single precision to check; defaults to the schedule r = 1..=3.
    #[arg(long)]
    r: Option<u32>,

    /// Coordinate bound; defaults to 10 * p^r.
    #[arg(long)]
    bound: Option<u64>,
}

enum Failure {
    Usage(String),
    Inconsistent(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Inconsistent(e.to_string()),
            Error::Imprimitive(_) | Error::Singular(_) | Error::NotPrime(_) => {
                Failure::Usage(format!(
                    "{e}; density is decided for primitive nonsingular integral forms at a prime p"
                ))
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the command line, writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Inconsistent(msg)) => {
            let _ = writeln!(err, "consistency failure: {msg}");
            EXIT_INCONSISTENT
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    match &cli.command {
        Command::Decide(args) => run_decide(args, cli.plain, out),
        Command::Explain(args) => run_explain(args, cli.plain, out),
        Command::Witness(args) => run_witness(args, cli.plain, out),
        Command::Oracle(args) => run_oracle(args, cli.plain, out),
        Command::Sweep(args) => run_sweep(args, cli.plain, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .and_then(|_| {
            if text.ends_with('\n') {
                Ok(())
            } else {
                out.write_all(b"\n")
            }
        })
        .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}

fn emit_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    emit(out, &text)
}

fn parse_form(args: &FormArgs) -> Result<(QuadraticForm, Prime), Failure> {
    let prime = Prime::new(args.prime)?;
    let form = match (&args.form, args.rank, &args.coeffs) {
        (Some(text), None, None) => QuadraticForm::from_str(text)?,
        (None, Some(rank), Some(coeffs)) => {
            let general = GeneralForm::from_str(&format!("{rank}; {coeffs}"))?;
            match general.as_binary() {
                Some(binary) => binary.into(),
                None => general.into(),
            }
        }
        (None, None, None) => {
            return Err(Failure::Usage(
                "a form is required: --form or --rank with --coeffs".into(),
            ))
        }
        (Some(_), _, _) => {
            return Err(Failure::Usage(
                "--form cannot be combined with --rank or --coeffs".into(),
            ))
        }
        _ => {
            return Err(Failure::Usage(
                "--rank and --coeffs must be given together".into(),
            ))
        }
    };
    Ok((form, prime))
}

/// Runs both binary deciders; general forms go through the rank dispatch.
fn decide_checked(
    form: &QuadraticForm,
    p: Prime,
) -> Result<(Verdict, Option<(bool, bool)>), Failure> {
    match form {
        QuadraticForm::Binary(f) => {
            let tree = decide_binary_tree(f, p);
            let square = decide_binary_squareclass(f, p);
            if tree.dense != square.dense {
                return Err(Failure::Inconsistent(format!(
                    "deciders disagree on {f} at p = {p}: tree says {}, square class says {}",
                    tree.dense, square.dense
                )));
            }
            let agreement = Some((tree.dense, square.dense));
            Ok((tree, agreement))
        }
        QuadraticForm::General(g) => Ok((decide_general(g, p), None)),
    }
}

fn run_decide(args: &FormArgs, plain: bool, out: &mut dyn Write) -> Outcome {
    let (form, p) = parse_form(args)?;
    let (verdict, agreement) = decide_checked(&form, p)?;
    if plain {
        emit(out, &report::verdict_plain(&form, &verdict, agreement))?;
    } else {
        emit_json(out, &report::verdict_json(&form, &verdict, agreement))?;
    }
    Ok(EXIT_OK)
}

fn run_explain(args: &FormArgs, plain: bool, out: &mut dyn Write) -> Outcome {
    let (form, p) = parse_form(args)?;
    let verdict = decide(&form, p);
    if plain {
        emit(out, &report::explain_plain(&form, &verdict))?;
    } else {
        emit_json(out, &report::explain_json(&form, &verdict))?;
    }
    Ok(EXIT_OK)
}

fn parse_target(text: &str) -> Result<(BigInt, BigInt), Failure> {
    let bad = || Failure::Usage(format!("target {text:?} is not a rational \"num/den\""));
    let int = |s: &str| {
        let s = s.trim();
        BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).map_err(|_| bad())
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (int(n)?, int(d)?),
        None => (int(text)?, BigInt::from(1)),
    };
    if den == BigInt::from(0) {
        return Err(Failure::Usage(format!(
            "target {text:?} has zero denominator"
        )));
    }
    Ok((num, den))
}

fn budget_cap() -> Result<Option<u64>, Failure> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            Failure::Usage(format!("{BUDGET_VAR}={v:?} is not a non-negative integer"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Failure::Usage(format!("{BUDGET_VAR}: {e}"))),
    }
}

fn run_witness(args: &WitnessArgs, plain: bool, out: &mut dyn Write) -> Outcome {
    let (form, p) = parse_form(&args.form)?;
    let cap = budget_cap()?;
    let capped = |bound: u64| cap.map_or(bound, |c| bound.min(c));
    let (verdict, _) = decide_checked(&form, p)?;

    if !verdict.dense {
        let bound = capped(args.bound.unwrap_or(DEFAULT_CERTIFICATE_BOUND));
        let cert = exclusion_certificate(&form, p, bound)?;
        if plain {
            emit(out, &report::certificate_plain(&form, &cert))?;
        } else {
            emit_json(out, &report::certificate_json(&form, &cert))?;
        }
        return Ok(EXIT_OK);
    }

    let target = args
        .target
        .as_deref()
        .ok_or_else(|| Failure::Usage("--target is required for a dense form".into()))?;
    let (num, den) = parse_target(target)?;
    if args.r == 0 {
        return Err(Failure::Usage("--r must be positive".into()));
    }
    let budget = capped(args.bound.unwrap_or(DEFAULT_WITNESS_BOUND));
    let witness = match approximate_quotient(&form, p, &num, &den, args.r, budget) {
        Ok(w) => w,
        Err(Error::BudgetExceeded { bound }) => {
            return Err(Failure::Usage(format!(
                "no witness with coordinates up to {bound}; raise --bound or {BUDGET_VAR}"
            )))
        }
        Err(e) => return Err(e.into()),
    };
    let achieved = witness.verify(&form, p)?;
    if !achieved.at_least(args.r as i64) || achieved != witness.achieved {
        return Err(Failure::Inconsistent(format!(
            "witness revalidation failed: valuation {achieved}, required {}",
            args.r
        )));
    }
    if plain {
        emit(out, &report::witness_plain(&form, p, &witness))?;
    } else {
        emit_json(out, &report::witness_json(&form, p, &witness))?;
    }
    Ok(EXIT_OK)
}

fn run_oracle(args: &OracleArgs, plain: bool, out: &mut dyn Write) -> Outcome {
    let (form, p) = parse_form(&args.form)?;
    if args.r == 0 {
        return Err(Failure::Usage("--r must be positive".into()));
    }
    let bound = args
        .bound
        .unwrap_or_else(|| CoverageSchedule::default().bound(p, args.r));
    let rep = coverage(&form, p, args.r, bound)?;
    if plain {
        emit(out, &report::coverage_csv(&rep))?;
    } else {
        emit_json(out, &report::coverage_json(&form, &rep))?;
    }
    Ok(EXIT_OK)
}

fn run_sweep(args: &SweepArgs, plain: bool, out: &mut dyn Write) -> Outcome {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.config.display())))?;
    let entries = config::parse(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.config.display())))?;
    let schedule = CoverageSchedule::default();

    let mut rows = Vec::new();
    let mut results = Vec::new();
    let mut failed = 0usize;
    for entry in &entries {
        let agree = match &entry.form {
            QuadraticForm::Binary(f) => {
                decide_binary_tree(f, entry.prime).dense
                    == decide_binary_squareclass(f, entry.prime).dense
            }
            QuadraticForm::General(_) => true,
        };
        let plan: Vec<(u32, u64)> = match args.r {
            Some(0) => return Err(Failure::Usage("--r must be positive".into())),
            Some(r) => vec![(
                r,
                args.bound.unwrap_or_else(|| schedule.bound(entry.prime, r)),
            )],
            None => schedule
                .entries(entry.prime)
                .into_iter()
                .map(|(r, b)| (r, args.bound.unwrap_or(b)))
                .collect(),
        };
        for (r, bound) in plan {
            let rep = cross_check(&entry.form, entry.prime, r, bound)
                .map_err(|e| Failure::Usage(format!("line {}: {e}", entry.line)))?;
            if !(rep.passed() && agree) {
                failed += 1;
            }
            rows.push(report::cross_check_row(&entry.form, &rep, agree));
            results.push(report::cross_check_json(&entry.form, &rep, agree));
        }
    }
    let total = results.len();
    if plain {
        let mut table = report::cross_check_header();
        for row in rows {
            table.push('\n');
            table.push_str(&row);
        }
        table.push_str(&format!("\n{} passed, {failed} failed", total - failed));
        emit(out, &table)?;
    } else {
        emit_json(
            out,
            &serde_json::json!({"results": results, "passed": total - failed, "failed": failed}),
        )?;
    }
    Ok(if failed == 0 {
        EXIT_OK
    } else {
        EXIT_INCONSISTENT
    })
}
