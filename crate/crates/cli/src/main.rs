//! `metallic`: generalized Fibonacci sequences, metallic ratios, continued
//! fractions and nested radicals from the command line.

mod render;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use metallic_core::{
    cf_convergence_table, cf_convergent, cf_equals_ratio, check_even_sum_identity,
    check_odd_sum_identity, check_reciprocal_identity, check_sqrt_identity, dominant_root_k,
    minus_root, parse_rational, phi, radical_converged, radical_convergence_table, radical_iterate,
    ratio_convergence_table, term, term_fast, terms, ContinuedFractionSpec, Error, Identity,
    Rational, RecurrenceSpec,
};
use serde_json::{json, Value};

use crate::render::{Format, Output};

pub const EXIT_FAILS: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_CONVERGENCE: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "metallic",
    version,
    about = "Exact generalized Fibonacci ratios, continued fractions and nested radicals"
)]
struct Cli {
    /// Output format; csv applies to tables only.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Terms of F_n = a_1 F_{n-1} + ... + a_k F_{n-k}.
    Seq(SeqArgs),
    /// Plus (or minus) root of x^2 - a x - b, or the positive root of the
    /// k-term characteristic polynomial.
    Phi(PhiArgs),
    /// Finite continued fraction a + b/(a + b/(... + b/a)).
    Cf(CfArgs),
    /// Nested radical sqrt(b + a sqrt(b + ...)).
    Radical(RadicalArgs),
    /// Check an identity and report both sides.
    Verify(VerifyArgs),
    /// Convergence table toward phi(a, b).
    Table(TableArgs),
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    a: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    b: Option<Rational>,
}

impl PairArgs {
    fn resolve(&self) -> (Rational, Rational) {
        let one = || Rational::from_integer(1.into());
        (
            self.a.clone().unwrap_or_else(one),
            self.b.clone().unwrap_or_else(one),
        )
    }
}

#[derive(Args, Debug)]
struct SeqArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Coefficients a_1,...,a_k (overrides --a/--b).
    #[arg(long, value_delimiter = ',', value_parser = rational_arg, allow_hyphen_values = true, conflicts_with_all = ["a", "b"])]
    coeffs: Option<Vec<Rational>>,
    /// Seeds F_0,...,F_{k-1}; defaults to 1, a for two terms.
    #[arg(long, value_delimiter = ',', value_parser = rational_arg, allow_hyphen_values = true)]
    seeds: Option<Vec<Rational>>,
    #[arg(long)]
    n: usize,
    /// Use companion-matrix exponentiation.
    #[arg(long)]
    fast: bool,
    /// Print F_0..F_n instead of F_n alone.
    #[arg(long)]
    all: bool,
}

#[derive(Args, Debug)]
struct PhiArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long, value_delimiter = ',', value_parser = rational_arg, allow_hyphen_values = true, conflicts_with_all = ["a", "b", "minus"])]
    coeffs: Option<Vec<Rational>>,
    #[arg(long, default_value_t = 10)]
    digits: u32,
    #[arg(long)]
    minus: bool,
}

#[derive(Args, Debug)]
struct CfArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long)]
    depth: usize,
    /// Print the convergents 0..=depth as a table.
    #[arg(long)]
    table: bool,
    #[arg(long, default_value_t = 10)]
    digits: u32,
}

#[derive(Args, Debug)]
struct RadicalArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long, default_value_t = 10)]
    digits: u32,
    /// Fixed nesting depth instead of iterating to convergence.
    #[arg(long)]
    steps: Option<usize>,
    /// Print iterates 0..=steps as a table.
    #[arg(long, requires = "steps")]
    table: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// odd-sum, even-sum, reciprocal, sqrt or cf-ratio.
    #[arg(value_parser = identity_arg)]
    identity: Identity,
    #[arg(long = "N")]
    big_n: Option<usize>,
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long, default_value_t = 30)]
    digits: u32,
    #[arg(long)]
    depth: Option<usize>,
}

fn identity_arg(s: &str) -> Result<Identity, String> {
    Identity::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Identity::ALL.iter().map(|i| i.name()).collect();
        format!(
            "unknown identity {s:?}; expected one of {}",
            names.join(", ")
        )
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableKind {
    Ratio,
    Cf,
    Radical,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(value_enum)]
    kind: TableKind,
    #[command(flatten)]
    pair: PairArgs,
    /// Seeds F_0,F_1 for ratio tables.
    #[arg(long, value_delimiter = ',', value_parser = rational_arg, allow_hyphen_values = true)]
    seeds: Option<Vec<Rational>>,
    /// Last row index (n for ratios, depth for cf, steps for radicals).
    #[arg(long = "n-max", visible_alias = "max-depth", default_value_t = 10)]
    n_max: usize,
    #[arg(long, default_value_t = 10)]
    digits: u32,
}

/// A failure mapped onto the exit-code contract.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            kind: "usage",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Domain(_) | Error::ZeroDenominator { .. } => (EXIT_DOMAIN, "domain"),
            Error::Precondition(_) => (EXIT_DOMAIN, "precondition"),
            Error::NoConvergence { .. } | Error::WrongLimit { .. } => {
                (EXIT_CONVERGENCE, "convergence")
            }
            Error::Parse(_) => (EXIT_USAGE, "usage"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

fn strings(values: &[Rational]) -> Value {
    Value::from(values.iter().map(|v| v.to_string()).collect::<Vec<_>>())
}

fn run_seq(args: &SeqArgs) -> Result<Output, Failure> {
    let mut spec = match &args.coeffs {
        Some(c) => {
            let seeds = args
                .seeds
                .clone()
                .unwrap_or_else(|| vec![Rational::from_integer(1.into()); c.len()]);
            RecurrenceSpec::new(c.clone(), seeds)?
        }
        None => {
            let (a, b) = args.pair.resolve();
            RecurrenceSpec::two_term(a, b)
        }
    };
    if let (None, Some(seeds)) = (&args.coeffs, &args.seeds) {
        spec = spec.with_seeds(seeds.clone())?;
    }
    let params = json!({
        "coeffs": strings(spec.coefficients()),
        "seeds": strings(spec.seeds()),
        "n": args.n,
        "fast": args.fast,
        "all": args.all,
    });
    let eval = |i| {
        if args.fast {
            term_fast(&spec, i)
        } else {
            term(&spec, i)
        }
    };
    if args.all {
        let values: Vec<Rational> = if args.fast {
            (0..=args.n).map(eval).collect()
        } else {
            terms(&spec, args.n)
        };
        let text = values.iter().map(|v| format!("{v}\n")).collect();
        Ok(Output::new(
            "seq",
            params,
            json!({ "terms": strings(&values) }),
            text,
        ))
    } else {
        let value = eval(args.n);
        Ok(Output::new(
            "seq",
            params,
            json!({ "term": value.to_string() }),
            format!("{value}\n"),
        ))
    }
}

fn run_phi(args: &PhiArgs) -> Result<Output, Failure> {
    let (params, value) = match &args.coeffs {
        Some(c) => (
            json!({ "coeffs": strings(c), "digits": args.digits }),
            dominant_root_k(c, args.digits)?,
        ),
        None => {
            let (a, b) = args.pair.resolve();
            let value = if args.minus {
                minus_root(&a, &b, args.digits)?
            } else {
                phi(&a, &b, args.digits)?
            };
            let params = json!({
                "a": a.to_string(),
                "b": b.to_string(),
                "digits": args.digits,
                "minus": args.minus,
            });
            (params, value)
        }
    };
    Ok(Output::new(
        "phi",
        params,
        json!({ "value": value.to_string() }),
        format!("{value}\n"),
    ))
}

fn run_cf(args: &CfArgs, format: Format) -> Result<Output, Failure> {
    let (a, b) = args.pair.resolve();
    let mut params = json!({ "a": a.to_string(), "b": b.to_string(), "depth": args.depth });
    if args.table {
        params["digits"] = args.digits.into();
        let report = cf_convergence_table(&a, &b, args.depth, args.digits)?;
        return Ok(render::table_output("cf", params, &report, format));
    }
    let value = cf_convergent(&ContinuedFractionSpec::new(a, b, args.depth))?;
    Ok(Output::new(
        "cf",
        params,
        json!({ "value": value.to_string() }),
        format!("{value}\n"),
    ))
}

fn run_radical(args: &RadicalArgs, format: Format) -> Result<Output, Failure> {
    let (a, b) = args.pair.resolve();
    let mut params = json!({ "a": a.to_string(), "b": b.to_string(), "digits": args.digits });
    match args.steps {
        Some(steps) => {
            params["steps"] = steps.into();
            if args.table {
                let report = radical_convergence_table(&a, &b, steps, args.digits)?;
                return Ok(render::table_output("radical", params, &report, format));
            }
            let value = radical_iterate(&a, &b, steps, args.digits)?;
            let result = json!({ "value": value.to_string(), "steps": steps });
            Ok(Output::new("radical", params, result, format!("{value}\n")))
        }
        None => {
            let (value, steps) = radical_converged(&a, &b, args.digits)?;
            let result = json!({ "value": value.to_string(), "steps": steps });
            Ok(Output::new("radical", params, result, format!("{value}\n")))
        }
    }
}

fn run_verify(args: &VerifyArgs) -> Result<Output, Failure> {
    let (a, b) = args.pair.resolve();
    let (params, verification) = match args.identity {
        Identity::OddSum | Identity::EvenSum => {
            let n = args
                .big_n
                .ok_or_else(|| Failure::usage(format!("{} needs --N", args.identity.name())))?;
            let v = if args.identity == Identity::OddSum {
                check_odd_sum_identity(n)?
            } else {
                check_even_sum_identity(n)?
            };
            (json!({ "identity": args.identity.name(), "N": n }), v)
        }
        Identity::Reciprocal | Identity::Sqrt => {
            let v = if args.identity == Identity::Reciprocal {
                check_reciprocal_identity(&a, &b, args.digits)?
            } else {
                check_sqrt_identity(&a, &b, args.digits)?
            };
            let params = json!({
                "identity": args.identity.name(),
                "a": a.to_string(),
                "b": b.to_string(),
                "digits": args.digits,
            });
            (params, v)
        }
        Identity::CfRatio => {
            let depth = args
                .depth
                .ok_or_else(|| Failure::usage("cf-ratio needs --depth"))?;
            let params = json!({
                "identity": args.identity.name(),
                "a": a.to_string(),
                "b": b.to_string(),
                "depth": depth,
            });
            (
                params,
                cf_equals_ratio(&ContinuedFractionSpec::new(a, b, depth))?,
            )
        }
    };
    Ok(render::verification_output(params, &verification))
}

fn run_table(args: &TableArgs, format: Format) -> Result<Output, Failure> {
    let (a, b) = args.pair.resolve();
    let mut params = json!({
        "kind": match args.kind {
            TableKind::Ratio => "ratio",
            TableKind::Cf => "cf",
            TableKind::Radical => "radical",
        },
        "a": a.to_string(),
        "b": b.to_string(),
        "n_max": args.n_max,
        "digits": args.digits,
    });
    if args.seeds.is_some() && args.kind != TableKind::Ratio {
        return Err(Failure::usage("--seeds only applies to ratio tables"));
    }
    let report = match args.kind {
        TableKind::Ratio => {
            let mut spec = RecurrenceSpec::two_term(a, b);
            if let Some(seeds) = &args.seeds {
                spec = spec.with_seeds(seeds.clone())?;
                params["seeds"] = strings(spec.seeds());
            }
            ratio_convergence_table(&spec, args.n_max, args.digits)?
        }
        TableKind::Cf => cf_convergence_table(&a, &b, args.n_max, args.digits)?,
        TableKind::Radical => radical_convergence_table(&a, &b, args.n_max, args.digits)?,
    };
    Ok(render::table_output("table", params, &report, format))
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let tabular = matches!(
        cli.command,
        Command::Table(_)
            | Command::Cf(CfArgs { table: true, .. })
            | Command::Radical(RadicalArgs { table: true, .. })
    );
    if cli.format == Format::Csv && !tabular {
        return Err(Failure::usage("--format csv is only available for tables"));
    }
    match &cli.command {
        Command::Seq(args) => run_seq(args),
        Command::Phi(args) => run_phi(args),
        Command::Cf(args) => run_cf(args, cli.format),
        Command::Radical(args) => run_radical(args, cli.format),
        Command::Verify(args) => run_verify(args),
        Command::Table(args) => run_table(args, cli.format),
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Seq(_) => "seq",
        Command::Phi(_) => "phi",
        Command::Cf(_) => "cf",
        Command::Radical(_) => "radical",
        Command::Verify(_) => "verify",
        Command::Table(_) => "table",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(output) => {
            let mut stdout = io::stdout().lock();
            if stdout
                .write_all(output.render(cli.format).as_bytes())
                .is_err()
            {
                return ExitCode::FAILURE;
            }
            ExitCode::from(output.exit_code)
        }
        Err(failure) => {
            let message = match cli.format {
                Format::Json => {
                    let argv: Vec<String> = std::env::args().skip(1).collect();
                    render::error_envelope(
                        command_name(&cli.command),
                        &argv,
                        failure.code,
                        failure.kind,
                        &failure.message,
                    )
                }
                _ => format!("error: {}\n", failure.message),
            };
            let _ = io::stderr().write_all(message.as_bytes());
            ExitCode::from(failure.code)
        }
    }
}
