use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use siegel_core::characters::DirichletCharacter;
use siegel_core::eisenstein::{build_table, EisensteinParams};
use siegel_core::lambda_adic::{integral_lambda_coefficient, lambda_coefficient, LambdaParams};
use siegel_core::quadforms::{enumerate_indices, HalfIntegralMatrix};
use siegel_core::siegelseries::{expected_degree, functional_equation_check, local_siegel_poly, F_from_b};

mod suites;

#[derive(Parser, Debug)]
#[command(name = "siegel", version, about = "Exact Fourier coefficients of Siegel Eisenstein series")]
struct Cli {
    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Classical Fourier table for trace(T) <= bound.
    Classical(Common),
    /// p-stabilized Fourier table.
    Stabilize(Common),
    /// Lambda-adic coefficients in the weight variable.
    Lambda(Common),
    /// Local polynomial F_l(T; X) for one matrix.
    SiegelSeries(SeriesArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 1)]
    pub genus: usize,
    #[arg(long, default_value_t = 4)]
    pub weight: i64,
    #[arg(long, default_value_t = 5)]
    pub prime: u64,
    /// Character "M:g^x,..." (or "1" for trivial).
    #[arg(long = "char", default_value = "1")]
    pub character: String,
    #[arg(long)]
    pub trace_bound: Option<i64>,
    #[arg(long, default_value_t = 6)]
    pub xprec: usize,
    #[arg(long, default_value_t = 8)]
    pub pprec: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    /// Matrix key "n:g11,g12,...,gnn" (upper triangle of 2T, row by row).
    #[arg(long)]
    matrix: String,
    #[arg(long, default_value_t = 2)]
    prime: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Genus1,
    Operator,
    SiegelSeries,
    Kummer,
    LambdaSpecialize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite_pos: Option<Suite>,
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    #[command(flatten)]
    common: Common,
}

/// Errors split by exit status.
enum Failure {
    Invalid(String),
    Verification(Value, Option<PathBuf>),
}

impl From<siegel_core::Error> for Failure {
    fn from(e: siegel_core::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

pub fn parse_character(s: &str) -> Result<DirichletCharacter, siegel_core::Error> {
    if s == "1" {
        return Ok(DirichletCharacter::trivial(1));
    }
    DirichletCharacter::parse(s)
}

fn eisenstein_params(c: &Common) -> Result<EisensteinParams, Failure> {
    Ok(EisensteinParams::new(c.genus, c.weight, parse_character(&c.character)?)?)
}

fn check_prime(p: u64, c: &DirichletCharacter) -> Result<(), Failure> {
    if !siegel_core::exactnum::arith::is_prime(p) {
        return Err(Failure::Invalid(format!("{p} is not prime")));
    }
    if c.modulus() % p == 0 {
        return Err(Failure::Invalid(format!("{p} divides the level")));
    }
    Ok(())
}

pub fn lambda_params(c: &Common) -> Result<LambdaParams, siegel_core::Error> {
    let chi = parse_character(&c.character)?;
    let a = c.weight.rem_euclid(c.prime as i64 - 1) as u64;
    LambdaParams::new(c.genus, chi, a, c.prime, c.xprec, c.pprec)
}

fn emit(v: &Value, out: &Option<PathBuf>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.verb {
        Verb::Classical(c) => {
            let params = eisenstein_params(&c)?;
            let table = build_table(&params, None, c.trace_bound.unwrap_or(3))?;
            emit(&table.to_json(), &c.out)
        }
        Verb::Stabilize(c) => {
            let params = eisenstein_params(&c)?;
            check_prime(c.prime, &params.character)?;
            let table = build_table(&params, Some(c.prime), c.trace_bound.unwrap_or(3))?;
            emit(&table.to_json(), &c.out)
        }
        Verb::Lambda(c) => {
            let params = lambda_params(&c)?;
            let mut entries = serde_json::Map::new();
            for t in enumerate_indices(c.genus, c.trace_bound.unwrap_or(2)) {
                let frac = lambda_coefficient(&params, &t)?;
                let integral = integral_lambda_coefficient(&params, &t)?;
                entries.insert(
                    t.key(),
                    json!({ "coefficient": frac.to_json(), "integral": integral.numerator.to_strings() }),
                );
            }
            let v = json!({
                "params": {
                    "genus": c.genus,
                    "character": params.character.to_json(),
                    "a": params.a,
                    "prime": params.p,
                    "xprec": params.xprec,
                    "pprec": params.pprec,
                },
                "entries": entries,
            });
            emit(&v, &c.out)
        }
        Verb::SiegelSeries(s) => {
            let t = HalfIntegralMatrix::parse_key(&s.matrix)?;
            if !siegel_core::exactnum::arith::is_prime(s.prime) {
                return Err(Failure::Invalid(format!("{} is not prime", s.prime)));
            }
            let f = local_siegel_poly(&t, s.prime)?;
            let full = F_from_b(&t, s.prime)?;
            let v = json!({
                "matrix": t.key(),
                "prime": s.prime,
                "F": f.to_json(),
                "routes_agree": f == full,
                "degree": f.degree(),
                "expected_degree": expected_degree(&t, s.prime)?,
                "functional_equation": functional_equation_check(&t, s.prime, &f),
            });
            emit(&v, &s.out)
        }
        Verb::Verify(v) => {
            let suite = v
                .suite
                .or(v.suite_pos)
                .ok_or_else(|| Failure::Invalid("a suite is required".into()))?;
            let report = suites::run_suite(suite, &v.common)?;
            let pass = report["pass"].as_bool().unwrap_or(false);
            if pass {
                emit(&report, &v.common.out)
            } else {
                Err(Failure::Verification(report, v.common.out.clone()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .expect("thread pool is configured once");
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(report, out)) => {
            let _ = emit(&report, &out);
            eprintln!("verification failed");
            ExitCode::from(1)
        }
    }
}
