//! The `stj` command-line front end.
//!
//! [`run`] takes the argument vector and the three standard streams, so the
//! whole tool can be driven in-process by tests.

pub mod exec;
pub mod output;

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stieltjes::engine::{Method, Settings};
use stieltjes::numerics::{parse_rational, set_max_degree};
use stieltjes::Rational;
use stieltjes_dsl::{parse, parse_expr, Diagnostic, Probe, Program, Scope};

use output::{render, render_diagnostic, Format, Outcome, Record};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DIAGNOSTIC: i32 = 2;
pub const EXIT_ENGINE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "stj", version, about = "Exact Ross-Darboux-Stieltjes integration")]
pub struct Cli {
    /// Enclosure tolerance, as a rational or decimal.
    #[arg(long, global = true, default_value = "1/1000000", value_parser = rational)]
    pub tol: Rational,
    /// Maximum number of enclosure refinement rounds.
    #[arg(long, global = true, default_value_t = 60)]
    pub max_refine: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized demos.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// `exact` uses closed forms where possible; `enclosure` always brackets.
    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Enclosure,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a program file, or standard input when FILE is `-`.
    Run { file: String },
    /// RDS integral of F against ALPHA.
    Integrate(Pair),
    /// RDS and DS integrals side by side, with their discrepancy.
    Compare(Pair),
    /// Integration by parts for ALPHA and BETA.
    Parts {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(allow_hyphen_values = true)]
        beta: String,
        #[command(flatten)]
        on: On,
    },
    /// Jordan and saltus decompositions of ALPHA.
    Decompose {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[command(flatten)]
        on: On,
    },
    /// Whether F is RDS integrable against ALPHA.
    Check(Pair),
    /// Riemann-type sum probes.
    Sums {
        #[arg(value_enum)]
        probe: ProbeArg,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[command(flatten)]
        on: On,
        /// Mesh bounds for `mrs`, comma separated.
        #[arg(long, value_delimiter = ',', value_parser = rational)]
        meshes: Option<Vec<Rational>>,
        /// Base partition for `rps`, comma separated.
        #[arg(long, value_delimiter = ',', value_parser = rational)]
        base: Option<Vec<Rational>>,
        /// Bisection rounds for `rps`.
        #[arg(long)]
        rounds: Option<u32>,
        /// Alpha-mesh targets for `rrs`, comma separated.
        #[arg(long, value_delimiter = ',', value_parser = rational)]
        deltas: Option<Vec<Rational>>,
    },
    /// Integrals of x^n against ALPHA for n = 1..=COUNT.
    Table {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[command(flatten)]
        on: On,
        #[arg(long, default_value_t = 30)]
        count: u32,
    },
    /// Random Heaviside comparisons; requires --seed.
    Demo {
        #[arg(long, default_value_t = 3)]
        count: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeArg {
    Mrs,
    Rps,
    Rrs,
}

impl From<ProbeArg> for Probe {
    fn from(p: ProbeArg) -> Self {
        match p {
            ProbeArg::Mrs => Probe::Mrs,
            ProbeArg::Rps => Probe::Rps,
            ProbeArg::Rrs => Probe::Rrs,
        }
    }
}

#[derive(Debug, Args)]
pub struct Pair {
    #[arg(allow_hyphen_values = true)]
    pub f: String,
    #[arg(allow_hyphen_values = true)]
    pub alpha: String,
    #[command(flatten)]
    pub on: On,
}

#[derive(Debug, Args)]
pub struct On {
    /// Interval endpoints `a,b`.
    #[arg(long, value_delimiter = ',', num_args = 1, value_parser = rational, allow_hyphen_values = true)]
    pub on: Vec<Rational>,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s.trim()).map_err(|e| e.to_string())
}

impl Cli {
    pub fn settings(&self) -> Settings {
        Settings {
            tol: self.tol.clone(),
            max_refine: self.max_refine,
            method: match self.method {
                MethodArg::Exact => Method::Auto,
                MethodArg::Enclosure => Method::Enclosure,
            },
        }
    }
}

/// Failure before any query ran.
enum Stop {
    Usage(String),
    Diagnostic(Diagnostic, String),
}

/// Runs the tool and returns its exit code. `args` includes the program
/// name. `env_degree` is the value of `STJ_MAX_DEGREE`, if set.
pub fn run(
    args: &[String],
    env_degree: Option<&str>,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Some(v) = env_degree {
        match v.trim().parse::<usize>() {
            Ok(cap) => set_max_degree(cap),
            Err(_) => {
                let _ = writeln!(err, "stj: STJ_MAX_DEGREE must be a nonnegative integer, got {v:?}");
                return EXIT_USAGE;
            }
        }
    }
    match records(&cli, stdin) {
        Ok(recs) => {
            let mut code = EXIT_OK;
            for (i, rec) in recs.iter().enumerate() {
                if matches!(rec.outcome, Outcome::Error(_)) {
                    code = EXIT_ENGINE;
                }
                if i > 0 && cli.format == Format::Text {
                    let _ = writeln!(out);
                }
                let _ = writeln!(out, "{}", render(rec, cli.format));
            }
            code
        }
        Err(Stop::Usage(msg)) => {
            let _ = writeln!(err, "stj: {msg}");
            EXIT_USAGE
        }
        Err(Stop::Diagnostic(d, source)) => {
            let _ = writeln!(out, "{}", render_diagnostic(&d, &source, cli.format));
            EXIT_DIAGNOSTIC
        }
    }
}

fn records(cli: &Cli, stdin: &mut dyn Read) -> Result<Vec<Record>, Stop> {
    let settings = cli.settings();
    match &cli.command {
        Command::Run { file } => {
            let src = if file == "-" {
                let mut s = String::new();
                stdin.read_to_string(&mut s).map_err(|e| Stop::Usage(format!("stdin: {e}")))?;
                s
            } else {
                std::fs::read_to_string(file).map_err(|e| Stop::Usage(format!("{file}: {e}")))?
            };
            let program = parse(&src).map_err(|d| Stop::Diagnostic(d, file.clone()))?;
            Ok(exec::run_program(&program, &settings, ""))
        }
        Command::Integrate(p) => one_query(&[("f", &p.f), ("alpha", &p.alpha)], "integrate f dalpha", "", &p.on, &settings),
        Command::Compare(p) => one_query(&[("f", &p.f), ("alpha", &p.alpha)], "compare f dalpha", "", &p.on, &settings),
        Command::Check(p) => one_query(&[("f", &p.f), ("alpha", &p.alpha)], "check f dalpha", "", &p.on, &settings),
        Command::Parts { alpha, beta, on } => {
            one_query(&[("alpha", alpha), ("beta", beta)], "parts alpha beta", "", on, &settings)
        }
        Command::Decompose { alpha, on } => one_query(&[("alpha", alpha)], "decompose alpha", "", on, &settings),
        Command::Sums { probe, f, alpha, on, meshes, base, rounds, deltas } => {
            let list = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
            let mut with = Vec::new();
            if let Some(m) = meshes {
                with.push(format!("meshes = [{}]", list(m)));
            }
            if let Some(b) = base {
                with.push(format!("base = [{}]", list(b)));
            }
            if let Some(r) = rounds {
                with.push(format!("rounds = {r}"));
            }
            if let Some(d) = deltas {
                with.push(format!("deltas = [{}]", list(d)));
            }
            let with = if with.is_empty() { String::new() } else { format!(" with {}", with.join(", ")) };
            let head = format!("sums {} f dalpha", Probe::from(*probe).keyword());
            one_query(&[("f", f), ("alpha", alpha)], &head, &with, on, &settings)
        }
        Command::Table { alpha, on, count } => {
            let (a, b) = interval(on)?;
            let program = program_with(&[("alpha", alpha)], "")?;
            let scope = Scope::new(&program);
            let echo = format!("{}table x^n dalpha for n = 1..{count} on [{a}, {b}]", echo_prefix(&program));
            let outcome = match exec::power_table(&scope, "alpha", &a, &b, *count, &settings) {
                Ok(r) => Outcome::Result(Box::new(r)),
                Err(e) => Outcome::Error((&e).into()),
            };
            Ok(vec![Record { query: echo, outcome }])
        }
        Command::Demo { count } => {
            let seed = cli.seed.ok_or_else(|| Stop::Usage("demo requires --seed".into()))?;
            let src = demo_program(seed, *count);
            let program = parse(&src).map_err(|d| Stop::Diagnostic(d, "demo".into()))?;
            Ok(exec::run_program(&program, &settings, &echo_prefix(&program)))
        }
    }
}

fn interval(on: &On) -> Result<(Rational, Rational), Stop> {
    match on.on.as_slice() {
        [a, b] if a < b => Ok((a.clone(), b.clone())),
        [_, _] => Err(Stop::Usage("--on needs a < b".into())),
        _ => Err(Stop::Usage("--on takes exactly two endpoints, as in --on 0,1".into())),
    }
}

/// Binds each expression argument under a fixed name and appends `tail`.
/// Every argument is parsed on its own first so that a diagnostic points
/// into the text the user typed.
fn program_with(exprs: &[(&str, &String)], tail: &str) -> Result<Program, Stop> {
    let mut text = String::new();
    for (name, src) in exprs {
        let e = parse_expr(src, &[]).map_err(|d| Stop::Diagnostic(d, name.to_string()))?;
        text.push_str(&format!("let {name} = {e};\n"));
    }
    text.push_str(tail);
    parse(&text).map_err(|d| Stop::Diagnostic(d, "arguments".into()))
}

fn one_query(exprs: &[(&str, &String)], head: &str, with: &str, on: &On, settings: &Settings) -> Result<Vec<Record>, Stop> {
    let (a, b) = interval(on)?;
    let program = program_with(exprs, &format!("{head}{with} on [{a}, {b}];"))?;
    Ok(exec::run_program(&program, settings, &echo_prefix(&program)))
}

/// The bindings of `program` on one line, used in front of each echo.
fn echo_prefix(program: &Program) -> String {
    program.bindings.iter().map(|b| format!("let {} = {}; ", b.name, b.expr)).collect()
}

/// `count` Heaviside comparisons with random values and jump locations.
pub fn demo_program(seed: u64, count: u32) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut src = String::new();
    let frac = |rng: &mut ChaCha8Rng| {
        let d: i64 = rng.gen_range(1..=8);
        format!("{}/{d}", rng.gen_range(0..=d))
    };
    for i in 0..count {
        let (c, e) = (frac(&mut rng), frac(&mut rng));
        let d: i64 = rng.gen_range(2..=8);
        let at = format!("{}/{d}", rng.gen_range(1 - d..d));
        src.push_str(&format!("let f{i} = heaviside(c={c}, at={at});\nlet g{i} = heaviside(c={e}, at={at});\n"));
    }
    for i in 0..count {
        src.push_str(&format!("compare f{i} dg{i} on [-1, 1];\n"));
    }
    src
}
