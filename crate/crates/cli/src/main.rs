use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use polypar::exact::{parse_rational, to_f64};
use polypar::pairs;
use polypar::preserve;
use polypar::search;
use polypar::suites::{self, SuiteConfig};
use polypar::sums::{self, SumPoint};
use polypar::{io, Error, PairKind, PolyhedralSpace, Rational, Vector};

mod plot;

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const INCONSISTENT: u8 = 2;
const INPUT_ERROR: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "polypar",
    version,
    about = "Exact parallel-pair and TEA-pair computations in polyhedral normed spaces",
    after_help = "\
SPACES
  A space argument is a path to a JSON space file or a catalog expression:
    l1:n, linf:n      n = 2..6
    hexagon           dual vertices (1,0), (1/2,1), (1/2,-1) and their negatives;
                      a rational hexagon, not the regular one
    l1(A,B), linf(A,B)  direct sums of two space expressions

VECTORS
  Comma-separated rationals, e.g. \"1,-1/2,0\".

EXIT CODES
  0 success or relation holds, 1 definite negative with a witness,
  2 internal inconsistency, 3 input error"
)]
struct Cli {
    /// Also write the report (or SVG) to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a pair relation by the norm identity and by supporting functionals.
    Pair {
        space: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        /// tea or parallel
        kind: Option<PairKind>,
        #[arg(long = "kind", value_name = "KIND", conflicts_with = "kind")]
        kind_flag: Option<PairKind>,
    },
    /// Certify whether an operator preserves TEA or parallel pairs.
    CheckPreserver {
        #[arg(long, value_name = "FILE")]
        operator: PathBuf,
        #[arg(long, default_value = "tea")]
        kind: PairKind,
    },
    /// Sample random rational operators and tally the preservers by rank.
    Search {
        domain: String,
        codomain: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Draw a 2-dimensional unit ball as SVG.
    Plot {
        #[arg(long, value_name = "FILE|NAME")]
        space: String,
    },
    /// Run a property suite, or "all".
    Suite {
        name: String,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Multiplier applied to every sample count.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Decide epsilon-approximate Birkhoff-James orthogonality exactly.
    EpsOrth {
        space: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value = "1/100", value_name = "P/Q")]
        eps: String,
    },
    /// Decide whether a space has numerical index one.
    IndexOne {
        #[arg(long, value_name = "FILE|NAME")]
        space: String,
    },
    /// Floating-point pair test for z1 = (z1_left, z1_right) and z2 = (z2_left, z2_right) in the p-sum of two spaces.
    Psum {
        left: String,
        right: String,
        #[arg(allow_hyphen_values = true)]
        z1_left: String,
        #[arg(allow_hyphen_values = true)]
        z1_right: String,
        #[arg(allow_hyphen_values = true)]
        z2_left: String,
        #[arg(allow_hyphen_values = true)]
        z2_right: String,
        #[arg(long, value_name = "P")]
        p: String,
        #[arg(long, default_value = "parallel")]
        kind: PairKind,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Print dual vertices, primal vertices and face counts of a space.
    Info {
        #[arg(long, value_name = "FILE|NAME")]
        space: String,
    },
}

struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn new(text: String, code: u8) -> Self {
        Outcome { text, code }
    }
}

fn space(reference: &str) -> Result<PolyhedralSpace, Error> {
    io::resolve_space(reference, None)
}

fn vector(text: &str, space: &PolyhedralSpace) -> Result<Vector, Error> {
    let v = Vector::parse(text)?;
    v.check_dim(space.dim())?;
    Ok(v)
}

fn verdict_line(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "fails"
    }
}

fn cmd_pair(space_ref: &str, x: &str, y: &str, kind: PairKind) -> Result<Outcome, Error> {
    let space = space(space_ref)?;
    let (x, y) = (vector(x, &space)?, vector(y, &space)?);
    let direct = pairs::pair_direct(&space, &x, &y, kind)?;
    let functional = pairs::pair_functional(&space, &x, &y, kind)?;
    let mut out = String::new();
    writeln!(out, "space: {}", space.name()).unwrap();
    writeln!(out, "kind: {kind}").unwrap();
    writeln!(out, "mode: exact").unwrap();
    writeln!(out, "x: ({x})  norm {}", space.norm(&x)?).unwrap();
    writeln!(out, "y: ({y})  norm {}", space.norm(&y)?).unwrap();
    writeln!(out, "direct: {}", verdict_line(direct)).unwrap();
    writeln!(out, "functional: {}", verdict_line(functional.holds)).unwrap();
    if let Some(sign) = functional.witness_sign {
        let lambda = if sign > 0 { "+1" } else { "-1" };
        writeln!(out, "lambda: {lambda}").unwrap();
    }
    if let Some(g) = functional.witness_functional {
        writeln!(out, "witness functional: {g} = ({})", space.functional(g)).unwrap();
    }
    if direct != functional.holds {
        writeln!(out, "error: direct and functional verdicts disagree").unwrap();
        return Ok(Outcome::new(out, INCONSISTENT));
    }
    Ok(Outcome::new(out, OK))
}

fn cmd_check_preserver(path: &Path, kind: PairKind) -> Result<Outcome, Error> {
    let op = io::load_operator_file(path)?;
    let report = preserve::preserves(&op, kind);
    let mut out = String::new();
    writeln!(
        out,
        "operator: {} -> {}",
        op.domain().name(),
        op.codomain().name()
    )
    .unwrap();
    writeln!(out, "matrix: {}", op.matrix().inline()).unwrap();
    writeln!(out, "mode: exact").unwrap();
    out.push_str(&report.render(&op));
    let code = if report.preserves {
        OK
    } else if report.counterexample_verifies(&op) {
        NEGATIVE
    } else {
        writeln!(
            out,
            "error: no verified counterexample for a negative verdict"
        )
        .unwrap();
        INCONSISTENT
    };
    Ok(Outcome::new(out, code))
}

fn cmd_search(domain: &str, codomain: &str, trials: usize, seed: u64) -> Result<Outcome, Error> {
    if trials == 0 {
        return Err(Error::PreconditionFailed(
            "--trials must be at least 1".into(),
        ));
    }
    let domain = std::sync::Arc::new(space(domain)?);
    let codomain = std::sync::Arc::new(space(codomain)?);
    let summary = search::search_preservers(domain, codomain, trials, seed);
    let code = if summary.violations.is_empty() {
        OK
    } else {
        INCONSISTENT
    };
    Ok(Outcome::new(format!("mode: exact\n{summary}"), code))
}

fn cmd_suite(name: &str, seed: u64, scale: f64) -> Result<Outcome, Error> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::PreconditionFailed("--scale must be positive".into()));
    }
    let reports = suites::run_suite(name, &SuiteConfig { seed, scale })?;
    let mut out = String::new();
    for r in &reports {
        out.push_str(&r.to_string());
    }
    let passed = reports.iter().all(|r| r.passed());
    writeln!(out, "overall: {}", if passed { "PASS" } else { "FAIL" }).unwrap();
    Ok(Outcome::new(out, if passed { OK } else { INCONSISTENT }))
}

fn cmd_eps(space_ref: &str, x: &str, y: &str, eps: &str) -> Result<Outcome, Error> {
    let space = space(space_ref)?;
    let (x, y) = (vector(x, &space)?, vector(y, &space)?);
    let eps: Rational = parse_rational(eps)?;
    let holds = pairs::is_eps_orthogonal(&space, &x, &y, &eps)?;
    let bj = pairs::is_bj_orthogonal(&space, &x, &y)?;
    let mut out = String::new();
    writeln!(out, "space: {}", space.name()).unwrap();
    writeln!(out, "mode: exact").unwrap();
    writeln!(out, "eps: {eps}").unwrap();
    writeln!(out, "birkhoff-james: {}", verdict_line(bj)).unwrap();
    writeln!(out, "eps-orthogonal: {}", verdict_line(holds)).unwrap();
    if bj && !holds {
        writeln!(out, "error: orthogonal pair that is not eps-orthogonal").unwrap();
        return Ok(Outcome::new(out, INCONSISTENT));
    }
    Ok(Outcome::new(out, if holds { OK } else { NEGATIVE }))
}

fn cmd_index_one(space_ref: &str) -> Result<Outcome, Error> {
    let space = space(space_ref)?;
    let holds = pairs::has_numerical_index_one(&space);
    let mut out = String::new();
    writeln!(out, "space: {}", space.name()).unwrap();
    writeln!(out, "mode: exact").unwrap();
    writeln!(out, "numerical index one: {}", verdict_line(holds)).unwrap();
    if holds {
        return Ok(Outcome::new(out, OK));
    }
    let witness = space.primal_vertices().iter().find_map(|v| {
        space.signed_duals().find_map(|g| {
            let value = space.apply(g, v);
            (value != Rational::from_integer(1.into())
                && value != Rational::from_integer((-1).into()))
            .then(|| (v.clone(), g, value))
        })
    });
    match witness {
        Some((v, g, value)) => {
            writeln!(
                out,
                "witness: vertex ({v}), functional {g} = ({}), value {value}",
                space.functional(g)
            )
            .unwrap();
            Ok(Outcome::new(out, NEGATIVE))
        }
        None => {
            writeln!(out, "error: no witness found for a negative verdict").unwrap();
            Ok(Outcome::new(out, INCONSISTENT))
        }
    }
}

fn parse_p(text: &str) -> Result<f64, Error> {
    match parse_rational(text) {
        Ok(r) => Ok(to_f64(&r)),
        Err(e) => text.parse::<f64>().map_err(|_| e),
    }
}

fn cmd_psum(
    left: &str,
    right: &str,
    [l1, r1, l2, r2]: [&str; 4],
    p: &str,
    kind: PairKind,
    tol: f64,
) -> Result<Outcome, Error> {
    let (a, b) = (space(left)?, space(right)?);
    let z1 = SumPoint::new(vector(l1, &a)?, vector(r1, &b)?);
    let z2 = SumPoint::new(vector(l2, &a)?, vector(r2, &b)?);
    let p = parse_p(p)?;
    let verdict = sums::p_sum_pair_test(&a, &b, p, &z1, &z2, kind, tol)?;
    let mut out = String::new();
    writeln!(out, "sum: ({},{}) with p = {p}", a.name(), b.name()).unwrap();
    writeln!(out, "kind: {kind}").unwrap();
    writeln!(
        out,
        "mode: {}",
        if verdict.is_numeric() {
            "numeric"
        } else {
            "exact"
        }
    )
    .unwrap();
    writeln!(out, "tol: {tol:e}").unwrap();
    writeln!(out, "z1: {z1}").unwrap();
    writeln!(out, "z2: {z2}").unwrap();
    writeln!(out, "verdict: {verdict}").unwrap();
    Ok(Outcome::new(out, if verdict.holds { OK } else { NEGATIVE }))
}

fn cmd_info(space_ref: &str) -> Result<Outcome, Error> {
    let space = space(space_ref)?;
    let mut out = space.to_string();
    for k in 0..space.dim() {
        writeln!(out, "  {k}-faces: {}", space.faces(k).len()).unwrap();
    }
    Ok(Outcome::new(out, OK))
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Pair {
            space,
            x,
            y,
            kind,
            kind_flag,
        } => cmd_pair(
            space,
            x,
            y,
            kind.or(*kind_flag).unwrap_or(PairKind::Parallel),
        ),
        Command::CheckPreserver { operator, kind } => cmd_check_preserver(operator, *kind),
        Command::Search {
            domain,
            codomain,
            trials,
            seed,
        } => cmd_search(domain, codomain, *trials, *seed),
        Command::Plot { space: s } => {
            if cli.out.is_none() {
                return Err(Error::PreconditionFailed("plot needs --out PATH".into()));
            }
            let svg = plot::render_svg(&space(s)?)?;
            Ok(Outcome::new(svg, OK))
        }
        Command::Suite { name, seed, scale } => cmd_suite(name, *seed, *scale),
        Command::EpsOrth { space, x, y, eps } => cmd_eps(space, x, y, eps),
        Command::IndexOne { space } => cmd_index_one(space),
        Command::Psum {
            left,
            right,
            z1_left,
            z1_right,
            z2_left,
            z2_right,
            p,
            kind,
            tol,
        } => cmd_psum(
            left,
            right,
            [z1_left, z1_right, z2_left, z2_right],
            p,
            *kind,
            *tol,
        ),
        Command::Info { space } => cmd_info(space),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR } else { OK });
        }
    };
    let start = Instant::now();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(INPUT_ERROR);
        }
    };
    match (&cli.command, &cli.out) {
        (Command::Plot { .. }, Some(path)) => {
            if let Err(e) = fs::write(path, &outcome.text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(INPUT_ERROR);
            }
            println!("command: polypar {}", args.join(" "));
            println!("wrote {}", path.display());
        }
        (_, out) => {
            let report = format!("command: polypar {}\n{}", args.join(" "), outcome.text);
            print!("{report}");
            if let Some(path) = out {
                if let Err(e) = fs::write(path, &report) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(INPUT_ERROR);
                }
            }
        }
    }
    eprintln!("wall time: {:.3}s", start.elapsed().as_secs_f64());
    ExitCode::from(outcome.code)
}
