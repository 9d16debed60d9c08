//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a check finds a mismatch
//! (or a simulation misses its target), 2 on usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_core::{format_rational, parse_rational, Rational, DEFAULT_ORDER};
use crate::identities::{
    bessel_identity_partial, euler_identity_partial, geometric_tail_report, sech_series, BracketPoly,
    IdentityReport, IdentitySpec, Model,
};
use crate::loop_engine::{
    count_nonadjacent, count_with_initial, denominator_terms, format_denominator, nonadjacent_subsets, verify_loop,
    LoopSystem,
};
use crate::models::{bd_system, bessel_system, bm_system, BirthDeathChain, SiteConfig};
use crate::montecarlo::{simulate_bd, simulate_bessel_hit, simulate_bm_hit};
use crate::report::VerificationReport;
use crate::special_polys::{bernoulli_poly, euler_poly};
use crate::umbral::{combo_moment, verify_symbol_identity, SymbolCombo};

pub const ORDER_ENV: &str = "LOOPWALK_ORDER";

const COMBO_GRAMMAR: &str = "combo := ['-'] term (('+'|'-') term)*\n\
term  := coef | [coef '*'] atom\n\
atom  := 'x' | ('B'|'E'|'U') ['^' order]\n\
coef  := integer ['/' integer]";

#[derive(Parser, Debug)]
#[command(name = "loopwalk", version, about = "Exact loop decompositions and Bernoulli/Euler identities")]
struct Cli {
    /// Truncation order; falls back to $LOOPWALK_ORDER, then 30.
    #[arg(long, global = true)]
    order: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PolyKind {
    Bernoulli,
    Euler,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LoopModel {
    Bm,
    Bessel,
    Bd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum IdentityModel {
    Bm,
    Bessel,
}

impl From<IdentityModel> for Model {
    fn from(m: IdentityModel) -> Model {
        match m {
            IdentityModel::Bm => Model::Bm,
            IdentityModel::Bessel => Model::Bessel,
        }
    }
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Higher-order Bernoulli or Euler polynomial values P_n^{(p)}(x).
    Poly {
        #[arg(long, value_enum)]
        kind: PolyKind,
        /// Largest degree; values for 0..=n are printed.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value = "0", value_parser = rational_arg, allow_hyphen_values = true)]
        x: Rational,
    },
    /// Moments of an umbral combination, or an identity check with --equals.
    #[command(after_help = COMBO_GRAMMAR)]
    Umbral {
        /// Left-hand combination, e.g. "x + B + U".
        #[arg(allow_hyphen_values = true)]
        combo: String,
        #[arg(long, allow_hyphen_values = true)]
        equals: Option<String>,
        /// Value substituted for `x`.
        #[arg(long, default_value = "0", value_parser = rational_arg, allow_hyphen_values = true)]
        x: Rational,
        /// Number of moments to print (without --equals).
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// Nonadjacent subset counts N(l, n) or n(a, l, n).
    Count {
        #[arg(long)]
        n: usize,
        /// Subset size; all sizes when omitted.
        #[arg(long)]
        l: Option<usize>,
        /// Restrict to subsets whose smallest index is this.
        #[arg(long)]
        initial: Option<usize>,
        /// Also list the subsets.
        #[arg(long)]
        list: bool,
    },
    /// Signed terms of the loop denominator.
    Denominator {
        #[arg(long)]
        n: usize,
    },
    /// Check the loop decomposition for one model.
    VerifyLoop {
        #[arg(long, value_enum)]
        model: LoopModel,
        /// Equally spaced sites (unit spacing, fair chain for bd) with this many loops.
        #[arg(long, conflicts_with_all = ["sites", "chain"])]
        loops: Option<usize>,
        /// JSON array of rational site positions, starting at "0".
        #[arg(long, conflicts_with = "chain")]
        sites: Option<String>,
        /// JSON array of rational up-probabilities for interior chain sites.
        #[arg(long)]
        chain: Option<String>,
    },
    /// Exact generating-function checks of the polynomial identities.
    VerifyIdentity {
        #[arg(long, value_enum)]
        model: IdentityModel,
        #[arg(long)]
        m: usize,
        /// Sample points for the x-dependent check (repeatable).
        #[arg(long = "x", value_parser = rational_arg, allow_hyphen_values = true, default_values = ["0"])]
        x_points: Vec<Rational>,
    },
    /// Truncation error of the geometric sum over the bracket polynomial.
    Tail {
        #[arg(long, value_enum)]
        model: IdentityModel,
        #[arg(long)]
        m: usize,
        #[arg(long = "k", default_value_t = 200)]
        max_k: usize,
        /// Custom bracket "power:coeff,..." in s = sech w, replacing the model's.
        #[arg(long, allow_hyphen_values = true)]
        bracket: Option<String>,
    },
    /// Partial sums of the k-series form of an identity.
    Partial {
        #[arg(long, value_enum)]
        model: IdentityModel,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "0", value_parser = rational_arg, allow_hyphen_values = true)]
        x: Rational,
        #[arg(long = "k", default_value_t = 40)]
        max_k: usize,
    },
    /// Monte Carlo estimate of a hitting-time transform.
    Simulate(SimulateArgs),
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    model: LoopModel,
    #[arg(long, default_value = "1", value_parser = rational_arg)]
    level: Rational,
    #[arg(long, default_value_t = 0.5)]
    w: f64,
    #[arg(long, default_value_t = 100_000)]
    paths: u64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    z: f64,
    /// JSON array of up-probabilities; a fair three-site chain by default.
    #[arg(long)]
    chain: Option<String>,
    #[arg(long, default_value_t = 0)]
    from: usize,
    /// Target site; the top site by default.
    #[arg(long)]
    to: Option<usize>,
    #[arg(long)]
    taboo: Option<usize>,
}

/// Rendered output plus the exit status it implies.
struct Outcome {
    text: String,
    json: String,
    csv: Option<String>,
    pass: bool,
}

impl Outcome {
    fn new(text: String, json: impl Serialize, csv: Option<String>, pass: bool) -> Self {
        let json = serde_json::to_string_pretty(&json).expect("reports serialize");
        Outcome { text, json, csv, pass }
    }
}

fn report_text(label: &str, r: &VerificationReport) -> String {
    match r.first_mismatch {
        None => format!("{label}: equal through order {}", r.order()),
        Some(i) => format!(
            "{label}: MISMATCH at coefficient {i} (difference {})",
            format_rational(&r.diffs[i])
        ),
    }
}

fn diffs_csv(r: &VerificationReport) -> String {
    let mut out = String::from("coefficient,difference\n");
    for (i, d) in r.diffs.iter().enumerate() {
        let _ = writeln!(out, "{i},{}", format_rational(d));
    }
    out
}

fn resolve_order(flag: Option<usize>) -> Result<usize> {
    if let Some(order) = flag {
        return Ok(order);
    }
    match std::env::var(ORDER_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{ORDER_ENV}={v:?} is not a natural number"))),
        Err(_) => Ok(DEFAULT_ORDER),
    }
}

fn parse_bracket(src: &str) -> Result<BracketPoly> {
    src.split(',')
        .map(|part| {
            let (p, c) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected power:coeff, got {part:?}")))?;
            let p: usize = p.trim().parse().map_err(|_| Error::Parse(format!("bad power {p:?}")))?;
            if p == 0 || p % 2 == 1 {
                return Err(Error::Parse(format!("bracket powers must be even and positive, got {p}")));
            }
            Ok((p, parse_rational(c.trim())?))
        })
        .collect()
}

fn loop_system(model: LoopModel, loops: Option<usize>, sites: Option<&str>, chain: Option<&str>, order: usize) -> Result<LoopSystem> {
    match model {
        LoopModel::Bm | LoopModel::Bessel => {
            if chain.is_some() {
                return Err(Error::InvalidArgument("--chain applies only to --model bd".into()));
            }
            let extra = if model == LoopModel::Bm { 2 } else { 3 };
            let cfg = match (loops, sites) {
                (_, Some(json)) => SiteConfig::from_json(json)?,
                (Some(m), None) => SiteConfig::equally_spaced(m + extra)?,
                (None, None) => return Err(Error::InvalidArgument("give --loops or --sites".into())),
            };
            if model == LoopModel::Bm {
                bm_system(&cfg, order)
            } else {
                bessel_system(&cfg, order)
            }
        }
        LoopModel::Bd => {
            if sites.is_some() {
                return Err(Error::InvalidArgument("--sites applies only to bm and bessel".into()));
            }
            let chain = match (loops, chain) {
                (_, Some(json)) => BirthDeathChain::from_json(json)?,
                (Some(m), None) => BirthDeathChain::new(vec![Rational::new(1.into(), 2.into()); m])?,
                (None, None) => return Err(Error::InvalidArgument("give --loops or --chain".into())),
            };
            bd_system(&chain, order)
        }
    }
}

#[derive(Serialize)]
struct PolyRow {
    n: usize,
    value: String,
}

#[derive(Serialize)]
struct CountRow {
    l: usize,
    count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    subsets: Option<Vec<String>>,
}

#[derive(Serialize)]
struct LoopOutput {
    model: String,
    loops: usize,
    report: VerificationReport,
}

fn execute(cli: Cli) -> Result<Outcome> {
    let order = resolve_order(cli.order)?;
    match cli.command {
        Command::Poly { kind, n, p, x } => {
            let rows: Vec<PolyRow> = (0..=n)
                .map(|k| {
                    let v = match kind {
                        PolyKind::Bernoulli => bernoulli_poly(k, p, &x),
                        PolyKind::Euler => euler_poly(k, p, &x),
                    };
                    PolyRow { n: k, value: format_rational(&v) }
                })
                .collect();
            let letter = if kind == PolyKind::Bernoulli { 'B' } else { 'E' };
            let text = rows.iter().map(|r| format!("{letter}_{}^({p})({x}) = {}", r.n, r.value)).collect::<Vec<_>>().join("\n");
            let csv = rows.iter().fold(String::from("n,value\n"), |acc, r| acc + &format!("{},{}\n", r.n, r.value));
            Ok(Outcome::new(text, &rows, Some(csv), true))
        }
        Command::Umbral { combo, equals, x, n } => {
            let lhs = SymbolCombo::parse_with_x(&combo, &x)?;
            match equals {
                Some(rhs_src) => {
                    let rhs = SymbolCombo::parse_with_x(&rhs_src, &x)?;
                    let r = verify_symbol_identity(&lhs, &rhs, order);
                    let text = report_text(&format!("{lhs} = {rhs}"), &r);
                    let pass = r.equal;
                    let csv = diffs_csv(&r);
                    Ok(Outcome::new(text, &r, Some(csv), pass))
                }
                None => {
                    let rows: Vec<PolyRow> = (0..n)
                        .map(|k| PolyRow { n: k, value: format_rational(&combo_moment(&lhs, k)) })
                        .collect();
                    let text = rows.iter().map(|r| format!("({lhs})^{} = {}", r.n, r.value)).collect::<Vec<_>>().join("\n");
                    let csv = rows.iter().fold(String::from("n,moment\n"), |acc, r| acc + &format!("{},{}\n", r.n, r.value));
                    Ok(Outcome::new(text, &rows, Some(csv), true))
                }
            }
        }
        Command::Count { n, l, initial, list } => {
            let sizes: Vec<usize> = match l {
                Some(l) => vec![l],
                None => (1..=n.div_ceil(2)).collect(),
            };
            let rows: Vec<CountRow> = sizes
                .into_iter()
                .map(|l| {
                    let count = match initial {
                        Some(a) => count_with_initial(a, l, n),
                        None => count_nonadjacent(l, n),
                    };
                    let subsets = list.then(|| {
                        nonadjacent_subsets(n, l)
                            .into_iter()
                            .filter(|s| initial.is_none_or(|a| s.smallest() == Some(a)))
                            .map(|s| s.to_string())
                            .collect()
                    });
                    CountRow { l, count, subsets }
                })
                .collect();
            let text = if rows.len() == 1 && !list {
                rows[0].count.to_string()
            } else {
                rows.iter()
                    .map(|r| {
                        let mut line = format!("l={}: {}", r.l, r.count);
                        if let Some(s) = &r.subsets {
                            let _ = write!(line, "  [{}]", s.join(", "));
                        }
                        line
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            let csv = rows.iter().fold(String::from("l,count\n"), |acc, r| acc + &format!("{},{}\n", r.l, r.count));
            Ok(Outcome::new(text, &rows, Some(csv), true))
        }
        Command::Denominator { n } => {
            let terms = denominator_terms(n);
            let text = format_denominator(&terms);
            let strings: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
            Ok(Outcome::new(text, &strings, None, true))
        }
        Command::VerifyLoop { model, loops, sites, chain } => {
            let sys = loop_system(model, loops, sites.as_deref(), chain.as_deref(), order)?;
            let r = verify_loop(&sys)?;
            let name = format!("{model:?}").to_lowercase();
            let text = report_text(&format!("{name} loop decomposition, {} loops", sys.loops().len()), &r);
            let pass = r.equal;
            let csv = diffs_csv(&r);
            let out = LoopOutput { model: name, loops: sys.loops().len(), report: r };
            Ok(Outcome::new(text, &out, Some(csv), pass))
        }
        Command::VerifyIdentity { model, m, x_points } => {
            let spec = IdentitySpec::new(model.into(), m, order, x_points)?;
            let reports: Vec<IdentityReport> = spec.run()?;
            let pass = reports.iter().all(|r| r.pass);
            let text = reports.iter().map(|r| report_text(&r.identity, &r.details)).collect::<Vec<_>>().join("\n");
            let mut csv = String::from("identity,m,order,pass,first_mismatch\n");
            for r in &reports {
                let fm = r.first_mismatch.map(|i| i.to_string()).unwrap_or_default();
                let _ = writeln!(csv, "{},{},{},{},{fm}", r.identity, r.m, r.order, r.pass);
            }
            Ok(Outcome::new(text, &reports, Some(csv), pass))
        }
        Command::Tail { model, m, max_k, bracket } => {
            let bracket = match bracket {
                Some(src) => parse_bracket(&src)?,
                None => Model::from(model).bracket(m)?,
            };
            let r = geometric_tail_report(&bracket, &sech_series(order), max_k)?;
            let mut text = format!("base {} after K={}:\n", format_rational(&r.base), r.max_k);
            let mut csv = String::from("coefficient,error,abs_error_f64\n");
            for (j, e) in r.errors.iter().enumerate() {
                let f = num_traits::ToPrimitive::to_f64(e).unwrap_or(f64::NAN).abs();
                let _ = writeln!(text, "  w^{j}: {f:.3e}");
                let _ = writeln!(csv, "{j},{},{f:e}", format_rational(e));
            }
            Ok(Outcome::new(text.trim_end().to_string(), &r, Some(csv), true))
        }
        Command::Partial { model, m, n, x, max_k } => {
            let t = match model {
                IdentityModel::Bm => euler_identity_partial(m, n, &x, max_k)?,
                IdentityModel::Bessel => bessel_identity_partial(m, n, &x, max_k)?,
            };
            let mut text = format!("target {} (m={m}, n={n}, x={x})\n", format_rational(&t.target));
            for r in &t.rows {
                let err = num_traits::ToPrimitive::to_f64(&r.abs_error).unwrap_or(f64::NAN);
                let _ = writeln!(text, "  k={:>3}  |error| = {err:.3e}", r.k);
            }
            let _ = write!(text, "error nonincreasing from k={}", t.monotone_from());
            let csv = t.to_csv();
            Ok(Outcome::new(text, &t, Some(csv), true))
        }
        Command::Simulate(a) => {
            let r = match a.model {
                LoopModel::Bm => simulate_bm_hit(&a.level, a.w, a.paths, a.dt, a.seed)?,
                LoopModel::Bessel => simulate_bessel_hit(&a.level, a.w, a.paths, a.dt, a.seed)?,
                LoopModel::Bd => {
                    let chain = match &a.chain {
                        Some(json) => BirthDeathChain::from_json(json)?,
                        None => BirthDeathChain::new(vec![Rational::new(1.into(), 2.into())])?,
                    };
                    let to = a.to.unwrap_or(chain.last_site());
                    simulate_bd(&chain, a.from, to, a.taboo, a.z, a.paths, a.seed)?
                }
            };
            let text = format!(
                "estimate {:.6} +/- {:.6} (target {:.6}, {} paths): {}",
                r.estimate,
                r.std_error,
                r.target,
                r.paths,
                if r.pass { "pass" } else { "FAIL" }
            );
            let csv = format!(
                "estimate,std_error,target,paths,dt,seed,pass\n{},{},{},{},{},{},{}\n",
                r.estimate, r.std_error, r.target, r.paths, r.dt, r.seed, r.pass
            );
            let pass = r.pass;
            Ok(Outcome::new(text, &r, Some(csv), pass))
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and prints its
/// result to stdout. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let output = cli.output;
    let umbral = matches!(cli.command, Command::Umbral { .. });
    match execute(cli) {
        Ok(out) => {
            match output {
                Output::Text => println!("{}", out.text),
                Output::Json => println!("{}", out.json),
                Output::Csv => match out.csv {
                    Some(csv) => print!("{csv}"),
                    None => println!("{}", out.text),
                },
            }
            if out.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if umbral && matches!(e, Error::Parse(_)) {
                eprintln!("\n{COMBO_GRAMMAR}");
            }
            match e {
                Error::BudgetExceeded { .. } => 1,
                _ => 2,
            }
        }
    }
}
