//! Command-line front end: enumeration, structure analysis, identity search,
//! claim verification, and the bounded Diophantine solvers.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fxy::cache::FingerprintCache;
use fxy::claims::{self, Verdict};
use fxy::dioph;
use fxy::error::Error;
use fxy::eval::{
    dege, find_identities, is_e_isolated, orde, IsolationVerdict, SearchOptions,
    DEFAULT_ISOLATION_BUDGET,
};
use fxy::poly::DEFAULT_EXPANSION_CAP;
use fxy::structure::{analysis_report, build_lexmin};
use fxy::term::{enumerate_terms, parse, Term};

const EXIT_INTERNAL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "fxy", version, about = "Exact identity search and structure analysis for f(x,y) = x^2 + y^3", disable_help_subcommand = true)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Fingerprint cache file; the MIL_CACHE environment variable overrides
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Worker threads for the identity search
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Leaf-count bound for enumeration and search
    #[arg(long, global = true, default_value_t = 8)]
    max_leaves: usize,

    /// Number of distinct variables
    #[arg(long, global = true, default_value_t = 1)]
    num_vars: u32,

    /// Hard ceiling on expanded monomial counts
    #[arg(long, global = true, default_value_t = DEFAULT_EXPANSION_CAP)]
    expansion_cap: usize,

    /// Exponent bound for the two-power-sum equation
    #[arg(long, global = true, default_value_t = 8)]
    max_exp: u32,

    /// Bound on k1 + k2 for the supplement equation
    #[arg(long, global = true, default_value_t = 6)]
    max_k: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stream all terms up to the leaf bound in canonical order
    Enumerate,
    /// Structure report for one term
    Analyze { term: String },
    /// Exhaustive identity search with a coverage certificate
    Search,
    /// The lexicographically minimal term of image degree 2^m 3^n
    Lexmin { m: u32, n: u32 },
    /// Decide whether a term is alone in its image
    Isolated { term: String },
    /// Run one registered claim, or all of them
    Verify { claim: String },
    /// Bounded exponential Diophantine solvers
    Dioph {
        #[command(subcommand)]
        equation: Equation,
    },
}

#[derive(Subcommand, Debug)]
enum Equation {
    /// 2^a 3^b + 2^c 3^d = 2^e 3^f + 2^g 3^h, exponents <= --max-exp
    Eq10,
    /// 2^(m+k1) 3^(n+k2) - dgap = 2^l1 3^l2 with k1 + k2 <= --max-k
    Eq9 {
        m: u32,
        n: u32,
        i: u32,
        j: u32,
        pi1: u8,
        pi2: u8,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_for(&e))
        }
    }
}

/// Argument-shaped failures are usage errors; the rest are internal.
fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. }
        | Error::VarOutOfRange { .. }
        | Error::BareVariable
        | Error::Invalid(_) => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

fn cache_path(cli: &Cli) -> Option<PathBuf> {
    std::env::var_os("MIL_CACHE")
        .map(PathBuf::from)
        .or_else(|| cli.cache.clone())
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Enumerate => enumerate(cli),
        Command::Analyze { term } => analyze(cli, term),
        Command::Search => search(cli),
        Command::Lexmin { m, n } => lexmin(cli, *m, *n),
        Command::Isolated { term } => isolated(cli, term),
        Command::Verify { claim } => verify(cli, claim),
        Command::Dioph { equation } => dioph_cmd(cli, equation),
    }
}

fn enumerate(cli: &Cli) -> Result<ExitCode, Error> {
    match cli.format {
        Format::Text => {
            for t in enumerate_terms(cli.max_leaves, cli.num_vars) {
                println!("{}", t);
            }
        }
        Format::Json => {
            let all: Vec<String> = enumerate_terms(cli.max_leaves, cli.num_vars)
                .map(|t| t.render())
                .collect();
            println!("{}", serde_json::to_string(&all).expect("strings serialize"));
        }
        Format::Csv => {
            println!("term,leaves,dege,orde");
            for t in enumerate_terms(cli.max_leaves, cli.num_vars) {
                println!("{},{},{},{}", t, t.leaf_count(), dege(&t), orde(&t));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_term(cli: &Cli, text: &str) -> Result<Term, Error> {
    parse(text, cli.num_vars.max(1))
}

/// Warm the fingerprint cache for `t` when a cache path is configured.
/// Reports never depend on the cache; this only persists work already done.
fn touch_cache(cli: &Cli, t: &Term) -> Result<(), Error> {
    if let Some(path) = cache_path(cli) {
        let mut cache = FingerprintCache::open(&path)?;
        cache.fingerprint_for(t);
        cache.save_if_dirty(&path)?;
    }
    Ok(())
}

fn analyze(cli: &Cli, text: &str) -> Result<ExitCode, Error> {
    let t = parse_term(cli, text)?;
    touch_cache(cli, &t)?;
    let report = analysis_report(&t);
    match cli.format {
        Format::Json => println!("{}", report),
        Format::Text => {
            let obj = report.as_object().expect("analysis report is an object");
            for (k, v) in obj {
                println!("{}: {}", k, v);
            }
        }
        Format::Csv => {
            return Err(Error::Invalid("analyze has no csv form".into()));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn search(cli: &Cli) -> Result<ExitCode, Error> {
    let opts = SearchOptions {
        max_leaves: cli.max_leaves,
        num_vars: cli.num_vars,
        expansion_cap: cli.expansion_cap,
        workers: cli.workers.max(1),
        ..SearchOptions::default()
    };
    let report = find_identities(&opts)?;
    match cli.format {
        Format::Text => {
            println!(
                "{} identities found; certificate covers {} terms",
                report.collisions.len(),
                report.terms_enumerated
            );
            for (a, b) in &report.collisions {
                println!("{} = {}", a, b);
            }
        }
        Format::Json => {
            println!("{}", serde_json::to_value(&report).expect("report serializes"));
        }
        Format::Csv => {
            println!("left,right");
            for (a, b) in &report.collisions {
                println!("{},{}", a, b);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn lexmin(cli: &Cli, m: u32, n: u32) -> Result<ExitCode, Error> {
    let t = build_lexmin(m, n);
    match cli.format {
        Format::Text => println!("{}", t),
        Format::Json => println!(
            "{}",
            serde_json::json!({ "m": m, "n": n, "term": t.render(), "dege": dege(&t) })
        ),
        Format::Csv => println!("m,n,term,dege\n{},{},{},{}", m, n, t, dege(&t)),
    }
    Ok(ExitCode::SUCCESS)
}

fn isolated(cli: &Cli, text: &str) -> Result<ExitCode, Error> {
    let t = parse_term(cli, text)?;
    touch_cache(cli, &t)?;
    let verdict = is_e_isolated(&t, DEFAULT_ISOLATION_BUDGET);
    let (label, witness, code) = match &verdict {
        IsolationVerdict::Isolated => ("isolated", None, ExitCode::SUCCESS),
        IsolationVerdict::WitnessPair(w) => {
            ("witness", Some(w.render()), ExitCode::SUCCESS)
        }
        IsolationVerdict::Infeasible => {
            ("infeasible", None, ExitCode::from(EXIT_INFEASIBLE))
        }
    };
    match cli.format {
        Format::Text => match &witness {
            Some(w) => println!("{}: {} = {}", label, t, w),
            None => println!("{}: {}", label, t),
        },
        Format::Json => println!(
            "{}",
            serde_json::json!({ "term": t.render(), "verdict": label, "witness": witness })
        ),
        Format::Csv => {
            println!("term,verdict,witness");
            println!("{},{},{}", t, label, witness.unwrap_or_default());
        }
    }
    Ok(code)
}

fn verify(cli: &Cli, claim: &str) -> Result<ExitCode, Error> {
    let reports = if claim == "all" {
        claims::verify_all()
    } else {
        vec![claims::verify_claim(claim)?]
    };
    match cli.format {
        Format::Text => {
            for r in &reports {
                let mut line = format!(
                    "{}: {:?} (bound: {}; checked {}, nontrivial {}",
                    r.claim_id, r.verdict, r.bound, r.checked, r.nontrivial_instances
                );
                if r.vacuous {
                    line.push_str(", vacuous");
                }
                line.push(')');
                println!("{}", line);
                for f in &r.failures {
                    println!("  failure: {}", f);
                }
            }
        }
        Format::Json => println!("{}", claims::report_json(&reports)),
        Format::Csv => {
            println!("claim_id,verdict,bound,checked,nontrivial,vacuous,failures");
            for r in &reports {
                println!(
                    "{},{:?},\"{}\",{},{},{},{}",
                    r.claim_id,
                    r.verdict,
                    r.bound,
                    r.checked,
                    r.nontrivial_instances,
                    r.vacuous,
                    r.failures.len()
                );
            }
        }
    }
    let code = if reports.iter().any(|r| r.verdict == Verdict::Infeasible) {
        ExitCode::from(EXIT_INFEASIBLE)
    } else if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        ExitCode::from(EXIT_INTERNAL)
    } else {
        ExitCode::SUCCESS
    };
    Ok(code)
}

fn dioph_cmd(cli: &Cli, equation: &Equation) -> Result<ExitCode, Error> {
    match equation {
        Equation::Eq10 => {
            let sols = dioph::solve_eq10(cli.max_exp)?;
            match cli.format {
                Format::Text => {
                    println!("{} solutions with exponents <= {}", sols.len(), cli.max_exp);
                    for s in &sols {
                        println!(
                            "2^{} 3^{} + 2^{} 3^{} = 2^{} 3^{} + 2^{} 3^{} = {}{}",
                            s.a,
                            s.b,
                            s.c,
                            s.d,
                            s.e,
                            s.f,
                            s.g,
                            s.h,
                            s.value(),
                            if s.trivial { " (trivial)" } else { " (nontrivial)" }
                        );
                    }
                }
                Format::Json => {
                    println!("{}", serde_json::to_value(&sols).expect("solutions serialize"));
                }
                Format::Csv => print!("{}", dioph::eq10_csv(&sols)),
            }
        }
        Equation::Eq9 { m, n, i, j, pi1, pi2 } => {
            let sols = dioph::solve_eq9(*m, *n, *i, *j, *pi1, *pi2, cli.max_k)?;
            match cli.format {
                Format::Text => {
                    println!("{} solutions with k1 + k2 <= {}", sols.len(), cli.max_k);
                    for s in &sols {
                        println!("k1={} k2={} l1={} l2={}", s.k1, s.k2, s.l1, s.l2);
                    }
                }
                Format::Json => {
                    println!("{}", serde_json::to_value(&sols).expect("solutions serialize"));
                }
                Format::Csv => print!("{}", dioph::eq9_csv(&sols)),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
