//! `cka`: command-line front end for the graph analyzer.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 analysis cap exceeded,
//! 3 internal invariant violation.

mod report;
mod verify;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cka::constructions::{
    build_ideal_graph, build_quotient_graph, build_subgraph, BuildOptions, ConstructionResult,
};
use cka::corpus::{
    consistency_suite, oracle_suite, random_graph, GeneratorParams, ORACLE_MAX_VERTICES,
};
use cka::graph::{parse_graph, serialize_graph, Format, Graph, Limits};
use cka::subsets::{HerSatSet, IdealSpec};
use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use sha2::{Digest, Sha256};

use report::{Outcome, Report};

#[derive(Parser)]
#[command(name = "cka", version, about = "Structural analysis of graph algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FileArgs {
    file: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Full battery: stable rank, type I, isolated loops, tails, hereditary
    /// saturated sets, pi quotient, trace, decomposition.
    Analyze {
        #[command(flatten)]
        input: FileArgs,
        /// Re-check every evidence object through the library.
        #[arg(long)]
        verify: bool,
    },
    #[command(name = "stable-rank")]
    StableRank(FileArgs),
    #[command(name = "type-i")]
    TypeI(FileArgs),
    Isolated(FileArgs),
    #[command(name = "pi-quotient")]
    PiQuotient(FileArgs),
    Tails(FileArgs),
    Hersat(FileArgs),
    Breaking(FileArgs),
    Trace(FileArgs),
    #[command(subcommand)]
    Construct(Construct),
    Decompose {
        #[command(flatten)]
        input: FileArgs,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Graphviz rendering of the input graph.
    Dot {
        file: PathBuf,
    },
    /// Seeded random graph in the canonical file format.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        vertices: usize,
        /// A fraction `p/q` or a decimal in [0, 1].
        #[arg(long, default_value = "1/2", value_parser = parse_ratio)]
        density: Ratio<u64>,
        #[arg(long = "inf-prob", default_value = "0", value_parser = parse_ratio)]
        inf_prob: Ratio<u64>,
        #[arg(long = "max-mult", default_value_t = 1)]
        max_mult: u64,
        #[arg(long)]
        acyclic: bool,
    },
    /// Oracle and consistency suites over each file.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct ConstructOut {
    file: PathBuf,
    #[arg(long)]
    json: bool,
    #[arg(long, conflicts_with = "json")]
    dot: bool,
}

#[derive(Subcommand)]
enum Construct {
    /// The finite subgraph graph `E_G` for `G⁰ = --v`, `G¹ = --e`.
    Eg {
        #[command(flatten)]
        out: ConstructOut,
        #[arg(long, default_value = "")]
        v: String,
        #[arg(long, default_value = "")]
        e: String,
    },
    #[command(name = "ideal-graph")]
    IdealGraph {
        #[command(flatten)]
        out: ConstructOut,
        #[arg(long)]
        x: String,
        #[arg(long, default_value = "")]
        b: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long = "omega-cap", default_value_t = 3)]
        omega_cap: u64,
    },
    Quotient {
        #[command(flatten)]
        out: ConstructOut,
        #[arg(long)]
        x: String,
        #[arg(long, default_value = "")]
        b: String,
    },
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<cka::Error> for Failure {
    fn from(e: cka::Error) -> Self {
        let code = if e.is_cap() {
            2
        } else if e.is_invariant() {
            3
        } else {
            1
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn parse_ratio(s: &str) -> Result<Ratio<u64>, String> {
    let bad = || format!("`{s}` is not a probability (try 1/2 or 0.5)");
    let r = if let Some((p, q)) = s.split_once('/') {
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Ratio::new(p, q)
    } else if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let denom = 10u64.pow(frac.len() as u32);
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        Ratio::new(int * denom + frac, denom)
    } else {
        Ratio::from_integer(s.parse().map_err(|_| bad())?)
    };
    if r > Ratio::from_integer(1) {
        return Err(bad());
    }
    Ok(r)
}

fn limits() -> Result<Limits, Failure> {
    let mut l = Limits::default();
    if let Ok(v) = std::env::var("CKA_MAX_VERTICES") {
        l.max_vertices = v
            .trim()
            .parse()
            .map_err(|_| usage(format!("CKA_MAX_VERTICES: `{v}` is not a count")))?;
    }
    Ok(l)
}

struct Input {
    graph: Graph,
    digest: String,
}

fn load(path: &Path) -> Result<Input, Failure> {
    let bytes =
        fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| usage(format!("{}: not UTF-8 text", path.display())))?;
    let graph = parse_graph(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(Input {
        graph,
        digest: format!("sha256:{}", hex::encode(Sha256::digest(&bytes))),
    })
}

fn ids(list: &str) -> Vec<&str> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

fn emit(command: &str, input: &Input, limits: &Limits, outcome: Outcome, json: bool) -> String {
    if json {
        Report::new(command, &input.digest, &input.graph, limits, outcome).to_json()
    } else {
        outcome.human
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let limits = limits()?;
    let single = |name: &str, args: &FileArgs, f: fn(&Graph, &Limits) -> cka::Result<Outcome>| {
        let input = load(&args.file)?;
        let outcome = f(&input.graph, &limits)?;
        Ok::<_, Failure>(emit(name, &input, &limits, outcome, args.json))
    };
    match cli.command {
        Command::Analyze { input, verify } => {
            let loaded = load(&input.file)?;
            let outcome = report::analyze(&loaded.graph, &limits)?;
            let report = Report::new("analyze", &loaded.digest, &loaded.graph, &limits, outcome);
            let json = report.to_json();
            if verify {
                let failures = verify::verify_json(&loaded.graph, &json, &limits)?;
                if !failures.is_empty() {
                    return Err(Failure {
                        code: 3,
                        message: format!("self-audit failed:\n  {}", failures.join("\n  ")),
                    });
                }
                eprintln!("self-audit: all evidence re-verified");
            }
            Ok(if input.json {
                json
            } else {
                report.outcome.human
            })
        }
        Command::StableRank(a) => single("stable-rank", &a, report::stable_rank),
        Command::TypeI(a) => single("type-i", &a, report::type_i),
        Command::Isolated(a) => single("isolated", &a, |g, _| Ok(report::isolated(g))),
        Command::PiQuotient(a) => single("pi-quotient", &a, report::pi_quotient),
        Command::Tails(a) => single("tails", &a, report::tails),
        Command::Hersat(a) => single("hersat", &a, report::hersat),
        Command::Breaking(a) => single("breaking", &a, |g, _| report::breaking(g)),
        Command::Trace(a) => single("trace", &a, |g, _| Ok(report::trace(g))),
        Command::Decompose { input, depth } => {
            if depth == 0 {
                return Err(usage("--depth must be at least 1"));
            }
            let loaded = load(&input.file)?;
            let opts = BuildOptions {
                depth,
                ..BuildOptions::default()
            };
            let outcome = report::decompose(&loaded.graph, &opts, &limits)?;
            Ok(emit("decompose", &loaded, &limits, outcome, input.json))
        }
        Command::Construct(c) => construct(c, &limits),
        Command::Dot { file } => Ok(serialize_graph(&load(&file)?.graph, Format::Dot)),
        Command::Random {
            seed,
            vertices,
            density,
            inf_prob,
            max_mult,
            acyclic,
        } => {
            let p = GeneratorParams {
                seed,
                vertices,
                density,
                inf_prob,
                max_mult,
                acyclic,
            };
            Ok(serialize_graph(&random_graph(&p)?, Format::Canonical))
        }
        Command::Check { files } => check(&files, &limits),
    }
}

type Builder = Box<dyn Fn(&Graph) -> cka::Result<ConstructionResult>>;

fn construct(c: Construct, limits: &Limits) -> Result<String, Failure> {
    let (name, out, build): (&str, ConstructOut, Builder) = match c {
        Construct::Eg { out, v, e } => (
            "construct eg",
            out,
            Box::new(move |g| {
                let g0 = g.vertex_set(&ids(&v))?;
                let g1 = g.edge_selection(&ids(&e))?;
                build_subgraph(g, &g0, &g1)
            }),
        ),
        Construct::IdealGraph {
            out,
            x,
            b,
            depth,
            omega_cap,
        } => {
            let limits = *limits;
            (
                "construct ideal-graph",
                out,
                Box::new(move |g| {
                    let xs = HerSatSet::new(g, g.vertex_set(&ids(&x))?)?;
                    let bs = g.vertex_set(&ids(&b))?;
                    let opts = BuildOptions { depth, omega_cap };
                    build_ideal_graph(g, &xs, &bs, &opts, &limits)
                }),
            )
        }
        Construct::Quotient { out, x, b } => (
            "construct quotient",
            out,
            Box::new(move |g| {
                let spec = IdealSpec::from_names(g, &ids(&x), &ids(&b))?;
                build_quotient_graph(g, &spec)
            }),
        ),
    };
    let input = load(&out.file)?;
    let result = build(&input.graph)?;
    if out.dot {
        return Ok(result.dot());
    }
    Ok(emit(
        name,
        &input,
        limits,
        report::construction(&result),
        out.json,
    ))
}

/// Runs the suites per file on scoped threads; output follows input order.
fn check(files: &[PathBuf], limits: &Limits) -> Result<String, Failure> {
    let results: Vec<Result<String, Failure>> = std::thread::scope(|s| {
        let handles: Vec<_> = files
            .iter()
            .map(|f| s.spawn(move || check_one(f, limits)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check worker panicked"))
            .collect()
    });
    let mut out = String::new();
    let mut code = 0;
    for (file, r) in files.iter().zip(results) {
        match r {
            Ok(text) => out.push_str(&text),
            Err(f) => {
                out.push_str(&format!("{}: error: {}\n", file.display(), f.message));
                code = code.max(f.code);
            }
        }
    }
    if code == 0 {
        Ok(out)
    } else {
        Err(Failure { code, message: out })
    }
}

fn check_one(file: &Path, limits: &Limits) -> Result<String, Failure> {
    let input = load(file)?;
    let g = &input.graph;
    let mut failures = Vec::new();
    let oracle = if g.vertex_count() <= ORACLE_MAX_VERTICES {
        let r = oracle_suite(g, limits)?;
        failures.extend(r.diffs.iter().map(|d| format!("oracle: {d}")));
        "oracles compared"
    } else {
        "oracles skipped (too many vertices)"
    };
    let c = consistency_suite(g, 0, limits)?;
    failures.extend(c.failures().map(|(n, m)| format!("{n}: {m}")));
    if failures.is_empty() {
        Ok(format!(
            "{}: ok ({} consistency checks, {oracle})\n",
            file.display(),
            c.checks.len()
        ))
    } else {
        Err(Failure {
            code: 3,
            message: failures.join("; "),
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprint!("cka: {}", f.message);
            if !f.message.ends_with('\n') {
                eprintln!();
            }
            ExitCode::from(f.code)
        }
    }
}
