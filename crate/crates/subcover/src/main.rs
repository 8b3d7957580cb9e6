use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use subcover::json::{
    AnchorsDoc, CodeDoc, CoverDoc, ReportDoc, RestrictionDoc, SolveDoc, FORMAT_VERSION,
};
use subcover::{parallel, table};
use subcover_core::bounds::{self, BoundLedger, Rect};
use subcover_core::solver::{self, Assumption, Decision, SearchProblem, SolveOptions, SolveStatus};
use subcover_core::{code, construct, Cover, Error as CoreError};

#[derive(Parser)]
#[command(
    name = "subcover",
    version,
    about = "Multiplicity covers of F_2^n by affine subspaces"
)]
struct Cli {
    /// Worker threads for verify and code mindist (0 = all cores).
    #[arg(long, global = true, default_value_t = 1, env = "SUBCOVER_THREADS")]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a cover from one of the constructions.
    Construct(ConstructArgs),
    /// Check a cover and print its coverage report.
    Verify {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Restrict a cover to the hyperplane {x·u = 0}.
    Restrict {
        /// Normal u as a hex or decimal mask.
        #[arg(long)]
        normal: String,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Convert between hyperplane covers and linear codes.
    Code {
        #[command(subcommand)]
        action: CodeAction,
    },
    /// Evaluate the closed-form bounds for one cell.
    Bound {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        d: u8,
        /// Origin multiplicity for the double-count bound.
        #[arg(long, default_value_t = 0)]
        s: u32,
        /// Exit 1 if this rule does not apply.
        #[arg(long, value_enum)]
        rule: Option<BoundRule>,
    },
    /// Propagate bounds over a rectangle and print the table.
    Table {
        #[arg(long, default_value_t = 3)]
        nmin: u8,
        #[arg(long)]
        nmax: u8,
        #[arg(long, default_value_t = 3)]
        kmin: u32,
        #[arg(long)]
        kmax: u32,
        #[arg(long, default_value_t = 1)]
        d: u8,
        /// JSON file of known values.
        #[arg(long)]
        anchors: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// Find a minimum cover by exhaustive search.
    Solve(SolveArgs),
    /// Is there a cover of at most the given size?
    Decide {
        #[command(flatten)]
        search: SolveArgs,
        #[arg(long)]
        size: u64,
    },
}

#[derive(Subcommand)]
enum CodeAction {
    /// Code whose rows are the normals of an origin-avoiding hyperplane cover.
    FromCover {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Hyperplane cover {u_i·x = 1} of a code.
    ToCover {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Exact minimum distance.
    Mindist {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// The extended Golay code.
    Golay,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    #[value(alias = "thma")]
    ThmA,
    #[value(alias = "l31")]
    Lemma31,
    Smax,
    Diag,
    Golay,
    Gv,
    /// Reads a cover and adds one dimension.
    Lift,
    /// Reads a hyperplane cover of F_2^(n-d+1) and raises its codimension.
    ReduceD,
    /// Reads a hyperplane cover and adds parallel pairs.
    Pad,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    n: Option<u8>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = 1)]
    d: u8,
    /// RNG seed for gv.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    tries: u32,
    /// Parallel pairs for pad.
    #[arg(long, default_value_t = 1)]
    pairs: u32,
    /// Pad normal.
    #[arg(long, default_value = "0x1")]
    normal: String,
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundRule {
    DoubleCount,
    ThmA,
    ThmBc,
    Hamming,
    GSmax,
    OriginFloor,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Md,
    Csv,
    Json,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    n: u8,
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    d: u8,
    /// Fix the origin multiplicity.
    #[arg(long, conflicts_with = "s_max")]
    s: Option<u32>,
    /// Fix the origin multiplicity to k - 1.
    #[arg(long)]
    s_max: bool,
    #[arg(long, env = "SUBCOVER_BUDGET_NODES", default_value_t = solver::DEFAULT_NODE_BUDGET)]
    budget_nodes: u64,
    /// Wall-clock limit in seconds.
    #[arg(long, env = "SUBCOVER_TIME_LIMIT")]
    time_limit: Option<f64>,
    /// Seed the incumbent from constructions (the default).
    #[arg(long, overrides_with = "no_seed")]
    seed_construction: bool,
    #[arg(long)]
    no_seed: bool,
    #[arg(long)]
    no_basis_reduction: bool,
    /// Only search covers through the origin at least the provable
    /// minimum number of times.
    #[arg(long)]
    assume_origin_floor: bool,
}

impl SolveArgs {
    fn problem(&self) -> SearchProblem {
        let s = if self.s_max {
            Some(self.k.saturating_sub(1))
        } else {
            self.s
        };
        match s {
            Some(s) => SearchProblem::g(self.n, self.k, self.d, s),
            None => SearchProblem::f(self.n, self.k, self.d),
        }
    }

    fn options(&self) -> SolveOptions {
        let mut o = SolveOptions {
            node_budget: self.budget_nodes,
            seed_construction: !self.no_seed,
            basis_reduction: !self.no_basis_reduction,
            ..SolveOptions::default()
        };
        if self.assume_origin_floor {
            o.assumptions
                .push(Assumption::OriginAtLeast(bounds::origin_mult_floor(
                    self.n, self.k, self.d,
                )));
        }
        o
    }

    fn stopper(&self) -> impl FnMut() -> bool {
        let deadline = self
            .time_limit
            .map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0)));
        move || deadline.is_some_and(|t| Instant::now() >= t)
    }
}

/// Non-error outcomes and their exit codes.
enum Outcome {
    Done,
    Negative,
    Budget,
}

/// Malformed input or flags.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Usage(String);

fn read_input(path: &Option<PathBuf>) -> anyhow::Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .context("reading stdin")?;
            Ok(s)
        }
    }
}

fn read_cover(path: &Option<PathBuf>) -> anyhow::Result<Cover> {
    let doc: CoverDoc =
        serde_json::from_str(&read_input(path)?).map_err(|e| Usage(format!("cover JSON: {e}")))?;
    doc.to_cover().map_err(|e| Usage(e.to_string()).into())
}

/// Writes to stdout. A closed pipe downstream is not an error.
fn out(text: &str) -> anyhow::Result<()> {
    let mut stdout = std::io::stdout().lock();
    match stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush())
    {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit<T: Serialize>(value: &T) -> anyhow::Result<()> {
    out(&(serde_json::to_string_pretty(value)? + "\n"))
}

fn need<T>(v: Option<T>, flag: &str) -> anyhow::Result<T> {
    v.ok_or_else(|| Usage(format!("--{flag} is required for this family")).into())
}

fn construct_cmd(a: &ConstructArgs) -> anyhow::Result<Outcome> {
    let cover = match a.family {
        Family::ThmA => construct::thm_a_cover(need(a.n, "n")?, need(a.k, "k")?, a.d)?,
        Family::Lemma31 => construct::lemma31_cover(need(a.n, "n")?, need(a.k, "k")?, a.d)?,
        Family::Smax => construct::smax_cover(need(a.n, "n")?, need(a.k, "k")?, a.d)?,
        Family::Diag => {
            let k = need(a.k, "k")?;
            if a.n.is_some_and(|n| n as u32 != k) {
                bail!(Usage(
                    "the diagonal construction lives in dimension n = k".into()
                ));
            }
            construct::diagonal_cover(k)?
        }
        Family::Golay => code::golay_cover()?,
        Family::Gv => {
            construct::gv_random_cover(need(a.n, "n")?, need(a.k, "k")?, a.seed, a.tries)?
        }
        Family::Lift => construct::lift(&read_cover(&a.input)?)?,
        Family::ReduceD => {
            let inner = read_cover(&a.input)?;
            construct::reduce_d(&inner, need(a.n, "n")?, need(a.k, "k")?, a.d)?
        }
        Family::Pad => {
            let u = subcover::json::parse_mask(&a.normal).map_err(|e| Usage(e.to_string()))?;
            construct::pad_parallel(&read_cover(&a.input)?, a.pairs, u)?
        }
    };
    eprintln!(
        "built {} subspaces of codimension {} in F_2^{}",
        cover.size(),
        cover.codim(),
        cover.ambient_dim()
    );
    emit(&CoverDoc::from_cover(&cover))?;
    Ok(Outcome::Done)
}

fn verify_cmd(k: u32, input: &Option<PathBuf>, threads: usize) -> anyhow::Result<Outcome> {
    let cover = read_cover(input)?;
    let report = if threads == 1 {
        cover.verify(k)
    } else {
        parallel::verify(&cover, k, threads)?
    };
    let doc = ReportDoc::from(&report);
    eprintln!(
        "size {}, origin covered {} times, nonzero coverage {}..{}: {}",
        doc.size,
        doc.s,
        doc.min_nonzero,
        doc.max_nonzero,
        if doc.is_cover {
            format!("a ({k},{};{})-cover", doc.d, doc.s)
        } else {
            format!("not a {k}-cover")
        }
    );
    emit(&doc)?;
    Ok(if doc.is_cover {
        Outcome::Done
    } else {
        Outcome::Negative
    })
}

fn restrict_cmd(normal: &str, input: &Option<PathBuf>) -> anyhow::Result<Outcome> {
    let u = subcover::json::parse_mask(normal).map_err(|e| Usage(e.to_string()))?;
    let cover = read_cover(input)?;
    let r = cover.restrict_to_hyperplane(u)?;
    eprintln!(
        "|X| = {}, |Y| = {}, restricted size {}",
        r.discarded,
        r.split,
        r.cover.size()
    );
    emit(&RestrictionDoc::new(u, &r))?;
    Ok(Outcome::Done)
}

fn code_cmd(action: &CodeAction, threads: usize) -> anyhow::Result<Outcome> {
    match action {
        CodeAction::FromCover { input } => {
            let c = code::code_from_cover(&read_cover(input)?)?;
            emit(&CodeDoc::from_code(&c, None))?;
        }
        CodeAction::ToCover { input } => {
            let doc: CodeDoc = serde_json::from_str(&read_input(input)?)
                .map_err(|e| Usage(format!("code JSON: {e}")))?;
            let c = doc.to_code().map_err(|e| Usage(e.to_string()))?;
            emit(&CoverDoc::from_cover(&code::cover_from_code(&c)?))?;
        }
        CodeAction::Mindist { input } => {
            let doc: CodeDoc = serde_json::from_str(&read_input(input)?)
                .map_err(|e| Usage(format!("code JSON: {e}")))?;
            let c = doc.to_code().map_err(|e| Usage(e.to_string()))?;
            let dist = parallel::min_distance(&c, threads)?;
            eprintln!("[{}, {}, {}] code", c.len(), c.dim(), dist);
            emit(&CodeDoc::from_code(&c, Some(dist)))?;
        }
        CodeAction::Golay => emit(&CodeDoc::from_code(&code::golay_generator(), Some(8)))?,
    }
    Ok(Outcome::Done)
}

fn bound_cmd(n: u8, k: u32, d: u8, s: u32, rule: Option<BoundRule>) -> anyhow::Result<Outcome> {
    let double_count = bounds::lb_double_count(n, k, d, s)?;
    let thm_a = bounds::exact_thm_a(n, k, d);
    let thm_bc = bounds::bounds_thm_bc(n, k, d);
    let hamming = if k >= 2 {
        Some(bounds::lb_hamming_s0(n, k)?)
    } else {
        None
    };
    let g_smax = bounds::g_smax_formula(n, k, d)?;
    let origin_floor = bounds::origin_mult_floor(n, k, d);
    let doc = json!({
        "version": FORMAT_VERSION,
        "n": n, "k": k, "d": d, "s": s,
        "double_count": double_count,
        "thm_a": thm_a,
        "thm_bc": thm_bc.map(|(lo, hi, how)| json!({"lo": lo, "hi": hi, "lower_rule": format!("{how:?}")})),
        "hamming_s0": hamming.map(|h| json!({
            "expr": h.to_string(), "floor": h.floor(), "ceil": h.ceil(), "approx": h.approx()
        })),
        "hamming_chain": bounds::hamming_origin_chain(n, k, d),
        "g_smax": g_smax,
        "origin_floor": origin_floor,
    });
    emit(&doc)?;
    let applies = match rule {
        None | Some(BoundRule::DoubleCount) | Some(BoundRule::GSmax) => true,
        Some(BoundRule::ThmA) => thm_a.is_some(),
        Some(BoundRule::ThmBc) => thm_bc.is_some(),
        Some(BoundRule::Hamming) => hamming.is_some(),
        Some(BoundRule::OriginFloor) => origin_floor > 0,
    };
    Ok(if applies {
        Outcome::Done
    } else {
        Outcome::Negative
    })
}

#[allow(clippy::too_many_arguments)]
fn table_cmd(
    nmin: u8,
    nmax: u8,
    kmin: u32,
    kmax: u32,
    d: u8,
    anchors: &Option<PathBuf>,
    format: Format,
) -> anyhow::Result<Outcome> {
    if nmin > nmax || kmin > kmax || kmin == 0 {
        bail!(Usage("empty table window".into()));
    }
    let anchors = match anchors {
        Some(p) => {
            let doc: AnchorsDoc = serde_json::from_str(&read_input(&Some(p.clone()))?)
                .map_err(|e| Usage(format!("anchors JSON: {e}")))?;
            doc.to_anchors().map_err(|e| Usage(e.to_string()))?
        }
        None => Vec::new(),
    };
    let rect = Rect {
        n_max: nmax,
        k_max: kmax,
        codims: vec![d],
    };
    let ledger = BoundLedger::propagate(&rect, &anchors)?;
    let w = table::Window {
        n_min: nmin,
        n_max: nmax,
        k_min: kmin,
        k_max: kmax,
        d,
    };
    match format {
        Format::Md => out(&table::markdown(&ledger, &w))?,
        Format::Csv => out(&table::csv(&ledger, &w))?,
        Format::Json => emit(&table::document(&ledger, &w))?,
    }
    let open = ledger.entries().filter(|e| !e.is_exact()).count();
    eprintln!("{} cells, {open} not determined", ledger.entries().count());
    Ok(Outcome::Done)
}

fn solve_cmd(a: &SolveArgs) -> anyhow::Result<Outcome> {
    let r = solver::solve_min_with(&a.problem(), &a.options(), &mut a.stopper())?;
    let doc = SolveDoc::from(&r);
    eprintln!(
        "{}: value {:?}, root bound {}, {} nodes",
        doc.status, doc.value, doc.proof_lo, doc.nodes
    );
    emit(&doc)?;
    Ok(match r.status {
        SolveStatus::Optimal => Outcome::Done,
        SolveStatus::Infeasible => Outcome::Negative,
        SolveStatus::Feasible | SolveStatus::Unknown => Outcome::Budget,
    })
}

fn decide_cmd(a: &SolveArgs, size: u64) -> anyhow::Result<Outcome> {
    let p = a.problem();
    let d = solver::decide_with(&p, size, &a.options(), &mut a.stopper())?;
    let (answer, cert, outcome) = match d {
        Decision::Yes(c) => ("Yes", Some(CoverDoc::from_cover(&c)), Outcome::Done),
        Decision::No => ("No", None, Outcome::Negative),
        Decision::Unknown => ("Unknown", None, Outcome::Budget),
    };
    eprintln!("cover of size <= {size}: {answer}");
    emit(&json!({
        "version": FORMAT_VERSION,
        "n": p.n, "k": p.k, "d": p.d, "size": size,
        "answer": answer,
        "certificate": cert,
    }))?;
    Ok(outcome)
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Construct(a) => construct_cmd(a),
        Command::Verify { k, input } => verify_cmd(*k, input, cli.threads),
        Command::Restrict { normal, input } => restrict_cmd(normal, input),
        Command::Code { action } => code_cmd(action, cli.threads),
        Command::Bound { n, k, d, s, rule } => bound_cmd(*n, *k, *d, *s, *rule),
        Command::Table {
            nmin,
            nmax,
            kmin,
            kmax,
            d,
            anchors,
            format,
        } => table_cmd(*nmin, *nmax, *kmin, *kmax, *d, anchors, *format),
        Command::Solve(a) => solve_cmd(a),
        Command::Decide { search, size } => decide_cmd(search, *size),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Ok(Outcome::Budget) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            if matches!(e.downcast_ref::<CoreError>(), Some(CoreError::NotACover(_))) {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
