//! `zsram` command line.
//!
//! Exit codes: 0 success, 1 bad input or divisibility, 2 truncated search, 3 engine
//! failure, 4 non-zero certificate, 5 violated check.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::abelian::{AbelianGroup, FiniteAbelianGroup};
use crate::checks::{run_suite, Suite, SuiteParams};
use crate::colouring::{planted_colouring, EdgeColouring};
use crate::engine::{embed, EngineConfig};
use crate::error::{Error, Result};
use crate::graphs::{generate, Graph};
use crate::io::{colouring_to_json, graph_to_json, read_colouring, read_graph};
use crate::oracle::{copy_sum, csv_row, ramsey_number, RamseyOutcome, SearchBudget, CSV_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_TRUNCATED: i32 = 2;
pub const EXIT_ENGINE: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;
pub const EXIT_CHECK: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "zsram", version, about = "Zero-sum copies of graphs in group-coloured complete graphs")]
pub struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "ZSRAM_THREADS")]
    pub threads: Option<usize>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact zero-sum Ramsey number by exhaustive search.
    Ramsey(RamseyArgs),
    /// Run the embedding engine on a colouring.
    Embed(EmbedArgs),
    /// Run invariant suites.
    Check(CheckArgs),
    /// Generate graphs and colourings.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
pub struct RamseyArgs {
    /// Graph file, or a name such as C4, K3, 2K2, P3, K1,3.
    pub graph: String,
    /// Group literal; may also be given with --group.
    pub group_pos: Option<String>,
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long, default_value_t = 6)]
    pub tmax: usize,
    /// Colourings examined per value of t before giving up.
    #[arg(long)]
    pub max_colourings: Option<u128>,
    /// Skip colourings that are not least in their orbit under vertex relabelling.
    #[arg(long)]
    pub prune: bool,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    pub graph: String,
    pub colouring: PathBuf,
    #[arg(long)]
    pub alpha: Option<u64>,
    #[arg(long)]
    pub beta: Option<u64>,
    /// Fixed multiplicity for every round.
    #[arg(long)]
    pub lambda: Option<usize>,
    /// Candidate cap for each gadget search.
    #[arg(long)]
    pub cap: Option<u64>,
    #[arg(long)]
    pub strict_telemetry: bool,
    /// Write the per-round transcript as JSON lines.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Suite name or "all".
    pub suite: String,
    #[arg(long)]
    pub max_order: Option<u32>,
    #[arg(long)]
    pub max_x: Option<usize>,
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long)]
    pub instances: Option<usize>,
    #[arg(long)]
    pub vertices: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Corrupt the computation under test (harness self-test).
    #[arg(long)]
    pub fault: bool,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// cycle, path, complete, matching, star, regular, coloring, planted
    pub kind: String,
    pub params: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub t: Option<usize>,
    /// Target graph for planted colourings.
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses and runs; returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let line: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let _ = writeln!(err, "# {}", line.join(" "));
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let json = cli.json;
    let mut buf: Vec<u8> = Vec::new();
    let result = pool.install(|| match cli.command {
        Command::Ramsey(a) => cmd_ramsey(&a, json, &mut buf),
        Command::Embed(a) => cmd_embed(&a, json, &mut buf),
        Command::Check(a) => cmd_check(&a, json, &mut buf),
        Command::Gen(a) => cmd_gen(&a, &mut buf),
    });
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

/// `C4`, `P3`, `K4`, `2K2`, `K1,3`, or a graph file.
pub fn load_graph(spec: &str) -> Result<Graph> {
    let path = Path::new(spec);
    if path.exists() {
        return read_graph(path);
    }
    let num = |s: &str| -> Result<usize> { s.parse().map_err(|_| Error::Parse(format!("unknown graph {spec:?}"))) };
    if let Some(rest) = spec.strip_prefix("K1,") {
        return generate::star(num(rest)?);
    }
    if let Some(k) = spec.strip_suffix("K2").filter(|k| !k.is_empty()) {
        return generate::matching(num(k)?);
    }
    match spec.split_at(1.min(spec.len())) {
        ("C", k) => generate::cycle(num(k)?),
        ("P", k) => generate::path(num(k)?),
        ("K", k) => generate::complete(num(k)?),
        _ => Err(Error::Parse(format!("no graph file or named graph {spec:?}"))),
    }
}

fn cmd_ramsey(a: &RamseyArgs, json: bool, out: &mut dyn Write) -> Result<i32> {
    let literal = a
        .group
        .as_deref()
        .or(a.group_pos.as_deref())
        .ok_or_else(|| Error::Parse("missing --group".into()))?;
    let group: AbelianGroup = literal.parse()?;
    let graph = load_graph(&a.graph)?;
    let budget = SearchBudget {
        max_colourings: a.max_colourings.or(SearchBudget::default().max_colourings),
        symmetry_pruning: a.prune,
        ..SearchBudget::default()
    };
    let report = ramsey_number(&graph, &group, a.tmax, &budget)?;
    let code = match report.outcome {
        RamseyOutcome::Exact { .. } => EXIT_OK,
        _ => EXIT_TRUNCATED,
    };
    let name = Path::new(&a.graph)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| a.graph.clone());
    if json {
        let v = json!({
            "graph": name,
            "group": group.to_string(),
            "t_max": a.tmax,
            "outcome": report.outcome,
            "colorings_examined": report.colourings_examined.to_string(),
            "runtime_s": report.runtime.as_secs_f64(),
        });
        writeln!(out, "{v}")?;
    } else {
        match report.outcome {
            RamseyOutcome::Exact { value } => writeln!(out, "{value}")?,
            RamseyOutcome::Above { t_max } => writeln!(out, "unknown: > {t_max}")?,
            RamseyOutcome::Truncated { lower, .. } => writeln!(out, "unknown: >= {lower}")?,
        }
        writeln!(out, "{CSV_HEADER}")?;
        writeln!(out, "{}", csv_row(&name, &group, a.tmax, &report))?;
    }
    Ok(code)
}

fn cmd_embed(a: &EmbedArgs, _json: bool, out: &mut dyn Write) -> Result<i32> {
    let graph = load_graph(&a.graph)?;
    let c0 = read_colouring(&a.colouring)?;
    let mut cfg = EngineConfig::for_degree(graph.max_degree());
    if a.alpha.is_some() || a.beta.is_some() {
        let alpha = a.alpha.unwrap_or(cfg.alpha);
        cfg = EngineConfig {
            alpha,
            beta: a.beta.unwrap_or(2 * alpha),
            scaled: true,
            ..cfg
        };
    }
    if let Some(l) = a.lambda {
        cfg = cfg.with_lambda(l);
    }
    if let Some(cap) = a.cap {
        cfg = cfg.with_cap(cap);
    }
    cfg = cfg.strict(a.strict_telemetry);
    let result = embed(&graph, &c0, &cfg)?;
    if let Some(path) = &a.transcript {
        std::fs::write(path, result.transcript_jsonl() + "\n")?;
    }
    let mut code = if result.is_success() { EXIT_OK } else { EXIT_ENGINE };
    let mut verified = None;
    if let Some(f) = &result.injection {
        let sum = copy_sum(&graph, &c0, f)?;
        verified = Some(c0.group().label(sum));
        if sum != c0.group().zero() {
            code = EXIT_CERTIFICATE;
        }
    }
    let mut v = serde_json::to_value(&result)?;
    v["verified_certificate"] = json!(verified);
    v["alpha"] = json!(cfg.alpha);
    v["beta"] = json!(cfg.beta);
    let text = serde_json::to_string(&v)?;
    if let Some(path) = &a.out {
        std::fs::write(path, &text)?;
    }
    writeln!(out, "{text}")?;
    Ok(code)
}

fn cmd_check(a: &CheckArgs, json: bool, out: &mut dyn Write) -> Result<i32> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        a.suite.split(',').map(str::parse).collect::<Result<_>>()?
    };
    let params = SuiteParams {
        max_order: a.max_order,
        max_x: a.max_x,
        random_cases: a.random,
        instances: a.instances,
        vertices: a.vertices,
        seed: a.seed,
        fault: a.fault,
    };
    let mut code = EXIT_OK;
    for suite in suites {
        let r = run_suite(suite, &params)?;
        if json {
            let v = json!({
                "suite": suite.name(),
                "cases": r.cases,
                "violations": r.violation_count,
                "examples": r.violations,
                "seconds": r.elapsed.as_secs_f64(),
            });
            writeln!(out, "{v}")?;
        } else {
            let verdict = if r.passed() { "ok" } else { "FAILED" };
            writeln!(
                out,
                "{:<12} {verdict:<6} {} cases, {} violations, {:.3}s",
                suite.name(),
                r.cases,
                r.violation_count,
                r.elapsed.as_secs_f64()
            )?;
            for v in &r.violations {
                writeln!(out, "  counterexample: {v}")?;
            }
        }
        if !r.passed() {
            code = EXIT_CHECK;
        }
    }
    Ok(code)
}

fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let p = |i: usize| -> Result<usize> {
        a.params
            .get(i)
            .copied()
            .ok_or_else(|| Error::Validation(format!("{} needs {} numeric parameters", a.kind, i + 1)))
    };
    let group = || -> Result<AbelianGroup> {
        a.group
            .as_deref()
            .ok_or_else(|| Error::Validation("--group is required".into()))?
            .parse()
    };
    let t = || a.t.ok_or_else(|| Error::Validation("--t is required".into()));
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let text = match a.kind.as_str() {
        "cycle" => graph_to_json(&generate::cycle(p(0)?)?),
        "path" => graph_to_json(&generate::path(p(0)?)?),
        "complete" => graph_to_json(&generate::complete(p(0)?)?),
        "matching" => graph_to_json(&generate::matching(p(0)?)?),
        "star" => graph_to_json(&generate::star(p(0)?)?),
        "regular" => graph_to_json(&generate::random_regular(p(0)?, p(1)?, a.seed)?),
        "coloring" | "colouring" => colouring_to_json(&EdgeColouring::random(&group()?, t()?, &mut rng)),
        "planted" => {
            let spec = a
                .graph
                .as_deref()
                .ok_or_else(|| Error::Validation("--graph is required".into()))?;
            let graph = load_graph(spec)?;
            colouring_to_json(&planted_colouring(&group()?, t()?, &graph, &mut rng)?.0)
        }
        other => return Err(Error::Validation(format!("unknown kind {other:?}"))),
    };
    match &a.out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => writeln!(out, "{text}")?,
    }
    Ok(EXIT_OK)
}
