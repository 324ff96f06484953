use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;
use wittlab_core::dualitylab::{check_divisibility, nl_hopf, psi_polynomial, fmt_poly, DualityError, DualityInstance};
use wittlab_core::exactring::Ring;
use wittlab_core::par::Exec;
use wittlab_core::report::{ReportBundle, VerificationReport};
use wittlab_core::wittcore::cachefile::{self, CacheError};
use wittlab_core::wittcore::{install_table, structure_table, StructureKind, StructureTable, MAX_TABLE_DEPTH};

use crate::config::InstanceFile;
use crate::suites::{error_kind, run_suite, Context, Suite, INTEGRALITY_KINDS};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_INTEGRITY: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "wittlab", version, about = "Exact checks for deformed Witt vectors and Cartier duality")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites against an instance file.
    Run(RunArgs),
    /// Compute structure tables and write them to the cache directory.
    CacheBuild(CacheBuildArgs),
    /// Re-derive every cached record's ghost identity.
    CacheVerify(CacheVerifyArgs),
    /// Print the derived data of an instance.
    Show(ShowArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Series order for every suite.
    #[arg(long)]
    pub order: Option<usize>,
    /// Witt coordinates in enumeration windows.
    #[arg(long)]
    pub window: Option<usize>,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Report file; JSON goes to stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Structure-table cache directory, loaded before and written after the run.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Leave wall-clock times out of the report, making it byte-stable.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct CacheBuildArgs {
    #[arg(long)]
    pub cache: PathBuf,
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// Comma-separated subset of sum, product, neg, frobenius, t_a.
    #[arg(long, value_delimiter = ',', default_value = "sum,product,frobenius,t_a")]
    pub kinds: Vec<String>,
}

#[derive(Debug, Args)]
pub struct CacheVerifyArgs {
    #[arg(long)]
    pub cache: PathBuf,
    #[arg(long)]
    pub p: u64,
}

#[derive(Debug, Args)]
pub struct ShowArgs {
    #[arg(long)]
    pub instance: PathBuf,
}

/// Failure before any check ran, with its exit code.
#[derive(Debug)]
pub struct Abort {
    pub code: u8,
    pub message: String,
}

fn config_error(message: impl ToString) -> Abort {
    Abort { code: EXIT_CONFIG, message: message.to_string() }
}

fn integrity_error(message: impl ToString) -> Abort {
    Abort { code: EXIT_INTEGRITY, message: message.to_string() }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => run(&a),
        Command::CacheBuild(a) => cache_build(&a),
        Command::CacheVerify(a) => cache_verify(&a),
        Command::Show(a) => show(&a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(abort) => {
            eprintln!("error: {}", abort.message);
            ExitCode::from(abort.code)
        }
    }
}

fn load_instance(path: &Path, order: Option<usize>, window: Option<usize>) -> Result<(InstanceFile, DualityInstance), Abort> {
    let mut file = InstanceFile::load(path).map_err(config_error)?;
    file.override_with(order, window);
    let inst = DualityInstance::new(&file.spec()).map_err(config_error)?;
    Ok((file, inst))
}

fn load_cache(dir: &Path, p: u64) -> Result<(), Abort> {
    let path = cachefile::cache_path(dir, p);
    if !path.exists() {
        return Ok(());
    }
    let tables = cachefile::read(&path).map_err(integrity_error)?;
    cachefile::verify(&tables).map_err(integrity_error)?;
    tables.into_iter().for_each(install_table);
    Ok(())
}

fn store_cache(dir: &Path, p: u64, depth: usize) -> Result<(), Abort> {
    let tables = StructureKind::ALL
        .iter()
        .map(|k| structure_table(p, *k, depth).map(|t| t.truncated(depth)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(integrity_error)?;
    std::fs::create_dir_all(dir).map_err(|e| config_error(format!("cannot create {}: {e}", dir.display())))?;
    cachefile::write(&cachefile::cache_path(dir, p), &tables).map_err(config_error)
}

/// Exit status implied by a set of reports.
pub fn exit_code(bundle: &ReportBundle) -> u8 {
    let integrity = bundle.checks.iter().any(|c| {
        c.evidence.get("kind").and_then(|k| k.as_str()).is_some_and(|k| INTEGRALITY_KINDS.contains(&k))
    });
    if integrity {
        EXIT_INTEGRITY
    } else if bundle.all_passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

pub fn run(args: &RunArgs) -> Result<u8, Abort> {
    let (file, inst) = load_instance(&args.instance, args.order, args.window)?;
    let exec = if args.jobs == 1 { Exec::Sequential } else { Exec::Parallel };
    let ctx = Context { file, inst, seed: args.seed, exec };
    let mut suites = args.suite.expand();
    if !ctx.is_prime_field() {
        if args.suite == Suite::Theorem2 {
            return Err(config_error("the theorem2 suite needs a prime-field base ring"));
        }
        suites.retain(|s| *s != Suite::Theorem2);
    }
    if let Some(dir) = &args.cache {
        load_cache(dir, ctx.inst.p)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| config_error(format!("cannot start {} workers: {e}", args.jobs)))?;
    let per_suite: Vec<Vec<VerificationReport>> = pool.install(|| suites.par_iter().map(|s| run_suite(*s, &ctx)).collect());
    let mut checks: Vec<VerificationReport> = per_suite.into_iter().flatten().collect();
    if args.no_timing {
        checks.iter_mut().for_each(|c| c.millis = None);
    }
    let bundle = ReportBundle::new(checks);
    for c in &bundle.checks {
        let tag = if c.passed() { "PASS" } else { "FAIL" };
        eprintln!("{tag} {} [{}]", c.check, c.anchor);
    }
    eprintln!("{}: {}/{} checks passed", ctx.inst.name, bundle.summary.passed, bundle.summary.total);
    let text = serde_json::to_string_pretty(&bundle).expect("reports serialize") + "\n";
    match &args.report {
        Some(path) => std::fs::write(path, text).map_err(|e| config_error(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if let Some(dir) = &args.cache {
        store_cache(dir, ctx.inst.p, ctx.file.witt_axioms.depth.min(MAX_TABLE_DEPTH))?;
    }
    Ok(exit_code(&bundle))
}

fn parse_kind(name: &str) -> Result<StructureKind, Abort> {
    StructureKind::ALL
        .into_iter()
        .find(|k| k.name() == name.trim())
        .ok_or_else(|| config_error(format!("unknown structure kind {name:?}")))
}

pub fn cache_build(args: &CacheBuildArgs) -> Result<u8, Abort> {
    if args.depth == 0 || args.depth > MAX_TABLE_DEPTH {
        return Err(config_error(format!("depth must lie in 1..={MAX_TABLE_DEPTH}")));
    }
    let mut kinds = args.kinds.iter().map(|k| parse_kind(k)).collect::<Result<Vec<_>, _>>()?;
    kinds.sort();
    kinds.dedup();
    let tables: Vec<StructureTable> = kinds
        .iter()
        .map(|k| structure_table(args.p, *k, args.depth).map(|t| t.truncated(args.depth)))
        .collect::<Result<_, _>>()
        .map_err(config_error)?;
    std::fs::create_dir_all(&args.cache).map_err(|e| config_error(format!("cannot create {}: {e}", args.cache.display())))?;
    let path = cachefile::cache_path(&args.cache, args.p);
    cachefile::write(&path, &tables).map_err(config_error)?;
    let reloaded = cachefile::read(&path).map_err(integrity_error)?;
    let round_trip = reloaded == tables && cachefile::serialize(&reloaded) == cachefile::serialize(&tables);
    let integral = tables.iter().all(|t| t.is_integral());
    let summary = json!({
        "path": path.display().to_string(),
        "p": args.p,
        "depth": args.depth,
        "kinds": kinds.iter().map(|k| k.name()).collect::<Vec<_>>(),
        "integral": integral,
        "round_trip": round_trip,
    });
    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
    Ok(if round_trip && integral { EXIT_PASS } else { EXIT_INTEGRITY })
}

pub fn cache_verify(args: &CacheVerifyArgs) -> Result<u8, Abort> {
    let path = cachefile::cache_path(&args.cache, args.p);
    let outcome = cachefile::read(&path).and_then(|t| cachefile::verify(&t));
    let (passed, evidence) = match &outcome {
        Ok(records) => (true, json!({ "path": path.display().to_string(), "records": records })),
        Err(e) => (false, json!({ "path": path.display().to_string(), "error": e.to_string(), "bad_record": bad_record(e) })),
    };
    let report = VerificationReport::new("structure-cache", "ghost identities of cached records", "cache", passed, evidence);
    let bundle = ReportBundle::new(vec![report]);
    println!("{}", serde_json::to_string_pretty(&bundle).expect("reports serialize"));
    Ok(if passed { EXIT_PASS } else { EXIT_INTEGRITY })
}

fn bad_record(e: &CacheError) -> Option<String> {
    match e {
        CacheError::GhostMismatch { record } | CacheError::Gap { record } => Some(record.clone()),
        CacheError::Malformed { record, .. } => Some(record.clone()),
        _ => None,
    }
}

pub fn show(args: &ShowArgs) -> Result<u8, Abort> {
    let (file, inst) = load_instance(&args.instance, None, None)?;
    let psi = psi_polynomial(&inst).map_err(config_error)?;
    let twist = match check_divisibility(&inst, file.window) {
        Ok(d) => json!(d.a_lift.iter().map(|c| inst.lift.fmt_elem(c)).collect::<Vec<_>>()),
        Err(e) => twist_error(&e),
    };
    let hopf = match nl_hopf(&inst) {
        Ok((h, presentation)) => json!({
            "presentation": presentation,
            "group_likes": h.group_likes(Exec::Parallel).map(|g| g.len()).ok(),
        }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let out = json!({
        "instance": inst.summary(),
        "psi": fmt_poly(&inst.base, &psi, "t"),
        "twist_vector": twist,
        "hopf": hopf,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("summary serializes"));
    Ok(EXIT_PASS)
}

fn twist_error(e: &DualityError) -> serde_json::Value {
    json!({ "error": e.to_string(), "kind": error_kind(e) })
}
