//! Command-line workbench wiring the hypertree library into reproducible
//! experiments.
//!
//! Exit codes: 0 = success / verified pass, 1 = verified failure (or an
//! internal numerical failure), 2 = usage, input, or I/O error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use num::{BigRational, ToPrimitive};
use serde::Serialize;

use hypertree_core::census::{
    self, CensusCache, CensusOptions, CensusResult, DEFAULT_CENSUS_CAP, HARD_CENSUS_CAP,
};
use hypertree_core::certificates::{self, ScanLimits, DEFAULT_SCAN_VERTICES};
use hypertree_core::homology::h1;
use hypertree_core::io::read_complex;
use hypertree_core::rng::RNG_ALGORITHM;
use hypertree_core::sampler::{sample_batch, BatchSpec, SampleMethod, SampleRecord};
use hypertree_core::torsion_stats::{
    compare_to_cohen_lenstra, DistributionComparison, DEFAULT_MIN_SAMPLES,
};
use hypertree_core::{Error, KernelBackend, TorsionGroup};

pub const CACHE_DIR_ENV: &str = "HYPERTREE_CACHE_DIR";

#[derive(Parser)]
#[command(name = "hypertree", version, about = "Random 2-dimensional hypertrees: sampling, homology, census, density scans")]
struct Cli {
    /// Worker threads for sampling, census, and scans (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Machine-readable JSON output on stdout.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw hypertrees from the torsion-squared measure (JSONL records).
    Sample(SampleArgs),
    /// Enumerate all hypertrees at small n; histogram CSV + exact counts.
    Census(CensusArgs),
    /// Check the weighted-count identity sum |H1|^2 = n^C(n-2,2) exactly.
    Verify(VerifyArgs),
    /// Integral H1 of a complex file.
    Homology(HomologyArgs),
    /// Densest-subcomplex scan of a complex file against a threshold.
    Scan(ScanArgs),
    /// Compare sampled torsion against the Cohen-Lenstra prediction.
    TorsionDist(TorsionDistArgs),
    /// Evaluate the small-subcomplex density union bound.
    UnionBound(UnionBoundArgs),
}

#[derive(Args)]
struct SampleArgs {
    /// Vertex count.
    #[arg(short)]
    n: u32,
    /// Number of records to emit.
    #[arg(short, long)]
    count: u64,
    #[arg(long, value_parser = ["dpp", "mh"], default_value = "dpp")]
    method: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampling arithmetic: auto picks rational for n <= 10, float beyond.
    #[arg(long, value_parser = ["auto", "rational", "float"], default_value = "auto")]
    backend: String,
    /// MH proposals between emitted records.
    #[arg(long, default_value_t = 200)]
    mh_steps: u64,
    /// Record real per-sample wall times (makes output nondeterministic).
    #[arg(long)]
    timings: bool,
    /// Output JSONL path (stdout if omitted).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(short, default_value_t = DEFAULT_CENSUS_CAP)]
    n: u32,
    /// Opt in to the n = 7 census (hours of CPU).
    #[arg(long)]
    allow_n7: bool,
    /// Output CSV path for the torsion histogram (stdout if omitted).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(short)]
    n: u32,
    #[arg(long)]
    allow_n7: bool,
}

#[derive(Args)]
struct HomologyArgs {
    /// Complex file (text or JSON format).
    file: PathBuf,
}

#[derive(Args)]
struct ScanArgs {
    file: PathBuf,
    /// Density threshold, e.g. "1.5", "3/2", or "47/46"; compared exactly.
    #[arg(long, default_value = "3/2")]
    threshold: String,
    #[arg(long, default_value_t = DEFAULT_SCAN_VERTICES)]
    max_vertices: u32,
    /// Also require the tetrahedron-boundary exclusion (asphericity witness).
    #[arg(long)]
    tetrahedron_check: bool,
    /// Output JSON report path (stdout if omitted).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TorsionDistArgs {
    /// JSONL sample records, as written by `sample`.
    input: PathBuf,
    /// Prime whose Sylow subgroup distribution is compared.
    #[arg(short)]
    p: u64,
    #[arg(long, default_value_t = DEFAULT_MIN_SAMPLES)]
    min_samples: u64,
    /// Output CSV path (stdout if omitted).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct UnionBoundArgs {
    #[arg(short)]
    n: u64,
    #[arg(long, default_value_t = 6)]
    max_vertices: u32,
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    argv: Vec<String>,
    seed: Option<u64>,
    threads: usize,
    rng: &'static str,
    code_version: &'static str,
    jsonl_format: u32,
    census_cache_format: u32,
    wall_ms: f64,
    outputs: Vec<String>,
}

fn manifest(command: &str, seed: Option<u64>, threads: usize, t0: Instant, outputs: &[&Path]) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        argv: std::env::args().collect(),
        seed,
        threads,
        rng: RNG_ALGORITHM,
        code_version: env!("CARGO_PKG_VERSION"),
        jsonl_format: 1,
        census_cache_format: census::CACHE_FORMAT_VERSION,
        wall_ms: t0.elapsed().as_secs_f64() * 1e3,
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
    }
}

/// Writes the manifest next to the output file, or to stderr when the data
/// went to stdout.
fn emit_manifest(man: &RunManifest, out: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(man)?;
    match out {
        Some(path) => {
            let mpath = path.with_extension(format!(
                "{}manifest.json",
                path.extension()
                    .map(|e| format!("{}.", e.to_string_lossy()))
                    .unwrap_or_default()
            ));
            std::fs::write(mpath, text)?;
        }
        None => eprintln!("{text}"),
    }
    Ok(())
}

fn effective_threads(requested: usize) -> usize {
    if requested > 0 {
        requested
    } else {
        std::thread::available_parallelism().map_or(1, |p| p.get())
    }
}

fn census_options(allow_seven: bool, threads: usize) -> CensusOptions {
    CensusOptions {
        allow_seven,
        threads,
    }
}

fn cache_from_env() -> Option<CensusCache> {
    std::env::var_os(CACHE_DIR_ENV).map(CensusCache::new)
}

fn cached_census(n: u32, opts: &CensusOptions) -> hypertree_core::Result<CensusResult> {
    match cache_from_env() {
        Some(cache) => cache.census(n, opts),
        None => census::run_census(n, opts),
    }
}

/// Parses "3/2", "47/46", or a decimal like "1.5" into an exact ratio.
fn parse_threshold(text: &str) -> anyhow::Result<(u64, u64)> {
    if let Some((a, b)) = text.split_once('/') {
        let num: u64 = a.trim().parse().context("bad threshold numerator")?;
        let den: u64 = b.trim().parse().context("bad threshold denominator")?;
        anyhow::ensure!(den != 0, "threshold denominator is zero");
        return Ok((num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let scale = 10u64
            .checked_pow(frac.len() as u32)
            .ok_or_else(|| anyhow!("threshold has too many decimals"))?;
        let int: u64 = if int.is_empty() { 0 } else { int.parse().context("bad threshold")? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().context("bad threshold")? };
        let g = gcd(int * scale + frac, scale);
        return Ok(((int * scale + frac) / g, scale / g));
    }
    let num: u64 = text.trim().parse().context("bad threshold")?;
    Ok((num, 1))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            // usage/input/io problems exit 2; verified failures and internal
            // numerical failures exit 1
            match err.downcast_ref::<Error>() {
                Some(Error::Input(_) | Error::Parse { .. } | Error::Resource(_) | Error::Io(_)) => 2,
                Some(_) => 1,
                None => 2,
            }
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let t0 = Instant::now();
    let threads = effective_threads(cli.threads);
    match cli.command {
        Command::Sample(args) => cmd_sample(args, threads, cli.json, t0),
        Command::Census(args) => cmd_census(args, threads, cli.json, t0),
        Command::Verify(args) => cmd_verify(args, threads, cli.json, t0),
        Command::Homology(args) => cmd_homology(args, cli.json, t0),
        Command::Scan(args) => cmd_scan(args, threads, cli.json, t0),
        Command::TorsionDist(args) => cmd_torsion_dist(args, cli.json, t0),
        Command::UnionBound(args) => cmd_union_bound(args, cli.json, t0),
    }
}

fn cmd_sample(args: SampleArgs, threads: usize, json: bool, t0: Instant) -> anyhow::Result<i32> {
    let method = match args.method.as_str() {
        "dpp" => SampleMethod::Dpp,
        _ => SampleMethod::Mh,
    };
    let backend = match args.backend.as_str() {
        "rational" => Some(KernelBackend::Rational),
        "float" => Some(KernelBackend::Float),
        _ => None,
    };
    let spec = BatchSpec {
        n: args.n,
        method,
        backend,
        count: args.count,
        seed: args.seed,
        threads,
        mh_thin: args.mh_steps,
        timings: args.timings,
    };
    let records = sample_batch(&spec)?;
    let mut lines = String::new();
    for r in &records {
        lines.push_str(&r.to_json_line());
        lines.push('\n');
    }
    match &args.out {
        Some(path) => {
            let mut f = std::fs::File::options()
                .create(true)
                .append(true)
                .open(path)
                .with_context(|| format!("opening {}", path.display()))?;
            f.write_all(lines.as_bytes())?;
        }
        None => print!("{lines}"),
    }
    let man = manifest(
        "sample",
        Some(args.seed),
        threads,
        t0,
        &args.out.iter().map(|p| p.as_path()).collect::<Vec<_>>(),
    );
    if json && args.out.is_some() {
        println!(
            "{}",
            serde_json::json!({"written": records.len(), "manifest": man})
        );
    } else {
        emit_manifest(&man, args.out.as_deref())?;
    }
    Ok(0)
}

fn histogram_csv(result: &CensusResult) -> String {
    let mut out = String::from("torsion_factors,count,weighted_count\n");
    for row in result.histogram_rows() {
        let label = if row.factors.is_empty() {
            "1".to_string()
        } else {
            row.factors
                .iter()
                .map(|f| f.to_string())
                .collect::<Vec<_>>()
                .join(".")
        };
        out.push_str(&format!("{label},{},{}\n", row.count, row.weighted));
    }
    out
}

#[derive(Serialize)]
struct CensusDoc {
    n: u32,
    total: u64,
    kalai_sum: String,
    kalai_expected: String,
    pass: bool,
    histogram: Vec<census::HistogramRow>,
}

fn census_doc(result: &CensusResult) -> CensusDoc {
    CensusDoc {
        n: result.n,
        total: result.total,
        kalai_sum: result.kalai_sum.to_string(),
        kalai_expected: result.kalai_expected.to_string(),
        pass: result.pass,
        histogram: result.histogram_rows(),
    }
}

fn cmd_census(args: CensusArgs, threads: usize, json: bool, t0: Instant) -> anyhow::Result<i32> {
    if args.n == HARD_CENSUS_CAP && !args.allow_n7 {
        return Err(Error::Resource(format!(
            "census at n = 7 enumerates ~2.8e9 hypertrees and takes hours; \
             re-run with --allow-n7 to confirm"
        ))
        .into());
    }
    let result = cached_census(args.n, &census_options(args.allow_n7, threads))?;
    let csv = histogram_csv(&result);
    match &args.out {
        Some(path) => std::fs::write(path, &csv)?,
        None => {
            if !json {
                print!("{csv}");
            }
        }
    }
    let man = manifest(
        "census",
        None,
        threads,
        t0,
        &args.out.iter().map(|p| p.as_path()).collect::<Vec<_>>(),
    );
    if json {
        println!(
            "{}",
            serde_json::json!({"census": census_doc(&result), "manifest": man})
        );
    } else {
        eprintln!(
            "N({}) = {}, sum |H1|^2 = {} (expect {}): {}",
            result.n,
            result.total,
            result.kalai_sum,
            result.kalai_expected,
            if result.pass { "PASS" } else { "FAIL" }
        );
        emit_manifest(&man, args.out.as_deref())?;
    }
    Ok(if result.pass { 0 } else { 1 })
}

fn cmd_verify(args: VerifyArgs, threads: usize, json: bool, t0: Instant) -> anyhow::Result<i32> {
    let result = cached_census(args.n, &census_options(args.allow_n7, threads))?;
    let man = manifest("verify", None, threads, t0, &[]);
    if json {
        println!(
            "{}",
            serde_json::json!({"verify": census_doc(&result), "manifest": man})
        );
    } else {
        println!(
            "sum |H1|^2 over the {} hypertrees on {} vertices = {} ; {}^C({},2) = {} : {}",
            result.total,
            result.n,
            result.kalai_sum,
            result.n,
            result.n.saturating_sub(2),
            result.kalai_expected,
            if result.pass { "PASS" } else { "FAIL" }
        );
    }
    Ok(if result.pass { 0 } else { 1 })
}

fn cmd_homology(args: HomologyArgs, json: bool, t0: Instant) -> anyhow::Result<i32> {
    let c = read_complex(&args.file)?;
    let hom = h1(&c);
    if json {
        let man = manifest("homology", None, 1, t0, &[]);
        println!(
            "{}",
            serde_json::json!({
                "n": c.n(),
                "faces": c.face_count(),
                "betti1": hom.betti1,
                "order": hom.torsion.order().to_string(),
                "factors": hom.torsion.factor_strings(),
                "manifest": man,
            })
        );
    } else {
        println!("{}", hom.torsion.order());
        println!(
            "factors: [{}]  betti1: {}",
            hom.torsion.factor_strings().join(", "),
            hom.betti1
        );
    }
    Ok(0)
}

fn cmd_scan(args: ScanArgs, threads: usize, json: bool, t0: Instant) -> anyhow::Result<i32> {
    let c = read_complex(&args.file)?;
    let threshold = parse_threshold(&args.threshold)?;
    let limits = ScanLimits {
        threads,
        ..ScanLimits::default()
    };
    let report = if args.tetrahedron_check {
        let mut r = certificates::certify(&c, args.max_vertices, threshold, &limits)?;
        let free = !certificates::contains_tetrahedron_boundary(&c);
        r.tetrahedron_free = Some(free);
        r.pass = Some(r.pass.unwrap_or(false) && free);
        r
    } else {
        certificates::certify(&c, args.max_vertices, threshold, &limits)?
    };
    let pass = report.pass.unwrap_or(false);
    let man = manifest(
        "scan",
        None,
        threads,
        t0,
        &args.out.iter().map(|p| p.as_path()).collect::<Vec<_>>(),
    );
    let doc = serde_json::json!({"report": report, "manifest": man});
    match &args.out {
        Some(path) => {
            std::fs::write(path, serde_json::to_string_pretty(&doc)?)?;
            if !json {
                eprintln!(
                    "max density {} / {} = {:.4} on {:?}: {}",
                    report.f2,
                    report.f0,
                    report.ratio,
                    report.best_vertices,
                    if pass { "PASS" } else { "FAIL" }
                );
            }
        }
        None => println!("{}", serde_json::to_string_pretty(&doc)?),
    }
    Ok(if pass { 0 } else { 1 })
}

fn comparison_csv(cmp: &DistributionComparison) -> String {
    let mut out = String::from("p,partition,empirical,cohen_lenstra,z\n");
    for row in &cmp.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            cmp.p, row.partition, row.empirical, row.cohen_lenstra, row.z
        ));
    }
    out
}

fn cmd_torsion_dist(args: TorsionDistArgs, json: bool, t0: Instant) -> anyhow::Result<i32> {
    let text = std::fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let mut groups: Vec<TorsionGroup> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec = SampleRecord::from_json_line(line).map_err(|e| {
            anyhow!("{}: line {}: {e}", args.input.display(), i + 1)
        })?;
        let factors: Result<Vec<num::BigUint>, _> =
            rec.h1_factors.iter().map(|f| f.parse()).collect();
        let factors = factors.map_err(|_| anyhow!("line {}: bad factor", i + 1))?;
        groups.push(TorsionGroup::from_invariant_factors(factors));
    }
    let cmp = compare_to_cohen_lenstra(groups, args.p, args.min_samples)?;
    let csv = comparison_csv(&cmp);
    match &args.out {
        Some(path) => std::fs::write(path, &csv)?,
        None => {
            if !json {
                print!("{csv}");
            }
        }
    }
    let man = manifest(
        "torsion-dist",
        None,
        1,
        t0,
        &args.out.iter().map(|p| p.as_path()).collect::<Vec<_>>(),
    );
    if json {
        println!(
            "{}",
            serde_json::json!({"comparison": cmp, "manifest": man})
        );
    } else {
        eprintln!(
            "TV distance to Cohen-Lenstra at p={}: {:.6} ({} samples)",
            cmp.p, cmp.tv_distance, cmp.samples
        );
        emit_manifest(&man, args.out.as_deref())?;
    }
    Ok(0)
}

fn cmd_union_bound(args: UnionBoundArgs, json: bool, t0: Instant) -> anyhow::Result<i32> {
    let exact = certificates::union_bound_value(args.n, args.max_vertices)?;
    let approx = exact.to_f64().unwrap_or(f64::NAN);
    if json {
        let man = manifest("union-bound", None, 1, t0, &[]);
        println!(
            "{}",
            serde_json::json!({
                "n": args.n,
                "max_vertices": args.max_vertices,
                "exact": ratio_string(&exact),
                "value": approx,
                "manifest": man,
            })
        );
    } else {
        println!("{approx:.6e}  (exact {})", ratio_string(&exact));
    }
    Ok(0)
}
