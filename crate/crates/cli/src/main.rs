mod cache;
mod report;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::Rng;
use serde_json::{json, Value};

use linset::acceptance;
use linset::blocking::{BlockingContext, Condition, Sample, ScanOptions, DEFAULT_SCAN_BOUND};
use linset::gf::{BinOp, FieldTower, Level};
use linset::pg::{
    format_point, format_subspace, gaussian_coeff, parse_point, parse_subspace, task_rng,
    ProjSpace, Subspace,
};
use linset::reduction::{
    Ambient, Certification, DesarguesianSpread, PointSet, SearchMode, SpreadExport,
};
use linset::verify::{self, AuditCertificate, Boundary, PlaneScan, Source};

use cache::{Cache, CacheKey, Lookup, CACHE_DIR_ENV};
use report::{Format, Report, Status};

const EXIT_USAGE: u8 = 64;
const GAP_QS: [u64; 9] = [7, 8, 9, 11, 13, 16, 25, 27, 49];

#[derive(Parser)]
#[command(name = "linset", version, about = "Linear sets and blocking sets in PG(n, q^t)")]
struct Cli {
    /// Seed for every sampled choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cache directory; overrides the LINSET_CACHE_DIR variable.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Largest enumeration a scan may attempt.
    #[arg(long, global = true, default_value_t = DEFAULT_SCAN_BOUND)]
    bound: u64,
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Geo {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    h: u32,
    #[arg(long, default_value_t = 3)]
    t: u32,
    #[arg(long)]
    n: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Inv,
    Decompose,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Prime,
    Mid,
    Top,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Spanned,
    Canonical,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Lower,
    Upper,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a field tower, optionally evaluating one operation.
    Field {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        h: u32,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long, value_enum)]
        op: Option<Op>,
        #[arg(long, value_enum, default_value_t = LevelArg::Top)]
        level: LevelArg,
        #[arg(long)]
        a: Option<u64>,
        /// Second operand, or the exponent for pow.
        #[arg(long)]
        b: Option<u64>,
    },
    /// List the points of PG(n, q) in canonical form.
    Points {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Gaussian binomial [n choose k]_q.
    Gaussian {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        q: u64,
        /// Also enumerate the (k-1)-spaces of PG(n-1, q) and compare.
        #[arg(long)]
        enumerate: bool,
    },
    /// Build a Desarguesian spread and check that it partitions the points.
    Spread {
        #[command(flatten)]
        geo: Geo,
        /// Sampled element pairs whose span is checked for being partitioned.
        #[arg(long, default_value_t = 0)]
        spans: u64,
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// The linear set B(U) of a subspace U of the big space.
    Linearset {
        #[command(flatten)]
        geo: Geo,
        /// File holding U in the subspace text format.
        #[arg(long, conflicts_with = "random_dim")]
        subspace: Option<PathBuf>,
        /// Use a seeded random subspace of this dimension instead.
        #[arg(long)]
        random_dim: Option<u32>,
        #[arg(long)]
        out_set: Option<PathBuf>,
    },
    /// Decide whether a point set is a linear set.
    Certify {
        #[command(flatten)]
        geo: Geo,
        #[arg(long)]
        set: PathBuf,
        /// Node budget; exhaustive when absent.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Blocking, minimality and smallness of a point set.
    BlockingCheck {
        #[command(flatten)]
        geo: Geo,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        set: PathBuf,
    },
    /// Intersection numbers of a set with every d-space.
    Spectrum {
        #[command(flatten)]
        geo: Geo,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        d: u32,
        /// Require every size to be 0 or 1 modulo this.
        #[arg(long, conflicts_with = "one_mod")]
        zero_or_one_mod: Option<u32>,
        /// Require every size to be 1 modulo this.
        #[arg(long)]
        one_mod: Option<u32>,
        /// Sample this many d-spaces when the full scan is over the bound.
        #[arg(long)]
        sample: Option<u64>,
    },
    /// Intersection moments of a set inside a subspace.
    Moments {
        #[command(flatten)]
        geo: Geo,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        set: PathBuf,
        /// The subspace, in the subspace text format; the whole space when absent.
        #[arg(long)]
        pi: Option<PathBuf>,
    },
    /// Sign of the boundary gap expression.
    Gap {
        #[arg(long, required_unless_present = "batch")]
        n: Option<u32>,
        #[arg(long, required_unless_present = "batch")]
        k: Option<u32>,
        #[arg(long, required_unless_present = "batch")]
        s: Option<u32>,
        #[arg(long, required_unless_present = "batch")]
        q: Option<u64>,
        #[arg(long, value_enum, default_value_t = BoundaryArg::Both)]
        boundary: BoundaryArg,
        /// Evaluate the standard grid instead.
        #[arg(long)]
        batch: bool,
    },
    /// Sublines of PG(1, q^3) against every plane-induced linear set.
    ScanResult4 {
        #[arg(long)]
        q: u64,
        /// Sample this many planes instead of scanning all of them.
        #[arg(long)]
        planes: Option<u64>,
    },
    /// Baer sublines of PG(1, q^3) against sublines and linear sets.
    ScanResult5 {
        #[arg(long)]
        q: u64,
    },
    /// Construct a linear k-blocking set and check its invariants.
    Construct {
        #[command(flatten)]
        geo: Geo,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = SourceArg::Canonical)]
        source: SourceArg,
        /// The k-space for the spanned source, in the subspace text format.
        #[arg(long)]
        pi: Option<PathBuf>,
        #[arg(long)]
        out_set: Option<PathBuf>,
    },
    /// Check the hypotheses on a set and look for a linear witness.
    Audit {
        #[command(flatten)]
        geo: Geo,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run the acceptance suite.
    VerifyAll {
        /// Only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<Status> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("starting the worker pool")?;
    }
    let ctx = RunCtx {
        seed: cli.seed,
        bound: cli.bound,
        cache: cli
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
            .map(Cache::new),
    };
    let start = Instant::now();
    let mut report = dispatch(&ctx, cli.command)?;
    if cli.timings {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    let text = report.render(cli.format)?;
    match &cli.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(report.status)
}

struct RunCtx {
    seed: u64,
    bound: u64,
    cache: Option<Cache>,
}

fn tower(p: u32, h: u32, t: u32) -> Result<Arc<FieldTower>> {
    Ok(Arc::new(FieldTower::new(p, h, t)?))
}

fn prime_power(q: u64) -> Result<(u32, u32)> {
    verify::prime_power(q).ok_or_else(|| anyhow!("--q {q} is not a prime power"))
}

fn geo_params(g: &Geo) -> Value {
    json!({"p": g.p, "h": g.h, "t": g.t, "n": g.n})
}

fn with(mut v: Value, extra: Value) -> Value {
    if let (Some(a), Value::Object(b)) = (v.as_object_mut(), extra) {
        a.extend(b);
    }
    v
}

/// The spread for `g`, through the cache when one is configured.
fn spread(ctx: &RunCtx, g: &Geo) -> Result<DesarguesianSpread> {
    let tw = tower(g.p, g.h, g.t)?;
    let Some(cache) = &ctx.cache else {
        return Ok(DesarguesianSpread::with_bound(tw, g.n, ctx.bound)?);
    };
    let key = CacheKey {
        kind: "spread",
        p: g.p,
        h: g.h,
        t: g.t,
        n: g.n,
        d: 0,
    };
    match cache.load(&key)? {
        Lookup::Hit(bytes) => {
            let loaded = std::str::from_utf8(&bytes)
                .map_err(|e| anyhow!("{e}"))
                .and_then(|s| Ok(SpreadExport::parse(s)?))
                .and_then(|e| Ok(DesarguesianSpread::from_export(&e)?));
            match loaded {
                Ok(s) => {
                    eprintln!("cache: hit {key}");
                    return Ok(s);
                }
                Err(e) => eprintln!("warning: cache entry {key} unusable ({e}); rebuilding"),
            }
        }
        Lookup::Miss => eprintln!("cache: miss {key}"),
        Lookup::Rejected(why) => eprintln!("warning: cache entry {key} rejected ({why}); rebuilding"),
    }
    let s = DesarguesianSpread::with_bound(tw, g.n, ctx.bound)?;
    cache.store(&key, s.export().to_text().as_bytes())?;
    Ok(s)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// A point set, either in the indexed format (header line `ambient n=.. order=..`)
/// or as one point per line in the coordinate format.
fn read_set(path: &Path, space: &ProjSpace) -> Result<PointSet> {
    let text = read(path)?;
    let ambient = Ambient::of(space);
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let set = if first.trim_start().starts_with("ambient") {
        let set = PointSet::parse_text(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
        if set.ambient() != ambient {
            bail!(
                "{} holds points of PG({}, {}), expected PG({}, {})",
                path.display(),
                set.ambient().n,
                set.ambient().order,
                ambient.n,
                ambient.order
            );
        }
        set
    } else {
        let mut pts = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let v = parse_point(line)?;
            pts.push(
                space
                    .index_of(&v)
                    .with_context(|| format!("point {line:?} in {}", path.display()))?,
            );
        }
        PointSet::new(ambient, pts)?
    };
    Ok(set)
}

fn read_subspace(path: &Path, space: &ProjSpace) -> Result<Subspace> {
    let text = read(path)?;
    let line = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| anyhow!("{} is empty", path.display()))?;
    parse_subspace(space, line).with_context(|| format!("parsing {}", path.display()))
}

fn write_set(path: &Path, set: &PointSet) -> Result<()> {
    fs::write(path, set.to_text()).with_context(|| format!("writing {}", path.display()))
}

fn rows_text(s: &Subspace) -> String {
    format_subspace(s)
}

fn mode(budget: Option<u64>) -> SearchMode {
    budget.map_or(SearchMode::Exhaustive, SearchMode::Budget)
}

fn hist_json(h: &BTreeMap<u64, u64>) -> Value {
    Value::Object(h.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

fn dispatch(ctx: &RunCtx, command: Command) -> Result<Report> {
    Ok(match command {
        Command::Field {
            p,
            h,
            t,
            op,
            level,
            a,
            b,
        } => field(p, h, t, op, level, a, b)?,
        Command::Points { n, q, limit } => {
            let (p, h) = prime_power(q)?;
            let space = ProjSpace::new(tower(p, h, 1)?.mid().clone(), n);
            let pts = space.enumerate_points(ctx.bound)?;
            let shown: Vec<String> = pts
                .iter()
                .take(limit.unwrap_or(usize::MAX))
                .map(|pt| format_point(&pt.coords))
                .collect();
            Report::new("points", json!({"n": n, "q": q}))
                .exhaustive(true)
                .result(json!({"count": pts.len(), "points": shown}))
        }
        Command::Gaussian { n, k, q, enumerate } => {
            let value = gaussian_coeff(n, k, q);
            let mut result = json!({"value": big_json(&value)});
            let mut status = Status::Pass;
            if enumerate {
                if k == 0 || k > n {
                    bail!("--enumerate needs 1 <= k <= n");
                }
                let (p, h) = prime_power(q)?;
                let space = ProjSpace::new(tower(p, h, 1)?.mid().clone(), n - 1);
                let e = space.subspaces(k - 1)?;
                e.check_bound(ctx.bound)?;
                let counted = e.iter().count() as u64;
                result["enumerated"] = json!(counted);
                if value != counted.into() {
                    status = Status::Fail;
                }
            }
            Report::new("gaussian", json!({"n": n, "k": k, "q": q}))
                .exhaustive(true)
                .status(status)
                .result(result)
        }
        Command::Spread { geo, spans, export } => {
            let s = spread(ctx, &geo)?;
            let partition = s.check_partition();
            let mut bad_spans = Vec::new();
            let mut rng = task_rng(ctx.seed, 0);
            let m = s.num_elements() as u32;
            for _ in 0..spans {
                let a = rng.gen_range(0..m);
                let b = rng.gen_range(0..m);
                if !s.span_is_partitioned(&[a, b]) {
                    bad_spans.push(json!([a, b]));
                }
            }
            if let Some(path) = export {
                fs::write(&path, s.export().to_text())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let ok = partition && bad_spans.is_empty();
            Report::new("spread", with(geo_params(&geo), json!({"spans": spans})))
                .exhaustive(spans == 0)
                .seed((spans > 0).then_some(ctx.seed))
                .status(Status::from_bool(ok))
                .result(json!({
                    "elements": s.num_elements(),
                    "element_size": s.element_points(0).len(),
                    "partition": partition,
                    "spans_checked": spans,
                    "tower": s.tower_descriptor(),
                }))
                .witnesses(bad_spans)
        }
        Command::Linearset {
            geo,
            subspace,
            random_dim,
            out_set,
        } => {
            let s = spread(ctx, &geo)?;
            let u = match (subspace, random_dim) {
                (Some(path), _) => read_subspace(&path, s.big())?,
                (None, Some(d)) => s.big().random_subspace(d, &mut task_rng(ctx.seed, 0)),
                (None, None) => bail!("give --subspace or --random-dim"),
            };
            let b = s.linear_set(&u)?;
            if let Some(path) = &out_set {
                write_set(path, &b)?;
            }
            let pattern: BTreeMap<u64, u64> = s
                .meet_pattern(&u)?
                .into_iter()
                .map(|(k, v)| (k as u64, v))
                .collect();
            let mut result = json!({
                "u": rows_text(&u),
                "rank": u.rank(),
                "size": b.len(),
                "scattered": s.is_scattered(&u)?,
                "meet_pattern": hist_json(&pattern),
                "points": b.members(),
            });
            if geo.n == 1 {
                result["kind"] = json!(s.classify_line_linear_set(&u)?);
            }
            Report::new("linearset", geo_params(&geo))
                .exhaustive(true)
                .seed(random_dim.map(|_| ctx.seed))
                .result(result)
                .histogram("meet_pattern", pattern)
        }
        Command::Certify { geo, set, budget } => {
            let s = spread(ctx, &geo)?;
            let b = read_set(&set, s.small())?;
            let (status, result) = match s.certify_linear(&b, mode(budget))? {
                Certification::Linear(u) => (
                    Status::Pass,
                    json!({"linear": true, "witness": rows_text(&u), "rank": u.rank()}),
                ),
                Certification::NonLinear => (Status::Fail, json!({"linear": false})),
                Certification::Inconclusive { nodes } => {
                    (Status::Inconclusive, json!({"linear": null, "nodes": nodes}))
                }
            };
            Report::new("certify", with(geo_params(&geo), json!({"budget": budget, "size": b.len()})))
                .exhaustive(budget.is_none())
                .status(status)
                .result(result)
        }
        Command::BlockingCheck { geo, k, set } => {
            let bc = BlockingContext::new(tower(geo.p, geo.h, geo.t)?, geo.n, k)?.with_bound(ctx.bound);
            let b = read_set(&set, bc.space())?;
            let missed = bc.blocking_witness(&b)?;
            let blocking = missed.is_none();
            let mut result = json!({
                "size": b.len(),
                "blocking": blocking,
                "small": bc.is_small(&b),
            });
            if let Some(w) = &missed {
                result["missed_subspace"] = json!(rows_text(w));
            } else {
                let by_tangents = bc.is_minimal_by_tangents(&b)?;
                let by_removal = bc.is_minimal_by_removal(&b)?;
                result["minimal_by_tangents"] = json!(by_tangents);
                result["minimal_by_removal"] = json!(by_removal);
                result["minimality_criterion"] = json!(bc.minimality_criterion(&b)?);
                if by_tangents != by_removal {
                    bail!("minimality checks disagree");
                }
            }
            Report::new("blocking-check", with(geo_params(&geo), json!({"k": k})))
                .exhaustive(true)
                .status(Status::from_bool(blocking))
                .result(result)
        }
        Command::Spectrum {
            geo,
            k,
            set,
            d,
            zero_or_one_mod,
            one_mod,
            sample,
        } => {
            let bc = BlockingContext::new(tower(geo.p, geo.h, geo.t)?, geo.n, k)?.with_bound(ctx.bound);
            let b = read_set(&set, bc.space())?;
            let cond = zero_or_one_mod
                .map(Condition::ZeroOrOne)
                .or(one_mod.map(Condition::One));
            let opts = ScanOptions {
                bound: ctx.bound,
                sample: sample.map(|count| Sample {
                    count,
                    seed: ctx.seed,
                }),
                ..ScanOptions::default()
            };
            let r = bc.spectrum(&b, d, cond, &opts)?;
            let status = Status::from_bool(r.mod_ok());
            let hist = r.histogram.clone();
            Report::new("spectrum", with(geo_params(&geo), json!({"k": k, "d": d, "condition": cond})))
                .exhaustive(r.exhaustive)
                .seed(r.seed)
                .status(status)
                .witnesses(r.offenders.iter().map(|o| json!(o)).collect())
                .result(json!({
                    "set_size": r.set_size,
                    "total": r.total,
                    "histogram": hist_json(&r.histogram),
                    "offender_count": r.offender_count,
                }))
                .histogram("intersections", hist)
        }
        Command::Moments { geo, k, set, pi } => {
            let bc = BlockingContext::new(tower(geo.p, geo.h, geo.t)?, geo.n, k)?.with_bound(ctx.bound);
            let b = read_set(&set, bc.space())?;
            let pi = match pi {
                Some(path) => read_subspace(&path, bc.space())?,
                None => bc.space().whole(),
            };
            let m = verify::moment_counts(&bc, &b, &pi)?;
            Report::new("moments", with(geo_params(&geo), json!({"k": k, "pi": rows_text(&pi)})))
                .exhaustive(true)
                .status(Status::from_bool(m.passes()))
                .histogram("x", m.x.clone())
                .result(json!(m))
        }
        Command::Gap {
            n,
            k,
            s,
            q,
            boundary,
            batch,
        } => {
            let evals = if batch {
                verify::gap_batch(&GAP_QS, 3, 4)?
            } else {
                let (n, k, s, q) = (n.unwrap(), k.unwrap(), s.unwrap(), q.unwrap());
                let bs = match boundary {
                    BoundaryArg::Lower => vec![Boundary::Lower],
                    BoundaryArg::Upper => vec![Boundary::Upper],
                    BoundaryArg::Both => vec![Boundary::Lower, Boundary::Upper],
                };
                bs.into_iter()
                    .map(|b| verify::gap_evaluate(n, k, s, q, b))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let ok = evals.iter().all(|e| e.negative);
            let params = if batch {
                json!({"batch": true, "qs": GAP_QS, "max_s": 3, "max_m": 4})
            } else {
                json!({"n": n, "k": k, "s": s, "q": q})
            };
            Report::new("gap", params)
                .exhaustive(true)
                .status(Status::from_bool(ok))
                .witnesses(evals.iter().filter(|e| !e.negative).map(|e| json!(e)).collect())
                .result(json!({"evaluations": evals.len(), "all_negative": ok, "values": evals}))
        }
        Command::ScanResult4 { q, planes } => {
            let scan = match planes {
                Some(planes) => PlaneScan::Sampled {
                    planes,
                    seed: ctx.seed,
                },
                None => PlaneScan::Exhaustive,
            };
            let r = verify::scan_result4(q, scan)?;
            Report::new("scan-result4", json!({"q": q, "planes": planes}))
                .exhaustive(r.exhaustive)
                .seed(r.seed)
                .status(Status::from_bool(r.passes()))
                .histogram("intersections", r.histogram.clone())
                .result(json!(r))
        }
        Command::ScanResult5 { q } => {
            let r = verify::scan_result5(q)?;
            Report::new("scan-result5", json!({"q": q}))
                .exhaustive(true)
                .status(Status::from_bool(r.passes()))
                .histogram("subline_baer", r.subline_baer_histogram.clone())
                .histogram("baer_linear", r.baer_linear_histogram.clone())
                .result(json!(r))
        }
        Command::Construct {
            geo,
            k,
            source,
            pi,
            out_set,
        } => {
            let tw = tower(geo.p, geo.h, geo.t)?;
            let bc = BlockingContext::new(tw, geo.n, k)?.with_bound(ctx.bound);
            let s = spread(ctx, &geo)?;
            let src = match source {
                SourceArg::Spanned => Source::SpannedSpreadElements(
                    pi.map(|p| read_subspace(&p, bc.space())).transpose()?,
                ),
                SourceArg::Canonical => Source::CanonicalSubgeometry,
                SourceArg::Random => Source::SeededRandom(ctx.seed),
            };
            let (b, u) = verify::construct_linear_blocking(&bc, &s, &src)?;
            if let Some(path) = &out_set {
                write_set(path, &b)?;
            }
            let blocking = bc.is_k_blocking(&b)?;
            let profile = bc.mod_profile(
                &b,
                geo.n - k,
                geo.p,
                &ScanOptions {
                    bound: ctx.bound,
                    ..ScanOptions::default()
                },
            )?;
            let criterion = blocking && bc.minimality_criterion(&b)?;
            let minimal = blocking && bc.is_minimal(&b)?;
            let ok = blocking && profile.mod_ok() && (!criterion || minimal);
            Report::new(
                "construct",
                with(
                    geo_params(&geo),
                    json!({"k": k, "source": format!("{src:?}")}),
                ),
            )
            .exhaustive(profile.exhaustive)
            .seed(matches!(source, SourceArg::Random).then_some(ctx.seed))
            .status(Status::from_bool(ok))
            .witnesses(profile.offenders.iter().map(|o| json!(o)).collect())
            .result(json!({
                "u": rows_text(&u),
                "size": b.len(),
                "blocking": blocking,
                "mod_p_profile": hist_json(&profile.histogram),
                "mod_p_ok": profile.mod_ok(),
                "minimality_criterion": criterion,
                "minimal": minimal,
                "points": b.members(),
            }))
        }
        Command::Audit {
            geo,
            k,
            set,
            budget,
        } => {
            let tw = tower(geo.p, geo.h, geo.t)?;
            let bc = BlockingContext::new(tw, geo.n, k)?.with_bound(ctx.bound);
            let s = spread(ctx, &geo)?;
            let b = read_set(&set, bc.space())?;
            let r = verify::theorem1_audit(&bc, &s, &b, mode(budget))?;
            let status = match r.certificate {
                AuditCertificate::Linear(_) | AuditCertificate::NotAttempted => Status::Pass,
                AuditCertificate::NonLinear => Status::Fail,
                AuditCertificate::Inconclusive { .. } => Status::Inconclusive,
            };
            Report::new("audit", with(geo_params(&geo), json!({"k": k, "budget": budget})))
                .exhaustive(budget.is_none())
                .status(status)
                .result(with(
                    json!(r),
                    json!({"hypotheses_hold": r.hypotheses_hold()}),
                ))
        }
        Command::VerifyAll { only } => {
            let ids: Vec<u32> = if only.is_empty() {
                (1..=10).collect()
            } else {
                only
            };
            if let Some(bad) = ids.iter().find(|&&i| !(1..=10).contains(&i)) {
                bail!("--only {bad}: criteria are numbered 1 to 10");
            }
            let reports: Vec<_> = ids.iter().map(|&i| acceptance::run(i)).collect();
            let ok = reports.iter().all(|r| r.passed);
            let failed: Vec<Value> = reports
                .iter()
                .filter(|r| !r.passed)
                .map(|r| json!(r.id))
                .collect();
            Report::new("verify-all", json!({"criteria": ids, "seed": acceptance::SEED}))
                .exhaustive(reports.iter().all(|r| r.exhaustive))
                .status(Status::from_bool(ok))
                .witnesses(failed)
                .result(json!({"criteria": reports}))
        }
    })
}

fn big_json(v: &BigUint) -> Value {
    match u64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => json!(v.to_string()),
    }
}

#[allow(clippy::too_many_arguments)]
fn field(
    p: u32,
    h: u32,
    t: u32,
    op: Option<Op>,
    level: LevelArg,
    a: Option<u64>,
    b: Option<u64>,
) -> Result<Report> {
    let tw = tower(p, h, t)?;
    let level = match level {
        LevelArg::Prime => Level::Prime,
        LevelArg::Mid => Level::Mid,
        LevelArg::Top => Level::Top,
    };
    let mut result = json!({
        "descriptor": tw.descriptor(),
        "q": tw.q(),
        "top_order": tw.top_order(),
        "omega": tw.omega(),
    });
    if let Some(op) = op {
        let need = |x: Option<u64>, flag: &str| x.ok_or_else(|| anyhow!("this --op needs --{flag}"));
        let x = tw.element(level, need(a, "a")?)?;
        let value = match op {
            Op::Add | Op::Sub | Op::Mul | Op::Div => {
                let y = tw.element(level, need(b, "b")?)?;
                let bop = match op {
                    Op::Add => BinOp::Add,
                    Op::Sub => BinOp::Sub,
                    Op::Mul => BinOp::Mul,
                    _ => BinOp::Div,
                };
                tw.binary(x, y, bop)?
            }
            Op::Pow => tw.pow(x, need(b, "b")?),
            Op::Inv => tw.inv(x)?,
            Op::Decompose => {
                if level != Level::Top {
                    bail!("--op decompose needs --level top");
                }
                result["coordinates"] = json!(tw.decompose(x.value));
                x
            }
        };
        result["value"] = json!(value.value);
        result["coefficients"] = json!(tw.coeffs(value));
    }
    Ok(Report::new("field", json!({"p": p, "h": h, "t": t}))
        .exhaustive(true)
        .result(result))
}
