use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use spreadpack::bounds::{self, prime_power, BoundReport, DEFAULT_SEMILINEAR_CAP};
use spreadpack::certificate::{certify_bytes, ParallelismFile, TowerRecord};
use spreadpack::field::DEFAULT_TABLE_CAP;
use spreadpack::linalg::DEFAULT_GL_BUDGET;
use spreadpack::num_bigint::BigInt;
use spreadpack::oracles::{self, OracleReport};
use spreadpack::search::{greedy_construct, union_size_exact, SearchConfig, SearchMode};
use spreadpack::{Error, FieldTower};

const OK: u8 = 0;
const USAGE: u8 = 1;
const INFEASIBLE: u8 = 2;
const FAILED: u8 = 3;
const BELOW_GUARANTEE: u8 = 4;
const FULL_PARALLELISM: u8 = 5;

/// Certified partial parallelisms of V(n, q), and the bounds around them.
#[derive(Debug, Parser)]
#[command(name = "spreadpack", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print every bound on P(n, k, q) as an exact rational.
    Bounds(BoundsArgs),
    /// Build a partial parallelism greedily and write its certificate.
    Construct(ConstructArgs),
    /// Re-validate a certificate from scratch.
    Certify(CertifyArgs),
    /// Run brute-force oracles against the closed forms.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
struct Instance {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Field order; alternatively give --p and --e.
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    e: Option<usize>,
}

#[derive(Debug, Clone, Args)]
struct Limits {
    /// Worker threads for scans.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Largest group or semilinear enumeration allowed.
    #[arg(long)]
    budget: Option<u128>,
    /// Largest field for which log tables are built.
    #[arg(long)]
    cap: Option<u64>,
}

impl Limits {
    fn budget(&self) -> u128 {
        self.budget.unwrap_or(DEFAULT_GL_BUDGET)
    }

    fn cap(&self) -> u64 {
        self.cap.unwrap_or(DEFAULT_TABLE_CAP)
    }
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[command(flatten)]
    instance: Instance,
    #[command(flatten)]
    limits: Limits,
    /// Also enumerate the transporter union exactly.
    #[arg(long)]
    exact_union: bool,
    /// Tabulate all n ≤ --n-max with k | n, k < n.
    #[arg(long)]
    table: bool,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Exhaustive,
    Random,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[command(flatten)]
    instance: Instance,
    #[command(flatten)]
    limits: Limits,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random candidates to draw.
    #[arg(long, default_value_t = 100_000)]
    limit: u64,
    /// Keep scanning after a full parallelism is found.
    #[arg(long)]
    no_early_exit: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    path: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: Instance,
    #[command(flatten)]
    limits: Limits,
    #[arg(long, conflicts_with = "claim")]
    suite: Option<String>,
    #[arg(long)]
    claim: Option<String>,
    #[arg(long)]
    json: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } | Error::FieldTooLarge { .. } | Error::ScalarFieldTooLarge(_) => INFEASIBLE,
            Error::Certification(_) => FAILED,
            _ => USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds(a) => cmd_bounds(a),
        Command::Construct(a) => cmd_construct(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

struct Resolved {
    n: usize,
    k: usize,
    p: u64,
    e: usize,
    q: u64,
}

impl Instance {
    fn field(&self) -> Result<(u64, usize, u64), Failure> {
        match (self.q, self.p) {
            (Some(q), p) => {
                let (pp, ee) =
                    prime_power(q).ok_or_else(|| Failure::usage(format!("q = {q} is not a prime power")))?;
                if p.is_some_and(|p| p != pp) || self.e.is_some_and(|e| e != ee) {
                    return Err(Failure::usage(format!("q = {q} disagrees with --p/--e")));
                }
                Ok((pp, ee, q))
            }
            (None, Some(p)) => {
                let e = self.e.unwrap_or(1);
                let q = u32::try_from(e)
                    .ok()
                    .and_then(|e| p.checked_pow(e))
                    .ok_or_else(|| Failure::usage(format!("{p}^{e} is too large")))?;
                Ok((p, e, q))
            }
            (None, None) => Err(Failure::usage("give --q, or --p with optional --e")),
        }
    }

    fn resolve(&self) -> Result<Resolved, Failure> {
        let n = self.n.ok_or_else(|| Failure::usage("--n is required"))?;
        let k = self.k.ok_or_else(|| Failure::usage("--k is required"))?;
        let (p, e, q) = self.field()?;
        if k == 0 || n % k != 0 {
            return Err(Error::KDoesNotDivideN { k, n }.into());
        }
        Ok(Resolved { n, k, p, e, q })
    }
}

impl Resolved {
    fn tower(&self, cap: u64) -> Result<FieldTower, Failure> {
        Ok(FieldTower::build_with_cap(self.p, self.e, self.k, self.n, cap)?)
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn strictness(r: &BoundReport) -> &'static str {
    match (r.formula, r.strict) {
        (bounds::FormulaId::Upper, _) => "<=",
        (_, true) => ">",
        (_, false) => ">=",
    }
}

fn bound_rows(r: &Resolved, limits: &Limits, exact_union: bool) -> Result<(Vec<BoundReport>, Vec<String>), Failure> {
    let (n, k, q) = (r.n, r.k, r.q);
    let mut reports = vec![bounds::upper_bound(n, k, q)?];
    let mut notes = Vec::new();
    if k < n {
        reports.push(bounds::bound_cor34(n, k, q)?);
        reports.push(bounds::bound_thm33(n, k, q)?);
    }
    if n == 2 * k {
        let cap = limits.budget.unwrap_or(DEFAULT_SEMILINEAR_CAP);
        match bounds::bound_thm32_l(k, q, cap) {
            Ok(rep) => reports.push(rep),
            Err(e @ Error::BudgetExceeded { .. }) => notes.push(format!("thm32 skipped: {e}")),
            Err(e) => return Err(e.into()),
        }
    }
    if exact_union {
        let tower = r.tower(limits.cap())?;
        let stats = union_size_exact(&tower, limits.threads, limits.budget())?;
        reports.push(bounds::bound_thm31(n, k, q, &stats.union_size.into())?);
        notes.push(format!("union size {} (degree {})", stats.union_size, stats.degree));
    }
    Ok((reports, notes))
}

fn cmd_bounds(a: BoundsArgs) -> CmdResult {
    if a.table {
        return bounds_table(&a);
    }
    let r = a.instance.resolve()?;
    let (reports, notes) = bound_rows(&r, &a.limits, a.exact_union)?;
    if a.json {
        print_json(&reports.iter().map(BoundReport::record).collect::<Vec<_>>());
        return Ok(OK);
    }
    println!("bounds on P({}, {}, {})", r.n, r.k, r.q);
    println!("{:<8} {:<28} {:>10} {:<4} {:>16}", "formula", "value", "integer", "rel", "approx");
    for rep in &reports {
        println!(
            "{:<8} {:<28} {:>10} {:<4} {:>16}",
            rep.formula.as_str(),
            rep.value.to_string(),
            rep.integer_bound.to_string(),
            strictness(rep),
            bounds::approx_decimal(&rep.value, 6)
        );
    }
    for rep in reports.iter().filter(|r| r.formula == bounds::FormulaId::Thm32) {
        for t in &rep.terms {
            println!("  {:<12} {}", t.label, t.value);
        }
        for flag in &rep.flags {
            println!("  flag: {flag}");
        }
    }
    for note in notes {
        println!("{note}");
    }
    Ok(OK)
}

fn bounds_table(a: &BoundsArgs) -> CmdResult {
    let (_, _, q) = a.instance.field()?;
    let mut records = Vec::new();
    if !a.json {
        println!(
            "{:>3} {:>3} {:>4} {:>12} {:>20} {:>8} {:>24} {:>8}",
            "n", "k", "q", "upper", "cor34", "int", "thm33", "int"
        );
    }
    for n in 2..=a.n_max {
        for k in (1..n).filter(|k| n % k == 0) {
            let up = bounds::upper_bound(n, k, q)?;
            let cor = bounds::bound_cor34(n, k, q)?;
            let thm = bounds::bound_thm33(n, k, q)?;
            if a.json {
                records.extend([up.record(), cor.record(), thm.record()]);
                continue;
            }
            println!(
                "{n:>3} {k:>3} {q:>4} {:>12} {:>20} {:>8} {:>24} {:>8}",
                up.value.to_string(),
                bounds::approx_decimal(&cor.value, 6),
                cor.integer_bound.to_string(),
                bounds::approx_decimal(&thm.value, 6),
                thm.integer_bound.to_string()
            );
        }
    }
    if a.json {
        print_json(&records);
    }
    Ok(OK)
}

#[derive(Serialize)]
struct ManifestConfig {
    n: usize,
    k: usize,
    q: u64,
    mode: Mode,
    seed: String,
    limit: String,
    threads: usize,
    budget: String,
    cap: String,
    early_exit: bool,
}

#[derive(Serialize)]
struct ManifestBounds {
    upper: String,
    lower: String,
}

#[derive(Serialize)]
struct RunManifest {
    tool: &'static str,
    version: &'static str,
    command: Vec<String>,
    config: ManifestConfig,
    tower: TowerRecord,
    scanned: String,
    accepted: usize,
    bounds: ManifestBounds,
    status: &'static str,
    wall_time_ms: u64,
    parallelism: String,
    manifest: String,
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn cmd_construct(a: ConstructArgs) -> CmdResult {
    let started = Instant::now();
    let r = a.instance.resolve()?;
    let tower = r.tower(a.limits.cap())?;
    let cfg = SearchConfig {
        mode: match a.mode {
            Mode::Exhaustive => SearchMode::Exhaustive,
            Mode::Random => SearchMode::Random,
        },
        seed: a.seed,
        sample_limit: a.limit,
        workers: a.limits.threads,
        budget: a.limits.budget(),
        early_exit: !a.no_early_exit,
    };
    let outcome = greedy_construct(&cfg, &tower)?;

    let upper = bounds::upper_bound(r.n, r.k, r.q)?.integer_bound;
    let lower = if r.k < r.n {
        let c = bounds::bound_cor34(r.n, r.k, r.q)?.integer_bound;
        let t = bounds::bound_thm33(r.n, r.k, r.q)?.integer_bound;
        c.max(t)
    } else {
        BigInt::from(1)
    };
    let size = BigInt::from(outcome.accepted());
    let (code, status) = if size >= upper {
        (FULL_PARALLELISM, "full parallelism")
    } else if size >= lower {
        (OK, "met guarantee")
    } else if cfg.mode == SearchMode::Random {
        (BELOW_GUARANTEE, "below guarantee")
    } else {
        return Err(Failure { code: FAILED, message: format!("exhaustive greedy found {size} < {lower}") });
    };

    let manifest = manifest_path(&a.out);
    let file = ParallelismFile::new(&outcome.parallelism, &tower, &manifest.to_string_lossy());
    let io = |e: std::io::Error, p: &Path| Failure::usage(format!("cannot write {}: {e}", p.display()));
    fs::write(&a.out, file.to_bytes()).map_err(|e| io(e, &a.out))?;
    let run = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: std::env::args().collect(),
        config: ManifestConfig {
            n: r.n,
            k: r.k,
            q: r.q,
            mode: a.mode,
            seed: a.seed.to_string(),
            limit: a.limit.to_string(),
            threads: a.limits.threads,
            budget: cfg.budget.to_string(),
            cap: a.limits.cap().to_string(),
            early_exit: cfg.early_exit,
        },
        tower: TowerRecord::of(&tower.descriptor()),
        scanned: outcome.scanned.to_string(),
        accepted: outcome.accepted(),
        bounds: ManifestBounds { upper: upper.to_string(), lower: lower.to_string() },
        status,
        wall_time_ms: started.elapsed().as_millis() as u64,
        parallelism: a.out.to_string_lossy().into_owned(),
        manifest: manifest.to_string_lossy().into_owned(),
    };
    let mut bytes = serde_json::to_vec_pretty(&run).expect("serializable");
    bytes.push(b'\n');
    fs::write(&manifest, bytes).map_err(|e| io(e, &manifest))?;

    if a.json {
        print_json(&run);
    } else {
        println!("P({}, {}, {}): {} spreads certified", r.n, r.k, r.q, outcome.accepted());
        println!("lower bound {lower}, upper bound {upper}: {status}");
        println!("scanned {} candidates in {} ms", outcome.scanned, run.wall_time_ms);
        println!("wrote {} and {}", a.out.display(), manifest.display());
    }
    Ok(code)
}

#[derive(Serialize)]
struct CertifyReport {
    valid: bool,
    n: Option<usize>,
    k: Option<usize>,
    q: Option<u64>,
    spreads: Option<usize>,
    violation: Option<String>,
}

fn cmd_certify(a: CertifyArgs) -> CmdResult {
    let bytes = fs::read(&a.path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", a.path.display())))?;
    let (report, code) = match certify_bytes(&bytes) {
        Ok(c) => {
            let amb = c.ambient();
            let report = CertifyReport {
                valid: true,
                n: Some(amb.n),
                k: Some(amb.k),
                q: Some(amb.q),
                spreads: Some(c.parallelism.len()),
                violation: None,
            };
            (report, OK)
        }
        Err(v) => {
            let report =
                CertifyReport { valid: false, n: None, k: None, q: None, spreads: None, violation: Some(v.to_string()) };
            (report, FAILED)
        }
    };
    if a.json {
        print_json(&report);
    } else if let Some(v) = &report.violation {
        println!("invalid: {v}");
    } else {
        println!(
            "valid: {} pairwise disjoint {}-spreads of V({}, {})",
            report.spreads.unwrap_or(0),
            report.k.unwrap_or(0),
            report.n.unwrap_or(0),
            report.q.unwrap_or(0)
        );
    }
    Ok(code)
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let threads = a.limits.threads;
    let budget = a.limits.budget();
    let reports: Vec<OracleReport> = match (&a.suite, &a.claim) {
        (Some(s), None) if s == "default" => oracles::default_suite(threads, budget)?,
        (Some(s), None) => return Err(Failure::usage(format!("unknown suite {s:?}; expected \"default\""))),
        (None, Some(claim)) => {
            let r = a.instance.resolve()?;
            oracles::run_claim(claim, r.n, r.k, r.q, threads, budget)?
        }
        _ => return Err(Failure::usage("give --suite default or --claim NAME")),
    };
    if a.json {
        print_json(&reports.iter().map(OracleReport::record).collect::<Vec<_>>());
    } else {
        for r in &reports {
            println!("{r}");
        }
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let flagged = reports.iter().filter(|r| !r.matched && r.passed()).count();
    if !a.json {
        println!("{} reports, {failed} failed, {flagged} diagnostic mismatches", reports.len());
    }
    Ok(if failed == 0 { OK } else { FAILED })
}
