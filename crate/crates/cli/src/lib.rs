//! The `extset` command line.
//!
//! Exit status: 0 when everything requested holds, 1 when a property is
//! falsified, 2 on usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use extset_core::family::{parse_family, Family, GroundSize, SetMask};
use extset_core::nip::{compress_to_terminal, max_nip};
use extset_core::params::{param_report, parse_rational, product_measure, rational_string, ExactRational, ParamReport};
use extset_core::predicates::{
    is_cross_sperner, is_cross_t_intersecting, is_downset, is_iu, is_s_union, is_t_intersecting, is_upset, Verdict,
};
use extset_core::search::{
    exhaustive_pair_max, extremal_sweep, iu_maximal_families, ExtremalReport, SearchBudget, SweepSpec, SweepTarget,
    Witness,
};
use extset_core::separated::{
    a_profile, build_candidates, f23_report, parse_separated, t3_bound, BlockStructure, Candidate, SeparatedParams,
    WeightTable,
};
use extset_core::shifting::{all_pairs, shift_pair_to_fixpoint, ShiftPair};
use extset_core::Error;

/// Seed for randomized suites when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Overrides every search time cap, in seconds.
pub const BUDGET_ENV: &str = "EXTSET_BUDGET_SECS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "extset", version, about = "Exact tools for intersecting and separated set families")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Worker threads for searches (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide family predicates; exits 1 if any requested one fails.
    Check(CheckArgs),
    /// Degree, diversity, sturdiness and product measures.
    Params(ParamsArgs),
    /// Shift a pair of families jointly to a fixpoint.
    Shift(ShiftArgs),
    /// A-profiles of a separated family.
    Profile(ProfileArgs),
    /// Bound tables for separated families.
    Bound(BoundArgs),
    /// Maximal necessary intersection point, optionally compressing to a terminal pair.
    Nip(NipArgs),
    /// Brute-force oracles.
    #[command(subcommand)]
    Search(SearchCommand),
    /// Rerun a worked example end to end.
    Reproduce {
        #[arg(value_enum)]
        example: Example,
    },
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Second family for the cross predicates.
    #[arg(long)]
    pub with: Option<PathBuf>,
    #[arg(long, value_name = "T")]
    pub t_intersecting: Option<u32>,
    #[arg(long, value_name = "S")]
    pub s_union: Option<u32>,
    #[arg(long)]
    pub iu: bool,
    #[arg(long)]
    pub downset: bool,
    #[arg(long)]
    pub upset: bool,
    #[arg(long, value_name = "T", requires = "with")]
    pub cross_t: Option<u32>,
    #[arg(long, requires = "with")]
    pub cross_sperner: bool,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Probability for μ_p as "num/den"; repeatable.
    #[arg(long = "p")]
    pub p: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ShiftArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub with: PathBuf,
    /// Allowed operator as "i,j"; repeatable. Defaults to every pair.
    #[arg(long = "pair")]
    pub pairs: Vec<String>,
    #[arg(long)]
    pub out_f: Option<PathBuf>,
    #[arg(long)]
    pub out_g: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub l: u32,
    #[arg(long)]
    pub lp: u32,
    #[arg(long, default_value_t = 1)]
    pub t: u32,
    /// Print the closed-form sum for t = 1 instead.
    #[arg(long)]
    pub f23: bool,
}

#[derive(Debug, Args)]
pub struct NipArgs {
    #[arg(long)]
    pub f: PathBuf,
    #[arg(long)]
    pub g: PathBuf,
    #[arg(long)]
    pub t: u32,
    #[arg(long)]
    pub compress: bool,
    /// Weight table for f as comma-separated "num/den" values (default: all ones).
    #[arg(long)]
    pub w1: Option<String>,
    #[arg(long)]
    pub w2: Option<String>,
    #[arg(long = "pair")]
    pub pairs: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum SearchCommand {
    /// Maximize ω_1(f) + ω_2(g) over cross t-intersecting subfamilies of two universes.
    Pair {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        w1: Option<String>,
        #[arg(long)]
        w2: Option<String>,
    },
    /// Enumerate maximal IU-families over [n].
    Iu {
        #[arg(long)]
        n: u32,
        /// Print every maximal family.
        #[arg(long)]
        list: bool,
    },
    /// Compare oracles with bounds over a parameter range.
    Sweep {
        #[arg(long, value_parser = parse_target)]
        target: SweepTarget,
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3])]
        n: Vec<u32>,
        #[arg(long, default_value_t = 3)]
        k_max: u32,
        #[arg(long, default_value_t = 2)]
        t_max: u32,
        #[arg(long, value_delimiter = ',')]
        p: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        random_pairs: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Example {
    Ex1,
}

fn parse_target(s: &str) -> Result<SweepTarget, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

struct Ctx<'a> {
    format: Format,
    seed: u64,
    budget: SearchBudget,
    out: &'a mut Vec<u8>,
}

impl Ctx<'_> {
    fn emit<T: Serialize>(&mut self, report: &T, text: impl FnOnce() -> String) -> Result<(), Failure> {
        match self.format {
            Format::Json => {
                let json = serde_json::to_string_pretty(report).map_err(|e| Failure::Usage(e.to_string()))?;
                writeln!(self.out, "{json}")?;
            }
            Format::Text => write!(self.out, "{}", text())?,
        }
        Ok(())
    }
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    let budget = match budget_from_env(cli.jobs) {
        Ok(b) => b,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            return EXIT_USAGE;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut buffer = Vec::new();
    let result = pool.install(|| {
        let mut ctx = Ctx { format: cli.format, seed: cli.seed, budget, out: &mut buffer };
        dispatch(&cli.command, &mut ctx)
    });
    if let Err(e) = out.write_all(&buffer) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    match result {
        Ok(code) => code,
        Err(Failure::Usage(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn budget_from_env(jobs: Option<usize>) -> Result<SearchBudget, String> {
    let mut budget = SearchBudget::default();
    if let Some(jobs) = jobs {
        if jobs == 0 {
            return Err("--jobs must be at least 1".into());
        }
        budget.parallel_chunks = (jobs * 16).max(1);
    }
    if let Ok(raw) = std::env::var(BUDGET_ENV) {
        let secs: u64 = raw
            .trim()
            .parse()
            .map_err(|_| format!("{BUDGET_ENV} must be a whole number of seconds, got {raw:?}"))?;
        budget.time_cap = Some(Duration::from_secs(secs));
    }
    Ok(budget)
}

fn dispatch(command: &Command, ctx: &mut Ctx<'_>) -> Outcome {
    match command {
        Command::Check(args) => check(args, ctx),
        Command::Params(args) => params(args, ctx),
        Command::Shift(args) => shift(args, ctx),
        Command::Profile(args) => profile(args, ctx),
        Command::Bound(args) => bound(args, ctx),
        Command::Nip(args) => nip(args, ctx),
        Command::Search(cmd) => search(cmd, ctx),
        Command::Reproduce { example: Example::Ex1 } => reproduce_ex1(ctx),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Reads a family file; a `k=` in the header marks a separated file.
fn load_family(path: &Path) -> Result<Family, Failure> {
    let text = read(path)?;
    let header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    let parsed = if !header.starts_with('{') && header.split_whitespace().any(|f| f.starts_with("k=")) {
        parse_separated(&text).map(|s| s.family)
    } else {
        parse_family(&text)
    };
    parsed.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_pairs(raw: &[String], n: GroundSize) -> Result<Vec<ShiftPair>, Failure> {
    if raw.is_empty() {
        return Ok(all_pairs(n));
    }
    raw.iter()
        .map(|s| {
            let (i, j) = s
                .split_once(',')
                .ok_or_else(|| Failure::Usage(format!("pair {s:?} should look like \"i,j\"")))?;
            let parse = |v: &str| v.trim().parse::<u32>().map_err(|_| Failure::Usage(format!("bad pair {s:?}")));
            let pair = ShiftPair::new(parse(i)?, parse(j)?)?;
            pair.check(n)?;
            Ok(pair)
        })
        .collect()
}

fn parse_weights(raw: Option<&str>, k: u32) -> Result<WeightTable, Failure> {
    match raw {
        None => Ok(WeightTable::unit(k)),
        Some(s) => {
            let values = s.split(',').map(|v| parse_rational(v.trim())).collect::<Result<Vec<_>, _>>()?;
            Ok(WeightTable::new(values)?)
        }
    }
}

fn verdict_text(v: &Verdict) -> String {
    match v.witness {
        None => "holds".into(),
        Some((a, b)) => format!("fails, witness {a} {b}"),
    }
}

#[derive(Serialize)]
struct CheckEntry {
    predicate: String,
    #[serde(flatten)]
    verdict: Verdict,
}

#[derive(Serialize)]
struct CheckReport {
    checks: Vec<CheckEntry>,
    all_hold: bool,
}

fn check(args: &CheckArgs, ctx: &mut Ctx<'_>) -> Outcome {
    let f = load_family(&args.input)?;
    let other = args.with.as_deref().map(load_family).transpose()?;
    let mut checks = Vec::new();
    let mut push = |predicate: String, verdict: Verdict| checks.push(CheckEntry { predicate, verdict });
    if let Some(t) = args.t_intersecting {
        push(format!("t-intersecting(t={t})"), is_t_intersecting(&f, t));
    }
    if let Some(s) = args.s_union {
        push(format!("s-union(s={s})"), is_s_union(&f, s));
    }
    if args.iu {
        push("iu".into(), is_iu(&f));
    }
    if args.downset {
        let holds = is_downset(&f);
        push("downset".into(), Verdict { holds, witness: None });
    }
    if args.upset {
        let holds = is_upset(&f);
        push("upset".into(), Verdict { holds, witness: None });
    }
    if let (Some(t), Some(g)) = (args.cross_t, other.as_ref()) {
        push(format!("cross-t-intersecting(t={t})"), is_cross_t_intersecting(&f, g, t)?);
    }
    if let (true, Some(g)) = (args.cross_sperner, other.as_ref()) {
        push("cross-sperner".into(), is_cross_sperner(&f, g)?);
    }
    if checks.is_empty() {
        return Err(Failure::Usage(
            "no predicate requested; pass e.g. --iu, --t-intersecting 1 or --cross-t 1 --with other.fam".into(),
        ));
    }
    let all_hold = checks.iter().all(|c| c.verdict.holds);
    let report = CheckReport { checks, all_hold };
    ctx.emit(&report, || {
        report
            .checks
            .iter()
            .map(|c| {
                let text = if c.verdict.witness.is_none() && !c.verdict.holds {
                    "fails".to_string()
                } else {
                    verdict_text(&c.verdict)
                };
                format!("{}: {text}\n", c.predicate)
            })
            .collect()
    })?;
    Ok(if all_hold { EXIT_OK } else { EXIT_FALSIFIED })
}

#[derive(Serialize)]
struct MeasureEntry {
    #[serde(with = "rational_string")]
    p: ExactRational,
    #[serde(with = "rational_string")]
    measure: ExactRational,
}

#[derive(Serialize)]
struct ParamsOutput {
    #[serde(flatten)]
    report: ParamReport,
    measures: Vec<MeasureEntry>,
}

fn params(args: &ParamsArgs, ctx: &mut Ctx<'_>) -> Outcome {
    let f = load_family(&args.input)?;
    let measures = args
        .p
        .iter()
        .map(|raw| {
            let p = parse_rational(raw)?;
            let measure = product_measure(&f, &p)?;
            Ok(MeasureEntry { p, measure })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let output = ParamsOutput { report: param_report(&f), measures };
    ctx.emit(&output, || {
        let r = &output.report;
        let mut s = format!(
            "n={} |f|={}\nDelta={} (element {})\ngamma={} (element {})\n",
            r.n, r.size, r.max_degree, r.max_degree_element, r.diversity, r.diversity_element
        );
        match (r.sturdiness, r.sturdiness_pair) {
            (Some(b), Some((i, j))) => s.push_str(&format!("beta={b} (pair {i},{j})\n")),
            _ => s.push_str("beta=undefined (n < 2)\n"),
        }
        for m in &output.measures {
            s.push_str(&format!("mu_{}={}\n", m.p, m.measure));
        }
        s
    })?;
    Ok(EXIT_OK)
}

fn shift(args: &ShiftArgs, ctx: &mut Ctx<'_>) -> Outcome {
    let f = load_family(&args.input)?;
    let g = load_family(&args.with)?;
    let pairs = parse_pairs(&args.pairs, f.ground())?;
    let result = shift_pair_to_fixpoint(&f, &g, &pairs)?;
    if let Some(path) = &args.out_f {
        fs::write(path, result.f.to_text())?;
    }
    if let Some(path) = &args.out_g {
        fs::write(path, result.g.to_text())?;
    }
    ctx.emit(&result, || {
        let log: Vec<String> = result.log.iter().map(ToString::to_string).collect();
        format!("f = {}\ng = {}\nlog: {}\n", result.f, result.g, if log.is_empty() { "(none)".into() } else { log.join(" ") })
    })?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ProfileEntry {
    set: SetMask,
    profile: SetMask,
}

#[derive(Serialize)]
struct ProfileReport {
    blocks: BlockStructure,
    members: Vec<ProfileEntry>,
    a_family: Family,
}

fn profile(args: &ProfileArgs, ctx: &mut Ctx<'_>) -> Outcome {
    let sep = parse_separated(&read(&args.input)?)?;
    let members = sep
        .family
        .iter()
        .map(|set| Ok(ProfileEntry { set, profile: a_profile(set, sep.blocks)? }))
        .collect::<Result<Vec<_>, Error>>()?;
    let a_family = extset_core::separated::a_family(&sep.family, sep.blocks)?;
    let report = ProfileReport { blocks: sep.blocks, members, a_family };
    ctx.emit(&report, || {
        let mut s = format!("n={} k={}\n", report.blocks.n, report.blocks.k);
        for e in &report.members {
            s.push_str(&format!("{} -> A = {}\n", e.set, e.profile));
        }
        s.push_str(&format!("A(f) = {}\n", report.a_family));
        s
    })?;
    Ok(EXIT_OK)
}

fn bound(args: &BoundArgs, ctx: &mut Ctx<'_>) -> Outcome {
    if args.f23 {
        SeparatedParams::new(args.n, args.k, args.l, args.lp, 1)?;
        let report = f23_report(args.n, args.k, args.l, args.lp);
        ctx.emit(&report, || {
            let note = if report.hypothesis_holds { "" } else { " (outside n > 3l)" };
            format!("f23 sum = {}{note}\n", report.value)
        })?;
        return Ok(EXIT_OK);
    }
    let p = SeparatedParams::new(args.n, args.k, args.l, args.lp, args.t)?;
    let report = t3_bound(p)?;
    ctx.emit(&report, || {
        let mut s = format!("{}\n", report.params);
        for e in &report.f {
            s.push_str(&format!("f({}) = {}\n", e.a, e.value));
        }
        for e in &report.g {
            s.push_str(&format!("g({}) = {}\n", e.a, e.value));
        }
        s.push_str(&format!("bound {}, argmax {}\n", report.bound, report.argmax));
        s
    })?;
    Ok(EXIT_OK)
}

fn nip(args: &NipArgs, ctx: &mut Ctx<'_>) -> Outcome {
    let f = load_family(&args.f)?;
    let g = load_family(&args.g)?;
    if !args.compress {
        let report = max_nip(&f, &g, args.t)?;
        ctx.emit(&report, || match report.max_nip {
            Some(a) => format!("max nip a = {a}\nF^a = {}\nG^a = {}\n", report.f_witnesses, report.g_witnesses),
            None => "no necessary intersection point\n".into(),
        })?;
        return Ok(EXIT_OK);
    }
    let k = f.ground().get();
    let w1 = parse_weights(args.w1.as_deref(), k)?;
    let w2 = parse_weights(args.w2.as_deref(), k)?;
    let pairs = parse_pairs(&args.pairs, f.ground())?;
    let terminal = compress_to_terminal(&f, &g, args.t, &w1, &w2, &pairs)?;
    ctx.emit(&terminal, || {
        let mut s = String::new();
        for step in &terminal.trace {
            s.push_str(&format!(
                "{}: {} (a {} -> {}, weight {} -> {})\n",
                step.kind,
                step.detail,
                point(step.a_before),
                point(step.a_after),
                step.weight_before,
                step.weight_after
            ));
        }
        s.push_str(&format!(
            "terminal {} at a = {}\nf = {}\ng = {}\nweight {} -> {}\n",
            terminal.class, terminal.a, terminal.f, terminal.g, terminal.initial_weight, terminal.terminal_weight
        ));
        s
    })?;
    Ok(if terminal.terminal_weight >= terminal.initial_weight { EXIT_OK } else { EXIT_FALSIFIED })
}

fn point(a: Option<u32>) -> String {
    a.map_or_else(|| "none".into(), |a| a.to_string())
}

fn report_text(report: &ExtremalReport) -> String {
    let mut s = match &report.optimum {
        Some(v) => format!("optimum {v}\n"),
        None => "no admissible pair\n".into(),
    };
    match &report.witness {
        Some(Witness::Pair { f, g }) => s.push_str(&format!("f = {f}\ng = {g}\n")),
        Some(Witness::Single { family }) => s.push_str(&format!("witness = {family}\n")),
        None => {}
    }
    s.push_str(&format!("method: {}\nexhaustive: {}\n", report.method, report.exhaustive));
    s
}

#[derive(Serialize)]
struct IuOutput<'a> {
    #[serde(flatten)]
    aggregate: &'a extset_core::search::IuAggregate,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    families: Vec<Family>,
}

fn search(cmd: &SearchCommand, ctx: &mut Ctx<'_>) -> Outcome {
    match cmd {
        SearchCommand::Pair { f, g, t, w1, w2 } => {
            let uf = load_family(f)?;
            let ug = load_family(g)?;
            let k = uf.ground().get();
            let w1 = parse_weights(w1.as_deref(), k)?;
            let w2 = parse_weights(w2.as_deref(), k)?;
            let report = exhaustive_pair_max(&uf, &ug, *t, &w1, &w2, &ctx.budget)?;
            ctx.emit(&report, || report_text(&report))?;
            Ok(EXIT_OK)
        }
        SearchCommand::Iu { n, list } => {
            let mut families = Vec::new();
            let aggregate = iu_maximal_families(*n, &ctx.budget, |f| {
                if *list {
                    families.push(f.clone());
                }
            })?;
            let output = IuOutput { aggregate: &aggregate, families };
            ctx.emit(&output, || {
                let mut s: String = output.families.iter().map(|f| format!("{f}\n")).collect();
                s.push_str(&format!(
                    "maximal IU-families: {}\nmax |f| = {}\nmax beta = {}\nexhaustive: {}\n",
                    aggregate.maximal_families,
                    aggregate.report.optimum.as_ref().map_or("-".into(), ToString::to_string),
                    aggregate.max_beta,
                    aggregate.report.exhaustive
                ));
                s
            })?;
            Ok(EXIT_OK)
        }
        SearchCommand::Sweep { target, n, k_max, t_max, p, random_pairs } => {
            let mut spec = SweepSpec {
                n: n.clone(),
                k_max: *k_max,
                t_max: *t_max,
                random_pairs: *random_pairs,
                seed: ctx.seed,
                budget: ctx.budget,
                ..SweepSpec::default()
            };
            if !p.is_empty() {
                spec.p = p.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
            }
            let records = extremal_sweep(&spec, *target)?;
            let failed = records.iter().any(|r| r.outcome.is_failure());
            match ctx.format {
                // One JSON object per line.
                Format::Json => {
                    for r in &records {
                        let line = serde_json::to_string(r).map_err(|e| Failure::Usage(e.to_string()))?;
                        writeln!(ctx.out, "{line}")?;
                    }
                }
                Format::Text => {
                    for r in &records {
                        let show = |v: &Option<ExactRational>| v.as_ref().map_or("-".into(), ToString::to_string);
                        writeln!(
                            ctx.out,
                            "{} {}: optimum {} bound {} -> {:?}{}",
                            r.target,
                            r.params,
                            show(&r.optimum),
                            show(&r.bound),
                            r.outcome,
                            r.note.as_ref().map_or(String::new(), |n| format!(" ({n})"))
                        )?;
                    }
                }
            }
            Ok(if failed { EXIT_FALSIFIED } else { EXIT_OK })
        }
    }
}

#[derive(Serialize)]
struct Ex1Report {
    params: SeparatedParams,
    f0_plus_g0: usize,
    fa_plus_ga: usize,
    a: u32,
    #[serde(with = "rational_string::option")]
    oracle_optimum: Option<ExactRational>,
    oracle_exhaustive: bool,
    witness_cross_intersecting: bool,
    larger_instance: LargerInstance,
    confirmed: bool,
    seconds: f64,
}

#[derive(Serialize)]
struct LargerInstance {
    params: SeparatedParams,
    f0_plus_g0: usize,
    fa_plus_ga: usize,
    a: u32,
}

fn candidate_sums(p: SeparatedParams, a: u32) -> Result<(usize, usize), Error> {
    let size = |c| build_candidates(p, c).map(|f| f.len());
    Ok((size(Candidate::F0)? + size(Candidate::G0)?, size(Candidate::Fa(a))? + size(Candidate::Ga(a))?))
}

fn reproduce_ex1(ctx: &mut Ctx<'_>) -> Outcome {
    let start = Instant::now();
    let p = SeparatedParams::new(2, 3, 3, 2, 1)?;
    let (zero, three) = candidate_sums(p, 3)?;
    let bs = p.blocks()?;
    let uf = extset_core::separated::enumerate_h(bs, p.l)?;
    let ug = extset_core::separated::enumerate_h(bs, p.lp)?;
    let unit = WeightTable::unit(bs.ground().get());
    let oracle = exhaustive_pair_max(&uf, &ug, p.t, &unit, &unit, &ctx.budget)?;
    let witness_ok = match &oracle.witness {
        Some(Witness::Pair { f, g }) => {
            !f.is_empty() && !g.is_empty() && is_cross_t_intersecting(f, g, p.t)?.holds
        }
        _ => false,
    };
    let q = SeparatedParams::new(2, 4, 4, 2, 1)?;
    let (q_zero, q_four) = candidate_sums(q, 4)?;
    let confirmed = three > zero
        && witness_ok
        && oracle.exhaustive
        && oracle.optimum == Some(ExactRational::from_integer((three as i64).into()))
        && q_four > q_zero;
    let report = Ex1Report {
        params: p,
        f0_plus_g0: zero,
        fa_plus_ga: three,
        a: 3,
        oracle_optimum: oracle.optimum.clone(),
        oracle_exhaustive: oracle.exhaustive,
        witness_cross_intersecting: witness_ok,
        larger_instance: LargerInstance { params: q, f0_plus_g0: q_zero, fa_plus_ga: q_four, a: 4 },
        confirmed,
        seconds: start.elapsed().as_secs_f64(),
    };
    ctx.emit(&report, || {
        let mut s = format!(
            "{}\n|F_0|+|G_0| = {}\n|F_3|+|G_3| = {}\noracle optimum = {} ({})\nwitness cross-intersecting: {}\n",
            report.params,
            report.f0_plus_g0,
            report.fa_plus_ga,
            report.oracle_optimum.as_ref().map_or("-".into(), ToString::to_string),
            if report.oracle_exhaustive { "exhaustive" } else { "partial" },
            if report.witness_cross_intersecting { "yes" } else { "no" },
        );
        let l = &report.larger_instance;
        s.push_str(&format!("{}: |F_0|+|G_0| = {}, |F_4|+|G_4| = {}\n", l.params, l.f0_plus_g0, l.fa_plus_ga));
        if report.confirmed {
            s.push_str("counterexample to Problem p1 confirmed\nPASS\n");
        } else {
            s.push_str("FAIL\n");
        }
        s
    })?;
    Ok(if confirmed { EXIT_OK } else { EXIT_FALSIFIED })
}
