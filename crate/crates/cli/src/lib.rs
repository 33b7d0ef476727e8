//! Command-line front end: series files, reports and command dispatch.

pub mod report;
pub mod specfile;

use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use subsum::constructions::{
    add_m_double_totals, add_m_totals, add_total, add_two_totals, double_terms, finite_range, interleave, preset,
    product, search_finite_ranges, search_finite_ranges_with, FiniteMeasure, PresetName, PRESET_NAMES,
};
use subsum::counter::{
    count, enumerate_reps, greedy_segments_with, omega_witness, quasiregular_expand, range_scan, Cardinality,
    CountError, CountOptions,
};
use subsum::series::{fmt_rat, parse_rat, Rat, SeriesSpec};
use subsum::topology::{classify, convergence_profile, cover, gaps, Decision, SlowFrom, TopologyClass};

pub use report::{card_set, Cell, Format, Report};
pub use specfile::{parse_spec, render_spec, SpecFileError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "subsum", version, about = "Count the subsets of a positive series that sum to a value")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "tsv")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// State budget per count.
    #[arg(long, global = true, env = "SUBSUM_BUDGET")]
    pub budget: Option<usize>,
    /// Representations to list per count.
    #[arg(long, global = true, env = "SUBSUM_WITNESSES")]
    pub witnesses: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Series file (TOML).
    #[arg(long, conflicts_with = "preset")]
    pub spec: Option<PathBuf>,
    /// Built-in series, e.g. EX_2_6, GN_CANTORVAL, INTERLEAVED_GEO(1/5).
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Topological type of the set of subsums.
    Classify(Source),
    /// Quick/slow convergence and the dominance properties.
    Props(Source),
    /// Number of representations of each target.
    Count {
        #[command(flatten)]
        source: Source,
        #[arg(long, required_unless_present = "omega_witness")]
        target: Vec<String>,
        /// Count the built-in point with infinitely many representations.
        #[arg(long)]
        omega_witness: bool,
    },
    /// List representations of a target.
    Enumerate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        target: String,
    },
    /// Count every subsum of the first `depth` terms and the remainders.
    Scan {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Extra targets.
        #[arg(long)]
        target: Vec<String>,
    },
    /// Gaps of the depth cover, or the cover itself.
    Gaps {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long)]
        cover: bool,
    },
    /// Greedy digits of a target: quasiregular, or segment greedy after an index.
    Expand {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 32)]
        horizon: usize,
        /// Segment greedy from this index on.
        #[arg(long)]
        after: Option<usize>,
    },
    /// Build a new series from a preset or file and print it as a series file.
    Construct {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        op: ConstructOp,
        /// Multiplicity for the add-m operations.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Finite atoms for `product`, comma separated.
        #[arg(long)]
        atoms: Option<String>,
    },
    /// Exact range of a finite measure.
    FiniteRange {
        /// Atoms, comma separated.
        #[arg(long)]
        atoms: String,
    },
    /// Finite measures whose range is exactly the given set.
    SearchRange {
        /// Target range, comma separated.
        #[arg(long)]
        range: String,
        #[arg(long = "max-atoms", default_value_t = 5)]
        max_atoms: usize,
        #[arg(long, default_value_t = 12)]
        denominators: u64,
        /// Allow repeated atoms even where they are skipped by default.
        #[arg(long)]
        no_prune: bool,
    },
    /// List the built-in series.
    Presets,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructOp {
    Interleave,
    Double,
    AddTotal,
    AddTwoTotals,
    AddMTotals,
    AddMDoubleTotals,
    Product,
}

/// Defaults read from the file named by `SUBSUM_CONFIG`.
#[derive(Deserialize, Debug, Default, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub budget: Option<usize>,
    pub witnesses: Option<usize>,
}

impl Config {
    pub fn load() -> Result<Config> {
        let Ok(path) = std::env::var("SUBSUM_CONFIG") else { return Ok(Config::default()) };
        let text = std::fs::read_to_string(&path).with_context(|| format!("reading config {path}"))?;
        toml::from_str(&text).with_context(|| format!("parsing config {path}"))
    }
}

/// What to print and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn rat_arg(s: &str) -> Result<Rat> {
    parse_rat(s).ok_or_else(|| anyhow!("not a rational: {s:?}"))
}

fn list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',').map(|p| p.trim().parse::<T>().map_err(|_| anyhow!("bad list entry {p:?}"))).collect()
}

fn load(source: &Source) -> Result<SeriesSpec> {
    match (&source.spec, &source.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_spec(&text).with_context(|| path.display().to_string())
        }
        (None, Some(name)) => Ok(preset(&name.parse::<PresetName>()?)?),
        (None, None) => bail!("one of --spec or --preset is required"),
    }
}

fn decision(d: Decision) -> &'static str {
    match d {
        Decision::Yes => "yes",
        Decision::No => "no",
        Decision::Undecided => "undecided",
    }
}

fn opt(v: Option<usize>) -> String {
    v.map_or("-".to_string(), |n| n.to_string())
}

fn options(g: &Global, cfg: &Config) -> CountOptions {
    let mut o = CountOptions::default();
    if let Some(b) = g.budget.or(cfg.budget) {
        o = o.with_budget(b);
    }
    if let Some(w) = g.witnesses.or(cfg.witnesses) {
        o = o.with_witnesses(w);
    }
    o
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli, cfg: &Config) -> Result<Outcome> {
    let g = &cli.global;
    let opts = options(g, cfg);
    let mut code = EXIT_OK;
    let report = match &cli.command {
        Command::Classify(src) => {
            let s = load(src)?;
            let c = classify(&s)?;
            let mut r = Report::new(&["lo", "hi"]);
            if let TopologyClass::IntervalUnion(parts) = &c {
                for (lo, hi) in parts {
                    r.row(vec![fmt_rat(lo).into(), fmt_rat(hi).into()]);
                }
            }
            r.note("class", c.name());
            r
        }
        Command::Props(src) => {
            let s = load(src)?;
            let p = convergence_profile(&s)?;
            let v = s.validate()?;
            let mut r = Report::new(&["property", "value"]);
            let slow = match p.slow_from {
                SlowFrom::From(n) => format!("from {n}"),
                SlowFrom::Never => "never".into(),
                SlowFrom::Undecided => "undecided".into(),
            };
            for (k, val) in [
                ("quick", decision(p.quick).to_string()),
                ("slow", slow),
                ("property_a", decision(p.property_a).to_string()),
                ("property_b", decision(p.property_b).to_string()),
                ("quick_fails_at", opt(p.witnesses.quick_fails_at)),
                ("a_fails_at", opt(p.witnesses.a_fails_at)),
                ("b_fails_at", opt(p.witnesses.b_fails_at)),
                ("last_strict", opt(p.witnesses.last_strict)),
                ("first_unsorted", opt(v.first_unsorted)),
                ("sorted_from", opt(v.sorted_from)),
            ] {
                r.row(vec![k.into(), val.into()]);
            }
            r
        }
        Command::Count { source, target, omega_witness: ow } => {
            let s = load(source)?;
            let mut targets: Vec<Rat> = target.iter().map(|t| rat_arg(t)).collect::<Result<_>>()?;
            if *ow {
                targets.push(omega_witness(&s)?.t);
            }
            targets.sort();
            targets.dedup();
            let mut r = Report::new(&["target", "cardinality"]);
            let (mut states, mut limited, mut lower) = (0, false, false);
            for t in &targets {
                let cell: Cell = match count(&s, t, &opts) {
                    Ok(res) => {
                        states += res.diagnostics.states;
                        limited |= !res.cardinality.is_exact();
                        lower |= res.diagnostics.infinite_lower_bound;
                        for w in &res.witnesses {
                            r.note("witness", format!("{}\t{w}", fmt_rat(t)));
                        }
                        res.cardinality.into()
                    }
                    Err(CountError::TargetOutOfRange) => Cardinality::Fin(0).into(),
                    Err(CountError::Undecidable(_)) | Err(CountError::BudgetExceeded { .. }) => {
                        limited = true;
                        "undecided".into()
                    }
                    Err(e) => return Err(e.into()),
                };
                r.row(vec![fmt_rat(t).into(), cell]);
            }
            r.note("states", states);
            r.note("budget_limited", limited);
            r.note("infinite_lower_bound", lower);
            if limited {
                code = EXIT_PARTIAL;
            }
            r
        }
        Command::Enumerate { source, target } => {
            let s = load(source)?;
            let t = rat_arg(target)?;
            let limit = g.witnesses.or(cfg.witnesses).unwrap_or(16);
            let e = enumerate_reps(&s, &t, limit)?;
            let mut r = Report::new(&["index", "representation"]);
            for (i, rep) in e.reps.iter().enumerate() {
                r.row(vec![(i + 1).to_string().into(), rep.to_string().into()]);
            }
            r.note("truncated", e.truncated);
            r
        }
        Command::Scan { source, depth, target } => {
            let s = load(source)?;
            let extra: Vec<Rat> = target.iter().map(|t| rat_arg(t)).collect::<Result<_>>()?;
            let rep = range_scan(&s, *depth, &opts, &extra)?;
            let mut r = Report::new(&["target", "cardinality"]);
            for e in &rep.entries {
                let cell = match (e.cardinality, &e.error) {
                    (Some(c), _) => c.into(),
                    (None, _) => "undecided".into(),
                };
                r.row(vec![fmt_rat(&e.target).into(), cell]);
            }
            r.note("depth", rep.depth);
            r.note("cardinality_set", card_set(&rep.range(), g.format));
            r.note("states", rep.states());
            r.note("budget_limited", rep.budget_limited());
            if rep.budget_limited() {
                code = EXIT_PARTIAL;
            }
            r
        }
        Command::Gaps { source, depth, cover: as_cover } => {
            let s = load(source)?;
            if *as_cover {
                let mut r = Report::new(&["lo", "hi"]);
                for (lo, hi) in cover(&s, *depth)? {
                    r.row(vec![fmt_rat(&lo).into(), fmt_rat(&hi).into()]);
                }
                r
            } else {
                let gr = gaps(&s, *depth)?;
                let mut r = Report::new(&["lo", "hi", "certified"]);
                for gap in &gr.gaps {
                    r.row(vec![fmt_rat(&gap.lo).into(), fmt_rat(&gap.hi).into(), gap.certified.to_string().into()]);
                }
                r.note("leftmost_longest", opt(gr.leftmost_longest.map(|i| i + 1)));
                r.note("matches_index", opt(gr.matches_index));
                r
            }
        }
        Command::Expand { source, target, horizon, after } => {
            let s = load(source)?;
            let t = rat_arg(target)?;
            let e = match after {
                Some(n) => greedy_segments_with(&s, &t, *n, *horizon)?,
                None => quasiregular_expand(&s, &t, *horizon)?,
            };
            let digits: String = e.digits.iter().map(|&d| if d { '1' } else { '0' }).collect();
            let mut r = Report::new(&["field", "value"]);
            r.row(vec!["first".into(), e.first.to_string().into()]);
            r.row(vec!["digits".into(), digits.into()]);
            let segs: Vec<String> = e.segments().iter().map(|(a, b)| format!("{a}-{b}")).collect();
            r.row(vec!["segments".into(), segs.join(" ").into()]);
            r.row(vec!["closure".into(), e.closure.map_or("-".to_string(), |c| c.to_string()).into()]);
            r.row(vec!["residual".into(), fmt_rat(&e.residual).into()]);
            r
        }
        Command::Construct { source, op, m, atoms } => {
            let s = load(source)?;
            let out = match op {
                ConstructOp::Interleave => interleave(&s)?,
                ConstructOp::Double => double_terms(&s)?,
                ConstructOp::AddTotal => add_total(&s)?,
                ConstructOp::AddTwoTotals => add_two_totals(&s)?,
                ConstructOp::AddMTotals => add_m_totals(&s, *m)?,
                ConstructOp::AddMDoubleTotals => add_m_double_totals(&s, *m)?,
                ConstructOp::Product => {
                    let a = atoms.as_deref().ok_or_else(|| anyhow!("product needs --atoms"))?;
                    let tau = FiniteMeasure::new(a.split(',').map(rat_arg).collect::<Result<_>>()?)?;
                    product(&tau, &s)?
                }
            };
            return finish(g, render_spec(&out), EXIT_OK);
        }
        Command::FiniteRange { atoms } => {
            let tau = FiniteMeasure::new(atoms.split(',').map(rat_arg).collect::<Result<_>>()?)?;
            let fr = finite_range(&tau)?;
            let mut r = Report::new(&["value", "count"]);
            for (v, c) in &fr.counts {
                r.row(vec![fmt_rat(v).into(), Cardinality::Fin(*c).into()]);
            }
            let set: Vec<Cardinality> = fr.range.iter().map(|&k| Cardinality::Fin(k)).collect();
            r.note("range", card_set(&set, g.format));
            r
        }
        Command::SearchRange { range, max_atoms, denominators, no_prune } => {
            let target: BTreeSet<u64> = list::<u64>(range)?.into_iter().collect();
            let found = if *no_prune {
                search_finite_ranges_with(&target, *max_atoms, *denominators, false)
            } else {
                search_finite_ranges(&target, *max_atoms, *denominators)
            };
            let mut r = Report::new(&["measure"]);
            for m in &found {
                r.row(vec![m.to_string().into()]);
            }
            r.note("matches", found.len());
            r
        }
        Command::Presets => {
            let mut r = Report::new(&["preset", "tail", "prefix"]);
            for n in PRESET_NAMES {
                let s = n.parse::<PresetName>().ok().and_then(|p| preset(&p).ok());
                let (kind, len) = s.map_or(("-", "-".to_string()), |s| (s.tail.kind(), s.prefix.len().to_string()));
                r.row(vec![(*n).into(), kind.into(), len.into()]);
            }
            r
        }
    };
    finish(g, report.render(g.format), code)
}

fn finish(g: &Global, text: String, code: i32) -> Result<Outcome> {
    match &g.out {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            Ok(Outcome { stdout: String::new(), stderr: String::new(), code })
        }
        None => Ok(Outcome { stdout: text, stderr: String::new(), code }),
    }
}

/// Parses and runs `args` (program name first). Errors become exit code 1.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: EXIT_USAGE }
            } else {
                Outcome { stdout: text, stderr: String::new(), code: EXIT_OK }
            };
        }
    };
    let result = Config::load().and_then(|cfg| execute(&cli, &cfg));
    result.unwrap_or_else(|e| Outcome { stdout: String::new(), stderr: format!("error: {e:#}\n"), code: EXIT_USAGE })
}
