//! Command-line front end.
//!
//! Every option can also be given in a TOML file passed with `--config`;
//! keys are the long flag names (`seed-graph = "k3"`, `p = 0.5`, ...).
//! Flags win over file values. One file may hold keys for several
//! commands, keys a command does not use are ignored.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::{Deserialize, Serialize};

use crate::ensemble::{compare, run_ensemble, Observable, DEFAULT_Z_THRESHOLD};
use crate::error::{Error, Result};
use crate::exact::{
    self, degree_law, expected_clique_second_moment, expected_cliques, expected_cliques_asymptote,
    expected_degree_profile, expected_stars, isolated_limit, transitivity_scaling, x_moment,
    CriticalValues, LawParams,
};
use crate::graph::{build_seed, geometric_checkpoints, Graph, ModelParams, SeedSource, SeedSpec};
use crate::observables::DEFAULT_K_MAX;
use crate::output::{Cell, Format, Table};
use crate::pdmp::{duality_check, simulate_path};
use crate::rng::{replicate_rng, Purpose};
use crate::stats::{fold_replicates, StreamingStat};

/// Exit status for runs whose statistical checks all passed.
pub const EXIT_OK: i32 = 0;
/// Exit status when a statistical comparison failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status for usage and configuration errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "pdgraph",
    version,
    about = "Partial duplication random graphs: simulation and exact laws"
)]
pub struct Cli {
    /// TOML file with default option values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads for replicate loops (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[arg(long, value_enum, global = true)]
    pub format: Option<OutputFormat>,

    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Grow replicate graphs and compare observable means with exact expectations.
    Simulate(SimulateArgs),
    /// Evaluate exact expectations.
    Expect(ExpectArgs),
    /// Exact law of the degree of an initial vertex.
    DegreeLaw(DegreeLawArgs),
    /// Simulate the dual process X.
    Pdmp(PdmpArgs),
    /// Monte Carlo check of the graph/X duality.
    Duality(DualityArgs),
    /// Critical edge-retention probabilities.
    Critical(CriticalArgs),
}

/// Fills `None` fields of `self` from `file`.
trait Merge {
    fn merge(self, file: Self) -> Self;
}

macro_rules! merge_fields {
    ($ty:ty { $($field:ident),* $(,)? }) => {
        impl Merge for $ty {
            fn merge(self, file: Self) -> Self {
                Self { $($field: self.$field.or(file.$field),)* }
            }
        }
    };
}

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct SimulateArgs {
    /// Built-in seed (k3, cycle(4), path(2), star(5), ...) or edge-list file.
    #[arg(long)]
    pub seed_graph: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Final graph size.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub master_seed: Option<u64>,
    /// Comma-separated sizes; default is a doubling grid ending at n.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Option<Vec<usize>>,
    /// Comma-separated observables: c3, c3sq, m3, s2, f0, iso, d0, ds0, tr.
    #[arg(long, value_delimiter = ',')]
    pub track: Option<Vec<String>>,
    #[arg(long)]
    pub z_threshold: Option<f64>,
    /// Accept a disconnected seed graph.
    #[arg(long)]
    pub allow_disconnected: Option<bool>,
}
merge_fields!(SimulateArgs {
    seed_graph,
    p,
    n,
    replicates,
    master_seed,
    checkpoints,
    track,
    z_threshold,
    allow_disconnected
});

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    Cliques,
    SecondMoment,
    Stars,
    DegreeProfile,
    Transitivity,
    Isolated,
}

#[derive(Args, Debug, Clone)]
pub struct ExpectArgs {
    #[arg(value_enum)]
    pub law: Law,
    #[command(flatten)]
    pub opts: ExpectOpts,
}

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct ExpectOpts {
    #[arg(long)]
    pub seed_graph: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    /// One or more comma-separated sizes.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Clique size or star order.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub allow_disconnected: Option<bool>,
}
merge_fields!(ExpectOpts {
    seed_graph,
    p,
    n,
    k,
    allow_disconnected
});

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct DegreeLawArgs {
    #[arg(long)]
    pub n0: Option<usize>,
    /// Degree of the tracked vertex at size n0.
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
}
merge_fields!(DegreeLawArgs { n0, a, p, n });

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct PdmpArgs {
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub x0: Option<f64>,
    /// Time horizon.
    #[arg(long)]
    pub t: Option<f64>,
    /// Start of the time-averaging window.
    #[arg(long)]
    pub burn_in: Option<f64>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub master_seed: Option<u64>,
    /// Also write one (replicate, X_T) row per replicate to this file.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}
merge_fields!(PdmpArgs {
    p,
    x0,
    t,
    burn_in,
    replicates,
    master_seed,
    dump
});

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct DualityArgs {
    #[arg(long)]
    pub seed_graph: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub master_seed: Option<u64>,
    #[arg(long)]
    pub z_threshold: Option<f64>,
    #[arg(long)]
    pub allow_disconnected: Option<bool>,
}
merge_fields!(DualityArgs {
    seed_graph,
    p,
    x,
    t,
    replicates,
    master_seed,
    z_threshold,
    allow_disconnected
});

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct CriticalArgs {
    /// Largest clique size / star order to report.
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Also solve for the degree power-law exponent at these p (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
}
merge_fields!(CriticalArgs { k_max, p });

#[derive(Debug, Default, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
struct GlobalFile {
    workers: Option<usize>,
    format: Option<OutputFormat>,
    output: Option<PathBuf>,
}

fn missing(name: &str) -> Error {
    Error::InvalidParameter(format!("missing required option --{name}"))
}

fn require<T>(value: Option<T>, name: &str) -> Result<T> {
    value.ok_or_else(|| missing(name))
}

fn read_config(path: Option<&Path>) -> Result<Option<toml::Table>> {
    let Some(path) = path else { return Ok(None) };
    let text = std::fs::read_to_string(path)?;
    text.parse::<toml::Table>()
        .map(Some)
        .map_err(|e| Error::InvalidParameter(format!("config file {}: {e}", path.display())))
}

fn from_config<T: for<'de> Deserialize<'de> + Default>(table: &Option<toml::Table>) -> Result<T> {
    match table {
        None => Ok(T::default()),
        Some(t) => t
            .clone()
            .try_into()
            .map_err(|e| Error::InvalidParameter(format!("config file: {e}"))),
    }
}

fn seed_graph(name: &str, allow_disconnected: bool) -> Result<(SeedSpec, Graph)> {
    let spec = name.parse::<SeedSource>()?.resolve()?;
    let g = build_seed(&spec, allow_disconnected)?;
    Ok((spec, g))
}

/// What a command produced: a table and whether its checks passed.
pub struct Outcome {
    pub table: Table,
    pub passed: bool,
}

fn log_config<T: Serialize>(command: &str, cfg: &T) {
    match serde_json::to_string(cfg) {
        Ok(json) => info!("{command} resolved config: {json}"),
        Err(e) => info!("{command} config could not be serialised: {e}"),
    }
}

pub fn run_simulate(args: SimulateArgs) -> Result<Outcome> {
    let seed_name = require(args.seed_graph.clone(), "seed-graph")?;
    let p = require(args.p, "p")?;
    let (spec, g) = seed_graph(&seed_name, args.allow_disconnected.unwrap_or(false))?;
    let n = require(args.n, "n")?;
    let mut params = ModelParams::new(p, spec, n);
    params.allow_disconnected = args.allow_disconnected.unwrap_or(false);
    params.replicate_count = args.replicates.unwrap_or(1000);
    params.master_seed = args.master_seed.unwrap_or(0);
    params.checkpoints = args
        .checkpoints
        .clone()
        .unwrap_or_else(|| geometric_checkpoints(g.vertex_count(), n));
    let track = args.track.clone().unwrap_or_else(|| vec!["c2".into()]);
    let observables = track
        .iter()
        .map(|s| s.parse())
        .collect::<Result<Vec<Observable>>>()?;
    let z = args.z_threshold.unwrap_or(DEFAULT_Z_THRESHOLD);
    log_config(
        "simulate",
        &SimulateArgs {
            checkpoints: Some(params.checkpoints.clone()),
            track: Some(track),
            replicates: Some(params.replicate_count),
            master_seed: Some(params.master_seed),
            z_threshold: Some(z),
            ..args
        },
    );
    let summary = run_ensemble(&params, &observables)?;
    let mut law = LawParams::from_graph(&g, p)?;
    for obs in &observables {
        if let Observable::CliquesSquared(k) = *obs {
            if law.pair_profile(k).is_err() {
                law.record_pair_profile(&g, k)?;
            }
        }
    }
    let suite = compare(&summary, &law, z)?;
    info!("{}", suite.note);
    let mut table = Table::new(&[
        "observable",
        "k",
        "n",
        "count",
        "mean",
        "se",
        "oracle",
        "z",
        "pass",
    ]);
    for r in &suite.rows {
        table.push(vec![
            r.observable.clone().into(),
            r.k.into(),
            r.n.into(),
            r.count.into(),
            r.mean.into(),
            r.se.into(),
            r.oracle.into(),
            r.z.into(),
            r.pass.as_str().into(),
        ]);
    }
    Ok(Outcome {
        table,
        passed: !suite.any_failure(),
    })
}

pub fn run_expect(law_kind: Law, args: ExpectOpts) -> Result<Outcome> {
    let seed_name = require(args.seed_graph.clone(), "seed-graph")?;
    let p = require(args.p, "p")?;
    let sizes = require(args.n.clone(), "n")?;
    let (_, g) = seed_graph(&seed_name, args.allow_disconnected.unwrap_or(false))?;
    log_config("expect", &args);
    let mut law = LawParams::from_graph(&g, p)?;
    let mut table = Table::new(&["law", "k", "n", "p", "value", "asymptote", "variance"]);
    let name = match law_kind {
        Law::Cliques => "cliques",
        Law::SecondMoment => "second-moment",
        Law::Stars => "stars",
        Law::DegreeProfile => "degree-profile",
        Law::Transitivity => "transitivity",
        Law::Isolated => "isolated",
    };
    for &n in &sizes {
        let mut row = |k: Option<usize>, value: f64, asym: Option<f64>, var: Option<f64>| {
            table.push(vec![
                name.into(),
                k.into(),
                n.into(),
                p.into(),
                value.into(),
                asym.into(),
                var.into(),
            ]);
        };
        match law_kind {
            Law::Cliques | Law::SecondMoment => {
                let k = args.k.unwrap_or(3);
                if law.pair_profile(k).is_err() {
                    law.record_pair_profile(&g, k)?;
                }
                let m = expected_clique_second_moment(&law, k, n)?;
                if law_kind == Law::Cliques {
                    let mean = expected_cliques(&law, k, n)?;
                    row(
                        Some(k),
                        mean,
                        Some(expected_cliques_asymptote(&law, k, n)?),
                        Some(m.variance),
                    );
                } else {
                    row(Some(k), m.second_moment, None, Some(m.variance));
                }
            }
            Law::Stars => {
                let k = args.k.unwrap_or(2);
                row(Some(k), expected_stars(&law, k, n)?, None, None);
            }
            Law::DegreeProfile => {
                for (k, v) in expected_degree_profile(&law, n)?.into_iter().enumerate() {
                    row(Some(k), v, None, None);
                }
            }
            Law::Transitivity => {
                let t = transitivity_scaling(&law, n)?;
                row(
                    None,
                    t.ratio,
                    Some(t.constant * (n as f64).powf(-t.exponent)),
                    None,
                );
            }
            Law::Isolated => {
                let profile = expected_degree_profile(&law, n)?;
                let limit = isolated_limit(&law)?;
                row(None, profile[0] / n as f64, Some(limit.value), None);
            }
        }
    }
    Ok(Outcome {
        table,
        passed: true,
    })
}

pub fn run_degree_law(args: DegreeLawArgs) -> Result<Outcome> {
    let n0 = require(args.n0, "n0")?;
    let a = require(args.a, "a")?;
    let p = require(args.p, "p")?;
    let n = require(args.n, "n")?;
    log_config("degree-law", &args);
    let d = degree_law(n0, a, p, n)?;
    let mut table = Table::new(&["l", "pmf", "cdf"]);
    for (l, (q, c)) in d.support().zip(d.pmf.iter().zip(&d.cdf)) {
        table.push(vec![l.into(), (*q).into(), (*c).into()]);
    }
    Ok(Outcome {
        table,
        passed: true,
    })
}

pub fn run_pdmp(args: PdmpArgs) -> Result<Outcome> {
    let p = require(args.p, "p")?;
    let t = require(args.t, "t")?;
    let x0 = args.x0.unwrap_or(0.5);
    let burn_in = args.burn_in.unwrap_or(0.0);
    let replicates = args.replicates.unwrap_or(1000) as u64;
    let master_seed = args.master_seed.unwrap_or(0);
    log_config(
        "pdmp",
        &PdmpArgs {
            x0: Some(x0),
            burn_in: Some(burn_in),
            replicates: Some(replicates as usize),
            master_seed: Some(master_seed),
            ..args.clone()
        },
    );
    // validate once up front so the replicate loop cannot fail
    simulate_path(
        x0,
        p,
        0.0,
        0.0,
        &mut replicate_rng(master_seed, Purpose::Scratch, 0),
    )?;
    let dumping = args.dump.is_some();
    let (finals, averages, jumps, dump) = fold_replicates(
        replicates,
        || {
            (
                StreamingStat::new(),
                StreamingStat::new(),
                StreamingStat::new(),
                Vec::new(),
            )
        },
        |acc, r| {
            let mut rng = replicate_rng(master_seed, Purpose::Pdmp, r);
            let path = simulate_path(x0, p, t, burn_in, &mut rng).expect("inputs validated");
            acc.0.push(path.x_final);
            if let Some(avg) = path.time_average {
                acc.1.push(avg);
            }
            acc.2.push(path.jumps as f64);
            if dumping {
                acc.3.push((r, path.x_final));
            }
        },
        |total, part| {
            total.0.merge(&part.0);
            total.1.merge(&part.1);
            total.2.merge(&part.2);
            total.3.extend(part.3);
        },
    );
    if let Some(path) = &args.dump {
        let mut dump_table = Table::new(&["replicate", "x_t"]);
        for (r, x) in dump {
            dump_table.push(vec![r.into(), x.into()]);
        }
        dump_table.write_csv(BufWriter::new(File::create(path)?))?;
    }
    if let Ok(m) = x_moment(p, 1) {
        info!("stationary mean E[X_inf] = {m}");
    } else {
        info!("p <= p*: X_t tends to 0");
    }
    let mut table = Table::new(&["side", "mean", "se", "n"]);
    for (name, s) in [
        ("x_final", finals),
        ("time_average", averages),
        ("jumps", jumps),
    ] {
        if s.count > 0 {
            table.push(vec![
                name.into(),
                s.mean.into(),
                s.se().into(),
                s.count.into(),
            ]);
        }
    }
    Ok(Outcome {
        table,
        passed: true,
    })
}

pub fn run_duality(args: DualityArgs) -> Result<Outcome> {
    let seed_name = require(args.seed_graph.clone(), "seed-graph")?;
    let p = require(args.p, "p")?;
    let x = require(args.x, "x")?;
    let t = args.t.unwrap_or(2.0);
    let replicates = args.replicates.unwrap_or(50_000);
    let master_seed = args.master_seed.unwrap_or(0);
    let z_threshold = args.z_threshold.unwrap_or(DEFAULT_Z_THRESHOLD);
    let (_, g) = seed_graph(&seed_name, args.allow_disconnected.unwrap_or(false))?;
    log_config(
        "duality",
        &DualityArgs {
            t: Some(t),
            replicates: Some(replicates),
            master_seed: Some(master_seed),
            z_threshold: Some(z_threshold),
            ..args.clone()
        },
    );
    let d = duality_check(&g, x, p, t, replicates as u64, master_seed)?;
    let z = d.z();
    info!("duality z = {z}");
    let mut table = Table::new(&["side", "mean", "se", "n", "z"]);
    table.push(vec![
        "lhs".into(),
        d.lhs.mean.into(),
        d.lhs.se().into(),
        d.lhs.count.into(),
        Cell::Empty,
    ]);
    table.push(vec![
        "rhs".into(),
        d.rhs.mean.into(),
        d.rhs.se().into(),
        d.rhs.count.into(),
        Cell::Empty,
    ]);
    table.push(vec![
        "difference".into(),
        (d.lhs.mean - d.rhs.mean).into(),
        d.combined_se().into(),
        d.lhs.count.into(),
        z.into(),
    ]);
    Ok(Outcome {
        table,
        passed: z.abs() <= z_threshold,
    })
}

pub fn run_critical(args: CriticalArgs) -> Result<Outcome> {
    let k_max = args.k_max.unwrap_or(DEFAULT_K_MAX).max(2);
    log_config("critical", &args);
    let c = CriticalValues::compute(k_max);
    let mut table = Table::new(&["quantity", "k", "p", "value"]);
    table.push(vec![
        "p_star".into(),
        Cell::Empty,
        Cell::Empty,
        c.p_star.into(),
    ]);
    for (k, v) in &c.star {
        table.push(vec![
            "star_critical".into(),
            (*k).into(),
            Cell::Empty,
            (*v).into(),
        ]);
    }
    for (k, v) in &c.clique {
        table.push(vec![
            "clique_critical".into(),
            (*k).into(),
            Cell::Empty,
            (*v).into(),
        ]);
    }
    for &p in args.p.as_deref().unwrap_or(&[]) {
        let b = exact::chung_exponent(p);
        table.push(vec![
            "chung_exponent".into(),
            Cell::Empty,
            p.into(),
            b.into(),
        ]);
    }
    Ok(Outcome {
        table,
        passed: true,
    })
}

fn dispatch(cli: Cli) -> Result<i32> {
    let file = read_config(cli.config.as_deref())?;
    let global: GlobalFile = from_config(&file)?;
    let workers = cli.workers.or(global.workers);
    if let Some(w) = workers {
        // the pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build_global();
    }
    let format = match cli.format.or(global.format) {
        Some(OutputFormat::Json) => Format::Json,
        _ => Format::Csv,
    };
    let output = cli.output.or(global.output);
    let outcome = match cli.command {
        Command::Simulate(a) => run_simulate(a.merge(from_config(&file)?))?,
        Command::Expect(a) => run_expect(a.law, a.opts.merge(from_config(&file)?))?,
        Command::DegreeLaw(a) => run_degree_law(a.merge(from_config(&file)?))?,
        Command::Pdmp(a) => run_pdmp(a.merge(from_config(&file)?))?,
        Command::Duality(a) => run_duality(a.merge(from_config(&file)?))?,
        Command::Critical(a) => run_critical(a.merge(from_config(&file)?))?,
    };
    match output {
        Some(path) => outcome
            .table
            .write(format, BufWriter::new(File::create(path)?))?,
        None => outcome.table.write(format, io::stdout().lock())?,
    }
    io::stdout().flush()?;
    Ok(if outcome.passed {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
