//! Command-line front end. Every flag can also come from a `key=value`
//! config file given with `--config`; flags on the command line win.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{bandwidth_scan, compare_1d_2d};
use crate::bloch::{band_spectrum, butterfly};
use crate::check::{run_checks, CheckConfig, Fault};
use crate::error::{Error, Result};
use crate::flux::{golden_convergents, ConvergentSequence, Flux};
use crate::format::{fmt_g12, round12};
use crate::gauge::GaugeField;
use crate::restriction::restricted_walk;
use crate::spectral::{
    dos_measure, sdf_moments, unitary_eigenphases, DosReport, FluxRecord, MomentReport, CLUSTER_TOL,
};
use crate::walk::DENSE_CAP;

/// Exit status of a failed invariant check.
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "magwalk", version, about = "Magnetic quantum walks: bands, DOS, moments and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Band arcs of every reduced p/q up to --qmax (CSV by default).
    Butterfly,
    /// Band arcs of one flux.
    Bands,
    /// Eigenphases, histogram and moments of the finite-volume walk.
    Dos,
    /// Exact trace moments of the infinite walk.
    Moments,
    /// Hausdorff distance between 2D bands and the union of 1D spectra.
    Compare,
    /// Spectral measure along golden-mean convergents.
    Scan,
    /// Run the invariant suite.
    Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GaugeChoice {
    Symmetric,
    Landau,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FaultFlag {
    SkipDecouplingCoin,
}

#[derive(Clone, Debug, Default, Args)]
struct Flags {
    /// P/Q, or golden:N for the N-th golden-mean convergent (golden:1 = 1/2).
    #[arg(long, global = true)]
    flux: Option<String>,
    /// Half-width of the finite box.
    #[arg(long = "L", global = true)]
    l: Option<usize>,
    #[arg(long, global = true)]
    qmax: Option<i64>,
    /// Points per momentum direction.
    #[arg(long, global = true)]
    kgrid: Option<usize>,
    #[arg(long = "theta-grid", global = true)]
    theta_grid: Option<usize>,
    #[arg(long, global = true)]
    tmax: Option<usize>,
    #[arg(long, global = true, value_enum)]
    gauge: Option<GaugeChoice>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Histogram bins for `dos`.
    #[arg(long, global = true)]
    bins: Option<usize>,
    /// Number of golden-mean convergents for `scan` and `compare`.
    #[arg(long, global = true)]
    convergents: Option<usize>,
    /// Single-linkage radius for eigenphase multiplicities.
    #[arg(long = "cluster-tol", global = true)]
    cluster_tol: Option<f64>,
    /// File of key=value lines with the same names as the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long = "inject-fault", global = true, value_enum, hide = true)]
    inject_fault: Option<FaultFlag>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FluxSpec {
    Ratio(Flux),
    Golden(usize),
}

impl FluxSpec {
    pub fn resolve(&self) -> Flux {
        match self {
            FluxSpec::Ratio(f) => *f,
            FluxSpec::Golden(n) => golden_convergents(*n).convergents[n - 1],
        }
    }
}

impl FromStr for FluxSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().strip_prefix("golden:") {
            Some(n) => match n.parse::<usize>() {
                Ok(n) if (1..=60).contains(&n) => Ok(FluxSpec::Golden(n)),
                _ => Err(Error::InvalidArgument(format!("convergent index must be in 1..=60, got {n:?}"))),
            },
            None => Ok(FluxSpec::Ratio(s.parse()?)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub flux: Option<FluxSpec>,
    pub l: usize,
    pub q_max: i64,
    pub n_k: usize,
    pub theta_grid: usize,
    pub t_max: usize,
    pub gauge: GaugeChoice,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub bins: usize,
    pub convergents: Option<usize>,
    pub cluster_tol: f64,
    pub inject_fault: Option<Fault>,
}

impl RunConfig {
    fn defaults(command: Command) -> Self {
        RunConfig {
            command,
            flux: None,
            l: 6,
            q_max: 8,
            n_k: 32,
            theta_grid: 32,
            t_max: 6,
            gauge: GaugeChoice::Symmetric,
            format: None,
            out: None,
            jobs: None,
            bins: 32,
            convergents: None,
            cluster_tol: CLUSTER_TOL,
            inject_fault: None,
        }
    }

    pub fn flux(&self) -> Flux {
        self.flux.as_ref().map_or(Flux::new(5, 8).expect("reduced"), FluxSpec::resolve)
    }

    fn validate(&self) -> Result<()> {
        let positive = [
            ("L", self.l),
            ("kgrid", self.n_k),
            ("theta-grid", self.theta_grid),
            ("bins", self.bins),
            ("jobs", self.jobs.unwrap_or(1)),
            ("convergents", self.convergents.unwrap_or(1)),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidArgument(format!("--{name} must be positive")));
        }
        if self.q_max < 1 {
            return Err(Error::InvalidArgument("--qmax must be positive".into()));
        }
        if self.cluster_tol.is_nan() || self.cluster_tol <= 0.0 {
            return Err(Error::InvalidArgument("--cluster-tol must be positive".into()));
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
        }
        fn choice<T: ValueEnum>(key: &str, v: &str) -> Result<T> {
            T::from_str(v, true).map_err(|_| Error::Config(format!("{key}: unknown value {v:?}")))
        }
        match key {
            "flux" => self.flux = Some(value.parse()?),
            "L" => self.l = num(key, value)?,
            "qmax" => self.q_max = num(key, value)?,
            "kgrid" => self.n_k = num(key, value)?,
            "theta-grid" => self.theta_grid = num(key, value)?,
            "tmax" => self.t_max = num(key, value)?,
            "gauge" => self.gauge = choice(key, value)?,
            "format" => self.format = Some(choice(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "jobs" => self.jobs = Some(num(key, value)?),
            "bins" => self.bins = num(key, value)?,
            "convergents" => self.convergents = Some(num(key, value)?),
            "cluster-tol" => self.cluster_tol = num(key, value)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    fn apply_flags(&mut self, f: Flags) -> Result<()> {
        if let Some(v) = f.flux {
            self.flux = Some(v.parse()?);
        }
        self.l = f.l.unwrap_or(self.l);
        self.q_max = f.qmax.unwrap_or(self.q_max);
        self.n_k = f.kgrid.unwrap_or(self.n_k);
        self.theta_grid = f.theta_grid.unwrap_or(self.theta_grid);
        self.t_max = f.tmax.unwrap_or(self.t_max);
        self.gauge = f.gauge.unwrap_or(self.gauge);
        self.format = f.format.or(self.format);
        self.out = f.out.or(self.out.take());
        self.jobs = f.jobs.or(self.jobs);
        self.bins = f.bins.unwrap_or(self.bins);
        self.convergents = f.convergents.or(self.convergents);
        self.cluster_tol = f.cluster_tol.unwrap_or(self.cluster_tol);
        if let Some(FaultFlag::SkipDecouplingCoin) = f.inject_fault {
            self.inject_fault = Some(Fault::SkipDecouplingCoin);
        }
        Ok(())
    }
}

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value", n + 1)))?;
        out.insert(k.trim().trim_start_matches("--").to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Parses arguments into a [`RunConfig`], reading `--config` if given.
/// Help and version requests come back as `Ok(Err(text))`.
pub fn parse_args<I, T>(args: I) -> Result<std::result::Result<RunConfig, String>>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(Err(e.to_string())),
                _ => Err(Error::InvalidArgument(e.to_string())),
            };
        }
    };
    let mut cfg = RunConfig::defaults(cli.command);
    if let Some(path) = &cli.flags.config {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        for (k, v) in parse_config(&text)? {
            cfg.set(&k, &v)?;
        }
    }
    cfg.apply_flags(cli.flags)?;
    cfg.validate()?;
    Ok(Ok(cfg))
}

/// What a run produced, before it is written out.
pub struct Outcome {
    pub body: String,
    pub exit_code: i32,
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cfg))
}

fn gauge_field(cfg: &RunConfig) -> GaugeField {
    match cfg.gauge {
        GaugeChoice::Symmetric => GaugeField::symmetric(cfg.flux()),
        GaugeChoice::Landau => GaugeField::landau(cfg.flux()),
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn ok(body: String) -> Result<Outcome> {
    Ok(Outcome { body, exit_code: 0 })
}

fn sequence(cfg: &RunConfig, default: usize) -> ConvergentSequence {
    golden_convergents(cfg.convergents.unwrap_or(default))
}

#[derive(Serialize)]
struct BandsJson {
    flux: FluxRecord,
    n_k: usize,
    branches: usize,
    measure: f64,
    modulus_deviation: f64,
    arcs: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct CompareRow {
    flux: FluxRecord,
    distance: f64,
    grid_tolerance: f64,
}

#[derive(Serialize)]
struct ScanRow {
    flux: FluxRecord,
    measure: f64,
    arcs: usize,
}

fn dispatch(cfg: &RunConfig) -> Result<Outcome> {
    let format = cfg.format;
    match cfg.command {
        Command::Butterfly => {
            let b = butterfly(cfg.q_max, cfg.n_k)?;
            if format == Some(Format::Json) {
                return ok(json(&b.rows)?);
            }
            let mut buf = Vec::new();
            b.write_csv(&mut buf)?;
            ok(String::from_utf8(buf).expect("ascii output"))
        }
        Command::Bands => {
            let f = cfg.flux();
            let b = band_spectrum(f, cfg.n_k)?;
            let arcs: Vec<[f64; 2]> = b.arcs.arcs().iter().map(|a| [round12(a.start), round12(a.end())]).collect();
            if format == Some(Format::Json) {
                return ok(json(&BandsJson {
                    flux: f.into(),
                    n_k: cfg.n_k,
                    branches: b.branch_count(),
                    measure: round12(b.arcs.lebesgue_measure()),
                    modulus_deviation: b.modulus_deviation,
                    arcs,
                })?);
            }
            let mut s = String::from("p,q,phi,arc_start,arc_end\n");
            for [a, e] in arcs {
                s += &format!(
                    "{},{},{},{},{}\n",
                    f.numerator(),
                    f.denominator(),
                    fmt_g12(f.value()),
                    fmt_g12(a),
                    fmt_g12(e)
                );
            }
            ok(s)
        }
        Command::Dos => {
            let f = cfg.flux();
            let w = restricted_walk(&gauge_field(cfg), cfg.l)?;
            let phases = unitary_eigenphases(&w, DENSE_CAP)?;
            let measure = dos_measure(&phases, cfg.l)?;
            let report = DosReport::new(f, cfg.l, &measure, cfg.t_max, cfg.bins);
            if format == Some(Format::Csv) {
                let mut s = String::from("eigenphase\n");
                for p in &report.eigenphases {
                    s += &format!("{}\n", fmt_g12(*p));
                }
                return ok(s);
            }
            ok(json(&report)?)
        }
        Command::Moments => {
            let f = cfg.flux();
            let report = MomentReport { flux: f.into(), moments: sdf_moments(f, cfg.t_max).entries() };
            if format == Some(Format::Csv) {
                let mut s = String::from("t,re,im\n");
                for m in &report.moments {
                    s += &format!("{},{},{}\n", m.t, fmt_g12(m.re), fmt_g12(m.im));
                }
                return ok(s);
            }
            ok(json(&report)?)
        }
        Command::Compare => {
            let fluxes: Vec<Flux> = match &cfg.flux {
                Some(spec) => vec![spec.resolve()],
                None => sequence(cfg, 5).convergents,
            };
            let rows = fluxes
                .iter()
                .map(|&f| {
                    let c = compare_1d_2d(f, cfg.theta_grid, cfg.n_k)?;
                    Ok(CompareRow { flux: f.into(), distance: c.distance, grid_tolerance: round12(c.grid_tolerance) })
                })
                .collect::<Result<Vec<_>>>()?;
            if format == Some(Format::Json) {
                return ok(json(&rows)?);
            }
            let mut s = String::from("p,q,distance,grid_tolerance\n");
            for r in rows {
                s += &format!("{},{},{},{}\n", r.flux.p, r.flux.q, fmt_g12(r.distance), fmt_g12(r.grid_tolerance));
            }
            ok(s)
        }
        Command::Scan => {
            let rows: Vec<ScanRow> = bandwidth_scan(&sequence(cfg, 6), cfg.n_k)?
                .into_iter()
                .map(|e| ScanRow { flux: e.flux.into(), measure: round12(e.measure), arcs: e.arcs })
                .collect();
            if format == Some(Format::Json) {
                return ok(json(&rows)?);
            }
            let mut s = String::from("p,q,measure,arcs\n");
            for r in rows {
                s += &format!("{},{},{},{}\n", r.flux.p, r.flux.q, fmt_g12(r.measure), r.arcs);
            }
            ok(s)
        }
        Command::Check => {
            let defaults = CheckConfig::default();
            let check = CheckConfig {
                flux: cfg.flux.as_ref().map_or(defaults.flux, FluxSpec::resolve),
                l: cfg.l,
                q_max: cfg.q_max,
                n_k: cfg.n_k,
                t_max: cfg.t_max.min(6),
                cluster_tol: cfg.cluster_tol,
                fault: cfg.inject_fault,
                ..defaults
            };
            let report = run_checks(&check)?;
            let exit_code = if report.all_pass() { 0 } else { EXIT_CHECK_FAILED };
            let body = if format == Some(Format::Json) { json(&report)? } else { report.lines().join("\n") + "\n" };
            Ok(Outcome { body, exit_code })
        }
    }
}

fn emit(body: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, body)?,
        None => io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

/// Runs the program and returns its exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse_args(args) {
        Ok(Ok(cfg)) => cfg,
        Ok(Err(text)) => {
            print!("{text}");
            return 0;
        }
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    let result = execute(&cfg).and_then(|o| emit(&o.body, cfg.out.as_deref()).map(|_| o.exit_code));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
