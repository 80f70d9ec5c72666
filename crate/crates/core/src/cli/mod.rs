//! Command-line front end. [`run`] parses arguments, merges an optional
//! key-value config file under the flags, dispatches, and returns the exit code.

pub mod small_n;

use crate::cases::{
    build_p13, case1_verdict, case2_nested, case3_analysis, coordinates_text, solve_delta13, CaseVerdict,
    Conclusion, Evidence, D_WINDOW,
};
use crate::graphs::{
    candidate_filter, fig8_fixtures, gamma13_fixtures, write_planar_code, FilterRules, GraphError, PlanarCodeReader,
    PlanarEmbeddedGraph,
};
use crate::prune::{read_resume, run_pipeline, PipelineOptions, PipelineReport, PruneConfig};
use crate::relax::Level1Profile;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use small_n::{verify_small_n, SmallNConfig, SmallNError, SmallNReport};
use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

const DEG: f64 = std::f64::consts::PI / 180.0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Io(m) => CliError::Usage(m),
            other => CliError::Parse(other.to_string()),
        }
    }
}

fn io_err(what: &str, e: std::io::Error) -> CliError {
    CliError::Usage(format!("{what}: {e}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FixtureSet {
    Gamma,
    Fig8,
    All,
}

#[derive(Debug, Parser)]
#[command(name = "tammes", version, about = "Contact-graph pruning and case analysis for 13 points on the sphere")]
struct Cli {
    /// Flat `key = value` file; keys mirror the long flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply the combinatorial filter to a planar_code stream.
    Filter(Common),
    /// Filter and prune a planar_code stream.
    Prune(Common),
    /// Optimal distance, case verdicts, coordinates and the u18 curve.
    Solve(SolveArgs),
    /// Run the pipeline for a small point count against a direct optimiser.
    VerifySmallN(SmallNArgs),
    /// Write the built-in fixture graphs as planar_code.
    Fixtures(FixtureArgs),
}

#[derive(Debug, Args, Default)]
struct Common {
    /// planar_code file, `-` for standard input.
    #[arg(long)]
    input: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    depth: Option<usize>,
    /// Smallest scaled box width that is still split.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Distance window `lo:hi` in radians.
    #[arg(long = "d-window")]
    d_window: Option<String>,
    /// Partial JSON-lines report whose records are reused.
    #[arg(long)]
    resume: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write P13 coordinates here.
    #[arg(long)]
    coords: Option<PathBuf>,
    /// Write the sampled u18 curve here as CSV.
    #[arg(long)]
    curve: Option<PathBuf>,
    /// Sampling step in `d` for the monotonicity checks.
    #[arg(long)]
    step: Option<f64>,
    /// Only the closed-form optimum and the coordinates.
    #[arg(long)]
    skip_cases: bool,
}

#[derive(Debug, Args)]
struct SmallNArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    input: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Debug, Args)]
struct FixtureArgs {
    #[arg(long, value_enum, default_value = "all")]
    set: FixtureSet,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parses a flat `key = value` (or `key: value`) file. `#` starts a comment;
/// keys are normalised to the kebab-case flag names.
pub fn parse_config(text: &str) -> Result<HashMap<String, String>, CliError> {
    let mut out = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .or_else(|| line.split_once(':').filter(|(k, _)| !k.contains(' ')))
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
        out.insert(k.trim().trim_start_matches("--").replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

fn from_config<T: std::str::FromStr>(cfg: &HashMap<String, String>, key: &str) -> Result<Option<T>, CliError> {
    cfg.get(key)
        .map(|v| v.parse::<T>().map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {v:?}"))))
        .transpose()
}

pub fn parse_window(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("--d-window expects lo:hi, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = a.trim().parse().map_err(|_| bad())?;
    let hi: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && lo < hi && hi < std::f64::consts::PI) {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Settings of a filter or prune run after merging flags over the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub input: Option<String>,
    pub d_window: Option<(f64, f64)>,
    pub tol: Option<f64>,
    pub depth: Option<usize>,
    pub jobs: usize,
    pub format: Format,
    pub resume: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    fn resolve(command: &str, flags: Common, file: &HashMap<String, String>) -> Result<Self, CliError> {
        let format = match flags.format {
            Some(f) => f,
            None => match file.get("format") {
                Some(v) => Format::from_str(v, true).map_err(|_| CliError::Usage(format!("unknown format {v:?}")))?,
                None => Format::Json,
            },
        };
        let window = flags.d_window.or_else(|| file.get("d-window").cloned());
        Ok(Self {
            command: command.into(),
            input: flags.input.or_else(|| file.get("input").cloned()),
            d_window: window.as_deref().map(parse_window).transpose()?,
            tol: flags.tol.or(from_config(file, "tol")?),
            depth: flags.depth.or(from_config(file, "depth")?),
            jobs: flags.jobs.or(from_config(file, "jobs")?).unwrap_or(0),
            format,
            resume: flags.resume.or_else(|| file.get("resume").map(PathBuf::from)),
            output: flags.output.or_else(|| file.get("output").map(PathBuf::from)),
        })
    }

    pub fn filter_rules(&self) -> FilterRules {
        self.d_window.map_or(FilterRules::TAMMES13, |(lo, _)| FilterRules::for_distance(lo))
    }

    pub fn prune_config(&self) -> PruneConfig {
        let mut c = PruneConfig::default();
        if let Some(d) = self.depth {
            c.max_depth = d;
        }
        if let Some(t) = self.tol {
            c.min_width = t;
        }
        if let Some((lo, hi)) = self.d_window {
            c.profile = Level1Profile::for_window(lo, hi);
        }
        c
    }
}

fn open_input(path: Option<&str>) -> Result<Box<dyn Read>, CliError> {
    match path {
        None | Some("-") => Ok(Box::new(std::io::stdin())),
        Some(p) => {
            let f = File::open(p).map_err(|e| io_err(&format!("cannot open {p}"), e))?;
            Ok(Box::new(BufReader::new(f)))
        }
    }
}

fn create(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|e| io_err(&format!("cannot create {}", path.display()), e))
}

/// Counts of a filter-only run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterReport {
    pub parsed: usize,
    pub passed: usize,
    pub failed: usize,
    /// Graphs violating each rule; a graph counts once per rule.
    pub violations: BTreeMap<String, usize>,
}

pub fn cmd_filter<R: Read>(input: R, rules: &FilterRules) -> Result<FilterReport, CliError> {
    let mut rep = FilterReport::default();
    for g in PlanarCodeReader::new(input) {
        let g = g?;
        let r = candidate_filter(&g, rules);
        rep.parsed += 1;
        if r.passed {
            rep.passed += 1;
        } else {
            rep.failed += 1;
        }
        let mut ids: Vec<&str> = r.violations.iter().map(|v| v.rule_id()).collect();
        ids.sort_unstable();
        ids.dedup();
        for id in ids {
            *rep.violations.entry(id.to_string()).or_insert(0) += 1;
        }
    }
    Ok(rep)
}

/// Filter and prune `input`; JSON records are streamed to `sink` as batches finish.
pub fn cmd_prune<R: Read>(input: R, cfg: &RunConfig, sink: impl FnMut(&crate::prune::GraphRecord)) -> Result<PipelineReport, CliError> {
    let resume = match &cfg.resume {
        Some(p) => {
            let f = File::open(p).map_err(|e| io_err(&format!("cannot open {}", p.display()), e))?;
            read_resume(BufReader::new(f)).map_err(|e| io_err("cannot read resume file", e))?
        }
        None => BTreeMap::new(),
    };
    let opts = PipelineOptions { jobs: cfg.jobs, timings: false, resume, batch: 0 };
    Ok(run_pipeline(input, &cfg.filter_rules(), &cfg.prune_config(), &opts, sink)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub delta13_rad: f64,
    pub delta13_deg: f64,
    pub a13_rad: f64,
    pub a13_deg: f64,
    /// Smallest pairwise distance of the built configuration.
    pub p13_min_distance: f64,
    pub verdicts: Vec<CaseVerdict>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub step: f64,
    pub resolutions: [f64; 3],
    pub cases: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { step: 1e-4, resolutions: [1.0 * DEG, 0.5 * DEG, 0.25 * DEG], cases: true }
    }
}

pub fn cmd_solve(opts: &SolveOptions) -> Result<SolveReport, CliError> {
    let (a, d) = solve_delta13();
    if !(a.is_finite() && d.is_finite()) {
        return Err(CliError::Numerical("closed-form optimum did not converge".into()));
    }
    let p = build_p13();
    let (min, _) = crate::cases::min_distance(&p, 1e-9);
    let verdicts = if opts.cases {
        vec![case1_verdict(opts.step), case2_nested(&opts.resolutions), case3_analysis(opts.step)]
    } else {
        Vec::new()
    };
    Ok(SolveReport {
        delta13_rad: d,
        delta13_deg: d / DEG,
        a13_rad: a,
        a13_deg: a / DEG,
        p13_min_distance: min,
        verdicts,
    })
}

/// The sampled curve of the first case as CSV, `d,u18,alpha,u1,u2` in radians.
pub fn curve_csv(verdict: &CaseVerdict) -> String {
    let mut s = String::from("d,u18,alpha,u1,u2\n");
    if let Evidence::Monotone { table, .. } = &verdict.evidence {
        for r in table {
            s.push_str(&format!("{},{},{},{},{}\n", r.d, r.value, r.alpha, r.u1, r.u2));
        }
    }
    s
}

fn read_graphs(path: &str) -> Result<Vec<PlanarEmbeddedGraph>, CliError> {
    let f = File::open(path).map_err(|e| {
        CliError::Usage(format!(
            "cannot open {path}: {e}\n\
             generate the input with plantri, e.g. `plantri -pc3m3 N > graphs.pc` (3-connected) or \
             `plantri -pc2m3 N` for all min-degree-3 planar graphs"
        ))
    })?;
    Ok(PlanarCodeReader::new(BufReader::new(f)).collect::<Result<Vec<_>, _>>()?)
}

pub fn cmd_verify_small_n(n: usize, graphs: &[PlanarEmbeddedGraph], cfg: &SmallNConfig) -> Result<SmallNReport, CliError> {
    verify_small_n(n, graphs, cfg).map_err(|e| match e {
        SmallNError::UnsupportedN(_) | SmallNError::NoGraphs(_) => CliError::Usage(e.to_string()),
        SmallNError::NothingAtStart(_) => CliError::Numerical(e.to_string()),
    })
}

pub fn fixture_graphs(set: FixtureSet) -> Vec<(String, PlanarEmbeddedGraph)> {
    let mut out = Vec::new();
    if matches!(set, FixtureSet::Gamma | FixtureSet::All) {
        out.extend(gamma13_fixtures().into_iter().map(|f| (f.name, f.graph)));
    }
    if matches!(set, FixtureSet::Fig8 | FixtureSet::All) {
        out.extend(fig8_fixtures().into_iter().map(|f| (f.name, f.graph)));
    }
    out
}

fn write_json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(out).map_err(|e| io_err("write", e))
}

fn verdict_line(v: &CaseVerdict) -> String {
    let c = match v.conclusion {
        Conclusion::Eliminated => "eliminated",
        Conclusion::OptimalUnique => "optimal-unique",
        Conclusion::Inconclusive => "inconclusive",
    };
    format!("{:?}: {c}", v.case)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => parse_config(&std::fs::read_to_string(p).map_err(|e| io_err(&format!("cannot read {}", p.display()), e))?)?,
        None => HashMap::new(),
    };
    let w = |e| io_err("write", e);
    match cli.command {
        Command::Filter(flags) => {
            let cfg = RunConfig::resolve("filter", flags, &file)?;
            let rep = cmd_filter(open_input(cfg.input.as_deref())?, &cfg.filter_rules())?;
            match cfg.format {
                Format::Json => write_json(out, &rep)?,
                Format::Csv => {
                    writeln!(out, "key,count").map_err(w)?;
                    writeln!(out, "parsed,{}\npassed,{}\nfailed,{}", rep.parsed, rep.passed, rep.failed).map_err(w)?;
                    for (k, v) in &rep.violations {
                        writeln!(out, "violation={k},{v}").map_err(w)?;
                    }
                }
                Format::Text => {
                    writeln!(out, "parsed {} passed {} failed {}", rep.parsed, rep.passed, rep.failed).map_err(w)?;
                    for (k, v) in &rep.violations {
                        writeln!(out, "  {k}: {v}").map_err(w)?;
                    }
                }
            }
        }
        Command::Prune(flags) => {
            let cfg = RunConfig::resolve("prune", flags, &file)?;
            let input = open_input(cfg.input.as_deref())?;
            let mut file_out = cfg.output.as_deref().map(create).transpose()?;
            let mut failed = None;
            let rep = cmd_prune(input, &cfg, |r| {
                if cfg.format == Format::Json && failed.is_none() {
                    let target: &mut dyn Write = match file_out.as_mut() {
                        Some(f) => f,
                        None => &mut *out,
                    };
                    if let Err(e) = serde_json::to_writer(&mut *target, r).map_err(std::io::Error::from).and_then(|_| writeln!(target)) {
                        failed = Some(e);
                    }
                }
            })?;
            if let Some(e) = failed {
                return Err(w(e));
            }
            let target: &mut dyn Write = match file_out.as_mut() {
                Some(f) => f,
                None => &mut *out,
            };
            match cfg.format {
                Format::Json => {
                    serde_json::to_writer(&mut *target, &serde_json::json!({ "summary": &rep.summary })).map_err(std::io::Error::from).map_err(w)?;
                    writeln!(target).map_err(w)?;
                }
                Format::Csv => rep.write_csv(&mut *target).map_err(w)?,
                Format::Text => {
                    let s = &rep.summary;
                    writeln!(
                        target,
                        "parsed {} filtered {} level1 {} later {} survived {}",
                        s.parsed, s.filtered_out, s.eliminated_level1, s.eliminated_later, s.survived
                    )
                    .map_err(w)?;
                    for e in &s.survivors {
                        writeln!(target, "  {} {}", e.id, e.class).map_err(w)?;
                    }
                }
            }
        }
        Command::Solve(a) => {
            let format = a.format.or(from_config::<String>(&file, "format")?.and_then(|v| Format::from_str(&v, true).ok())).unwrap_or(Format::Text);
            let mut opts = SolveOptions { cases: !a.skip_cases, ..SolveOptions::default() };
            if let Some(s) = a.step.or(from_config(&file, "step")?) {
                opts.step = s;
            }
            let rep = cmd_solve(&opts)?;
            if let Some(p) = a.coords.or_else(|| file.get("coords").map(PathBuf::from)) {
                create(&p)?.write_all(coordinates_text(&build_p13()).as_bytes()).map_err(w)?;
            }
            if let Some(p) = a.curve.or_else(|| file.get("curve").map(PathBuf::from)) {
                let v = rep.verdicts.first().cloned().unwrap_or_else(|| case1_verdict(opts.step));
                create(&p)?.write_all(curve_csv(&v).as_bytes()).map_err(w)?;
            }
            match format {
                Format::Json => write_json(out, &rep)?,
                Format::Csv => {
                    writeln!(out, "quantity,radians,degrees").map_err(w)?;
                    writeln!(out, "delta13,{},{}\na13,{},{}", rep.delta13_rad, rep.delta13_deg, rep.a13_rad, rep.a13_deg).map_err(w)?;
                }
                Format::Text => {
                    writeln!(out, "d13 = {:.10} rad = {:.6} deg", rep.delta13_rad, rep.delta13_deg).map_err(w)?;
                    writeln!(out, "a13 = {:.10} rad = {:.6} deg", rep.a13_rad, rep.a13_deg).map_err(w)?;
                    writeln!(out, "window [{}, {}]", D_WINDOW.0, D_WINDOW.1).map_err(w)?;
                    for v in &rep.verdicts {
                        writeln!(out, "{}", verdict_line(v)).map_err(w)?;
                    }
                }
            }
        }
        Command::VerifySmallN(a) => {
            let n = a.n.or(from_config(&file, "n")?).ok_or_else(|| CliError::Usage("--n is required".into()))?;
            let input = a.input.or_else(|| file.get("input").cloned()).ok_or_else(|| {
                CliError::Usage(format!("--input is required; generate it with `plantri -pc2m3 {n} > graphs{n}.pc`"))
            })?;
            let mut cfg = SmallNConfig::default();
            if let Some(t) = a.tol.or(from_config(&file, "tol")?) {
                cfg.tol = t;
            }
            if let Some(d) = a.depth.or(from_config(&file, "depth")?) {
                cfg.max_depth = d;
            }
            let rep = cmd_verify_small_n(n, &read_graphs(&input)?, &cfg)?;
            match a.format.unwrap_or(Format::Text) {
                Format::Json => write_json(out, &rep)?,
                Format::Csv => {
                    writeln!(out, "n,pipeline,oracle,difference,agrees").map_err(w)?;
                    writeln!(out, "{},{},{},{},{}", n, rep.pipeline.optimum(), rep.oracle.d, rep.difference, rep.agrees).map_err(w)?;
                }
                Format::Text => {
                    let p = &rep.pipeline;
                    writeln!(out, "n = {n}: {} graphs, Fejes Toth bound {:.10}", p.graphs, p.fejes_toth).map_err(w)?;
                    writeln!(out, "pipeline optimum in [{:.10}, {:.10}] = {:.6} deg", p.lower, p.upper, p.optimum() / DEG).map_err(w)?;
                    writeln!(out, "oracle {:.10} ({:.6} deg), difference {:.2e}: {}", rep.oracle.d, rep.oracle.d / DEG, rep.difference, if rep.agrees { "agree" } else { "DISAGREE" }).map_err(w)?;
                }
            }
            if !rep.agrees {
                return Err(CliError::Numerical(format!("pipeline and oracle differ by {:.3e}", rep.difference)));
            }
        }
        Command::Fixtures(a) => {
            let graphs = fixture_graphs(a.set);
            let target: Box<dyn Write> = match a.output.or_else(|| file.get("output").map(PathBuf::from)) {
                Some(p) => Box::new(create(&p)?),
                None => Box::new(&mut *out),
            };
            write_planar_code(target, graphs.iter().map(|(_, g)| g))?;
        }
    }
    Ok(())
}

/// Runs the command line `args` (program name first) and returns the exit code:
/// 0 completed, 1 usage, 2 parse error, 3 numerical failure.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parses_and_normalises_keys() {
        let c = parse_config("# run\ndepth = 12\nd_window = 0.99:1.02\n--jobs=2\n").unwrap();
        assert_eq!(c["depth"], "12");
        assert_eq!(c["d-window"], "0.99:1.02");
        assert_eq!(c["jobs"], "2");
        assert!(parse_config("nonsense line").is_err());
    }

    #[test]
    fn flags_override_the_file() {
        let file = parse_config("depth = 7\ntol = 1e-3\nformat = csv").unwrap();
        let flags = Common { depth: Some(9), ..Common::default() };
        let cfg = RunConfig::resolve("prune", flags, &file).unwrap();
        assert_eq!(cfg.depth, Some(9));
        assert_eq!(cfg.tol, Some(1e-3));
        assert_eq!(cfg.format, Format::Csv);
    }

    #[test]
    fn window_syntax() {
        assert_eq!(parse_window("0.9:1.1").unwrap(), (0.9, 1.1));
        assert!(parse_window("1.1:0.9").is_err());
        assert!(parse_window("0.9").is_err());
    }

    #[test]
    fn exit_codes() {
        let mut o = Vec::new();
        let mut e = Vec::new();
        assert_eq!(run(["tammes", "bogus"], &mut o, &mut e), 1);
        assert_eq!(run(["tammes", "--help"], &mut o, &mut e), 0);
        assert_eq!(run(["tammes", "filter", "--input", "/nonexistent/x.pc"], &mut o, &mut e), 1);
    }
}
