//! Command-line front end. Every command prints one CSV table or one JSON
//! document; identical invocations produce identical bytes.

pub mod render;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::cyclotomic::Cyclotomic;
use crate::embedding::{approximate_bloch_point, cycle_eigenbasis, splitter_projection};
use crate::error::{Error, ErrorKind};
use crate::interferometer::{bomb_test, enumerate_branches, Arm, Branch, Circuit};
use crate::linalg::CycVector;
use crate::transport::{zeno_chain, TransportModel};
use crate::walk::{check_observations, most_probable_path, WalkObservation, WalkParams};
use crate::zeno::{a5_dynamics, zeno_scan_sn, zeno_table_c8, SurvivalSeries, ZenoReport};

use render::{vector_text, write_output, Exact, Fmt, Format, Num, Render, Table};

#[derive(Debug, Parser)]
#[command(name = "combq", version, about = "Exact finite-group quantum experiments")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Digits after the decimal point for floats.
    #[arg(long, default_value_t = 12, global = true)]
    pub precision: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Branch table of a Mach–Zehnder circuit.
    Mzi {
        /// Comma-separated elements: S, M, P(arm,k/n), BS(alpha,beta), D(arm).
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        circuit: String,
        #[arg(long, default_value = "upper")]
        input: String,
    },
    /// Outcomes of the interaction-free bomb test.
    Bomb,
    #[command(subcommand)]
    Zeno(ZenoCommand),
    /// Most probable observed path of the drifting lattice walk.
    Walk(WalkArgs),
    /// Transition and trajectory probabilities of a JSON transport model.
    Transport {
        /// Path to the model, or the JSON text itself.
        #[arg(long)]
        model: String,
    },
    #[command(subcommand)]
    Embed(EmbedCommand),
}

#[derive(Debug, Subcommand)]
pub enum ZenoCommand {
    /// Order, period and Zeno time of every power of the balanced splitter.
    Table,
    /// Survival series of the generalized splitter S_N.
    Scan {
        #[arg(long)]
        n: u32,
        /// Last time step; defaults to N.
        #[arg(long)]
        tmax: Option<u64>,
    },
    /// Survival series of the three A5 generators.
    A5 {
        #[arg(long)]
        tmax: u64,
        /// Comma-separated cyclotomic literals; defaults to 1,0,0.
        #[arg(long)]
        psi0: Option<String>,
    },
    /// Repeated observation with T/tau fixed at pi/4, for N = 1..max.
    Chain {
        #[arg(long, default_value_t = 16)]
        max: u32,
    },
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    /// Drift velocity as p/q.
    #[arg(long, allow_hyphen_values = true)]
    pub v: String,
    /// Fixed observations t:x, comma-separated, in increasing time.
    #[arg(long, allow_hyphen_values = true)]
    pub observe: String,
    /// Free observation times to optimize, comma-separated.
    #[arg(long, default_value = "")]
    pub times: String,
}

#[derive(Debug, Subcommand)]
pub enum EmbedCommand {
    /// Eigen-decomposition of the N-cycle permutation matrix.
    Decompose {
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Splitter-subspace projection of a multiplicity vector in N^8.
    Project {
        #[arg(long)]
        counts: String,
    },
    /// Closest multiplicity vector to a Bloch-sphere target.
    Bloch {
        /// Target ray as re0,im0,re1,im1.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, default_value_t = 3)]
        max_entry: u32,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Parse => 2,
                ErrorKind::Contract => 3,
                ErrorKind::Resource => 4,
            },
            CliError::Io(_) => 1,
        }
    }
}

fn parse_err(what: &str, text: &str) -> Error {
    Error::Parse(format!("cannot parse {what} from {text:?}"))
}

fn parse_list<T: std::str::FromStr>(what: &str, text: &str) -> Result<Vec<T>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| parse_err(what, s)))
        .collect()
}

fn parse_velocity(text: &str) -> Result<WalkParams, Error> {
    let c: Cyclotomic = text.parse().map_err(|_| parse_err("velocity", text))?;
    let v = c.as_rational().map_err(|_| parse_err("velocity", text))?;
    WalkParams::new(v)
}

fn parse_observations(text: &str) -> Result<Vec<WalkObservation>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (t, x) = s.split_once(':').ok_or_else(|| parse_err("observation t:x", s))?;
            Ok(WalkObservation {
                t: t.trim().parse().map_err(|_| parse_err("observation time", s))?,
                x: x.trim().parse().map_err(|_| parse_err("observation position", s))?,
            })
        })
        .collect()
}

/// Runs one parsed invocation, writing to `--output` or `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let fmt = Fmt { precision: cli.precision };
    match &cli.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            dispatch(cli, &fmt, &mut w)?;
            w.flush()?;
        }
        None => dispatch(cli, &fmt, stdout)?,
    }
    Ok(())
}

fn emit<R: Render>(out: &mut dyn Write, report: &R, format: Format) -> Result<(), CliError> {
    write_output(out, report, format)?;
    Ok(())
}

fn dispatch(cli: &Cli, fmt: &Fmt, out: &mut dyn Write) -> Result<(), CliError> {
    let f = cli.format;
    match &cli.command {
        Command::Mzi { circuit, input } => emit(out, &mzi_report(circuit, input, fmt)?, f),
        Command::Bomb => emit(out, &bomb_report(fmt)?, f),
        Command::Zeno(ZenoCommand::Table) => emit(out, &table_report()?, f),
        Command::Zeno(ZenoCommand::Scan { n, tmax }) => emit(out, &scan_report(*n, *tmax, fmt)?, f),
        Command::Zeno(ZenoCommand::A5 { tmax, psi0 }) => emit(out, &a5_report(*tmax, psi0.as_deref(), fmt)?, f),
        Command::Zeno(ZenoCommand::Chain { max }) => emit(out, &chain_report(*max, fmt)?, f),
        Command::Walk(args) => emit(out, &walk_report(args, fmt)?, f),
        Command::Transport { model } => emit(out, &transport_report(model, fmt)?, f),
        Command::Embed(EmbedCommand::Decompose { n }) => emit(out, &decompose_report(*n)?, f),
        Command::Embed(EmbedCommand::Project { counts }) => emit(out, &project_report(counts)?, f),
        Command::Embed(EmbedCommand::Bloch { target, max_entry }) => {
            emit(out, &bloch_report(target, *max_entry, fmt)?, f)
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BranchRow {
    pub outcome: String,
    pub probability: Exact,
    pub amplitude: Vec<String>,
    pub norm_squared: String,
}

impl BranchRow {
    fn new(b: &Branch, fmt: &Fmt) -> Self {
        BranchRow {
            outcome: b.label(),
            probability: Exact::new(&b.probability, fmt),
            amplitude: vector_text(&b.amplitude),
            norm_squared: Exact::new(&b.amplitude.norm_squared(), fmt).exact,
        }
    }

    fn cells(&self) -> Vec<String> {
        let mut row = vec![self.outcome.clone()];
        row.extend(self.probability.columns());
        row.push(self.amplitude.join("; "));
        row.push(self.norm_squared.clone());
        row
    }
}

const BRANCH_HEADERS: [&str; 7] = ["outcome", "p_exact", "p_num", "p_den", "p_float", "amplitude", "norm_squared"];

#[derive(Debug, Serialize)]
pub struct MziReport {
    pub circuit: String,
    pub input: String,
    pub conductor: u32,
    pub branches: Vec<BranchRow>,
}

impl Render for MziReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&BRANCH_HEADERS);
        for b in &self.branches {
            t.push(b.cells());
        }
        t
    }
}

pub fn mzi_report(circuit: &str, input: &str, fmt: &Fmt) -> Result<MziReport, Error> {
    let c: Circuit = circuit.parse()?;
    let arm: Arm = input.parse()?;
    let state = crate::interferometer::arm_state(arm);
    let branches = enumerate_branches(&c, &state)?;
    Ok(MziReport {
        circuit: c.to_string(),
        input: arm.name().to_string(),
        conductor: c.conductor(),
        branches: branches.iter().map(|b| BranchRow::new(b, fmt)).collect(),
    })
}

#[derive(Debug, Serialize)]
pub struct BombRow {
    pub scenario: String,
    #[serde(flatten)]
    pub branch: BranchRow,
}

#[derive(Debug, Serialize)]
pub struct BombReport {
    pub outcomes: Vec<BombRow>,
}

impl Render for BombReport {
    fn table(&self) -> Table {
        let mut headers = vec!["scenario"];
        headers.extend(BRANCH_HEADERS);
        let mut t = Table::new(&headers);
        for o in &self.outcomes {
            let mut row = vec![o.scenario.clone()];
            row.extend(o.branch.cells());
            t.push(row);
        }
        t
    }
}

pub fn bomb_report(fmt: &Fmt) -> Result<BombReport, Error> {
    Ok(BombReport {
        outcomes: bomb_test()?
            .iter()
            .map(|o| BombRow { scenario: o.scenario.to_string(), branch: BranchRow::new(&o.branch, fmt) })
            .collect(),
    })
}

#[derive(Debug, Serialize)]
pub struct ZenoRow {
    pub label: String,
    pub order: u64,
    /// `"const"` for a constant series.
    pub period: String,
    /// `"inf"` for a constant series.
    pub tau_z: String,
}

impl From<&ZenoReport> for ZenoRow {
    fn from(r: &ZenoReport) -> Self {
        ZenoRow { label: r.label.clone(), order: r.order, period: r.period.to_string(), tau_z: r.tau_z.to_string() }
    }
}

impl ZenoRow {
    fn cells(&self) -> Vec<String> {
        vec![self.label.clone(), self.order.to_string(), self.period.clone(), self.tau_z.clone()]
    }
}

#[derive(Debug, Serialize)]
pub struct TableReport {
    pub rows: Vec<ZenoRow>,
}

impl Render for TableReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&["operator", "order", "period", "tau_z"]);
        for r in &self.rows {
            t.push(r.cells());
        }
        t
    }
}

pub fn table_report() -> Result<TableReport, Error> {
    Ok(TableReport { rows: zeno_table_c8()?.iter().map(ZenoRow::from).collect() })
}

#[derive(Debug, Serialize)]
pub struct SeriesPoint {
    pub t: u64,
    pub p: Exact,
}

fn series_points(series: &SurvivalSeries, fmt: &Fmt) -> Vec<SeriesPoint> {
    series.probabilities().iter().enumerate().map(|(t, p)| SeriesPoint { t: t as u64, p: Exact::new(p, fmt) }).collect()
}

fn series_cells(r: &ZenoRow, p: &SeriesPoint) -> Vec<String> {
    let [exact, num, den, float] = p.p.columns();
    let mut row = r.cells();
    row.extend([p.t.to_string(), num, den, exact, float]);
    row
}

const SERIES_HEADERS: [&str; 9] = ["operator", "order", "period", "tau_z", "t", "p_num", "p_den", "p_exact", "p_float"];

#[derive(Debug, Serialize)]
pub struct ScanReport {
    #[serde(flatten)]
    pub report: ZenoRow,
    pub series: Vec<SeriesPoint>,
}

impl Render for ScanReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&SERIES_HEADERS);
        for p in &self.series {
            t.push(series_cells(&self.report, p));
        }
        t
    }
}

pub fn scan_report(n: u32, tmax: Option<u64>, fmt: &Fmt) -> Result<ScanReport, Error> {
    let t_max = tmax.unwrap_or(n as u64);
    if t_max > crate::linalg::DEFAULT_ORDER_BOUND {
        return Err(Error::ResourceLimit(format!("tmax {t_max} exceeds {}", crate::linalg::DEFAULT_ORDER_BOUND)));
    }
    let (series, report) = zeno_scan_sn(n, t_max)?;
    let mut points = series_points(&series, fmt);
    points.truncate(t_max as usize + 1);
    Ok(ScanReport { report: ZenoRow::from(&report), series: points })
}

#[derive(Debug, Serialize)]
pub struct OperatorSeries {
    #[serde(flatten)]
    pub report: ZenoRow,
    pub series: Vec<SeriesPoint>,
}

#[derive(Debug, Serialize)]
pub struct A5Report {
    pub psi0: Vec<String>,
    pub operators: Vec<OperatorSeries>,
}

impl Render for A5Report {
    fn table(&self) -> Table {
        let mut t = Table::new(&SERIES_HEADERS);
        for op in &self.operators {
            for p in &op.series {
                t.push(series_cells(&op.report, p));
            }
        }
        t
    }
}

pub fn a5_report(tmax: u64, psi0: Option<&str>, fmt: &Fmt) -> Result<A5Report, Error> {
    if tmax > crate::linalg::DEFAULT_ORDER_BOUND {
        return Err(Error::ResourceLimit(format!("tmax {tmax} exceeds {}", crate::linalg::DEFAULT_ORDER_BOUND)));
    }
    let psi0 = match psi0 {
        Some(text) => {
            let entries: Vec<Cyclotomic> = parse_list("state entry", text)?;
            Some(CycVector::new(entries)?)
        }
        None => None,
    };
    let out = a5_dynamics(tmax, psi0.as_ref())?;
    let shown = psi0.unwrap_or(CycVector::basis(5, 3, 0)?);
    Ok(A5Report {
        psi0: vector_text(&shown),
        operators: out
            .iter()
            .map(|(s, r)| OperatorSeries { report: ZenoRow::from(r), series: series_points(s, fmt) })
            .collect(),
    })
}

#[derive(Debug, Serialize)]
pub struct ChainRow {
    pub intervals: u32,
    pub conductor: u32,
    pub probability: Num,
    pub lower_bound: Num,
    pub entropy: Num,
    #[serde(skip)]
    cells: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct ChainReport {
    pub elapsed_over_tau: Num,
    pub rows: Vec<ChainRow>,
}

impl Render for ChainReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&["intervals", "conductor", "probability", "lower_bound", "entropy"]);
        for r in &self.rows {
            t.push(r.cells.clone());
        }
        t
    }
}

/// Largest chain the CLI will compute.
pub const CHAIN_CEILING: u32 = 256;

pub fn chain_report(max: u32, fmt: &Fmt) -> Result<ChainReport, Error> {
    if max == 0 {
        return Err(Error::InvalidInput("--max must be at least 1".into()));
    }
    if max > CHAIN_CEILING {
        return Err(Error::ResourceLimit(format!("--max {max} exceeds {CHAIN_CEILING}")));
    }
    let ratio = std::f64::consts::FRAC_PI_4;
    let mut rows = Vec::with_capacity(max as usize);
    for n in 1..=max {
        let c = zeno_chain(n)?;
        let p = c.probability.to_f64();
        let bound = 1.0 - ratio * ratio / n as f64;
        rows.push(ChainRow {
            intervals: n,
            conductor: c.conductor,
            probability: fmt.num(p),
            lower_bound: fmt.num(bound),
            entropy: fmt.num(c.entropy),
            cells: vec![n.to_string(), c.conductor.to_string(), fmt.float(p), fmt.float(bound), fmt.float(c.entropy)],
        });
    }
    Ok(ChainReport { elapsed_over_tau: fmt.num(ratio), rows })
}

#[derive(Debug, Serialize)]
pub struct WalkPoint {
    pub t: u64,
    pub x: i64,
    pub observed: bool,
    pub step_probability: Option<Exact>,
    pub step_entropy: Num,
    pub cumulative_entropy: Num,
    #[serde(skip)]
    cells: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct WalkReport {
    pub v: String,
    pub probability: Exact,
    pub entropy: Num,
    pub points: Vec<WalkPoint>,
}

impl Render for WalkReport {
    fn table(&self) -> Table {
        let mut t =
            Table::new(&["t", "x", "observed", "step_p_exact", "step_p_float", "step_entropy", "cumulative_entropy"]);
        for p in &self.points {
            t.push(p.cells.clone());
        }
        t
    }
}

pub fn walk_report(args: &WalkArgs, fmt: &Fmt) -> Result<WalkReport, Error> {
    let params = parse_velocity(&args.v)?;
    let observed = parse_observations(&args.observe)?;
    if observed.is_empty() {
        return Err(Error::InvalidInput("--observe needs at least one observation".into()));
    }
    check_observations(&observed)?;
    let mut free: Vec<u64> = parse_list("time", &args.times)?;
    free.sort_unstable();
    free.dedup();
    let (first, last) = (observed[0].t, observed[observed.len() - 1].t);
    if let Some(t) = free.iter().find(|&&t| t <= first || t >= last || observed.iter().any(|o| o.t == t)) {
        return Err(Error::InvalidInput(format!("free time {t} is not strictly between observations")));
    }

    let ps = std::slice::from_ref(&params);
    let mut points = vec![observed[0]];
    let mut is_observed = vec![true];
    for w in observed.windows(2) {
        let inner: Vec<u64> = free.iter().copied().filter(|&t| t > w[0].t && t < w[1].t).collect();
        let seg = most_probable_path(w[0], w[1], &inner, ps)?;
        for (k, p) in seg.points.iter().enumerate().skip(1) {
            points.push(*p);
            is_observed.push(k == seg.points.len() - 1);
        }
    }
    let path = crate::walk::path_report(&points, ps)?;

    let mut cumulative = 0.0;
    let mut rows = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let (step, entropy) = if i == 0 {
            (None, 0.0)
        } else {
            (Some(Exact::from_rational(&path.step_probabilities[i - 1], fmt)), path.step_entropies[i - 1])
        };
        cumulative += entropy;
        let cells = vec![
            p.t.to_string(),
            p.x.to_string(),
            u8::from(is_observed[i]).to_string(),
            step.as_ref().map(|s| s.exact.clone()).unwrap_or_default(),
            step.as_ref().map(|s| s.float_text.clone()).unwrap_or_default(),
            fmt.float(entropy),
            fmt.float(cumulative),
        ];
        rows.push(WalkPoint {
            t: p.t,
            x: p.x,
            observed: is_observed[i],
            step_probability: step,
            step_entropy: fmt.num(entropy),
            cumulative_entropy: fmt.num(cumulative),
            cells,
        });
    }
    Ok(WalkReport {
        v: render::ratio(params.velocity()),
        probability: Exact::from_rational(&path.probability, fmt),
        entropy: fmt.num(path.entropy),
        points: rows,
    })
}

#[derive(Debug, Serialize)]
pub struct TransportStep {
    pub from_t: u64,
    pub to_t: u64,
    pub probability: Exact,
    pub entropy: Num,
    #[serde(skip)]
    entropy_text: String,
}

#[derive(Debug, Serialize)]
pub struct TransportReport {
    pub group: String,
    pub steps: Vec<TransportStep>,
    pub probability: Exact,
    pub entropy: Num,
}

impl Render for TransportReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&["from_t", "to_t", "p_exact", "p_num", "p_den", "p_float", "entropy"]);
        for s in &self.steps {
            let mut row = vec![s.from_t.to_string(), s.to_t.to_string()];
            row.extend(s.probability.columns());
            row.push(s.entropy_text.clone());
            t.push(row);
        }
        t
    }
}

pub fn transport_report(model: &str, fmt: &Fmt) -> Result<TransportReport, CliError> {
    let text = if model.trim_start().starts_with('{') { model.to_string() } else { std::fs::read_to_string(model)? };
    let model = TransportModel::from_json(&text)?;
    let out = model.run()?;
    let steps = out
        .steps
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let e = if p.is_zero() { f64::NEG_INFINITY } else { p.to_f64().ln() };
            TransportStep {
                from_t: out.times[i],
                to_t: out.times[i + 1],
                probability: Exact::new(p, fmt),
                entropy: fmt.num(e),
                entropy_text: fmt.float(e),
            }
        })
        .collect();
    Ok(TransportReport {
        group: model.group.clone(),
        steps,
        probability: Exact::new(&out.probability, fmt),
        entropy: fmt.num(out.entropy),
    })
}

#[derive(Debug, Serialize)]
pub struct DecomposeRow {
    pub coordinate: usize,
    pub root_exponent: u32,
    pub eigenvalue: String,
}

#[derive(Debug, Serialize)]
pub struct DecomposeReport {
    pub n: usize,
    pub inverse_checked: bool,
    pub diagonal: Vec<DecomposeRow>,
}

impl Render for DecomposeReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&["coordinate", "root_exponent", "eigenvalue"]);
        for r in &self.diagonal {
            t.push(vec![r.coordinate.to_string(), r.root_exponent.to_string(), r.eigenvalue.clone()]);
        }
        t
    }
}

pub fn decompose_report(n: usize) -> Result<DecomposeReport, Error> {
    if n > 256 {
        return Err(Error::ResourceLimit(format!("decomposition of N = {n} exceeds 256")));
    }
    let dec = cycle_eigenbasis(n)?;
    let d = dec.diagonalized()?;
    Ok(DecomposeReport {
        n,
        inverse_checked: dec.transform.compose(&dec.inverse)?.is_identity(),
        diagonal: dec
            .block_spectrum
            .iter()
            .enumerate()
            .map(|(k, &e)| DecomposeRow { coordinate: k, root_exponent: e, eigenvalue: d.get(k, k).to_string() })
            .collect(),
    })
}

#[derive(Debug, Serialize)]
pub struct ProjectReport {
    pub counts: Vec<i64>,
    pub projection: Vec<String>,
}

impl Render for ProjectReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&["component", "value"]);
        for (i, v) in self.projection.iter().enumerate() {
            t.push(vec![(i + 1).to_string(), v.clone()]);
        }
        t
    }
}

fn counts8(text: &str) -> Result<[i64; 8], Error> {
    let v: Vec<i64> = parse_list("count", text)?;
    v.try_into().map_err(|v: Vec<i64>| Error::InvalidInput(format!("expected 8 counts, got {}", v.len())))
}

pub fn project_report(counts: &str) -> Result<ProjectReport, Error> {
    let n = counts8(counts)?;
    Ok(ProjectReport { counts: n.to_vec(), projection: vector_text(&splitter_projection(&n)?) })
}

#[derive(Debug, Serialize)]
pub struct BlochReport {
    pub target: Vec<Num>,
    pub max_entry: u32,
    pub counts: Vec<i64>,
    pub error: Num,
    pub projection: Vec<String>,
    #[serde(skip)]
    error_text: String,
}

impl Render for BlochReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&["max_entry", "counts", "error", "projection"]);
        let counts: Vec<String> = self.counts.iter().map(i64::to_string).collect();
        t.push(vec![self.max_entry.to_string(), counts.join(" "), self.error_text.clone(), self.projection.join("; ")]);
        t
    }
}

pub fn bloch_report(target: &str, max_entry: u32, fmt: &Fmt) -> Result<BlochReport, Error> {
    let v: Vec<f64> = parse_list("target component", target)?;
    if v.len() != 4 {
        return Err(Error::InvalidInput(format!("target needs 4 numbers, got {}", v.len())));
    }
    let r = approximate_bloch_point((Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3])), max_entry)?;
    Ok(BlochReport {
        target: v.iter().map(|&x| fmt.num(x)).collect(),
        max_entry,
        counts: r.multiplicities.to_vec(),
        error: fmt.num(r.error),
        error_text: fmt.float(r.error),
        projection: vector_text(&r.projection),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<String, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("combq").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        run(&cli, &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    #[test]
    fn mzi_commands() {
        let out = run_args(&["mzi", "--circuit", "S,M,S"]).unwrap();
        assert_eq!(out.lines().count(), 2);
        assert!(out.lines().nth(1).unwrap().starts_with("out=upper,1/1,1,1,"));
        let out = run_args(&["mzi", "--circuit", "S"]).unwrap();
        let probs: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
        assert_eq!(probs, ["1/2", "1/2"]);
        let out = run_args(&["mzi"]).unwrap();
        assert!(out.contains("out=upper,1/1"));
        assert_eq!(run_args(&["mzi", "--circuit", "Q"]).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn formats_agree_on_bomb() {
        let csv = run_args(&["bomb"]).unwrap();
        let json: serde_json::Value = serde_json::from_str(&run_args(&["--format", "json", "bomb"]).unwrap()).unwrap();
        let mut rdr = csv::Reader::from_reader(csv.as_bytes());
        let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
        let outcomes = json["outcomes"].as_array().unwrap();
        assert_eq!(rows.len(), outcomes.len());
        for (row, o) in rows.iter().zip(outcomes) {
            assert_eq!(&row[0], o["scenario"].as_str().unwrap());
            assert_eq!(&row[2], o["probability"]["exact"].as_str().unwrap());
        }
    }

    #[test]
    fn walk_errors_name_the_observation() {
        let err = run_args(&["walk", "--v", "0", "--observe", "0:0,10:3"]).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("t=10, x=3"), "{err}");
        let out = run_args(&["walk", "--v", "1", "--observe", "0:0,10:10"]).unwrap();
        assert!(out.lines().nth(2).unwrap().starts_with("10,10,1,1/1,"));
        let out = run_args(&["walk", "--v", "0", "--observe", "0:0,100:40", "--times", "50"]).unwrap();
        assert!(out.lines().nth(2).unwrap().starts_with("50,20,0,"), "{out}");
    }

    #[test]
    fn resource_limits() {
        let err = run_args(&["embed", "bloch", "--target", "1,0,0,0", "--max-entry", "30"]).unwrap_err();
        assert_eq!(err.exit_code(), 4);
        assert_eq!(run_args(&["zeno", "chain", "--max", "1000"]).unwrap_err().exit_code(), 4);
    }

    #[test]
    fn output_is_deterministic() {
        let a = run_args(&["--format", "json", "zeno", "scan", "--n", "12"]).unwrap();
        let b = run_args(&["--format", "json", "zeno", "scan", "--n", "12"]).unwrap();
        assert_eq!(a, b);
        let scan = run_args(&["zeno", "scan", "--n", "100"]).unwrap();
        assert!(scan.lines().nth(1).unwrap().starts_with("S_100,100,50,25,0,1,1,1/1,"), "{scan}");
    }
}
