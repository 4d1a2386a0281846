//! Command-line front end: simulation runs, circuit emission, compiled-vs-
//! structured verification, and scaling scans.
//!
//! Exit codes: 0 ok, 2 invalid usage/config, 3 size cap exceeded,
//! 4 family not compilable, 5 verification failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qwalk_core::analysis::{
    default_marked, gate_count_scan, peak_report, scaling_scan, success_curve_with_cap, Curve,
    GateCountScan, PeakReport, ScalingScan, DEFAULT_WINDOW_FACTOR,
};
use qwalk_core::compiler::{build_step_circuit, lower};
use qwalk_core::error::Error;
use qwalk_core::format;
use qwalk_core::graphs::{FamilySpec, NodeId};
use qwalk_core::verify::verify_step_circuit;
use qwalk_core::walk::DEFAULT_AMP_CAP;

/// Environment variable overriding the amplitude cap.
pub const AMP_CAP_ENV: &str = "QWALK_MAX_AMPS";

#[derive(Debug, Parser)]
#[command(
    name = "qwalk",
    about = "Coined quantum-walk search: simulate, compile, verify, scan",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the search walk and write the success-probability curve and peak report
    Simulate(SimulateArgs),
    /// Compile one step of the search walk to elementary gates
    Compile(CompileArgs),
    /// Check a compiled step circuit against the structured simulator
    Verify(VerifyArgs),
    /// Scan sizes for steps-to-peak or gate-count scaling
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// Graph family: hypercube, complete, or twisted_toroid
    #[arg(long)]
    pub family: String,
    /// Size exponent n
    #[arg(long)]
    pub n: usize,
    /// Second exponent m (twisted_toroid only)
    #[arg(long)]
    pub m: Option<usize>,
}

impl FamilyArgs {
    pub fn spec(&self) -> Result<FamilySpec, CliError> {
        let spec = match self.family.as_str() {
            "hypercube" => FamilySpec::Hypercube { n: self.n },
            "complete" => FamilySpec::CompleteSelfLoop { n: self.n },
            "twisted_toroid" => {
                let m = self.m.ok_or_else(|| {
                    CliError::Usage("twisted_toroid requires --m".to_string())
                })?;
                FamilySpec::TwistedToroid { n: self.n, m }
            }
            other => {
                return Err(CliError::Usage(format!(
                    "unknown family `{other}` (expected hypercube, complete, twisted_toroid)"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Marked node index (default: floor(N/3))
    #[arg(long)]
    pub marked: Option<usize>,
    /// Number of walk steps
    #[arg(long)]
    pub tmax: usize,
    /// Output path base
    #[arg(long, default_value = "qwalk_sim")]
    pub out: PathBuf,
    /// csv: curve CSV + peak JSON; json: one combined JSON file
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Marked node index (default: floor(N/3))
    #[arg(long)]
    pub marked: Option<usize>,
    /// Output path base
    #[arg(long, default_value = "qwalk_circuit")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Marked node index (default: floor(N/3))
    #[arg(long)]
    pub marked: Option<usize>,
    /// Compare this circuit file instead of compiling fresh
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Max allowed deviation
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanMetric {
    Steps,
    Gates,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Comma-separated exponent list, e.g. 2,3,4,5 (twisted_toroid: n = m);
    /// --n is ignored when this is given
    #[arg(long)]
    pub sizes: String,
    #[arg(long, value_enum, default_value_t = ScanMetric::Steps)]
    pub metric: ScanMetric,
    /// Steps-to-peak window: tMax = ceil(factor * sqrt(N))
    #[arg(long, default_value_t = DEFAULT_WINDOW_FACTOR)]
    pub window_factor: f64,
    /// Output path base
    #[arg(long, default_value = "qwalk_scan")]
    pub out: PathBuf,
}

#[derive(Debug)]
pub enum CliError {
    Io(std::io::Error),
    Usage(String),
    SizeCap(String),
    NotCompilable(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::SizeCap(_) => 3,
            CliError::NotCompilable(_) => 4,
            CliError::Verification(_) => 5,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(e) => write!(f, "io error: {e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::SizeCap(m) => write!(f, "{m}"),
            CliError::NotCompilable(m) => write!(f, "{m}"),
            CliError::Verification(m) => write!(f, "{m}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeCap { .. } | Error::UnitaryCap { .. } => CliError::SizeCap(e.to_string()),
            Error::NotCompilable(_) => CliError::NotCompilable(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Amplitude cap, with the environment override applied.
pub fn amp_cap() -> usize {
    std::env::var(AMP_CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_AMP_CAP)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Compile(args) => cmd_compile(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Scan(args) => cmd_scan(&args),
    }
}

fn resolve_marked(spec: &FamilySpec, marked: Option<usize>) -> Result<NodeId, CliError> {
    let node = match marked {
        Some(v) if v < spec.node_count() => NodeId(v),
        Some(v) => {
            return Err(CliError::Usage(format!(
                "marked node {v} out of range for {} nodes",
                spec.node_count()
            )))
        }
        None => default_marked(spec),
    };
    Ok(node)
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let mut name = base.file_name().map_or_else(
        || "out".to_string(),
        |n| n.to_string_lossy().into_owned(),
    );
    name.push_str(suffix);
    base.with_file_name(name)
}

fn curve_csv(curve: &Curve) -> String {
    let mut out = String::from("step,probability\n");
    for &(t, p) in &curve.points {
        writeln!(out, "{t},{p}").unwrap();
    }
    out
}

fn json_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct SimulateJson<'a> {
    #[serde(flatten)]
    spec: FamilySpec,
    marked: usize,
    peak: &'a PeakReport,
    curve: &'a [(usize, f64)],
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    if args.tmax < 1 {
        return Err(CliError::Usage("--tmax must be at least 1".into()));
    }
    let spec = args.family.spec()?;
    let marked = resolve_marked(&spec, args.marked)?;
    let curve = success_curve_with_cap(spec, marked, args.tmax, amp_cap())?;
    let peak = peak_report(&curve);
    match args.format {
        OutputFormat::Csv => {
            let csv_path = with_suffix(&args.out, ".csv");
            let peak_path = with_suffix(&args.out, ".peak.json");
            fs::write(&csv_path, curve_csv(&curve))?;
            fs::write(&peak_path, json_pretty(&peak))?;
            println!(
                "wrote {} and {} (t*={}, p*={})",
                csv_path.display(),
                peak_path.display(),
                peak.t_star,
                peak.p_star
            );
        }
        OutputFormat::Json => {
            let path = with_suffix(&args.out, ".json");
            let combined = SimulateJson {
                spec,
                marked: marked.0,
                peak: &peak,
                curve: &curve.points,
            };
            fs::write(&path, json_pretty(&combined))?;
            println!(
                "wrote {} (t*={}, p*={})",
                path.display(),
                peak.t_star,
                peak.p_star
            );
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct RegisterEntry {
    name: String,
    width: usize,
}

#[derive(Serialize)]
struct Manifest {
    #[serde(flatten)]
    spec: FamilySpec,
    marked: usize,
    registers: Vec<RegisterEntry>,
    qubits: usize,
    ancilla_qubits: usize,
    composite_gates: usize,
    lowered_gates: usize,
    lowered_two_qubit_gates: usize,
}

pub fn cmd_compile(args: &CompileArgs) -> Result<(), CliError> {
    let spec = args.family.spec()?;
    let marked = resolve_marked(&spec, args.marked)?;
    let composite = build_step_circuit(&spec, marked)?;
    let lowered = lower(&composite)?;

    let manifest = Manifest {
        spec,
        marked: marked.0,
        registers: lowered
            .layout()
            .registers()
            .iter()
            .map(|r| RegisterEntry {
                name: r.name.clone(),
                width: r.width,
            })
            .collect(),
        qubits: lowered.qubit_count(),
        ancilla_qubits: lowered
            .layout()
            .register("ancilla")
            .map_or(0, |r| r.width),
        composite_gates: composite.gate_count(),
        lowered_gates: lowered.gate_count(),
        lowered_two_qubit_gates: lowered.count_two_qubit_gates()?,
    };

    let circuit_path = with_suffix(&args.out, ".qc");
    let manifest_path = with_suffix(&args.out, ".manifest.json");
    fs::write(&circuit_path, format::serialize(&lowered))?;
    fs::write(&manifest_path, json_pretty(&manifest))?;
    println!(
        "wrote {} and {} ({} qubits, {} two-qubit gates)",
        circuit_path.display(),
        manifest_path.display(),
        manifest.qubits,
        manifest.lowered_two_qubit_gates
    );
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let spec = args.family.spec()?;
    let marked = resolve_marked(&spec, args.marked)?;
    let circuit = match &args.circuit {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            format::parse(&text)?
        }
        None => lower(&build_step_circuit(&spec, marked)?)?,
    };
    let report = verify_step_circuit(&spec, marked, &circuit, 14)?;
    println!(
        "max deviation {:.3e}, ancilla escape {:.3e} (tolerance {:.1e})",
        report.max_deviation, report.restoration_deviation, args.tolerance
    );
    if report.max_deviation > args.tolerance || report.restoration_deviation > args.tolerance {
        return Err(CliError::Verification(format!(
            "compiled circuit deviates from the structured step by {:.3e}",
            report.max_deviation.max(report.restoration_deviation)
        )));
    }
    Ok(())
}

fn parse_sizes(text: &str) -> Result<Vec<usize>, CliError> {
    let sizes: Result<Vec<usize>, _> = text
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect();
    let sizes = sizes.map_err(|_| CliError::Usage(format!("bad --sizes list `{text}`")))?;
    if sizes.is_empty() {
        return Err(CliError::Usage("--sizes must be nonempty".into()));
    }
    Ok(sizes)
}

fn specs_for(family: &str, sizes: &[usize]) -> Result<Vec<FamilySpec>, CliError> {
    sizes
        .iter()
        .map(|&n| {
            let spec = match family {
                "hypercube" => FamilySpec::Hypercube { n },
                "complete" => FamilySpec::CompleteSelfLoop { n },
                "twisted_toroid" => FamilySpec::TwistedToroid { n, m: n },
                other => {
                    return Err(CliError::Usage(format!("unknown family `{other}`")))
                }
            };
            spec.validate()?;
            Ok(spec)
        })
        .collect()
}

fn steps_scan_csv(scan: &ScalingScan) -> String {
    let mut out = String::from("N,t_star,p_star,period\n");
    for row in &scan.rows {
        let period = row.period.map_or(String::new(), |p| p.to_string());
        writeln!(out, "{},{},{},{}", row.n_nodes, row.t_star, row.p_star, period).unwrap();
    }
    out
}

fn gates_scan_csv(scan: &GateCountScan) -> String {
    let mut out = String::from("N,two_qubit_gates\n");
    for row in &scan.rows {
        writeln!(out, "{},{}", row.n_nodes, row.two_qubit_gates).unwrap();
    }
    out
}

pub fn cmd_scan(args: &ScanArgs) -> Result<(), CliError> {
    let sizes = parse_sizes(&args.sizes)?;
    let specs = specs_for(&args.family.family, &sizes)?;
    let csv_path = with_suffix(&args.out, ".csv");
    let fit_path = with_suffix(&args.out, ".fit.json");
    match args.metric {
        ScanMetric::Steps => {
            if specs.len() < 3 {
                return Err(CliError::Usage(
                    "steps scan needs at least 3 sizes".into(),
                ));
            }
            let scan = scaling_scan(&specs, args.window_factor, amp_cap())?;
            fs::write(&csv_path, steps_scan_csv(&scan))?;
            fs::write(&fit_path, json_pretty(&scan.fit))?;
            println!(
                "wrote {} and {} (alpha={:.4}, r2={:.4})",
                csv_path.display(),
                fit_path.display(),
                scan.fit.alpha,
                scan.fit.r2
            );
        }
        ScanMetric::Gates => {
            let scan = gate_count_scan(&specs)?;
            fs::write(&csv_path, gates_scan_csv(&scan))?;
            fs::write(&fit_path, json_pretty(&scan.fit))?;
            println!(
                "wrote {} and {} (k={:.4}, r2={:.4})",
                csv_path.display(),
                fit_path.display(),
                scan.fit.k,
                scan.fit.r2
            );
        }
    }
    Ok(())
}

