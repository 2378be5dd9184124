//! Command-line front end for `rrldp`.
//!
//! [`run`] takes the full argument vector and explicit output streams so the
//! binary and the tests share one code path.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use rrldp::analytics::{
    classify_regime, epsilon_of, ic_mc_crossover, min_sample_size, params_from_epsilon,
    regime_thresholds, variance_theoretical, variance_with_replacement, DesignAux, PiAssumption,
    PrivacyBudget,
};
use rrldp::io::{
    emit_report, ingest_csv, write_synthetic_hcovany, ColumnRef, DatasetCoding, ReportFormat,
    RunManifest,
};
use rrldp::mechanisms::{survey_run, Deck, MechanismKind, MechanismSpec, Population};
use rrldp::rng::SeededSource;
use rrldp::simulation::{
    exact_oracle_with_cap, exact_oracle_with_replacement, monte_carlo, sweep_epsilon, SimConfig,
    SimulationReport, DEFAULT_ORACLE_CAP,
};

mod grid;

pub use grid::{parse_epsilons, parse_mechanisms, SensitivityLevel};

/// Relative `--out` and `--manifest` paths are resolved against this
/// directory when it is set.
pub const OUTPUT_DIR_ENV: &str = "RRLDP_OUTPUT_DIR";

/// Flags that only choose where output goes or how it is computed, not what
/// it contains. They are left out of recorded manifests.
const DESTINATION_FLAGS: [&str; 3] = ["--out", "--manifest", "--threads"];

#[derive(Debug, Parser)]
#[command(
    name = "rrldp",
    version,
    about = "Randomized response under local differential privacy"
)]
struct Cli {
    /// Master seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for Monte Carlo replicates. Does not change results.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Monte Carlo census surveys compared with the closed-form variance.
    Simulate(SimulateArgs),
    /// Variance against privacy budget, analytic or simulated.
    Sweep(SweepArgs),
    /// Regime thresholds and the IC/MC crossover for a census size.
    Compare(CompareArgs),
    /// Smallest census meeting a variance target.
    SampleSize(SampleSizeArgs),
    /// Read a dataset and optionally run one survey on it.
    Ingest(IngestArgs),
    /// Mechanism parameters spending a given budget.
    Design(DesignArgs),
    /// Exact estimator moments by enumeration.
    Oracle(OracleArgs),
    /// Write a synthetic HCOVANY-style dataset.
    Synth(SynthArgs),
    /// Re-run a recorded manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args, Serialize)]
struct DestinationArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,

    /// Where to write the run manifest. Defaults to `<out>.manifest.json`
    /// for report output written to a file.
    #[arg(long)]
    #[serde(skip)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct DesignAuxArgs {
    /// Proportion of the middle card value (Christofides designs).
    #[arg(long, default_value_t = 0.0)]
    p2: f64,

    /// Probability that the unrelated statement is true (Simmons).
    #[arg(long = "pi-b", default_value_t = 0.5)]
    pi_b: f64,
}

impl DesignAuxArgs {
    fn aux(&self) -> DesignAux {
        DesignAux {
            pi_b: self.pi_b,
            p2: self.p2,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct DataArgs {
    /// CSV dataset to survey instead of a generated census.
    #[arg(long)]
    data: Option<PathBuf>,

    /// Target column name.
    #[arg(long, default_value = "HCOVANY")]
    column: String,

    /// Target column position (zero-based); overrides --column.
    #[arg(long = "column-index")]
    column_index: Option<usize>,

    /// Codes marking the sensitive group.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    sensitive: Vec<String>,

    /// Codes marking everyone else.
    #[arg(long = "non-sensitive", value_delimiter = ',', default_value = "2")]
    non_sensitive: Vec<String>,
}

impl DataArgs {
    fn coding(&self) -> DatasetCoding {
        DatasetCoding {
            column: match self.column_index {
                Some(i) => ColumnRef::Index(i),
                None => ColumnRef::Name(self.column.clone()),
            },
            sensitive: self.sensitive.clone(),
            non_sensitive: self.non_sensitive.clone(),
        }
    }

    fn load(&self) -> anyhow::Result<Option<Population>> {
        match &self.data {
            None => Ok(None),
            Some(path) => ingest_csv(path, &self.coding())
                .map(Some)
                .with_context(|| format!("reading {}", path.display())),
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct GridArgs {
    /// Mechanisms, comma separated, or `all`.
    #[arg(long, value_delimiter = ',', required = true)]
    mechanism: Vec<String>,

    /// Budgets: values and `start:stop:step` ranges, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    epsilon: Vec<String>,

    /// Preset budget range used when --epsilon is absent.
    #[arg(long = "sensitivity-level", value_enum)]
    sensitivity_level: Option<SensitivityLevel>,

    /// Census size; taken from the data when --data is given.
    #[arg(long)]
    n: Option<usize>,

    /// Sensitive proportion; taken from the data when --data is given.
    #[arg(long = "pi-a")]
    pi_a: Option<f64>,

    #[command(flatten)]
    aux: DesignAuxArgs,

    #[command(flatten)]
    data: DataArgs,

    /// Report format.
    #[arg(long, default_value = "csv")]
    format: ReportFormat,
}

impl GridArgs {
    fn config(&self, replications: usize, seed: u64) -> anyhow::Result<SimConfig> {
        let kinds = parse_mechanisms(&self.mechanism)?;
        let epsilons = match (self.epsilon.is_empty(), self.sensitivity_level) {
            (false, _) => parse_epsilons(&self.epsilon)?,
            (true, Some(level)) => level.epsilons(),
            (true, None) => bail!("give --epsilon or --sensitivity-level"),
        };
        let base = SimConfig {
            aux: self.aux.aux(),
            replications,
            seed,
            ..SimConfig::new(kinds, epsilons, 0, 0.0)
        };
        if let Some(pop) = self.data.load()? {
            if self.n.is_some() || self.pi_a.is_some() {
                bail!("--n and --pi-a come from the data when --data is given");
            }
            return Ok(base.with_population(pop));
        }
        let (Some(n), Some(pi_a)) = (self.n, self.pi_a) else {
            bail!("give --n and --pi-a, or --data");
        };
        Ok(SimConfig { n, pi_a, ..base })
    }
}

#[derive(Debug, Args, Serialize)]
struct SimulateArgs {
    #[command(flatten)]
    grid: GridArgs,

    /// Replications per cell.
    #[arg(long)]
    reps: usize,

    #[command(flatten)]
    dest: DestinationArgs,
}

#[derive(Debug, Args, Serialize)]
struct SweepArgs {
    #[command(flatten)]
    grid: GridArgs,

    /// Replications per cell; 0 reports closed-form variances only.
    #[arg(long, default_value_t = 0, conflicts_with = "analytic_only")]
    reps: usize,

    /// Same as --reps 0.
    #[arg(long = "analytic-only")]
    analytic_only: bool,

    #[command(flatten)]
    dest: DestinationArgs,
}

#[derive(Debug, Args, Serialize)]
struct CompareArgs {
    #[arg(long)]
    n: u64,

    #[arg(long)]
    epsilon: f64,

    #[arg(long, default_value_t = 0.0)]
    p2: f64,

    /// Also rank the three families at this proportion.
    #[arg(long = "pi-a")]
    pi_a: Option<f64>,

    #[arg(long)]
    json: bool,

    #[command(flatten)]
    dest: DestinationArgs,
}

#[derive(Debug, Args, Serialize)]
struct SampleSizeArgs {
    #[arg(long)]
    mechanism: MechanismKind,

    #[arg(long)]
    epsilon: f64,

    /// Assumed proportion (used by the deck design only).
    #[arg(long = "pi-a", required_unless_present = "worst_case")]
    pi_a: Option<f64>,

    /// Size for pi_A = 1/2 instead of a known proportion.
    #[arg(long = "worst-case", conflicts_with = "pi_a")]
    worst_case: bool,

    /// Variance target.
    #[arg(long = "var")]
    var: f64,

    #[arg(long, default_value_t = 0.0)]
    p2: f64,

    #[arg(long)]
    json: bool,

    #[command(flatten)]
    dest: DestinationArgs,
}

#[derive(Debug, Args, Serialize)]
struct IngestArgs {
    /// CSV dataset.
    path: PathBuf,

    #[arg(long, default_value = "HCOVANY")]
    column: String,

    #[arg(long = "column-index")]
    column_index: Option<usize>,

    #[arg(long, value_delimiter = ',', default_value = "1")]
    sensitive: Vec<String>,

    #[arg(long = "non-sensitive", value_delimiter = ',', default_value = "2")]
    non_sensitive: Vec<String>,

    /// Run one survey with this mechanism and report the estimate.
    #[arg(long, requires = "epsilon")]
    mechanism: Option<MechanismKind>,

    #[arg(long)]
    epsilon: Option<f64>,

    #[command(flatten)]
    aux: DesignAuxArgs,

    #[arg(long)]
    json: bool,

    #[command(flatten)]
    dest: DestinationArgs,
}

#[derive(Debug, Args, Serialize)]
struct DesignArgs {
    #[arg(long)]
    mechanism: MechanismKind,

    #[arg(long)]
    epsilon: f64,

    #[command(flatten)]
    aux: DesignAuxArgs,

    /// Census size; shows the deck the design deals for `N` cards.
    #[arg(long)]
    n: Option<u64>,

    #[arg(long)]
    json: bool,

    #[command(flatten)]
    dest: DestinationArgs,
}

#[derive(Debug, Args, Serialize)]
struct OracleArgs {
    /// Mechanism designed from --epsilon; ignored with --spec.
    #[arg(long, required_unless_present = "spec")]
    mechanism: Option<MechanismKind>,

    #[arg(long, required_unless_present = "spec")]
    epsilon: Option<f64>,

    /// Explicit design as JSON, e.g. `{"mechanism":"warner","p":0.25}`.
    #[arg(long, conflicts_with_all = ["mechanism", "epsilon"])]
    spec: Option<String>,

    #[command(flatten)]
    aux: DesignAuxArgs,

    #[arg(long)]
    n: usize,

    #[arg(long = "pi-a")]
    pi_a: f64,

    /// Enumerate the classic with-replacement survey instead.
    #[arg(long = "with-replacement")]
    with_replacement: bool,

    /// Largest census to enumerate.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    cap: usize,

    #[arg(long)]
    json: bool,

    #[command(flatten)]
    dest: DestinationArgs,
}

#[derive(Debug, Args, Serialize)]
struct SynthArgs {
    #[arg(long)]
    n: usize,

    #[arg(long = "pi-a", default_value_t = 0.0778)]
    pi_a: f64,

    #[command(flatten)]
    dest: DestinationArgs,
}

#[derive(Debug, Args, Serialize)]
struct ReplayArgs {
    /// Manifest written by an earlier run.
    manifest_path: PathBuf,

    #[command(flatten)]
    dest: DestinationArgs,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Sweep(_) => "sweep",
            Command::Compare(_) => "compare",
            Command::SampleSize(_) => "sample-size",
            Command::Ingest(_) => "ingest",
            Command::Design(_) => "design",
            Command::Oracle(_) => "oracle",
            Command::Synth(_) => "synth",
            Command::Replay(_) => "replay",
        }
    }

    fn dest(&self) -> &DestinationArgs {
        match self {
            Command::Simulate(a) => &a.dest,
            Command::Sweep(a) => &a.dest,
            Command::Compare(a) => &a.dest,
            Command::SampleSize(a) => &a.dest,
            Command::Ingest(a) => &a.dest,
            Command::Design(a) => &a.dest,
            Command::Oracle(a) => &a.dest,
            Command::Synth(a) => &a.dest,
            Command::Replay(a) => &a.dest,
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit status: 0 on success, 1 on a failed run, 2 on a usage error.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return status;
        }
    };
    let recorded = recorded_argv(&argv[1.min(argv.len())..]);
    match execute(cli, recorded, None, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            1
        }
    }
}

fn execute(
    cli: Cli,
    recorded: Vec<String>,
    timestamp: Option<String>,
    stdout: &mut dyn Write,
) -> anyhow::Result<()> {
    if let Command::Replay(args) = &cli.command {
        return replay(args, cli.threads, stdout);
    }
    let timestamp = timestamp.unwrap_or_else(now_rfc3339);
    let manifest = RunManifest::new(
        cli.command.name(),
        recorded,
        serde_json::to_value(&cli.command)?,
        cli.seed,
        timestamp,
    );
    let output = match cli.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()?
            .install(|| produce(&cli, &manifest))?,
        None => produce(&cli, &manifest)?,
    };
    deliver(&cli.command, output, &manifest, stdout)
}

enum Output {
    Report(Vec<u8>),
    Text(String),
    /// Already written to `--out` by the command.
    Written(String),
}

fn produce(cli: &Cli, manifest: &RunManifest) -> anyhow::Result<Output> {
    match &cli.command {
        Command::Simulate(a) => {
            let seed = cli
                .seed
                .context("simulate needs --seed; runs never draw hidden entropy")?;
            if a.reps == 0 {
                bail!("--reps must be at least 1");
            }
            let report = monte_carlo(&a.grid.config(a.reps, seed)?)?;
            report_bytes(&report, a.grid.format, manifest)
        }
        Command::Sweep(a) => {
            let reps = if a.analytic_only { 0 } else { a.reps };
            let seed = match (reps, cli.seed) {
                (0, s) => s.unwrap_or(0),
                (_, Some(s)) => s,
                (_, None) => bail!("a simulated sweep needs --seed"),
            };
            let report = sweep_epsilon(&a.grid.config(reps, seed)?)?;
            report_bytes(&report, a.grid.format, manifest)
        }
        Command::Compare(a) => compare(a),
        Command::SampleSize(a) => sample_size(a),
        Command::Ingest(a) => ingest(a, cli.seed),
        Command::Design(a) => design(a),
        Command::Oracle(a) => oracle(a),
        Command::Synth(a) => synth(a, cli.seed),
        Command::Replay(_) => unreachable!("handled before dispatch"),
    }
}

fn report_bytes(
    report: &SimulationReport,
    format: ReportFormat,
    manifest: &RunManifest,
) -> anyhow::Result<Output> {
    Ok(Output::Report(emit_report(report, format, Some(manifest))?))
}

fn deliver(
    command: &Command,
    output: Output,
    manifest: &RunManifest,
    stdout: &mut dyn Write,
) -> anyhow::Result<()> {
    let dest = command.dest();
    let out = dest.out.as_deref().map(resolve_output);
    let manifest_path = match (&dest.manifest, &out, &output) {
        (Some(m), _, _) => Some(resolve_output(m)),
        (None, Some(o), Output::Report(_)) => Some(sidecar(o)),
        _ => None,
    };
    match output {
        Output::Report(bytes) => write_to(out.as_deref(), &bytes, stdout)?,
        Output::Text(text) => write_to(out.as_deref(), text.as_bytes(), stdout)?,
        Output::Written(summary) => stdout.write_all(summary.as_bytes())?,
    }
    if let Some(path) = manifest_path {
        manifest
            .write(&path)
            .with_context(|| format!("writing manifest {}", path.display()))?;
    }
    Ok(())
}

fn write_to(path: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => Ok(stdout.write_all(bytes)?),
    }
}

fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Resolves a relative output path against `RRLDP_OUTPUT_DIR` when set.
pub fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn recorded_argv(args: &[OsString]) -> Vec<String> {
    let mut kept = Vec::with_capacity(args.len());
    let mut iter = args.iter().map(|a| a.to_string_lossy().into_owned());
    while let Some(arg) = iter.next() {
        if DESTINATION_FLAGS.contains(&arg.as_str()) {
            iter.next();
        } else if !DESTINATION_FLAGS
            .iter()
            .any(|f| arg.starts_with(&format!("{f}=")))
        {
            kept.push(arg);
        }
    }
    kept
}

fn now_rfc3339() -> String {
    let now = match std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse::<i64>().ok())
        .and_then(|secs| chrono::DateTime::from_timestamp(secs, 0))
    {
        Some(fixed) => fixed,
        None => chrono::Utc::now(),
    };
    now.to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn replay(args: &ReplayArgs, threads: Option<usize>, stdout: &mut dyn Write) -> anyhow::Result<()> {
    let path = resolve_output(&args.manifest_path);
    let manifest =
        RunManifest::read(&path).with_context(|| format!("reading manifest {}", path.display()))?;
    if manifest.version != env!("CARGO_PKG_VERSION") {
        bail!(
            "manifest was written by version {}, this is {}",
            manifest.version,
            env!("CARGO_PKG_VERSION")
        );
    }
    let mut argv: Vec<OsString> = vec!["rrldp".into()];
    argv.extend(manifest.argv.iter().map(OsString::from));
    for (flag, value) in [
        ("--out", &args.dest.out),
        ("--manifest", &args.dest.manifest),
    ] {
        if let Some(v) = value {
            argv.push(flag.into());
            argv.push(v.into());
        }
    }
    if let Some(t) = threads {
        argv.push("--threads".into());
        argv.push(t.to_string().into());
    }
    let cli = Cli::try_parse_from(&argv).context("manifest arguments no longer parse")?;
    if matches!(cli.command, Command::Replay(_)) {
        bail!("a manifest cannot replay another manifest");
    }
    execute(
        cli,
        manifest.argv.clone(),
        Some(manifest.timestamp.clone()),
        stdout,
    )
}

fn budget(eps: f64) -> anyhow::Result<PrivacyBudget> {
    Ok(PrivacyBudget::new(eps)?)
}

fn render(
    json: bool,
    value: &serde_json::Value,
    lines: &[(&str, String)],
) -> anyhow::Result<Output> {
    if json {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        return Ok(Output::Text(s));
    }
    let mut s = String::new();
    for (k, v) in lines {
        s.push_str(&format!("{k}: {v}\n"));
    }
    Ok(Output::Text(s))
}

fn compare(a: &CompareArgs) -> anyhow::Result<Output> {
    let eps = budget(a.epsilon)?;
    let (pi_a1, pi_a2) = regime_thresholds(a.n, eps, a.p2)?;
    let (lo, hi) = ic_mc_crossover(a.n)?;
    let mut value = serde_json::json!({
        "N": a.n,
        "epsilon": a.epsilon,
        "p2": a.p2,
        "pi_A1": pi_a1,
        "pi_A2": pi_a2,
        "length": pi_a2 - pi_a1,
        "ic_mc_crossover": [lo, hi],
    });
    let mut lines = vec![
        ("pi_A1", pi_a1.to_string()),
        ("pi_A2", pi_a2.to_string()),
        ("length", (pi_a2 - pi_a1).to_string()),
        ("ic_mc_crossover", format!("({lo}, {hi})")),
    ];
    if let Some(pi) = a.pi_a {
        let report = classify_regime(pi, a.n, eps, a.p2)?;
        for (family, v) in &report.variances {
            lines.push((family.label(), v.to_string()));
        }
        lines.push(("ordering", report.ordering_label()));
        value["pi_A"] = pi.into();
        value["ordering"] = report.ordering_label().into();
        value["variances"] = report
            .variances
            .iter()
            .map(|(f, v)| (f.label().to_string(), serde_json::Value::from(*v)))
            .collect::<serde_json::Map<_, _>>()
            .into();
    }
    render(a.json, &value, &lines)
}

fn sample_size(a: &SampleSizeArgs) -> anyhow::Result<Output> {
    let assumption = match a.pi_a {
        Some(p) if !a.worst_case => PiAssumption::Known(p),
        _ => PiAssumption::WorstCase,
    };
    let n = min_sample_size(a.mechanism, budget(a.epsilon)?, assumption, a.var, a.p2)?;
    if a.json {
        let value = serde_json::json!({
            "mechanism": a.mechanism,
            "epsilon": a.epsilon,
            "pi_A": assumption.value(),
            "var": a.var,
            "p2": a.p2,
            "N": n,
        });
        return render(true, &value, &[]);
    }
    Ok(Output::Text(format!("{n}\n")))
}

fn ingest(a: &IngestArgs, seed: Option<u64>) -> anyhow::Result<Output> {
    let coding = DatasetCoding {
        column: match a.column_index {
            Some(i) => ColumnRef::Index(i),
            None => ColumnRef::Name(a.column.clone()),
        },
        sensitive: a.sensitive.clone(),
        non_sensitive: a.non_sensitive.clone(),
    };
    let pop =
        ingest_csv(&a.path, &coding).with_context(|| format!("reading {}", a.path.display()))?;
    let n = pop.len();
    let pi = pop.true_proportion();
    let mut value = serde_json::json!({ "N": n, "pi_A": pi, "members": pop.members() });
    let mut lines = vec![
        ("N", n.to_string()),
        ("pi_A", pi.to_string()),
        ("members", pop.members().to_string()),
    ];
    if let (Some(kind), Some(eps)) = (a.mechanism, a.epsilon) {
        let seed = seed.context("surveying the data needs --seed")?;
        let spec = params_from_epsilon(kind, budget(eps)?, &a.aux.aux())?.realize(n as u64)?;
        let responses = survey_run(&pop, &spec, &mut SeededSource::new(seed))?;
        let estimate = rrldp::analytics::estimate(&spec, &responses)?;
        let var = variance_theoretical(&spec, n as u64, pi)?;
        value["mechanism"] = serde_json::to_value(kind)?;
        value["epsilon"] = epsilon_of(&spec)?.epsilon().into();
        value["estimate"] = estimate.value().into();
        value["var_theoretical"] = var.into();
        lines.push(("mechanism", kind.to_string()));
        lines.push(("epsilon", epsilon_of(&spec)?.to_string()));
        lines.push(("estimate", estimate.value().to_string()));
        lines.push(("var_theoretical", var.to_string()));
    }
    render(a.json, &value, &lines)
}

fn design(a: &DesignArgs) -> anyhow::Result<Output> {
    let spec = params_from_epsilon(a.mechanism, budget(a.epsilon)?, &a.aux.aux())?;
    let mut value = serde_json::json!({
        "design": spec,
        "epsilon": epsilon_of(&spec)?.epsilon(),
    });
    let mut lines = vec![
        ("design", serde_json::to_string(&spec)?),
        ("epsilon", epsilon_of(&spec)?.to_string()),
    ];
    if let (Some(n), Some(dist)) = (a.n, spec.distribution()) {
        let deck = Deck::build(n, dist)?;
        let realized = MechanismSpec::ImprovedChristofides {
            distribution: deck.realized_distribution().clone(),
        };
        let eps = epsilon_of(&realized)?.epsilon();
        let counts = deck.initial_counts().to_vec();
        lines.push((
            "deck",
            counts
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(","),
        ));
        lines.push(("realized_epsilon", eps.to_string()));
        value["deck"] = serde_json::to_value(&counts)?;
        value["realized_epsilon"] = eps.into();
    }
    render(a.json, &value, &lines)
}

fn oracle(a: &OracleArgs) -> anyhow::Result<Output> {
    let pop = Population::from_proportion(a.n, a.pi_a)?;
    let spec = match (&a.spec, a.mechanism, a.epsilon) {
        (Some(json), _, _) => {
            serde_json::from_str::<MechanismSpec>(json).context("parsing --spec")?
        }
        (None, Some(kind), Some(eps)) => params_from_epsilon(kind, budget(eps)?, &a.aux.aux())?,
        _ => bail!("give --spec, or --mechanism and --epsilon"),
    };
    let (exact, theory) = if a.with_replacement {
        (
            exact_oracle_with_replacement(&spec, &pop, a.cap)?,
            variance_with_replacement(&spec, a.n as u64, a.pi_a)?,
        )
    } else {
        let spec = spec.realize(a.n as u64)?;
        (
            exact_oracle_with_cap(&spec, &pop, a.cap)?,
            variance_theoretical(&spec, a.n as u64, a.pi_a)?,
        )
    };
    let value = serde_json::json!({
        "mean": exact.mean,
        "variance": exact.variance,
        "outcomes": exact.outcomes.to_string(),
        "var_theoretical": theory,
        "bias": exact.mean - pop.true_proportion(),
    });
    let lines = [
        ("mean", exact.mean.to_string()),
        ("variance", exact.variance.to_string()),
        ("var_theoretical", theory.to_string()),
        ("outcomes", exact.outcomes.to_string()),
    ];
    render(a.json, &value, &lines)
}

fn synth(a: &SynthArgs, seed: Option<u64>) -> anyhow::Result<Output> {
    let seed = seed.context("synth needs --seed")?;
    let Some(out) = a.dest.out.as_deref().map(resolve_output) else {
        let mut buf = Vec::new();
        write_synthetic_hcovany(&mut buf, a.n, a.pi_a, seed)?;
        return Ok(Output::Text(String::from_utf8(buf)?));
    };
    let file =
        std::fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?;
    let members = write_synthetic_hcovany(std::io::BufWriter::new(file), a.n, a.pi_a, seed)?;
    Ok(Output::Written(format!(
        "wrote {} rows ({} coded 1) to {}\n",
        a.n,
        members,
        out.display()
    )))
}
