//! The `rayoracle` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::boolean::{SopExpression, TruthTable};
use crate::circuit::{export_qasm, lower, Circuit, GateBasis};
use crate::error::Error;
use crate::minimizer::{minimize, prime_implicants};
use crate::oracle::{
    synthesize, verify_oracle, Mode, OracleLayout, ParamSelector, Scene, VerifyReport,
};
use crate::sim::{self, sample, Initial};

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;
pub const EXIT_CAPACITY: u8 = 4;
pub const EXIT_VERIFICATION: u8 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::Domain(_) => EXIT_PARSE,
            Error::Validation(_) => EXIT_VALIDATION,
            Error::Capacity(_) => EXIT_CAPACITY,
            Error::Verification(_) => EXIT_VERIFICATION,
            Error::Inconsistent(_) | Error::Unsupported(_) => EXIT_FAILURE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (exit {})", self.message, self.code)
    }
}

impl std::error::Error for CliError {}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError {
        code: EXIT_FAILURE,
        message: format!("{}: {e}", path.display()),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rayoracle",
    version,
    about = "Synthesize, minimize and simulate ray-casting lookup oracles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimize one Boolean function and print its primes and cover.
    Minimize(MinimizeArgs),
    /// Write OpenQASM and a metrics record per mode.
    Synth(RunConfig),
    /// Simulate, sample and verify the oracle.
    Simulate(SimulateArgs),
    /// Print optimized vs naive depth, gate and qubit counts.
    Compare(RunConfig),
}

#[derive(Debug, Args)]
pub struct MinimizeArgs {
    /// Comma-separated on-set, e.g. `0,1,2,5,6,7`.
    #[arg(long, requires = "vars", conflicts_with = "pla")]
    pub onset: Option<String>,
    /// Number of input variables for `--onset`.
    #[arg(long)]
    pub vars: Option<u32>,
    /// File of PLA cubes (`0`, `1`, `-`, most significant variable first).
    #[arg(long)]
    pub pla: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Naive,
    Optimized,
    Both,
}

impl ModeArg {
    fn modes(self) -> Vec<Mode> {
        match self {
            ModeArg::Naive => vec![Mode::Naive],
            ModeArg::Optimized => vec![Mode::Optimized],
            ModeArg::Both => vec![Mode::Optimized, Mode::Naive],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Logical,
    Toffoli,
    Elementary,
}

impl From<BasisArg> for GateBasis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Logical => GateBasis::Logical,
            BasisArg::Toffoli => GateBasis::Toffoli,
            BasisArg::Elementary => GateBasis::Elementary,
        }
    }
}

fn parse_selector(s: &str) -> Result<ParamSelector, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Scene file.
    #[arg(long)]
    pub scene: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = BasisArg::Toffoli)]
    pub basis: BasisArg,
    /// Number of measurement shots.
    #[arg(long, default_value_t = 4000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Parameters to encode, e.g. `mx,Mx`.
    #[arg(long = "params", value_parser = parse_selector, default_value = "mx,Mx,my,My")]
    pub params: ParamSelector,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub config: RunConfig,
    /// Print an ASCII bar chart of the histogram.
    #[arg(long)]
    pub chart: bool,
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let stdout = std::io::stdout();
    match execute(&cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError {
        code: e.exit_code() as u8,
        message: e.to_string(),
    })?;
    execute(&cli, out)
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let text = match &cli.command {
        Command::Minimize(args) => cmd_minimize(args)?,
        Command::Synth(cfg) => cmd_synth(cfg)?,
        Command::Simulate(args) => cmd_simulate(&args.config, args.chart)?,
        Command::Compare(cfg) => cmd_compare(cfg)?,
    };
    out.write_all(text.as_bytes())
        .map_err(|e| io_error(Path::new("<stdout>"), e))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| io_error(&path, e))
}

fn load_scene(path: &Path) -> Result<Scene, CliError> {
    Ok(Scene::parse(&read(path)?)?)
}

pub fn cmd_minimize(args: &MinimizeArgs) -> Result<String, CliError> {
    let table = match (&args.onset, &args.pla) {
        (Some(list), None) => {
            let vars = args.vars.expect("clap enforces --vars with --onset");
            let on: Vec<u32> = list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<u32>()
                        .map_err(|_| Error::parse(1, format!("bad on-set element {s:?}")))
                })
                .collect::<Result<_, _>>()?;
            TruthTable::new(vars, on)?
        }
        (None, Some(path)) => SopExpression::from_pla(&read(path)?)?.to_table(),
        _ => {
            return Err(CliError {
                code: EXIT_PARSE,
                message: "give either --onset with --vars, or --pla".into(),
            })
        }
    };

    let primes = prime_implicants(&table);
    let solution = minimize(&table)?;
    let mut s = String::new();
    let on: Vec<String> = table.on_set().iter().map(u32::to_string).collect();
    writeln!(s, "variables: {}", table.arity()).unwrap();
    writeln!(s, "on-set: {{{}}}", on.join(",")).unwrap();
    writeln!(s, "primes ({}):", primes.len()).unwrap();
    for p in primes.primes() {
        writeln!(
            s,
            "  {:<16} {}  {}",
            p.to_string(),
            p.to_pla(),
            p.literal_string()
        )
        .unwrap();
    }
    writeln!(
        s,
        "cover ({} terms, {} literals{}): {}",
        solution.cover.len(),
        solution.cover.literal_count(),
        if solution.is_provably_minimal {
            ", minimal"
        } else {
            ", heuristic"
        },
        solution.cover
    )
    .unwrap();
    writeln!(
        s,
        "minimum covers found: {}",
        solution.num_candidates_of_same_size
    )
    .unwrap();
    Ok(s)
}

/// Synthesizes and lowers one oracle, then checks it against the scene.
fn build(scene: &Scene, mode: Mode, cfg: &RunConfig) -> Result<(Circuit, VerifyReport), CliError> {
    let logical = synthesize(scene, mode, &cfg.params)?;
    let circuit = lower(&logical, cfg.basis.into())?;
    let report = verify_oracle(&circuit, scene, &cfg.params);
    Ok((circuit, report))
}

fn stem(mode: Mode, basis: GateBasis) -> String {
    format!("{mode}_{basis}")
}

fn record(scene: &Scene, mode: Mode, cfg: &RunConfig, c: &Circuit) -> String {
    let basis = GateBasis::from(cfg.basis);
    let data = c.data_width().to_string();
    let params = cfg.params.to_string();
    let fingerprint = scene.fingerprint();
    c.metrics().record(&[
        ("scene", &fingerprint),
        ("mode", mode.name()),
        ("basis", basis.name()),
        ("params", &params),
        ("data", &data),
    ])
}

/// Builds every requested mode and, for `both`, checks that the optimized
/// and naive circuits compute the same map before anything is written.
fn build_all(
    scene: &Scene,
    cfg: &RunConfig,
) -> Result<Vec<(Mode, Circuit, VerifyReport)>, CliError> {
    let mut built = Vec::new();
    for mode in cfg.mode.modes() {
        let (c, report) = build(scene, mode, cfg)?;
        built.push((mode, c, report));
    }
    if let [(_, _, a), (_, _, b)] = &built[..] {
        if a.outputs() != b.outputs() {
            return Err(Error::Verification(
                "optimized and naive oracles compute different maps".into(),
            )
            .into());
        }
    }
    Ok(built)
}

fn qasm_for(c: &Circuit) -> Result<String, CliError> {
    match export_qasm(c) {
        Ok(text) => Ok(text),
        Err(Error::Unsupported(_)) => {
            let lowered = lower(c, GateBasis::Toffoli)?;
            let body = export_qasm(&lowered)?;
            Ok(format!(
                "// MCX gates with more than two controls lowered to the toffoli basis\n{body}"
            ))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_synth(cfg: &RunConfig) -> Result<String, CliError> {
    let scene = load_scene(&cfg.scene)?;
    let built = build_all(&scene, cfg)?;
    let basis = GateBasis::from(cfg.basis);
    let mut s = String::new();
    for (mode, c, report) in &built {
        if !report.passed() {
            return Err(Error::Verification(format!("{mode} oracle:\n{report}")).into());
        }
        let name = stem(*mode, basis);
        let line = record(&scene, *mode, cfg, c);
        write(&cfg.out, &format!("{name}.qasm"), &qasm_for(c)?)?;
        write(&cfg.out, &format!("{name}.metrics"), &format!("{line}\n"))?;
        writeln!(s, "{line}").unwrap();
    }
    Ok(s)
}

pub fn cmd_simulate(cfg: &RunConfig, chart: bool) -> Result<String, CliError> {
    let scene = load_scene(&cfg.scene)?;
    let built = build_all(&scene, cfg)?;
    let basis = GateBasis::from(cfg.basis);
    let layout = OracleLayout::new(&scene, &cfg.params);
    let mut s = String::new();
    let mut failures = Vec::new();
    for (mode, c, report) in &built {
        let name = stem(*mode, basis);
        write(&cfg.out, &format!("{name}.verify.txt"), &report.to_string())?;
        let sv = sim::run(c, Initial::Zero)?;
        let hist = sample(&sv, cfg.shots, cfg.seed);
        write(
            &cfg.out,
            &format!("{name}.csv"),
            &hist.to_csv(|b| layout.label(b))?,
        )?;

        writeln!(
            s,
            "{mode} ({basis}): {} shots, seed {}, {} outcomes, verification {}",
            hist.shots,
            hist.seed,
            hist.counts.len(),
            if report.passed() { "pass" } else { "FAIL" }
        )
        .unwrap();
        for (label, count) in hist.labeled(|b| layout.label(b)) {
            writeln!(s, "  {label}: {count}").unwrap();
        }
        if chart && !hist.counts.is_empty() {
            s.push_str(&hist.bar_chart(|b| layout.label(b), 40));
        }
        if !report.passed() {
            failures.push(mode.name());
        }
    }
    if !failures.is_empty() {
        return Err(CliError {
            code: EXIT_VERIFICATION,
            message: format!("verification failed for {}\n{s}", failures.join(", ")),
        });
    }
    Ok(s)
}

pub fn cmd_compare(cfg: &RunConfig) -> Result<String, CliError> {
    let scene = load_scene(&cfg.scene)?;
    let both = RunConfig {
        mode: ModeArg::Both,
        ..cfg.clone()
    };
    let built = build_all(&scene, &both)?;
    let basis = GateBasis::from(cfg.basis);
    let metrics: Vec<_> = built.iter().map(|(_, c, _)| c.metrics()).collect();
    let (opt, naive) = (metrics[0], metrics[1]);

    let mut s = String::new();
    writeln!(
        s,
        "scene {}  basis {}  params {}",
        scene.fingerprint(),
        basis,
        cfg.params
    )
    .unwrap();
    writeln!(s, "{:<8} {:>10} {:>14}", "", "Optimized", "Not optimized").unwrap();
    for (name, a, b) in [
        ("Depth", opt.depth, naive.depth),
        ("# Gates", opt.gates, naive.gates),
        ("# Qubits", opt.qubits, naive.qubits),
    ] {
        writeln!(s, "{name:<8} {a:>10} {b:>14}").unwrap();
    }
    Ok(s)
}
