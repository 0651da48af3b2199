//! Command-line front end: one subcommand per experiment, CSV/JSON outputs
//! with a `<out>.run.json` sidecar holding the resolved configuration.

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use kicktop::classical::{stroboscopic_map, uniform_grid, write_trajectories_csv};
use kicktop::export::{create_buffered, fmt_f64, sidecar_path, write_json, write_run_sidecar};
use kicktop::observables::entropy_series;
use kicktop::recurrence::{compute_table, haar_random_state};
use kicktop::verify::{report_entries, run_checks};
use kicktop::{
    build_floquet, coherent_state, detect_period, husimi, search_rational_kappa,
    stability_landscape, CoherentParams, EntropyKind, Error, FloquetSpec, KappaClass, SearchConfig,
    SpinParams, StabilityConfig, StateVector,
};

#[derive(Parser, Serialize)]
#[command(
    name = "kicktop",
    version,
    about = "Quantum kicked top recurrences and observables"
)]
#[command(allow_negative_numbers = true, args_override_self = true)]
struct Cli {
    /// Flat key=value file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Smallest N with U^N proportional to the identity.
    Period(PeriodArgs),
    /// Periods of every kappa class over a spin range.
    Table(TableArgs),
    /// Rational kappa = pi j r/s screen for recurrences.
    Search(SearchArgs),
    /// Husimi Q of a kicked coherent state.
    Husimi(HusimiArgs),
    /// Single-qubit entropy series.
    Entropy(EntropyArgs),
    /// Classical stroboscopic trajectories.
    Classical(ClassicalArgs),
    /// Averaged entropy landscape of a detuned recurrence.
    Stability(StabilityArgs),
    /// Numerical identity checks.
    Verify(VerifyArgs),
}

#[derive(Args, Serialize, Clone)]
struct KappaArgs {
    /// Twist strength.
    #[arg(long, conflicts_with = "kappa_class")]
    kappa: Option<f64>,
    /// One of 0, pj/2, pj, 3pj/2, 2pj, 5pj/2, 3pj, 7pj/2, 4pj.
    #[arg(long)]
    kappa_class: Option<String>,
    /// Rotation angle per kick.
    #[arg(long, default_value_t = PI / 2.0)]
    p: f64,
}

#[derive(Args, Serialize)]
struct PeriodArgs {
    #[arg(long)]
    j: f64,
    #[command(flatten)]
    kappa: KappaArgs,
    #[arg(long, default_value_t = 500)]
    n_max: usize,
    #[arg(long, default_value_t = kicktop::DEFAULT_TOLERANCE)]
    tol: f64,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct TableArgs {
    #[arg(long, default_value_t = 0.5)]
    j_min: f64,
    #[arg(long)]
    j_max: f64,
    #[arg(long, default_value_t = 500)]
    n_max: usize,
    #[arg(long, default_value_t = kicktop::DEFAULT_TOLERANCE)]
    tol: f64,
    /// CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SearchArgs {
    #[arg(long, default_value_t = 5)]
    r_max: u32,
    #[arg(long, default_value_t = 5)]
    s_max: u32,
    #[arg(long, default_value_t = 1.5)]
    j_min: f64,
    #[arg(long, default_value_t = 7.5)]
    j_max: f64,
    #[arg(long, default_value_t = 500)]
    kicks: usize,
    /// Minimum-entropy threshold below which a cell is checked for recurrence.
    #[arg(long, default_value_t = 1e-7)]
    floor: f64,
    #[arg(long, default_value_t = 2.25)]
    theta: f64,
    #[arg(long, default_value_t = 2.0)]
    phi: f64,
    #[arg(long, default_value_t = kicktop::DEFAULT_TOLERANCE)]
    tol: f64,
    /// Leave out r/s with s in {1, 2}.
    #[arg(long)]
    skip_table_classes: bool,
    /// CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct HusimiArgs {
    #[arg(long)]
    j: f64,
    #[command(flatten)]
    kappa: KappaArgs,
    #[arg(long, default_value_t = 2.25)]
    theta: f64,
    #[arg(long, default_value_t = 2.0)]
    phi: f64,
    /// Kick at which Q is evaluated.
    #[arg(long, default_value_t = 0)]
    kick: usize,
    #[arg(long, default_value_t = 140)]
    n_theta: usize,
    #[arg(long, default_value_t = 280)]
    n_phi: usize,
    /// CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct EntropyArgs {
    #[arg(long)]
    j: f64,
    #[command(flatten)]
    kappa: KappaArgs,
    /// +y, coherent (uses --theta/--phi) or haar (uses --seed).
    #[arg(long, default_value = "coherent")]
    state: String,
    #[arg(long, default_value_t = 2.25)]
    theta: f64,
    #[arg(long, default_value_t = 2.0)]
    phi: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    kicks: usize,
    /// vn or linear.
    #[arg(long, default_value = "vn")]
    kind: String,
    /// CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ClassicalArgs {
    #[arg(long)]
    kappa: f64,
    #[arg(long, default_value_t = 150)]
    kicks: usize,
    #[arg(long, default_value_t = 15)]
    n_theta: usize,
    #[arg(long, default_value_t = 30)]
    n_phi: usize,
    /// CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct StabilityArgs {
    #[arg(long)]
    j: f64,
    #[arg(long, default_value = "pj")]
    kappa_class: String,
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 10)]
    applications: usize,
    #[arg(long, default_value_t = 70)]
    n_theta: usize,
    #[arg(long, default_value_t = 140)]
    n_phi: usize,
    /// CSV path; metadata goes to `<out>.meta.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// all, pi_twist_cases, twist_jpi, U4_U6, gaussian_sum_pij2, 3pij_and_5pij2.
    #[arg(long, default_value = "all")]
    check: String,
    #[arg(long, default_value_t = 0.5)]
    j_min: f64,
    #[arg(long, default_value_t = 20.0)]
    j_max: f64,
    #[arg(long, default_value_t = kicktop::DEFAULT_TOLERANCE)]
    tol: f64,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn verification(message: impl Into<String>) -> Self {
        Self {
            code: 4,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Json(_) => 3,
            Error::TableMismatch { .. } => 4,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn flag<T>(name: &str, r: kicktop::Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(|e| match e {
        Error::Io(_) | Error::Json(_) => e.into(),
        other => Failure::usage(format!("--{name}: {other}")),
    })
}

fn spin_flag(name: &str, j: f64) -> std::result::Result<SpinParams, Failure> {
    flag(name, SpinParams::new(j))
}

fn resolve_kappa(spin: SpinParams, k: &KappaArgs) -> std::result::Result<f64, Failure> {
    match (k.kappa, &k.kappa_class) {
        (Some(v), None) => Ok(v),
        (None, Some(c)) => Ok(flag("kappa-class", c.parse::<KappaClass>())?.kappa(spin)),
        (None, None) => Err(Failure::usage(
            "one of --kappa or --kappa-class is required",
        )),
        (Some(_), Some(_)) => Err(Failure::usage(
            "--kappa and --kappa-class are mutually exclusive",
        )),
    }
}

/// Writes via `write` either to `out` (plus run sidecar) or to stdout.
fn emit<F>(out: Option<&Path>, command: &str, cli: &Cli, write: F) -> CmdResult
where
    F: FnOnce(&mut dyn Write) -> kicktop::Result<()>,
{
    match out {
        Some(path) => {
            let at = |e: Error| Failure {
                code: 3,
                message: format!("--out {}: {e}", path.display()),
            };
            let mut file = create_buffered(path).map_err(at)?;
            write(&mut file).map_err(at)?;
            file.flush().map_err(|e| at(e.into()))?;
            write_run_sidecar(path, command, cli).map_err(at)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
        }
    }
    Ok(())
}

fn write_json_to<T: Serialize>(w: &mut dyn Write, value: &T) -> kicktop::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

fn cmd_period(a: &PeriodArgs, cli: &Cli) -> CmdResult {
    let spin = spin_flag("j", a.j)?;
    let kappa = resolve_kappa(spin, &a.kappa)?;
    if a.n_max == 0 {
        return Err(Failure::usage("--n-max must be at least 1"));
    }
    let u = build_floquet(&FloquetSpec::new(spin, kappa).with_p(a.kappa.p));
    let report = detect_period(&u, a.n_max, a.tol);
    match report.period {
        Some(n) => eprintln!(
            "j = {spin}, kappa = {kappa}: period {n}, phase {:.12}",
            report.phase.unwrap_or(0.0)
        ),
        None => eprintln!(
            "j = {spin}, kappa = {kappa}: no recurrence within {} kicks",
            a.n_max
        ),
    }
    emit(a.out.as_deref(), "period", cli, |w| {
        write_json_to(w, &report)
    })
}

fn cmd_table(a: &TableArgs, cli: &Cli) -> CmdResult {
    let spins = flag("j-min/--j-max", SpinParams::range(a.j_min, a.j_max))?;
    if spins.is_empty() {
        return Err(Failure::usage("--j-max: spin range is empty"));
    }
    let rows = compute_table(&spins, a.n_max, a.tol);
    emit(a.out.as_deref(), "table", cli, |w| {
        writeln!(w, "j,kappa_class,parity,period,phase,expected,match")?;
        for r in &rows {
            let opt = |v: Option<usize>| v.map(|n| n.to_string()).unwrap_or_else(|| "none".into());
            writeln!(
                w,
                "{},{},{:?},{},{},{},{}",
                r.j,
                r.kappa_class,
                r.parity,
                opt(r.period),
                r.phase.map(fmt_f64).unwrap_or_default(),
                opt(r.expected),
                r.matches()
            )?;
        }
        Ok(())
    })?;
    let bad: Vec<_> = rows.iter().filter(|r| !r.matches()).collect();
    if bad.is_empty() {
        eprintln!("{} rows, all match the recurrence table", rows.len());
        Ok(())
    } else {
        for r in &bad {
            eprintln!(
                "mismatch: j = {}, {}: expected {:?}, found {:?}",
                r.j, r.kappa_class, r.expected, r.period
            );
        }
        Err(Failure::verification(format!(
            "{} table rows mismatch",
            bad.len()
        )))
    }
}

fn cmd_search(a: &SearchArgs, cli: &Cli) -> CmdResult {
    if a.r_max == 0 || a.s_max == 0 {
        return Err(Failure::usage("--r-max and --s-max must be at least 1"));
    }
    if a.kicks == 0 {
        return Err(Failure::usage("--kicks must be at least 1"));
    }
    let spins = flag("j-min/--j-max", SpinParams::range(a.j_min, a.j_max))?;
    let mut cfg = SearchConfig::new(a.r_max, a.s_max, spins);
    cfg.n_kicks = a.kicks;
    cfg.entropy_floor = a.floor;
    cfg.initial_state = CoherentParams::new(a.theta, a.phi);
    cfg.tolerance = a.tol;
    cfg.skip_table_classes = a.skip_table_classes;
    let rows = flag("j-min", search_rational_kappa(&cfg))?;
    let found: Vec<_> = rows
        .iter()
        .filter(|r| r.period.is_some() && !r.table_class)
        .collect();
    eprintln!(
        "{} cells, {} recurrences outside the tabulated classes",
        rows.len(),
        found.len()
    );
    emit(a.out.as_deref(), "search", cli, |w| {
        writeln!(
            w,
            "r,s,j,kappa,table_class,min_entropy,min_entropy_kick,candidate,period"
        )?;
        for r in &rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{}",
                r.r,
                r.s,
                r.j,
                fmt_f64(r.kappa),
                r.table_class,
                fmt_f64(r.min_entropy),
                r.min_entropy_kick,
                r.candidate,
                r.period
                    .map(|n| n.to_string())
                    .unwrap_or_else(|| "none".into())
            )?;
        }
        Ok(())
    })
}

#[derive(Serialize)]
struct HusimiMeta {
    j: f64,
    kappa: f64,
    kick: usize,
    theta_count: usize,
    phi_count: usize,
    q_max: f64,
    normalization: f64,
    local_maxima: usize,
}

fn cmd_husimi(a: &HusimiArgs, cli: &Cli) -> CmdResult {
    let spin = spin_flag("j", a.j)?;
    let kappa = resolve_kappa(spin, &a.kappa)?;
    let u = build_floquet(&FloquetSpec::new(spin, kappa).with_p(a.kappa.p));
    let psi0 = coherent_state(spin, CoherentParams::new(a.theta, a.phi));
    let psi = flag("kick", kicktop::floquet::evolve(&u, &psi0, a.kick))?;
    let q = flag("n-theta", husimi(&psi, a.n_theta, a.n_phi))?;
    let meta = HusimiMeta {
        j: spin.j(),
        kappa,
        kick: a.kick,
        theta_count: a.n_theta,
        phi_count: a.n_phi,
        q_max: q.q_max,
        normalization: q.normalization(),
        local_maxima: q.local_maxima(0.5).len(),
    };
    eprintln!(
        "q_max {:.6e}, normalization {:.12}, {} local maxima above half of q_max",
        meta.q_max, meta.normalization, meta.local_maxima
    );
    emit(a.out.as_deref(), "husimi", cli, |w| q.write_csv(w))?;
    if let Some(out) = &a.out {
        write_json(&sidecar_path(out, "meta.json"), &meta)?;
    }
    Ok(())
}

fn initial_state(a: &EntropyArgs, spin: SpinParams) -> std::result::Result<StateVector, Failure> {
    match a.state.as_str() {
        "+y" | "plus-y" => Ok(coherent_state(spin, CoherentParams::plus_y())),
        "coherent" => Ok(coherent_state(spin, CoherentParams::new(a.theta, a.phi))),
        "haar" => Ok(haar_random_state(
            spin.dim(),
            &mut ChaCha8Rng::seed_from_u64(a.seed),
        )),
        other => Err(Failure::usage(format!(
            "--state: unknown initial state '{other}' (expected +y, coherent or haar)"
        ))),
    }
}

fn cmd_entropy(a: &EntropyArgs, cli: &Cli) -> CmdResult {
    let spin = spin_flag("j", a.j)?;
    let kappa = resolve_kappa(spin, &a.kappa)?;
    let kind: EntropyKind = flag("kind", a.kind.parse())?;
    let psi = initial_state(a, spin)?;
    let u = build_floquet(&FloquetSpec::new(spin, kappa).with_p(a.kappa.p));
    let series = flag("j", entropy_series(&u, &psi, a.kicks, kind))?;
    emit(a.out.as_deref(), "entropy", cli, |w| {
        writeln!(w, "kick,entropy")?;
        for (k, s) in series.iter().enumerate() {
            writeln!(w, "{},{}", k + 1, fmt_f64(*s))?;
        }
        Ok(())
    })
}

fn cmd_classical(a: &ClassicalArgs, cli: &Cli) -> CmdResult {
    if a.n_theta == 0 || a.n_phi == 0 {
        return Err(Failure::usage("--n-theta and --n-phi must be at least 1"));
    }
    let init = uniform_grid(a.n_theta, a.n_phi);
    let traj = flag("kappa", stroboscopic_map(&init, a.kappa, a.kicks))?;
    emit(a.out.as_deref(), "classical", cli, |w| {
        write_trajectories_csv(&init, &traj, w)
    })
}

fn cmd_stability(a: &StabilityArgs, cli: &Cli) -> CmdResult {
    let spin = spin_flag("j", a.j)?;
    let class: KappaClass = flag("kappa-class", a.kappa_class.parse())?;
    let mut cfg = StabilityConfig::new(spin, class, a.delta).with_grid(a.n_theta, a.n_phi);
    cfg.applications = a.applications;
    let land = flag("kappa-class", stability_landscape(&cfg))?;
    let meta = land.meta();
    eprintln!(
        "orbit {} kicks, s_max {:.6e}, mean {:.6e}",
        meta.orbit_n, meta.s_max, meta.mean
    );
    emit(a.out.as_deref(), "stability", cli, |w| land.write_csv(w))?;
    if let Some(out) = &a.out {
        write_json(&sidecar_path(out, "meta.json"), &meta)?;
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, cli: &Cli) -> CmdResult {
    let spins = flag("j-min/--j-max", SpinParams::range(a.j_min, a.j_max))?;
    let checks = flag("check", run_checks(&a.check, &spins, a.tol))?;
    for c in &checks {
        eprintln!(
            "{:<20} {} j in [{}, {}], max deviation {:.3e}",
            c.name,
            if c.pass { "PASS" } else { "FAIL" },
            c.j_values.first().copied().unwrap_or(0.0),
            c.j_values.last().copied().unwrap_or(0.0),
            c.max_deviation
        );
    }
    let entries = report_entries(&checks);
    emit(a.out.as_deref(), "verify", cli, |w| {
        write_json_to(w, &entries)
    })?;
    if checks.iter().all(|c| c.pass) {
        Ok(())
    } else {
        Err(Failure::verification("identity checks failed"))
    }
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Period(a) => cmd_period(a, cli),
        Command::Table(a) => cmd_table(a, cli),
        Command::Search(a) => cmd_search(a, cli),
        Command::Husimi(a) => cmd_husimi(a, cli),
        Command::Entropy(a) => cmd_entropy(a, cli),
        Command::Classical(a) => cmd_classical(a, cli),
        Command::Stability(a) => cmd_stability(a, cli),
        Command::Verify(a) => cmd_verify(a, cli),
    }
}

/// Path given to `--config`, if any, without a full parse.
fn config_path(args: &[String]) -> Option<PathBuf> {
    args.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            args.get(i + 1).map(PathBuf::from)
        } else {
            a.strip_prefix("--config=").map(PathBuf::from)
        }
    })
}

/// Turns `key = value` lines into flags placed right after the subcommand, so
/// that flags given on the command line (which come later) override them.
fn config_flags(path: &Path) -> std::result::Result<Vec<String>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: 3,
        message: format!("--config {}: {e}", path.display()),
    })?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Failure::usage(format!(
                "--config {}:{}: expected key=value",
                path.display(),
                n + 1
            ))
        })?;
        let key = key.trim().replace('_', "-");
        match value.trim() {
            "true" => out.push(format!("--{key}")),
            "false" => {}
            v => {
                out.push(format!("--{key}"));
                out.push(v.to_string());
            }
        }
    }
    Ok(out)
}

fn parse_args() -> std::result::Result<Cli, ExitCode> {
    let mut args: Vec<String> = std::env::args().collect();
    if let Some(path) = config_path(&args) {
        let extra = match config_flags(&path) {
            Ok(v) => v,
            Err(f) => {
                eprintln!("error: {}", f.message);
                return Err(ExitCode::from(f.code));
            }
        };
        let sub = args
            .iter()
            .position(|a| COMMANDS.contains(&a.as_str()))
            .map(|i| i + 1)
            .unwrap_or(args.len());
        args.splice(sub..sub, extra);
    }
    Cli::try_parse_from(args).map_err(|e| {
        let _ = e.print();
        ExitCode::from(if e.use_stderr() { 2 } else { 0 })
    })
}

const COMMANDS: [&str; 8] = [
    "period",
    "table",
    "search",
    "husimi",
    "entropy",
    "classical",
    "stability",
    "verify",
];

fn main() -> ExitCode {
    let cli = match parse_args() {
        Ok(c) => c,
        Err(code) => return code,
    };
    let result = match cli.threads {
        Some(0) => Err(Failure::usage("--threads must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(Failure::usage(format!("--threads: {e}"))),
        },
        None => run(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
