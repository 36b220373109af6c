mod output;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gjc_core::analytic::{self, Decomposition};
use gjc_core::model::{load_model_with_n_max, lookup, registry, ModelSpec, NonlinearFn};
use gjc_core::oracle::{self, check_leak, PropagationConfig, DEFAULT_LEAK_TOLERANCE};
use gjc_core::state::{coherent_state, fock_state, Qubit, QubitBosonState};
use gjc_core::susy::{verify_relations, InteriorMask};
use gjc_core::trace::{deviation, format_row, time_grid, Engine, ObservableTrace, CSV_HEADER};
use gjc_core::Error;
use num_complex::Complex64;

use output::{emit, RunManifest, FORMAT_VERSION};

const EXIT_CONFIG: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_LEAK: u8 = 3;

#[derive(Parser)]
#[command(name = "gjc", version, about = "Generalized Jaynes-Cummings model simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in models.
    List,
    /// Dressed-state energies and mixing angles, one row per manifold.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        truncation: Truncation,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time evolution of <sz>, <n>, <x>, <y>.
    Evolve {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        truncation: Truncation,
        /// fock:<e|g>:<n> or coherent:<e|g>:<re>[,<im>]
        #[arg(long)]
        initial: InitialState,
        #[arg(long, default_value_t = 200.0)]
        tmax: f64,
        #[arg(long, default_value_t = 2001)]
        points: usize,
        #[arg(long, value_enum, default_value_t = EngineChoice::Analytic)]
        engine: EngineChoice,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the graded-algebra relations as matrix identities.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        truncation: Truncation,
        /// Top Fock levels excluded from the checks; defaults to 2k.
        #[arg(long)]
        guard: Option<usize>,
        #[arg(long, default_value_t = 1e-10)]
        threshold: f64,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ModelArgs {
    /// Registry name (or unique prefix).
    #[arg(long)]
    model: Option<String>,
    /// JSON model document.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct Truncation {
    #[arg(long = "nmax", env = "GJC_NMAX", default_value_t = 64)]
    n_max: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    Analytic,
    Oracle,
    Both,
}

impl EngineChoice {
    fn name(self) -> &'static str {
        match self {
            EngineChoice::Analytic => "analytic",
            EngineChoice::Oracle => "oracle",
            EngineChoice::Both => "both",
        }
    }
}

#[derive(Clone, Debug)]
enum InitialState {
    Fock(Qubit, usize),
    Coherent(Qubit, Complex64),
}

impl FromStr for InitialState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [kind, qubit, value] = parts[..] else {
            return Err(format!("expected kind:qubit:value, got '{s}'"));
        };
        let qubit: Qubit = qubit.parse()?;
        match kind {
            "fock" => value
                .parse()
                .map(|n| InitialState::Fock(qubit, n))
                .map_err(|_| format!("bad Fock index '{value}'")),
            "coherent" => {
                let mut it = value.split(',');
                let re = it.next().unwrap_or("");
                let im = it.next().unwrap_or("0");
                if it.next().is_some() {
                    return Err(format!("bad amplitude '{value}'"));
                }
                let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("bad amplitude '{value}'"));
                Ok(InitialState::Coherent(qubit, Complex64::new(num(re)?, num(im)?)))
            }
            other => Err(format!("unknown initial state kind '{other}' (fock or coherent)")),
        }
    }
}

impl InitialState {
    fn describe(&self) -> String {
        match self {
            InitialState::Fock(q, n) => format!("fock:{}:{n}", q.symbol()),
            InitialState::Coherent(q, a) => format!("coherent:{}:{},{}", q.symbol(), a.re, a.im),
        }
    }

    fn build(&self, n_max: usize) -> gjc_core::Result<QubitBosonState> {
        match *self {
            InitialState::Fock(q, n) => fock_state(q, n, n_max),
            InitialState::Coherent(q, a) => coherent_state(q, a, n_max),
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Truncation { .. } | Error::Leak { .. } => EXIT_LEAK,
            _ => EXIT_CONFIG,
        };
        let mut message = e.to_string();
        if let Error::Truncation { n_max, .. } | Error::Leak { n_max, .. } = e {
            let _ = write!(message, " (suggested: --nmax {})", 2 * n_max);
        }
        Failure { code, message }
    }
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: message.into(),
    }
}

fn io_error(e: std::io::Error) -> Failure {
    config_error(format!("cannot write output: {e}"))
}

fn fn_label(f: &NonlinearFn) -> String {
    if f.params.is_empty() {
        f.kind.name().to_string()
    } else {
        let p: Vec<String> = f.params.iter().map(|x| x.to_string()).collect();
        format!("{}({})", f.kind.name(), p.join(","))
    }
}

fn cmd_list() {
    println!(
        "{:<22} {:>2} {:>6} {:>6} {:>5}  {:<24} {:<20} {:<20} figure",
        "name", "k", "omega", "omega0", "g", "f", "F", "G"
    );
    for e in registry() {
        let s = &e.spec;
        println!(
            "{:<22} {:>2} {:>6} {:>6} {:>5}  {:<24} {:<20} {:<20} {}",
            e.name,
            s.k,
            s.omega,
            s.omega0,
            s.g,
            fn_label(&s.coupling_fn),
            fn_label(&s.dispersive_fn),
            fn_label(&s.boson_fn),
            e.figure
        );
    }
}

/// Resolves the model and fills the model fields of the manifest.
fn resolve(model: &ModelArgs, n_max: usize, manifest: &mut RunManifest) -> Result<ModelSpec, Failure> {
    if let Some(name) = &model.model {
        let entry = lookup(name)?;
        entry.spec.validate(n_max)?;
        manifest.model = Some(entry.name.to_string());
        return Ok(entry.spec);
    }
    let path = model.config.as_ref().expect("clap requires --model or --config");
    let doc = std::fs::read_to_string(path)
        .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
    manifest.config = Some(path.display().to_string());
    Ok(load_model_with_n_max(&doc, n_max)?)
}

fn manifest(mode: &'static str, n_max: usize, out: &Option<PathBuf>) -> RunManifest {
    RunManifest {
        mode,
        model: None,
        config: None,
        initial: None,
        t_max: None,
        points: None,
        n_max,
        engine: None,
        guard: None,
        threshold: None,
        output: out.as_ref().map(|p| p.display().to_string()),
    }
}

fn check_truncation(spec: &ModelSpec, n_max: usize) -> Result<(), Failure> {
    if n_max < spec.k {
        return Err(config_error(format!("--nmax {n_max} must be at least k = {}", spec.k)));
    }
    Ok(())
}

fn cmd_spectrum(model: &ModelArgs, n_max: usize, out: &Option<PathBuf>) -> Result<(), Failure> {
    let mut m = manifest("spectrum", n_max, out);
    let spec = resolve(model, n_max, &mut m)?;
    check_truncation(&spec, n_max)?;
    let decomposition = Decomposition::new(&spec, n_max)?;
    let mut text = m.header();
    text.push_str("kind,n_lower,N,beta,Omega,E_plus,E_minus\n");
    for d in &decomposition.dark {
        let label = d.n as f64 - spec.half_k();
        let _ = writeln!(
            text,
            "dark,{},{}",
            d.n,
            format_row(&[label, 0.0, 0.0, d.energy, d.energy])
        );
    }
    for mf in decomposition.complete_manifolds() {
        let _ = writeln!(
            text,
            "manifold,{},{}",
            mf.n_lower,
            format_row(&[mf.label.value(), mf.beta, mf.rabi, mf.e_plus, mf.e_minus])
        );
    }
    emit(out.as_deref(), &text).map_err(io_error)
}

#[allow(clippy::too_many_arguments)]
fn cmd_evolve(
    model: &ModelArgs,
    n_max: usize,
    initial: &InitialState,
    t_max: f64,
    points: usize,
    engine: EngineChoice,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(config_error(format!("--tmax {t_max} must be finite and non-negative")));
    }
    if points == 0 {
        return Err(config_error("--points must be at least 1"));
    }
    let mut m = manifest("evolve", n_max, out);
    m.initial = Some(initial.describe());
    m.t_max = Some(t_max);
    m.points = Some(points);
    m.engine = Some(engine.name().to_string());
    let spec = resolve(model, n_max, &mut m)?;
    check_truncation(&spec, n_max)?;

    let psi = initial.build(n_max)?;
    let times = time_grid(t_max, points);
    let config = PropagationConfig::default();
    let guard = (2 * spec.k).min(n_max + 1);

    let analytic_trace = if engine != EngineChoice::Oracle {
        let states = analytic::evolve(&spec, &psi, &times)?;
        check_leak(&states, &times, guard, DEFAULT_LEAK_TOLERANCE)?;
        Some(ObservableTrace::from_states(Engine::Analytic, spec.k, &times, &states))
    } else {
        None
    };
    let oracle_trace = if engine != EngineChoice::Analytic {
        Some(oracle::trace_oracle(&spec, &psi, &times, &config)?)
    } else {
        None
    };

    let mut text = m.header();
    text.push_str(CSV_HEADER);
    if engine == EngineChoice::Both {
        text.push_str(",res_sigma_z,res_n_mean,res_x_mean,res_y_mean");
    }
    text.push('\n');
    let primary = analytic_trace.as_ref().or(oracle_trace.as_ref()).expect("one engine runs");
    for (i, p) in primary.points.iter().enumerate() {
        let v = p.values;
        let mut row = vec![p.t, v.sigma_z, v.n_mean, v.x_mean, v.y_mean];
        if let (Some(a), Some(o)) = (&analytic_trace, &oracle_trace) {
            row.extend(deviation(&a.points[i].values, &o.points[i].values));
        }
        text.push_str(&format_row(&row));
        text.push('\n');
    }
    emit(out.as_deref(), &text).map_err(io_error)
}

fn cmd_verify(
    model: &ModelArgs,
    n_max: usize,
    guard: Option<usize>,
    threshold: f64,
    out: &Option<PathBuf>,
) -> Result<ExitCode, Failure> {
    if !(threshold >= 0.0) {
        return Err(config_error(format!("--threshold {threshold} must be non-negative")));
    }
    let mut m = manifest("verify", n_max, out);
    let spec = resolve(model, n_max, &mut m)?;
    check_truncation(&spec, n_max)?;
    let guard = guard.unwrap_or(2 * spec.k);
    m.guard = Some(guard);
    m.threshold = Some(threshold);
    let report = verify_relations(&spec, n_max, InteriorMask::new(guard))?;
    let passed = report.passes(threshold);

    println!(
        "model {}  n_max {}  guard {}  threshold {:e}",
        m.model.as_deref().or(m.config.as_deref()).unwrap_or("?"),
        n_max,
        guard,
        threshold
    );
    for r in &report.residuals {
        let mark = if r.residual <= threshold { "ok  " } else { "FAIL" };
        println!("{mark} {:<28} {:.3e}", r.relation, r.residual);
    }
    println!(
        "{}: max residual {:.3e}",
        if passed { "PASS" } else { "FAIL" },
        report.max_residual()
    );

    if out.is_some() {
        let doc = serde_json::json!({
            "format_version": FORMAT_VERSION,
            "manifest": m,
            "passed": passed,
            "max_residual": report.max_residual(),
            "report": report,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        emit(out.as_deref(), &text).map_err(io_error)?;
    }
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY)
    })
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::List => {
            cmd_list();
            Ok(ExitCode::SUCCESS)
        }
        Command::Spectrum { model, truncation, out } => {
            cmd_spectrum(&model, truncation.n_max, &out).map(|_| ExitCode::SUCCESS)
        }
        Command::Evolve {
            model,
            truncation,
            initial,
            tmax,
            points,
            engine,
            out,
        } => cmd_evolve(&model, truncation.n_max, &initial, tmax, points, engine, &out)
            .map(|_| ExitCode::SUCCESS),
        Command::Verify {
            model,
            truncation,
            guard,
            threshold,
            out,
        } => cmd_verify(&model, truncation.n_max, guard, threshold, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors are config errors; clap's own code 2 is reserved here
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("gjc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
