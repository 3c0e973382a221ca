use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use entbound::entanglement::{
    bounds_from_reference, closest_biseparable, entanglement_x, four_measurement_bounds,
    four_measurement_bounds_optimized, optimized_lower_bound, FourMeasurementBounds,
};
use entbound::io::{LoadedState, StateFile};
use entbound::measurement::{extract_record, record_from_xstate, sample_from_record, MeasurementRecord};
use entbound::states::{apply_noise, dense_to_xstate, ghz_state, ghz_xstate, Channel, GhzWeight};
use entbound::table::table1;
use entbound::{config, Error};

const EXIT_MALFORMED: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;
const EXIT_BAD_ARGS: u8 = 4;

#[derive(Parser)]
#[command(name = "entbound", version, about = "All-party entanglement of N-qubit states and its four-measurement bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form entanglement of an X-state file; writes the closest biseparable state next to it.
    Entanglement {
        file: PathBuf,
        /// Where to write the closest biseparable state (default `<stem>.closest.json`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower and upper bounds from the four corner measurements.
    Bounds {
        /// State or record file.
        file: Option<PathBuf>,
        /// Record given inline: p00 p11 z_re z_im.
        #[arg(long, num_args = 4, value_names = ["P00", "P11", "Z_RE", "Z_IM"], allow_negative_numbers = true, conflicts_with = "file")]
        record: Option<Vec<f64>>,
        #[arg(long)]
        n_qubits: Option<usize>,
        /// Optimize the weighted-GHZ reference angle for the lower bound.
        #[arg(long)]
        theta_opt: bool,
        /// Simulate this many shots per observable instead of exact expectations.
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// For dense states: also bound via exact trace distances to GHZ and its closest biseparable state.
        #[arg(long)]
        dense_distances: bool,
    },
    /// Lower bounds for the published ion-trap GHZ fidelities.
    Table1,
    /// Bounds against the exact value along a noise sweep of the GHZ state.
    Sweep {
        #[arg(long, value_enum)]
        noise: Noise,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        pmin: f64,
        #[arg(long, default_value_t = 1.0)]
        pmax: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a (noisy) GHZ state file.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        noise: Option<Noise>,
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        /// GHZ weight angle; pi/4 is the balanced GHZ state.
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Xstate)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Noise {
    Depolarizing,
    Dephasing,
}

impl Noise {
    fn channel(self, p: f64) -> Channel {
        match self {
            Noise::Depolarizing => Channel::Depolarizing(p),
            Noise::Dephasing => Channel::Dephasing(p),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dense,
    Xstate,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InconsistentRecord(_) => EXIT_INCONSISTENT,
            Error::InvalidArgument(_) | Error::Io(_) => EXIT_BAD_ARGS,
            _ => EXIT_MALFORMED,
        };
        Failure { code, message: e.to_string() }
    }
}

fn bad_args(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_BAD_ARGS, message: message.into() }
}

type CmdResult = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_BAD_ARGS) } else { ExitCode::SUCCESS };
        }
    };
    match config::Tolerances::from_env() {
        Ok(tol) => {
            config::install(tol);
        }
        Err(e) => {
            eprintln!("error: {}: {e}", config::ENV_VAR);
            return ExitCode::from(EXIT_BAD_ARGS);
        }
    }

    let result = match cli.command {
        Command::Entanglement { file, out } => cmd_entanglement(&file, out),
        Command::Bounds { file, record, n_qubits, theta_opt, shots, seed, dense_distances } => {
            cmd_bounds(file, record, n_qubits, theta_opt, shots, seed, dense_distances)
        }
        Command::Table1 => cmd_table1(),
        Command::Sweep { noise, n, pmin, pmax, steps, shots, seed } => {
            cmd_sweep(noise, n, pmin, pmax, steps, shots, seed)
        }
        Command::Generate { n, noise, p, theta, format, out } => cmd_generate(n, noise, p, theta, format, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path) -> std::result::Result<LoadedState, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| bad_args(format!("{}: {e}", path.display())))?;
    let file = StateFile::parse(&text).map_err(|e| Failure { code: EXIT_MALFORMED, message: e.to_string() })?;
    Ok(file.into_state()?)
}

fn sibling_path(file: &Path) -> PathBuf {
    let stem = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "state".into());
    file.with_file_name(format!("{stem}.closest.json"))
}

fn cmd_entanglement(file: &Path, out: Option<PathBuf>) -> CmdResult {
    let x = match load(file)? {
        LoadedState::X(x) => x,
        LoadedState::Dense(rho) => dense_to_xstate(&rho)?,
        LoadedState::Record { .. } => {
            return Err(Failure {
                code: EXIT_MALFORMED,
                message: "a measurement record does not determine the state; use `bounds`".into(),
            })
        }
    };
    let e = entanglement_x(&x)?;
    let closest = closest_biseparable(&x)?;
    // back to the labels of the input file
    let closest = if x.relabel_mask() != 0 { closest.relabel(x.relabel_mask())? } else { closest };
    let out = out.unwrap_or_else(|| sibling_path(file));
    StateFile::from_xstate(&closest).save(&out)?;

    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "n_qubits,entanglement,concurrence,w1,z1_abs,relabel_mask,closest_file");
    let _ = writeln!(
        stdout,
        "{},{},{},{},{},{},{}",
        x.n_qubits(),
        e.value,
        2.0 * e.value,
        e.w1,
        e.z1_abs,
        x.relabel_mask(),
        out.display()
    );
    Ok(())
}

const BOUNDS_HEADER: &str = "n_qubits,f_ref,f_sigma,lower,upper,theta_star,lower_source,upper_source";

fn bounds_row(n_qubits: Option<usize>, b: &FourMeasurementBounds) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        n_qubits.map(|n| n.to_string()).unwrap_or_default(),
        b.f_ref,
        b.f_sigma,
        b.bounds.lower,
        b.bounds.upper,
        b.theta_star.map(|t| t.to_string()).unwrap_or_default(),
        b.bounds.lower_source,
        b.bounds.upper_source
    )
}

#[allow(clippy::too_many_arguments)]
fn cmd_bounds(
    file: Option<PathBuf>,
    inline: Option<Vec<f64>>,
    n_qubits: Option<usize>,
    theta_opt: bool,
    shots: Option<u64>,
    seed: u64,
    dense_distances: bool,
) -> CmdResult {
    let (n, exact, dense) = match (file, inline) {
        (Some(path), None) => match load(&path)? {
            LoadedState::Dense(rho) => (Some(rho.n_qubits()), extract_record(&rho), Some(rho)),
            LoadedState::X(x) => (Some(x.n_qubits()), record_from_xstate(&x), None),
            LoadedState::Record { n_qubits, record } => (Some(n_qubits), record, None),
        },
        (None, Some(v)) => (n_qubits, MeasurementRecord::exact(v[0], v[1], v[2], v[3]), None),
        _ => return Err(bad_args("give a state file or --record P00 P11 Z_RE Z_IM")),
    };
    if let (Some(declared), Some(found)) = (n_qubits, n) {
        if declared != found {
            return Err(bad_args(format!("--n-qubits {declared} but the file holds {found} qubits")));
        }
    }
    let record = match shots {
        Some(s) => sample_from_record(&exact, s, seed)?,
        None => exact,
    };
    let b = if theta_opt {
        four_measurement_bounds_optimized(&record, n.unwrap_or(0))?
    } else {
        four_measurement_bounds(&record, n.unwrap_or(0))?
    };

    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{BOUNDS_HEADER}");
    let _ = writeln!(stdout, "{}", bounds_row(n, &b));
    if dense_distances {
        let rho = dense.ok_or_else(|| bad_args("--dense-distances needs a dense state file"))?;
        let reference = ghz_xstate(rho.n_qubits(), GhzWeight::balanced())?;
        let d = bounds_from_reference(&rho, &reference)?;
        let _ = writeln!(
            stdout,
            "{},,,{},{},,{},{}",
            rho.n_qubits(),
            d.lower,
            d.upper,
            d.lower_source,
            d.upper_source
        );
    }
    Ok(())
}

fn cmd_table1() -> CmdResult {
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "n_ions,fidelity,lower,percent_of_ghz,published,published_percent,flag");
    for row in table1() {
        let flag = match &row.flag {
            Some(reason) => {
                log::warn!("table row N={}: {reason}", row.n_ions);
                format!("FLAGGED:{reason}")
            }
            None => "OK".into(),
        };
        let _ = writeln!(
            stdout,
            "{},{},{:.3},{:.1},{},{},{}",
            row.n_ions, row.fidelity, row.lower, row.percent_of_ghz, row.published, row.published_percent, flag
        );
    }
    Ok(())
}

struct SweepRow {
    p: f64,
    exact: f64,
    bounds: FourMeasurementBounds,
    theta_star: f64,
    theta_lower: f64,
}

fn sweep_point(noise: Noise, n: usize, p: f64, shots: Option<u64>, seed: u64) -> entbound::Result<SweepRow> {
    let x = ghz_xstate(n, GhzWeight::balanced())?.apply_noise(noise.channel(p))?;
    let exact = entanglement_x(&x)?.value;
    let mut record = record_from_xstate(&x);
    if let Some(s) = shots {
        record = sample_from_record(&record, s, seed)?;
    }
    let bounds = four_measurement_bounds(&record, n)?;
    let opt = optimized_lower_bound(&record)?;
    Ok(SweepRow { p, exact, bounds, theta_star: opt.theta_star, theta_lower: opt.lower })
}

fn cmd_sweep(noise: Noise, n: usize, pmin: f64, pmax: f64, steps: usize, shots: Option<u64>, seed: u64) -> CmdResult {
    if !(pmin.is_finite() && pmax.is_finite() && 0.0 <= pmin && pmin <= pmax && pmax <= 1.0) {
        return Err(bad_args(format!("need 0 <= pmin <= pmax <= 1, got pmin = {pmin}, pmax = {pmax}")));
    }
    if steps == 0 || (steps == 1 && pmin != pmax) {
        return Err(bad_args("--steps must be at least 2 for a nonempty range (1 when pmin = pmax)"));
    }
    if !(2..=entbound::states::MAX_XSTATE_QUBITS).contains(&n) {
        return Err(bad_args(format!("--n must be in 2..={}", entbound::states::MAX_XSTATE_QUBITS)));
    }
    if shots == Some(0) {
        return Err(bad_args("--shots must be at least 1"));
    }
    let grid: Vec<f64> = (0..steps)
        .map(|k| if steps == 1 { pmin } else { pmin + (pmax - pmin) * k as f64 / (steps - 1) as f64 })
        .collect();
    // collect() on an indexed parallel iterator keeps grid order
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .enumerate()
        .map(|(k, &p)| sweep_point(noise, n, p, shots, seed.wrapping_add(k as u64)))
        .collect::<entbound::Result<_>>()?;

    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "p,exact,f_ref,f_sigma,lower,upper,theta_star,theta_lower,flag");
    for r in rows {
        let b = &r.bounds.bounds;
        let slack = 1e-10;
        let mut reasons = Vec::new();
        if b.lower > r.exact + slack || r.theta_lower > r.exact + slack {
            reasons.push("lower bound above exact value");
        }
        if r.exact > b.upper + slack {
            reasons.push("exact value above upper bound");
        }
        let flag = if reasons.is_empty() {
            "OK".to_string()
        } else {
            log::warn!("sweep p = {}: {}", r.p, reasons.join("; "));
            format!("FLAGGED:{}", reasons.join("; "))
        };
        let _ = writeln!(
            stdout,
            "{},{},{},{},{},{},{},{},{}",
            r.p, r.exact, r.bounds.f_ref, r.bounds.f_sigma, b.lower, b.upper, r.theta_star, r.theta_lower, flag
        );
    }
    Ok(())
}

fn cmd_generate(n: usize, noise: Option<Noise>, p: f64, theta: Option<f64>, format: Format, out: &Path) -> CmdResult {
    let weight = match theta {
        Some(t) => GhzWeight::new(t).map_err(|e| bad_args(e.to_string()))?,
        None => GhzWeight::balanced(),
    };
    let file = match format {
        Format::Xstate => {
            let mut x = ghz_xstate(n, weight).map_err(|e| bad_args(e.to_string()))?;
            if let Some(noise) = noise {
                x = x.apply_noise(noise.channel(p))?;
            }
            StateFile::from_xstate(&x)
        }
        Format::Dense => {
            let mut rho = ghz_state(n, weight).map_err(|e| bad_args(e.to_string()))?;
            if let Some(noise) = noise {
                rho = apply_noise(&rho, noise.channel(p))?;
            }
            StateFile::from_dense(&rho)
        }
    };
    file.save(out)?;
    Ok(())
}
