//! `sspe` command line.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sspe_core::cavity::half_splitting;
use sspe_core::design::{
    clear_optimize, compare_schemes, residual_map, sspe_analytic, sspe_optimize, OptimizeOptions, ResetSolution,
};
use sspe_core::fit::{
    ac_stark_reconstruct, exp_decay_fit, fit_backaction, fit_kerr_calibration, fit_ramsey, FitResult, KerrInit,
    RamseyInit, RamseyModel,
};
use sspe_core::{propagate_closed_form, propagate_ode, ChiSource, DriveSegment, QubitState};

use crate::config::{CliConfig, DEFAULT_SEED};
use crate::error::{CliError, Result};
use crate::io;
use crate::provenance::Provenance;
use crate::scenario::{self, MapSidecar};

#[derive(Debug, Parser)]
#[command(
    name = "sspe",
    version,
    about = "Readout-cavity simulation, reset-pulse design and measurement fits",
    long_about = "Readout-cavity simulation, reset-pulse design and measurement fits.\n\n\
        Units: device frequencies and rates in MHz (ordinary frequency), cavity times in ns, \
        drive amplitudes in rad/ns, qubit coherence times in us.\n\n\
        Exit codes: 0 success, 1 scenario assertion or output failure, 2 configuration or input error, \
        3 numeric failure, 4 optimizer or fit did not converge (results are still written)."
)]
pub struct Cli {
    /// Device parameters as a JSON object (MHz, ns, us); defaults to the reference device
    #[arg(long, global = true, value_name = "JSON")]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Seed for all synthetic noise
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Source of the dispersive shifts
    #[arg(long, global = true, value_enum)]
    pub chi_source: Option<ChiArg>,
    /// Override the Kerr coefficient K/2pi, MHz (e.g. -0.011 for -11 kHz)
    #[arg(long, global = true, value_name = "MHz", allow_negative_numbers = true)]
    pub kerr: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ChiArg {
    /// Perturbative transmon ladder from coupling, detuning and anharmonicity
    Formula,
    /// Measured dressed cavity frequency and dispersive splitting
    Measured,
}

impl From<ChiArg> for ChiSource {
    fn from(c: ChiArg) -> Self {
        match c {
            ChiArg::Formula => ChiSource::Formula,
            ChiArg::Measured => ChiSource::Measured,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Propagate the cavity field under a drive schedule; writes trajectory.csv (t_ns,re_alpha,im_alpha,n)
    Simulate(SimulateArgs),
    /// Design a reset pulse after a constant readout; writes design.json
    Design(DesignArgs),
    /// Residual photons over a reset amplitude x phase grid; writes map_<state>.csv and map_<state>.json
    Map(MapArgs),
    /// Square, SSPE and CLEAR side by side; writes comparison.json and one trajectory CSV per run
    Compare(CompareArgs),
    /// Fit a measurement model to CSV data
    #[command(subcommand)]
    Fit(FitCommand),
    /// Reconstruct photon number from ac-Stark-shifted qubit spectroscopy; writes photons.csv (t,n)
    Calibrate(CalibrateArgs),
    /// Run a reproduction scenario (or `all`); writes <out>/<scenario>/report.json
    Scenario(ScenarioArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Drive schedule: inline JSON or a JSON file, a list of {"amp": rad/ns, "phase": rad, "duration": ns}
    #[arg(long, value_name = "JSON|PATH")]
    pub schedule: String,
    /// Qubit state, 0 or 1
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub state: u8,
    /// Sample spacing and RK4 step, ns
    #[arg(long, value_name = "ns", default_value_t = 0.1)]
    pub dt: f64,
    /// Integrate with RK4 even when the closed form applies (K = 0)
    #[arg(long)]
    pub force_ode: bool,
}

#[derive(Debug, Clone, Args)]
pub struct PulseArgs {
    /// Readout amplitude, rad/ns
    #[arg(long, value_name = "rad/ns", default_value_t = scenario::READOUT_AMP)]
    pub readout_amp: f64,
    /// Readout phase, rad
    #[arg(long, value_name = "rad", default_value_t = 0.0, allow_negative_numbers = true)]
    pub readout_phase: f64,
    /// Readout duration, ns
    #[arg(long, value_name = "ns", default_value_t = scenario::READOUT_NS)]
    pub readout_duration: f64,
    /// Reset window, ns
    #[arg(long, value_name = "ns", default_value_t = scenario::RESET_NS)]
    pub reset_duration: f64,
}

impl PulseArgs {
    fn readout(&self) -> Result<DriveSegment> {
        Ok(DriveSegment::new(self.readout_amp, self.readout_phase, self.readout_duration)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct OptimizerArgs {
    /// RK4 step used by numeric designs, ns
    #[arg(long, value_name = "ns", default_value_t = 0.05)]
    pub dt: f64,
    /// Nelder-Mead iteration limit
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
    /// Reject designs whose reset amplitude exceeds this, rad/ns
    #[arg(long, value_name = "rad/ns")]
    pub max_amplitude: Option<f64>,
}

impl OptimizerArgs {
    fn options(&self) -> OptimizeOptions {
        OptimizeOptions { dt: self.dt, max_iter: self.max_iter, max_amplitude: self.max_amplitude }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DesignKind {
    /// One reset segment
    Sspe,
    /// Two-segment baseline
    Clear,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[arg(long, value_enum, default_value_t = DesignKind::Sspe)]
    pub mode: DesignKind,
    /// Target qubit states; more than one gives a joint design with equal weights
    #[arg(long, value_delimiter = ',', default_value = "0", value_parser = clap::value_parser!(u8).range(0..=1))]
    pub states: Vec<u8>,
    #[command(flatten)]
    pub pulse: PulseArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    /// Qubit state, 0 or 1
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub state: u8,
    #[command(flatten)]
    pub pulse: PulseArgs,
    /// Largest reset amplitude on the grid, rad/ns; defaults to twice the exact reset amplitude
    #[arg(long, value_name = "rad/ns")]
    pub amp_max: Option<f64>,
    /// Amplitude grid points
    #[arg(long, default_value_t = 101)]
    pub amp_points: usize,
    /// Phase grid points over [0, 2pi)
    #[arg(long, default_value_t = 121)]
    pub phase_points: usize,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Qubit states to simulate
    #[arg(long, value_delimiter = ',', default_value = "0,1", value_parser = clap::value_parser!(u8).range(0..=1))]
    pub states: Vec<u8>,
    /// One SSPE and one CLEAR design shared by all states
    #[arg(long)]
    pub joint: bool,
    /// Trajectory sample spacing, ns
    #[arg(long, value_name = "ns", default_value_t = 0.5)]
    pub sample_dt: f64,
    #[command(flatten)]
    pub pulse: PulseArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Subcommand)]
pub enum FitCommand {
    /// Ramsey fringes with a decaying cavity population; CSV `t,S` with t in us
    Ramsey(RamseyArgs),
    /// Repeated-measurement survival; CSV `m,P` with integral m >= 1
    Backaction(InputArgs),
    /// Kerr steady-state calibration; CSV `v2,n` (squared drive voltage, photons)
    Kerr(KerrArgs),
    /// Exponential photon decay; CSV `t,n` with t in ns, rate reported in MHz
    Decay(InputArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct RamseyArgs {
    pub input: PathBuf,
    /// Initial fringe detuning, MHz; estimated from the data when absent
    #[arg(long, value_name = "MHz", allow_negative_numbers = true)]
    pub fringe: Option<f64>,
    /// Initial phase offset, rad; several starts are tried when absent
    #[arg(long, value_name = "rad", allow_negative_numbers = true)]
    pub phi0: Option<f64>,
    /// Initial photon number
    #[arg(long, default_value_t = 1.0)]
    pub n0: f64,
}

#[derive(Debug, Args)]
pub struct KerrArgs {
    pub input: PathBuf,
    /// Qubit state during calibration, 0 or 1
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub state: u8,
    /// Initial drive per volt, rad/ns/V; estimated from the low-power points when absent
    #[arg(long, value_name = "rad/ns/V")]
    pub volt_to_eps: Option<f64>,
    /// Initial Kerr coefficient K/2pi, kHz
    #[arg(long, value_name = "kHz", default_value_t = 0.0, allow_negative_numbers = true)]
    pub kerr_init: f64,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Spectroscopy CSV `delay_ns,freq_mhz,amplitude`
    pub input: PathBuf,
    /// Unshifted qubit line position on the CSV frequency axis, MHz
    #[arg(long, value_name = "MHz", default_value_t = 0.0, allow_negative_numbers = true)]
    pub line_center: f64,
    /// Stark shift per photon divided by two, MHz; defaults to the device's half dispersive splitting
    #[arg(long, value_name = "MHz", allow_negative_numbers = true)]
    pub chi: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// fig1_maps, fig2_scaling, fig3_dynamics, fig4_backaction, appC_calibration or all
    pub name: String,
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(&cli, &command_line()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn command_line() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn state(j: u8) -> Result<QubitState> {
    Ok(QubitState::try_from(j)?)
}

fn states(js: &[u8]) -> Result<Vec<QubitState>> {
    let mut out = js.iter().map(|&j| state(j)).collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(CliError::Config("at least one qubit state is required".into()));
    }
    Ok(out)
}

pub fn run(cli: &Cli, command: &str) -> Result<()> {
    let cfg =
        CliConfig::resolve(cli.config.as_deref(), cli.out.clone(), cli.seed, cli.chi_source.map(Into::into), cli.kerr)?;
    let mut prov = Provenance::new(command, cfg.seed, &cfg.device);
    if let Some(p) = &cfg.device_path {
        prov = prov.with_input(p.clone());
    }
    match &cli.command {
        Command::Simulate(a) => simulate(&cfg, prov, a),
        Command::Design(a) => design(&cfg, &prov, a),
        Command::Map(a) => map(&cfg, &prov, a),
        Command::Compare(a) => compare(&cfg, &prov, a),
        Command::Fit(f) => fit(&cfg, prov, f),
        Command::Calibrate(a) => calibrate(&cfg, prov, a),
        Command::Scenario(a) => run_scenarios(&cfg, &a.name),
    }
}

fn announce(path: &Path) {
    println!("wrote {}", path.display());
}

fn simulate(cfg: &CliConfig, mut prov: Provenance, a: &SimulateArgs) -> Result<()> {
    if !a.schedule.trim_start().starts_with('[') {
        prov = prov.with_input(a.schedule.clone());
    }
    let schedule = io::read_schedule(&a.schedule)?;
    let j = state(a.state)?;
    let use_ode = a.force_ode || !cfg.device.is_linear();
    let traj = if use_ode {
        propagate_ode(&cfg.device, j, &schedule, a.dt)?
    } else {
        propagate_closed_form(&cfg.device, j, &schedule, a.dt)?
    };
    let csv = cfg.out_dir.join("trajectory.csv");
    io::write_trajectory(&csv, &traj)?;
    announce(&csv);

    #[derive(Serialize)]
    struct Meta<'a> {
        data: &'a str,
        method: &'a str,
        qubit_state: QubitState,
        schedule: &'a sspe_core::PulseSchedule,
        final_photons: f64,
    }
    let meta = Meta {
        data: "trajectory.csv",
        method: if use_ode { "rk4" } else { "closed_form" },
        qubit_state: j,
        schedule: &schedule,
        final_photons: traj.final_photons(),
    };
    let path = cfg.out_dir.join("trajectory.json");
    io::write_json(&path, &prov.wrap(&meta))?;
    announce(&path);
    Ok(())
}

fn design(cfg: &CliConfig, prov: &Provenance, a: &DesignArgs) -> Result<()> {
    let targets = states(&a.states)?;
    let readout = a.pulse.readout()?;
    let opts = a.optimizer.options();
    let path = cfg.out_dir.join("design.json");

    match a.mode {
        DesignKind::Sspe => {
            let mut solutions: Vec<ResetSolution> = Vec::new();
            if let ([j], true) = (targets.as_slice(), cfg.device.is_linear()) {
                let sol = sspe_analytic(&cfg.device, *j, &readout, a.pulse.reset_duration)?;
                if let Some(cap) = opts.max_amplitude {
                    if sol.reset_amplitude > cap {
                        return Err(
                            sspe_core::Error::AmplitudeCapExceeded { amplitude: sol.reset_amplitude, cap }.into()
                        );
                    }
                }
                solutions.push(sol);
            }
            let weights = vec![1.0; targets.len()];
            let numeric = sspe_optimize(&cfg.device, &targets, &readout, a.pulse.reset_duration, &weights, &opts)?;
            let converged = numeric.converged;
            solutions.push(numeric);

            #[derive(Serialize)]
            struct Out<'a> {
                readout: DriveSegment,
                solutions: &'a [ResetSolution],
            }
            io::write_json(&path, &prov.wrap(&Out { readout, solutions: &solutions }))?;
            announce(&path);
            for s in &solutions {
                let method = serde_json::to_value(s.method).unwrap_or_default();
                println!(
                    "{} reset: amplitude {} rad/ns, phase {} rad, residual photons {}",
                    method.as_str().unwrap_or("?"),
                    s.reset_amplitude,
                    s.reset_phase,
                    s.residual_photons
                        .iter()
                        .map(|r| format!("|{}> {:e}", r.state, r.photons))
                        .collect::<Vec<_>>()
                        .join(", ")
                );
            }
            if !converged {
                return Err(CliError::NotConverged("numeric reset design".into()));
            }
        }
        DesignKind::Clear => {
            let design = clear_optimize(&cfg.device, &targets, &readout, a.pulse.reset_duration, &opts)?;
            io::write_json(&path, &prov.wrap(&design))?;
            announce(&path);
            if !design.converged {
                return Err(CliError::NotConverged("CLEAR design".into()));
            }
        }
    }
    Ok(())
}

fn linspace(hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    (0..n).map(|k| hi * k as f64 / (n - 1) as f64).collect()
}

fn map(cfg: &CliConfig, prov: &Provenance, a: &MapArgs) -> Result<()> {
    if a.amp_points == 0 || a.phase_points == 0 {
        return Err(CliError::Config("grid sizes must be positive".into()));
    }
    let j = state(a.state)?;
    let readout = a.pulse.readout()?;
    let exact = if cfg.device.is_linear() {
        Some(sspe_analytic(&cfg.device, j, &readout, a.pulse.reset_duration)?)
    } else {
        None
    };
    let amp_max = match (a.amp_max, &exact) {
        (Some(m), _) => m,
        (None, Some(sol)) if sol.reset_amplitude > 0.0 => 2.0 * sol.reset_amplitude,
        _ => 4.0 * readout.amplitude.max(1e-3),
    };
    let amps = linspace(amp_max, a.amp_points);
    let phases: Vec<f64> = (0..a.phase_points).map(|k| TAU * k as f64 / a.phase_points as f64).collect();
    let m = residual_map(&cfg.device, j, &readout, a.pulse.reset_duration, &amps, &phases)?;

    let name = format!("map_{j}.csv");
    let csv = cfg.out_dir.join(&name);
    io::write_map(&csv, &m)?;
    announce(&csv);
    let mut sidecar = MapSidecar::without_optimum(&m, &name, &readout).with_reset_duration(a.pulse.reset_duration);
    if let Some(sol) = &exact {
        sidecar = sidecar.with_optimum(sol.reset_amplitude, sol.reset_phase);
    }
    let path = cfg.out_dir.join(format!("map_{j}.json"));
    io::write_json(&path, &prov.wrap(&sidecar))?;
    announce(&path);
    let (amp, phase) = m.min_location();
    println!("grid minimum {:e} photons at {amp} rad/ns, {phase} rad", m.min_residual());
    Ok(())
}

fn compare(cfg: &CliConfig, prov: &Provenance, a: &CompareArgs) -> Result<()> {
    let targets = states(&a.states)?;
    let readout = a.pulse.readout()?;
    let cmp = compare_schemes(
        &cfg.device,
        &targets,
        &readout,
        a.pulse.reset_duration,
        a.joint,
        a.sample_dt,
        &a.optimizer.options(),
    )?;

    #[derive(Serialize)]
    struct Run<'a> {
        #[serde(flatten)]
        run: &'a sspe_core::design::SchemeRun,
        trajectory_csv: String,
    }
    #[derive(Serialize)]
    struct Out<'a> {
        reset_start: f64,
        reset_duration: f64,
        runs: Vec<Run<'a>>,
    }
    let mut runs = Vec::new();
    for run in &cmp.runs {
        let name = format!("{}_{}.csv", run.scheme.to_string().to_lowercase(), run.state);
        if let Some(tr) = &run.trajectory {
            let path = cfg.out_dir.join(&name);
            io::write_trajectory(&path, tr)?;
            announce(&path);
        }
        let rate = run.decay_rate_mhz.map(|r| format!("{r:.4} MHz")).unwrap_or_else(|| "n/a".into());
        println!("{} |{}>: residual {:e} photons, effective rate {rate}", run.scheme, run.state, run.residual);
        runs.push(Run { run, trajectory_csv: name });
    }
    let path = cfg.out_dir.join("comparison.json");
    io::write_json(&path, &prov.wrap(&Out { reset_start: cmp.reset_start, reset_duration: cmp.reset_duration, runs }))?;
    announce(&path);
    Ok(())
}

#[derive(Serialize)]
struct FitOut<'a> {
    model: &'a str,
    data: String,
    fit: &'a FitResult,
    units: &'a [(&'a str, &'a str)],
}

fn write_fit(
    cfg: &CliConfig,
    prov: &Provenance,
    name: &str,
    input: &Path,
    fit: &FitResult,
    units: &[(&str, &str)],
) -> Result<()> {
    let path = cfg.out_dir.join(format!("{name}_fit.json"));
    let out = FitOut { model: name, data: input.display().to_string(), fit, units };
    io::write_json(&path, &prov.wrap(&out))?;
    announce(&path);
    for (k, v) in &fit.values {
        println!("{k} = {v}");
    }
    if !fit.converged {
        return Err(CliError::NotConverged(format!("{name} fit")));
    }
    Ok(())
}

/// Fringe frequency (MHz) with the largest periodogram power, for samples
/// with times in µs.
pub fn estimate_fringe(samples: &[(f64, f64)]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().map(|s| s.1).sum::<f64>() / n;
    let t0 = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let t1 = samples.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    let span = (t1 - t0).max(f64::MIN_POSITIVE);
    let nyquist = 0.5 * (n - 1.0) / span;
    let step = 0.05 / span;
    let mut best = (0.0, f64::NEG_INFINITY);
    let mut f = 0.5 / span;
    while f <= nyquist {
        let (mut c, mut s) = (0.0, 0.0);
        for &(t, y) in samples {
            let (sin, cos) = (TAU * f * t).sin_cos();
            c += (y - mean) * cos;
            s += (y - mean) * sin;
        }
        let power = c * c + s * s;
        if power > best.1 {
            best = (f, power);
        }
        f += step;
    }
    best.0
}

fn fit(cfg: &CliConfig, prov: Provenance, cmd: &FitCommand) -> Result<()> {
    match cmd {
        FitCommand::Ramsey(a) => {
            let data = io::read_pairs(&a.input, ["t", "S"])?;
            let fixed = RamseyModel::from_device(&cfg.device, 0.0, 0.0, 0.0)?.fixed();
            let fringe = TAU * a.fringe.unwrap_or_else(|| estimate_fringe(&data));
            let phases: Vec<f64> = match a.phi0 {
                Some(p) => vec![p],
                None => (0..8).map(|k| TAU * k as f64 / 8.0).collect(),
            };
            let mut best: Option<FitResult> = None;
            for phi0 in phases {
                let fit = fit_ramsey(&data, &fixed, &RamseyInit { fringe, phi0, n0: a.n0 })?;
                if best.as_ref().is_none_or(|b| fit.residual_norm < b.residual_norm) {
                    best = Some(fit);
                }
            }
            let fit = best.expect("at least one start");
            let units = [("fringe", "rad/us"), ("phi0", "rad"), ("n0", "photons")];
            write_fit(cfg, &prov.with_input(a.input.display().to_string()), "ramsey", &a.input, &fit, &units)
        }
        FitCommand::Backaction(a) => {
            let data = io::read_backaction(&a.input)?;
            let fit = fit_backaction(&data)?;
            let units = [("gamma_out", "per measurement"), ("gamma_back", "per measurement"), ("p0", "probability")];
            write_fit(cfg, &prov.with_input(a.input.display().to_string()), "backaction", &a.input, &fit, &units)
        }
        FitCommand::Kerr(a) => {
            let data = io::read_pairs(&a.input, ["v2", "n"])?;
            let init = KerrInit { volt_to_eps: a.volt_to_eps, kerr_khz: a.kerr_init };
            let fit = fit_kerr_calibration(&data, &cfg.device, state(a.state)?, &init)?;
            let units = [("kerr_khz", "kHz"), ("volt_to_eps", "rad/ns/V")];
            write_fit(cfg, &prov.with_input(a.input.display().to_string()), "kerr", &a.input, &fit, &units)
        }
        FitCommand::Decay(a) => {
            let data = io::read_pairs(&a.input, ["t", "n"])?;
            let fit = exp_decay_fit(&data)?;
            let units = [("n0", "photons"), ("rate", "MHz"), ("rate_rad_per_ns", "rad/ns")];
            write_fit(cfg, &prov.with_input(a.input.display().to_string()), "decay", &a.input, &fit, &units)
        }
    }
}

fn calibrate(cfg: &CliConfig, prov: Provenance, a: &CalibrateArgs) -> Result<()> {
    let spectra = io::read_spectra(&a.input)?;
    let chi = match a.chi {
        Some(c) => c,
        None => half_splitting(&cfg.device)?,
    };
    let photons = ac_stark_reconstruct(&spectra, chi, a.line_center)?;
    let csv = cfg.out_dir.join("photons.csv");
    io::write_csv(&csv, &["t", "n"], photons.iter().map(|&(t, n)| vec![t, n]))?;
    announce(&csv);

    #[derive(Serialize)]
    struct Meta<'a> {
        data: &'a str,
        chi_mhz: f64,
        line_center_mhz: f64,
        delays: usize,
    }
    let path = cfg.out_dir.join("photons.json");
    let meta = Meta { data: "photons.csv", chi_mhz: chi, line_center_mhz: a.line_center, delays: photons.len() };
    io::write_json(&path, &prov.with_input(a.input.display().to_string()).wrap(&meta))?;
    announce(&path);
    Ok(())
}

fn run_scenarios(cfg: &CliConfig, name: &str) -> Result<()> {
    let mut failures = Vec::new();
    for s in scenario::expand(name)? {
        let report = scenario::run_scenario(s, cfg)?;
        for a in &report.assertions {
            println!("{s}: {a}");
        }
        println!("{s}: {}", if report.passed { "passed" } else { "FAILED" });
        if let Err(e) = report.into_result() {
            failures.push(e);
        }
    }
    match failures.len() {
        0 => Ok(()),
        1 => Err(failures.remove(0)),
        _ => Err(CliError::ScenarioFailed {
            name: "multiple".into(),
            detail: failures.iter().map(ToString::to_string).collect::<Vec<_>>().join(" | "),
        }),
    }
}
