//! Command-line front end for the boson sampling budget models.
//!
//! Subcommands emit plain CSV with `#`-prefixed header comments echoing the
//! full effective configuration, so every file is reproducible from its own
//! header. Infeasible sweep cells carry the literal token `INFEASIBLE`.

mod output;
mod validate;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use boson_budget::architectures::{
    depth_report, loop_penalties, ArchitectureSpec, Encoding, Family, ModeScaling,
};
use boson_budget::lossmodel::{required_samples, Efficiency, ExperimentConfig, LossDb};
use boson_budget::solver::{
    self, mzi_frontier, source_requirement_curve, tolerated_loss_surface, SamplingMode,
    SourceFixedLosses,
};

use output::Output;

#[derive(Parser)]
#[command(
    name = "boson-budget",
    version,
    about = "Loss budgets, architecture depths and validation suites for single-photon boson sampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output file; stdout when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for every stochastic component
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for grid sweeps (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Significant digits for floating-point output
    #[arg(long, global = true, default_value_t = 6)]
    precision: usize,

    /// Flat key=value config file; explicit flags win
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Single-photon source rate in Hz
    #[arg(long, global = true)]
    single_photon_rate: Option<f64>,

    /// Target sample rate in Hz
    #[arg(long, global = true)]
    target_rate: Option<f64>,

    /// Error threshold of the classical-approximation bound
    #[arg(long, global = true)]
    error_threshold: Option<f64>,

    /// Permanent order of the classical approximation
    #[arg(long, global = true)]
    permanent_order: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScalingArg {
    Quadratic,
    Linear,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EncodingArg {
    Spatial,
    TimeBin,
}

impl From<EncodingArg> for Encoding {
    fn from(e: EncodingArg) -> Encoding {
        match e {
            EncodingArg::Spatial => Encoding::Spatial,
            EncodingArg::TimeBin => Encoding::TimeBin,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Clements,
    Rectangular,
    HybridSpatial,
    HybridTimebin,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Clements => Family::Clements,
            FamilyArg::Rectangular => Family::Rectangular,
            FamilyArg::HybridSpatial => Family::HybridSpatial,
            FamilyArg::HybridTimebin => Family::HybridTimeBin,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Extra input photons compensate loss
    LostPhoton,
    /// Exactly as many detections as inputs
    Lossless,
}

#[derive(Args)]
struct ScalingOpts {
    #[arg(long, value_enum, default_value = "quadratic")]
    scaling: ScalingArg,

    /// Modes per detected photon for linear scaling
    #[arg(long, default_value_t = 10.0)]
    linear_coefficient: f64,
}

impl ScalingOpts {
    fn scaling(&self) -> ModeScaling {
        match self.scaling {
            ScalingArg::Quadratic => ModeScaling::Quadratic,
            ScalingArg::Linear => ModeScaling::Linear {
                coefficient: self.linear_coefficient,
            },
        }
    }
}

#[derive(Args)]
struct GridOpts {
    /// Single indistinguishability instead of a sweep
    #[arg(long)]
    x2: Option<f64>,

    #[arg(long, default_value_t = 0.805)]
    x2_min: f64,

    #[arg(long, default_value_t = 1.0)]
    x2_max: f64,

    #[arg(long, default_value_t = 0.005)]
    x2_step: f64,

    #[arg(long, default_value_t = 50)]
    detected_min: u32,

    #[arg(long, default_value_t = 100)]
    detected_max: u32,
}

impl GridOpts {
    fn x2_grid(&self) -> Vec<f64> {
        if let Some(x2) = self.x2 {
            return vec![x2];
        }
        let n = ((self.x2_max - self.x2_min) / self.x2_step).round() as usize;
        (0..=n)
            .map(|i| self.x2_min + i as f64 * self.x2_step)
            .collect()
    }

    fn detected_grid(&self) -> Vec<u32> {
        (self.detected_min..=self.detected_max).collect()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Maximum tolerated per-photon system loss over an (x2, detected) grid
    ToleratedLoss {
        #[command(flatten)]
        scaling: ScalingOpts,
        #[arg(long, value_enum, default_value = "spatial")]
        encoding: EncodingArg,
        #[command(flatten)]
        grid: GridOpts,
    },
    /// Residual loss budget versus MZI insertion loss at a fixed operating point
    MziFrontier {
        #[arg(long, value_enum, default_value = "hybrid-spatial")]
        family: FamilyArg,
        #[arg(long, value_enum, default_value = "spatial")]
        encoding: EncodingArg,
        #[arg(long, value_enum, default_value = "lost-photon")]
        mode: ModeArg,
        #[command(flatten)]
        scaling: ScalingOpts,
        /// Indistinguishability fixing the operating point
        #[arg(long, default_value_t = 0.96)]
        x2: f64,
        #[arg(long, default_value_t = 50)]
        detected: u32,
        #[arg(long, default_value_t = 0.0)]
        mzi_min: f64,
        #[arg(long, default_value_t = 0.06)]
        mzi_max: f64,
        #[arg(long, default_value_t = 0.001)]
        mzi_step: f64,
        /// Delay-line propagation loss per bin (time-bin encodings), dB
        #[arg(long, default_value_t = 0.0)]
        prop_loss_per_bin: f64,
        /// Coupling loss between cascaded time-bin stages, dB
        #[arg(long, default_value_t = 0.0)]
        interstage_loss: f64,
    },
    /// Required source efficiency versus indistinguishability for the
    /// two-encoding spatial hybrid
    SourceRequirements {
        #[command(flatten)]
        scaling: ScalingOpts,
        #[command(flatten)]
        grid: GridOpts,
        #[arg(long, default_value_t = 0.0035)]
        mzi_loss: f64,
        #[arg(long, default_value_t = 0.458)]
        coupling_loss: f64,
        /// Per-switch demultiplexer loss, dB
        #[arg(long, default_value_t = 0.458 / 5.0)]
        demux_per_switch: f64,
        /// Defaults to the experiment-level detector efficiency
        #[arg(long)]
        detector_efficiency: Option<f64>,
    },
    /// Depth, rate and layout report for one architecture
    Depth {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, value_enum, default_value = "spatial")]
        encoding: EncodingArg,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 0.0)]
        mzi_loss: f64,
        /// Time separation between bins, seconds (loop penalty report)
        #[arg(long, default_value_t = 1e-9)]
        tau: f64,
    },
    /// Brute-force validation suites; exits 1 on any failure
    Validate {
        /// all, permanent, post-selection, scores, counting, hom,
        /// mesh-unitarity, timebin-equiv, haar-occupancy
        #[arg(long, default_value = "all")]
        suite: String,
        /// Mesh size for the time-bin equivalence suite (even)
        #[arg(long, default_value_t = 4)]
        m: usize,
        /// Monte Carlo trials for the occupancy suite
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
}

fn load_config(path: &PathBuf) -> anyhow::Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("{}:{}: expected key=value", path.display(), idx + 1))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parsed<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
) -> anyhow::Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match map.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|e| anyhow::anyhow!("config key {key}: {e}")),
    }
}

fn effective_config(cli: &Cli) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = &cli.config {
        let map = load_config(path)?;
        if let Some(v) = parsed::<f64>(&map, "single-photon-rate")? {
            cfg.single_photon_rate_hz = v;
        }
        if let Some(v) = parsed::<f64>(&map, "target-rate")? {
            cfg.target_sample_rate_hz = v;
        }
        if let Some(v) = parsed::<f64>(&map, "error-threshold")? {
            cfg.error_threshold = v;
        }
        if let Some(v) = parsed::<u32>(&map, "permanent-order")? {
            cfg.permanent_order = v;
        }
        if let Some(v) = parsed::<f64>(&map, "detector-efficiency")? {
            cfg.detector_efficiency = Efficiency::new(v).map_err(|e| anyhow::anyhow!("{e}"))?;
        }
    }
    if let Some(v) = cli.single_photon_rate {
        cfg.single_photon_rate_hz = v;
    }
    if let Some(v) = cli.target_rate {
        cfg.target_sample_rate_hz = v;
    }
    if let Some(v) = cli.error_threshold {
        cfg.error_threshold = v;
    }
    if let Some(v) = cli.permanent_order {
        cfg.permanent_order = v;
    }
    cfg.validate().map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(cfg)
}

fn config_header(cfg: &ExperimentConfig, seed: u64) -> Vec<(&'static str, String)> {
    vec![
        (
            "single-photon-rate",
            format!("{}", cfg.single_photon_rate_hz),
        ),
        ("target-rate", format!("{}", cfg.target_sample_rate_hz)),
        ("error-threshold", format!("{}", cfg.error_threshold)),
        ("permanent-order", format!("{}", cfg.permanent_order)),
        (
            "detector-efficiency",
            format!("{}", cfg.detector_efficiency.value()),
        ),
        ("seed", format!("{seed}")),
    ]
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring worker threads")?;
    }
    let cfg = effective_config(cli)?;
    let mut out = Output::create(cli.out.as_deref(), cli.precision)?;

    match &cli.command {
        Command::ToleratedLoss {
            scaling,
            encoding,
            grid,
        } => {
            let sc = scaling.scaling();
            let enc: Encoding = (*encoding).into();
            let mut header = config_header(&cfg, cli.seed);
            header.push(("scaling", sc.label()));
            header.push(("encoding", enc.to_string()));
            out.header("tolerated-loss", &header)?;
            out.row(
                &[
                    "x2",
                    "detected",
                    "l",
                    "p",
                    "m",
                    "encoding",
                    "scaling",
                    "max_loss_db",
                ]
                .map(String::from),
            )?;
            let cells =
                tolerated_loss_surface(&cfg, &sc, enc, &grid.x2_grid(), &grid.detected_grid());
            for cell in cells {
                match cell.outcome {
                    Ok(p) => out.row(&[
                        out.num(p.x2),
                        p.detected.to_string(),
                        p.lost.to_string(),
                        p.input_photons.to_string(),
                        p.modes.to_string(),
                        enc.to_string(),
                        sc.label(),
                        out.num(p.max_loss.db()),
                    ])?,
                    Err(_) => out.row(&[
                        out.num(cell.x2),
                        cell.detected.to_string(),
                        "-".into(),
                        "-".into(),
                        "-".into(),
                        enc.to_string(),
                        sc.label(),
                        "INFEASIBLE".into(),
                    ])?,
                }
            }
            out.finish()?;
        }
        Command::MziFrontier {
            family,
            encoding,
            mode,
            scaling,
            x2,
            detected,
            mzi_min,
            mzi_max,
            mzi_step,
            prop_loss_per_bin,
            interstage_loss,
        } => {
            let sc = scaling.scaling();
            let fam: Family = (*family).into();
            let mut arch = ArchitectureSpec::new(fam, (*encoding).into(), LossDb::ZERO);
            arch.prop_loss_per_bin =
                LossDb::new(*prop_loss_per_bin).map_err(|e| anyhow::anyhow!("{e}"))?;
            arch.interstage_coupling_loss =
                LossDb::new(*interstage_loss).map_err(|e| anyhow::anyhow!("{e}"))?;
            let sampling = match mode {
                ModeArg::LostPhoton => SamplingMode::LostPhotons,
                ModeArg::Lossless => SamplingMode::Lossless,
            };
            let mut cfg = cfg;
            cfg.indistinguishability = *x2;

            let mut grid: Vec<f64> = {
                let n = ((mzi_max - mzi_min) / mzi_step).round() as usize;
                (0..=n).map(|i| mzi_min + i as f64 * mzi_step).collect()
            };
            for anchor in [
                solver::STATIC_MZI_LOSS_DB,
                solver::RECONFIGURABLE_MZI_LOSS_DB,
            ] {
                if anchor >= *mzi_min && anchor <= *mzi_max && !grid.contains(&anchor) {
                    grid.push(anchor);
                }
            }
            grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));

            let frontier = mzi_frontier(&cfg, &arch, &sc, sampling, *detected, &grid)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let mut header = config_header(&cfg, cli.seed);
            header.push(("x2", format!("{x2}")));
            header.push(("architecture", fam.to_string()));
            header.push(("encoding", arch.encoding.to_string()));
            header.push(("sampling-mode", sampling.to_string()));
            header.push(("scaling", sc.label()));
            header.push(("p", frontier.counts.input.to_string()));
            header.push(("l", frontier.counts.lost.to_string()));
            header.push(("detected", frontier.counts.detected.to_string()));
            header.push(("modes", frontier.modes.to_string()));
            header.push(("optical-depth", frontier.optical_depth.to_string()));
            header.push(("max-system-loss-db", out.num(frontier.max_system_loss.db())));
            header.push((
                "reference-mzi-losses-db",
                format!(
                    "{}, {}",
                    solver::STATIC_MZI_LOSS_DB,
                    solver::RECONFIGURABLE_MZI_LOSS_DB
                ),
            ));
            out.header("mzi-frontier", &header)?;
            out.row(
                &[
                    "architecture",
                    "scaling",
                    "sampling_mode",
                    "mzi_loss_db",
                    "residual_budget_db",
                ]
                .map(String::from),
            )?;
            for point in &frontier.points {
                out.row(&[
                    fam.to_string(),
                    sc.label(),
                    sampling.to_string(),
                    out.num(point.mzi_loss.db()),
                    match point.residual_budget {
                        Ok(r) => out.num(r.db()),
                        Err(_) => "INFEASIBLE".into(),
                    },
                ])?;
            }
            out.finish()?;
        }
        Command::SourceRequirements {
            scaling,
            grid,
            mzi_loss,
            coupling_loss,
            demux_per_switch,
            detector_efficiency,
        } => {
            let sc = scaling.scaling();
            let detector = match detector_efficiency {
                Some(v) => Efficiency::new(*v).map_err(|e| anyhow::anyhow!("{e}"))?,
                None => cfg.detector_efficiency,
            };
            let fixed = SourceFixedLosses {
                mzi_loss: LossDb::new(*mzi_loss).map_err(|e| anyhow::anyhow!("{e}"))?,
                coupling_loss: LossDb::new(*coupling_loss).map_err(|e| anyhow::anyhow!("{e}"))?,
                demux_per_switch: LossDb::new(*demux_per_switch)
                    .map_err(|e| anyhow::anyhow!("{e}"))?,
                detector_efficiency: detector,
            };
            let mut header = config_header(&cfg, cli.seed);
            header.push(("scaling", sc.label()));
            header.push(("mzi-loss-db", out.num(fixed.mzi_loss.db())));
            header.push(("coupling-loss-db", out.num(fixed.coupling_loss.db())));
            header.push(("demux-per-switch-db", out.num(fixed.demux_per_switch.db())));
            header.push((
                "detector-efficiency",
                out.num(fixed.detector_efficiency.value()),
            ));
            out.header("source-requirements", &header)?;
            out.row(
                &[
                    "x2",
                    "scaling",
                    "detected",
                    "l",
                    "required_source_efficiency",
                ]
                .map(String::from),
            )?;
            let points =
                source_requirement_curve(&cfg, &sc, &grid.x2_grid(), &grid.detected_grid(), &fixed);
            for p in points {
                match p.required_source_efficiency {
                    Ok(eff) => out.row(&[
                        out.num(p.x2),
                        sc.label(),
                        p.detected.to_string(),
                        p.lost.to_string(),
                        out.num(eff.value()),
                    ])?,
                    Err(_) => out.row(&[
                        out.num(p.x2),
                        sc.label(),
                        "-".into(),
                        "-".into(),
                        "INFEASIBLE".into(),
                    ])?,
                }
            }
            out.finish()?;
        }
        Command::Depth {
            family,
            encoding,
            p,
            m,
            mzi_loss,
            tau,
        } => {
            let fam: Family = (*family).into();
            let spec = ArchitectureSpec::new(
                fam,
                (*encoding).into(),
                LossDb::new(*mzi_loss).map_err(|e| anyhow::anyhow!("{e}"))?,
            );
            let report = depth_report(&spec, *p, *m, cfg.single_photon_rate_hz)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let header = config_header(&cfg, cli.seed);
            out.header("depth", &header)?;
            out.line(&format!("architecture:        {fam} ({})", spec.encoding))?;
            out.line(&format!("photons:             {p}"))?;
            out.line(&format!("target modes:        {m}"))?;
            out.line(&format!("optical depth:       {}", report.optical_depth))?;
            out.line(&format!(
                "interferometer loss: {} dB",
                out.num(report.interferometer_loss.db())
            ))?;
            out.line(&format!(
                "input rate:          {} Hz",
                out.num(report.input_rate_hz)
            ))?;
            out.line(&format!(
                "realized modes:      {}",
                report.total_modes_realized
            ))?;
            if let Some(l) = report.hybrid_timebin_layout {
                out.line(&format!(
                    "layout:              n={}, m1={}, m2={}, time-bins={}",
                    l.demux_depth, l.m1, l.m2, l.time_bins
                ))?;
            }
            if let Some(l) = report.hybrid_spatial_layout {
                out.line(&format!(
                    "layout:              m1={}, m2={}, input split {}x{}",
                    l.m1, l.m2, l.input_split.0, l.input_split.1
                ))?;
            }
            out.line(&format!(
                "samples needed:      {}",
                out.num(required_samples(*m as f64, *p))
            ))?;
            if spec.is_time_bin() && *m <= u32::MAX as u64 && m % 2 == 0 {
                if let Ok(pen) = loop_penalties(*m as u32, *tau, cfg.single_photon_rate_hz) {
                    out.line(&format!(
                        "cascade delay:       {} s (single-loop alternative: {} s at {} Hz)",
                        out.num(pen.delay_cascaded_s),
                        out.num(pen.delay_loop_s),
                        out.num(pen.loop_input_rate_hz)
                    ))?;
                }
            }
            out.finish()?;
        }
        Command::Validate { suite, m, trials } => {
            let header = config_header(&cfg, cli.seed);
            out.header("validate", &header)?;
            let ok = validate::run_suites(suite, *m, *trials, cli.seed, &mut out)?;
            out.finish()?;
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
