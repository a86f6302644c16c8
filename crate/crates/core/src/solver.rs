//! The three budget experiments: tolerated-loss surfaces, MZI insertion-loss
//! frontiers, and source-efficiency requirement curves.
//!
//! Every cell of every sweep reduces to one scalar question: what is the
//! largest per-photon system loss at which the sample rate still meets the
//! target. That root is found by bisection on the lossy side of the sample
//! probability's peak, where the rate decreases monotonically with loss.

use rayon::prelude::*;

use crate::architectures::{
    depth, optimize_hybrid_spatial, ArchitectureSpec, Encoding, Family, ModeScaling, SubFamily,
};
use crate::lossmodel::{
    ceil_log2, max_lost_photons, sample_probability_ab, sample_probability_linear, Efficiency,
    ExperimentConfig, LossDb, PhotonCounts,
};
use crate::{Error, Result};

/// Bisection terminates when the bracket is narrower than this, in dB.
const BISECTION_TOL_DB: f64 = 1e-6;

/// Why a sweep cell produced no number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Infeasibility {
    /// Even a lossless run violates the classical-simulability bound.
    ErrorBound,
    /// Even a lossless system misses the target sample rate.
    RateBudget,
    /// The architecture cannot host this operating point.
    Architecture,
}

impl std::fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("INFEASIBLE")
    }
}

/// One feasible cell of a tolerated-loss surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleratedLossPoint {
    pub x2: f64,
    pub detected: u32,
    pub lost: u32,
    pub input_photons: u32,
    pub modes: u64,
    pub max_loss: LossDb,
}

/// A surface cell, feasible or not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceCell {
    pub x2: f64,
    pub detected: u32,
    pub outcome: std::result::Result<ToleratedLossPoint, Infeasibility>,
}

/// Sample probability of the operating point, by mode scaling: quadratic
/// scalings post-select on exactly `p - l` detections, linear scalings fold
/// collisions into the post-selection efficiency.
fn sample_probability(
    scaling: &ModeScaling,
    counts: PhotonCounts,
    modes: u64,
    survival: Efficiency,
) -> f64 {
    match scaling {
        ModeScaling::Quadratic => {
            sample_probability_ab(survival, counts.input, counts.lost).value()
        }
        ModeScaling::Linear { .. } => {
            sample_probability_linear(survival, counts.input, counts.detected, modes).value()
        }
    }
}

/// Largest per-photon system loss at which the configuration still reaches
/// the target sample rate.
///
/// The sample probability peaks at survival `(p - l)/p`; tolerated loss is a
/// maximum, so the relevant root sits on the lossier side of that peak where
/// the rate decreases with loss. Bisection runs there to 1e-6 dB.
pub fn max_tolerated_loss(
    cfg: &ExperimentConfig,
    scaling: &ModeScaling,
    encoding: Encoding,
    counts: PhotonCounts,
) -> std::result::Result<LossDb, Infeasibility> {
    counts.validate().map_err(|_| Infeasibility::ErrorBound)?;
    let modes = scaling.modes(counts.detected);
    let rate = match encoding {
        Encoding::Spatial => cfg.single_photon_rate_hz / counts.input as f64,
        Encoding::TimeBin => 2.0 * cfg.single_photon_rate_hz / modes as f64,
    };
    let required = cfg.target_sample_rate_hz / rate;

    let eval = |loss_db: f64| {
        let survival = LossDb::new(loss_db)
            .expect("bisection stays non-negative")
            .to_efficiency();
        sample_probability(scaling, counts, modes, survival)
    };

    let peak_db = -10.0 * ((counts.surviving() as f64 / counts.input as f64).log10());
    if eval(peak_db) < required {
        return Err(Infeasibility::RateBudget);
    }
    let mut lo = peak_db;
    let mut hi = peak_db + 10.0;
    while eval(hi) >= required {
        hi += 10.0;
    }
    while hi - lo > BISECTION_TOL_DB {
        let mid = 0.5 * (lo + hi);
        if eval(mid) >= required {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(LossDb::new(0.5 * (lo + hi)).expect("bracket stays non-negative"))
}

/// Tolerated-loss surface over an indistinguishability and detected-photon
/// grid. Lost photons are pushed as high as the simulability bound allows in
/// every cell; infeasible cells carry an explicit marker.
pub fn tolerated_loss_surface(
    cfg: &ExperimentConfig,
    scaling: &ModeScaling,
    encoding: Encoding,
    x2_grid: &[f64],
    detected_grid: &[u32],
) -> Vec<SurfaceCell> {
    let cells: Vec<(f64, u32)> = x2_grid
        .iter()
        .flat_map(|&x2| detected_grid.iter().map(move |&d| (x2, d)))
        .collect();
    cells
        .par_iter()
        .map(|&(x2, detected)| {
            let outcome =
                match max_lost_photons(x2, detected, cfg.error_threshold, cfg.permanent_order) {
                    None => Err(Infeasibility::ErrorBound),
                    Some(lost) => {
                        let counts = PhotonCounts {
                            input: detected + lost,
                            lost,
                            detected,
                        };
                        max_tolerated_loss(cfg, scaling, encoding, counts).map(|max_loss| {
                            ToleratedLossPoint {
                                x2,
                                detected,
                                lost,
                                input_photons: detected + lost,
                                modes: scaling.modes(detected),
                                max_loss,
                            }
                        })
                    }
                };
            SurfaceCell {
                x2,
                detected,
                outcome,
            }
        })
        .collect()
}

/// Per-indistinguishability maxima of a surface: the best tolerated loss
/// over the detected-photon grid, with the cell that achieves it.
pub fn surface_maxima(cells: &[SurfaceCell]) -> Vec<(f64, Option<ToleratedLossPoint>)> {
    let mut x2s: Vec<f64> = cells.iter().map(|c| c.x2).collect();
    x2s.dedup();
    x2s.iter()
        .map(|&x2| {
            let best = cells
                .iter()
                .filter(|c| c.x2 == x2)
                .filter_map(|c| c.outcome.ok())
                .max_by(|a, b| a.max_loss.partial_cmp(&b.max_loss).expect("loss is finite"));
            (x2, best)
        })
        .collect()
}

/// Mean difference of per-indistinguishability maxima between two surfaces,
/// over the columns where both are feasible.
pub fn mean_ridge_gap(a: &[SurfaceCell], b: &[SurfaceCell]) -> Option<f64> {
    let ma = surface_maxima(a);
    let mb = surface_maxima(b);
    let mut diffs = Vec::new();
    for ((xa, pa), (xb, pb)) in ma.iter().zip(mb.iter()) {
        debug_assert_eq!(xa, xb, "surfaces share the x2 grid");
        if let (Some(pa), Some(pb)) = (pa, pb) {
            diffs.push(pa.max_loss.db() - pb.max_loss.db());
        }
    }
    if diffs.is_empty() {
        None
    } else {
        Some(diffs.iter().sum::<f64>() / diffs.len() as f64)
    }
}

/// Post-selection rule of an insertion-loss frontier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    /// Extra photons compensate loss: `l` chosen by the simulability bound.
    LostPhotons,
    /// As many detections as inputs, no loss or collisions tolerated.
    Lossless,
}

impl std::fmt::Display for SamplingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SamplingMode::LostPhotons => "lost-photon",
            SamplingMode::Lossless => "lossless",
        })
    }
}

/// One point of an insertion-loss frontier: the loss budget left for
/// everything that is not the interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierPoint {
    pub mzi_loss: LossDb,
    pub residual_budget: std::result::Result<LossDb, Infeasibility>,
}

/// Frontier summary for one architecture and scaling.
#[derive(Debug, Clone)]
pub struct Frontier {
    pub counts: PhotonCounts,
    pub modes: u64,
    pub optical_depth: u64,
    pub max_system_loss: LossDb,
    pub points: Vec<FrontierPoint>,
}

fn frontier_counts(
    cfg: &ExperimentConfig,
    mode: SamplingMode,
    detected: u32,
) -> std::result::Result<PhotonCounts, Infeasibility> {
    match mode {
        SamplingMode::Lossless => Ok(PhotonCounts {
            input: detected,
            lost: 0,
            detected,
        }),
        SamplingMode::LostPhotons => {
            let lost = max_lost_photons(
                cfg.indistinguishability,
                detected,
                cfg.error_threshold,
                cfg.permanent_order,
            )
            .ok_or(Infeasibility::ErrorBound)?;
            Ok(PhotonCounts {
                input: detected + lost,
                lost,
                detected,
            })
        }
    }
}

/// Residual loss budget (`max system loss - interferometer loss`) against
/// MZI insertion loss, at a fixed operating point.
///
/// The counts stay fixed along the sweep, so every frontier is a straight
/// line of slope `-depth` until it hits zero and turns infeasible.
pub fn mzi_frontier(
    cfg: &ExperimentConfig,
    arch: &ArchitectureSpec,
    scaling: &ModeScaling,
    mode: SamplingMode,
    detected: u32,
    mzi_grid: &[f64],
) -> Result<Frontier> {
    let counts = frontier_counts(cfg, mode, detected)
        .map_err(|_| Error::Infeasible("simulability bound rejects this operating point".into()))?;
    let modes = scaling.modes(counts.detected);
    let encoding = if arch.is_time_bin() && !matches!(arch.family, Family::HybridTimeBin) {
        Encoding::TimeBin
    } else {
        Encoding::Spatial
    };
    // Hybrid time-bin keeps every bin occupied, so its rate matches the
    // demultiplexed spatial case.
    let rate_encoding = if matches!(arch.family, Family::HybridTimeBin) {
        Encoding::Spatial
    } else {
        encoding
    };
    let max_loss = max_tolerated_loss(cfg, scaling, rate_encoding, counts)
        .map_err(|_| Error::Infeasible("target rate unreachable even without loss".into()))?;
    let optical_depth = depth(arch.family, arch.encoding, counts.input, modes)?;

    let extras = arch.effective_mzi_loss().db() - arch.mzi_loss.db();
    let points = mzi_grid
        .iter()
        .map(|&mzi| {
            let per_stage = mzi + extras;
            let residual = max_loss.db() - optical_depth as f64 * per_stage;
            FrontierPoint {
                mzi_loss: LossDb::new(mzi).expect("grid is non-negative"),
                residual_budget: if residual >= 0.0 {
                    Ok(LossDb::new(residual).expect("non-negative"))
                } else {
                    Err(Infeasibility::Architecture)
                },
            }
        })
        .collect();
    Ok(Frontier {
        counts,
        modes,
        optical_depth,
        max_system_loss: max_loss,
        points,
    })
}

/// Fixed component losses of a source-requirement sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceFixedLosses {
    pub mzi_loss: LossDb,
    pub coupling_loss: LossDb,
    /// Per-switch demultiplexer loss; total is `ceil(log2 p)` times this.
    pub demux_per_switch: LossDb,
    pub detector_efficiency: Efficiency,
}

impl Default for SourceFixedLosses {
    fn default() -> Self {
        // State-of-the-art static MZIs and chip coupling; the demultiplexer
        // switch matches the coupling figure spread over a five-deep tree.
        SourceFixedLosses {
            mzi_loss: LossDb::new(0.0035).expect("static"),
            coupling_loss: LossDb::new(0.458).expect("static"),
            demux_per_switch: LossDb::new(0.458 / 5.0).expect("static"),
            detector_efficiency: Efficiency::ONE,
        }
    }
}

/// One point of a source-requirement curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceRequirementPoint {
    pub x2: f64,
    pub detected: u32,
    pub lost: u32,
    pub input_photons: u32,
    pub modes: u64,
    pub optical_depth: u64,
    pub required_source_efficiency: std::result::Result<Efficiency, Infeasibility>,
}

/// Required single-photon source efficiency against indistinguishability for
/// a two-encoding spatial hybrid interferometer with everything else fixed.
///
/// For each indistinguishability the detected and lost photon numbers are
/// re-optimized over `detected_grid` to maximize the tolerated loss, exactly
/// as in the tolerated-loss surfaces.
pub fn source_requirement_curve(
    cfg: &ExperimentConfig,
    scaling: &ModeScaling,
    x2_grid: &[f64],
    detected_grid: &[u32],
    fixed: &SourceFixedLosses,
) -> Vec<SourceRequirementPoint> {
    x2_grid
        .par_iter()
        .map(|&x2| {
            let mut sub_cfg = *cfg;
            sub_cfg.indistinguishability = x2;
            let mut best: Option<ToleratedLossPoint> = None;
            for &detected in detected_grid {
                if let Some(lost) =
                    max_lost_photons(x2, detected, cfg.error_threshold, cfg.permanent_order)
                {
                    let counts = PhotonCounts {
                        input: detected + lost,
                        lost,
                        detected,
                    };
                    if let Ok(max_loss) =
                        max_tolerated_loss(&sub_cfg, scaling, Encoding::Spatial, counts)
                    {
                        let point = ToleratedLossPoint {
                            x2,
                            detected,
                            lost,
                            input_photons: counts.input,
                            modes: scaling.modes(detected),
                            max_loss,
                        };
                        if best.is_none_or(|b| point.max_loss > b.max_loss) {
                            best = Some(point);
                        }
                    }
                }
            }
            let Some(point) = best else {
                return SourceRequirementPoint {
                    x2,
                    detected: 0,
                    lost: 0,
                    input_photons: 0,
                    modes: 0,
                    optical_depth: 0,
                    required_source_efficiency: Err(Infeasibility::ErrorBound),
                };
            };
            let layout =
                optimize_hybrid_spatial(point.input_photons, point.modes, SubFamily::Rectangular)
                    .expect("target modes exceed photons by construction");
            let demux = fixed
                .demux_per_switch
                .times(ceil_log2(point.input_photons) as f64);
            let det_db = fixed
                .detector_efficiency
                .to_loss_db()
                .expect("detector efficiency is positive");
            let budget = point.max_loss.db()
                - layout.depth as f64 * fixed.mzi_loss.db()
                - demux.db()
                - fixed.coupling_loss.db()
                - det_db.db();
            SourceRequirementPoint {
                x2,
                detected: point.detected,
                lost: point.lost,
                input_photons: point.input_photons,
                modes: point.modes,
                optical_depth: layout.depth,
                required_source_efficiency: if budget >= 0.0 {
                    Ok(LossDb::new(budget).expect("non-negative").to_efficiency())
                } else {
                    Err(Infeasibility::Architecture)
                },
            }
        })
        .collect()
}

/// Default sweep grids: the feasibility threshold to perfect
/// indistinguishability in steps of 0.005, and 50 to 100 detected photons.
pub fn default_x2_grid() -> Vec<f64> {
    (0..=39).map(|i| 0.805 + 0.005 * i as f64).collect()
}

pub fn default_detected_grid() -> Vec<u32> {
    (50..=100).collect()
}

/// Default MZI insertion-loss grid with the two reference verticals
/// (state-of-the-art static and reconfigurable MZIs) inserted exactly.
pub fn default_mzi_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=60).map(|i| i as f64 * 0.001).collect();
    for anchor in [0.0035, 0.055] {
        if !grid.contains(&anchor) {
            grid.push(anchor);
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid
}

/// Reference MZI losses: a static mesh estimate and a reconfigurable mesh
/// estimate.
pub const STATIC_MZI_LOSS_DB: f64 = 0.0035;
pub const RECONFIGURABLE_MZI_LOSS_DB: f64 = 0.055;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn cfg() -> ExperimentConfig {
        ExperimentConfig::default()
    }

    fn quad() -> ModeScaling {
        ModeScaling::Quadratic
    }

    fn lin10() -> ModeScaling {
        ModeScaling::Linear { coefficient: 10.0 }
    }

    #[test]
    fn bisection_residual_is_tight() {
        let counts = PhotonCounts::new(59, 9, 50).unwrap();
        let loss = max_tolerated_loss(&cfg(), &quad(), Encoding::Spatial, counts).unwrap();
        let rate = cfg().single_photon_rate_hz / 59.0;
        let p_sample = sample_probability_ab(loss.to_efficiency(), 59, 9).value();
        let achieved = p_sample * rate;
        let rel = (achieved - cfg().target_sample_rate_hz).abs() / cfg().target_sample_rate_hz;
        assert!(rel < 1e-4, "rate residual {rel}");
    }

    #[test]
    fn lossless_boundary_case() {
        // Asking for exactly the lossless sample rate leaves no budget.
        let counts = PhotonCounts::new(50, 0, 50).unwrap();
        let mut c = cfg();
        let rate = c.single_photon_rate_hz / 50.0;
        c.target_sample_rate_hz = rate; // P_sample(1) * rate
        let loss = max_tolerated_loss(&c, &quad(), Encoding::Spatial, counts).unwrap();
        assert!(loss.db() < 1e-5, "got {loss}");
    }

    #[test]
    fn rate_budget_rejection() {
        let counts = PhotonCounts::new(50, 0, 50).unwrap();
        let mut c = cfg();
        c.target_sample_rate_hz = c.single_photon_rate_hz; // unreachable
        assert_eq!(
            max_tolerated_loss(&c, &quad(), Encoding::Spatial, counts),
            Err(Infeasibility::RateBudget)
        );
    }

    #[test]
    fn tolerated_loss_monotone_in_target_rate() {
        let counts = PhotonCounts::new(59, 9, 50).unwrap();
        let mut prev = f64::INFINITY;
        for target in [1e-4, 1e-3, 1e-2, 1e-1] {
            let mut c = cfg();
            c.target_sample_rate_hz = target;
            let loss = max_tolerated_loss(&c, &quad(), Encoding::Spatial, counts).unwrap();
            assert!(loss.db() < prev, "target {target}");
            prev = loss.db();
        }
    }

    #[test]
    fn ridge_values_monotone_in_x2() {
        let c = cfg();
        let x2s: Vec<f64> = vec![0.9, 0.95, 1.0];
        let detected: Vec<u32> = (50..=60).collect();
        let cells = tolerated_loss_surface(&c, &quad(), Encoding::Spatial, &x2s, &detected);
        let maxima = surface_maxima(&cells);
        let mut prev = 0.0;
        for (x2, point) in maxima {
            let loss = point.expect("feasible x2").max_loss.db();
            assert!(loss >= prev, "x2={x2}");
            prev = loss;
        }
    }

    #[test]
    fn surface_cells_cross_check_against_oracle_routes() {
        // Every feasible cell of the four default surfaces re-evaluates to
        // the same sample probability through the convolution/product oracle
        // routes, and meets the target rate to the bisection tolerance.
        let c = cfg();
        let x2s = default_x2_grid();
        let detected = default_detected_grid();
        for (scaling, name) in [(quad(), "quad"), (lin10(), "lin")] {
            for encoding in [Encoding::Spatial, Encoding::TimeBin] {
                let cells = tolerated_loss_surface(&c, &scaling, encoding, &x2s, &detected);
                for cell in &cells {
                    let Ok(point) = cell.outcome else { continue };
                    let survival = point.max_loss.to_efficiency().value();
                    let independent = match scaling {
                        ModeScaling::Quadratic => oracle::ab_sample_probability_oracle(
                            survival,
                            point.input_photons,
                            point.lost,
                        ),
                        ModeScaling::Linear { .. } => oracle::linear_sample_probability_oracle(
                            survival,
                            point.input_photons,
                            point.detected,
                            point.modes,
                        ),
                    };
                    let closed = sample_probability(
                        &scaling,
                        PhotonCounts {
                            input: point.input_photons,
                            lost: point.lost,
                            detected: point.detected,
                        },
                        point.modes,
                        point.max_loss.to_efficiency(),
                    );
                    let rel = ((independent - closed) / closed).abs();
                    assert!(rel < 1e-10, "{name} {encoding}: rel {rel}");
                    let rate = match encoding {
                        Encoding::Spatial => c.single_photon_rate_hz / point.input_photons as f64,
                        Encoding::TimeBin => 2.0 * c.single_photon_rate_hz / point.modes as f64,
                    };
                    let residual =
                        (closed * rate - c.target_sample_rate_hz).abs() / c.target_sample_rate_hz;
                    assert!(
                        residual < 1e-4,
                        "{name} {encoding}: rate residual {residual}"
                    );
                }
            }
        }
    }

    #[test]
    fn infeasible_cells_are_marked() {
        let c = cfg();
        let cells = tolerated_loss_surface(&c, &quad(), Encoding::Spatial, &[0.5], &[50, 51]);
        assert!(cells
            .iter()
            .all(|cell| cell.outcome == Err(Infeasibility::ErrorBound)));
    }

    #[test]
    fn frontier_is_linear_with_slope_minus_depth() {
        let arch = ArchitectureSpec::new(Family::Rectangular, Encoding::Spatial, LossDb::ZERO);
        let grid = [0.0, 0.001, 0.002, 0.003];
        let f = mzi_frontier(&cfg(), &arch, &quad(), SamplingMode::LostPhotons, 50, &grid).unwrap();
        let d = f.optical_depth as f64;
        let first = f.points[0].residual_budget.unwrap().db();
        assert!((first - f.max_system_loss.db()).abs() < 1e-12);
        for w in f.points.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if let (Ok(ra), Ok(rb)) = (a.residual_budget, b.residual_budget) {
                let slope = (rb.db() - ra.db()) / (b.mzi_loss.db() - a.mzi_loss.db());
                assert!((slope + d).abs() < 1e-9, "slope {slope} vs -{d}");
            }
        }
    }

    #[test]
    fn clements_quadratic_is_infeasible_at_static_loss() {
        let arch = ArchitectureSpec::new(Family::Clements, Encoding::Spatial, LossDb::ZERO);
        let f = mzi_frontier(
            &cfg(),
            &arch,
            &quad(),
            SamplingMode::LostPhotons,
            50,
            &[STATIC_MZI_LOSS_DB],
        )
        .unwrap();
        // 2500 MZIs deep at 0.0035 dB each is 8.75 dB, beyond any budget.
        assert_eq!(
            f.points[0].residual_budget,
            Err(Infeasibility::Architecture)
        );
    }

    #[test]
    fn timebin_delay_penalties_shrink_the_budget() {
        let mut arch = ArchitectureSpec::new(Family::Rectangular, Encoding::TimeBin, LossDb::ZERO);
        let base = mzi_frontier(
            &cfg(),
            &arch,
            &lin10(),
            SamplingMode::LostPhotons,
            50,
            &[0.001],
        )
        .unwrap();
        arch.prop_loss_per_bin = LossDb::new(0.0005).unwrap();
        let lossy = mzi_frontier(
            &cfg(),
            &arch,
            &lin10(),
            SamplingMode::LostPhotons,
            50,
            &[0.001],
        )
        .unwrap();
        let a = base.points[0].residual_budget.unwrap().db();
        let b = lossy.points[0].residual_budget.unwrap().db();
        let expected = base.optical_depth as f64 * 0.0005;
        assert!(((a - b) - expected).abs() < 1e-9);
    }

    #[test]
    fn source_curve_quadratic_dominates_linear() {
        let c = cfg();
        let x2s: Vec<f64> = vec![0.9, 0.96, 1.0];
        let detected = default_detected_grid();
        let fixed = SourceFixedLosses::default();
        let q = source_requirement_curve(&c, &quad(), &x2s, &detected, &fixed);
        let l = source_requirement_curve(&c, &lin10(), &x2s, &detected, &fixed);
        for (a, b) in q.iter().zip(l.iter()) {
            let (qa, lb) = (
                a.required_source_efficiency.unwrap().value(),
                b.required_source_efficiency.unwrap().value(),
            );
            assert!(qa <= lb, "x2 {}: quad {qa} vs lin {lb}", a.x2);
        }
    }

    #[test]
    fn source_curve_marks_infeasible_x2() {
        let c = cfg();
        let fixed = SourceFixedLosses::default();
        let pts = source_requirement_curve(&c, &quad(), &[0.5], &default_detected_grid(), &fixed);
        assert_eq!(
            pts[0].required_source_efficiency,
            Err(Infeasibility::ErrorBound)
        );
    }

    #[test]
    fn default_grids_contain_reference_points() {
        let grid = default_mzi_grid();
        assert!(grid.contains(&STATIC_MZI_LOSS_DB));
        assert!(grid.contains(&RECONFIGURABLE_MZI_LOSS_DB));
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(default_x2_grid().len(), 40);
        assert_eq!(default_detected_grid().len(), 51);
    }
}
