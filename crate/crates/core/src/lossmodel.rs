//! Loss/efficiency algebra and the sampling-probability formulas.
//!
//! Losses are carried in decibels (`rho = -10 log10(P)`), which makes the
//! per-component budget additive along an optical path, while probabilities
//! stay in linear units for the combinatorial formulas. Both views are
//! newtypes so a decibel never silently multiplies an efficiency.

use crate::binom::{binomial, binomial_u128, ln_binomial, EXACT_LIMIT};
use crate::{Error, Result};

/// Insertion loss in decibels; non-negative by construction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LossDb(f64);

impl LossDb {
    pub const ZERO: LossDb = LossDb(0.0);

    pub fn new(db: f64) -> Result<Self> {
        if !db.is_finite() || db < 0.0 {
            return Err(Error::OutOfRange(format!("loss {db} dB")));
        }
        Ok(LossDb(db))
    }

    pub fn db(self) -> f64 {
        self.0
    }

    /// `P = 10^(-rho/10)`.
    pub fn to_efficiency(self) -> Efficiency {
        Efficiency(10f64.powf(-self.0 / 10.0))
    }

    /// Loss accumulated over `n` identical passes.
    pub fn times(self, n: f64) -> LossDb {
        LossDb(self.0 * n)
    }
}

impl std::ops::Add for LossDb {
    type Output = LossDb;
    fn add(self, rhs: LossDb) -> LossDb {
        LossDb(self.0 + rhs.0)
    }
}

impl std::iter::Sum for LossDb {
    fn sum<I: Iterator<Item = LossDb>>(iter: I) -> LossDb {
        LossDb(iter.map(|l| l.0).sum())
    }
}

impl std::fmt::Display for LossDb {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} dB", self.0)
    }
}

/// Transmission probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Efficiency(f64);

impl Efficiency {
    pub const ONE: Efficiency = Efficiency(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(Error::OutOfRange(format!("efficiency {value}")));
        }
        Ok(Efficiency(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `rho = -10 log10(P)`; an efficiency of zero has no finite loss.
    pub fn to_loss_db(self) -> Result<LossDb> {
        if self.0 == 0.0 {
            return Err(Error::InfiniteLoss);
        }
        // Clamp the tiny negative that -log10 can produce at P = 1.
        Ok(LossDb((-10.0 * self.0.log10()).max(0.0)))
    }

    /// Product of independent transmission stages.
    pub fn compose<I: IntoIterator<Item = Efficiency>>(stages: I) -> Efficiency {
        Efficiency(stages.into_iter().map(|e| e.0).product())
    }
}

/// Conversion helpers mirroring the decibel definition.
pub fn db_to_efficiency(loss: LossDb) -> Efficiency {
    loss.to_efficiency()
}

pub fn efficiency_to_db(eff: Efficiency) -> Result<LossDb> {
    eff.to_loss_db()
}

/// Photon bookkeeping for a lost-photon sampling run: `input` photons enter,
/// `lost` never reach a detector, `detected` output modes click.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhotonCounts {
    pub input: u32,
    pub lost: u32,
    pub detected: u32,
}

impl PhotonCounts {
    pub fn new(input: u32, lost: u32, detected: u32) -> Result<Self> {
        let c = PhotonCounts {
            input,
            lost,
            detected,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.input == 0 || self.lost >= self.input {
            return Err(Error::OutOfRange(format!(
                "need at least one surviving photon (p = {}, l = {})",
                self.input, self.lost
            )));
        }
        if self.detected == 0 || self.detected > self.input - self.lost {
            return Err(Error::OutOfRange(format!(
                "detected modes d = {} outside 1..=p-l = {}",
                self.detected,
                self.input - self.lost
            )));
        }
        Ok(())
    }

    /// Photons that survive to the output, `p - l`.
    pub fn surviving(&self) -> u32 {
        self.input - self.lost
    }
}

/// Experiment-level knobs shared by every budget computation.
///
/// Defaults reproduce the benchmark scenario used throughout the crate:
/// a 1 GHz single-photon source, a target of 100 validated samples per day,
/// 1% simulation error threshold with permanents of order 49, and lossless
/// detectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    /// Pairwise photon indistinguishability `x^2`.
    pub indistinguishability: f64,
    /// Single-photon emission rate of the source, Hz.
    pub single_photon_rate_hz: f64,
    /// Required sample acquisition rate, Hz.
    pub target_sample_rate_hz: f64,
    /// Error threshold `E` for the classical-approximation bound.
    pub error_threshold: f64,
    /// Permanent order `k` of the classical approximation.
    pub permanent_order: u32,
    pub detector_efficiency: Efficiency,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            indistinguishability: 0.96,
            single_photon_rate_hz: 1e9,
            target_sample_rate_hz: 100.0 / (24.0 * 3600.0),
            error_threshold: 0.01,
            permanent_order: 49,
            detector_efficiency: Efficiency::ONE,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.single_photon_rate_hz <= 0.0 || self.target_sample_rate_hz <= 0.0 {
            return Err(Error::OutOfRange("rates must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.indistinguishability) {
            return Err(Error::OutOfRange(format!(
                "x2 = {}",
                self.indistinguishability
            )));
        }
        if self.error_threshold <= 0.0 || self.error_threshold >= 1.0 {
            return Err(Error::OutOfRange(format!("E = {}", self.error_threshold)));
        }
        if self.permanent_order == 0 {
            return Err(Error::OutOfRange("permanent order k >= 1".into()));
        }
        Ok(())
    }
}

/// Probability of losing exactly `l` out of `p` independent photons that
/// each survive with probability `p_sys`:
/// `P_sys^(p-l) (1-P_sys)^l C(p, l)`.
///
/// `l = p` (every photon lost) is a valid pattern here even though it never
/// produces a sample; the distribution over `l = 0..=p` sums to one.
pub fn sample_probability_ab(p_sys: Efficiency, p: u32, l: u32) -> Efficiency {
    assert!(l <= p, "cannot lose {l} of {p} photons");
    let s = p_sys.value();
    let v = binomial(p as i64, l as i64) * s.powi((p - l) as i32) * (1.0 - s).powi(l as i32);
    Efficiency(v.clamp(0.0, 1.0))
}

/// Left-hand side of the classical-simulability bound:
/// `(x2 (p-l)/p)^(k+1) / (1 - x2 (p-l)/p)`.
///
/// A run is safe from order-`k` classical approximation at error `E` only
/// while this value stays at or above `E^2`. Errors with
/// [`Error::DivergentBound`] when `x2 (p-l)/p >= 1` (perfectly
/// indistinguishable photons with no loss), where no error level admits the
/// approximation.
pub fn classical_error_bound_lhs(x2: f64, p: u32, l: u32, k: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&x2) {
        return Err(Error::OutOfRange(format!("x2 = {x2}")));
    }
    if l >= p {
        return Err(Error::OutOfRange(format!("l = {l} >= p = {p}")));
    }
    let a = x2 * (p - l) as f64 / p as f64;
    if a >= 1.0 {
        return Err(Error::DivergentBound);
    }
    Ok(a.powi(k as i32 + 1) / (1.0 - a))
}

/// Largest number of lost photons that keeps the simulability bound at or
/// above `E^2` for a fixed number of detected photons.
///
/// Returns `None` when even a lossless run (`l = 0`) violates the bound,
/// i.e. the indistinguishability is too low for any hard experiment at this
/// photon number.
pub fn max_lost_photons(x2: f64, detected: u32, e: f64, k: u32) -> Option<u32> {
    let passes = |l: u32| match classical_error_bound_lhs(x2, detected + l, l, k) {
        Ok(v) => v >= e * e,
        Err(Error::DivergentBound) => true,
        Err(_) => false,
    };
    if !passes(0) {
        return None;
    }
    let mut l = 0;
    // l stays small in practice; the bound decays geometrically in l.
    while passes(l + 1) {
        l += 1;
    }
    Some(l)
}

/// Effective post-selection efficiency: the fraction of the `p - l` photon
/// Hilbert space over `m` modes occupying exactly `d` output modes,
/// `C(m, d) C(p-l-1, p-l-d) / C(m+p-l-1, p-l)`.
///
/// Out-of-range photon/click combinations evaluate to zero through the
/// zero-binomial convention.
pub fn post_selection_efficiency(counts: PhotonCounts, m: u64) -> Efficiency {
    Efficiency(post_selection_raw(
        counts.input as i64,
        counts.lost as i64,
        counts.detected as i64,
        m as i64,
    ))
}

fn post_selection_raw(p: i64, l: i64, d: i64, m: i64) -> f64 {
    let n = p - l;
    if d < 1 || n < d {
        return 0.0;
    }
    if m + n - 1 <= EXACT_LIMIT {
        let num = binomial_u128(m as u64, d as u64) * binomial_u128((n - 1) as u64, (n - d) as u64);
        let den = binomial_u128((m + n - 1) as u64, n as u64);
        return num as f64 / den as f64;
    }
    let ln = ln_binomial(m, d) + ln_binomial(n - 1, n - d) - ln_binomial(m + n - 1, n);
    if ln.is_finite() {
        ln.exp().clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// Sample probability for a linear number of modes, where collisions are
/// folded into the post-selection efficiency:
/// `sum_l P_sys^(p-l) (1-P_sys)^l C(p, l) P_ps(p, d, l, m)`.
///
/// Terms with fewer surviving photons than clicked modes vanish.
pub fn sample_probability_linear(p_sys: Efficiency, p: u32, d: u32, m: u64) -> Efficiency {
    let s = p_sys.value();
    let mut total = 0.0;
    for l in 0..=d.min(p) {
        let ps = post_selection_raw(p as i64, l as i64, d as i64, m as i64);
        if ps == 0.0 {
            continue;
        }
        total +=
            binomial(p as i64, l as i64) * s.powi((p - l) as i32) * (1.0 - s).powi(l as i32) * ps;
    }
    Efficiency(total.clamp(0.0, 1.0))
}

/// Coupon-collector estimate of the samples needed to validate an
/// experiment with `m` modes and `p` photons: `m ln(m) / p`.
///
/// Natural logarithm; `modes` is real-valued so the formula itself can be
/// unit-tested away from integer grids.
pub fn required_samples(modes: f64, photons: u32) -> f64 {
    modes * modes.ln() / photons as f64
}

/// Total per-photon system loss: `rho_sys = rho_src + rho_int + rho_det`.
pub fn compose_system_loss(src: LossDb, interferometer: LossDb, det: LossDb) -> LossDb {
    src + interferometer + det
}

/// Source loss decomposition: `rho_src = rho_sps + rho_dmx + rho_coupling`.
pub fn compose_source_loss(sps: LossDb, dmx: LossDb, coupling: LossDb) -> LossDb {
    sps + dmx + coupling
}

/// Demultiplexer loss for `p` photons through a binary switch tree:
/// `ceil(log2 p) * rho_switch`.
pub fn demux_loss(p: u32, per_switch: LossDb) -> LossDb {
    per_switch.times(ceil_log2(p) as f64)
}

/// Smallest `n` with `2^n >= p`; 0 for `p <= 1`.
pub fn ceil_log2(p: u32) -> u32 {
    if p <= 1 {
        0
    } else {
        (p - 1).ilog2() + 1
    }
}
