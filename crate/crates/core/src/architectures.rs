//! Interferometer architecture models: optical depth, input rates, loss per
//! Mach-Zehnder stage, mesh layouts, and time-bin column programs.
//!
//! Depth is counted in MZIs traversed from any input to any output; per-photon
//! interferometer loss is depth times the per-MZI insertion loss. Edge paths
//! through fewer MZIs are ignored and loss is treated as uniform across
//! input-output configurations.

use crate::lossmodel::{ceil_log2, LossDb};
use crate::{Error, Result};

/// How modes are physically carried.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    /// Demultiplexed spatial rails.
    Spatial,
    /// Two rails times many time bins, processed by reconfigurable MZIs.
    TimeBin,
}

impl std::fmt::Display for Encoding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Encoding::Spatial => "spatial",
            Encoding::TimeBin => "time-bin",
        })
    }
}

/// Interferometer family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Universal mesh, depth `m`.
    Clements,
    /// Fully connected mesh with `p` inputs and `m >= p` outputs,
    /// depth `ceil(m/2) + ceil(p/2) - 1`.
    Rectangular,
    /// Two concatenated spatial mode encodings; mode counts multiply while
    /// depths add.
    HybridSpatial,
    /// Partial demultiplexer, a two-rail time-bin stage, then two spatial
    /// mode encodings.
    HybridTimeBin,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Clements => "clements",
            Family::Rectangular => "rectangular",
            Family::HybridSpatial => "hybrid-spatial",
            Family::HybridTimeBin => "hybrid-timebin",
        })
    }
}

/// How the target mode count scales with the detected photon number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeScaling {
    /// `m = d^2`, enough modes for collision-free outputs.
    Quadratic,
    /// `m = ceil(c d)`; collisions are folded into post-selection.
    Linear { coefficient: f64 },
}

impl ModeScaling {
    pub fn modes(&self, detected: u32) -> u64 {
        let d = detected as u64;
        match self {
            ModeScaling::Quadratic => d * d,
            ModeScaling::Linear { coefficient } => {
                ((*coefficient * detected as f64).ceil() as u64).max(d)
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            ModeScaling::Quadratic => "quadratic".into(),
            ModeScaling::Linear { coefficient } => format!("linear{coefficient}"),
        }
    }
}

/// Architecture plus the per-stage losses needed to turn depth into dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArchitectureSpec {
    pub family: Family,
    /// Ignored for the hybrid families, which fix their own encoding.
    pub encoding: Encoding,
    pub mzi_loss: LossDb,
    /// Propagation loss of a one-bin delay line (time-bin encodings only).
    pub prop_loss_per_bin: LossDb,
    /// Coupling loss between cascaded time-bin stages.
    pub interstage_coupling_loss: LossDb,
}

impl ArchitectureSpec {
    pub fn new(family: Family, encoding: Encoding, mzi_loss: LossDb) -> Self {
        ArchitectureSpec {
            family,
            encoding,
            mzi_loss,
            prop_loss_per_bin: LossDb::ZERO,
            interstage_coupling_loss: LossDb::ZERO,
        }
    }

    /// Whether photons traverse delay lines in this architecture.
    pub fn is_time_bin(&self) -> bool {
        matches!(self.family, Family::HybridTimeBin)
            || (matches!(self.family, Family::Clements | Family::Rectangular)
                && self.encoding == Encoding::TimeBin)
    }

    /// Loss per MZI stage including delay-line penalties where applicable.
    pub fn effective_mzi_loss(&self) -> LossDb {
        if self.is_time_bin() {
            timebin_effective_mzi_loss(self)
        } else {
            self.mzi_loss
        }
    }
}

/// Loss of one reconfigurable time-bin MZI stage including its delay:
/// `rho_MZI + tau rho_prop + rho_coupling`.
pub fn timebin_effective_mzi_loss(spec: &ArchitectureSpec) -> LossDb {
    spec.mzi_loss + spec.prop_loss_per_bin + spec.interstage_coupling_loss
}

/// Per-architecture depth/rate/loss summary.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthReport {
    pub optical_depth: u64,
    pub interferometer_loss: LossDb,
    pub input_rate_hz: f64,
    pub total_modes_realized: u64,
    pub hybrid_timebin_layout: Option<HybridTimeBinLayout>,
    pub hybrid_spatial_layout: Option<HybridSpatialLayout>,
}

/// Optical depth for `p` input photons and `m` target modes.
///
/// Hybrid families run their layout optimizers and report the optimal depth.
pub fn depth(family: Family, encoding: Encoding, p: u32, m: u64) -> Result<u64> {
    if m < p as u64 {
        return Err(Error::Infeasible(format!("m = {m} < p = {p}")));
    }
    match (family, encoding) {
        (Family::Clements, _) => Ok(m),
        (Family::Rectangular, Encoding::Spatial) => Ok(m.div_ceil(2) + (p as u64).div_ceil(2) - 1),
        (Family::Rectangular, Encoding::TimeBin) => {
            // One source feeds only one of the two rails, so the time-bin
            // mesh starts from 2p input modes.
            if m < 2 * p as u64 {
                return Err(Error::Infeasible(format!(
                    "time-bin rectangular needs m >= 2p (m = {m}, p = {p})"
                )));
            }
            Ok(m.div_ceil(2) + p as u64 - 1)
        }
        (Family::HybridSpatial, _) => {
            Ok(optimize_hybrid_spatial(p, m, SubFamily::Rectangular)?.depth)
        }
        (Family::HybridTimeBin, _) => Ok(optimize_hybrid_timebin(p, m)?.depth),
    }
}

/// Full report for an architecture at a given operating point.
pub fn depth_report(
    spec: &ArchitectureSpec,
    p: u32,
    m: u64,
    single_photon_rate_hz: f64,
) -> Result<DepthReport> {
    let mut tb_layout = None;
    let mut sp_layout = None;
    let (optical_depth, realized) = match spec.family {
        Family::HybridTimeBin => {
            let l = optimize_hybrid_timebin(p, m)?;
            let d = l.depth;
            let realized = l.realized_modes();
            tb_layout = Some(l);
            (d, realized)
        }
        Family::HybridSpatial => {
            let l = optimize_hybrid_spatial(p, m, SubFamily::Rectangular)?;
            let d = l.depth;
            let realized = l.m1 * l.m2;
            sp_layout = Some(l);
            (d, realized)
        }
        _ => (depth(spec.family, spec.encoding, p, m)?, m),
    };
    Ok(DepthReport {
        optical_depth,
        interferometer_loss: spec.effective_mzi_loss().times(optical_depth as f64),
        input_rate_hz: input_rate(spec.family, spec.encoding, p, m, single_photon_rate_hz),
        total_modes_realized: realized,
        hybrid_timebin_layout: tb_layout,
        hybrid_spatial_layout: sp_layout,
    })
}

/// Input state generation rate.
///
/// Demultiplexed spatial encodings produce a `p`-photon state every `p`
/// emissions. A two-rail time-bin interferometer must leave `m/2` bins
/// between input states, giving `2 r / m`. The hybrid time-bin architecture
/// keeps every bin occupied and stays at `r / p`.
pub fn input_rate(family: Family, encoding: Encoding, p: u32, m: u64, r_sp_hz: f64) -> f64 {
    match (family, encoding) {
        (Family::HybridTimeBin, _) => r_sp_hz / p as f64,
        (Family::HybridSpatial, _) => r_sp_hz / p as f64,
        (_, Encoding::Spatial) => r_sp_hz / p as f64,
        (_, Encoding::TimeBin) => 2.0 * r_sp_hz / m as f64,
    }
}

/// MZI insertion loss below which a time-bin implementation is less
/// favourable than a demultiplexed spatial one:
/// `rho_MZI <= ((D - 1 - (p - 1)) rho_prop + delta) / ceil(log2 p)`.
///
/// `delta_db` is the spatial-minus-time-bin difference in maximal tolerated
/// system loss; pass either a per-configuration value or a surface average.
pub fn timebin_vs_spatial_threshold(
    p: u32,
    depth: u64,
    delta_db: f64,
    prop_loss: LossDb,
) -> LossDb {
    let demux_depth = ceil_log2(p).max(1) as f64;
    let extra_delay = (depth as f64 - 1.0) - (p as f64 - 1.0);
    let thr = (extra_delay * prop_loss.db() + delta_db) / demux_depth;
    LossDb::new(thr.max(0.0)).expect("threshold is finite and clamped")
}

/// Delay and rate penalties of a single-MZI loop architecture relative to a
/// cascade of MZIs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopPenalties {
    pub delay_cascaded_s: f64,
    pub delay_loop_s: f64,
    pub loop_input_rate_hz: f64,
}

/// Worst-case delays and the loop input rate for an `m`-mode time-bin
/// interferometer: cascade `(m/2 - 1) tau`, loop `(m - 1)(m/2 - 1) tau`,
/// loop rate `2 r / (m (m - 1))`.
pub fn loop_penalties(m: u32, tau_s: f64, r_sp_hz: f64) -> Result<LoopPenalties> {
    if m < 2 || !m.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!(
            "loop penalties need even m >= 2, got {m}"
        )));
    }
    let half = m as f64 / 2.0 - 1.0;
    Ok(LoopPenalties {
        delay_cascaded_s: half * tau_s,
        delay_loop_s: (m as f64 - 1.0) * half * tau_s,
        loop_input_rate_hz: 2.0 * r_sp_hz / (m as f64 * (m as f64 - 1.0)),
    })
}

// ---------------------------------------------------------------------------
// Hybrid layout optimizers
// ---------------------------------------------------------------------------

/// Sub-interferometer family used inside each hybrid mode encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubFamily {
    Clements,
    Rectangular,
}

/// Layout of the time-bin hybrid: an `n`-level partial demultiplexer, a
/// two-rail time-bin stage over `ceil(p / 2^n)` bins, then two spatial
/// encodings of `m1` and `m2` modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HybridTimeBinLayout {
    pub demux_depth: u32,
    pub m1: u64,
    pub m2: u64,
    pub time_bins: u64,
    pub depth: u64,
}

impl HybridTimeBinLayout {
    pub fn realized_modes(&self) -> u64 {
        self.m1 * self.m2 * self.time_bins
    }
}

/// Total optical depth of the time-bin hybrid:
/// `n + 2 ceil(p/2^n) + ceil(m1/2) + ceil(m2/2) + 2^n / 2`.
pub fn hybrid_timebin_depth(n: u32, p: u32, m1: u64, m2: u64) -> u64 {
    assert!(n >= 1, "demultiplexer depth must be at least 1");
    let bins = (p as u64).div_ceil(1 << n);
    n as u64 + 2 * bins + m1.div_ceil(2) + m2.div_ceil(2) + (1u64 << (n - 1))
}

/// Exhaustive search for the depth-minimal time-bin hybrid layout.
///
/// Feasibility requires the realized mode count `m1 m2 ceil(p/2^n)` to reach
/// the target, and the spatial grid to enlarge the mode space beyond what the
/// demultiplexed time-bin stage already spans (`m1 m2 > 2^n ceil(p/2^n)`).
/// Ties are broken toward the smallest demultiplexer, then the most balanced
/// split, then the smallest total mode count.
pub fn optimize_hybrid_timebin(p: u32, target_m: u64) -> Result<HybridTimeBinLayout> {
    if p == 0 || target_m < p as u64 {
        return Err(Error::Infeasible(format!(
            "need target_m >= p >= 1 (p = {p}, target_m = {target_m})"
        )));
    }
    let mut best: Option<((u64, u32, u64, u64), HybridTimeBinLayout)> = None;
    for n in 1..=ceil_log2(p).max(1) {
        let bins = (p as u64).div_ceil(1 << n);
        let fanout = (1u64 << n) * bins;
        let need = target_m.div_ceil(bins);
        let m1_cap = ((need.max(fanout + 1) as f64).sqrt().ceil() as u64 + 2).min(target_m);
        for m1 in 2..=m1_cap {
            // Smallest m2 >= m1 meeting both the mode target and the fanout
            // growth requirement; anything larger is dominated.
            let mut m2 = need.div_ceil(m1).max(m1);
            while m1 * m2 <= fanout {
                m2 += 1;
            }
            if m2 > target_m {
                continue;
            }
            let d = hybrid_timebin_depth(n, p, m1, m2);
            let key = (d, n, m2 - m1, m1 * m2);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((
                    key,
                    HybridTimeBinLayout {
                        demux_depth: n,
                        m1,
                        m2,
                        time_bins: bins,
                        depth: d,
                    },
                ));
            }
        }
    }
    best.map(|(_, l)| l).ok_or_else(|| {
        Error::Infeasible(format!(
            "no hybrid time-bin layout for p = {p}, m = {target_m}"
        ))
    })
}

/// Layout of the spatial hybrid: two concatenated mode encodings of `m1` and
/// `m2` modes with the input photons spread over a near-square grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HybridSpatialLayout {
    pub m1: u64,
    pub m2: u64,
    pub input_split: (u32, u32),
    pub depth: u64,
}

/// Ranking key of a layout candidate: the quantity being minimised, then the
/// tie-breaks (balance, then total size).
type SplitKey<T> = (T, T, T);

/// Most balanced pair `a <= b` with `a b >= p`, minimising
/// `ceil(a/2) + ceil(b/2)`.
fn balanced_input_split(p: u32) -> (u32, u32) {
    let mut best: Option<(SplitKey<u32>, (u32, u32))> = None;
    for a in 1..=p {
        let b = p.div_ceil(a);
        if b < a {
            break;
        }
        let key = (a.div_ceil(2) + b.div_ceil(2), b - a, a * b);
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, (a, b)));
        }
    }
    best.expect("p >= 1 always splits").1
}

/// Depth-minimal split of `target_m` modes across two spatial encodings.
///
/// Total modes may exceed the target when that lowers depth. Rectangular
/// sub-interferometers see only the photons entering their own encoding, so
/// the `p` inputs enter as a balanced `p1 x p2` grid and each encoding
/// contributes `ceil(m_i/2) + ceil(p_i/2) - 1`; Clements encodings contribute
/// `m_i` each. Ties break toward the balanced split.
pub fn optimize_hybrid_spatial(
    p: u32,
    target_m: u64,
    subs: SubFamily,
) -> Result<HybridSpatialLayout> {
    if p == 0 || target_m < p as u64 {
        return Err(Error::Infeasible(format!(
            "need target_m >= p >= 1 (p = {p}, target_m = {target_m})"
        )));
    }
    let split = balanced_input_split(p);
    let mode_term = |m: u64| match subs {
        SubFamily::Clements => m,
        SubFamily::Rectangular => m.div_ceil(2),
    };
    let input_term = match subs {
        SubFamily::Clements => 0,
        SubFamily::Rectangular => (split.0.div_ceil(2) + split.1.div_ceil(2)) as u64 - 2,
    };
    let mut best: Option<(SplitKey<u64>, (u64, u64))> = None;
    let m1_cap = (target_m as f64).sqrt().ceil() as u64 + 1;
    for m1 in 2..=m1_cap.max(2) {
        let m2 = target_m.div_ceil(m1).max(m1).max(2);
        let key = (mode_term(m1) + mode_term(m2), m2 - m1, m1 * m2);
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, (m1, m2)));
        }
    }
    let ((mode_sum, _, _), (m1, m2)) = best.expect("grid is never empty");
    debug_assert!(
        split.0 as u64 <= m1 && split.1 as u64 <= m2,
        "input grid exceeds encodings"
    );
    Ok(HybridSpatialLayout {
        m1,
        m2,
        input_split: split,
        depth: mode_sum + input_term,
    })
}

// ---------------------------------------------------------------------------
// Spatial mesh layouts
// ---------------------------------------------------------------------------

/// Column-by-column MZI placement of a spatial mesh. Each entry of a column
/// is the upper of the two adjacent rows (0-based) an MZI couples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshLayout {
    pub modes: usize,
    pub input_rows: Vec<usize>,
    pub columns: Vec<Vec<usize>>,
}

impl MeshLayout {
    pub fn mzi_count(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }
}

/// MZI placement for the Clements and Rectangular spatial meshes.
///
/// The Rectangular mesh injects `p` inputs on the central rows and keeps only
/// the MZIs inside their widening light cone, which reproduces the
/// `ceil(m/2) + ceil(p/2) - 1` column count while staying fully connected.
pub fn mesh_layout(family: Family, p: u32, m: usize) -> Result<MeshLayout> {
    if m == 0 {
        return Err(Error::OutOfRange("mesh needs at least one mode".into()));
    }
    match family {
        Family::Clements => {
            let columns = (0..m)
                .map(|c| {
                    let mut col = Vec::new();
                    let mut i = c % 2;
                    while i + 1 < m {
                        col.push(i);
                        i += 2;
                    }
                    col
                })
                .collect();
            Ok(MeshLayout {
                modes: m,
                input_rows: (0..m).collect(),
                columns,
            })
        }
        Family::Rectangular => {
            let p = p as usize;
            if p == 0 || p > m {
                return Err(Error::Infeasible(format!(
                    "rectangular needs 1 <= p <= m, got p = {p}, m = {m}"
                )));
            }
            let n_cols = m.div_ceil(2) + p.div_ceil(2) - 1;
            let lo = (m - p) / 2;
            let hi = lo + p - 1;
            let mut columns = Vec::with_capacity(n_cols);
            for c in 0..n_cols {
                let wlo = lo.saturating_sub(c);
                let whi = (hi + c).min(m - 1);
                // Pair starts alternate parity column to column, anchored so
                // the first column pairs the injected rows.
                let parity = (lo + c) % 2;
                let mut row = wlo + (wlo % 2 != parity) as usize;
                let mut col = Vec::new();
                while row < whi {
                    col.push(row);
                    row += 2;
                }
                columns.push(col);
            }
            Ok(MeshLayout {
                modes: m,
                input_rows: (lo..=hi).collect(),
                columns,
            })
        }
        _ => Err(Error::OutOfRange(
            "mesh layouts exist only for the Clements and Rectangular families".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Time-bin column programs
// ---------------------------------------------------------------------------

/// The three reconfigurable column types of a two-rail time-bin mesh.
///
/// `C1` interferes modes pairwise from the first mode and stretches the
/// output by one bin. `C2` does the same on a stream with lone end bins and
/// grows the mode count by two, entangling the vacuum bins into the
/// computation. `C3` interferes pairwise from the second mode, swapping the
/// lone end bins back onto the opposite rail so the stream shrinks by a bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    C1,
    C2,
    C3,
}

impl ColumnKind {
    /// Change in occupied time bins across the column.
    pub fn bin_delta(self) -> i64 {
        match self {
            ColumnKind::C1 | ColumnKind::C2 => 1,
            ColumnKind::C3 => -1,
        }
    }

    /// Change in active optical modes across the column.
    pub fn mode_delta(self) -> i64 {
        match self {
            ColumnKind::C2 => 2,
            ColumnKind::C1 | ColumnKind::C3 => 0,
        }
    }
}

/// One physical MZI of the cascade, reconfigured per time bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeBinColumn {
    pub kind: ColumnKind,
    /// Active modes entering the column.
    pub width: u32,
}

impl TimeBinColumn {
    /// Occupied bins entering the column.
    pub fn bins_in(&self) -> u32 {
        match self.kind {
            ColumnKind::C1 => self.width / 2,
            ColumnKind::C2 | ColumnKind::C3 => self.width / 2 + 1,
        }
    }

    /// Programmable (non-swap) MZI firings in this column.
    pub fn mix_slots(&self) -> u32 {
        match self.kind {
            ColumnKind::C1 => self.width / 2,
            ColumnKind::C2 => self.width / 2 + 1,
            ColumnKind::C3 => self.width / 2 - 1,
        }
    }
}

/// Schedule of MZI columns realizing a spatial mesh on two rails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeBinProgram {
    pub family: Family,
    /// Output modes of the realized mesh.
    pub modes: u32,
    /// Active modes at the input (`m` for Clements, `2p` for Rectangular).
    pub input_modes: u32,
    /// Occupied bins at the input.
    pub input_bins: u32,
    pub columns: Vec<TimeBinColumn>,
}

/// Occupied-bin window of a column inside the expanded schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnWindow {
    pub kind: ColumnKind,
    pub width: u32,
    /// First occupied bin (0-based) at the column input.
    pub start_bin: usize,
    /// Occupied bins at the column input.
    pub bins: usize,
}

impl TimeBinProgram {
    /// One physical MZI per column.
    pub fn physical_mzi_count(&self) -> usize {
        self.columns.len()
    }

    /// Total programmable MZI firings, which equals the MZI count of the
    /// corresponding spatial mesh.
    pub fn mix_slot_count(&self) -> usize {
        self.columns.iter().map(|c| c.mix_slots() as usize).sum()
    }

    /// Bin windows of every column, tracking the stream as it stretches and
    /// shrinks through the cascade.
    pub fn windows(&self) -> Vec<ColumnWindow> {
        let mut start = 0usize;
        let mut bins = self.input_bins as usize;
        let mut out = Vec::with_capacity(self.columns.len());
        for col in &self.columns {
            debug_assert_eq!(bins, col.bins_in() as usize, "window mismatch");
            out.push(ColumnWindow {
                kind: col.kind,
                width: col.width,
                start_bin: start,
                bins,
            });
            match col.kind {
                ColumnKind::C1 | ColumnKind::C2 => bins += 1,
                ColumnKind::C3 => {
                    start += 1;
                    bins -= 1;
                }
            }
        }
        out
    }

    /// Occupied bin window after the last column.
    pub fn output_window(&self) -> (usize, usize) {
        let mut start = 0usize;
        let mut bins = self.input_bins as usize;
        for col in &self.columns {
            match col.kind {
                ColumnKind::C1 | ColumnKind::C2 => bins += 1,
                ColumnKind::C3 => {
                    start += 1;
                    bins -= 1;
                }
            }
        }
        (start, bins)
    }
}

/// Column schedule realizing a spatial mesh family on a two-rail time-bin
/// interferometer.
///
/// Clements: `m/2` pairs of `C1(m)` and `C3(m)`. Rectangular: `C1(2p)`, then
/// `(m-2p)/2` widening `C2` columns, then `p-1` pairs of `C3(m)` and `C1(m)`.
/// The column count matches the spatial optical depth in both cases. `m`
/// must be even; odd mode counts are rejected rather than padded.
pub fn build_timebin_program(family: Family, p: u32, m: u32) -> Result<TimeBinProgram> {
    if m == 0 || !m.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!(
            "time-bin programs need an even mode count, got m = {m}"
        )));
    }
    match family {
        Family::Clements => {
            let mut columns = Vec::with_capacity(m as usize);
            for _ in 0..m / 2 {
                columns.push(TimeBinColumn {
                    kind: ColumnKind::C1,
                    width: m,
                });
                columns.push(TimeBinColumn {
                    kind: ColumnKind::C3,
                    width: m,
                });
            }
            Ok(TimeBinProgram {
                family,
                modes: m,
                input_modes: m,
                input_bins: m / 2,
                columns,
            })
        }
        Family::Rectangular => {
            if p == 0 || m < 2 * p {
                return Err(Error::Infeasible(format!(
                    "time-bin rectangular needs m >= 2p >= 2 (p = {p}, m = {m})"
                )));
            }
            let mut columns = Vec::new();
            columns.push(TimeBinColumn {
                kind: ColumnKind::C1,
                width: 2 * p,
            });
            let mut width = 2 * p;
            while width < m {
                columns.push(TimeBinColumn {
                    kind: ColumnKind::C2,
                    width,
                });
                width += 2;
            }
            for _ in 0..p - 1 {
                columns.push(TimeBinColumn {
                    kind: ColumnKind::C3,
                    width: m,
                });
                columns.push(TimeBinColumn {
                    kind: ColumnKind::C1,
                    width: m,
                });
            }
            let prog = TimeBinProgram {
                family,
                modes: m,
                input_modes: 2 * p,
                input_bins: p,
                columns,
            };
            debug_assert_eq!(
                prog.physical_mzi_count() as u64,
                depth(Family::Rectangular, Encoding::TimeBin, p, m as u64)?,
            );
            Ok(prog)
        }
        _ => Err(Error::OutOfRange(
            "time-bin programs exist only for the Clements and Rectangular families".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_anchors() {
        assert_eq!(
            depth(Family::Clements, Encoding::Spatial, 10, 100).unwrap(),
            100
        );
        assert_eq!(
            depth(Family::Rectangular, Encoding::Spatial, 10, 100).unwrap(),
            54
        );
        assert_eq!(
            depth(Family::Rectangular, Encoding::TimeBin, 2, 8).unwrap(),
            5
        );
        assert_eq!(
            depth(Family::Rectangular, Encoding::TimeBin, 2, 4).unwrap(),
            3
        );
        assert!(depth(Family::Rectangular, Encoding::Spatial, 10, 5).is_err());
        assert!(depth(Family::Rectangular, Encoding::TimeBin, 10, 15).is_err());
    }

    #[test]
    fn rectangular_never_deeper_than_clements() {
        for p in 1..=20u32 {
            for m in (p as u64)..=400 {
                let r = depth(Family::Rectangular, Encoding::Spatial, p, m).unwrap();
                let c = depth(Family::Clements, Encoding::Spatial, p, m).unwrap();
                assert!(r <= c, "p={p} m={m}: rect {r} > clements {c}");
                if m == p as u64 {
                    // Equal input and output count collapses the advantage.
                    assert_eq!(r, m.div_ceil(2) + (p as u64).div_ceil(2) - 1);
                }
            }
        }
    }

    #[test]
    fn hybrid_spatial_clements_subs() {
        // Balanced Clements encodings double the square root of the target.
        let l = optimize_hybrid_spatial(4, 100, SubFamily::Clements).unwrap();
        assert_eq!((l.m1, l.m2), (10, 10));
        assert_eq!(l.depth, 20);
    }

    #[test]
    fn hybrid_spatial_examples() {
        let l = optimize_hybrid_spatial(50, 2500, SubFamily::Rectangular).unwrap();
        assert_eq!((l.m1, l.m2), (50, 50));
        let l = optimize_hybrid_spatial(1, 4, SubFamily::Rectangular).unwrap();
        assert_eq!((l.m1, l.m2), (2, 2));
        assert_eq!(l.depth, 2);
        let l = optimize_hybrid_spatial(50, 500, SubFamily::Rectangular).unwrap();
        assert_eq!((l.m1, l.m2), (22, 23));
    }

    #[test]
    fn hybrid_timebin_depth_formula() {
        assert_eq!(hybrid_timebin_depth(3, 59, 18, 18), 41);
        assert_eq!(hybrid_timebin_depth(4, 59, 11, 12), 32);
        assert_eq!(hybrid_timebin_depth(4, 59, 8, 9), 29);
    }

    #[test]
    fn hybrid_timebin_optimizer_anchors() {
        let l = optimize_hybrid_timebin(59, 2500).unwrap();
        assert_eq!(l.depth, 41);
        assert_eq!((l.demux_depth, l.m1, l.m2), (3, 18, 18));
        assert!(l.realized_modes() >= 2500);

        let l = optimize_hybrid_timebin(59, 500).unwrap();
        assert_eq!(l.depth, 32);
        assert!(l.realized_modes() >= 500);

        let l = optimize_hybrid_timebin(59, 250).unwrap();
        assert_eq!(l.depth, 29);
        assert_eq!((l.demux_depth, l.m1, l.m2), (4, 8, 9));
        assert!(l.realized_modes() >= 250);
    }

    #[test]
    fn hybrid_timebin_optimum_beats_brute_force() {
        // The optimizer result is a global minimum of the depth formula over
        // the feasible grid.
        for (p, target) in [(59u32, 2500u64), (59, 500), (23, 300), (50, 2500)] {
            let l = optimize_hybrid_timebin(p, target).unwrap();
            for n in 1..=ceil_log2(p) {
                let bins = (p as u64).div_ceil(1 << n);
                for m1 in 2..=80u64 {
                    for m2 in m1..=(target.min(3000)) {
                        if m1 * m2 * bins < target || m1 * m2 <= (1 << n) * bins {
                            continue;
                        }
                        assert!(
                            hybrid_timebin_depth(n, p, m1, m2) >= l.depth,
                            "p={p} target={target}: ({n},{m1},{m2}) beats optimizer"
                        );
                        break; // larger m2 only grows the depth
                    }
                }
            }
        }
    }

    #[test]
    fn input_rates() {
        let r = input_rate(Family::Clements, Encoding::Spatial, 50, 2500, 1e9);
        assert!((r - 2e7).abs() < 1e-6);
        let r = input_rate(Family::Clements, Encoding::TimeBin, 50, 2500, 1e9);
        assert!((r - 8e5).abs() < 1e-9);
        let r = input_rate(Family::HybridTimeBin, Encoding::TimeBin, 59, 2500, 1e9);
        assert!((r - 1e9 / 59.0).abs() < 1e-6);
    }

    #[test]
    fn input_rate_never_exceeds_source_rate() {
        for family in [
            Family::Clements,
            Family::Rectangular,
            Family::HybridSpatial,
            Family::HybridTimeBin,
        ] {
            for encoding in [Encoding::Spatial, Encoding::TimeBin] {
                for p in [1u32, 2, 50] {
                    for m in [2u64, 100, 2500] {
                        let r = input_rate(family, encoding, p, m, 1e9);
                        assert!(r <= 1e9, "{family} {encoding} p={p} m={m}: {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn threshold_examples() {
        let t = timebin_vs_spatial_threshold(59, 2500, 0.298, LossDb::ZERO);
        assert!((t.db() - 0.0497).abs() < 5e-4, "got {t}");
        let t = timebin_vs_spatial_threshold(59, 500, 0.145, LossDb::ZERO);
        assert!((t.db() - 0.0242).abs() < 5e-4, "got {t}");
        let t = timebin_vs_spatial_threshold(59, 500, 0.0, LossDb::ZERO);
        assert_eq!(t.db(), 0.0);
    }

    #[test]
    fn effective_mzi_loss_sums() {
        let mut spec = ArchitectureSpec::new(
            Family::Clements,
            Encoding::TimeBin,
            LossDb::new(0.05).unwrap(),
        );
        spec.prop_loss_per_bin = LossDb::new(0.01).unwrap();
        spec.interstage_coupling_loss = LossDb::new(0.02).unwrap();
        assert!((spec.effective_mzi_loss().db() - 0.08).abs() < 1e-15);
        spec.encoding = Encoding::Spatial;
        assert!((spec.effective_mzi_loss().db() - 0.05).abs() < 1e-15);
    }

    #[test]
    fn loop_penalty_examples() {
        let p = loop_penalties(4, 1.0, 6.0).unwrap();
        assert_eq!(p.delay_cascaded_s, 1.0);
        assert_eq!(p.delay_loop_s, 3.0);
        assert!((p.loop_input_rate_hz - 1.0).abs() < 1e-12);
        let p = loop_penalties(2, 1.0, 1e9).unwrap();
        assert_eq!(p.delay_cascaded_s, 0.0);
        assert_eq!(p.delay_loop_s, 0.0);
        let p = loop_penalties(100, 1.0, 1.0).unwrap();
        assert_eq!(p.delay_loop_s, 4851.0);
        assert_eq!(p.delay_cascaded_s, 49.0);
        assert!(loop_penalties(5, 1.0, 1.0).is_err());
    }

    #[test]
    fn clements_layout_counts() {
        for m in 2..=12usize {
            let l = mesh_layout(Family::Clements, m as u32, m).unwrap();
            assert_eq!(l.columns.len(), m);
            assert_eq!(l.mzi_count(), m * (m - 1) / 2);
        }
    }

    #[test]
    fn rectangular_layout_counts() {
        for p in 1..=8u32 {
            for m in (p as usize)..=40 {
                let l = mesh_layout(Family::Rectangular, p, m).unwrap();
                let d = depth(Family::Rectangular, Encoding::Spatial, p, m as u64).unwrap();
                assert_eq!(l.columns.len() as u64, d, "p={p} m={m}");
                assert_eq!(l.input_rows.len(), p as usize);
                for col in &l.columns {
                    for &top in col {
                        assert!(top + 1 < m);
                    }
                }
            }
        }
    }

    #[test]
    fn clements_program_structure() {
        let prog = build_timebin_program(Family::Clements, 4, 4).unwrap();
        assert_eq!(prog.physical_mzi_count(), 4);
        assert_eq!(prog.mix_slot_count(), 6); // matches the spatial MZI count
        assert_eq!(prog.output_window().1, 2);

        // Bin and mode bookkeeping per column.
        let mut bins = prog.input_bins as i64;
        let mut modes = prog.input_modes as i64;
        for w in prog.windows() {
            assert_eq!(w.bins as i64, bins);
            assert_eq!(w.width as i64, modes);
            bins += w.kind.bin_delta();
            modes += w.kind.mode_delta();
        }
        assert_eq!(modes, 4);
    }

    #[test]
    fn rectangular_program_structure() {
        let prog = build_timebin_program(Family::Rectangular, 2, 8).unwrap();
        let kinds: Vec<_> = prog.columns.iter().map(|c| c.kind).collect();
        assert_eq!(
            kinds,
            vec![
                ColumnKind::C1,
                ColumnKind::C2,
                ColumnKind::C2,
                ColumnKind::C3,
                ColumnKind::C1
            ]
        );
        let widths: Vec<_> = prog.columns.iter().map(|c| c.width).collect();
        assert_eq!(widths, vec![4, 4, 6, 8, 8]);
        assert_eq!(prog.physical_mzi_count(), 5);

        let mut modes = prog.input_modes as i64;
        for w in prog.windows() {
            assert_eq!(w.width as i64, modes);
            modes += w.kind.mode_delta();
        }
        assert_eq!(modes, 8);
    }

    #[test]
    fn program_mzi_count_matches_depth() {
        for m in (2..=40u32).step_by(2) {
            let prog = build_timebin_program(Family::Clements, m, m).unwrap();
            let d = depth(Family::Clements, Encoding::TimeBin, m, m as u64).unwrap();
            assert_eq!(prog.physical_mzi_count() as u64, d, "clements m={m}");
            for p in 1..=m / 2 {
                let prog = build_timebin_program(Family::Rectangular, p, m).unwrap();
                let d = depth(Family::Rectangular, Encoding::TimeBin, p, m as u64).unwrap();
                assert_eq!(prog.physical_mzi_count() as u64, d, "rect p={p} m={m}");
            }
        }
    }

    #[test]
    fn odd_mode_counts_rejected() {
        assert!(build_timebin_program(Family::Clements, 5, 5).is_err());
        assert!(build_timebin_program(Family::Rectangular, 2, 9).is_err());
    }

    #[test]
    fn mode_scaling_values() {
        assert_eq!(ModeScaling::Quadratic.modes(50), 2500);
        assert_eq!(ModeScaling::Linear { coefficient: 10.0 }.modes(50), 500);
        assert_eq!(ModeScaling::Linear { coefficient: 0.5 }.modes(10), 10);
    }
}
