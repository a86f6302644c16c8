//! Matrix expansion of spatial MZI meshes and time-bin column programs.
//!
//! The MZI convention throughout is two symmetric 50:50 couplers around an
//! internal phase, with an outer phase on the first rail:
//! `U(theta, phi) = B P(theta) B P(phi)` where `B = [[1, i], [i, 1]]/sqrt(2)`
//! and `P(a) = diag(e^{ia}, 1)`. The bar state sits at `theta = pi`, the
//! 50:50 point at `theta = pi/2`, and `theta = 0` swaps the rails up to a
//! global phase.

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::architectures::{
    build_timebin_program, mesh_layout, ColumnKind, Family, TimeBinProgram,
};
use crate::{Error, Result};

/// Phase pair programming one MZI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MziSetting {
    pub theta: f64,
    pub phi: f64,
}

/// 2x2 unitary of one MZI in the fixed convention.
pub fn mzi_unitary(setting: MziSetting) -> Array2<Complex64> {
    let i = Complex64::i();
    let et = Complex64::from_polar(1.0, setting.theta);
    let ep = Complex64::from_polar(1.0, setting.phi);
    let one = Complex64::new(1.0, 0.0);
    ndarray::array![
        [0.5 * ep * (et - one), 0.5 * i * (et + one)],
        [0.5 * i * ep * (et + one), 0.5 * (one - et)]
    ]
}

/// Exact two-rail swap.
pub fn u_swap() -> Array2<Complex64> {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    ndarray::array![[z, one], [one, z]]
}

/// Uniformly random settings, reproducible per seed.
pub fn random_mzi_settings(count: usize, seed: u64) -> Vec<MziSetting> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| MziSetting {
            theta: rng.gen_range(0.0..std::f64::consts::PI),
            phi: rng.gen_range(0.0..std::f64::consts::TAU),
        })
        .collect()
}

/// Largest entry of `U^dag U - I`.
pub fn max_unitarity_deviation(u: &Array2<Complex64>) -> f64 {
    let n = u.ncols();
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for r in 0..u.nrows() {
                dot += u[[r, a]].conj() * u[[r, b]];
            }
            let expect = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((dot - expect).norm());
        }
    }
    worst
}

fn apply_pair_rows(
    matrix: &mut Array2<Complex64>,
    block: &Array2<Complex64>,
    row_a: usize,
    row_b: usize,
) {
    for c in 0..matrix.ncols() {
        let a = matrix[[row_a, c]];
        let b = matrix[[row_b, c]];
        matrix[[row_a, c]] = block[[0, 0]] * a + block[[0, 1]] * b;
        matrix[[row_b, c]] = block[[1, 0]] * a + block[[1, 1]] * b;
    }
}

/// Expand a spatial mesh into its transfer matrix.
///
/// Clements meshes return the full `m x m` unitary. Rectangular meshes
/// return the `p x m` isometry whose row `i` holds the amplitudes from input
/// `i` to every output; rows are orthonormal and, at random settings, every
/// entry is nonzero (full connectivity).
pub fn expand_spatial_mesh(
    family: Family,
    p: u32,
    m: usize,
    settings: &[MziSetting],
) -> Result<Array2<Complex64>> {
    let layout = mesh_layout(family, p, m)?;
    if settings.len() != layout.mzi_count() {
        return Err(Error::DimensionMismatch(format!(
            "mesh needs {} settings, got {}",
            layout.mzi_count(),
            settings.len()
        )));
    }
    let mut u = Array2::<Complex64>::eye(m);
    let mut next = 0;
    for column in &layout.columns {
        for &top in column {
            let block = mzi_unitary(settings[next]);
            next += 1;
            apply_pair_rows(&mut u, &block, top, top + 1);
        }
    }
    match family {
        Family::Clements => Ok(u),
        Family::Rectangular => {
            let mut transfer = Array2::<Complex64>::zeros((layout.input_rows.len(), m));
            for (i, &row) in layout.input_rows.iter().enumerate() {
                for j in 0..m {
                    transfer[[i, j]] = u[[j, row]];
                }
            }
            Ok(transfer)
        }
        _ => unreachable!("mesh_layout rejects other families"),
    }
}

/// Result of expanding a time-bin program onto the rail-by-bin mode grid.
#[derive(Debug, Clone)]
pub struct TimeBinExpansion {
    /// Output-mode by input-mode transfer matrix over the active modes.
    pub matrix: Array2<Complex64>,
    /// (rail, bin) of every input mode, 0 = undelayed rail.
    pub input_slots: Vec<(u8, usize)>,
    /// (rail, bin) of every output mode, in row order of `matrix`.
    pub output_slots: Vec<(u8, usize)>,
}

#[derive(Clone, Copy, PartialEq)]
enum StreamShape {
    Full,
    LoneEnds,
}

/// Expand a two-rail time-bin program into its transfer matrix.
///
/// One setting is consumed per programmable MZI firing, ordered column by
/// column and bin by bin; the forced swap firings of `C3` columns are not
/// programmable and take no setting. The time-bin MZI addresses the delayed
/// rail as its first port, so a firing applies `U(theta, phi) U_swap` to
/// `(undelayed, delayed)`. After each column the delayed rail shifts by one
/// bin.
pub fn expand_timebin_program(
    prog: &TimeBinProgram,
    settings: &[MziSetting],
) -> Result<TimeBinExpansion> {
    if settings.len() != prog.mix_slot_count() {
        return Err(Error::DimensionMismatch(format!(
            "program needs {} settings, got {}",
            prog.mix_slot_count(),
            settings.len()
        )));
    }
    let stretches = prog
        .columns
        .iter()
        .filter(|c| matches!(c.kind, ColumnKind::C1 | ColumnKind::C2))
        .count();
    let total_bins = prog.input_bins as usize + stretches + 1;
    let slot = |rail: u8, bin: usize| rail as usize * total_bins + bin;

    let n_in = prog.input_modes as usize;
    let mut a = Array2::<Complex64>::zeros((2 * total_bins, n_in));
    let mut input_slots = Vec::with_capacity(n_in);
    for j in 0..n_in {
        // 1-based odd modes enter on the delayed rail, even on the undelayed.
        let (rail, bin) = if j % 2 == 0 {
            (1u8, j / 2)
        } else {
            (0u8, j / 2)
        };
        a[[slot(rail, bin), j]] = Complex64::new(1.0, 0.0);
        input_slots.push((rail, bin));
    }

    // Both program families start on a fully occupied bin window.
    let mut shape = StreamShape::Full;
    let swap = u_swap();
    let mut next_setting = 0;
    for window in prog.windows() {
        let first = window.start_bin;
        let last = window.start_bin + window.bins - 1;
        match window.kind {
            ColumnKind::C1 => debug_assert!(shape == StreamShape::Full),
            ColumnKind::C2 | ColumnKind::C3 => debug_assert!(shape == StreamShape::LoneEnds),
        }
        for bin in first..=last {
            let is_swap = window.kind == ColumnKind::C3 && (bin == first || bin == last);
            let block = if is_swap {
                swap.clone()
            } else {
                let b = mzi_unitary(settings[next_setting]).dot(&swap);
                next_setting += 1;
                b
            };
            apply_pair_rows(&mut a, &block, slot(0, bin), slot(1, bin));
        }
        // One-bin delay on rail 1.
        for bin in (0..total_bins - 1).rev() {
            let src = slot(1, bin);
            let dst = slot(1, bin + 1);
            for c in 0..n_in {
                a[[dst, c]] = a[[src, c]];
            }
        }
        for c in 0..n_in {
            a[[slot(1, 0), c]] = Complex64::new(0.0, 0.0);
        }
        shape = match window.kind {
            ColumnKind::C1 | ColumnKind::C2 => StreamShape::LoneEnds,
            ColumnKind::C3 => StreamShape::Full,
        };
    }

    let (out_start, out_bins) = prog.output_window();
    let out_end = out_start + out_bins - 1;
    let mut output_slots = Vec::new();
    match shape {
        StreamShape::Full => {
            for bin in out_start..=out_end {
                output_slots.push((0u8, bin));
                output_slots.push((1u8, bin));
            }
        }
        StreamShape::LoneEnds => {
            for bin in out_start..=out_end {
                if bin < out_end {
                    output_slots.push((0u8, bin));
                }
                if bin > out_start {
                    output_slots.push((1u8, bin));
                }
            }
        }
    }
    debug_assert_eq!(output_slots.len(), prog.modes as usize);

    let mut matrix = Array2::<Complex64>::zeros((output_slots.len(), n_in));
    for (r, &(rail, bin)) in output_slots.iter().enumerate() {
        for c in 0..n_in {
            matrix[[r, c]] = a[[slot(rail, bin), c]];
        }
    }
    // Everything outside the tracked window must have stayed vacuum.
    let active: std::collections::HashSet<usize> =
        output_slots.iter().map(|&(r, b)| slot(r, b)).collect();
    for s in 0..2 * total_bins {
        if active.contains(&s) {
            continue;
        }
        for c in 0..n_in {
            let leak = a[[s, c]].norm();
            if leak > 1e-9 {
                return Err(Error::DimensionMismatch(format!(
                    "amplitude {leak:.2e} leaked outside the active window"
                )));
            }
        }
    }
    Ok(TimeBinExpansion {
        matrix,
        input_slots,
        output_slots,
    })
}

/// Outcome of matching a time-bin expansion against its spatial mesh.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    /// `permutation[row]` is the spatial output mode carried by that matrix
    /// row of the time-bin expansion.
    pub permutation: Vec<usize>,
    /// Largest entry of `A - P D U_spatial` after matching.
    pub max_deviation: f64,
    pub mesh_modes: usize,
    pub seed: u64,
}

/// Expand the Clements time-bin program and the spatial Clements mesh with
/// identical random settings and match them up to an output-mode permutation
/// and per-mode phases.
///
/// The permutation is discovered by greedy maximal-magnitude assignment on
/// `A U^dag`; an ambiguous match is an error, never a silent pass.
pub fn clements_timebin_equivalence(m: usize, seed: u64) -> Result<EquivalenceReport> {
    let settings = random_mzi_settings(m * (m - 1) / 2, seed);
    let spatial = expand_spatial_mesh(Family::Clements, m as u32, m, &settings)?;
    let prog = build_timebin_program(Family::Clements, m as u32, m as u32)?;
    let expansion = expand_timebin_program(&prog, &settings)?;
    let a = &expansion.matrix;

    // overlap[r][j] = <spatial mode j | time-bin row r>; a permutation with
    // phases iff each row/column has exactly one unimodular entry.
    let mut overlap = Array2::<Complex64>::zeros((m, m));
    for r in 0..m {
        for j in 0..m {
            let mut dot = Complex64::new(0.0, 0.0);
            for c in 0..m {
                dot += a[[r, c]] * spatial[[j, c]].conj();
            }
            overlap[[r, j]] = dot;
        }
    }

    let mut permutation = vec![usize::MAX; m];
    let mut phases = vec![Complex64::new(0.0, 0.0); m];
    let mut row_used = vec![false; m];
    let mut col_used = vec![false; m];
    for _ in 0..m {
        let mut best = (0usize, 0usize, -1.0f64);
        for r in 0..m {
            if row_used[r] {
                continue;
            }
            for j in 0..m {
                if col_used[j] {
                    continue;
                }
                let mag = overlap[[r, j]].norm();
                if mag > best.2 {
                    best = (r, j, mag);
                }
            }
        }
        let (r, j, mag) = best;
        if mag < 0.9 {
            return Err(Error::Infeasible(format!(
                "permutation matching failed at magnitude {mag:.3}"
            )));
        }
        row_used[r] = true;
        col_used[j] = true;
        permutation[r] = j;
        phases[r] = overlap[[r, j]] / Complex64::new(mag, 0.0);
    }

    let mut max_deviation = 0.0f64;
    for r in 0..m {
        for c in 0..m {
            let expected = phases[r] * spatial[[permutation[r], c]];
            max_deviation = max_deviation.max((a[[r, c]] - expected).norm());
        }
    }
    Ok(EquivalenceReport {
        permutation,
        max_deviation,
        mesh_modes: m,
        seed,
    })
}
