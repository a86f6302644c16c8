//! Fock state enumeration and occupation combinatorics.

use crate::binom::binomial_u128;

/// Occupation numbers over a fixed set of modes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FockState(pub Vec<u32>);

impl FockState {
    pub fn modes(&self) -> usize {
        self.0.len()
    }

    /// Total photon number.
    pub fn photons(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of occupied modes.
    pub fn coherence_rank(&self) -> usize {
        self.0.iter().filter(|&&n| n > 0).count()
    }

    /// True when no mode holds more than one photon.
    pub fn is_collision_free(&self) -> bool {
        self.0.iter().all(|&n| n <= 1)
    }
}

impl std::fmt::Display for FockState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ">")
    }
}

/// All occupation vectors of `photons` photons over `modes` modes, in
/// lexicographic order. The list length is `C(modes + photons - 1, photons)`.
pub fn enumerate_fock(modes: usize, photons: u32) -> Vec<FockState> {
    let mut out = Vec::new();
    let mut current = vec![0u32; modes];
    fill(&mut out, &mut current, 0, photons);
    out
}

fn fill(out: &mut Vec<FockState>, current: &mut [u32], index: usize, remaining: u32) {
    if index == current.len() - 1 {
        current[index] = remaining;
        out.push(FockState(current.to_vec()));
        return;
    }
    for n in (0..=remaining).rev() {
        current[index] = n;
        fill(out, current, index + 1, remaining - n);
    }
    current[index] = 0;
}

/// Number of `p - l` photon states over `m` modes occupying exactly `d`
/// modes: `C(m, d) C(p-l-1, p-l-d)`.
pub fn subspace_count(p: u32, l: u32, d: u32, m: u32) -> u128 {
    assert!(l < p, "need at least one surviving photon");
    let n = p - l;
    if d == 0 || d > n || d > m {
        return 0;
    }
    binomial_u128(m as u64, d as u64) * binomial_u128((n - 1) as u64, (n - d) as u64)
}

/// Size of the full `p - l` photon Hilbert space over `m` modes:
/// `C(m + p - l - 1, p - l)`.
pub fn full_count(p: u32, l: u32, m: u32) -> u128 {
    assert!(l < p, "need at least one surviving photon");
    let n = p - l;
    binomial_u128((m + n - 1) as u64, n as u64)
}

/// Elementary symmetric polynomial `X_k` of the occupation numbers: the sum
/// of all k-fold products of entries. `X_0 = 1`.
pub fn elementary_symmetric(state: &FockState, k: usize) -> u128 {
    // DP over the polynomial prod_i (1 + n_i t); X_k is the t^k coefficient.
    let mut coeff = vec![0u128; k + 1];
    coeff[0] = 1;
    for &n in &state.0 {
        let n = n as u128;
        if n == 0 {
            continue;
        }
        for j in (1..=k).rev() {
            coeff[j] += coeff[j - 1] * n;
        }
    }
    coeff[k]
}

/// Classical simulation cost score of an output pattern:
/// `sum_{k=0}^{alpha} X_k`, which collapses to `prod_i (1 + n_i)`.
///
/// The score equals `2^N` exactly when the state is collision-free and never
/// drops below `2^alpha`.
pub fn complexity_score(state: &FockState) -> u128 {
    let alpha = state.coherence_rank();
    (0..=alpha).map(|k| elementary_symmetric(state, k)).sum()
}
