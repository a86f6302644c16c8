//! Brute-force ground truth for the closed-form budget models.
//!
//! Everything here is deliberately slow and exact: permanents by
//! inclusion-exclusion, output distributions by exhaustive Fock enumeration,
//! and mesh matrices built element by element. Regime guards are hard errors
//! so a "validation" can never silently fall back to the formula under test.

pub mod fock;
pub mod mesh;

pub use fock::{
    complexity_score, elementary_symmetric, enumerate_fock, full_count, subspace_count, FockState,
};
pub use mesh::{
    clements_timebin_equivalence, expand_spatial_mesh, expand_timebin_program,
    max_unitarity_deviation, mzi_unitary, random_mzi_settings, u_swap, EquivalenceReport,
    MziSetting, TimeBinExpansion,
};

use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

/// Largest matrix accepted by [`permanent`].
pub const PERMANENT_LIMIT: usize = 30;
/// Exhaustive-enumeration guards for [`output_distribution`].
pub const MAX_PHOTONS: u32 = 5;
pub const MAX_MODES: usize = 10;

/// Matrix permanent by Ryser's inclusion-exclusion with Gray-code subset
/// updates. Exact for small integer matrices; O(n 2^n) time.
pub fn permanent(a: &Array2<Complex64>) -> Result<Complex64> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "permanent needs a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    if n > PERMANENT_LIMIT {
        return Err(Error::RegimeExceeded(format!(
            "permanent limited to n <= {PERMANENT_LIMIT}, got {n}"
        )));
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut prev_gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let gray = k ^ (k >> 1);
        let changed = gray ^ prev_gray;
        let col = changed.trailing_zeros() as usize;
        if gray & changed != 0 {
            for (r, sum) in row_sums.iter_mut().enumerate() {
                *sum += a[[r, col]];
            }
        } else {
            for (r, sum) in row_sums.iter_mut().enumerate() {
                *sum -= a[[r, col]];
            }
        }
        prev_gray = gray;
        let prod: Complex64 = row_sums.iter().product();
        if (n as u32 - gray.count_ones()).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

/// Haar-random `m x m` unitary: complex Gaussian matrix, modified
/// Gram-Schmidt with real positive diagonal (the phase fix that makes the
/// distribution unitarily invariant). Deterministic per seed.
pub fn haar_unitary(m: usize, seed: u64) -> Array2<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = Array2::<Complex64>::zeros((m, m));
    for v in z.iter_mut() {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        *v = Complex64::new(re, im) / 2f64.sqrt();
    }
    let mut q = Array2::<Complex64>::zeros((m, m));
    for col in 0..m {
        let mut v: Vec<Complex64> = (0..m).map(|r| z[[r, col]]).collect();
        for prev in 0..col {
            let proj: Complex64 = (0..m).map(|r| q[[r, prev]].conj() * v[r]).sum();
            for (r, vv) in v.iter_mut().enumerate() {
                *vv -= proj * q[[r, prev]];
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for (r, vv) in v.iter().enumerate() {
            q[[r, col]] = vv / norm;
        }
    }
    q
}

fn factorial(n: u32) -> f64 {
    (1..=n as u64).map(|v| v as f64).product()
}

/// Exact output distribution of `input` photons through the unitary `u`,
/// over every Fock state of the same photon number:
/// `P(T|S) = |Perm(U_{S,T})|^2 / (prod s_i! prod t_j!)`.
///
/// Exhaustive, so guarded to `N <= 5` photons and `M <= 10` modes.
pub fn output_distribution(
    u: &Array2<Complex64>,
    input: &FockState,
) -> Result<Vec<(FockState, f64)>> {
    let m = input.modes();
    let n = input.photons();
    if u.nrows() != m || u.ncols() != m {
        return Err(Error::DimensionMismatch(format!(
            "unitary is {}x{} but the input state has {m} modes",
            u.nrows(),
            u.ncols()
        )));
    }
    if n > MAX_PHOTONS || m > MAX_MODES {
        return Err(Error::RegimeExceeded(format!(
            "exhaustive regime is N <= {MAX_PHOTONS}, M <= {MAX_MODES}; got N = {n}, M = {m}"
        )));
    }
    let in_modes: Vec<usize> = input
        .0
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| std::iter::repeat_n(i, c as usize))
        .collect();
    let in_norm: f64 = input.0.iter().map(|&c| factorial(c)).product();

    let mut out = Vec::new();
    for target in enumerate_fock(m, n) {
        let out_modes: Vec<usize> = target
            .0
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i, c as usize))
            .collect();
        let mut sub = Array2::<Complex64>::zeros((n as usize, n as usize));
        for (r, &om) in out_modes.iter().enumerate() {
            for (c, &im) in in_modes.iter().enumerate() {
                sub[[r, c]] = u[[om, im]];
            }
        }
        let perm = permanent(&sub)?;
        let out_norm: f64 = target.0.iter().map(|&c| factorial(c)).product();
        out.push((target, perm.norm_sqr() / (in_norm * out_norm)));
    }
    Ok(out)
}

/// Comparison of the uniform-Hilbert-space post-selection model against
/// Haar-averaged Monte Carlo.
#[derive(Debug, Clone, PartialEq)]
pub struct PostSelectionReport {
    /// Exact occupied-`d` fraction of the Hilbert space, by enumeration.
    pub uniform_exact: f64,
    /// The closed-form ratio; equals `uniform_exact` by construction.
    pub closed_form: f64,
    /// Haar-averaged probability mass on `d`-occupied outputs.
    pub haar_mean: f64,
    /// Standard error of the Haar average.
    pub haar_stderr: f64,
    pub trials: usize,
    pub seed: u64,
}

/// Measure how well the uniform-Hilbert-space assumption approximates real
/// Haar sampling. The exact subspace ratio must match the closed form; the
/// Monte Carlo mean is reported with its standard error and is not gated
/// (the model is an approximation, the report quantifies it).
pub fn validate_post_selection_formula(
    p: u32,
    l: u32,
    d: u32,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<PostSelectionReport> {
    if l >= p {
        return Err(Error::OutOfRange("need surviving photons".into()));
    }
    let n = p - l;
    if n > MAX_PHOTONS || m > MAX_MODES {
        return Err(Error::RegimeExceeded(format!(
            "exhaustive regime is N <= {MAX_PHOTONS}, M <= {MAX_MODES}; got N = {n}, M = {m}"
        )));
    }
    if d as usize > m || d > n {
        return Err(Error::OutOfRange(format!("d = {d} outside 1..=min(n, m)")));
    }
    let uniform_exact =
        subspace_count(p, l, d, m as u32) as f64 / full_count(p, l, m as u32) as f64;
    let closed_form = crate::lossmodel::post_selection_efficiency(
        crate::lossmodel::PhotonCounts::new(p, l, d)?,
        m as u64,
    )
    .value();

    let mut input = vec![0u32; m];
    for slot in input.iter_mut().take(n as usize) {
        *slot = 1;
    }
    let input = FockState(input);

    let mut masses = Vec::with_capacity(trials);
    for t in 0..trials {
        let trial_seed = seed.wrapping_add((t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let u = haar_unitary(m, trial_seed);
        let mass: f64 = output_distribution(&u, &input)?
            .into_iter()
            .filter(|(state, _)| state.coherence_rank() == d as usize)
            .map(|(_, prob)| prob)
            .sum();
        masses.push(mass);
    }
    let mean = masses.iter().sum::<f64>() / trials as f64;
    let var =
        masses.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials as f64 - 1.0).max(1.0);
    Ok(PostSelectionReport {
        uniform_exact,
        closed_form,
        haar_mean: mean,
        haar_stderr: (var / trials as f64).sqrt(),
        trials,
        seed,
    })
}

// ---------------------------------------------------------------------------
// Independent evaluation routes for the sampling formulas
// ---------------------------------------------------------------------------

/// Distribution of the number of lost photons among `p` independent photons
/// with survival probability `survival`, built by convolution rather than
/// binomial coefficients.
pub fn lost_photon_pmf(p: u32, survival: f64) -> Vec<f64> {
    let mut pmf = vec![0.0; p as usize + 1];
    pmf[0] = 1.0;
    for photon in 0..p as usize {
        for l in (0..=photon + 1).rev() {
            let kept = if l <= photon { pmf[l] * survival } else { 0.0 };
            let lost = if l > 0 {
                pmf[l - 1] * (1.0 - survival)
            } else {
                0.0
            };
            pmf[l] = kept + lost;
        }
    }
    pmf
}

/// Post-selection efficiency evaluated as an interleaved product of rational
/// factors, avoiding both big integers and log-gamma.
pub fn post_selection_product(p: u32, l: u32, d: u32, m: u64) -> f64 {
    let n = (p - l) as u64;
    let d = d as u64;
    if d == 0 || n < d || d > m {
        return 0.0;
    }
    let mut num: Vec<f64> = Vec::new();
    let mut den: Vec<f64> = Vec::new();
    for i in 0..d {
        num.push((m - i) as f64);
        den.push((i + 1) as f64);
    }
    for j in 0..(n - d) {
        num.push((n - 1 - j) as f64);
        den.push((j + 1) as f64);
    }
    for k in 0..n {
        den.push((m + n - 1 - k) as f64);
        num.push((k + 1) as f64);
    }
    let mut acc = 1.0f64;
    let (mut i, mut j) = (0usize, 0usize);
    while i < num.len() || j < den.len() {
        if j >= den.len() || (acc <= 1.0 && i < num.len()) {
            acc *= num[i];
            i += 1;
        } else {
            acc /= den[j];
            j += 1;
        }
    }
    acc
}

/// Exact-loss sample probability through the convolution route.
pub fn ab_sample_probability_oracle(survival: f64, p: u32, l: u32) -> f64 {
    lost_photon_pmf(p, survival)[l as usize]
}

/// Collisional sample probability through the convolution and product
/// routes.
pub fn linear_sample_probability_oracle(survival: f64, p: u32, d: u32, m: u64) -> f64 {
    let pmf = lost_photon_pmf(p, survival);
    let mut total = 0.0;
    for l in 0..=d.min(p) {
        if p - l < d {
            break;
        }
        total += pmf[l as usize] * post_selection_product(p, l, d, m);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lossmodel::{
        post_selection_efficiency, sample_probability_ab, sample_probability_linear, Efficiency,
        PhotonCounts,
    };
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// O(n!) reference permanent for cross-checks.
    fn permanent_naive(a: &Array2<Complex64>) -> Complex64 {
        fn go(a: &Array2<Complex64>, row: usize, used: &mut Vec<bool>) -> Complex64 {
            let n = a.nrows();
            if row == n {
                return c(1.0, 0.0);
            }
            let mut total = c(0.0, 0.0);
            for col in 0..n {
                if !used[col] {
                    used[col] = true;
                    total += a[[row, col]] * go(a, row + 1, used);
                    used[col] = false;
                }
            }
            total
        }
        go(a, 0, &mut vec![false; a.nrows()])
    }

    #[test]
    fn permanent_anchors() {
        let id3 = Array2::<Complex64>::eye(3);
        assert!((permanent(&id3).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        let ones = array![[c(1.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(1.0, 0.0)]];
        assert!((permanent(&ones).unwrap() - c(2.0, 0.0)).norm() < 1e-14);
        let m = array![[c(1.0, 0.0), c(2.0, 0.0)], [c(3.0, 0.0), c(4.0, 0.0)]];
        assert!((permanent(&m).unwrap() - c(10.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn permanent_matches_naive() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in 1..=6usize {
            let mut a = Array2::<Complex64>::zeros((n, n));
            for v in a.iter_mut() {
                *v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
            let fast = permanent(&a).unwrap();
            let slow = permanent_naive(&a);
            assert!((fast - slow).norm() < 1e-10 * slow.norm().max(1.0), "n={n}");
        }
    }

    #[test]
    fn permanent_multilinear_in_rows() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut a = Array2::<Complex64>::zeros((4, 4));
        for v in a.iter_mut() {
            *v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let scale = c(1.7, -0.4);
        let mut b = a.clone();
        for col in 0..4 {
            b[[2, col]] *= scale;
        }
        let pa = permanent(&a).unwrap();
        let pb = permanent(&b).unwrap();
        assert!((pb - scale * pa).norm() < 1e-10);
    }

    #[test]
    fn permanent_guards() {
        let rect = Array2::<Complex64>::zeros((2, 3));
        assert!(permanent(&rect).is_err());
        let big = Array2::<Complex64>::zeros((31, 31));
        assert!(matches!(permanent(&big), Err(Error::RegimeExceeded(_))));
    }

    #[test]
    fn haar_is_unitary_and_deterministic() {
        let u = haar_unitary(16, 5);
        assert!(max_unitarity_deviation(&u) < 1e-10);
        let v = haar_unitary(16, 5);
        assert_eq!(u, v);
        assert_ne!(u, haar_unitary(16, 6));
        let one = haar_unitary(1, 3);
        assert!((one[[0, 0]].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_first_entry_statistics() {
        // |U_11|^2 of a Haar column averages 1/m.
        let m = 8;
        let trials = 20_000;
        let mut vals = Vec::with_capacity(trials);
        for t in 0..trials {
            vals.push(haar_unitary(m, 1000 + t as u64)[[0, 0]].norm_sqr());
        }
        let mean = vals.iter().sum::<f64>() / trials as f64;
        let var = vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        let stderr = (var / trials as f64).sqrt();
        assert!(
            (mean - 1.0 / m as f64).abs() < 3.0 * stderr,
            "mean {mean} vs 1/{m} (stderr {stderr})"
        );
    }

    #[test]
    fn hong_ou_mandel_cancellation() {
        // A 50:50 MZI setting sends (1,1) to bunched outputs only.
        let u = mzi_unitary(MziSetting {
            theta: std::f64::consts::FRAC_PI_2,
            phi: 0.0,
        });
        let dist = output_distribution(&u, &FockState(vec![1, 1])).unwrap();
        let coincidence = dist
            .iter()
            .find(|(s, _)| s.0 == vec![1, 1])
            .map(|(_, p)| *p)
            .unwrap();
        assert!(coincidence.abs() < 1e-12, "HOM dip broken: {coincidence}");
        let total: f64 = dist.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_and_swap_distributions() {
        let id = Array2::<Complex64>::eye(3);
        let input = FockState(vec![2, 1, 0]);
        let dist = output_distribution(&id, &input).unwrap();
        for (state, prob) in dist {
            let expect = if state == input { 1.0 } else { 0.0 };
            assert!((prob - expect).abs() < 1e-12);
        }
        let dist = output_distribution(&u_swap(), &FockState(vec![1, 0])).unwrap();
        for (state, prob) in dist {
            let expect = if state.0 == vec![0, 1] { 1.0 } else { 0.0 };
            assert!((prob - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn distribution_normalises_for_haar_meshes() {
        for (n, m, seed) in [(2u32, 5usize, 1u64), (3, 6, 2), (4, 8, 3)] {
            let u = haar_unitary(m, seed);
            let mut occ = vec![0u32; m];
            for slot in occ.iter_mut().take(n as usize) {
                *slot = 1;
            }
            let dist = output_distribution(&u, &FockState(occ)).unwrap();
            let total: f64 = dist.iter().map(|(_, p)| p).sum();
            assert!((total - 1.0).abs() < 1e-8, "n={n} m={m}: {total}");
        }
    }

    #[test]
    fn output_distribution_guards() {
        let u = Array2::<Complex64>::eye(11);
        assert!(matches!(
            output_distribution(&u, &FockState(vec![1; 11])),
            Err(Error::RegimeExceeded(_))
        ));
        let u = Array2::<Complex64>::eye(4);
        assert!(output_distribution(&u, &FockState(vec![2, 2, 1, 1])).is_err());
    }

    #[test]
    fn post_selection_report_exactness() {
        let r = validate_post_selection_formula(2, 0, 2, 2, 200, 9).unwrap();
        assert!((r.uniform_exact - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.uniform_exact, r.closed_form);
        assert!(r.haar_stderr > 0.0);
        // The Haar mean is recorded, not asserted against the uniform model.
        for (p, m) in [(3u32, 6usize), (4, 8), (2, 5)] {
            for d in 1..=p.min(4) {
                let r = validate_post_selection_formula(p, 0, d, m, 3, 1).unwrap();
                assert_eq!(r.uniform_exact, r.closed_form, "p={p} d={d} m={m}");
            }
        }
    }

    #[test]
    fn convolution_route_matches_closed_forms() {
        for s in [0.1, 0.44, 0.93] {
            let eff = Efficiency::new(s).unwrap();
            for p in [3u32, 10, 59] {
                let pmf = lost_photon_pmf(p, s);
                assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                for l in 0..=p.min(12) {
                    let closed = sample_probability_ab(eff, p, l).value();
                    let conv = pmf[l as usize];
                    assert!(
                        (closed - conv).abs() <= 1e-12 * conv.max(1e-30),
                        "p={p} l={l} s={s}: {closed} vs {conv}"
                    );
                }
            }
            // Collisional route at the benchmark scale.
            let closed = sample_probability_linear(eff, 59, 50, 500).value();
            let indep = linear_sample_probability_oracle(s, 59, 50, 500);
            assert!(
                ((closed - indep) / closed.max(1e-300)).abs() < 1e-10,
                "s={s}: {closed} vs {indep}"
            );
        }
    }

    #[test]
    fn product_route_matches_exact_ratio() {
        for m in [4u64, 10, 500, 2500] {
            for (p, l, d) in [(5u32, 1u32, 3u32), (59, 9, 50), (50, 0, 50)] {
                if (p - l) < d || d as u64 > m {
                    continue;
                }
                let a = post_selection_product(p, l, d, m);
                let b = post_selection_efficiency(PhotonCounts::new(p, l, d).unwrap(), m).value();
                assert!(
                    ((a - b) / b.max(1e-300)).abs() < 1e-10,
                    "p={p} l={l} d={d} m={m}: {a} vs {b}"
                );
            }
        }
    }
}
