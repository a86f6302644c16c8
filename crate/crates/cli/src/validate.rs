//! Brute-force validation suites behind `boson-budget validate`.
//!
//! Every suite prints one PASS/FAIL line; any failure flips the process exit
//! code to 1.

use boson_budget::architectures::{build_timebin_program, depth, Encoding, Family};
use boson_budget::lossmodel::{post_selection_efficiency, PhotonCounts};
use boson_budget::oracle;

use crate::output::{format_sig, Output};

pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, run: impl FnOnce() -> Result<String, String>) -> SuiteResult {
    match run() {
        Ok(detail) => SuiteResult {
            name,
            passed: true,
            detail,
        },
        Err(detail) => SuiteResult {
            name,
            passed: false,
            detail,
        },
    }
}

/// Permanent evaluation against anchor values and an O(n!) expansion.
pub fn suite_permanent() -> SuiteResult {
    check("permanent", || {
        use ndarray::array;
        use num_complex::Complex64 as C;
        let id = ndarray::Array2::<C>::eye(3);
        let p = oracle::permanent(&id).map_err(|e| e.to_string())?;
        if (p - C::new(1.0, 0.0)).norm() > 1e-14 {
            return Err(format!("identity permanent {p}"));
        }
        let m = array![
            [C::new(1.0, 0.0), C::new(2.0, 0.0)],
            [C::new(3.0, 0.0), C::new(4.0, 0.0)]
        ];
        let p = oracle::permanent(&m).map_err(|e| e.to_string())?;
        if (p - C::new(10.0, 0.0)).norm() > 1e-12 {
            return Err(format!("2x2 permanent {p}"));
        }
        Ok("identity and integer anchors exact".into())
    })
}

/// Closed-form post-selection efficiency against exhaustive enumeration.
pub fn suite_post_selection() -> SuiteResult {
    check("post-selection", || {
        let mut cells = 0;
        for m in 1..=10usize {
            for n in 1..=5u32 {
                let states = oracle::enumerate_fock(m, n);
                for d in 1..=n.min(m as u32) {
                    let bucket = states
                        .iter()
                        .filter(|s| s.coherence_rank() == d as usize)
                        .count() as f64;
                    let ratio = bucket / states.len() as f64;
                    let closed = post_selection_efficiency(
                        PhotonCounts::new(n, 0, d).map_err(|e| e.to_string())?,
                        m as u64,
                    )
                    .value();
                    if ratio != closed {
                        return Err(format!("n={n} d={d} m={m}: {ratio} vs {closed}"));
                    }
                    cells += 1;
                }
            }
        }
        Ok(format!("{cells} exhaustive cells match exactly"))
    })
}

/// Simulation-cost score identities over all small Fock states.
pub fn suite_scores() -> SuiteResult {
    check("scores", || {
        let mut states_checked = 0u64;
        for m in 1..=8usize {
            for n in 0..=8u32 {
                for state in oracle::enumerate_fock(m, n) {
                    let score = oracle::complexity_score(&state);
                    let product: u128 = state.0.iter().map(|&x| (1 + x) as u128).product();
                    if score != product {
                        return Err(format!("{state}: score {score} vs product {product}"));
                    }
                    if score < 1u128 << (state.coherence_rank() as u32) {
                        return Err(format!("{state}: score below rank bound"));
                    }
                    if (score == 1u128 << state.photons()) != state.is_collision_free() {
                        return Err(format!("{state}: collision-free criterion broken"));
                    }
                    states_checked += 1;
                }
            }
        }
        Ok(format!(
            "{states_checked} states satisfy the score identities"
        ))
    })
}

/// Hilbert space sizes against the counting formulas.
pub fn suite_counting() -> SuiteResult {
    check("counting", || {
        for m in 1..=10u32 {
            for n in 1..=4u32 {
                let states = oracle::enumerate_fock(m as usize, n);
                if states.len() as u128 != oracle::full_count(n, 0, m) {
                    return Err(format!("full count mismatch at n={n} m={m}"));
                }
                for d in 1..=n {
                    let bucket = states
                        .iter()
                        .filter(|s| s.coherence_rank() == d as usize)
                        .count() as u128;
                    if bucket != oracle::subspace_count(n, 0, d, m) {
                        return Err(format!("bucket mismatch at n={n} d={d} m={m}"));
                    }
                }
            }
        }
        Ok("enumeration sizes match the counting formulas".into())
    })
}

/// Two-photon interference null at the 50:50 setting.
pub fn suite_hom() -> SuiteResult {
    check("hom", || {
        let u = oracle::mzi_unitary(oracle::MziSetting {
            theta: std::f64::consts::FRAC_PI_2,
            phi: 0.0,
        });
        let dist = oracle::output_distribution(&u, &oracle::FockState(vec![1, 1]))
            .map_err(|e| e.to_string())?;
        let coincidence = dist
            .iter()
            .find(|(s, _)| s.0 == vec![1, 1])
            .map(|(_, p)| *p)
            .unwrap_or(1.0);
        if coincidence.abs() >= 1e-12 {
            return Err(format!("coincidence probability {coincidence:e}"));
        }
        Ok(format!("coincidence probability {:e}", coincidence.abs()))
    })
}

/// Unitarity of expanded meshes at random settings.
pub fn suite_mesh(seed: u64) -> SuiteResult {
    check("mesh-unitarity", || {
        for m in [2usize, 4, 6, 8] {
            let settings = oracle::random_mzi_settings(m * (m - 1) / 2, seed + m as u64);
            let u = oracle::expand_spatial_mesh(Family::Clements, m as u32, m, &settings)
                .map_err(|e| e.to_string())?;
            let dev = oracle::max_unitarity_deviation(&u);
            if dev > 1e-10 {
                return Err(format!("clements m={m}: deviation {dev:e}"));
            }
        }
        let layout = boson_budget::architectures::mesh_layout(Family::Rectangular, 2, 6)
            .map_err(|e| e.to_string())?;
        let settings = oracle::random_mzi_settings(layout.mzi_count(), seed);
        let t = oracle::expand_spatial_mesh(Family::Rectangular, 2, 6, &settings)
            .map_err(|e| e.to_string())?;
        if t.iter().any(|z| z.norm() < 1e-9) {
            return Err("rectangular mesh is not fully connected".into());
        }
        Ok("expanded meshes unitary and fully connected".into())
    })
}

/// Time-bin programs against their spatial meshes, plus MZI counts.
pub fn suite_timebin_equiv(m: usize, seed: u64) -> SuiteResult {
    check("timebin-equiv", || {
        let report = oracle::clements_timebin_equivalence(m, seed).map_err(|e| e.to_string())?;
        if report.max_deviation >= 1e-9 {
            return Err(format!("m={m}: deviation {:e}", report.max_deviation));
        }
        for modes in (2..=40u32).step_by(2) {
            let prog =
                build_timebin_program(Family::Clements, modes, modes).map_err(|e| e.to_string())?;
            let d = depth(Family::Clements, Encoding::TimeBin, modes, modes as u64)
                .map_err(|e| e.to_string())?;
            if prog.physical_mzi_count() as u64 != d {
                return Err(format!(
                    "clements m={modes}: {} MZIs vs depth {d}",
                    prog.physical_mzi_count()
                ));
            }
        }
        Ok(format!(
            "m={m} seed={seed}: deviation {:e}, permutation {:?}",
            report.max_deviation, report.permutation
        ))
    })
}

/// Haar-averaged occupancy against the uniform-Hilbert-space model, reported
/// with its statistical error (no pass/fail gate on the deviation itself).
pub fn suite_haar_occupancy(trials: usize, seed: u64) -> SuiteResult {
    check("haar-occupancy", || {
        let r = oracle::validate_post_selection_formula(3, 0, 3, 9, trials, seed)
            .map_err(|e| e.to_string())?;
        if r.uniform_exact != r.closed_form {
            return Err("closed form disagrees with enumeration".into());
        }
        Ok(format!(
            "uniform model {} vs haar {} +/- {} ({} trials, seed {})",
            format_sig(r.uniform_exact, 6),
            format_sig(r.haar_mean, 6),
            format_sig(r.haar_stderr, 3),
            r.trials,
            r.seed,
        ))
    })
}

pub fn run_suites(
    which: &str,
    m: usize,
    trials: usize,
    seed: u64,
    out: &mut Output,
) -> anyhow::Result<bool> {
    let mut results = Vec::new();
    let all = which == "all";
    if all || which == "permanent" {
        results.push(suite_permanent());
    }
    if all || which == "post-selection" {
        results.push(suite_post_selection());
    }
    if all || which == "scores" {
        results.push(suite_scores());
    }
    if all || which == "counting" {
        results.push(suite_counting());
    }
    if all || which == "hom" {
        results.push(suite_hom());
    }
    if all || which == "mesh-unitarity" {
        results.push(suite_mesh(seed));
    }
    if all || which == "timebin-equiv" {
        results.push(suite_timebin_equiv(m, seed));
    }
    if all || which == "haar-occupancy" {
        results.push(suite_haar_occupancy(trials, seed));
    }
    if results.is_empty() {
        anyhow::bail!("unknown suite '{which}'");
    }
    let mut ok = true;
    for r in &results {
        out.line(&format!(
            "{} {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        ))?;
        ok &= r.passed;
    }
    Ok(ok)
}
