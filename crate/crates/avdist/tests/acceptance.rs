//! Acceptance suite: ten end-to-end criteria, each reporting a single
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; any failure also fails the corresponding test.

mod common;

use avdist::avg::{d_av_channels, d_av_povms, d_av_states};
use avdist::ensembles::{
    haar_unitary, random_channel, random_density, random_povm, SeedSpec, UnitaryEnsemble,
};
use avdist::moments::{kth_moment_exact, projector_inequality_check};
use avdist::montecarlo::{
    bound_check, estimate_avg_tv_channels, estimate_avg_tv_povms, estimate_avg_tv_states,
    estimate_mean, simulate_discrimination, ObjectKind,
};
use avdist::objects::{ChannelChoi, DensityMatrix};
use avdist::suites::{
    random_hermitian, reproduce, reproduce_all, run_property_suite, Suite,
};
use avdist::worst::{
    diamond_distance, diamond_unitary_exact, separation_report, DiamondConfig, ObjectPair,
};

fn report(criterion: &str, passed: bool, detail: &str) {
    let tag = if passed { "PASS" } else { "FAIL" };
    println!("[{tag}] {criterion}: {detail}");
    assert!(passed, "{criterion}: {detail}");
}

/// Criterion 1: every registered reproduction case passes at its stated
/// tolerance, in under a minute.
#[test]
fn criterion_01_golden_reproductions() {
    let start = std::time::Instant::now();
    let outcomes = reproduce_all().unwrap();
    let failures: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| format!("{}:{}", o.case, o.quantity))
        .collect();
    let elapsed = start.elapsed();
    report(
        "criterion 1 golden reproductions",
        failures.is_empty() && elapsed.as_secs() < 60,
        &format!(
            "{} checks, {} failures {:?}, {:.1}s",
            outcomes.len(),
            failures.len(),
            failures,
            elapsed.as_secs_f64()
        ),
    );
}

/// Deterministic criterion-2 object pairs (shared with criterion 6).
fn state_pairs(d: usize, count: u64) -> Vec<(DensityMatrix, DensityMatrix)> {
    (0..count)
        .map(|t| {
            let mut rng = SeedSpec::new(0xA11CE ^ (d as u64) << 32, t).rng();
            (random_density(d, &mut rng), random_density(d, &mut rng))
        })
        .collect()
}

fn povm_pairs(d: usize, count: u64) -> Vec<(avdist::objects::Povm, avdist::objects::Povm)> {
    (0..count)
        .map(|t| {
            let mut rng = SeedSpec::new(0xB0B ^ (d as u64) << 32, t).rng();
            (random_povm(d, d, &mut rng), random_povm(d, d, &mut rng))
        })
        .collect()
}

/// Half random unitary pairs, half random CPTP pairs.
fn channel_pairs(d: usize, count: u64) -> Vec<(ChannelChoi, ChannelChoi)> {
    (0..count)
        .map(|t| {
            let mut rng = SeedSpec::new(0xC0DE ^ (d as u64) << 32, t).rng();
            if t % 2 == 0 {
                (
                    ChannelChoi::unitary(&haar_unitary(d, &mut rng)).unwrap(),
                    ChannelChoi::unitary(&haar_unitary(d, &mut rng)).unwrap(),
                )
            } else {
                (random_channel(d, &mut rng), random_channel(d, &mut rng))
            }
        })
        .collect()
}

/// Criterion 2: the two-sided theorem bounds hold (within 3 SE) for every
/// random pair across the stated dimension ranges.
#[test]
fn criterion_02_theorem_sandwiches() {
    let start = std::time::Instant::now();
    let samples = 2000;
    let mut checked = 0usize;
    let mut failures = Vec::new();

    for d in 2..=8usize {
        let ens = UnitaryEnsemble::haar(d);
        for (t, (a, b)) in state_pairs(d, 50).iter().enumerate() {
            let est = estimate_avg_tv_states(&ens, a, b, samples, t as u64).unwrap();
            let rep =
                bound_check(&est, d_av_states(a, b).unwrap(), ObjectKind::State, d, 0.0).unwrap();
            checked += 1;
            if !rep.passed {
                failures.push(format!("state d={d} t={t}"));
            }
        }
    }
    for d in 2..=6usize {
        let ens = UnitaryEnsemble::haar(d);
        for (t, (a, b)) in povm_pairs(d, 50).iter().enumerate() {
            let est = estimate_avg_tv_povms(&ens, a, b, samples, t as u64).unwrap();
            let rep =
                bound_check(&est, d_av_povms(a, b).unwrap(), ObjectKind::Povm, d, 0.0).unwrap();
            checked += 1;
            if !rep.passed {
                failures.push(format!("povm d={d} t={t}"));
            }
        }
    }
    for d in 2..=4usize {
        let ens = UnitaryEnsemble::haar(d);
        for (t, (a, b)) in channel_pairs(d, 50).iter().enumerate() {
            let est = estimate_avg_tv_channels(&ens, a, b, samples, t as u64).unwrap();
            let rep = bound_check(&est, d_av_channels(a, b).unwrap(), ObjectKind::Channel, d, 0.0)
                .unwrap();
            checked += 1;
            if !rep.passed {
                failures.push(format!("channel d={d} t={t}"));
            }
        }
    }

    let elapsed = start.elapsed();
    report(
        "criterion 2 theorem sandwiches",
        failures.is_empty() && elapsed.as_secs() <= 900,
        &format!(
            "{checked} instances, {} failures {:?}, {:.0}s",
            failures.len(),
            failures,
            elapsed.as_secs_f64()
        ),
    );
}

/// Criterion 3: Monte Carlo Haar moments match the exact symmetric-subspace
/// values within 5 SE.
#[test]
fn criterion_03_moment_identities() {
    let mut worst_z = 0.0f64;
    let mut failures = 0usize;
    for d in [2usize, 3] {
        for k in [2usize, 4] {
            for input in 0..10u64 {
                let seed = 0x303 + 100 * d as u64 + 10 * k as u64 + input;
                let mut rng = SeedSpec::new(seed, u64::MAX).rng();
                let x = random_hermitian(d, &mut rng);
                let exact = kth_moment_exact(&x, k).unwrap();
                let est = estimate_mean(100_000, seed, |stream| {
                    let mut rng = SeedSpec::new(seed, stream).rng();
                    let u = haar_unitary(d, &mut rng);
                    u.mul(&x).mul(&u.dagger())[(0, 0)].re.powi(k as i32)
                });
                let z = (est.mean - exact).abs() / est.std_err;
                worst_z = worst_z.max(z);
                if z > 5.0 {
                    failures += 1;
                }
            }
        }
    }
    report(
        "criterion 3 moment identities",
        failures == 0,
        &format!("40 instances, worst |z| = {worst_z:.2}, {failures} beyond 5 SE"),
    );
}

/// Criterion 4: projector inequalities hold on 1000 random draws and pairs.
#[test]
fn criterion_04_projector_inequalities() {
    let mut violations = 0usize;
    for trial in 0..1000u64 {
        let d = 2 + (trial % 2) as usize;
        let mut rng = SeedSpec::new(0x404, trial).rng();
        let x = random_hermitian(d, &mut rng);
        let y = random_hermitian(d, &mut rng);
        let single = projector_inequality_check(&x, None).unwrap();
        let pair = projector_inequality_check(&x, Some(&y)).unwrap();
        if single.lhs > single.rhs + 1e-10 || pair.lhs > pair.rhs + 1e-10 {
            violations += 1;
        }
    }
    report(
        "criterion 4 projector inequalities",
        violations == 0,
        &format!("1000 draws/pairs, {violations} violations"),
    );
}

/// Criterion 5: structural property suites at 500 instances each, plus the
/// four strict counterexamples.
#[test]
fn criterion_05_property_suites() {
    let mut detail = String::new();
    let mut passed = true;
    for suite in [Suite::Metric, Suite::Subadditivity, Suite::Convexity, Suite::Dpi] {
        let rep = run_property_suite(suite, 500, 0x505).unwrap();
        passed &= rep.violations == 0;
        detail.push_str(&format!("{suite:?}: {}/{} ok; ", rep.lines.len() - rep.violations, rep.lines.len()));
    }
    for case in [
        "dpi_states_counterexample",
        "dpi_povm_counterexample",
        "post_processing_channel_counterexample",
        "pre_processing_channel_counterexample",
    ] {
        let ok = reproduce(case).unwrap().iter().all(|o| o.passed);
        passed &= ok;
        if !ok {
            detail.push_str(&format!("{case} FAILED; "));
        }
    }
    detail.push_str("counterexamples strict");
    report("criterion 5 property suites", passed, &detail);
}

/// Criterion 6: the worst/average ratio bounds hold on the criterion-2
/// object sets, and the three saturating examples hit their exact ratios.
#[test]
fn criterion_06_separation_lemmas() {
    let mut violations = Vec::new();
    let mut checked = 0usize;
    for d in 2..=8usize {
        for (t, (a, b)) in state_pairs(d, 50).iter().enumerate() {
            let rep = separation_report(ObjectPair::States(a, b), 0x606).unwrap();
            checked += 1;
            if rep.d_worst > rep.upper * (1.0 + 1e-6) || rep.d_worst < rep.lower * (1.0 - 1e-6) {
                violations.push(format!("state d={d} t={t}"));
            }
        }
    }
    for d in 2..=6usize {
        for (t, (a, b)) in povm_pairs(d, 50).iter().enumerate() {
            let rep = separation_report(ObjectPair::Povms(a, b), 0x606).unwrap();
            checked += 1;
            if rep.d_worst > rep.upper * (1.0 + 1e-6) || rep.d_worst < rep.lower * (1.0 - 1e-6) {
                violations.push(format!("povm d={d} t={t}"));
            }
        }
    }
    for d in 2..=4usize {
        for (t, (a, b)) in channel_pairs(d, 50).iter().enumerate() {
            let rep = separation_report(ObjectPair::Channels(a, b), 0x606).unwrap();
            checked += 1;
            if rep.d_worst > rep.upper * (1.0 + 1e-6) || rep.d_worst < rep.lower * (1.0 - 1e-6) {
                violations.push(format!("channel d={d} t={t}"));
            }
        }
    }

    // saturating examples: ratios √d, d/√2 and d^{3/2}/√2 at their stated
    // dimensions
    let mut sat_ok = true;
    let by_case = |name: &str| {
        let o = reproduce(name).unwrap();
        (o[0].actual, o[1].actual) // (d_av, d_worst)
    };
    let (av, tr) = by_case("states_separation");
    sat_ok &= (tr / av - 2.0).abs() < 1e-9;
    let (av, op) = by_case("povm_swap");
    sat_ok &= (op / av - 4.0 / 2.0f64.sqrt()).abs() < 1e-9;
    let (av, dia) = by_case("channel_separation_d2");
    sat_ok &= (dia / av - 2.0).abs() < 1e-5; // diamond solved numerically

    report(
        "criterion 6 separation lemmas",
        violations.is_empty() && sat_ok,
        &format!(
            "{checked} sweep instances, {} violations {:?}, saturating ratios ok = {sat_ok}",
            violations.len(),
            violations
        ),
    );
}

/// Criterion 7: diamond solver vs the analytic qubit-unitary value on 100
/// random pairs, brackets always valid.
#[test]
fn criterion_07_diamond_solver() {
    let config = DiamondConfig::default();
    let mut worst_dev = 0.0f64;
    let mut bracket_ok = true;
    for trial in 0..100u64 {
        let mut rng = SeedSpec::new(0x707, trial).rng();
        let u = haar_unitary(2, &mut rng);
        let v = haar_unitary(2, &mut rng);
        let exact = diamond_unitary_exact(&u, &v).unwrap();
        let solve = diamond_distance(
            &ChannelChoi::unitary(&u).unwrap(),
            &ChannelChoi::unitary(&v).unwrap(),
            &config,
        )
        .unwrap();
        worst_dev = worst_dev.max((solve.value - exact).abs());
        bracket_ok &= solve.lower_bound <= solve.value + 1e-8
            && solve.value <= solve.upper_bound + 1e-8;
    }
    report(
        "criterion 7 diamond solver",
        worst_dev < 1e-4 && bracket_ok,
        &format!("100 pairs, worst deviation {worst_dev:.2e}, brackets ok = {bracket_ok}"),
    );
}

/// Criterion 8: majority-vote discrimination error stays below the
/// Hoeffding bound for every shot count.
#[test]
fn criterion_08_discrimination_simulator() {
    let ens = UnitaryEnsemble::haar(2);
    let rho = DensityMatrix::basis_state(2, 0);
    let sigma = DensityMatrix::basis_state(2, 1);
    let mut passed = true;
    let mut detail = String::new();
    for shots in [1usize, 11, 51, 101] {
        let rep = simulate_discrimination(&ens, &rho, &sigma, shots, 2000, 0x808).unwrap();
        let ok = rep.empirical_error <= rep.hoeffding_bound;
        passed &= ok;
        detail.push_str(&format!(
            "s={shots}: err {:.4} ≤ bound {:.4}; ",
            rep.empirical_error, rep.hoeffding_bound
        ));
    }
    report("criterion 8 discrimination simulator", passed, detail.trim_end_matches("; "));
}

/// Criterion 9: estimator and suite runs are bit-identical across 1, 2 and
/// 8 workers.
#[test]
fn criterion_09_worker_reproducibility() {
    let run_in_pool = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let ens = UnitaryEnsemble::haar(3);
            let mut rng = SeedSpec::new(0x909, 0).rng();
            let a = random_density(3, &mut rng);
            let b = random_density(3, &mut rng);
            let est = estimate_avg_tv_states(&ens, &a, &b, 3000, 0x909).unwrap();
            let suite = run_property_suite(Suite::Inequalities, 20, 0x909).unwrap();
            (
                est.mean.to_bits(),
                est.std_err.to_bits(),
                serde_json::to_string(&suite.lines).unwrap(),
            )
        })
    };
    let one = run_in_pool(1);
    let two = run_in_pool(2);
    let eight = run_in_pool(8);
    let passed = one == two && two == eight;
    report(
        "criterion 9 worker reproducibility",
        passed,
        &format!("1/2/8-worker runs identical = {passed}"),
    );
}

/// Criterion 10: brickwork circuits at default depth reproduce the Haar
/// average-TV estimate within 5 combined SE.
#[test]
fn criterion_10_brickwork_sanity() {
    let mut rng = SeedSpec::new(0xA0A, 0).rng();
    let a = random_density(4, &mut rng);
    let b = random_density(4, &mut rng);
    let haar = UnitaryEnsemble::haar(4);
    let brick = UnitaryEnsemble::brickwork(2, None).unwrap();
    let eh = estimate_avg_tv_states(&haar, &a, &b, 30_000, 0xA0A).unwrap();
    let eb = estimate_avg_tv_states(&brick, &a, &b, 30_000, 0xB0B).unwrap();
    let combined = (eh.std_err.powi(2) + eb.std_err.powi(2)).sqrt();
    let dev = (eh.mean - eb.mean).abs();
    report(
        "criterion 10 brickwork sanity",
        dev <= 5.0 * combined,
        &format!(
            "haar {:.5} vs brickwork {:.5}, |Δ| = {:.2e} ≤ 5·SE = {:.2e}",
            eh.mean, eb.mean, dev, 5.0 * combined
        ),
    );
}
