//! Monte Carlo estimation of average total-variation distances between
//! measurement statistics of random circuits, plus the two-sided bound
//! check against the average-case distance.
//!
//! Estimators draw one independent circuit (or circuit pair) per sample,
//! stream-keyed by sample index, then reduce the per-sample values in index
//! order — so the result is bit-identical no matter how many worker threads
//! rayon uses.

use rayon::prelude::*;
use serde::Serialize;

use crate::ensembles::{SeedSpec, UnitaryEnsemble};
use crate::error::{Error, Result};
use crate::objects::{born_distribution, ChannelChoi, DensityMatrix, Povm};

/// Index of the fixed fiducial state |0> used by POVM and channel estimators.
pub const FIDUCIAL_INDEX: usize = 0;

/// Total-variation distance between two outcome distributions.
pub fn tv(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch("distributions differ in length".into()));
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// A Monte Carlo mean with its standard error.
#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub mean: f64,
    pub std_err: f64,
    pub n_samples: usize,
    pub ci95: (f64, f64),
    pub seed: u64,
}

/// Evaluate `f(stream_id)` for streams 0..n in parallel and reduce in index
/// order (Welford). The parallel map only fills an ordered buffer, so the
/// reduction — and hence every reported digit — is worker-count independent.
pub fn estimate_mean(n_samples: usize, master_seed: u64, f: impl Fn(u64) -> f64 + Sync + Send) -> EstimateReport {
    assert!(n_samples >= 2, "need at least two samples for a standard error");
    let values: Vec<f64> = (0..n_samples as u64).into_par_iter().map(f).collect();
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &v) in values.iter().enumerate() {
        let delta = v - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (v - mean);
    }
    let n = n_samples as f64;
    let std_err = (m2 / (n * (n - 1.0))).sqrt();
    EstimateReport {
        mean,
        std_err,
        n_samples,
        ci95: (mean - 1.96 * std_err, mean + 1.96 * std_err),
        seed: master_seed,
    }
}

/// Average TV distance between computational-basis statistics of UρU† and
/// UσU† over the ensemble.
pub fn estimate_avg_tv_states(
    ensemble: &UnitaryEnsemble,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    n_samples: usize,
    master_seed: u64,
) -> Result<EstimateReport> {
    ensemble.validate()?;
    let d = ensemble.dim();
    if rho.dim() != d || sigma.dim() != d {
        return Err(Error::DimensionMismatch("state and ensemble dimensions differ".into()));
    }
    let povm = Povm::computational(d);
    Ok(estimate_mean(n_samples, master_seed, |stream| {
        let u = ensemble.sample(SeedSpec::new(master_seed, stream));
        let p = born_distribution(&povm, &rho.conjugate(&u)).expect("rotated state");
        let q = born_distribution(&povm, &sigma.conjugate(&u)).expect("rotated state");
        tv(&p, &q).expect("equal lengths")
    }))
}

/// Average TV distance between the statistics of two POVMs on the randomly
/// rotated fiducial state V|0><0|V†.
pub fn estimate_avg_tv_povms(
    ensemble: &UnitaryEnsemble,
    m: &Povm,
    n: &Povm,
    n_samples: usize,
    master_seed: u64,
) -> Result<EstimateReport> {
    ensemble.validate()?;
    let d = ensemble.dim();
    if m.dim() != d || n.dim() != d {
        return Err(Error::DimensionMismatch("POVM and ensemble dimensions differ".into()));
    }
    if m.n_outcomes() != n.n_outcomes() {
        return Err(Error::DimensionMismatch("POVMs differ in outcome count".into()));
    }
    let fiducial = DensityMatrix::basis_state(d, FIDUCIAL_INDEX);
    Ok(estimate_mean(n_samples, master_seed, |stream| {
        let v = ensemble.sample(SeedSpec::new(master_seed, stream));
        let state = fiducial.conjugate(&v);
        let p = born_distribution(m, &state).expect("rotated fiducial");
        let q = born_distribution(n, &state).expect("rotated fiducial");
        tv(&p, &q).expect("equal lengths")
    }))
}

/// Average TV distance between computational statistics of U Λ(V|0><0|V†) U†
/// and the same with Γ; V and U are drawn independently per sample.
pub fn estimate_avg_tv_channels(
    ensemble: &UnitaryEnsemble,
    lambda: &ChannelChoi,
    gamma: &ChannelChoi,
    n_samples: usize,
    master_seed: u64,
) -> Result<EstimateReport> {
    ensemble.validate()?;
    let d = ensemble.dim();
    if lambda.dim_in() != d || lambda.dim_out() != d || gamma.dim_in() != d || gamma.dim_out() != d
    {
        return Err(Error::DimensionMismatch("channel and ensemble dimensions differ".into()));
    }
    let povm = Povm::computational(d);
    let fiducial = DensityMatrix::basis_state(d, FIDUCIAL_INDEX);
    Ok(estimate_mean(n_samples, master_seed, |stream| {
        let mut rng = SeedSpec::new(master_seed, stream).rng();
        let v = ensemble.sample_with(&mut rng);
        let u = ensemble.sample_with(&mut rng);
        let input = fiducial.conjugate(&v);
        let p = born_distribution(&povm, &lambda.apply(&input).conjugate(&u))
            .expect("channel output statistics");
        let q = born_distribution(&povm, &gamma.apply(&input).conjugate(&u))
            .expect("channel output statistics");
        tv(&p, &q).expect("equal lengths")
    }))
}

/// Object family a bound check refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectKind {
    State,
    Povm,
    Channel,
}

/// Constants of the two-sided bound E TV ∈ [ℓ·c·d_av, u·C·d_av].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundConstants {
    pub c: f64,
    pub big_c: f64,
    pub lower_relative: f64,
    pub upper_relative: f64,
}

/// Bound constants for approximate 4-designs with relative error δ' ∈ [0, 1/3].
/// δ' = 0 recovers the exact-Haar constants.
pub fn bound_constants(kind: ObjectKind, d: usize, delta_prime: f64) -> Result<BoundConstants> {
    if !(0.0..=1.0 / 3.0).contains(&delta_prime) {
        return Err(Error::DeltaOutOfRange { value: delta_prime });
    }
    if d < 2 {
        return Err(Error::BadParams("bound constants need d >= 2".into()));
    }
    let df = d as f64;
    let d2 = df * df;
    // the channel constants are the squares' analogues of the state/POVM ones
    let ell_sq = (1.0 - delta_prime / d2).powi(3) / (1.0 + delta_prime);
    let u_sq = 1.0 + delta_prime / d2;
    Ok(match kind {
        ObjectKind::State | ObjectKind::Povm => BoundConstants {
            c: 0.31,
            big_c: (df / (df + 1.0)).sqrt(),
            lower_relative: ell_sq.sqrt(),
            upper_relative: u_sq.sqrt(),
        },
        ObjectKind::Channel => BoundConstants {
            c: 0.087,
            big_c: df / (df + 1.0),
            lower_relative: ell_sq,
            upper_relative: u_sq,
        },
    })
}

/// Result of checking a Monte Carlo TV estimate against the two-sided bound.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub kind: ObjectKind,
    pub d: usize,
    pub delta_prime: f64,
    pub d_av: f64,
    pub lower: f64,
    pub upper: f64,
    pub mean: f64,
    pub std_err: f64,
    pub n_samples: usize,
    pub passed: bool,
}

/// Pass iff the 3-standard-error interval around the estimate intersects
/// [ℓ·c·d_av, u·C·d_av].
pub fn bound_check(
    estimate: &EstimateReport,
    d_av: f64,
    kind: ObjectKind,
    d: usize,
    delta_prime: f64,
) -> Result<BoundReport> {
    let k = bound_constants(kind, d, delta_prime)?;
    let lower = k.lower_relative * k.c * d_av;
    let upper = k.upper_relative * k.big_c * d_av;
    let lo = estimate.mean - 3.0 * estimate.std_err;
    let hi = estimate.mean + 3.0 * estimate.std_err;
    Ok(BoundReport {
        kind,
        d,
        delta_prime,
        d_av,
        lower,
        upper,
        mean: estimate.mean,
        std_err: estimate.std_err,
        n_samples: estimate.n_samples,
        passed: hi >= lower && lo <= upper,
    })
}

/// Outcome of the two-state discrimination experiment.
#[derive(Clone, Debug, Serialize)]
pub struct DiscriminationReport {
    pub shots: usize,
    pub trials: usize,
    pub empirical_error: f64,
    pub single_shot_advantage: f64,
    pub hoeffding_bound: f64,
}

/// Simulate discrimination of two states by majority vote over `shots`
/// likelihood-ratio measurements, each on a fresh circuit from the ensemble.
///
/// The Hoeffding bound 2·exp(-c²·s/2) is evaluated at the measured average
/// single-shot TV advantage c.
pub fn simulate_discrimination(
    ensemble: &UnitaryEnsemble,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    shots: usize,
    trials: usize,
    master_seed: u64,
) -> Result<DiscriminationReport> {
    ensemble.validate()?;
    let d = ensemble.dim();
    if rho.dim() != d || sigma.dim() != d {
        return Err(Error::DimensionMismatch("state and ensemble dimensions differ".into()));
    }
    if shots == 0 || trials == 0 {
        return Err(Error::BadParams("need at least one shot and one trial".into()));
    }
    let povm = Povm::computational(d);
    // (error?, summed single-shot TV) per trial
    let results: Vec<(f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            use rand::Rng;
            let mut rng = SeedSpec::new(master_seed, t).rng();
            let hidden_is_rho = rng.random::<f64>() < 0.5;
            let mut votes: i64 = 0;
            let mut tv_sum = 0.0;
            for _ in 0..shots {
                let u = ensemble.sample_with(&mut rng);
                let p = born_distribution(&povm, &rho.conjugate(&u)).expect("statistics");
                let q = born_distribution(&povm, &sigma.conjugate(&u)).expect("statistics");
                tv_sum += tv(&p, &q).expect("equal lengths");
                let dist = if hidden_is_rho { &p } else { &q };
                // draw an outcome from the hidden object's distribution
                let mut x: f64 = rng.random();
                let mut outcome = dist.len() - 1;
                for (i, &w) in dist.iter().enumerate() {
                    if x < w {
                        outcome = i;
                        break;
                    }
                    x -= w;
                }
                if p[outcome] > q[outcome] {
                    votes += 1;
                } else if q[outcome] > p[outcome] {
                    votes -= 1;
                }
            }
            let guess_rho = match votes.cmp(&0) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Less => false,
                std::cmp::Ordering::Equal => rng.random::<f64>() < 0.5,
            };
            let err = if guess_rho == hidden_is_rho { 0.0 } else { 1.0 };
            (err, tv_sum)
        })
        .collect();
    let errors: f64 = results.iter().map(|r| r.0).sum();
    let tv_total: f64 = results.iter().map(|r| r.1).sum();
    let advantage = tv_total / (trials * shots) as f64;
    Ok(DiscriminationReport {
        shots,
        trials,
        empirical_error: errors / trials as f64,
        single_shot_advantage: advantage,
        hoeffding_bound: 2.0 * (-advantage * advantage * shots as f64 / 2.0).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tv_of_point_masses() {
        assert_eq!(tv(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert_eq!(tv(&[0.5, 0.5], &[0.5, 0.5]).unwrap(), 0.0);
    }

    #[test]
    fn estimate_of_constant_has_zero_error() {
        let r = estimate_mean(100, 0, |_| 0.25);
        assert_eq!(r.mean, 0.25);
        assert_eq!(r.std_err, 0.0);
    }

    #[test]
    fn estimate_is_deterministic() {
        let e = UnitaryEnsemble::haar(2);
        let rho = DensityMatrix::basis_state(2, 0);
        let sigma = DensityMatrix::basis_state(2, 1);
        let a = estimate_avg_tv_states(&e, &rho, &sigma, 200, 5).unwrap();
        let b = estimate_avg_tv_states(&e, &rho, &sigma, 200, 5).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_err.to_bits(), b.std_err.to_bits());
    }

    #[test]
    fn bound_constants_reject_bad_delta() {
        assert!(bound_constants(ObjectKind::State, 2, 0.5).is_err());
        let k = bound_constants(ObjectKind::State, 4, 0.0).unwrap();
        assert!((k.big_c - (4.0f64 / 5.0).sqrt()).abs() < 1e-12);
        assert_eq!(k.lower_relative, 1.0);
        assert_eq!(k.upper_relative, 1.0);
    }

    #[test]
    fn channel_constants_are_squares_of_state_scalings() {
        let s = bound_constants(ObjectKind::State, 3, 0.2).unwrap();
        let c = bound_constants(ObjectKind::Channel, 3, 0.2).unwrap();
        assert!((c.lower_relative - s.lower_relative * s.lower_relative).abs() < 1e-12);
        assert!((c.upper_relative - s.upper_relative * s.upper_relative).abs() < 1e-12);
        assert!((c.big_c - 0.75).abs() < 1e-12);
        assert!((c.c - 0.087).abs() < 1e-15);
    }
}
