//! Average-case distances: degree-two polynomial distance measures for
//! states, measurements and channels, the distance-to-uniform shortcuts,
//! and a catalog of closed-form special cases.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::montecarlo::tv;
use crate::objects::{
    born_distribution, ChannelChoi, DensityMatrix, Povm, StochasticMap,
};

/// Average-case distance between states: (1/2)·‖ρ − σ‖_HS.
pub fn d_av_states(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch("states differ in dimension".into()));
    }
    Ok(0.5 * rho.mat().sub(sigma.mat()).frobenius())
}

/// Average-case distance between POVMs:
/// (1/2d)·Σ_i √(‖M_i − N_i‖²_HS + tr(M_i − N_i)²).
pub fn d_av_povms(m: &Povm, n: &Povm) -> Result<f64> {
    if m.dim() != n.dim() {
        return Err(Error::DimensionMismatch("POVMs differ in dimension".into()));
    }
    if m.n_outcomes() != n.n_outcomes() {
        return Err(Error::DimensionMismatch("POVMs differ in outcome count".into()));
    }
    let d = m.dim() as f64;
    let mut total = 0.0;
    for (a, b) in m.effects().iter().zip(n.effects()) {
        let delta = a.sub(b);
        let hs2 = delta.frobenius().powi(2);
        let tr = delta.trace().re;
        total += (hs2 + tr * tr).sqrt();
    }
    Ok(total / (2.0 * d))
}

/// Average-case distance between channels:
/// (1/2)·√(‖J_Λ − J_Γ‖²_HS + ‖(Λ − Γ)(I/d)‖²_HS).
pub fn d_av_channels(lambda: &ChannelChoi, gamma: &ChannelChoi) -> Result<f64> {
    if lambda.dim_in() != gamma.dim_in() || lambda.dim_out() != gamma.dim_out() {
        return Err(Error::DimensionMismatch("channels differ in dimension".into()));
    }
    let choi_term = lambda.choi().sub(gamma.choi()).frobenius().powi(2);
    let d = lambda.dim_in();
    let tau = ComplexMatrix::identity(d).scale_re(1.0 / d as f64);
    let mixed_term = lambda.apply_op(&tau).sub(&gamma.apply_op(&tau)).frobenius().powi(2);
    Ok(0.5 * (choi_term + mixed_term).sqrt())
}

/// Classical average-case distance between two POVMs: the mean TV distance
/// of their outcome statistics over the computational basis states.
pub fn d_av_classical(m: &Povm, n: &Povm) -> Result<f64> {
    if m.dim() != n.dim() {
        return Err(Error::DimensionMismatch("POVMs differ in dimension".into()));
    }
    if m.n_outcomes() != n.n_outcomes() {
        return Err(Error::DimensionMismatch("POVMs differ in outcome count".into()));
    }
    let d = m.dim();
    let mut total = 0.0;
    for k in 0..d {
        let basis = DensityMatrix::basis_state(d, k);
        let p = born_distribution(m, &basis)?;
        let q = born_distribution(n, &basis)?;
        total += tv(&p, &q)?;
    }
    Ok(total / d as f64)
}

/// Object whose distance to the corresponding uniform (maximally mixed /
/// uninformative / fully depolarizing) reference is wanted.
pub enum UniformInput<'a> {
    State(&'a DensityMatrix),
    Povm(&'a Povm),
    Channel(&'a ChannelChoi),
}

/// Agreement tolerance between the closed form and the generic distance.
pub const UNIFORM_CROSS_CHECK_TOL: f64 = 1e-10;

/// Distance to the uniform object via the purity-style closed forms, cross
/// checked against the generic distance:
///
/// * state:   (1/2)·√(tr ρ² − 1/d)
/// * POVM:    (1/2d)·Σ_i √(tr M_i² + (tr M_i − 1)² − 1/d)  (needs n = d)
/// * channel: (1/2)·√(tr J_Λ² + tr Λ(I/d)² − (1/d)(1 + 1/d))
///
/// The POVM branch additionally assumes unit-trace effects (true for every
/// basis-measurement noise model in the catalog); the cross-check turns a
/// violated assumption into [`Error::FormulaMismatch`] instead of a silently
/// wrong number.
pub fn uniform_distance(input: UniformInput<'_>) -> Result<f64> {
    let (formula, generic) = match input {
        UniformInput::State(rho) => {
            let d = rho.dim();
            let formula = 0.5 * (rho.purity() - 1.0 / d as f64).max(0.0).sqrt();
            let generic = d_av_states(rho, &DensityMatrix::maximally_mixed(d))?;
            (formula, generic)
        }
        UniformInput::Povm(m) => {
            let d = m.dim();
            if m.n_outcomes() != d {
                return Err(Error::OutOfValidityRegion(format!(
                    "uniform POVM distance needs n = d outcomes (n = {}, d = {d})",
                    m.n_outcomes()
                )));
            }
            let mut total = 0.0;
            for e in m.effects() {
                let t2 = e.hs_inner(e).re;
                let t1 = e.trace().re;
                total += (t2 + (t1 - 1.0) * (t1 - 1.0) - 1.0 / d as f64).max(0.0).sqrt();
            }
            let formula = total / (2.0 * d as f64);
            let generic = d_av_povms(m, &Povm::trivial(d, d))?;
            (formula, generic)
        }
        UniformInput::Channel(lambda) => {
            let d = lambda.dim_in();
            if lambda.dim_out() != d {
                return Err(Error::DimensionMismatch("channel must be square".into()));
            }
            let df = d as f64;
            let tau = ComplexMatrix::identity(d).scale_re(1.0 / df);
            let out = lambda.apply_op(&tau);
            let j2 = lambda.choi().hs_inner(lambda.choi()).re;
            let o2 = out.hs_inner(&out).re;
            let formula = 0.5 * (j2 + o2 - (1.0 / df) * (1.0 + 1.0 / df)).max(0.0).sqrt();
            let generic = d_av_channels(lambda, &ChannelChoi::max_depolarizing(d))?;
            (formula, generic)
        }
    };
    let deviation = (formula - generic).abs();
    if deviation > UNIFORM_CROSS_CHECK_TOL {
        return Err(Error::FormulaMismatch { deviation });
    }
    Ok(formula)
}

// ---------------------------------------------------------------------------
// Closed-form catalog
// ---------------------------------------------------------------------------

/// A named closed-form evaluation: the main value plus auxiliary quantities
/// (alternate distances, bounds, derived parameters).
#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormResult {
    pub name: String,
    pub value: f64,
    pub companions: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
struct OverlapParams {
    overlap: f64,
}

#[derive(Deserialize)]
struct ProbListParams {
    #[serde(alias = "qs")]
    ps: Vec<f64>,
}

#[derive(Deserialize)]
struct UnitaryPairParams {
    u: ComplexMatrix,
    v: ComplexMatrix,
}

#[derive(Deserialize)]
struct StatePairParams {
    rho: ComplexMatrix,
    sigma: ComplexMatrix,
}

#[derive(Deserialize)]
struct AnglesParams {
    angles: Vec<f64>,
}

#[derive(Deserialize)]
struct PauliProbsParams {
    probs: Vec<[f64; 4]>,
}

#[derive(Deserialize)]
struct AsymBitflipParams {
    p10s: Vec<f64>,
    p01s: Vec<f64>,
}

fn check_probs(ps: &[f64], lo: f64, what: &str) -> Result<()> {
    if ps.is_empty() {
        return Err(Error::BadParams(format!("{what}: need at least one entry")));
    }
    for &p in ps {
        if !(lo..=1.0).contains(&p) {
            return Err(Error::OutOfValidityRegion(format!(
                "{what}: {p} outside [{lo}, 1]"
            )));
        }
    }
    Ok(())
}

fn parse<T: serde::de::DeserializeOwned>(params: &serde_json::Value) -> Result<T> {
    serde_json::from_value(params.clone())
        .map_err(|e| Error::BadParams(format!("parameter parse failure: {e}")))
}

/// The names [`closed_form`] understands.
pub const CLOSED_FORM_NAMES: &[&str] = &[
    "two_pure_states",
    "pauli_eigenstate_uniform",
    "pauli_eigenstate_vs_ideal",
    "bitflip_povm_av",
    "bitflip_povm_op",
    "bitflip_povm_uniform",
    "unitary_channels",
    "state_prep_channels",
    "separable_rotation_bounds",
    "pauli_channel_uniform",
    "pauli_channel_vs_identity",
    "asym_bitflip_symmetrized",
];

/// Evaluate a closed-form special case by name.
///
/// Every entry validates its parameters against the formula's validity
/// region and returns the main distance plus companion quantities.
pub fn closed_form(name: &str, params: &serde_json::Value) -> Result<ClosedFormResult> {
    let mut companions = BTreeMap::new();
    let value = match name {
        // d_av = √((1 − t)/2), trace distance √(1 − t), overlap t = tr(ψφ)
        "two_pure_states" => {
            let p: OverlapParams = parse(params)?;
            if !(0.0..=1.0).contains(&p.overlap) {
                return Err(Error::OutOfValidityRegion(format!(
                    "overlap {} outside [0, 1]",
                    p.overlap
                )));
            }
            companions.insert("trace_distance".into(), (1.0 - p.overlap).sqrt());
            ((1.0 - p.overlap) / 2.0).sqrt()
        }
        // local-dephasing-noise eigenstate vs the maximally mixed state;
        // requires per-qubit fidelity q ≥ 1/2
        "pauli_eigenstate_uniform" => {
            let p: ProbListParams = parse(params)?;
            check_probs(&p.ps, 0.5, "qs")?;
            let d = (1u64 << p.ps.len()) as f64;
            let prod: f64 = p.ps.iter().map(|&q| 1.0 - 2.0 * q * (1.0 - q)).product();
            companions.insert("dim".into(), d);
            0.5 * (prod - 1.0 / d).max(0.0).sqrt()
        }
        // noisy eigenstate vs the ideal (noiseless) eigenstate
        "pauli_eigenstate_vs_ideal" => {
            let p: ProbListParams = parse(params)?;
            check_probs(&p.ps, 0.5, "qs")?;
            let prod_fid: f64 = p.ps.iter().product();
            let prod: f64 = p.ps.iter().map(|&q| 1.0 - 2.0 * q * (1.0 - q)).product();
            0.5 * (1.0 - 2.0 * prod_fid + prod).max(0.0).sqrt()
        }
        // tensor-product bitflip noise on the computational measurement
        "bitflip_povm_av" => {
            let p: ProbListParams = parse(params)?;
            check_probs(&p.ps, 0.0, "ps")?;
            let keep: f64 = p.ps.iter().map(|&q| 1.0 - q).product();
            let prod: f64 = p.ps.iter().map(|&q| 1.0 - 2.0 * q * (1.0 - q)).product();
            companions.insert("operational_distance".into(), 1.0 - keep);
            0.5 * (1.0 - 2.0 * keep + prod).max(0.0).sqrt()
        }
        "bitflip_povm_op" => {
            let p: ProbListParams = parse(params)?;
            check_probs(&p.ps, 0.0, "ps")?;
            let keep: f64 = p.ps.iter().map(|&q| 1.0 - q).product();
            1.0 - keep
        }
        "bitflip_povm_uniform" => {
            let p: ProbListParams = parse(params)?;
            check_probs(&p.ps, 0.0, "ps")?;
            let d = (1u64 << p.ps.len()) as f64;
            let prod: f64 = p.ps.iter().map(|&q| 1.0 - 2.0 * q * (1.0 - q)).product();
            0.5 * (prod - 1.0 / d).max(0.0).sqrt()
        }
        // d_av between unitary channels: √(½(1 − |tr U†V|²/d²))
        "unitary_channels" => {
            let p: UnitaryPairParams = parse(params)?;
            let cu = ChannelChoi::unitary(&p.u)?;
            let cv = ChannelChoi::unitary(&p.v)?;
            if p.u.rows() != p.v.rows() {
                return Err(Error::DimensionMismatch("unitaries differ in dimension".into()));
            }
            let d = p.u.rows() as f64;
            let t = p.u.dagger().mul(&p.v).trace().norm();
            let formula = (0.5 * (1.0 - t * t / (d * d))).max(0.0).sqrt();
            let generic = d_av_channels(&cu, &cv)?;
            let deviation = (formula - generic).abs();
            if deviation > UNIFORM_CROSS_CHECK_TOL {
                return Err(Error::FormulaMismatch { deviation });
            }
            companions.insert("overlap".into(), t / d);
            formula
        }
        // constant channels preparing ρ and σ: √(1 + 1/d)·(1/2)‖ρ − σ‖_HS
        "state_prep_channels" => {
            let p: StatePairParams = parse(params)?;
            let rho = DensityMatrix::new(&p.rho)?;
            let sigma = DensityMatrix::new(&p.sigma)?;
            if rho.dim() != sigma.dim() {
                return Err(Error::DimensionMismatch("states differ in dimension".into()));
            }
            let d = rho.dim() as f64;
            let hs = p.rho.hermitize().sub(&p.sigma.hermitize()).frobenius();
            let formula = (1.0 + 1.0 / d).sqrt() * 0.5 * hs;
            let generic =
                d_av_channels(&ChannelChoi::state_prep(&rho), &ChannelChoi::state_prep(&sigma))?;
            let deviation = (formula - generic).abs();
            if deviation > UNIFORM_CROSS_CHECK_TOL {
                return Err(Error::FormulaMismatch { deviation });
            }
            formula
        }
        // product of small single-qubit z-rotations vs identity; valid when
        // the angles are positive and sum to at most π/2
        "separable_rotation_bounds" => {
            let p: AnglesParams = parse(params)?;
            if p.angles.is_empty() {
                return Err(Error::BadParams("need at least one angle".into()));
            }
            let total: f64 = p.angles.iter().sum();
            if p.angles.iter().any(|&a| a <= 0.0) || total > std::f64::consts::FRAC_PI_2 {
                return Err(Error::OutOfValidityRegion(format!(
                    "angles must be positive with sum ≤ π/2 (sum = {total})"
                )));
            }
            let n = p.angles.len() as f64;
            let phi_max = p.angles.iter().cloned().fold(0.0, f64::max);
            let phi_min = p.angles.iter().cloned().fold(f64::INFINITY, f64::min);
            companions.insert("av_upper".into(), n.sqrt() * phi_max / 8.0f64.sqrt());
            companions.insert("doubled_diamond_lower".into(), n * phi_min / 2.0f64.sqrt());
            companions.insert("diamond_exact".into(), (total / 2.0).sin().abs());
            let prod: f64 = p.angles.iter().map(|&a| (a / 2.0).cos().powi(2)).product();
            (0.5 * (1.0 - prod)).sqrt()
        }
        // tensor-product Pauli channel vs the fully depolarizing channel
        "pauli_channel_uniform" => {
            let p: PauliProbsParams = parse(params)?;
            let d = (1u64 << p.probs.len()) as f64;
            let prod = pauli_norm_product(&p.probs)?;
            0.5 * (prod - 1.0 / (d * d)).max(0.0).sqrt()
        }
        // tensor-product Pauli channel vs the identity channel
        "pauli_channel_vs_identity" => {
            let p: PauliProbsParams = parse(params)?;
            let prod = pauli_norm_product(&p.probs)?;
            let ident: f64 = p.probs.iter().map(|q| q[0]).product();
            0.5 * (1.0 + prod - 2.0 * ident).max(0.0).sqrt()
        }
        // asymmetric readout noise, symmetrized per Lemma-style averaging:
        // value is the distance of the symmetrized noise model to the ideal
        // measurement, a lower bound on the asymmetric one's
        "asym_bitflip_symmetrized" => {
            let p: AsymBitflipParams = parse(params)?;
            if p.p10s.len() != p.p01s.len() || p.p10s.is_empty() {
                return Err(Error::BadParams("p10s and p01s must have equal nonzero length".into()));
            }
            check_probs(&p.p10s, 0.0, "p10s")?;
            check_probs(&p.p01s, 0.0, "p01s")?;
            let q_av: Vec<f64> = p
                .p10s
                .iter()
                .zip(&p.p01s)
                .map(|(&a, &b)| (a + b) / 2.0)
                .collect();
            for (i, q) in q_av.iter().enumerate() {
                companions.insert(format!("q_av_{i}"), *q);
            }
            // companion: the asymmetric model's distance, computed generically
            let mut t_asym = StochasticMap::asymmetric_bitflip(p.p10s[0], p.p01s[0])?;
            for i in 1..p.p10s.len() {
                t_asym = t_asym.kron(&StochasticMap::asymmetric_bitflip(p.p10s[i], p.p01s[i])?);
            }
            let ideal = Povm::computational(t_asym.cols());
            let noisy = Povm::stochastic_of_computational(&t_asym)?;
            companions.insert("asymmetric_value".into(), d_av_povms(&noisy, &ideal)?);
            let keep: f64 = q_av.iter().map(|&q| 1.0 - q).product();
            let prod: f64 = q_av.iter().map(|&q| 1.0 - 2.0 * q * (1.0 - q)).product();
            0.5 * (1.0 - 2.0 * keep + prod).max(0.0).sqrt()
        }
        other => return Err(Error::UnknownCase(other.into())),
    };
    Ok(ClosedFormResult { name: name.into(), value, companions })
}

fn pauli_norm_product(probs: &[[f64; 4]]) -> Result<f64> {
    if probs.is_empty() {
        return Err(Error::BadParams("need at least one qubit".into()));
    }
    let mut prod = 1.0;
    for q in probs {
        let total: f64 = q.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { total });
        }
        for &v in q {
            if v < 0.0 {
                return Err(Error::NegativeProbability { value: v });
            }
        }
        prod *= q.iter().map(|&v| v * v).sum::<f64>();
    }
    Ok(prod)
}
