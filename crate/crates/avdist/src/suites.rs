//! Reproduction registry and property sweeps.
//!
//! The registry pins down known closed-form values and strict
//! counterexamples; the suites draw randomized instances and check the
//! structural properties (metric axioms, subadditivity, convexity, data
//! processing, projector inequalities, worst/average sandwiches) with a
//! small numerical slack.

use serde::Serialize;

use crate::avg::{
    closed_form, d_av_channels, d_av_classical, d_av_povms, d_av_states, uniform_distance,
    UniformInput,
};
use crate::ensembles::{
    haar_unitary, random_channel, random_density, random_mixed_unitary, random_povm, SeedSpec,
};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::moments::projector_inequality_check;
use crate::montecarlo::ObjectKind;
use crate::objects::{ChannelChoi, DensityMatrix, Povm, StochasticMap};
use crate::worst::{operational_distance, separation_report, trace_distance, ObjectPair};

/// Default agreement tolerance for reproduced equalities.
pub const REPRODUCE_TOL: f64 = 1e-9;
/// Minimum margin for reproduced strict inequalities.
pub const STRICT_MARGIN: f64 = 1e-6;

/// One scalar check of a reproduction case.
#[derive(Clone, Debug, Serialize)]
pub struct CaseOutcome {
    pub case: String,
    pub quantity: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CaseOutcome {
    fn equality(case: &str, quantity: &str, expected: f64, actual: f64) -> Self {
        CaseOutcome {
            case: case.into(),
            quantity: quantity.into(),
            expected,
            actual,
            tolerance: REPRODUCE_TOL,
            passed: (expected - actual).abs() <= REPRODUCE_TOL,
        }
    }

    /// Strict inequality `bigger > smaller`; `actual` records the margin.
    fn strict(case: &str, quantity: &str, bigger: f64, smaller: f64) -> Self {
        let margin = bigger - smaller;
        CaseOutcome {
            case: case.into(),
            quantity: quantity.into(),
            expected: STRICT_MARGIN,
            actual: margin,
            tolerance: STRICT_MARGIN,
            passed: margin > STRICT_MARGIN,
        }
    }
}

/// Names of all registered reproduction cases.
pub const REPRODUCTION_CASES: &[&str] = &[
    "states_separation",
    "povm_swap",
    "channel_separation_d2",
    "unitary_channel_formula",
    "pure_state_formulas",
    "uniform_closed_forms",
    "noisy_eigenstate_formulas",
    "bitflip_readout_formulas",
    "pauli_channel_formulas",
    "pauli_noise_in_circuit",
    "classical_noise_distance",
    "rotation_channel_bounds",
    "dpi_states_counterexample",
    "dpi_povm_counterexample",
    "post_processing_channel_counterexample",
    "pre_processing_channel_counterexample",
];

/// Run one reproduction case by name.
pub fn reproduce(name: &str) -> Result<Vec<CaseOutcome>> {
    match name {
        "states_separation" => states_separation(),
        "povm_swap" => povm_swap(),
        "channel_separation_d2" => channel_separation_d2(),
        "unitary_channel_formula" => unitary_channel_formula(),
        "pure_state_formulas" => pure_state_formulas(),
        "uniform_closed_forms" => uniform_closed_forms(),
        "noisy_eigenstate_formulas" => noisy_eigenstate_formulas(),
        "bitflip_readout_formulas" => bitflip_readout_formulas(),
        "pauli_channel_formulas" => pauli_channel_formulas(),
        "pauli_noise_in_circuit" => pauli_noise_in_circuit(),
        "classical_noise_distance" => classical_noise_distance(),
        "rotation_channel_bounds" => rotation_channel_bounds(),
        "dpi_states_counterexample" => dpi_states_counterexample(),
        "dpi_povm_counterexample" => dpi_povm_counterexample(),
        "post_processing_channel_counterexample" => post_processing_channel_counterexample(),
        "pre_processing_channel_counterexample" => pre_processing_channel_counterexample(),
        other => Err(Error::UnknownCase(other.into())),
    }
}

/// Run every registered case.
pub fn reproduce_all() -> Result<Vec<CaseOutcome>> {
    let mut out = Vec::new();
    for name in REPRODUCTION_CASES {
        out.extend(reproduce(name)?);
    }
    Ok(out)
}

// --- individual cases -------------------------------------------------------

/// Mixed states on orthogonal two-dimensional supports in d = 4: the
/// trace/average ratio saturates √d.
fn states_separation() -> Result<Vec<CaseOutcome>> {
    let mut rho = ComplexMatrix::zeros(4, 4);
    rho[(0, 0)] = C64::new(0.5, 0.0);
    rho[(1, 1)] = C64::new(0.5, 0.0);
    let mut sigma = ComplexMatrix::zeros(4, 4);
    sigma[(2, 2)] = C64::new(0.5, 0.0);
    sigma[(3, 3)] = C64::new(0.5, 0.0);
    let rho = DensityMatrix::new(&rho)?;
    let sigma = DensityMatrix::new(&sigma)?;
    Ok(vec![
        CaseOutcome::equality("states_separation", "d_av", 0.5, d_av_states(&rho, &sigma)?),
        CaseOutcome::equality(
            "states_separation",
            "trace_distance",
            1.0,
            trace_distance(&rho, &sigma)?,
        ),
    ])
}

/// Computational vs label-swapped readout in d = 4: d_av = √2/4 while the
/// operational distance is maximal.
fn povm_swap() -> Result<Vec<CaseOutcome>> {
    let m = Povm::computational(4);
    let n = Povm::swapped_computational(4);
    Ok(vec![
        CaseOutcome::equality(
            "povm_swap",
            "d_av",
            2.0f64.sqrt() / 4.0,
            d_av_povms(&m, &n)?,
        ),
        CaseOutcome::equality(
            "povm_swap",
            "operational_distance",
            1.0,
            operational_distance(&m, &n)?,
        ),
    ])
}

/// Depolarizing channel vs its rank-deficient Choi perturbation in d = 2:
/// d_av = √2/(2·d^{3/2}) = 1/4 while the diamond distance is 1/2.
fn channel_separation_d2() -> Result<Vec<CaseOutcome>> {
    let z = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let dep = ChannelChoi::max_depolarizing(2);
    let pert = ChannelChoi::depolarizing_perturbation(2, &z, None)?;
    let solve =
        crate::worst::diamond_distance(&dep, &pert, &crate::worst::DiamondConfig::default())?;
    let mut out = vec![
        CaseOutcome::equality("channel_separation_d2", "d_av", 0.25, d_av_channels(&dep, &pert)?),
        CaseOutcome {
            case: "channel_separation_d2".into(),
            quantity: "diamond".into(),
            expected: 0.5,
            actual: solve.value,
            tolerance: 1e-6,
            passed: (solve.value - 0.5).abs() <= 1e-6,
        },
    ];
    out.push(CaseOutcome {
        case: "channel_separation_d2".into(),
        quantity: "diamond_bracket".into(),
        expected: 0.0,
        actual: (solve.value - solve.lower_bound.min(solve.value))
            + (solve.value.max(solve.upper_bound) - solve.upper_bound),
        tolerance: 1e-8,
        passed: solve.lower_bound <= solve.value + 1e-8 && solve.value <= solve.upper_bound + 1e-8,
    });
    Ok(out)
}

/// d_av between random unitary channels matches √(½(1 − |tr U†V|²/d²)).
fn unitary_channel_formula() -> Result<Vec<CaseOutcome>> {
    let mut out = Vec::new();
    let mut worst = 0.0f64;
    for trial in 0..100u64 {
        let d = 2 + (trial % 3) as usize;
        let mut rng = SeedSpec::new(2024, trial).rng();
        let u = haar_unitary(d, &mut rng);
        let v = haar_unitary(d, &mut rng);
        let generic = d_av_channels(&ChannelChoi::unitary(&u)?, &ChannelChoi::unitary(&v)?)?;
        let t = u.dagger().mul(&v).trace().norm();
        let formula = (0.5 * (1.0 - t * t / (d * d) as f64)).max(0.0).sqrt();
        worst = worst.max((generic - formula).abs());
    }
    out.push(CaseOutcome::equality("unitary_channel_formula", "max_deviation_100_pairs", 0.0, worst));
    Ok(out)
}

/// Two pure states with squared overlap t: d_av = √((1−t)/2) and
/// d_tr = √(1−t), against explicitly constructed pairs.
fn pure_state_formulas() -> Result<Vec<CaseOutcome>> {
    let mut out = Vec::new();
    for (i, theta) in [0.0f64, 0.4, 1.1, std::f64::consts::FRAC_PI_2].iter().enumerate() {
        let a = DensityMatrix::basis_state(3, 0);
        let b = DensityMatrix::pure(&[
            C64::new(theta.cos(), 0.0),
            C64::new(theta.sin(), 0.0),
            C64::new(0.0, 0.0),
        ]);
        let r = closed_form(
            "two_pure_states",
            &serde_json::json!({ "overlap": theta.cos().powi(2) }),
        )?;
        out.push(CaseOutcome::equality(
            "pure_state_formulas",
            &format!("d_av_{i}"),
            d_av_states(&a, &b)?,
            r.value,
        ));
        out.push(CaseOutcome::equality(
            "pure_state_formulas",
            &format!("trace_distance_{i}"),
            trace_distance(&a, &b)?,
            r.companions["trace_distance"],
        ));
    }
    Ok(out)
}

/// The distance-to-uniform closed forms agree with the generic distances
/// (the check is built into `uniform_distance`; failures surface as errors).
fn uniform_closed_forms() -> Result<Vec<CaseOutcome>> {
    let mut out = Vec::new();
    let mut rng = SeedSpec::new(7, 0).rng();
    let rho = random_density(5, &mut rng);
    out.push(CaseOutcome::equality(
        "uniform_closed_forms",
        "state",
        0.5 * (rho.purity() - 0.2f64).sqrt(),
        uniform_distance(UniformInput::State(&rho))?,
    ));
    let t = StochasticMap::bitflip(0.08)?.kron(&StochasticMap::bitflip(0.15)?);
    let povm = Povm::stochastic_of_computational(&t)?;
    let povm_value = uniform_distance(UniformInput::Povm(&povm))?;
    out.push(CaseOutcome::equality(
        "uniform_closed_forms",
        "povm",
        d_av_povms(&povm, &Povm::trivial(4, 4))?,
        povm_value,
    ));
    let channel = ChannelChoi::pauli_product(&[[0.85, 0.05, 0.05, 0.05], [0.9, 0.0, 0.0, 0.1]])?;
    let ch_value = uniform_distance(UniformInput::Channel(&channel))?;
    out.push(CaseOutcome::equality(
        "uniform_closed_forms",
        "channel",
        d_av_channels(&channel, &ChannelChoi::max_depolarizing(4))?,
        ch_value,
    ));
    Ok(out)
}

/// Tensor products of classically dephased qubit eigenstates: distance to
/// the maximally mixed state and to the ideal eigenstate.
fn noisy_eigenstate_formulas() -> Result<Vec<CaseOutcome>> {
    let qs = [0.95, 0.9, 0.8];
    let mut mat = ComplexMatrix::identity(1);
    for &q in &qs {
        mat = mat.kron(&ComplexMatrix::from_real(2, 2, &[q, 0.0, 0.0, 1.0 - q]));
    }
    let rho = DensityMatrix::new(&mat)?;
    let ideal = DensityMatrix::basis_state(8, 0);
    let to_uniform = closed_form(
        "pauli_eigenstate_uniform",
        &serde_json::json!({ "qs": qs }),
    )?;
    let to_ideal = closed_form(
        "pauli_eigenstate_vs_ideal",
        &serde_json::json!({ "qs": qs }),
    )?;
    Ok(vec![
        CaseOutcome::equality(
            "noisy_eigenstate_formulas",
            "to_uniform",
            uniform_distance(UniformInput::State(&rho))?,
            to_uniform.value,
        ),
        CaseOutcome::equality(
            "noisy_eigenstate_formulas",
            "to_ideal",
            d_av_states(&rho, &ideal)?,
            to_ideal.value,
        ),
    ])
}

/// Tensor-product bitflip readout noise: all three closed forms against the
/// generic distances.
fn bitflip_readout_formulas() -> Result<Vec<CaseOutcome>> {
    let ps = [0.1, 0.05, 0.2];
    let mut t = StochasticMap::identity(1);
    for &p in &ps {
        t = t.kron(&StochasticMap::bitflip(p)?);
    }
    let noisy = Povm::stochastic_of_computational(&t)?;
    let ideal = Povm::computational(8);
    let params = serde_json::json!({ "ps": ps });
    let av = closed_form("bitflip_povm_av", &params)?;
    let op = closed_form("bitflip_povm_op", &params)?;
    let uni = closed_form("bitflip_povm_uniform", &params)?;
    Ok(vec![
        CaseOutcome::equality(
            "bitflip_readout_formulas",
            "d_av",
            d_av_povms(&noisy, &ideal)?,
            av.value,
        ),
        CaseOutcome::equality(
            "bitflip_readout_formulas",
            "operational",
            operational_distance(&noisy, &ideal)?,
            op.value,
        ),
        CaseOutcome::equality(
            "bitflip_readout_formulas",
            "to_uniform",
            uniform_distance(UniformInput::Povm(&noisy))?,
            uni.value,
        ),
    ])
}

/// Tensor-product Pauli channels: closed forms vs generic Choi distances.
fn pauli_channel_formulas() -> Result<Vec<CaseOutcome>> {
    let probs = [[0.8, 0.1, 0.04, 0.06], [0.85, 0.0, 0.05, 0.1]];
    let channel = ChannelChoi::pauli_product(&probs)?;
    let params = serde_json::json!({ "probs": probs });
    let uni = closed_form("pauli_channel_uniform", &params)?;
    let vs_id = closed_form("pauli_channel_vs_identity", &params)?;
    let identity = ChannelChoi::unitary(&ComplexMatrix::identity(4))?;
    Ok(vec![
        CaseOutcome::equality(
            "pauli_channel_formulas",
            "to_uniform",
            d_av_channels(&channel, &ChannelChoi::max_depolarizing(4))?,
            uni.value,
        ),
        CaseOutcome::equality(
            "pauli_channel_formulas",
            "vs_identity",
            d_av_channels(&channel, &identity)?,
            vs_id.value,
        ),
    ])
}

/// Pauli noise inserted between two halves of an ideal circuit: the
/// distance to the noiseless circuit equals the noise's distance to the
/// identity, independent of the surrounding unitaries.
fn pauli_noise_in_circuit() -> Result<Vec<CaseOutcome>> {
    let probs = [[0.9, 0.02, 0.03, 0.05], [0.8, 0.1, 0.05, 0.05]];
    let noise = ChannelChoi::pauli_product(&probs)?;
    let vs_id = closed_form("pauli_channel_vs_identity", &serde_json::json!({ "probs": probs }))?;
    let mut rng = SeedSpec::new(31, 0).rng();
    let ua = ChannelChoi::unitary(&haar_unitary(4, &mut rng))?;
    let ub = ChannelChoi::unitary(&haar_unitary(4, &mut rng))?;
    let noisy_circuit = ub.compose(&noise)?.compose(&ua)?;
    let ideal_circuit = ub.compose(&ua)?;
    Ok(vec![CaseOutcome::equality(
        "pauli_noise_in_circuit",
        "noisy_vs_ideal_circuit",
        vs_id.value,
        d_av_channels(&noisy_circuit, &ideal_circuit)?,
    )])
}

/// Classical readout noise on the computational measurement: the averaged
/// TV distance equals 1 − tr(T)/d.
fn classical_noise_distance() -> Result<Vec<CaseOutcome>> {
    let t = StochasticMap::bitflip(0.07)?
        .kron(&StochasticMap::bitflip(0.12)?)
        .kron(&StochasticMap::asymmetric_bitflip(0.02, 0.3)?);
    let noisy = Povm::stochastic_of_computational(&t)?;
    let ideal = Povm::computational(8);
    let mut out = vec![CaseOutcome::equality(
        "classical_noise_distance",
        "one_minus_trace",
        1.0 - t.trace() / 8.0,
        d_av_classical(&noisy, &ideal)?,
    )];
    // the quantum average-case distance dominates half the classical one
    let lhs = d_av_povms(&noisy, &ideal)?;
    let rhs = 0.5 * d_av_classical(&noisy.diagonal_part(), &ideal)?;
    out.push(CaseOutcome {
        case: "classical_noise_distance".into(),
        quantity: "diagonal_lower_bound".into(),
        expected: rhs,
        actual: lhs,
        tolerance: 1e-12,
        passed: lhs >= rhs - 1e-12,
    });
    Ok(out)
}

/// Small separable z-rotations: the exact d_av, its √N·φ_max/√8 upper
/// bound, and the diamond value sin(Σφ/2) with its CB-norm lower bound.
fn rotation_channel_bounds() -> Result<Vec<CaseOutcome>> {
    let angles = [0.12f64, 0.2, 0.15];
    let r = closed_form("separable_rotation_bounds", &serde_json::json!({ "angles": angles }))?;
    // build the channel explicitly as a product of phase gates
    let mut v = ComplexMatrix::identity(1);
    for &a in &angles {
        v = v.kron(&ComplexMatrix::diag(&[C64::new(1.0, 0.0), C64::from_polar(1.0, a)]));
    }
    let ident = ChannelChoi::unitary(&ComplexMatrix::identity(8))?;
    let rot = ChannelChoi::unitary(&v)?;
    let d_av = d_av_channels(&ident, &rot)?;
    let solve = crate::worst::diamond_distance(&ident, &rot, &crate::worst::DiamondConfig::default())?;
    let mut out = vec![
        CaseOutcome::equality("rotation_channel_bounds", "d_av", r.value, d_av),
        CaseOutcome {
            case: "rotation_channel_bounds".into(),
            quantity: "diamond".into(),
            expected: r.companions["diamond_exact"],
            actual: solve.value,
            tolerance: 1e-6,
            passed: (solve.value - r.companions["diamond_exact"]).abs() <= 1e-6,
        },
    ];
    out.push(CaseOutcome {
        case: "rotation_channel_bounds".into(),
        quantity: "av_upper_bound".into(),
        expected: r.companions["av_upper"],
        actual: d_av,
        tolerance: 1e-12,
        passed: d_av <= r.companions["av_upper"] + 1e-12,
    });
    out.push(CaseOutcome {
        case: "rotation_channel_bounds".into(),
        quantity: "doubled_diamond_lower_bound".into(),
        expected: r.companions["doubled_diamond_lower"],
        actual: solve.doubled_norm,
        tolerance: 1e-6,
        passed: solve.doubled_norm >= r.companions["doubled_diamond_lower"] - 1e-6,
    });
    Ok(out)
}

/// A (non-unital) measure-and-prepare channel that increases the state
/// distance: d_av goes from 1/2 to 1/√2.
fn dpi_states_counterexample() -> Result<Vec<CaseOutcome>> {
    let mut rho = ComplexMatrix::zeros(4, 4);
    rho[(0, 0)] = C64::new(0.5, 0.0);
    rho[(1, 1)] = C64::new(0.5, 0.0);
    let mut sigma = ComplexMatrix::zeros(4, 4);
    sigma[(2, 2)] = C64::new(0.5, 0.0);
    sigma[(3, 3)] = C64::new(0.5, 0.0);
    let rho = DensityMatrix::new(&rho)?;
    let sigma = DensityMatrix::new(&sigma)?;
    // measure {span(0,1), span(2,3)} and prepare |0> or |1>
    let kraus = vec![
        ComplexMatrix::ketbra(4, 0, 0),
        ComplexMatrix::ketbra(4, 0, 1),
        ComplexMatrix::ketbra(4, 1, 2),
        ComplexMatrix::ketbra(4, 1, 3),
    ];
    let channel = ChannelChoi::from_kraus(&kraus)?;
    let before = d_av_states(&rho, &sigma)?;
    let after = d_av_states(&channel.apply(&rho), &channel.apply(&sigma))?;
    Ok(vec![
        CaseOutcome::equality("dpi_states_counterexample", "after", 0.5f64.sqrt(), after),
        CaseOutcome::strict("dpi_states_counterexample", "after_gt_before", after, before),
    ])
}

/// Pre-processing by a constant channel can increase the POVM distance:
/// √(1 + 1/d) > √2/d for the swapped readout in d = 4.
fn dpi_povm_counterexample() -> Result<Vec<CaseOutcome>> {
    let d = 4;
    let m = Povm::computational(d);
    let n = Povm::swapped_computational(d);
    let prep = ChannelChoi::state_prep(&DensityMatrix::basis_state(d, 0));
    let before = d_av_povms(&m, &n)?;
    let after = d_av_povms(&m.pre_process(&prep)?, &n.pre_process(&prep)?)?;
    Ok(vec![
        CaseOutcome::equality("dpi_povm_counterexample", "before", 2.0f64.sqrt() / d as f64, before),
        CaseOutcome::equality(
            "dpi_povm_counterexample",
            "after",
            (1.0 + 1.0 / d as f64).sqrt(),
            after,
        ),
        CaseOutcome::strict("dpi_povm_counterexample", "after_gt_before", after, before),
    ])
}

/// Post-composition with a non-unital channel can increase the channel
/// distance: √(½(1 + 1/d)) > √((1/d)(1 + 1/d)) for d = 4.
fn post_processing_channel_counterexample() -> Result<Vec<CaseOutcome>> {
    let half_mixed = DensityMatrix::basis_state(2, 0).tensor(&DensityMatrix::maximally_mixed(2));
    let half_mixed_1 = DensityMatrix::basis_state(2, 1).tensor(&DensityMatrix::maximally_mixed(2));
    let lambda = ChannelChoi::state_prep(&half_mixed);
    let gamma = ChannelChoi::state_prep(&half_mixed_1);
    let before = d_av_channels(&lambda, &gamma)?;
    // the conditional re-preparation maps the two outputs to orthogonal
    // pure states, so the composites are pure-state preparations
    let psi = ChannelChoi::state_prep(&DensityMatrix::basis_state(4, 0));
    let psi_perp = ChannelChoi::state_prep(&DensityMatrix::basis_state(4, 1));
    let after = d_av_channels(&psi, &psi_perp)?;
    let d: f64 = 4.0;
    Ok(vec![
        CaseOutcome::equality(
            "post_processing_channel_counterexample",
            "before",
            ((1.0 / d) * (1.0 + 1.0 / d)).sqrt(),
            before,
        ),
        CaseOutcome::equality(
            "post_processing_channel_counterexample",
            "after",
            (0.5 * (1.0 + 1.0 / d)).sqrt(),
            after,
        ),
        CaseOutcome::strict(
            "post_processing_channel_counterexample",
            "after_gt_before",
            after,
            before,
        ),
    ])
}

/// Pre-composition with a constant channel can increase the channel
/// distance: preparing the optimal discriminator state of U†V beats the
/// Haar-averaged input.
fn pre_processing_channel_counterexample() -> Result<Vec<CaseOutcome>> {
    let d = 3;
    let u = ComplexMatrix::identity(d);
    let v = ComplexMatrix::from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0]);
    let cu = ChannelChoi::unitary(&u)?;
    let cv = ChannelChoi::unitary(&v)?;
    let before = d_av_channels(&cu, &cv)?;
    // ψ = (|1> + |2>)/√2 satisfies <ψ|U†V|ψ> = 0
    let amp = C64::new(1.0 / 2.0f64.sqrt(), 0.0);
    let psi = DensityMatrix::pure(&[C64::new(0.0, 0.0), amp, amp]);
    let prep = ChannelChoi::state_prep(&psi);
    let after = d_av_channels(&cu.compose(&prep)?, &cv.compose(&prep)?)?;
    let df = d as f64;
    Ok(vec![
        CaseOutcome::equality(
            "pre_processing_channel_counterexample",
            "before",
            (2.0 * (df - 1.0)).sqrt() / df,
            before,
        ),
        CaseOutcome::equality(
            "pre_processing_channel_counterexample",
            "after",
            (0.5 * (2.0 / df + 2.0)).sqrt() / 2.0f64.sqrt(),
            after,
        ),
        CaseOutcome::strict(
            "pre_processing_channel_counterexample",
            "after_gt_before",
            after,
            before,
        ),
    ])
}

// ---------------------------------------------------------------------------
// Property suites
// ---------------------------------------------------------------------------

/// Structural slack for randomized property checks.
pub const PROPERTY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Metric,
    Subadditivity,
    Convexity,
    Dpi,
    Counterexamples,
    Inequalities,
    Separations,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "metric" => Suite::Metric,
            "subadditivity" => Suite::Subadditivity,
            "convexity" => Suite::Convexity,
            "dpi" => Suite::Dpi,
            "counterexamples" => Suite::Counterexamples,
            "inequalities" => Suite::Inequalities,
            "separations" => Suite::Separations,
            other => return Err(Error::UnknownCase(other.into())),
        })
    }
}

pub const ALL_SUITES: &[Suite] = &[
    Suite::Metric,
    Suite::Subadditivity,
    Suite::Convexity,
    Suite::Dpi,
    Suite::Counterexamples,
    Suite::Inequalities,
    Suite::Separations,
];

/// One randomized check instance.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteLine {
    pub suite: Suite,
    pub check: String,
    pub d: usize,
    pub trial: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub lines: Vec<SuiteLine>,
    pub violations: usize,
}

fn line(suite: Suite, check: &str, d: usize, trial: u64, lhs: f64, rhs: f64) -> SuiteLine {
    SuiteLine { suite, check: check.into(), d, trial, lhs, rhs, holds: lhs <= rhs + PROPERTY_TOL }
}

/// Symmetric equality check |lhs − rhs| ≤ tol, reported as a line.
fn eq_line(suite: Suite, check: &str, d: usize, trial: u64, lhs: f64, rhs: f64) -> SuiteLine {
    SuiteLine {
        suite,
        check: check.into(),
        d,
        trial,
        lhs,
        rhs,
        holds: (lhs - rhs).abs() <= PROPERTY_TOL,
    }
}

/// Run a property suite with randomized instances.
pub fn run_property_suite(suite: Suite, trials: usize, master_seed: u64) -> Result<SuiteReport> {
    let mut lines = Vec::new();
    for trial in 0..trials as u64 {
        let mut rng = SeedSpec::new(master_seed, trial).rng();
        let d = 2 + (trial % 3) as usize; // d cycles through 2, 3, 4
        match suite {
            Suite::Metric => {
                let (a, b, c) = (
                    random_density(d, &mut rng),
                    random_density(d, &mut rng),
                    random_density(d, &mut rng),
                );
                lines.push(eq_line(
                    suite, "state_symmetry", d, trial,
                    d_av_states(&a, &b)?,
                    d_av_states(&b, &a)?,
                ));
                lines.push(eq_line(suite, "state_identity", d, trial, d_av_states(&a, &a)?, 0.0));
                lines.push(line(
                    suite, "state_triangle", d, trial,
                    d_av_states(&a, &c)?,
                    d_av_states(&a, &b)? + d_av_states(&b, &c)?,
                ));
                let (m, n, o) = (
                    random_povm(d, d + 1, &mut rng),
                    random_povm(d, d + 1, &mut rng),
                    random_povm(d, d + 1, &mut rng),
                );
                lines.push(eq_line(
                    suite, "povm_symmetry", d, trial,
                    d_av_povms(&m, &n)?,
                    d_av_povms(&n, &m)?,
                ));
                lines.push(eq_line(suite, "povm_identity", d, trial, d_av_povms(&m, &m)?, 0.0));
                lines.push(line(
                    suite, "povm_triangle", d, trial,
                    d_av_povms(&m, &o)?,
                    d_av_povms(&m, &n)? + d_av_povms(&n, &o)?,
                ));
                let (x, y, z) = (
                    random_channel(d, &mut rng),
                    random_channel(d, &mut rng),
                    random_channel(d, &mut rng),
                );
                lines.push(eq_line(
                    suite, "channel_symmetry", d, trial,
                    d_av_channels(&x, &y)?,
                    d_av_channels(&y, &x)?,
                ));
                lines.push(eq_line(
                    suite, "channel_identity", d, trial,
                    d_av_channels(&x, &x)?,
                    0.0,
                ));
                lines.push(line(
                    suite, "channel_triangle", d, trial,
                    d_av_channels(&x, &z)?,
                    d_av_channels(&x, &y)? + d_av_channels(&y, &z)?,
                ));
            }
            Suite::Subadditivity => {
                let d2 = 2;
                let (a1, b1) = (random_density(d, &mut rng), random_density(d, &mut rng));
                let (a2, b2) = (random_density(d2, &mut rng), random_density(d2, &mut rng));
                lines.push(line(
                    suite, "state_subadditivity", d * d2, trial,
                    d_av_states(&a1.tensor(&a2), &b1.tensor(&b2))?,
                    d_av_states(&a1, &b1)? + d_av_states(&a2, &b2)?,
                ));
                let (m1, n1) = (random_povm(d, d, &mut rng), random_povm(d, d, &mut rng));
                let (m2, n2) = (random_povm(d2, d2, &mut rng), random_povm(d2, d2, &mut rng));
                lines.push(line(
                    suite, "povm_subadditivity", d * d2, trial,
                    d_av_povms(&m1.tensor(&m2), &n1.tensor(&n2))?,
                    d_av_povms(&m1, &n1)? + d_av_povms(&m2, &n2)?,
                ));
                let (x1, y1) = (random_channel(d, &mut rng), random_channel(d, &mut rng));
                let (x2, y2) = (random_channel(d2, &mut rng), random_channel(d2, &mut rng));
                lines.push(line(
                    suite, "channel_subadditivity", d * d2, trial,
                    d_av_channels(&x1.tensor(&x2)?, &y1.tensor(&y2)?)?,
                    d_av_channels(&x1, &y1)? + d_av_channels(&x2, &y2)?,
                ));
                // stability and chaining hold for unital channels
                let (u1, w1) = (
                    random_mixed_unitary(d, 3, &mut rng),
                    random_mixed_unitary(d, 3, &mut rng),
                );
                let (u2, w2) = (
                    random_mixed_unitary(d, 3, &mut rng),
                    random_mixed_unitary(d, 3, &mut rng),
                );
                for anc in [2usize, 3] {
                    let id = ChannelChoi::unitary(&ComplexMatrix::identity(anc))?;
                    lines.push(eq_line(
                        suite, &format!("channel_stability_ancilla_{anc}"), d, trial,
                        d_av_channels(&u1.tensor(&id)?, &w1.tensor(&id)?)?,
                        d_av_channels(&u1, &w1)?,
                    ));
                }
                lines.push(line(
                    suite, "channel_chaining", d, trial,
                    d_av_channels(&u1.compose(&u2)?, &w1.compose(&w2)?)?,
                    d_av_channels(&u1, &w1)? + d_av_channels(&u2, &w2)?,
                ));
            }
            Suite::Convexity => {
                use rand::Rng;
                // three-component mixture weights
                let raw: Vec<f64> = (0..3).map(|_| rng.random::<f64>() + 1e-3).collect();
                let total: f64 = raw.iter().sum();
                let w: Vec<f64> = raw.iter().map(|x| x / total).collect();

                let pairs: Vec<(DensityMatrix, DensityMatrix)> = (0..3)
                    .map(|_| (random_density(d, &mut rng), random_density(d, &mut rng)))
                    .collect();
                let mix_states = |side: fn(&(DensityMatrix, DensityMatrix)) -> &DensityMatrix| {
                    let mut acc = ComplexMatrix::zeros(d, d);
                    for (pair, &wi) in pairs.iter().zip(&w) {
                        acc = acc.add(&side(pair).mat().scale_re(wi));
                    }
                    DensityMatrix::new(&acc)
                };
                let rhs: f64 = pairs
                    .iter()
                    .zip(&w)
                    .map(|(p, &wi)| d_av_states(&p.0, &p.1).map(|v| wi * v))
                    .sum::<Result<f64>>()?;
                lines.push(line(
                    suite, "state_joint_convexity", d, trial,
                    d_av_states(&mix_states(|p| &p.0)?, &mix_states(|p| &p.1)?)?,
                    rhs,
                ));

                let n_out = d + 1;
                let pv: Vec<(Povm, Povm)> = (0..3)
                    .map(|_| (random_povm(d, n_out, &mut rng), random_povm(d, n_out, &mut rng)))
                    .collect();
                let mix_povms = |side: fn(&(Povm, Povm)) -> &Povm| -> Result<Povm> {
                    let effects: Vec<ComplexMatrix> = (0..n_out)
                        .map(|i| {
                            let mut acc = ComplexMatrix::zeros(d, d);
                            for (pair, &wi) in pv.iter().zip(&w) {
                                acc = acc.add(&side(pair).effects()[i].scale_re(wi));
                            }
                            acc
                        })
                        .collect();
                    Povm::new(&effects)
                };
                let rhs: f64 = pv
                    .iter()
                    .zip(&w)
                    .map(|(p, &wi)| d_av_povms(&p.0, &p.1).map(|v| wi * v))
                    .sum::<Result<f64>>()?;
                lines.push(line(
                    suite, "povm_joint_convexity", d, trial,
                    d_av_povms(&mix_povms(|p| &p.0)?, &mix_povms(|p| &p.1)?)?,
                    rhs,
                ));

                let ch: Vec<(ChannelChoi, ChannelChoi)> = (0..3)
                    .map(|_| (random_channel(d, &mut rng), random_channel(d, &mut rng)))
                    .collect();
                let mix_ch = |side: fn(&(ChannelChoi, ChannelChoi)) -> &ChannelChoi| {
                    let mut acc = ComplexMatrix::zeros(d * d, d * d);
                    for (pair, &wi) in ch.iter().zip(&w) {
                        acc = acc.add(&side(pair).choi().scale_re(wi));
                    }
                    ChannelChoi::from_choi(&acc)
                };
                let rhs: f64 = ch
                    .iter()
                    .zip(&w)
                    .map(|(p, &wi)| d_av_channels(&p.0, &p.1).map(|v| wi * v))
                    .sum::<Result<f64>>()?;
                lines.push(line(
                    suite, "channel_joint_convexity", d, trial,
                    d_av_channels(&mix_ch(|p| &p.0)?, &mix_ch(|p| &p.1)?)?,
                    rhs,
                ));
            }
            Suite::Dpi => {
                let (a, b) = (random_density(d, &mut rng), random_density(d, &mut rng));
                let unital = random_mixed_unitary(d, 3, &mut rng);
                lines.push(line(
                    suite, "state_unital_monotone", d, trial,
                    d_av_states(&unital.apply(&a), &unital.apply(&b))?,
                    d_av_states(&a, &b)?,
                ));
                let (m, n) = (random_povm(d, d + 1, &mut rng), random_povm(d, d + 1, &mut rng));
                let u = haar_unitary(d, &mut rng);
                let cu = ChannelChoi::unitary(&u)?;
                lines.push(eq_line(
                    suite, "povm_unitary_invariance", d, trial,
                    d_av_povms(&m.pre_process(&cu)?, &n.pre_process(&cu)?)?,
                    d_av_povms(&m, &n)?,
                ));
                // random column-stochastic post-processing with d outcomes
                let t = random_stochastic(d, d + 1, &mut rng)?;
                lines.push(line(
                    suite, "povm_stochastic_monotone", d, trial,
                    d_av_povms(&m.post_process(&t)?, &n.post_process(&t)?)?,
                    d_av_povms(&m, &n)?,
                ));
                lines.push(line(
                    suite, "povm_unital_pre_monotone", d, trial,
                    d_av_povms(&m.pre_process(&unital)?, &n.pre_process(&unital)?)?,
                    d_av_povms(&m, &n)?,
                ));
                let (x, y) = (random_channel(d, &mut rng), random_channel(d, &mut rng));
                lines.push(line(
                    suite, "channel_unital_post_monotone", d, trial,
                    d_av_channels(&unital.compose(&x)?, &unital.compose(&y)?)?,
                    d_av_channels(&x, &y)?,
                ));
                lines.push(eq_line(
                    suite, "channel_unitary_invariance", d, trial,
                    d_av_channels(&cu.compose(&x)?, &cu.compose(&y)?)?,
                    d_av_channels(&x, &y)?,
                ));
            }
            Suite::Counterexamples => {
                // strict violations are fixed constructions; replay them once
                if trial == 0 {
                    for case in [
                        "dpi_states_counterexample",
                        "dpi_povm_counterexample",
                        "post_processing_channel_counterexample",
                        "pre_processing_channel_counterexample",
                    ] {
                        for o in reproduce(case)? {
                            lines.push(SuiteLine {
                                suite,
                                check: format!("{}:{}", o.case, o.quantity),
                                d: 0,
                                trial,
                                lhs: o.actual,
                                rhs: o.expected,
                                holds: o.passed,
                            });
                        }
                    }
                }
            }
            Suite::Inequalities => {
                let x = random_hermitian(d, &mut rng);
                let y = random_hermitian(d, &mut rng);
                let single = projector_inequality_check(&x, None)?;
                lines.push(line(suite, "fourth_moment_single", d, trial, single.lhs, single.rhs));
                let pair = projector_inequality_check(&x, Some(&y))?;
                lines.push(line(suite, "fourth_moment_pair", d, trial, pair.lhs, pair.rhs));
                // the diagonal classical distance lower-bounds the quantum one
                use rand::Rng;
                let eps: f64 = 0.5 * rng.random::<f64>();
                let noise = random_povm(d, d, &mut rng);
                let ideal = Povm::computational(d);
                let effects: Vec<ComplexMatrix> = (0..d)
                    .map(|i| {
                        ideal.effects()[i]
                            .scale_re(1.0 - eps)
                            .add(&noise.effects()[i].scale_re(eps))
                    })
                    .collect();
                let noisy = Povm::new(&effects)?;
                lines.push(line(
                    suite, "diagonal_classical_lower_bound", d, trial,
                    0.5 * d_av_classical(&noisy.diagonal_part(), &ideal)?,
                    d_av_povms(&noisy, &ideal)?,
                ));
                // symmetrizing asymmetric bitflip rates never increases the
                // distance to the ideal readout
                let rates: Vec<(f64, f64)> = (0..2)
                    .map(|_| (0.5 * rng.random::<f64>(), 0.5 * rng.random::<f64>()))
                    .collect();
                let mut t_asym = StochasticMap::identity(1);
                let mut t_sym = StochasticMap::identity(1);
                for &(p10, p01) in &rates {
                    t_asym = t_asym.kron(&StochasticMap::asymmetric_bitflip(p10, p01)?);
                    t_sym = t_sym.kron(&StochasticMap::bitflip(0.5 * (p10 + p01))?);
                }
                let ideal4 = Povm::computational(4);
                lines.push(line(
                    suite, "symmetrization_monotone", 4, trial,
                    d_av_povms(&Povm::stochastic_of_computational(&t_sym)?, &ideal4)?,
                    d_av_povms(&Povm::stochastic_of_computational(&t_asym)?, &ideal4)?,
                ));
            }
            Suite::Separations => {
                let (a, b) = (random_density(d, &mut rng), random_density(d, &mut rng));
                let rs = separation_report(ObjectPair::States(&a, &b), master_seed)?;
                lines.push(SuiteLine {
                    suite, check: "state_sandwich".into(), d, trial,
                    lhs: rs.d_worst, rhs: rs.upper, holds: rs.holds,
                });
                let (m, n) = (random_povm(d, d, &mut rng), random_povm(d, d, &mut rng));
                let rp = separation_report(ObjectPair::Povms(&m, &n), master_seed)?;
                lines.push(SuiteLine {
                    suite, check: "povm_sandwich".into(), d, trial,
                    lhs: rp.d_worst, rhs: rp.upper, holds: rp.holds,
                });
                if d <= 3 {
                    let (x, y) = (random_channel(d, &mut rng), random_channel(d, &mut rng));
                    let rc = separation_report(ObjectPair::Channels(&x, &y), master_seed)?;
                    lines.push(SuiteLine {
                        suite, check: "channel_sandwich".into(), d, trial,
                        lhs: rc.d_worst, rhs: rc.upper, holds: rc.holds,
                    });
                }
            }
        }
    }
    let violations = lines.iter().filter(|l| !l.holds).count();
    Ok(SuiteReport { suite, trials, lines, violations })
}

/// Random Hermitian matrix with O(1) entries.
pub fn random_hermitian(d: usize, rng: &mut impl rand::Rng) -> ComplexMatrix {
    let g = crate::ensembles::ginibre(d, d, rng);
    g.add(&g.dagger()).scale_re(0.5)
}

/// Random column-stochastic map (columns drawn from normalized uniforms).
pub fn random_stochastic(rows: usize, cols: usize, rng: &mut impl rand::Rng) -> Result<StochasticMap> {
    let mut entries = vec![0.0; rows * cols];
    for j in 0..cols {
        let col: Vec<f64> = (0..rows).map(|_| rng.random::<f64>() + 1e-6).collect();
        let total: f64 = col.iter().sum();
        for i in 0..rows {
            entries[i * cols + j] = col[i] / total;
        }
    }
    StochasticMap::new(rows, cols, &entries)
}

/// Object kinds a suite line can refer to (re-exported for CLI reporting).
pub fn suite_name(suite: Suite) -> &'static str {
    match suite {
        Suite::Metric => "metric",
        Suite::Subadditivity => "subadditivity",
        Suite::Convexity => "convexity",
        Suite::Dpi => "dpi",
        Suite::Counterexamples => "counterexamples",
        Suite::Inequalities => "inequalities",
        Suite::Separations => "separations",
    }
}

/// Kind helper for separation CSV output.
pub fn kind_name(kind: ObjectKind) -> &'static str {
    match kind {
        ObjectKind::State => "state",
        ObjectKind::Povm => "povm",
        ObjectKind::Channel => "channel",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_reproduction_cases_pass() {
        for case in reproduce_all().unwrap() {
            assert!(
                case.passed,
                "{}:{} expected {} got {}",
                case.case, case.quantity, case.expected, case.actual
            );
        }
    }

    #[test]
    fn small_suite_runs_clean() {
        for &suite in ALL_SUITES {
            let report = run_property_suite(suite, 6, 99).unwrap();
            assert_eq!(report.violations, 0, "suite {suite:?}: {:?}",
                report.lines.iter().filter(|l| !l.holds).collect::<Vec<_>>());
        }
    }
}
