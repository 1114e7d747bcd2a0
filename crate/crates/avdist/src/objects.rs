//! Quantum states, measurements, channels and classical stochastic maps,
//! together with the canonical constructors used throughout the test
//! corpus.
//!
//! Conventions fixed here and relied on everywhere else:
//! * Choi matrices use J(Λ) = (id ⊗ Λ)(|Φ+><Φ+|) with tensor order
//!   input ⊗ output, so tr_out J = I/d and tr J = 1.
//! * Superoperators act on column-stacked vectorizations,
//!   vec(X)[j·d + i] = X[i, j]; a unitary conjugation has Ŝ = conj(U) ⊗ U.
//! * Stochastic maps are column-stochastic: each column is the outcome
//!   distribution for one input symbol.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, partial_trace, reorder_subsystems, ComplexMatrix, C64, HERMITICITY_TOL,
};

/// Validation tolerances for physical objects.
pub const PSD_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-9;
pub const STOCHASTIC_TOL: f64 = 1e-12;

fn check_hermitian_psd(m: &ComplexMatrix, what: &str) -> Result<ComplexMatrix> {
    m.require_square()?;
    if !m.is_finite() {
        return Err(Error::NotFinite);
    }
    let dev = m.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let sym = m.hermitize();
    let eig = hermitian_eig(&sym)?;
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min < -PSD_TOL {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let _ = what;
    Ok(sym)
}

// ---------------------------------------------------------------------------
// Density matrices
// ---------------------------------------------------------------------------

/// A validated density matrix: Hermitian, PSD and unit trace.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: &ComplexMatrix) -> Result<Self> {
        let sym = check_hermitian_psd(mat, "state")?;
        let tr = sym.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace: tr });
        }
        Ok(DensityMatrix { mat: sym })
    }

    /// For internal products of validated operations; hermitizes but skips
    /// the spectral check.
    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        DensityMatrix { mat: mat.hermitize() }
    }

    pub fn pure(v: &[C64]) -> Self {
        DensityMatrix { mat: ComplexMatrix::projector(v) }
    }

    pub fn basis_state(d: usize, i: usize) -> Self {
        assert!(i < d);
        DensityMatrix { mat: ComplexMatrix::ketbra(d, i, i) }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix { mat: ComplexMatrix::identity(d).scale_re(1.0 / d as f64) }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn purity(&self) -> f64 {
        self.mat.hs_inner(&self.mat).re
    }

    /// ρ ↦ UρU†.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Self {
        DensityMatrix::new_unchecked(u.mul(&self.mat).mul(&u.dagger()))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        DensityMatrix { mat: self.mat.kron(&other.mat) }
    }
}

// ---------------------------------------------------------------------------
// POVMs
// ---------------------------------------------------------------------------

/// A validated POVM: Hermitian PSD effects summing to the identity.
#[derive(Clone, Debug)]
pub struct Povm {
    effects: Vec<ComplexMatrix>,
    dim: usize,
}

impl Povm {
    pub fn new(effects: &[ComplexMatrix]) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::BadParams("POVM needs at least one effect".into()));
        }
        let dim = effects[0].require_square()?;
        let mut checked = Vec::with_capacity(effects.len());
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for e in effects {
            if e.require_square()? != dim {
                return Err(Error::DimensionMismatch("POVM effects differ in dimension".into()));
            }
            let sym = check_hermitian_psd(e, "effect")?;
            sum = sum.add(&sym);
            checked.push(sym);
        }
        let dev = sum.sub(&ComplexMatrix::identity(dim)).max_abs();
        if dev > TRACE_TOL {
            return Err(Error::EffectSumNotIdentity { deviation: dev });
        }
        Ok(Povm { effects: checked, dim })
    }

    pub(crate) fn new_unchecked(effects: Vec<ComplexMatrix>) -> Self {
        let dim = effects[0].rows();
        Povm { effects, dim }
    }

    /// Projective measurement in the computational basis.
    pub fn computational(d: usize) -> Self {
        Povm::new_unchecked((0..d).map(|i| ComplexMatrix::ketbra(d, i, i)).collect())
    }

    /// The uninformative measurement {I/n, ..., I/n}.
    pub fn trivial(d: usize, n: usize) -> Self {
        let e = ComplexMatrix::identity(d).scale_re(1.0 / n as f64);
        Povm::new_unchecked(vec![e; n])
    }

    /// Computational measurement with the first two outcome labels swapped.
    pub fn swapped_computational(d: usize) -> Self {
        assert!(d >= 2);
        let mut effects: Vec<ComplexMatrix> =
            (0..d).map(|i| ComplexMatrix::ketbra(d, i, i)).collect();
        effects.swap(0, 1);
        Povm::new_unchecked(effects)
    }

    /// Classically post-processed computational measurement:
    /// M_i = Σ_j T[i,j] |j><j|.
    pub fn stochastic_of_computational(t: &StochasticMap) -> Result<Self> {
        let d = t.cols();
        let effects = (0..t.rows())
            .map(|i| {
                ComplexMatrix::from_fn(d, d, |a, b| {
                    if a == b {
                        C64::new(t.get(i, a), 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        Ok(Povm { effects, dim: d })
    }

    /// Keep only the diagonal of every effect (still a POVM).
    pub fn diagonal_part(&self) -> Self {
        let d = self.dim;
        let effects = self
            .effects
            .iter()
            .map(|e| {
                ComplexMatrix::from_fn(d, d, |a, b| {
                    if a == b {
                        C64::new(e[(a, a)].re, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        Povm { effects, dim: d }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    /// Classical post-processing M ↦ T·M with a column-stochastic map.
    pub fn post_process(&self, t: &StochasticMap) -> Result<Self> {
        if t.cols() != self.n_outcomes() {
            return Err(Error::DimensionMismatch(
                "stochastic map columns must match POVM outcomes".into(),
            ));
        }
        let effects = (0..t.rows())
            .map(|i| {
                let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
                for j in 0..t.cols() {
                    acc = acc.add(&self.effects[j].scale_re(t.get(i, j)));
                }
                acc
            })
            .collect();
        Ok(Povm { effects, dim: self.dim })
    }

    /// Quantum pre-processing M ↦ Λ*(M) (measure after sending through Λ).
    pub fn pre_process(&self, channel: &ChannelChoi) -> Result<Self> {
        if channel.dim_out() != self.dim {
            return Err(Error::DimensionMismatch(
                "channel output dimension must match POVM dimension".into(),
            ));
        }
        let effects = self
            .effects
            .iter()
            .map(|e| channel.apply_dual(e))
            .collect::<Vec<_>>();
        Ok(Povm { effects, dim: channel.dim_in() })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut effects = Vec::with_capacity(self.n_outcomes() * other.n_outcomes());
        for a in &self.effects {
            for b in &other.effects {
                effects.push(a.kron(b));
            }
        }
        Povm { effects, dim: self.dim * other.dim }
    }
}

/// Born-rule outcome distribution p_i = tr(M_i ρ).
///
/// Tiny negative probabilities (roundoff) are clamped; the total must match 1
/// to within 1e-9, after which the vector is renormalized exactly.
pub fn born_distribution(povm: &Povm, state: &DensityMatrix) -> Result<Vec<f64>> {
    if povm.dim() != state.dim() {
        return Err(Error::DimensionMismatch("POVM and state dimensions differ".into()));
    }
    let mut p: Vec<f64> = povm
        .effects()
        .iter()
        .map(|e| e.hs_inner(state.mat()).re)
        .collect();
    for v in &mut p {
        if *v < 0.0 {
            if *v < -PSD_TOL {
                return Err(Error::NegativeProbability { value: *v });
            }
            *v = 0.0;
        }
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > TRACE_TOL {
        return Err(Error::NotNormalized { total });
    }
    for v in &mut p {
        *v /= total;
    }
    Ok(p)
}

// ---------------------------------------------------------------------------
// Channels
// ---------------------------------------------------------------------------

/// A CPTP map stored by its Choi matrix (input ⊗ output, trace one).
#[derive(Clone, Debug)]
pub struct ChannelChoi {
    choi: ComplexMatrix,
    dim_in: usize,
    dim_out: usize,
}

impl ChannelChoi {
    /// Validate an externally supplied Choi matrix (square factors only).
    pub fn from_choi(choi: &ComplexMatrix) -> Result<Self> {
        let n = choi.require_square()?;
        let d = (n as f64).sqrt().round() as usize;
        if d * d != n {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix dimension {n} is not a perfect square"
            )));
        }
        Self::from_choi_rect(choi, d, d)
    }

    /// Validate a Choi matrix with explicit input/output dimensions.
    pub fn from_choi_rect(choi: &ComplexMatrix, dim_in: usize, dim_out: usize) -> Result<Self> {
        let n = choi.require_square()?;
        if n != dim_in * dim_out {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix dimension {n} != {dim_in} * {dim_out}"
            )));
        }
        let sym = check_hermitian_psd(choi, "choi")?;
        let tr = sym.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace: tr });
        }
        let marginal = partial_trace(&sym, &[dim_in, dim_out], 1)?;
        let target = ComplexMatrix::identity(dim_in).scale_re(1.0 / dim_in as f64);
        let dev = marginal.sub(&target).max_abs();
        if dev > TRACE_TOL {
            return Err(Error::NotTracePreserving { deviation: dev });
        }
        Ok(ChannelChoi { choi: sym, dim_in, dim_out })
    }

    pub fn from_kraus(kraus: &[ComplexMatrix]) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::BadParams("need at least one Kraus operator".into()));
        }
        let dim_out = kraus[0].rows();
        let dim_in = kraus[0].cols();
        let mut effect = ComplexMatrix::zeros(dim_in, dim_in);
        for k in kraus {
            if k.rows() != dim_out || k.cols() != dim_in {
                return Err(Error::DimensionMismatch("Kraus operators differ in shape".into()));
            }
            effect = effect.add(&k.dagger().mul(k));
        }
        let dev = effect.sub(&ComplexMatrix::identity(dim_in)).max_abs();
        if dev > TRACE_TOL {
            return Err(Error::NotTracePreserving { deviation: dev });
        }
        // J = Σ_k |φ_k><φ_k| with |φ_k> = (I ⊗ K_k)|Φ+>.
        let n = dim_in * dim_out;
        let mut choi = ComplexMatrix::zeros(n, n);
        let scale = 1.0 / (dim_in as f64);
        for k in kraus {
            let mut phi = vec![C64::new(0.0, 0.0); n];
            for i in 0..dim_in {
                for a in 0..dim_out {
                    phi[i * dim_out + a] = k[(a, i)];
                }
            }
            for r in 0..n {
                for c in 0..n {
                    choi[(r, c)] += phi[r] * phi[c].conj() * scale;
                }
            }
        }
        Ok(ChannelChoi { choi, dim_in, dim_out })
    }

    /// Unitary conjugation ρ ↦ UρU†.
    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        let d = u.require_square()?;
        let dev = u.dagger().mul(u).sub(&ComplexMatrix::identity(d)).max_abs();
        if dev > TRACE_TOL {
            return Err(Error::BadParams(format!(
                "matrix is not unitary (|U†U - I| max entry = {dev:.3e})"
            )));
        }
        Self::from_kraus(std::slice::from_ref(u))
    }

    /// Constant map ρ ↦ tr(ρ)·σ; Choi is (I/d) ⊗ σ.
    pub fn state_prep(sigma: &DensityMatrix) -> Self {
        let d = sigma.dim();
        let choi = ComplexMatrix::identity(d).scale_re(1.0 / d as f64).kron(sigma.mat());
        ChannelChoi { choi, dim_in: d, dim_out: d }
    }

    /// Fully depolarizing channel ρ ↦ I/d.
    pub fn max_depolarizing(d: usize) -> Self {
        Self::state_prep(&DensityMatrix::maximally_mixed(d))
    }

    /// Complete dephasing in the computational basis.
    pub fn dephasing(d: usize) -> Self {
        let kraus: Vec<ComplexMatrix> = (0..d).map(|i| ComplexMatrix::ketbra(d, i, i)).collect();
        Self::from_kraus(&kraus).expect("projective Kraus set is trace preserving")
    }

    /// Tensor product of single-qubit Pauli channels; `probs[q]` holds the
    /// (I, X, Y, Z) probabilities for qubit q.
    pub fn pauli_product(probs: &[[f64; 4]]) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::BadParams("need at least one qubit".into()));
        }
        let mut out: Option<ChannelChoi> = None;
        for p in probs {
            for &v in p {
                if v < 0.0 {
                    return Err(Error::NegativeProbability { value: v });
                }
            }
            let total: f64 = p.iter().sum();
            if (total - 1.0).abs() > TRACE_TOL {
                return Err(Error::NotNormalized { total });
            }
            let kraus: Vec<ComplexMatrix> = pauli_matrices()
                .iter()
                .zip(p)
                .filter(|(_, &w)| w > 0.0)
                .map(|(s, &w)| s.scale_re(w.sqrt()))
                .collect();
            let ch = Self::from_kraus(&kraus)?;
            out = Some(match out {
                None => ch,
                Some(acc) => acc.tensor(&ch)?,
            });
        }
        Ok(out.unwrap())
    }

    /// The Choi-space perturbation pair partner: J = I/d² − (1/d²) ψ ⊗ A for
    /// a pure ψ and a traceless Hermitian unitary A (d must be even).  Its
    /// partner in the pair is [`ChannelChoi::max_depolarizing`].
    pub fn depolarizing_perturbation(
        d: usize,
        a: &ComplexMatrix,
        psi: Option<&DensityMatrix>,
    ) -> Result<Self> {
        if d % 2 != 0 {
            return Err(Error::BadParams("dimension must be even".into()));
        }
        if a.require_square()? != d {
            return Err(Error::DimensionMismatch("A must be d-dimensional".into()));
        }
        if a.hermiticity_deviation() > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation: a.hermiticity_deviation() });
        }
        let a_sym = a.mul(a); // A Hermitian ⇒ A² PSD
        if a.trace().norm() > TRACE_TOL {
            return Err(Error::BadParams(format!(
                "A must be traceless (|tr A| = {:.3e})",
                a.trace().norm()
            )));
        }
        let unital_dev = a_sym.sub(&ComplexMatrix::identity(d)).max_abs();
        if unital_dev > TRACE_TOL {
            return Err(Error::BadParams(format!(
                "A must square to the identity (max deviation {unital_dev:.3e})"
            )));
        }
        let fiducial = match psi {
            Some(p) => {
                if p.dim() != d {
                    return Err(Error::DimensionMismatch("ψ must be d-dimensional".into()));
                }
                if (p.purity() - 1.0).abs() > 1e-9 {
                    return Err(Error::BadParams("ψ must be pure".into()));
                }
                p.clone()
            }
            None => DensityMatrix::basis_state(d, 0),
        };
        let n = d * d;
        let scale = 1.0 / (n as f64);
        let choi = ComplexMatrix::identity(n)
            .scale_re(scale)
            .sub(&fiducial.mat().kron(a).scale_re(scale));
        Self::from_choi(&choi)
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// Λ(ρ) = d · tr_in[(ρᵀ ⊗ I) J].
    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::new_unchecked(self.apply_op(rho.mat()))
    }

    /// Same as [`ChannelChoi::apply`] for a raw operator (no state checks).
    pub fn apply_op(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let d_in = self.dim_in;
        let d_out = self.dim_out;
        let mut out = ComplexMatrix::zeros(d_out, d_out);
        for i in 0..d_in {
            for j in 0..d_in {
                let w = x[(i, j)] * C64::new(d_in as f64, 0.0);
                if w == C64::new(0.0, 0.0) {
                    continue;
                }
                for a in 0..d_out {
                    for b in 0..d_out {
                        out[(a, b)] += w * self.choi[(i * d_out + a, j * d_out + b)];
                    }
                }
            }
        }
        out
    }

    /// Adjoint (Heisenberg-picture) action Λ*(W).
    pub fn apply_dual(&self, w: &ComplexMatrix) -> ComplexMatrix {
        let d_in = self.dim_in;
        let d_out = self.dim_out;
        let mut out = ComplexMatrix::zeros(d_in, d_in);
        for i in 0..d_in {
            for j in 0..d_in {
                // Λ*(W)[i,j] = d · tr(W · J_block(j, i))
                let mut s = C64::new(0.0, 0.0);
                for a in 0..d_out {
                    for b in 0..d_out {
                        s += w[(a, b)] * self.choi[(j * d_out + b, i * d_out + a)];
                    }
                }
                out[(i, j)] = s * C64::new(d_in as f64, 0.0);
            }
        }
        out
    }

    /// Superoperator on column-stacked vectorizations.
    pub fn to_superop(&self) -> ComplexMatrix {
        let d_in = self.dim_in;
        let d_out = self.dim_out;
        let mut s = ComplexMatrix::zeros(d_out * d_out, d_in * d_in);
        for i in 0..d_in {
            for j in 0..d_in {
                for a in 0..d_out {
                    for b in 0..d_out {
                        s[(b * d_out + a, j * d_in + i)] =
                            self.choi[(i * d_out + a, j * d_out + b)] * C64::new(d_in as f64, 0.0);
                    }
                }
            }
        }
        s
    }

    /// Rebuild a Choi matrix from a superoperator on column-stacked
    /// vectorizations (square channels).
    pub fn from_superop(s: &ComplexMatrix) -> Result<Self> {
        let n = s.require_square()?;
        let d = (n as f64).sqrt().round() as usize;
        if d * d != n {
            return Err(Error::DimensionMismatch(format!(
                "superoperator dimension {n} is not a perfect square"
            )));
        }
        let mut choi = ComplexMatrix::zeros(n, n);
        let scale = 1.0 / d as f64;
        for i in 0..d {
            for j in 0..d {
                for a in 0..d {
                    for b in 0..d {
                        choi[(i * d + a, j * d + b)] = s[(b * d + a, j * d + i)] * scale;
                    }
                }
            }
        }
        Ok(ChannelChoi { choi: choi.hermitize(), dim_in: d, dim_out: d })
    }

    /// Composition self ∘ other (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim_in != other.dim_out {
            return Err(Error::DimensionMismatch("composition dimensions differ".into()));
        }
        if self.dim_in != self.dim_out || other.dim_in != other.dim_out {
            return Err(Error::DimensionMismatch(
                "composition is only supported for square channels".into(),
            ));
        }
        Self::from_superop(&self.to_superop().mul(&other.to_superop()))
    }

    /// Λ ⊗ Γ; the combined Choi matrix is the subsystem-reordered J_Λ ⊗ J_Γ.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let j = self.choi.kron(&other.choi);
        let dims = [self.dim_in, self.dim_out, other.dim_in, other.dim_out];
        let reordered = reorder_subsystems(&j, &dims, &[0, 2, 1, 3])?;
        Ok(ChannelChoi {
            choi: reordered,
            dim_in: self.dim_in * other.dim_in,
            dim_out: self.dim_out * other.dim_out,
        })
    }
}

/// The 2×2 Pauli matrices (I, X, Y, Z).
pub fn pauli_matrices() -> [ComplexMatrix; 4] {
    let i = ComplexMatrix::identity(2);
    let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let y = ComplexMatrix::from_fn(2, 2, |r, c| match (r, c) {
        (0, 1) => C64::new(0.0, -1.0),
        (1, 0) => C64::new(0.0, 1.0),
        _ => C64::new(0.0, 0.0),
    });
    let z = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    [i, x, y, z]
}

// ---------------------------------------------------------------------------
// Stochastic maps
// ---------------------------------------------------------------------------

/// Column-stochastic matrix: entry (i, j) is the probability of outcome i
/// given input j, so every column sums to one.
#[derive(Clone, Debug)]
pub struct StochasticMap {
    rows: usize,
    cols: usize,
    p: Vec<f64>,
}

impl StochasticMap {
    pub fn new(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch("stochastic map entry count".into()));
        }
        for &v in entries {
            if v < 0.0 {
                return Err(Error::NegativeProbability { value: v });
            }
        }
        for j in 0..cols {
            let sum: f64 = (0..rows).map(|i| entries[i * cols + j]).sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::NotStochastic { column: j, sum });
            }
        }
        Ok(StochasticMap { rows, cols, p: entries.to_vec() })
    }

    pub fn identity(n: usize) -> Self {
        let mut p = vec![0.0; n * n];
        for i in 0..n {
            p[i * n + i] = 1.0;
        }
        StochasticMap { rows: n, cols: n, p }
    }

    /// Symmetric bit flip with error probability `prob`.
    pub fn bitflip(prob: f64) -> Result<Self> {
        Self::new(2, 2, &[1.0 - prob, prob, prob, 1.0 - prob])
    }

    /// Asymmetric bit flip: p(1|0) = p10, p(0|1) = p01.
    pub fn asymmetric_bitflip(p10: f64, p01: f64) -> Result<Self> {
        Self::new(2, 2, &[1.0 - p10, p01, p10, 1.0 - p01])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.cols + j]
    }

    /// Push a distribution through the map.
    pub fn apply(&self, dist: &[f64]) -> Result<Vec<f64>> {
        if dist.len() != self.cols {
            return Err(Error::DimensionMismatch("distribution length".into()));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * dist[j]).sum())
            .collect())
    }

    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut p = vec![0.0; rows * cols];
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        p[(i1 * other.rows + i2) * cols + (j1 * other.cols + j2)] =
                            self.get(i1, j1) * other.get(i2, j2);
                    }
                }
            }
        }
        StochasticMap { rows, cols, p }
    }

    pub fn trace(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_prep_choi_is_product() {
        // prep of |0><0| in d = 2: Choi = I/2 ⊗ |0><0|, eigenvalues {0, 0, 1/2, 1/2}
        let prep = ChannelChoi::state_prep(&DensityMatrix::basis_state(2, 0));
        let eig = hermitian_eig(prep.choi()).unwrap();
        let expect = [0.0, 0.0, 0.5, 0.5];
        for (v, e) in eig.values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn kraus_state_prep_matches_constructor() {
        // K1 = |0><0|, K2 = |0><1| prepares |0><0|
        let k1 = ComplexMatrix::ketbra(2, 0, 0);
        let k2 = ComplexMatrix::ketbra(2, 0, 1);
        let from_kraus = ChannelChoi::from_kraus(&[k1, k2]).unwrap();
        let prep = ChannelChoi::state_prep(&DensityMatrix::basis_state(2, 0));
        assert!(from_kraus.choi().sub(prep.choi()).max_abs() < 1e-12);
    }

    #[test]
    fn bitflip_kraus_choi_spectrum() {
        // Kraus {√0.9 I, √0.1 X}: Choi eigenvalues {0, 0, 0.1, 0.9}
        let [i, x, _, _] = pauli_matrices();
        let ch = ChannelChoi::from_kraus(&[i.scale_re(0.9f64.sqrt()), x.scale_re(0.1f64.sqrt())])
            .unwrap();
        let eig = hermitian_eig(ch.choi()).unwrap();
        let expect = [0.0, 0.0, 0.1, 0.9];
        for (v, e) in eig.values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn apply_channel_matches_kraus_action() {
        let [_, x, _, _] = pauli_matrices();
        let ch = ChannelChoi::unitary(&x).unwrap();
        let rho = DensityMatrix::basis_state(2, 0);
        let out = ch.apply(&rho);
        assert!(out.mat().sub(DensityMatrix::basis_state(2, 1).mat()).max_abs() < 1e-12);
    }

    #[test]
    fn superop_round_trip() {
        let ch = ChannelChoi::pauli_product(&[[0.7, 0.1, 0.1, 0.1]]).unwrap();
        let back = ChannelChoi::from_superop(&ch.to_superop()).unwrap();
        assert!(back.choi().sub(ch.choi()).max_abs() < 1e-12);
    }

    #[test]
    fn dual_of_unitary_is_inverse_conjugation() {
        let [_, _, y, _] = pauli_matrices();
        let ch = ChannelChoi::unitary(&y).unwrap();
        let w = ComplexMatrix::from_real(2, 2, &[0.3, 0.1, 0.1, 0.7]);
        let dual = ch.apply_dual(&w);
        let expect = y.dagger().mul(&w).mul(&y);
        assert!(dual.sub(&expect).max_abs() < 1e-12);
    }

    #[test]
    fn depolarizing_perturbation_spectrum() {
        // (1/4)(I - ψ ⊗ Z) has eigenvalues {0, 1/4, 1/4, 1/2}
        let [_, _, _, z] = pauli_matrices();
        let ch = ChannelChoi::depolarizing_perturbation(2, &z, None).unwrap();
        let eig = hermitian_eig(ch.choi()).unwrap();
        let expect = [0.0, 0.25, 0.25, 0.5];
        for (v, e) in eig.values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn born_rule_on_computational() {
        let povm = Povm::computational(3);
        let rho = DensityMatrix::maximally_mixed(3);
        let p = born_distribution(&povm, &rho).unwrap();
        for v in p {
            assert!((v - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn stochastic_map_rejects_bad_column() {
        assert!(matches!(
            StochasticMap::new(2, 2, &[0.9, 0.3, 0.2, 0.7]),
            Err(Error::NotStochastic { column: 0, .. })
        ));
    }

    #[test]
    fn swapped_computational_flips_first_two() {
        let m = Povm::swapped_computational(4);
        assert!(m.effects()[0].sub(&ComplexMatrix::ketbra(4, 1, 1)).max_abs() < 1e-14);
        assert!(m.effects()[1].sub(&ComplexMatrix::ketbra(4, 0, 0)).max_abs() < 1e-14);
    }

    #[test]
    fn channel_tensor_acts_factorwise() {
        let [_, x, _, z] = pauli_matrices();
        let cx = ChannelChoi::unitary(&x).unwrap();
        let cz = ChannelChoi::unitary(&z).unwrap();
        let prod = cx.tensor(&cz).unwrap();
        let direct = ChannelChoi::unitary(&x.kron(&z)).unwrap();
        assert!(prod.choi().sub(direct.choi()).max_abs() < 1e-12);
    }
}
