//! Random unitary ensembles and samplers for random test objects.
//!
//! Determinism contract: every draw is keyed by a [`SeedSpec`] — a master
//! seed plus a stream id — mapped onto an independent ChaCha8 stream.  Work
//! item i of a Monte Carlo run uses stream i, so results do not depend on
//! how the items are batched across worker threads.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::objects::{ChannelChoi, DensityMatrix, Povm};

/// Maximum qubit count for brickwork circuits.
pub const MAX_BRICKWORK_QUBITS: usize = 8;

/// Deterministic RNG key: (master seed, stream id).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        SeedSpec { master_seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// One standard normal deviate (Box-Muller; the cosine branch only, which
/// keeps the draw count per sample fixed).
pub fn standard_normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>(); // (0, 1]
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Standard complex Gaussian matrix (Ginibre ensemble).
pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let scale = 1.0 / 2.0f64.sqrt();
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        C64::new(standard_normal(rng) * scale, standard_normal(rng) * scale)
    })
}

/// Haar-random unitary: QR of a Ginibre matrix with the R-diagonal phases
/// absorbed into Q.
pub fn haar_unitary(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(d, d, rng).to_nalgebra();
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = ComplexMatrix::from_nalgebra(&q);
    // multiply column j by r_jj / |r_jj|
    for j in 0..d {
        let rj = C64::new(r[(j, j)].re, r[(j, j)].im);
        let phase = rj / rj.norm();
        for i in 0..d {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Random unit vector (Haar on the sphere).
pub fn random_unit_vector(d: usize, rng: &mut impl Rng) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d)
            .map(|_| C64::new(standard_normal(rng), standard_normal(rng)))
            .collect();
        let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.iter().map(|z| z / n).collect();
        }
    }
}

/// Random density matrix from the Hilbert-Schmidt measure (GG†/tr).
pub fn random_density(d: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = ginibre(d, d, rng);
    let w = g.mul(&g.dagger()).hermitize();
    let tr = w.trace().re;
    DensityMatrix::new(&w.scale_re(1.0 / tr)).expect("normalized Wishart matrix is a state")
}

/// Random pure density matrix.
pub fn random_pure(d: usize, rng: &mut impl Rng) -> DensityMatrix {
    DensityMatrix::pure(&random_unit_vector(d, rng))
}

/// Random n-outcome POVM: Wishart effects renormalized by their sum,
/// M_i = S^{-1/2} W_i S^{-1/2}.
pub fn random_povm(d: usize, n: usize, rng: &mut impl Rng) -> Povm {
    let ws: Vec<ComplexMatrix> = (0..n)
        .map(|_| {
            let g = ginibre(d, d, rng);
            g.mul(&g.dagger()).hermitize()
        })
        .collect();
    let mut s = ComplexMatrix::zeros(d, d);
    for w in &ws {
        s = s.add(w);
    }
    let s_inv_sqrt = crate::linalg::hermitian_function(&s, |x| 1.0 / x.max(1e-300).sqrt())
        .expect("sum of full-rank Wishart matrices is invertible");
    let effects: Vec<ComplexMatrix> = ws
        .iter()
        .map(|w| s_inv_sqrt.mul(w).mul(&s_inv_sqrt).hermitize())
        .collect();
    Povm::new(&effects).expect("renormalized Wishart effects form a POVM")
}

/// Random CPTP map: Ginibre Choi matrix with the input marginal normalized
/// to I/d.
pub fn random_channel(d: usize, rng: &mut impl Rng) -> ChannelChoi {
    let n = d * d;
    let g = ginibre(n, n, rng);
    let w = g.mul(&g.dagger()).hermitize();
    let marginal = crate::linalg::partial_trace(&w, &[d, d], 1).expect("bipartite shape");
    let corr = crate::linalg::hermitian_function(&marginal, |x| 1.0 / x.max(1e-300).sqrt())
        .expect("Wishart marginal is invertible");
    let corr_full = corr.kron(&ComplexMatrix::identity(d));
    let choi = corr_full.mul(&w).mul(&corr_full).scale_re(1.0 / d as f64);
    ChannelChoi::from_choi(&choi).expect("normalized Ginibre Choi matrix is CPTP")
}

/// Random mixed-unitary (hence unital) channel with m unitaries.
pub fn random_mixed_unitary(d: usize, m: usize, rng: &mut impl Rng) -> ChannelChoi {
    let mut weights: Vec<f64> = (0..m).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let kraus: Vec<ComplexMatrix> = weights
        .iter()
        .map(|&w| haar_unitary(d, rng).scale_re(w.sqrt()))
        .collect();
    ChannelChoi::from_kraus(&kraus).expect("weighted unitaries are trace preserving")
}

/// A distribution over unitaries that Monte Carlo estimators can draw from.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnitaryEnsemble {
    /// Haar measure on U(d).
    Haar { dim: usize },
    /// Brickwork circuit of Haar-random two-qubit gates with open boundary:
    /// odd layers couple (0,1), (2,3), ...; even layers couple (1,2), (3,4), ...
    Brickwork { qubits: usize, depth: usize },
    /// Finite set of unitaries with sampling weights.
    Fixed {
        unitaries: Vec<ComplexMatrix>,
        weights: Vec<f64>,
    },
}

impl UnitaryEnsemble {
    pub fn haar(dim: usize) -> Self {
        UnitaryEnsemble::Haar { dim }
    }

    /// Brickwork with the default depth 5·qubits + 20.
    pub fn brickwork(qubits: usize, depth: Option<usize>) -> Result<Self> {
        if qubits < 2 || qubits > MAX_BRICKWORK_QUBITS {
            return Err(Error::TooManyQubits { n: qubits });
        }
        Ok(UnitaryEnsemble::Brickwork {
            qubits,
            depth: depth.unwrap_or(5 * qubits + 20),
        })
    }

    pub fn fixed(unitaries: Vec<ComplexMatrix>, weights: Vec<f64>) -> Result<Self> {
        if unitaries.is_empty() || unitaries.len() != weights.len() {
            return Err(Error::BadParams(
                "fixed ensemble needs matching unitary and weight lists".into(),
            ));
        }
        let d = unitaries[0].require_square()?;
        for u in &unitaries {
            if u.require_square()? != d {
                return Err(Error::DimensionMismatch("unitaries differ in dimension".into()));
            }
            let dev = u.dagger().mul(u).sub(&ComplexMatrix::identity(d)).max_abs();
            if dev > 1e-9 {
                return Err(Error::BadParams(format!(
                    "fixed ensemble member is not unitary (deviation {dev:.3e})"
                )));
            }
        }
        let mut total = 0.0;
        for &w in &weights {
            if w < 0.0 {
                return Err(Error::NegativeProbability { value: w });
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { total });
        }
        Ok(UnitaryEnsemble::Fixed { unitaries, weights })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            UnitaryEnsemble::Haar { dim } => {
                if *dim == 0 {
                    return Err(Error::BadParams("Haar ensemble needs dim >= 1".into()));
                }
                Ok(())
            }
            UnitaryEnsemble::Brickwork { qubits, .. } => {
                if *qubits < 2 || *qubits > MAX_BRICKWORK_QUBITS {
                    return Err(Error::TooManyQubits { n: *qubits });
                }
                Ok(())
            }
            UnitaryEnsemble::Fixed { unitaries, weights } => {
                Self::fixed(unitaries.clone(), weights.clone()).map(|_| ())
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            UnitaryEnsemble::Haar { dim } => *dim,
            UnitaryEnsemble::Brickwork { qubits, .. } => 1 << qubits,
            UnitaryEnsemble::Fixed { unitaries, .. } => unitaries[0].rows(),
        }
    }

    /// Draw one unitary for the given seed.
    pub fn sample(&self, seed: SeedSpec) -> ComplexMatrix {
        let mut rng = seed.rng();
        self.sample_with(&mut rng)
    }

    /// Draw one unitary from an already positioned RNG (several draws per
    /// stream consume it sequentially).
    pub fn sample_with(&self, rng: &mut impl Rng) -> ComplexMatrix {
        match self {
            UnitaryEnsemble::Haar { dim } => haar_unitary(*dim, rng),
            UnitaryEnsemble::Brickwork { qubits, depth } => {
                sample_brickwork(*qubits, *depth, rng)
            }
            UnitaryEnsemble::Fixed { unitaries, weights } => {
                let mut x: f64 = rng.random();
                for (u, &w) in unitaries.iter().zip(weights) {
                    if x < w {
                        return u.clone();
                    }
                    x -= w;
                }
                unitaries.last().unwrap().clone()
            }
        }
    }
}

/// One brickwork circuit draw: `depth` alternating layers of independent
/// Haar-random two-qubit gates.
pub fn sample_brickwork(qubits: usize, depth: usize, rng: &mut impl Rng) -> ComplexMatrix {
    assert!((2..=MAX_BRICKWORK_QUBITS).contains(&qubits));
    let dim = 1usize << qubits;
    let mut circuit = ComplexMatrix::identity(dim);
    for layer in 0..depth {
        let start = layer % 2; // even layers at qubit 0, odd layers offset by 1
        let mut layer_op = if start == 1 {
            ComplexMatrix::identity(2)
        } else {
            ComplexMatrix::identity(1)
        };
        let mut q = start;
        while q + 1 < qubits {
            layer_op = layer_op.kron(&haar_unitary(4, rng));
            q += 2;
        }
        while q < qubits {
            layer_op = layer_op.kron(&ComplexMatrix::identity(2));
            q += 1;
        }
        circuit = layer_op.mul(&circuit);
    }
    circuit
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_sample_is_unitary() {
        let mut rng = SeedSpec::new(7, 0).rng();
        for d in [2, 3, 5] {
            let u = haar_unitary(d, &mut rng);
            let dev = u.dagger().mul(&u).sub(&ComplexMatrix::identity(d)).max_abs();
            assert!(dev < 1e-12, "d = {d}: deviation {dev}");
        }
    }

    #[test]
    fn same_seed_same_draw() {
        let e = UnitaryEnsemble::haar(4);
        let a = e.sample(SeedSpec::new(42, 3));
        let b = e.sample(SeedSpec::new(42, 3));
        assert_eq!(a, b);
        let c = e.sample(SeedSpec::new(42, 4));
        assert!(a.sub(&c).max_abs() > 1e-6);
    }

    #[test]
    fn brickwork_is_unitary() {
        let e = UnitaryEnsemble::brickwork(3, None).unwrap();
        let u = e.sample(SeedSpec::new(1, 0));
        assert_eq!(u.rows(), 8);
        let dev = u.dagger().mul(&u).sub(&ComplexMatrix::identity(8)).max_abs();
        assert!(dev < 1e-10);
    }

    #[test]
    fn brickwork_rejects_too_many_qubits() {
        assert!(UnitaryEnsemble::brickwork(9, None).is_err());
    }

    #[test]
    fn random_objects_validate() {
        let mut rng = SeedSpec::new(11, 0).rng();
        for _ in 0..5 {
            let _ = random_density(3, &mut rng);
            let _ = random_povm(3, 4, &mut rng);
            let _ = random_channel(2, &mut rng);
            let _ = random_mixed_unitary(3, 3, &mut rng);
        }
    }

    #[test]
    fn ensemble_json_round_trip() {
        let e = UnitaryEnsemble::brickwork(2, Some(12)).unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert!(s.contains("\"kind\":\"brickwork\""));
        let back: UnitaryEnsemble = serde_json::from_str(&s).unwrap();
        assert_eq!(back.dim(), 4);
    }
}
