//! Exact Haar moments via symmetric-subspace projectors.
//!
//! For X Hermitian on C^d and |i> any fixed basis vector,
//!
//! ```text
//!   E_{U~Haar} tr(|i><i| U X U†)^k  =  tr(P_sym^{(k)} X^{⊗k}) / C(d+k-1, k)
//! ```
//!
//! with P_sym the projector onto the symmetric subspace of (C^d)^{⊗k}.
//! The k = 2 case reduces to (tr X² + (tr X)²) / (d(d+1)).

use serde::Serialize;

use crate::ensembles::{SeedSpec, UnitaryEnsemble};
use crate::error::{Error, Result};
use crate::linalg::{
    permutation_operator, ComplexMatrix, HERMITICITY_TOL, MAX_PERMUTATION_ORDER,
};
use crate::montecarlo::{estimate_mean, EstimateReport};

/// Projector onto the symmetric subspace of (C^d)^{⊗k}.
pub struct SymProjector {
    pub d: usize,
    pub k: usize,
    pub mat: ComplexMatrix,
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..k).collect();
    heap_permute(&mut items, k, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
    if n == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..n {
        heap_permute(items, n - 1, out);
        if n % 2 == 0 {
            items.swap(i, n - 1);
        } else {
            items.swap(0, n - 1);
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut out = 1.0;
    for i in 0..k {
        out *= (n - i) as f64 / (k - i) as f64;
    }
    out
}

/// P_sym = (1/k!) Σ_π P_π over all k! permutation operators.
pub fn sym_projector(d: usize, k: usize) -> Result<SymProjector> {
    if k == 0 || k > MAX_PERMUTATION_ORDER {
        return Err(Error::OrderTooLarge { k });
    }
    let mut acc: Option<ComplexMatrix> = None;
    for perm in permutations(k) {
        let p = permutation_operator(d, &perm)?;
        acc = Some(match acc {
            None => p,
            Some(a) => a.add(&p),
        });
    }
    Ok(SymProjector {
        d,
        k,
        mat: acc.unwrap().scale_re(1.0 / factorial(k)),
    })
}

fn require_hermitian(x: &ComplexMatrix) -> Result<()> {
    x.require_square()?;
    let dev = x.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(())
}

/// Exact Haar second moment E tr(|i><i| U X U†)² = (tr X² + (tr X)²)/(d(d+1)).
pub fn second_moment_exact(x: &ComplexMatrix) -> Result<f64> {
    require_hermitian(x)?;
    let d = x.rows() as f64;
    let t2 = x.mul(x).trace().re;
    let t1 = x.trace().re;
    Ok((t2 + t1 * t1) / (d * (d + 1.0)))
}

/// Exact Haar k-th moment via the symmetric projector (k ≤ 4).
pub fn kth_moment_exact(x: &ComplexMatrix, k: usize) -> Result<f64> {
    require_hermitian(x)?;
    let d = x.rows();
    let proj = sym_projector(d, k)?;
    let power = x.tensor_power(k);
    let val = proj.mat.hs_inner(&power).re; // P_sym is Hermitian: tr(P X^{⊗k})
    Ok(val / binomial(d + k - 1, k))
}

/// Outcome of one symmetric-projector inequality evaluation.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub holds: bool,
}

/// Slack allowed when deciding `holds`.
pub const INEQUALITY_TOL: f64 = 1e-10;

/// Fourth-moment bounds on the symmetric subspace.
///
/// With one operator: tr(X^{⊗4} P_sym) ≤ (10.1/6) · tr(X^{⊗2} P_sym)².
/// With two: tr(X^{⊗2} ⊗ Y^{⊗2} P_sym) ≤ (13/6) · tr(X^{⊗2} P_sym) · tr(Y^{⊗2} P_sym).
pub fn projector_inequality_check(
    x: &ComplexMatrix,
    y: Option<&ComplexMatrix>,
) -> Result<InequalityCheck> {
    require_hermitian(x)?;
    let d = x.rows();
    let p2 = sym_projector(d, 2)?;
    let p4 = sym_projector(d, 4)?;
    let qx = p2.mat.hs_inner(&x.tensor_power(2)).re;
    match y {
        None => {
            let lhs = p4.mat.hs_inner(&x.tensor_power(4)).re;
            let constant = 10.1 / 6.0;
            let rhs = constant * qx * qx;
            Ok(InequalityCheck { lhs, rhs, constant, holds: lhs <= rhs + INEQUALITY_TOL })
        }
        Some(y) => {
            require_hermitian(y)?;
            if y.rows() != d {
                return Err(Error::DimensionMismatch("operators differ in dimension".into()));
            }
            let qy = p2.mat.hs_inner(&y.tensor_power(2)).re;
            let lhs = p4
                .mat
                .hs_inner(&x.tensor_power(2).kron(&y.tensor_power(2)))
                .re;
            let constant = 13.0 / 6.0;
            let rhs = constant * qx * qy;
            Ok(InequalityCheck { lhs, rhs, constant, holds: lhs <= rhs + INEQUALITY_TOL })
        }
    }
}

/// Monte Carlo frame potential E |tr(U†V)|^{2k} over independent pairs from
/// the ensemble.
pub fn frame_potential(
    ensemble: &UnitaryEnsemble,
    k: usize,
    n_samples: usize,
    master_seed: u64,
) -> Result<EstimateReport> {
    ensemble.validate()?;
    if k == 0 {
        return Err(Error::BadParams("frame potential needs k >= 1".into()));
    }
    Ok(estimate_mean(n_samples, master_seed, |stream| {
        let mut rng = SeedSpec::new(master_seed, stream).rng();
        let u = ensemble.sample_with(&mut rng);
        let v = ensemble.sample_with(&mut rng);
        let t = u.dagger().mul(&v).trace().norm_sqr();
        t.powi(k as i32)
    }))
}

/// Frame potential of the Haar measure itself: k! whenever d ≥ k.
pub fn haar_frame_potential(d: usize, k: usize) -> Result<f64> {
    if d < k {
        return Err(Error::OutOfValidityRegion(format!(
            "Haar frame potential k! requires d >= k (d = {d}, k = {k})"
        )));
    }
    Ok(factorial(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    #[test]
    fn projector_is_idempotent_with_right_trace() {
        for (d, k) in [(2, 2), (3, 2), (2, 3), (2, 4)] {
            let p = sym_projector(d, k).unwrap();
            let p2 = p.mat.mul(&p.mat);
            assert!(p2.sub(&p.mat).max_abs() < 1e-12, "d={d} k={k}");
            // tr P_sym = C(d+k-1, k)
            let tr = p.mat.trace().re;
            assert!((tr - binomial(d + k - 1, k)).abs() < 1e-10, "d={d} k={k} tr={tr}");
        }
    }

    #[test]
    fn second_moment_of_identity_is_one() {
        for d in [2, 3, 5] {
            let x = ComplexMatrix::identity(d);
            assert!((second_moment_exact(&x).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn second_and_kth_moment_agree() {
        let x = ComplexMatrix::from_fn(3, 3, |i, j| match (i, j) {
            (0, 1) => C64::new(0.2, 0.1),
            (1, 0) => C64::new(0.2, -0.1),
            (i, j) if i == j => C64::new(0.3 * i as f64 - 0.2, 0.0),
            _ => C64::new(0.0, 0.0),
        });
        let a = second_moment_exact(&x).unwrap();
        let b = kth_moment_exact(&x, 2).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn pauli_z_inequality_values() {
        // X = Y = Z in d = 2: the mixed fourth-moment trace is 1 and each
        // second-moment trace is 1, so the bound holds with slack 13/6 - 1.
        let z = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let chk = projector_inequality_check(&z, Some(&z)).unwrap();
        assert!((chk.lhs - 1.0).abs() < 1e-12);
        assert!((chk.rhs - 13.0 / 6.0).abs() < 1e-12);
        assert!(chk.holds);
    }

    #[test]
    fn haar_value_requires_large_dim() {
        assert_eq!(haar_frame_potential(4, 2).unwrap(), 2.0);
        assert!(haar_frame_potential(2, 3).is_err());
    }
}
