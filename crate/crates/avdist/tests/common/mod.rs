//! Shared test oracles, implemented independently of the library's own
//! algorithms wherever the library result is under test.

#![allow(dead_code)]

use avdist::linalg::{ComplexMatrix, C64};

/// Enumerate all sorted multisets of size `k` over `d` symbols.
pub fn multisets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, k: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in min..d {
            cur.push(s);
            rec(d, k, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, k, 0, &mut Vec::new(), &mut out);
    out
}

/// All distinct arrangements (orderings) of a sorted multiset.
pub fn arrangements(multiset: &[usize]) -> Vec<Vec<usize>> {
    fn rec(remaining: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining.is_empty() {
            out.push(cur.clone());
            return;
        }
        let mut last: Option<usize> = None;
        for idx in 0..remaining.len() {
            let s = remaining[idx];
            if last == Some(s) {
                continue; // skip duplicate symbol at this position
            }
            last = Some(s);
            remaining.remove(idx);
            cur.push(s);
            rec(remaining, cur, out);
            cur.pop();
            remaining.insert(idx, s);
        }
    }
    let mut out = Vec::new();
    rec(&mut multiset.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// tr(P_sym (A₁⊗…⊗A_k)) computed from an explicit orthonormal basis of the
/// symmetric subspace (sums over multiset arrangements), never touching the
/// library's permutation operators.
pub fn sym_trace_oracle(mats: &[&ComplexMatrix]) -> C64 {
    let k = mats.len();
    assert!(k >= 1);
    let d = mats[0].rows();
    let mut total = C64::new(0.0, 0.0);
    for ms in multisets(d, k) {
        let arr = arrangements(&ms);
        let norm_sq = arr.len() as f64;
        // <b| (⊗ mats) |b> with |b> = (1/√norm_sq) Σ_a |a>
        let mut acc = C64::new(0.0, 0.0);
        for a in &arr {
            for b in &arr {
                let mut prod = C64::new(1.0, 0.0);
                for m in 0..k {
                    prod *= mats[m][(a[m], b[m])];
                }
                acc += prod;
            }
        }
        total += acc / norm_sq;
    }
    total
}

/// tr(P_sym X^{⊗k}) for a single operator.
pub fn sym_power_trace_oracle(x: &ComplexMatrix, k: usize) -> C64 {
    let refs: Vec<&ComplexMatrix> = (0..k).map(|_| x).collect();
    sym_trace_oracle(&refs)
}

/// Binomial coefficient as a float.
pub fn binom(n: usize, k: usize) -> f64 {
    let mut v = 1.0f64;
    for i in 0..k {
        v *= (n - i) as f64 / (k - i) as f64;
    }
    v
}

/// Channel action by explicit Kraus sum Σ K ρ K†.
pub fn kraus_apply_oracle(kraus: &[ComplexMatrix], rho: &ComplexMatrix) -> ComplexMatrix {
    let d_out = kraus[0].rows();
    let mut out = ComplexMatrix::zeros(d_out, d_out);
    for k in kraus {
        out = out.add(&k.mul(rho).mul(&k.dagger()));
    }
    out
}

/// Half the ℓ₁ distance between two probability vectors.
pub fn tv_oracle(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
