//! The `l₁` norm and relative entropy of coherence in arbitrary reference
//! bases, their sums over a complete MUB set, and the state-independent
//! upper bounds on those sums.

use serde::{Deserialize, Serialize};

use crate::mub::{is_prime, Basis, MubSet};
use crate::qmath::{binary_entropy, entropy_of_spectrum, von_neumann_entropy, ComplexMatrix, DensityMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoherenceMeasure {
    L1,
    RelativeEntropy,
}

impl CoherenceMeasure {
    pub fn label(self) -> &'static str {
        match self {
            Self::L1 => "l1",
            Self::RelativeEntropy => "re",
        }
    }
}

/// A state-independent upper bound `C^m` on the MUB coherence sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bound {
    pub measure: CoherenceMeasure,
    pub dim: usize,
    pub value: f64,
}

fn check_dims(rho: &DensityMatrix, basis: &Basis) -> Result<()> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: rho.dim(),
        });
    }
    Ok(())
}

/// `V† ρ V`, i.e. ρ expressed in the given basis.
pub(crate) fn in_basis(rho: &ComplexMatrix, basis: &Basis) -> ComplexMatrix {
    let v = basis.unitary();
    &(&v.adjoint() * rho) * v
}

fn l1_of(rotated: &ComplexMatrix) -> f64 {
    let n = rotated.rows();
    let mut sum = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                sum += rotated[(r, c)].norm();
            }
        }
    }
    sum
}

fn diagonal(rotated: &ComplexMatrix) -> Vec<f64> {
    (0..rotated.rows()).map(|i| rotated[(i, i)].re).collect()
}

/// Coherence of a matrix already rotated into the reference basis. For the
/// relative entropy, `entropy` is `S(ρ)`, which does not depend on the basis.
pub(crate) fn coherence_of_rotated(rotated: &ComplexMatrix, measure: CoherenceMeasure, entropy: f64) -> f64 {
    let value = match measure {
        CoherenceMeasure::L1 => l1_of(rotated),
        CoherenceMeasure::RelativeEntropy => entropy_of_spectrum(&diagonal(rotated)) - entropy,
    };
    value.max(0.0)
}

pub fn coherence(rho: &DensityMatrix, basis: &Basis, measure: CoherenceMeasure) -> Result<f64> {
    check_dims(rho, basis)?;
    let entropy = match measure {
        CoherenceMeasure::L1 => 0.0,
        CoherenceMeasure::RelativeEntropy => von_neumann_entropy(rho)?,
    };
    Ok(coherence_of_rotated(&in_basis(rho.matrix(), basis), measure, entropy))
}

/// `Σ_j C^{A_j}(ρ)` over every basis of the set.
pub fn mub_coherence_sum(rho: &DensityMatrix, mubs: &MubSet, measure: CoherenceMeasure) -> Result<f64> {
    if rho.dim() != mubs.dim() {
        return Err(Error::DimensionMismatch {
            expected: mubs.dim(),
            found: rho.dim(),
        });
    }
    let entropy = match measure {
        CoherenceMeasure::L1 => 0.0,
        CoherenceMeasure::RelativeEntropy => von_neumann_entropy(rho)?,
    };
    Ok(mubs
        .bases()
        .iter()
        .map(|b| coherence_of_rotated(&in_basis(rho.matrix(), b), measure, entropy))
        .sum())
}

/// `P(A|ρ) = Σ_a ⟨a|ρ|a⟩²`.
pub fn purity_in_basis(rho: &DensityMatrix, basis: &Basis) -> Result<f64> {
    check_dims(rho, basis)?;
    Ok(basis
        .vectors()
        .iter()
        .map(|v| {
            let w = rho.matrix().apply(v);
            let p: f64 = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum();
            p * p
        })
        .sum())
}

/// `(d+1)·log₂d − (d−1)²·log₂(d−1) / (d(d−2))`, valid for `d ≥ 3`.
fn re_bound_formula(d: usize) -> f64 {
    let df = d as f64;
    (df + 1.0) * df.log2() - (df - 1.0).powi(2) * (df - 1.0).log2() / (df * (df - 2.0))
}

/// The `d → 2` limit of the general relative-entropy bound, `3 − log₂e/2`.
/// Only a diagnostic: the sharper value used for qubits is
/// `3·H(1/2 + √3/6)`.
pub fn re_bound_qubit_limit() -> f64 {
    3.0 - std::f64::consts::LOG2_E / 2.0
}

/// `C^m` for the given measure and prime dimension.
///
/// - `l₁`: `(d−1)·√(d(d+1))`.
/// - relative entropy: the general formula for `d ≥ 3`; the sharpened
///   `3·H(1/2 + √3/6)` at `d = 2`, where the general formula is `0/0`.
pub fn bound_value(measure: CoherenceMeasure, d: usize) -> Result<Bound> {
    if !is_prime(d as u64) {
        return Err(Error::UnsupportedDimension(d));
    }
    let df = d as f64;
    let value = match measure {
        CoherenceMeasure::L1 => (df - 1.0) * (df * (df + 1.0)).sqrt(),
        CoherenceMeasure::RelativeEntropy if d == 2 => 3.0 * binary_entropy(0.5 + 3f64.sqrt() / 6.0),
        CoherenceMeasure::RelativeEntropy => re_bound_formula(d),
    };
    Ok(Bound {
        measure,
        dim: d,
        value,
    })
}

/// Right-hand side of the purity-dependent relative-entropy bound
/// `(d+1)[log₂d + P − 1] − (d−1)log₂(d−1)(dP − 1)/(d(d−2))` for `d ≥ 3`.
pub fn re_purity_bound(d: usize, purity: f64) -> f64 {
    let df = d as f64;
    (df + 1.0) * (df.log2() + purity - 1.0)
        - (df - 1.0) * (df - 1.0).log2() * (df * purity - 1.0) / (df * (df - 2.0))
}

/// Per-basis `l₁` bound `√(d(d−1)[P(ρ) − P(A|ρ)])`.
pub fn l1_basis_bound(d: usize, purity: f64, basis_purity: f64) -> f64 {
    let df = d as f64;
    (df * (df - 1.0) * (purity - basis_purity).max(0.0)).sqrt()
}
