//! Closed-form permutation-framework values for two qubits, computed from
//! the Bloch decomposition `(r, s, T)` instead of conditional matrices.
//!
//! For Alice setting `i` with outcome `a ∈ {0, 1}` and sign `σ = (-1)^a`:
//!
//! ```text
//! p(a|A_i)           = (1 + σ r_i) / 2
//! C_l1 in basis α_i  = √(Σ_{j≠α_i} (s_j + σ t_ij)²) / (1 + σ r_i)
//! C_re in basis α_i  = H(β) − H(λ)
//! β = 1/2 + (s_{α_i} + σ t_{iα_i}) / (2(1 + σ r_i))
//! λ = 1/2 + √(Σ_j (s_j + σ t_ij)²) / (2(1 + σ r_i))
//! ```
//!
//! Indices here are Pauli indices. The MUB set lists the `σ_z`, `σ_x`, `σ_y`
//! eigenbases, which [`PAULI_OF_BASIS`] maps onto `x = 0, y = 1, z = 2`.

use crate::coherence::CoherenceMeasure;
use crate::qmath::{binary_entropy, BipartiteState};
use crate::states::bloch_decompose;
use crate::{Error, Result};

use super::Permutation;

/// Pauli index (`x = 0, y = 1, z = 2`) of each qubit MUB basis.
pub const PAULI_OF_BASIS: [usize; 3] = [2, 0, 1];

const DROP_BELOW: f64 = 1e-12;

/// `β_{ia}` and `λ_{ia}` for one Alice outcome, plus its weight and the
/// coherence it contributes (before weighting).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormTerms {
    pub basis: usize,
    pub outcome: usize,
    pub probability: f64,
    pub beta: f64,
    pub lambda: f64,
    pub coherence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormEvaluation {
    pub value: f64,
    pub terms: Vec<ClosedFormTerms>,
}

/// `C^{na:α}` for a two-qubit state from its Bloch decomposition.
/// Outcomes with `1 + σ r_i < 1e-12` are dropped.
pub fn two_qubit_closed_form(
    s: &BipartiteState,
    perm: &Permutation,
    measure: CoherenceMeasure,
) -> Result<ClosedFormEvaluation> {
    let bloch = bloch_decompose(s)?;
    if perm.len() != 3 {
        return Err(Error::NotAPermutation(perm.as_slice().to_vec()));
    }
    let mut value = 0.0;
    let mut terms = Vec::with_capacity(6);
    for (basis, &target) in perm.as_slice().iter().enumerate() {
        let i = PAULI_OF_BASIS[basis];
        let k = PAULI_OF_BASIS[target];
        for outcome in 0..2 {
            let sign = if outcome == 0 { 1.0 } else { -1.0 };
            let denom = 1.0 + sign * bloch.r[i];
            if denom < DROP_BELOW {
                continue;
            }
            let comp: [f64; 3] = std::array::from_fn(|j| bloch.s[j] + sign * bloch.t[i][j]);
            let norm = comp.iter().map(|c| c * c).sum::<f64>().sqrt();
            let transverse = (0..3)
                .filter(|&j| j != k)
                .map(|j| comp[j] * comp[j])
                .sum::<f64>()
                .sqrt();
            let beta = 0.5 + comp[k] / (2.0 * denom);
            let lambda = 0.5 + norm / (2.0 * denom);
            let coherence = match measure {
                CoherenceMeasure::L1 => transverse / denom,
                CoherenceMeasure::RelativeEntropy => {
                    (binary_entropy(beta) - binary_entropy(lambda)).max(0.0)
                }
            };
            let probability = denom / 2.0;
            value += probability * coherence;
            terms.push(ClosedFormTerms {
                basis,
                outcome,
                probability,
                beta,
                lambda,
                coherence,
            });
        }
    }
    Ok(ClosedFormEvaluation { value, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::generate_mubs;
    use crate::naqc::cost_matrix;
    use crate::states::{rho1, random_bipartite};
    use crate::qmath::{ComplexMatrix, BipartiteState};

    #[test]
    fn bell_and_mixed_values() {
        let bell = rho1(1.0).unwrap();
        let best = Permutation::cyclic_shift(3, 1);
        let v = two_qubit_closed_form(&bell, &best, CoherenceMeasure::L1).unwrap();
        assert!((v.value - 3.0).abs() < 1e-12);
        let mixed = BipartiteState::new(2, 2, ComplexMatrix::identity(4).scale(0.25)).unwrap();
        for p in Permutation::all(3) {
            for m in [CoherenceMeasure::L1, CoherenceMeasure::RelativeEntropy] {
                assert!(two_qubit_closed_form(&mixed, &p, m).unwrap().value.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn agrees_with_matrix_pipeline() {
        let m = generate_mubs(2).unwrap();
        for seed in 0..20 {
            let st = random_bipartite(2, 2, seed).unwrap();
            for measure in [CoherenceMeasure::L1, CoherenceMeasure::RelativeEntropy] {
                let costs = cost_matrix(&st, &m, measure).unwrap();
                for p in Permutation::all(3) {
                    let closed = two_qubit_closed_form(&st, &p, measure).unwrap();
                    let matrix = costs.assignment_value(&p).unwrap();
                    assert!((closed.value - matrix).abs() < 1e-9);
                    for t in &closed.terms {
                        assert!((-1e-9..=1.0 + 1e-9).contains(&t.beta));
                        assert!((-1e-9..=1.0 + 1e-9).contains(&t.lambda));
                    }
                }
            }
        }
    }
}
