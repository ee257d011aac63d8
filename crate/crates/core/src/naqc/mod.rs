//! Nonlocal advantage of quantum coherence.
//!
//! Alice measures one of the `d + 1` MUB observables and announces the
//! setting `i` and outcome `a`. Bob then measures the coherence of his
//! conditional state `ρ_{B|A_i^a}` in some basis `j`. Both criteria are
//! assembled from one table,
//!
//! ```text
//! f(i, j) = Σ_a p(a|A_i) · C^{A_j}(ρ_{B|A_i^a}),
//! ```
//!
//! the [`CostMatrix`]:
//!
//! - averaged framework: `C^na = (1/d) Σ_{i≠j} f(i, j)`;
//! - permutation framework: `C^{na:α} = Σ_i f(i, α_i)` for a bijection `α`,
//!   and `C̃^na = max_α C^{na:α}`, solved as a linear assignment problem.
//!
//! Either value exceeding the single-party bound `C^m` certifies NAQC, and
//! therefore entanglement.

mod local_unitary;
mod two_qubit;

pub use local_unitary::{
    gell_mann_generators, local_unitary_maximize, LocalSearchOptions, UnitaryPair,
};
pub use two_qubit::{two_qubit_closed_form, ClosedFormEvaluation, ClosedFormTerms, PAULI_OF_BASIS};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::assignment::{lexicographic_max_assignment, max_weight_assignment, AssignmentProblem};
use crate::coherence::{bound_value, coherence_of_rotated, in_basis, CoherenceMeasure};
use crate::io::ser_sig17;
use crate::mub::MubSet;
use crate::qmath::{entropy_of_spectrum, hermitian_eigenvalues, BipartiteState, ComplexMatrix, DensityMatrix, STATE_TOL};
use crate::{Error, Result};

/// Outcomes with `p(a|A_i)` below this contribute nothing and carry no
/// conditional state.
pub const ZERO_PROBABILITY: f64 = 1e-12;
/// A verdict needs its margin to exceed this; equality within rounding is not an advantage.
pub const VERDICT_TOL: f64 = 1e-9;

/// A bijection `i ↦ α_i` on basis indices `0..=d` (zero-based; observable
/// `A_j` is basis `j - 1`). Serialized one-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &j in &map {
            if j >= n || seen[j] {
                return Err(Error::NotAPermutation(map));
            }
            seen[j] = true;
        }
        Ok(Self(map))
    }

    /// From one-based observable labels, e.g. `[2, 3, 1]`.
    pub fn from_one_based(map: &[usize]) -> Result<Self> {
        if map.contains(&0) {
            return Err(Error::NotAPermutation(map.to_vec()));
        }
        Self::new(map.iter().map(|j| j - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// `i ↦ (i + shift) mod n`.
    pub fn cyclic_shift(n: usize, shift: usize) -> Self {
        Self((0..n).map(|i| (i + shift) % n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|j| j + 1).collect()
    }

    pub fn has_fixed_point(&self) -> bool {
        self.0.iter().enumerate().any(|(i, &j)| i == j)
    }

    /// Every permutation of `0..n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation(current.clone()));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for j in self.one_based() {
            seq.serialize_element(&j)?;
        }
        seq.end()
    }
}

/// Which permutations the optimized framework ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PermutationDomain {
    /// All `(d+1)!` bijections, fixed points included.
    #[default]
    All,
    /// Only bijections with `α_i ≠ i` for every `i`.
    Derangements,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalOutcome {
    pub probability: f64,
    /// `None` when the probability is below [`ZERO_PROBABILITY`].
    pub state: Option<DensityMatrix>,
}

/// Bob's ensemble `{p(a|A_i), ρ_{B|A_i^a}}` for one Alice setting.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalEnsemble {
    pub measurement: usize,
    pub outcomes: Vec<ConditionalOutcome>,
}

impl ConditionalEnsemble {
    /// `Σ_a p(a|A_i) ρ_{B|A_i^a}`, which equals `ρ_B`.
    pub fn mixture(&self) -> ComplexMatrix {
        let d = self
            .outcomes
            .iter()
            .find_map(|o| o.state.as_ref().map(DensityMatrix::dim))
            .unwrap_or(0);
        self.outcomes
            .iter()
            .filter_map(|o| o.state.as_ref().map(|s| s.matrix().scale(o.probability)))
            .fold(ComplexMatrix::zeros(d, d), |acc, m| &acc + &m)
    }

    pub fn total_probability(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }
}

fn check_inputs(s: &BipartiteState, mubs: &MubSet) -> Result<usize> {
    let d = mubs.dim();
    for found in [s.dim_a(), s.dim_b()] {
        if found != d {
            return Err(Error::DimensionMismatch { expected: d, found });
        }
    }
    if mubs.len() != d + 1 {
        return Err(Error::InvalidArgument(format!(
            "expected {} bases, got {}",
            d + 1,
            mubs.len()
        )));
    }
    Ok(d)
}

/// Conditional ensemble after Alice measures in basis `i` (zero-based).
///
/// `p(a|A_i) = tr[(|φ_a⟩⟨φ_a| ⊗ I) ρ]` and `ρ_{B|A_i^a} = ⟨φ_a|ρ|φ_a⟩ / p`.
pub fn conditional_ensemble(s: &BipartiteState, mubs: &MubSet, i: usize) -> Result<ConditionalEnsemble> {
    let d = check_inputs(s, mubs)?;
    let basis = mubs.basis(i)?;
    let rho = s.matrix();
    let outcomes = basis
        .vectors()
        .iter()
        .map(|phi| {
            let block = ComplexMatrix::from_fn(d, d, |b, b2| {
                let mut acc = num_complex::Complex64::new(0.0, 0.0);
                for a1 in 0..d {
                    let ca = phi[a1].conj();
                    for a2 in 0..d {
                        acc += ca * rho[(a1 * d + b, a2 * d + b2)] * phi[a2];
                    }
                }
                acc
            });
            let probability = block.trace().re.max(0.0);
            let state = (probability >= ZERO_PROBABILITY)
                .then(|| DensityMatrix::from_trusted(block.scale(1.0 / probability).hermitian_part()));
            ConditionalOutcome { probability, state }
        })
        .collect();
    Ok(ConditionalEnsemble {
        measurement: i,
        outcomes,
    })
}

/// `f(i, j)` over all `(d+1)²` pairs, diagonal included.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    dim: usize,
    values: Vec<Vec<f64>>,
}

impl CostMatrix {
    pub fn from_values(dim: usize, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.len() != dim + 1 || values.iter().any(|r| r.len() != dim + 1) {
            return Err(Error::DimensionMismatch {
                expected: dim + 1,
                found: values.len(),
            });
        }
        Ok(Self { dim, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// `(1/d) Σ_{i≠j} f(i, j)`, summed row by row.
    pub fn averaged(&self) -> f64 {
        let mut total = 0.0;
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j {
                    total += v;
                }
            }
        }
        total / self.dim as f64
    }

    /// `Σ_i f(i, α_i)`, summed in order of `i`.
    pub fn assignment_value(&self, perm: &Permutation) -> Result<f64> {
        if perm.len() != self.size() {
            return Err(Error::NotAPermutation(perm.as_slice().to_vec()));
        }
        Ok(perm.as_slice().iter().enumerate().map(|(i, &j)| self.values[i][j]).sum())
    }

    fn problem(&self, domain: PermutationDomain) -> AssignmentProblem<'_> {
        let p = AssignmentProblem::new(&self.values);
        match domain {
            PermutationDomain::All => p,
            PermutationDomain::Derangements => p.derangements_only(),
        }
    }

    /// Optimal permutation, lexicographically smallest among ties.
    pub fn best_assignment(&self, domain: PermutationDomain) -> Result<(Permutation, f64)> {
        let (map, value) = lexicographic_max_assignment(&self.problem(domain))
            .ok_or_else(|| Error::InvalidArgument("no admissible permutation".into()))?;
        Ok((Permutation(map), value))
    }

    /// Optimal value only, without the tie-breaking passes.
    pub fn max_assignment_value(&self, domain: PermutationDomain) -> Result<f64> {
        max_weight_assignment(&self.problem(domain))
            .map(|(_, v)| v)
            .ok_or_else(|| Error::InvalidArgument("no admissible permutation".into()))
    }
}

/// Builds `f(i, j)` from the `d + 1` conditional ensembles. Each entry is
/// summed over outcomes in label order.
pub fn cost_matrix(s: &BipartiteState, mubs: &MubSet, measure: CoherenceMeasure) -> Result<CostMatrix> {
    let d = check_inputs(s, mubs)?;
    let mut values = vec![vec![0.0; d + 1]; d + 1];
    for (i, row) in values.iter_mut().enumerate() {
        let ensemble = conditional_ensemble(s, mubs, i)?;
        for outcome in &ensemble.outcomes {
            let Some(state) = &outcome.state else { continue };
            let entropy = match measure {
                CoherenceMeasure::L1 => 0.0,
                CoherenceMeasure::RelativeEntropy => {
                    entropy_of_spectrum(&hermitian_eigenvalues(state.matrix(), STATE_TOL)?)
                }
            };
            for (j, cell) in row.iter_mut().enumerate() {
                let rotated = in_basis(state.matrix(), mubs.basis(j)?);
                *cell += outcome.probability * coherence_of_rotated(&rotated, measure, entropy);
            }
        }
    }
    Ok(CostMatrix { dim: d, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Framework {
    Averaged,
    Optimized,
    FixedPermutation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NaqcReport {
    pub measure: CoherenceMeasure,
    pub framework: Framework,
    #[serde(serialize_with = "ser_sig17")]
    pub value: f64,
    #[serde(serialize_with = "ser_sig17")]
    pub bound: f64,
    /// `value > bound + VERDICT_TOL`.
    pub achieved: bool,
    pub best_permutation: Option<Permutation>,
}

impl NaqcReport {
    fn new(
        measure: CoherenceMeasure,
        framework: Framework,
        value: f64,
        bound: f64,
        best_permutation: Option<Permutation>,
    ) -> Self {
        Self {
            measure,
            framework,
            value,
            bound,
            achieved: value > bound + VERDICT_TOL,
            best_permutation,
        }
    }

    /// `value - bound`; NAQC is achieved when this exceeds [`VERDICT_TOL`].
    pub fn margin(&self) -> f64 {
        self.value - self.bound
    }
}

pub fn naqc_averaged(s: &BipartiteState, mubs: &MubSet, measure: CoherenceMeasure) -> Result<NaqcReport> {
    let bound = bound_value(measure, mubs.dim())?.value;
    let value = cost_matrix(s, mubs, measure)?.averaged();
    Ok(NaqcReport::new(measure, Framework::Averaged, value, bound, None))
}

pub fn naqc_fixed_permutation(
    s: &BipartiteState,
    mubs: &MubSet,
    perm: &Permutation,
    measure: CoherenceMeasure,
) -> Result<NaqcReport> {
    if perm.len() != mubs.dim() + 1 {
        return Err(Error::NotAPermutation(perm.as_slice().to_vec()));
    }
    let bound = bound_value(measure, mubs.dim())?.value;
    let value = cost_matrix(s, mubs, measure)?.assignment_value(perm)?;
    Ok(NaqcReport::new(
        measure,
        Framework::FixedPermutation,
        value,
        bound,
        Some(perm.clone()),
    ))
}

/// `C̃^na`, maximized over every permutation (fixed points included).
pub fn naqc_optimized(s: &BipartiteState, mubs: &MubSet, measure: CoherenceMeasure) -> Result<NaqcReport> {
    naqc_optimized_in(s, mubs, measure, PermutationDomain::All)
}

pub fn naqc_optimized_in(
    s: &BipartiteState,
    mubs: &MubSet,
    measure: CoherenceMeasure,
    domain: PermutationDomain,
) -> Result<NaqcReport> {
    let bound = bound_value(measure, mubs.dim())?.value;
    let costs = cost_matrix(s, mubs, measure)?;
    report_from_costs(&costs, measure, bound, domain)
}

pub(crate) fn report_from_costs(
    costs: &CostMatrix,
    measure: CoherenceMeasure,
    bound: f64,
    domain: PermutationDomain,
) -> Result<NaqcReport> {
    let (perm, value) = costs.best_assignment(domain)?;
    Ok(NaqcReport::new(measure, Framework::Optimized, value, bound, Some(perm)))
}
