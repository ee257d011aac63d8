//! Entanglement witnesses: the optimized NAQC criterion and three
//! estimates built on the entropic uncertainty relation with quantum
//! memory.
//!
//! Alice measures two observables `R` and `S`, each given by one basis of
//! the MUB set, with `c = max |⟨ψ_k|φ_l⟩|²`. Each estimate `E` certifies
//! entanglement when `E < −log₂ c`:
//!
//! - tomographic, `E_T = H(R|B) + H(S|B)`, from the quantum conditional
//!   entropies of the post-measurement states `ρ_XB`;
//! - measurement, `E_M = H(R|R) + H(S|S)`, where Bob measures the same
//!   basis and the classical conditional entropy is Alice's outcome given
//!   Bob's;
//! - Fano, `E_F = H(p_R) + H(p_S) + (p_R + p_S)·log₂(d − 1)`, with `p_X`
//!   the probability that the two outcomes differ.

use serde::Serialize;

use crate::coherence::CoherenceMeasure;
use crate::io::ser_sig17;
use crate::mub::{inner, MubSet};
use crate::naqc::{naqc_optimized, NaqcReport, VERDICT_TOL};
use crate::qmath::{binary_entropy, entropy_of_spectrum, kron, partial_trace, von_neumann_entropy, BipartiteState, ComplexMatrix, DensityMatrix, Subsystem};
use crate::{Error, Result};

/// Default `R`: the computational basis.
pub const DEFAULT_R_BASIS: usize = 0;
/// Default `S`: the first basis after the computational one (`σ_x` for qubits).
pub const DEFAULT_S_BASIS: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimate {
    Tomographic,
    Measurement,
    Fano,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    #[serde(serialize_with = "ser_sig17")]
    pub e_t: f64,
    #[serde(serialize_with = "ser_sig17")]
    pub e_m: f64,
    #[serde(serialize_with = "ser_sig17")]
    pub e_f: f64,
    /// `−log₂ c`.
    #[serde(serialize_with = "ser_sig17")]
    pub log_inv_c: f64,
    #[serde(serialize_with = "ser_sig17")]
    pub p_r: f64,
    #[serde(serialize_with = "ser_sig17")]
    pub p_s: f64,
    /// `H(A|B) = S(ρ_AB) − S(ρ_B)`, diagnostic only.
    #[serde(serialize_with = "ser_sig17")]
    pub conditional_entropy: f64,
    pub entangled_t: bool,
    pub entangled_m: bool,
    pub entangled_f: bool,
    pub naqc_verdict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub naqc: Option<NaqcReport>,
}

impl WitnessReport {
    pub fn estimate(&self, which: Estimate) -> f64 {
        match which {
            Estimate::Tomographic => self.e_t,
            Estimate::Measurement => self.e_m,
            Estimate::Fano => self.e_f,
        }
    }

    /// `−log₂ c − E`; the estimate certifies entanglement when this exceeds
    /// [`VERDICT_TOL`].
    pub fn margin(&self, which: Estimate) -> f64 {
        self.log_inv_c - self.estimate(which)
    }

    pub fn verdict(&self, which: Estimate) -> bool {
        match which {
            Estimate::Tomographic => self.entangled_t,
            Estimate::Measurement => self.entangled_m,
            Estimate::Fano => self.entangled_f,
        }
    }
}

/// `Σ_k (|ψ_k⟩⟨ψ_k| ⊗ I) ρ (|ψ_k⟩⟨ψ_k| ⊗ I)`.
fn dephase_a(s: &BipartiteState, basis: &[Vec<num_complex::Complex64>]) -> ComplexMatrix {
    let id = ComplexMatrix::identity(s.dim_b());
    let n = s.dim_a() * s.dim_b();
    basis.iter().fold(ComplexMatrix::zeros(n, n), |acc, psi| {
        let p = kron(&ComplexMatrix::outer(psi), &id);
        &acc + &(&(&p * s.matrix()) * &p)
    })
}

/// `P(k, l) = ⟨ψ_k ψ_l| ρ |ψ_k ψ_l⟩`, both parties in the same basis.
fn joint_distribution(s: &BipartiteState, basis: &[Vec<num_complex::Complex64>]) -> Vec<Vec<f64>> {
    basis
        .iter()
        .map(|pa| {
            basis
                .iter()
                .map(|pb| {
                    let ket: Vec<_> = pa.iter().flat_map(|x| pb.iter().map(move |y| x * y)).collect();
                    let w = s.matrix().apply(&ket);
                    inner(&ket, &w).re.max(0.0)
                })
                .collect()
        })
        .collect()
}

struct ObservableStats {
    quantum_conditional: f64,
    classical_conditional: f64,
    p_differ: f64,
}

fn observable_stats(s: &BipartiteState, basis: &[Vec<num_complex::Complex64>], entropy_b: f64) -> Result<ObservableStats> {
    let dephased = DensityMatrix::from_trusted(dephase_a(s, basis).hermitian_part());
    let quantum_conditional = von_neumann_entropy(&dephased)? - entropy_b;

    let joint = joint_distribution(s, basis);
    let total: f64 = joint.iter().flatten().sum();
    let flat: Vec<f64> = joint.iter().flatten().map(|p| p / total).collect();
    let d = basis.len();
    let bob: Vec<f64> = (0..d).map(|l| (0..d).map(|k| joint[k][l] / total).sum()).collect();
    let classical_conditional = entropy_of_spectrum(&flat) - entropy_of_spectrum(&bob);
    let p_differ = (0..d)
        .flat_map(|k| (0..d).filter(move |&l| l != k).map(move |l| (k, l)))
        .map(|(k, l)| joint[k][l] / total)
        .sum::<f64>()
        .clamp(0.0, 1.0);
    Ok(ObservableStats {
        quantum_conditional,
        classical_conditional: classical_conditional.max(0.0),
        p_differ,
    })
}

/// The three uncertainty estimates for Alice's observables `r` and `s_basis`
/// (zero-based basis indices into `mubs`).
pub fn eur_witness(s: &BipartiteState, mubs: &MubSet, r: usize, s_basis: usize) -> Result<WitnessReport> {
    let d = mubs.dim();
    for found in [s.dim_a(), s.dim_b()] {
        if found != d {
            return Err(Error::DimensionMismatch { expected: d, found });
        }
    }
    if r == s_basis {
        return Err(Error::InvalidArgument("R and S must be different bases".into()));
    }
    let rb = mubs.basis(r)?.vectors();
    let sb = mubs.basis(s_basis)?.vectors();

    let c = rb
        .iter()
        .flat_map(|u| sb.iter().map(move |v| inner(u, v).norm_sqr()))
        .fold(0.0f64, f64::max);
    let log_inv_c = -c.log2();

    let entropy_b = von_neumann_entropy(&partial_trace(s, Subsystem::B))?;
    let conditional_entropy = von_neumann_entropy(s.density())? - entropy_b;
    let rs = observable_stats(s, rb, entropy_b)?;
    let ss = observable_stats(s, sb, entropy_b)?;

    let e_t = rs.quantum_conditional + ss.quantum_conditional;
    let e_m = rs.classical_conditional + ss.classical_conditional;
    let fano_tail = if d > 2 { ((d - 1) as f64).log2() } else { 0.0 };
    let e_f = binary_entropy(rs.p_differ) + binary_entropy(ss.p_differ) + (rs.p_differ + ss.p_differ) * fano_tail;

    Ok(WitnessReport {
        e_t,
        e_m,
        e_f,
        log_inv_c,
        p_r: rs.p_differ,
        p_s: ss.p_differ,
        conditional_entropy,
        entangled_t: e_t < log_inv_c - VERDICT_TOL,
        entangled_m: e_m < log_inv_c - VERDICT_TOL,
        entangled_f: e_f < log_inv_c - VERDICT_TOL,
        naqc_verdict: None,
        naqc: None,
    })
}

/// Uncertainty estimates with the default `R`, `S` plus the optimized NAQC
/// verdict `C̃^na > C^m + VERDICT_TOL`.
pub fn naqc_witness(s: &BipartiteState, mubs: &MubSet, measure: CoherenceMeasure) -> Result<WitnessReport> {
    let mut report = eur_witness(s, mubs, DEFAULT_R_BASIS, DEFAULT_S_BASIS)?;
    let naqc = naqc_optimized(s, mubs, measure)?;
    report.naqc_verdict = Some(naqc.achieved);
    report.naqc = Some(naqc);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormFamily {
    /// Isotropic state at `d = 2`.
    Isotropic2,
    Rho1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormQuantity {
    /// The common value of all three uncertainty estimates.
    Uncertainty,
    L1Tilde,
    ReTilde,
}

/// Closed forms for the two qubit families, with `η = (1 + 2x)/3`:
///
/// | family      | `E_α`   | `C̃_l1`     | `C̃_re`     |
/// |-------------|---------|------------|------------|
/// | isotropic   | `2H(η)` | `|4x − 1|` | `3 − 3H(η)` |
/// | `ρ₁`        | `2H(x)` | `1 + |4x − 2|` | `3 − 2H(x)` |
pub fn family_closed_form(family: ClosedFormFamily, x: f64, quantity: ClosedFormQuantity) -> f64 {
    let eta = (1.0 + 2.0 * x) / 3.0;
    match (family, quantity) {
        (ClosedFormFamily::Isotropic2, ClosedFormQuantity::Uncertainty) => 2.0 * binary_entropy(eta),
        (ClosedFormFamily::Isotropic2, ClosedFormQuantity::L1Tilde) => (4.0 * x - 1.0).abs(),
        (ClosedFormFamily::Isotropic2, ClosedFormQuantity::ReTilde) => 3.0 - 3.0 * binary_entropy(eta),
        (ClosedFormFamily::Rho1, ClosedFormQuantity::Uncertainty) => 2.0 * binary_entropy(x),
        (ClosedFormFamily::Rho1, ClosedFormQuantity::L1Tilde) => 1.0 + (4.0 * x - 2.0).abs(),
        (ClosedFormFamily::Rho1, ClosedFormQuantity::ReTilde) => 3.0 - 2.0 * binary_entropy(x),
    }
}
