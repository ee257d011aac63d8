//! State families and seeded samplers.
//!
//! Pauli convention: `σ₁ = σ_x`, `σ₂ = σ_y`, `σ₃ = σ_z` in their standard
//! computational-basis forms.

use num_complex::Complex64;

use crate::qmath::{kron, BipartiteState, ComplexMatrix, DensityMatrix};
use crate::rng::SeededRng;
use crate::{Error, Result};

/// Number of product terms drawn by [`random_separable`] callers that do
/// not pick their own.
pub const DEFAULT_SEPARABLE_TERMS: usize = 4;

fn check_unit_interval(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value: x })
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("dimension {d} is below 2")));
    }
    Ok(())
}

/// `|Φ⟩ = Σ_n |nn⟩/√d` as a ket on `A ⊗ B`.
pub fn max_entangled_ket(d: usize) -> Vec<Complex64> {
    let amp = 1.0 / (d as f64).sqrt();
    let mut ket = vec![Complex64::new(0.0, 0.0); d * d];
    for n in 0..d {
        ket[n * d + n] = Complex64::new(amp, 0.0);
    }
    ket
}

pub fn max_entangled(d: usize) -> Result<BipartiteState> {
    check_dim(d)?;
    Ok(BipartiteState::from_trusted(
        d,
        d,
        ComplexMatrix::outer(&max_entangled_ket(d)),
    ))
}

/// Isotropic state `(1-x)/(d²-1)·I + (d²x-1)/(d²-1)·|Φ⟩⟨Φ|`, whose
/// fidelity with `|Φ⟩` is `x`.
pub fn isotropic(d: usize, x: f64) -> Result<BipartiteState> {
    check_dim(d)?;
    check_unit_interval("x", x)?;
    let n = (d * d) as f64;
    let noise = (1.0 - x) / (n - 1.0);
    let weight = (n * x - 1.0) / (n - 1.0);
    let phi = ComplexMatrix::outer(&max_entangled_ket(d));
    let mat = ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let id = if r == c { noise } else { 0.0 };
        phi[(r, c)] * weight + id
    });
    Ok(BipartiteState::from_trusted(d, d, mat))
}

/// `x|Φ⁺⟩⟨Φ⁺| + (1-x)|Ψ⁻⟩⟨Ψ⁻|` on two qubits.
pub fn rho1(x: f64) -> Result<BipartiteState> {
    check_unit_interval("x", x)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let phi_plus = [Complex64::new(s, 0.0), z, z, Complex64::new(s, 0.0)];
    let psi_minus = [z, Complex64::new(s, 0.0), Complex64::new(-s, 0.0), z];
    let mat = &ComplexMatrix::outer(&phi_plus).scale(x)
        + &ComplexMatrix::outer(&psi_minus).scale(1.0 - x);
    Ok(BipartiteState::from_trusted(2, 2, mat))
}

/// `G G† / tr(G G†)` with `G` a `d × d` matrix of standard complex
/// Gaussians drawn row-major from [`SeededRng`].
pub fn random_density(d: usize, seed: u64) -> Result<DensityMatrix> {
    check_dim(d)?;
    let mut rng = SeededRng::new(seed);
    Ok(ginibre(d, &mut rng))
}

fn ginibre(d: usize, rng: &mut SeededRng) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| rng.complex_gaussian());
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::from_trusted(w.scale(1.0 / tr).hermitian_part())
}

/// Random state on `A ⊗ B` drawn from the same Ginibre ensemble.
pub fn random_bipartite(dim_a: usize, dim_b: usize, seed: u64) -> Result<BipartiteState> {
    check_dim(dim_a)?;
    check_dim(dim_b)?;
    let rho = random_density(dim_a * dim_b, seed)?;
    BipartiteState::from_density(dim_a, dim_b, rho)
}

/// One term `q_k ρ_A^k ⊗ ρ_B^k` of a separable decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableTerm {
    pub weight: f64,
    pub rho_a: DensityMatrix,
    pub rho_b: DensityMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparableSpec {
    terms: Vec<SeparableTerm>,
}

impl SeparableSpec {
    pub fn new(terms: Vec<SeparableTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("separable spec needs a term".into()));
        }
        if terms.iter().any(|t| !(t.weight >= 0.0)) {
            return Err(Error::NotADistribution("negative weight".into()));
        }
        let total: f64 = terms.iter().map(|t| t.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::NotADistribution(format!("weights sum to {total}")));
        }
        let (da, db) = (terms[0].rho_a.dim(), terms[0].rho_b.dim());
        if terms.iter().any(|t| t.rho_a.dim() != da || t.rho_b.dim() != db) {
            return Err(Error::InvalidArgument("inconsistent factor dimensions".into()));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[SeparableTerm] {
        &self.terms
    }

    /// `Σ_k q_k ρ_A^k ⊗ ρ_B^k`.
    pub fn assemble(&self) -> BipartiteState {
        let (da, db) = (self.terms[0].rho_a.dim(), self.terms[0].rho_b.dim());
        let mut acc = ComplexMatrix::zeros(da * db, da * db);
        for t in &self.terms {
            acc = &acc + &kron(t.rho_a.matrix(), t.rho_b.matrix()).scale(t.weight);
        }
        BipartiteState::from_trusted(da, db, acc.hermitian_part())
    }
}

/// `K`-term separable mixture. Weights are `K` uniform variates normalized
/// to sum 1; factor `k` uses seeds drawn from the same stream, first for
/// `ρ_A^k` then `ρ_B^k`, each passed to [`random_density`].
pub fn random_separable(
    dim_a: usize,
    dim_b: usize,
    terms: usize,
    seed: u64,
) -> Result<(SeparableSpec, BipartiteState)> {
    check_dim(dim_a)?;
    check_dim(dim_b)?;
    if terms == 0 {
        return Err(Error::InvalidArgument("need at least one term".into()));
    }
    let mut rng = SeededRng::new(seed);
    let raw: Vec<f64> = (0..terms).map(|_| 1.0 - rng.uniform()).collect();
    let total: f64 = raw.iter().sum();
    let mut parts = Vec::with_capacity(terms);
    for w in raw {
        let rho_a = random_density(dim_a, rng.next_u64())?;
        let rho_b = random_density(dim_b, rng.next_u64())?;
        parts.push(SeparableTerm {
            weight: w / total,
            rho_a,
            rho_b,
        });
    }
    let spec = SeparableSpec::new(parts)?;
    let state = spec.assemble();
    Ok((spec, state))
}

/// Pauli matrices `[σ_x, σ_y, σ_z]`.
pub fn paulis() -> [ComplexMatrix; 3] {
    let c = Complex64::new;
    [
        ComplexMatrix::from_vec(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap(),
        ComplexMatrix::from_vec(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap(),
        ComplexMatrix::from_vec(2, 2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]).unwrap(),
    ]
}

/// Two-qubit Bloch form `ρ = ¼(I + r·σ⊗I + I⊗s·σ + Σ t_ij σ_i⊗σ_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochDecomposition {
    pub r: [f64; 3],
    pub s: [f64; 3],
    pub t: [[f64; 3]; 3],
}

impl BlochDecomposition {
    pub fn reassemble(&self) -> ComplexMatrix {
        let p = paulis();
        let id = ComplexMatrix::identity(2);
        let mut acc = ComplexMatrix::identity(4);
        for i in 0..3 {
            acc = &acc + &kron(&p[i], &id).scale(self.r[i]);
            acc = &acc + &kron(&id, &p[i]).scale(self.s[i]);
            for j in 0..3 {
                acc = &acc + &kron(&p[i], &p[j]).scale(self.t[i][j]);
            }
        }
        acc.scale(0.25)
    }
}

fn expectation(rho: &ComplexMatrix, op: &ComplexMatrix) -> f64 {
    (rho * op).trace().re
}

pub fn bloch_decompose(s: &BipartiteState) -> Result<BlochDecomposition> {
    if s.dim_a() != 2 || s.dim_b() != 2 {
        return Err(Error::WrongDimension {
            dim_a: s.dim_a(),
            dim_b: s.dim_b(),
        });
    }
    let p = paulis();
    let id = ComplexMatrix::identity(2);
    let rho = s.matrix();
    let mut out = BlochDecomposition {
        r: [0.0; 3],
        s: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for i in 0..3 {
        out.r[i] = expectation(rho, &kron(&p[i], &id));
        out.s[i] = expectation(rho, &kron(&id, &p[i]));
        for j in 0..3 {
            out.t[i][j] = expectation(rho, &kron(&p[i], &p[j]));
        }
    }
    Ok(out)
}
