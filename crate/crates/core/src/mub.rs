//! Complete sets of `d + 1` mutually unbiased bases for prime `d`.
//!
//! Basis index `l` runs over `0..=d`. The observable `A_j` (`j = 1..=d+1`)
//! corresponds to basis `l = j - 1`, and outcome labels are `0..d`.
//!
//! For odd primes, basis 0 is computational, basis `d` is Fourier, and
//! bases `1..d` carry quadratic phases `exp(2πi·l(m+n)²/d)`. The quadratic
//! formula degenerates at `d = 2`, so the qubit set is the eigenbases of
//! `σ_z`, `σ_x`, `σ_y`, each listed `+1` eigenvector first.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::io::ser_sig17;
use crate::qmath::ComplexMatrix;
use crate::{Error, Result};

/// An ordered list of `d` vectors, stored with their first non-negligible
/// amplitude real and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    dim: usize,
    vectors: Vec<Vec<Complex64>>,
    /// Columns are the basis vectors.
    unitary: ComplexMatrix,
}

impl Basis {
    /// Checks shape only; orthonormality is reported by [`Basis::orthonormality_error`].
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = vectors.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("empty basis".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        let unitary = ComplexMatrix::from_fn(dim, dim, |r, c| vectors[c][r]);
        Ok(Self {
            dim,
            vectors,
            unitary,
        })
    }

    pub fn computational(dim: usize) -> Self {
        let vectors = (0..dim)
            .map(|m| {
                (0..dim)
                    .map(|n| Complex64::new(if m == n { 1.0 } else { 0.0 }, 0.0))
                    .collect()
            })
            .collect();
        Self::new(vectors).expect("square by construction")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn vector(&self, m: usize) -> &[Complex64] {
        &self.vectors[m]
    }

    /// The unitary whose columns are the basis vectors.
    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    /// `max |⟨φ_m|φ_n⟩ - δ_mn|`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut err = 0.0f64;
        for (m, u) in self.vectors.iter().enumerate() {
            for (n, v) in self.vectors.iter().enumerate() {
                let ip = inner(u, v);
                let target = if m == n { 1.0 } else { 0.0 };
                err = err.max((ip - target).norm());
            }
        }
        err
    }
}

/// `⟨u|v⟩`.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MubSet {
    dim: usize,
    bases: Vec<Basis>,
}

impl MubSet {
    /// Assembles a set without checking unbiasedness (see [`validate_mubs`]).
    pub fn from_bases(bases: Vec<Basis>) -> Result<Self> {
        let dim = bases.first().map(Basis::dim).ok_or_else(|| {
            Error::InvalidArgument("a MUB set needs at least one basis".into())
        })?;
        if let Some(b) = bases.iter().find(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: b.dim(),
            });
        }
        Ok(Self { dim, bases })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn basis(&self, l: usize) -> Result<&Basis> {
        self.bases.get(l).ok_or(Error::IndexOutOfRange {
            index: l,
            len: self.bases.len(),
        })
    }

    pub fn into_bases(self) -> Vec<Basis> {
        self.bases
    }
}

pub fn is_prime(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    if d < 4 {
        return true;
    }
    if d % 2 == 0 {
        return false;
    }
    let mut k = 3;
    while k * k <= d {
        if d % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

/// Amplitude `exp(2πi·k/d)/√d` with `k` reduced mod `d`.
fn root_of_unity(k: u64, d: u64, norm: f64) -> Complex64 {
    let k = k % d;
    if k == 0 {
        return Complex64::new(norm, 0.0);
    }
    Complex64::from_polar(norm, TAU * k as f64 / d as f64)
}

/// Builds a basis from integer phase exponents `k[m][n]` (amplitude
/// `exp(2πi·k/d)/√d`), shifted so that amplitude 0 of each vector is real.
fn phase_basis(d: u64, exponent: impl Fn(u64, u64) -> u64) -> Basis {
    let norm = 1.0 / (d as f64).sqrt();
    let vectors = (0..d)
        .map(|m| {
            let k0 = exponent(m, 0) % d;
            (0..d)
                .map(|n| root_of_unity(exponent(m, n) % d + d - k0, d, norm))
                .collect()
        })
        .collect();
    Basis::new(vectors).expect("square by construction")
}

fn qubit_mubs() -> Vec<Basis> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    vec![
        Basis::computational(2),
        Basis::new(vec![vec![c(s, 0.), c(s, 0.)], vec![c(s, 0.), c(-s, 0.)]]).unwrap(),
        Basis::new(vec![vec![c(s, 0.), c(0., s)], vec![c(s, 0.), c(0., -s)]]).unwrap(),
    ]
}

/// The `d + 1` mutually unbiased bases for prime `d`.
pub fn generate_mubs(d: usize) -> Result<MubSet> {
    if !is_prime(d as u64) {
        return Err(Error::UnsupportedDimension(d));
    }
    if d == 2 {
        return MubSet::from_bases(qubit_mubs());
    }
    let du = d as u64;
    let mut bases = Vec::with_capacity(d + 1);
    bases.push(Basis::computational(d));
    for l in 1..du {
        bases.push(phase_basis(du, |m, n| {
            let s = (m + n) % du;
            (l * s % du) * s % du
        }));
    }
    bases.push(phase_basis(du, |m, n| m * n % du));
    MubSet::from_bases(bases)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MubValidation {
    #[serde(serialize_with = "ser_sig17")]
    pub max_orthonormality_error: f64,
    #[serde(serialize_with = "ser_sig17")]
    pub max_unbiasedness_deviation: f64,
    pub passed: bool,
}

/// Worst orthonormality error within bases and worst deviation of
/// `|⟨φ_a^l|φ_b^l'⟩|²` from `1/d` across distinct bases.
pub fn validate_mubs(set: &MubSet, tol: f64) -> MubValidation {
    let d = set.dim() as f64;
    let ortho = set
        .bases()
        .iter()
        .map(Basis::orthonormality_error)
        .fold(0.0, f64::max);
    let mut unbiased = 0.0f64;
    for (l, b1) in set.bases().iter().enumerate() {
        for b2 in &set.bases()[l + 1..] {
            for u in b1.vectors() {
                for v in b2.vectors() {
                    unbiased = unbiased.max((inner(u, v).norm_sqr() - 1.0 / d).abs());
                }
            }
        }
    }
    MubValidation {
        max_orthonormality_error: ortho,
        max_unbiasedness_deviation: unbiased,
        passed: ortho <= tol && unbiased <= tol,
    }
}
