//! Dense complex linear algebra for the small matrices this crate works with
//! (at most `49 × 49`): products, Kronecker products, partial traces, a
//! cyclic Jacobi eigensolver for Hermitian matrices, and entropies.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// Hermiticity, trace and positivity tolerance for density matrices.
pub const STATE_TOL: f64 = 1e-10;

/// Jacobi stops once the off-diagonal Frobenius mass falls below this
/// (scaled by the matrix norm when that exceeds one).
pub const JACOBI_OFF_TOL: f64 = 1e-13;

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries. Rejects wrong lengths and
    /// non-finite entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// `|ψ⟩⟨ψ|` for an arbitrary (not necessarily normalized) ket.
    pub fn outer(ket: &[Complex64]) -> Self {
        Self::from_fn(ket.len(), ket.len(), |r, c| ket[r] * ket[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * k).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |m - m†|` entrywise. Infinite for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// `(m + m†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()) * 0.5
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn kron(&self, other: &Self) -> Self {
        kron(self, other)
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.data[k * rhs.cols + c];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product `a ⊗ b`, with composite row index `ra * b.rows + rb`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows * b.rows, a.cols * b.cols, |r, c| {
        a[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
    })
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Cyclic complex Jacobi.
///
/// Each rotation first removes the phase of `a_pq` with a diagonal unitary,
/// then applies the real symmetric Jacobi rotation to the resulting real
/// `2 × 2` block. Pivots are visited in fixed row-major order, so results
/// are deterministic.
pub fn hermitian_eigen(m: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let deviation = m.hermitian_deviation();
    if !(deviation <= tol) {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.rows;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_OFF_TOL * a.frobenius_norm().max(1.0);

    let off_mass = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += a[(p, q)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_mass(&a) < threshold;
    let mut sweep = 0;
    while !converged {
        if sweep == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps: JACOBI_MAX_SWEEPS,
            });
        }
        sweep += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / g;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * g);
                let t = if theta.is_infinite() {
                    0.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = diag(1, conj(phase)) · [[c, s], [-s, c]] on the (p, q) plane.
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;

                // A <- A J
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                // A <- J† A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                // V <- V J
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
        converged = off_mass(&a) < threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<Vec<f64>> {
    hermitian_eigen(m, tol).map(|e| e.values)
}

/// `exp(iH)` for Hermitian `H`, through its spectral decomposition.
pub fn unitary_exp(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(h, 1e-9)?;
    let n = h.rows;
    let v = &eig.vectors;
    let phases: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&l| Complex64::new(0.0, l).exp())
        .collect();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        (0..n).map(|k| v[(r, k)] * phases[k] * v[(c, k)].conj()).sum()
    }))
}

/// `d × d` Hermitian, positive-semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates every density-matrix invariant at [`STATE_TOL`].
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.rows,
                cols: mat.cols,
            });
        }
        if mat.rows == 0 {
            return Err(Error::InvalidState("empty matrix".into()));
        }
        if mat.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let dev = mat.hermitian_deviation();
        if dev > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {dev:e})"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = hermitian_eigenvalues(&mat, STATE_TOL)?[0];
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { mat })
    }

    /// Skips validation. Callers guarantee the invariants by construction.
    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        debug_assert!(mat.is_square());
        Self { mat }
    }

    /// `|ψ⟩⟨ψ|` for a ket normalized here.
    pub fn pure(ket: &[Complex64]) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite ket".into()));
        }
        let k: Vec<Complex64> = ket.iter().map(|z| z / norm).collect();
        Ok(Self::from_trusted(ComplexMatrix::outer(&k)))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::from_trusted(ComplexMatrix::identity(d).scale(1.0 / d as f64))
    }

    pub fn from_diagonal(p: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(p))
    }

    pub fn dim(&self) -> usize {
        self.mat.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.mat, STATE_TOL)
    }

    /// `U ρ U†`.
    pub fn rotated(&self, u: &ComplexMatrix) -> Self {
        Self::from_trusted(self.mat.conjugate_by(u).hermitian_part())
    }
}

/// Which party to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// State on `A ⊗ B`, composite index `a * dim_b + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    rho: DensityMatrix,
}

impl BipartiteState {
    pub fn new(dim_a: usize, dim_b: usize, mat: ComplexMatrix) -> Result<Self> {
        if mat.rows != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                expected: dim_a * dim_b,
                found: mat.rows,
            });
        }
        Ok(Self {
            dim_a,
            dim_b,
            rho: DensityMatrix::new(mat)?,
        })
    }

    pub fn from_density(dim_a: usize, dim_b: usize, rho: DensityMatrix) -> Result<Self> {
        if rho.dim() != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                expected: dim_a * dim_b,
                found: rho.dim(),
            });
        }
        Ok(Self { dim_a, dim_b, rho })
    }

    pub(crate) fn from_trusted(dim_a: usize, dim_b: usize, mat: ComplexMatrix) -> Self {
        debug_assert_eq!(mat.rows, dim_a * dim_b);
        Self {
            dim_a,
            dim_b,
            rho: DensityMatrix::from_trusted(mat),
        }
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Self {
        Self::from_trusted(a.dim(), b.dim(), kron(a.matrix(), b.matrix()))
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.rho.matrix()
    }

    pub fn partial_trace(&self, keep: Subsystem) -> DensityMatrix {
        partial_trace(self, keep)
    }

    /// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†`.
    pub fn locally_rotated(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> Self {
        let u = kron(ua, ub);
        Self {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            rho: self.rho.rotated(&u),
        }
    }
}

/// Reduced state of the kept party.
pub fn partial_trace(s: &BipartiteState, keep: Subsystem) -> DensityMatrix {
    let (da, db) = (s.dim_a, s.dim_b);
    let m = s.matrix();
    let out = match keep {
        Subsystem::A => ComplexMatrix::from_fn(da, da, |a, a2| {
            (0..db).map(|b| m[(a * db + b, a2 * db + b)]).sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(db, db, |b, b2| {
            (0..da).map(|a| m[(a * db + b, a * db + b2)]).sum()
        }),
    };
    DensityMatrix::from_trusted(out)
}

/// `tr ρ²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    // tr ρ² = Σ |ρ_ij|² for Hermitian ρ
    rho.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// `-Σ λ log₂ λ` with each λ clamped into `[0, 1]` first.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .map(|&l| l.clamp(0.0, 1.0))
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(entropy_of_spectrum(&rho.eigenvalues()?))
}

/// Shannon entropy in bits of a probability vector.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if let Some(bad) = p.iter().find(|&&x| !(x >= -1e-12)) {
        return Err(Error::NotADistribution(format!("entry {bad}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotADistribution(format!("sums to {total}")));
    }
    Ok(entropy_of_spectrum(p))
}

/// `H(x) = -x log₂ x - (1-x) log₂(1-x)`; `x` is clamped into `[0, 1]`.
pub fn binary_entropy(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    entropy_of_spectrum(&[x, 1.0 - x])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap()
    }

    #[test]
    fn eigenvalues_of_small_matrices() {
        let z = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert_eq!(hermitian_eigenvalues(&z, 1e-12).unwrap(), vec![-1.0, 1.0]);
        assert_eq!(
            hermitian_eigenvalues(&ComplexMatrix::identity(3), 1e-12).unwrap(),
            vec![1.0, 1.0, 1.0]
        );
        let ev = hermitian_eigenvalues(&sigma_x(), 1e-12).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_reconstructs_complex_hermitian() {
        let m = ComplexMatrix::from_vec(
            3,
            3,
            vec![
                c(2.0, 0.0),
                c(0.5, -1.0),
                c(0.0, 0.3),
                c(0.5, 1.0),
                c(-1.0, 0.0),
                c(0.25, 0.25),
                c(0.0, -0.3),
                c(0.25, -0.25),
                c(0.7, 0.0),
            ],
        )
        .unwrap();
        let e = hermitian_eigen(&m, 1e-12).unwrap();
        let d = ComplexMatrix::from_real_diagonal(&e.values);
        let back = d.conjugate_by(&e.vectors);
        assert!(back.max_abs_diff(&m) < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let vv = &e.vectors.adjoint() * &e.vectors;
        assert!(vv.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = ComplexMatrix::from_vec(2, 2, vec![c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)])
            .unwrap();
        assert!(matches!(
            hermitian_eigen(&m, 1e-10),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn entropies() {
        let pure = DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        assert_eq!(von_neumann_entropy(&pure).unwrap(), 0.0);
        let mixed = DensityMatrix::maximally_mixed(5);
        assert!((von_neumann_entropy(&mixed).unwrap() - 5f64.log2()).abs() < 1e-12);
        let rho = DensityMatrix::from_diagonal(&[0.75, 0.25]).unwrap();
        let expected = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        assert!((von_neumann_entropy(&rho).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.811_278).abs() < 1e-6);

        assert_eq!(binary_entropy(0.5), 1.0);
        assert_eq!(binary_entropy(0.0), 0.0);
        let h = binary_entropy(0.5 + 3f64.sqrt() / 6.0);
        assert!((h - 0.744_007_551_249).abs() < 1e-11, "{h}");
        assert!(matches!(
            shannon_entropy(&[0.5, 0.6]),
            Err(Error::NotADistribution(_))
        ));
        assert!(matches!(
            shannon_entropy(&[1.5, -0.5]),
            Err(Error::NotADistribution(_))
        ));
    }

    #[test]
    fn purity_values() {
        let rho = DensityMatrix::from_diagonal(&[0.75, 0.25]).unwrap();
        assert!((purity(&rho) - 0.625).abs() < 1e-15);
        assert!((purity(&DensityMatrix::maximally_mixed(4)) - 0.25).abs() < 1e-15);
        let plus = DensityMatrix::pure(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((purity(&plus) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn kron_index_order() {
        let i4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(i4, ComplexMatrix::identity(4));
        let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        assert_eq!(kron(&p0, &p1), ComplexMatrix::from_real_diagonal(&[0., 1., 0., 0.]));
        let xx = kron(&sigma_x(), &sigma_x());
        let ket00 = vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)];
        let out = xx.apply(&ket00);
        assert_eq!(out[3], c(1.0, 0.0));
        assert!(out[..3].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn partial_traces() {
        let s = 0.5f64.sqrt();
        let bell = DensityMatrix::pure(&[c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)]).unwrap();
        let st = BipartiteState::from_density(2, 2, bell).unwrap();
        let rb = partial_trace(&st, Subsystem::B);
        assert!(rb.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);

        let classical = BipartiteState::new(
            2,
            2,
            ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]),
        )
        .unwrap();
        let ra = partial_trace(&classical, Subsystem::A);
        assert!(ra.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);

        let a = DensityMatrix::from_diagonal(&[0.2, 0.8]).unwrap();
        let b = DensityMatrix::from_diagonal(&[0.1, 0.3, 0.6]).unwrap();
        let prod = BipartiteState::product(&a, &b);
        assert!(prod.partial_trace(Subsystem::B).matrix().max_abs_diff(b.matrix()) < 1e-15);
        assert!(prod.partial_trace(Subsystem::A).matrix().max_abs_diff(a.matrix()) < 1e-15);
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::from_diagonal(&[0.6, 0.6]).is_err());
        assert!(DensityMatrix::from_diagonal(&[1.2, -0.2]).is_err());
        let non_herm =
            ComplexMatrix::from_vec(2, 2, vec![c(0.5, 0.), c(0.1, 0.), c(0.2, 0.), c(0.5, 0.)])
                .unwrap();
        assert!(DensityMatrix::new(non_herm).is_err());
        assert!(ComplexMatrix::from_vec(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(BipartiteState::new(3, 2, ComplexMatrix::identity(4).scale(0.25)).is_err());
    }

    #[test]
    fn unitary_exp_is_unitary() {
        let h = ComplexMatrix::from_vec(2, 2, vec![c(0.3, 0.), c(0.2, -0.7), c(0.2, 0.7), c(-1.1, 0.)])
            .unwrap();
        let u = unitary_exp(&h).unwrap();
        let uu = &u * &u.adjoint();
        assert!(uu.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-13);
        assert_eq!(unitary_exp(&ComplexMatrix::zeros(3, 3)).unwrap(), ComplexMatrix::identity(3));
        // exp(i θ σ_x) = cos θ I + i sin θ σ_x
        let u = unitary_exp(&sigma_x().scale(0.4)).unwrap();
        assert!((u[(0, 0)] - c(0.4f64.cos(), 0.0)).norm() < 1e-14);
        assert!((u[(0, 1)] - c(0.0, 0.4f64.sin())).norm() < 1e-14);
    }
}
