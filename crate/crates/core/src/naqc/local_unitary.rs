//! Local-unitary enhancement of the optimized criterion: maximize
//! `C̃^na((U_A ⊗ U_B) ρ (U_A ⊗ U_B)†)` over local unitaries.
//!
//! Each unitary is `exp(i Σ_k θ_k G_k)` over the `d² − 1` generalized
//! Gell-Mann generators. The search is derivative-free: restart 0 starts at
//! the identity, later restarts at angles uniform in `[−π, π)`, and each
//! runs coordinate ascent with step halving. The returned value is never
//! below the unrotated `C̃^na`.

use num_complex::Complex64;

use crate::coherence::{bound_value, CoherenceMeasure};
use crate::mub::MubSet;
use crate::qmath::{unitary_exp, BipartiteState, ComplexMatrix};
use crate::rng::SeededRng;
use crate::Result;

use super::{cost_matrix, report_from_costs, NaqcReport, PermutationDomain};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalSearchOptions {
    pub restarts: usize,
    pub max_sweeps: usize,
    /// Minimum improvement for a coordinate move to be accepted.
    pub tol: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub seed: u64,
    pub domain: PermutationDomain,
}

impl Default for LocalSearchOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_sweeps: 200,
            tol: 1e-7,
            initial_step: 0.5,
            min_step: 1e-6,
            seed: 0,
            domain: PermutationDomain::All,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryPair {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
}

/// Generalized Gell-Mann matrices: `d(d−1)/2` symmetric, `d(d−1)/2`
/// antisymmetric, then `d − 1` diagonal, all trace-free and Hermitian.
pub fn gell_mann_generators(d: usize) -> Vec<ComplexMatrix> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut out = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = one;
            m[(k, j)] = one;
            out.push(m);
        }
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = -i;
            m[(k, j)] = i;
            out.push(m);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let diag: Vec<f64> = (0..d)
            .map(|j| match j.cmp(&l) {
                std::cmp::Ordering::Less => norm,
                std::cmp::Ordering::Equal => -(l as f64) * norm,
                std::cmp::Ordering::Greater => 0.0,
            })
            .collect();
        out.push(ComplexMatrix::from_real_diagonal(&diag));
    }
    out
}

struct Objective<'a> {
    state: &'a BipartiteState,
    mubs: &'a MubSet,
    measure: CoherenceMeasure,
    domain: PermutationDomain,
    generators: Vec<ComplexMatrix>,
}

impl Objective<'_> {
    fn unitary(&self, angles: &[f64]) -> Result<ComplexMatrix> {
        let d = self.mubs.dim();
        let mut h = ComplexMatrix::zeros(d, d);
        for (g, &t) in self.generators.iter().zip(angles) {
            if t != 0.0 {
                h = &h + &g.scale(t);
            }
        }
        unitary_exp(&h)
    }

    fn pair(&self, angles: &[f64]) -> Result<UnitaryPair> {
        let k = self.generators.len();
        Ok(UnitaryPair {
            a: self.unitary(&angles[..k])?,
            b: self.unitary(&angles[k..])?,
        })
    }

    fn rotated(&self, angles: &[f64]) -> Result<BipartiteState> {
        let u = self.pair(angles)?;
        Ok(self.state.locally_rotated(&u.a, &u.b))
    }

    fn value(&self, angles: &[f64]) -> Result<f64> {
        cost_matrix(&self.rotated(angles)?, self.mubs, self.measure)?
            .max_assignment_value(self.domain)
    }
}

/// Coordinate ascent from `start`; returns the final angles and value.
fn ascend(
    objective: &Objective<'_>,
    mut angles: Vec<f64>,
    opts: &LocalSearchOptions,
) -> Result<(Vec<f64>, f64)> {
    let mut best = objective.value(&angles)?;
    let mut step = opts.initial_step;
    for _ in 0..opts.max_sweeps {
        let mut improved = false;
        for k in 0..angles.len() {
            for delta in [step, -step] {
                let old = angles[k];
                angles[k] = old + delta;
                let v = objective.value(&angles)?;
                if v > best + opts.tol {
                    best = v;
                    improved = true;
                    break;
                }
                angles[k] = old;
            }
        }
        if !improved {
            step *= 0.5;
            if step < opts.min_step {
                break;
            }
        }
    }
    Ok((angles, best))
}

/// Best `C̃^na` found over local unitaries, with the unitaries reaching it.
pub fn local_unitary_maximize(
    s: &BipartiteState,
    mubs: &MubSet,
    measure: CoherenceMeasure,
    opts: &LocalSearchOptions,
) -> Result<(NaqcReport, UnitaryPair)> {
    let bound = bound_value(measure, mubs.dim())?.value;
    let objective = Objective {
        state: s,
        mubs,
        measure,
        domain: opts.domain,
        generators: gell_mann_generators(mubs.dim()),
    };
    let n = 2 * objective.generators.len();
    let mut rng = SeededRng::new(opts.seed);

    let (mut best_angles, mut best_value) = ascend(&objective, vec![0.0; n], opts)?;
    for _ in 1..opts.restarts.max(1) {
        let start: Vec<f64> = (0..n)
            .map(|_| rng.uniform_in(-std::f64::consts::PI, std::f64::consts::PI))
            .collect();
        let (angles, value) = ascend(&objective, start, opts)?;
        if value > best_value {
            best_angles = angles;
            best_value = value;
        }
    }

    let rotated = objective.rotated(&best_angles)?;
    let costs = cost_matrix(&rotated, mubs, measure)?;
    let report = report_from_costs(&costs, measure, bound, opts.domain)?;
    Ok((report, objective.pair(&best_angles)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::generate_mubs;
    use crate::naqc::naqc_optimized;
    use crate::states::{isotropic, random_bipartite};

    fn quick(seed: u64) -> LocalSearchOptions {
        LocalSearchOptions {
            restarts: 3,
            max_sweeps: 30,
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn generators_are_traceless_hermitian_and_orthogonal() {
        for d in [2, 3, 5] {
            let g = gell_mann_generators(d);
            assert_eq!(g.len(), d * d - 1);
            for (a, ga) in g.iter().enumerate() {
                assert!(ga.trace().norm() < 1e-14);
                assert!(ga.hermitian_deviation() < 1e-15);
                for (b, gb) in g.iter().enumerate() {
                    let ip = (ga * gb).trace().re;
                    let want = if a == b { 2.0 } else { 0.0 };
                    assert!((ip - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn never_worse_than_unrotated_and_deterministic() {
        let m = generate_mubs(2).unwrap();
        let st = random_bipartite(2, 2, 17).unwrap();
        let base = naqc_optimized(&st, &m, CoherenceMeasure::L1).unwrap().value;
        let (r1, u1) = local_unitary_maximize(&st, &m, CoherenceMeasure::L1, &quick(4)).unwrap();
        let (r2, u2) = local_unitary_maximize(&st, &m, CoherenceMeasure::L1, &quick(4)).unwrap();
        assert!(r1.value >= base - 1e-9);
        assert_eq!(r1, r2);
        assert_eq!(u1, u2);
        let uu = &u1.a * &u1.a.adjoint();
        assert!(uu.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn maximally_mixed_stays_zero() {
        let m = generate_mubs(3).unwrap();
        let st = isotropic(3, 1.0 / 9.0).unwrap();
        let opts = LocalSearchOptions {
            restarts: 2,
            max_sweeps: 3,
            ..Default::default()
        };
        let (r, _) = local_unitary_maximize(&st, &m, CoherenceMeasure::RelativeEntropy, &opts).unwrap();
        assert!(r.value.abs() < 1e-10);
    }
}
