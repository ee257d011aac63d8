//! Parameter sweeps over the isotropic and `ρ₁` families, and threshold
//! location by grid scan plus bisection.

use rayon::prelude::*;
use serde::Serialize;

use crate::coherence::CoherenceMeasure;
use crate::io::{ser_sig17, ser_sig17_vec};
use crate::mub::{generate_mubs, MubSet};
use crate::naqc::{cost_matrix, Framework, PermutationDomain, VERDICT_TOL};
use crate::qmath::BipartiteState;
use crate::states::{isotropic, rho1};
use crate::witness::{eur_witness, Estimate, DEFAULT_R_BASIS, DEFAULT_S_BASIS};
use crate::{bound_value, Error, Result};

pub const THRESHOLD_GRID: usize = 200;
pub const MIN_THRESHOLD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Isotropic,
    Rho1,
}

/// The member of `family` at parameter `x`. `Rho1` exists only for `d = 2`.
pub fn family_state(family: Family, d: usize, x: f64) -> Result<BipartiteState> {
    match family {
        Family::Isotropic => isotropic(d, x),
        Family::Rho1 if d == 2 => rho1(x),
        Family::Rho1 => Err(Error::InvalidArgument(format!("rho1 is a two-qubit family, got d = {d}"))),
    }
}

/// `steps` evenly spaced points from `x_min` to `x_max` inclusive.
pub fn linspace(x_min: f64, x_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 steps, got {steps}")));
    }
    if !(x_min.is_finite() && x_max.is_finite()) || x_min >= x_max {
        return Err(Error::InvalidArgument(format!("empty range [{x_min}, {x_max}]")));
    }
    for (name, value) in [("x_min", x_min), ("x_max", x_max)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::OutOfRange { name, value });
        }
    }
    let h = (x_max - x_min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| if k == steps - 1 { x_max } else { x_min + k as f64 * h })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    /// Averaged-framework value.
    pub c_na: f64,
    /// Optimized-framework value.
    pub c_na_tilde: f64,
    pub bound: f64,
    pub e_t: Option<f64>,
    pub e_m: Option<f64>,
    pub e_f: Option<f64>,
    pub log_inv_c: Option<f64>,
}

fn sweep_row(family: Family, mubs: &MubSet, measure: CoherenceMeasure, bound: f64, x: f64) -> Result<SweepRow> {
    let st = family_state(family, mubs.dim(), x)?;
    let costs = cost_matrix(&st, mubs, measure)?;
    let w = eur_witness(&st, mubs, DEFAULT_R_BASIS, DEFAULT_S_BASIS)?;
    Ok(SweepRow {
        x,
        c_na: costs.averaged(),
        c_na_tilde: costs.max_assignment_value(PermutationDomain::All)?,
        bound,
        e_t: Some(w.e_t),
        e_m: Some(w.e_m),
        e_f: Some(w.e_f),
        log_inv_c: Some(w.log_inv_c),
    })
}

/// One row per entry of `xs`, evaluated in parallel and returned in input order.
pub fn sweep(family: Family, d: usize, measure: CoherenceMeasure, xs: &[f64]) -> Result<Vec<SweepRow>> {
    let mubs = generate_mubs(d)?;
    let bound = bound_value(measure, d)?.value;
    family_state(family, d, 0.5)?;
    xs.par_iter()
        .map(|&x| sweep_row(family, &mubs, measure, bound, x))
        .collect()
}

/// What a threshold search tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// `Averaged` or `Optimized`.
    Naqc(Framework),
    Estimate(Estimate),
}

struct MarginEvaluator {
    family: Family,
    mubs: MubSet,
    measure: CoherenceMeasure,
    criterion: Criterion,
    bound: f64,
}

impl MarginEvaluator {
    fn new(family: Family, d: usize, measure: CoherenceMeasure, criterion: Criterion) -> Result<Self> {
        if criterion == Criterion::Naqc(Framework::FixedPermutation) {
            return Err(Error::InvalidArgument(
                "thresholds need the averaged or optimized framework".into(),
            ));
        }
        family_state(family, d, 0.5)?;
        Ok(Self {
            family,
            mubs: generate_mubs(d)?,
            measure,
            criterion,
            bound: bound_value(measure, d)?.value,
        })
    }

    fn margin(&self, x: f64) -> Result<f64> {
        let st = family_state(self.family, self.mubs.dim(), x)?;
        match self.criterion {
            Criterion::Naqc(framework) => {
                let costs = cost_matrix(&st, &self.mubs, self.measure)?;
                let value = match framework {
                    Framework::Averaged => costs.averaged(),
                    _ => costs.max_assignment_value(PermutationDomain::All)?,
                };
                Ok(value - self.bound)
            }
            Criterion::Estimate(e) => {
                Ok(eur_witness(&st, &self.mubs, DEFAULT_R_BASIS, DEFAULT_S_BASIS)?.margin(e))
            }
        }
    }
}

/// Criterion margin at `x`: `C^na − C^m` for NAQC criteria, `−log₂ c − E`
/// for estimates. The criterion fires when this exceeds [`VERDICT_TOL`].
pub fn criterion_margin(
    family: Family,
    d: usize,
    measure: CoherenceMeasure,
    criterion: Criterion,
    x: f64,
) -> Result<f64> {
    MarginEvaluator::new(family, d, measure, criterion)?.margin(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdOptions {
    pub tol: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub grid: usize,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            x_min: 0.0,
            x_max: 1.0,
            grid: THRESHOLD_GRID,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub family: Family,
    pub d: usize,
    /// Absent for estimate criteria, which do not depend on a measure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<CoherenceMeasure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub framework: Option<Framework>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<Estimate>,
    #[serde(serialize_with = "ser_sig17_vec")]
    pub crossings: Vec<f64>,
    #[serde(serialize_with = "ser_sig17")]
    pub tolerance: f64,
}

/// Points where the criterion switches on or off, found by scanning
/// `opts.grid` evenly spaced points and bisecting each bracket where the
/// verdict flips to width `opts.tol`. Each crossing is the midpoint of its final bracket.
pub fn find_thresholds(
    family: Family,
    d: usize,
    measure: CoherenceMeasure,
    criterion: Criterion,
    opts: &ThresholdOptions,
) -> Result<ThresholdResult> {
    if !(opts.tol >= MIN_THRESHOLD_TOL) || !opts.tol.is_finite() {
        return Err(Error::OutOfRange { name: "tol", value: opts.tol });
    }
    let eval = MarginEvaluator::new(family, d, measure, criterion)?;
    let xs = linspace(opts.x_min, opts.x_max, opts.grid)?;
    let fired: Vec<bool> = xs
        .par_iter()
        .map(|&x| eval.margin(x).map(|m| m > VERDICT_TOL))
        .collect::<Result<_>>()?;

    let brackets: Vec<(f64, f64, bool)> = (1..xs.len())
        .filter(|&k| fired[k - 1] != fired[k])
        .map(|k| (xs[k - 1], xs[k], fired[k - 1]))
        .collect();
    let crossings = brackets
        .par_iter()
        .map(|&(mut lo, mut hi, lo_fired)| {
            while hi - lo > opts.tol {
                let mid = 0.5 * (lo + hi);
                if (eval.margin(mid)? > VERDICT_TOL) == lo_fired {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(0.5 * (lo + hi))
        })
        .collect::<Result<Vec<f64>>>()?;

    let (measure, framework, estimate) = match criterion {
        Criterion::Naqc(f) => (Some(measure), Some(f), None),
        Criterion::Estimate(e) => (None, None, Some(e)),
    };
    Ok(ThresholdResult {
        family,
        d,
        measure,
        framework,
        estimate,
        crossings,
        tolerance: opts.tol,
    })
}
