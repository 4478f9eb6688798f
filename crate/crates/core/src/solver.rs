//! Coarse Nash, weighted Nash and weak-Pareto solutions on the finite
//! candidate pool of a problem, plus a brute-force grid oracle over the hull.
//!
//! The candidate pool is the deduplicated generator set. Only the pruned
//! generators act as dominators: for a monotone improving set, anything a
//! weakly dominated generator beats is also beaten by the generator above it.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::improving::{ImprovingSet, WeightVector, DEFAULT_TOL};
use crate::model::{BargainingProblem, SolutionSet, UtilityVector, MAX_GRID_POINTS};

/// Argmax band on weighted log scores.
pub const ARGMAX_TOL: f64 = 1e-9;

/// Pools at least this large are scanned in parallel.
const PAR_THRESHOLD: usize = 256;

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("tolerance must be nonnegative, got {tol}")))
    }
}

fn log_dominates(set: &ImprovingSet, y_ln: &[f64], x_ln: &[f64], tol: f64, buf: &mut Vec<f64>) -> bool {
    buf.clear();
    buf.extend(y_ln.iter().zip(x_ln).map(|(a, b)| a - b));
    set.contains_slice(buf, tol)
}

/// `F^A(S)`: pool points that no pool point dominates through `A`.
pub fn coarse_nash(set: &ImprovingSet, problem: &BargainingProblem) -> Result<SolutionSet> {
    coarse_nash_with_tol(set, problem, DEFAULT_TOL)
}

pub fn coarse_nash_with_tol(set: &ImprovingSet, problem: &BargainingProblem, tol: f64) -> Result<SolutionSet> {
    check_tol(tol)?;
    set.check_dim(problem.dim())?;
    if let ImprovingSet::Custom(custom) = set {
        if !custom.is_certified() {
            return Err(Error::InvalidImprovingSet {
                condition: "certification".into(),
                detail: format!("custom set `{}` must be certified before solving", custom.name()),
            });
        }
        if !set.is_monotone() {
            log::warn!(
                "custom set `{}` is not monotone on samples; generator-level answers may differ from the hull, cross-check with the grid oracle",
                custom.name()
            );
        }
    }

    let pool = problem.generators();
    let dominators = if set.is_monotone() {
        problem.pruned_generators()
    } else {
        pool.to_vec()
    };
    let dom_ln: Vec<Vec<f64>> = dominators.iter().map(UtilityVector::ln).collect();
    let undominated = |x: &UtilityVector| {
        let x_ln = x.ln();
        let mut buf = Vec::with_capacity(x_ln.len());
        !dom_ln
            .iter()
            .any(|y_ln| log_dominates(set, y_ln, &x_ln, tol, &mut buf))
    };
    let chosen: Vec<UtilityVector> = if pool.len() >= PAR_THRESHOLD {
        pool.par_iter().filter(|x| undominated(x)).cloned().collect()
    } else {
        pool.iter().filter(|x| undominated(x)).cloned().collect()
    };
    SolutionSet::new(chosen, pool.to_vec())
}

/// `F^w(S)`: pool points within `ARGMAX_TOL` of the best weighted log score.
pub fn weighted_nash(w: &WeightVector, problem: &BargainingProblem) -> Result<SolutionSet> {
    weighted_nash_with_tol(w, problem, ARGMAX_TOL)
}

pub fn weighted_nash_with_tol(w: &WeightVector, problem: &BargainingProblem, tol: f64) -> Result<SolutionSet> {
    check_tol(tol)?;
    if w.dim() != problem.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: problem.dim(),
        });
    }
    let pool = problem.generators();
    let scores: Vec<f64> = pool.iter().map(|x| w.log_score(x)).collect();
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let chosen = pool
        .iter()
        .zip(&scores)
        .filter(|(_, s)| best - **s <= tol)
        .map(|(x, _)| x.clone())
        .collect();
    SolutionSet::new(chosen, pool.to_vec())
}

/// `F^N(S)`, the maximizers of the utility product.
pub fn nash(problem: &BargainingProblem) -> Result<SolutionSet> {
    weighted_nash(&WeightVector::uniform(problem.dim())?, problem)
}

pub fn nash_with_tol(problem: &BargainingProblem, tol: f64) -> Result<SolutionSet> {
    weighted_nash_with_tol(&WeightVector::uniform(problem.dim())?, problem, tol)
}

/// Weakly Pareto optimal pool points.
pub fn weak_pareto(problem: &BargainingProblem) -> Result<SolutionSet> {
    coarse_nash(&ImprovingSet::Orthant, problem)
}

pub fn weak_pareto_with_tol(problem: &BargainingProblem, tol: f64) -> Result<SolutionSet> {
    coarse_nash_with_tol(&ImprovingSet::Orthant, problem, tol)
}

/// Exhaustive dominance over a log-spaced grid of hull points.
///
/// Axis `i` holds `top_i * exp(-k * resolution)` for `k = 0, 1, ...` down to
/// the smallest generator coordinate, where `top_i` is the largest one. The
/// grid is kept only where it lies inside the hull.
pub struct GridOracle<'a> {
    set: &'a ImprovingSet,
    tol: f64,
    points: Vec<UtilityVector>,
    /// Logs of the points that may dominate others, by descending log-sum.
    dominators_ln: Vec<Vec<f64>>,
}

impl<'a> GridOracle<'a> {
    pub fn new(set: &'a ImprovingSet, problem: &BargainingProblem, resolution: f64) -> Result<Self> {
        if !(resolution.is_finite() && resolution > 0.0) {
            return Err(Error::InvalidResolution(resolution));
        }
        set.check_dim(problem.dim())?;
        let n = problem.dim();
        let gens = problem.generators();
        let axes: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let top = gens.iter().map(|g| g.as_slice()[i]).fold(0.0, f64::max);
                let bottom = gens.iter().map(|g| g.as_slice()[i]).fold(f64::INFINITY, f64::min);
                let steps = ((top / bottom).ln() / resolution + 1e-9).floor() as usize;
                (0..=steps).map(|k| top * (-(k as f64) * resolution).exp()).collect()
            })
            .collect();
        let estimate: f64 = axes.iter().map(|a| a.len() as f64).product();
        if estimate > MAX_GRID_POINTS {
            return Err(Error::GridTooLarge {
                estimate,
                limit: MAX_GRID_POINTS,
            });
        }

        // Row-major over index tuples; index 0 on an axis is its top value.
        let dims: Vec<usize> = axes.iter().map(Vec::len).collect();
        let total = estimate as usize;
        let decode = |mut flat: usize| {
            let mut idx = vec![0; n];
            for i in (0..n).rev() {
                idx[i] = flat % dims[i];
                flat /= dims[i];
            }
            idx
        };
        let point_at = |idx: &[usize]| UtilityVector::new(idx.iter().enumerate().map(|(i, &k)| axes[i][k]).collect());
        let inside: Vec<bool> = (0..total)
            .into_par_iter()
            .map(|flat| {
                let p = point_at(&decode(flat)).expect("grid values are positive");
                problem.contains_unchecked(&p)
            })
            .collect();

        let mut strides = vec![1; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let monotone = set.is_monotone();
        let mut points = Vec::new();
        let mut dominators = Vec::new();
        for flat in (0..total).filter(|&f| inside[f]) {
            let idx = decode(flat);
            let p = point_at(&idx)?;
            // grid-maximal: stepping up any axis leaves the hull
            let maximal = (0..n).all(|i| idx[i] == 0 || !inside[flat - strides[i]]);
            if maximal || !monotone {
                dominators.push(p.ln());
            }
            points.push(p);
        }
        dominators.sort_by(|a, b| b.iter().sum::<f64>().total_cmp(&a.iter().sum::<f64>()));
        Ok(Self {
            set,
            tol: DEFAULT_TOL,
            points,
            dominators_ln: dominators,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Number of grid points inside the hull.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[UtilityVector] {
        &self.points
    }

    /// A grid point that dominates `x`, if any.
    pub fn refutation(&self, x: &UtilityVector) -> Option<UtilityVector> {
        let x_ln = x.ln();
        let mut buf = Vec::with_capacity(x_ln.len());
        self.dominators_ln
            .iter()
            .find(|y| log_dominates(self.set, y, &x_ln, self.tol, &mut buf))
            .map(|y| UtilityVector::new(y.iter().map(|v| v.exp()).collect()).expect("exp is positive"))
    }

    /// Grid points not dominated by any grid point.
    pub fn undominated(&self) -> Vec<UtilityVector> {
        self.points
            .par_iter()
            .filter(|x| {
                let x_ln = x.ln();
                let mut buf = Vec::with_capacity(x_ln.len());
                !self
                    .dominators_ln
                    .iter()
                    .any(|y| log_dominates(self.set, y, &x_ln, self.tol, &mut buf))
            })
            .cloned()
            .collect()
    }
}

/// Undominated grid points over the hull, as a solution on the grid pool.
pub fn grid_oracle(set: &ImprovingSet, problem: &BargainingProblem, resolution: f64) -> Result<SolutionSet> {
    let oracle = GridOracle::new(set, problem, resolution)?;
    SolutionSet::new(oracle.undominated(), oracle.points)
}
