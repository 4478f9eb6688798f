//! Separating weights for improving sets and the solution refinements they
//! imply.
//!
//! Every improving set lies inside some open half-space `{z : w·z > 0}` with
//! `w` in the simplex, so the weighted Nash solution for `w` refines the
//! coarse solution. Built-in sets get `w` in closed form; custom sets get it
//! from a margin-maximizing linear program over sampled members.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::axioms::Status;
use crate::error::{Error, Result};
use crate::improving::{ImprovingSet, WeightVector, DEFAULT_TOL};
use crate::model::BargainingProblem;
use crate::sampling;
use crate::solver;

/// Required margin `w·z >= δ` on normalized samples of a custom set.
pub const SEPARATION_MARGIN: f64 = 1e-6;

/// Tolerance for half-space inclusion on samples.
const INCLUSION_TOL: f64 = 1e-12;

const SAMPLE_RADII: (f64, f64) = (0.1, 10.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    LinearProgram,
}

#[derive(Debug, Clone)]
pub struct Separation {
    pub weight: WeightVector,
    pub method: Method,
    /// Smallest `w·z` over the normalized samples (linear program only).
    pub margin: Option<f64>,
    pub samples: usize,
    /// Independent geometric verdict for two or three players: whether the
    /// origin is interior to the convex hull of the samples and unit vectors.
    pub origin_interior: Option<bool>,
}

/// Finds `w` with `A ⊆ {z : w·z > 0}`.
///
/// # Errors
///
/// [`Error::NoSeparatingWeight`] when no weight achieves the margin on the
/// samples, with the binding samples as certificate.
pub fn separating_weight(set: &ImprovingSet, n: usize, samples: usize, seed: u64) -> Result<Separation> {
    set.check_dim(n)?;
    let analytic = |weight| Separation {
        weight,
        method: Method::Analytic,
        margin: None,
        samples: 0,
        origin_interior: None,
    };
    match set {
        ImprovingSet::HalfSpace(w) => return Ok(analytic(w.clone())),
        ImprovingSet::Orthant | ImprovingSet::NashThreshold(_) => {
            return Ok(analytic(WeightVector::uniform(n)?))
        }
        ImprovingSet::Cone(ws) => {
            let mut mean = vec![0.0; n];
            for w in ws {
                for (m, v) in mean.iter_mut().zip(w.as_slice()) {
                    *m += v / ws.len() as f64;
                }
            }
            return Ok(analytic(WeightVector::normalized(mean)?));
        }
        ImprovingSet::Custom(_) => {}
    }

    let mut rng = sampling::rng(seed);
    let members = sampling::sample_members(set, n, samples.max(1), SAMPLE_RADII, DEFAULT_TOL, &mut rng)
        .ok_or_else(|| Error::InvalidParameter("could not sample members of the set".into()))?;
    // Directions only: the constraint w·z >= δ is scale-free after normalizing.
    let mut dirs: Vec<Vec<f64>> = members
        .iter()
        .map(|z| {
            let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
            z.iter().map(|v| v / norm).collect()
        })
        .collect();
    let (w, margin) = max_margin_weight(&dirs, n)?;
    let origin_interior = if n <= 3 {
        dirs.extend((0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()));
        Some(origin_interior_to_hull(&dirs)?)
    } else {
        None
    };
    if margin < SEPARATION_MARGIN {
        let mut binding: Vec<(f64, &Vec<f64>)> = members
            .iter()
            .zip(&dirs)
            .map(|(z, d)| (dot(&w, d), z))
            .collect();
        binding.sort_by(|a, b| a.0.total_cmp(&b.0));
        return Err(Error::NoSeparatingWeight {
            margin,
            certificate: binding.into_iter().take(n + 1).map(|(_, z)| z.clone()).collect(),
        });
    }
    Ok(Separation {
        weight: WeightVector::normalized(w.iter().map(|v| v.max(0.0)).collect())?,
        method: Method::LinearProgram,
        margin: Some(margin),
        samples: members.len(),
        origin_interior,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Maximizes `t` subject to `w·d >= t` for every direction, `w` in the
/// simplex. Constraints are added in rounds, most violated first.
fn max_margin_weight(dirs: &[Vec<f64>], n: usize) -> Result<(Vec<f64>, f64)> {
    let lp_err = |e: minilp::Error| Error::InvalidParameter(format!("separation program failed: {e}"));
    let mut active: Vec<usize> = (0..dirs.len().min(200)).collect();
    for _ in 0..200 {
        let mut lp = Problem::new(OptimizationDirection::Maximize);
        let w: Vec<_> = (0..n).map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
        let t = lp.add_var(1.0, (-2.0, 2.0));
        lp.add_constraint(w.iter().map(|&v| (v, 1.0)), ComparisonOp::Eq, 1.0);
        for &k in &active {
            let expr: Vec<_> = w
                .iter()
                .zip(&dirs[k])
                .map(|(&v, &c)| (v, c))
                .chain(std::iter::once((t, -1.0)))
                .collect();
            lp.add_constraint(expr, ComparisonOp::Ge, 0.0);
        }
        let sol = lp.solve().map_err(lp_err)?;
        let wv: Vec<f64> = w.iter().map(|&v| *sol.var_value(v)).collect();
        let t_star = *sol.var_value(t);
        let mut violated: Vec<(f64, usize)> = dirs
            .iter()
            .enumerate()
            .map(|(k, d)| (dot(&wv, d), k))
            .filter(|(m, _)| *m < t_star - 1e-10)
            .collect();
        if violated.is_empty() {
            return Ok((wv, t_star));
        }
        violated.sort_by(|a, b| a.0.total_cmp(&b.0));
        active.extend(violated.into_iter().take(50).map(|(_, k)| k));
    }
    Err(Error::InvalidParameter("separation program did not converge".into()))
}

/// Whether the origin is an interior point of the convex hull of `points`,
/// for two or three dimensions.
///
/// The origin is not interior exactly when some nonzero `u` has `u·p >= 0`
/// for every point. In the plane this is an angular gap of at least π. In
/// space, candidate normals are cross products of point pairs and of points
/// with axes, drawn from a subsample of at most 200 points; each candidate is
/// then checked against every point.
pub fn origin_interior_to_hull(points: &[Vec<f64>]) -> Result<bool> {
    let n = points.first().map_or(0, Vec::len);
    let nonzero: Vec<&Vec<f64>> = points
        .iter()
        .filter(|p| p.iter().any(|v| v.abs() > 1e-15))
        .collect();
    if nonzero.is_empty() {
        return Ok(false);
    }
    match n {
        2 => {
            let mut angles: Vec<f64> = nonzero.iter().map(|p| p[1].atan2(p[0])).collect();
            angles.sort_by(f64::total_cmp);
            let wrap = angles[0] + std::f64::consts::TAU - angles[angles.len() - 1];
            let gap = angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
            Ok(gap < std::f64::consts::PI - 1e-12)
        }
        3 => {
            let cross = |a: &[f64], b: &[f64]| {
                [
                    a[1] * b[2] - a[2] * b[1],
                    a[2] * b[0] - a[0] * b[2],
                    a[0] * b[1] - a[1] * b[0],
                ]
            };
            let step = nonzero.len().div_ceil(200);
            let sub: Vec<&Vec<f64>> = nonzero.iter().step_by(step).copied().collect();
            let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
            let supports = |u: &[f64; 3], pts: &[&Vec<f64>]| {
                let un = dot(u, u).sqrt();
                un > 1e-12
                    && pts.iter().all(|p| {
                        let pn = dot(p, p).sqrt();
                        dot(u, p) >= -1e-12 * un * pn
                    })
            };
            for (i, p) in sub.iter().enumerate() {
                let others = sub[i + 1..]
                    .iter()
                    .map(|q| cross(p, q))
                    .chain(axes.iter().map(|e| cross(p, e)));
                for u in others {
                    for cand in [u, [-u[0], -u[1], -u[2]]] {
                        if supports(&cand, &sub) && supports(&cand, &nonzero) {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }
        _ => Err(Error::UnsupportedDimension { n, max: 3 }),
    }
}

/// Outcome of a sampled containment check.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCheck {
    pub status: Status,
    pub samples: usize,
    pub violations: usize,
    pub witness: Option<Vec<f64>>,
}

impl SampledCheck {
    fn from_violations(samples: usize, bad: Vec<Vec<f64>>) -> Self {
        Self {
            status: if bad.is_empty() { Status::Pass } else { Status::Fail },
            samples,
            violations: bad.len(),
            witness: bad.into_iter().next(),
        }
    }

    fn skipped() -> Self {
        Self {
            status: Status::Skipped,
            samples: 0,
            violations: 0,
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn members(set: &ImprovingSet, n: usize, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let mut rng = sampling::rng(seed);
    sampling::sample_members(set, n, count, SAMPLE_RADII, DEFAULT_TOL, &mut rng)
        .ok_or_else(|| Error::InvalidParameter("could not sample members of the set".into()))
}

/// Checks `w·z > 0` on sampled members `z` of `A`.
pub fn verify_halfspace_inclusion(
    set: &ImprovingSet,
    w: &WeightVector,
    trials: usize,
    seed: u64,
) -> Result<SampledCheck> {
    let n = w.dim();
    set.check_dim(n)?;
    let bad = members(set, n, trials, seed)?
        .into_iter()
        .filter(|z| w.dot(z) <= INCLUSION_TOL)
        .collect();
    Ok(SampledCheck::from_violations(trials, bad))
}

/// For a symmetric set, checks that sampled members have positive sum.
/// Skipped when the set is not symmetric.
pub fn symmetric_sum_bound(set: &ImprovingSet, n: usize, trials: usize, seed: u64) -> Result<SampledCheck> {
    if !set.is_symmetric_set(n, trials, seed)? {
        return Ok(SampledCheck::skipped());
    }
    let bad = members(set, n, trials, sampling::derive_seed(seed, 1))?
        .into_iter()
        .filter(|z| z.iter().sum::<f64>() <= INCLUSION_TOL)
        .collect();
    Ok(SampledCheck::from_violations(trials, bad))
}

/// Checks `m1·z1 + m2·z2 ∈ A` for sampled member pairs and all
/// `1 <= m1, m2 <= 5`. The witness is `[z1, z2, m1, m2]` flattened.
pub fn rational_combination_closure(set: &ImprovingSet, n: usize, pairs: usize, seed: u64) -> Result<SampledCheck> {
    set.check_dim(n)?;
    let zs = members(set, n, 2 * pairs, seed)?;
    let mut bad = Vec::new();
    for pair in zs.chunks(2) {
        'pair: for m1 in 1..=5 {
            for m2 in 1..=5 {
                let combo: Vec<f64> = pair[0]
                    .iter()
                    .zip(&pair[1])
                    .map(|(a, b)| f64::from(m1) * a + f64::from(m2) * b)
                    .collect();
                if !set.contains_slice(&combo, DEFAULT_TOL) {
                    let mut w = pair[0].clone();
                    w.extend(&pair[1]);
                    w.extend([f64::from(m1), f64::from(m2)]);
                    bad.push(w);
                    break 'pair;
                }
            }
        }
    }
    Ok(SampledCheck::from_violations(pairs, bad))
}

/// Checks membership inclusion along a chain of sets on sampled points:
/// `z ∈ sets[i]` implies `z ∈ sets[i + 1]`.
pub fn inclusion_chain(sets: &[&ImprovingSet], n: usize, trials: usize, seed: u64) -> Result<SampledCheck> {
    for s in sets {
        s.check_dim(n)?;
    }
    let mut rng = sampling::rng(seed);
    let bad = (0..trials)
        .map(|_| sampling::radial_vector(&mut rng, n, SAMPLE_RADII.0, SAMPLE_RADII.1))
        .filter(|z| {
            sets.windows(2)
                .any(|w| w[0].contains_slice(z, DEFAULT_TOL) && !w[1].contains_slice(z, DEFAULT_TOL))
        })
        .collect();
    Ok(SampledCheck::from_violations(trials, bad))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementReport {
    pub problems: usize,
    /// Problems with `F^w(S) ⊆ F^A(S)`.
    pub included: usize,
    /// Problems where the inclusion is strict.
    pub strict: usize,
    pub first_violation: Option<String>,
}

impl RefinementReport {
    pub fn all_included(&self) -> bool {
        self.included == self.problems
    }

    pub fn strict_fraction(&self) -> f64 {
        if self.problems == 0 {
            0.0
        } else {
            self.strict as f64 / self.problems as f64
        }
    }
}

/// Compares `F^w` with `F^A` on each problem.
pub fn verify_refinement(set: &ImprovingSet, w: &WeightVector, problems: &[BargainingProblem]) -> Result<RefinementReport> {
    let mut report = RefinementReport {
        problems: problems.len(),
        included: 0,
        strict: 0,
        first_violation: None,
    };
    for p in problems {
        let fine = solver::weighted_nash(w, p)?;
        let coarse = solver::coarse_nash(set, p)?;
        if fine.is_subset_of(&coarse) {
            report.included += 1;
            if !coarse.is_subset_of(&fine) {
                report.strict += 1;
            }
        } else if report.first_violation.is_none() {
            report.first_violation = Some(p.label().to_string());
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::improving::CustomSet;

    fn w(c: &[f64]) -> WeightVector {
        WeightVector::new(c.to_vec()).unwrap()
    }


    #[test]
    fn analytic_weights() {
        let cone = ImprovingSet::cone(vec![w(&[0.3, 0.7]), w(&[0.7, 0.3])]).unwrap();
        let sep = separating_weight(&cone, 2, 100, 0).unwrap();
        assert!(sep.weight.approx_eq(&w(&[0.5, 0.5])));
        assert_eq!(sep.method, Method::Analytic);
        let thr = ImprovingSet::nash_threshold(0.2).unwrap();
        assert!(separating_weight(&thr, 2, 100, 0).unwrap().weight.is_uniform());
        let half = ImprovingSet::half_space(w(&[0.7, 0.3]));
        assert!(separating_weight(&half, 2, 100, 0).unwrap().weight.approx_eq(&w(&[0.7, 0.3])));
    }

    #[test]
    fn inclusion_examples() {
        let u = WeightVector::uniform(2).unwrap();
        assert!(verify_halfspace_inclusion(&ImprovingSet::Orthant, &u, 10_000, 1).unwrap().passed());
        let half = ImprovingSet::half_space(w(&[0.7, 0.3]));
        let check = verify_halfspace_inclusion(&half, &u, 2000, 1).unwrap();
        assert_eq!(check.status, Status::Fail);
        let z = check.witness.unwrap();
        assert!(0.7 * z[0] + 0.3 * z[1] > 0.0 && z[0] + z[1] <= 0.0);
        assert!(half.contains_slice(&[1.0, -1.5], DEFAULT_TOL));
        let thr = ImprovingSet::nash_threshold(0.1).unwrap();
        assert!(verify_halfspace_inclusion(&thr, &u, 2000, 1).unwrap().passed());
    }

    #[test]
    fn refinement_examples() {
        let p = BargainingProblem::from_rows("three", &[&[1.0, 2.0], &[2.0, 1.0], &[1.5, 1.5]]).unwrap();
        let u = WeightVector::uniform(2).unwrap();
        let thr = ImprovingSet::nash_threshold(0.2).unwrap();
        let r = verify_refinement(&thr, &u, std::slice::from_ref(&p)).unwrap();
        assert!(r.all_included() && r.strict == 1);
        let half = ImprovingSet::half_space(u.clone());
        let r = verify_refinement(&half, &u, std::slice::from_ref(&p)).unwrap();
        assert!(r.all_included() && r.strict == 0);
        let r = verify_refinement(&ImprovingSet::Orthant, &u, &[p]).unwrap();
        assert!(r.all_included());
    }

    #[test]
    fn sum_bound() {
        assert!(symmetric_sum_bound(&ImprovingSet::Orthant, 2, 1000, 0).unwrap().passed());
        let thr = ImprovingSet::nash_threshold(0.3).unwrap();
        assert!(symmetric_sum_bound(&thr, 3, 1000, 0).unwrap().passed());
        let half = ImprovingSet::half_space(w(&[0.7, 0.3]));
        assert_eq!(symmetric_sum_bound(&half, 2, 1000, 0).unwrap().status, Status::Skipped);
    }

    #[test]
    fn custom_set_through_the_linear_program() {
        let quarter = ImprovingSet::custom(CustomSet::new("cone", 2, true, |z| {
            0.2 * z[0] + 0.8 * z[1] > 0.0 && 0.6 * z[0] + 0.4 * z[1] > 0.0
        }));
        let sep = separating_weight(&quarter, 2, 2000, 3).unwrap();
        assert_eq!(sep.method, Method::LinearProgram);
        assert_eq!(sep.origin_interior, Some(false));
        assert!(verify_halfspace_inclusion(&quarter, &sep.weight, 5000, 4).unwrap().passed());
    }

    #[test]
    fn union_of_half_spaces_has_no_separating_weight() {
        let union = crate::improving::union_of_half_spaces(w(&[0.3, 0.7]), w(&[0.7, 0.3])).unwrap();
        match separating_weight(&union, 2, 2000, 5) {
            Err(Error::NoSeparatingWeight { certificate, .. }) => assert!(!certificate.is_empty()),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn truncated_set_separates_but_fails_closure() {
        let set = crate::improving::truncated_half_plane();
        let sep = separating_weight(&set, 2, 4000, 7).unwrap();
        let expect = w(&[3.0 / 7.0, 4.0 / 7.0]);
        assert!(sep.weight.as_slice().iter().zip(expect.as_slice()).all(|(a, b)| (a - b).abs() < 0.02));
        let closure = rational_combination_closure(&set, 2, 100, 8).unwrap();
        assert_eq!(closure.status, Status::Fail);
        let p = BargainingProblem::from_rows("p", &[&[1.0, 2.0]]).unwrap();
        assert!(matches!(
            verify_refinement(&set, &sep.weight, &[p]),
            Err(Error::InvalidImprovingSet { .. })
        ));
        assert!(set.certify(2, 2000, 9).is_err());
    }

    #[test]
    fn origin_interior_planar_and_spatial() {
        let square = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]];
        assert!(origin_interior_to_hull(&square).unwrap());
        assert!(!origin_interior_to_hull(&square[..3]).unwrap());
        let mut octa: Vec<Vec<f64>> = Vec::new();
        for i in 0..3 {
            for s in [1.0, -1.0] {
                let mut v = vec![0.0; 3];
                v[i] = s;
                octa.push(v);
            }
        }
        assert!(origin_interior_to_hull(&octa).unwrap());
        assert!(!origin_interior_to_hull(&octa[..5]).unwrap());
        assert!(origin_interior_to_hull(&[vec![1.0; 4]]).is_err());
    }

    #[test]
    fn chain() {
        let thr = ImprovingSet::nash_threshold(0.1).unwrap();
        let half = ImprovingSet::half_space(WeightVector::uniform(3).unwrap());
        assert!(inclusion_chain(&[&ImprovingSet::Orthant, &thr, &half], 3, 5000, 2).unwrap().passed());
        assert!(!inclusion_chain(&[&half, &ImprovingSet::Orthant], 3, 500, 2).unwrap().passed());
    }
}
