//! The relation a solution reveals on pairs, and checks built on it.
//!
//! `x ≽ y` iff `x ∈ F(cmp{x, y})`, evaluated on the two-generator problem.
//! From it we test quasi-transitivity, monotonicity and completeness,
//! rebuild the improving set at a base point, and compare the rebuilt sets
//! across bases.

use std::collections::HashMap;
use std::sync::Mutex;

use rand::Rng;

use crate::axioms::{Axiom, AxiomVerdict, Witness};
use crate::error::{Error, Result};
use crate::improving::{ImprovingSet, DEFAULT_TOL};
use crate::model::{check_dim, BargainingProblem, UtilityVector};
use crate::rules::{Solution, SolutionRule};
use crate::sampling::{self, SeededRng};

/// Probes closer than this to a set's boundary are not asserted on.
pub const BOUNDARY_BAND: f64 = 1e-6;
/// Radius range of reconstruction probes in log space.
pub const PROBE_RADII: (f64, f64) = (0.05, 5.0);

type PairKey = (Vec<u64>, Vec<u64>);

fn bits(x: &UtilityVector) -> Vec<u64> {
    x.as_slice().iter().map(|v| v.to_bits()).collect()
}

/// The revealed relation of a solution on `n` players.
///
/// Comparisons are memoized behind a mutex, so one relation can be shared
/// across threads.
pub struct RevealedRelation<'a, F: Solution + ?Sized> {
    solution: &'a F,
    n: usize,
    cache: Mutex<HashMap<PairKey, bool>>,
    caching: bool,
}

impl<'a, F: Solution + ?Sized> RevealedRelation<'a, F> {
    pub fn new(solution: &'a F, n: usize) -> Result<Self> {
        check_dim(n)?;
        if let Some(d) = solution.dim() {
            if d != n {
                return Err(Error::DimensionMismatch { expected: d, found: n });
            }
        }
        Ok(Self {
            solution,
            n,
            cache: Mutex::new(HashMap::new()),
            caching: true,
        })
    }

    /// Same relation without memoization.
    pub fn uncached(solution: &'a F, n: usize) -> Result<Self> {
        Ok(Self {
            caching: false,
            ..Self::new(solution, n)?
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solution(&self) -> &F {
        self.solution
    }

    fn evaluate(&self, x: &UtilityVector, y: &UtilityVector) -> Result<bool> {
        let pair = BargainingProblem::new("cmp{x,y}", vec![x.clone(), y.clone()])?;
        Ok(self.solution.solve(&pair)?.contains(x))
    }

    /// `x ∈ F(cmp{x, y})`.
    pub fn weakly_prefers(&self, x: &UtilityVector, y: &UtilityVector) -> Result<bool> {
        x.expect_dim(self.n)?;
        y.expect_dim(self.n)?;
        if !self.caching {
            return self.evaluate(x, y);
        }
        let key = (bits(x), bits(y));
        if let Some(&hit) = self.cache.lock().expect("cache poisoned").get(&key) {
            return Ok(hit);
        }
        let value = self.evaluate(x, y)?;
        self.cache.lock().expect("cache poisoned").insert(key, value);
        Ok(value)
    }

    pub fn strictly_prefers(&self, x: &UtilityVector, y: &UtilityVector) -> Result<bool> {
        Ok(self.weakly_prefers(x, y)? && !self.weakly_prefers(y, x)?)
    }

    pub fn cache_len(&self) -> usize {
        self.cache.lock().expect("cache poisoned").len()
    }
}

fn point_from_log(base: &UtilityVector, z: &[f64]) -> Result<UtilityVector> {
    UtilityVector::new(base.as_slice().iter().zip(z).map(|(b, d)| b * d.exp()).collect())
}

fn log_step<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| scale * sampling::gaussian(rng)).collect()
}

/// Half the triples are independent random points; the rest are chains
/// `x = y·e^a`, `z = y·e^-b` with small log steps, which is where strict
/// preferences tend to line up.
fn sample_triple(rng: &mut SeededRng, n: usize) -> Result<[UtilityVector; 3]> {
    let y = sampling::random_point(rng, n);
    if rng.random_bool(0.5) {
        return Ok([sampling::random_point(rng, n), y, sampling::random_point(rng, n)]);
    }
    let up = log_step(rng, n, 0.3);
    let down: Vec<f64> = log_step(rng, n, 0.3).into_iter().map(|v| -v).collect();
    Ok([point_from_log(&y, &up)?, y.clone(), point_from_log(&y, &down)?])
}

fn triple_witness(axiom: Axiom, t: &[UtilityVector; 3], detail: &str) -> AxiomVerdict {
    AxiomVerdict::fail(axiom, Witness::new(vec![], t.to_vec(), detail))
}

/// Whenever `x ≻ y` and `y ≻ z`, asserts `x ≻ z`.
pub fn check_quasi_transitivity<F: Solution + ?Sized>(
    r: &RevealedRelation<'_, F>,
    triples: usize,
    seed: u64,
) -> Result<AxiomVerdict> {
    let mut rng = sampling::rng(seed);
    for _ in 0..triples {
        let t = sample_triple(&mut rng, r.dim())?;
        let [x, y, z] = &t;
        if r.strictly_prefers(x, y)? && r.strictly_prefers(y, z)? && !r.strictly_prefers(x, z)? {
            return Ok(triple_witness(Axiom::QuasiTransitivity, &t, "x ≻ y and y ≻ z but not x ≻ z"));
        }
    }
    Ok(AxiomVerdict::pass(Axiom::QuasiTransitivity, triples))
}

/// Whenever `x ≽ y` and `y ≽ z`, asserts `x ≽ z`.
pub fn check_transitivity<F: Solution + ?Sized>(
    r: &RevealedRelation<'_, F>,
    triples: usize,
    seed: u64,
) -> Result<AxiomVerdict> {
    let mut rng = sampling::rng(seed);
    for _ in 0..triples {
        let t = sample_triple(&mut rng, r.dim())?;
        let [x, y, z] = &t;
        if r.weakly_prefers(x, y)? && r.weakly_prefers(y, z)? && !r.weakly_prefers(x, z)? {
            return Ok(triple_witness(Axiom::Transitivity, &t, "x ≽ y and y ≽ z but not x ≽ z"));
        }
    }
    Ok(AxiomVerdict::pass(Axiom::Transitivity, triples))
}

/// `x ≫ y` implies `x ≻ y`.
pub fn check_monotone_relation<F: Solution + ?Sized>(
    r: &RevealedRelation<'_, F>,
    pairs: usize,
    seed: u64,
) -> Result<AxiomVerdict> {
    let mut rng = sampling::rng(seed);
    for _ in 0..pairs {
        let y = sampling::random_point(&mut rng, r.dim());
        let up: Vec<f64> = (0..r.dim())
            .map(|_| 1e-3 + 0.5 * sampling::gaussian(&mut rng).abs())
            .collect();
        let x = point_from_log(&y, &up)?;
        if !r.strictly_prefers(&x, &y)? {
            return Ok(AxiomVerdict::fail(
                Axiom::MonotoneRelation,
                Witness::new(vec![], vec![x, y], "x ≫ y but not x ≻ y"),
            ));
        }
    }
    Ok(AxiomVerdict::pass(Axiom::MonotoneRelation, pairs))
}

/// `x ≽ y` or `y ≽ x` on every sampled pair.
pub fn check_completeness<F: Solution + ?Sized>(
    r: &RevealedRelation<'_, F>,
    pairs: usize,
    seed: u64,
) -> Result<AxiomVerdict> {
    let mut rng = sampling::rng(seed);
    for _ in 0..pairs {
        let x = sampling::random_point(&mut rng, r.dim());
        let y = sampling::random_point(&mut rng, r.dim());
        if !r.weakly_prefers(&x, &y)? && !r.weakly_prefers(&y, &x)? {
            return Ok(AxiomVerdict::fail(
                Axiom::Completeness,
                Witness::new(vec![], vec![x, y], "neither point is chosen on cmp{x,y}"),
            ));
        }
    }
    Ok(AxiomVerdict::pass(Axiom::Completeness, pairs))
}

/// Pool points not strictly beaten by another pool point.
pub fn undominated_by_relation<F: Solution + ?Sized>(
    r: &RevealedRelation<'_, F>,
    problem: &BargainingProblem,
) -> Result<Vec<UtilityVector>> {
    let pool = problem.generators();
    let mut out = Vec::new();
    for x in pool {
        let mut beaten = false;
        for y in pool {
            if r.strictly_prefers(y, x)? {
                beaten = true;
                break;
            }
        }
        if !beaten {
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// `F(S)` equals the set of pool points no pool point strictly beats, on
/// every problem.
pub fn check_weak_rationalization<F: Solution + ?Sized>(
    r: &RevealedRelation<'_, F>,
    problems: &[BargainingProblem],
) -> Result<AxiomVerdict> {
    for p in problems {
        let chosen = r.solution().solve(p)?;
        let maximal = undominated_by_relation(r, p)?;
        let mut gap: Vec<UtilityVector> = chosen
            .chosen()
            .iter()
            .filter(|x| !maximal.contains(x))
            .cloned()
            .collect();
        gap.extend(maximal.iter().filter(|x| !chosen.contains(x)).cloned());
        if !gap.is_empty() {
            return Ok(AxiomVerdict::fail(
                Axiom::WeakRationalization,
                Witness::new(vec![p.clone()], gap, "F(S) and the ≻-maximal pool points differ here"),
            ));
        }
    }
    Ok(AxiomVerdict::pass(Axiom::WeakRationalization, problems.len()))
}

/// One log-space probe and whether it was reconstructed as a member.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub z: Vec<f64>,
    pub member: bool,
}

/// The improving set seen from `base`: `z` is a member iff
/// `base·e^z ≻ base`.
pub struct Reconstruction<'r, 'a, F: Solution + ?Sized> {
    relation: &'r RevealedRelation<'a, F>,
    base: UtilityVector,
}

impl<'r, 'a, F: Solution + ?Sized> Reconstruction<'r, 'a, F> {
    pub fn base(&self) -> &UtilityVector {
        &self.base
    }

    pub fn contains(&self, z: &[f64]) -> Result<bool> {
        if z.len() != self.base.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.base.dim(),
                found: z.len(),
            });
        }
        let y = point_from_log(&self.base, z)?;
        self.relation.strictly_prefers(&y, &self.base)
    }

    pub fn probe_cloud(&self, probes: usize, seed: u64) -> Result<Vec<Probe>> {
        probe_points(self.base.dim(), probes, seed)
            .into_iter()
            .map(|z| Ok(Probe { member: self.contains(&z)?, z }))
            .collect()
    }
}

pub fn reconstruct_improving_set<'r, 'a, F: Solution + ?Sized>(
    relation: &'r RevealedRelation<'a, F>,
    base: &UtilityVector,
) -> Result<Reconstruction<'r, 'a, F>> {
    base.expect_dim(relation.dim())?;
    Ok(Reconstruction {
        relation,
        base: base.clone(),
    })
}

/// Gaussian directions with log-uniform radius in [`PROBE_RADII`].
pub fn probe_points(n: usize, probes: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = sampling::rng(seed);
    (0..probes)
        .map(|_| sampling::radial_vector(&mut rng, n, PROBE_RADII.0, PROBE_RADII.1))
        .collect()
}

fn near_boundary(set: Option<&ImprovingSet>, z: &[f64]) -> bool {
    set.and_then(|s| s.boundary_slack(z))
        .is_some_and(|slack| slack.abs() < BOUNDARY_BAND)
}

/// Reconstructed membership agrees across all bases. Probes within the
/// boundary band of the solution's own improving set are skipped.
pub fn check_base_independence<F: Solution + ?Sized>(
    f: &F,
    bases: &[UtilityVector],
    probes: usize,
    seed: u64,
) -> Result<AxiomVerdict> {
    let first = bases.first().ok_or(Error::EmptyCandidates)?;
    let n = first.dim();
    let relation = RevealedRelation::new(f, n)?;
    let recon = bases
        .iter()
        .map(|b| reconstruct_improving_set(&relation, b))
        .collect::<Result<Vec<_>>>()?;
    let mut checked = 0;
    for z in probe_points(n, probes, seed) {
        if near_boundary(f.improving_set(), &z) {
            continue;
        }
        checked += 1;
        let reference = recon[0].contains(&z)?;
        for other in &recon[1..] {
            if other.contains(&z)? != reference {
                return Ok(AxiomVerdict::fail(
                    Axiom::BaseIndependence,
                    Witness::new(
                        vec![],
                        vec![recon[0].base().clone(), other.base().clone()],
                        format!("probe z = {z:?} is a member at one base only"),
                    ),
                ));
            }
        }
    }
    Ok(AxiomVerdict::pass(Axiom::BaseIndependence, checked))
}

/// The set rebuilt from `coarse_nash(A)` at the unit base agrees with `A`
/// outside the boundary band.
pub fn roundtrip_check(set: &ImprovingSet, n: usize, probes: usize, seed: u64) -> Result<AxiomVerdict> {
    set.check_dim(n)?;
    let rule = SolutionRule::coarse(set.clone());
    let relation = RevealedRelation::new(&rule, n)?;
    let recon = reconstruct_improving_set(&relation, &UtilityVector::ones(n)?)?;
    let mut checked = 0;
    for z in probe_points(n, probes, seed) {
        if near_boundary(Some(set), &z) {
            continue;
        }
        checked += 1;
        let expected = set.contains_slice(&z, DEFAULT_TOL);
        if recon.contains(&z)? != expected {
            return Ok(AxiomVerdict::fail(
                Axiom::Roundtrip,
                Witness::new(
                    vec![],
                    vec![],
                    format!("probe z = {z:?}: set membership {expected}, reconstructed {}", !expected),
                ),
            ));
        }
    }
    Ok(AxiomVerdict::pass(Axiom::Roundtrip, checked))
}

/// Sample sizes for [`rationalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct RationalizeConfig {
    pub triples: usize,
    pub pairs: usize,
    pub probes: usize,
    pub problems: usize,
}

impl Default for RationalizeConfig {
    fn default() -> Self {
        Self {
            triples: 10_000,
            pairs: 1_000,
            probes: 1_000,
            problems: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RationalizeReport {
    pub verdicts: Vec<AxiomVerdict>,
    /// Reconstruction at the unit base.
    pub probes: Vec<Probe>,
}

/// Runs every relation check on one solution.
pub fn rationalize<F: Solution + ?Sized>(
    f: &F,
    n: usize,
    cfg: &RationalizeConfig,
    seed: u64,
) -> Result<RationalizeReport> {
    let relation = RevealedRelation::new(f, n)?;
    let stream = |i| sampling::derive_seed(seed, i);
    let mut rng = sampling::rng(stream(0));
    let problems = (0..cfg.problems)
        .map(|_| sampling::random_problem(&mut rng, n, &Default::default(), "S"))
        .collect::<Result<Vec<_>>>()?;
    let bases = vec![UtilityVector::ones(n)?, sampling::random_point(&mut rng, n)];

    let mut verdicts = vec![
        check_weak_rationalization(&relation, &problems)?,
        check_quasi_transitivity(&relation, cfg.triples, stream(1))?,
        check_transitivity(&relation, cfg.triples, stream(2))?,
        check_completeness(&relation, cfg.pairs, stream(3))?,
        check_monotone_relation(&relation, cfg.pairs, stream(4))?,
        check_base_independence(f, &bases, cfg.probes, stream(5))?,
    ];
    verdicts.push(match f.improving_set() {
        Some(set) => roundtrip_check(set, n, cfg.probes, stream(6))?,
        None => AxiomVerdict::skipped(Axiom::Roundtrip),
    });
    let probes = reconstruct_improving_set(&relation, &bases[0])?.probe_cloud(cfg.probes, stream(6))?;
    Ok(RationalizeReport { verdicts, probes })
}
