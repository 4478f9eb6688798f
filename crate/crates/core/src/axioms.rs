//! Sampled checks of the choice axioms against any [`Solution`].
//!
//! Checks that compare solutions on several problems evaluate all of them
//! over one finite universe: the union of the inputs' generators. Each
//! problem is re-represented with every universe point inside its hull added
//! as a generator ([`BargainingProblem::restricted_to`]), which leaves the
//! hull unchanged but makes the chosen sets directly comparable.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::files::{ProblemFile, WitnessFile, SCHEMA_VERSION};
use crate::model::{
    canonical_points, contains_sorted, hausdorff_approx, BargainingProblem, Permutation, SolutionSet,
    UtilityVector, MAX_PERMUTATION_PLAYERS,
};
use crate::rules::Solution;
use crate::sampling::{self, ProblemShape};
use crate::separation;
use crate::solver;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    Arrow,
    Chernoff,
    DualChernoff,
    WeakDualChernoff,
    WeakArrow,
    Iie,
    Efficiency,
    Anonymity,
    ScaleInvariance,
    Continuity,
    /// Weak Arrow against its Chernoff and weak dual Chernoff components.
    Decomposition,
    /// `F^w ⊆ F^A` for the separating weight of a coarse rule's set.
    Refinement,
    /// `F^N ⊆ F^A` for a symmetric set on symmetric problems.
    NashRefinement,
    QuasiTransitivity,
    Transitivity,
    Completeness,
    MonotoneRelation,
    BaseIndependence,
    Roundtrip,
    WeakRationalization,
}

impl Axiom {
    /// Axioms exercised by [`run_suite`], in output order.
    pub const SUITE: [Axiom; 12] = [
        Axiom::Arrow,
        Axiom::Chernoff,
        Axiom::DualChernoff,
        Axiom::WeakDualChernoff,
        Axiom::WeakArrow,
        Axiom::Iie,
        Axiom::Efficiency,
        Axiom::Anonymity,
        Axiom::ScaleInvariance,
        Axiom::Decomposition,
        Axiom::Refinement,
        Axiom::NashRefinement,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Arrow => "arrow",
            Self::Chernoff => "chernoff",
            Self::DualChernoff => "dual_chernoff",
            Self::WeakDualChernoff => "weak_dual_chernoff",
            Self::WeakArrow => "weak_arrow",
            Self::Iie => "iie",
            Self::Efficiency => "efficiency",
            Self::Anonymity => "anonymity",
            Self::ScaleInvariance => "scale_invariance",
            Self::Continuity => "continuity",
            Self::Decomposition => "decomposition",
            Self::Refinement => "refinement",
            Self::NashRefinement => "nash_refinement",
            Self::QuasiTransitivity => "quasi_transitivity",
            Self::Transitivity => "transitivity",
            Self::Completeness => "completeness",
            Self::MonotoneRelation => "monotone_relation",
            Self::BaseIndependence => "base_independence",
            Self::Roundtrip => "roundtrip",
            Self::WeakRationalization => "weak_rationalization",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Self::Arrow,
            Self::Chernoff,
            Self::DualChernoff,
            Self::WeakDualChernoff,
            Self::WeakArrow,
            Self::Iie,
            Self::Efficiency,
            Self::Anonymity,
            Self::ScaleInvariance,
            Self::Continuity,
            Self::Decomposition,
            Self::Refinement,
            Self::NashRefinement,
            Self::QuasiTransitivity,
            Self::Transitivity,
            Self::Completeness,
            Self::MonotoneRelation,
            Self::BaseIndependence,
            Self::Roundtrip,
            Self::WeakRationalization,
        ]
        .into_iter()
        .find(|a| a.as_str() == s)
        .ok_or_else(|| Error::schema("axiom", format!("unknown axiom `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::Skipped => "SKIPPED",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The inputs and offending points of a failed check.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// Seed of the trial that produced the inputs, when sampled.
    pub seed: Option<u64>,
    pub problems: Vec<BargainingProblem>,
    pub points: Vec<UtilityVector>,
    pub scale: Option<UtilityVector>,
    pub detail: String,
}

impl Witness {
    pub(crate) fn new(problems: Vec<BargainingProblem>, points: Vec<UtilityVector>, detail: impl Into<String>) -> Self {
        Self {
            seed: None,
            problems,
            points,
            scale: None,
            detail: detail.into(),
        }
    }

    pub fn to_file(&self, axiom: Axiom, rule: &str) -> WitnessFile {
        WitnessFile {
            schema_version: SCHEMA_VERSION,
            axiom: axiom.as_str().to_string(),
            rule: rule.to_string(),
            seed: self.seed,
            problems: self.problems.iter().map(ProblemFile::from_problem).collect(),
            points: self.points.iter().map(|p| p.as_slice().to_vec()).collect(),
            scale: self.scale.as_ref().map(|a| a.as_slice().to_vec()),
            detail: self.detail.clone(),
        }
    }

    pub fn from_file(file: &WitnessFile) -> Result<(Axiom, Witness)> {
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::schema(
                "schema_version",
                format!("unsupported version {}", file.schema_version),
            ));
        }
        let axiom = file.axiom.parse()?;
        let problems = file
            .problems
            .iter()
            .map(ProblemFile::to_problem)
            .collect::<Result<Vec<_>>>()?;
        let points = file
            .points
            .iter()
            .map(|p| UtilityVector::new(p.clone()))
            .collect::<Result<Vec<_>>>()?;
        let scale = file.scale.clone().map(UtilityVector::new).transpose()?;
        Ok((
            axiom,
            Witness {
                seed: file.seed,
                problems,
                points,
                scale,
                detail: file.detail.clone(),
            },
        ))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub status: Status,
    /// Trials run; for a failure, the index of the failing trial plus one.
    pub trials: usize,
    pub witness: Option<Witness>,
}

impl AxiomVerdict {
    pub fn pass(axiom: Axiom, trials: usize) -> Self {
        Self {
            axiom,
            status: Status::Pass,
            trials,
            witness: None,
        }
    }

    pub fn skipped(axiom: Axiom) -> Self {
        Self {
            axiom,
            status: Status::Skipped,
            trials: 0,
            witness: None,
        }
    }

    pub fn fail(axiom: Axiom, witness: Witness) -> Self {
        Self {
            axiom,
            status: Status::Fail,
            trials: 1,
            witness: Some(witness),
        }
    }

    fn from_check(axiom: Axiom, ok: bool, witness: impl FnOnce() -> Witness) -> Self {
        if ok {
            Self::pass(axiom, 1)
        } else {
            Self::fail(axiom, witness())
        }
    }
}

fn universe(problems: &[&BargainingProblem]) -> Vec<UtilityVector> {
    canonical_points(problems.iter().flat_map(|p| p.generators().iter().cloned()).collect())
}

fn eval<F: Solution + ?Sized>(f: &F, p: &BargainingProblem, universe: &[UtilityVector]) -> Result<SolutionSet> {
    f.solve(&p.restricted_to(universe))
}

fn check_nested(s: &BargainingProblem, s_prime: &BargainingProblem) -> Result<()> {
    match s.first_outside(s_prime)? {
        Some(g) => Err(Error::NotNested {
            point: g.as_slice().to_vec(),
        }),
        None => Ok(()),
    }
}

fn pair(s: &BargainingProblem, t: &BargainingProblem) -> Vec<BargainingProblem> {
    vec![s.clone(), t.clone()]
}

/// Evaluations shared by the nested-pair axioms.
struct Nested {
    fs: SolutionSet,
    fsp: SolutionSet,
    /// `F(S') ∩ S`.
    inter: Vec<UtilityVector>,
}

fn nested<F: Solution + ?Sized>(
    f: &F,
    s: &BargainingProblem,
    s_prime: &BargainingProblem,
    universe: &[UtilityVector],
) -> Result<Nested> {
    check_nested(s, s_prime)?;
    let fs = eval(f, s, universe)?;
    let fsp = eval(f, s_prime, universe)?;
    let inter = fsp.chosen_within(s);
    Ok(Nested { fs, fsp, inter })
}

/// Points of `F(S') ∩ S` that `F(S)` drops.
fn chernoff_gap(n: &Nested) -> Vec<UtilityVector> {
    n.inter.iter().filter(|x| !n.fs.contains(x)).cloned().collect()
}

/// Points of `F(S)` outside `F(S')`.
fn dual_chernoff_gap(n: &Nested) -> Vec<UtilityVector> {
    n.fs.chosen().iter().filter(|x| !n.fsp.contains(x)).cloned().collect()
}

fn chernoff_in<F: Solution + ?Sized>(
    f: &F,
    s: &BargainingProblem,
    s_prime: &BargainingProblem,
    u: &[UtilityVector],
) -> Result<AxiomVerdict> {
    let ev = nested(f, s, s_prime, u)?;
    let gap = chernoff_gap(&ev);
    Ok(AxiomVerdict::from_check(Axiom::Chernoff, gap.is_empty(), || {
        Witness::new(pair(s, s_prime), gap, "points of F(S') inside S are not chosen in F(S)")
    }))
}

/// `F(S) ⊇ F(S') ∩ S` for `S ⊆ S'`.
pub fn check_chernoff<F: Solution + ?Sized>(
    f: &F,
    s: &BargainingProblem,
    s_prime: &BargainingProblem,
) -> Result<AxiomVerdict> {
    chernoff_in(f, s, s_prime, &universe(&[s, s_prime]))
}

/// `F(S) ⊆ F(S') ∩ S` for `S ⊆ S'`, whenever `F(S') ∩ S` is nonempty.
pub fn check_dual_chernoff<F: Solution + ?Sized>(
    f: &F,
    s: &BargainingProblem,
    s_prime: &BargainingProblem,
) -> Result<AxiomVerdict> {
    let ev = nested(f, s, s_prime, &universe(&[s, s_prime]))?;
    let gap = if ev.inter.is_empty() { vec![] } else { dual_chernoff_gap(&ev) };
    Ok(AxiomVerdict::from_check(Axiom::DualChernoff, gap.is_empty(), || {
        Witness::new(
            pair(s, s_prime),
            gap,
            "F(S') meets S but evicts these points of F(S)",
        )
    }))
}

/// `F(S) = F(S') ∩ S` for `S ⊆ S'`, whenever `F(S') ∩ S` is nonempty.
pub fn check_arrow<F: Solution + ?Sized>(
    f: &F,
    s: &BargainingProblem,
    s_prime: &BargainingProblem,
) -> Result<AxiomVerdict> {
    let ev = nested(f, s, s_prime, &universe(&[s, s_prime]))?;
    let mut gap = Vec::new();
    if !ev.inter.is_empty() {
        gap = chernoff_gap(&ev);
        gap.extend(dual_chernoff_gap(&ev));
    }
    Ok(AxiomVerdict::from_check(Axiom::Arrow, gap.is_empty(), || {
        Witness::new(pair(s, s_prime), gap, "F(S) and F(S') ∩ S differ at these points")
    }))
}

/// `F(S ∪ T)` evaluated on the universe, plus `F(S)` and `F(T)`.
fn union_eval<F: Solution + ?Sized>(
    f: &F,
    s: &BargainingProblem,
    t: &BargainingProblem,
    u: &[UtilityVector],
) -> Result<(SolutionSet, SolutionSet, SolutionSet)> {
    let fs = eval(f, s, u)?;
    let ft = eval(f, t, u)?;
    let fu = eval(f, &s.union(t)?, u)?;
    Ok((fs, ft, fu))
}

fn weak_dual_chernoff_in<F: Solution + ?Sized>(
    f: &F,
    s: &BargainingProblem,
    t: &BargainingProblem,
    u: &[UtilityVector],
) -> Result<AxiomVerdict> {
    let (fs, ft, fu) = union_eval(f, s, t, u)?;
    let gap: Vec<UtilityVector> = fs
        .chosen()
        .iter()
        .filter(|x| ft.contains(x) && !fu.contains(x))
        .cloned()
        .collect();
    Ok(AxiomVerdict::from_check(Axiom::WeakDualChernoff, gap.is_empty(), || {
        Witness::new(pair(s, t), gap, "chosen in both F(S) and F(T) but not in F(S ∪ T)")
    }))
}

/// `F(S) ∩ F(T) ⊆ F(S ∪ T)`.
pub fn check_weak_dual_chernoff<F: Solution + ?Sized>(
    f: &F,
    s: &BargainingProblem,
    t: &BargainingProblem,
) -> Result<AxiomVerdict> {
    weak_dual_chernoff_in(f, s, t, &universe(&[s, t]))
}

fn weak_arrow_in<F: Solution + ?Sized>(
    f: &F,
    s: &BargainingProblem,
    t: &BargainingProblem,
    u: &[UtilityVector],
) -> Result<AxiomVerdict> {
    let (fs, ft, fu) = union_eval(f, s, t, u)?;
    let lhs = canonical_points(fs.chosen().iter().filter(|x| ft.contains(x)).cloned().collect());
    let rhs = canonical_points(
        fu.chosen()
            .iter()
            .filter(|x| s.contains_unchecked(x) && t.contains_unchecked(x))
            .cloned()
            .collect(),
    );
    let mut gap: Vec<UtilityVector> = lhs.iter().filter(|x| !contains_sorted(&rhs, x)).cloned().collect();
    gap.extend(rhs.iter().filter(|x| !contains_sorted(&lhs, x)).cloned());
    Ok(AxiomVerdict::from_check(Axiom::WeakArrow, gap.is_empty(), || {
        Witness::new(pair(s, t), gap, "F(S) ∩ F(T) and F(S ∪ T) ∩ S ∩ T differ at these points")
    }))
}

/// `F(S) ∩ F(T) = F(S ∪ T) ∩ S ∩ T`.
pub fn check_weak_arrow<F: Solution + ?Sized>(
    f: &F,
    s: &BargainingProblem,
    t: &BargainingProblem,
) -> Result<AxiomVerdict> {
    weak_arrow_in(f, s, t, &universe(&[s, t]))
}

/// For `S ⊆ S'`: if `F(S') ⊆ S` then `F(S) ⊆ F(S')`.
pub fn check_iie<F: Solution + ?Sized>(
    f: &F,
    s: &BargainingProblem,
    s_prime: &BargainingProblem,
) -> Result<AxiomVerdict> {
    let ev = nested(f, s, s_prime, &universe(&[s, s_prime]))?;
    let hypothesis = ev.inter.len() == ev.fsp.chosen().len();
    let gap = if hypothesis { dual_chernoff_gap(&ev) } else { vec![] };
    Ok(AxiomVerdict::from_check(Axiom::Iie, gap.is_empty(), || {
        Witness::new(pair(s, s_prime), gap, "F(S') ⊆ S but these points of F(S) are not in F(S')")
    }))
}

/// No chosen point is strictly below a pool point, and pool points weakly
/// above a chosen point are chosen.
pub fn check_efficiency<F: Solution + ?Sized>(f: &F, s: &BargainingProblem) -> Result<AxiomVerdict> {
    let fs = f.solve(s)?;
    let pool = s.generators();
    let dominated: Vec<UtilityVector> = fs
        .chosen()
        .iter()
        .filter(|x| pool.iter().any(|y| y.strictly_above(x)))
        .cloned()
        .collect();
    if !dominated.is_empty() {
        return Ok(AxiomVerdict::fail(
            Axiom::Efficiency,
            Witness::new(vec![s.clone()], dominated, "chosen points strictly dominated within S"),
        ));
    }
    let missing: Vec<UtilityVector> = pool
        .iter()
        .filter(|y| !fs.contains(y) && fs.chosen().iter().any(|x| y.weakly_above(x)))
        .cloned()
        .collect();
    Ok(AxiomVerdict::from_check(Axiom::Efficiency, missing.is_empty(), || {
        Witness::new(vec![s.clone()], missing, "weakly above a chosen point but not chosen")
    }))
}

/// On a symmetric problem, the chosen set is closed under permutations.
/// Skipped for asymmetric problems and for more than eight players.
pub fn check_anonymity<F: Solution + ?Sized>(f: &F, s: &BargainingProblem) -> Result<AxiomVerdict> {
    if s.dim() > MAX_PERMUTATION_PLAYERS || !s.is_symmetric()? {
        return Ok(AxiomVerdict::skipped(Axiom::Anonymity));
    }
    let closed = s.permutation_closure()?;
    let fs = f.solve(&closed)?;
    let perms = Permutation::all(s.dim())?;
    let missing: Vec<UtilityVector> = fs
        .chosen()
        .iter()
        .flat_map(|x| perms.iter().map(move |p| x.permuted(p)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|y| !fs.contains(y))
        .collect();
    Ok(AxiomVerdict::from_check(Axiom::Anonymity, missing.is_empty(), || {
        Witness::new(vec![closed.clone()], missing, "permutations of chosen points that are not chosen")
    }))
}

/// `F(a * S) = a * F(S)`.
pub fn check_scale_invariance<F: Solution + ?Sized>(
    f: &F,
    s: &BargainingProblem,
    a: &UtilityVector,
) -> Result<AxiomVerdict> {
    let fs = f.solve(s)?;
    let scaled = s.scaled(a)?;
    let fa = f.solve(&scaled)?;
    let expected = canonical_points(
        fs.chosen()
            .iter()
            .map(|x| x.scaled(a))
            .collect::<Result<Vec<_>>>()?,
    );
    let mut gap: Vec<UtilityVector> = expected.iter().filter(|x| !fa.contains(x)).cloned().collect();
    gap.extend(fa.chosen().iter().filter(|x| !contains_sorted(&expected, x)).cloned());
    Ok(AxiomVerdict::from_check(Axiom::ScaleInvariance, gap.is_empty(), || Witness {
        scale: Some(a.clone()),
        ..Witness::new(vec![s.clone()], gap, "F(a * S) and a * F(S) differ at these points (scaled coordinates)")
    }))
}

/// Component verdicts of weak Arrow on `(S, T)`, with `U = S ∪ T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// Weak Arrow on `(S, T)`, `(S, U)` and `(T, U)`.
    pub weak_arrow: [AxiomVerdict; 3],
    /// Chernoff on `(S, U)` and `(T, U)`.
    pub chernoff: [AxiomVerdict; 2],
    pub weak_dual_chernoff: AxiomVerdict,
}

impl Decomposition {
    fn all_pass(vs: &[AxiomVerdict]) -> bool {
        vs.iter().all(|v| v.status == Status::Pass)
    }

    pub fn components_pass(&self) -> bool {
        Self::all_pass(&self.chernoff) && self.weak_dual_chernoff.status == Status::Pass
    }

    /// Weak Arrow on the whole family iff both Chernoff checks and weak
    /// dual Chernoff.
    pub fn family_equivalent(&self) -> bool {
        Self::all_pass(&self.weak_arrow) == self.components_pass()
    }

    /// A weak Arrow failure on `(S, T)` comes with a failing component.
    pub fn failure_matched(&self) -> bool {
        self.weak_arrow[0].status == Status::Pass || !self.components_pass()
    }

    pub fn consistent(&self) -> bool {
        self.family_equivalent() && self.failure_matched()
    }
}

pub fn decompose<F: Solution + ?Sized>(f: &F, s: &BargainingProblem, t: &BargainingProblem) -> Result<Decomposition> {
    let u = universe(&[s, t]);
    let st = s.union(t)?;
    Ok(Decomposition {
        weak_arrow: [
            weak_arrow_in(f, s, t, &u)?,
            weak_arrow_in(f, s, &st, &u)?,
            weak_arrow_in(f, t, &st, &u)?,
        ],
        chernoff: [chernoff_in(f, s, &st, &u)?, chernoff_in(f, t, &st, &u)?],
        weak_dual_chernoff: weak_dual_chernoff_in(f, s, t, &u)?,
    })
}

pub fn check_decomposition<F: Solution + ?Sized>(
    f: &F,
    s: &BargainingProblem,
    t: &BargainingProblem,
) -> Result<AxiomVerdict> {
    let d = decompose(f, s, t)?;
    Ok(AxiomVerdict::from_check(Axiom::Decomposition, d.consistent(), || {
        let statuses = |vs: &[AxiomVerdict]| vs.iter().map(|v| v.status.as_str()).collect::<Vec<_>>().join("/");
        Witness::new(
            pair(s, t),
            vec![],
            format!(
                "weak arrow {} vs chernoff {} and weak dual chernoff {}",
                statuses(&d.weak_arrow),
                statuses(&d.chernoff),
                d.weak_dual_chernoff.status
            ),
        )
    }))
}

/// Continuity smoke test.
///
/// Builds `S^k` by moving each generator `g` to `g * exp(δ_k u_g)` with a
/// fixed random direction `u_g` and `δ_k = 0.1 / 4^k`. Checks that the
/// Hausdorff distance to `S` does not grow, and that a generator chosen in
/// every `S^k` of the second half of the sequence is within `1e-6` of a
/// point of `F(S)`.
pub fn check_continuity<F: Solution + ?Sized>(
    f: &F,
    s: &BargainingProblem,
    steps: usize,
    seed: u64,
) -> Result<AxiomVerdict> {
    let steps = steps.max(2);
    let n = s.dim();
    let mut rng = sampling::rng(seed);
    let gens = s.generators();
    let dirs: Vec<Vec<f64>> = gens
        .iter()
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect())
        .collect();
    let top = gens
        .iter()
        .flat_map(|g| g.as_slice().iter().copied())
        .fold(0.0, f64::max);
    let per_axis = (1e4f64.powf(1.0 / n as f64).floor() - 1.0).max(1.0);
    let resolution = top * 1.001 / per_axis;

    let fs = f.solve(s)?;
    let mut tail_chosen = vec![true; gens.len()];
    let mut distances = Vec::with_capacity(steps);
    for k in 0..steps {
        let delta = 0.1 / 4f64.powi(k as i32);
        let moved: Vec<UtilityVector> = gens
            .iter()
            .zip(&dirs)
            .map(|(g, u)| {
                UtilityVector::new(
                    g.as_slice()
                        .iter()
                        .zip(u)
                        .map(|(v, d)| v * (delta * d).exp())
                        .collect(),
                )
            })
            .collect::<Result<_>>()?;
        let sk = BargainingProblem::new(s.label(), moved.clone())?;
        distances.push(hausdorff_approx(&sk, s, resolution)?);
        if 2 * k >= steps {
            let fk = f.solve(&sk)?;
            for (j, m) in moved.iter().enumerate() {
                tail_chosen[j] &= fk.contains(m);
            }
        }
    }
    let growing = distances.last() > Some(&(distances[0] + resolution));
    let lost: Vec<UtilityVector> = gens
        .iter()
        .zip(&tail_chosen)
        .filter(|(g, chosen)| {
            **chosen
                && !fs.chosen().iter().any(|x| {
                    x.as_slice()
                        .iter()
                        .zip(g.as_slice())
                        .all(|(a, b)| (a - b).abs() <= 1e-6)
                })
        })
        .map(|(g, _)| g.clone())
        .collect();
    Ok(AxiomVerdict::from_check(Axiom::Continuity, !growing && lost.is_empty(), || Witness {
        seed: Some(seed),
        ..Witness::new(
            vec![s.clone()],
            lost,
            format!("limit points chosen along the sequence but not in F(S); distances {distances:?}"),
        )
    }))
}

/// How the suite samples problems.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub dims: Vec<usize>,
    pub shape: ProblemShape,
    /// Base shape for symmetric problems, before permutation closure.
    pub symmetric_shape: ProblemShape,
    /// Nested pairs add between 1 and this many fresh generators.
    pub max_fresh: usize,
    /// When nonempty, base problems are drawn from here instead of sampled.
    pub corpus: Vec<BargainingProblem>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            dims: vec![2, 3],
            shape: ProblemShape::default(),
            symmetric_shape: ProblemShape {
                min_generators: 2,
                max_generators: 8,
                symmetric: true,
            },
            max_fresh: 3,
            corpus: Vec::new(),
        }
    }
}

impl SuiteConfig {
    pub fn with_corpus(mut self, corpus: Vec<BargainingProblem>) -> Self {
        self.corpus = corpus;
        self
    }

    fn dim_for<F: Solution + ?Sized, R: Rng + ?Sized>(&self, f: &F, rng: &mut R) -> Result<usize> {
        if let Some(d) = f.dim() {
            return Ok(d);
        }
        if self.corpus.is_empty() {
            if self.dims.is_empty() {
                return Err(Error::InvalidParameter("no dimensions to sample".into()));
            }
            return Ok(self.dims[rng.random_range(0..self.dims.len())]);
        }
        Ok(self.corpus[rng.random_range(0..self.corpus.len())].dim())
    }

    fn draw_from_corpus<R: Rng + ?Sized>(&self, rng: &mut R, n: usize, symmetric: bool) -> Result<Option<BargainingProblem>> {
        let mut fits = Vec::new();
        for p in self.corpus.iter().filter(|p| p.dim() == n) {
            if !symmetric || p.is_symmetric()? {
                fits.push(p);
            }
        }
        Ok((!fits.is_empty()).then(|| fits[rng.random_range(0..fits.len())].clone().with_label("S")))
    }

    pub fn random_problem<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Result<BargainingProblem> {
        match self.draw_from_corpus(rng, n, false)? {
            Some(p) => Ok(p),
            None => sampling::random_problem(rng, n, &self.shape, "S"),
        }
    }

    /// Falls back to sampling when the corpus has no symmetric problem of
    /// dimension `n`.
    pub fn symmetric_problem<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Result<BargainingProblem> {
        match self.draw_from_corpus(rng, n, true)? {
            Some(p) => Ok(p),
            None => sampling::random_problem(rng, n, &self.symmetric_shape, "S"),
        }
    }

    /// `S` and `S' = cmp(G_S ∪ fresh)`.
    ///
    /// Half the pairs are clustered: `S` gains near-ties around its best
    /// generator and the fresh points land just above them. Uniform problems
    /// rarely put several chosen points close together, and that is where
    /// expansions can evict one chosen point while keeping another.
    pub fn nested_pair<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        n: usize,
    ) -> Result<(BargainingProblem, BargainingProblem)> {
        let mut s = self.random_problem(rng, n)?;
        let k = rng.random_range(1..=self.max_fresh.max(1));
        let fresh = if rng.random_bool(0.5) {
            let ties = rng.random_range(1..=2);
            let mut gens = s.generators().to_vec();
            gens.extend(sampling::near_top(rng, &s, ties, 0.03, 0.0));
            s = BargainingProblem::new(s.label(), gens)?;
            sampling::near_top(rng, &s, k, 0.03, 0.015)
        } else {
            sampling::fresh_generators(rng, &s, k)
        };
        let mut gens = s.generators().to_vec();
        gens.extend(fresh);
        let s_prime = BargainingProblem::new("S'", gens)?;
        Ok((s, s_prime))
    }

    /// `S` and a `T` sharing about half of `S`'s generators.
    pub fn overlapping_pair<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        n: usize,
    ) -> Result<(BargainingProblem, BargainingProblem)> {
        let s = self.random_problem(rng, n)?;
        let mut gens: Vec<UtilityVector> = s
            .generators()
            .iter()
            .filter(|_| rng.random_bool(0.5))
            .cloned()
            .collect();
        let k = rng.random_range(1..=self.max_fresh.max(1) + 1);
        gens.extend(sampling::fresh_generators(rng, &s, k));
        let t = BargainingProblem::new("T", gens)?;
        Ok((s, t))
    }
}

/// Runs one sampled trial of `axiom`. The trial is a pure function of
/// `seed`.
pub fn run_trial<F: Solution + ?Sized>(f: &F, cfg: &SuiteConfig, axiom: Axiom, seed: u64) -> Result<AxiomVerdict> {
    let mut rng = sampling::rng(seed);
    let n = cfg.dim_for(f, &mut rng)?;
    let verdict = match axiom {
        Axiom::Arrow | Axiom::Chernoff | Axiom::DualChernoff | Axiom::Iie => {
            let (s, sp) = cfg.nested_pair(&mut rng, n)?;
            match axiom {
                Axiom::Arrow => check_arrow(f, &s, &sp)?,
                Axiom::Chernoff => check_chernoff(f, &s, &sp)?,
                Axiom::DualChernoff => check_dual_chernoff(f, &s, &sp)?,
                _ => check_iie(f, &s, &sp)?,
            }
        }
        Axiom::WeakDualChernoff | Axiom::WeakArrow | Axiom::Decomposition => {
            let (s, t) = cfg.overlapping_pair(&mut rng, n)?;
            match axiom {
                Axiom::WeakDualChernoff => check_weak_dual_chernoff(f, &s, &t)?,
                Axiom::WeakArrow => check_weak_arrow(f, &s, &t)?,
                _ => check_decomposition(f, &s, &t)?,
            }
        }
        Axiom::Efficiency => check_efficiency(f, &cfg.random_problem(&mut rng, n)?)?,
        Axiom::Anonymity => check_anonymity(f, &cfg.symmetric_problem(&mut rng, n)?)?,
        Axiom::ScaleInvariance => {
            let s = cfg.random_problem(&mut rng, n)?;
            let a = sampling::random_scale(&mut rng, n);
            check_scale_invariance(f, &s, &a)?
        }
        Axiom::Continuity => {
            let s = cfg.random_problem(&mut rng, n)?;
            check_continuity(f, &s, 12, seed)?
        }
        Axiom::Refinement => match f.improving_set() {
            None => AxiomVerdict::skipped(axiom),
            Some(set) => {
                let p = cfg.random_problem(&mut rng, n)?;
                check_refinement(f, set, &p, seed)?
            }
        },
        Axiom::NashRefinement => match f.improving_set() {
            Some(set) if set.is_symmetric_set(n, 200, seed)? => {
                let p = cfg.symmetric_problem(&mut rng, n)?;
                check_nash_refinement(f, &p)?
            }
            _ => AxiomVerdict::skipped(axiom),
        },
        other => {
            return Err(Error::InvalidParameter(format!(
                "`{other}` is a relation check, not a suite axiom"
            )))
        }
    };
    Ok(verdict)
}

/// `F^w(P) ⊆ F(P)` for the separating weight `w` of the rule's set.
pub fn check_refinement<F: Solution + ?Sized>(
    f: &F,
    set: &crate::improving::ImprovingSet,
    p: &BargainingProblem,
    seed: u64,
) -> Result<AxiomVerdict> {
    let w = separation::separating_weight(set, p.dim(), 2000, seed)?.weight;
    let fine = solver::weighted_nash(&w, p)?;
    let coarse = f.solve(p)?;
    let gap: Vec<UtilityVector> = fine.chosen().iter().filter(|x| !coarse.contains(x)).cloned().collect();
    Ok(AxiomVerdict::from_check(Axiom::Refinement, gap.is_empty(), || {
        Witness::new(vec![p.clone()], gap, format!("weighted Nash points for w = {w} not chosen"))
    }))
}

/// `F^N(P) ⊆ F(P)`.
pub fn check_nash_refinement<F: Solution + ?Sized>(f: &F, p: &BargainingProblem) -> Result<AxiomVerdict> {
    let fine = solver::nash(p)?;
    let coarse = f.solve(p)?;
    let gap: Vec<UtilityVector> = fine.chosen().iter().filter(|x| !coarse.contains(x)).cloned().collect();
    Ok(AxiomVerdict::from_check(Axiom::NashRefinement, gap.is_empty(), || {
        Witness::new(vec![p.clone()], gap, "Nash points not chosen")
    }))
}

/// Runs `trials` seeded trials of one axiom. The verdict fails on the
/// lowest-indexed failing trial, whose seed is stored in the witness.
pub fn run_axiom<F: Solution + ?Sized>(
    f: &F,
    cfg: &SuiteConfig,
    axiom: Axiom,
    trials: usize,
    seed: u64,
) -> Result<AxiomVerdict> {
    let results: Vec<Result<AxiomVerdict>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let ts = sampling::derive_seed(seed, t as u64);
            run_trial(f, cfg, axiom, ts).map(|mut v| {
                if let Some(w) = v.witness.as_mut() {
                    w.seed = Some(ts);
                }
                v
            })
        })
        .collect();
    let mut ran = 0;
    for (t, r) in results.into_iter().enumerate() {
        let v = r?;
        match v.status {
            Status::Fail => {
                return Ok(AxiomVerdict { trials: t + 1, ..v });
            }
            Status::Pass => ran += 1,
            Status::Skipped => {}
        }
    }
    Ok(if ran == 0 {
        AxiomVerdict::skipped(axiom)
    } else {
        AxiomVerdict::pass(axiom, ran)
    })
}

/// Runs every suite axiom. Deterministic given `seed`. Trial `t` of every
/// axiom draws from the same seed, so axioms of one family (the nested-pair
/// ones, say) see identical inputs.
pub fn run_suite<F: Solution + ?Sized>(
    f: &F,
    cfg: &SuiteConfig,
    trials: usize,
    seed: u64,
) -> Result<Vec<AxiomVerdict>> {
    Axiom::SUITE
        .iter()
        .map(|&axiom| run_axiom(f, cfg, axiom, trials, seed))
        .collect()
}

/// Reruns the check recorded in a witness on its stored inputs.
pub fn replay_witness<F: Solution + ?Sized>(f: &F, axiom: Axiom, w: &Witness) -> Result<AxiomVerdict> {
    let problem = |i: usize| {
        w.problems
            .get(i)
            .ok_or_else(|| Error::schema(format!("problems[{i}]"), "missing"))
    };
    match axiom {
        Axiom::Arrow => check_arrow(f, problem(0)?, problem(1)?),
        Axiom::Chernoff => check_chernoff(f, problem(0)?, problem(1)?),
        Axiom::DualChernoff => check_dual_chernoff(f, problem(0)?, problem(1)?),
        Axiom::Iie => check_iie(f, problem(0)?, problem(1)?),
        Axiom::WeakDualChernoff => check_weak_dual_chernoff(f, problem(0)?, problem(1)?),
        Axiom::WeakArrow => check_weak_arrow(f, problem(0)?, problem(1)?),
        Axiom::Decomposition => check_decomposition(f, problem(0)?, problem(1)?),
        Axiom::Efficiency => check_efficiency(f, problem(0)?),
        Axiom::Anonymity => check_anonymity(f, problem(0)?),
        Axiom::ScaleInvariance => {
            let a = w.scale.as_ref().ok_or_else(|| Error::schema("scale", "required for scale_invariance"))?;
            check_scale_invariance(f, problem(0)?, a)
        }
        Axiom::Continuity => check_continuity(f, problem(0)?, 12, w.seed.unwrap_or(0)),
        Axiom::Refinement => match f.improving_set() {
            Some(set) => check_refinement(f, set, problem(0)?, w.seed.unwrap_or(0)),
            None => Ok(AxiomVerdict::skipped(axiom)),
        },
        Axiom::NashRefinement => check_nash_refinement(f, problem(0)?),
        other => Err(Error::InvalidParameter(format!("cannot replay `{other}` witnesses"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    Pass,
    Fail,
    Any,
}

/// Named verdict expectations.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub name: &'static str,
    pub expectations: Vec<(Axiom, Expect)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub axiom: Axiom,
    pub expected: Expect,
    pub got: Status,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: expected {:?}, got {}", self.axiom, self.expected, self.got)
    }
}

impl Profile {
    pub const NAMES: [&'static str; 5] = ["theorem1", "coarse", "lemma1", "prop2", "prop3"];

    /// Looks up a profile; case, spaces and punctuation are ignored.
    pub fn named(name: &str) -> Result<Profile> {
        use Axiom::*;
        use Expect::{Any, Fail, Pass};
        let key: String = name
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        let forward = vec![
            (Chernoff, Pass),
            (WeakDualChernoff, Pass),
            (WeakArrow, Pass),
            (Iie, Pass),
            (Efficiency, Pass),
            (ScaleInvariance, Pass),
            (Decomposition, Pass),
            (Arrow, Any),
            (DualChernoff, Any),
        ];
        let (name, expectations) = match key.as_str() {
            "theorem1" => ("theorem1", forward),
            "coarse" => {
                let mut e: Vec<_> = forward.into_iter().filter(|(a, _)| !matches!(a, Arrow | DualChernoff)).collect();
                e.extend([(Arrow, Fail), (DualChernoff, Fail)]);
                ("coarse", e)
            }
            "lemma1" | "lemma11" => (
                "lemma1",
                vec![
                    (Arrow, Pass),
                    (Chernoff, Pass),
                    (DualChernoff, Pass),
                    (WeakDualChernoff, Pass),
                    (WeakArrow, Pass),
                    (Iie, Pass),
                    (Efficiency, Pass),
                    (ScaleInvariance, Pass),
                    (Decomposition, Pass),
                ],
            ),
            "prop2" | "proposition2" => ("prop2", vec![(Refinement, Pass), (Efficiency, Pass)]),
            "prop3" | "proposition3" => ("prop3", vec![(NashRefinement, Pass), (Anonymity, Pass)]),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown profile `{name}` (known: {})",
                    Self::NAMES.join(", ")
                )))
            }
        };
        Ok(Profile { name, expectations })
    }

    pub fn expectation(&self, axiom: Axiom) -> Expect {
        self.expectations
            .iter()
            .find(|(a, _)| *a == axiom)
            .map_or(Expect::Any, |(_, e)| *e)
    }

    /// The first non-skipped verdict that contradicts the profile.
    pub fn first_mismatch(&self, verdicts: &[AxiomVerdict]) -> Option<Mismatch> {
        verdicts.iter().find_map(|v| {
            let expected = self.expectation(v.axiom);
            let ok = match (expected, v.status) {
                (_, Status::Skipped) | (Expect::Any, _) => true,
                (Expect::Pass, s) => s == Status::Pass,
                (Expect::Fail, s) => s == Status::Fail,
            };
            (!ok).then_some(Mismatch {
                axiom: v.axiom,
                expected,
                got: v.status,
            })
        })
    }
}
