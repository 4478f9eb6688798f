//! Finitely generated bargaining problems.
//!
//! A problem is stored as a finite set of generators and stands for its
//! comprehensive hull: every strictly positive point weakly below some
//! generator. All queries here are exact up to [`COORD_EQ_TOL`].

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported player count.
pub const MAX_PLAYERS: usize = 16;

/// Largest player count for which all `n!` permutations are enumerated.
pub const MAX_PERMUTATION_PLAYERS: usize = 8;

/// Relative tolerance used when comparing coordinates for equality.
pub const COORD_EQ_TOL: f64 = 1e-12;

/// Grid-based routines refuse to enumerate more points than this.
pub const MAX_GRID_POINTS: f64 = 1e6;

#[inline]
pub(crate) fn coord_slack(a: f64) -> f64 {
    COORD_EQ_TOL * a.abs().max(1.0)
}

/// `a >= b` up to the coordinate tolerance.
#[inline]
pub(crate) fn coord_ge(a: f64, b: f64) -> bool {
    a >= b - coord_slack(b)
}

#[inline]
pub(crate) fn coord_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= coord_slack(a.abs().max(b.abs()))
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (2..=MAX_PLAYERS).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension { n, max: MAX_PLAYERS })
    }
}

/// A point of the strictly positive orthant.
///
/// Also used for the scale vectors of scale invariance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UtilityVector(Vec<f64>);

impl UtilityVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_dim(coords.len())?;
        for (index, &value) in coords.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositiveCoordinate { index, value });
            }
        }
        Ok(Self(coords))
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn ln(&self) -> Vec<f64> {
        self.0.iter().map(|v| v.ln()).collect()
    }

    pub(crate) fn expect_dim(&self, n: usize) -> Result<()> {
        if self.dim() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: n,
                found: self.dim(),
            })
        }
    }

    /// `self >= other` coordinatewise, up to the coordinate tolerance.
    pub fn weakly_above(&self, other: &UtilityVector) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| coord_ge(a, b))
    }

    /// `self >> other`: strictly larger in every coordinate.
    pub fn strictly_above(&self, other: &UtilityVector) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a > b)
    }

    pub fn approx_eq(&self, other: &UtilityVector) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(&a, &b)| coord_eq(a, b))
    }

    /// Coordinatewise product `a * x`.
    pub fn scaled(&self, a: &UtilityVector) -> Result<UtilityVector> {
        a.expect_dim(self.dim())?;
        Ok(Self(self.0.iter().zip(&a.0).map(|(x, s)| x * s).collect()))
    }

    /// Coordinatewise reciprocal.
    pub fn reciprocal(&self) -> UtilityVector {
        Self(self.0.iter().map(|v| 1.0 / v).collect())
    }

    /// `x_p = (x_{p(1)}, ..., x_{p(n)})`.
    pub fn permuted(&self, p: &Permutation) -> Result<UtilityVector> {
        self.expect_dim(p.dim())?;
        Ok(Self(p.apply(&self.0)))
    }

    pub fn lex_cmp(&self, other: &UtilityVector) -> Ordering {
        lex_cmp(&self.0, &other.0)
    }
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

impl TryFrom<Vec<f64>> for UtilityVector {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Self::new(coords)
    }
}

impl From<UtilityVector> for Vec<f64> {
    fn from(v: UtilityVector) -> Self {
        v.0
    }
}

impl fmt::Display for UtilityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(", "))
    }
}

/// A bijection on player indices, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; mapping.len()];
        for &i in &mapping {
            if i >= mapping.len() || seen[i] {
                return Err(Error::InvalidPermutation(mapping));
            }
            seen[i] = true;
        }
        Ok(Self(mapping))
    }

    /// Builds a permutation from the 1-based notation used in the literature.
    pub fn from_one_based(mapping: &[usize]) -> Result<Self> {
        if mapping.contains(&0) {
            return Err(Error::InvalidPermutation(mapping.to_vec()));
        }
        Self::new(mapping.iter().map(|i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Every permutation of `n` players, identity first.
    pub fn all(n: usize) -> Result<Vec<Permutation>> {
        if n > MAX_PERMUTATION_PLAYERS {
            return Err(Error::TooManyPermutations {
                n,
                max: MAX_PERMUTATION_PLAYERS,
            });
        }
        Ok((0..n).permutations(n).map(Permutation).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.0
    }

    pub fn apply<T: Copy>(&self, x: &[T]) -> Vec<T> {
        self.0.iter().map(|&i| x[i]).collect()
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }
}

/// `cmp(generators)`, represented by its finite generator set.
///
/// Generators are deduplicated and kept in lexicographic order, so two
/// problems built from the same points compare equal.
#[derive(Debug, Clone, PartialEq)]
pub struct BargainingProblem {
    label: String,
    n: usize,
    generators: Vec<UtilityVector>,
}

impl BargainingProblem {
    pub fn new(label: impl Into<String>, generators: Vec<UtilityVector>) -> Result<Self> {
        let first = generators.first().ok_or(Error::EmptyProblem)?;
        let n = first.dim();
        for g in &generators {
            g.expect_dim(n)?;
        }
        Ok(Self {
            label: label.into(),
            n,
            generators: canonical_points(generators),
        })
    }

    /// Convenience constructor from raw coordinate rows.
    pub fn from_rows(label: impl Into<String>, rows: &[&[f64]]) -> Result<Self> {
        let gens = rows
            .iter()
            .map(|r| UtilityVector::new(r.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(label, gens)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[UtilityVector] {
        &self.generators
    }

    /// Generators with no other generator weakly above them.
    pub fn pruned_generators(&self) -> Vec<UtilityVector> {
        self.generators
            .iter()
            .enumerate()
            .filter(|(i, g)| {
                !self
                    .generators
                    .iter()
                    .enumerate()
                    .any(|(j, h)| *i != j && h.weakly_above(g))
            })
            .map(|(_, g)| g.clone())
            .collect()
    }

    /// The same hull, represented by its pruned generators only.
    pub fn pruned(&self) -> BargainingProblem {
        Self {
            label: self.label.clone(),
            n: self.n,
            generators: self.pruned_generators(),
        }
    }

    /// Membership in the comprehensive hull: some generator is weakly above `x`.
    pub fn contains(&self, x: &UtilityVector) -> Result<bool> {
        x.expect_dim(self.n)?;
        Ok(self.generators.iter().any(|g| g.weakly_above(x)))
    }

    pub(crate) fn contains_unchecked(&self, x: &UtilityVector) -> bool {
        self.generators.iter().any(|g| g.weakly_above(x))
    }

    /// Whether every generator of `self` lies in the hull of `other`,
    /// i.e. `cmp(self) ⊆ cmp(other)`.
    pub fn is_subset_of(&self, other: &BargainingProblem) -> Result<bool> {
        Ok(self.first_outside(other)?.is_none())
    }

    pub(crate) fn first_outside(&self, other: &BargainingProblem) -> Result<Option<&UtilityVector>> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: other.n,
                found: self.n,
            });
        }
        Ok(self.generators.iter().find(|g| !other.contains_unchecked(g)))
    }

    /// Whether the hull is invariant under every permutation of players.
    ///
    /// Refuses `n > 8`.
    pub fn is_symmetric(&self) -> Result<bool> {
        let perms = Permutation::all(self.n)?;
        Ok(self.generators.iter().all(|g| {
            perms
                .iter()
                .all(|p| self.contains_unchecked(&UtilityVector(p.apply(g.as_slice()))))
        }))
    }

    /// `a * S`.
    pub fn scaled(&self, a: &UtilityVector) -> Result<BargainingProblem> {
        a.expect_dim(self.n)?;
        let gens = self
            .generators
            .iter()
            .map(|g| g.scaled(a))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.label.clone(), gens)
    }

    /// `{x_p : x ∈ S}`.
    pub fn permuted(&self, p: &Permutation) -> Result<BargainingProblem> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.permuted(p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.label.clone(), gens)
    }

    /// `cmp(G_P ∪ G_Q)`, with weakly dominated generators pruned.
    pub fn union(&self, other: &BargainingProblem) -> Result<BargainingProblem> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let gens = self
            .generators
            .iter()
            .chain(&other.generators)
            .cloned()
            .collect();
        Ok(Self::new(self.label.clone(), gens)?.pruned())
    }

    /// The same hull with extra generators drawn from `points`: every point of
    /// `points` that lies in the hull is added. Used to evaluate several
    /// problems over a common finite universe of candidates.
    pub fn restricted_to(&self, points: &[UtilityVector]) -> BargainingProblem {
        let mut gens = self.generators.clone();
        gens.extend(
            points
                .iter()
                .filter(|p| p.dim() == self.n && self.contains_unchecked(p))
                .cloned(),
        );
        Self {
            label: self.label.clone(),
            n: self.n,
            generators: canonical_points(gens),
        }
    }

    /// The hull closed under all permutations' images of its generators.
    /// For a symmetric problem this represents the same hull.
    pub fn permutation_closure(&self) -> Result<BargainingProblem> {
        let perms = Permutation::all(self.n)?;
        let gens = self
            .generators
            .iter()
            .flat_map(|g| perms.iter().map(move |p| UtilityVector(p.apply(g.as_slice()))))
            .collect();
        Self::new(self.label.clone(), gens)
    }
}

/// Sorts lexicographically and drops approximate duplicates.
pub(crate) fn canonical_points(mut points: Vec<UtilityVector>) -> Vec<UtilityVector> {
    points.sort_by(|a, b| a.lex_cmp(b));
    let mut out: Vec<UtilityVector> = Vec::with_capacity(points.len());
    for p in points {
        // `out` is sorted by first coordinate, so near-duplicates sit in a suffix
        let lo = p.0[0] - coord_slack(p.0[0]);
        let dup = out
            .iter()
            .rev()
            .take_while(|q| q.0[0] >= lo)
            .any(|q| q.approx_eq(&p));
        if !dup {
            out.push(p);
        }
    }
    out
}

/// Approximate membership in a list produced by [`canonical_points`].
pub(crate) fn contains_sorted(sorted: &[UtilityVector], x: &UtilityVector) -> bool {
    let (lo, hi) = (x.0[0] - coord_slack(x.0[0]), x.0[0] + coord_slack(x.0[0]));
    let start = sorted.partition_point(|q| q.0[0] < lo);
    sorted[start..]
        .iter()
        .take_while(|q| q.0[0] <= hi)
        .any(|q| q.approx_eq(x))
}

/// Whether some candidate is strictly above `x` in every coordinate.
pub fn strictly_dominated_within(candidates: &[UtilityVector], x: &UtilityVector) -> Result<bool> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    for c in candidates {
        x.expect_dim(c.dim())?;
    }
    Ok(candidates.iter().any(|c| c.strictly_above(x)))
}

/// The chosen subset of a finite candidate pool.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet {
    chosen: Vec<UtilityVector>,
    candidate_pool: Vec<UtilityVector>,
}

impl SolutionSet {
    /// Both lists are canonicalized; `chosen` must be drawn from the pool.
    pub fn new(chosen: Vec<UtilityVector>, candidate_pool: Vec<UtilityVector>) -> Result<Self> {
        let chosen = canonical_points(chosen);
        let candidate_pool = canonical_points(candidate_pool);
        if let Some(stray) = chosen.iter().find(|c| !contains_sorted(&candidate_pool, c))
        {
            return Err(Error::schema(
                "chosen",
                format!("point {stray} is not in the candidate pool"),
            ));
        }
        if chosen.is_empty() && !candidate_pool.is_empty() {
            return Err(Error::EmptySolution);
        }
        Ok(Self {
            chosen,
            candidate_pool,
        })
    }

    pub fn chosen(&self) -> &[UtilityVector] {
        &self.chosen
    }

    pub fn candidate_pool(&self) -> &[UtilityVector] {
        &self.candidate_pool
    }

    pub fn contains(&self, x: &UtilityVector) -> bool {
        contains_sorted(&self.chosen, x)
    }

    pub fn is_subset_of(&self, other: &SolutionSet) -> bool {
        self.chosen.iter().all(|x| other.contains(x))
    }

    pub fn same_choice(&self, other: &SolutionSet) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// `F(S) ∩ T` for a problem `T`, membership tested on the hull.
    pub fn chosen_within(&self, problem: &BargainingProblem) -> Vec<UtilityVector> {
        self.chosen
            .iter()
            .filter(|x| x.dim() == problem.dim() && problem.contains_unchecked(x))
            .cloned()
            .collect()
    }
}

/// Sup-norm distance from `y` to the comprehensive hull of `problem`.
pub(crate) fn sup_distance_to_hull(y: &[f64], problem: &BargainingProblem) -> f64 {
    problem
        .generators()
        .iter()
        .map(|g| {
            g.as_slice()
                .iter()
                .zip(y)
                .map(|(gi, yi)| (yi - gi).max(0.0))
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Grid-sampled sup-norm Hausdorff distance between two hulls.
///
/// Samples a regular grid with spacing `resolution`, anchored at the
/// coordinatewise maximum of both generator sets and running down towards
/// zero. Each sampled hull point contributes its exact distance to the other
/// hull. The result is an approximation: it never exceeds the true distance
/// and is within about `resolution` of it.
pub fn hausdorff_approx(p: &BargainingProblem, q: &BargainingProblem, resolution: f64) -> Result<f64> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::InvalidResolution(resolution));
    }
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    let n = p.dim();
    let top: Vec<f64> = (0..n)
        .map(|i| {
            p.generators()
                .iter()
                .chain(q.generators())
                .map(|g| g.as_slice()[i])
                .fold(0.0, f64::max)
        })
        .collect();
    let axes: Vec<Vec<f64>> = top
        .iter()
        .map(|&hi| {
            (0..)
                .map(|k| hi - k as f64 * resolution)
                .take_while(|v| *v > 0.0)
                .collect()
        })
        .collect();
    let estimate: f64 = axes.iter().map(|a| a.len() as f64).product();
    if estimate > MAX_GRID_POINTS {
        return Err(Error::GridTooLarge {
            estimate,
            limit: MAX_GRID_POINTS,
        });
    }
    let mut worst: f64 = 0.0;
    for point in axes.iter().multi_cartesian_product() {
        let y: Vec<f64> = point.into_iter().copied().collect();
        let y_vec = UtilityVector(y);
        let in_p = p.contains_unchecked(&y_vec);
        let in_q = q.contains_unchecked(&y_vec);
        if in_q && !in_p {
            worst = worst.max(sup_distance_to_hull(y_vec.as_slice(), p));
        }
        if in_p && !in_q {
            worst = worst.max(sup_distance_to_hull(y_vec.as_slice(), q));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uv(c: &[f64]) -> UtilityVector {
        UtilityVector::new(c.to_vec()).unwrap()
    }

    fn prob(rows: &[&[f64]]) -> BargainingProblem {
        BargainingProblem::from_rows("t", rows).unwrap()
    }

    #[test]
    fn rejects_nonpositive_and_short_vectors() {
        assert!(matches!(
            UtilityVector::new(vec![1.0, 0.0]),
            Err(Error::NonPositiveCoordinate { index: 1, .. })
        ));
        assert!(UtilityVector::new(vec![1.0]).is_err());
        assert!(UtilityVector::new(vec![1.0, f64::NAN]).is_err());
        assert!(UtilityVector::new(vec![1.0; 17]).is_err());
    }

    #[test]
    fn comprehensive_membership() {
        assert!(prob(&[&[2.0, 2.0]]).contains(&uv(&[1.0, 2.0])).unwrap());
        assert!(!prob(&[&[2.0, 2.0]]).contains(&uv(&[3.0, 1.0])).unwrap());
        assert!(!prob(&[&[1.0, 3.0], &[3.0, 1.0]]).contains(&uv(&[2.0, 2.0])).unwrap());
        assert!(matches!(
            prob(&[&[2.0, 2.0]]).contains(&uv(&[1.0, 1.0, 1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn strict_domination() {
        let c = [uv(&[1.0, 2.0]), uv(&[2.0, 1.0]), uv(&[1.5, 1.5])];
        assert!(strictly_dominated_within(&c, &uv(&[1.0, 1.0])).unwrap());
        assert!(!strictly_dominated_within(&c[..2], &uv(&[1.0, 2.0])).unwrap());
        let c = [uv(&[2.0, 2.0]), uv(&[2.0, 3.0])];
        assert!(!strictly_dominated_within(&c, &uv(&[2.0, 2.0])).unwrap());
        assert!(matches!(
            strictly_dominated_within(&[], &uv(&[1.0, 1.0])),
            Err(Error::EmptyCandidates)
        ));
    }

    #[test]
    fn permutations() {
        let swap = Permutation::new(vec![1, 0]).unwrap();
        assert_eq!(uv(&[1.0, 2.0]).permuted(&swap).unwrap(), uv(&[2.0, 1.0]));
        let x = uv(&[1.0, 2.0, 3.0]);
        assert_eq!(x.permuted(&Permutation::identity(3)).unwrap(), x);
        let cyc = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        assert_eq!(x.permuted(&cyc).unwrap(), uv(&[2.0, 3.0, 1.0]));
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert_eq!(Permutation::all(3).unwrap().len(), 6);
        assert!(Permutation::all(9).is_err());
        assert_eq!(cyc.inverse().apply(&cyc.apply(&[1, 2, 3])), vec![1, 2, 3]);
    }

    #[test]
    fn symmetric_problems() {
        assert!(prob(&[&[1.0, 2.0], &[2.0, 1.0]]).is_symmetric().unwrap());
        assert!(!prob(&[&[1.0, 2.0]]).is_symmetric().unwrap());
        assert!(prob(&[&[2.0, 2.0]]).is_symmetric().unwrap());
        let big = BargainingProblem::new("big", vec![UtilityVector::ones(9).unwrap()]).unwrap();
        assert!(matches!(big.is_symmetric(), Err(Error::TooManyPermutations { .. })));
    }

    #[test]
    fn scaling() {
        let p = prob(&[&[1.0, 2.0]]);
        assert_eq!(p.scaled(&uv(&[1.0, 1.0])).unwrap(), p);
        assert_eq!(p.scaled(&uv(&[2.0, 0.5])).unwrap().generators(), &[uv(&[2.0, 1.0])]);
        let q = prob(&[&[1.0, 1.0], &[2.0, 0.5]]).scaled(&uv(&[3.0, 3.0])).unwrap();
        assert_eq!(q.generators(), &[uv(&[3.0, 3.0]), uv(&[6.0, 1.5])]);
    }

    #[test]
    fn unions() {
        let u = prob(&[&[1.0, 2.0]]).union(&prob(&[&[2.0, 1.0]])).unwrap();
        assert_eq!(u.generators(), &[uv(&[1.0, 2.0]), uv(&[2.0, 1.0])]);
        let p = prob(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert_eq!(p.union(&p).unwrap().generators(), p.generators());
        let u = prob(&[&[1.0, 2.0]]).union(&prob(&[&[1.0, 1.0]])).unwrap();
        assert_eq!(u.generators(), &[uv(&[1.0, 2.0])]);
    }

    #[test]
    fn dedup_and_pruning() {
        let p = prob(&[&[2.0, 2.0], &[2.0, 2.0], &[1.0, 1.0], &[3.0, 1.0]]);
        assert_eq!(p.generators().len(), 3);
        assert_eq!(p.pruned_generators(), vec![uv(&[2.0, 2.0]), uv(&[3.0, 1.0])]);
    }

    #[test]
    fn restricted_to_keeps_hull() {
        let s = prob(&[&[2.0, 2.0]]);
        let extra = [uv(&[1.0, 1.5]), uv(&[3.0, 1.0])];
        let r = s.restricted_to(&extra);
        assert_eq!(r.generators(), &[uv(&[1.0, 1.5]), uv(&[2.0, 2.0])]);
        assert_eq!(r.pruned_generators(), s.pruned_generators());
    }

    #[test]
    fn hausdorff_examples() {
        let p = prob(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert_eq!(hausdorff_approx(&p, &p, 0.05).unwrap(), 0.0);
        let d = hausdorff_approx(&prob(&[&[1.0, 1.0]]), &prob(&[&[2.0, 2.0]]), 0.01).unwrap();
        assert!((0.99..=1.01).contains(&d), "{d}");
        let d = hausdorff_approx(&prob(&[&[1.0, 2.0]]), &prob(&[&[1.0, 2.0], &[1.0, 2.5]]), 0.01)
            .unwrap();
        assert!((0.49..=0.51).contains(&d), "{d}");
        assert!(matches!(
            hausdorff_approx(&p, &p, 0.0),
            Err(Error::InvalidResolution(_))
        ));
        assert!(matches!(
            hausdorff_approx(&p, &p, 1e-4),
            Err(Error::GridTooLarge { .. })
        ));
    }

    #[test]
    fn solution_set_invariants() {
        let pool = vec![uv(&[1.0, 2.0]), uv(&[2.0, 1.0])];
        assert!(SolutionSet::new(vec![uv(&[3.0, 3.0])], pool.clone()).is_err());
        assert!(matches!(
            SolutionSet::new(vec![], pool.clone()),
            Err(Error::EmptySolution)
        ));
        let s = SolutionSet::new(vec![uv(&[2.0, 1.0])], pool).unwrap();
        assert!(s.contains(&uv(&[2.0, 1.0])));
        assert_eq!(s.chosen_within(&prob(&[&[1.0, 2.0]])), vec![]);
    }
}
