//! Seeded generators for problems, log-space probes, and improving-set
//! members. Every random routine takes an explicit seed or RNG so that runs
//! are reproducible.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::improving::ImprovingSet;
use crate::model::{BargainingProblem, Permutation, UtilityVector};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a stream index into a seed, giving independent sub-streams.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Uniform direction on the unit sphere.
pub fn unit_direction<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// A direction scaled by a radius drawn log-uniformly from `[r_min, r_max]`.
pub fn radial_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, r_min: f64, r_max: f64) -> Vec<f64> {
    let r = log_uniform(rng, r_min, r_max);
    unit_direction(rng, n).into_iter().map(|x| x * r).collect()
}

/// A strictly positive vector whose coordinates are log-normal times a
/// common log-uniform radius, so that no coordinate sits near zero.
pub fn positive_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let r = log_uniform(rng, 0.1, 10.0);
    (0..n).map(|_| r * gaussian(rng).exp()).collect()
}

/// A vector in the nonpositive orthant; some coordinates are exactly zero.
pub fn nonpositive_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    positive_vector(rng, n)
        .into_iter()
        .map(|v| if rng.random_bool(0.3) { 0.0 } else { -v })
        .collect()
}

/// Rejection-samples `count` members of `set` from radial vectors with radius
/// in `radii`, giving up after `100 * count` draws.
pub fn sample_members<R: Rng + ?Sized>(
    set: &ImprovingSet,
    n: usize,
    count: usize,
    radii: (f64, f64),
    tol: f64,
    rng: &mut R,
) -> Option<Vec<Vec<f64>>> {
    let max_draws = 100 * count.max(1);
    let mut out = Vec::with_capacity(count);
    let mut draws = 0;
    while out.len() < count {
        if draws >= max_draws {
            return None;
        }
        draws += 1;
        let z = radial_vector(rng, n, radii.0, radii.1);
        if set.contains_slice(&z, tol) {
            out.push(z);
        }
    }
    Some(out)
}

/// Lower and upper bounds of generator coordinates in random problems.
pub const COORD_LO: f64 = 0.1353352832366127; // e^-2
pub const COORD_HI: f64 = 7.38905609893065; // e^2

pub fn random_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> UtilityVector {
    let coords = (0..n).map(|_| log_uniform(rng, COORD_LO, COORD_HI)).collect();
    UtilityVector::new(coords).expect("log-uniform coordinates are positive")
}

/// Shape of randomly generated problems.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemShape {
    pub min_generators: usize,
    pub max_generators: usize,
    pub symmetric: bool,
}

impl Default for ProblemShape {
    fn default() -> Self {
        Self {
            min_generators: 3,
            max_generators: 40,
            symmetric: false,
        }
    }
}

/// A random problem with coordinates log-uniform over `[e^-2, e^2]`.
///
/// In symmetric mode the generator set is closed under all permutations,
/// which needs `n <= 8`.
pub fn random_problem<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    shape: &ProblemShape,
    label: impl Into<String>,
) -> Result<BargainingProblem> {
    let k = rng.random_range(shape.min_generators.max(1)..=shape.max_generators.max(1));
    let gens: Vec<UtilityVector> = (0..k).map(|_| random_point(rng, n)).collect();
    let problem = BargainingProblem::new(label, gens)?;
    if shape.symmetric {
        problem.permutation_closure()
    } else {
        Ok(problem)
    }
}

/// Fresh generators for expanding `base`.
///
/// Half are independent random points; the others are small multiplicative
/// perturbations of an existing generator, which tend to land just above a
/// previously chosen point. Perturbed anchors favor the generators with the
/// largest log-sum, where most solutions choose.
pub fn fresh_generators<R: Rng + ?Sized>(
    rng: &mut R,
    base: &BargainingProblem,
    k: usize,
) -> Vec<UtilityVector> {
    let n = base.dim();
    let mut top: Vec<&UtilityVector> = base.generators().iter().collect();
    top.sort_by(|a, b| log_sum(b).total_cmp(&log_sum(a)));
    top.truncate(3);
    (0..k)
        .map(|_| {
            if rng.random_bool(0.5) {
                random_point(rng, n)
            } else {
                let anchor = if rng.random_bool(0.5) {
                    top.choose(rng).copied()
                } else {
                    base.generators().choose(rng)
                }
                .expect("problems are nonempty");
                let coords = anchor
                    .as_slice()
                    .iter()
                    .map(|v| v * (0.08 * gaussian(rng) + 0.03).exp())
                    .collect();
                UtilityVector::new(coords).expect("positive perturbation")
            }
        })
        .collect()
}

/// `k` small multiplicative perturbations of the generator with the largest
/// log-sum: each coordinate is scaled by `exp(drift + spread * N(0, 1))`.
pub fn near_top<R: Rng + ?Sized>(
    rng: &mut R,
    base: &BargainingProblem,
    k: usize,
    spread: f64,
    drift: f64,
) -> Vec<UtilityVector> {
    let anchor = base
        .generators()
        .iter()
        .max_by(|a, b| log_sum(a).total_cmp(&log_sum(b)))
        .expect("problems are nonempty");
    (0..k)
        .map(|_| {
            let coords = anchor
                .as_slice()
                .iter()
                .map(|v| v * (drift + spread * gaussian(rng)).exp())
                .collect();
            UtilityVector::new(coords).expect("positive perturbation")
        })
        .collect()
}

fn log_sum(x: &UtilityVector) -> f64 {
    x.as_slice().iter().map(|v| v.ln()).sum()
}

pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Permutation {
    let mut mapping: Vec<usize> = (0..n).collect();
    mapping.shuffle(rng);
    Permutation::new(mapping).expect("shuffle yields a bijection")
}

/// A scale vector with coordinates log-uniform over `[e^-2, e^2]`.
pub fn random_scale<R: Rng + ?Sized>(rng: &mut R, n: usize) -> UtilityVector {
    random_point(rng, n)
}
