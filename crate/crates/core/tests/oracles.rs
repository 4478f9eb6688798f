//! Solver outputs against independent brute-force computations.

use coarse_nash::improving::{ImprovingSet, WeightVector};
use coarse_nash::sampling::{self, ProblemShape};
use coarse_nash::{solver, BargainingProblem, UtilityVector};

fn uv(c: &[f64]) -> UtilityVector {
    UtilityVector::new(c.to_vec()).unwrap()
}

fn w(c: &[f64]) -> WeightVector {
    WeightVector::new(c.to_vec()).unwrap()
}

/// Membership written out from the set definitions, without the library.
fn member(set: &ImprovingSet, z: &[f64], tol: f64) -> bool {
    let dot = |w: &WeightVector| w.as_slice().iter().zip(z).map(|(a, b)| a * b).sum::<f64>();
    match set {
        ImprovingSet::HalfSpace(wv) => dot(wv) > tol,
        ImprovingSet::Orthant => z.iter().all(|v| *v > tol),
        ImprovingSet::Cone(ws) => ws.iter().all(|wv| dot(wv) > tol),
        ImprovingSet::NashThreshold(e) => z.iter().all(|v| *v > tol) || z.iter().sum::<f64>() > e + tol,
        ImprovingSet::Custom(_) => unreachable!("built-ins only"),
    }
}

/// Every generator against every generator, no pruning.
fn naive_coarse(set: &ImprovingSet, p: &BargainingProblem) -> Vec<UtilityVector> {
    let pool = p.generators();
    pool.iter()
        .filter(|x| {
            !pool.iter().any(|y| {
                let z: Vec<f64> = y.as_slice().iter().zip(x.as_slice()).map(|(a, b)| a.ln() - b.ln()).collect();
                member(set, &z, 1e-9)
            })
        })
        .cloned()
        .collect()
}

/// Weighted Nash through the product of powers instead of logs.
fn product_argmax(weights: &[f64], p: &BargainingProblem) -> Vec<UtilityVector> {
    let score = |x: &UtilityVector| x.as_slice().iter().zip(weights).map(|(v, e)| v.powf(*e)).product::<f64>();
    let best = p.generators().iter().map(score).fold(0.0, f64::max);
    p.generators()
        .iter()
        .filter(|x| score(x) >= best * (1.0 - 1e-9))
        .cloned()
        .collect()
}

fn sets(n: usize) -> Vec<ImprovingSet> {
    let (skew, cone) = if n == 2 {
        (w(&[0.7, 0.3]), vec![w(&[0.3, 0.7]), w(&[0.7, 0.3])])
    } else {
        (w(&[0.5, 0.3, 0.2]), vec![w(&[0.6, 0.2, 0.2]), w(&[0.2, 0.2, 0.6])])
    };
    vec![
        ImprovingSet::Orthant,
        ImprovingSet::half_space(skew),
        ImprovingSet::cone(cone).unwrap(),
        ImprovingSet::nash_threshold(0.1).unwrap(),
        ImprovingSet::nash_threshold(0.5).unwrap(),
    ]
}

fn corpus(n: usize, count: usize, seed: u64) -> Vec<BargainingProblem> {
    let mut rng = sampling::rng(seed);
    (0..count)
        .map(|_| sampling::random_problem(&mut rng, n, &ProblemShape::default(), "S").unwrap())
        .collect()
}

#[test]
fn coarse_solver_matches_brute_force() {
    for n in [2, 3] {
        for set in sets(n) {
            for p in corpus(n, 150, 40 + n as u64) {
                let got = solver::coarse_nash(&set, &p).unwrap();
                let want = naive_coarse(&set, &p);
                assert_eq!(got.chosen().len(), want.len(), "{}", set.variant_name());
                assert!(want.iter().all(|x| got.contains(x)), "{}", set.variant_name());
            }
        }
    }
}

#[test]
fn weighted_nash_matches_products() {
    let mut rng = sampling::rng(7);
    for n in [2, 3] {
        for p in corpus(n, 200, 50 + n as u64) {
            let raw: Vec<f64> = (0..n).map(|_| sampling::log_uniform(&mut rng, 0.1, 1.0)).collect();
            let weights = WeightVector::normalized(raw).unwrap();
            let got = solver::weighted_nash(&weights, &p).unwrap();
            let want = product_argmax(weights.as_slice(), &p);
            assert_eq!(got.chosen(), want.as_slice());
        }
    }
}

#[test]
fn threshold_on_three_points_by_hand() {
    let p = BargainingProblem::from_rows("ex", &[&[1.0, 2.0], &[2.0, 1.0], &[1.5, 1.5]]).unwrap();
    // ln(1.5 * 1.5) - ln 2 ≈ 0.1178
    let gap = (2.25f64).ln() - 2f64.ln();
    assert!((gap - 0.1178).abs() < 1e-4);
    for (eps, chosen) in [(0.05, 1), (0.1, 1), (0.2, 3), (0.3, 3)] {
        let f = solver::coarse_nash(&ImprovingSet::nash_threshold(eps).unwrap(), &p).unwrap();
        assert_eq!(f.chosen().len(), chosen, "eps {eps}");
        assert_eq!(f.chosen().len() == 1, eps < gap);
    }
    let f = solver::coarse_nash(&ImprovingSet::nash_threshold(0.05).unwrap(), &p).unwrap();
    assert_eq!(f.chosen(), &[uv(&[1.5, 1.5])]);
}

#[test]
fn eviction_margin_by_hand() {
    // (2,1) against (1,1.9): log-sum gap ln(2/1.9) just over 0.05
    assert!((2f64 / 1.9).ln() > 0.05);
    // (2,1) against (1,1.95): inside the threshold, both survive
    assert!((2f64 / 1.95).ln() < 0.05);
    // (1.05,2) clears (1,1.95) by more than 0.05 but not (2,1)
    assert!((1.05f64 * 2.0 / 1.95).ln() > 0.05);
    assert!((1.05f64 * 2.0 / 2.0).ln() < 0.05);
}

#[test]
fn grid_undominated_covers_chosen_generators() {
    for set in sets(2) {
        for p in corpus(2, 10, 61) {
            let oracle = solver::GridOracle::new(&set, &p, 0.05).unwrap();
            let f = solver::coarse_nash(&set, &p).unwrap();
            for x in f.chosen() {
                assert!(oracle.refutation(x).is_none());
            }
            // grid points dominated by nothing on the grid sit on the frontier
            for y in oracle.undominated() {
                assert!(p.contains(&y).unwrap());
            }
        }
    }
}
