use coarse_nash::axioms::{self, Status};
use coarse_nash::files::{self, ProblemFile};
use coarse_nash::improving::{ImprovingSet, WeightVector, DEFAULT_TOL};
use coarse_nash::revealed::{self, RevealedRelation};
use coarse_nash::sampling::{self, ProblemShape};
use coarse_nash::{solver, AdversarialRule, BargainingProblem, Solution, SolutionRule, UtilityVector};
use proptest::prelude::*;

fn problem_strategy(n: usize) -> impl Strategy<Value = BargainingProblem> {
    prop::collection::vec(prop::collection::vec(0.135f64..7.39, n), 1..25)
        .prop_map(|rows| BargainingProblem::new("S", rows.into_iter().map(|r| UtilityVector::new(r).unwrap()).collect()).unwrap())
}

fn any_problem() -> impl Strategy<Value = BargainingProblem> {
    prop_oneof![problem_strategy(2), problem_strategy(3)]
}

fn weights(n: usize) -> impl Strategy<Value = WeightVector> {
    prop::collection::vec(0.01f64..1.0, n).prop_map(|raw| WeightVector::normalized(raw).unwrap())
}

fn builtin(n: usize) -> impl Strategy<Value = ImprovingSet> {
    prop_oneof![
        Just(ImprovingSet::Orthant),
        weights(n).prop_map(ImprovingSet::half_space),
        prop::collection::vec(weights(n), 1..4).prop_map(|ws| ImprovingSet::cone(ws).unwrap()),
        (0.01f64..1.0).prop_map(|e| ImprovingSet::nash_threshold(e).unwrap()),
    ]
}

fn problem_and_set() -> impl Strategy<Value = (BargainingProblem, ImprovingSet)> {
    (2usize..=3).prop_flat_map(|n| (problem_strategy(n), builtin(n)))
}

fn log_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn chosen_is_nonempty_subset_of_pool((p, set) in problem_and_set()) {
        let f = solver::coarse_nash(&set, &p).unwrap();
        prop_assert!(!f.chosen().is_empty());
        prop_assert!(f.chosen().iter().all(|x| p.generators().contains(x)));
    }

    #[test]
    fn half_space_equals_weighted_nash(
        (p, w) in (2usize..=3).prop_flat_map(|n| (problem_strategy(n), weights(n)))
    ) {
        let coarse = solver::coarse_nash(&ImprovingSet::half_space(w.clone()), &p).unwrap();
        let fine = solver::weighted_nash(&w, &p).unwrap();
        prop_assert!(coarse.same_choice(&fine));
    }

    #[test]
    fn coarse_refines_weak_pareto((p, set) in problem_and_set()) {
        let f = solver::coarse_nash(&set, &p).unwrap();
        let wp = solver::weak_pareto(&p).unwrap();
        prop_assert!(f.is_subset_of(&wp));
    }

    #[test]
    fn larger_threshold_keeps_more(p in any_problem(), e1 in 0.01f64..1.0, d in 0.0f64..1.0) {
        let small = solver::coarse_nash(&ImprovingSet::nash_threshold(e1).unwrap(), &p).unwrap();
        let large = solver::coarse_nash(&ImprovingSet::nash_threshold(e1 + d + 1e-6).unwrap(), &p).unwrap();
        prop_assert!(small.is_subset_of(&large));
        prop_assert!(solver::nash(&p).unwrap().is_subset_of(&small));
    }

    #[test]
    fn scale_invariance_of_builtins((p, set) in problem_and_set(), seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let a = sampling::random_scale(&mut rng, p.dim());
        let v = axioms::check_scale_invariance(&SolutionRule::coarse(set), &p, &a).unwrap();
        prop_assert_eq!(v.status, Status::Pass);
    }

    #[test]
    fn builtins_are_closed_under_addition(
        (set, z1, z2) in (2usize..=3).prop_flat_map(|n| (builtin(n), log_vec(n), log_vec(n)))
    ) {
        if set.contains_slice(&z1, DEFAULT_TOL) && set.contains_slice(&z2, DEFAULT_TOL) {
            let sum: Vec<f64> = z1.iter().zip(&z2).map(|(a, b)| a + b).collect();
            prop_assert!(set.contains_slice(&sum, DEFAULT_TOL));
        }
        let neg: Vec<f64> = z1.iter().map(|v| -v.abs()).collect();
        prop_assert!(!set.contains_slice(&neg, 0.0));
        let pos: Vec<f64> = z1.iter().map(|v| v.abs() + 1e-6).collect();
        prop_assert!(set.contains_slice(&pos, 0.0));
    }

    #[test]
    fn permuting_a_problem_permutes_the_choice(p in problem_strategy(3), e in 0.01f64..0.5, seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let perm = sampling::random_permutation(&mut rng, 3);
        let set = ImprovingSet::nash_threshold(e).unwrap();
        let f = solver::coarse_nash(&set, &p).unwrap();
        let g = solver::coarse_nash(&set, &p.permuted(&perm).unwrap()).unwrap();
        let moved = f.chosen().iter().map(|x| x.permuted(&perm).unwrap());
        let mut count = 0;
        for x in moved {
            prop_assert!(g.contains(&x));
            count += 1;
        }
        prop_assert_eq!(count, g.chosen().len());
    }

    #[test]
    fn decomposition_holds_for_any_rule(seed in any::<u64>(), which in 0usize..5) {
        let rule = match which {
            0 => SolutionRule::nash(),
            1 => SolutionRule::weak_pareto(),
            2 => SolutionRule::coarse(ImprovingSet::nash_threshold(0.1).unwrap()),
            3 => SolutionRule::Adversarial(AdversarialRule::PoolParity),
            _ => SolutionRule::Adversarial(AdversarialRule::CoordinateSwitch),
        };
        let cfg = axioms::SuiteConfig::default();
        let mut rng = sampling::rng(seed);
        let (s, t) = cfg.overlapping_pair(&mut rng, 2).unwrap();
        let d = axioms::decompose(&rule, &s, &t).unwrap();
        prop_assert!(d.consistent());
    }

    #[test]
    fn relation_rationalizes_coarse_rules((p, set) in problem_and_set()) {
        let rule = SolutionRule::coarse(set);
        let r = RevealedRelation::new(&rule, p.dim()).unwrap();
        let v = revealed::check_weak_rationalization(&r, std::slice::from_ref(&p)).unwrap();
        prop_assert_eq!(v.status, Status::Pass);
    }

    #[test]
    fn cached_and_uncached_relations_agree(
        (set, x, y) in (2usize..=3).prop_flat_map(|n| (
            builtin(n),
            prop::collection::vec(0.1f64..8.0, n),
            prop::collection::vec(0.1f64..8.0, n),
        ))
    ) {
        let rule = SolutionRule::coarse(set);
        let (x, y) = (UtilityVector::new(x).unwrap(), UtilityVector::new(y).unwrap());
        let cached = RevealedRelation::new(&rule, x.dim()).unwrap();
        let plain = RevealedRelation::uncached(&rule, x.dim()).unwrap();
        for _ in 0..2 {
            prop_assert_eq!(cached.strictly_prefers(&x, &y).unwrap(), plain.strictly_prefers(&x, &y).unwrap());
            prop_assert_eq!(cached.weakly_prefers(&y, &x).unwrap(), plain.weakly_prefers(&y, &x).unwrap());
        }
    }

    #[test]
    fn problem_files_round_trip(p in any_problem()) {
        let text = files::to_json_string(&ProblemFile::from_problem(&p)).unwrap();
        prop_assert_eq!(files::parse_problem(&text).unwrap(), p);
    }

    #[test]
    fn improving_set_records_round_trip(set in (2usize..=3).prop_flat_map(builtin)) {
        let back = ImprovingSet::from_record(&set.to_record().unwrap()).unwrap();
        prop_assert_eq!(back.variant_name(), set.variant_name());
    }
}

#[test]
fn suite_is_deterministic() {
    let rule = SolutionRule::coarse(ImprovingSet::nash_threshold(0.1).unwrap());
    let cfg = axioms::SuiteConfig::default();
    let a = axioms::run_suite(&rule, &cfg, 40, 9).unwrap();
    let b = axioms::run_suite(&rule, &cfg, 40, 9).unwrap();
    assert_eq!(a, b);
}

#[test]
fn generated_symmetric_problems_are_symmetric() {
    let shape = ProblemShape {
        symmetric: true,
        ..ProblemShape::default()
    };
    let mut rng = sampling::rng(3);
    for n in [2, 3] {
        for _ in 0..20 {
            assert!(sampling::random_problem(&mut rng, n, &shape, "S").unwrap().is_symmetric().unwrap());
        }
    }
}

#[test]
fn witness_files_survive_disk() {
    let rule = SolutionRule::Adversarial(AdversarialRule::AbsoluteCutoff(1.0));
    let v = axioms::run_axiom(&rule, &axioms::SuiteConfig::default(), axioms::Axiom::ScaleInvariance, 50, 2).unwrap();
    assert_eq!(v.status, Status::Fail);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let w = v.witness.unwrap();
    files::write_json(&path, &w.to_file(v.axiom, &rule.name())).unwrap();
    let (axiom, back) = axioms::Witness::from_file(&files::read_json(&path).unwrap()).unwrap();
    assert_eq!(back, w);
    assert_eq!(axioms::replay_witness(&rule, axiom, &back).unwrap().status, Status::Fail);
    assert_eq!(rule.name(), "cutoff:1");
    assert!(rule.solve(&back.problems[0]).is_ok());
}
