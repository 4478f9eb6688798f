//! Solutions as values: the built-in rules plus a few deliberately broken
//! ones used to show that the axiom checks can fail.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::improving::{self, ImprovingSet, WeightVector, DEFAULT_TOL};
use crate::model::{BargainingProblem, SolutionSet, UtilityVector};
use crate::solver;

/// A bargaining solution: maps each problem to a nonempty chosen subset of
/// its candidate pool.
pub trait Solution: Send + Sync {
    fn name(&self) -> String;

    fn solve(&self, problem: &BargainingProblem) -> Result<SolutionSet>;

    /// Player count the rule is restricted to, if any.
    fn dim(&self) -> Option<usize> {
        None
    }

    /// The improving set, when the rule is a coarse Nash solution.
    fn improving_set(&self) -> Option<&ImprovingSet> {
        None
    }
}

impl<T: Solution + ?Sized> Solution for &T {
    fn name(&self) -> String {
        (**self).name()
    }

    fn solve(&self, problem: &BargainingProblem) -> Result<SolutionSet> {
        (**self).solve(problem)
    }

    fn dim(&self) -> Option<usize> {
        (**self).dim()
    }

    fn improving_set(&self) -> Option<&ImprovingSet> {
        (**self).improving_set()
    }
}

#[derive(Debug, Clone)]
pub enum SolutionRule {
    Coarse { set: ImprovingSet, tol: f64 },
    WeightedNash { weights: WeightVector, tol: f64 },
    Nash { tol: f64 },
    WeakPareto { tol: f64 },
    Adversarial(AdversarialRule),
}

/// Rules that break specific axioms.
#[derive(Debug, Clone, PartialEq)]
pub enum AdversarialRule {
    /// Nash on pools of odd size, weak Pareto on even ones.
    PoolParity,
    /// Maximizes the second coordinate, or the first once the pool has
    /// three or more points.
    CoordinateSwitch,
    /// Minimizes the log-sum.
    LogSumMinimizer,
    /// Weakly Pareto optimal points with first coordinate above the cutoff,
    /// falling back to all of them.
    AbsoluteCutoff(f64),
    /// Points beaten by no pool point in a strict majority of coordinates;
    /// the whole pool when every point is beaten.
    CoordinateMajority,
}

impl SolutionRule {
    pub fn coarse(set: ImprovingSet) -> Self {
        Self::Coarse { set, tol: DEFAULT_TOL }
    }

    pub fn weighted(weights: WeightVector) -> Self {
        Self::WeightedNash {
            weights,
            tol: solver::ARGMAX_TOL,
        }
    }

    pub fn nash() -> Self {
        Self::Nash { tol: solver::ARGMAX_TOL }
    }

    pub fn weak_pareto() -> Self {
        Self::WeakPareto { tol: DEFAULT_TOL }
    }

    /// Replaces the rule's tolerance; adversarial rules keep theirs.
    pub fn with_tol(self, tol: f64) -> Self {
        match self {
            Self::Coarse { set, .. } => Self::Coarse { set, tol },
            Self::WeightedNash { weights, .. } => Self::WeightedNash { weights, tol },
            Self::Nash { .. } => Self::Nash { tol },
            Self::WeakPareto { .. } => Self::WeakPareto { tol },
            other => other,
        }
    }
}

impl Solution for SolutionRule {
    fn name(&self) -> String {
        self.to_string()
    }

    fn solve(&self, problem: &BargainingProblem) -> Result<SolutionSet> {
        match self {
            Self::Coarse { set, tol } => solver::coarse_nash_with_tol(set, problem, *tol),
            Self::WeightedNash { weights, tol } => solver::weighted_nash_with_tol(weights, problem, *tol),
            Self::Nash { tol } => solver::nash_with_tol(problem, *tol),
            Self::WeakPareto { tol } => solver::weak_pareto_with_tol(problem, *tol),
            Self::Adversarial(rule) => rule.solve(problem),
        }
    }

    fn dim(&self) -> Option<usize> {
        match self {
            Self::Coarse { set, .. } => set.dim(),
            Self::WeightedNash { weights, .. } => Some(weights.dim()),
            _ => None,
        }
    }

    fn improving_set(&self) -> Option<&ImprovingSet> {
        match self {
            Self::Coarse { set, .. } => Some(set),
            _ => None,
        }
    }
}

fn argmax_by<F: Fn(&UtilityVector) -> f64>(pool: &[UtilityVector], score: F) -> Vec<UtilityVector> {
    let best = pool.iter().map(&score).fold(f64::NEG_INFINITY, f64::max);
    pool.iter()
        .filter(|x| best - score(x) <= solver::ARGMAX_TOL)
        .cloned()
        .collect()
}

impl AdversarialRule {
    fn solve(&self, problem: &BargainingProblem) -> Result<SolutionSet> {
        let pool = problem.generators();
        let chosen = match self {
            Self::PoolParity => {
                return if pool.len() % 2 == 1 {
                    solver::nash(problem)
                } else {
                    solver::weak_pareto(problem)
                };
            }
            Self::CoordinateSwitch => {
                let axis = if pool.len() >= 3 { 0 } else { 1 };
                argmax_by(pool, |x| x.as_slice()[axis])
            }
            Self::LogSumMinimizer => argmax_by(pool, |x| -x.ln().iter().sum::<f64>()),
            Self::AbsoluteCutoff(c) => {
                let front = solver::weak_pareto(problem)?;
                let above: Vec<UtilityVector> = front
                    .chosen()
                    .iter()
                    .filter(|x| x.as_slice()[0] > *c)
                    .cloned()
                    .collect();
                if above.is_empty() {
                    front.chosen().to_vec()
                } else {
                    above
                }
            }
            Self::CoordinateMajority => {
                let beats = |y: &UtilityVector, x: &UtilityVector| {
                    let wins = y.as_slice().iter().zip(x.as_slice()).filter(|(a, b)| a > b).count();
                    2 * wins > y.dim()
                };
                let unbeaten: Vec<UtilityVector> = pool
                    .iter()
                    .filter(|x| !pool.iter().any(|y| beats(y, x)))
                    .cloned()
                    .collect();
                if unbeaten.is_empty() {
                    pool.to_vec()
                } else {
                    unbeaten
                }
            }
        };
        SolutionSet::new(chosen, pool.to_vec())
    }
}

fn fmt_weights(w: &WeightVector) -> String {
    w.as_slice().iter().join(",")
}

impl fmt::Display for SolutionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Coarse { set, .. } => match set {
                ImprovingSet::HalfSpace(w) => write!(f, "coarse:half_space:{}", fmt_weights(w)),
                ImprovingSet::Orthant => write!(f, "coarse:orthant"),
                ImprovingSet::Cone(ws) => {
                    write!(f, "coarse:cone:{}", ws.iter().map(fmt_weights).join(";"))
                }
                ImprovingSet::NashThreshold(e) => write!(f, "coarse:nash_threshold:{e}"),
                ImprovingSet::Custom(c) => write!(f, "coarse:custom:{}", c.name()),
            },
            Self::WeightedNash { weights, .. } => write!(f, "weighted:{}", fmt_weights(weights)),
            Self::Nash { .. } => write!(f, "nash"),
            Self::WeakPareto { .. } => write!(f, "weak_pareto"),
            Self::Adversarial(rule) => match rule {
                AdversarialRule::PoolParity => write!(f, "parity"),
                AdversarialRule::CoordinateSwitch => write!(f, "chernoff_breaker"),
                AdversarialRule::LogSumMinimizer => write!(f, "min_log_sum"),
                AdversarialRule::AbsoluteCutoff(c) => write!(f, "cutoff:{c}"),
                AdversarialRule::CoordinateMajority => write!(f, "majority"),
            },
        }
    }
}

fn parse_list(text: &str, spec: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::UnknownRule(format!("{spec}: `{v}` is not a number")))
        })
        .collect()
}

fn parse_weights(text: &str, spec: &str) -> Result<WeightVector> {
    WeightVector::new(parse_list(text, spec)?)
}

fn parse_scalar(text: &str, spec: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| Error::UnknownRule(format!("{spec}: `{text}` is not a number")))
}

/// Accepted forms: `orthant`, `half_space:0.7,0.3`, `nash_threshold:0.1`,
/// `cone:0.3,0.7;0.7,0.3`, and the uncertified demonstration sets
/// `union:0.3,0.7;0.7,0.3` and `truncated`.
impl FromStr for ImprovingSet {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (variant, params) = spec.split_once(':').unwrap_or((spec, ""));
        let weight_list = || {
            params
                .split(';')
                .map(|w| parse_weights(w, spec))
                .collect::<Result<Vec<_>>>()
        };
        match variant {
            "orthant" if params.is_empty() => Ok(ImprovingSet::Orthant),
            "half_space" => Ok(ImprovingSet::half_space(parse_weights(params, spec)?)),
            "nash_threshold" => ImprovingSet::nash_threshold(parse_scalar(params, spec)?),
            "cone" => ImprovingSet::cone(weight_list()?),
            "union" => {
                let mut ws = weight_list()?;
                if ws.len() != 2 {
                    return Err(Error::UnknownRule(format!("{spec}: union takes exactly two weights")));
                }
                let b = ws.pop().expect("two weights");
                let a = ws.pop().expect("two weights");
                improving::union_of_half_spaces(a, b)
            }
            "truncated" if params.is_empty() => Ok(improving::truncated_half_plane()),
            _ => Err(Error::UnknownRule(spec.to_string())),
        }
    }
}

/// Accepted forms: `nash`, `weak_pareto`, `weighted:0.7,0.3`, `coarse:SET`
/// with any [`ImprovingSet`] form, `parity`, `chernoff_breaker`,
/// `min_log_sum`, `cutoff:1.0`, `majority`.
impl FromStr for SolutionRule {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let rule = match head {
            "nash" if rest.is_empty() => Self::nash(),
            "weak_pareto" if rest.is_empty() => Self::weak_pareto(),
            "weighted" => Self::weighted(parse_weights(rest, spec)?),
            "parity" if rest.is_empty() => Self::Adversarial(AdversarialRule::PoolParity),
            "chernoff_breaker" if rest.is_empty() => Self::Adversarial(AdversarialRule::CoordinateSwitch),
            "min_log_sum" if rest.is_empty() => Self::Adversarial(AdversarialRule::LogSumMinimizer),
            "majority" if rest.is_empty() => Self::Adversarial(AdversarialRule::CoordinateMajority),
            "cutoff" => Self::Adversarial(AdversarialRule::AbsoluteCutoff(parse_scalar(rest, spec)?)),
            "coarse" => Self::coarse(rest.parse()?),
            _ => return Err(Error::UnknownRule(spec.to_string())),
        };
        Ok(rule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prob(rows: &[&[f64]]) -> BargainingProblem {
        BargainingProblem::from_rows("t", rows).unwrap()
    }

    #[test]
    fn parse_round_trip() {
        for spec in [
            "nash",
            "weak_pareto",
            "weighted:0.7,0.3",
            "coarse:orthant",
            "coarse:half_space:0.5,0.5",
            "coarse:nash_threshold:0.1",
            "coarse:cone:0.3,0.7;0.7,0.3",
            "parity",
            "chernoff_breaker",
            "min_log_sum",
            "cutoff:1",
            "majority",
        ] {
            let rule: SolutionRule = spec.parse().unwrap();
            assert_eq!(rule.to_string(), spec);
        }
        for bad in ["nash:1", "coarse:ball", "weighted:0.5,0.6", "coarse:nash_threshold:-1", "foo"] {
            assert!(bad.parse::<SolutionRule>().is_err(), "{bad}");
        }
    }

    #[test]
    fn adversarial_rules_choose_from_pool() {
        let p = prob(&[&[1.0, 2.0], &[2.0, 1.0], &[1.5, 1.5]]);
        let switch = SolutionRule::Adversarial(AdversarialRule::CoordinateSwitch);
        assert_eq!(switch.solve(&p).unwrap().chosen()[0].as_slice(), &[2.0, 1.0]);
        let two = prob(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert_eq!(switch.solve(&two).unwrap().chosen()[0].as_slice(), &[1.0, 2.0]);

        let min = SolutionRule::Adversarial(AdversarialRule::LogSumMinimizer);
        assert_eq!(min.solve(&p).unwrap().chosen().len(), 2);

        let parity = SolutionRule::Adversarial(AdversarialRule::PoolParity);
        assert_eq!(parity.solve(&p).unwrap().chosen().len(), 1);
        assert_eq!(parity.solve(&two).unwrap().chosen().len(), 2);
    }

    #[test]
    fn majority_cycles_fall_back_to_pool() {
        let rule = SolutionRule::Adversarial(AdversarialRule::CoordinateMajority);
        let cycle = prob(&[&[3.0, 2.0, 1.0], &[1.0, 3.0, 2.0], &[2.0, 1.0, 3.0]]);
        assert_eq!(rule.solve(&cycle).unwrap().chosen().len(), 3);
        let pair = prob(&[&[3.0, 2.0, 1.0], &[2.0, 1.0, 3.0]]);
        assert_eq!(rule.solve(&pair).unwrap().chosen()[0].as_slice(), &[3.0, 2.0, 1.0]);
    }

    #[test]
    fn cutoff_is_not_scale_invariant() {
        let rule = SolutionRule::Adversarial(AdversarialRule::AbsoluteCutoff(1.0));
        let p = prob(&[&[2.0, 1.0], &[0.5, 3.0]]);
        assert_eq!(rule.solve(&p).unwrap().chosen().len(), 1);
        let scaled = p.scaled(&UtilityVector::new(vec![0.1, 1.0]).unwrap()).unwrap();
        assert_eq!(rule.solve(&scaled).unwrap().chosen().len(), 2);
    }
}
