//! Improving sets: open subsets `A` of log-utility space that contain the
//! strictly positive orthant, avoid the nonpositive orthant, and are closed
//! under addition. A point `y` dominates `x` when `ln y - ln x ∈ A`.
//!
//! Membership uses open-set semantics: a band of width `tol` along the
//! boundary counts as outside the set.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use rand::Rng;

use crate::error::{Error, Result};
use crate::files::{ImprovingSetFile, SCHEMA_VERSION};
use crate::model::{check_dim, coord_eq, Permutation, UtilityVector};
use crate::sampling;

/// Default width of the boundary band treated as outside an improving set.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Radii used when sampling candidate members for validation.
const VALIDATION_RADII: (f64, f64) = (0.1, 10.0);

/// A difference of log-utility vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct LogVector(Vec<f64>);

impl LogVector {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    /// `ln y - ln x`, coordinatewise.
    pub fn between(y: &UtilityVector, x: &UtilityVector) -> Result<Self> {
        if y.dim() != x.dim() {
            return Err(Error::DimensionMismatch {
                expected: x.dim(),
                found: y.dim(),
            });
        }
        Ok(Self(
            y.as_slice()
                .iter()
                .zip(x.as_slice())
                .map(|(a, b)| a.ln() - b.ln())
                .collect(),
        ))
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
}

/// Shorthand for [`LogVector::between`].
pub fn log_diff(y: &UtilityVector, x: &UtilityVector) -> Result<LogVector> {
    LogVector::between(y, x)
}

/// A point of the weight simplex. Zero weights are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        check_dim(w.len()).map_err(|e| Error::InvalidWeights(e.to_string()))?;
        if let Some(bad) = w.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidWeights(format!(
                "weights must be finite and nonnegative, got {bad}"
            )));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self(w))
    }

    /// Rescales nonnegative raw weights onto the simplex.
    pub fn normalized(raw: Vec<f64>) -> Result<Self> {
        let sum: f64 = raw.iter().sum();
        if !(sum.is_finite() && sum > 0.0) {
            return Err(Error::InvalidWeights("weights are all zero".into()));
        }
        Self::new(raw.into_iter().map(|v| v / sum).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dot(&self, z: &[f64]) -> f64 {
        self.0.iter().zip(z).map(|(w, z)| w * z).sum()
    }

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.dim() as f64;
        self.0.iter().all(|w| (w - u).abs() <= 1e-12)
    }

    pub fn approx_eq(&self, other: &WeightVector) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| coord_eq(*a, *b))
    }

    /// Weighted log score `Σ w_i ln x_i`.
    pub fn log_score(&self, x: &UtilityVector) -> f64 {
        self.0.iter().zip(x.as_slice()).map(|(w, v)| w * v.ln()).sum()
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(","))
    }
}

pub type MembershipFn = dyn Fn(&[f64]) -> bool + Send + Sync;

/// An improving set given by an arbitrary membership predicate.
///
/// Nothing is known about such a set until it is certified by sampling; see
/// [`ImprovingSet::certify`].
#[derive(Clone)]
pub struct CustomSet {
    name: String,
    dim: usize,
    declared_open: bool,
    certified: bool,
    monotone: bool,
    predicate: Arc<MembershipFn>,
}

impl CustomSet {
    pub fn new<F>(name: impl Into<String>, dim: usize, declared_open: bool, predicate: F) -> Self
    where
        F: Fn(&[f64]) -> bool + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            dim,
            declared_open,
            certified: false,
            monotone: false,
            predicate: Arc::new(predicate),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }
}

impl fmt::Debug for CustomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomSet")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("declared_open", &self.declared_open)
            .field("certified", &self.certified)
            .field("monotone", &self.monotone)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum ImprovingSet {
    /// `{z : w·z > 0}`; its coarse Nash solution is the weighted Nash solution.
    HalfSpace(WeightVector),
    /// The strictly positive orthant; yields the weakly Pareto optimal points.
    Orthant,
    /// `{z : w·z > 0 for every w in W}`; a multi-weighted Nash solution.
    Cone(Vec<WeightVector>),
    /// Orthant `∪ {z : Σ z_i > ε}`; Nash with a threshold.
    NashThreshold(f64),
    Custom(CustomSet),
}

impl ImprovingSet {
    pub fn half_space(w: WeightVector) -> Self {
        Self::HalfSpace(w)
    }

    pub fn cone(weights: Vec<WeightVector>) -> Result<Self> {
        let first = weights
            .first()
            .ok_or_else(|| Error::InvalidParameter("cone needs at least one weight".into()))?;
        if let Some(w) = weights.iter().find(|w| w.dim() != first.dim()) {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: w.dim(),
            });
        }
        Ok(Self::Cone(weights))
    }

    pub fn nash_threshold(epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        Ok(Self::NashThreshold(epsilon))
    }

    pub fn custom(set: CustomSet) -> Self {
        Self::Custom(set)
    }

    /// Short machine-readable name, as used in CSV output.
    pub fn variant_name(&self) -> String {
        match self {
            Self::HalfSpace(w) => format!("half_space({w})"),
            Self::Orthant => "orthant".into(),
            Self::Cone(ws) => format!("cone({})", ws.iter().join(";")),
            Self::NashThreshold(e) => format!("nash_threshold({e})"),
            Self::Custom(c) => format!("custom({})", c.name),
        }
    }

    /// The dimension fixed by the set's parameters, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::HalfSpace(w) => Some(w.dim()),
            Self::Cone(ws) => Some(ws[0].dim()),
            Self::Custom(c) => Some(c.dim),
            Self::Orthant | Self::NashThreshold(_) => None,
        }
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        check_dim(n)?;
        match self.dim() {
            Some(d) if d != n => Err(Error::DimensionMismatch {
                expected: d,
                found: n,
            }),
            _ => Ok(()),
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self, Self::Custom(_))
    }

    /// Whether `z ∈ A` and `z' ≥ z` imply `z' ∈ A`. Holds for every
    /// built-in variant; for custom sets it is established by sampling
    /// during certification.
    pub fn is_monotone(&self) -> bool {
        match self {
            Self::Custom(c) => c.certified && c.monotone,
            _ => true,
        }
    }

    pub fn contains(&self, z: &LogVector, tol: f64) -> bool {
        self.contains_slice(z.as_slice(), tol)
    }

    pub fn contains_slice(&self, z: &[f64], tol: f64) -> bool {
        debug_assert!(self.dim().is_none_or(|d| d == z.len()));
        match self {
            Self::HalfSpace(w) => w.dot(z) > tol,
            Self::Orthant => z.iter().all(|v| *v > tol),
            Self::Cone(ws) => ws.iter().all(|w| w.dot(z) > tol),
            Self::NashThreshold(eps) => {
                z.iter().all(|v| *v > tol) || z.iter().sum::<f64>() > eps + tol
            }
            Self::Custom(c) => (c.predicate)(z),
        }
    }

    /// Signed distance-like slack to the boundary: positive inside, negative
    /// outside. `None` for custom sets.
    pub fn boundary_slack(&self, z: &[f64]) -> Option<f64> {
        let min = |z: &[f64]| z.iter().copied().fold(f64::INFINITY, f64::min);
        match self {
            Self::HalfSpace(w) => Some(w.dot(z)),
            Self::Orthant => Some(min(z)),
            Self::Cone(ws) => Some(ws.iter().map(|w| w.dot(z)).fold(f64::INFINITY, f64::min)),
            Self::NashThreshold(eps) => Some(min(z).max(z.iter().sum::<f64>() - eps)),
            Self::Custom(_) => None,
        }
    }

    /// Whether `y` dominates `x`, i.e. `ln y - ln x ∈ A`.
    pub fn dominates(&self, y: &UtilityVector, x: &UtilityVector) -> Result<bool> {
        self.dominates_with_tol(y, x, DEFAULT_TOL)
    }

    pub fn dominates_with_tol(&self, y: &UtilityVector, x: &UtilityVector, tol: f64) -> Result<bool> {
        let z = LogVector::between(y, x)?;
        self.check_dim(z.dim())?;
        Ok(self.contains(&z, tol))
    }

    /// Checks the two defining conditions on random samples. Built-in
    /// variants also carry an analytic justification for each condition.
    pub fn validate(&self, n: usize, trials: usize, seed: u64) -> Result<ValidationReport> {
        self.check_dim(n)?;
        let trials = trials.max(1);
        let tol = DEFAULT_TOL;
        let mut rng = sampling::rng(seed);
        let analytic = self.analytic_tags();

        let lower = {
            let witness = (0..trials)
                .map(|_| sampling::positive_vector(&mut rng, n))
                .find(|z| !self.contains_slice(z, tol));
            ConditionCheck::from_witness(Condition::ContainsPositiveOrthant, trials, witness.map(|z| vec![z]))
        };
        let upper = {
            let witness = (0..trials)
                .map(|_| sampling::nonpositive_vector(&mut rng, n))
                .find(|z| self.contains_slice(z, tol));
            ConditionCheck::from_witness(Condition::ExcludesNonpositive, trials, witness.map(|z| vec![z]))
        };
        let additive = match sampling::sample_members(self, n, 2 * trials, VALIDATION_RADII, tol, &mut rng) {
            None => ConditionCheck {
                condition: Condition::AdditiveClosure,
                status: CheckStatus::Inconclusive,
                analytic: None,
                trials,
                witness: None,
            },
            Some(members) => {
                let witness = members.chunks(2).find_map(|pair| {
                    let sum: Vec<f64> = pair[0].iter().zip(&pair[1]).map(|(a, b)| a + b).collect();
                    (!self.contains_slice(&sum, tol)).then(|| vec![pair[0].clone(), pair[1].clone(), sum])
                });
                ConditionCheck::from_witness(Condition::AdditiveClosure, trials, witness)
            }
        };
        let monotonicity = match sampling::sample_members(self, n, trials, VALIDATION_RADII, tol, &mut rng) {
            None => CheckStatus::Inconclusive,
            Some(members) => {
                let broken = members.iter().any(|z| {
                    let bump = sampling::positive_vector(&mut rng, n);
                    let up: Vec<f64> = z.iter().zip(&bump).map(|(a, b)| a + b).collect();
                    !self.contains_slice(&up, tol)
                });
                if broken {
                    CheckStatus::Fail
                } else {
                    CheckStatus::Pass
                }
            }
        };

        let mut checks = vec![lower, upper, additive];
        if let Some(tags) = analytic {
            for (check, tag) in checks.iter_mut().zip(tags) {
                check.analytic = Some(tag);
            }
        }
        Ok(ValidationReport {
            set_name: self.variant_name(),
            checks,
            monotonicity,
        })
    }

    fn analytic_tags(&self) -> Option<[&'static str; 3]> {
        match self {
            Self::Orthant => Some([
                "the set is the positive orthant itself",
                "a nonpositive vector has no strictly positive coordinate",
                "sums of strictly positive vectors are strictly positive",
            ]),
            Self::HalfSpace(_) => Some([
                "w >= 0 with sum 1 gives w.z > 0 whenever z >> 0",
                "w >= 0 gives w.z <= 0 whenever z <= 0",
                "w.(x + y) = w.x + w.y > 0",
            ]),
            Self::Cone(_) => Some([
                "every defining half-space contains the positive orthant",
                "every defining half-space excludes the nonpositive orthant",
                "an intersection of additively closed half-spaces is additively closed",
            ]),
            Self::NashThreshold(_) => Some([
                "the positive orthant is one piece of the union",
                "z <= 0 is not >> 0 and has coordinate sum <= 0 < epsilon",
                "orthant + orthant stays in the orthant; any sum with a threshold member has sum > epsilon",
            ]),
            Self::Custom(_) => None,
        }
    }

    /// Marks a custom set as usable by the solver after it passes sampled
    /// validation. Built-in sets only get a dimension check.
    pub fn certify(self, n: usize, trials: usize, seed: u64) -> Result<ImprovingSet> {
        self.check_dim(n)?;
        let Self::Custom(mut custom) = self else {
            return Ok(self);
        };
        if !custom.declared_open {
            return Err(Error::InvalidImprovingSet {
                condition: "openness".into(),
                detail: format!("custom set `{}` is not declared open", custom.name),
            });
        }
        let report = Self::Custom(custom.clone()).validate(n, trials, seed)?;
        if let Some(bad) = report.checks.iter().find(|c| c.status != CheckStatus::Pass) {
            return Err(Error::InvalidImprovingSet {
                condition: bad.condition.as_str().into(),
                detail: format!("{:?}; witness {:?}", bad.status, bad.witness),
            });
        }
        custom.certified = true;
        custom.monotone = report.monotonicity == CheckStatus::Pass;
        Ok(Self::Custom(custom))
    }

    /// Whether membership is invariant under permuting coordinates.
    /// Analytic for built-ins, sampled for custom sets.
    pub fn is_symmetric_set(&self, n: usize, trials: usize, seed: u64) -> Result<bool> {
        self.check_dim(n)?;
        match self {
            Self::Orthant | Self::NashThreshold(_) => Ok(true),
            Self::HalfSpace(w) => Ok(w.is_uniform()),
            Self::Cone(ws) => {
                let perms = Permutation::all(n)?;
                Ok(ws.iter().all(|w| {
                    perms.iter().all(|p| {
                        let image = WeightVector(p.apply(w.as_slice()));
                        ws.iter().any(|v| v.approx_eq(&image))
                    })
                }))
            }
            Self::Custom(_) => {
                let mut rng = sampling::rng(seed);
                Ok((0..trials).all(|_| {
                    let z = sampling::radial_vector(&mut rng, n, VALIDATION_RADII.0, VALIDATION_RADII.1);
                    let p = sampling::random_permutation(&mut rng, n);
                    self.contains_slice(&z, DEFAULT_TOL) == self.contains_slice(&p.apply(&z), DEFAULT_TOL)
                }))
            }
        }
    }

    pub fn from_record(record: &ImprovingSetFile) -> Result<Self> {
        if record.schema_version != SCHEMA_VERSION {
            return Err(Error::schema(
                "schema_version",
                format!("unsupported version {}", record.schema_version),
            ));
        }
        let weights = |field: &str, raw: &[f64]| {
            WeightVector::new(raw.to_vec()).map_err(|e| Error::schema(field, e.to_string()))
        };
        match record.variant.as_str() {
            "half_space" => {
                let w = record
                    .w
                    .as_deref()
                    .ok_or_else(|| Error::schema("w", "required for variant half_space"))?;
                Ok(Self::HalfSpace(weights("w", w)?))
            }
            "orthant" => Ok(Self::Orthant),
            "cone" => {
                let ws = record
                    .cone_weights
                    .as_ref()
                    .ok_or_else(|| Error::schema("W", "required for variant cone"))?;
                let ws = ws
                    .iter()
                    .enumerate()
                    .map(|(i, w)| weights(&format!("W[{i}]"), w))
                    .collect::<Result<Vec<_>>>()?;
                Self::cone(ws).map_err(|e| Error::schema("W", e.to_string()))
            }
            "nash_threshold" => {
                let eps = record
                    .epsilon
                    .ok_or_else(|| Error::schema("epsilon", "required for variant nash_threshold"))?;
                Self::nash_threshold(eps).map_err(|e| Error::schema("epsilon", e.to_string()))
            }
            other => Err(Error::schema(
                "variant",
                format!("unknown variant `{other}` (expected half_space, orthant, cone, nash_threshold)"),
            )),
        }
    }

    /// Custom sets have no file representation.
    pub fn to_record(&self) -> Result<ImprovingSetFile> {
        let mut record = ImprovingSetFile {
            schema_version: SCHEMA_VERSION,
            variant: String::new(),
            w: None,
            cone_weights: None,
            epsilon: None,
        };
        match self {
            Self::HalfSpace(w) => {
                record.variant = "half_space".into();
                record.w = Some(w.as_slice().to_vec());
            }
            Self::Orthant => record.variant = "orthant".into(),
            Self::Cone(ws) => {
                record.variant = "cone".into();
                record.cone_weights = Some(ws.iter().map(|w| w.as_slice().to_vec()).collect());
            }
            Self::NashThreshold(e) => {
                record.variant = "nash_threshold".into();
                record.epsilon = Some(*e);
            }
            Self::Custom(c) => {
                return Err(Error::InvalidParameter(format!(
                    "custom set `{}` cannot be serialized",
                    c.name
                )))
            }
        }
        Ok(record)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `R^n_{++} ⊆ A`
    ContainsPositiveOrthant,
    /// `A ∩ R^n_- = ∅`
    ExcludesNonpositive,
    /// `x, y ∈ A ⇒ x + y ∈ A`
    AdditiveClosure,
}

impl Condition {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ContainsPositiveOrthant => "contains_positive_orthant",
            Self::ExcludesNonpositive => "excludes_nonpositive",
            Self::AdditiveClosure => "additive_closure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl CheckStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub status: CheckStatus,
    /// One-line argument, present for built-in variants.
    pub analytic: Option<&'static str>,
    pub trials: usize,
    /// Offending vectors; for additive closure `[x, y, x + y]`.
    pub witness: Option<Vec<Vec<f64>>>,
}

impl ConditionCheck {
    fn from_witness(condition: Condition, trials: usize, witness: Option<Vec<Vec<f64>>>) -> Self {
        Self {
            condition,
            status: if witness.is_some() {
                CheckStatus::Fail
            } else {
                CheckStatus::Pass
            },
            analytic: None,
            trials,
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub set_name: String,
    pub checks: Vec<ConditionCheck>,
    /// Sampled upward closure; informational, not a defining condition.
    pub monotonicity: CheckStatus,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn check(&self, condition: Condition) -> &ConditionCheck {
        self.checks
            .iter()
            .find(|c| c.condition == condition)
            .expect("every condition is checked")
    }
}

/// Convenience for tests and examples: a sampled-validation helper that
/// draws random member pairs until one violates additive closure.
pub fn find_additivity_witness<R: Rng + ?Sized>(
    set: &ImprovingSet,
    n: usize,
    attempts: usize,
    rng: &mut R,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let members = sampling::sample_members(set, n, 2 * attempts, VALIDATION_RADII, DEFAULT_TOL, rng)?;
    members.chunks(2).find_map(|pair| {
        let sum: Vec<f64> = pair[0].iter().zip(&pair[1]).map(|(a, b)| a + b).collect();
        (!set.contains_slice(&sum, DEFAULT_TOL)).then(|| (pair[0].clone(), pair[1].clone()))
    })
}

/// `{z : a·z > 0} ∪ {z : b·z > 0}`. Open, contains the positive orthant and
/// misses the nonpositive one, yet a sum of one member from each piece can
/// fall outside both.
pub fn union_of_half_spaces(a: WeightVector, b: WeightVector) -> Result<ImprovingSet> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let name = format!("union({a};{b})");
    Ok(ImprovingSet::custom(CustomSet::new(name, a.dim(), true, move |z| {
        a.dot(z) > 0.0 || b.dot(z) > 0.0
    })))
}

/// `{z : 3z₁ + 4z₂ > 0, z₁ > -1, z₂ > -1}`. Convex and inside a half-plane,
/// but far members leave it when added.
pub fn truncated_half_plane() -> ImprovingSet {
    ImprovingSet::custom(CustomSet::new("truncated", 2, true, |z| {
        3.0 * z[0] + 4.0 * z[1] > 0.0 && z[0] > -1.0 && z[1] > -1.0
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uv(c: &[f64]) -> UtilityVector {
        UtilityVector::new(c.to_vec()).unwrap()
    }

    fn w(c: &[f64]) -> WeightVector {
        WeightVector::new(c.to_vec()).unwrap()
    }

    fn union() -> ImprovingSet {
        union_of_half_spaces(w(&[0.3, 0.7]), w(&[0.7, 0.3])).unwrap()
    }

    #[test]
    fn log_diff_examples() {
        let x = uv(&[1.3, 2.7]);
        assert_eq!(log_diff(&x, &x).unwrap().as_slice(), &[0.0, 0.0]);
        let z = log_diff(&uv(&[std::f64::consts::E, 1.0]), &uv(&[1.0, 1.0])).unwrap();
        assert!((z.as_slice()[0] - 1.0).abs() < 1e-15 && z.as_slice()[1] == 0.0);
        let z = log_diff(&uv(&[1.5, 1.5]), &uv(&[1.0, 2.0])).unwrap();
        assert!((z.as_slice()[0] - 0.405_465_108).abs() < 1e-9);
        assert!((z.as_slice()[1] + 0.287_682_072).abs() < 1e-9);
        assert!(log_diff(&uv(&[1.0, 1.0]), &uv(&[1.0, 1.0, 1.0])).is_err());
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::new(vec![0.5, 0.6]).is_err());
        assert!(WeightVector::new(vec![-0.1, 1.1]).is_err());
        assert!(WeightVector::new(vec![1.0, 0.0]).is_ok());
        assert!(WeightVector::normalized(vec![0.0, 0.0]).is_err());
        assert!(WeightVector::normalized(vec![1.0, 3.0]).unwrap().approx_eq(&w(&[0.25, 0.75])));
        assert!(WeightVector::uniform(3).unwrap().is_uniform());
    }

    #[test]
    fn membership_examples() {
        let half = ImprovingSet::half_space(w(&[0.5, 0.5]));
        assert!(half.contains(&LogVector::new(vec![1.0, -0.5]), DEFAULT_TOL));
        assert!(!ImprovingSet::Orthant.contains(&LogVector::new(vec![0.0, 1.0]), DEFAULT_TOL));
        let thr = ImprovingSet::nash_threshold(0.2).unwrap();
        assert!(!thr.contains(&LogVector::new(vec![0.3, -0.1]), DEFAULT_TOL));
        assert!(thr.contains(&LogVector::new(vec![0.3, -0.09]), DEFAULT_TOL));
        // the tolerance band is outside
        assert!(!half.contains(&LogVector::new(vec![1e-10, 1e-10]), DEFAULT_TOL));
    }

    #[test]
    fn dominance_examples() {
        assert!(ImprovingSet::Orthant.dominates(&uv(&[2.0, 2.0]), &uv(&[1.0, 1.0])).unwrap());
        let uniform = ImprovingSet::half_space(WeightVector::uniform(2).unwrap());
        assert!(!uniform.dominates(&uv(&[1.0, 2.0]), &uv(&[2.0, 1.0])).unwrap());
        let thr = ImprovingSet::nash_threshold(0.05).unwrap();
        assert!(thr.dominates(&uv(&[1.5, 1.5]), &uv(&[1.0, 2.0])).unwrap());
        assert!(matches!(
            uniform.dominates(&uv(&[1.0, 1.0, 1.0]), &uv(&[1.0, 1.0, 1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn builtins_validate_analytically() {
        for set in [
            ImprovingSet::Orthant,
            ImprovingSet::half_space(w(&[0.7, 0.3])),
            ImprovingSet::half_space(w(&[1.0, 0.0])),
            ImprovingSet::cone(vec![w(&[0.3, 0.7]), w(&[0.7, 0.3])]).unwrap(),
            ImprovingSet::nash_threshold(0.1).unwrap(),
        ] {
            let report = set.validate(2, 500, 11).unwrap();
            assert!(report.passed(), "{report:?}");
            assert!(report.checks.iter().all(|c| c.analytic.is_some()));
            assert_eq!(report.monotonicity, CheckStatus::Pass);
        }
    }

    #[test]
    fn union_of_half_spaces_fails_additivity() {
        let report = union().validate(2, 1000, 3).unwrap();
        let add = report.check(Condition::AdditiveClosure);
        assert_eq!(add.status, CheckStatus::Fail);
        let wit = add.witness.as_ref().unwrap();
        assert!(!union().contains_slice(&wit[2], DEFAULT_TOL));
        assert!(add.analytic.is_none());
    }

    #[test]
    fn certification() {
        let err = union().certify(2, 1000, 3).unwrap_err();
        assert!(matches!(err, Error::InvalidImprovingSet { ref condition, .. } if condition == "additive_closure"));

        let closed = ImprovingSet::custom(CustomSet::new("closed", 2, false, |z| z.iter().all(|v| *v > 0.0)));
        assert!(matches!(closed.certify(2, 10, 0), Err(Error::InvalidImprovingSet { .. })));

        let orthant_like = ImprovingSet::custom(CustomSet::new("orth", 2, true, |z| z.iter().all(|v| *v > 0.0)))
            .certify(2, 500, 0)
            .unwrap();
        assert!(orthant_like.is_monotone());
        assert!(matches!(orthant_like, ImprovingSet::Custom(ref c) if c.is_certified()));
    }

    #[test]
    fn symmetry() {
        assert!(ImprovingSet::Orthant.is_symmetric_set(2, 10, 0).unwrap());
        let skew = ImprovingSet::half_space(w(&[0.7, 0.3]));
        assert!(!skew.is_symmetric_set(2, 10, 0).unwrap());
        // the witness from the analytic argument
        assert!(skew.contains_slice(&[1.0, -0.9], DEFAULT_TOL));
        assert!(!skew.contains_slice(&[-0.9, 1.0], DEFAULT_TOL));
        assert!(ImprovingSet::nash_threshold(0.1).unwrap().is_symmetric_set(3, 10, 0).unwrap());
        assert!(ImprovingSet::cone(vec![w(&[0.3, 0.7]), w(&[0.7, 0.3])])
            .unwrap()
            .is_symmetric_set(2, 10, 0)
            .unwrap());
        assert!(!ImprovingSet::cone(vec![w(&[0.3, 0.7])]).unwrap().is_symmetric_set(2, 10, 0).unwrap());
        assert!(union().is_symmetric_set(2, 500, 1).unwrap());
    }

    #[test]
    fn records_round_trip() {
        for set in [
            ImprovingSet::Orthant,
            ImprovingSet::half_space(w(&[0.7, 0.3])),
            ImprovingSet::cone(vec![w(&[0.3, 0.7]), w(&[0.7, 0.3])]).unwrap(),
            ImprovingSet::nash_threshold(0.05).unwrap(),
        ] {
            let back = ImprovingSet::from_record(&set.to_record().unwrap()).unwrap();
            assert_eq!(back.variant_name(), set.variant_name());
        }
        assert!(union().to_record().is_err());
    }
}
