use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use coarse_nash::axioms::{self, Expect};
use coarse_nash::files;
use coarse_nash::improving::CheckStatus;
use coarse_nash::revealed::{self, RationalizeConfig};
use coarse_nash::sampling::{self, ProblemShape};
use coarse_nash::separation::{self, Method};
use coarse_nash::{AxiomVerdict, Error, ImprovingSet, Profile, Solution, SolutionRule, SuiteConfig};

use crate::corpus::{self, Loaded};
use crate::{GlobalOpts, Outcome};

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Number of problem files.
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Players per problem.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Close every generator set under permutations.
    #[arg(long)]
    symmetric: bool,
    #[arg(long, default_value_t = 3)]
    min_generators: usize,
    #[arg(long, default_value_t = 40)]
    max_generators: usize,
}

#[derive(Args, Debug)]
pub struct RuleArgs {
    /// Rule spec such as `nash`, `weighted:0.7,0.3` or `coarse:nash_threshold:0.1`.
    #[arg(long)]
    rule: Option<String>,
    /// Improving-set JSON file; solves with its coarse Nash rule.
    #[arg(long, value_name = "FILE")]
    set: Option<PathBuf>,
}

impl RuleArgs {
    fn resolve(&self, g: &GlobalOpts) -> Result<SolutionRule> {
        corpus::resolve_rule(self.rule.as_deref(), self.set.as_deref(), g.tol)
    }
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    rule: RuleArgs,
    /// Problem files or directories of them.
    #[arg(required = true)]
    problems: Vec<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    rule: RuleArgs,
    /// Player counts to sample when no corpus is given.
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3])]
    dims: Vec<usize>,
    /// Optional corpus; base problems are drawn from it instead of sampled.
    corpus: Vec<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SetArgs {
    /// Set spec such as `orthant`, `cone:0.3,0.7;0.7,0.3` or `union:0.3,0.7;0.7,0.3`.
    #[arg(long)]
    spec: Option<String>,
    /// Improving-set JSON file.
    #[arg(long, value_name = "FILE")]
    set: Option<PathBuf>,
    /// Players; defaults to the set's own dimension, else 2.
    #[arg(long)]
    n: Option<usize>,
    /// Sampled members for the separating program and the inclusion check.
    #[arg(long, default_value_t = 2000)]
    samples: usize,
}

impl SetArgs {
    fn resolve(&self) -> Result<(ImprovingSet, usize)> {
        let set = corpus::resolve_set(self.spec.as_deref(), self.set.as_deref())?;
        let n = self.n.or(set.dim()).unwrap_or(2);
        set.check_dim(n)?;
        Ok((set, n))
    }
}

#[derive(Args, Debug)]
pub struct RationalizeArgs {
    #[command(flatten)]
    rule: RuleArgs,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Triples for the transitivity checks.
    #[arg(long, default_value_t = 10_000)]
    triples: usize,
    /// Probes for reconstruction and base independence.
    #[arg(long, default_value_t = 1_000)]
    probes: usize,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Rule spec on the left.
    #[arg(long)]
    left: String,
    /// Rule spec on the right.
    #[arg(long)]
    right: String,
    /// Players for sampled problems when no files are given.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Problem files or directories; `--trials` random problems when empty.
    problems: Vec<PathBuf>,
}

type CsvOut = csv::Writer<Box<dyn Write>>;

fn csv_to(path: Option<&Path>) -> Result<CsvOut> {
    let sink: Box<dyn Write> = match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            Box::new(io::BufWriter::new(
                fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
            ))
        }
        None => Box::new(io::stdout().lock()),
    };
    Ok(csv::WriterBuilder::new().flexible(false).from_writer(sink))
}

fn out_dir(g: &GlobalOpts) -> Result<Option<PathBuf>> {
    match &g.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            Ok(Some(dir.clone()))
        }
        None => Ok(None),
    }
}

fn fmt_point(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn fmt_points(vs: &[Vec<f64>]) -> String {
    vs.iter().map(|v| fmt_point(v)).collect::<Vec<_>>().join(";")
}

fn coord_headers(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn padded(v: &[f64], width: usize) -> Vec<String> {
    let mut cells: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    cells.resize(width, String::new());
    cells
}

fn profile(g: &GlobalOpts) -> Result<Option<Profile>> {
    g.profile.as_deref().map(Profile::named).transpose().map_err(Into::into)
}

/// Applies the profile, reporting the first mismatch on stderr.
fn judge(g: &GlobalOpts, verdicts: &[AxiomVerdict]) -> Result<Outcome> {
    let Some(p) = profile(g)? else {
        return Ok(Outcome::Ok);
    };
    Ok(match p.first_mismatch(verdicts) {
        Some(m) => {
            eprintln!("profile {}: {m}", p.name);
            Outcome::Mismatch
        }
        None => Outcome::Ok,
    })
}

fn expected_str(p: Option<&Profile>, v: &AxiomVerdict) -> &'static str {
    match p.map(|p| p.expectation(v.axiom)) {
        Some(Expect::Pass) => "PASS",
        Some(Expect::Fail) => "FAIL",
        Some(Expect::Any) | None => "ANY",
    }
}

pub fn gen(g: &GlobalOpts, a: &GenArgs) -> Result<Outcome> {
    if a.count == 0 {
        bail!("empty corpus: --count must be positive");
    }
    let Some(dir) = out_dir(g)? else {
        bail!("gen needs --out DIR");
    };
    let shape = ProblemShape {
        min_generators: a.min_generators,
        max_generators: a.max_generators,
        symmetric: a.symmetric,
    };
    for i in 0..a.count {
        let mut rng = sampling::rng(sampling::derive_seed(g.seed, i as u64));
        let p = sampling::random_problem(&mut rng, a.n, &shape, format!("P{i:03}"))?;
        files::write_problem(&dir.join(format!("problem_{i:03}.json")), &p)?;
    }
    eprintln!("wrote {} problems to {}", a.count, dir.display());
    Ok(Outcome::Ok)
}

pub fn solve(g: &GlobalOpts, a: &SolveArgs) -> Result<Outcome> {
    let rule = a.rule.resolve(g)?;
    let problems = corpus::load_problems(&a.problems)?;
    let width = problems.iter().map(|p| p.problem.dim()).max().unwrap_or(0);
    let mut out = csv_to(g.out.as_deref())?;
    let mut header = vec!["problem".to_string(), "label".into(), "index".into()];
    header.extend(coord_headers("u", width));
    out.write_record(&header)?;
    for Loaded { name, problem } in &problems {
        let chosen = rule.solve(problem).with_context(|| name.clone())?;
        for (i, x) in chosen.chosen().iter().enumerate() {
            let mut row = vec![name.clone(), problem.label().to_string(), i.to_string()];
            row.extend(padded(x.as_slice(), width));
            out.write_record(&row)?;
        }
    }
    out.flush()?;
    Ok(Outcome::Ok)
}

pub fn check_axioms(g: &GlobalOpts, a: &CheckArgs) -> Result<Outcome> {
    let rule = a.rule.resolve(g)?;
    let prof = profile(g)?;
    let corpus = corpus::load_problems(&a.corpus)?
        .into_iter()
        .map(|l| l.problem)
        .collect();
    let cfg = SuiteConfig {
        dims: a.dims.clone(),
        ..SuiteConfig::default()
    }
    .with_corpus(corpus);
    let verdicts = axioms::run_suite(&rule, &cfg, g.trials, g.seed)?;

    let dir = out_dir(g)?;
    let mut out = csv_to(dir.as_ref().map(|d| d.join("verdicts.csv")).as_deref())?;
    out.write_record(["rule", "axiom", "status", "trials", "expected", "witness"])?;
    for v in &verdicts {
        let witness = match (&v.witness, &dir) {
            (Some(w), Some(d)) => {
                let name = format!("witness_{}.json", v.axiom);
                files::write_json(&d.join(&name), &w.to_file(v.axiom, &rule.name()))?;
                name
            }
            (Some(_), None) => "-".to_string(),
            (None, _) => String::new(),
        };
        out.write_record([
            rule.name(),
            v.axiom.to_string(),
            v.status.to_string(),
            v.trials.to_string(),
            expected_str(prof.as_ref(), v).to_string(),
            witness,
        ])?;
    }
    out.flush()?;
    judge(g, &verdicts)
}

pub fn validate_set(g: &GlobalOpts, a: &SetArgs) -> Result<Outcome> {
    let (set, n) = a.resolve()?;
    let report = set.validate(n, g.trials, g.seed)?;
    let mut out = csv_to(g.out.as_deref())?;
    out.write_record(["set", "condition", "status", "analytic", "trials", "witness"])?;
    for c in &report.checks {
        out.write_record([
            report.set_name.clone(),
            c.condition.as_str().to_string(),
            c.status.as_str().to_string(),
            c.analytic.unwrap_or("").to_string(),
            c.trials.to_string(),
            c.witness.as_deref().map(fmt_points).unwrap_or_default(),
        ])?;
    }
    out.write_record([
        report.set_name.as_str(),
        "monotonicity",
        report.monotonicity.as_str(),
        "",
        &g.trials.to_string(),
        "",
    ])?;
    out.flush()?;
    if report.passed() {
        Ok(Outcome::Ok)
    } else {
        for c in report.checks.iter().filter(|c| c.status != CheckStatus::Pass) {
            eprintln!("{}: {} {}", report.set_name, c.condition.as_str(), c.status.as_str());
        }
        Ok(Outcome::Mismatch)
    }
}

pub fn separate(g: &GlobalOpts, a: &SetArgs) -> Result<Outcome> {
    let (set, n) = a.resolve()?;
    let mut out = csv_to(g.out.as_deref())?;
    out.write_record([
        "set",
        "method",
        "weight",
        "margin",
        "origin_interior",
        "inclusion_samples",
        "inclusion_violations",
        "status",
    ])?;
    let name = set.variant_name();
    let outcome = match separation::separating_weight(&set, n, a.samples, g.seed) {
        Ok(sep) => {
            let check = separation::verify_halfspace_inclusion(
                &set,
                &sep.weight,
                a.samples,
                sampling::derive_seed(g.seed, 1),
            )?;
            let method = match sep.method {
                Method::Analytic => "analytic",
                Method::LinearProgram => "linear_program",
            };
            out.write_record([
                name,
                method.to_string(),
                fmt_point(sep.weight.as_slice()),
                sep.margin.map(|m| m.to_string()).unwrap_or_default(),
                sep.origin_interior.map(|b| b.to_string()).unwrap_or_default(),
                check.samples.to_string(),
                check.violations.to_string(),
                check.status.to_string(),
            ])?;
            if check.passed() {
                Outcome::Ok
            } else {
                Outcome::Mismatch
            }
        }
        Err(Error::NoSeparatingWeight { margin, certificate }) => {
            eprintln!(
                "{name}: no separating weight (best margin {margin}); binding samples {}",
                fmt_points(&certificate)
            );
            out.write_record([name, "none".into(), String::new(), margin.to_string(), String::new(), "0".into(), "0".into(), "FAIL".into()])?;
            Outcome::Mismatch
        }
        Err(e) => return Err(e.into()),
    };
    out.flush()?;
    Ok(outcome)
}

pub fn rationalize(g: &GlobalOpts, a: &RationalizeArgs) -> Result<Outcome> {
    let rule = a.rule.resolve(g)?;
    let cfg = RationalizeConfig {
        triples: a.triples,
        pairs: a.probes,
        probes: a.probes,
        problems: g.trials,
    };
    let report = revealed::rationalize(&rule, a.n, &cfg, g.seed)?;
    let dir = out_dir(g)?;

    let mut out = csv_to(dir.as_ref().map(|d| d.join("verdicts.csv")).as_deref())?;
    out.write_record(["rule", "check", "status", "trials", "witness"])?;
    for v in &report.verdicts {
        let detail = v.witness.as_ref().map_or_else(String::new, |w| {
            let pts: Vec<Vec<f64>> = w.points.iter().map(|p| p.as_slice().to_vec()).collect();
            if pts.is_empty() {
                w.detail.clone()
            } else {
                format!("{}: {}", w.detail, fmt_points(&pts))
            }
        });
        out.write_record([rule.name(), v.axiom.to_string(), v.status.to_string(), v.trials.to_string(), detail])?;
    }
    out.flush()?;

    if let Some(d) = &dir {
        let mut probes = csv_to(Some(&d.join("probes.csv")))?;
        let mut header = coord_headers("z", a.n);
        header.push("member".into());
        probes.write_record(&header)?;
        for p in &report.probes {
            let mut row: Vec<String> = p.z.iter().map(|v| v.to_string()).collect();
            row.push(u8::from(p.member).to_string());
            probes.write_record(&row)?;
        }
        probes.flush()?;
    }
    judge(g, &report.verdicts)
}

pub fn compare(g: &GlobalOpts, a: &CompareArgs) -> Result<Outcome> {
    let parse = |spec: &str| -> Result<SolutionRule> {
        let r: SolutionRule = spec.parse()?;
        Ok(match g.tol {
            Some(t) => r.with_tol(t),
            None => r,
        })
    };
    let (left, right) = (parse(&a.left)?, parse(&a.right)?);
    let problems = if a.problems.is_empty() {
        let mut rng = sampling::rng(g.seed);
        (0..g.trials)
            .map(|i| {
                let p = sampling::random_problem(&mut rng, a.n, &ProblemShape::default(), format!("P{i:03}"))?;
                Ok(Loaded {
                    name: format!("sample_{i:03}"),
                    problem: p,
                })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        corpus::load_problems(&a.problems)?
    };

    let mut out = csv_to(g.out.as_deref())?;
    out.write_record(["problem", "label", "size_left", "size_right", "left_in_right", "right_in_left", "strict"])?;
    let mut included = 0;
    for Loaded { name, problem } in &problems {
        let l = left.solve(problem).with_context(|| name.clone())?;
        let r = right.solve(problem).with_context(|| name.clone())?;
        let (lr, rl) = (l.is_subset_of(&r), r.is_subset_of(&l));
        included += usize::from(lr);
        out.write_record([
            name.clone(),
            problem.label().to_string(),
            l.chosen().len().to_string(),
            r.chosen().len().to_string(),
            lr.to_string(),
            rl.to_string(),
            (lr && !rl).to_string(),
        ])?;
    }
    out.flush()?;
    eprintln!(
        "{} ⊆ {} on {included}/{} problems",
        left.name(),
        right.name(),
        problems.len()
    );
    Ok(Outcome::Ok)
}
