use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use coarse_nash::files::{self, ImprovingSetFile};
use coarse_nash::{BargainingProblem, ImprovingSet, SolutionRule};

/// A problem together with the file it came from.
pub struct Loaded {
    pub name: String,
    pub problem: BargainingProblem,
}

/// Expands directories to their `*.json` files, sorted by name.
fn expand(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut entries: Vec<PathBuf> = fs::read_dir(p)
                .with_context(|| format!("reading directory {}", p.display()))?
                .map(|e| e.map(|e| e.path()))
                .collect::<std::io::Result<_>>()?;
            entries.retain(|e| e.extension().is_some_and(|x| x == "json"));
            entries.sort();
            out.extend(entries);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

pub fn load_problems(paths: &[PathBuf]) -> Result<Vec<Loaded>> {
    expand(paths)?
        .into_iter()
        .map(|path| {
            let problem = files::read_problem(&path).with_context(|| format!("{}", path.display()))?;
            let name = path
                .file_name()
                .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
            Ok(Loaded { name, problem })
        })
        .collect()
}

pub fn load_set(path: &Path) -> Result<ImprovingSet> {
    let record: ImprovingSetFile = files::read_json(path).with_context(|| format!("{}", path.display()))?;
    ImprovingSet::from_record(&record).with_context(|| format!("{}", path.display()))
}

/// A rule from `--rule SPEC` or a coarse rule from `--set FILE`.
pub fn resolve_rule(rule: Option<&str>, set: Option<&Path>, tol: Option<f64>) -> Result<SolutionRule> {
    let rule = match (rule, set) {
        (Some(spec), None) => spec.parse::<SolutionRule>()?,
        (None, Some(path)) => SolutionRule::coarse(load_set(path)?),
        (Some(_), Some(_)) => bail!("give either --rule or --set, not both"),
        (None, None) => bail!("a rule is required: --rule SPEC or --set FILE"),
    };
    Ok(match tol {
        Some(t) => rule.with_tol(t),
        None => rule,
    })
}

/// An improving set from `--spec SET` or `--set FILE`.
pub fn resolve_set(spec: Option<&str>, set: Option<&Path>) -> Result<ImprovingSet> {
    match (spec, set) {
        (Some(s), None) => Ok(s.parse()?),
        (None, Some(path)) => load_set(path),
        (Some(_), Some(_)) => bail!("give either --spec or --set, not both"),
        (None, None) => bail!("an improving set is required: --spec SET or --set FILE"),
    }
}
