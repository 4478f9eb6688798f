//! JSON records for problems, improving sets and axiom witnesses.
//!
//! Every record carries a `schema_version`; unknown fields are rejected and
//! errors name the offending field path.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BargainingProblem, UtilityVector};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: u32,
    pub n: usize,
    pub label: String,
    pub generators: Vec<Vec<f64>>,
}

impl ProblemFile {
    /// Generators come out in lexicographic order.
    pub fn from_problem(problem: &BargainingProblem) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            n: problem.dim(),
            label: problem.label().to_string(),
            generators: problem
                .generators()
                .iter()
                .map(|g| g.as_slice().to_vec())
                .collect(),
        }
    }

    pub fn to_problem(&self) -> Result<BargainingProblem> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::schema(
                "schema_version",
                format!("unsupported version {}", self.schema_version),
            ));
        }
        if self.generators.is_empty() {
            return Err(Error::schema("generators", "must be nonempty"));
        }
        let gens = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != self.n {
                    return Err(Error::schema(
                        format!("generators[{i}]"),
                        format!("expected {} coordinates, found {}", self.n, row.len()),
                    ));
                }
                UtilityVector::new(row.clone()).map_err(|e| match e {
                    Error::NonPositiveCoordinate { index, value } => Error::schema(
                        format!("generators[{i}][{index}]"),
                        format!("must be a finite positive number, got {value}"),
                    ),
                    other => Error::schema("n", other.to_string()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        BargainingProblem::new(self.label.clone(), gens)
    }
}

/// Serialized form of the built-in improving sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImprovingSetFile {
    pub schema_version: u32,
    pub variant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<f64>>,
    #[serde(rename = "W", default, skip_serializing_if = "Option::is_none")]
    pub cone_weights: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

/// A failed axiom check, with enough context to rerun it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub schema_version: u32,
    pub axiom: String,
    pub rule: String,
    pub seed: Option<u64>,
    pub problems: Vec<ProblemFile>,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<Vec<f64>>,
    pub detail: String,
}

/// Parses JSON, reporting the path of the first offending field.
pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "<root>".to_string() } else { path };
        Error::schema(field, e.into_inner().to_string())
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_json_str(&fs::read_to_string(path)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

pub fn parse_problem(text: &str) -> Result<BargainingProblem> {
    from_json_str::<ProblemFile>(text)?.to_problem()
}

pub fn read_problem(path: &Path) -> Result<BargainingProblem> {
    read_json::<ProblemFile>(path)?.to_problem()
}

pub fn write_problem(path: &Path, problem: &BargainingProblem) -> Result<()> {
    write_json(path, &ProblemFile::from_problem(problem))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problem_round_trip_is_sorted() {
        let p = BargainingProblem::from_rows("p", &[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let text = to_json_string(&ProblemFile::from_problem(&p)).unwrap();
        let back = parse_problem(&text).unwrap();
        assert_eq!(back, p);
        assert!(text.find("1.0,").unwrap() < text.find("2.0,").unwrap());
    }

    #[test]
    fn errors_name_the_field() {
        let err = parse_problem(r#"{"schema_version":1,"n":2,"label":"x","generators":[[1,2],[1,-3]]}"#)
            .unwrap_err();
        assert!(err.to_string().starts_with("generators[1][1]"), "{err}");

        let err = parse_problem(r#"{"schema_version":1,"n":2,"label":"x","generators":[[1,"a"]]}"#)
            .unwrap_err();
        assert!(err.to_string().starts_with("generators[0][1]"), "{err}");

        let err = parse_problem(r#"{"schema_version":1,"n":2,"label":"x","generators":[[1,2]],"extra":0}"#)
            .unwrap_err();
        assert!(err.to_string().contains("extra"), "{err}");

        let err = parse_problem(r#"{"schema_version":1,"n":3,"label":"x","generators":[[1,2]]}"#).unwrap_err();
        assert!(err.to_string().starts_with("generators[0]"), "{err}");

        let err = parse_problem(r#"{"schema_version":1,"n":2,"label":"x","generators":[]}"#).unwrap_err();
        assert!(err.to_string().starts_with("generators"), "{err}");

        let err = parse_problem(r#"{"schema_version":2,"n":2,"label":"x","generators":[[1,1]]}"#).unwrap_err();
        assert!(err.to_string().starts_with("schema_version"), "{err}");
    }

    #[test]
    fn improving_set_file_uses_capital_w() {
        let f: ImprovingSetFile =
            from_json_str(r#"{"schema_version":1,"variant":"cone","W":[[0.3,0.7],[0.7,0.3]]}"#).unwrap();
        assert_eq!(f.cone_weights.as_ref().unwrap().len(), 2);
        let text = to_json_string(&f).unwrap();
        assert!(text.contains("\"W\"") && !text.contains("epsilon"));
    }
}
