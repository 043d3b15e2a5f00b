//! File formats, run configuration and reports.
//!
//! Every writer emits pretty JSON with a trailing newline and a fixed key
//! order, so loading and storing a canonical file reproduces it byte for byte.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::group::{FiniteMatrixGroup, DEFAULT_MAX_ORDER};
use crate::matrix::Matrix;
use crate::points::DEFAULT_POINT_BUDGET;
use crate::poly::MultiPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
    Dot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub budget: u64,
    pub max_order: usize,
    pub max_ext: u32,
    pub seed: u64,
    /// Sampled scans draw this many points per level; `None` means exhaustive.
    pub samples: Option<u64>,
    /// Not echoed: the worker count never changes an output byte.
    pub workers: Option<usize>,
    pub format: OutputFormat,
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            budget: DEFAULT_POINT_BUDGET,
            max_order: DEFAULT_MAX_ORDER,
            max_ext: 2,
            seed: 0,
            samples: None,
            workers: None,
            format: OutputFormat::Json,
            timing: false,
        }
    }
}

#[derive(Serialize)]
struct ConfigEcho {
    budget: u64,
    max_order: usize,
    max_ext: u32,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<u64>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 || self.max_order == 0 || self.max_ext == 0 || self.samples == Some(0) {
            return Err(Error::BadParams(
                "budgets, closure bound and extension ladder must be positive".into(),
            ));
        }
        Ok(())
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            budget: self.budget,
            max_order: self.max_order,
            max_ext: self.max_ext,
            seed: self.seed,
            samples: self.samples,
        }
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    command: &'a str,
    config: ConfigEcho,
    result: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u128>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub result: Value,
    /// Wall time; only serialized when `config.timing` is set.
    pub elapsed_ms: u128,
}

impl Report {
    pub fn new(command: impl Into<String>, config: &RunConfig, result: Value) -> Self {
        Report {
            command: command.into(),
            config: config.clone(),
            result,
            elapsed_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        canonical(&ReportJson {
            command: &self.command,
            config: self.config.echo(),
            result: &self.result,
            timing_ms: self.config.timing.then_some(self.elapsed_ms),
        })
    }
}

/// Pretty JSON with a trailing newline.
pub fn canonical<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

fn schema(pointer: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Schema {
        pointer: pointer.into(),
        msg: msg.into(),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| schema("", format!("line {} column {}: {e}", e.line(), e.column())))
}

fn object<'a>(v: &'a Value, ptr: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| schema(ptr, "expected an object"))
}

fn deny_unknown(obj: &Map<String, Value>, ptr: &str, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(schema(format!("{ptr}/{k}"), "unknown key")),
        None => Ok(()),
    }
}

fn required<'a>(obj: &'a Map<String, Value>, ptr: &str, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(ptr.to_string(), format!("missing key `{key}`")))
}

fn strings(v: &Value, ptr: &str) -> Result<Vec<String>> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema(ptr, "expected an array of strings"))?;
    arr.iter()
        .enumerate()
        .map(|(i, s)| {
            s.as_str()
                .map(str::to_string)
                .ok_or_else(|| schema(format!("{ptr}/{i}"), "expected a string"))
        })
        .collect()
}

fn field_spec(v: &Value, ptr: &str) -> Result<FieldSpec> {
    let spec: FieldSpec =
        serde_json::from_value(v.clone()).map_err(|e| schema(ptr, e.to_string()))?;
    spec.build().map_err(|e| schema(ptr, e.to_string()))?;
    Ok(spec)
}

/// Contents of a group file, before the field is built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupData {
    pub field: FieldSpec,
    pub dimension: usize,
    /// Row-major entries per generator, in field-element text form.
    pub generators: Vec<Vec<String>>,
}

impl GroupData {
    pub fn parse(text: &str) -> Result<Self> {
        let v = parse_json(text)?;
        let obj = object(&v, "")?;
        deny_unknown(obj, "", &["field", "dimension", "generators"])?;
        let field = field_spec(required(obj, "", "field")?, "/field")?;
        let dimension = required(obj, "", "dimension")?
            .as_u64()
            .filter(|&d| d > 0)
            .ok_or_else(|| schema("/dimension", "expected a positive integer"))?
            as usize;
        let gens = required(obj, "", "generators")?
            .as_array()
            .ok_or_else(|| schema("/generators", "expected an array"))?;
        let mut generators = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let ptr = format!("/generators/{i}");
            let entries = strings(g, &ptr)?;
            if entries.len() != dimension * dimension {
                return Err(schema(
                    ptr,
                    format!(
                        "expected {} entries, found {}",
                        dimension * dimension,
                        entries.len()
                    ),
                ));
            }
            generators.push(entries);
        }
        Ok(GroupData {
            field,
            dimension,
            generators,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?)
    }

    pub fn to_json(&self) -> String {
        canonical(self)
    }

    pub fn store(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_json())?)
    }

    pub fn from_generators<F: Field>(
        field: &F,
        dimension: usize,
        generators: &[Matrix<F>],
    ) -> Self {
        GroupData {
            field: field.spec(),
            dimension,
            generators: generators
                .iter()
                .map(|g| g.entries().iter().map(|e| field.format_elem(e)).collect())
                .collect(),
        }
    }

    pub fn from_group<F: Field>(group: &FiniteMatrixGroup<F>) -> Self {
        Self::from_generators(group.field(), group.dim(), group.generators())
    }

    pub fn matrices<F: Field>(&self, field: &F) -> Result<Vec<Matrix<F>>> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let entries = g
                    .iter()
                    .enumerate()
                    .map(|(j, s)| {
                        field
                            .parse_elem(s)
                            .map_err(|e| schema(format!("/generators/{i}/{j}"), e.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Matrix::from_vec(field.clone(), self.dimension, self.dimension, entries)
            })
            .collect()
    }

    pub fn group<F: Field>(&self, field: &F, max_order: usize) -> Result<FiniteMatrixGroup<F>> {
        FiniteMatrixGroup::closure(
            field.clone(),
            self.dimension,
            self.matrices(field)?,
            max_order,
        )
    }
}

/// Contents of a polynomial file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyData {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    pub variables: Vec<String>,
    pub polynomials: Vec<String>,
}

impl PolyData {
    pub fn parse(text: &str) -> Result<Self> {
        let v = parse_json(text)?;
        let obj = object(&v, "")?;
        deny_unknown(obj, "", &["field", "variables", "polynomials"])?;
        let field = obj
            .get("field")
            .map(|f| field_spec(f, "/field"))
            .transpose()?;
        let variables = strings(required(obj, "", "variables")?, "/variables")?;
        for (i, name) in variables.iter().enumerate() {
            let ok = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && name != "z";
            if !ok || variables[..i].contains(name) {
                return Err(schema(
                    format!("/variables/{i}"),
                    format!("invalid or repeated variable `{name}`"),
                ));
            }
        }
        let polynomials = strings(required(obj, "", "polynomials")?, "/polynomials")?;
        Ok(PolyData {
            field,
            variables,
            polynomials,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?)
    }

    pub fn to_json(&self) -> String {
        canonical(self)
    }

    pub fn store(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_json())?)
    }

    /// Polynomials printed canonically; the field is recorded when given.
    pub fn from_polys<F: Field>(
        field: Option<&F>,
        variables: &[String],
        polys: &[MultiPoly<F>],
    ) -> Self {
        PolyData {
            field: field.map(Field::spec),
            variables: variables.to_vec(),
            polynomials: polys.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn polys<F: Field>(&self, field: &F) -> Result<Vec<MultiPoly<F>>> {
        if let Some(spec) = &self.field {
            if spec != &field.spec() {
                return Err(schema(
                    "/field",
                    "polynomial field differs from the group field",
                ));
            }
        }
        self.polynomials
            .iter()
            .enumerate()
            .map(|(i, s)| {
                MultiPoly::parse(field, &self.variables, s)
                    .map_err(|e| schema(format!("/polynomials/{i}"), e.to_string()))
            })
            .collect()
    }
}

/// Reads a graph file written by the scheme exporter.
pub fn parse_graph_json(text: &str) -> Result<Value> {
    let v = parse_json(text)?;
    let obj = object(&v, "")?;
    deny_unknown(obj, "", &["order", "dimension", "vertices", "edges"])?;
    for key in ["order", "dimension"] {
        required(obj, "", key)?
            .as_u64()
            .ok_or_else(|| schema(format!("/{key}"), "expected an integer"))?;
    }
    for key in ["vertices", "edges"] {
        required(obj, "", key)?
            .as_array()
            .ok_or_else(|| schema(format!("/{key}"), "expected an array"))?;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::myeg_bundle;
    use crate::field::GaloisField;

    #[test]
    fn group_round_trip() {
        let b = myeg_bundle(2).unwrap();
        let data = GroupData::from_group(&b.group);
        let text = data.to_json();
        assert!(text.starts_with("{\n  \"field\": {\n    \"kind\": \"finite\",\n    \"char\": 2,"));
        let back = GroupData::parse(&text).unwrap();
        assert_eq!(back.to_json(), text);
        let g = back.group(&b.field, 100).unwrap();
        assert_eq!(g.order(), 8);
    }

    #[test]
    fn schema_errors_carry_pointers() {
        let bad = r#"{"field":{"kind":"finite","char":3,"degree":1},"dimension":2,"generators":[["1","0","0"]]}"#;
        assert_eq!(
            GroupData::parse(bad).unwrap_err(),
            schema("/generators/0", "expected 4 entries, found 3")
        );
        let extra = r#"{"field":{"kind":"rationals"},"dimension":1,"generators":[],"x":1}"#;
        assert!(
            matches!(GroupData::parse(extra), Err(Error::Schema { pointer, .. }) if pointer == "/x")
        );
        let bad_elem =
            r#"{"field":{"kind":"finite","char":3,"degree":1},"dimension":1,"generators":[["z"]]}"#;
        let data = GroupData::parse(bad_elem).unwrap();
        let f = GaloisField::prime(3).unwrap();
        assert!(
            matches!(data.matrices(&f), Err(Error::Schema { pointer, .. }) if pointer == "/generators/0/0")
        );
    }

    #[test]
    fn poly_files() {
        let text = r#"{"variables":["x","y"],"polynomials":["x^2","x*w"]}"#;
        let data = PolyData::parse(text).unwrap();
        let f = GaloisField::prime(3).unwrap();
        assert!(
            matches!(data.polys(&f), Err(Error::Schema { pointer, .. }) if pointer == "/polynomials/1")
        );
        let ok = PolyData::parse(r#"{"variables":["x","y"],"polynomials":["y + x^2"]}"#).unwrap();
        let polys = ok.polys(&f).unwrap();
        let canon = PolyData::from_polys(None, &ok.variables, &polys);
        assert_eq!(canon.polynomials, vec!["x^2 + y"]);
        assert_eq!(PolyData::parse(&canon.to_json()).unwrap(), canon);
        assert!(PolyData::parse(r#"{"variables":["x","x"],"polynomials":[]}"#).is_err());
    }

    #[test]
    fn reports_are_stable() {
        let mut cfg = RunConfig::default();
        let r = Report::new("group analyze", &cfg, serde_json::json!({"order": 2}));
        let a = r.to_json();
        cfg.workers = Some(7);
        let mut r2 = Report::new("group analyze", &cfg, serde_json::json!({"order": 2}));
        r2.elapsed_ms = 1234;
        assert_eq!(a, r2.to_json());
        assert!(!a.contains("timing"));
        cfg.timing = true;
        let r3 = Report { config: cfg, ..r2 };
        assert!(r3.to_json().contains("\"timing_ms\": 1234"));
    }
}
