use std::path::{Path, PathBuf};
use std::time::Instant;

use sepinv::catalog::{builtin_group, myeg_bundle, verify_myeg, GroupParams};
use sepinv::field::{AnyField, Field, FieldSpec, GaloisField};
use sepinv::group::FiniteMatrixGroup;
use sepinv::io::{GroupData, OutputFormat, PolyData, Report, RunConfig};
use sepinv::scheme::build_scheme_graph;
use sepinv::torus::{refute_hypersurface, RefuteOptions};
use sepinv::verify::{
    compare_partitions, emit_delta_generators, verify_separating, CandidateSet, ScanMode,
    VerifyOptions,
};
use sepinv::{Error, Result};
use serde_json::{json, Value};

use crate::{
    CatalogCommand, Command, DeltaCommand, DerksenCommand, GroupCommand, SchemeCommand,
    SeparatingCommand,
};

/// Groups larger than this skip the scheme connectivity section of `group analyze`.
const SCHEME_ORDER_LIMIT: usize = 4096;

pub struct Outcome {
    pub text: String,
    pub verdict: String,
}

pub fn run(command: &Command, config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    let start = Instant::now();
    match command {
        Command::Group {
            command: GroupCommand::Analyze { input },
        } => {
            let data = GroupData::load(input)?;
            let (result, verdict) = match data.field.build()? {
                AnyField::Finite(f) => analyze(&data.group(&f, config.max_order)?),
                AnyField::Rationals(q) => analyze(&data.group(&q, config.max_order)?),
            };
            report("group analyze", config, result, verdict, start)
        }
        Command::Scheme {
            command: SchemeCommand::Graph { input },
        } => {
            let data = GroupData::load(input)?;
            match data.field.build()? {
                AnyField::Finite(f) => graph(&data.group(&f, config.max_order)?, config),
                AnyField::Rationals(q) => graph(&data.group(&q, config.max_order)?, config),
            }
        }
        Command::Separating { command } => separating(command, config, start),
        Command::Catalog { command } => catalog(command, config, start),
        Command::Derksen {
            command:
                DerksenCommand::Refute {
                    candidates,
                    characteristic,
                    ext_max,
                },
        } => {
            let data = PolyData::load(candidates)?;
            let field = match poly_field(&data, *characteristic)? {
                Some(spec) => spec.finite()?,
                None => {
                    return Err(Error::BadParams(
                        "give --char or a field in the candidate file".into(),
                    ))
                }
            };
            let cfg = RunConfig {
                max_ext: *ext_max,
                ..config.clone()
            };
            cfg.validate()?;
            let opts = RefuteOptions {
                max_ext: *ext_max,
                budget: config.budget,
            };
            let outcome = refute_hypersurface(&data.polys(&field)?, &opts)?;
            let verdict = if outcome.witness().is_some() {
                "witness"
            } else {
                "not-found"
            };
            report("derksen refute", &cfg, outcome.to_json(), verdict, start)
        }
        Command::Delta {
            command:
                DeltaCommand::Emit {
                    polys,
                    characteristic,
                },
        } => {
            let data = PolyData::load(polys)?;
            let spec = poly_field(&data, *characteristic)?;
            let out = match spec
                .as_ref()
                .map_or(Ok(AnyField::Rationals(sepinv::Rationals)), FieldSpec::build)?
            {
                AnyField::Finite(f) => delta(&data, &f, spec.is_some())?,
                AnyField::Rationals(q) => delta(&data, &q, spec.is_some())?,
            };
            Ok(Outcome {
                text: out.to_json(),
                verdict: "ok".into(),
            })
        }
    }
}

fn poly_field(data: &PolyData, characteristic: Option<u64>) -> Result<Option<FieldSpec>> {
    let from_char = characteristic
        .map(|p| GaloisField::prime(p).map(|f| f.spec()))
        .transpose()?;
    match (&data.field, from_char) {
        (Some(a), Some(b)) if a != &b => Err(Error::SpecMismatch(format!(
            "--char {} disagrees with the field in the file",
            characteristic.unwrap_or_default()
        ))),
        (Some(a), _) => Ok(Some(a.clone())),
        (None, b) => Ok(b),
    }
}

fn delta<F: Field>(data: &PolyData, field: &F, record_field: bool) -> Result<PolyData> {
    let polys = data.polys(field)?;
    let out = emit_delta_generators(&polys)?;
    let variables: Vec<String> = match out.first() {
        Some(p) => p.vars().to_vec(),
        None => data
            .variables
            .iter()
            .cloned()
            .chain(data.variables.iter().map(|v| format!("{v}p")))
            .collect(),
    };
    Ok(PolyData::from_polys(
        record_field.then_some(field),
        &variables,
        &out,
    ))
}

fn report(
    command: &str,
    config: &RunConfig,
    result: Value,
    verdict: &str,
    start: Instant,
) -> Result<Outcome> {
    let mut r = Report::new(command, config, result);
    r.elapsed_ms = start.elapsed().as_millis();
    let text = match config.format {
        OutputFormat::Json => r.to_json(),
        OutputFormat::Text => {
            let v: Value = serde_json::from_str(&r.to_json()).expect("report is json");
            let mut out = format!("verdict = {verdict}\n");
            flatten("", &v, &mut out);
            out
        }
        OutputFormat::Dot => {
            return Err(Error::UnknownFormat(
                "dot is only available for `scheme graph`".into(),
            ))
        }
    };
    Ok(Outcome {
        text,
        verdict: verdict.to_string(),
    })
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => {
            out.push_str(&format!("{prefix} = {other}\n"));
        }
    }
}

fn analyze<F: Field>(g: &FiniteMatrixGroup<F>) -> (Value, &'static str) {
    let n = g.dim();
    let mut histogram = vec![0usize; n + 1];
    for c in g.classifications() {
        histogram[c.codim] += 1;
    }
    let refl = g.generated_by_class(1);
    let birefl = g.generated_by_class(2);
    let scheme = if g.order() <= SCHEME_ORDER_LIMIT {
        let sg = build_scheme_graph(g);
        let c1 = sg.connectivity_at_codim(1);
        let c2 = sg.connectivity_at_codim(2);
        json!({
            "codim1_connected": c1.connected,
            "codim1_components": c1.components.len(),
            "codim2_connected": c2.connected,
            "codim2_components": c2.components.len(),
        })
    } else {
        Value::Null
    };
    let verdict = if refl.verdict {
        "reflection-generated"
    } else if birefl.verdict {
        "bireflection-generated"
    } else {
        "not-bireflection-generated"
    };
    let result = json!({
        "field": g.field().spec(),
        "dimension": n,
        "order": g.order(),
        "codim_histogram": histogram,
        "reflections": refl.class.len(),
        "bireflections": birefl.class.len(),
        "reflection_generated": refl.verdict,
        "reflection_subgroup_order": refl.subgroup_order,
        "bireflection_generated": birefl.verdict,
        "bireflection_subgroup_order": birefl.subgroup_order,
        "scheme": scheme,
    });
    (result, verdict)
}

fn graph<F: Field>(g: &FiniteMatrixGroup<F>, config: &RunConfig) -> Result<Outcome> {
    let sg = build_scheme_graph(g);
    let text = match config.format {
        OutputFormat::Json => sg.to_json(),
        OutputFormat::Dot => sg.to_dot(),
        OutputFormat::Text => return Err(Error::UnknownFormat("text".into())),
    };
    let verdict = if sg.connectivity_at_codim(1).connected {
        "connected-codim1"
    } else if sg.connectivity_at_codim(2).connected {
        "connected-codim2"
    } else {
        "disconnected"
    };
    Ok(Outcome {
        text,
        verdict: verdict.into(),
    })
}

fn load_candidates(
    group: &Path,
    polys: &Path,
    config: &RunConfig,
) -> Result<(
    FiniteMatrixGroup<GaloisField>,
    Vec<sepinv::MultiPoly<GaloisField>>,
)> {
    let data = GroupData::load(group)?;
    let field = data.field.finite()?;
    let g = data.group(&field, config.max_order)?;
    let polys = PolyData::load(polys)?.polys(&field)?;
    Ok((g, polys))
}

fn separating(command: &SeparatingCommand, config: &RunConfig, start: Instant) -> Result<Outcome> {
    match command {
        SeparatingCommand::Verify {
            group,
            polys,
            ext_max,
            samples,
        } => {
            let cfg = RunConfig {
                max_ext: *ext_max,
                samples: *samples,
                ..config.clone()
            };
            cfg.validate()?;
            let (g, polys) = load_candidates(group, polys, &cfg)?;
            let set = CandidateSet::new(&g, polys)?;
            let opts = VerifyOptions {
                max_ext: *ext_max,
                budget: cfg.budget,
                mode: match samples {
                    Some(count) => ScanMode::Sampled {
                        seed: cfg.seed,
                        count: *count,
                    },
                    None => ScanMode::Exhaustive,
                },
            };
            let v = verify_separating(&g, &set, &opts)?;
            let verdict = if v.is_separating() {
                "separating"
            } else {
                "refuted"
            };
            report("separating verify", &cfg, v.to_json(), verdict, start)
        }
        SeparatingCommand::Compare {
            group,
            polys,
            other,
            ext,
        } => {
            let cfg = RunConfig {
                max_ext: *ext,
                ..config.clone()
            };
            cfg.validate()?;
            let (g, first) = load_candidates(group, polys, &cfg)?;
            let second = PolyData::load(other)?.polys(g.field())?;
            let a = CandidateSet::new(&g, first)?;
            let b = CandidateSet::new(&g, second)?;
            let cmp = compare_partitions(&g, &a, &b, *ext, cfg.budget)?;
            let verdict = if cmp.equal { "equal" } else { "different" };
            report("separating compare", &cfg, cmp.to_json(), verdict, start)
        }
    }
}

fn emit_files<F: Field>(
    emit: &Option<Vec<PathBuf>>,
    group: &FiniteMatrixGroup<F>,
    vars: &[String],
    polys: &[sepinv::MultiPoly<F>],
) -> Result<()> {
    if let Some(paths) = emit {
        GroupData::from_group(group).store(&paths[0])?;
        PolyData::from_polys(Some(group.field()), vars, polys).store(&paths[1])?;
    }
    Ok(())
}

fn catalog(command: &CatalogCommand, config: &RunConfig, start: Instant) -> Result<Outcome> {
    match command {
        CatalogCommand::Myeg { p, emit, set } => {
            let b = myeg_bundle(*p)?;
            let polys = match set.as_str() {
                "separating" => b.separating.clone(),
                "generators" => b.invariants(),
                other => return Err(Error::BadParams(format!("unknown candidate set `{other}`"))),
            };
            let vars: Vec<String> = b.x1.vars().to_vec();
            emit_files(emit, &b.group, &vars, &polys)?;
            let result = json!({
                "p": p,
                "field": b.field.spec(),
                "order": b.group.order(),
                "set": set,
                "variables": vars,
                "polynomials": polys.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "relation_zero": b.relation.is_zero(),
            });
            report("catalog myeg", config, result, "ok", start)
        }
        CatalogCommand::VerifyMyeg { p, ext } => {
            let cfg = RunConfig {
                max_ext: *ext,
                ..config.clone()
            };
            cfg.validate()?;
            let opts = VerifyOptions {
                max_ext: *ext,
                budget: cfg.budget,
                ..VerifyOptions::default()
            };
            let r = verify_myeg(*p, &opts)?;
            let verdict = if r.all_pass() { "all-pass" } else { "fail" };
            report("catalog verify-myeg", &cfg, r.to_json(), verdict, start)
        }
        CatalogCommand::Builtin {
            name,
            p,
            n,
            emit,
            set,
        } => {
            let b = builtin_group(name, &GroupParams { p: *p, n: *n })?;
            let chosen = match set {
                Some(label) => b
                    .candidates
                    .iter()
                    .find(|c| &c.label == label)
                    .ok_or_else(|| Error::BadParams(format!("unknown candidate set `{label}`")))?,
                None => &b.candidates[0],
            };
            emit_files(emit, &b.group, &b.vars, &chosen.polys)?;
            let sets: serde_json::Map<String, Value> = b
                .candidates
                .iter()
                .map(|c| {
                    (
                        c.label.clone(),
                        json!(c.polys.iter().map(ToString::to_string).collect::<Vec<_>>()),
                    )
                })
                .collect();
            let result = json!({
                "name": b.name,
                "field": b.group.field().spec(),
                "dimension": b.group.dim(),
                "order": b.group.order(),
                "variables": b.vars,
                "candidates": sets,
            });
            report("catalog builtin", config, result, "ok", start)
        }
    }
}
