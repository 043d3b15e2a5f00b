//! Built-in groups and candidate sets.
//!
//! `myeg` is the 4-dimensional unipotent group over `GF(p^p)` generated by
//! `I + E43`, `I + E21` and `I + z E21 + E41`, acting on coordinates ordered
//! `(x1, y1, x2, y2)`. Its invariant ring is a hypersurface; the catalog
//! carries the five printed generators, their relation, and a four-element
//! separating set.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{is_prime, Field, FieldSpec, GaloisField, Gf, MAX_FIELD_ORDER};
use crate::group::{FiniteMatrixGroup, DEFAULT_MAX_ORDER};
use crate::matrix::Matrix;
use crate::poly::{var_list, MultiPoly};
use crate::verify::{
    check_invariant, compare_partitions, verify_separating, CandidateSet, PartitionComparison,
    SeparationVerdict, VerifyOptions,
};

pub const MYEG_VARS: [&str; 4] = ["x1", "y1", "x2", "y2"];

#[derive(Debug, Clone)]
pub struct MyEgBundle {
    pub p: u64,
    pub field: GaloisField,
    pub group: FiniteMatrixGroup<GaloisField>,
    pub x1: MultiPoly<GaloisField>,
    pub x2: MultiPoly<GaloisField>,
    pub m1: MultiPoly<GaloisField>,
    pub m2: MultiPoly<GaloisField>,
    pub h: MultiPoly<GaloisField>,
    /// `{x1, x2, M1, M2 - (x1^(p-1) - x2^(p-1))^(p-1) h}`.
    pub separating: Vec<MultiPoly<GaloisField>>,
    /// Expansion of the generating relation; zero when the formulas are right.
    pub relation: MultiPoly<GaloisField>,
}

impl MyEgBundle {
    /// `x1, x2, M1, M2, h`.
    pub fn invariants(&self) -> Vec<MultiPoly<GaloisField>> {
        vec![
            self.x1.clone(),
            self.x2.clone(),
            self.m1.clone(),
            self.m2.clone(),
            self.h.clone(),
        ]
    }
}

/// `Z^p - Z - 1`, low coefficient first.
pub fn myeg_modulus(p: u64) -> Vec<u64> {
    let mut m = vec![0; p as usize + 1];
    m[0] = p - 1;
    m[1] = (m[1] + p - 1) % p;
    m[p as usize] = 1;
    m
}

pub fn myeg_field(p: u64) -> Result<GaloisField> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let order = (p as u128).checked_pow(p as u32).unwrap_or(u128::MAX);
    if order > MAX_FIELD_ORDER as u128 {
        return Err(Error::BudgetExceeded {
            needed: format!("{p}^{p}"),
            budget: MAX_FIELD_ORDER,
        });
    }
    GaloisField::new(p, &myeg_modulus(p))
}

pub fn myeg_generators(field: &GaloisField) -> Vec<Matrix<GaloisField>> {
    let one = field.one();
    let with = |entries: &[(usize, usize, Gf)]| {
        let mut m = Matrix::identity(field.clone(), 4);
        for (r, c, v) in entries {
            m.set(r - 1, c - 1, *v);
        }
        m
    };
    vec![
        with(&[(4, 3, one)]),
        with(&[(2, 1, one)]),
        with(&[
            (2, 1, field.generator().expect("proper extension")),
            (4, 1, one),
        ]),
    ]
}

pub fn myeg_bundle(p: u64) -> Result<MyEgBundle> {
    let field = myeg_field(p)?;
    let group =
        FiniteMatrixGroup::closure(field.clone(), 4, myeg_generators(&field), DEFAULT_MAX_ORDER)?;
    let vars = var_list(&MYEG_VARS);
    let var = |i| MultiPoly::var(field.clone(), vars.clone(), i);
    let (x1, y1, x2, y2) = (var(0), var(1), var(2), var(3));
    let q = p - 1;

    let a1 = y1.pow(p).sub(&x1.pow(q).mul(&y1)?)?;
    let a2 = y2.pow(p).sub(&x2.pow(q).mul(&y2)?)?;
    let m1 = a1.pow(p).sub(&x1.pow(p).pow(q).mul(&a1)?)?;
    let m2 = a2
        .pow(p)
        .sub(&x1.pow(p).sub(&x2.pow(q).mul(&x1)?)?.pow(q).mul(&a2)?)?;
    let d = x1.pow(q).sub(&x2.pow(q))?;
    let h = d.mul(&a1)?.sub(&x1.pow(q).mul(&a2)?)?;

    let last = m2.sub(&d.pow(q).mul(&h)?)?;
    let relation = h
        .pow(p)
        .sub(&d.pow(p).mul(&m1)?)?
        .add(&x1.pow(p * p - p).mul(&m2)?)?
        .sub(&x1.pow(p).mul(&d)?.pow(q).mul(&h)?)?;

    Ok(MyEgBundle {
        p,
        field,
        group,
        separating: vec![x1.clone(), x2.clone(), m1.clone(), last],
        x1,
        x2,
        m1,
        m2,
        h,
        relation,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupParams {
    pub p: Option<u64>,
    pub n: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct NamedCandidates {
    pub label: String,
    pub polys: Vec<MultiPoly<GaloisField>>,
}

#[derive(Debug, Clone)]
pub struct BuiltinGroup {
    pub name: String,
    pub group: FiniteMatrixGroup<GaloisField>,
    pub vars: Vec<String>,
    pub candidates: Vec<NamedCandidates>,
}

pub const BUILTIN_NAMES: [&str; 3] = ["sign_2d", "cyclic_perm", "myeg"];

fn need_prime(params: &GroupParams) -> Result<u64> {
    let p = params
        .p
        .ok_or_else(|| Error::BadParams("missing p".into()))?;
    if !is_prime(p) {
        return Err(Error::BadParams(format!("p = {p} is not prime")));
    }
    Ok(p)
}

fn parse_all(
    field: &GaloisField,
    vars: &[String],
    texts: &[&str],
) -> Result<Vec<MultiPoly<GaloisField>>> {
    texts
        .iter()
        .map(|t| MultiPoly::parse(field, vars, t))
        .collect()
}

fn candidates(label: &str, polys: Vec<MultiPoly<GaloisField>>) -> NamedCandidates {
    NamedCandidates {
        label: label.to_string(),
        polys,
    }
}

/// Elementary symmetric polynomials in `vars`.
fn elementary_symmetric(field: &GaloisField, vars: &[String]) -> Vec<MultiPoly<GaloisField>> {
    let names = var_list(vars);
    let n = vars.len();
    let mut e = vec![MultiPoly::constant(
        field.clone(),
        names.clone(),
        field.one(),
    )];
    for i in 0..n {
        let x = MultiPoly::var(field.clone(), names.clone(), i);
        let mut next = e.clone();
        for k in 1..=e.len() {
            let term = e[k - 1].mul(&x).expect("same ring");
            if k < next.len() {
                next[k] = next[k].add(&term).expect("same ring");
            } else {
                next.push(term);
            }
        }
        e = next;
    }
    e.split_off(1)
}

pub fn builtin_group(name: &str, params: &GroupParams) -> Result<BuiltinGroup> {
    match name {
        "sign_2d" => {
            let p = need_prime(params)?;
            if p == 2 {
                return Err(Error::BadParams("sign_2d needs an odd prime".into()));
            }
            let field = GaloisField::prime(p)?;
            let minus = Matrix::scalar(field.clone(), 2, field.from_i64(-1));
            let group =
                FiniteMatrixGroup::closure(field.clone(), 2, vec![minus], DEFAULT_MAX_ORDER)?;
            let vars = vec!["x".to_string(), "y".to_string()];
            Ok(BuiltinGroup {
                name: name.into(),
                candidates: vec![
                    candidates(
                        "quadrics",
                        parse_all(&field, &vars, &["x^2", "x*y", "y^2"])?,
                    ),
                    candidates("squares", parse_all(&field, &vars, &["x^2", "y^2"])?),
                ],
                group,
                vars,
            })
        }
        "cyclic_perm" => {
            let p = need_prime(params)?;
            let n = params
                .n
                .ok_or_else(|| Error::BadParams("missing n".into()))?;
            if n < 2 {
                return Err(Error::BadParams(format!(
                    "cyclic_perm needs n >= 2, got {n}"
                )));
            }
            let field = GaloisField::prime(p)?;
            let mut cycle = Matrix::zeros(field.clone(), n, n);
            for i in 0..n {
                cycle.set((i + 1) % n, i, field.one());
            }
            let group =
                FiniteMatrixGroup::closure(field.clone(), n, vec![cycle], DEFAULT_MAX_ORDER)?;
            let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            Ok(BuiltinGroup {
                name: name.into(),
                candidates: vec![candidates(
                    "elementary_symmetric",
                    elementary_symmetric(&field, &vars),
                )],
                group,
                vars,
            })
        }
        "myeg" => {
            let p = need_prime(params)?;
            let b = myeg_bundle(p)?;
            Ok(BuiltinGroup {
                name: name.into(),
                candidates: vec![
                    candidates("separating", b.separating.clone()),
                    candidates("generators", b.invariants()),
                ],
                group: b.group,
                vars: MYEG_VARS.iter().map(|s| s.to_string()).collect(),
            })
        }
        other => Err(Error::UnknownName(other.to_string())),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceEntry {
    pub name: &'static str,
    pub invariant: bool,
}

#[derive(Debug, Clone)]
pub struct MyEgReport {
    pub p: u64,
    pub max_ext: u32,
    pub field: FieldSpec,
    pub order: usize,
    pub invariance: Vec<InvarianceEntry>,
    pub relation_zero: bool,
    pub separating_set: SeparationVerdict,
    pub generating_set: SeparationVerdict,
    pub partitions: Vec<PartitionComparison>,
    pub reflections: usize,
    pub reflection_generated: bool,
}

impl MyEgReport {
    pub fn all_pass(&self) -> bool {
        self.invariance.iter().all(|e| e.invariant)
            && self.relation_zero
            && self.separating_set.is_separating()
            && self.generating_set.is_separating()
            && self.partitions.iter().all(|c| c.equal)
            && self.reflection_generated
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "max_ext": self.max_ext,
            "field": self.field,
            "order": self.order,
            "invariance": self.invariance,
            "relation_zero": self.relation_zero,
            "separating_set": self.separating_set.to_json(),
            "generating_set": self.generating_set.to_json(),
            "partitions": self.partitions.iter().map(PartitionComparison::to_json).collect::<Vec<_>>(),
            "reflections": self.reflections,
            "reflection_generated": self.reflection_generated,
            "all_pass": self.all_pass(),
        })
    }
}

/// Runs every check on the `myeg` bundle; `opts.max_ext` sets the ladder.
pub fn verify_myeg(p: u64, opts: &VerifyOptions) -> Result<MyEgReport> {
    let b = myeg_bundle(p)?;
    let names = ["x1", "x2", "M1", "M2", "h"];
    let mut invariance = Vec::new();
    for (name, f) in names.iter().zip(b.invariants()) {
        invariance.push(InvarianceEntry {
            name,
            invariant: check_invariant(&f, &b.group)?.invariant,
        });
    }
    let s = CandidateSet::new(&b.group, b.separating.clone())?;
    let gens = CandidateSet::new(&b.group, b.invariants())?;
    let separating_set = verify_separating(&b.group, &s, opts)?;
    let generating_set = verify_separating(&b.group, &gens, opts)?;
    let partitions = (1..=opts.max_ext)
        .map(|m| compare_partitions(&b.group, &s, &gens, m, opts.budget))
        .collect::<Result<Vec<_>>>()?;
    let class = b.group.generated_by_class(1);
    Ok(MyEgReport {
        p,
        max_ext: opts.max_ext,
        field: b.field.spec(),
        order: b.group.order(),
        invariance,
        relation_zero: b.relation.is_zero(),
        separating_set,
        generating_set,
        partitions,
        reflections: class.class.len(),
        reflection_generated: class.verdict,
    })
}
