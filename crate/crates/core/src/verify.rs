//! Separation checks for candidate invariants.
//!
//! For a finite group, invariants separate two points of `V ⊗ k̄` exactly when
//! the points lie in different orbits. The verifier therefore buckets the
//! points of `GF(q^m)^n` by the tuple of candidate values (the signature) and
//! demands that every bucket be a single orbit. A failure is a definitive
//! counterexample. Passing through level `M` is only a bounded certificate:
//! nothing here bounds the extension degree that would suffice in general.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{extension, Embedding, Field, FieldSpec, FiniteField, GaloisField, Gf};
use crate::group::FiniteMatrixGroup;
use crate::points::{PointSpace, DEFAULT_POINT_BUDGET};
use crate::poly::{var_list, MultiPoly};

/// Points whose signatures are computed per parallel batch.
const BATCH: u64 = 1 << 15;

pub const BOUNDED_NOTE: &str =
    "bounded certificate: no counterexample over the tested extensions; not a proof of geometric separation";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceCheck {
    pub invariant: bool,
    /// Index of the first generator that moves the polynomial.
    pub witness: Option<usize>,
}

/// `true` iff `f ∘ g⁻¹ = f` for every generator `g`.
pub fn check_invariant<F: Field>(
    f: &MultiPoly<F>,
    group: &FiniteMatrixGroup<F>,
) -> Result<InvarianceCheck> {
    if f.nvars() != group.dim() {
        return Err(Error::VariableCountMismatch {
            expected: group.dim(),
            found: f.nvars(),
        });
    }
    for (i, g) in group.generators().iter().enumerate() {
        let moved = f.linear_substitute(&g.inverse()?)?;
        if &moved != f {
            return Ok(InvarianceCheck {
                invariant: false,
                witness: Some(i),
            });
        }
    }
    Ok(InvarianceCheck {
        invariant: true,
        witness: None,
    })
}

/// Candidate invariants that have passed the invariance check.
#[derive(Debug, Clone)]
pub struct CandidateSet<F: Field> {
    polys: Vec<MultiPoly<F>>,
}

impl<F: Field> CandidateSet<F> {
    pub fn new(group: &FiniteMatrixGroup<F>, polys: Vec<MultiPoly<F>>) -> Result<Self> {
        for (index, p) in polys.iter().enumerate() {
            let check = check_invariant(p, group)?;
            if let Some(g) = check.witness {
                return Err(Error::NotInvariant {
                    index,
                    detail: format!("`{p}` is moved by generator {g}"),
                });
            }
        }
        Ok(CandidateSet { polys })
    }

    pub fn polys(&self) -> &[MultiPoly<F>] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    Exhaustive,
    /// `count` points drawn per level from a generator seeded with `seed`.
    Sampled {
        seed: u64,
        count: u64,
    },
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub max_ext: u32,
    pub mode: ScanMode,
    pub budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_ext: 2,
            mode: ScanMode::Exhaustive,
            budget: DEFAULT_POINT_BUDGET,
        }
    }
}

/// Two points in distinct orbits with equal candidate values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub ext: u32,
    /// Field of the points: the level-`ext` rung of the extension ladder.
    pub field: GaloisField,
    pub u: Vec<Gf>,
    pub v: Vec<Gf>,
    pub signature: Vec<Gf>,
    pub orbit_u_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    SeparatingUpTo(u32),
    Refuted(Counterexample),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationVerdict {
    pub outcome: Outcome,
    pub tested_levels: Vec<u32>,
    pub mode: ScanMode,
}

#[derive(Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
enum VerdictJson {
    SeparatingUpTo {
        max_ext: u32,
        levels: Vec<u32>,
        mode: String,
        note: &'static str,
    },
    Refuted {
        ext: u32,
        field: FieldSpec,
        u: Vec<String>,
        v: Vec<String>,
        signature: Vec<String>,
        orbit_u_size: usize,
        mode: String,
    },
}

impl SeparationVerdict {
    pub fn is_separating(&self) -> bool {
        matches!(self.outcome, Outcome::SeparatingUpTo(_))
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match &self.outcome {
            Outcome::Refuted(c) => Some(c),
            Outcome::SeparatingUpTo(_) => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mode = match self.mode {
            ScanMode::Exhaustive => "exhaustive".to_string(),
            ScanMode::Sampled { seed, count } => format!("sampled(seed={seed},count={count})"),
        };
        let doc = match &self.outcome {
            Outcome::SeparatingUpTo(m) => VerdictJson::SeparatingUpTo {
                max_ext: *m,
                levels: self.tested_levels.clone(),
                mode,
                note: BOUNDED_NOTE,
            },
            Outcome::Refuted(c) => {
                let text = |v: &[Gf]| v.iter().map(|e| c.field.format_elem(e)).collect();
                VerdictJson::Refuted {
                    ext: c.ext,
                    field: c.field.spec(),
                    u: text(&c.u),
                    v: text(&c.v),
                    signature: text(&c.signature),
                    orbit_u_size: c.orbit_u_size,
                    mode,
                }
            }
        };
        serde_json::to_value(doc).expect("verdict serializes")
    }
}

impl Counterexample {
    /// Re-derives the equal signatures and the orbit distinctness from scratch.
    pub fn recheck(
        &self,
        group: &FiniteMatrixGroup<GaloisField>,
        set: &CandidateSet<GaloisField>,
    ) -> Result<bool> {
        let emb = Embedding::new(group.field(), &self.field)?;
        let lg = group.lift(&emb)?;
        let polys = lift_all(set.polys(), &emb)?;
        let su = signature(&polys, &self.u);
        let sv = signature(&polys, &self.v);
        Ok(su == sv && su == self.signature && !lg.same_orbit(&self.u, &self.v))
    }
}

fn lift_all(
    polys: &[MultiPoly<GaloisField>],
    emb: &Embedding,
) -> Result<Vec<MultiPoly<GaloisField>>> {
    polys.iter().map(|p| p.lift(emb)).collect()
}

fn signature(polys: &[MultiPoly<GaloisField>], pt: &[Gf]) -> Vec<Gf> {
    polys.iter().map(|p| p.eval_unchecked(pt)).collect()
}

fn check_field(
    group: &FiniteMatrixGroup<GaloisField>,
    set: &CandidateSet<GaloisField>,
) -> Result<()> {
    for p in set.polys() {
        if p.field() != group.field() {
            return Err(Error::SpecMismatch(format!(
                "candidate over {:?}, group over {:?}",
                p.field(),
                group.field()
            )));
        }
        if p.nvars() != group.dim() {
            return Err(Error::VariableCountMismatch {
                expected: group.dim(),
                found: p.nvars(),
            });
        }
    }
    Ok(())
}

/// Signatures of every point of `space`, bucketed in order of first
/// appearance. Returns `(bucket of each point, signature of each bucket)`.
fn bucket_points(space: &PointSpace, polys: &[MultiPoly<GaloisField>]) -> (Vec<u32>, Vec<Vec<Gf>>) {
    let total = space.len();
    let mut bucket_of = Vec::with_capacity(total as usize);
    let mut ids: HashMap<Vec<Gf>, u32> = HashMap::new();
    let mut sigs = Vec::new();
    let mut start = 0;
    while start < total {
        let end = (start + BATCH).min(total);
        let batch: Vec<Vec<Gf>> = (start..end)
            .into_par_iter()
            .map(|i| signature(polys, &space.point(i)))
            .collect();
        for sig in batch {
            let next = sigs.len() as u32;
            let id = *ids.entry(sig.clone()).or_insert_with(|| {
                sigs.push(sig);
                next
            });
            bucket_of.push(id);
        }
        start = end;
    }
    (bucket_of, sigs)
}

struct Level {
    ext: u32,
    group: FiniteMatrixGroup<GaloisField>,
    polys: Vec<MultiPoly<GaloisField>>,
}

fn level(
    group: &FiniteMatrixGroup<GaloisField>,
    polys: &[MultiPoly<GaloisField>],
    ext: u32,
) -> Result<Level> {
    let emb = extension(group.field(), ext)?;
    Ok(Level {
        ext,
        group: group.lift(&emb)?,
        polys: lift_all(polys, &emb)?,
    })
}

fn scan_exhaustive(lv: &Level, budget: u64) -> Result<Option<Counterexample>> {
    let space = PointSpace::new(lv.group.field(), lv.group.dim(), budget)?;
    let (bucket_of, sigs) = bucket_points(&space, &lv.polys);
    let mut visited = vec![false; space.len() as usize];
    let mut rep: Vec<Option<u64>> = vec![None; sigs.len()];
    for idx in 0..space.len() {
        if visited[idx as usize] {
            continue;
        }
        let b = bucket_of[idx as usize];
        let pt = space.point(idx);
        let orbit = lv.group.orbit_unchecked(&pt);
        for w in &orbit {
            let j = space.index_of(w);
            if bucket_of[j as usize] != b {
                return Err(Error::NotInvariant {
                    index: usize::MAX,
                    detail: format!(
                        "signature differs along the orbit of point {idx} at extension {}",
                        lv.ext
                    ),
                });
            }
            visited[j as usize] = true;
        }
        match rep[b as usize] {
            None => rep[b as usize] = Some(idx),
            Some(first) => {
                let u = space.point(first);
                let orbit_u_size = lv.group.orbit_unchecked(&u).len();
                return Ok(Some(Counterexample {
                    ext: lv.ext,
                    field: lv.group.field().clone(),
                    u,
                    v: pt,
                    signature: sigs[b as usize].clone(),
                    orbit_u_size,
                }));
            }
        }
    }
    Ok(None)
}

fn random_point(rng: &mut ChaCha8Rng, field: &GaloisField, n: usize) -> Vec<Gf> {
    (0..n)
        .map(|_| field.element(rng.gen_range(0..field.order())))
        .collect()
}

fn level_seed(seed: u64, ext: u32) -> u64 {
    seed ^ (ext as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn scan_sampled(lv: &Level, seed: u64, count: u64) -> Result<Option<Counterexample>> {
    let field = lv.group.field();
    let n = lv.group.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(level_seed(seed, lv.ext));
    let points: Vec<Vec<Gf>> = (0..count)
        .map(|_| random_point(&mut rng, field, n))
        .collect();
    let sigs: Vec<Vec<Gf>> = points
        .par_iter()
        .map(|pt| signature(&lv.polys, pt))
        .collect();
    let mut order: Vec<Vec<Gf>> = Vec::new();
    let mut buckets: HashMap<&[Gf], Vec<usize>> = HashMap::new();
    for (i, s) in sigs.iter().enumerate() {
        let entry = buckets.entry(s.as_slice()).or_default();
        if entry.is_empty() {
            order.push(s.clone());
        }
        entry.push(i);
    }
    for sig in &order {
        let members = &buckets[sig.as_slice()];
        let mut reps: Vec<(usize, HashSet<Vec<Gf>>)> = Vec::new();
        for &i in members {
            if reps.iter().any(|(_, orb)| orb.contains(&points[i])) {
                continue;
            }
            let orbit = lv.group.orbit_unchecked(&points[i]);
            if orbit.iter().any(|w| &signature(&lv.polys, w) != sig) {
                return Err(Error::NotInvariant {
                    index: usize::MAX,
                    detail: format!(
                        "signature differs along the orbit of a sampled point at extension {}",
                        lv.ext
                    ),
                });
            }
            if let Some((first, orb)) = reps.first() {
                return Ok(Some(Counterexample {
                    ext: lv.ext,
                    field: field.clone(),
                    u: points[*first].clone(),
                    v: points[i].clone(),
                    signature: sig.clone(),
                    orbit_u_size: orb.len(),
                }));
            }
            reps.push((i, orbit.into_iter().collect()));
        }
    }
    Ok(None)
}

/// Checks `set` for separation over `GF(q^m)^n` for `m = 1..=max_ext`.
pub fn verify_separating(
    group: &FiniteMatrixGroup<GaloisField>,
    set: &CandidateSet<GaloisField>,
    opts: &VerifyOptions,
) -> Result<SeparationVerdict> {
    check_field(group, set)?;
    if let ScanMode::Exhaustive = opts.mode {
        // Fail fast before any scanning if the top level is out of budget.
        let top = group
            .field()
            .order()
            .checked_pow(opts.max_ext)
            .unwrap_or(u64::MAX);
        crate::points::count_points(top, group.dim(), opts.budget)?;
    }
    let mut tested = Vec::new();
    for ext in 1..=opts.max_ext {
        let lv = level(group, set.polys(), ext)?;
        let found = match opts.mode {
            ScanMode::Exhaustive => scan_exhaustive(&lv, opts.budget)?,
            ScanMode::Sampled { seed, count } => scan_sampled(&lv, seed, count)?,
        };
        tested.push(ext);
        if let Some(c) = found {
            return Ok(SeparationVerdict {
                outcome: Outcome::Refuted(c),
                tested_levels: tested,
                mode: opts.mode,
            });
        }
    }
    Ok(SeparationVerdict {
        outcome: Outcome::SeparatingUpTo(opts.max_ext),
        tested_levels: tested,
        mode: opts.mode,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionComparison {
    pub ext: u32,
    pub equal: bool,
    /// Points identified by exactly one of the two sets.
    pub witness: Option<(Vec<Gf>, Vec<Gf>)>,
    pub field: GaloisField,
}

impl PartitionComparison {
    pub fn to_json(&self) -> serde_json::Value {
        let text =
            |v: &[Gf]| -> Vec<String> { v.iter().map(|e| self.field.format_elem(e)).collect() };
        match &self.witness {
            None => serde_json::json!({ "ext": self.ext, "equal": self.equal }),
            Some((u, v)) => serde_json::json!({
                "ext": self.ext,
                "equal": self.equal,
                "field": self.field.spec(),
                "u": text(u),
                "v": text(v),
            }),
        }
    }
}

/// Whether two candidate sets induce the same signature partition of `GF(q^m)^n`.
pub fn compare_partitions(
    group: &FiniteMatrixGroup<GaloisField>,
    first: &CandidateSet<GaloisField>,
    second: &CandidateSet<GaloisField>,
    ext: u32,
    budget: u64,
) -> Result<PartitionComparison> {
    check_field(group, first)?;
    check_field(group, second)?;
    let emb = extension(group.field(), ext)?;
    let space = PointSpace::new(emb.ext(), group.dim(), budget)?;
    let (b1, _) = bucket_points(&space, &lift_all(first.polys(), &emb)?);
    let (b2, _) = bucket_points(&space, &lift_all(second.polys(), &emb)?);
    // Buckets are numbered by first appearance, so equal partitions give equal labels.
    let witness = b1.iter().zip(&b2).position(|(x, y)| x != y).map(|idx| {
        let lead1 = b1.iter().position(|&x| x == b1[idx]).unwrap();
        let lead2 = b2.iter().position(|&y| y == b2[idx]).unwrap();
        (
            space.point(idx as u64),
            space.point(lead1.min(lead2) as u64),
        )
    });
    Ok(PartitionComparison {
        ext,
        equal: witness.is_none(),
        witness,
        field: emb.ext().clone(),
    })
}

/// `f(x) - f(x')` for each candidate, in variables `x1..xn, x1p..xnp`.
pub fn emit_delta_generators<F: Field>(polys: &[MultiPoly<F>]) -> Result<Vec<MultiPoly<F>>> {
    let Some(first) = polys.first() else {
        return Ok(Vec::new());
    };
    let vars = first.vars().clone();
    let n = vars.len();
    let doubled: Arc<[String]> = var_list(
        &vars
            .iter()
            .cloned()
            .chain(vars.iter().map(|v| format!("{v}p")))
            .collect::<Vec<_>>(),
    );
    let left: Vec<usize> = (0..n).collect();
    let right: Vec<usize> = (n..2 * n).collect();
    polys
        .iter()
        .map(|f| {
            if f.vars() != &vars {
                return Err(Error::VariableMismatch(
                    "candidates use different variables".into(),
                ));
            }
            f.embed(doubled.clone(), &left)?
                .sub(&f.embed(doubled.clone(), &right)?)
        })
        .collect()
}
