//! Hypersurface refuter for the torus acting on `(x1, x2, x3, y1, y2)` with
//! weights `(1, 1, 1, -1, -1)`.
//!
//! The invariant ring is generated by the six monomials `xi*yj`, written as
//! slots `z1..z6`. Five candidates `F1..F5` in the slots fail to separate
//! `u = (a, b, c, 1, 0)` from `v = (d, e, f, 0, 1)` whenever `(a, .., f)` is a
//! common zero of `Fi(z1, z2, z3, 0, 0, 0) - Fi(0, 0, 0, z4, z5, z6)`. Over a
//! finite field such a zero need not exist, so the search is bounded.

use std::sync::Arc;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{extension, Field, FieldSpec, FiniteField, GaloisField, Gf, Rationals};
use crate::points::{count_points, DEFAULT_POINT_BUDGET};
use crate::poly::{jacobian_rank, var_list, MultiPoly};

pub const TORUS_VARS: [&str; 5] = ["x1", "x2", "x3", "y1", "y2"];
pub const TORUS_WEIGHTS: [i64; 5] = [1, 1, 1, -1, -1];
pub const SLOTS: [&str; 6] = ["z1", "z2", "z3", "z4", "z5", "z6"];
/// `(x index, y index)` of each slot monomial, in `TORUS_VARS` positions.
pub const SLOT_MONOMIALS: [(usize, usize); 6] = [(0, 3), (1, 3), (2, 3), (0, 4), (1, 4), (2, 4)];
/// Slots whose monomials form a transcendence basis.
pub const TRANSCENDENCE_SLOTS: [usize; 4] = [0, 2, 3, 4];

const CANDIDATES: usize = 5;
const BATCH: u64 = 1 << 16;

#[derive(Debug, Clone)]
pub struct TorusModel<F: Field> {
    field: F,
    vars: Arc<[String]>,
    monomials: Vec<MultiPoly<F>>,
}

impl<F: Field> TorusModel<F> {
    pub fn new(field: F) -> Self {
        let vars = var_list(&TORUS_VARS);
        let monomials = SLOT_MONOMIALS
            .iter()
            .map(|&(i, j)| {
                let mut e = vec![0; 5];
                e[i] = 1;
                e[j] = 1;
                MultiPoly::from_terms(field.clone(), vars.clone(), [(e, field.one())])
                    .expect("five exponents")
            })
            .collect();
        TorusModel {
            field,
            vars,
            monomials,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    /// `m1..m6`.
    pub fn monomials(&self) -> &[MultiPoly<F>] {
        &self.monomials
    }

    /// Values of `m1..m6` at a point of the 5-dimensional space.
    pub fn slot_values(&self, point: &[F::Elem]) -> Vec<F::Elem> {
        SLOT_MONOMIALS
            .iter()
            .map(|&(i, j)| self.field.mul(&point[i], &point[j]))
            .collect()
    }

    /// Jacobian rank of `m1, m3, m4, m5` at `point`.
    pub fn transcendence_rank_at(&self, point: &[F::Elem]) -> Result<usize> {
        let sub: Vec<_> = TRANSCENDENCE_SLOTS
            .iter()
            .map(|&k| self.monomials[k].clone())
            .collect();
        jacobian_rank(&sub, point)
    }
}

/// Rank at `(1, 1, 1, 1, 1)` over the rationals.
pub fn transcendence_rank_at_ones() -> Result<usize> {
    let q = Rationals;
    let one = q.one();
    TorusModel::new(q).transcendence_rank_at(&vec![one; 5])
}

pub fn rational_point(values: &[i64]) -> Vec<BigRational> {
    values.iter().map(|&v| Rationals.from_i64(v)).collect()
}

fn is_slot_poly<F: Field>(f: &MultiPoly<F>) -> bool {
    f.vars().iter().all(|v| SLOTS.contains(&v.as_str()))
}

fn torus_positions<F: Field>(f: &MultiPoly<F>) -> Result<Vec<usize>> {
    f.vars()
        .iter()
        .map(|v| {
            TORUS_VARS.iter().position(|t| t == v).ok_or_else(|| {
                Error::VariableMismatch(format!("`{v}` is neither a torus variable nor a slot"))
            })
        })
        .collect()
}

/// Slot polynomials are invariant by construction; raw polynomials are
/// invariant iff each monomial has weight zero.
pub fn torus_invariant_check<F: Field>(f: &MultiPoly<F>) -> Result<bool> {
    if is_slot_poly(f) {
        return Ok(true);
    }
    let pos = torus_positions(f)?;
    Ok(f.terms().all(|(m, _)| {
        m.exponents()
            .iter()
            .zip(&pos)
            .map(|(&e, &k)| e as i64 * TORUS_WEIGHTS[k])
            .sum::<i64>()
            == 0
    }))
}

/// Re-embeds a polynomial into the six slots `z1..z6`.
///
/// Raw polynomials are rewritten monomial by monomial, pairing the `x`
/// factors with the `y` factors in order. Non-invariant input is rejected.
pub fn to_slots<F: Field>(f: &MultiPoly<F>) -> Result<MultiPoly<F>> {
    let slots = var_list(&SLOTS);
    if is_slot_poly(f) {
        let pos: Vec<usize> = f
            .vars()
            .iter()
            .map(|v| SLOTS.iter().position(|s| s == v).unwrap())
            .collect();
        return f.embed(slots, &pos);
    }
    let pos = torus_positions(f)?;
    if !torus_invariant_check(f)? {
        return Err(Error::NotInvariant {
            index: 0,
            detail: format!("`{f}` has a monomial of nonzero weight"),
        });
    }
    let mut terms = Vec::new();
    for (m, c) in f.terms() {
        let mut full = [0u32; 5];
        for (&e, &k) in m.exponents().iter().zip(&pos) {
            full[k] += e;
        }
        let mut xs: Vec<usize> = (0..3)
            .flat_map(|i| std::iter::repeat_n(i, full[i] as usize))
            .collect();
        let mut ys: Vec<usize> = (3..5)
            .flat_map(|j| std::iter::repeat_n(j, full[j] as usize))
            .collect();
        xs.reverse();
        ys.reverse();
        let mut e = vec![0u32; 6];
        while let (Some(i), Some(j)) = (xs.pop(), ys.pop()) {
            let k = SLOT_MONOMIALS.iter().position(|&s| s == (i, j)).unwrap();
            e[k] += 1;
        }
        terms.push((e, c.clone()));
    }
    MultiPoly::from_terms(f.field().clone(), slots, terms)
}

fn check_slot_candidates<F: Field>(candidates: &[MultiPoly<F>]) -> Result<Vec<MultiPoly<F>>> {
    if candidates.len() != CANDIDATES {
        return Err(Error::WrongArity {
            expected: CANDIDATES,
            found: candidates.len(),
        });
    }
    candidates
        .iter()
        .map(|f| {
            let raw = f.vars().iter().all(|v| TORUS_VARS.contains(&v.as_str()));
            if let Some(bad) = f
                .vars()
                .iter()
                .find(|v| !raw && !SLOTS.contains(&v.as_str()))
            {
                return Err(Error::UnknownSlot(bad.clone()));
            }
            to_slots(f)
        })
        .collect()
}

/// `Di(z) = Fi(z1, z2, z3, 0, 0, 0) - Fi(0, 0, 0, z4, z5, z6)`.
pub fn difference_system<F: Field>(candidates: &[MultiPoly<F>]) -> Result<Vec<MultiPoly<F>>> {
    check_slot_candidates(candidates)?
        .iter()
        .map(|f| {
            f.restrict_zero(&[3, 4, 5])
                .sub(&f.restrict_zero(&[0, 1, 2]))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefutationWitness {
    pub ext: u32,
    pub field: GaloisField,
    /// `(a, b, c, d, e, f)`.
    pub solution: Vec<Gf>,
    pub u: Vec<Gf>,
    pub v: Vec<Gf>,
    /// 1-based index of the first slot monomial that differs on `u` and `v`.
    pub separating_monomial: usize,
    pub signature: Vec<Gf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefuteOutcome {
    Witness(RefutationWitness),
    NotFoundUpTo(u32),
}

#[derive(Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
enum RefuteJson {
    Witness {
        ext: u32,
        field: FieldSpec,
        solution: Vec<String>,
        u: Vec<String>,
        v: Vec<String>,
        separating_monomial: String,
        monomial: String,
        signature: Vec<String>,
    },
    NotFoundUpTo {
        max_ext: u32,
        note: &'static str,
    },
}

impl RefuteOutcome {
    pub fn witness(&self) -> Option<&RefutationWitness> {
        match self {
            RefuteOutcome::Witness(w) => Some(w),
            RefuteOutcome::NotFoundUpTo(_) => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = match self {
            RefuteOutcome::NotFoundUpTo(m) => RefuteJson::NotFoundUpTo {
                max_ext: *m,
                note: "no common nonzero zero over the tested extensions; not a nonexistence claim",
            },
            RefuteOutcome::Witness(w) => {
                let text = |v: &[Gf]| v.iter().map(|e| w.field.format_elem(e)).collect();
                let (i, j) = SLOT_MONOMIALS[w.separating_monomial - 1];
                RefuteJson::Witness {
                    ext: w.ext,
                    field: w.field.spec(),
                    solution: text(&w.solution),
                    u: text(&w.u),
                    v: text(&w.v),
                    separating_monomial: format!("m{}", w.separating_monomial),
                    monomial: format!("{}*{}", TORUS_VARS[i], TORUS_VARS[j]),
                    signature: text(&w.signature),
                }
            }
        };
        serde_json::to_value(doc).expect("outcome serializes")
    }
}

impl RefutationWitness {
    /// Candidates agree on `u, v` and the reported monomial tells them apart.
    pub fn recheck(&self, candidates: &[MultiPoly<GaloisField>]) -> Result<bool> {
        let emb = crate::field::Embedding::new(candidates[0].field(), &self.field)?;
        let slots = check_slot_candidates(candidates)?;
        let model = TorusModel::new(self.field.clone());
        let su = model.slot_values(&self.u);
        let sv = model.slot_values(&self.v);
        let mut sig_u = Vec::new();
        for f in &slots {
            let lf = f.lift(&emb)?;
            if lf.evaluate(&su)? != lf.evaluate(&sv)? {
                return Ok(false);
            }
            sig_u.push(lf.evaluate(&su)?);
        }
        let k = self.separating_monomial - 1;
        let mk = &model.monomials()[k];
        Ok(sig_u == self.signature && mk.evaluate(&self.u)? != mk.evaluate(&self.v)?)
    }
}

#[derive(Debug, Clone)]
pub struct RefuteOptions {
    pub max_ext: u32,
    pub budget: u64,
}

impl Default for RefuteOptions {
    fn default() -> Self {
        RefuteOptions {
            max_ext: 2,
            budget: DEFAULT_POINT_BUDGET,
        }
    }
}

/// Point of index `idx` with `z1` as the least significant digit.
fn slot_point(field: &GaloisField, mut idx: u64) -> Vec<Gf> {
    let q = field.order();
    (0..6)
        .map(|_| {
            let d = idx % q;
            idx /= q;
            field.element(d)
        })
        .collect()
}

/// Scans nonzero points of `GF(q^m)^6` for a common zero of the difference
/// system, for `m = 1..=max_ext`. The first zero in scan order wins.
pub fn refute_hypersurface(
    candidates: &[MultiPoly<GaloisField>],
    opts: &RefuteOptions,
) -> Result<RefuteOutcome> {
    let system = difference_system(candidates)?;
    let slots = check_slot_candidates(candidates)?;
    let base = candidates[0].field().clone();
    if candidates.iter().any(|f| f.field() != &base) {
        return Err(Error::SpecMismatch(
            "candidates over different fields".into(),
        ));
    }
    let top = base.order().checked_pow(opts.max_ext).unwrap_or(u64::MAX);
    count_points(top, 6, opts.budget)?;
    for ext in 1..=opts.max_ext {
        let emb = extension(&base, ext)?;
        let field = emb.ext().clone();
        let total = count_points(field.order(), 6, opts.budget)?;
        let lifted: Vec<_> = system.iter().map(|d| d.lift(&emb)).collect::<Result<_>>()?;
        let mut start = 1;
        let mut hit = None;
        while start < total && hit.is_none() {
            let end = (start + BATCH).min(total);
            hit = (start..end).into_par_iter().find_first(|&i| {
                let z = slot_point(&field, i);
                lifted.iter().all(|d| d.eval_unchecked(&z) == Gf(0))
            });
            start = end;
        }
        let Some(idx) = hit else { continue };
        let solution = slot_point(&field, idx);
        let (zero, one) = (field.zero(), field.one());
        let u = vec![solution[0], solution[1], solution[2], one, zero];
        let v = vec![solution[3], solution[4], solution[5], zero, one];
        let model = TorusModel::new(field.clone());
        let (su, sv) = (model.slot_values(&u), model.slot_values(&v));
        let separating_monomial = su
            .iter()
            .zip(&sv)
            .position(|(a, b)| a != b)
            .expect("nonzero solution")
            + 1;
        let signature = slots
            .iter()
            .map(|f| f.lift(&emb).map(|lf| lf.eval_unchecked(&su)))
            .collect::<Result<Vec<_>>>()?;
        let witness = RefutationWitness {
            ext,
            field,
            solution,
            u,
            v,
            separating_monomial,
            signature,
        };
        if !witness.recheck(candidates)? {
            return Err(Error::NotInvariant {
                index: usize::MAX,
                detail: "witness failed re-verification".into(),
            });
        }
        return Ok(RefuteOutcome::Witness(witness));
    }
    Ok(RefuteOutcome::NotFoundUpTo(opts.max_ext))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> GaloisField {
        GaloisField::prime(2).unwrap()
    }

    fn slots(field: &GaloisField, texts: &[&str]) -> Vec<MultiPoly<GaloisField>> {
        texts
            .iter()
            .map(|t| MultiPoly::parse(field, &SLOTS, t).unwrap())
            .collect()
    }

    #[test]
    fn invariance_of_raw_polys() {
        let q = Rationals;
        let p = |s| MultiPoly::parse(&q, &TORUS_VARS, s).unwrap();
        assert!(torus_invariant_check(&p("x1*y1")).unwrap());
        assert!(!torus_invariant_check(&p("x1*x2")).unwrap());
        assert!(torus_invariant_check(&p("1")).unwrap());
        let bad = MultiPoly::parse(&q, &["w"], "w").unwrap();
        assert!(matches!(
            torus_invariant_check(&bad),
            Err(Error::VariableMismatch(_))
        ));
        let rewritten = to_slots(&p("x1*x3*y1*y2 + 2*x2*y2")).unwrap();
        assert_eq!(rewritten.to_string(), "z1*z6 + 2*z5");
    }

    #[test]
    fn differences() {
        let f = gf2();
        let d = difference_system(&slots(&f, &["z1", "z2", "z3", "z4", "z5"])).unwrap();
        let text: Vec<String> = d.iter().map(|p| p.to_string()).collect();
        assert_eq!(text, vec!["z1", "z2", "z3", "z4", "z5"]);
        let q = Rationals;
        let qs: Vec<_> = ["z1", "z2", "z3", "z4", "z5"]
            .iter()
            .map(|t| MultiPoly::parse(&q, &SLOTS, t).unwrap())
            .collect();
        let text: Vec<String> = difference_system(&qs)
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(text, vec!["z1", "z2", "z3", "-z4", "-z5"]);
        let d = difference_system(&slots(&f, &["z1*z6", "1", "0", "0", "0"])).unwrap();
        assert!(d[0].is_zero() && d[1].is_zero());
        assert!(matches!(
            difference_system(&slots(&f, &["z1"])),
            Err(Error::WrongArity {
                expected: 5,
                found: 1
            })
        ));
        let odd: Vec<_> = (0..5)
            .map(|_| MultiPoly::parse(&f, &["z1", "w"], "w").unwrap())
            .collect();
        assert_eq!(
            difference_system(&odd).unwrap_err(),
            Error::UnknownSlot("w".into())
        );
        let raw: Vec<_> = ["x1*y1", "x2*y1", "x3*y1", "x1*y2", "x2*y2"]
            .iter()
            .map(|t| MultiPoly::parse(&f, &TORUS_VARS, t).unwrap())
            .collect();
        let d = difference_system(&raw).unwrap();
        assert_eq!(d[4].to_string(), "z5");
    }

    #[test]
    fn refutes_coordinate_candidates() {
        let f = gf2();
        let cands = slots(&f, &["z1", "z2", "z3", "z4", "z5"]);
        let out = refute_hypersurface(
            &cands,
            &RefuteOptions {
                max_ext: 1,
                ..Default::default()
            },
        )
        .unwrap();
        let w = out.witness().unwrap();
        assert_eq!(w.solution, vec![Gf(0), Gf(0), Gf(0), Gf(0), Gf(0), Gf(1)]);
        assert_eq!(w.u, vec![Gf(0), Gf(0), Gf(0), Gf(1), Gf(0)]);
        assert_eq!(w.v, vec![Gf(0), Gf(0), Gf(1), Gf(0), Gf(1)]);
        assert_eq!(w.separating_monomial, 6);
        assert!(w.recheck(&cands).unwrap());

        let cands = slots(&f, &["z1", "z2", "z3", "z4", "z6"]);
        let out = refute_hypersurface(
            &cands,
            &RefuteOptions {
                max_ext: 1,
                ..Default::default()
            },
        )
        .unwrap();
        let w = out.witness().unwrap();
        assert_eq!(w.solution, vec![Gf(0), Gf(0), Gf(0), Gf(0), Gf(1), Gf(0)]);
        assert_eq!(w.separating_monomial, 5);

        let cands = slots(&f, &["0", "0", "0", "0", "0"]);
        let out = refute_hypersurface(&cands, &RefuteOptions::default()).unwrap();
        let w = out.witness().unwrap();
        assert_eq!(w.solution, vec![Gf(1), Gf(0), Gf(0), Gf(0), Gf(0), Gf(0)]);
        assert_eq!(w.u, vec![Gf(1), Gf(0), Gf(0), Gf(1), Gf(0)]);
        assert_eq!(w.v, vec![Gf(0), Gf(0), Gf(0), Gf(0), Gf(1)]);
        assert_eq!(w.separating_monomial, 1);
        assert_eq!(out.to_json()["monomial"], "x1*y1");
    }

    #[test]
    fn jacobian_rank_four() {
        assert_eq!(transcendence_rank_at_ones().unwrap(), 4);
        let model = TorusModel::new(Rationals);
        assert_eq!(
            model
                .transcendence_rank_at(&rational_point(&[0, 0, 0, 1, 1]))
                .unwrap(),
            3
        );
    }

    #[test]
    fn budget() {
        let f = gf2();
        let cands = slots(&f, &["z1", "z2", "z3", "z4", "z5"]);
        let opts = RefuteOptions {
            max_ext: 3,
            budget: 1000,
        };
        assert!(matches!(
            refute_hypersurface(&cands, &opts),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
