//! Finite matrix groups given by generators.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Embedding, Field, GaloisField};
use crate::matrix::Matrix;

/// Default bound on the closure size before a group is declared infinite.
pub const DEFAULT_MAX_ORDER: usize = 1_000_000;

/// Fixed-space data for one group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ElementClassification {
    pub index: usize,
    /// `dim ker(σ - I)`
    pub fixed_dim: usize,
    pub codim: usize,
    pub is_identity: bool,
    /// Fixed space of codimension exactly 1.
    pub is_reflection: bool,
    /// Non-identity with fixed space of codimension at most 2.
    pub is_bireflection: bool,
}

impl ElementClassification {
    fn of<F: Field>(index: usize, m: &Matrix<F>) -> Self {
        let n = m.rows();
        let fixed_dim = n - m.minus_identity().expect("square").rank();
        let codim = n - fixed_dim;
        ElementClassification {
            index,
            fixed_dim,
            codim,
            is_identity: codim == 0,
            is_reflection: codim == 1,
            is_bireflection: (1..=2).contains(&codim),
        }
    }

    /// Whether the element is non-identity with codimension at most `bound`.
    pub fn in_class(&self, bound: usize) -> bool {
        !self.is_identity && self.codim <= bound
    }
}

/// Outcome of asking whether `G` is generated by its elements of small
/// fixed-space codimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassGeneration {
    pub codim_bound: usize,
    pub verdict: bool,
    /// Element indices of the class, ascending.
    pub class: Vec<usize>,
    pub subgroup_order: usize,
}

#[derive(Debug, Clone)]
pub struct FiniteMatrixGroup<F: Field> {
    field: F,
    dim: usize,
    generators: Vec<Matrix<F>>,
    elements: Vec<Matrix<F>>,
    lookup: HashMap<Vec<F::Elem>, usize>,
    inverses: Vec<usize>,
    classes: Vec<ElementClassification>,
}

impl<F: Field> FiniteMatrixGroup<F> {
    /// Breadth-first closure from the identity, multiplying on the right by
    /// each generator in the order given.
    pub fn closure(
        field: F,
        dim: usize,
        generators: Vec<Matrix<F>>,
        max_order: usize,
    ) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::ShapeMismatch(format!(
                    "generator {i} is {}x{}, expected {dim}x{dim}",
                    g.rows(),
                    g.cols()
                )));
            }
            if g.field() != &field {
                return Err(Error::SpecMismatch(format!(
                    "generator {i} over {:?}",
                    g.field()
                )));
            }
            if g.rank() < dim {
                return Err(Error::SingularGenerator(i));
            }
        }
        let identity = Matrix::identity(field.clone(), dim);
        let mut elements = vec![identity.clone()];
        let mut lookup = HashMap::new();
        lookup.insert(identity.into_entries(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &generators {
                let prod = elements[i].mul_unchecked(g);
                if lookup.contains_key(prod.entries()) {
                    continue;
                }
                if elements.len() >= max_order {
                    return Err(Error::OrderBoundExceeded(max_order));
                }
                lookup.insert(prod.entries().to_vec(), elements.len());
                queue.push_back(elements.len());
                elements.push(prod);
            }
        }
        let inverses = elements
            .iter()
            .map(|m| {
                let inv = m.inverse().expect("group elements are invertible");
                lookup[inv.entries()]
            })
            .collect();
        let classes = elements
            .iter()
            .enumerate()
            .map(|(i, m)| ElementClassification::of(i, m))
            .collect();
        Ok(FiniteMatrixGroup {
            field,
            dim,
            generators,
            elements,
            lookup,
            inverses,
            classes,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Matrix<F>] {
        &self.generators
    }

    pub fn elements(&self) -> &[Matrix<F>] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> Result<&Matrix<F>> {
        self.elements.get(idx).ok_or(Error::IndexOutOfRange {
            index: idx,
            order: self.order(),
        })
    }

    pub fn index_of(&self, m: &Matrix<F>) -> Option<usize> {
        self.lookup.get(m.entries()).copied()
    }

    pub fn inverse_index(&self, idx: usize) -> usize {
        self.inverses[idx]
    }

    /// Index of `elements[a] * elements[b]`.
    pub fn product_index(&self, a: usize, b: usize) -> usize {
        let prod = self.elements[a].mul_unchecked(&self.elements[b]);
        self.lookup[prod.entries()]
    }

    pub fn fixed_space_classify(&self, idx: usize) -> Result<ElementClassification> {
        self.classes
            .get(idx)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index: idx,
                order: self.order(),
            })
    }

    pub fn classifications(&self) -> &[ElementClassification] {
        &self.classes
    }

    /// Basis of the fixed space `ker(σ - I)` of element `idx`.
    pub fn fixed_space(&self, idx: usize) -> Result<Vec<Vec<F::Elem>>> {
        Ok(self.element(idx)?.minus_identity()?.kernel_basis())
    }

    /// Closes the non-identity elements of codimension `<= codim_bound` and
    /// compares the resulting subgroup with `G`.
    pub fn generated_by_class(&self, codim_bound: usize) -> ClassGeneration {
        let class: Vec<usize> = self
            .classes
            .iter()
            .filter(|c| c.in_class(codim_bound))
            .map(|c| c.index)
            .collect();
        let gens = class.iter().map(|&i| self.elements[i].clone()).collect();
        let sub = FiniteMatrixGroup::closure(self.field.clone(), self.dim, gens, self.order())
            .expect("subgroup of a finite group closes within its order");
        ClassGeneration {
            codim_bound,
            verdict: sub.order() == self.order(),
            class,
            subgroup_order: sub.order(),
        }
    }

    /// `{σ u : σ ∈ G}` in element-table order of first appearance.
    pub fn orbit(&self, u: &[F::Elem]) -> Result<Vec<Vec<F::Elem>>> {
        if u.len() != self.dim {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} for a group acting on dimension {}",
                u.len(),
                self.dim
            )));
        }
        if let Some(bad) = u.iter().find(|e| !self.field.contains(e)) {
            return Err(Error::SpecIncompatible(format!(
                "{bad:?} is not an element of {:?}",
                self.field
            )));
        }
        Ok(self.orbit_unchecked(u))
    }

    pub(crate) fn orbit_unchecked(&self, u: &[F::Elem]) -> Vec<Vec<F::Elem>> {
        let mut seen = HashSet::with_capacity(self.order());
        let mut out = Vec::new();
        for m in &self.elements {
            let v = m.apply(u);
            if seen.insert(v.clone()) {
                out.push(v);
            }
        }
        out
    }

    pub fn same_orbit(&self, u: &[F::Elem], v: &[F::Elem]) -> bool {
        self.elements.iter().any(|m| m.apply(u) == v)
    }
}

impl FiniteMatrixGroup<GaloisField> {
    /// The same group with entries pushed into an extension field. Element
    /// order, inverses, and classifications carry over unchanged.
    pub fn lift(&self, emb: &Embedding) -> Result<FiniteMatrixGroup<GaloisField>> {
        let generators = self
            .generators
            .iter()
            .map(|g| g.lift(emb))
            .collect::<Result<Vec<_>>>()?;
        let elements = self
            .elements
            .iter()
            .map(|g| g.lift(emb))
            .collect::<Result<Vec<_>>>()?;
        let lookup = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (m.entries().to_vec(), i))
            .collect();
        Ok(FiniteMatrixGroup {
            field: emb.ext().clone(),
            dim: self.dim,
            generators,
            elements,
            lookup,
            inverses: self.inverses.clone(),
            classes: self.classes.clone(),
        })
    }

    pub fn orbit_lifted(
        &self,
        emb: &Embedding,
        u: &[crate::field::Gf],
    ) -> Result<Vec<Vec<crate::field::Gf>>> {
        self.lift(emb)?.orbit(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FiniteField, Gf, Rationals};
    use crate::matrix::elementary;
    use proptest::prelude::*;

    fn sign_group(p: u64) -> FiniteMatrixGroup<GaloisField> {
        let f = GaloisField::prime(p).unwrap();
        let minus = Matrix::scalar(f.clone(), 2, f.from_i64(-1));
        FiniteMatrixGroup::closure(f, 2, vec![minus], DEFAULT_MAX_ORDER).unwrap()
    }

    #[test]
    fn sign_group_basics() {
        let g = sign_group(3);
        assert_eq!(g.order(), 2);
        let c = g.fixed_space_classify(1).unwrap();
        assert_eq!((c.fixed_dim, c.codim), (0, 2));
        assert!(c.is_bireflection && !c.is_reflection);
        assert!(!g.generated_by_class(1).verdict);
        assert!(g.generated_by_class(1).class.is_empty());
        let gen2 = g.generated_by_class(2);
        assert!(gen2.verdict);
        assert_eq!(gen2.class, vec![1]);
        assert_eq!(
            g.orbit(&[Gf(1), Gf(1)]).unwrap(),
            vec![vec![Gf(1), Gf(1)], vec![Gf(2), Gf(2)]]
        );
        assert_eq!(g.orbit(&[Gf(0), Gf(0)]).unwrap().len(), 1);
        assert!(matches!(
            g.fixed_space_classify(2),
            Err(Error::IndexOutOfRange { index: 2, order: 2 })
        ));
    }

    #[test]
    fn trivial_group() {
        let g = FiniteMatrixGroup::closure(Rationals, 3, vec![], 10).unwrap();
        assert_eq!(g.order(), 1);
        let c = g.fixed_space_classify(0).unwrap();
        assert!(c.is_identity);
        assert_eq!(c.fixed_dim, 3);
        assert!(g.generated_by_class(1).verdict);
    }

    #[test]
    fn infinite_group_hits_bound() {
        let q = Rationals;
        let mut m = Matrix::identity(q, 2);
        m.set(0, 1, q.one());
        assert_eq!(
            FiniteMatrixGroup::closure(q, 2, vec![m], 50).unwrap_err(),
            Error::OrderBoundExceeded(50)
        );
    }

    #[test]
    fn singular_generator_rejected() {
        let f = GaloisField::prime(2).unwrap();
        let e = elementary(f.clone(), 2, 1, 1);
        assert_eq!(
            FiniteMatrixGroup::closure(f, 2, vec![e], 10).unwrap_err(),
            Error::SingularGenerator(0)
        );
    }

    #[test]
    fn transvection_is_reflection() {
        let f = GaloisField::prime(2).unwrap();
        let t = Matrix::identity(f.clone(), 4)
            .sub(&elementary(f.clone(), 4, 2, 1))
            .unwrap();
        let g = FiniteMatrixGroup::closure(f, 4, vec![t], 10).unwrap();
        assert_eq!(g.order(), 2);
        let c = g.fixed_space_classify(1).unwrap();
        assert_eq!(c.fixed_dim, 3);
        assert!(c.is_reflection && c.is_bireflection);
        for v in g.fixed_space(1).unwrap() {
            assert_eq!(v[0], Gf(0));
        }
    }

    fn random_group(entries: &[u64]) -> Option<FiniteMatrixGroup<GaloisField>> {
        let f = GaloisField::prime(3).unwrap();
        let gens: Vec<_> = entries
            .chunks_exact(9)
            .map(|c| {
                Matrix::from_vec(f.clone(), 3, 3, c.iter().map(|&e| f.element(e)).collect())
                    .unwrap()
            })
            .filter(|m| m.rank() == 3)
            .collect();
        FiniteMatrixGroup::closure(f, 3, gens, 2000).ok()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn group_laws(entries in proptest::collection::vec(0u64..3, 9..=18),
                      u in proptest::collection::vec(0u64..3, 3),
                      picks in proptest::collection::vec(any::<usize>(), 2)) {
            let Some(g) = random_group(&entries) else { return Ok(()) };
            let n = g.order();
            let f = g.field().clone();
            let u: Vec<Gf> = u.iter().map(|&i| f.element(i)).collect();
            prop_assert_eq!(n % g.orbit(&u).unwrap().len(), 0);
            let (r, s) = (picks[0] % n, picks[1] % n);
            let conj = g.product_index(g.product_index(r, s), g.inverse_index(r));
            prop_assert_eq!(g.classifications()[conj].fixed_dim, g.classifications()[s].fixed_dim);
            let si = g.inverse_index(s);
            prop_assert_eq!(g.product_index(s, si), 0);
            // fix(σ) = fix(σ⁻¹) as subspaces
            for v in g.fixed_space(s).unwrap() {
                prop_assert_eq!(g.elements()[si].apply(&v), v);
            }
            let refl = g.generated_by_class(1);
            for &c in &refl.class {
                prop_assert!(refl.class.binary_search(&g.inverse_index(c)).is_ok());
                let cc = g.product_index(g.product_index(r, c), g.inverse_index(r));
                prop_assert!(refl.class.binary_search(&cc).is_ok());
            }
            prop_assert_eq!(n % refl.subgroup_order, 0);
        }
    }
}
