//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::expr::{self, ExprAlgebra};
use crate::field::{Embedding, Field, FiniteField, GaloisField};
use crate::matrix::Matrix;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in named variables. Zero coefficients are never stored.
#[derive(Clone)]
pub struct MultiPoly<F: Field> {
    field: F,
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> PartialEq for MultiPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.vars == other.vars && self.terms == other.terms
    }
}

pub fn var_list<S: AsRef<str>>(names: &[S]) -> Arc<[String]> {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(field: F, vars: Arc<[String]>) -> Self {
        MultiPoly {
            field,
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: F, vars: Arc<[String]>, c: F::Elem) -> Self {
        let mut p = Self::zero(field, vars);
        let n = p.vars.len();
        p.add_term(Monomial::one(n), c);
        p
    }

    /// The coordinate function of variable `i`.
    pub fn var(field: F, vars: Arc<[String]>, i: usize) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[i] = 1;
        let one = field.one();
        let mut p = Self::zero(field, vars);
        p.add_term(Monomial(exps), one);
        p
    }

    pub fn var_named(field: F, vars: Arc<[String]>, name: &str) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var(field, vars, i))
    }

    pub fn from_terms(
        field: F,
        vars: Arc<[String]>,
        terms: impl IntoIterator<Item = (Vec<u32>, F::Elem)>,
    ) -> Result<Self> {
        let mut p = Self::zero(field, vars);
        for (exps, c) in terms {
            if exps.len() != p.vars.len() {
                return Err(Error::ShapeMismatch(format!(
                    "exponent vector of length {} for {} variables",
                    exps.len(),
                    p.vars.len()
                )));
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    pub fn parse<S: AsRef<str>>(field: &F, vars: &[S], text: &str) -> Result<Self> {
        let vars = var_list(vars);
        let alg = PolyAlgebra { field, vars: &vars };
        expr::parse(text)?.eval(&alg)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn coefficient(&self, exps: &[u32]) -> F::Elem {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    fn add_term(&mut self, m: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = self.field.add(existing, &c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_compat(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::SpecMismatch(format!(
                "{:?} vs {:?}",
                self.field, other.field
            )));
        }
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(format!(
                "[{}] vs [{}]",
                self.vars.join(","),
                other.vars.join(",")
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let mut out = Self::zero(self.field.clone(), self.vars.clone());
        for (m, a) in &self.terms {
            out.add_term(m.clone(), self.field.mul(a, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = f.mul(ca, cb);
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(e) => *e = f.add(e, &prod),
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
        }
        MultiPoly {
            field: f.clone(),
            vars: self.vars.clone(),
            terms: acc.into_iter().filter(|(_, c)| !f.is_zero(c)).collect(),
        }
    }

    pub fn one_like(&self) -> Self {
        Self::constant(self.field.clone(), self.vars.clone(), self.field.one())
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    pub fn evaluate(&self, point: &[F::Elem]) -> Result<F::Elem> {
        if point.len() != self.vars.len() {
            return Err(Error::ShapeMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.vars.len()
            )));
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[F::Elem]) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        'terms: for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e == 0 {
                    continue;
                }
                if f.is_zero(x) {
                    continue 'terms;
                }
                t = f.mul(&t, &f.pow(x, e as u64));
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Returns `g` with `g(u) = f(M u)`. The group action `σ·f` is
    /// `linear_substitute(f, σ⁻¹)`.
    pub fn linear_substitute(&self, m: &Matrix<F>) -> Result<Self> {
        let n = self.vars.len();
        if m.rows() != n || m.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix acting on {n} variables",
                m.rows(),
                m.cols()
            )));
        }
        if m.field() != &self.field {
            return Err(Error::SpecMismatch(format!(
                "{:?} vs {:?}",
                m.field(),
                self.field
            )));
        }
        let f = &self.field;
        let images: Vec<Self> = (0..n)
            .map(|i| {
                let mut li = Self::zero(f.clone(), self.vars.clone());
                for j in 0..n {
                    let mut exps = vec![0; n];
                    exps[j] = 1;
                    li.add_term(Monomial(exps), m.get(i, j).clone());
                }
                li
            })
            .collect();
        let mut powers: Vec<Vec<Self>> = images
            .iter()
            .map(|l| vec![l.one_like(), l.clone()])
            .collect();
        let mut out = Self::zero(f.clone(), self.vars.clone());
        for (mono, c) in &self.terms {
            let mut t = Self::constant(f.clone(), self.vars.clone(), c.clone());
            for (i, &e) in mono.0.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul_unchecked(&images[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    t = t.mul_unchecked(&powers[i][e]);
                }
            }
            for (mm, cc) in t.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f.clone(), self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), f.mul(c, &f.from_i64(e as i64)));
        }
        out
    }

    /// Sets the listed variables to zero, keeping the variable list.
    pub fn restrict_zero(&self, zero_vars: &[usize]) -> Self {
        MultiPoly {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| zero_vars.iter().all(|&i| m.0[i] == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-expresses the polynomial in a larger variable list, sending
    /// variable `i` to `positions[i]`.
    pub fn embed(&self, vars: Arc<[String]>, positions: &[usize]) -> Result<Self> {
        if positions.len() != self.vars.len() || positions.iter().any(|&p| p >= vars.len()) {
            return Err(Error::VariableMismatch("invalid variable embedding".into()));
        }
        let mut out = Self::zero(self.field.clone(), vars);
        let n = out.vars.len();
        for (m, c) in &self.terms {
            let mut exps = vec![0; n];
            for (i, &e) in m.0.iter().enumerate() {
                exps[positions[i]] += e;
            }
            out.add_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    pub fn map_coefficients<G: Field>(
        &self,
        field: G,
        f: impl Fn(&F::Elem) -> G::Elem,
    ) -> MultiPoly<G> {
        let mut out = MultiPoly::zero(field, self.vars.clone());
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl<F: FiniteField> MultiPoly<F> {
    /// Term-wise Frobenius: each coefficient raised to `p`, each exponent multiplied by `p`.
    pub fn frobenius_twist(&self) -> Self {
        let f = &self.field;
        let p = f.characteristic() as u32;
        MultiPoly {
            field: f.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        Monomial(m.0.iter().map(|e| e * p).collect()),
                        f.frobenius(c),
                    )
                })
                .collect(),
        }
    }
}

impl MultiPoly<GaloisField> {
    /// Coefficients pushed into the extension field along the embedding.
    pub fn lift(&self, emb: &Embedding) -> Result<MultiPoly<GaloisField>> {
        if &self.field != emb.base() {
            return Err(Error::SpecIncompatible(format!(
                "polynomial over {:?}, embedding from {:?}",
                self.field,
                emb.base()
            )));
        }
        Ok(self.map_coefficients(emb.ext().clone(), |c| emb.map(c)))
    }

    /// Evaluates at a point of the embedding's extension field.
    pub fn evaluate_lifted(
        &self,
        emb: &Embedding,
        point: &[crate::field::Gf],
    ) -> Result<crate::field::Gf> {
        self.lift(emb)?.evaluate(point)
    }
}

/// Rank of the Jacobian matrix of `fs` evaluated at `point`.
pub fn jacobian_rank<F: Field>(fs: &[MultiPoly<F>], point: &[F::Elem]) -> Result<usize> {
    Ok(jacobian_matrix(fs, point)?.rank())
}

pub fn jacobian_matrix<F: Field>(fs: &[MultiPoly<F>], point: &[F::Elem]) -> Result<Matrix<F>> {
    let Some(first) = fs.first() else {
        return Err(Error::ShapeMismatch("empty polynomial list".into()));
    };
    for g in &fs[1..] {
        first.check_compat(g)?;
    }
    let n = first.nvars();
    let mut rows = Vec::with_capacity(fs.len());
    for g in fs {
        let row = (0..n)
            .map(|i| g.partial(i).evaluate(point))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let field = first.field.clone();
    if rows.iter().all(Vec::is_empty) {
        return Ok(Matrix::zeros(field, fs.len(), 0));
    }
    Matrix::from_rows(field, rows)
}

fn monomial_text(vars: &[String], m: &Monomial) -> String {
    m.0.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                vars[i].clone()
            } else {
                format!("{}^{e}", vars[i])
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let ctext = self.field.format_elem(c);
            let (negative, mag) = match ctext.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, ctext),
            };
            let mono = monomial_text(&self.vars, m);
            let body = if mono.is_empty() {
                mag
            } else if mag == "1" {
                mono
            } else if mag.contains('+') || mag.contains('-') {
                format!("({mag})*{mono}")
            } else {
                format!("{mag}*{mono}")
            };
            match (k, negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{self} in [{}] over {:?}",
            self.vars.join(","),
            self.field
        )
    }
}

struct PolyAlgebra<'a, F: Field> {
    field: &'a F,
    vars: &'a Arc<[String]>,
}

impl<F: Field> PolyAlgebra<'_, F> {
    fn constant(&self, c: F::Elem) -> MultiPoly<F> {
        MultiPoly::constant(self.field.clone(), self.vars.clone(), c)
    }

    fn as_constant(&self, p: &MultiPoly<F>) -> Option<F::Elem> {
        match p.terms.len() {
            0 => Some(self.field.zero()),
            1 => p.terms.get(&Monomial::one(self.vars.len())).cloned(),
            _ => None,
        }
    }
}

impl<F: Field> ExprAlgebra for PolyAlgebra<'_, F> {
    type Val = MultiPoly<F>;

    fn int(&self, n: &BigInt) -> Result<MultiPoly<F>> {
        Ok(self.constant(self.field.from_integer(n)))
    }

    fn ident(&self, name: &str, _pos: usize) -> Result<MultiPoly<F>> {
        if let Some(i) = self.vars.iter().position(|v| v == name) {
            return Ok(MultiPoly::var(self.field.clone(), self.vars.clone(), i));
        }
        if name == "z" {
            return match self.field.generator() {
                Some(z) => Ok(self.constant(z)),
                None => Err(Error::CoefficientNotInField(format!(
                    "`z` is not defined in {:?}",
                    self.field
                ))),
            };
        }
        Err(Error::UnknownVariable(name.to_string()))
    }

    fn add(&self, a: MultiPoly<F>, b: MultiPoly<F>) -> Result<MultiPoly<F>> {
        a.add(&b)
    }

    fn sub(&self, a: MultiPoly<F>, b: MultiPoly<F>) -> Result<MultiPoly<F>> {
        a.sub(&b)
    }

    fn neg(&self, a: MultiPoly<F>) -> Result<MultiPoly<F>> {
        Ok(a.neg())
    }

    fn mul(&self, a: MultiPoly<F>, b: MultiPoly<F>) -> Result<MultiPoly<F>> {
        a.mul(&b)
    }

    fn div(&self, a: MultiPoly<F>, b: MultiPoly<F>, pos: usize) -> Result<MultiPoly<F>> {
        let c = self.as_constant(&b).ok_or_else(|| {
            Error::CoefficientNotInField(format!("division by a non-constant at position {pos}"))
        })?;
        let inv = self.field.inv(&c).map_err(|_| {
            Error::CoefficientNotInField(format!("division by zero at position {pos}"))
        })?;
        Ok(a.scale(&inv))
    }

    fn pow(&self, a: MultiPoly<F>, k: u64) -> Result<MultiPoly<F>> {
        Ok(a.pow(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Gf, Rationals};
    use crate::matrix::elementary;
    use proptest::prelude::*;

    fn gf(p: u64) -> GaloisField {
        GaloisField::prime(p).unwrap()
    }

    fn gf4() -> GaloisField {
        GaloisField::new(2, &[1, 1, 1]).unwrap()
    }

    #[test]
    fn parse_examples() {
        let f = MultiPoly::parse(&gf(3), &["x1", "y1"], "x1^2 + 2*x1*y1").unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.to_string(), "x1^2 + 2*x1*y1");
        let g = MultiPoly::parse(&gf4(), &["x1"], "(1+z)*x1").unwrap();
        assert_eq!(g.num_terms(), 1);
        assert_eq!(g.coefficient(&[1]), gf4().parse_elem("z+1").unwrap());
        assert_eq!(g.to_string(), "(z+1)*x1");
        assert_eq!(
            MultiPoly::parse(&gf(3), &["x1", "y1"], "x1 + w").unwrap_err(),
            Error::UnknownVariable("w".into())
        );
        assert!(matches!(
            MultiPoly::parse(&gf(3), &["x1"], "z*x1"),
            Err(Error::CoefficientNotInField(_))
        ));
        assert!(matches!(
            MultiPoly::parse(&gf(3), &["x1"], "2 x1"),
            Err(Error::Syntax { pos: 2, .. })
        ));
    }

    #[test]
    fn rational_printing() {
        let q = Rationals;
        let f = MultiPoly::parse(&q, &["x", "y"], "-x^2 + 3/2*y - 1").unwrap();
        assert_eq!(f.to_string(), "-x^2 + 3/2*y - 1");
        assert_eq!(
            MultiPoly::parse(&q, &["x", "y"], &f.to_string()).unwrap(),
            f
        );
    }

    #[test]
    fn arithmetic_examples() {
        let f = gf(2);
        let p = MultiPoly::parse(&f, &["x", "y"], "(x+y)^2").unwrap();
        assert_eq!(p.to_string(), "x^2 + y^2");
        assert!(p.sub(&p).unwrap().is_zero());

        let g3 = gf(3);
        let h = MultiPoly::parse(&g3, &["x1", "y1"], "y1^3 - x1^2*y1").unwrap();
        let cubed = h.pow(3);
        let repeated = h.mul(&h).unwrap().mul(&h).unwrap();
        assert_eq!(cubed, repeated);
        assert_eq!(cubed, h.frobenius_twist());

        let other = MultiPoly::parse(&g3, &["x1", "y2"], "x1").unwrap();
        assert!(matches!(h.add(&other), Err(Error::VariableMismatch(_))));
        let wrong_field = MultiPoly::parse(&gf(5), &["x1", "y1"], "x1").unwrap();
        assert!(matches!(h.mul(&wrong_field), Err(Error::SpecMismatch(_))));
    }

    #[test]
    fn evaluation_examples() {
        let f = gf(3);
        let p = MultiPoly::parse(&f, &["x", "y"], "x^2 + y").unwrap();
        assert_eq!(p.evaluate(&[Gf(2), Gf(1)]).unwrap(), Gf(2));
        let c = MultiPoly::parse(&f, &["x", "y"], "x*y + 2").unwrap();
        assert_eq!(c.evaluate(&[Gf(0), Gf(0)]).unwrap(), Gf(2));

        let g2 = gf(2);
        let vars = ["x1", "x2", "x3", "y1", "y2"];
        let m = MultiPoly::parse(&g2, &vars, "x1*y2").unwrap();
        let u = [0, 0, 0, 1, 0].map(Gf);
        let v = [0, 0, 1, 0, 1].map(Gf);
        assert_eq!(m.evaluate(&u).unwrap(), Gf(0));
        assert_eq!(m.evaluate(&v).unwrap(), Gf(0));
        assert!(matches!(m.evaluate(&[Gf(0)]), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn lifted_evaluation() {
        let base = gf4();
        let emb = crate::field::extension(&base, 2).unwrap();
        let p = MultiPoly::parse(&base, &["x"], "z*x + 1").unwrap();
        let big = emb.ext();
        let x = big.element(7);
        let expected = big.add(
            &big.mul(&emb.map(&base.generator().unwrap()), &x),
            &big.one(),
        );
        assert_eq!(p.evaluate_lifted(&emb, &[x]).unwrap(), expected);
        let other = crate::field::extension(&gf(2), 3).unwrap();
        assert!(matches!(p.lift(&other), Err(Error::SpecIncompatible(_))));
    }

    #[test]
    fn substitution_examples() {
        let f = gf(2);
        let vars = ["x1", "x2", "x3", "x4"];
        let mut m = Matrix::identity(f.clone(), 4);
        m.set(1, 0, Gf(1));
        let x2 = MultiPoly::parse(&f, &vars, "x2").unwrap();
        assert_eq!(x2.linear_substitute(&m).unwrap().to_string(), "x1 + x2");
        let x1 = MultiPoly::parse(&f, &vars, "x1").unwrap();
        let lower = Matrix::from_rows(
            f.clone(),
            vec![
                vec![Gf(1), Gf(0), Gf(0), Gf(0)],
                vec![Gf(1), Gf(1), Gf(0), Gf(0)],
                vec![Gf(0), Gf(1), Gf(1), Gf(0)],
                vec![Gf(1), Gf(1), Gf(1), Gf(1)],
            ],
        )
        .unwrap();
        assert_eq!(x1.linear_substitute(&lower).unwrap(), x1);
        let any = MultiPoly::parse(&f, &vars, "x1*x2^3 + x4").unwrap();
        assert_eq!(
            any.linear_substitute(&Matrix::identity(f.clone(), 4))
                .unwrap(),
            any
        );
        assert!(matches!(
            any.linear_substitute(&Matrix::identity(f, 3)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn jacobian_examples() {
        let q = Rationals;
        let vars = ["x1", "x2", "x3", "y1", "y2"];
        let fs: Vec<_> = ["x1*y1", "x3*y1", "x1*y2", "x2*y2"]
            .iter()
            .map(|s| MultiPoly::parse(&q, &vars, s).unwrap())
            .collect();
        let ones = vec![q.one(); 5];
        assert_eq!(jacobian_rank(&fs, &ones).unwrap(), 4);
        let single = [MultiPoly::parse(&q, &vars, "x1^3*y2").unwrap()];
        assert_eq!(jacobian_rank(&single, &ones).unwrap(), 1);

        let g5 = gf(5);
        let xp = [MultiPoly::parse(&g5, &["x"], "x^5").unwrap()];
        assert!(xp[0].partial(0).is_zero());
        assert_eq!(jacobian_rank(&xp, &[Gf(3)]).unwrap(), 0);
    }

    fn poly_strategy() -> impl Strategy<Value = Vec<(Vec<u32>, u64)>> {
        proptest::collection::vec((proptest::collection::vec(0u32..4, 3), 0u64..9), 0..6)
    }

    fn build(terms: Vec<(Vec<u32>, u64)>) -> MultiPoly<GaloisField> {
        let f = GaloisField::new(3, &[1, 0, 1]).unwrap();
        let terms = terms.into_iter().map(|(e, c)| (e, f.element(c)));
        MultiPoly::from_terms(f.clone(), var_list(&["a", "b", "c"]), terms).unwrap()
    }

    fn mat(entries: &[u64]) -> Matrix<GaloisField> {
        let f = GaloisField::new(3, &[1, 0, 1]).unwrap();
        Matrix::from_vec(
            f.clone(),
            3,
            3,
            entries.iter().map(|&e| f.element(e)).collect(),
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn substitute_commutes_with_evaluation(
            terms in poly_strategy(),
            a in proptest::collection::vec(0u64..9, 9),
            u in proptest::collection::vec(0u64..9, 3),
        ) {
            let f = build(terms);
            let m = mat(&a);
            let field = f.field().clone();
            let u: Vec<Gf> = u.iter().map(|&i| field.element(i)).collect();
            let lhs = f.linear_substitute(&m).unwrap().evaluate(&u).unwrap();
            let rhs = f.evaluate(&m.apply(&u)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn substitution_composes(
            terms in poly_strategy(),
            a in proptest::collection::vec(0u64..9, 9),
            b in proptest::collection::vec(0u64..9, 9),
        ) {
            let f = build(terms);
            let (ma, mb) = (mat(&a), mat(&b));
            let twice = f.linear_substitute(&ma).unwrap().linear_substitute(&mb).unwrap();
            let once = f.linear_substitute(&ma.mul(&mb).unwrap()).unwrap();
            prop_assert_eq!(twice, once);
        }

        #[test]
        fn print_parse_round_trip(terms in poly_strategy()) {
            let f = build(terms);
            let back = MultiPoly::parse(f.field(), f.vars(), &f.to_string()).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn pow_p_is_frobenius_twist(terms in poly_strategy()) {
            let f = build(terms);
            prop_assert_eq!(f.pow(3), f.frobenius_twist());
        }
    }

    #[test]
    fn elementary_substitution_over_gf2() {
        let f = gf(2);
        let e = elementary(f.clone(), 2, 2, 1);
        let id = Matrix::identity(f.clone(), 2);
        let m = id.sub(&e).unwrap();
        let y = MultiPoly::parse(&f, &["x", "y"], "y").unwrap();
        assert_eq!(y.linear_substitute(&m).unwrap().to_string(), "x + y");
    }
}
