#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sepinv::error::Error;
use sepinv::field::{FiniteField, GaloisField, Gf};
use sepinv::group::FiniteMatrixGroup;
use sepinv::matrix::Matrix;
use sepinv::poly::{var_list, MultiPoly};

pub fn random_elem(rng: &mut ChaCha8Rng, f: &GaloisField) -> Gf {
    f.element(rng.gen_range(0..f.order()))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, f: &GaloisField, n: usize) -> Matrix<GaloisField> {
    let data = (0..n * n).map(|_| random_elem(rng, f)).collect();
    Matrix::from_vec(f.clone(), n, n, data).unwrap()
}

pub fn random_invertible(rng: &mut ChaCha8Rng, f: &GaloisField, n: usize) -> Matrix<GaloisField> {
    loop {
        let m = random_matrix(rng, f, n);
        if m.rank() == n {
            return m;
        }
    }
}

/// Upper triangular with nonzero diagonal.
pub fn random_borel(rng: &mut ChaCha8Rng, f: &GaloisField, n: usize) -> Matrix<GaloisField> {
    let mut m = Matrix::zeros(f.clone(), n, n);
    for i in 0..n {
        m.set(i, i, f.element(rng.gen_range(1..f.order())));
        for j in i + 1..n {
            m.set(i, j, random_elem(rng, f));
        }
    }
    m
}

/// A subgroup of `GL(n, f)` of order at most `bound`, generated by one to three
/// random matrices; draws again when the closure is too large.
pub fn random_group(
    rng: &mut ChaCha8Rng,
    f: &GaloisField,
    n: usize,
    bound: usize,
) -> FiniteMatrixGroup<GaloisField> {
    loop {
        let k = rng.gen_range(1..=3);
        let gens: Vec<_> = (0..k)
            .map(|i| {
                if i == 0 || rng.gen_bool(0.5) {
                    random_borel(rng, f, n)
                } else {
                    random_invertible(rng, f, n)
                }
            })
            .collect();
        match FiniteMatrixGroup::closure(f.clone(), n, gens, bound) {
            Ok(g) => return g,
            Err(Error::OrderBoundExceeded(_)) => continue,
            Err(e) => panic!("{e}"),
        }
    }
}

pub fn random_point(rng: &mut ChaCha8Rng, f: &GaloisField, n: usize) -> Vec<Gf> {
    (0..n).map(|_| random_elem(rng, f)).collect()
}

pub fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

pub fn random_poly(
    rng: &mut ChaCha8Rng,
    f: &GaloisField,
    n: usize,
    terms: usize,
    max_deg: u32,
) -> MultiPoly<GaloisField> {
    let vars = var_list(&names(n));
    let t = (0..terms).map(|_| {
        let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_deg)).collect();
        (e, random_elem(rng, f))
    });
    MultiPoly::from_terms(f.clone(), vars, t).unwrap()
}

/// Orbit of a polynomial under `σ·f = f ∘ σ⁻¹`.
pub fn poly_orbit(
    g: &FiniteMatrixGroup<GaloisField>,
    f: &MultiPoly<GaloisField>,
) -> Vec<MultiPoly<GaloisField>> {
    let inverses: Vec<_> = g
        .generators()
        .iter()
        .map(|m| m.inverse().unwrap())
        .collect();
    let mut orbit = vec![f.clone()];
    let mut i = 0;
    while i < orbit.len() {
        for inv in &inverses {
            let next = orbit[i].linear_substitute(inv).unwrap();
            if !orbit.contains(&next) {
                orbit.push(next);
            }
        }
        i += 1;
    }
    orbit
}

/// Invariants built as orbit products of linear forms and orbit sums of
/// monomials.
pub fn random_invariants(
    rng: &mut ChaCha8Rng,
    g: &FiniteMatrixGroup<GaloisField>,
    count: usize,
) -> Vec<MultiPoly<GaloisField>> {
    let f = g.field();
    let n = g.dim();
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                let vars = var_list(&names(n));
                let linear = loop {
                    let terms: Vec<_> = (0..n)
                        .map(|k| {
                            let mut e = vec![0; n];
                            e[k] = 1;
                            (e, random_elem(rng, f))
                        })
                        .collect();
                    let l = MultiPoly::from_terms(f.clone(), vars.clone(), terms).unwrap();
                    if !l.is_zero() {
                        break l;
                    }
                };
                poly_orbit(g, &linear)
                    .iter()
                    .fold(linear.one_like(), |acc, p| acc.mul(p).unwrap())
            } else {
                let m = random_poly(rng, f, n, 1, 2);
                poly_orbit(g, &m)
                    .iter()
                    .fold(MultiPoly::zero(f.clone(), m.vars().clone()), |acc, p| {
                        acc.add(p).unwrap()
                    })
            }
        })
        .collect()
}

/// Number of orbits on `GF(q)^n` by counting fixed points of each element.
pub fn burnside_orbit_count(g: &FiniteMatrixGroup<GaloisField>, q: u64) -> u64 {
    let total: u128 = g
        .classifications()
        .iter()
        .map(|c| (q as u128).pow(c.fixed_dim as u32))
        .sum();
    assert_eq!(total % g.order() as u128, 0);
    (total / g.order() as u128) as u64
}
