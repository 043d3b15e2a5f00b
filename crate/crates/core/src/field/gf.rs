use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{Field, FieldSpec, FiniteField};
use crate::error::{Error, Result};
use crate::expr::{self, ExprAlgebra};

/// Largest field order for which log/antilog tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Element of a [`GaloisField`], stored as its enumeration index
/// `c_0 + c_1 p + ... + c_{m-1} p^{m-1}` where `c_0 + c_1 z + ...` is the
/// polynomial representative modulo the defining modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf(pub u32);

/// GF(p^m) = GF(p)[Z]/(modulus), with table-driven multiplication.
#[derive(Clone)]
pub struct GaloisField(Arc<Tables>);

struct Tables {
    p: u32,
    m: u32,
    q: u32,
    /// Low-to-high, monic.
    modulus: Vec<u32>,
    /// exp[i] = g^i for a primitive g; doubled length so log sums need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of `a` by monic `b` over GF(p).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for (i, &c) in b.iter().enumerate() {
            let sub = (lead as u64 * c as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn digits(mut idx: u64, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = (idx % p as u64) as u32;
            idx /= p as u64;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

fn fmt_poly(coeffs: &[u32], var: &str) -> String {
    let mut parts = Vec::new();
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let s = match (k, c) {
            (0, c) => c.to_string(),
            (1, 1) => var.to_string(),
            (1, c) => format!("{c}*{var}"),
            (k, 1) => format!("{var}^{k}"),
            (k, c) => format!("{c}*{var}^{k}"),
        };
        parts.push(s);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Exhaustive trial division by every monic polynomial of degree 1..=m/2.
fn find_factor(modulus: &[u32], p: u32) -> Option<Vec<u32>> {
    let m = modulus.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for t in 0..count {
            let mut cand = digits(t, p, d as u32);
            cand.push(1);
            if poly_rem(modulus, &cand, p).is_empty() {
                return Some(cand);
            }
        }
    }
    None
}

impl GaloisField {
    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, &[0, 1])
    }

    /// GF(p)[Z]/(modulus) with `modulus` given low-to-high including the leading 1.
    pub fn new(p: u64, modulus: &[u64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(Error::DegreeMismatch(
                "modulus must have degree at least 1".into(),
            ));
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return Err(Error::DegreeMismatch(format!(
                "modulus coefficient {c} is not reduced mod {p}"
            )));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::DegreeMismatch("modulus must be monic".into()));
        }
        let m = (modulus.len() - 1) as u32;
        let q = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
        if q > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge(q.min(u64::MAX as u128) as u64));
        }
        let p = p as u32;
        let q = q as u32;
        let modulus: Vec<u32> = modulus.iter().map(|&c| c as u32).collect();
        if let Some(f) = find_factor(&modulus, p) {
            return Err(Error::ReducibleModulus {
                p: p as u64,
                factor: fmt_poly(&f, "Z"),
            });
        }
        let (exp, log) = build_log_tables(p, m, q, &modulus);
        let neg = (0..q)
            .map(|i| {
                let ds: Vec<u32> = digits(i as u64, p, m)
                    .iter()
                    .map(|&d| (p - d) % p)
                    .collect();
                undigits(&ds, p)
            })
            .collect();
        Ok(GaloisField(Arc::new(Tables {
            p,
            m,
            q,
            modulus,
            exp,
            log,
            neg,
        })))
    }

    pub fn char_u32(&self) -> u32 {
        self.0.p
    }

    pub fn modulus(&self) -> Vec<u64> {
        self.0.modulus.iter().map(|&c| c as u64).collect()
    }

    /// Coefficients of the representative polynomial in `z`, low-to-high.
    pub fn coeffs(&self, a: Gf) -> Vec<u32> {
        digits(a.0 as u64, self.0.p, self.0.m)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Gf {
        let p = self.0.p;
        let mut acc = self.zero();
        let z = Gf(if self.0.m > 1 { p } else { 0 });
        let mut zk = self.one();
        for &c in coeffs {
            let term = self.mul(&Gf(c % p), &zk);
            acc = self.add(&acc, &term);
            zk = self.mul(&zk, &z);
        }
        acc
    }
}

/// Multiplies representatives modulo the (irreducible) modulus.
fn mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    poly_rem(&prod, modulus, p)
}

fn build_log_tables(p: u32, m: u32, q: u32, modulus: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let order = q - 1;
    let one = [1u32];
    for cand in 1..q {
        let g = digits(cand as u64, p, m);
        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut cur: Vec<u32> = one.to_vec();
        let mut period = 0u32;
        loop {
            let mut padded = cur.clone();
            padded.resize(m as usize, 0);
            exp.push(undigits(&padded, p));
            cur = mulmod(&cur, &g, modulus, p);
            period += 1;
            if cur == one || cur.is_empty() || period > order {
                break;
            }
        }
        if period == order && cur == one {
            let mut log = vec![0u32; q as usize];
            for (i, &e) in exp.iter().enumerate() {
                log[e as usize] = i as u32;
            }
            let doubled: Vec<u32> = exp.iter().chain(exp.iter()).copied().collect();
            return (doubled, log);
        }
    }
    unreachable!("a finite field always has a primitive element")
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(
                f,
                "GF({}^{}) mod {}",
                self.0.p,
                self.0.m,
                fmt_poly(&self.0.modulus, "Z")
            )
        }
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for GaloisField {}

impl Field for GaloisField {
    type Elem = Gf;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Finite {
            char: self.0.p as u64,
            degree: self.0.m,
            modulus: (self.0.m > 1).then(|| self.modulus()),
        }
    }

    fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    fn zero(&self) -> Gf {
        Gf(0)
    }

    fn one(&self) -> Gf {
        Gf(1)
    }

    fn from_integer(&self, n: &BigInt) -> Gf {
        let r = n.mod_floor(&BigInt::from(self.0.p));
        Gf(r.to_u32().expect("reduced residue"))
    }

    #[inline]
    fn add(&self, a: &Gf, b: &Gf) -> Gf {
        let t = &*self.0;
        if t.p == 2 {
            return Gf(a.0 ^ b.0);
        }
        if t.m == 1 {
            let s = a.0 + b.0;
            return Gf(if s >= t.p { s - t.p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0u32, 1u32);
        while x > 0 || y > 0 {
            let mut d = x % t.p + y % t.p;
            if d >= t.p {
                d -= t.p;
            }
            out += d * place;
            place *= t.p;
            x /= t.p;
            y /= t.p;
        }
        Gf(out)
    }

    #[inline]
    fn neg(&self, a: &Gf) -> Gf {
        Gf(self.0.neg[a.0 as usize])
    }

    #[inline]
    fn mul(&self, a: &Gf, b: &Gf) -> Gf {
        if a.0 == 0 || b.0 == 0 {
            return Gf(0);
        }
        let t = &*self.0;
        Gf(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    fn inv(&self, a: &Gf) -> Result<Gf> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let t = &*self.0;
        let order = t.q - 1;
        Ok(Gf(t.exp[((order - t.log[a.0 as usize]) % order) as usize]))
    }

    fn pow(&self, a: &Gf, k: u64) -> Gf {
        if k == 0 {
            return Gf(1);
        }
        if a.0 == 0 {
            return Gf(0);
        }
        let t = &*self.0;
        let order = (t.q - 1) as u64;
        let e = (t.log[a.0 as usize] as u64 * (k % order)) % order;
        Gf(t.exp[e as usize])
    }

    fn generator(&self) -> Option<Gf> {
        (self.0.m > 1).then_some(Gf(self.0.p))
    }

    fn contains(&self, a: &Gf) -> bool {
        a.0 < self.0.q
    }

    fn format_elem(&self, a: &Gf) -> String {
        fmt_poly(&self.coeffs(*a), "z")
    }

    fn parse_elem(&self, text: &str) -> Result<Gf> {
        expr::parse(text)?.eval(&ElemAlgebra(self))
    }
}

impl FiniteField for GaloisField {
    fn order(&self) -> u64 {
        self.0.q as u64
    }

    fn degree(&self) -> u32 {
        self.0.m
    }

    fn element(&self, idx: u64) -> Gf {
        debug_assert!(idx < self.0.q as u64);
        Gf(idx as u32)
    }

    fn index_of(&self, a: &Gf) -> u64 {
        a.0 as u64
    }
}

/// Evaluates constant expressions in `z` over a Galois field.
struct ElemAlgebra<'a>(&'a GaloisField);

impl ExprAlgebra for ElemAlgebra<'_> {
    type Val = Gf;

    fn int(&self, n: &BigInt) -> Result<Gf> {
        Ok(self.0.from_integer(n))
    }

    fn ident(&self, name: &str, _pos: usize) -> Result<Gf> {
        match (name, self.0.generator()) {
            ("z", Some(z)) => Ok(z),
            ("z", None) => Err(Error::CoefficientNotInField(format!(
                "`z` is not defined in {:?}",
                self.0
            ))),
            _ => Err(Error::UnknownVariable(name.to_string())),
        }
    }

    fn add(&self, a: Gf, b: Gf) -> Result<Gf> {
        Ok(self.0.add(&a, &b))
    }

    fn sub(&self, a: Gf, b: Gf) -> Result<Gf> {
        Ok(self.0.sub(&a, &b))
    }

    fn neg(&self, a: Gf) -> Result<Gf> {
        Ok(self.0.neg(&a))
    }

    fn mul(&self, a: Gf, b: Gf) -> Result<Gf> {
        Ok(self.0.mul(&a, &b))
    }

    fn div(&self, a: Gf, b: Gf, _pos: usize) -> Result<Gf> {
        self.0.div(&a, &b)
    }

    fn pow(&self, a: Gf, k: u64) -> Result<Gf> {
        Ok(self.0.pow(&a, k))
    }
}
