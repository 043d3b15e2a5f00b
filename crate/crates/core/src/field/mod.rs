//! Exact scalar fields: prime fields, their extensions, and the rationals.
//!
//! Fields are handles that carry the arithmetic; elements are plain values.
//! Containers ([`crate::Matrix`], [`crate::MultiPoly`]) store the field
//! they live over and refuse to mix operands from different fields.

mod gf;
mod rational;
mod tower;

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gf::{is_prime, GaloisField, Gf, MAX_FIELD_ORDER};
pub use rational::Rationals;
pub use tower::{extension, smallest_irreducible, Embedding};

pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_integer(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// The adjoined root `z` of the defining modulus, for proper extensions.
    fn generator(&self) -> Option<Self::Elem>;
    fn contains(&self, a: &Self::Elem) -> bool;
    fn format_elem(&self, a: &Self::Elem) -> String;
    fn parse_elem(&self, text: &str) -> Result<Self::Elem>;

    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_integer(&BigInt::from(n))
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut k: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// Fields whose elements can be enumerated.
pub trait FiniteField: Field {
    fn order(&self) -> u64;
    /// Extension degree over the prime field.
    fn degree(&self) -> u32;
    /// Element with enumeration index `idx < order()`; index 0 is zero.
    fn element(&self, idx: u64) -> Self::Elem;
    fn index_of(&self, a: &Self::Elem) -> u64;

    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, self.characteristic())
    }
}

/// Serializable description of a field, e.g.
/// `{"kind":"finite","char":2,"degree":2,"modulus":[1,1,1]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldSpec {
    Rationals,
    Finite {
        char: u64,
        degree: u32,
        /// Coefficients low-to-high, leading 1 included. Required when `degree > 1`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<Vec<u64>>,
    },
}

/// A field chosen at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyField {
    Rationals(Rationals),
    Finite(GaloisField),
}

/// Which kind of field [`field_make`] should build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    Finite,
}

/// Validates and builds a field.
pub fn field_make(kind: FieldKind, p: u64, m: u32, modulus: Option<&[u64]>) -> Result<AnyField> {
    match kind {
        FieldKind::Rationals => Ok(AnyField::Rationals(Rationals)),
        FieldKind::Finite => {
            let f = match (m, modulus) {
                (1, None) => GaloisField::prime(p)?,
                (_, None) => {
                    return Err(Error::DegreeMismatch(format!(
                        "degree {m} extension needs an explicit modulus"
                    )))
                }
                (_, Some(md)) => {
                    if md.len() != m as usize + 1 {
                        return Err(Error::DegreeMismatch(format!(
                            "modulus has degree {} but degree {m} was declared",
                            md.len().saturating_sub(1)
                        )));
                    }
                    GaloisField::new(p, md)?
                }
            };
            Ok(AnyField::Finite(f))
        }
    }
}

impl FieldSpec {
    pub fn build(&self) -> Result<AnyField> {
        match self {
            FieldSpec::Rationals => field_make(FieldKind::Rationals, 0, 1, None),
            FieldSpec::Finite {
                char,
                degree,
                modulus,
            } => field_make(FieldKind::Finite, *char, *degree, modulus.as_deref()),
        }
    }

    pub fn finite(&self) -> Result<GaloisField> {
        match self.build()? {
            AnyField::Finite(f) => Ok(f),
            AnyField::Rationals(_) => Err(Error::InfiniteField),
        }
    }
}
