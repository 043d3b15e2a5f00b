use std::sync::Arc;

use super::gf::{GaloisField, Gf};
use super::{Field, FiniteField};
use crate::error::{Error, Result};

/// Smallest monic irreducible polynomial of `degree` over GF(p).
///
/// Candidates are ordered by the integer `c_0 + c_1 p + ... + c_{d-1} p^{d-1}`
/// of their non-leading coefficients. Returned low-to-high with leading 1.
pub fn smallest_irreducible(p: u64, degree: u32) -> Result<Vec<u64>> {
    let count = p
        .checked_pow(degree)
        .ok_or(Error::FieldTooLarge(u64::MAX))?;
    for t in 0..count {
        let mut md: Vec<u64> = (0..degree).map(|i| (t / p.pow(i)) % p).collect();
        md.push(1);
        match GaloisField::new(p, &md) {
            Ok(_) => return Ok(md),
            Err(Error::ReducibleModulus { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// A field embedding `base -> ext` fixed by the image of the base generator.
#[derive(Debug, Clone)]
pub struct Embedding {
    base: GaloisField,
    ext: GaloisField,
    image: Arc<Vec<Gf>>,
}

impl Embedding {
    pub fn identity(f: &GaloisField) -> Self {
        let image = (0..f.order()).map(|i| f.element(i)).collect();
        Embedding {
            base: f.clone(),
            ext: f.clone(),
            image: Arc::new(image),
        }
    }

    /// Embeds `base` into `ext`, sending `z` to the root of the base modulus
    /// with the smallest enumeration index in `ext`.
    pub fn new(base: &GaloisField, ext: &GaloisField) -> Result<Self> {
        if base.characteristic() != ext.characteristic()
            || !ext.degree().is_multiple_of(base.degree())
        {
            return Err(Error::SpecIncompatible(format!(
                "{base:?} does not embed in {ext:?}"
            )));
        }
        let lift_prime = |c: u64| ext.from_i64(c as i64);
        let root = if base.degree() == 1 {
            ext.zero()
        } else {
            let md = base.modulus();
            (0..ext.order())
                .map(|i| ext.element(i))
                .find(|x| {
                    let val = md.iter().rev().fold(ext.zero(), |acc, &c| {
                        ext.add(&ext.mul(&acc, x), &lift_prime(c))
                    });
                    ext.is_zero(&val)
                })
                .ok_or_else(|| {
                    Error::SpecIncompatible(format!("base modulus has no root in {ext:?}"))
                })?
        };
        let image = (0..base.order())
            .map(|i| {
                let coeffs = base.coeffs(base.element(i));
                coeffs.iter().rev().fold(ext.zero(), |acc, &c| {
                    ext.add(&ext.mul(&acc, &root), &lift_prime(c as u64))
                })
            })
            .collect();
        Ok(Embedding {
            base: base.clone(),
            ext: ext.clone(),
            image: Arc::new(image),
        })
    }

    pub fn base(&self) -> &GaloisField {
        &self.base
    }

    pub fn ext(&self) -> &GaloisField {
        &self.ext
    }

    /// Relative degree `[ext : base]`.
    pub fn degree(&self) -> u32 {
        self.ext.degree() / self.base.degree()
    }

    #[inline]
    pub fn map(&self, a: &Gf) -> Gf {
        self.image[a.0 as usize]
    }
}

/// The level-`k` rung of the extension ladder over `base`: GF(q^k) with the
/// smallest irreducible modulus of degree `m k` over GF(p), plus the embedding.
pub fn extension(base: &GaloisField, k: u32) -> Result<Embedding> {
    if k == 0 {
        return Err(Error::BadParams(
            "extension degree must be at least 1".into(),
        ));
    }
    if k == 1 {
        return Ok(Embedding::identity(base));
    }
    let p = base.characteristic();
    let md = smallest_irreducible(p, base.degree() * k)?;
    let ext = GaloisField::new(p, &md)?;
    Embedding::new(base, &ext)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_irreducibles() {
        assert_eq!(smallest_irreducible(2, 1).unwrap(), vec![0, 1]);
        assert_eq!(smallest_irreducible(2, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(smallest_irreducible(2, 4).unwrap(), vec![1, 1, 0, 0, 1]);
        assert_eq!(smallest_irreducible(3, 2).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let gf4 = GaloisField::new(2, &[1, 1, 1]).unwrap();
        let emb = extension(&gf4, 2).unwrap();
        assert_eq!(emb.ext().order(), 16);
        assert_eq!(emb.degree(), 2);
        let big = emb.ext();
        for i in 0..4 {
            for j in 0..4 {
                let (a, b) = (gf4.element(i), gf4.element(j));
                assert_eq!(
                    emb.map(&gf4.add(&a, &b)),
                    big.add(&emb.map(&a), &emb.map(&b))
                );
                assert_eq!(
                    emb.map(&gf4.mul(&a, &b)),
                    big.mul(&emb.map(&a), &emb.map(&b))
                );
            }
        }
        // injective
        let mut imgs: Vec<_> = (0..4).map(|i| emb.map(&gf4.element(i))).collect();
        imgs.sort();
        imgs.dedup();
        assert_eq!(imgs.len(), 4);
    }

    #[test]
    fn incompatible_towers() {
        let gf4 = GaloisField::new(2, &[1, 1, 1]).unwrap();
        let gf8 = GaloisField::new(2, &[1, 1, 0, 1]).unwrap();
        assert!(matches!(
            Embedding::new(&gf4, &gf8),
            Err(Error::SpecIncompatible(_))
        ));
        let gf9 = GaloisField::new(3, &[1, 0, 1]).unwrap();
        assert!(matches!(
            Embedding::new(&gf4, &gf9),
            Err(Error::SpecIncompatible(_))
        ));
    }
}
