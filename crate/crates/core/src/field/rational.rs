use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Field, FieldSpec};
use crate::error::{Error, Result};
use crate::expr::{self, ExprAlgebra};

/// The field of rational numbers with arbitrary-precision numerator and denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_integer(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn generator(&self) -> Option<BigRational> {
        None
    }

    fn contains(&self, a: &BigRational) -> bool {
        a.denom().is_positive()
    }

    fn format_elem(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn parse_elem(&self, text: &str) -> Result<BigRational> {
        expr::parse(text)?.eval(&RationalAlgebra)
    }
}

struct RationalAlgebra;

impl ExprAlgebra for RationalAlgebra {
    type Val = BigRational;

    fn int(&self, n: &BigInt) -> Result<BigRational> {
        Ok(BigRational::from_integer(n.clone()))
    }

    fn ident(&self, name: &str, _pos: usize) -> Result<BigRational> {
        Err(Error::UnknownVariable(name.to_string()))
    }

    fn add(&self, a: BigRational, b: BigRational) -> Result<BigRational> {
        Ok(a + b)
    }

    fn sub(&self, a: BigRational, b: BigRational) -> Result<BigRational> {
        Ok(a - b)
    }

    fn neg(&self, a: BigRational) -> Result<BigRational> {
        Ok(-a)
    }

    fn mul(&self, a: BigRational, b: BigRational) -> Result<BigRational> {
        Ok(a * b)
    }

    fn div(&self, a: BigRational, b: BigRational, _pos: usize) -> Result<BigRational> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(a / b)
    }

    fn pow(&self, a: BigRational, k: u64) -> Result<BigRational> {
        Ok(Rationals.pow(&a, k))
    }
}
