//! Exhaustive enumeration of `GF(q)^n`.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::field::{AnyField, FiniteField, GaloisField, Gf};

/// Default ceiling on the number of points a scan may visit.
pub const DEFAULT_POINT_BUDGET: u64 = 10_000_000;

/// The point set `GF(q)^n`, indexed lexicographically with the first
/// coordinate most significant.
#[derive(Debug, Clone)]
pub struct PointSpace {
    field: GaloisField,
    n: usize,
    q: u64,
    len: u64,
}

pub(crate) fn count_points(q: u64, n: usize, budget: u64) -> Result<u64> {
    let needed = (q as u128).checked_pow(n as u32);
    match needed {
        Some(c) if c <= budget as u128 => Ok(c as u64),
        Some(c) => Err(Error::BudgetExceeded {
            needed: c.to_string(),
            budget,
        }),
        None => Err(Error::BudgetExceeded {
            needed: format!("{q}^{n}"),
            budget,
        }),
    }
}

impl PointSpace {
    pub fn new(field: &GaloisField, n: usize, budget: u64) -> Result<Self> {
        let q = field.order();
        let len = count_points(q, n, budget)?;
        Ok(PointSpace {
            field: field.clone(),
            n,
            q,
            len,
        })
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn point(&self, mut idx: u64) -> Vec<Gf> {
        let mut v = vec![self.field.element(0); self.n];
        for slot in v.iter_mut().rev() {
            *slot = self.field.element(idx % self.q);
            idx /= self.q;
        }
        v
    }

    pub fn index_of(&self, v: &[Gf]) -> u64 {
        v.iter()
            .fold(0u64, |acc, e| acc * self.q + self.field.index_of(e))
    }

    /// Contiguous index slice assigned to `worker` of `workers`.
    pub fn partition(&self, worker: usize, workers: usize) -> Range<u64> {
        let workers = workers.max(1) as u64;
        let w = worker as u64;
        let chunk = self.len / workers;
        let extra = self.len % workers;
        let start = w * chunk + w.min(extra);
        let end = start + chunk + u64::from(w < extra);
        start..end
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<Gf>> + '_ {
        self.iter_range(0..self.len)
    }

    pub fn iter_range(&self, range: Range<u64>) -> impl Iterator<Item = Vec<Gf>> + '_ {
        range.map(move |i| self.point(i))
    }
}

/// Enumerates `field^n`, rejecting the rationals and over-budget requests.
pub fn enumerate_points(field: &AnyField, n: usize, budget: u64) -> Result<PointSpace> {
    match field {
        AnyField::Rationals(_) => Err(Error::InfiniteField),
        AnyField::Finite(f) => PointSpace::new(f, n, budget),
    }
}
