//! Ultraproducts over a finite index set.
//!
//! On a finite set every ultrafilter is principal, so `U` is determined by its
//! center `j0` and the ultraproduct is `prod S_i / c_U` where `c_U` is the ideal
//! of tuples whose support lies outside `U`.

use crate::constructions::ideal::largest_idempotent;
use crate::constructions::product::coords;
use crate::constructions::{cu_product, quotient, CuProduct, Ideal};
use crate::error::{CuError, Result};
use crate::order::{Element, Semigroup, Value};
use crate::scalar::Int;

const MAX_INDEX: usize = 16;

/// An ultrafilter on `{0, .., n-1}`; subsets are bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ultrafilter {
    pub n: usize,
    /// All members, sorted.
    pub sets: Vec<u32>,
}

impl Ultrafilter {
    /// The filter generated by `sets`; it must be an ultrafilter.
    pub fn new(n: usize, sets: &[u32]) -> Result<Self> {
        if n == 0 || n > MAX_INDEX {
            return Err(CuError::NotUltrafilter(format!(
                "index set size {n} not in 1..={MAX_INDEX}"
            )));
        }
        let full: u32 = (1u32 << n) - 1;
        if let Some(a) = sets.iter().find(|a| **a & !full != 0) {
            return Err(CuError::NotUltrafilter(format!(
                "{a:#b} is not a subset of the index set"
            )));
        }
        let meet = sets.iter().fold(full, |acc, a| acc & a);
        if meet == 0 {
            return Err(CuError::NotUltrafilter(
                "the sets have empty intersection".into(),
            ));
        }
        if meet.count_ones() != 1 {
            return Err(CuError::NotUltrafilter(format!(
                "neither {meet:#b} nor its complement can be decided; the family is not maximal"
            )));
        }
        let sets = (1..=full).filter(|a| a & meet == meet).collect();
        Ok(Ultrafilter { n, sets })
    }

    pub fn principal(n: usize, j: usize) -> Result<Self> {
        if j >= n {
            return Err(CuError::NotUltrafilter(format!(
                "center {j} outside 0..{n}"
            )));
        }
        Ultrafilter::new(n, &[1 << j])
    }

    pub fn center(&self) -> usize {
        self.sets
            .iter()
            .fold(u32::MAX, |acc, a| acc & a)
            .trailing_zeros() as usize
    }

    pub fn contains(&self, set: u32) -> bool {
        self.sets.binary_search(&set).is_ok()
    }
}

fn support<I: Int>(p: &CuProduct<I>, v: &Value<I>) -> u32 {
    p.factors
        .iter()
        .zip(coords(v))
        .enumerate()
        .filter(|(_, (s, x))| **x != s.ops().zero())
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

fn product_kind<I: Int>(p: &Semigroup<I>) -> Result<&CuProduct<I>> {
    p.kind::<CuProduct<I>>()
        .ok_or_else(|| CuError::Unsupported(format!("{} is not a product", p.label())))
}

/// `x ∈ c_U`: the support of `x` is not in `U`.
pub fn in_c_u<I: Int>(p: &Semigroup<I>, x: &Element<I>, u: &Ultrafilter) -> Result<bool> {
    p.owns(x)?;
    let k = product_kind(p)?;
    if k.factors.len() != u.n {
        return Err(CuError::BadParam(format!(
            "{} factors but U lives on {} indices",
            k.factors.len(),
            u.n
        )));
    }
    Ok(!u.contains(support(k, x.value())))
}

/// The ideal `c_U` of a product: tuples vanishing at the center of `U`.
pub fn c_u_ideal<I: Int>(p: &Semigroup<I>, u: &Ultrafilter) -> Result<Ideal<I>> {
    let k = product_kind(p)?;
    if k.factors.len() != u.n {
        return Err(CuError::BadParam(format!(
            "{} factors but U lives on {} indices",
            k.factors.len(),
            u.n
        )));
    }
    let j0 = u.center();
    let mut top = Vec::new();
    for (i, s) in k.factors.iter().enumerate() {
        top.push(if i == j0 {
            s.ops().zero()
        } else {
            largest_idempotent(s)?.into_value()
        });
    }
    Ideal::from_top(p, p.element(Value::Tuple(top))?)
}

/// `prod S_i / c_U`.
pub fn ultraproduct<I: Int>(factors: Vec<Semigroup<I>>, u: &Ultrafilter) -> Result<Semigroup<I>> {
    if factors.len() != u.n {
        return Err(CuError::BadParam(format!(
            "{} factors but U lives on {} indices",
            factors.len(),
            u.n
        )));
    }
    let p = cu_product(factors);
    let ideal = c_u_ideal(&p, u)?;
    quotient(&p, &ideal)
}
