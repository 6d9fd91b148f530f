//! `(N_{>0} × Z) ⊔ Lsc_nc(X, N̄)` over a connected finite space `X`.
//!
//! Pairs `(n, m)` play the role of vector bundles of rank `n`: `(n,m) ≤ (n',m')`
//! iff they are equal or `n < n'`. Functions are the lsc maps `X → N̄` that are
//! not finite nonzero constants; a pair is compared with a function through
//! the constant `n·1`.

use std::any::Any;

use num_traits::Zero;

use crate::catalog::{nbar, FiniteSpace, LscSpace};
use crate::error::{CuError, Result};
use crate::order::{Grid, KindOps, Semigroup, Value};
use crate::scalar::{int, ExtValue, Int};
use crate::text::Cursor;

#[derive(Clone, Debug)]
pub struct Glued<I: Int> {
    pub lsc: LscSpace<I>,
    /// Range of the second coordinate in enumerated grids.
    pub twist: i64,
}

fn pair<I: Int>(n: i64, m: i64) -> Value<I> {
    Value::Grouped(vec![m], Box::new(Value::Compact(int(n))))
}

fn pair_parts<I: Int>(v: &Value<I>) -> Option<(i64, i64)> {
    match v {
        Value::Grouped(m, n) => match n.as_ref() {
            Value::Compact(q) => Some((q.to_integer().to_i64()?, m[0])),
            _ => None,
        },
        _ => None,
    }
}

fn finite<I: Int>(x: &Value<I>) -> bool {
    matches!(x, Value::Compact(_))
}

impl<I: Int> Glued<I> {
    pub fn new(space: FiniteSpace) -> Result<Self> {
        if !space.is_connected() {
            return Err(CuError::BadParam(
                "the glued semigroup needs a connected space".into(),
            ));
        }
        Ok(Glued {
            lsc: LscSpace::new(space, nbar()),
            twist: 1,
        })
    }

    fn points(&self) -> usize {
        self.lsc.space.points.len()
    }

    fn constant(&self, n: i64) -> Value<I> {
        Value::Points(vec![Value::Compact(int(n)); self.points()])
    }

    /// A function that is a finite nonzero constant, as an integer.
    fn finite_constant(&self, f: &Value<I>) -> Option<i64> {
        let Value::Points(xs) = f else { return None };
        let first = xs.first()?;
        if xs.iter().any(|x| x != first) {
            return None;
        }
        match first {
            Value::Compact(q) if !q.is_zero() => q.to_integer().to_i64(),
            _ => None,
        }
    }

    fn as_function(&self, v: &Value<I>) -> Value<I> {
        match pair_parts(v) {
            Some((n, _)) => self.constant(n),
            None => v.clone(),
        }
    }

    fn is_finite_fn(&self, v: &Value<I>) -> bool {
        matches!(v, Value::Points(xs) if xs.iter().all(finite))
    }

    /// Indicator `1_U` of an open set given as a bitmask.
    pub fn indicator(&self, open: u64) -> Value<I> {
        self.lsc.indicator(open, &Value::Compact(int(1)))
    }

    pub fn pair(&self, n: i64, m: i64) -> Value<I> {
        pair(n, m)
    }
}

impl<I: Int> KindOps<I> for Glued<I> {
    fn label(&self) -> String {
        format!("glued({} points)", self.points())
    }

    fn zero(&self) -> Value<I> {
        self.lsc.zero()
    }

    fn normalize(&self, v: Value<I>) -> Result<Value<I>> {
        if let Some((n, _)) = pair_parts(&v) {
            if n < 1 {
                return Err(CuError::InvalidElement("pairs need positive rank".into()));
            }
            return Ok(v);
        }
        let f = self.lsc.normalize(v)?;
        if self.finite_constant(&f).is_some() {
            return Err(CuError::InvalidElement(
                "finite nonzero constants are written as pairs (n, m)".into(),
            ));
        }
        Ok(f)
    }

    fn leq(&self, a: &Value<I>, b: &Value<I>) -> bool {
        match (pair_parts(a), pair_parts(b)) {
            (Some(x), Some(y)) => x == y || x.0 < y.0,
            _ => self.lsc.leq(&self.as_function(a), &self.as_function(b)),
        }
    }

    fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        match (pair_parts(a), pair_parts(b)) {
            (Some((n, m)), Some((k, l))) => pair(n + k, m + l),
            _ if *a == self.zero() => b.clone(),
            _ if *b == self.zero() => a.clone(),
            _ => self.lsc.add(&self.as_function(a), &self.as_function(b)),
        }
    }

    fn way_below(&self, a: &Value<I>, b: &Value<I>) -> bool {
        if pair_parts(a).is_none() && !self.is_finite_fn(a) {
            return false;
        }
        KindOps::<I>::leq(self, a, b)
    }

    fn wedge(&self, a: &Value<I>, b: &Value<I>) -> Option<Value<I>> {
        if KindOps::<I>::leq(self, a, b) {
            return Some(a.clone());
        }
        if KindOps::<I>::leq(self, b, a) {
            return Some(b.clone());
        }
        match (pair_parts(a), pair_parts(b)) {
            (Some(_), Some(_)) => {
                // Two pairs of equal rank; only rank 1 has finitely many lower bounds.
                let lower: Vec<Value<I>> = self
                    .down_set(a)?
                    .into_iter()
                    .filter(|x| KindOps::<I>::leq(self, x, b))
                    .collect();
                let top: Vec<&Value<I>> = lower
                    .iter()
                    .filter(|x| lower.iter().all(|y| KindOps::<I>::leq(self, y, x)))
                    .collect();
                top.first().map(|x| (*x).clone())
            }
            _ => {
                let h = self.lsc.wedge(&self.as_function(a), &self.as_function(b))?;
                if self.finite_constant(&h).is_some() {
                    None
                } else {
                    Some(h)
                }
            }
        }
    }

    fn approx(&self, a: &Value<I>, k: u32) -> Value<I> {
        let Value::Points(xs) = a else {
            return a.clone();
        };
        if self.is_finite_fn(a) {
            return a.clone();
        }
        let top = xs
            .iter()
            .filter_map(|x| match x {
                Value::Compact(q) => q.to_integer().to_i64(),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        let cap = top + k as i64;
        let f = self
            .lsc
            .wedge(a, &self.constant(cap))
            .unwrap_or_else(|| a.clone());
        match self.finite_constant(&f) {
            Some(n) => pair(n, 0),
            None => f,
        }
    }

    fn infinity(&self, a: &Value<I>) -> Result<Value<I>> {
        self.lsc.infinity(&self.as_function(a))
    }

    fn grid(&self, g: &Grid) -> Vec<Value<I>> {
        let mut out = Vec::new();
        for n in 1..=g.max_value.max(1) {
            for m in -self.twist..=self.twist {
                out.push(pair(n, m));
            }
        }
        let mut vals: Vec<Value<I>> = (0..=g.max_value).map(|n| Value::Compact(int(n))).collect();
        vals.push(Value::Soft(ExtValue::Infinite));
        out.extend(
            self.lsc
                .enumerate(&vals)
                .into_iter()
                .filter(|f| self.finite_constant(f).is_none()),
        );
        out
    }

    fn down_set(&self, a: &Value<I>) -> Option<Vec<Value<I>>> {
        let keep = |fs: Vec<Value<I>>| -> Vec<Value<I>> {
            fs.into_iter()
                .filter(|f| self.finite_constant(f).is_none())
                .collect()
        };
        match pair_parts(a) {
            Some((1, _)) => {
                let mut out = keep(self.lsc.down_set(&self.constant(1))?);
                out.push(a.clone());
                Some(out)
            }
            Some(_) => None,
            None => {
                let Value::Points(xs) = a else { return None };
                if xs
                    .iter()
                    .all(|x| !matches!(x, Value::Compact(q) if q.is_zero()))
                {
                    return None;
                }
                Some(keep(self.lsc.down_set(a)?))
            }
        }
    }

    fn render(&self, v: &Value<I>) -> String {
        match pair_parts(v) {
            Some((n, m)) => format!("({n},{m})"),
            None => self.lsc.render(v),
        }
    }

    fn parse(&self, c: &mut Cursor<'_>) -> Result<Value<I>> {
        if c.peek() == Some('(') {
            let xs = c.list("(", ")", |c| c.integer())?;
            if xs.len() != 2 {
                return Err(c.error("expected (n, m)"));
            }
            return Ok(pair(xs[0], xs[1]));
        }
        self.lsc.parse(c)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// The glued semigroup over a connected finite space.
pub fn glued_semigroup<I: Int>(space: FiniteSpace) -> Result<Semigroup<I>> {
    Ok(Semigroup::from_ops(Glued::new(space)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> Semigroup<i128> {
        glued_semigroup(FiniteSpace::chain3()).unwrap()
    }

    #[test]
    fn constants_must_be_pairs() {
        let s = chain();
        assert!(s.parse("[1, 1, 1]").is_err());
        assert!(s.parse("[inf, inf, inf]").is_ok());
        assert!(s.parse("[0, 0, 0]").is_ok());
    }

    #[test]
    fn mixed_order_goes_through_constants() {
        let s = chain();
        let e = |t: &str| s.parse(t).unwrap();
        assert!(s
            .leq(&e("(1,0)"), &s.add(&e("(1,1)"), &e("[1, 0, 0]")).unwrap())
            .unwrap());
        assert!(!s.leq(&e("(1,0)"), &e("(1,1)")).unwrap());
        assert!(s.leq(&e("(1,5)"), &e("(2,0)")).unwrap());
        assert!(s.leq(&e("[1, 1, 0]"), &e("(1,1)")).unwrap());
        assert_eq!(
            s.render(&s.wedge(&e("(1,0)"), &e("(1,1)")).unwrap().unwrap()),
            "[1, 1, 0]"
        );
        assert_eq!(s.wedge(&e("(2,0)"), &e("(2,1)")).unwrap(), None);
    }

    #[test]
    fn disconnected_space_is_rejected() {
        assert!(glued_semigroup::<i128>(FiniteSpace::discrete(2)).is_err());
    }
}
