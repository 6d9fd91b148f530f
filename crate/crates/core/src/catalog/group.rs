//! `S_G`: nonzero compacts decorated by a group element, and the gap monoid.

use std::any::Any;

use num_traits::Zero;

use crate::error::{CuError, Result};
use crate::order::{Grid, KindOps, Semigroup, Value};
use crate::scalar::{int, Int};
use crate::text::{join, Cursor};

/// Finitely generated abelian group by invariant factors; `0` stands for `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTag {
    pub factors: Vec<u64>,
}

impl GroupTag {
    pub fn trivial() -> Self {
        GroupTag { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        GroupTag { factors: vec![n] }
    }

    pub fn free(rank: usize) -> Self {
        GroupTag {
            factors: vec![0; rank],
        }
    }

    pub fn reduce(&self, g: &[i64]) -> Result<Vec<i64>> {
        if g.len() != self.factors.len() {
            return Err(CuError::InvalidElement(format!(
                "group element needs {} entries",
                self.factors.len()
            )));
        }
        Ok(g.iter()
            .zip(&self.factors)
            .map(|(&x, &f)| if f == 0 { x } else { x.rem_euclid(f as i64) })
            .collect())
    }

    pub fn identity(&self) -> Vec<i64> {
        vec![0; self.factors.len()]
    }

    fn add(&self, g: &[i64], h: &[i64]) -> Vec<i64> {
        let s: Vec<i64> = g.iter().zip(h).map(|(a, b)| a + b).collect();
        self.reduce(&s).expect("same length")
    }

    /// Residues `0..f` per finite factor, `-1..=1` per `Z` factor.
    fn sample(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &f in &self.factors {
            let range: Vec<i64> = if f == 0 {
                vec![-1, 0, 1]
            } else {
                (0..f as i64).collect()
            };
            out = out
                .into_iter()
                .flat_map(|g| {
                    range.iter().map(move |&r| {
                        let mut g = g.clone();
                        g.push(r);
                        g
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct GroupAdjoined<I: Int> {
    pub base: Semigroup<I>,
    pub group: GroupTag,
}

fn split<I: Int>(v: &Value<I>) -> Option<(&[i64], &Value<I>)> {
    match v {
        Value::Grouped(g, x) => Some((g, x)),
        _ => None,
    }
}

impl<I: Int> GroupAdjoined<I> {
    pub fn new(base: Semigroup<I>, group: GroupTag, probe: &Grid) -> Result<Self> {
        let ops = base.ops();
        let elems = ops.grid(probe);
        for y in elems.iter().filter(|y| !ops.is_compact(y)) {
            for z in &elems {
                let s = ops.add(y, z);
                if ops.is_compact(&s) {
                    return Err(CuError::NotAbsorbing(format!(
                        "{} + {}",
                        ops.render(y),
                        ops.render(z)
                    )));
                }
            }
        }
        Ok(GroupAdjoined { base, group })
    }

    fn is_zero(&self, v: &Value<I>) -> bool {
        *v == self.base.ops().zero()
    }

    /// Drops the group decoration.
    pub fn forget<'a>(&self, v: &'a Value<I>) -> &'a Value<I> {
        split(v).map(|(_, x)| x).unwrap_or(v)
    }

    fn lift(&self, x: Value<I>) -> Value<I> {
        if !self.is_zero(&x) && self.base.ops().is_compact(&x) {
            Value::Grouped(self.group.identity(), Box::new(x))
        } else {
            x
        }
    }
}

impl<I: Int> KindOps<I> for GroupAdjoined<I> {
    fn label(&self) -> String {
        format!("{}_G{:?}", self.base.label(), self.group.factors)
    }

    fn zero(&self) -> Value<I> {
        self.base.ops().zero()
    }

    fn normalize(&self, v: Value<I>) -> Result<Value<I>> {
        let b = self.base.ops();
        match v {
            Value::Grouped(g, x) => {
                let x = b.normalize(*x)?;
                if self.is_zero(&x) || !b.is_compact(&x) {
                    return Err(CuError::InvalidElement(
                        "group decoration needs a nonzero compact".into(),
                    ));
                }
                Ok(Value::Grouped(self.group.reduce(&g)?, Box::new(x)))
            }
            x => Ok(self.lift(b.normalize(x)?)),
        }
    }

    fn leq(&self, a: &Value<I>, b: &Value<I>) -> bool {
        let o = self.base.ops();
        match (split(a), split(b)) {
            (Some((g, x)), Some((h, y))) => (x == y && g == h) || (x != y && o.leq(x, y)),
            _ => o.leq(self.forget(a), self.forget(b)),
        }
    }

    fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        let o = self.base.ops();
        if self.is_zero(a) {
            return b.clone();
        }
        if self.is_zero(b) {
            return a.clone();
        }
        match (split(a), split(b)) {
            (Some((g, x)), Some((h, y))) => {
                Value::Grouped(self.group.add(g, h), Box::new(o.add(x, y)))
            }
            _ => o.add(self.forget(a), self.forget(b)),
        }
    }

    fn way_below(&self, a: &Value<I>, b: &Value<I>) -> bool {
        if split(a).is_some() || self.is_zero(a) {
            return KindOps::<I>::leq(self, a, b);
        }
        self.base.ops().way_below(a, self.forget(b))
    }

    fn approx(&self, a: &Value<I>, k: u32) -> Value<I> {
        if split(a).is_some() {
            return a.clone();
        }
        self.lift(self.base.ops().approx(a, k))
    }

    fn approx_start(&self, a: &Value<I>) -> u32 {
        self.base.ops().approx_start(self.forget(a))
    }

    fn infinity(&self, a: &Value<I>) -> Result<Value<I>> {
        self.base.ops().infinity(self.forget(a))
    }

    fn grid(&self, g: &Grid) -> Vec<Value<I>> {
        let b = self.base.ops();
        let mut out = Vec::new();
        for x in b.grid(g) {
            if !self.is_zero(&x) && b.is_compact(&x) {
                for h in self.group.sample() {
                    out.push(Value::Grouped(h, Box::new(x.clone())));
                }
            } else {
                out.push(x);
            }
        }
        out
    }

    fn render(&self, v: &Value<I>) -> String {
        let b = self.base.ops();
        match split(v) {
            Some((g, x)) => format!("<{}>{}", join(g, |n| n.to_string()), b.render(x)),
            None => b.render(v),
        }
    }

    /// `<g1,…>x` for decorated compacts; a bare compact gets the identity.
    fn parse(&self, c: &mut Cursor<'_>) -> Result<Value<I>> {
        if c.peek() == Some('<') {
            let g = c.list("<", ">", |c| c.integer())?;
            let x = self.base.ops().parse(c)?;
            return Ok(Value::Grouped(g, Box::new(x)));
        }
        self.base.ops().parse(c)
    }

    fn is_cu(&self) -> bool {
        self.base.ops().is_cu()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// `N × Z` with componentwise addition and `(r,e) ≤ (r',e')` iff equal or `r' ≥ r+2`.
///
/// Not a Cu-semigroup (no suprema); it is a positively ordered monoid for the
/// perforation and interpolation checks.
#[derive(Clone, Debug)]
pub struct GapModel;

pub(crate) fn gap_parts<I: Int>(v: &Value<I>) -> (i64, i64) {
    match v {
        Value::Grouped(e, r) => match r.as_ref() {
            Value::Compact(q) => (crate::scalar::to_i64(q).unwrap_or(0), e[0]),
            _ => (0, 0),
        },
        _ => (0, 0),
    }
}

pub(crate) fn gap_value<I: Int>(r: i64, e: i64) -> Value<I> {
    Value::Grouped(vec![e], Box::new(Value::Compact(int(r))))
}

impl<I: Int> KindOps<I> for GapModel {
    fn label(&self) -> String {
        "gap".into()
    }

    fn zero(&self) -> Value<I> {
        gap_value(0, 0)
    }

    fn normalize(&self, v: Value<I>) -> Result<Value<I>> {
        match &v {
            Value::Grouped(e, r) if e.len() == 1 => match r.as_ref() {
                Value::Compact(q) if q.is_integer() && !(*q < num_rational::Ratio::zero()) => Ok(v),
                _ => Err(CuError::InvalidElement(
                    "rank must be a natural number".into(),
                )),
            },
            _ => Err(CuError::InvalidElement("expected (r, e)".into())),
        }
    }

    fn leq(&self, a: &Value<I>, b: &Value<I>) -> bool {
        let ((r, e), (s, f)) = (gap_parts(a), gap_parts(b));
        (r == s && e == f) || s >= r + 2
    }

    fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        let ((r, e), (s, f)) = (gap_parts(a), gap_parts(b));
        gap_value(r + s, e + f)
    }

    fn way_below(&self, a: &Value<I>, b: &Value<I>) -> bool {
        KindOps::<I>::leq(self, a, b)
    }

    fn approx(&self, a: &Value<I>, _k: u32) -> Value<I> {
        a.clone()
    }

    fn infinity(&self, _a: &Value<I>) -> Result<Value<I>> {
        Err(CuError::Unsupported(
            "the gap monoid has no infinite multiples".into(),
        ))
    }

    fn grid(&self, g: &Grid) -> Vec<Value<I>> {
        let v = g.max_value;
        (0..=v)
            .flat_map(|r| (-v..=v).map(move |e| gap_value(r, e)))
            .collect()
    }

    fn scalar(&self, a: &Value<I>) -> Option<crate::scalar::ExtValue<I>> {
        Some(crate::scalar::ExtValue::int(gap_parts(a).0))
    }

    fn render(&self, v: &Value<I>) -> String {
        let (r, e) = gap_parts(v);
        format!("({r},{e})")
    }

    fn parse(&self, c: &mut Cursor<'_>) -> Result<Value<I>> {
        let xs = c.list("(", ")", |c| c.integer())?;
        if xs.len() != 2 {
            return Err(c.error("expected (r, e)"));
        }
        Ok(gap_value(xs[0], xs[1]))
    }

    fn is_cu(&self) -> bool {
        false
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{adjoin_group, gap_model, make_finite_table, softened, FiniteTable};

    #[test]
    fn decorated_compacts() {
        let s = adjoin_group::<i128>(softened(1), GroupTag::cyclic(2)).unwrap();
        let e = |t: &str| s.parse(t).unwrap();
        assert_eq!(s.add(&e("<1>c:1"), &e("s:1")).unwrap(), e("s:2"));
        assert!(!s.leq(&e("<0>c:1"), &e("<1>c:1")).unwrap());
        assert!(!s.leq(&e("<1>c:1"), &e("<0>c:1")).unwrap());
        assert!(s.leq(&e("<1>c:1"), &e("<0>c:2")).unwrap());
        assert_eq!(e("<3>c:1"), e("<1>c:1"));
        assert_eq!(s.add(&e("<1>c:1"), &e("<1>c:1")).unwrap(), e("<0>c:2"));
    }

    #[test]
    fn trivial_group_changes_nothing() {
        let base = softened::<i128>(1);
        let s = adjoin_group(base.clone(), GroupTag::trivial()).unwrap();
        let g = Grid::new(3, 2);
        let a = s.grid(&g);
        let b = base.grid(&g);
        assert_eq!(a.len(), b.len());
        let strip = |v: &Value<i128>| match v {
            Value::Grouped(_, x) => (**x).clone(),
            _ => v.clone(),
        };
        for x in &a {
            for y in &a {
                let (bx, by) = (
                    base.element(strip(x.value())).unwrap(),
                    base.element(strip(y.value())).unwrap(),
                );
                assert_eq!(s.leq(x, y).unwrap(), base.leq(&bx, &by).unwrap());
            }
        }
    }

    #[test]
    fn non_absorbing_base_is_rejected() {
        // in {0,1,∞} every element is compact, so the check passes vacuously
        let t = make_finite_table::<i128>(FiniteTable::zero_one_infinity()).unwrap();
        assert!(adjoin_group(t, GroupTag::cyclic(2)).is_ok());
    }

    #[test]
    fn gap_order() {
        let s = gap_model::<i128>();
        let e = |t: &str| s.parse(t).unwrap();
        assert!(s.leq(&e("(4,4)"), &e("(6,0)")).unwrap());
        assert!(!s.leq(&e("(1,1)"), &e("(2,0)")).unwrap());
        assert!(s.leq(&e("(1,1)"), &e("(1,1)")).unwrap());
    }
}
