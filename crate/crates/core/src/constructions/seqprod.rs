//! Described elements of the Cu-product of countably many copies of N̄.
//!
//! Compact elements are functions `N → N` given by a finite prefix and an
//! affine tail. The only non-compact elements represented are
//! `sup_n (b + n·1_A)`: they are `∞` on `A`, `b` off `A`, and below them a
//! compact `u` must additionally satisfy `u − b` bounded on `A`. Only the
//! growth rate of `b` on `A` matters, so it is stored as `slope · j`.

use std::any::Any;

use crate::error::{CuError, Result};
use crate::order::{Grid, KindOps, Value};
use crate::scalar::Int;
use crate::text::Cursor;

/// `j ↦ prefix[j]` for `j < prefix.len()`, `j ↦ slope·j + offset` afterwards.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SeqFn {
    pub prefix: Vec<u64>,
    pub slope: u64,
    pub offset: u64,
}

impl SeqFn {
    pub fn new(prefix: Vec<u64>, slope: u64, offset: u64) -> Self {
        SeqFn {
            prefix,
            slope,
            offset,
        }
        .canonical()
    }

    pub fn constant(c: u64) -> Self {
        SeqFn::new(vec![], 0, c)
    }

    pub fn identity() -> Self {
        SeqFn::new(vec![], 1, 0)
    }

    /// Indicator of a finite set of indices.
    pub fn finite_indicator(idx: &[usize]) -> Self {
        let n = idx.iter().max().map(|m| m + 1).unwrap_or(0);
        SeqFn::new((0..n).map(|j| idx.contains(&j) as u64).collect(), 0, 0)
    }

    pub fn at(&self, j: usize) -> u64 {
        self.prefix
            .get(j)
            .copied()
            .unwrap_or(self.slope * j as u64 + self.offset)
    }

    fn tail_at(&self, j: usize) -> u64 {
        self.slope * j as u64 + self.offset
    }

    fn canonical(mut self) -> Self {
        while let Some(&last) = self.prefix.last() {
            if last == self.tail_at(self.prefix.len() - 1) {
                self.prefix.pop();
            } else {
                break;
            }
        }
        self
    }

    fn len(&self) -> usize {
        self.prefix.len()
    }

    /// Pointwise sum.
    pub fn add(&self, other: &SeqFn) -> SeqFn {
        let n = self.len().max(other.len());
        SeqFn::new(
            (0..n).map(|j| self.at(j) + other.at(j)).collect(),
            self.slope + other.slope,
            self.offset + other.offset,
        )
    }

    /// `u ≤ v` at every index where `mask` is 1.
    fn le_on(&self, other: &SeqFn, mask: &SeqFn) -> bool {
        let n = self.len().max(other.len()).max(mask.len());
        if !(0..n).all(|j| mask.at(j) == 0 || self.at(j) <= other.at(j)) {
            return false;
        }
        if mask.tail_at(n) == 0 && mask.slope == 0 {
            return true;
        }
        self.slope <= other.slope && self.tail_at(n) <= other.tail_at(n)
    }

    pub fn le(&self, other: &SeqFn) -> bool {
        self.le_on(other, &SeqFn::constant(1))
    }

    /// Indicator of `{j : u(j) ≠ 0}`.
    pub fn support(&self) -> SeqFn {
        let n = self.len() + 1;
        let tail = (self.slope > 0 || self.offset > 0) as u64;
        SeqFn::new((0..n).map(|j| (self.at(j) > 0) as u64).collect(), 0, tail)
    }

    pub fn union(&self, other: &SeqFn) -> SeqFn {
        let n = self.len().max(other.len());
        SeqFn::new(
            (0..n).map(|j| self.at(j).max(other.at(j))).collect(),
            0,
            self.offset.max(other.offset),
        )
    }

    fn complement(&self) -> SeqFn {
        let n = self.len();
        SeqFn::new((0..n).map(|j| 1 - self.at(j)).collect(), 0, 1 - self.offset)
    }

    fn is_indicator(&self) -> bool {
        self.slope == 0 && self.offset <= 1 && self.prefix.iter().all(|&x| x <= 1)
    }

    fn cofinite(&self) -> bool {
        self.offset == 1
    }

    fn is_zero(&self) -> bool {
        self.prefix.is_empty() && self.slope == 0 && self.offset == 0
    }

    /// `seq[p0, p1, …; slope, offset]`.
    pub fn render(&self) -> String {
        let p: Vec<String> = self.prefix.iter().map(|x| x.to_string()).collect();
        format!("seq[{}; {}, {}]", p.join(", "), self.slope, self.offset)
    }

    pub fn parse(c: &mut Cursor<'_>) -> Result<SeqFn> {
        c.expect("seq[")?;
        let mut prefix = Vec::new();
        if !c.eat(";") {
            loop {
                prefix.push(nat(c)?);
                if c.eat(";") {
                    break;
                }
                c.expect(",")?;
            }
        }
        let slope = nat(c)?;
        c.expect(",")?;
        let offset = nat(c)?;
        c.expect("]")?;
        Ok(SeqFn::new(prefix, slope, offset))
    }
}

fn nat(c: &mut Cursor<'_>) -> Result<u64> {
    let n = c.integer()?;
    u64::try_from(n).map_err(|_| CuError::BadDescriptor(format!("negative entry {n}")))
}

#[derive(Clone, Debug, Default)]
pub struct SeqProduct;

fn ray_canonical<I: Int>(base: SeqFn, supp: SeqFn) -> Value<I> {
    if supp.is_zero() {
        return Value::Seq(base);
    }
    let n = base.len().max(supp.len());
    let slope = if supp.cofinite() { base.slope } else { 0 };
    let prefix = (0..n)
        .map(|j| {
            if supp.at(j) == 1 {
                slope * j as u64
            } else {
                base.at(j)
            }
        })
        .collect();
    let base = if supp.cofinite() {
        SeqFn::new(prefix, slope, 0)
    } else {
        SeqFn::new(prefix, base.slope, base.offset)
    };
    Value::Ray(base, supp)
}

impl SeqProduct {
    pub fn ones() -> SeqFn {
        SeqFn::constant(1)
    }
}

impl<I: Int> KindOps<I> for SeqProduct {
    fn label(&self) -> String {
        "prod_j nbar".into()
    }

    fn zero(&self) -> Value<I> {
        Value::Seq(SeqFn::constant(0))
    }

    fn normalize(&self, v: Value<I>) -> Result<Value<I>> {
        match v {
            Value::Seq(u) => Ok(Value::Seq(u.canonical())),
            Value::Ray(b, s) => {
                let s = s.canonical();
                if !s.is_indicator() {
                    return Err(CuError::BadDescriptor(
                        "support must be a 0/1 sequence".into(),
                    ));
                }
                Ok(ray_canonical(b.canonical(), s))
            }
            _ => Err(CuError::BadDescriptor(format!("{v:?}"))),
        }
    }

    fn leq(&self, a: &Value<I>, b: &Value<I>) -> bool {
        match (a, b) {
            (Value::Seq(u), Value::Seq(v)) => u.le(v),
            (Value::Seq(u), Value::Ray(bv, sv)) => {
                u.le_on(bv, &sv.complement()) && (!sv.cofinite() || u.slope <= bv.slope)
            }
            (Value::Ray(_, _), Value::Seq(_)) => false,
            (Value::Ray(bu, su), Value::Ray(bv, sv)) => {
                su.le(sv)
                    && bu.le_on(bv, &sv.complement())
                    && (!sv.cofinite() || bu.slope <= bv.slope)
            }
            _ => false,
        }
    }

    fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        match (a, b) {
            (Value::Seq(u), Value::Seq(v)) => Value::Seq(u.add(v)),
            (Value::Seq(u), Value::Ray(bv, sv)) | (Value::Ray(bv, sv), Value::Seq(u)) => {
                ray_canonical(bv.add(u), sv.clone())
            }
            (Value::Ray(bu, su), Value::Ray(bv, sv)) => ray_canonical(bu.add(bv), su.union(sv)),
            _ => unreachable!("sequence product payload"),
        }
    }

    fn way_below(&self, a: &Value<I>, b: &Value<I>) -> bool {
        matches!(a, Value::Seq(_)) && KindOps::<I>::leq(self, a, b)
    }

    fn approx(&self, a: &Value<I>, k: u32) -> Value<I> {
        match a {
            Value::Ray(b, s) => {
                let ks = SeqFn::new(
                    s.prefix.iter().map(|x| x * k as u64).collect(),
                    0,
                    s.offset * k as u64,
                );
                Value::Seq(b.add(&ks))
            }
            _ => a.clone(),
        }
    }

    fn infinity(&self, a: &Value<I>) -> Result<Value<I>> {
        Ok(match a {
            Value::Seq(u) => ray_canonical(SeqFn::constant(0), u.support()),
            Value::Ray(b, s) => ray_canonical(SeqFn::constant(0), s.union(&b.support())),
            _ => return Err(CuError::BadDescriptor("not a sequence".into())),
        })
    }

    fn grid(&self, g: &Grid) -> Vec<Value<I>> {
        let v = g.max_value.max(0) as u64;
        let mut out = Vec::new();
        for p0 in 0..=v {
            for slope in 0..=1 {
                for offset in 0..=v {
                    out.push(Value::Seq(SeqFn::new(vec![p0], slope, offset)));
                }
            }
        }
        let supports = [
            SeqFn::finite_indicator(&[0]),
            SeqFn::new(vec![0], 0, 1),
            SeqFn::constant(1),
        ];
        for s in supports {
            for slope in 0..=1 {
                out.push(ray_canonical(SeqFn::new(vec![], slope, 0), s.clone()));
            }
        }
        out.dedup();
        out
    }

    fn render(&self, v: &Value<I>) -> String {
        match v {
            Value::Seq(u) => u.render(),
            Value::Ray(b, s) => format!("ray({}, {})", b.render(), s.render()),
            _ => format!("{v:?}"),
        }
    }

    fn parse(&self, c: &mut Cursor<'_>) -> Result<Value<I>> {
        if c.eat("ray(") {
            let b = SeqFn::parse(c)?;
            c.expect(",")?;
            let s = SeqFn::parse(c)?;
            c.expect(")")?;
            return Ok(Value::Ray(b, s));
        }
        Ok(Value::Seq(SeqFn::parse(c)?))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Membership in the scale generated by the bounded descriptors, i.e. below
/// `sup_n n·1`. The identity sequence is the standard element outside it.
pub fn in_bounded_scale<I: Int>(
    p: &crate::order::Semigroup<I>,
    x: &crate::order::Element<I>,
) -> Result<bool> {
    if p.kind::<SeqProduct>().is_none() {
        return Err(CuError::Unsupported(format!(
            "{} is not the sequence product",
            p.label()
        )));
    }
    let ones = p.element(Value::Seq(SeqProduct::ones()))?;
    p.leq(x, &p.infinity_of(&ones)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::seq_product_nbar;

    #[test]
    fn identity_sequence_escapes_every_multiple_of_ones() {
        let p = seq_product_nbar::<i128>();
        let g = p.element(Value::Seq(SeqFn::identity())).unwrap();
        let ones = p.element(Value::Seq(SeqProduct::ones())).unwrap();
        assert!(p.is_compact(&g).unwrap());
        for n in 0..=64 {
            assert!(!p.leq(&g, &p.multiple(&ones, n).unwrap()).unwrap());
        }
        let inf = p.infinity_of(&ones).unwrap();
        assert!(!p.leq(&g, &inf).unwrap());
        assert!(p.leq(&ones, &p.add(&g, &ones).unwrap()).unwrap());
        assert!(!in_bounded_scale(&p, &g).unwrap());
        assert!(in_bounded_scale(&p, &p.parse("seq[9, 0; 0, 5]").unwrap()).unwrap());
    }

    #[test]
    fn canonical_tails() {
        assert_eq!(SeqFn::new(vec![0, 1, 2], 1, 0), SeqFn::identity());
        assert_eq!(SeqFn::identity().support(), SeqFn::new(vec![0], 0, 1));
        assert_eq!(SeqFn::identity().at(7), 7);
    }

    #[test]
    fn text_round_trip() {
        let p = seq_product_nbar::<i128>();
        for t in [
            "seq[3, 0; 1, 2]",
            "ray(seq[; 0, 0], seq[1; 0, 0])",
            "ray(seq[; 1, 0], seq[0; 0, 1])",
        ] {
            let e = p.parse(t).unwrap();
            assert_eq!(p.render(&e), t);
        }
    }

    #[test]
    fn affine_descriptor_sup() {
        let p = seq_product_nbar::<i128>();
        let ones = p.element(Value::Seq(SeqProduct::ones())).unwrap();
        let d = crate::SequenceDescriptor::affine(vec![], p.zero(), ones.clone());
        assert_eq!(p.sup(&d).unwrap(), p.infinity_of(&ones).unwrap());
    }
}
