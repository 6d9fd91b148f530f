//! Ideals and quotients.
//!
//! Every ideal handled here has a largest element `e` with `e + e = e`
//! (for a generated ideal, `e = ∞_a`). Then `a ≤_I b` iff `a ≤ b + e`, and the
//! classes of `S/I` are represented by the elements `a + e`.

use std::any::Any;

use crate::constructions::product::{coords, CuProduct};
use crate::error::{CuError, Result};
use crate::order::{Element, Grid, KindOps, Semigroup, Value};
use crate::scalar::Int;
use crate::text::Cursor;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal<I: Int> {
    pub ambient: Semigroup<I>,
    /// Largest element of the ideal.
    pub top: Element<I>,
    pub generator: Option<Element<I>>,
}

impl<I: Int> Ideal<I> {
    pub fn generated(s: &Semigroup<I>, a: &Element<I>) -> Result<Self> {
        let top = s.infinity_of(a)?;
        Ok(Ideal {
            ambient: s.clone(),
            top,
            generator: Some(a.clone()),
        })
    }

    pub fn zero(s: &Semigroup<I>) -> Self {
        Ideal {
            ambient: s.clone(),
            top: s.zero(),
            generator: Some(s.zero()),
        }
    }

    /// The ideal `{x : x ≤ e}` for an idempotent `e`.
    pub fn from_top(s: &Semigroup<I>, e: Element<I>) -> Result<Self> {
        if s.add(&e, &e)? != e {
            return Err(CuError::NotIdeal(format!(
                "{} is not idempotent",
                s.render(&e)
            )));
        }
        Ok(Ideal {
            ambient: s.clone(),
            top: e,
            generator: None,
        })
    }

    /// Validates a membership predicate on `probe` and returns the ideal it describes there.
    pub fn from_predicate(
        s: &Semigroup<I>,
        member: impl Fn(&Element<I>) -> bool,
        probe: &[Element<I>],
    ) -> Result<Self> {
        let inside: Vec<&Element<I>> = probe.iter().filter(|x| member(x)).collect();
        for x in &inside {
            for y in probe {
                if s.leq(y, x)? && !member(y) {
                    return Err(CuError::NotIdeal(format!(
                        "{} ≤ {} but only the latter is a member",
                        s.render(y),
                        s.render(x)
                    )));
                }
            }
            for y in &inside {
                if !member(&s.add(x, y)?) {
                    return Err(CuError::NotIdeal(format!(
                        "not closed under {} + {}",
                        s.render(x),
                        s.render(y)
                    )));
                }
            }
            let inf = s.infinity_of(x)?;
            if !member(&inf) {
                return Err(CuError::NotIdeal(format!(
                    "not closed under suprema at {}",
                    s.render(&inf)
                )));
            }
        }
        let mut top = s.zero();
        for x in &inside {
            top = s.add(&top, &s.infinity_of(x)?)?;
        }
        if !member(&top) {
            return Err(CuError::NotIdeal(
                "members have no common bound in the ideal".into(),
            ));
        }
        Ok(Ideal {
            ambient: s.clone(),
            top,
            generator: None,
        })
    }

    pub fn contains(&self, x: &Element<I>) -> Result<bool> {
        self.ambient.leq(x, &self.top)
    }

    /// `a ≤_I b`: some `c ∈ I` has `a ≤ b + c`.
    pub fn leq_mod(&self, a: &Element<I>, b: &Element<I>) -> Result<bool> {
        self.ambient.leq(a, &self.ambient.add(b, &self.top)?)
    }
}

/// The sum of the infinities of a small grid: the top of the semigroup when it has one.
pub fn largest_idempotent<I: Int>(s: &Semigroup<I>) -> Result<Element<I>> {
    let mut top = s.zero();
    for x in s.grid(&Grid::new(1, 1)) {
        top = s.add(&top, &s.infinity_of(&x)?)?;
    }
    Ok(top)
}

pub fn ideal_generated<I: Int>(s: &Semigroup<I>, a: &Element<I>) -> Result<Ideal<I>> {
    Ideal::generated(s, a)
}

#[derive(Clone, Debug)]
pub struct Quotient<I: Int> {
    pub base: Semigroup<I>,
    pub ideal: Ideal<I>,
}

/// `[a] ≪ [b]` in `S/I`: `a ≤ b_n + e` for an approximant `b_n` of `b`.
fn way_below_mod<I: Int>(ops: &dyn KindOps<I>, a: &Value<I>, b: &Value<I>, e: &Value<I>) -> bool {
    if let Some(p) = ops.as_any().downcast_ref::<CuProduct<I>>() {
        return p
            .factors
            .iter()
            .zip(coords(a).iter().zip(coords(b)).zip(coords(e)))
            .all(|(s, ((x, y), z))| way_below_mod(s.ops(), x, y, z));
    }
    if *e == ops.zero() {
        return ops.way_below(a, b);
    }
    if ops.leq(a, e) {
        return true;
    }
    if ops.is_compact(b) {
        return ops.leq(a, &ops.add(b, e));
    }
    let start = ops.approx_start(b);
    (start..start + 64).any(|k| ops.leq(a, &ops.add(&ops.approx(b, k), e)))
}

impl<I: Int> Quotient<I> {
    fn e(&self) -> &Value<I> {
        self.ideal.top.value()
    }

    /// Class representative of an element of the ambient semigroup.
    pub fn class_of(&self, a: &Element<I>) -> Result<Value<I>> {
        self.base.owns(a)?;
        Ok(self.base.ops().add(a.value(), self.e()))
    }
}

impl<I: Int> KindOps<I> for Quotient<I> {
    fn label(&self) -> String {
        format!(
            "{}/<{}>",
            self.base.label(),
            self.base.render(&self.ideal.top)
        )
    }

    fn zero(&self) -> Value<I> {
        self.e().clone()
    }

    fn normalize(&self, v: Value<I>) -> Result<Value<I>> {
        let b = self.base.ops();
        Ok(b.add(&b.normalize(v)?, self.e()))
    }

    fn leq(&self, a: &Value<I>, b: &Value<I>) -> bool {
        self.base.ops().leq(a, b)
    }

    fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        self.base.ops().add(a, b)
    }

    fn way_below(&self, a: &Value<I>, b: &Value<I>) -> bool {
        way_below_mod(self.base.ops(), a, b, self.e())
    }

    fn approx(&self, a: &Value<I>, k: u32) -> Value<I> {
        let b = self.base.ops();
        b.add(&b.approx(a, k), self.e())
    }

    fn approx_start(&self, a: &Value<I>) -> u32 {
        self.base.ops().approx_start(a)
    }

    fn infinity(&self, a: &Value<I>) -> Result<Value<I>> {
        self.base.ops().infinity(a)
    }

    fn grid(&self, g: &Grid) -> Vec<Value<I>> {
        let b = self.base.ops();
        let mut out: Vec<Value<I>> = Vec::new();
        for v in b.grid(g) {
            let r = b.add(&v, self.e());
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }

    fn render(&self, v: &Value<I>) -> String {
        format!("[{}]", self.base.ops().render(v))
    }

    fn parse(&self, c: &mut Cursor<'_>) -> Result<Value<I>> {
        if c.eat("[") {
            let v = self.base.ops().parse(c)?;
            c.expect("]")?;
            return Ok(v);
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

pub fn quotient<I: Int>(s: &Semigroup<I>, ideal: &Ideal<I>) -> Result<Semigroup<I>> {
    if ideal.ambient != *s {
        return Err(CuError::MixedSemigroup);
    }
    Ok(Semigroup::from_ops(Quotient {
        base: s.clone(),
        ideal: ideal.clone(),
    }))
}
