//! N̄ and the softened semigroups `D ⊔ (0,∞]` with `D = N[1/m]`.

use std::any::Any;

use num_traits::{One, Zero};

use crate::error::{CuError, Result};
use crate::order::{Grid, KindOps, Value};
use crate::scalar::{fmt_rational, in_dyadic_like, int, pow2_inv, rat, ExtValue, Int, Ratio};
use crate::text::Cursor;

/// `soft = false`: `D ∪ {∞}` (N̄ when `m = 1`); `soft = true`: `D ⊔ (0,∞]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub m: u64,
    pub soft: bool,
}

impl Chain {
    fn in_d<I: Int>(&self, q: &Ratio<I>) -> bool {
        *q >= Ratio::zero() && in_dyadic_like(q, self.m)
    }

    /// Denominators `d ≤ max` whose prime factors divide `m`.
    fn dens(&self, max: i64) -> Vec<i64> {
        (1..=max.max(1))
            .filter(|d| in_dyadic_like(&rat::<i64>(1, *d), self.m))
            .collect()
    }
}

fn scal<I: Int>(v: &Value<I>) -> ExtValue<I> {
    match v {
        Value::Compact(q) => ExtValue::Finite(q.clone()),
        Value::Soft(x) => x.clone(),
        _ => unreachable!("chain payload"),
    }
}

/// Order of the softened rules: `s_x ≤ c_y ⇔ x ≤ y`, `c_x ≤ s_y ⇔ x < y`.
pub(crate) fn soft_leq<I: Int>(a: &Value<I>, b: &Value<I>) -> bool {
    match (a, b) {
        (Value::Compact(x), Value::Compact(y)) => x <= y,
        (Value::Soft(x), Value::Compact(y)) => *x <= ExtValue::Finite(y.clone()),
        (Value::Compact(x), Value::Soft(y)) => x.is_zero() || ExtValue::Finite(x.clone()) < *y,
        (Value::Soft(x), Value::Soft(y)) => x <= y,
        _ => false,
    }
}

pub(crate) fn soft_add<I: Int>(a: &Value<I>, b: &Value<I>) -> Value<I> {
    match (a, b) {
        (Value::Compact(x), Value::Compact(y)) => Value::Compact(x + y),
        _ => Value::Soft(&scal(a) + &scal(b)),
    }
}

pub(crate) fn soft_way_below<I: Int>(a: &Value<I>, b: &Value<I>) -> bool {
    match (a, b) {
        (Value::Compact(_), _) => soft_leq(a, b),
        (Value::Soft(ExtValue::Infinite), _) => false,
        (Value::Soft(x), Value::Compact(y)) => *x <= ExtValue::Finite(y.clone()),
        (Value::Soft(x), Value::Soft(y)) => x < y,
        _ => false,
    }
}

/// `k`-th approximant of a soft value: `s_{x(1-2^-k)}`, or `s_k` for `x = ∞`.
pub(crate) fn soft_approx<I: Int>(x: &ExtValue<I>, k: u32) -> ExtValue<I> {
    match x {
        ExtValue::Finite(q) => ExtValue::Finite(q * (Ratio::one() - pow2_inv::<I>(k))),
        ExtValue::Infinite => ExtValue::Finite(int(k as i64)),
    }
}

impl<I: Int> KindOps<I> for Chain {
    fn label(&self) -> String {
        match (self.soft, self.m) {
            (false, 1) => "nbar".into(),
            (false, m) => format!("nbar({m})"),
            (true, m) => format!("softened({m})"),
        }
    }

    fn zero(&self) -> Value<I> {
        Value::zero_scalar()
    }

    fn normalize(&self, v: Value<I>) -> Result<Value<I>> {
        match &v {
            Value::Compact(q) if self.in_d(q) => Ok(v),
            Value::Compact(q) => Err(CuError::InvalidElement(format!(
                "{} is not in the compact part of {}",
                fmt_rational(q),
                KindOps::<I>::label(self)
            ))),
            Value::Soft(ExtValue::Infinite) => Ok(v),
            Value::Soft(ExtValue::Finite(q)) if self.soft && *q > Ratio::zero() => Ok(v),
            Value::Soft(_) if self.soft => {
                Err(CuError::InvalidElement("s_0 is not an element".into()))
            }
            _ => Err(CuError::InvalidElement(format!(
                "{v:?} in {}",
                KindOps::<I>::label(self)
            ))),
        }
    }

    fn leq(&self, a: &Value<I>, b: &Value<I>) -> bool {
        soft_leq(a, b)
    }

    fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        soft_add(a, b)
    }

    fn way_below(&self, a: &Value<I>, b: &Value<I>) -> bool {
        soft_way_below(a, b)
    }

    fn wedge(&self, a: &Value<I>, b: &Value<I>) -> Option<Value<I>> {
        Some(if soft_leq(a, b) { a.clone() } else { b.clone() })
    }

    fn approx(&self, a: &Value<I>, k: u32) -> Value<I> {
        match a {
            Value::Soft(ExtValue::Infinite) if !self.soft => Value::Compact(int(k as i64)),
            Value::Soft(x) => Value::Soft(soft_approx(x, k)),
            _ => a.clone(),
        }
    }

    fn infinity(&self, a: &Value<I>) -> Result<Value<I>> {
        Ok(if scal(a).is_zero() {
            self.zero()
        } else {
            Value::Soft(ExtValue::Infinite)
        })
    }

    fn grid(&self, g: &Grid) -> Vec<Value<I>> {
        let mut out = Vec::new();
        for d in self.dens(g.max_den) {
            for n in 0..=g.max_value * d {
                out.push(Value::Compact(rat(n, d)));
            }
        }
        if self.soft {
            let dens: Vec<i64> = if g.all_soft_dens {
                (1..=g.max_den.max(1)).collect()
            } else {
                self.dens(g.max_den)
            };
            for d in dens {
                for n in 1..=g.max_value * d {
                    out.push(Value::Soft(ExtValue::frac(n, d)));
                }
            }
        }
        out.push(Value::Soft(ExtValue::Infinite));
        out.sort_by(|a, b| {
            let ca = matches!(a, Value::Compact(_));
            let cb = matches!(b, Value::Compact(_));
            scal(a).cmp(&scal(b)).then(ca.cmp(&cb))
        });
        out.dedup();
        out
    }

    fn down_set(&self, a: &Value<I>) -> Option<Vec<Value<I>>> {
        match a {
            Value::Compact(q) if !self.soft && self.m == 1 => {
                let n = q.to_integer().to_i64()?;
                Some((0..=n).map(|k| Value::Compact(int(k))).collect())
            }
            _ => None,
        }
    }

    fn scalar(&self, a: &Value<I>) -> Option<ExtValue<I>> {
        Some(scal(a))
    }

    fn render(&self, v: &Value<I>) -> String {
        match (self.soft, v) {
            (false, Value::Compact(q)) => fmt_rational(q),
            (false, Value::Soft(_)) => "inf".into(),
            (true, Value::Compact(q)) => format!("c:{}", fmt_rational(q)),
            (true, Value::Soft(x)) => format!("s:{x}"),
            _ => format!("{v:?}"),
        }
    }

    fn parse(&self, c: &mut Cursor<'_>) -> Result<Value<I>> {
        if c.eat("c:") {
            return Ok(Value::Compact(c.rational()?));
        }
        if c.eat("s:") {
            return Ok(Value::Soft(c.ext()?));
        }
        match c.ext::<I>()? {
            ExtValue::Infinite => Ok(Value::Soft(ExtValue::Infinite)),
            ExtValue::Finite(q) => Ok(Value::Compact(q)),
        }
    }

    fn is_cu(&self) -> bool {
        self.soft || self.m == 1
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
