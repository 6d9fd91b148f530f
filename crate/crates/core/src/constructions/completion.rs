//! γ- and τ-completions of W-semigroups with an auxiliary relation.
//!
//! Classes of ≺-increasing sequences (or paths) are recognized in two shapes:
//! eventually constant at some `x ≺ x` (stored as `Const(x)`) and strictly
//! ascending towards a limit (stored as `Limit(x)`). Anything else is rejected.

use std::any::Any;

use num_traits::Zero;

use crate::catalog::TableKind;
use crate::error::{CuError, Result};
use crate::order::{Grid, KindOps, Semigroup, Value};
use crate::scalar::{fmt_rational, in_dyadic_like, int, rat, ExtValue, Int, Ratio};
use crate::text::Cursor;

/// Underlying monoid of a W-semigroup.
#[derive(Clone, Debug)]
pub enum WCarrier<I: Int> {
    /// `D = N[1/m]` (all nonnegative rationals for `m = 0`), with `∞` adjoined when `top`.
    Scalars { m: u64, top: bool },
    /// A catalog handle or a finite table.
    Handle(Semigroup<I>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AuxRel {
    Leq,
    /// `a ≺ b` iff `a < ∞` and `a ≤ b`.
    FiniteLeq,
    WayBelow,
    /// Explicit relation on the rows of a finite table.
    Matrix(Vec<Vec<bool>>),
}

#[derive(Clone, Debug)]
pub struct WSemigroup<I: Int> {
    pub carrier: WCarrier<I>,
    pub aux: AuxRel,
}

fn ext<I: Int>(v: &Value<I>) -> ExtValue<I> {
    match v {
        Value::Compact(q) => ExtValue::Finite(q.clone()),
        _ => ExtValue::Infinite,
    }
}

fn from_ext<I: Int>(e: ExtValue<I>) -> Value<I> {
    match e {
        ExtValue::Finite(q) => Value::Compact(q),
        ExtValue::Infinite => Value::Soft(ExtValue::Infinite),
    }
}

fn inner<I: Int>(v: &Value<I>) -> &Value<I> {
    match v {
        Value::Const(x) | Value::Limit(x) => x,
        _ => v,
    }
}

impl<I: Int> WSemigroup<I> {
    /// Validates the auxiliary axioms on a probe of the carrier.
    pub fn new(carrier: WCarrier<I>, aux: AuxRel) -> Result<Self> {
        let shape_ok = match (&carrier, &aux) {
            (WCarrier::Scalars { .. }, AuxRel::Matrix(_)) => false,
            (WCarrier::Handle(_), AuxRel::FiniteLeq) => false,
            (WCarrier::Handle(s), AuxRel::Leq | AuxRel::Matrix(_)) => {
                s.kind::<TableKind>().is_some()
            }
            _ => true,
        };
        if !shape_ok {
            return Err(CuError::BadParam(format!(
                "relation {aux:?} is not available on this carrier"
            )));
        }
        let w = WSemigroup { carrier, aux };
        w.validate()?;
        Ok(w)
    }

    pub fn scalars(m: u64, top: bool, aux: AuxRel) -> Result<Self> {
        WSemigroup::new(WCarrier::Scalars { m, top }, aux)
    }

    fn dense(&self) -> bool {
        matches!(self.carrier, WCarrier::Scalars { m, .. } if m != 1)
    }

    pub fn contains(&self, v: &Value<I>) -> bool {
        match &self.carrier {
            WCarrier::Scalars { m, top } => match v {
                Value::Compact(q) => *q >= Ratio::zero() && in_dyadic_like(q, *m),
                Value::Soft(ExtValue::Infinite) => *top,
                _ => false,
            },
            WCarrier::Handle(s) => s.ops().normalize(v.clone()).is_ok(),
        }
    }

    pub fn leq(&self, a: &Value<I>, b: &Value<I>) -> bool {
        match &self.carrier {
            WCarrier::Scalars { .. } => ext(a) <= ext(b),
            WCarrier::Handle(s) => s.ops().leq(a, b),
        }
    }

    pub fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        match &self.carrier {
            WCarrier::Scalars { .. } => from_ext(ext(a) + ext(b)),
            WCarrier::Handle(s) => s.ops().add(a, b),
        }
    }

    pub fn prec(&self, a: &Value<I>, b: &Value<I>) -> bool {
        match (&self.carrier, &self.aux) {
            (_, AuxRel::Leq) => self.leq(a, b),
            (WCarrier::Scalars { .. }, _) => ext(a).is_finite() && self.leq(a, b),
            (WCarrier::Handle(s), AuxRel::WayBelow) => s.ops().way_below(a, b),
            (WCarrier::Handle(_), AuxRel::Matrix(m)) => match (a, b) {
                (Value::Index(i), Value::Index(j)) => {
                    m.get(*i).and_then(|r| r.get(*j)).copied().unwrap_or(false)
                }
                _ => false,
            },
            _ => false,
        }
    }

    pub fn probe(&self) -> Vec<Value<I>> {
        match &self.carrier {
            WCarrier::Scalars { m, top } => {
                let mut out: Vec<Value<I>> = Vec::new();
                for d in 1..=4 {
                    for n in 0..=3 * d {
                        let q = rat::<I>(n, d);
                        if in_dyadic_like(&q, *m) && !out.contains(&Value::Compact(q.clone())) {
                            out.push(Value::Compact(q));
                        }
                    }
                }
                if *top {
                    out.push(Value::Soft(ExtValue::Infinite));
                }
                out
            }
            WCarrier::Handle(s) => s.ops().grid(&Grid::new(3, 2)),
        }
    }

    fn validate(&self) -> Result<()> {
        let p = self.probe();
        let bad = |m: String| Err(CuError::NotAuxiliary(m));
        if let AuxRel::Matrix(m) = &self.aux {
            if m.len() != p.len() || m.iter().any(|r| r.len() != p.len()) {
                return bad("relation matrix has the wrong shape".into());
            }
        }
        let zero = match &self.carrier {
            WCarrier::Scalars { .. } => Value::zero_scalar(),
            WCarrier::Handle(s) => s.ops().zero(),
        };
        for a in &p {
            if !self.prec(&zero, a) {
                return bad(format!("0 ≺ {a:?} fails"));
            }
            for b in &p {
                if !self.prec(a, b) {
                    continue;
                }
                if !self.leq(a, b) {
                    return bad(format!("{a:?} ≺ {b:?} without {a:?} ≤ {b:?}"));
                }
                for x in p.iter().filter(|x| self.leq(x, a)) {
                    for y in p.iter().filter(|y| self.leq(b, y)) {
                        if !self.prec(x, y) {
                            return bad(format!(
                                "{x:?} ≤ {a:?} ≺ {b:?} ≤ {y:?} but not {x:?} ≺ {y:?}"
                            ));
                        }
                    }
                }
                for c in &p {
                    for d in p.iter().filter(|d| self.prec(c, d)) {
                        let (l, r) = (self.add(a, c), self.add(b, d));
                        if !self.prec(&l, &r) {
                            return bad(format!("≺ is not additive at {a:?}+{c:?}, {b:?}+{d:?}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Tail of an increasing sequence over a W-semigroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WTail<I: Int> {
    /// Constant at the last prefix entry.
    Constant,
    /// Strictly ascending with the given supremum.
    Ascending(Value<I>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WSequence<I: Int> {
    pub prefix: Vec<Value<I>>,
    pub tail: WTail<I>,
}

/// Behaviour of a path `(-∞, 0] → S` just before 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathTail {
    ConstantNearZero,
    AscendingToZero,
}

/// Samples of a path at decreasing times `0 = t_0 > t_1 > …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathDescriptor<I: Int> {
    pub times: Vec<Ratio<I>>,
    pub values: Vec<Value<I>>,
    pub tail: PathTail,
}

#[derive(Clone, Debug)]
pub struct Completion<I: Int> {
    pub w: WSemigroup<I>,
    /// τ (paths) instead of γ (sequences); only the label differs.
    pub paths: bool,
}

impl<I: Int> Completion<I> {
    fn handle(&self) -> Option<&Semigroup<I>> {
        match &self.w.carrier {
            WCarrier::Handle(s) => Some(s),
            _ => None,
        }
    }

    fn by_way_below(&self) -> bool {
        self.handle().is_some() && self.w.aux == AuxRel::WayBelow
    }

    fn canonical(&self, v: Value<I>) -> Result<Value<I>> {
        let unrec = |why: &str| Err(CuError::UnrecognizedClass(why.into()));
        match (&v, self.handle()) {
            (Value::Const(x) | Value::Limit(x), Some(s)) if self.by_way_below() => {
                let x = s.ops().normalize((**x).clone())?;
                Ok(if s.ops().is_compact(&x) {
                    Value::Const(Box::new(x))
                } else {
                    Value::Limit(Box::new(x))
                })
            }
            (Value::Const(x), _) => {
                if !self.w.contains(x) {
                    return Err(CuError::InvalidElement(format!(
                        "{x:?} is not in the carrier"
                    )));
                }
                if !self.w.prec(x, x) {
                    return unrec("a constant sequence at x needs x ≺ x");
                }
                Ok(v)
            }
            (Value::Limit(x), None) => match ext(x) {
                ExtValue::Finite(q) if q.is_zero() => {
                    unrec("no strictly ascending sequence tends to 0")
                }
                ExtValue::Finite(q) if q < Ratio::zero() => unrec("negative limit"),
                ExtValue::Finite(_) if !self.w.dense() => {
                    unrec("strictly ascending sequences in N are unbounded")
                }
                _ => Ok(v),
            },
            _ => unrec("only eventually constant or ascending classes are recognized"),
        }
    }

    /// Class of a ≺-increasing sequence.
    pub fn class_of_sequence(&self, s: &WSequence<I>) -> Result<Value<I>> {
        for (j, w) in s.prefix.windows(2).enumerate() {
            if !self.w.prec(&w[0], &w[1]) {
                return Err(CuError::NotIncreasing(j + 1));
            }
        }
        match &s.tail {
            WTail::Constant => {
                let last = s
                    .prefix
                    .last()
                    .ok_or_else(|| CuError::BadDescriptor("constant tail needs a prefix".into()))?;
                self.canonical(Value::Const(Box::new(last.clone())))
            }
            WTail::Ascending(limit) => {
                if let Some(last) = s.prefix.last() {
                    if !self.w.leq(last, limit) || last == limit {
                        return Err(CuError::NotIncreasing(s.prefix.len()));
                    }
                }
                self.canonical(Value::Limit(Box::new(limit.clone())))
            }
        }
    }

    /// Class of a path; ≺ must hold between the values at any two sample times.
    pub fn class_of_path(&self, p: &PathDescriptor<I>) -> Result<Value<I>> {
        if p.times.is_empty() || p.times.len() != p.values.len() || !p.times[0].is_zero() {
            return Err(CuError::BadDescriptor(
                "a path is sampled at 0 = t_0 > t_1 > …".into(),
            ));
        }
        for (j, w) in p.times.windows(2).enumerate() {
            if w[1] >= w[0] {
                return Err(CuError::BadDescriptor(format!(
                    "sample time {} does not decrease",
                    j + 1
                )));
            }
            if !self.w.prec(&p.values[j + 1], &p.values[j]) {
                return Err(CuError::NotIncreasing(j + 1));
            }
        }
        let v0 = p.values[0].clone();
        match p.tail {
            PathTail::ConstantNearZero => self.canonical(Value::Const(Box::new(v0))),
            PathTail::AscendingToZero => self.canonical(Value::Limit(Box::new(v0))),
        }
    }

    fn wrap_handle(&self, s: &Semigroup<I>, x: Value<I>) -> Value<I> {
        if s.ops().is_compact(&x) {
            Value::Const(Box::new(x))
        } else {
            Value::Limit(Box::new(x))
        }
    }

    /// `k`-th approximant of a scalar limit `l`: the largest `y < l` in `D` with denominator `b^k`.
    fn scalar_approx(&self, l: &ExtValue<I>, k: u32) -> Value<I> {
        let q = match l {
            ExtValue::Infinite => int(k as i64),
            ExtValue::Finite(l) => {
                let b = match self.w.carrier {
                    WCarrier::Scalars { m, .. } if m >= 2 => m as i64,
                    _ => 2,
                };
                let mut den = I::one();
                for _ in 0..k {
                    den = den * I::from_i64(b).expect("base fits");
                }
                let scaled = l * Ratio::from_integer(den.clone());
                Ratio::new(scaled.ceil().to_integer() - I::one(), den)
            }
        };
        Value::Const(Box::new(Value::Compact(q.max(Ratio::zero()))))
    }
}

impl<I: Int> KindOps<I> for Completion<I> {
    fn label(&self) -> String {
        let base = match &self.w.carrier {
            WCarrier::Scalars { m: 0, top } => format!("Q+{}", if *top { "∪{inf}" } else { "" }),
            WCarrier::Scalars { m: 1, top } => format!("N{}", if *top { "∪{inf}" } else { "" }),
            WCarrier::Scalars { m, top } => format!("N[1/{m}]{}", if *top { "∪{inf}" } else { "" }),
            WCarrier::Handle(s) => s.label(),
        };
        let rel = match self.w.aux {
            AuxRel::Leq => "<=",
            AuxRel::FiniteLeq => "<=_1",
            AuxRel::WayBelow => "<<",
            AuxRel::Matrix(_) => "table",
        };
        format!(
            "{}({base}, {rel})",
            if self.paths { "tau" } else { "gamma" }
        )
    }

    fn zero(&self) -> Value<I> {
        match self.handle() {
            Some(s) => Value::Const(Box::new(s.ops().zero())),
            None => Value::Const(Box::new(Value::zero_scalar())),
        }
    }

    fn normalize(&self, v: Value<I>) -> Result<Value<I>> {
        self.canonical(v)
    }

    fn leq(&self, a: &Value<I>, b: &Value<I>) -> bool {
        if let Some(s) = self.handle() {
            return s.ops().leq(inner(a), inner(b));
        }
        let (x, y) = (ext(inner(a)), ext(inner(b)));
        match (a, b) {
            (Value::Const(_), Value::Limit(_)) => x < y,
            _ => x <= y,
        }
    }

    fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        if let Some(s) = self.handle() {
            let x = s.ops().add(inner(a), inner(b));
            return if self.by_way_below() {
                self.wrap_handle(s, x)
            } else {
                Value::Const(Box::new(x))
            };
        }
        let sum = from_ext(ext(inner(a)) + ext(inner(b)));
        match (a, b) {
            (Value::Const(_), Value::Const(_)) => Value::Const(Box::new(sum)),
            (Value::Const(c), _) | (_, Value::Const(c)) if !ext(c).is_finite() => {
                Value::Const(c.clone())
            }
            _ => Value::Limit(Box::new(sum)),
        }
    }

    /// `[x] ≪ [y]` iff some single term of `y` dominates every term of `x` under ≺.
    fn way_below(&self, a: &Value<I>, b: &Value<I>) -> bool {
        match (self.handle(), &self.w.aux) {
            (Some(s), AuxRel::WayBelow) => return s.ops().way_below(inner(a), inner(b)),
            (Some(_), _) => return self.w.prec(inner(a), inner(b)),
            _ => {}
        }
        let (x, y) = (ext(inner(a)), ext(inner(b)));
        match (a, b) {
            (Value::Const(_), Value::Const(_)) => self.w.prec(inner(a), inner(b)),
            (Value::Limit(_), Value::Const(_)) => x <= y,
            _ => x < y,
        }
    }

    fn wedge(&self, a: &Value<I>, b: &Value<I>) -> Option<Value<I>> {
        if let Some(s) = self.handle() {
            let w = s.ops().wedge(inner(a), inner(b))?;
            return Some(if self.by_way_below() {
                self.wrap_handle(s, w)
            } else {
                Value::Const(Box::new(w))
            });
        }
        Some(if self.leq(a, b) { a.clone() } else { b.clone() })
    }

    fn approx(&self, a: &Value<I>, k: u32) -> Value<I> {
        match (a, self.handle()) {
            (Value::Limit(x), Some(s)) => self.wrap_handle(s, s.ops().approx(x, k)),
            (Value::Limit(x), None) => self.scalar_approx(&ext(x), k),
            _ => a.clone(),
        }
    }

    fn approx_start(&self, a: &Value<I>) -> u32 {
        match (a, self.handle()) {
            (Value::Limit(x), Some(s)) => s.ops().approx_start(x),
            _ => 1,
        }
    }

    fn infinity(&self, a: &Value<I>) -> Result<Value<I>> {
        if let Some(s) = self.handle() {
            let x = s.ops().infinity(inner(a))?;
            if self.by_way_below() {
                return Ok(self.wrap_handle(s, x));
            }
            return self.canonical(Value::Const(Box::new(x)));
        }
        let x = ext(inner(a));
        Ok(
            if x.is_zero() || (matches!(a, Value::Const(_)) && !x.is_finite()) {
                a.clone()
            } else {
                Value::Limit(Box::new(Value::Soft(ExtValue::Infinite)))
            },
        )
    }

    fn grid(&self, g: &Grid) -> Vec<Value<I>> {
        if let Some(s) = self.handle() {
            let mut out: Vec<Value<I>> = Vec::new();
            for x in s.ops().grid(g) {
                if let Ok(v) = self
                    .canonical(Value::Const(Box::new(x.clone())))
                    .or_else(|_| self.canonical(Value::Limit(Box::new(x))))
                {
                    if !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            return out;
        }
        let mut qs: Vec<Ratio<I>> = Vec::new();
        for d in 1..=g.max_den.max(1) {
            for n in 0..=g.max_value * d {
                let q = rat::<I>(n, d);
                if !qs.contains(&q) {
                    qs.push(q);
                }
            }
        }
        qs.sort();
        let mut out = Vec::new();
        for q in qs {
            let q = Value::Compact(q);
            if let Ok(c) = self.canonical(Value::Const(Box::new(q.clone()))) {
                out.push(c);
            }
            if let Ok(l) = self.canonical(Value::Limit(Box::new(q))) {
                out.push(l);
            }
        }
        let inf = Value::Soft(ExtValue::Infinite);
        if let Ok(c) = self.canonical(Value::Const(Box::new(inf.clone()))) {
            out.push(c);
        }
        out.push(Value::Limit(Box::new(inf)));
        out
    }

    fn scalar(&self, a: &Value<I>) -> Option<ExtValue<I>> {
        match self.handle() {
            Some(s) => s.ops().scalar(inner(a)),
            None => Some(ext(inner(a))),
        }
    }

    fn render(&self, v: &Value<I>) -> String {
        let body = match self.handle() {
            Some(s) => s.ops().render(inner(v)),
            None => match ext(inner(v)) {
                ExtValue::Finite(q) => fmt_rational(&q),
                ExtValue::Infinite => "inf".into(),
            },
        };
        match v {
            Value::Limit(_) => format!("lim({body})"),
            _ => format!("const({body})"),
        }
    }

    fn parse(&self, c: &mut Cursor<'_>) -> Result<Value<I>> {
        let limit = if c.eat("lim(") {
            true
        } else {
            c.expect("const(")?;
            false
        };
        let x = match self.handle() {
            Some(s) => s.ops().parse(c)?,
            None => from_ext(c.ext()?),
        };
        c.expect(")")?;
        Ok(if limit {
            Value::Limit(Box::new(x))
        } else {
            Value::Const(Box::new(x))
        })
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

pub fn gamma_completion<I: Int>(w: WSemigroup<I>) -> Semigroup<I> {
    Semigroup::from_ops(Completion { w, paths: false })
}

pub fn tau_completion<I: Int>(w: WSemigroup<I>) -> Semigroup<I> {
    Semigroup::from_ops(Completion { w, paths: true })
}
