//! Elements, semigroup handles and the generic order operations.
//!
//! Every catalog kind implements [`KindOps`] on raw [`Value`] payloads; a
//! [`Semigroup`] wraps one kind behind an id so that elements of different
//! semigroups cannot be mixed.

use std::any::Any;
use std::fmt::{self, Debug};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_traits::Zero;

use crate::catalog::interval::StepFn;
use crate::constructions::seqprod::SeqFn;
use crate::error::{CuError, Result};
use crate::scalar::{ExtValue, Int, Ratio};
use crate::text::Cursor;

/// Payload of an element. Which variants occur depends on the semigroup kind.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Value<I: Int> {
    /// Compact scalar `c_x` (also finite values of N̄).
    Compact(Ratio<I>),
    /// Soft scalar `s_x` with `x > 0`; `∞` of N̄ is `Soft(Infinite)`.
    Soft(ExtValue<I>),
    /// Row of a finite table.
    Index(usize),
    Tuple(Vec<Value<I>>),
    /// Function on a finite space, one target value per point.
    Points(Vec<Value<I>>),
    /// Step function on `[0,1]`.
    Step(StepFn<I>),
    /// Vertex values of a strictly positive affine function on a simplex.
    Affine(Vec<ExtValue<I>>),
    /// Group-decorated compact `(g, x)`.
    Grouped(Vec<i64>, Box<Value<I>>),
    /// Compact element of the sequence product.
    Seq(SeqFn),
    /// `sup_n (base + n·support)` in the sequence product.
    Ray(SeqFn, SeqFn),
    /// Completion class of an eventually constant sequence.
    Const(Box<Value<I>>),
    /// Completion class of a strictly ascending sequence.
    Limit(Box<Value<I>>),
}

impl<I: Int> Value<I> {
    pub fn zero_scalar() -> Self {
        Value::Compact(Ratio::zero())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct SgId(u64);

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

impl SgId {
    fn fresh() -> Self {
        SgId(NEXT_ID.fetch_add(1, Ordering::Relaxed))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Element<I: Int> {
    sg: SgId,
    val: Value<I>,
}

impl<I: Int> Element<I> {
    pub fn value(&self) -> &Value<I> {
        &self.val
    }

    pub fn semigroup_id(&self) -> SgId {
        self.sg
    }

    pub fn into_value(self) -> Value<I> {
        self.val
    }
}

/// Enumeration bounds for fragment grids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub max_value: i64,
    pub max_den: i64,
    /// Soft values range over all rationals with bounded denominator rather
    /// than only those of the compact part.
    pub all_soft_dens: bool,
}

impl Grid {
    pub fn new(max_value: i64, max_den: i64) -> Self {
        Grid {
            max_value,
            max_den,
            all_soft_dens: true,
        }
    }

    pub fn compact_dens(max_value: i64, max_den: i64) -> Self {
        Grid {
            max_value,
            max_den,
            all_soft_dens: false,
        }
    }
}

/// Decision procedures of one semigroup kind, acting on raw payloads.
pub trait KindOps<I: Int>: Send + Sync + Debug + 'static {
    fn label(&self) -> String;
    fn zero(&self) -> Value<I>;
    /// Validates the payload shape and returns its canonical form.
    fn normalize(&self, v: Value<I>) -> Result<Value<I>>;
    fn leq(&self, a: &Value<I>, b: &Value<I>) -> bool;
    fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I>;
    fn way_below(&self, a: &Value<I>, b: &Value<I>) -> bool;

    fn is_compact(&self, a: &Value<I>) -> bool {
        self.way_below(a, a)
    }

    fn wedge(&self, a: &Value<I>, b: &Value<I>) -> Option<Value<I>> {
        if self.leq(a, b) {
            Some(a.clone())
        } else if self.leq(b, a) {
            Some(b.clone())
        } else {
            None
        }
    }

    /// The `k`-th term of the canonical ≪-increasing sequence with supremum `a`.
    fn approx(&self, a: &Value<I>, k: u32) -> Value<I>;

    /// First index from which consecutive approximants are ≪-related.
    fn approx_start(&self, _a: &Value<I>) -> u32 {
        1
    }

    fn infinity(&self, a: &Value<I>) -> Result<Value<I>>;

    fn grid(&self, g: &Grid) -> Vec<Value<I>>;

    /// The complete lower set of `a`, when it is finite.
    fn down_set(&self, _a: &Value<I>) -> Option<Vec<Value<I>>> {
        None
    }

    /// Numeric value for scaling functionals, when the kind is a chain of scalars.
    fn scalar(&self, _a: &Value<I>) -> Option<ExtValue<I>> {
        None
    }

    fn render(&self, v: &Value<I>) -> String;
    fn parse(&self, c: &mut Cursor<'_>) -> Result<Value<I>>;

    /// Whether suprema of increasing sequences always exist in this kind.
    fn is_cu(&self) -> bool {
        true
    }

    fn as_any(&self) -> &dyn Any;
}

struct Inner<I: Int> {
    id: SgId,
    ops: Box<dyn KindOps<I>>,
}

/// A catalog semigroup with its decision procedures.
#[derive(Clone)]
pub struct Semigroup<I: Int> {
    inner: Arc<Inner<I>>,
}

impl<I: Int> Debug for Semigroup<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Semigroup#{}({})", self.inner.id.0, self.label())
    }
}

impl<I: Int> PartialEq for Semigroup<I> {
    fn eq(&self, other: &Self) -> bool {
        self.inner.id == other.inner.id
    }
}

impl<I: Int> Eq for Semigroup<I> {}

impl<I: Int> Semigroup<I> {
    pub fn from_ops(ops: impl KindOps<I>) -> Self {
        Semigroup {
            inner: Arc::new(Inner {
                id: SgId::fresh(),
                ops: Box::new(ops),
            }),
        }
    }

    pub fn id(&self) -> SgId {
        self.inner.id
    }

    pub fn label(&self) -> String {
        self.inner.ops.label()
    }

    pub fn ops(&self) -> &dyn KindOps<I> {
        self.inner.ops.as_ref()
    }

    pub fn kind<K: 'static>(&self) -> Option<&K> {
        self.inner.ops.as_any().downcast_ref::<K>()
    }

    pub fn element(&self, v: Value<I>) -> Result<Element<I>> {
        Ok(self.wrap(self.ops().normalize(v)?))
    }

    /// Wraps a payload already known to be canonical.
    pub(crate) fn wrap(&self, val: Value<I>) -> Element<I> {
        Element { sg: self.id(), val }
    }

    pub fn zero(&self) -> Element<I> {
        self.wrap(self.ops().zero())
    }

    pub fn owns(&self, a: &Element<I>) -> Result<()> {
        if a.sg == self.id() {
            Ok(())
        } else {
            Err(CuError::MixedSemigroup)
        }
    }

    pub fn parse(&self, text: &str) -> Result<Element<I>> {
        let mut c = Cursor::new(text);
        let v = self.ops().parse(&mut c)?;
        c.finish()?;
        self.element(v)
    }

    pub fn render(&self, a: &Element<I>) -> String {
        self.ops().render(&a.val)
    }

    pub fn leq(&self, a: &Element<I>, b: &Element<I>) -> Result<bool> {
        self.owns(a)?;
        self.owns(b)?;
        Ok(self.ops().leq(&a.val, &b.val))
    }

    pub fn equiv(&self, a: &Element<I>, b: &Element<I>) -> Result<bool> {
        Ok(self.leq(a, b)? && self.leq(b, a)?)
    }

    pub fn add(&self, a: &Element<I>, b: &Element<I>) -> Result<Element<I>> {
        self.owns(a)?;
        self.owns(b)?;
        Ok(self.wrap(self.ops().add(&a.val, &b.val)))
    }

    pub fn multiple(&self, a: &Element<I>, n: u64) -> Result<Element<I>> {
        self.owns(a)?;
        Ok(self.wrap(multiple(self.ops(), &a.val, n)))
    }

    pub fn way_below(&self, a: &Element<I>, b: &Element<I>) -> Result<bool> {
        self.owns(a)?;
        self.owns(b)?;
        Ok(self.ops().way_below(&a.val, &b.val))
    }

    pub fn is_compact(&self, a: &Element<I>) -> Result<bool> {
        self.owns(a)?;
        Ok(self.ops().is_compact(&a.val))
    }

    pub fn wedge(&self, a: &Element<I>, b: &Element<I>) -> Result<Option<Element<I>>> {
        self.owns(a)?;
        self.owns(b)?;
        Ok(self.ops().wedge(&a.val, &b.val).map(|v| self.wrap(v)))
    }

    pub fn infinity_of(&self, a: &Element<I>) -> Result<Element<I>> {
        self.owns(a)?;
        Ok(self.wrap(self.ops().infinity(&a.val)?))
    }

    pub fn approximants(&self, a: &Element<I>) -> Result<SequenceDescriptor<I>> {
        self.owns(a)?;
        if self.ops().is_compact(&a.val) {
            Ok(SequenceDescriptor {
                prefix: vec![a.clone()],
                tail: Tail::Constant,
            })
        } else {
            let start = self.ops().approx_start(&a.val);
            Ok(SequenceDescriptor {
                prefix: vec![],
                tail: Tail::SoftAscent {
                    limit: a.clone(),
                    start,
                },
            })
        }
    }

    /// The `j`-th term of a descriptor.
    pub fn term(&self, d: &SequenceDescriptor<I>, j: usize) -> Result<Element<I>> {
        if j < d.prefix.len() {
            let t = &d.prefix[j];
            self.owns(t)?;
            return Ok(t.clone());
        }
        let i = (j - d.prefix.len()) as u64;
        match &d.tail {
            Tail::Constant => d
                .prefix
                .last()
                .cloned()
                .ok_or_else(|| CuError::BadDescriptor("constant tail needs a prefix".into())),
            Tail::SoftAscent { limit, start } => {
                self.owns(limit)?;
                Ok(self.wrap(self.ops().approx(&limit.val, start + i as u32)))
            }
            Tail::AffineIndex { base, step } => {
                self.owns(base)?;
                self.owns(step)?;
                let s = multiple(self.ops(), &step.val, i);
                Ok(self.wrap(self.ops().add(&base.val, &s)))
            }
        }
    }

    /// Checks the prefix and the junction with the tail.
    pub fn check_increasing(&self, d: &SequenceDescriptor<I>) -> Result<()> {
        let n = d.prefix.len();
        let span = match d.tail {
            Tail::Constant => n,
            _ => n + 2,
        };
        for j in 1..span {
            let a = self.term(d, j - 1)?;
            let b = self.term(d, j)?;
            if !self.ops().leq(&a.val, &b.val) {
                return Err(CuError::NotIncreasing(j));
            }
        }
        Ok(())
    }

    /// Advances a soft-ascent tail to the first term dominating the prefix.
    pub fn settle(&self, d: &SequenceDescriptor<I>) -> Result<SequenceDescriptor<I>> {
        let mut d = d.clone();
        if let (Some(last), Tail::SoftAscent { limit, start }) = (d.prefix.last(), &mut d.tail) {
            self.owns(limit)?;
            let first = *start;
            while !self
                .ops()
                .leq(&last.val, &self.ops().approx(&limit.val, *start))
            {
                *start += 1;
                if *start > first + 256 {
                    return Err(CuError::NotIncreasing(d.prefix.len()));
                }
            }
        }
        Ok(d)
    }

    pub fn sup(&self, d: &SequenceDescriptor<I>) -> Result<Element<I>> {
        let d = &self.settle(d)?;
        self.check_increasing(d)?;
        match &d.tail {
            Tail::Constant => self.term(d, d.prefix.len().saturating_sub(1)),
            Tail::SoftAscent { limit, .. } => {
                if let Some(last) = d.prefix.last() {
                    if !self.ops().leq(&last.val, &limit.val) {
                        return Err(CuError::NotIncreasing(d.prefix.len()));
                    }
                }
                Ok(limit.clone())
            }
            Tail::AffineIndex { base, step } => {
                if !self.ops().is_cu() && !step.val.eq(&self.ops().zero()) {
                    return Err(CuError::NoSupremum(self.label()));
                }
                let inf = self.ops().infinity(&step.val)?;
                Ok(self.wrap(self.ops().add(&base.val, &inf)))
            }
        }
    }

    pub fn grid(&self, g: &Grid) -> Vec<Element<I>> {
        let mut out: Vec<Element<I>> = Vec::new();
        for v in self.ops().grid(g) {
            let e = self.wrap(v);
            if !out.contains(&e) {
                out.push(e);
            }
        }
        out
    }

    pub fn down_set(&self, a: &Element<I>) -> Option<Vec<Element<I>>> {
        self.ops()
            .down_set(&a.val)
            .map(|vs| vs.into_iter().map(|v| self.wrap(v)).collect())
    }
}

pub(crate) fn multiple<I: Int>(ops: &dyn KindOps<I>, a: &Value<I>, n: u64) -> Value<I> {
    let mut acc = ops.zero();
    let mut base = a.clone();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc = ops.add(&acc, &base);
        }
        n >>= 1;
        if n > 0 {
            base = ops.add(&base, &base);
        }
    }
    acc
}

/// Tail rule of a sequence descriptor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail<I: Int> {
    /// Repeats the last prefix element.
    Constant,
    /// Canonical approximants of `limit`, from index `start` on.
    SoftAscent { limit: Element<I>, start: u32 },
    /// `base + i·step` for `i = 0, 1, 2, …`.
    AffineIndex { base: Element<I>, step: Element<I> },
}

/// A finitely described increasing sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceDescriptor<I: Int> {
    pub prefix: Vec<Element<I>>,
    pub tail: Tail<I>,
}

impl<I: Int> SequenceDescriptor<I> {
    pub fn constant(a: Element<I>) -> Self {
        SequenceDescriptor {
            prefix: vec![a],
            tail: Tail::Constant,
        }
    }

    pub fn ascent(prefix: Vec<Element<I>>, limit: Element<I>) -> Self {
        SequenceDescriptor {
            prefix,
            tail: Tail::SoftAscent { limit, start: 1 },
        }
    }

    pub fn affine(prefix: Vec<Element<I>>, base: Element<I>, step: Element<I>) -> Self {
        SequenceDescriptor {
            prefix,
            tail: Tail::AffineIndex { base, step },
        }
    }
}
