//! Lower semicontinuous step functions on `[0,1]` with values in a chain.

use std::any::Any;

use num_traits::{One, Zero};

use crate::catalog::chain::Chain;
use crate::error::{CuError, Result};
use crate::order::{Grid, KindOps, Semigroup, Value};
use crate::scalar::{fmt_rational, in_dyadic_like, pow2_inv, rat, ExtValue, Int, Ratio};
use crate::text::Cursor;

/// Step function: `points[i]` is the value at `breaks[i]`, `gaps[i]` the value
/// on the open interval `(breaks[i], breaks[i+1])`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StepFn<I: Int> {
    pub breaks: Vec<Ratio<I>>,
    pub points: Vec<Value<I>>,
    pub gaps: Vec<Value<I>>,
}

impl<I: Int> StepFn<I> {
    pub fn constant(v: Value<I>) -> Self {
        StepFn {
            breaks: vec![Ratio::zero(), Ratio::one()],
            points: vec![v.clone(), v.clone()],
            gaps: vec![v],
        }
    }

    /// `v` on the open interval `(a, b)`, zero elsewhere.
    pub fn indicator(a: Ratio<I>, b: Ratio<I>, v: Value<I>) -> Self {
        let z = Value::zero_scalar();
        let mut breaks = vec![Ratio::zero()];
        let mut points = vec![z.clone()];
        let mut gaps = Vec::new();
        if a > Ratio::zero() {
            breaks.push(a.clone());
            points.push(z.clone());
            gaps.push(z.clone());
        }
        gaps.push(v);
        breaks.push(b.clone());
        points.push(z.clone());
        if b < Ratio::one() {
            breaks.push(Ratio::one());
            points.push(z.clone());
            gaps.push(z);
        }
        StepFn {
            breaks,
            points,
            gaps,
        }
    }

    /// Value at `x`.
    pub fn at(&self, x: &Ratio<I>) -> &Value<I> {
        match self.breaks.binary_search(x) {
            Ok(i) => &self.points[i],
            Err(i) => &self.gaps[i.saturating_sub(1).min(self.gaps.len() - 1)],
        }
    }

    /// Value on the open interval `(x, y)` of a refinement of `breaks`.
    fn on_gap(&self, x: &Ratio<I>, y: &Ratio<I>) -> &Value<I> {
        let mid = (x + y) / rat::<I>(2, 1);
        self.at(&mid)
    }

    /// Values on a refinement `grid ⊇ breaks`.
    fn sample(&self, grid: &[Ratio<I>]) -> (Vec<Value<I>>, Vec<Value<I>>) {
        let points = grid.iter().map(|x| self.at(x).clone()).collect();
        let gaps = grid
            .windows(2)
            .map(|w| self.on_gap(&w[0], &w[1]).clone())
            .collect();
        (points, gaps)
    }

    /// Drops interior breakpoints where the function does not change.
    pub fn canonical(mut self) -> Self {
        let mut i = 1;
        while i + 1 < self.breaks.len() {
            if self.points[i] == self.gaps[i - 1] && self.points[i] == self.gaps[i] {
                self.breaks.remove(i);
                self.points.remove(i);
                self.gaps.remove(i);
            } else {
                i += 1;
            }
        }
        self
    }

    /// `Σ length · value` over the open pieces.
    pub fn integral(&self, scalar: impl Fn(&Value<I>) -> ExtValue<I>) -> ExtValue<I> {
        self.breaks
            .windows(2)
            .zip(&self.gaps)
            .fold(ExtValue::zero(), |acc, (w, v)| {
                acc + scalar(v).scale(&(&w[1] - &w[0]))
            })
    }

    fn min_gap(&self) -> Ratio<I> {
        self.breaks
            .windows(2)
            .map(|w| &w[1] - &w[0])
            .min()
            .unwrap_or_else(Ratio::one)
    }
}

fn merged<I: Int>(a: &StepFn<I>, b: &StepFn<I>) -> Vec<Ratio<I>> {
    let mut g: Vec<Ratio<I>> = a.breaks.iter().chain(&b.breaks).cloned().collect();
    g.sort();
    g.dedup();
    g
}

/// `Lsc([0,1], T)` for a chain `T`, optionally with sub-semigroups prescribed at the endpoints.
#[derive(Clone, Debug)]
pub struct IntervalLsc<I: Int> {
    pub target: Semigroup<I>,
    pub left: Option<Semigroup<I>>,
    pub right: Option<Semigroup<I>>,
}

impl<I: Int> IntervalLsc<I> {
    pub fn new(
        target: Semigroup<I>,
        left: Option<Semigroup<I>>,
        right: Option<Semigroup<I>>,
    ) -> Result<Self> {
        let Some(t) = target.kind::<Chain>() else {
            return Err(CuError::BadParam(format!(
                "interval functions need a chain target, got {}",
                target.label()
            )));
        };
        for sub in left.iter().chain(right.iter()) {
            let ok = match sub.kind::<Chain>() {
                Some(c) => c.soft == t.soft && in_dyadic_like(&rat::<I>(1, c.m as i64), t.m),
                None => false,
            };
            if !ok {
                return Err(CuError::BadConstraint(format!(
                    "{} inside {}",
                    sub.label(),
                    target.label()
                )));
            }
        }
        Ok(IntervalLsc {
            target,
            left,
            right,
        })
    }

    fn step<'a>(&self, v: &'a Value<I>) -> &'a StepFn<I> {
        match v {
            Value::Step(f) => f,
            _ => panic!("interval payload expected, got {v:?}"),
        }
    }

    fn max(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        if self.target.ops().leq(a, b) {
            b.clone()
        } else {
            a.clone()
        }
    }

    fn zip(
        &self,
        a: &Value<I>,
        b: &Value<I>,
        op: impl Fn(&Value<I>, &Value<I>) -> Value<I>,
    ) -> Value<I> {
        let (f, g) = (self.step(a), self.step(b));
        let grid = merged(f, g);
        let (fp, fg) = f.sample(&grid);
        let (gp, gg) = g.sample(&grid);
        let points = fp.iter().zip(&gp).map(|(x, y)| op(x, y)).collect();
        let gaps = fg.iter().zip(&gg).map(|(x, y)| op(x, y)).collect();
        Value::Step(
            StepFn {
                breaks: grid,
                points,
                gaps,
            }
            .canonical(),
        )
    }

    fn check(&self, f: &StepFn<I>) -> Result<()> {
        let bad = |m: &str| Err(CuError::InvalidElement(m.to_string()));
        let n = f.breaks.len();
        if n < 2 || f.breaks[0] != Ratio::zero() || f.breaks[n - 1] != Ratio::one() {
            return bad("breakpoints must start at 0 and end at 1");
        }
        if f.breaks.windows(2).any(|w| w[0] >= w[1]) {
            return bad("breakpoints must increase strictly");
        }
        if f.points.len() != n || f.gaps.len() != n - 1 {
            return bad("wrong number of values");
        }
        let t = self.target.ops();
        for i in 0..n {
            let left_ok = i == 0 || t.leq(&f.points[i], &f.gaps[i - 1]);
            let right_ok = i == n - 1 || t.leq(&f.points[i], &f.gaps[i]);
            if !left_ok || !right_ok {
                return bad(&format!(
                    "not lower semicontinuous at {}",
                    fmt_rational(&f.breaks[i])
                ));
            }
        }
        if let Some(l) = &self.left {
            if l.ops().normalize(f.points[0].clone()).is_err() {
                return bad(&format!("value at 0 outside {}", l.label()));
            }
        }
        if let Some(r) = &self.right {
            if r.ops().normalize(f.points[n - 1].clone()).is_err() {
                return bad(&format!("value at 1 outside {}", r.label()));
            }
        }
        Ok(())
    }

    /// Closed balls of radius `2^-k` around the breakpoints take the approximated
    /// point value, the rest of each gap the approximated gap value.
    fn erode(&self, f: &StepFn<I>, k: u32) -> Option<StepFn<I>> {
        let t = self.target.ops();
        let d = pow2_inv::<I>(k);
        if &d * rat::<I>(2, 1) >= f.min_gap() {
            return None;
        }
        let ap: Vec<Value<I>> = f.points.iter().map(|v| t.approx(v, k)).collect();
        let ag: Vec<Value<I>> = f.gaps.iter().map(|v| t.approx(v, k)).collect();
        let n = f.breaks.len();
        for i in 0..n {
            if (i > 0 && !t.leq(&ap[i], &ag[i - 1])) || (i + 1 < n && !t.leq(&ap[i], &ag[i])) {
                return None;
            }
        }
        let mut out = StepFn {
            breaks: vec![],
            points: vec![],
            gaps: vec![],
        };
        for i in 0..n {
            let b = &f.breaks[i];
            if i > 0 {
                out.gaps.push(ag[i - 1].clone());
                out.breaks.push(b - &d);
                out.points.push(ap[i].clone());
                out.gaps.push(ap[i].clone());
            }
            out.breaks.push(b.clone());
            out.points.push(ap[i].clone());
            if i + 1 < n {
                out.gaps.push(ap[i].clone());
                out.breaks.push(b + &d);
                out.points.push(ap[i].clone());
            }
        }
        Some(out.canonical())
    }

    /// All valid step functions with the given breakpoints and values.
    pub fn enumerate(&self, breaks: &[Ratio<I>], values: &[Value<I>]) -> Vec<Value<I>> {
        let n = breaks.len();
        let slots = 2 * n - 1;
        let mut out = Vec::new();
        if values.is_empty() {
            return out;
        }
        let mut idx = vec![0usize; slots];
        loop {
            let f = StepFn {
                breaks: breaks.to_vec(),
                points: (0..n).map(|i| values[idx[2 * i]].clone()).collect(),
                gaps: (0..n - 1).map(|i| values[idx[2 * i + 1]].clone()).collect(),
            };
            if self.check(&f).is_ok() {
                let v = Value::Step(f.canonical());
                if !out.contains(&v) {
                    out.push(v);
                }
            }
            let mut p = 0;
            loop {
                if p == slots {
                    return out;
                }
                idx[p] += 1;
                if idx[p] < values.len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }
}

impl<I: Int> KindOps<I> for IntervalLsc<I> {
    fn label(&self) -> String {
        let mut s = format!("lsc([0,1], {})", self.target.label());
        if let Some(l) = &self.left {
            s += &format!(" f(0) in {}", l.label());
        }
        if let Some(r) = &self.right {
            s += &format!(" f(1) in {}", r.label());
        }
        s
    }

    fn zero(&self) -> Value<I> {
        Value::Step(StepFn::constant(Value::zero_scalar()))
    }

    fn normalize(&self, v: Value<I>) -> Result<Value<I>> {
        let Value::Step(f) = v else {
            return Err(CuError::InvalidElement("expected a step function".into()));
        };
        let t = self.target.ops();
        let f = StepFn {
            points: f
                .points
                .into_iter()
                .map(|x| t.normalize(x))
                .collect::<Result<_>>()?,
            gaps: f
                .gaps
                .into_iter()
                .map(|x| t.normalize(x))
                .collect::<Result<_>>()?,
            breaks: f.breaks,
        };
        self.check(&f)?;
        Ok(Value::Step(f.canonical()))
    }

    fn leq(&self, a: &Value<I>, b: &Value<I>) -> bool {
        let (f, g) = (self.step(a), self.step(b));
        let grid = merged(f, g);
        let (fp, fg) = f.sample(&grid);
        let (gp, gg) = g.sample(&grid);
        let t = self.target.ops();
        fp.iter()
            .zip(&gp)
            .chain(fg.iter().zip(&gg))
            .all(|(x, y)| t.leq(x, y))
    }

    fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        let t = self.target.ops();
        self.zip(a, b, |x, y| t.add(x, y))
    }

    /// `f ≪ g` iff the upper envelope of `f` (point value maxed with the
    /// neighbouring gap values) is pointwise way below `g`.
    fn way_below(&self, a: &Value<I>, b: &Value<I>) -> bool {
        let (f, g) = (self.step(a), self.step(b));
        let grid = merged(f, g);
        let (fp, fg) = f.sample(&grid);
        let (gp, gg) = g.sample(&grid);
        let t = self.target.ops();
        let n = grid.len();
        for i in 0..n {
            let mut env = fp[i].clone();
            if i > 0 {
                env = self.max(&env, &fg[i - 1]);
            }
            if i + 1 < n {
                env = self.max(&env, &fg[i]);
            }
            if !t.way_below(&env, &gp[i]) {
                return false;
            }
        }
        fg.iter().zip(&gg).all(|(x, y)| t.way_below(x, y))
    }

    fn wedge(&self, a: &Value<I>, b: &Value<I>) -> Option<Value<I>> {
        let t = self.target.ops();
        Some(self.zip(a, b, |x, y| {
            t.wedge(x, y).expect("chains are totally ordered")
        }))
    }

    fn approx(&self, a: &Value<I>, k: u32) -> Value<I> {
        match self.erode(self.step(a), k) {
            Some(f) => Value::Step(f),
            None => self.zero(),
        }
    }

    fn approx_start(&self, a: &Value<I>) -> u32 {
        let f = self.step(a);
        (1..200)
            .find(|&k| self.erode(f, k).is_some())
            .unwrap_or(200)
    }

    fn infinity(&self, a: &Value<I>) -> Result<Value<I>> {
        let t = self.target.ops();
        let f = self.step(a);
        let f = StepFn {
            breaks: f.breaks.clone(),
            points: f
                .points
                .iter()
                .map(|x| t.infinity(x))
                .collect::<Result<_>>()?,
            gaps: f
                .gaps
                .iter()
                .map(|x| t.infinity(x))
                .collect::<Result<_>>()?,
        };
        Ok(Value::Step(f.canonical()))
    }

    fn grid(&self, g: &Grid) -> Vec<Value<I>> {
        let breaks = [Ratio::zero(), rat(1, 2), Ratio::one()];
        self.enumerate(&breaks, &self.target.ops().grid(g))
    }

    fn render(&self, v: &Value<I>) -> String {
        let f = self.step(v);
        let t = self.target.ops();
        let mut parts = Vec::new();
        for (i, b) in f.breaks.iter().enumerate() {
            parts.push(format!("{}={}", fmt_rational(b), t.render(&f.points[i])));
            if i + 1 < f.breaks.len() {
                parts.push(format!(
                    "({},{})={}",
                    fmt_rational(b),
                    fmt_rational(&f.breaks[i + 1]),
                    t.render(&f.gaps[i])
                ));
            }
        }
        format!("step({})", parts.join(", "))
    }

    /// `step(0=v, (0,a)=v, a=v, …, 1=v)`, or a bare target value for a constant.
    fn parse(&self, c: &mut Cursor<'_>) -> Result<Value<I>> {
        let t = self.target.ops();
        if c.peek() != Some('s') || !c.rest().starts_with("step(") {
            return Ok(Value::Step(StepFn::constant(t.parse(c)?)));
        }
        enum Piece<I: Int> {
            Point(Ratio<I>, Value<I>),
            Gap(Ratio<I>, Ratio<I>, Value<I>),
        }
        let pieces = c.list("step(", ")", |c| {
            if c.eat("(") {
                let a = c.rational()?;
                c.expect(",")?;
                let b = c.rational()?;
                c.expect(")")?;
                c.expect("=")?;
                Ok(Piece::Gap(a, b, t.parse(c)?))
            } else {
                let x = c.rational()?;
                c.expect("=")?;
                Ok(Piece::Point(x, t.parse(c)?))
            }
        })?;
        let mut f = StepFn {
            breaks: vec![],
            points: vec![],
            gaps: vec![],
        };
        for p in pieces {
            match p {
                Piece::Point(x, v) => {
                    if f.points.len() != f.gaps.len() {
                        return Err(c.error("point value where an interval was expected"));
                    }
                    if let Some(last) = f.breaks.last() {
                        if *last != x {
                            return Err(c.error("interval endpoint does not match the next point"));
                        }
                    } else {
                        f.breaks.push(x);
                    }
                    f.points.push(v);
                }
                Piece::Gap(a, b, v) => {
                    if f.points.len() != f.gaps.len() + 1 || f.breaks.last() != Some(&a) {
                        return Err(c.error("interval does not follow its left endpoint"));
                    }
                    f.breaks.push(b);
                    f.gaps.push(v);
                }
            }
        }
        if f.points.len() != f.breaks.len() {
            return Err(c.error("step function must end with a point value"));
        }
        Ok(Value::Step(f))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
