//! Nonnegative piecewise-linear functions on `[0,1]` and rational measures.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::catalog::interval::{IntervalLsc, StepFn};
use crate::catalog::{make_lsc_interval, nbar};
use crate::error::{CuError, Result};
use crate::order::{Element, Semigroup, Value};
use crate::scalar::{fmt_rational, int, rat, Int, Ratio};
use crate::text::{join, Cursor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunction<I: Int> {
    breakpoints: Vec<Ratio<I>>,
    values: Vec<Ratio<I>>,
}

/// A connected piece of `[0,1]`; endpoints `0` and `1` may be closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval<I: Int> {
    pub lo: Ratio<I>,
    pub hi: Ratio<I>,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl<I: Int> Interval<I> {
    pub fn length(&self) -> Ratio<I> {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Ratio<I>) -> bool {
        (x > &self.lo || (x == &self.lo && self.lo_closed))
            && (x < &self.hi || (x == &self.hi && self.hi_closed))
    }

    fn within(&self, other: &Self) -> bool {
        let lo =
            self.lo > other.lo || (self.lo == other.lo && (other.lo_closed || !self.lo_closed));
        let hi =
            self.hi < other.hi || (self.hi == other.hi && (other.hi_closed || !self.hi_closed));
        lo && hi
    }

    fn closure(&self) -> Self {
        Interval {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            lo_closed: true,
            hi_closed: true,
        }
    }
}

impl<I: Int> fmt::Display for Interval<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            fmt_rational(&self.lo),
            fmt_rational(&self.hi),
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

fn half<I: Int>() -> Ratio<I> {
    rat(1, 2)
}

/// Where the segment from `(x0, u)` to `(x1, v)` crosses the level `t`, strictly inside.
fn crossing<I: Int>(
    x0: &Ratio<I>,
    x1: &Ratio<I>,
    u: &Ratio<I>,
    v: &Ratio<I>,
    t: &Ratio<I>,
) -> Option<Ratio<I>> {
    if (u < t && v > t) || (u > t && v < t) {
        Some(x0 + (x1 - x0) * ((t - u) / (v - u)))
    } else {
        None
    }
}

impl<I: Int> PLFunction<I> {
    pub fn new(breakpoints: Vec<Ratio<I>>, values: Vec<Ratio<I>>) -> Result<Self> {
        if breakpoints.len() < 2 || breakpoints.len() != values.len() {
            return Err(CuError::InvalidElement(
                "need at least two breakpoints, one value each".into(),
            ));
        }
        if !breakpoints[0].is_zero() || !breakpoints.last().unwrap().is_one() {
            return Err(CuError::InvalidElement(
                "breakpoints must run from 0 to 1".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CuError::InvalidElement("breakpoints must increase".into()));
        }
        if let Some(q) = values.iter().find(|q| q.is_negative()) {
            return Err(CuError::InvalidElement(format!(
                "negative value {}",
                fmt_rational(q)
            )));
        }
        Ok(PLFunction {
            breakpoints,
            values,
        })
    }

    pub fn zero() -> Self {
        PLFunction {
            breakpoints: vec![Ratio::zero(), Ratio::one()],
            values: vec![Ratio::zero(), Ratio::zero()],
        }
    }

    /// Height `h` at the midpoint of `(a, b)`, zero outside.
    pub fn tent(a: Ratio<I>, b: Ratio<I>, h: Ratio<I>) -> Result<Self> {
        if a < Ratio::zero() || b > Ratio::one() || a >= b {
            return Err(CuError::BadParam("need 0 ≤ a < b ≤ 1".into()));
        }
        let mid = (&a + &b) * half::<I>();
        let mut bp = vec![Ratio::zero()];
        let mut vs = vec![Ratio::zero()];
        for (x, v) in [(a, Ratio::zero()), (mid, h), (b, Ratio::zero())] {
            if x > *bp.last().unwrap() {
                bp.push(x);
                vs.push(v);
            }
        }
        if !bp.last().unwrap().is_one() {
            bp.push(Ratio::one());
            vs.push(Ratio::zero());
        }
        PLFunction::new(bp, vs)
    }

    pub fn breakpoints(&self) -> &[Ratio<I>] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Ratio<I>] {
        &self.values
    }

    pub fn at(&self, x: &Ratio<I>) -> Ratio<I> {
        match self.breakpoints.binary_search(x) {
            Ok(i) => self.values[i].clone(),
            Err(i) => {
                let (x0, x1) = (&self.breakpoints[i - 1], &self.breakpoints[i]);
                let (u, v) = (&self.values[i - 1], &self.values[i]);
                u + (v - u) * ((x - x0) / (x1 - x0))
            }
        }
    }

    pub fn max(&self) -> Ratio<I> {
        self.values
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(Ratio::zero)
    }

    /// Same function with extra breakpoints.
    fn refined(&self, extra: impl IntoIterator<Item = Ratio<I>>) -> Self {
        let mut bp: Vec<Ratio<I>> = self.breakpoints.iter().cloned().chain(extra).collect();
        bp.sort();
        bp.dedup();
        let values = bp.iter().map(|x| self.at(x)).collect();
        PLFunction {
            breakpoints: bp,
            values,
        }
    }

    /// Breakpoints plus the points where the function crosses `t`.
    fn crossings(&self, t: &Ratio<I>) -> Vec<Ratio<I>> {
        self.breakpoints
            .windows(2)
            .zip(self.values.windows(2))
            .filter_map(|(x, v)| crossing(&x[0], &x[1], &v[0], &v[1], t))
            .collect()
    }

    /// `(f - ε)_+`.
    pub fn cutdown(&self, eps: &Ratio<I>) -> Result<Self> {
        if !eps.is_positive() {
            return Err(CuError::BadParam("ε must be positive".into()));
        }
        let r = self.refined(self.crossings(eps));
        let values = r
            .values
            .iter()
            .map(|v| if v > eps { v - eps } else { Ratio::zero() })
            .collect();
        Ok(PLFunction {
            breakpoints: r.breakpoints,
            values,
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        let a = self.refined(other.breakpoints.iter().cloned());
        let values = a
            .breakpoints
            .iter()
            .zip(&a.values)
            .map(|(x, v)| v + other.at(x))
            .collect();
        PLFunction {
            breakpoints: a.breakpoints,
            values,
        }
    }

    /// `h ∘ f` for `h` on `[0,1]`; needs `max f ≤ 1`.
    pub fn compose(&self, h: &PLFunction<I>) -> Result<Self> {
        if self.max() > Ratio::one() {
            return Err(CuError::BadParam(
                "composition needs values in [0,1]".into(),
            ));
        }
        let extra: Vec<Ratio<I>> = h
            .breakpoints
            .iter()
            .flat_map(|t| self.crossings(t))
            .collect();
        let r = self.refined(extra);
        let values = r.values.iter().map(|v| h.at(v)).collect();
        Ok(PLFunction {
            breakpoints: r.breakpoints,
            values,
        })
    }

    /// `sup |f - g|`, attained at a common breakpoint.
    pub fn distance(&self, other: &Self) -> Ratio<I> {
        let a = self.refined(other.breakpoints.iter().cloned());
        a.breakpoints
            .iter()
            .zip(&a.values)
            .map(|(x, v)| (v - other.at(x)).abs())
            .max()
            .unwrap_or_else(Ratio::zero)
    }

    /// `supp_o(f)` as disjoint intervals in increasing order.
    pub fn open_support(&self) -> Vec<Interval<I>> {
        let n = self.breakpoints.len();
        let mut out: Vec<Interval<I>> = Vec::new();
        for i in 0..n - 1 {
            let (u, v) = (&self.values[i], &self.values[i + 1]);
            if u.is_zero() && v.is_zero() {
                continue;
            }
            let (x0, x1) = (self.breakpoints[i].clone(), self.breakpoints[i + 1].clone());
            let lo_closed = u.is_positive();
            let hi_closed = v.is_positive();
            match out.last_mut() {
                Some(last) if last.hi == x0 && last.hi_closed => {
                    last.hi = x1;
                    last.hi_closed = hi_closed;
                }
                _ => out.push(Interval {
                    lo: x0,
                    hi: x1,
                    lo_closed,
                    hi_closed,
                }),
            }
        }
        // Interior endpoints are open in [0,1] unless the function is positive there,
        // in which case the piece already continues.
        for iv in &mut out {
            iv.lo_closed = iv.lo_closed && iv.lo.is_zero();
            iv.hi_closed = iv.hi_closed && iv.hi.is_one();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Cursor::new(text);
        c.eat("pl");
        let pts = c.list("[", "]", |c| {
            let x = c.rational()?;
            c.expect(":")?;
            Ok((x, c.rational()?))
        })?;
        c.finish()?;
        let (bp, vs) = pts.into_iter().unzip();
        PLFunction::new(bp, vs)
    }
}

impl<I: Int> fmt::Display for PLFunction<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self
            .breakpoints
            .iter()
            .zip(&self.values)
            .map(|(x, v)| format!("{}:{}", fmt_rational(x), fmt_rational(v)))
            .collect();
        write!(f, "pl[{}]", pts.join(", "))
    }
}

fn covered<I: Int>(parts: &[Interval<I>], by: &[Interval<I>]) -> bool {
    parts.iter().all(|p| by.iter().any(|q| p.within(q)))
}

/// `f ≼ g` iff `supp_o(f) ⊆ supp_o(g)`.
pub fn pl_cuntz_leq<I: Int>(f: &PLFunction<I>, g: &PLFunction<I>) -> bool {
    covered(&f.open_support(), &g.open_support())
}

/// `[f] ≪ [g]` iff the closure of `supp_o(f)` lies in `supp_o(g)`.
pub fn pl_way_below<I: Int>(f: &PLFunction<I>, g: &PLFunction<I>) -> bool {
    let closed: Vec<Interval<I>> = f.open_support().iter().map(Interval::closure).collect();
    covered(&closed, &g.open_support())
}

/// `w · Lebesgue + Σ atoms` on `[0,1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMeasure<I: Int> {
    pub lebesgue_weight: Ratio<I>,
    pub atoms: Vec<(Ratio<I>, Ratio<I>)>,
}

impl<I: Int> RationalMeasure<I> {
    pub fn new(lebesgue_weight: Ratio<I>, atoms: Vec<(Ratio<I>, Ratio<I>)>) -> Result<Self> {
        if lebesgue_weight.is_negative() || atoms.iter().any(|(_, w)| w.is_negative()) {
            return Err(CuError::BadParam("weights must be nonnegative".into()));
        }
        if atoms
            .iter()
            .any(|(p, _)| p.is_negative() || *p > Ratio::one())
        {
            return Err(CuError::BadParam("atoms must lie in [0,1]".into()));
        }
        Ok(RationalMeasure {
            lebesgue_weight,
            atoms,
        })
    }

    pub fn lebesgue() -> Self {
        RationalMeasure {
            lebesgue_weight: Ratio::one(),
            atoms: Vec::new(),
        }
    }

    pub fn dirac(p: Ratio<I>) -> Result<Self> {
        RationalMeasure::new(Ratio::zero(), vec![(p, Ratio::one())])
    }

    pub fn mass(&self) -> Ratio<I> {
        self.atoms
            .iter()
            .fold(self.lebesgue_weight.clone(), |acc, (_, w)| acc + w)
    }

    pub fn is_probability(&self) -> bool {
        self.mass().is_one()
    }

    pub fn of(&self, set: &[Interval<I>]) -> Ratio<I> {
        let len = set.iter().fold(Ratio::zero(), |acc, iv| acc + iv.length());
        self.atoms
            .iter()
            .filter(|(p, _)| set.iter().any(|iv| iv.contains(p)))
            .fold(&self.lebesgue_weight * len, |acc, (_, w)| acc + w)
    }

    /// `μ{f > t}`.
    fn above(&self, f: &PLFunction<I>, t: &Ratio<I>) -> Ratio<I> {
        let mut len = Ratio::zero();
        for (x, v) in f.breakpoints.windows(2).zip(f.values.windows(2)) {
            let (lo, hi) = if v[0] <= v[1] {
                (&v[0], &v[1])
            } else {
                (&v[1], &v[0])
            };
            let w = &x[1] - &x[0];
            if t < lo {
                len = len + w;
            } else if t < hi {
                len = len + w * ((hi - t) / (hi - lo));
            }
        }
        self.atoms
            .iter()
            .filter(|(p, _)| f.at(p) > *t)
            .fold(&self.lebesgue_weight * len, |acc, (_, w)| acc + w)
    }
}

/// `d_{τ_μ}([f]) = μ(supp_o f)`.
pub fn pl_dtau<I: Int>(f: &PLFunction<I>, mu: &RationalMeasure<I>) -> Ratio<I> {
    mu.of(&f.open_support())
}

/// `∫_0^∞ μ{f > t} dt`. Between consecutive levels of `f` the integrand is affine
/// in `t`, so the midpoint value times the width is exact.
pub fn pl_layer_cake<I: Int>(f: &PLFunction<I>, mu: &RationalMeasure<I>) -> Ratio<I> {
    let mut levels: Vec<Ratio<I>> = f.values.clone();
    levels.extend(mu.atoms.iter().map(|(p, _)| f.at(p)));
    levels.push(Ratio::zero());
    levels.sort();
    levels.dedup();
    levels.windows(2).fold(Ratio::zero(), |acc, w| {
        acc + mu.above(f, &((&w[0] + &w[1]) * half::<I>())) * (&w[1] - &w[0])
    })
}

/// `∫ f dμ` summed over the linear pieces and the atoms.
pub fn pl_integral<I: Int>(f: &PLFunction<I>, mu: &RationalMeasure<I>) -> Ratio<I> {
    let lebesgue = f
        .breakpoints
        .windows(2)
        .zip(f.values.windows(2))
        .fold(Ratio::zero(), |acc, (x, v)| {
            acc + (&v[0] + &v[1]) * half::<I>() * (&x[1] - &x[0])
        });
    mu.atoms
        .iter()
        .fold(&mu.lebesgue_weight * lebesgue, |acc, (p, w)| {
            acc + w * f.at(p)
        })
}

/// A `δ > 0` with `(f - ε)_+ ≪ (g - δ)_+`: half the minimum of `g` on `{f ≥ ε}`.
pub fn rordam_witness<I: Int>(
    f: &PLFunction<I>,
    g: &PLFunction<I>,
    eps: &Ratio<I>,
) -> Result<Ratio<I>> {
    if !eps.is_positive() {
        return Err(CuError::BadParam("ε must be positive".into()));
    }
    if !pl_cuntz_leq(f, g) {
        return Err(CuError::NotSubequivalent);
    }
    if *eps >= f.max() {
        return Ok(Ratio::one());
    }
    let r = f
        .refined(f.crossings(eps))
        .refined(g.breakpoints.iter().cloned());
    let m = r
        .breakpoints
        .iter()
        .zip(&r.values)
        .filter(|(_, v)| *v >= eps)
        .map(|(x, _)| g.at(x))
        .min()
        .expect("ε < max f so the level set is nonempty");
    Ok(m * half::<I>())
}

/// `Lsc([0,1], N̄)`, the home of classes of PL functions.
pub fn interval_handle<I: Int>() -> Semigroup<I> {
    make_lsc_interval(nbar(), None, None).expect("unconstrained interval handle")
}

/// The indicator of `supp_o(f)`.
pub fn pl_class<I: Int>(f: &PLFunction<I>, target: &Semigroup<I>) -> Result<Element<I>> {
    match target.kind::<IntervalLsc<I>>() {
        Some(k) if k.left.is_none() && k.right.is_none() && k.target.label() == "nbar" => {}
        _ => {
            return Err(CuError::BadParam(format!(
                "PL classes live in lsc([0,1], nbar), not {}",
                target.label()
            )))
        }
    }
    let supp = f.open_support();
    let mut breaks: Vec<Ratio<I>> = vec![Ratio::zero(), Ratio::one()];
    for iv in &supp {
        breaks.push(iv.lo.clone());
        breaks.push(iv.hi.clone());
    }
    breaks.sort();
    breaks.dedup();
    let one = Value::Compact(int(1));
    let zero = Value::Compact(Ratio::zero());
    let ind = |x: &Ratio<I>| {
        if supp.iter().any(|iv| iv.contains(x)) {
            one.clone()
        } else {
            zero.clone()
        }
    };
    let points = breaks.iter().map(ind).collect();
    let gaps = breaks
        .windows(2)
        .map(|w| ind(&((&w[0] + &w[1]) * half::<I>())))
        .collect();
    target.element(Value::Step(StepFn {
        breaks,
        points,
        gaps,
    }))
}

pub fn render_support<I: Int>(f: &PLFunction<I>) -> String {
    let s = f.open_support();
    if s.is_empty() {
        return "empty".into();
    }
    join(&s, |iv| iv.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Ratio<i128> {
        rat(n, d)
    }

    fn tent(a: Ratio<i128>, b: Ratio<i128>) -> PLFunction<i128> {
        PLFunction::tent(a, b, Ratio::one()).unwrap()
    }

    #[test]
    fn support_comparison() {
        let f = tent(q(0, 1), q(1, 2));
        let g = tent(q(0, 1), q(3, 4));
        assert!(pl_cuntz_leq(&f, &g));
        assert!(!pl_way_below(&f, &g));
        assert!(pl_way_below(&tent(q(1, 8), q(1, 2)), &g));
        assert!(pl_cuntz_leq(&PLFunction::<i128>::zero(), &f));
        assert!(!pl_cuntz_leq(&g, &f));
        assert_eq!(
            render_support(&PLFunction::<i128>::parse("pl[0:1, 1/2:0, 1:2]").unwrap()),
            "[0, 1/2), (1/2, 1]"
        );
    }

    #[test]
    fn measures_of_supports() {
        let f = tent(q(1, 4), q(1, 2));
        assert_eq!(pl_dtau(&f, &RationalMeasure::lebesgue()), q(1, 4));
        let at_half = tent(q(1, 4), q(3, 4));
        assert_eq!(
            pl_dtau(&at_half, &RationalMeasure::dirac(q(1, 2)).unwrap()),
            q(1, 1)
        );
        let z = PLFunction::zero();
        assert_eq!(pl_dtau(&z, &RationalMeasure::lebesgue()), q(0, 1));
        assert_eq!(pl_layer_cake(&z, &RationalMeasure::lebesgue()), q(0, 1));
        // area of a tent of height 1 and base 1/4
        assert_eq!(pl_layer_cake(&f, &RationalMeasure::lebesgue()), q(1, 8));
    }

    #[test]
    fn rordam_delta() {
        let f = tent(q(0, 1), q(1, 1));
        assert_eq!(rordam_witness(&f, &f, &q(1, 2)).unwrap(), q(1, 4));
        assert_eq!(rordam_witness(&f, &f, &q(2, 1)).unwrap(), q(1, 1));
        let g = tent(q(0, 1), q(1, 2));
        assert_eq!(
            rordam_witness(&f, &g, &q(1, 2)),
            Err(CuError::NotSubequivalent)
        );
    }

    #[test]
    fn cutdown_and_classes() {
        let f = tent(q(0, 1), q(1, 1));
        let c = f.cutdown(&q(1, 2)).unwrap();
        assert_eq!(render_support(&c), "(1/4, 3/4)");
        assert_eq!(c.max(), q(1, 2));
        let h = interval_handle::<i128>();
        let cls = pl_class(&tent(q(1, 4), q(1, 2)), &h).unwrap();
        assert_eq!(
            cls,
            h.element(Value::Step(StepFn::indicator(
                q(1, 4),
                q(1, 2),
                Value::Compact(q(1, 1))
            )))
            .unwrap()
        );
        assert_eq!(pl_class(&PLFunction::zero(), &h).unwrap(), h.zero());
    }
}
