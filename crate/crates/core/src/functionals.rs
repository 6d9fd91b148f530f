//! Functionals `S → [0,∞]`, rank functions and the realization map.
//!
//! Each supported kind ships a finite generating family: scalings for scalar
//! chains, vertex weights for `V ⊔ LAff(Δ)_{++}`, additive value tables for
//! finite tables, and coordinatewise lifts plus ideal extensions for products.

use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::axioms::Fragment;
use crate::catalog::{Chain, GapModel, TableKind, ZStable};
use crate::constructions::ideal::largest_idempotent;
use crate::constructions::product::{coords, CuProduct};
use crate::constructions::Ideal;
use crate::error::{CuError, Result};
use crate::order::{Element, Grid, Semigroup, Value};
use crate::scalar::{fmt_rational, ExtValue, Int, Ratio};
use crate::text::join;

type RawMap<I> = Arc<dyn Fn(&Element<I>) -> ExtValue<I> + Send + Sync>;

#[derive(Clone)]
pub enum Form<I: Int> {
    /// `t · x` on a scalar kind.
    Scaling(ExtValue<I>),
    /// `Σ_v w_v f(v)` on vertex profiles.
    VertexWeights(Vec<ExtValue<I>>),
    /// Sum of functionals on the factors of a product.
    Coordinates(Vec<Functional<I>>),
    /// One value per row of a finite table.
    TableValues(Vec<ExtValue<I>>),
    /// The inner functional on the ideal and `∞` off it.
    IdealExtended {
        inner: Box<Functional<I>>,
        ideal: Ideal<I>,
    },
    Zero,
    InfinityOnNonzero,
    /// `a ↦ sup_n λ̃(a_n)` over the approximants `a_n` of `a`.
    Regularized(RawMap<I>),
}

impl<I: Int> fmt::Debug for Form<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Form::Scaling(t) => write!(f, "Scaling({t})"),
            Form::VertexWeights(w) => write!(f, "VertexWeights({w:?})"),
            Form::Coordinates(c) => write!(f, "Coordinates({c:?})"),
            Form::TableValues(v) => write!(f, "TableValues({v:?})"),
            Form::IdealExtended { inner, ideal } => {
                write!(f, "IdealExtended({inner:?}, {:?})", ideal.top)
            }
            Form::Zero => write!(f, "Zero"),
            Form::InfinityOnNonzero => write!(f, "InfinityOnNonzero"),
            Form::Regularized(_) => write!(f, "Regularized"),
        }
    }
}

impl<I: Int> PartialEq for Form<I> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Form::Scaling(a), Form::Scaling(b)) => a == b,
            (Form::VertexWeights(a), Form::VertexWeights(b)) => a == b,
            (Form::Coordinates(a), Form::Coordinates(b)) => a == b,
            (Form::TableValues(a), Form::TableValues(b)) => a == b,
            (
                Form::IdealExtended { inner: a, ideal: i },
                Form::IdealExtended { inner: b, ideal: j },
            ) => a == b && i == j,
            (Form::Zero, Form::Zero) | (Form::InfinityOnNonzero, Form::InfinityOnNonzero) => true,
            (Form::Regularized(a), Form::Regularized(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Functional<I: Int> {
    pub semigroup: Semigroup<I>,
    pub form: Form<I>,
}

fn ext_text<I: Int>(v: &ExtValue<I>) -> String {
    v.to_string()
}

impl<I: Int> Functional<I> {
    pub fn new(semigroup: &Semigroup<I>, form: Form<I>) -> Self {
        Functional {
            semigroup: semigroup.clone(),
            form,
        }
    }

    pub fn scaling(s: &Semigroup<I>, t: ExtValue<I>) -> Self {
        Functional::new(s, Form::Scaling(t))
    }

    pub fn zero(s: &Semigroup<I>) -> Self {
        Functional::new(s, Form::Zero)
    }

    pub fn infinity_on_nonzero(s: &Semigroup<I>) -> Self {
        Functional::new(s, Form::InfinityOnNonzero)
    }

    /// `q · λ`.
    pub fn scaled(&self, q: &Ratio<I>) -> Self {
        let sc = |v: &ExtValue<I>| v.scale(q);
        let form = match &self.form {
            Form::Scaling(t) => Form::Scaling(sc(t)),
            Form::VertexWeights(w) => Form::VertexWeights(w.iter().map(sc).collect()),
            Form::Coordinates(c) => Form::Coordinates(c.iter().map(|f| f.scaled(q)).collect()),
            Form::TableValues(v) => Form::TableValues(v.iter().map(sc).collect()),
            Form::IdealExtended { inner, ideal } => Form::IdealExtended {
                inner: Box::new(inner.scaled(q)),
                ideal: ideal.clone(),
            },
            Form::Zero => Form::Zero,
            Form::InfinityOnNonzero if q.is_zero() => Form::Zero,
            Form::InfinityOnNonzero => Form::InfinityOnNonzero,
            Form::Regularized(m) => {
                let (m, q) = (m.clone(), q.clone());
                Form::Regularized(Arc::new(move |a: &Element<I>| m(a).scale(&q)))
            }
        };
        Functional::new(&self.semigroup, form)
    }

    /// `(kind, parameters)` text used in reports.
    pub fn render(&self) -> String {
        match &self.form {
            Form::Scaling(t) => format!("scaling({})", ext_text(t)),
            Form::VertexWeights(w) => format!("weights({})", join(w, ext_text)),
            Form::Coordinates(c) => format!("coordinates({})", join(c, |f| f.render())),
            Form::TableValues(v) => format!("table({})", join(v, ext_text)),
            Form::IdealExtended { inner, ideal } => {
                format!(
                    "ideal-extended({}, top={})",
                    inner.render(),
                    ideal.ambient.render(&ideal.top)
                )
            }
            Form::Zero => "zero".into(),
            Form::InfinityOnNonzero => "infinity-on-nonzero".into(),
            Form::Regularized(_) => "regularized".into(),
        }
    }
}

fn no_space<I: Int>(s: &Semigroup<I>) -> CuError {
    CuError::UnknownFunctionalSpace(s.label())
}

fn eval_value<I: Int>(f: &Functional<I>, v: &Value<I>) -> Result<ExtValue<I>> {
    let s = &f.semigroup;
    let o = s.ops();
    Ok(match &f.form {
        Form::Zero => ExtValue::zero(),
        Form::InfinityOnNonzero => {
            if *v == o.zero() {
                ExtValue::zero()
            } else {
                ExtValue::Infinite
            }
        }
        Form::Scaling(t) => t.mul(&o.scalar(v).ok_or_else(|| no_space(s))?),
        Form::VertexWeights(w) => {
            let z = s.kind::<ZStable<I>>().ok_or_else(|| no_space(s))?;
            z.profile(v)
                .iter()
                .zip(w)
                .fold(ExtValue::zero(), |acc, (x, c)| acc + c.mul(x))
        }
        Form::Coordinates(parts) => {
            let mut acc = ExtValue::zero();
            for (p, x) in parts.iter().zip(coords(v)) {
                acc = acc + eval_value(p, x)?;
            }
            acc
        }
        Form::TableValues(vals) => match v {
            Value::Index(i) => vals
                .get(*i)
                .cloned()
                .ok_or_else(|| CuError::InvalidElement("row out of range".into()))?,
            _ => return Err(no_space(s)),
        },
        Form::IdealExtended { inner, ideal } => {
            let a = s.wrap(v.clone());
            if ideal.contains(&a)? {
                eval_value(inner, v)?
            } else {
                ExtValue::Infinite
            }
        }
        Form::Regularized(m) => regularized_value(s, m, v)?,
    })
}

/// Exact limit of the values of `m` along the approximants of `v`.
fn regularized_value<I: Int>(s: &Semigroup<I>, m: &RawMap<I>, v: &Value<I>) -> Result<ExtValue<I>> {
    let o = s.ops();
    if o.is_compact(v) {
        return Ok(m(&s.wrap(v.clone())));
    }
    let start = o.approx_start(v);
    let vals: Vec<ExtValue<I>> = (0..40)
        .map(|k| m(&s.wrap(o.approx(v, start + k))))
        .collect();
    if vals.iter().any(|x| !x.is_finite()) {
        return Ok(ExtValue::Infinite);
    }
    let q: Vec<Ratio<I>> = vals
        .iter()
        .map(|x| x.finite().expect("finite").clone())
        .collect();
    let n = q.len();
    let tail = &q[n - 8..];
    if tail.iter().all(|x| *x == tail[0]) {
        return Ok(ExtValue::Finite(tail[0].clone()));
    }
    let d: Vec<Ratio<I>> = q.windows(2).map(|w| &w[1] - &w[0]).collect();
    let dt = &d[d.len() - 8..];
    if dt.iter().all(|x| *x == dt[0]) && dt[0] > Ratio::zero() {
        return Ok(ExtValue::Infinite);
    }
    if dt.iter().all(|x| *x > Ratio::zero()) {
        let r = &dt[1] / &dt[0];
        if r < Ratio::one() && dt.windows(2).all(|w| &w[1] / &w[0] == r) {
            let last = dt.last().expect("nonempty");
            return Ok(ExtValue::Finite(
                &q[n - 1] + last * &r / (Ratio::one() - &r),
            ));
        }
    }
    Err(CuError::NoSupremum(
        "values along the approximants have no recognizable limit".into(),
    ))
}

pub fn evaluate<I: Int>(f: &Functional<I>, a: &Element<I>) -> Result<ExtValue<I>> {
    f.semigroup.owns(a)?;
    eval_value(f, a.value())
}

fn table_family<I: Int>(s: &Semigroup<I>, t: &TableKind) -> Result<Vec<Functional<I>>> {
    let n = t.table.len();
    if n > 8 {
        return Err(no_space(s));
    }
    let choices = [ExtValue::zero(), ExtValue::int(1), ExtValue::Infinite];
    let mut out = Vec::new();
    for code in 0..3usize.pow(n as u32) {
        let vals: Vec<ExtValue<I>> = (0..n)
            .map(|i| choices[code / 3usize.pow(i as u32) % 3].clone())
            .collect();
        let ok = vals[t.zero].is_zero()
            && vals.iter().any(|v| !v.is_zero())
            && (0..n).all(|i| (0..n).all(|j| vals[t.table.add[i][j]] == &vals[i] + &vals[j]))
            && (0..n).all(|i| (0..n).all(|j| !t.table.leq[i][j] || vals[i] <= vals[j]));
        if ok {
            out.push(Functional::new(s, Form::TableValues(vals)));
        }
    }
    Ok(out)
}

/// A generating family of `F(S)`; every functional is a supremum of positive
/// combinations of its members.
pub fn functional_space<I: Int>(s: &Semigroup<I>) -> Result<Vec<Functional<I>>> {
    if s.kind::<Chain>().is_some() || s.kind::<GapModel>().is_some() {
        return Ok(vec![
            Functional::scaling(s, ExtValue::int(1)),
            Functional::infinity_on_nonzero(s),
        ]);
    }
    if let Some(z) = s.kind::<ZStable<I>>() {
        let k = z.vertices();
        let mut out: Vec<Functional<I>> = (0..k)
            .map(|v| {
                let w = (0..k)
                    .map(|u| {
                        if u == v {
                            ExtValue::int(1)
                        } else {
                            ExtValue::zero()
                        }
                    })
                    .collect();
                Functional::new(s, Form::VertexWeights(w))
            })
            .collect();
        out.push(Functional::infinity_on_nonzero(s));
        return Ok(out);
    }
    if let Some(t) = s.kind::<TableKind>() {
        return table_family(s, t);
    }
    if let Some(p) = s.kind::<CuProduct<I>>() {
        let mut lifted = Vec::new();
        for (i, fi) in p.factors.iter().enumerate() {
            for g in functional_space(fi)? {
                let parts = p
                    .factors
                    .iter()
                    .enumerate()
                    .map(|(j, fj)| {
                        if i == j {
                            g.clone()
                        } else {
                            Functional::zero(fj)
                        }
                    })
                    .collect();
                lifted.push((i, Functional::new(s, Form::Coordinates(parts))));
            }
        }
        let mut out: Vec<Functional<I>> = lifted.iter().map(|(_, f)| f.clone()).collect();
        for (i, f) in &lifted {
            let top = s.wrap(p.inject(*i, largest_idempotent(&p.factors[*i])?.value()));
            let ideal = Ideal::from_top(s, top)?;
            out.push(Functional::new(
                s,
                Form::IdealExtended {
                    inner: Box::new(f.clone()),
                    ideal,
                },
            ));
        }
        return Ok(out);
    }
    Err(no_space(s))
}

/// Members of the family rescaled to take the value 1 at `at`.
pub fn normalized<I: Int>(s: &Semigroup<I>, at: &Element<I>) -> Result<Vec<Functional<I>>> {
    let mut out: Vec<Functional<I>> = Vec::new();
    for f in functional_space(s)? {
        if let ExtValue::Finite(v) = evaluate(&f, at)? {
            if !v.is_zero() {
                let g = f.scaled(&v.recip());
                if !out.contains(&g) {
                    out.push(g);
                }
            }
        }
    }
    Ok(out)
}

/// `x̂ : λ ↦ λ(x)` in closed form over the functional parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankFunction<I: Int> {
    /// `t ↦ c·t` on scalings.
    Linear(ExtValue<I>),
    /// `w ↦ Σ_v w_v f_v` on vertex weights.
    Weights(Vec<ExtValue<I>>),
    Coordinates(Vec<RankFunction<I>>),
    /// Values on the members of a finite family.
    Table(Vec<ExtValue<I>>),
}

impl<I: Int> Add for RankFunction<I> {
    type Output = RankFunction<I>;

    fn add(self, other: Self) -> Self {
        let zip = |a: Vec<ExtValue<I>>, b: Vec<ExtValue<I>>| {
            a.into_iter().zip(b).map(|(x, y)| x + y).collect()
        };
        match (self, other) {
            (RankFunction::Linear(a), RankFunction::Linear(b)) => RankFunction::Linear(a + b),
            (RankFunction::Weights(a), RankFunction::Weights(b)) => {
                RankFunction::Weights(zip(a, b))
            }
            (RankFunction::Table(a), RankFunction::Table(b)) => RankFunction::Table(zip(a, b)),
            (RankFunction::Coordinates(a), RankFunction::Coordinates(b)) => {
                RankFunction::Coordinates(a.into_iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (a, _) => a,
        }
    }
}

impl<I: Int> fmt::Display for RankFunction<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankFunction::Linear(c) => write!(f, "t -> {c}*t"),
            RankFunction::Weights(w) => {
                let terms: Vec<String> = w
                    .iter()
                    .enumerate()
                    .map(|(i, c)| format!("{c}*w{}", i + 1))
                    .collect();
                write!(f, "w -> {}", terms.join(" + "))
            }
            RankFunction::Coordinates(c) => write!(f, "({})", join(c, |r| r.to_string())),
            RankFunction::Table(v) => write!(f, "[{}]", join(v, ext_text)),
        }
    }
}

fn rank_value<I: Int>(s: &Semigroup<I>, v: &Value<I>) -> Result<RankFunction<I>> {
    let o = s.ops();
    if s.kind::<Chain>().is_some() || s.kind::<GapModel>().is_some() {
        return Ok(RankFunction::Linear(
            o.scalar(v).ok_or_else(|| no_space(s))?,
        ));
    }
    if let Some(z) = s.kind::<ZStable<I>>() {
        return Ok(RankFunction::Weights(z.profile(v)));
    }
    if s.kind::<TableKind>().is_some() {
        let a = s.wrap(v.clone());
        return Ok(RankFunction::Table(
            functional_space(s)?
                .iter()
                .map(|f| evaluate(f, &a))
                .collect::<Result<_>>()?,
        ));
    }
    if let Some(p) = s.kind::<CuProduct<I>>() {
        return Ok(RankFunction::Coordinates(
            p.factors
                .iter()
                .zip(coords(v))
                .map(|(f, x)| rank_value(f, x))
                .collect::<Result<_>>()?,
        ));
    }
    Err(no_space(s))
}

pub fn rank_of<I: Int>(s: &Semigroup<I>, a: &Element<I>) -> Result<RankFunction<I>> {
    s.owns(a)?;
    rank_value(s, a.value())
}

/// `α(f) = sup{x : x̂ ≪ f}`, resolved in closed form.
pub fn alpha<I: Int>(s: &Semigroup<I>, f: &RankFunction<I>) -> Result<Element<I>> {
    let bad = || CuError::NotRealizable(format!("{f} on {}", s.label()));
    match (s.kind::<Chain>(), s.kind::<ZStable<I>>(), f) {
        (Some(c), _, RankFunction::Linear(t)) if c.soft => {
            if t.is_zero() {
                Ok(s.zero())
            } else {
                s.element(Value::Soft(t.clone()))
            }
        }
        (_, Some(z), RankFunction::Weights(w)) if w.len() == z.vertices() => {
            if w.iter().all(|x| x.is_zero()) {
                Ok(s.zero())
            } else if w.iter().all(|x| !x.is_zero()) {
                s.element(Value::Affine(w.clone()))
            } else {
                Err(bad())
            }
        }
        _ => Err(bad()),
    }
}

fn probe_of<I: Int>(s: &Semigroup<I>) -> Vec<Element<I>> {
    let mut xs = Fragment::default_for(s).elements;
    xs.truncate(30);
    xs
}

/// `λ̃ = λ` on the ideal and `∞` off it.
pub fn extend_from_ideal<I: Int>(
    lambda: &Functional<I>,
    ideal: &Ideal<I>,
    s: &Semigroup<I>,
) -> Result<Functional<I>> {
    if lambda.semigroup != *s || ideal.ambient != *s {
        return Err(CuError::MixedSemigroup);
    }
    if ideal.top == s.zero() && lambda.form == Form::Zero {
        return Ok(Functional::infinity_on_nonzero(s));
    }
    let probe = probe_of(s);
    if probe.iter().all(|x| ideal.contains(x).unwrap_or(false))
        && ideal.contains(&largest_idempotent(s)?)?
    {
        return Ok(lambda.clone());
    }
    let ext = Functional::new(
        s,
        Form::IdealExtended {
            inner: Box::new(lambda.clone()),
            ideal: ideal.clone(),
        },
    );
    for a in &probe {
        for b in &probe {
            let (x, y) = (evaluate(&ext, a)?, evaluate(&ext, b)?);
            if evaluate(&ext, &s.add(a, b)?)? != &x + &y {
                return Err(CuError::NotIdeal(format!(
                    "extension is not additive at {}, {}",
                    s.render(a),
                    s.render(b)
                )));
            }
            if s.leq(a, b)? && x > y {
                return Err(CuError::NotIdeal(format!(
                    "extension is not monotone at {}, {}",
                    s.render(a),
                    s.render(b)
                )));
            }
        }
    }
    Ok(ext)
}

/// `λ(a) = sup{λ̃(a') : a' ≪ a}`, evaluated along approximants.
///
/// `raw` must preserve zero and order on the default fragment.
pub fn regularize<I: Int>(
    s: &Semigroup<I>,
    raw: impl Fn(&Element<I>) -> ExtValue<I> + Send + Sync + 'static,
) -> Result<Functional<I>> {
    if !raw(&s.zero()).is_zero() {
        return Err(CuError::NotMonotone(
            "the map does not vanish at zero".into(),
        ));
    }
    let probe = probe_of(s);
    for a in &probe {
        for b in &probe {
            if s.leq(a, b)? && raw(a) > raw(b) {
                return Err(CuError::NotMonotone(format!(
                    "{} ≤ {} but the values drop",
                    s.render(a),
                    s.render(b)
                )));
            }
        }
    }
    Ok(Functional::new(s, Form::Regularized(Arc::new(raw))))
}

fn default_probe<I: Int>(s: &Semigroup<I>) -> Vec<Element<I>> {
    if let Some(c) = s.kind::<Chain>() {
        return s.grid(&if c.soft {
            Grid::new(4, 16)
        } else {
            Grid::new(6, 1)
        });
    }
    if s.kind::<ZStable<I>>().is_some() {
        return s.grid(&Grid::new(2, 4));
    }
    s.grid(&Grid::new(4, 1))
}

/// Finds a functional whose values on the probe are exactly `{0, 1, …, m, ∞}`
/// and which restricts to an order isomorphism on the ideal it generates.
pub fn detect_elementary<I: Int>(s: &Semigroup<I>) -> Result<Option<(Functional<I>, Ideal<I>)>> {
    detect_elementary_on(s, &default_probe(s))
}

pub fn detect_elementary_on<I: Int>(
    s: &Semigroup<I>,
    probe: &[Element<I>],
) -> Result<Option<(Functional<I>, Ideal<I>)>> {
    let family = functional_space(s)?;
    let mut tried: Vec<Functional<I>> = Vec::new();
    for g in &family {
        for x in probe {
            let ExtValue::Finite(v) = evaluate(g, x)? else {
                continue;
            };
            if v.is_zero() {
                continue;
            }
            let f = g.scaled(&v.recip());
            if tried.contains(&f) {
                continue;
            }
            tried.push(f.clone());
            if let Some(ideal) = elementary_ideal(s, &f, probe)? {
                return Ok(Some((f, ideal)));
            }
        }
    }
    Ok(None)
}

fn elementary_ideal<I: Int>(
    s: &Semigroup<I>,
    f: &Functional<I>,
    probe: &[Element<I>],
) -> Result<Option<Ideal<I>>> {
    let vals: Vec<ExtValue<I>> = probe
        .iter()
        .map(|x| evaluate(f, x))
        .collect::<Result<_>>()?;
    if !vals.iter().all(|v| v.is_integer()) || !vals.contains(&ExtValue::Infinite) {
        return Ok(None);
    }
    let top = vals
        .iter()
        .filter_map(|v| v.finite())
        .max()
        .cloned()
        .unwrap_or_else(Ratio::zero);
    let mut k = Ratio::zero();
    while k <= top {
        if !vals.contains(&ExtValue::Finite(k.clone())) {
            return Ok(None);
        }
        k = k + Ratio::one();
    }
    if top < Ratio::one() {
        return Ok(None);
    }
    let one = ExtValue::int(1);
    let s0 = &probe[vals
        .iter()
        .position(|v| *v == one)
        .expect("value 1 is attained")];
    let ideal = Ideal::generated(s, s0)?;
    let inside: Vec<(&Element<I>, &ExtValue<I>)> = probe
        .iter()
        .zip(&vals)
        .filter(|(x, _)| ideal.contains(x).unwrap_or(false))
        .collect();
    for (a, va) in &inside {
        for (b, vb) in &inside {
            if s.leq(a, b)? != (va <= vb) {
                return Ok(None);
            }
        }
    }
    Ok(Some(ideal))
}

/// Formats a finite value set for reports.
pub fn value_set<I: Int>(f: &Functional<I>, probe: &[Element<I>]) -> Result<Vec<String>> {
    let mut vals: Vec<ExtValue<I>> = probe
        .iter()
        .map(|x| evaluate(f, x))
        .collect::<Result<_>>()?;
    vals.sort();
    vals.dedup();
    Ok(vals
        .iter()
        .map(|v| match v {
            ExtValue::Finite(q) => fmt_rational(q),
            ExtValue::Infinite => "inf".into(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_zstable_model, nbar, softened};
    use crate::constructions::{cu_product, ideal_generated};
    use crate::scalar::{int, rat};

    #[test]
    fn softened_has_one_normalized_functional() {
        let s = softened::<i128>(1);
        let fs = normalized(&s, &s.parse("c:1").unwrap()).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(
            evaluate(&fs[0], &s.parse("s:5/2").unwrap()).unwrap(),
            ExtValue::frac(5, 2)
        );
        assert_eq!(
            evaluate(&fs[0], &s.parse("c:3").unwrap()).unwrap(),
            ExtValue::int(3)
        );
    }

    #[test]
    fn ideal_extension_on_the_plane() {
        let p = cu_product::<i128>(vec![nbar(), nbar()]);
        let first = functional_space(&p).unwrap().remove(0);
        let i = ideal_generated(&p, &p.parse("(1, 0)").unwrap()).unwrap();
        let ext = extend_from_ideal(&first, &i, &p).unwrap();
        assert_eq!(
            evaluate(&ext, &p.parse("(0, 1)").unwrap()).unwrap(),
            ExtValue::Infinite
        );
        assert_eq!(
            evaluate(&ext, &p.parse("(3, 0)").unwrap()).unwrap(),
            ExtValue::int(3)
        );
        let zero = ideal_generated(&p, &p.zero()).unwrap();
        assert_eq!(
            extend_from_ideal(&Functional::zero(&p), &zero, &p)
                .unwrap()
                .form,
            Form::InfinityOnNonzero
        );
        let all = ideal_generated(&p, &p.parse("(1, 1)").unwrap()).unwrap();
        assert_eq!(extend_from_ideal(&first, &all, &p).unwrap(), first);
    }

    #[test]
    fn ranks_and_realization() {
        let s = softened::<i128>(1);
        let c1 = s.parse("c:1").unwrap();
        let r = rank_of(&s, &c1).unwrap();
        let a = alpha(&s, &r).unwrap();
        assert_eq!(s.render(&a), "s:1");
        assert_eq!(rank_of(&s, &a).unwrap(), r);
        assert_eq!(
            alpha(&s, &RankFunction::Linear(ExtValue::zero())).unwrap(),
            s.zero()
        );
        let z = make_zstable_model::<i128>(1, 2, vec![vec![int(1), int(1)]]).unwrap();
        assert_eq!(
            rank_of(&z, &z.parse("1").unwrap()).unwrap().to_string(),
            "w -> 1*w1 + 1*w2"
        );
        let f = RankFunction::Weights(vec![ExtValue::Finite(rat(1, 2)), ExtValue::int(2)]);
        assert_eq!(rank_of(&z, &alpha(&z, &f).unwrap()).unwrap(), f);
    }

    #[test]
    fn regularization_examples() {
        let s = nbar::<i128>();
        let raw = |a: &Element<i128>| {
            if a.value().clone() == Value::Soft(ExtValue::Infinite) {
                ExtValue::int(5)
            } else {
                ExtValue::zero()
            }
        };
        let f = regularize(&s, raw).unwrap();
        assert_eq!(
            evaluate(&f, &s.parse("inf").unwrap()).unwrap(),
            ExtValue::zero()
        );
        let t = softened::<i128>(1);
        let lam = Functional::scaling(&t, ExtValue::int(1));
        let l2 = lam.clone();
        let g = regularize(&t, move |a| evaluate(&l2, a).unwrap()).unwrap();
        for x in ["s:1", "c:2", "s:7/3", "s:inf"] {
            let a = t.parse(x).unwrap();
            assert_eq!(evaluate(&g, &a).unwrap(), evaluate(&lam, &a).unwrap());
        }
        let inflated = move |a: &Element<i128>| match a.value() {
            Value::Soft(x) if x.is_finite() => x + &ExtValue::int(1),
            _ => evaluate(&lam, a).unwrap(),
        };
        assert!(matches!(
            regularize(&t, inflated),
            Err(CuError::NotMonotone(_))
        ));
    }

    #[test]
    fn elementary_detection() {
        let s = nbar::<i128>();
        let (f, _) = detect_elementary(&s).unwrap().unwrap();
        assert_eq!(f.render(), "scaling(1)");
        assert!(detect_elementary(&softened::<i128>(1)).unwrap().is_none());
        let p = cu_product::<i128>(vec![nbar(), nbar()]);
        let (_, i) = detect_elementary(&p).unwrap().unwrap();
        assert!(i.contains(&p.parse("(inf, 0)").unwrap()).unwrap());
        assert!(!i.contains(&p.parse("(0, 1)").unwrap()).unwrap());
    }
}
