//! Grothendieck groups of cancellative fragments and their interpolation property.
//!
//! A group element is a coordinate vector `x - y` with `x, y` compact elements
//! of the monoid. It is positive iff `y ≤ x` for the representative obtained by
//! shifting both into the monoid with `max(-g, 0)`; order cancellation (checked on
//! probes) makes this independent of the representative.

use std::any::Any;

use num_traits::{One, Signed, Zero};

use crate::axioms::{Axiom, AxiomReport, Fragment, Verdict};
use crate::catalog::group::{gap_parts, gap_value};
use crate::catalog::{Chain, GapModel};
use crate::constructions::product::coords as tuple;
use crate::constructions::CuProduct;
use crate::error::{CuError, Result};
use crate::order::{Element, Grid, KindOps, Semigroup, Value};
use crate::scalar::{fmt_rational, in_dyadic_like, int, rat, Int, Ratio};
use crate::text::{join, Cursor};

/// Cancellation probes look at this many fragment elements.
const PROBES: usize = 24;

fn coords_of<I: Int>(s: &dyn KindOps<I>, v: &Value<I>) -> Option<Vec<Ratio<I>>> {
    let any = s.as_any();
    if any.downcast_ref::<Chain>().is_some() {
        return match v {
            Value::Compact(q) => Some(vec![q.clone()]),
            _ => None,
        };
    }
    if any.downcast_ref::<GapModel>().is_some() {
        let (r, e) = gap_parts(v);
        return Some(vec![int(r), int(e)]);
    }
    if let Some(p) = any.downcast_ref::<CuProduct<I>>() {
        let mut out = Vec::new();
        for (f, x) in p.factors.iter().zip(tuple(v)) {
            out.extend(coords_of(f.ops(), x)?);
        }
        return Some(out);
    }
    None
}

/// Inverse of `coords_of` on the first coordinates of `c`; `None` outside the monoid.
fn from_coords<I: Int>(s: &dyn KindOps<I>, c: &[Ratio<I>]) -> Option<(Value<I>, usize)> {
    let any = s.as_any();
    if let Some(ch) = any.downcast_ref::<Chain>() {
        let q = c.first()?;
        return (!q.is_negative() && in_dyadic_like(q, ch.m))
            .then(|| (Value::Compact(q.clone()), 1));
    }
    if any.downcast_ref::<GapModel>().is_some() {
        let (r, e) = (c.first()?, c.get(1)?);
        if r.is_negative() || !r.is_integer() || !e.is_integer() {
            return None;
        }
        let (r, e) = (crate::scalar::to_i64(r)?, crate::scalar::to_i64(e)?);
        return Some((gap_value(r, e), 2));
    }
    if let Some(p) = any.downcast_ref::<CuProduct<I>>() {
        let mut used = 0;
        let mut xs = Vec::new();
        for f in &p.factors {
            let (x, k) = from_coords(f.ops(), &c[used..])?;
            xs.push(x);
            used += k;
        }
        return Some((Value::Tuple(xs), used));
    }
    None
}

fn axes<I: Int>(s: &dyn KindOps<I>, radius: i64, max_den: i64) -> Option<Vec<Vec<Ratio<I>>>> {
    let any = s.as_any();
    if let Some(ch) = any.downcast_ref::<Chain>() {
        let mut dens = vec![1i64];
        while ch.m > 1 && dens.last().unwrap() * (ch.m as i64) <= max_den {
            let d = dens.last().unwrap() * ch.m as i64;
            dens.push(d);
        }
        let d = *dens.last().unwrap();
        return Some(vec![(-radius * d..=radius * d)
            .map(|k| rat(k, d))
            .collect()]);
    }
    if any.downcast_ref::<GapModel>().is_some() {
        let axis: Vec<Ratio<I>> = (-radius..=radius).map(int).collect();
        return Some(vec![axis.clone(), axis]);
    }
    if let Some(p) = any.downcast_ref::<CuProduct<I>>() {
        let mut out = Vec::new();
        for f in &p.factors {
            out.extend(axes(f.ops(), radius, max_den)?);
        }
        return Some(out);
    }
    None
}

fn group_label<I: Int>(s: &dyn KindOps<I>) -> String {
    let any = s.as_any();
    if let Some(ch) = any.downcast_ref::<Chain>() {
        return if ch.m == 1 {
            "Z".into()
        } else {
            format!("Z[1/{}]", ch.m)
        };
    }
    if any.downcast_ref::<GapModel>().is_some() {
        return "Z^2 (gap order)".into();
    }
    if let Some(p) = any.downcast_ref::<CuProduct<I>>() {
        return join(&p.factors, |f| group_label(f.ops())).replace(", ", " x ");
    }
    s.label()
}

/// Formal differences of a cancellative monoid with the induced order.
#[derive(Clone, Debug)]
pub struct GrothendieckGroup<I: Int> {
    pub monoid: Semigroup<I>,
    pub dims: usize,
    pub name: String,
}

fn vector<I: Int>(v: &Value<I>) -> Vec<Ratio<I>> {
    tuple(v)
        .iter()
        .map(|x| match x {
            Value::Compact(q) => q.clone(),
            _ => Ratio::zero(),
        })
        .collect()
}

fn pack<I: Int>(c: Vec<Ratio<I>>) -> Value<I> {
    Value::Tuple(c.into_iter().map(Value::Compact).collect())
}

impl<I: Int> GrothendieckGroup<I> {
    /// The class of a monoid element.
    pub fn class_of(&self, x: &Element<I>) -> Result<Value<I>> {
        self.monoid.owns(x)?;
        coords_of(self.monoid.ops(), x.value())
            .map(pack)
            .ok_or_else(|| {
                CuError::Unsupported(format!(
                    "{} has no group coordinates",
                    self.monoid.render(x)
                ))
            })
    }

    fn positive(&self, g: &[Ratio<I>]) -> bool {
        let shift: Vec<Ratio<I>> = g
            .iter()
            .map(|x| {
                if x.is_negative() {
                    -x.clone()
                } else {
                    Ratio::zero()
                }
            })
            .collect();
        let top: Vec<Ratio<I>> = shift.iter().zip(g).map(|(s, x)| s + x).collect();
        let ops = self.monoid.ops();
        match (from_coords(ops, &shift), from_coords(ops, &top)) {
            (Some((y, _)), Some((x, _))) => ops.leq(&y, &x),
            _ => false,
        }
    }
}

impl<I: Int> KindOps<I> for GrothendieckGroup<I> {
    fn label(&self) -> String {
        format!("G({})", self.monoid.label())
    }

    fn zero(&self) -> Value<I> {
        pack(vec![Ratio::zero(); self.dims])
    }

    fn normalize(&self, v: Value<I>) -> Result<Value<I>> {
        match &v {
            Value::Tuple(xs)
                if xs.len() == self.dims && xs.iter().all(|x| matches!(x, Value::Compact(_))) =>
            {
                Ok(v)
            }
            _ => Err(CuError::InvalidElement(format!(
                "expected {} rational coordinates",
                self.dims
            ))),
        }
    }

    fn leq(&self, a: &Value<I>, b: &Value<I>) -> bool {
        let g: Vec<Ratio<I>> = vector(b)
            .iter()
            .zip(vector(a))
            .map(|(y, x)| y - x)
            .collect();
        self.positive(&g)
    }

    fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        pack(
            vector(a)
                .iter()
                .zip(vector(b))
                .map(|(x, y)| x + y)
                .collect(),
        )
    }

    fn way_below(&self, a: &Value<I>, b: &Value<I>) -> bool {
        KindOps::<I>::leq(self, a, b)
    }

    fn approx(&self, a: &Value<I>, _k: u32) -> Value<I> {
        a.clone()
    }

    fn infinity(&self, _a: &Value<I>) -> Result<Value<I>> {
        Err(CuError::Unsupported(
            "a group has no infinite multiples".into(),
        ))
    }

    /// The box `[-max_value, max_value]` in every coordinate.
    fn grid(&self, g: &Grid) -> Vec<Value<I>> {
        let Some(ax) = axes(self.monoid.ops(), g.max_value, g.max_den) else {
            return Vec::new();
        };
        let mut out = vec![Vec::new()];
        for axis in &ax {
            out = out
                .into_iter()
                .flat_map(|p: Vec<Ratio<I>>| {
                    axis.iter().map(move |x| {
                        let mut q = p.clone();
                        q.push(x.clone());
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(pack).collect()
    }

    fn render(&self, v: &Value<I>) -> String {
        let c = vector(v);
        if c.len() == 1 {
            return fmt_rational(&c[0]);
        }
        format!("({})", join(&c, fmt_rational))
    }

    fn parse(&self, c: &mut Cursor<'_>) -> Result<Value<I>> {
        if c.peek() == Some('(') {
            return Ok(pack(c.list("(", ")", |c| c.rational())?));
        }
        Ok(pack(vec![c.rational()?]))
    }

    fn is_cu(&self) -> bool {
        false
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Bounds of the box on which interpolation is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupBox {
    pub radius: i64,
    pub max_den: i64,
}

fn check_cancellation<I: Int>(m: &Semigroup<I>, xs: &[Element<I>]) -> Result<()> {
    let xs = &xs[..xs.len().min(PROBES)];
    for a in xs {
        for b in xs {
            for c in xs {
                let (ac, bc) = (m.add(a, c)?, m.add(b, c)?);
                if m.leq(&ac, &bc)? && !m.leq(a, b)? {
                    return Err(CuError::NotCancellative(format!(
                        "{} + {} ≤ {} + {} but {} ≰ {}",
                        m.render(a),
                        m.render(c),
                        m.render(b),
                        m.render(c),
                        m.render(a),
                        m.render(b)
                    )));
                }
            }
        }
    }
    Ok(())
}

type Bits = Vec<u64>;

fn bits_and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_iter(a: &Bits) -> impl Iterator<Item = usize> + '_ {
    a.iter().enumerate().flat_map(|(w, x)| {
        (0..64)
            .filter(move |i| x >> i & 1 == 1)
            .map(move |i| w * 64 + i)
    })
}

fn subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Builds the Grothendieck group of `frag` (with `∞`-elements dropped) and
/// checks Riesz interpolation on `bx`.
pub fn grothendieck_interpolation<I: Int>(
    m: &Semigroup<I>,
    frag: &Fragment<I>,
    bx: GroupBox,
) -> Result<(Semigroup<I>, AxiomReport<I>)> {
    let mut kept = Vec::new();
    for x in &frag.elements {
        m.owns(x)?;
        let absorbing = *x != m.zero() && m.infinity_of(x).map(|i| i == *x).unwrap_or(false);
        if !absorbing {
            kept.push(x.clone());
        }
    }
    check_cancellation(m, &kept)?;
    let dims = coords_of(m.ops(), m.zero().value())
        .ok_or_else(|| CuError::Unsupported(format!("no group coordinates for {}", m.label())))?
        .len();
    if let Some(x) = kept
        .iter()
        .find(|x| coords_of(m.ops(), x.value()).is_none())
    {
        return Err(CuError::Unsupported(format!(
            "{} has no group coordinates",
            m.render(x)
        )));
    }
    let kind = GrothendieckGroup {
        monoid: m.clone(),
        dims,
        name: group_label(m.ops()),
    };
    let g = Semigroup::from_ops(kind);
    let elems = g.grid(&Grid::new(bx.radius, bx.max_den));
    let n = elems.len();
    let words = n.div_ceil(64);
    let mut up = vec![vec![0u64; words]; n];
    let mut down = vec![vec![0u64; words]; n];
    for i in 0..n {
        for j in 0..n {
            if g.leq(&elems[i], &elems[j])? {
                up[i][j / 64] |= 1 << (j % 64);
                down[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    let mut examined = 0u64;
    let mut witness = None;
    'search: for a1 in 0..n {
        for a2 in a1..n {
            examined += 1;
            let u = bits_and(&up[a1], &up[a2]);
            if bits_iter(&u).any(|c| subset(&u, &up[c])) {
                continue;
            }
            let us: Vec<usize> = bits_iter(&u).collect();
            for (k, &b1) in us.iter().enumerate() {
                for &b2 in &us[k..] {
                    let common = bits_and(&u, &bits_and(&down[b1], &down[b2]));
                    if common.iter().all(|w| *w == 0) {
                        witness = Some([a1, a2, b1, b2]);
                        break 'search;
                    }
                }
            }
        }
    }
    let note = Some(format!(
        "box radius {}, denominators ≤ {}, {} group elements",
        bx.radius, bx.max_den, n
    ));
    let report = AxiomReport {
        axiom: Axiom::Interpolation,
        verdict: if witness.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        },
        witness: witness
            .map(|w| {
                Axiom::Interpolation
                    .roles(4)
                    .iter()
                    .zip(w)
                    .map(|(r, i)| (r.to_string(), elems[i].clone()))
                    .collect()
            })
            .unwrap_or_default(),
        multiplier: None,
        examined,
        note,
    };
    Ok((g, report))
}

/// Whether `a1, a2 ≤ b1, b2` and no element of the box lies between them.
pub fn is_interpolation_gap<I: Int>(
    g: &Semigroup<I>,
    w: [&Element<I>; 4],
    bx: GroupBox,
) -> Result<bool> {
    let [a1, a2, b1, b2] = w;
    for a in [a1, a2] {
        for b in [b1, b2] {
            if !g.leq(a, b)? {
                return Ok(false);
            }
        }
    }
    for c in g.grid(&Grid::new(bx.radius, bx.max_den)) {
        if g.leq(a1, &c)? && g.leq(a2, &c)? && g.leq(&c, b1)? && g.leq(&c, b2)? {
            return Ok(false);
        }
    }
    Ok(true)
}

impl<I: Int> GrothendieckGroup<I> {
    pub fn unit_vector(&self, i: usize) -> Value<I> {
        let mut c = vec![Ratio::zero(); self.dims];
        c[i] = Ratio::one();
        pack(c)
    }
}
