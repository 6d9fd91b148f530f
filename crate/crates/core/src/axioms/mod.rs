//! Checkers for the Cu-axioms and regularity properties on finite fragments.
//!
//! Universal quantifiers range over a [`Fragment`]. Existential witnesses are
//! looked up in the fragment, then in its closure under one addition and all
//! wedges, and finally in the complete lower set of the bounding element when
//! the kind can enumerate it. Only that last search turns a missing witness
//! into a failure; otherwise the verdict is inconclusive.

mod glued;

pub use glued::{glued_semigroup, Glued};

use std::cell::{OnceCell, RefCell};
use std::collections::{HashMap, HashSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::catalog::{Chain, FiniteSpace, IntervalLsc, TableKind, ZStable};
use crate::error::{CuError, Result};
use crate::functionals::{evaluate, Functional};
use crate::order::{Element, Grid, KindOps, Semigroup, Value};
use crate::scalar::{ExtValue, Int, Ratio};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    O1,
    O2,
    O3,
    O4,
    O5,
    O6,
    O6Plus,
    WC,
    Riesz,
    AlmostDiv,
    AlmostUnperforation,
    StrictComparison,
    Simple,
    Interpolation,
}

impl Axiom {
    /// The axioms accepted by [`check_axiom`].
    pub const SUITE: [Axiom; 10] = [
        Axiom::O1,
        Axiom::O2,
        Axiom::O3,
        Axiom::O4,
        Axiom::O5,
        Axiom::O6,
        Axiom::O6Plus,
        Axiom::WC,
        Axiom::Riesz,
        Axiom::AlmostDiv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::O1 => "O1",
            Axiom::O2 => "O2",
            Axiom::O3 => "O3",
            Axiom::O4 => "O4",
            Axiom::O5 => "O5",
            Axiom::O6 => "O6",
            Axiom::O6Plus => "O6plus",
            Axiom::WC => "WC",
            Axiom::Riesz => "Riesz",
            Axiom::AlmostDiv => "AlmostDiv",
            Axiom::AlmostUnperforation => "AlmostUnperforation",
            Axiom::StrictComparison => "StrictComparison",
            Axiom::Simple => "Simple",
            Axiom::Interpolation => "Interpolation",
        }
    }

    pub fn parse(s: &str) -> Result<Axiom> {
        let key = s.trim().to_ascii_lowercase().replace(['-', '_', ' '], "");
        let all = Axiom::SUITE.iter().chain(&[
            Axiom::AlmostUnperforation,
            Axiom::StrictComparison,
            Axiom::Simple,
            Axiom::Interpolation,
        ]);
        for a in all {
            if a.name().to_ascii_lowercase() == key {
                return Ok(*a);
            }
        }
        match key.as_str() {
            "o6+" => Ok(Axiom::O6Plus),
            "weakcancellation" => Ok(Axiom::WC),
            "almostunperforated" => Ok(Axiom::AlmostUnperforation),
            _ => Err(CuError::Parse(format!("unknown axiom '{s}'"))),
        }
    }

    pub fn roles(self, len: usize) -> &'static [&'static str] {
        match (self, len) {
            (Axiom::O1, 2) => &["base", "step"],
            (Axiom::O1 | Axiom::O2, _) => &["a"],
            (Axiom::O3, _) => &["a'", "a", "b'", "b"],
            (Axiom::O4, _) => &["a", "b", "x"],
            (Axiom::O5, _) => &["x'", "x", "z'", "z", "y"],
            (Axiom::O6, _) => &["x'", "x", "y", "z"],
            (Axiom::O6Plus, _) => &["x", "y", "z", "u'", "u"],
            (Axiom::WC, _) => &["x", "y", "z"],
            (Axiom::Riesz, _) => &["x", "y", "z", "t"],
            (Axiom::AlmostDiv, _) => &["x'", "x"],
            (Axiom::AlmostUnperforation | Axiom::StrictComparison, _) => &["s", "t"],
            (Axiom::Simple, _) => &["a", "b"],
            (Axiom::Interpolation, _) => &["a1", "a2", "b1", "b2"],
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport<I: Int> {
    pub axiom: Axiom,
    pub verdict: Verdict,
    /// Named elements of the failing (or unresolved) instance.
    pub witness: Vec<(String, Element<I>)>,
    /// The integer `n` of an almost divisibility or almost unperforation instance.
    pub multiplier: Option<u64>,
    pub examined: u64,
    pub note: Option<String>,
}

impl<I: Int> AxiomReport<I> {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn get(&self, role: &str) -> Option<&Element<I>> {
        self.witness.iter().find(|(r, _)| r == role).map(|(_, e)| e)
    }

    pub fn rendered(&self, s: &Semigroup<I>) -> Vec<(String, String)> {
        self.witness
            .iter()
            .map(|(r, e)| (r.clone(), s.render(e)))
            .collect()
    }
}

/// Sums of the generators with between one and `closure_depth` summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fragment<I: Int> {
    pub generators: Vec<Element<I>>,
    pub closure_depth: usize,
    pub elements: Vec<Element<I>>,
}

fn push_new<I: Int>(
    seen: &mut HashSet<Element<I>>,
    out: &mut Vec<Element<I>>,
    e: Element<I>,
) -> bool {
    if seen.insert(e.clone()) {
        out.push(e);
        true
    } else {
        false
    }
}

impl<I: Int> Fragment<I> {
    pub fn generate(s: &Semigroup<I>, generators: Vec<Element<I>>, depth: usize) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut elements = Vec::new();
        for g in &generators {
            s.owns(g)?;
            push_new(&mut seen, &mut elements, g.clone());
        }
        let mut layer = elements.clone();
        for _ in 1..depth {
            let mut next = Vec::new();
            for a in &layer {
                for g in &generators {
                    let e = s.add(a, g)?;
                    if push_new(&mut seen, &mut elements, e.clone()) {
                        next.push(e);
                    }
                }
            }
            layer = next;
        }
        Ok(Fragment {
            generators,
            closure_depth: depth.max(1),
            elements,
        })
    }

    pub fn of(s: &Semigroup<I>, elements: Vec<Element<I>>) -> Result<Self> {
        Fragment::generate(s, elements, 1)
    }

    pub fn parse(s: &Semigroup<I>, texts: &[&str]) -> Result<Self> {
        Fragment::of(s, texts.iter().map(|t| s.parse(t)).collect::<Result<_>>()?)
    }

    pub fn grid(s: &Semigroup<I>, g: &Grid) -> Self {
        Fragment::of(s, s.grid(g)).expect("grid elements belong to the semigroup")
    }

    /// A fragment sized so that every check of the suite stays fast.
    pub fn default_for(s: &Semigroup<I>) -> Self {
        if let Some(c) = s.kind::<Chain>() {
            let g = match (c.soft, c.m) {
                (false, _) => Grid::new(6, 1),
                (true, 1) => Grid::new(2, 4),
                // Soft values share the denominators of the compacts, so differences stay in the grid.
                (true, _) => Grid::compact_dens(2, 4),
            };
            return Fragment::grid(s, &g);
        }
        if s.kind::<Glued<I>>().is_some() {
            return glued_fragment(s).expect("fixture elements parse");
        }
        if let Some(k) = s.kind::<IntervalLsc<I>>() {
            let vals = [
                Value::Compact(Ratio::zero()),
                Value::Soft(ExtValue::frac(1, 2)),
                Value::Compact(Ratio::one()),
                Value::Soft(ExtValue::Infinite),
            ];
            let fs = k.enumerate(&[Ratio::zero(), Ratio::one()], &vals);
            return Fragment::of(s, fs.into_iter().map(|v| s.wrap(v)).collect())
                .expect("enumerated elements");
        }
        if s.kind::<ZStable<I>>().is_some() || s.kind::<TableKind>().is_some() {
            return Fragment::grid(s, &Grid::new(2, 2));
        }
        let mut all = s.grid(&Grid::new(2, 1));
        all.truncate(40);
        Fragment::of(s, all).expect("grid elements belong to the semigroup")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Elements of the glued semigroup with the pairs `(1,0), (1,1)` and the
/// indicator of the smallest nonempty open set first.
pub fn glued_fragment<I: Int>(s: &Semigroup<I>) -> Result<Fragment<I>> {
    let k = s
        .kind::<Glued<I>>()
        .ok_or_else(|| CuError::BadParam("not a glued semigroup".into()))?;
    let smallest = k
        .lsc
        .space
        .opens
        .iter()
        .copied()
        .filter(|&u| u != 0)
        .min_by_key(|u| u.count_ones())
        .unwrap_or(0);
    let mut xs = vec![
        s.wrap(k.pair(1, 0)),
        s.wrap(k.pair(1, 1)),
        s.wrap(k.indicator(smallest)),
    ];
    xs.extend(s.grid(&Grid::new(2, 1)));
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in xs {
        push_new(&mut seen, &mut out, x);
    }
    Fragment::of(s, out)
}

/// The glued semigroup over the three-point chain space `{p} ⊂ {p,q} ⊂ X`.
pub fn glued_chain3<I: Int>() -> Semigroup<I> {
    glued_semigroup(FiniteSpace::chain3()).expect("the chain space is connected")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Holds,
    Violated,
    Unknown,
}

const TERMS: u32 = 32;

/// `(a, b) ↦ (a + b stays in the fragment, a + b)`.
type SumCache<I> = HashMap<(Value<I>, Value<I>), (bool, Value<I>)>;

struct Ctx<'a, I: Int> {
    s: &'a Semigroup<I>,
    o: &'a dyn KindOps<I>,
    frag: Vec<Value<I>>,
    closure: OnceCell<Vec<Value<I>>>,
    terms: RefCell<HashMap<Value<I>, Vec<Value<I>>>>,
    sums: RefCell<SumCache<I>>,
}

impl<'a, I: Int> Ctx<'a, I> {
    fn new(s: &'a Semigroup<I>, frag: &Fragment<I>) -> Result<Self> {
        if frag.is_empty() {
            return Err(CuError::EmptyFragment);
        }
        for e in &frag.elements {
            s.owns(e)?;
        }
        Ok(Ctx {
            s,
            o: s.ops(),
            frag: frag.elements.iter().map(|e| e.value().clone()).collect(),
            closure: OnceCell::new(),
            terms: RefCell::new(HashMap::new()),
            sums: RefCell::new(HashMap::new()),
        })
    }

    fn le(&self, a: &Value<I>, b: &Value<I>) -> bool {
        self.o.leq(a, b)
    }

    fn wb(&self, a: &Value<I>, b: &Value<I>) -> bool {
        self.o.way_below(a, b)
    }

    fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        self.o.add(a, b)
    }

    fn times(&self, a: &Value<I>, n: u64) -> Value<I> {
        (0..n).fold(self.o.zero(), |acc, _| self.o.add(&acc, a))
    }

    /// New elements from one addition step and all wedges of the fragment.
    fn closure(&self) -> &[Value<I>] {
        self.closure.get_or_init(|| {
            let mut seen: HashSet<Value<I>> = self.frag.iter().cloned().collect();
            let mut out = Vec::new();
            for (i, a) in self.frag.iter().enumerate() {
                for b in &self.frag[i..] {
                    for v in [Some(self.o.add(a, b)), self.o.wedge(a, b)]
                        .into_iter()
                        .flatten()
                    {
                        if seen.insert(v.clone()) {
                            out.push(v);
                        }
                    }
                }
            }
            out
        })
    }

    fn pool(&self) -> impl Iterator<Item = &Value<I>> {
        self.frag.iter().chain(self.closure())
    }

    /// Searches for `w ≤ bound` with `pred(w)`.
    fn exists(&self, bound: &Value<I>, pred: impl Fn(&Value<I>) -> bool) -> Outcome {
        if self.pool().any(|w| self.le(w, bound) && pred(w)) {
            return Outcome::Holds;
        }
        match self.o.down_set(bound) {
            Some(ds) if ds.iter().any(&pred) => Outcome::Holds,
            Some(_) => Outcome::Violated,
            None => Outcome::Unknown,
        }
    }

    /// Searches for `s ≤ sb`, `t ≤ tb` with `ok(s, t)`.
    fn exists_pair(
        &self,
        sb: &Value<I>,
        tb: &Value<I>,
        ok: impl Fn(&Value<I>, &Value<I>) -> bool,
    ) -> Outcome {
        let any =
            |ss: &[&Value<I>], ts: &[&Value<I>]| ss.iter().any(|s| ts.iter().any(|t| ok(s, t)));
        let ss: Vec<&Value<I>> = self.pool().filter(|s| self.le(s, sb)).collect();
        let ts: Vec<&Value<I>> = self.pool().filter(|t| self.le(t, tb)).collect();
        if any(&ss, &ts) {
            return Outcome::Holds;
        }
        match (self.o.down_set(sb), self.o.down_set(tb)) {
            (Some(a), Some(b)) => {
                let (a, b): (Vec<&Value<I>>, Vec<&Value<I>>) =
                    (a.iter().collect(), b.iter().collect());
                if any(&a, &b) {
                    Outcome::Holds
                } else {
                    Outcome::Violated
                }
            }
            _ => Outcome::Unknown,
        }
    }

    /// Approximant terms of `a`, constant for compact `a`.
    fn terms(&self, a: &Value<I>) -> Vec<Value<I>> {
        if let Some(t) = self.terms.borrow().get(a) {
            return t.clone();
        }
        let t: Vec<Value<I>> = if self.o.is_compact(a) {
            vec![a.clone(); TERMS as usize]
        } else {
            let start = self.o.approx_start(a);
            (0..TERMS).map(|k| self.o.approx(a, start + k)).collect()
        };
        self.terms.borrow_mut().insert(a.clone(), t.clone());
        t
    }

    /// Whether the sums of approximants stay below `a + b`, and the last sum.
    fn term_sums(&self, a: &Value<I>, b: &Value<I>) -> (bool, Value<I>) {
        let key = (a.clone(), b.clone());
        if let Some(r) = self.sums.borrow().get(&key) {
            return r.clone();
        }
        let top = self.add(a, b);
        let sums: Vec<Value<I>> = self
            .terms(a)
            .iter()
            .zip(self.terms(b))
            .map(|(x, y)| self.add(x, &y))
            .collect();
        let below = sums.iter().all(|t| self.le(t, &top));
        let r = (below, sums.last().expect("nonempty").clone());
        self.sums.borrow_mut().insert(key, r.clone());
        r
    }

    fn eval(&self, axiom: Axiom, w: &[Value<I>], n: u64) -> Result<Outcome> {
        use Outcome::*;
        let verdict = |ok: bool| if ok { Holds } else { Violated };
        Ok(match axiom {
            Axiom::O1 if w.len() == 2 => {
                let d = crate::order::SequenceDescriptor::affine(
                    vec![],
                    self.s.wrap(w[0].clone()),
                    self.s.wrap(w[1].clone()),
                );
                match self.s.sup(&d) {
                    Ok(_) | Err(CuError::NotIncreasing(_)) => Holds,
                    Err(CuError::NoSupremum(_)) | Err(CuError::Unsupported(_)) => Violated,
                    Err(e) => return Err(e),
                }
            }
            Axiom::O1 => {
                let a = self.s.wrap(w[0].clone());
                verdict(self.s.sup(&self.s.approximants(&a)?)? == a)
            }
            Axiom::O2 => {
                let a = self.s.wrap(w[0].clone());
                let d = self.s.approximants(&a)?;
                let mut ok = self.s.sup(&d)? == a;
                for j in 0..8 {
                    let (x, y) = (self.s.term(&d, j)?, self.s.term(&d, j + 1)?);
                    ok &= self.wb(x.value(), y.value()) && self.le(x.value(), &w[0]);
                }
                verdict(ok)
            }
            Axiom::O3 => {
                if !(self.wb(&w[0], &w[1]) && self.wb(&w[2], &w[3])) {
                    return Ok(Holds);
                }
                verdict(self.wb(&self.add(&w[0], &w[2]), &self.add(&w[1], &w[3])))
            }
            Axiom::O4 => {
                let (below, last) = self.term_sums(&w[0], &w[1]);
                verdict(
                    below && (!self.wb(&w[2], &self.add(&w[0], &w[1])) || self.le(&w[2], &last)),
                )
            }
            Axiom::O5 => {
                let (xp, x, zp, z, y) = (&w[0], &w[1], &w[2], &w[3], &w[4]);
                if !(self.wb(xp, x) && self.wb(zp, z) && self.le(&self.add(x, z), y)) {
                    return Ok(Holds);
                }
                self.exists(y, |v| {
                    self.le(&self.add(xp, v), y) && self.le(y, &self.add(x, v)) && self.le(zp, v)
                })
            }
            Axiom::O6 => {
                let (xp, x, y, z) = (&w[0], &w[1], &w[2], &w[3]);
                if !(self.wb(xp, x) && self.le(x, &self.add(y, z))) {
                    return Ok(Holds);
                }
                if let (Some(s), Some(t)) = (self.o.wedge(x, y), self.o.wedge(x, z)) {
                    return Ok(verdict(self.le(xp, &self.add(&s, &t))));
                }
                let (sy, tz) = (y.clone(), z.clone());
                self.exists_pair(x, x, |s, t| {
                    self.le(s, &sy) && self.le(t, &tz) && self.le(xp, &self.add(s, t))
                })
            }
            Axiom::O6Plus => {
                let (x, y, z, up, u) = (&w[0], &w[1], &w[2], &w[3], &w[4]);
                if !(self.le(x, &self.add(y, z))
                    && self.wb(up, u)
                    && self.le(u, x)
                    && self.le(u, y))
                {
                    return Ok(Holds);
                }
                if let Some(s) = self.o.wedge(x, y) {
                    return Ok(verdict(self.wb(up, &s) && self.le(x, &self.add(&s, z))));
                }
                self.exists(x, |s| {
                    self.le(s, y) && self.wb(up, s) && self.le(x, &self.add(s, z))
                })
            }
            Axiom::WC => {
                if !self.wb(&self.add(&w[0], &w[2]), &self.add(&w[1], &w[2])) {
                    return Ok(Holds);
                }
                verdict(self.wb(&w[0], &w[1]))
            }
            Axiom::Riesz => {
                let (x, y, z, t) = (&w[0], &w[1], &w[2], &w[3]);
                if !(self.le(x, z) && self.le(x, t) && self.le(y, z) && self.le(y, t)) {
                    return Ok(Holds);
                }
                if let Some(m) = self.o.wedge(z, t) {
                    return Ok(verdict(self.le(x, &m) && self.le(y, &m)));
                }
                self.exists(z, |v| self.le(x, v) && self.le(y, v) && self.le(v, t))
            }
            Axiom::AlmostDiv => {
                let (xp, x) = (&w[0], &w[1]);
                if !self.wb(xp, x) {
                    return Ok(Holds);
                }
                self.exists(x, |v| {
                    self.le(&self.times(v, n), x) && self.le(xp, &self.times(v, n + 1))
                })
            }
            Axiom::AlmostUnperforation => {
                if !self.le(&self.times(&w[0], n + 1), &self.times(&w[1], n)) {
                    return Ok(Holds);
                }
                verdict(self.le(&w[0], &w[1]))
            }
            Axiom::Simple => {
                let z = self.o.zero();
                if w[0] == z || w[1] == z {
                    return Ok(Holds);
                }
                verdict(self.le(&w[0], &self.o.infinity(&w[1])?))
            }
            Axiom::StrictComparison | Axiom::Interpolation => {
                return Err(CuError::Unsupported(format!(
                    "{axiom} has its own entry point"
                )));
            }
        })
    }
}

const MAX_DIV: u64 = 4;

/// Accumulates the outcome of visited instances.
struct Run<'c, 'a, I: Int> {
    ctx: &'c Ctx<'a, I>,
    axiom: Axiom,
    examined: u64,
    unknown: Option<(Vec<Value<I>>, Option<u64>)>,
    fail: Option<(Vec<Value<I>>, Option<u64>)>,
}

impl<'c, 'a, I: Int> Run<'c, 'a, I> {
    fn new(ctx: &'c Ctx<'a, I>, axiom: Axiom) -> Self {
        Run {
            ctx,
            axiom,
            examined: 0,
            unknown: None,
            fail: None,
        }
    }

    /// Returns true once a violation was found.
    fn visit(&mut self, w: &[&Value<I>], n: Option<u64>) -> Result<bool> {
        self.examined += 1;
        let w: Vec<Value<I>> = w.iter().map(|v| (*v).clone()).collect();
        match self.ctx.eval(self.axiom, &w, n.unwrap_or(1))? {
            Outcome::Holds => Ok(false),
            Outcome::Violated => {
                self.fail = Some((w, n));
                Ok(true)
            }
            Outcome::Unknown => {
                if self.unknown.is_none() {
                    self.unknown = Some((w, n));
                }
                Ok(false)
            }
        }
    }

    fn finish(self) -> AxiomReport<I> {
        let (verdict, inst, note) = match (self.fail, self.unknown) {
            (Some(f), _) => (Verdict::Fail, Some(f), None),
            (None, Some(u)) => (
                Verdict::Inconclusive,
                Some(u),
                Some("no witness in the searched closure for this instance".to_string()),
            ),
            (None, None) => (Verdict::Pass, None, None),
        };
        let (witness, multiplier) = match inst {
            Some((w, n)) => {
                let roles = self.axiom.roles(w.len());
                (
                    roles
                        .iter()
                        .zip(w)
                        .map(|(r, v)| (r.to_string(), self.ctx.s.wrap(v)))
                        .collect(),
                    n,
                )
            }
            None => (vec![], None),
        };
        AxiomReport {
            axiom: self.axiom,
            verdict,
            witness,
            multiplier,
            examined: self.examined,
            note,
        }
    }
}

pub fn check_axiom<I: Int>(
    s: &Semigroup<I>,
    axiom: Axiom,
    frag: &Fragment<I>,
) -> Result<AxiomReport<I>> {
    let ctx = Ctx::new(s, frag)?;
    let mut run = Run::new(&ctx, axiom);
    search(&ctx, &mut run)?;
    Ok(run.finish())
}

fn search<I: Int>(ctx: &Ctx<'_, I>, run: &mut Run<'_, '_, I>) -> Result<()> {
    let f = &ctx.frag;
    let n = f.len();
    let le: Vec<Vec<bool>> = f
        .iter()
        .map(|a| f.iter().map(|b| ctx.le(a, b)).collect())
        .collect();
    let wb: Vec<Vec<bool>> = f
        .iter()
        .map(|a| f.iter().map(|b| ctx.wb(a, b)).collect())
        .collect();
    let wb = &wb;
    let below = |j: usize| (0..n).filter(move |&i| wb[i][j]);
    let zero = ctx.o.zero();
    match run.axiom {
        Axiom::O1 => {
            for a in f {
                if run.visit(&[a], None)? {
                    return Ok(());
                }
            }
            for a in f {
                for b in f.iter().filter(|b| **b != zero) {
                    if run.visit(&[a, b], None)? {
                        return Ok(());
                    }
                }
            }
        }
        Axiom::O2 => {
            for a in f {
                if run.visit(&[a], None)? {
                    return Ok(());
                }
            }
        }
        Axiom::O3 => {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|j| below(j).map(move |i| (i, j))).collect();
            for (k, &(ap, a)) in pairs.iter().enumerate() {
                for &(bp, b) in &pairs[k..] {
                    if run.visit(&[&f[ap], &f[a], &f[bp], &f[b]], None)? {
                        return Ok(());
                    }
                }
            }
        }
        Axiom::O4 => {
            for i in 0..n {
                for j in i..n {
                    for x in f {
                        if run.visit(&[&f[i], &f[j], x], None)? {
                            return Ok(());
                        }
                    }
                }
            }
        }
        Axiom::O5 => {
            for x in 0..n {
                for z in 0..n {
                    let xz = ctx.add(&f[x], &f[z]);
                    for y in f.iter().filter(|y| ctx.le(&xz, y)) {
                        for xp in below(x) {
                            for zp in below(z) {
                                if run.visit(&[&f[xp], &f[x], &f[zp], &f[z], y], None)? {
                                    return Ok(());
                                }
                            }
                        }
                    }
                }
            }
        }
        Axiom::O6 => {
            for x in 0..n {
                for y in 0..n {
                    for z in y..n {
                        if !ctx.le(&f[x], &ctx.add(&f[y], &f[z])) {
                            continue;
                        }
                        for xp in below(x) {
                            if run.visit(&[&f[xp], &f[x], &f[y], &f[z]], None)? {
                                return Ok(());
                            }
                        }
                    }
                }
            }
        }
        Axiom::O6Plus => {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if !ctx.le(&f[x], &ctx.add(&f[y], &f[z])) {
                            continue;
                        }
                        for u in (0..n).filter(|&u| le[u][x] && le[u][y]) {
                            for up in below(u) {
                                if run.visit(&[&f[x], &f[y], &f[z], &f[up], &f[u]], None)? {
                                    return Ok(());
                                }
                            }
                        }
                    }
                }
            }
        }
        Axiom::WC => {
            for x in f {
                for y in f {
                    for z in f {
                        if run.visit(&[x, y, z], None)? {
                            return Ok(());
                        }
                    }
                }
            }
        }
        Axiom::Riesz => {
            for z in 0..n {
                for t in z..n {
                    let common: Vec<usize> = (0..n).filter(|&i| le[i][z] && le[i][t]).collect();
                    for (k, &x) in common.iter().enumerate() {
                        for &y in &common[k..] {
                            if run.visit(&[&f[x], &f[y], &f[z], &f[t]], None)? {
                                return Ok(());
                            }
                        }
                    }
                }
            }
        }
        Axiom::AlmostDiv => {
            for x in 0..n {
                for xp in below(x) {
                    for k in 1..=MAX_DIV {
                        if run.visit(&[&f[xp], &f[x]], Some(k))? {
                            return Ok(());
                        }
                    }
                }
            }
        }
        Axiom::Simple => {
            for a in f {
                for b in f {
                    if run.visit(&[a, b], None)? {
                        return Ok(());
                    }
                }
            }
        }
        Axiom::AlmostUnperforation | Axiom::StrictComparison | Axiom::Interpolation => {
            return Err(CuError::BadParam(format!(
                "{} has its own entry point",
                run.axiom
            )));
        }
    }
    Ok(())
}

/// Searches all `(s, t, n ≤ n_max)` for `(n+1)s ≤ nt` with `s ≰ t`.
pub fn check_almost_unperforation<I: Int>(
    s: &Semigroup<I>,
    frag: &Fragment<I>,
    n_max: u64,
) -> Result<AxiomReport<I>> {
    if n_max == 0 {
        return Err(CuError::BadParam("n_max must be at least 1".into()));
    }
    let ctx = Ctx::new(s, frag)?;
    let mut run = Run::new(&ctx, Axiom::AlmostUnperforation);
    'outer: for a in &ctx.frag {
        for b in &ctx.frag {
            for k in 1..=n_max {
                if run.visit(&[a, b], Some(k))? {
                    break 'outer;
                }
            }
        }
    }
    Ok(run.finish())
}

fn strictly_below<I: Int>(fs: &[Functional<I>], a: &Element<I>, b: &Element<I>) -> Result<bool> {
    for f in fs {
        if evaluate(f, a)? >= evaluate(f, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Pairs with `λ(s) < λ(t)` for every supplied functional must satisfy `s ≤ t`.
pub fn check_strict_comparison<I: Int>(
    s: &Semigroup<I>,
    frag: &Fragment<I>,
    functionals: &[Functional<I>],
) -> Result<AxiomReport<I>> {
    if functionals.is_empty() {
        return Err(CuError::EmptyFunctionalFamily);
    }
    let mut examined = 0;
    for a in &frag.elements {
        for b in &frag.elements {
            examined += 1;
            if strictly_below(functionals, a, b)? && !s.leq(a, b)? {
                return Ok(AxiomReport {
                    axiom: Axiom::StrictComparison,
                    verdict: Verdict::Fail,
                    witness: vec![("s".into(), a.clone()), ("t".into(), b.clone())],
                    multiplier: None,
                    examined,
                    note: None,
                });
            }
        }
    }
    Ok(AxiomReport {
        axiom: Axiom::StrictComparison,
        verdict: Verdict::Pass,
        witness: vec![],
        multiplier: None,
        examined,
        note: None,
    })
}

/// Simplicity on the fragment: `a ≤ ∞_b` for all nonzero `a, b`.
pub fn simplicity<I: Int>(s: &Semigroup<I>, frag: &Fragment<I>) -> Result<AxiomReport<I>> {
    let ctx = Ctx::new(s, frag)?;
    if ctx.frag.iter().all(|x| *x == ctx.o.zero()) {
        return Err(CuError::EmptyFragment);
    }
    let mut run = Run::new(&ctx, Axiom::Simple);
    search(&ctx, &mut run)?;
    Ok(run.finish())
}

pub fn is_simple<I: Int>(s: &Semigroup<I>, frag: &Fragment<I>) -> Result<bool> {
    Ok(simplicity(s, frag)?.passed())
}

/// Re-evaluates the axiom body on the witness of a failed report.
pub fn replay<I: Int>(
    s: &Semigroup<I>,
    frag: &Fragment<I>,
    report: &AxiomReport<I>,
) -> Result<bool> {
    if report.verdict != Verdict::Fail {
        return Ok(false);
    }
    let ctx = Ctx::new(s, frag)?;
    let w: Vec<Value<I>> = report
        .witness
        .iter()
        .map(|(_, e)| e.value().clone())
        .collect();
    Ok(ctx.eval(report.axiom, &w, report.multiplier.unwrap_or(1))? == Outcome::Violated)
}

pub fn replay_strict_comparison<I: Int>(
    s: &Semigroup<I>,
    report: &AxiomReport<I>,
    functionals: &[Functional<I>],
) -> Result<bool> {
    let (Some(a), Some(b)) = (report.get("s"), report.get("t")) else {
        return Ok(false);
    };
    Ok(strictly_below(functionals, a, b)? && !s.leq(a, b)?)
}
