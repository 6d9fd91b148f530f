//! Morphisms between catalog semigroups and direct limits.

use std::any::Any;

use num_traits::Zero;

use crate::catalog::{Chain, FiniteTable, IntervalLsc, StepFn, TableKind};
use crate::constructions::completion::{gamma_completion, AuxRel, WCarrier, WSemigroup};
use crate::constructions::product::CuProduct;
use crate::error::{CuError, Result};
use crate::order::{Element, Grid, KindOps, Semigroup, Value};
use crate::scalar::{int, ExtValue, Int};
use crate::text::Cursor;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismAction {
    /// Multiplication by a positive integer between chains.
    Scale(u64),
    Identity,
    /// Projection of a product onto one factor.
    Coordinate(usize),
    /// `f ↦ ∫ f`, as a constant function or as a scalar.
    Integration,
    /// Row map between finite tables.
    Table(Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct Morphism<I: Int> {
    pub domain: Semigroup<I>,
    pub codomain: Semigroup<I>,
    pub action: MorphismAction,
}

fn integrate<I: Int>(dom: &IntervalLsc<I>, f: &StepFn<I>) -> ExtValue<I> {
    let t = dom.target.ops();
    f.integral(|v| t.scalar(v).expect("chain target"))
}

impl<I: Int> Morphism<I> {
    pub fn new(
        domain: Semigroup<I>,
        codomain: Semigroup<I>,
        action: MorphismAction,
    ) -> Result<Self> {
        let bad = |m: String| Err(CuError::NotMorphism(m));
        match &action {
            MorphismAction::Scale(_) => {
                if domain.kind::<Chain>().is_none() || codomain.kind::<Chain>().is_none() {
                    return bad("scaling acts between chains".into());
                }
            }
            MorphismAction::Identity => {
                if domain != codomain && domain.label() != codomain.label() {
                    return bad(format!(
                        "identity from {} to {}",
                        domain.label(),
                        codomain.label()
                    ));
                }
            }
            MorphismAction::Coordinate(i) => match domain.kind::<CuProduct<I>>() {
                Some(p) if p.factors.get(*i) == Some(&codomain) => {}
                _ => {
                    return bad(format!(
                        "coordinate {i} does not map {} onto {}",
                        domain.label(),
                        codomain.label()
                    ))
                }
            },
            MorphismAction::Integration => {
                let cod_ok = codomain == domain || codomain.kind::<Chain>().is_some();
                if domain.kind::<IntervalLsc<I>>().is_none() || !cod_ok {
                    return bad("integration maps interval functions to constants".into());
                }
            }
            MorphismAction::Table(map) => {
                match (domain.kind::<TableKind>(), codomain.kind::<TableKind>()) {
                    (Some(d), Some(c))
                        if map.len() == d.table.len() && map.iter().all(|&j| j < c.table.len()) => {
                    }
                    _ => return bad("table map has the wrong shape".into()),
                }
            }
        }
        let m = Morphism {
            domain,
            codomain,
            action,
        };
        m.check_contract()?;
        Ok(m)
    }

    pub fn apply_value(&self, v: &Value<I>) -> Result<Value<I>> {
        let out = match (&self.action, v) {
            (MorphismAction::Identity, _) => v.clone(),
            (MorphismAction::Scale(k), Value::Compact(q)) => {
                Value::Compact(q * int::<I>(*k as i64))
            }
            (MorphismAction::Scale(0), Value::Soft(_)) => Value::zero_scalar(),
            (MorphismAction::Scale(k), Value::Soft(x)) => Value::Soft(x.scale(&int(*k as i64))),
            (MorphismAction::Coordinate(i), Value::Tuple(xs)) => xs[*i].clone(),
            (MorphismAction::Table(map), Value::Index(i)) => Value::Index(map[*i]),
            (MorphismAction::Integration, Value::Step(f)) => {
                let dom = self
                    .domain
                    .kind::<IntervalLsc<I>>()
                    .expect("checked at construction");
                let x = match integrate(dom, f) {
                    ExtValue::Finite(q) if self.domain.ops().is_compact(v) || q.is_zero() => {
                        Value::Compact(q)
                    }
                    x => Value::Soft(x),
                };
                if self.codomain.kind::<Chain>().is_some() {
                    x
                } else {
                    Value::Step(StepFn::constant(x))
                }
            }
            _ => {
                return Err(CuError::InvalidElement(format!(
                    "{v:?} is outside the domain of {:?}",
                    self.action
                )))
            }
        };
        self.codomain.ops().normalize(out)
    }

    pub fn apply(&self, a: &Element<I>) -> Result<Element<I>> {
        self.domain.owns(a)?;
        self.codomain.element(self.apply_value(a.value())?)
    }

    fn probe(&self) -> Vec<Value<I>> {
        let mut p = self.domain.ops().grid(&Grid::new(1, 1));
        p.truncate(48);
        p
    }

    /// Zero, addition, order and ≪ are preserved on a probe of the domain.
    pub fn check_contract(&self) -> Result<()> {
        let (d, c) = (self.domain.ops(), self.codomain.ops());
        let bad = |m: String| Err(CuError::NotMorphism(m));
        let p = self.probe();
        let img: Vec<Value<I>> = p
            .iter()
            .map(|x| self.apply_value(x))
            .collect::<Result<_>>()?;
        if self.apply_value(&d.zero())? != c.zero() {
            return bad("zero is not preserved".into());
        }
        for (i, x) in p.iter().enumerate() {
            for (j, y) in p.iter().enumerate() {
                if self.apply_value(&d.add(x, y))? != c.add(&img[i], &img[j]) {
                    return bad(format!("addition at {}, {}", d.render(x), d.render(y)));
                }
                if d.leq(x, y) && !c.leq(&img[i], &img[j]) {
                    return bad(format!("order at {} ≤ {}", d.render(x), d.render(y)));
                }
                if d.way_below(x, y) && !c.way_below(&img[i], &img[j]) {
                    return bad(format!("≪ at {} ≪ {}", d.render(x), d.render(y)));
                }
            }
        }
        Ok(())
    }
}

/// Image of an idempotent endomorphism: the stationary limit along it.
#[derive(Clone, Debug)]
pub struct FixedPoints<I: Int> {
    pub phi: Morphism<I>,
}

impl<I: Int> FixedPoints<I> {
    fn base(&self) -> &dyn KindOps<I> {
        self.phi.domain.ops()
    }

    fn project(&self, v: &Value<I>) -> Value<I> {
        self.phi
            .apply_value(v)
            .expect("endomorphism on its own domain")
    }
}

impl<I: Int> KindOps<I> for FixedPoints<I> {
    fn label(&self) -> String {
        format!("lim({}, {:?})", self.phi.domain.label(), self.phi.action).to_lowercase()
    }

    fn zero(&self) -> Value<I> {
        self.base().zero()
    }

    /// An element of the stage is sent to its class in the limit.
    fn normalize(&self, v: Value<I>) -> Result<Value<I>> {
        let v = self.base().normalize(v)?;
        self.phi.apply_value(&v)
    }

    fn leq(&self, a: &Value<I>, b: &Value<I>) -> bool {
        self.base().leq(a, b)
    }

    fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        self.base().add(a, b)
    }

    fn way_below(&self, a: &Value<I>, b: &Value<I>) -> bool {
        self.base().way_below(a, b)
    }

    fn wedge(&self, a: &Value<I>, b: &Value<I>) -> Option<Value<I>> {
        self.base().wedge(a, b).map(|w| self.project(&w))
    }

    fn approx(&self, a: &Value<I>, k: u32) -> Value<I> {
        self.project(&self.base().approx(a, k))
    }

    fn approx_start(&self, a: &Value<I>) -> u32 {
        self.base().approx_start(a)
    }

    fn infinity(&self, a: &Value<I>) -> Result<Value<I>> {
        self.base().infinity(a)
    }

    fn grid(&self, g: &Grid) -> Vec<Value<I>> {
        let raw: Vec<Value<I>> = match (&self.phi.action, self.phi.domain.kind::<IntervalLsc<I>>())
        {
            // images of integration are constants; enumerating all step functions would be wasteful
            (MorphismAction::Integration, Some(dom)) => dom
                .target
                .ops()
                .grid(g)
                .into_iter()
                .filter_map(|v| self.base().normalize(Value::Step(StepFn::constant(v))).ok())
                .collect(),
            _ => self.base().grid(g),
        };
        let mut out: Vec<Value<I>> = Vec::new();
        for v in raw {
            let v = self.project(&v);
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    fn scalar(&self, a: &Value<I>) -> Option<ExtValue<I>> {
        match a {
            Value::Step(f) if f.breaks.len() == 2 => self
                .phi
                .domain
                .kind::<IntervalLsc<I>>()?
                .target
                .ops()
                .scalar(&f.gaps[0]),
            _ => self.base().scalar(a),
        }
    }

    fn render(&self, v: &Value<I>) -> String {
        self.base().render(v)
    }

    fn parse(&self, c: &mut Cursor<'_>) -> Result<Value<I>> {
        self.base().parse(c)
    }

    fn is_cu(&self) -> bool {
        self.base().is_cu()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Limit of `stages[0] → stages[1] → … → stages[n-1] → stages[0] → …`,
/// with `maps[i]: stages[i] → stages[(i+1) % n]`.
pub fn direct_limit<I: Int>(stages: &[Semigroup<I>], maps: &[Morphism<I>]) -> Result<Semigroup<I>> {
    let n = stages.len();
    if n == 0 || maps.len() != n {
        return Err(CuError::MorphismMismatch(maps.len().min(n)));
    }
    for (i, m) in maps.iter().enumerate() {
        if m.domain != stages[i] || m.codomain != stages[(i + 1) % n] {
            return Err(CuError::MorphismMismatch(i));
        }
    }
    if maps.iter().all(|m| m.action == MorphismAction::Identity) {
        return Ok(gamma_completion(WSemigroup::new(
            WCarrier::Handle(stages[0].clone()),
            AuxRel::WayBelow,
        )?));
    }
    let nbar_stages = stages
        .iter()
        .all(|s| s.kind::<Chain>() == Some(&Chain { m: 1, soft: false }));
    if nbar_stages {
        let mut period = 1u64;
        for m in maps {
            let MorphismAction::Scale(k) = m.action else {
                return Err(CuError::Unsupported(format!(
                    "{:?} between copies of nbar",
                    m.action
                )));
            };
            period = period
                .checked_mul(k)
                .ok_or_else(|| CuError::Unsupported("scaling overflows".into()))?;
        }
        if period == 0 {
            return crate::catalog::make_finite_table(FiniteTable::trivial());
        }
        // ≪ of N̄ is "finite and ≤", which transports to the union of the stages.
        return Ok(gamma_completion(WSemigroup::scalars(
            period,
            true,
            AuxRel::FiniteLeq,
        )?));
    }
    if n == 1 {
        let phi = &maps[0];
        let idempotent = phi
            .probe()
            .iter()
            .map(|x| Ok(phi.apply_value(&phi.apply_value(x)?)? == phi.apply_value(x)?))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|b| b);
        if idempotent {
            let stage = Semigroup::from_ops(FixedPoints { phi: phi.clone() });
            return Ok(gamma_completion(WSemigroup::new(
                WCarrier::Handle(stage),
                AuxRel::WayBelow,
            )?));
        }
    }
    Err(CuError::Unsupported(
        "this limit has no closed form here".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_dimension_drop, make_finite_table, nbar, softened};
    use crate::constructions::cu_product;

    #[test]
    fn doubling_limit_contains_dyadics() {
        let n = nbar::<i128>();
        let m = Morphism::new(n.clone(), n.clone(), MorphismAction::Scale(2)).unwrap();
        let l = direct_limit(&[n], &[m]).unwrap();
        let e = |t: &str| l.parse(t).unwrap();
        assert!(l.leq(&e("lim(1/2)"), &e("const(1/2)")).unwrap());
        assert!(l.parse("const(1/3)").is_err());
        assert!(!l.is_compact(&e("lim(inf)")).unwrap());
    }

    #[test]
    fn cyclic_reading_multiplies_the_period() {
        let (a, b) = (nbar::<i128>(), nbar::<i128>());
        let f = Morphism::new(a.clone(), b.clone(), MorphismAction::Scale(2)).unwrap();
        let g = Morphism::new(b.clone(), a.clone(), MorphismAction::Scale(3)).unwrap();
        let l = direct_limit(&[a.clone(), b.clone()], &[f.clone(), g.clone()]).unwrap();
        assert!(l.parse("const(1/6)").is_ok());
        assert!(matches!(
            direct_limit(&[a, b], &[g, f]),
            Err(CuError::MorphismMismatch(0))
        ));
    }

    #[test]
    fn integration_on_dimension_drop() {
        let d = make_dimension_drop::<i128>();
        let phi = Morphism::new(d.clone(), d.clone(), MorphismAction::Integration).unwrap();
        let f = d
            .parse("step(0=0, (0,1/2)=c:1, 1/2=0, (1/2,1)=0, 1=0)")
            .unwrap();
        assert_eq!(
            d.render(&phi.apply(&f).unwrap()),
            "step(0=s:1/2, (0,1)=s:1/2, 1=s:1/2)"
        );
        let one = d.parse("c:1").unwrap();
        assert_eq!(phi.apply(&one).unwrap(), one);
        let l = direct_limit(std::slice::from_ref(&d), &[phi]).unwrap();
        assert!(l
            .leq(
                &l.parse("const(s:1)").unwrap(),
                &l.parse("const(c:1)").unwrap()
            )
            .unwrap());
    }

    #[test]
    fn identity_limit_and_bad_maps() {
        let s = softened::<i128>(1);
        let id = Morphism::new(s.clone(), s.clone(), MorphismAction::Identity).unwrap();
        let l = direct_limit(std::slice::from_ref(&s), &[id]).unwrap();
        assert_eq!(l.render(&l.parse("lim(s:2)").unwrap()), "lim(s:2)");
        let t = make_finite_table::<i128>(FiniteTable::zero_one_infinity()).unwrap();
        let err =
            Morphism::new(t.clone(), t.clone(), MorphismAction::Table(vec![0, 2, 1])).unwrap_err();
        assert!(matches!(err, CuError::NotMorphism(_)));
        let p = cu_product(vec![nbar::<i128>(), s.clone()]);
        let pr = Morphism::new(p.clone(), s.clone(), MorphismAction::Coordinate(1)).unwrap();
        assert_eq!(
            pr.apply(&p.parse("(3, s:1/2)").unwrap()).unwrap(),
            s.parse("s:1/2").unwrap()
        );
    }
}
