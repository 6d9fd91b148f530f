//! Lower semicontinuous functions on a finite topological space.

use std::any::Any;

use crate::error::{CuError, Result};
use crate::order::{Grid, KindOps, Semigroup, Value};
use crate::scalar::Int;
use crate::text::{join, Cursor};

/// A finite space; opens are bitmasks over the points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    pub points: Vec<String>,
    pub opens: Vec<u64>,
}

impl FiniteSpace {
    pub fn new(points: &[&str], opens: Vec<u64>) -> Result<Self> {
        let s = FiniteSpace {
            points: points.iter().map(|p| p.to_string()).collect(),
            opens,
        };
        s.validate()?;
        Ok(s)
    }

    /// Points `p, q, r` with opens `∅ ⊂ {p} ⊂ {p,q} ⊂ X`.
    pub fn chain3() -> Self {
        FiniteSpace::new(&["p", "q", "r"], vec![0b000, 0b001, 0b011, 0b111]).expect("valid")
    }

    pub fn discrete(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        FiniteSpace::new(&refs, (0..(1u64 << n)).collect()).expect("valid")
    }

    pub fn full(&self) -> u64 {
        (1u64 << self.points.len()) - 1
    }

    fn validate(&self) -> Result<()> {
        let n = self.points.len();
        if n == 0 || n > 20 {
            return Err(CuError::BadParam("finite spaces need 1..=20 points".into()));
        }
        let has = |u: u64| self.opens.contains(&u);
        if !has(0) || !has(self.full()) {
            return Err(CuError::BadParam(
                "opens must contain the empty set and the whole space".into(),
            ));
        }
        for &u in &self.opens {
            if u & !self.full() != 0 {
                return Err(CuError::BadParam(
                    "open set mentions a missing point".into(),
                ));
            }
            for &v in &self.opens {
                if !has(u | v) || !has(u & v) {
                    return Err(CuError::BadParam(
                        "opens not closed under union and intersection".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Smallest open set containing point `i`.
    pub fn nbhd(&self, i: usize) -> u64 {
        self.opens
            .iter()
            .filter(|&&u| u >> i & 1 == 1)
            .fold(self.full(), |acc, &u| acc & u)
    }

    pub fn is_connected(&self) -> bool {
        let full = self.full();
        !self
            .opens
            .iter()
            .any(|&u| u != 0 && u != full && self.opens.contains(&(full & !u)))
    }
}

/// `Lsc(X, T)` for a finite space `X` and a chain target `T`.
#[derive(Clone, Debug)]
pub struct LscSpace<I: Int> {
    pub space: FiniteSpace,
    pub target: Semigroup<I>,
    /// `nbhd[i]`: points of the minimal neighbourhood of point `i`.
    nbhd: Vec<Vec<usize>>,
}

impl<I: Int> LscSpace<I> {
    pub fn new(space: FiniteSpace, target: Semigroup<I>) -> Self {
        let n = space.points.len();
        let nbhd = (0..n)
            .map(|i| (0..n).filter(|&j| space.nbhd(i) >> j & 1 == 1).collect())
            .collect();
        LscSpace {
            space,
            target,
            nbhd,
        }
    }

    fn vals<'a>(&self, v: &'a Value<I>) -> &'a [Value<I>] {
        match v {
            Value::Points(p) => p,
            _ => &[],
        }
    }

    /// Lower semicontinuity on a finite space: values do not drop inside minimal neighbourhoods.
    pub fn is_lsc(&self, f: &[Value<I>]) -> bool {
        let t = self.target.ops();
        (0..f.len()).all(|i| self.nbhd[i].iter().all(|&j| t.leq(&f[i], &f[j])))
    }

    fn pointwise(
        &self,
        a: &Value<I>,
        b: &Value<I>,
        op: impl Fn(&Value<I>, &Value<I>) -> Value<I>,
    ) -> Value<I> {
        Value::Points(
            self.vals(a)
                .iter()
                .zip(self.vals(b))
                .map(|(x, y)| op(x, y))
                .collect(),
        )
    }

    /// Lsc repair used by approximants: `g(x) = min_{y ∈ U_x} f(y)`.
    fn lsc_floor(&self, f: Vec<Value<I>>) -> Vec<Value<I>> {
        let t = self.target.ops();
        (0..f.len())
            .map(|i| {
                self.nbhd[i]
                    .iter()
                    .fold(f[i].clone(), |acc, &j| t.wedge(&acc, &f[j]).unwrap_or(acc))
            })
            .collect()
    }

    /// All lsc functions with point values drawn from `values`.
    pub fn enumerate(&self, values: &[Value<I>]) -> Vec<Value<I>> {
        let n = self.space.points.len();
        let mut out = Vec::new();
        let mut idx = vec![0usize; n];
        if values.is_empty() {
            return out;
        }
        loop {
            let f: Vec<Value<I>> = idx.iter().map(|&i| values[i].clone()).collect();
            if self.is_lsc(&f) {
                out.push(Value::Points(f));
            }
            let mut p = 0;
            loop {
                if p == n {
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

    pub fn indicator(&self, open: u64, v: &Value<I>) -> Value<I> {
        let z = self.target.ops().zero();
        Value::Points(
            (0..self.space.points.len())
                .map(|i| {
                    if open >> i & 1 == 1 {
                        v.clone()
                    } else {
                        z.clone()
                    }
                })
                .collect(),
        )
    }
}

impl<I: Int> KindOps<I> for LscSpace<I> {
    fn label(&self) -> String {
        format!(
            "lsc({} points, {})",
            self.space.points.len(),
            self.target.label()
        )
    }

    fn zero(&self) -> Value<I> {
        Value::Points(vec![self.target.ops().zero(); self.space.points.len()])
    }

    fn normalize(&self, v: Value<I>) -> Result<Value<I>> {
        let Value::Points(f) = v else {
            return Err(CuError::InvalidElement("expected a point list".into()));
        };
        if f.len() != self.space.points.len() {
            return Err(CuError::InvalidElement(
                "wrong number of point values".into(),
            ));
        }
        let f = f
            .into_iter()
            .map(|x| self.target.ops().normalize(x))
            .collect::<Result<Vec<_>>>()?;
        if !self.is_lsc(&f) {
            return Err(CuError::InvalidElement(
                "function is not lower semicontinuous".into(),
            ));
        }
        Ok(Value::Points(f))
    }

    fn leq(&self, a: &Value<I>, b: &Value<I>) -> bool {
        let t = self.target.ops();
        self.vals(a)
            .iter()
            .zip(self.vals(b))
            .all(|(x, y)| t.leq(x, y))
    }

    fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        let t = self.target.ops();
        self.pointwise(a, b, |x, y| t.add(x, y))
    }

    fn way_below(&self, a: &Value<I>, b: &Value<I>) -> bool {
        let t = self.target.ops();
        self.vals(a)
            .iter()
            .zip(self.vals(b))
            .all(|(x, y)| t.way_below(x, y))
    }

    fn wedge(&self, a: &Value<I>, b: &Value<I>) -> Option<Value<I>> {
        let t = self.target.ops();
        let f: Option<Vec<Value<I>>> = self
            .vals(a)
            .iter()
            .zip(self.vals(b))
            .map(|(x, y)| t.wedge(x, y))
            .collect();
        let f = f?;
        self.is_lsc(&f).then_some(Value::Points(f))
    }

    fn approx(&self, a: &Value<I>, k: u32) -> Value<I> {
        let t = self.target.ops();
        Value::Points(self.lsc_floor(self.vals(a).iter().map(|x| t.approx(x, k)).collect()))
    }

    fn approx_start(&self, a: &Value<I>) -> u32 {
        let t = self.target.ops();
        let f = self.vals(a);
        (1..200)
            .find(|&k| {
                let raw: Vec<Value<I>> = f.iter().map(|x| t.approx(x, k)).collect();
                self.is_lsc(&raw)
            })
            .unwrap_or(200)
    }

    fn infinity(&self, a: &Value<I>) -> Result<Value<I>> {
        let t = self.target.ops();
        Ok(Value::Points(
            self.vals(a)
                .iter()
                .map(|x| t.infinity(x))
                .collect::<Result<_>>()?,
        ))
    }

    fn grid(&self, g: &Grid) -> Vec<Value<I>> {
        self.enumerate(&self.target.ops().grid(g))
    }

    fn down_set(&self, a: &Value<I>) -> Option<Vec<Value<I>>> {
        let t = self.target.ops();
        let mut values: Vec<Value<I>> = Vec::new();
        for x in self.vals(a) {
            for y in t.down_set(x)? {
                if !values.contains(&y) {
                    values.push(y);
                }
            }
        }
        let f = self.vals(a);
        Some(
            self.enumerate(&values)
                .into_iter()
                .filter(|g| self.vals(g).iter().zip(f).all(|(x, y)| t.leq(x, y)))
                .collect(),
        )
    }

    fn render(&self, v: &Value<I>) -> String {
        let t = self.target.ops();
        format!("[{}]", join(self.vals(v), |x| t.render(x)))
    }

    fn parse(&self, c: &mut Cursor<'_>) -> Result<Value<I>> {
        let t = self.target.ops();
        Ok(Value::Points(c.list("[", "]", |c| t.parse(c))?))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_lsc_space, nbar};
    use crate::scalar::int;

    #[test]
    fn chain_space_is_connected_and_discrete_is_not() {
        assert!(FiniteSpace::chain3().is_connected());
        assert!(!FiniteSpace::discrete(2).is_connected());
    }

    #[test]
    fn chain_space_has_four_indicator_functions() {
        let s = make_lsc_space::<i128>(FiniteSpace::chain3(), nbar()).unwrap();
        let kind = s.kind::<LscSpace<i128>>().unwrap();
        let fns = kind.enumerate(&[Value::Compact(int(0)), Value::Compact(int(1))]);
        assert_eq!(fns.len(), 4);
    }

    #[test]
    fn non_open_indicator_is_rejected() {
        let s = make_lsc_space::<i128>(FiniteSpace::chain3(), nbar()).unwrap();
        assert!(s.parse("[0, 1, 1]").is_err());
        assert!(s.parse("[1, 1, 0]").is_ok());
    }

    #[test]
    fn approximants_of_infinite_values_stay_lsc() {
        let s = make_lsc_space::<i128>(FiniteSpace::chain3(), nbar()).unwrap();
        let f = s.parse("[inf, 3, 0]").unwrap();
        let d = s.approximants(&f).unwrap();
        for j in 0..10 {
            let a = s.term(&d, j).unwrap();
            let b = s.term(&d, j + 1).unwrap();
            assert!(s.element(a.value().clone()).is_ok());
            assert!(s.way_below(&a, &b).unwrap());
        }
        assert_eq!(s.sup(&d).unwrap(), f);
    }
}
