//! `V ⊔ LAff(Δ_k)_{++}`: a compact part `N^d` paired with the vertices of a
//! `k`-simplex, and strictly positive affine functions given by vertex values.

use std::any::Any;

use num_traits::Zero;

use crate::error::{CuError, Result};
use crate::order::{Grid, KindOps, Value};
use crate::scalar::{fmt_rational, int, ExtValue, Int, Ratio};
use crate::text::{join, Cursor};

#[derive(Clone, Debug)]
pub struct ZStable<I: Int> {
    /// `pairing[i][v]`: value of the `i`-th generator of `V` at vertex `v`.
    pub pairing: Vec<Vec<Ratio<I>>>,
}

impl<I: Int> ZStable<I> {
    pub fn new(pairing: Vec<Vec<Ratio<I>>>) -> Result<Self> {
        let k = pairing.first().map(|r| r.len()).unwrap_or(0);
        if pairing.is_empty() || k == 0 || pairing.iter().any(|r| r.len() != k) {
            return Err(CuError::BadParam(
                "pairing must be a nonempty d x k matrix".into(),
            ));
        }
        if pairing.iter().flatten().any(|q| *q <= Ratio::zero()) {
            return Err(CuError::BadPairing);
        }
        Ok(ZStable { pairing })
    }

    pub fn rank(&self) -> usize {
        self.pairing.len()
    }

    pub fn vertices(&self) -> usize {
        self.pairing[0].len()
    }

    /// Multiplicities of a compact payload.
    pub fn counts(&self, v: &Value<I>) -> Option<Vec<Ratio<I>>> {
        match v {
            Value::Compact(n) if self.rank() == 1 => Some(vec![n.clone()]),
            Value::Tuple(xs) => xs
                .iter()
                .map(|x| match x {
                    Value::Compact(n) => Some(n.clone()),
                    _ => None,
                })
                .collect(),
            _ => None,
        }
    }

    fn compact(&self, counts: Vec<Ratio<I>>) -> Value<I> {
        if self.rank() == 1 {
            Value::Compact(counts.into_iter().next().expect("rank 1"))
        } else {
            Value::Tuple(counts.into_iter().map(Value::Compact).collect())
        }
    }

    /// `x̂`: vertex values of the rank function of a compact element.
    pub fn hat(&self, counts: &[Ratio<I>]) -> Vec<ExtValue<I>> {
        (0..self.vertices())
            .map(|v| {
                ExtValue::Finite(
                    counts
                        .iter()
                        .zip(&self.pairing)
                        .fold(Ratio::zero(), |acc, (n, row)| acc + n * &row[v]),
                )
            })
            .collect()
    }

    /// Vertex values of any element (compact elements through `x̂`).
    pub fn profile(&self, v: &Value<I>) -> Vec<ExtValue<I>> {
        match v {
            Value::Affine(f) => f.clone(),
            _ => self.hat(&self.counts(v).unwrap_or_default()),
        }
    }

    fn is_zero(&self, v: &Value<I>) -> bool {
        self.counts(v)
            .is_some_and(|c| c.iter().all(|n| n.is_zero()))
    }
}

impl<I: Int> KindOps<I> for ZStable<I> {
    fn label(&self) -> String {
        let rows: Vec<String> = self
            .pairing
            .iter()
            .map(|r| format!("({})", join(r, fmt_rational)))
            .collect();
        format!(
            "zstable(d={}, k={}, pairing={})",
            self.rank(),
            self.vertices(),
            rows.join(" ")
        )
    }

    fn zero(&self) -> Value<I> {
        self.compact(vec![Ratio::zero(); self.rank()])
    }

    fn normalize(&self, v: Value<I>) -> Result<Value<I>> {
        match &v {
            Value::Affine(f) => {
                if f.len() != self.vertices() {
                    return Err(CuError::InvalidElement(
                        "wrong number of vertex values".into(),
                    ));
                }
                if f.iter().any(|x| x.is_zero()) {
                    return Err(CuError::InvalidElement(
                        "affine part must be strictly positive".into(),
                    ));
                }
                Ok(v)
            }
            _ => match self.counts(&v) {
                Some(c)
                    if c.len() == self.rank()
                        && c.iter().all(|n| n.is_integer() && *n >= Ratio::zero()) =>
                {
                    Ok(v)
                }
                _ => Err(CuError::InvalidElement(format!(
                    "{v:?} is not in the compact part"
                ))),
            },
        }
    }

    fn leq(&self, a: &Value<I>, b: &Value<I>) -> bool {
        match (a, b) {
            (Value::Affine(f), Value::Affine(g)) => f.iter().zip(g).all(|(x, y)| x <= y),
            (Value::Affine(f), _) => f.iter().zip(self.profile(b)).all(|(x, y)| *x <= y),
            (_, Value::Affine(g)) => {
                self.is_zero(a) || self.profile(a).iter().zip(g).all(|(x, y)| x < y)
            }
            _ => {
                let (x, y) = (
                    self.counts(a).unwrap_or_default(),
                    self.counts(b).unwrap_or_default(),
                );
                x.iter().zip(&y).all(|(p, q)| p <= q)
            }
        }
    }

    fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        match (a, b) {
            (Value::Affine(_), _) | (_, Value::Affine(_)) => Value::Affine(
                self.profile(a)
                    .iter()
                    .zip(self.profile(b))
                    .map(|(x, y)| x + &y)
                    .collect(),
            ),
            _ => {
                let (x, y) = (
                    self.counts(a).unwrap_or_default(),
                    self.counts(b).unwrap_or_default(),
                );
                self.compact(x.iter().zip(&y).map(|(p, q)| p + q).collect())
            }
        }
    }

    fn way_below(&self, a: &Value<I>, b: &Value<I>) -> bool {
        match (a, b) {
            (Value::Affine(f), Value::Affine(g)) => {
                f.iter().zip(g).all(|(x, y)| x.is_finite() && x < y)
            }
            (Value::Affine(_), _) => KindOps::<I>::leq(self, a, b),
            _ => KindOps::<I>::leq(self, a, b),
        }
    }

    fn wedge(&self, a: &Value<I>, b: &Value<I>) -> Option<Value<I>> {
        if KindOps::<I>::leq(self, a, b) {
            return Some(a.clone());
        }
        if KindOps::<I>::leq(self, b, a) {
            return Some(b.clone());
        }
        match (a, b) {
            (Value::Affine(f), Value::Affine(g)) => Some(Value::Affine(
                f.iter().zip(g).map(|(x, y)| x.min(y).clone()).collect(),
            )),
            (Value::Affine(_), _) | (_, Value::Affine(_)) if self.rank() == 1 => {
                let m: Vec<ExtValue<I>> = self
                    .profile(a)
                    .iter()
                    .zip(self.profile(b))
                    .map(|(x, y)| x.clone().min(y))
                    .collect();
                Some(Value::Affine(m))
            }
            _ => None,
        }
    }

    fn approx(&self, a: &Value<I>, k: u32) -> Value<I> {
        match a {
            Value::Affine(f) => {
                Value::Affine(f.iter().map(|x| super::chain::soft_approx(x, k)).collect())
            }
            _ => a.clone(),
        }
    }

    fn infinity(&self, a: &Value<I>) -> Result<Value<I>> {
        Ok(if self.is_zero(a) {
            a.clone()
        } else {
            Value::Affine(vec![ExtValue::Infinite; self.vertices()])
        })
    }

    fn grid(&self, g: &Grid) -> Vec<Value<I>> {
        let mut out = Vec::new();
        let d = self.rank();
        let top = g.max_value.max(0) as usize;
        let mut idx = vec![0usize; d];
        loop {
            out.push(self.compact(idx.iter().map(|&n| int(n as i64)).collect()));
            let mut p = 0;
            while p < d {
                idx[p] += 1;
                if idx[p] <= top {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
            if p == d {
                break;
            }
        }
        let mut vals: Vec<ExtValue<I>> = Vec::new();
        for den in 1..=g.max_den.max(1) {
            for n in 1..=g.max_value * den {
                let v = ExtValue::frac(n, den);
                if !vals.contains(&v) {
                    vals.push(v);
                }
            }
        }
        vals.sort();
        vals.push(ExtValue::Infinite);
        let k = self.vertices();
        let mut idx = vec![0usize; k];
        loop {
            out.push(Value::Affine(
                idx.iter().map(|&i| vals[i].clone()).collect(),
            ));
            let mut p = 0;
            while p < k {
                idx[p] += 1;
                if idx[p] < vals.len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
            if p == k {
                return out;
            }
        }
    }

    fn render(&self, v: &Value<I>) -> String {
        match v {
            Value::Affine(f) => format!("f({})", join(f, |x| x.to_string())),
            _ => {
                let c = self.counts(v).unwrap_or_default();
                if self.rank() == 1 {
                    fmt_rational(&c[0])
                } else {
                    format!("({})", join(&c, fmt_rational))
                }
            }
        }
    }

    /// `n`, `(n1, n2)` for compacts and `f(x1, …, xk)` for affine functions.
    fn parse(&self, c: &mut Cursor<'_>) -> Result<Value<I>> {
        if c.eat("f") {
            return Ok(Value::Affine(c.list("(", ")", |c| c.ext())?));
        }
        if c.peek() == Some('(') {
            let xs = c.list("(", ")", |c| c.rational::<I>())?;
            return Ok(Value::Tuple(xs.into_iter().map(Value::Compact).collect()));
        }
        let n = c.rational::<I>()?;
        Ok(if self.rank() == 1 {
            Value::Compact(n)
        } else {
            Value::Tuple(vec![Value::Compact(n)])
        })
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// The affine function with the given vertex values, or zero when some value is 0.
pub fn affine_or_zero<I: Int>(z: &ZStable<I>, f: Vec<ExtValue<I>>) -> Value<I> {
    if f.iter().any(|x| x.is_zero()) {
        KindOps::<I>::zero(z)
    } else {
        Value::Affine(f)
    }
}

#[cfg(test)]
mod tests {
    use crate::catalog::make_zstable_model;
    use crate::scalar::rat;

    fn model() -> crate::Semigroup {
        make_zstable_model(1, 2, vec![vec![rat(1, 1), rat(1, 1)]]).unwrap()
    }

    #[test]
    fn mixed_sum_and_order() {
        let s = model();
        let e = |t: &str| s.parse(t).unwrap();
        assert_eq!(s.add(&e("1"), &e("f(1/2, 3/2)")).unwrap(), e("f(3/2, 5/2)"));
        assert!(s.leq(&e("1"), &e("f(3/2, 2)")).unwrap());
        assert!(s.leq(&e("f(1, 1)"), &e("1")).unwrap());
        assert!(!s.leq(&e("1"), &e("f(1, 2)")).unwrap());
        assert_eq!(s.wedge(&e("1"), &e("f(3/2, 2)")).unwrap().unwrap(), e("1"));
    }

    #[test]
    fn nonpositive_pairing_is_rejected() {
        assert_eq!(
            make_zstable_model::<i128>(1, 2, vec![vec![rat(1, 1), rat(0, 1)]]).unwrap_err(),
            crate::CuError::BadPairing
        );
    }

    #[test]
    fn affine_functions_are_never_compact() {
        let s = model();
        let f = s.parse("f(1, 2)").unwrap();
        assert!(!s.is_compact(&f).unwrap());
        assert!(s.is_compact(&s.parse("2").unwrap()).unwrap());
    }
}
