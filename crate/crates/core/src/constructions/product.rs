//! Finite Cu-products.
//!
//! For finitely many factors the path classes of the pointwise product with
//! the pointwise way-below relation are determined by their coordinatewise
//! suprema, so elements are plain tuples.

use std::any::Any;

use crate::error::{CuError, Result};
use crate::order::{Grid, KindOps, Semigroup, Value};
use crate::scalar::Int;
use crate::text::{join, Cursor};

#[derive(Clone, Debug)]
pub struct CuProduct<I: Int> {
    pub factors: Vec<Semigroup<I>>,
}

pub(crate) fn coords<I: Int>(v: &Value<I>) -> &[Value<I>] {
    match v {
        Value::Tuple(xs) => xs,
        _ => &[],
    }
}

impl<I: Int> CuProduct<I> {
    fn zip(
        &self,
        a: &Value<I>,
        b: &Value<I>,
        f: impl Fn(&dyn KindOps<I>, &Value<I>, &Value<I>) -> Value<I>,
    ) -> Value<I> {
        Value::Tuple(
            self.factors
                .iter()
                .zip(coords(a).iter().zip(coords(b)))
                .map(|(s, (x, y))| f(s.ops(), x, y))
                .collect(),
        )
    }

    fn all(
        &self,
        a: &Value<I>,
        b: &Value<I>,
        f: impl Fn(&dyn KindOps<I>, &Value<I>, &Value<I>) -> bool,
    ) -> bool {
        self.factors
            .iter()
            .zip(coords(a).iter().zip(coords(b)))
            .all(|(s, (x, y))| f(s.ops(), x, y))
    }

    /// Embeds `x` of factor `i` with zeros elsewhere.
    pub fn inject(&self, i: usize, x: &Value<I>) -> Value<I> {
        Value::Tuple(
            self.factors
                .iter()
                .enumerate()
                .map(|(j, s)| if j == i { x.clone() } else { s.ops().zero() })
                .collect(),
        )
    }

    pub fn project<'a>(&self, i: usize, v: &'a Value<I>) -> &'a Value<I> {
        &coords(v)[i]
    }
}

impl<I: Int> KindOps<I> for CuProduct<I> {
    fn label(&self) -> String {
        format!("prod({})", join(&self.factors, |s| s.label()))
    }

    fn zero(&self) -> Value<I> {
        Value::Tuple(self.factors.iter().map(|s| s.ops().zero()).collect())
    }

    fn normalize(&self, v: Value<I>) -> Result<Value<I>> {
        let Value::Tuple(xs) = v else {
            return Err(CuError::InvalidElement("expected a tuple".into()));
        };
        if xs.len() != self.factors.len() {
            return Err(CuError::InvalidElement(format!(
                "expected {} coordinates",
                self.factors.len()
            )));
        }
        Ok(Value::Tuple(
            self.factors
                .iter()
                .zip(xs)
                .map(|(s, x)| s.ops().normalize(x))
                .collect::<Result<_>>()?,
        ))
    }

    fn leq(&self, a: &Value<I>, b: &Value<I>) -> bool {
        self.all(a, b, |s, x, y| s.leq(x, y))
    }

    fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        self.zip(a, b, |s, x, y| s.add(x, y))
    }

    fn way_below(&self, a: &Value<I>, b: &Value<I>) -> bool {
        self.all(a, b, |s, x, y| s.way_below(x, y))
    }

    fn wedge(&self, a: &Value<I>, b: &Value<I>) -> Option<Value<I>> {
        let w: Option<Vec<Value<I>>> = self
            .factors
            .iter()
            .zip(coords(a).iter().zip(coords(b)))
            .map(|(s, (x, y))| s.ops().wedge(x, y))
            .collect();
        w.map(Value::Tuple)
    }

    /// Coordinate `i` of the `k`-th term is the `(start_i + k - 1)`-th approximant.
    fn approx(&self, a: &Value<I>, k: u32) -> Value<I> {
        Value::Tuple(
            self.factors
                .iter()
                .zip(coords(a))
                .map(|(s, x)| {
                    let o = s.ops();
                    if o.is_compact(x) {
                        x.clone()
                    } else {
                        o.approx(x, o.approx_start(x) + k.saturating_sub(1))
                    }
                })
                .collect(),
        )
    }

    fn infinity(&self, a: &Value<I>) -> Result<Value<I>> {
        Ok(Value::Tuple(
            self.factors
                .iter()
                .zip(coords(a))
                .map(|(s, x)| s.ops().infinity(x))
                .collect::<Result<_>>()?,
        ))
    }

    fn grid(&self, g: &Grid) -> Vec<Value<I>> {
        let mut out: Vec<Vec<Value<I>>> = vec![vec![]];
        for s in &self.factors {
            let vals = s.ops().grid(g);
            out = out
                .into_iter()
                .flat_map(|t| {
                    vals.iter().map(move |v| {
                        let mut t = t.clone();
                        t.push(v.clone());
                        t
                    })
                })
                .collect();
        }
        out.into_iter().map(Value::Tuple).collect()
    }

    fn down_set(&self, a: &Value<I>) -> Option<Vec<Value<I>>> {
        let mut out: Vec<Vec<Value<I>>> = vec![vec![]];
        for (s, x) in self.factors.iter().zip(coords(a)) {
            let vals = s.ops().down_set(x)?;
            out = out
                .into_iter()
                .flat_map(|t| {
                    vals.iter().map(move |v| {
                        let mut t = t.clone();
                        t.push(v.clone());
                        t
                    })
                })
                .collect();
        }
        Some(out.into_iter().map(Value::Tuple).collect())
    }

    fn render(&self, v: &Value<I>) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .zip(coords(v))
            .map(|(s, x)| s.ops().render(x))
            .collect();
        format!("({})", parts.join(", "))
    }

    fn parse(&self, c: &mut Cursor<'_>) -> Result<Value<I>> {
        let mut i = 0;
        let xs = c.list("(", ")", |c| {
            let s = self
                .factors
                .get(i)
                .ok_or_else(|| c.error("too many coordinates"))?;
            i += 1;
            s.ops().parse(c)
        })?;
        Ok(Value::Tuple(xs))
    }

    fn is_cu(&self) -> bool {
        self.factors.iter().all(|s| s.ops().is_cu())
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

#[cfg(test)]
mod tests {
    use crate::catalog::{nbar, softened};
    use crate::constructions::cu_product;

    #[test]
    fn componentwise_rules() {
        let p = cu_product::<i128>(vec![softened(1), nbar()]);
        let e = |t: &str| p.parse(t).unwrap();
        assert!(p.leq(&e("(s:1, 2)"), &e("(c:1, 2)")).unwrap());
        assert!(!p.leq(&e("(c:1, 2)"), &e("(s:1, 2)")).unwrap());
        assert_eq!(p.infinity_of(&e("(c:1, 0)")).unwrap(), e("(s:inf, 0)"));
        assert_eq!(p.label(), "prod(softened(1), nbar)");
    }

    #[test]
    fn empty_product_is_trivial() {
        let p = cu_product::<i128>(vec![]);
        assert_eq!(p.grid(&crate::Grid::new(3, 1)).len(), 1);
    }

    #[test]
    fn approximants_mix_compact_and_soft_coordinates() {
        let p = cu_product::<i128>(vec![softened(1), nbar()]);
        let a = p.parse("(s:1, inf)").unwrap();
        let d = p.approximants(&a).unwrap();
        for j in 0..8 {
            assert!(p
                .way_below(&p.term(&d, j).unwrap(), &p.term(&d, j + 1).unwrap())
                .unwrap());
        }
        assert_eq!(p.sup(&d).unwrap(), a);
    }
}
