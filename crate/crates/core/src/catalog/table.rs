//! Finite tabulated positively ordered monoids.

use std::any::Any;

use crate::error::{CuError, Result};
use crate::order::{Grid, KindOps, Value};
use crate::scalar::Int;
use crate::text::Cursor;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTable {
    pub names: Vec<String>,
    pub add: Vec<Vec<usize>>,
    pub leq: Vec<Vec<bool>>,
}

impl FiniteTable {
    pub fn new(names: &[&str], add: Vec<Vec<usize>>, leq: Vec<Vec<bool>>) -> Self {
        FiniteTable {
            names: names.iter().map(|s| s.to_string()).collect(),
            add,
            leq,
        }
    }

    /// `{0, ∞}` with `∞ + ∞ = ∞`.
    pub fn zero_infinity() -> Self {
        FiniteTable::new(
            &["0", "inf"],
            vec![vec![0, 1], vec![1, 1]],
            vec![vec![true, true], vec![false, true]],
        )
    }

    /// `{0, 1, ∞}` with `1 + 1 = ∞` and the usual order.
    pub fn zero_one_infinity() -> Self {
        FiniteTable::new(
            &["0", "1", "inf"],
            vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]],
            vec![
                vec![true, true, true],
                vec![false, true, true],
                vec![false, false, true],
            ],
        )
    }

    pub fn trivial() -> Self {
        FiniteTable::new(&["0"], vec![vec![0]], vec![vec![true]])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Checks the monoid and order axioms; returns the index of zero.
    pub fn validate(&self) -> Result<usize> {
        let n = self.len();
        let bad = |what: &str| Err(CuError::InvalidTable(what.into()));
        if n == 0 {
            return bad("nonemptiness");
        }
        if self.add.len() != n
            || self
                .add
                .iter()
                .any(|r| r.len() != n || r.iter().any(|&x| x >= n))
        {
            return bad("closure");
        }
        if self.leq.len() != n || self.leq.iter().any(|r| r.len() != n) {
            return bad("order shape");
        }
        if (0..n).any(|a| (0..n).any(|b| self.add[a][b] != self.add[b][a])) {
            return bad("commutativity");
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.add[self.add[a][b]][c] != self.add[a][self.add[b][c]] {
                        return bad("associativity");
                    }
                }
            }
        }
        let zero = match (0..n).find(|&z| (0..n).all(|a| self.add[z][a] == a)) {
            Some(z) => z,
            None => return bad("identity"),
        };
        for a in 0..n {
            if !self.leq[a][a] {
                return bad("reflexivity");
            }
            for b in 0..n {
                if a != b && self.leq[a][b] && self.leq[b][a] {
                    return bad("antisymmetry");
                }
                for c in 0..n {
                    if self.leq[a][b] && self.leq[b][c] && !self.leq[a][c] {
                        return bad("transitivity");
                    }
                    if self.leq[a][b] && !self.leq[self.add[a][c]][self.add[b][c]] {
                        return bad("compatibility");
                    }
                }
            }
            if !self.leq[zero][a] {
                return bad("positivity");
            }
        }
        Ok(zero)
    }
}

#[derive(Clone, Debug)]
pub struct TableKind {
    pub table: FiniteTable,
    pub zero: usize,
}

fn idx<I: Int>(v: &Value<I>) -> usize {
    match v {
        Value::Index(i) => *i,
        _ => usize::MAX,
    }
}

impl<I: Int> KindOps<I> for TableKind {
    fn label(&self) -> String {
        format!("table{{{}}}", self.table.names.join(","))
    }

    fn zero(&self) -> Value<I> {
        Value::Index(self.zero)
    }

    fn normalize(&self, v: Value<I>) -> Result<Value<I>> {
        match v {
            Value::Index(i) if i < self.table.len() => Ok(v),
            _ => Err(CuError::InvalidElement(format!("{v:?} is not a table row"))),
        }
    }

    fn leq(&self, a: &Value<I>, b: &Value<I>) -> bool {
        self.table.leq[idx(a)][idx(b)]
    }

    fn add(&self, a: &Value<I>, b: &Value<I>) -> Value<I> {
        Value::Index(self.table.add[idx(a)][idx(b)])
    }

    fn way_below(&self, a: &Value<I>, b: &Value<I>) -> bool {
        KindOps::<I>::leq(self, a, b)
    }

    fn wedge(&self, a: &Value<I>, b: &Value<I>) -> Option<Value<I>> {
        let t = &self.table;
        let lower: Vec<usize> = (0..t.len())
            .filter(|&c| t.leq[c][idx(a)] && t.leq[c][idx(b)])
            .collect();
        lower
            .iter()
            .find(|&&m| lower.iter().all(|&c| t.leq[c][m]))
            .map(|&m| Value::Index(m))
    }

    fn approx(&self, a: &Value<I>, _k: u32) -> Value<I> {
        a.clone()
    }

    fn infinity(&self, a: &Value<I>) -> Result<Value<I>> {
        let mut cur = idx(a);
        loop {
            let next = self.table.add[cur][idx(a)];
            if next == cur {
                return Ok(Value::Index(cur));
            }
            cur = next;
        }
    }

    fn grid(&self, _g: &Grid) -> Vec<Value<I>> {
        (0..self.table.len()).map(Value::Index).collect()
    }

    fn down_set(&self, a: &Value<I>) -> Option<Vec<Value<I>>> {
        Some(
            (0..self.table.len())
                .filter(|&c| self.table.leq[c][idx(a)])
                .map(Value::Index)
                .collect(),
        )
    }

    fn render(&self, v: &Value<I>) -> String {
        self.table.names[idx(v)].clone()
    }

    fn parse(&self, c: &mut Cursor<'_>) -> Result<Value<I>> {
        let name = c.ident()?;
        self.table
            .names
            .iter()
            .position(|n| n == name)
            .map(Value::Index)
            .ok_or_else(|| CuError::Parse(format!("unknown table element {name:?}")))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
