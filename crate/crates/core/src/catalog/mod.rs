//! Constructors for the shipped semigroups.

pub mod chain;
pub mod group;
pub mod interval;
pub mod space;
pub mod table;
pub mod zstable;

pub use chain::Chain;
pub use group::{GapModel, GroupAdjoined, GroupTag};
pub use interval::{IntervalLsc, StepFn};
pub use space::{FiniteSpace, LscSpace};
pub use table::{FiniteTable, TableKind};
pub use zstable::ZStable;

use crate::error::{CuError, Result};
use crate::order::{Grid, Semigroup};
use crate::scalar::{Int, Ratio};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogKind {
    NBar,
    Softened,
}

/// `nbar` with `m > 1` gives `N[1/m] ∪ {∞}`, which is not a Cu-semigroup but
/// serves as a carrier for completions.
pub fn make_catalog<I: Int>(kind: CatalogKind, m: u64) -> Result<Semigroup<I>> {
    if m == 0 {
        return Err(CuError::BadParam("m must be positive".into()));
    }
    Ok(Semigroup::from_ops(Chain {
        m,
        soft: kind == CatalogKind::Softened,
    }))
}

pub fn nbar<I: Int>() -> Semigroup<I> {
    Semigroup::from_ops(Chain { m: 1, soft: false })
}

pub fn softened<I: Int>(m: u64) -> Semigroup<I> {
    make_catalog(CatalogKind::Softened, m).expect("m > 0")
}

pub fn make_finite_table<I: Int>(t: FiniteTable) -> Result<Semigroup<I>> {
    let zero = t.validate()?;
    Ok(Semigroup::from_ops(TableKind { table: t, zero }))
}

pub fn make_lsc_space<I: Int>(space: FiniteSpace, target: Semigroup<I>) -> Result<Semigroup<I>> {
    if target.kind::<Chain>().is_none() {
        return Err(CuError::BadParam(format!(
            "lsc functions need a chain target, got {}",
            target.label()
        )));
    }
    Ok(Semigroup::from_ops(LscSpace::new(space, target)))
}

pub fn make_lsc_interval<I: Int>(
    target: Semigroup<I>,
    left: Option<Semigroup<I>>,
    right: Option<Semigroup<I>>,
) -> Result<Semigroup<I>> {
    Ok(Semigroup::from_ops(IntervalLsc::new(target, left, right)?))
}

/// Step functions into `N[1/6] ⊔ (0,∞]` with `f(0) ∈ N[1/2] ⊔ (0,∞]` and `f(1) ∈ N[1/3] ⊔ (0,∞]`.
pub fn make_dimension_drop<I: Int>() -> Semigroup<I> {
    make_lsc_interval(softened(6), Some(softened(2)), Some(softened(3))).expect("valid constraints")
}

pub fn adjoin_group<I: Int>(s: Semigroup<I>, g: GroupTag) -> Result<Semigroup<I>> {
    Ok(Semigroup::from_ops(GroupAdjoined::new(
        s,
        g,
        &Grid::new(4, 4),
    )?))
}

/// Compact part `N^d` with `pairing` a `d × k` matrix of generator values at the vertices.
pub fn make_zstable_model<I: Int>(
    d: usize,
    k: usize,
    pairing: Vec<Vec<Ratio<I>>>,
) -> Result<Semigroup<I>> {
    if pairing.len() != d || pairing.iter().any(|r| r.len() != k) {
        return Err(CuError::BadParam(format!("pairing must be {d} x {k}")));
    }
    Ok(Semigroup::from_ops(ZStable::new(pairing)?))
}

pub fn gap_model<I: Int>() -> Semigroup<I> {
    Semigroup::from_ops(GapModel)
}
