//! Ideals, quotients, completions, limits and products.

pub mod completion;
pub mod grothendieck;
pub mod ideal;
pub mod limits;
pub mod product;
pub mod seqprod;
pub mod ultra;

pub use completion::{
    gamma_completion, tau_completion, AuxRel, PathDescriptor, PathTail, WCarrier, WSemigroup,
    WSequence, WTail,
};
pub use grothendieck::{
    grothendieck_interpolation, is_interpolation_gap, GrothendieckGroup, GroupBox,
};
pub use ideal::{ideal_generated, quotient, Ideal, Quotient};
pub use limits::{direct_limit, FixedPoints, Morphism, MorphismAction};
pub use product::CuProduct;
pub use seqprod::{in_bounded_scale, SeqFn, SeqProduct};
pub use ultra::{c_u_ideal, in_c_u, ultraproduct, Ultrafilter};

use crate::catalog::{make_finite_table, FiniteTable};
use crate::order::Semigroup;
use crate::scalar::Int;

/// Componentwise product; the empty product is `{0}`.
pub fn cu_product<I: Int>(factors: Vec<Semigroup<I>>) -> Semigroup<I> {
    if factors.is_empty() {
        return make_finite_table(FiniteTable::trivial()).expect("trivial table is valid");
    }
    Semigroup::from_ops(product::CuProduct { factors })
}

pub fn seq_product_nbar<I: Int>() -> Semigroup<I> {
    Semigroup::from_ops(seqprod::SeqProduct)
}
