//! Exact computations in abstract Cuntz semigroups.
//!
//! Every semigroup is a [`Semigroup`] handle over a kind from [`catalog`] or
//! [`constructions`]; elements carry the id of their handle. All arithmetic is
//! over `Ratio<I>` for an integer type `I`; the crate root fixes `I = i128` and
//! [`big`] offers the arbitrary precision aliases.

pub mod axioms;
pub mod catalog;
pub mod concrete;
pub mod constructions;
pub mod error;
pub mod functionals;
pub mod order;
pub mod scalar;
pub mod text;

pub use error::{CuError, Result};
pub use order::{Element, Grid, KindOps, SequenceDescriptor, SgId, Tail, Value};
pub use scalar::{ExtValue, Int};

pub type Rational = scalar::Ratio<i128>;
pub type Ext = ExtValue<i128>;
pub type Elem = Element<i128>;
pub type Semigroup = order::Semigroup<i128>;
pub type Descriptor = SequenceDescriptor<i128>;

pub mod big {
    use num_bigint::BigInt;

    pub type Rational = crate::scalar::Ratio<BigInt>;
    pub type Ext = crate::ExtValue<BigInt>;
    pub type Elem = crate::Element<BigInt>;
    pub type Semigroup = crate::order::Semigroup<BigInt>;
    pub type Descriptor = crate::SequenceDescriptor<BigInt>;
}
