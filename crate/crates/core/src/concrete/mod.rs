//! Concrete models: positive matrices by their spectra and nonnegative
//! piecewise-linear functions on `[0,1]`.

pub mod pl;
pub mod spectral;

pub use pl::{
    interval_handle, pl_class, pl_cuntz_leq, pl_dtau, pl_integral, pl_layer_cake, pl_way_below,
    rordam_witness, Interval, PLFunction, RationalMeasure,
};
pub use spectral::{
    layer_cake_trace, spectral_class, spectral_cuntz_leq, spectral_cutdown, spectral_dtau,
    SpectralElement,
};

use crate::error::Result;
use crate::order::{Element, Semigroup};
use crate::scalar::Int;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConcreteElement<I: Int> {
    Spectral(SpectralElement<I>),
    Pl(PLFunction<I>),
}

/// The Cuntz class in `target`: a rank in `N̄` or an open-support indicator in `Lsc([0,1], N̄)`.
pub fn to_cuntz_class<I: Int>(x: &ConcreteElement<I>, target: &Semigroup<I>) -> Result<Element<I>> {
    match x {
        ConcreteElement::Spectral(a) => spectral_class(a, target),
        ConcreteElement::Pl(f) => pl_class(f, target),
    }
}

/// Cuntz subequivalence within one model; mixed models compare as false.
pub fn cuntz_leq<I: Int>(x: &ConcreteElement<I>, y: &ConcreteElement<I>) -> bool {
    match (x, y) {
        (ConcreteElement::Spectral(a), ConcreteElement::Spectral(b)) => spectral_cuntz_leq(a, b),
        (ConcreteElement::Pl(f), ConcreteElement::Pl(g)) => pl_cuntz_leq(f, g),
        _ => false,
    }
}
