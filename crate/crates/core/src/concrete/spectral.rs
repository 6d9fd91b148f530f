//! Positive matrices up to unitary equivalence, by their rational spectra.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::catalog::Chain;
use crate::error::{CuError, Result};
use crate::functionals::{evaluate, Form, Functional};
use crate::order::{Element, Semigroup, Value};
use crate::scalar::{fmt_rational, int, ExtValue, Int, Ratio};
use crate::text::{join, Cursor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralElement<I: Int> {
    eigenvalues: Vec<Ratio<I>>,
}

impl<I: Int> SpectralElement<I> {
    pub fn new(eigenvalues: Vec<Ratio<I>>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(CuError::InvalidElement(
                "a matrix needs at least one eigenvalue".into(),
            ));
        }
        if let Some(q) = eigenvalues.iter().find(|q| q.is_negative()) {
            return Err(CuError::InvalidElement(format!(
                "negative eigenvalue {}",
                fmt_rational(q)
            )));
        }
        Ok(SpectralElement { eigenvalues })
    }

    pub fn zero(dim: usize) -> Self {
        SpectralElement {
            eigenvalues: vec![Ratio::zero(); dim.max(1)],
        }
    }

    /// A projection of rank `rank` in `M_dim`.
    pub fn projection(rank: usize, dim: usize) -> Result<Self> {
        if rank > dim {
            return Err(CuError::BadParam(format!(
                "rank {rank} exceeds dimension {dim}"
            )));
        }
        let mut e = vec![Ratio::one(); rank];
        e.resize(dim.max(1), Ratio::zero());
        SpectralElement::new(e)
    }

    pub fn eigenvalues(&self) -> &[Ratio<I>] {
        &self.eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues.iter().filter(|q| !q.is_zero()).count()
    }

    pub fn trace(&self) -> Ratio<I> {
        self.eigenvalues
            .iter()
            .fold(Ratio::zero(), |acc, q| acc + q)
    }

    pub fn max_eigenvalue(&self) -> Ratio<I> {
        self.eigenvalues
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(Ratio::zero)
    }

    /// Block diagonal `a ⊕ b`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        SpectralElement {
            eigenvalues: self
                .eigenvalues
                .iter()
                .chain(&other.eigenvalues)
                .cloned()
                .collect(),
        }
    }

    /// `λ a` for `λ > 0`.
    pub fn scaled(&self, t: &Ratio<I>) -> Result<Self> {
        if !t.is_positive() {
            return Err(CuError::BadParam("scale must be positive".into()));
        }
        Ok(SpectralElement {
            eigenvalues: self.eigenvalues.iter().map(|q| q * t).collect(),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Cursor::new(text);
        c.eat("spec");
        let e = c.list("[", "]", |c| c.rational())?;
        c.finish()?;
        SpectralElement::new(e)
    }
}

impl<I: Int> fmt::Display for SpectralElement<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "spec[{}]", join(&self.eigenvalues, fmt_rational))
    }
}

/// `a ≼ b` iff `rank a ≤ rank b`.
pub fn spectral_cuntz_leq<I: Int>(a: &SpectralElement<I>, b: &SpectralElement<I>) -> bool {
    a.rank() <= b.rank()
}

/// `(a - ε)_+`.
pub fn spectral_cutdown<I: Int>(
    a: &SpectralElement<I>,
    eps: &Ratio<I>,
) -> Result<SpectralElement<I>> {
    if !eps.is_positive() {
        return Err(CuError::BadParam("ε must be positive".into()));
    }
    let e = a
        .eigenvalues
        .iter()
        .map(|q| if q > eps { q - eps } else { Ratio::zero() })
        .collect();
    Ok(SpectralElement { eigenvalues: e })
}

/// `d_τ` for the normalized trace: `rank / dim`.
pub fn spectral_dtau<I: Int>(a: &SpectralElement<I>) -> Ratio<I> {
    Ratio::new(
        int::<I>(a.rank() as i64).to_integer(),
        int::<I>(a.dim() as i64).to_integer(),
    )
}

fn is_nbar<I: Int>(s: &Semigroup<I>) -> bool {
    matches!(s.kind::<Chain>(), Some(Chain { m: 1, soft: false }))
}

/// `∫_0^∞ λ([(a - t)_+]) dt`, integrated exactly between consecutive eigenvalues.
pub fn layer_cake_trace<I: Int>(
    a: &SpectralElement<I>,
    lambda: &Functional<I>,
) -> Result<Ratio<I>> {
    let normalized = ExtValue::Finite(Ratio::new(I::one(), int::<I>(a.dim() as i64).to_integer()));
    if !is_nbar(&lambda.semigroup) || lambda.form != Form::Scaling(normalized) {
        return Err(CuError::NotNormalized);
    }
    let mut levels: Vec<Ratio<I>> = a.eigenvalues.clone();
    levels.push(Ratio::zero());
    levels.sort();
    levels.dedup();
    let mut total = Ratio::zero();
    for w in levels.windows(2) {
        // On [w0, w1) the rank of (a - t)_+ is constant.
        let rank = spectral_cutdown(a, &w[0])
            .map(|c| c.rank())
            .unwrap_or_else(|_| a.rank());
        let class = lambda.semigroup.element(Value::Compact(int(rank as i64)))?;
        match evaluate(lambda, &class)? {
            ExtValue::Finite(v) => total = total + v * (&w[1] - &w[0]),
            ExtValue::Infinite => return Err(CuError::NotNormalized),
        }
    }
    Ok(total)
}

/// The rank as an element of `N̄`.
pub fn spectral_class<I: Int>(a: &SpectralElement<I>, nbar: &Semigroup<I>) -> Result<Element<I>> {
    if !is_nbar(nbar) {
        return Err(CuError::BadParam(format!(
            "spectral classes live in nbar, not {}",
            nbar.label()
        )));
    }
    nbar.element(Value::Compact(int(a.rank() as i64)))
}
