//! Exact scalars: the integer parameter, rationals over it, and `[0, ∞]`.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::Add;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

pub use num_rational::Ratio;

use crate::error::CuError;

/// Integer type underlying every exact rational in the crate.
pub trait Int:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Int for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

pub fn int<I: Int>(n: i64) -> Ratio<I> {
    Ratio::from_integer(I::from_i64(n).expect("i64 fits"))
}

pub fn rat<I: Int>(n: i64, d: i64) -> Ratio<I> {
    Ratio::new(
        I::from_i64(n).expect("i64 fits"),
        I::from_i64(d).expect("i64 fits"),
    )
}

pub fn to_i64<I: Int>(q: &Ratio<I>) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

/// `p/q`, or `p` when the denominator is 1.
pub fn fmt_rational<I: Int>(q: &Ratio<I>) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational<I: Int>(s: &str) -> Result<Ratio<I>, CuError> {
    let s = s.trim();
    let bad = || CuError::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = I::from_str_radix(n, 10).map_err(|_| bad())?;
    let d = I::from_str_radix(d, 10).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(CuError::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Ratio::new(n, d))
}

pub fn pow2_inv<I: Int>(k: u32) -> Ratio<I> {
    let mut d = I::one();
    let two = I::one() + I::one();
    for _ in 0..k {
        d = d * two.clone();
    }
    Ratio::new(I::one(), d)
}

/// True when every prime factor of the denominator divides `m` (`m = 0` admits all).
pub fn in_dyadic_like<I: Int>(q: &Ratio<I>, m: u64) -> bool {
    if m == 0 {
        return true;
    }
    let m = I::from_u64(m).expect("u64 fits");
    let mut d = q.denom().clone();
    loop {
        if d.is_one() {
            return true;
        }
        let g = d.gcd(&m);
        if g.is_one() {
            return false;
        }
        d = d / g;
    }
}

/// A value in `[0, ∞]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ExtValue<I: Int> {
    Finite(Ratio<I>),
    Infinite,
}

impl<I: Int> ExtValue<I> {
    pub fn zero() -> Self {
        ExtValue::Finite(Ratio::zero())
    }

    pub fn int(n: i64) -> Self {
        ExtValue::Finite(int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        ExtValue::Finite(rat(n, d))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtValue::Finite(q) if q.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtValue::Finite(_))
    }

    pub fn finite(&self) -> Option<&Ratio<I>> {
        match self {
            ExtValue::Finite(q) => Some(q),
            ExtValue::Infinite => None,
        }
    }

    /// Product with the convention `0 · ∞ = 0`.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ExtValue::zero();
        }
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(a * b),
            _ => ExtValue::Infinite,
        }
    }

    pub fn scale(&self, q: &Ratio<I>) -> Self {
        self.mul(&ExtValue::Finite(q.clone()))
    }

    /// `self - other` when `other ≤ self` and `other` is finite.
    pub fn checked_sub(&self, other: &Ratio<I>) -> Option<Self> {
        match self {
            ExtValue::Infinite => Some(ExtValue::Infinite),
            ExtValue::Finite(a) if a >= other => Some(ExtValue::Finite(a - other)),
            _ => None,
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            ExtValue::Finite(q) => q.is_integer(),
            ExtValue::Infinite => true,
        }
    }

    pub fn parse(s: &str) -> Result<Self, CuError> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            Ok(ExtValue::Infinite)
        } else {
            let q = parse_rational(t)?;
            if q < Ratio::zero() {
                return Err(CuError::Parse(format!("negative value {t:?}")));
            }
            Ok(ExtValue::Finite(q))
        }
    }
}

impl<I: Int> PartialOrd for ExtValue<I> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<I: Int> Ord for ExtValue<I> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => a.cmp(b),
            (ExtValue::Finite(_), ExtValue::Infinite) => Ordering::Less,
            (ExtValue::Infinite, ExtValue::Finite(_)) => Ordering::Greater,
            (ExtValue::Infinite, ExtValue::Infinite) => Ordering::Equal,
        }
    }
}

impl<I: Int> Add for ExtValue<I> {
    type Output = ExtValue<I>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<'a, I: Int> Add<&'a ExtValue<I>> for &'a ExtValue<I> {
    type Output = ExtValue<I>;
    fn add(self, rhs: &ExtValue<I>) -> ExtValue<I> {
        match (self, rhs) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(a + b),
            _ => ExtValue::Infinite,
        }
    }
}

impl<I: Int> From<Ratio<I>> for ExtValue<I> {
    fn from(q: Ratio<I>) -> Self {
        ExtValue::Finite(q)
    }
}

impl<I: Int> Display for ExtValue<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Finite(q) => f.write_str(&fmt_rational(q)),
            ExtValue::Infinite => f.write_str("inf"),
        }
    }
}
