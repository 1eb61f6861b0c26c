//! Numeric plumbing shared by every solver.
//!
//! Durations are unsigned integers of any width; every solver is generic over
//! the [`Time`] trait and the crate root fixes `u64` through type aliases.
//! Quantities that are genuinely fractional (budgets, grids, ratios) are exact
//! [`Rational`]s and never leak into a [`Schedule`](crate::Schedule).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::iter::Sum;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{PrimInt, ToPrimitive, Unsigned};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Exact rational used for certified bounds, grids and ratios.
pub type Rational = Ratio<i128>;

/// An integral, non-negative time quantity.
pub trait Time:
    PrimInt
    + Unsigned
    + Hash
    + Debug
    + Display
    + FromStr
    + Sum
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Lossless widening used by the solvers' internal scaled arithmetic.
    fn wide(self) -> i128 {
        self.to_i128().expect("time value does not fit in i128")
    }

    /// Narrowing back from scaled arithmetic. Panics on overflow, which only
    /// happens if a schedule would not fit in `Self` at all.
    fn from_wide(v: i128) -> Self {
        <Self as num_traits::NumCast>::from(v).expect("time value out of range")
    }

    fn to_rational(self) -> Rational {
        Rational::from_integer(self.wide())
    }
}

impl<T> Time for T where
    T: PrimInt
        + Unsigned
        + Hash
        + Debug
        + Display
        + FromStr
        + Sum
        + Default
        + Send
        + Sync
        + Serialize
        + DeserializeOwned
        + 'static
{
}

/// Smallest integer not below `r`.
pub fn ceil_rational(r: &Rational) -> i128 {
    r.ceil().to_integer()
}

/// `ceil(a / b)` for `b > 0` and `a >= 0`.
pub fn div_ceil(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0 && a >= 0);
    (a + b - 1) / b
}

/// Parses `"3"`, `"0.25"`, `"1/4"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: i128 = num.trim().parse().ok()?;
        let den: i128 = den.trim().parse().ok()?;
        return (den != 0).then(|| Rational::new(num, den));
    }
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if frac_part.len() > 30 || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let negative = int_part.starts_with('-');
    let int_digits = int_part.trim_start_matches(['-', '+']);
    if int_digits.is_empty() && frac_part.is_empty() {
        return None;
    }
    let int_val: i128 = if int_digits.is_empty() {
        0
    } else {
        int_digits.parse().ok()?
    };
    let scale = 10i128.checked_pow(frac_part.len() as u32)?;
    let frac_val: i128 = if frac_part.is_empty() {
        0
    } else {
        frac_part.parse().ok()?
    };
    let mag = Rational::new(int_val.checked_mul(scale)?.checked_add(frac_val)?, scale);
    Some(if negative { -mag } else { mag })
}

/// Lossy conversion for reporting only.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}
