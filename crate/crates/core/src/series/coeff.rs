use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

/// Exact rational coefficient, always kept in lowest terms with a positive
/// denominator.
pub type Coeff = BigRational;

/// Canonical `"p/q"` form; integers carry an explicit `/1`.
pub fn coeff_to_string(c: &Coeff) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

/// Accepts `"p/q"`, `"-p/q"` or a bare integer `"p"`. The result is reduced.
pub fn coeff_from_str(s: &str) -> Result<Coeff> {
    let bad = || Error::Json(format!("malformed rational `{s}`"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if !d.is_positive() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

pub(crate) fn is_nonnegative(c: &Coeff) -> bool {
    !c.is_negative()
}
