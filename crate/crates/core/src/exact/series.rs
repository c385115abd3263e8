use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

fn check_ratio(x: &Rational) -> Result<()> {
    if x.is_negative() || x >= &Rational::one() {
        return Err(Error::Domain(format!("series ratio {x} outside [0, 1)")));
    }
    Ok(())
}

/// `sum_{n>=1} (n + c) x^n = x/(1-x)^2 + c x/(1-x)` for `0 <= x < 1`.
pub fn moment_sum(c: &Rational, x: &Rational) -> Result<Rational> {
    check_ratio(x)?;
    if x.is_zero() {
        return Ok(Rational::zero());
    }
    let q = Rational::one() - x;
    Ok(x / (&q * &q) + c * x / &q)
}

/// `sum_{n>=1} x^n = x/(1-x)` for `0 <= x < 1`.
pub fn geometric_sum(x: &Rational) -> Result<Rational> {
    check_ratio(x)?;
    Ok(x / (Rational::one() - x))
}
