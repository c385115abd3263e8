use serde::{Deserialize, Serialize};

use super::{to_decimal, to_fraction_string, Rational};
use crate::error::{Error, Result};

/// Closed interval with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalInterval {
    lo: Rational,
    hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!("interval [{lo}, {hi}] is empty")));
        }
        Ok(RationalInterval { lo, hi })
    }

    pub fn point(v: Rational) -> Self {
        RationalInterval { lo: v.clone(), hi: v }
    }

    /// `[base, base + slack]`; `slack` must be non-negative.
    pub fn with_upper_slack(base: Rational, slack: &Rational) -> Result<Self> {
        let hi = &base + slack;
        Self::new(base, hi)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn intersects(&self, other: &RationalInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_within(&self, outer: &RationalInterval) -> bool {
        outer.lo <= self.lo && self.hi <= outer.hi
    }

    pub fn shift(&self, by: &Rational) -> RationalInterval {
        RationalInterval {
            lo: &self.lo + by,
            hi: &self.hi + by,
        }
    }

    /// Multiplies by a non-negative factor.
    pub fn scale(&self, factor: &Rational) -> Result<RationalInterval> {
        RationalInterval::new(&self.lo * factor, &self.hi * factor)
    }

    pub fn add(&self, other: &RationalInterval) -> RationalInterval {
        RationalInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    /// Number of leading decimal places on which both endpoints agree,
    /// capped at `max`.
    pub fn agreeing_digits(&self, max: usize) -> usize {
        let lo = to_decimal(&self.lo, max);
        let hi = to_decimal(&self.hi, max);
        let Some(point) = lo.find('.') else {
            return 0;
        };
        if lo[..point] != hi[..point.min(hi.len())] {
            return 0;
        }
        lo[point + 1..]
            .chars()
            .zip(hi[point + 1..].chars())
            .take_while(|(a, b)| a == b)
            .count()
    }
}

/// Serialized form: exact endpoint strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub lo: String,
    pub hi: String,
}

impl From<&RationalInterval> for IntervalRecord {
    fn from(iv: &RationalInterval) -> Self {
        IntervalRecord {
            lo: to_fraction_string(&iv.lo),
            hi: to_fraction_string(&iv.hi),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn empty_interval_rejected() {
        assert!(RationalInterval::new(rat(1, 2), rat(1, 3)).is_err());
    }

    #[test]
    fn intersection_and_nesting() {
        let a = RationalInterval::new(rat(0, 1), rat(1, 2)).unwrap();
        let b = RationalInterval::new(rat(1, 2), rat(1, 1)).unwrap();
        let c = RationalInterval::new(rat(1, 8), rat(1, 4)).unwrap();
        assert!(a.intersects(&b));
        assert!(c.is_within(&a));
        assert!(!c.intersects(&b));
        assert_eq!(a.width(), rat(1, 2));
    }

    #[test]
    fn agreeing_digits_counts_common_prefix() {
        let iv = RationalInterval::new(rat(12344, 100000), rat(12349, 100000)).unwrap();
        assert_eq!(iv.agreeing_digits(10), 4);
    }
}
