//! Arithmetic in `Q(ω)`, `ω` a primitive `n`-th root of unity, represented
//! by polynomials reduced modulo the cyclotomic polynomial `Φ_n`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::Rational;

/// Coefficients of `Φ_n`, constant term first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = -BigInt::one();
    poly[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        poly = divide_exact(&poly, &cyclotomic_polynomial(d));
    }
    poly
}

/// Quotient of integer polynomials when the divisor is monic and divides.
fn divide_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Remainder of `Σ coeffs[k] x^k` modulo `Φ_n`, as `φ(n)` coefficients.
pub fn reduce(coeffs: &[Rational], n: u32) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    let mut rem = coeffs.to_vec();
    if rem.len() < deg {
        rem.resize(deg, Rational::zero());
    }
    for i in (deg..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi.iter().enumerate() {
            rem[i - deg + j] -= &c * Rational::from_integer(pj.clone());
        }
    }
    rem.truncate(deg);
    rem
}

/// `Σ coeffs[k] ω^k` when it is rational.
pub fn rational_value(coeffs: &[Rational], n: u32) -> Option<Rational> {
    let r = reduce(coeffs, n);
    r[1..].iter().all(Zero::is_zero).then(|| r[0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(5), ints(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(10), ints(&[1, -1, 1, -1, 1]));
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for n in 2..=12 {
            let ones = vec![int(1); n as usize];
            assert_eq!(rational_value(&ones, n), Some(int(0)));
        }
    }

    #[test]
    fn primitive_root_is_irrational() {
        for n in 3..=12 {
            let mut w = vec![int(0); n as usize];
            w[1] = int(1);
            assert_eq!(rational_value(&w, n), None);
        }
    }
}
