//! Small helpers around arbitrary-precision rationals.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qz() -> Q {
    Q::zero()
}

pub fn is_int(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn to_i64(x: &Q) -> Option<i64> {
    if is_int(x) {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn to_f64(x: &Q) -> f64 {
    let n = x.numer().to_f64().unwrap_or(f64::NAN);
    let d = x.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        let shift = x.numer().bits().max(x.denom().bits()) as i64 - 60;
        let sh = shift.max(0) as usize;
        let n = (x.numer() >> sh).to_f64().unwrap_or(0.0);
        let d = (x.denom() >> sh).to_f64().unwrap_or(1.0);
        n / d
    }
}

/// Formats a rational as `n` or `n/d`.
pub fn fmt_q(x: &Q) -> String {
    if is_int(x) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `n` or `n/d` with an optional sign.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Q::from_integer(n))
    }
}

pub fn pow_q(x: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Rational gcd: the largest g with x/g and y/g integers.
pub fn gcd_q(x: &Q, y: &Q) -> Q {
    if x.is_zero() {
        return y.abs();
    }
    if y.is_zero() {
        return x.abs();
    }
    let n = x.numer().abs().gcd(&y.numer().abs());
    let d = x.denom().lcm(y.denom());
    Q::new(n, d)
}

/// Rational lcm: the smallest positive m with m/x and m/y integers.
pub fn lcm_q(x: &Q, y: &Q) -> Q {
    let n = x.numer().abs().lcm(&y.numer().abs());
    let d = x.denom().gcd(y.denom());
    Q::new(n, d)
}

pub fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

/// Exact integer r-th root of a nonnegative integer, if it exists.
pub fn int_root(n: &BigInt, r: u32) -> Option<BigInt> {
    if n.is_negative() {
        if r % 2 == 1 {
            return int_root(&-n, r).map(|x| -x);
        }
        return None;
    }
    let x = n.nth_root(r);
    if num_traits::pow(x.clone(), r as usize) == *n {
        Some(x)
    } else {
        None
    }
}

/// Exact rational r-th root, if it exists.
pub fn q_root(x: &Q, r: u32) -> Option<Q> {
    let n = int_root(x.numer(), r)?;
    let d = int_root(x.denom(), r)?;
    Some(Q::new(n, d))
}

/// Squarefree decomposition n = s^2 * f with f squarefree; returns (s, f).
pub fn squarefree_split(mut n: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut f = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= p;
        }
        if e % 2 == 1 {
            f *= p;
        }
        p += 1;
    }
    f *= n;
    (s, f)
}

pub fn largest_prime_factor(mut n: u64) -> u64 {
    let mut best = 1;
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            n /= p;
            best = p;
        }
        p += 1;
    }
    if n > 1 {
        best = n;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_gcd_lcm() {
        assert_eq!(gcd_q(&qf(1, 2), &qf(1, 3)), qf(1, 6));
        assert_eq!(lcm_q(&qf(1, 2), &qf(1, 3)), q(1));
        assert_eq!(squarefree_split(12), (2, 3));
        assert_eq!(q_root(&qf(8, 27), 3), Some(qf(2, 3)));
        assert_eq!(parse_q("-3/4"), Some(qf(-3, 4)));
    }
}
