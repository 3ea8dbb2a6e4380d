//! Exact coefficient fields.
//!
//! Arithmetic goes through a *field object* rather than operator traits on
//! the element type: matrices and modules stay generic over `F: Field`, and
//! the prime-field modulus lives in the object instead of the type.

use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{EngineError, Result};

/// An exact field of coefficients.  No approximation anywhere: every
/// operation is exact and `inv` is total away from zero.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_integer(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly on zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        Some(self.mul(a, &self.inv(b)?))
    }

    /// `acc += c * x`, the inner loop of every elimination.
    fn add_mul(&self, acc: &Self::Elem, c: &Self::Elem, x: &Self::Elem) -> Self::Elem {
        self.add(acc, &self.mul(c, x))
    }

    /// Canonical text form; `parse` accepts everything `format` produces.
    fn format(&self, a: &Self::Elem) -> String;

    /// Parse an integer literal or a `p/q` fraction literal.
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    /// Short name for reports, e.g. `Q` or `F7`.
    fn name(&self) -> String;
}

/// The rational numbers with arbitrary-precision arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_integer(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<BigRational> {
        let (num, den) = split_fraction(s)?;
        if den.is_zero() {
            return Err(EngineError::Arithmetic { reason: alloc::format!("zero denominator in `{s}`") });
        }
        Ok(BigRational::new(num, den))
    }

    fn name(&self) -> String {
        "Q".to_string()
    }
}

/// The field with `p` elements, `p` an odd-or-even prime below 2^31 so that
/// products fit in `u64` without reduction tricks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<PrimeField> {
        if p >= 1 << 31 {
            return Err(EngineError::Arithmetic { reason: alloc::format!("modulus {p} is too large (need p < 2^31)") });
        }
        if !is_prime(p) {
            return Err(EngineError::Arithmetic { reason: alloc::format!("modulus {p} is not prime") });
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Field for PrimeField {
    /// Invariant: always `< p`.
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_integer(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<u64> {
        let (num, den) = split_fraction(s)?;
        let p = BigInt::from(self.p);
        let num = num.mod_floor(&p).to_string().parse::<u64>().unwrap();
        let den = den.mod_floor(&p).to_string().parse::<u64>().unwrap();
        let den_inv = self.inv(&den).ok_or_else(|| EngineError::Arithmetic {
            reason: alloc::format!("denominator of `{s}` vanishes mod {}", self.p),
        })?;
        Ok(self.mul(&num, &den_inv))
    }

    fn name(&self) -> String {
        alloc::format!("F{}", self.p)
    }
}

fn split_fraction(s: &str) -> Result<(BigInt, BigInt)> {
    let bad = || EngineError::Arithmetic { reason: alloc::format!("cannot parse `{s}` as a field element") };
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let num: BigInt = n.trim().parse().map_err(|_| bad())?;
            let den: BigInt = d.trim().parse().map_err(|_| bad())?;
            if den.is_negative() {
                Ok((-num, -den))
            } else {
                Ok((num, den))
            }
        }
        None => Ok((s.parse().map_err(|_| bad())?, BigInt::one())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        let q = Rationals;
        let a = q.parse("-3/6").unwrap();
        assert_eq!(q.format(&a), "-1/2");
        let b = q.parse("4").unwrap();
        assert_eq!(q.format(&q.mul(&a, &b)), "-2");
        assert_eq!(q.format(&q.inv(&a).unwrap()), "-2");
        assert!(q.inv(&q.zero()).is_none());
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("x").is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_integer(-1), 6);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3).unwrap(), 5);
        assert_eq!(f.parse("1/2").unwrap(), 4); // 2 * 4 = 8 = 1 mod 7
        assert_eq!(f.parse("-10").unwrap(), 4);
        assert_eq!(f.name(), "F7");
        assert!(PrimeField::new(6).is_err());
        assert!(PrimeField::new(1 << 31).is_err());
        assert!(PrimeField::new(2).is_ok());
    }

    #[test]
    fn big_modulus_products_do_not_overflow() {
        let p = (1u64 << 31) - 1; // Mersenne prime
        let f = PrimeField::new(p).unwrap();
        let a = p - 1;
        assert_eq!(f.mul(&a, &a), 1);
        assert_eq!(f.inv(&a).unwrap(), a);
    }
}
