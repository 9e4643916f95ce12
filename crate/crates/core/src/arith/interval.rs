use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::dyadic::{Dyadic, Rounding};
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` with dyadic endpoints. Every operation rounds
/// outward, so the result encloses every value the exact operation could take.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "inverted interval {lo:?} > {hi:?}");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_int(v: i64) -> Self {
        Interval::point(Dyadic::from_int(v))
    }

    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(r, bits, Rounding::Down),
            hi: Dyadic::from_rational(r, bits, Rounding::Up),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// True when `hi - lo <= 2^-bits`.
    pub fn width_within(&self, bits: u32) -> bool {
        self.width() <= Dyadic::pow2(-(bits as i64))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn strictly_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn strictly_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.midpoint(&self.hi)
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn add(&self, other: &Interval, bits: u32) -> Interval {
        Interval {
            lo: self.lo.add(&other.lo).round(bits, Rounding::Down),
            hi: self.hi.add(&other.hi).round(bits, Rounding::Up),
        }
    }

    pub fn sub(&self, other: &Interval, bits: u32) -> Interval {
        self.add(&other.neg(), bits)
    }

    pub fn mul(&self, other: &Interval, bits: u32) -> Interval {
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().expect("four products").clone();
        let hi = products.iter().max().expect("four products").clone();
        Interval {
            lo: lo.round(bits, Rounding::Down),
            hi: hi.round(bits, Rounding::Up),
        }
    }

    pub fn div(&self, other: &Interval, bits: u32) -> Result<Interval> {
        if other.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| a.div(b, bits, Rounding::Down))
            .min()
            .expect("four quotients");
        let hi = pairs
            .iter()
            .map(|(a, b)| a.div(b, bits, Rounding::Up))
            .max()
            .expect("four quotients");
        Ok(Interval { lo, hi })
    }

    /// Add an integer exactly (no rounding needed beyond the operands').
    pub fn add_int(&self, k: i64) -> Interval {
        let d = Dyadic::from_int(k);
        Interval {
            lo: self.lo.add(&d),
            hi: self.hi.add(&d),
        }
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: u32, bits: u32) -> Interval {
        let mut result = Interval::from_int(1);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, bits);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, bits);
            }
        }
        result
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Intersection, `None` when disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// The common floor of every point, if there is one.
    pub fn floor(&self) -> Option<BigInt> {
        let f = self.lo.floor();
        (f == self.hi.floor()).then_some(f)
    }

    /// The common ceiling of every point, if there is one.
    pub fn ceil(&self) -> Option<BigInt> {
        let c = self.lo.ceil();
        (c == self.hi.ceil()).then_some(c)
    }

    pub fn to_f64_bounds(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn products_of_mixed_sign_intervals() {
        let a = Interval::new(Dyadic::from_int(-2), Dyadic::from_int(3));
        let b = Interval::new(Dyadic::from_int(-5), Dyadic::from_int(1));
        let p = a.mul(&b, 64);
        assert_eq!(p.lo(), &Dyadic::from_int(-15));
        assert_eq!(p.hi(), &Dyadic::from_int(10));
    }

    #[test]
    fn division_encloses_and_rejects_zero() {
        let one = Interval::from_int(1);
        let three = Interval::from_int(3);
        let q = one.div(&three, 80).unwrap();
        let third = rat(1, 3);
        assert!(q.lo().to_rational() <= third && third <= q.hi().to_rational());
        assert!(q.width_within(78));
        let straddle = Interval::new(Dyadic::from_int(-1), Dyadic::from_int(1));
        assert!(matches!(one.div(&straddle, 64), Err(Error::DivisionByZero)));
    }

    #[test]
    fn floor_is_only_reported_when_common() {
        let x = Interval::from_rational(&rat(7, 3), 64);
        assert_eq!(x.floor(), Some(BigInt::from(2)));
        let y = Interval::new(Dyadic::new(BigInt::from(3), -1), Dyadic::from_int(2));
        assert_eq!(y.floor(), None);
        assert_eq!(y.ceil(), Some(BigInt::from(2)));
    }

    #[test]
    fn powers_match_repeated_products() {
        let x = Interval::from_rational(&rat(10, 3), 200);
        let p = x.powi(7, 200);
        let exact = rat(10_000_000, 2187);
        assert!(p.lo().to_rational() <= exact && exact <= p.hi().to_rational());
    }
}
