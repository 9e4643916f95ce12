use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Direction for rounding an inexact result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

/// A dyadic rational `mantissa * 2^exponent`.
///
/// Values are kept normalized (odd mantissa, or zero with exponent 0) so that
/// structural equality coincides with numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

fn shr_floor(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let d = BigInt::one() << s;
    m.div_floor(&d)
}

fn shr_ceil(m: &BigInt, s: u64) -> BigInt {
    -shr_floor(&-m, s)
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        let mut d = Dyadic { mantissa, exponent };
        d.normalize();
        d
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic::new(BigInt::one(), e)
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        if let Some(tz) = self.mantissa.trailing_zeros() {
            if tz > 0 {
                self.mantissa >>= tz;
                self.exponent += tz as i64;
            }
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Position of the most significant bit: `|x| < 2^magnitude()`.
    pub fn magnitude(&self) -> i64 {
        self.mantissa.bits() as i64 + self.exponent
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &other.mantissa, self.exponent + other.exponent)
    }

    /// Multiply by `2^k` exactly.
    pub fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
        }
    }

    /// Round to at most `bits` significant bits in the given direction.
    pub fn round(&self, bits: u32, dir: Rounding) -> Dyadic {
        let len = self.mantissa.bits();
        if len <= bits as u64 {
            return self.clone();
        }
        let s = len - bits as u64;
        let m = match dir {
            Rounding::Down => shr_floor(&self.mantissa, s),
            Rounding::Up => shr_ceil(&self.mantissa, s),
        };
        Dyadic::new(m, self.exponent + s as i64)
    }

    /// Quotient rounded to `bits` significant bits. Panics on a zero divisor.
    pub fn div(&self, other: &Dyadic, bits: u32, dir: Rounding) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Make the divisor positive so floor/ceil keep their meaning.
        let (num, den) = if other.mantissa.is_negative() {
            (-&self.mantissa, -&other.mantissa)
        } else {
            (self.mantissa.clone(), other.mantissa.clone())
        };
        let shift = (bits as i64 + den.bits() as i64 - num.bits() as i64 + 2).max(0) as u64;
        let scaled = num << shift;
        let q = match dir {
            Rounding::Down => scaled.div_floor(&den),
            Rounding::Up => -((-scaled).div_floor(&den)),
        };
        Dyadic::new(q, self.exponent - other.exponent - shift as i64).round(bits, dir)
    }

    /// Nearest dyadic at `bits` significant bits below/above a rational.
    pub fn from_rational(r: &BigRational, bits: u32, dir: Rounding) -> Dyadic {
        let num = r.numer();
        let den = r.denom();
        if num.is_zero() {
            return Dyadic::zero();
        }
        // Exact when the denominator is a power of two.
        if let Some(tz) = den.trailing_zeros() {
            if den.bits() == tz + 1 {
                return Dyadic::new(num.clone(), -(tz as i64)).round(bits, dir);
            }
        }
        let shift = (bits as i64 + den.bits() as i64 - num.bits() as i64 + 2).max(0) as u64;
        let scaled = num << shift;
        let q = match dir {
            Rounding::Down => scaled.div_floor(den),
            Rounding::Up => -((-scaled).div_floor(den)),
        };
        Dyadic::new(q, -(shift as i64)).round(bits, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            BigRational::new(self.mantissa.clone(), BigInt::one() << (-self.exponent) as u64)
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            shr_floor(&self.mantissa, (-self.exponent) as u64)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            shr_ceil(&self.mantissa, (-self.exponent) as u64)
        }
    }

    pub fn is_integer(&self) -> bool {
        self.exponent >= 0
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // Keep 64 leading bits to stay within f64 range for huge mantissas.
        let len = self.mantissa.bits() as i64;
        let (m, e) = if len > 64 {
            (shr_floor(&self.mantissa, (len - 64) as u64), self.exponent + len - 64)
        } else {
            (self.mantissa.clone(), self.exponent)
        };
        m.to_f64().unwrap_or(f64::NAN) * (e as f64).exp2()
    }

    /// Exact midpoint.
    pub fn midpoint(&self, other: &Dyadic) -> Dyadic {
        self.add(other).shl(-1)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same sign: a quick magnitude test avoids huge shifts.
        let (ma, mb) = (self.magnitude(), other.magnitude());
        if ma != mb {
            let by_mag = ma.cmp(&mb);
            return if sa > 0 { by_mag } else { by_mag.reverse() };
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}
