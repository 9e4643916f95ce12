use std::fmt;
use std::sync::Mutex;

use super::dyadic::Dyadic;
use super::interval::Interval;
use super::real::Enclose;
use crate::error::{Error, Result};

/// A continuous function with a sign change on a known bracket.
pub trait BracketedEquation: Send + Sync {
    /// Enclosure of f(x) computed with `bits` bits of working precision.
    fn eval(&self, x: &Dyadic, bits: u32) -> Result<Interval>;
    fn describe(&self) -> String;
}

/// Root of a bracketed equation, found by certified bisection.
///
/// The current bracket is cached, so repeated refinement only pays for the
/// extra bits.
pub struct BisectionRoot<F> {
    f: F,
    state: Mutex<Bracket>,
}

struct Bracket {
    lo: Dyadic,
    hi: Dyadic,
    /// Sign of f at `lo`; the sign at `hi` is its negation.
    sign_lo: i32,
}

impl<F: BracketedEquation> BisectionRoot<F> {
    /// Checks the sign change at the endpoints before accepting the bracket.
    pub fn new(f: F, lo: Dyadic, hi: Dyadic) -> Result<Self> {
        let sign = |x: &Dyadic| -> Result<i32> {
            let mut bits = 64;
            loop {
                let v = f.eval(x, bits)?;
                if v.strictly_positive() {
                    return Ok(1);
                }
                if v.strictly_negative() {
                    return Ok(-1);
                }
                if bits >= super::max_bits() {
                    return Err(Error::BracketFailure(format!("sign of f at {x} undetermined")));
                }
                bits *= 2;
            }
        };
        let (sl, sh) = (sign(&lo)?, sign(&hi)?);
        if sl == sh {
            return Err(Error::BracketFailure(format!(
                "f has the same sign at both ends of [{lo}, {hi}]"
            )));
        }
        Ok(BisectionRoot {
            f,
            state: Mutex::new(Bracket { lo, hi, sign_lo: sl }),
        })
    }

    pub fn equation(&self) -> &F {
        &self.f
    }

    /// Current bracket.
    pub fn bracket(&self) -> Interval {
        let s = self.state.lock().expect("bracket lock");
        Interval::new(s.lo.clone(), s.hi.clone())
    }

    /// Bisect until the bracket is at most `2^-bits` wide.
    pub fn narrow(&self, bits: u32) -> Result<Interval> {
        let target = Dyadic::pow2(-(bits as i64));
        let mut s = self.state.lock().expect("bracket lock");
        while s.hi.sub(&s.lo) > target {
            let mid = s.lo.midpoint(&s.hi);
            // Working precision follows the bracket width.
            let work = (s.hi.sub(&s.lo).magnitude().unsigned_abs() as u32 + 32).max(64);
            let mut w = work;
            let sign = loop {
                let v = self.f.eval(&mid, w)?;
                if v.strictly_positive() {
                    break Some(1);
                }
                if v.strictly_negative() {
                    break Some(-1);
                }
                if v.is_point() {
                    break None; // exact root
                }
                if w >= super::max_bits() {
                    return Err(Error::PrecisionExhausted { bits: w });
                }
                w = (w * 2).min(super::max_bits());
            };
            match sign {
                None => {
                    s.lo = mid.clone();
                    s.hi = mid;
                }
                Some(sg) if sg == s.sign_lo => s.lo = mid,
                Some(_) => s.hi = mid,
            }
        }
        Ok(Interval::new(s.lo.clone(), s.hi.clone()))
    }
}

impl<F: BracketedEquation> Enclose for BisectionRoot<F> {
    fn enclose(&self, bits: u32) -> Result<Interval> {
        self.narrow(bits)
    }

    fn describe(&self) -> String {
        self.f.describe()
    }
}

impl<F> fmt::Debug for BisectionRoot<F>
where
    F: BracketedEquation,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {}", self.f.describe())
    }
}

/// Polynomial `c0 + c1 x + ... + cn x^n` with rational coefficients.
#[derive(Clone, Debug)]
pub struct Polynomial {
    coeffs: Vec<num_rational::BigRational>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<num_rational::BigRational>) -> Self {
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[num_rational::BigRational] {
        &self.coeffs
    }
}

impl BracketedEquation for Polynomial {
    fn eval(&self, x: &Dyadic, bits: u32) -> Result<Interval> {
        let x = Interval::point(x.clone());
        let mut acc = Interval::from_int(0);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&x, bits).add(&Interval::from_rational(c, bits), bits);
        }
        Ok(acc)
    }

    fn describe(&self) -> String {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("poly:{}", cs.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    /// x^2 - 2
    struct Sqrt2;

    impl BracketedEquation for Sqrt2 {
        fn eval(&self, x: &Dyadic, _bits: u32) -> Result<Interval> {
            Ok(Interval::point(x.mul(x).sub(&Dyadic::from_int(2))))
        }
        fn describe(&self) -> String {
            "x^2 = 2".into()
        }
    }

    #[test]
    fn bisection_finds_sqrt_two() {
        let r = BisectionRoot::new(Sqrt2, Dyadic::from_int(1), Dyadic::from_int(2)).unwrap();
        let b = r.narrow(200).unwrap();
        assert!(b.width_within(200));
        let lo = b.lo().to_rational();
        let hi = b.hi().to_rational();
        let two = BigRational::from_integer(BigInt::from(2));
        assert!(&lo * &lo <= two && two <= &hi * &hi);
        // A second request reuses the cached bracket.
        let again = r.narrow(100).unwrap();
        assert_eq!(again, b);
    }

    #[test]
    fn bad_bracket_is_rejected() {
        let r = BisectionRoot::new(Sqrt2, Dyadic::from_int(2), Dyadic::from_int(3));
        assert!(matches!(r, Err(Error::BracketFailure(_))));
    }
}
