use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::Dyadic;
use super::interval::Interval;
use super::{max_bits, DEFAULT_BITS};
use crate::error::{Error, Result};

/// A real number that can produce enclosures at any requested precision.
pub trait Enclose: Send + Sync + fmt::Debug {
    /// An interval containing the value, roughly `bits` bits wide.
    fn enclose(&self, bits: u32) -> Result<Interval>;
    /// Human-readable defining relation.
    fn describe(&self) -> String;
}

#[derive(Debug)]
enum Node {
    Exact(BigRational),
    Neg(Arc<Node>),
    Add(Arc<Node>, Arc<Node>),
    Sub(Arc<Node>, Arc<Node>),
    Mul(Arc<Node>, Arc<Node>),
    Div(Arc<Node>, Arc<Node>),
    Custom(Arc<dyn Enclose>),
}

const GUARD: u32 = 4;

impl Node {
    fn eval(&self, bits: u32) -> Result<Interval> {
        let w = bits + GUARD;
        match self {
            Node::Exact(r) => Ok(Interval::from_rational(r, bits.max(8))),
            Node::Neg(a) => Ok(a.eval(bits)?.neg()),
            Node::Add(a, b) => Ok(a.eval(w)?.add(&b.eval(w)?, w)),
            Node::Sub(a, b) => Ok(a.eval(w)?.sub(&b.eval(w)?, w)),
            Node::Mul(a, b) => Ok(a.eval(w)?.mul(&b.eval(w)?, w)),
            Node::Div(a, b) => a.eval(w)?.div(&b.eval(w)?, w),
            Node::Custom(c) => c.enclose(bits),
        }
    }

    fn describe(&self) -> String {
        match self {
            Node::Exact(r) => describe_rational(r),
            Node::Neg(a) => format!("-({})", a.describe()),
            Node::Add(a, b) => format!("({} + {})", a.describe(), b.describe()),
            Node::Sub(a, b) => format!("({} - {})", a.describe(), b.describe()),
            Node::Mul(a, b) => format!("({} * {})", a.describe(), b.describe()),
            Node::Div(a, b) => format!("({} / {})", a.describe(), b.describe()),
            Node::Custom(c) => c.describe(),
        }
    }
}

/// Terminating decimals print as decimals, everything else as `p/q`.
fn describe_rational(r: &BigRational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut den = r.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let mut digits = 0usize;
    let mut scale = BigInt::one();
    while (&den % &two).is_zero() || (&den % &five).is_zero() {
        if (&den % &two).is_zero() {
            den /= &two;
        }
        if (&den % &five).is_zero() {
            den /= &five;
        }
        digits += 1;
        scale *= 10;
        if digits > 40 {
            break;
        }
    }
    if den.is_one() {
        // scale only approximately tracks the needed power; find the exact one.
        let mut d = 0usize;
        let mut s = BigInt::one();
        loop {
            let v = r * BigRational::from_integer(s.clone());
            if v.is_integer() {
                let n = v.to_integer();
                let neg = n.is_negative();
                let mut text = n.abs().to_string();
                while text.len() <= d {
                    text.insert(0, '0');
                }
                text.insert(text.len() - d, '.');
                return if neg { format!("-{text}") } else { text };
            }
            d += 1;
            s *= 10;
        }
    }
    format!("{}/{}", r.numer(), r.denom())
}

/// A certified real: an enclosing interval plus the recipe for recomputing it
/// at higher precision.
///
/// Invariants: `lo <= hi`; after `refine(t)`, `hi - lo <= 2^-t`.
#[derive(Clone)]
pub struct CertifiedReal {
    node: Arc<Node>,
    exact: Option<Arc<BigRational>>,
    enclosure: Interval,
    precision_bits: u32,
}

/// Outcome of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum ComparisonVerdict {
    ProvablyLess,
    ProvablyGreater,
    ProvablyEqual,
    Undetermined,
}

impl CertifiedReal {
    fn from_node(node: Node, exact: Option<BigRational>) -> Result<Self> {
        let node = Arc::new(node);
        let enclosure = node.eval(DEFAULT_BITS)?;
        Ok(CertifiedReal {
            node,
            exact: exact.map(Arc::new),
            enclosure,
            precision_bits: DEFAULT_BITS,
        })
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::from_node(Node::Exact(r.clone()), Some(r)).expect("rational enclosure is infallible")
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Wraps an arbitrary recomputable value (equation roots and the like).
    pub fn from_enclose(value: Arc<dyn Enclose>) -> Result<Self> {
        Self::from_node(Node::Custom(value), None)
    }

    pub fn lo(&self) -> &Dyadic {
        self.enclosure.lo()
    }

    pub fn hi(&self) -> &Dyadic {
        self.enclosure.hi()
    }

    pub fn interval(&self) -> &Interval {
        &self.enclosure
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    /// The exact rational value, when the number is known to be rational.
    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_deref()
    }

    pub fn describe(&self) -> String {
        self.node.describe()
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure.midpoint().to_f64()
    }

    /// A fresh enclosure at `bits` bits of working precision, intersected with
    /// the current one so refinement never widens.
    pub fn enclosure(&self, bits: u32) -> Result<Interval> {
        if bits <= self.precision_bits {
            return Ok(self.enclosure.clone());
        }
        let fresh = self.node.eval(bits)?;
        Ok(fresh.intersect(&self.enclosure).unwrap_or(fresh))
    }

    /// Narrow the enclosure to width at most `2^-target_bits`.
    pub fn refine(&self, target_bits: u32) -> Result<CertifiedReal> {
        assert!(target_bits >= 1, "target_bits must be positive");
        if self.enclosure.width_within(target_bits) {
            return Ok(self.clone());
        }
        let ceiling = max_bits();
        let mut bits = (target_bits + 8).max(self.precision_bits);
        loop {
            let enclosure = self.enclosure(bits)?;
            if enclosure.width_within(target_bits) {
                return Ok(CertifiedReal {
                    node: self.node.clone(),
                    exact: self.exact.clone(),
                    enclosure,
                    precision_bits: bits,
                });
            }
            if bits >= ceiling {
                return Err(Error::PrecisionExhausted { bits: ceiling });
            }
            bits = (bits * 2).min(ceiling);
        }
    }

    fn binary(&self, other: &CertifiedReal, node: Node, exact: Option<BigRational>) -> Result<Self> {
        let mut r = Self::from_node(node, exact)?;
        // Start at the finer of the operands' precisions.
        let bits = self.precision_bits.max(other.precision_bits);
        if bits > r.precision_bits {
            r = r.refine_to_precision(bits)?;
        }
        Ok(r)
    }

    fn refine_to_precision(&self, bits: u32) -> Result<Self> {
        let enclosure = self.enclosure(bits)?;
        Ok(CertifiedReal {
            node: self.node.clone(),
            exact: self.exact.clone(),
            enclosure,
            precision_bits: bits,
        })
    }

    pub fn add(&self, other: &CertifiedReal) -> CertifiedReal {
        let exact = match (self.exact(), other.exact()) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        self.binary(other, Node::Add(self.node.clone(), other.node.clone()), exact)
            .expect("sum of enclosable values is enclosable")
    }

    pub fn sub(&self, other: &CertifiedReal) -> CertifiedReal {
        let exact = match (self.exact(), other.exact()) {
            (Some(a), Some(b)) => Some(a - b),
            _ => None,
        };
        self.binary(other, Node::Sub(self.node.clone(), other.node.clone()), exact)
            .expect("difference of enclosable values is enclosable")
    }

    pub fn mul(&self, other: &CertifiedReal) -> CertifiedReal {
        let exact = match (self.exact(), other.exact()) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        self.binary(other, Node::Mul(self.node.clone(), other.node.clone()), exact)
            .expect("product of enclosable values is enclosable")
    }

    /// Quotient; fails if the divisor cannot be separated from zero at the
    /// default precision.
    pub fn div(&self, other: &CertifiedReal) -> Result<CertifiedReal> {
        let exact = match (self.exact(), other.exact()) {
            (Some(_), Some(b)) if b.is_zero() => return Err(Error::DivisionByZero),
            (Some(a), Some(b)) => Some(a / b),
            _ => None,
        };
        self.binary(other, Node::Div(self.node.clone(), other.node.clone()), exact)
    }

    pub fn neg(&self) -> CertifiedReal {
        let exact = self.exact().map(|a| -a);
        Self::from_node(Node::Neg(self.node.clone()), exact)
            .expect("negation is enclosable")
            .refine_to_precision(self.precision_bits)
            .expect("negation is enclosable")
    }

    pub fn recip(&self) -> Result<CertifiedReal> {
        CertifiedReal::from_int(1).div(self)
    }

    /// Parses decimals (`0.25`, `-3`, `1e-3`) and fractions (`22/7`).
    pub fn parse(text: &str) -> Result<CertifiedReal> {
        parse_rational(text).map(CertifiedReal::from_rational)
    }
}

/// Exact rational from a decimal or fraction literal.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::ParseReal(text.to_string());
    let t = text.trim();
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp10) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let shift = exp10 - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(n);
    if shift >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-shift) as usize));
    }
    Ok(if neg { -r } else { r })
}

impl fmt::Debug for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.describe(), self.enclosure)
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// Free-function form of [`CertifiedReal::refine`].
pub fn refine(x: &CertifiedReal, target_bits: u32) -> Result<CertifiedReal> {
    x.refine(target_bits)
}

/// Decide the order of two reals, raising precision up to `max_bits`.
///
/// A `Provably*` verdict is never wrong. `ProvablyEqual` requires exact
/// knowledge: both values rational and equal, or both enclosures the same
/// single dyadic point.
pub fn certified_compare(x: &CertifiedReal, y: &CertifiedReal, max_bits: u32) -> ComparisonVerdict {
    if let (Some(a), Some(b)) = (x.exact(), y.exact()) {
        return match a.cmp(b) {
            Ordering::Less => ComparisonVerdict::ProvablyLess,
            Ordering::Greater => ComparisonVerdict::ProvablyGreater,
            Ordering::Equal => ComparisonVerdict::ProvablyEqual,
        };
    }
    let mut bits = x.precision_bits().max(y.precision_bits()).min(max_bits.max(1));
    loop {
        let (ix, iy) = match (x.enclosure(bits), y.enclosure(bits)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return ComparisonVerdict::Undetermined,
        };
        if ix.hi() < iy.lo() {
            return ComparisonVerdict::ProvablyLess;
        }
        if ix.lo() > iy.hi() {
            return ComparisonVerdict::ProvablyGreater;
        }
        if ix.is_point() && iy.is_point() && ix.lo() == iy.lo() {
            return ComparisonVerdict::ProvablyEqual;
        }
        if bits >= max_bits {
            return ComparisonVerdict::Undetermined;
        }
        bits = (bits * 2).min(max_bits);
    }
}
