//! Parameters of the map `x -> beta x + alpha mod 1`, digit words, and the
//! kneading sequences `a` (coding of 0) and `b` (left-limit coding of 1).

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{
    certified_compare, max_bits, parse_rational, BisectionRoot, CertifiedReal, ComparisonVerdict, Dyadic, Interval,
    Polynomial, DEFAULT_BITS,
};
use crate::error::{Error, Result};

/// Character for a digit: `0-9` then `a-z`.
pub fn digit_char(d: u8) -> char {
    char::from_digit(d as u32, 36).expect("digit below 36")
}

/// A finite word over `{0, ..., ell}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(digits: Vec<u8>) -> Self {
        Word(digits)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_digits(self) -> Vec<u8> {
        self.0
    }

    pub fn push(&mut self, d: u8) {
        self.0.push(d);
    }

    /// Prefix of length `n` (the whole word if shorter).
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn concat(&self, other: &[u8]) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Word(v)
    }

    /// Fails with `InvalidDigit` if a digit exceeds `ell`.
    pub fn check_alphabet(&self, ell: u8) -> Result<()> {
        match self.0.iter().find(|&&d| d > ell) {
            Some(&digit) => Err(Error::InvalidDigit { digit, ell }),
            None => Ok(()),
        }
    }
}

impl Deref for Word {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl From<Vec<u8>> for Word {
    fn from(v: Vec<u8>) -> Self {
        Word(v)
    }
}

impl From<&[u8]> for Word {
    fn from(v: &[u8]) -> Self {
        Word(v.to_vec())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                c.to_digit(36)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::ParseWord(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.0 {
            write!(f, "{}", digit_char(d))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `(alpha, beta)` together with the top digit `ell = ceil(alpha + beta) - 1`.
#[derive(Clone, Debug)]
pub struct Parameters {
    alpha: CertifiedReal,
    beta: CertifiedReal,
    ell: u8,
    beta_above_two: bool,
}

impl Parameters {
    /// Checks `0 <= alpha < 1` and `beta > 1` and fixes `ell`.
    pub fn new(alpha: CertifiedReal, beta: CertifiedReal) -> Result<Self> {
        let cap = max_bits();
        let zero = CertifiedReal::from_int(0);
        let one = CertifiedReal::from_int(1);
        if !matches!(
            certified_compare(&alpha, &zero, cap),
            ComparisonVerdict::ProvablyGreater | ComparisonVerdict::ProvablyEqual
        ) {
            return Err(Error::InvalidParameters("alpha must be certifiably >= 0".into()));
        }
        if certified_compare(&alpha, &one, cap) != ComparisonVerdict::ProvablyLess {
            return Err(Error::InvalidParameters("alpha must be certifiably < 1".into()));
        }
        if certified_compare(&beta, &one, cap) != ComparisonVerdict::ProvablyGreater {
            return Err(Error::InvalidParameters("beta must be certifiably > 1".into()));
        }
        if certified_compare(&beta, &CertifiedReal::from_int(36), cap) != ComparisonVerdict::ProvablyLess {
            return Err(Error::InvalidParameters(
                "beta must be below 36 (digits are rendered in base 36)".into(),
            ));
        }
        let ceil = match alpha.add(&beta).exact() {
            Some(s) => s.ceil().to_integer(),
            None => {
                let mut bits = DEFAULT_BITS;
                loop {
                    if let Some(c) = alpha.add(&beta).enclosure(bits)?.ceil() {
                        break c;
                    }
                    if bits >= cap {
                        return Err(Error::InvalidParameters(
                            "alpha + beta is too close to an integer to fix the alphabet".into(),
                        ));
                    }
                    bits = (bits * 2).min(cap);
                }
            }
        };
        let ell = (ceil - BigInt::one()).to_u8().expect("ell below 36");
        let beta_above_two =
            certified_compare(&beta, &CertifiedReal::from_int(2), cap) == ComparisonVerdict::ProvablyGreater;
        Ok(Parameters {
            alpha,
            beta,
            ell,
            beta_above_two,
        })
    }

    pub fn from_rationals(alpha: BigRational, beta: BigRational) -> Result<Self> {
        Self::new(CertifiedReal::from_rational(alpha), CertifiedReal::from_rational(beta))
    }

    /// Parses descriptors.
    ///
    /// `beta`: a decimal or `p/q`; `poly:c0,c1,...@lo,hi` for the root of a
    /// polynomial on a bracket; `eta-root` for the beta of the worked
    /// example with `eta_beta(c) = 1`.
    /// `alpha`: a decimal or `p/q`, or `inv-beta` for `1/beta`.
    pub fn parse(alpha: &str, beta: &str) -> Result<Self> {
        let beta_value = parse_beta(beta)?;
        let alpha_value = match alpha.trim() {
            "inv-beta" | "1/beta" => beta_value.recip()?,
            other => CertifiedReal::parse(other)?,
        };
        Self::new(alpha_value, beta_value)
    }

    pub fn alpha(&self) -> &CertifiedReal {
        &self.alpha
    }

    pub fn beta(&self) -> &CertifiedReal {
        &self.beta
    }

    pub fn ell(&self) -> u8 {
        self.ell
    }

    pub fn beta_above_two(&self) -> bool {
        self.beta_above_two
    }

    pub fn require_beta_above_two(&self) -> Result<()> {
        if self.beta_above_two {
            Ok(())
        } else {
            Err(Error::BetaNotAboveTwo)
        }
    }

    /// Both parameters known exactly as rationals.
    pub fn exact(&self) -> Option<(&BigRational, &BigRational)> {
        Some((self.alpha.exact()?, self.beta.exact()?))
    }
}

fn parse_beta(text: &str) -> Result<CertifiedReal> {
    let t = text.trim();
    if t == "eta-root" {
        return crate::example::example_beta();
    }
    if let Some(rest) = t.strip_prefix("poly:") {
        let bad = || Error::ParseReal(text.to_string());
        let (coeffs, bracket) = rest.split_once('@').ok_or_else(bad)?;
        let coeffs = coeffs.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        let (lo, hi) = bracket.split_once(',').ok_or_else(bad)?;
        let (lo, hi) = (parse_rational(lo)?, parse_rational(hi)?);
        let lo = Dyadic::from_rational(&lo, 64, crate::arith::Rounding::Up);
        let hi = Dyadic::from_rational(&hi, 64, crate::arith::Rounding::Down);
        if lo >= hi {
            return Err(bad());
        }
        let root = BisectionRoot::new(Polynomial::new(coeffs), lo, hi)?;
        return CertifiedReal::from_enclose(Arc::new(root));
    }
    CertifiedReal::parse(t)
}

/// One step of the map on a certified point: the digit `i` with `x` in the
/// interval `J_i` and the image `beta x + alpha - i`.
pub fn orbit_step(x: &CertifiedReal, params: &Parameters) -> Result<(u8, CertifiedReal)> {
    let y = params.beta.mul(x).add(&params.alpha);
    if let Some(y_exact) = y.exact() {
        let d = y_exact.floor().to_integer();
        let next = y_exact - BigRational::from_integer(d.clone());
        let digit = d
            .to_u8()
            .filter(|&d| d <= params.ell)
            .ok_or_else(|| Error::InvalidParameters("orbit point outside [0, 1)".into()))?;
        return Ok((digit, CertifiedReal::from_rational(next)));
    }
    let cap = max_bits();
    let mut bits = DEFAULT_BITS;
    loop {
        if let Some(d) = y.enclosure(bits)?.floor() {
            let digit = d
                .to_u8()
                .filter(|&d| d <= params.ell)
                .ok_or_else(|| Error::InvalidParameters("orbit point outside [0, 1)".into()))?;
            let next = y.sub(&CertifiedReal::from_int(digit as i64));
            return Ok((digit, next));
        }
        if bits >= cap {
            return Err(Error::DigitUndetermined { step: 0, bits: cap });
        }
        bits = (bits * 2).min(cap);
    }
}

/// Which orbit is being coded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Orbit of 0 with right-continuous digits: `a`.
    A,
    /// Left-limit orbit starting at 1: `b`.
    B,
}

/// How orbit points are represented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OrbitMode {
    /// Exact rationals when both parameters are rational, intervals otherwise.
    #[default]
    Auto,
    /// Always use dyadic intervals.
    Interval,
}

/// Eventual period of a coding: digits repeat with `period` from index
/// `preperiod` (0-based) on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Period {
    pub preperiod: usize,
    pub period: usize,
}

/// Step at which an orbit landed exactly on a partition endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EndpointHit {
    pub sequence: Side,
    /// 1-based index of the digit emitted at the hit.
    pub step: usize,
}

#[derive(Clone, Debug)]
struct Coding {
    digits: Vec<u8>,
    period: Option<Period>,
    hits: Vec<usize>,
}

fn code_exact(alpha: &BigRational, beta: &BigRational, ell: u8, side: Side, n: usize) -> Coding {
    let one = BigRational::one();
    let mut x = match side {
        Side::A => BigRational::zero(),
        Side::B => one.clone(),
    };
    let mut seen: HashMap<BigRational, usize> = HashMap::new();
    let mut digits = Vec::with_capacity(n);
    let mut hits = Vec::new();
    let mut period = None;
    while digits.len() < n {
        if let Some(&first) = seen.get(&x) {
            period = Some(Period {
                preperiod: first,
                period: digits.len() - first,
            });
            break;
        }
        seen.insert(x.clone(), digits.len());
        let y = beta * &x + alpha;
        let (d, next) = match side {
            Side::A => {
                let f = y.floor();
                let next = &y - &f;
                if next.is_zero() {
                    hits.push(digits.len() + 1);
                }
                (f.to_integer(), next)
            }
            Side::B => {
                let d = y.ceil() - &one;
                let next = &y - &d;
                (d.to_integer(), next)
            }
        };
        let d = d.to_u8().expect("digit within alphabet");
        debug_assert!(d <= ell);
        digits.push(d);
        x = next;
    }
    if let Some(p) = period {
        while digits.len() < n {
            let i = p.preperiod + (digits.len() - p.preperiod) % p.period;
            digits.push(digits[i]);
        }
        // Hits recur with the period; list those inside the requested prefix.
        let base: Vec<usize> = hits.clone();
        for h in base {
            let mut s = h + p.period;
            while h > p.preperiod && s <= n {
                hits.push(s);
                s += p.period;
            }
        }
        hits.sort_unstable();
    }
    Coding { digits, period, hits }
}

/// Digits of one orbit with interval arithmetic at `bits` bits; returns the
/// digits obtained before the first undecidable step.
fn code_interval_at(alpha: &Interval, beta: &Interval, side: Side, n: usize, bits: u32) -> (Vec<u8>, bool) {
    let mut x = match side {
        Side::A => Interval::from_int(0),
        Side::B => Interval::from_int(1),
    };
    let mut digits = Vec::with_capacity(n);
    while digits.len() < n {
        let y = beta.mul(&x, bits).add(alpha, bits);
        let d = match side {
            Side::A => y.floor(),
            Side::B => y.ceil().map(|c| c - 1),
        };
        let Some(d) = d else {
            return (digits, false);
        };
        x = y.add_int(-d.to_i64().expect("small digit"));
        digits.push(d.to_u8().expect("small digit"));
    }
    (digits, true)
}

fn code_interval(params: &Parameters, side: Side, n: usize) -> Result<Coding> {
    let cap = max_bits();
    // Each step loses about log2(beta) bits.
    let loss = params.beta.to_f64().log2().max(1.0);
    let mut bits = ((n as f64 * loss) as u32 + 64).clamp(DEFAULT_BITS, cap);
    loop {
        let alpha = params.alpha.enclosure(bits)?;
        let beta = params.beta.enclosure(bits)?;
        let (digits, complete) = code_interval_at(&alpha, &beta, side, n, bits);
        if complete {
            return Ok(Coding {
                digits,
                period: None,
                hits: Vec::new(),
            });
        }
        if bits >= cap {
            return Err(Error::DigitUndetermined {
                step: digits.len() + 1,
                bits: cap,
            });
        }
        bits = (bits * 2).min(cap);
    }
}

fn code(params: &Parameters, side: Side, n: usize, mode: OrbitMode) -> Result<Coding> {
    match (mode, params.exact()) {
        (OrbitMode::Auto, Some((alpha, beta))) => Ok(code_exact(alpha, beta, params.ell, side, n)),
        _ => code_interval(params, side, n),
    }
}

/// First `n` digits of `a`, the coding of 0.
pub fn kneading_a(params: &Parameters, n: usize) -> Result<Word> {
    Ok(Word(code(params, Side::A, n, OrbitMode::Auto)?.digits))
}

/// First `n` digits of `b`, the left-limit coding of 1.
pub fn kneading_b(params: &Parameters, n: usize) -> Result<Word> {
    Ok(Word(code(params, Side::B, n, OrbitMode::Auto)?.digits))
}

/// Certified prefixes of both kneading sequences plus metadata.
#[derive(Clone, Debug, Serialize)]
pub struct KneadingPair {
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<String>,
    ell: u8,
    #[serde(rename = "a_prefix")]
    a: Word,
    #[serde(rename = "b_prefix")]
    b: Word,
    certified_len: usize,
    a_period: Option<Period>,
    b_period: Option<Period>,
    endpoint_hits: Vec<EndpointHit>,
}

impl KneadingPair {
    /// Computes `n` digits of each sequence.
    pub fn compute(params: &Parameters, n: usize) -> Result<Self> {
        Self::compute_with(params, n, OrbitMode::Auto)
    }

    pub fn compute_with(params: &Parameters, n: usize, mode: OrbitMode) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameters(
                "at least one kneading digit is required".into(),
            ));
        }
        let ca = code(params, Side::A, n, mode)?;
        let cb = code(params, Side::B, n, mode)?;
        // The left-limit convention already fixes every digit of b, so only
        // hits of the orbit of 0 are reported.
        let endpoint_hits = ca
            .hits
            .iter()
            .map(|&step| EndpointHit {
                sequence: Side::A,
                step,
            })
            .collect();
        Ok(KneadingPair {
            alpha: Some(params.alpha.describe()),
            beta: Some(params.beta.describe()),
            ell: params.ell,
            a: Word(ca.digits),
            b: Word(cb.digits),
            certified_len: n,
            a_period: ca.period,
            b_period: cb.period,
            endpoint_hits,
        })
    }

    /// A pair given directly by its prefixes (no parameters attached).
    /// `ell` is read off as `b_1`.
    pub fn from_words(a: Word, b: Word) -> Result<Self> {
        let ell = *b.first().ok_or_else(|| Error::ParseWord("empty b".into()))?;
        if a.first() != Some(&0) {
            return Err(Error::InvalidParameters("a must start with 0".into()));
        }
        a.check_alphabet(ell)?;
        let certified_len = a.len().min(b.len());
        Ok(KneadingPair {
            alpha: None,
            beta: None,
            ell,
            a: a.prefix(certified_len),
            b: b.prefix(certified_len),
            certified_len,
            a_period: None,
            b_period: None,
            endpoint_hits: Vec::new(),
        })
    }

    /// Same as `from_words`, with known eventual periods so digits past the
    /// prefix can be produced.
    pub fn from_periodic(a: Word, a_period: Period, b: Word, b_period: Period) -> Result<Self> {
        let mut kp = Self::from_words(a, b)?;
        kp.a_period = Some(a_period);
        kp.b_period = Some(b_period);
        Ok(kp)
    }

    pub fn ell(&self) -> u8 {
        self.ell
    }

    pub fn a(&self) -> &Word {
        &self.a
    }

    pub fn b(&self) -> &Word {
        &self.b
    }

    pub fn certified_len(&self) -> usize {
        self.certified_len
    }

    pub fn a_period(&self) -> Option<Period> {
        self.a_period
    }

    pub fn b_period(&self) -> Option<Period> {
        self.b_period
    }

    pub fn endpoint_hits(&self) -> &[EndpointHit] {
        &self.endpoint_hits
    }

    pub fn alpha_descriptor(&self) -> Option<&str> {
        self.alpha.as_deref()
    }

    pub fn beta_descriptor(&self) -> Option<&str> {
        self.beta.as_deref()
    }

    /// The pair with `a` and `b` exchanged (digits are not mirrored).
    pub fn swapped(&self) -> KneadingPair {
        KneadingPair {
            a: self.b.clone(),
            b: self.a.clone(),
            a_period: self.b_period,
            b_period: self.a_period,
            ..self.clone()
        }
    }

    /// Fails unless at least `n` digits are certified.
    pub fn require(&self, n: usize) -> Result<()> {
        if n > self.certified_len {
            Err(Error::InsufficientKneadingDepth {
                needed: n,
                available: self.certified_len,
            })
        } else {
            Ok(())
        }
    }

    fn periodic_digit(w: &Word, p: Option<Period>, i: usize) -> Option<u8> {
        if i < w.len() {
            return Some(w[i]);
        }
        let p = p?;
        if p.preperiod + p.period > w.len() {
            return None;
        }
        Some(w[p.preperiod + (i - p.preperiod) % p.period])
    }

    /// `a_{i+1}` (0-based index), using the period beyond the prefix.
    pub fn a_digit(&self, i: usize) -> Option<u8> {
        Self::periodic_digit(&self.a, self.a_period, i)
    }

    /// `b_{i+1}` (0-based index), using the period beyond the prefix.
    pub fn b_digit(&self, i: usize) -> Option<u8> {
        Self::periodic_digit(&self.b, self.b_period, i)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("kneading pair serializes")
    }
}

/// Length of the longest common prefix.
pub fn common_prefix_len(x: &[u8], y: &[u8]) -> usize {
    x.iter().zip(y).take_while(|(a, b)| a == b).count()
}

/// The metric `2^-j`, `j` the length of the common prefix (1 when the first
/// symbols differ).
pub fn d_metric(x: &[u8], y: &[u8]) -> Result<f64> {
    let j = common_prefix_len(x, y);
    if j == x.len().min(y.len()) {
        return Err(Error::IndistinguishableAtDepth(j));
    }
    Ok((-(j as f64)).exp2())
}
