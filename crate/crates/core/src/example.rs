//! The worked example: the series `eta`, the target sequence
//! `c = 32 012 0112 01112 ...`, the `beta` with `eta_beta(c) = 1`, its checks,
//! and perturbation of `alpha` to a periodic orbit of 0.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::arith::{
    certified_compare, max_bits, BisectionRoot, BracketedEquation, CertifiedReal, ComparisonVerdict, Dyadic, Enclose,
    Interval, Rounding,
};
use crate::coding::{orbit_step, KneadingPair, Parameters, Word};
use crate::error::{Error, Result};
use crate::specification::{d_set, DSet};

/// Digit sequences `eta` can be evaluated on.
#[derive(Clone)]
pub enum Digits {
    /// `prefix` followed by `period` repeated forever; an empty period means
    /// trailing zeros.
    Periodic { prefix: Vec<u8>, period: Vec<u8> },
    /// Only the first digits are known; the rest lie in `min..=max`.
    Truncated { digits: Vec<u8>, min: u8, max: u8 },
    /// Digits produced on demand (1-based index), all in `min..=max`.
    Stream {
        digit: Arc<dyn Fn(usize) -> u8 + Send + Sync>,
        min: u8,
        max: u8,
        label: String,
    },
}

impl Digits {
    pub fn periodic(prefix: &[u8], period: &[u8]) -> Self {
        Digits::Periodic {
            prefix: prefix.to_vec(),
            period: period.to_vec(),
        }
    }

    /// The target sequence `c`, shifted left by `shift` digits.
    pub fn target_c(shift: usize) -> Self {
        Digits::Stream {
            digit: Arc::new(move |i| target_digit(i + shift)),
            min: 0,
            max: 3,
            label: if shift == 0 {
                "c".into()
            } else {
                format!("sigma^{shift}(c)")
            },
        }
    }

    fn describe(&self) -> String {
        let s = |w: &[u8]| Word::from(w).to_string();
        match self {
            Digits::Periodic { prefix, period } if period.is_empty() => format!("{}0...", s(prefix)),
            Digits::Periodic { prefix, period } => format!("{}({})...", s(prefix), s(period)),
            Digits::Truncated { digits, .. } => format!("{}...", s(digits)),
            Digits::Stream { label, .. } => label.clone(),
        }
    }
}

impl fmt::Debug for Digits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// `eta_beta(d) = sum_{n>=1} (d_n - 1/beta) beta^{-n}`.
#[derive(Clone, Debug)]
pub struct EtaSeries {
    pub digits: Digits,
    pub beta: CertifiedReal,
}

impl EtaSeries {
    pub fn new(digits: Digits, beta: CertifiedReal) -> Self {
        EtaSeries { digits, beta }
    }
}

impl Enclose for EtaSeries {
    fn enclose(&self, bits: u32) -> Result<Interval> {
        eta_interval(&self.digits, &self.beta.enclosure(bits)?, bits)
    }

    fn describe(&self) -> String {
        format!("eta({}) at beta = {}", self.digits.describe(), self.beta.describe())
    }
}

/// Certified value of the series.
pub fn eta_value(s: &EtaSeries) -> Result<CertifiedReal> {
    CertifiedReal::from_enclose(Arc::new(s.clone()))
}

/// `sum_{n=1}^{len} d_n x^n` and `x^len`.
fn power_sum(digits: impl Iterator<Item = u8>, x: &Interval, bits: u32) -> (Interval, Interval) {
    let mut sum = Interval::from_int(0);
    let mut p = Interval::from_int(1);
    for d in digits {
        p = p.mul(x, bits);
        if d != 0 {
            sum = sum.add(&Interval::from_int(d as i64).mul(&p, bits), bits);
        }
    }
    (sum, p)
}

/// Enclosure of `eta_beta(d)` for every `beta` in the given interval.
pub fn eta_interval(digits: &Digits, beta: &Interval, bits: u32) -> Result<Interval> {
    let one = Interval::from_int(1);
    let x = one.div(beta, bits)?;
    let beta_minus_one = beta.add_int(-1);
    // Tail `sum_{n>N} t_n x^n` with `t_n` in [min, max] is `[min, max] x^N / (beta - 1)`.
    let tail = |p: &Interval, min: u8, max: u8| -> Result<Interval> {
        let geo = p.div(&beta_minus_one, bits)?;
        Ok(Interval::from_int(min as i64)
            .mul(&geo, bits)
            .hull(&Interval::from_int(max as i64).mul(&geo, bits)))
    };
    let main = match digits {
        Digits::Periodic { prefix, period } => {
            let (s_pre, x_pre) = power_sum(prefix.iter().copied(), &x, bits);
            if period.is_empty() {
                s_pre
            } else {
                let (s_per, x_per) = power_sum(period.iter().copied(), &x, bits);
                let repeat = s_per.div(&one.sub(&x_per, bits), bits)?;
                s_pre.add(&x_pre.mul(&repeat, bits), bits)
            }
        }
        Digits::Truncated { digits, min, max } => {
            let (s, p) = power_sum(digits.iter().copied(), &x, bits);
            s.add(&tail(&p, *min, *max)?, bits)
        }
        Digits::Stream { digit, min, max, .. } => {
            // Enough terms for the tail to drop below 2^-bits.
            let log2_beta = beta.lo().to_f64().log2().max(0.5);
            let n = ((bits as f64 + 8.0) / log2_beta).ceil() as usize + 2;
            let (s, p) = power_sum((1..=n).map(|i| digit(i)), &x, bits);
            s.add(&tail(&p, *min, *max)?, bits)
        }
    };
    // sum_n beta^{-n-1} = 1 / (beta (beta - 1)).
    let shift = one.div(&beta.mul(&beta_minus_one, bits), bits)?;
    Ok(main.sub(&shift, bits))
}

/// Digit `i` (1-based) of `c = 32 prod_{k>=1} 0 1^k 2`.
pub fn target_digit(i: usize) -> u8 {
    assert!(i >= 1, "digits are 1-based");
    match i {
        1 => 3,
        2 => 2,
        _ => {
            // Block k occupies k + 2 digits starting after position 2.
            let mut pos = i - 2;
            let mut k = 1;
            while pos > k + 2 {
                pos -= k + 2;
                k += 1;
            }
            match pos {
                1 => 0,
                p if p == k + 2 => 2,
                _ => 1,
            }
        }
    }
}

/// First `n` digits of the target sequence.
pub fn target_c(n: usize) -> Word {
    Word::new((1..=n).map(target_digit).collect())
}

/// `eta_beta(c) - 1` as a function of `beta`.
#[derive(Clone, Debug)]
pub struct TargetEquation;

impl BracketedEquation for TargetEquation {
    fn eval(&self, x: &Dyadic, bits: u32) -> Result<Interval> {
        Ok(eta_interval(&Digits::target_c(0), &Interval::point(x.clone()), bits)?.add_int(-1))
    }

    fn describe(&self) -> String {
        "eta(c)=1".into()
    }
}

/// Bracket searched for the example's `beta`.
pub fn example_bracket() -> (BigRational, BigRational) {
    (
        BigRational::from_integer(BigInt::from(3)),
        BigRational::new(BigInt::from(373), BigInt::from(100)),
    )
}

/// Solves `eta_beta(c) = 1` on `(3, 3.73)` by certified bisection, with
/// `|eta_beta(c) - 1| <= tol` on the whole returned enclosure.
pub fn solve_example_beta(tol: f64) -> Result<CertifiedReal> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameters(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let (lo, hi) = example_bracket();
    let lo = Dyadic::from_rational(&lo, 64, Rounding::Up);
    let hi = Dyadic::from_rational(&hi, 64, Rounding::Down);
    let root = BisectionRoot::new(TargetEquation, lo, hi)?;
    let beta = CertifiedReal::from_enclose(Arc::new(root))?;
    let mut bits = 80u32.max((-tol.log2()).ceil() as u32 + 16);
    loop {
        let beta = beta.refine(bits)?;
        let r = eta_interval(&Digits::target_c(0), beta.interval(), bits + 32)?.add_int(-1);
        let (lo, hi) = r.to_f64_bounds();
        if lo.abs().max(hi.abs()) <= tol {
            return Ok(beta);
        }
        if bits >= max_bits() {
            return Err(Error::PrecisionExhausted { bits });
        }
        bits = (bits * 2).min(max_bits());
    }
}

/// The example's `beta`, solved once per process and refined on demand.
pub fn example_beta() -> Result<CertifiedReal> {
    static BETA: OnceLock<Result<CertifiedReal>> = OnceLock::new();
    BETA.get_or_init(|| solve_example_beta(1e-12)).clone()
}

/// Parameters `(1/beta, beta)` of the example.
pub fn example_parameters() -> Result<Parameters> {
    let beta = example_beta()?;
    Parameters::new(beta.recip()?, beta)
}

/// 1-based position of the first disagreement between `b` and `c`, if any
/// within `n` digits.
pub fn first_mismatch_with_target(kp: &KneadingPair, n: usize) -> Result<Option<usize>> {
    kp.require(n)?;
    let c = target_c(n);
    Ok(kp.b()[..n]
        .iter()
        .zip(c.iter())
        .position(|(x, y)| x != y)
        .map(|i| i + 1))
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub depth: usize,
    pub beta_interval: (f64, f64),
    pub beta_bracket: (String, String),
    pub defining_relation: String,
    pub alpha_plus_beta: (f64, f64),
    pub a_prefix: Word,
    pub b_prefix: Word,
    pub max_da: usize,
    pub max_db: usize,
    pub max_db_half: usize,
    pub checks: Vec<Check>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["beta"] = json!({
            "bracket": [self.beta_bracket.0, self.beta_bracket.1],
            "refined_interval": [self.beta_interval.0, self.beta_interval.1],
            "defining_relation": self.defining_relation,
        });
        v
    }
}

fn check(checks: &mut Vec<Check>, name: &str, passed: bool, detail: String) {
    checks.push(Check {
        name: name.into(),
        passed,
        detail,
    });
}

/// Provably `lo <= x` and `x < hi`, refining as needed.
fn certified_within(v: &CertifiedReal, lo: &CertifiedReal, hi: &CertifiedReal) -> bool {
    let above = matches!(
        certified_compare(v, lo, 512),
        ComparisonVerdict::ProvablyGreater | ComparisonVerdict::ProvablyEqual
    );
    above && certified_compare(v, hi, 512) == ComparisonVerdict::ProvablyLess
}

/// Runs every check of the worked example at `depth` digits. Fails with the
/// name of the first failed check; the report lists all of them.
pub fn verify_example(depth: usize) -> Result<ExampleReport> {
    let report = example_report(depth)?;
    if let Some(c) = report.checks.iter().find(|c| !c.passed) {
        return Err(Error::VerificationFailed(format!("{}: {}", c.name, c.detail)));
    }
    Ok(report)
}

/// As `verify_example` but returns the report even when checks fail.
pub fn example_report(depth: usize) -> Result<ExampleReport> {
    let params = example_parameters()?;
    let beta = params.beta().clone();
    let kp = KneadingPair::compute(&params, depth)?;
    let mut checks = Vec::new();

    let a_ok = kp.a().iter().enumerate().all(|(i, &d)| d == u8::from(i > 0));
    check(
        &mut checks,
        "a is 0 then all 1",
        a_ok,
        kp.a().prefix(depth.min(20)).to_string() + "...",
    );

    let mismatch = first_mismatch_with_target(&kp, depth)?;
    check(
        &mut checks,
        "b equals c",
        mismatch.is_none(),
        match mismatch {
            None => format!("first {depth} digits agree"),
            Some(p) => format!("first disagreement at digit {p}"),
        },
    );

    let da = d_set(&kp, DSet::Da, depth)?;
    let db = d_set(&kp, DSet::Db, depth)?;
    let db_half = d_set(&kp, DSet::Db, depth / 2)?;
    check(
        &mut checks,
        "D(a) is empty",
        da.max_found == 0,
        format!("max D(a) = {}", da.max_found),
    );
    check(
        &mut checks,
        "D(b) keeps growing",
        db.max_found > db_half.max_found,
        format!(
            "max D(b) = {} at {depth}, {} at {}",
            db.max_found,
            db_half.max_found,
            depth / 2
        ),
    );

    // Sign lemmas on random digit sequences: eta(d) < 0 forces d_1 = 0 and
    // eta(d) > 1 forces d_1 = 3.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let beta_iv = beta.enclosure(128)?;
    let (mut neg, mut big, mut bad) = (0, 0, Vec::new());
    for _ in 0..2000 {
        let len = rng.gen_range(1..=40);
        let digits: Vec<u8> = (0..len).map(|_| rng.gen_range(0..=3)).collect();
        let v = eta_interval(
            &Digits::Truncated {
                digits: digits.clone(),
                min: 0,
                max: 3,
            },
            &beta_iv,
            128,
        )?;
        if v.strictly_negative() {
            neg += 1;
            if digits[0] != 0 {
                bad.push(Word::new(digits));
            }
        } else if v.add_int(-1).strictly_positive() {
            big += 1;
            if digits[0] != 3 {
                bad.push(Word::new(digits));
            }
        }
    }
    check(
        &mut checks,
        "negative eta starts with 0, eta above 1 starts with 3",
        bad.is_empty() && neg > 0 && big > 0,
        format!("{neg} negative and {big} above-one samples, {} violations", bad.len()),
    );

    let two_zero = eta_value(&EtaSeries::new(Digits::periodic(&[2], &[]), beta.clone()))?;
    let ones = eta_value(&EtaSeries::new(Digits::periodic(&[], &[1]), beta.clone()))?;
    let v = certified_compare(&two_zero, &ones, 512);
    check(
        &mut checks,
        "eta(2 0...) > eta(1 1 ...)",
        v == ComparisonVerdict::ProvablyGreater,
        format!("{v:?}"),
    );

    let zero = CertifiedReal::from_int(0);
    let one = CertifiedReal::from_int(1);
    let outside: Vec<usize> = (1..=depth)
        .filter(|&n| {
            let v = eta_value(&EtaSeries::new(Digits::target_c(n), beta.clone()));
            !v.map(|v| certified_within(&v, &zero, &one)).unwrap_or(false)
        })
        .collect();
    check(
        &mut checks,
        "0 <= eta(sigma^n c) < 1",
        outside.is_empty(),
        format!("{} shifts outside [0, 1) for 1 <= n <= {depth}", outside.len()),
    );

    // Only positivity holds here: sigma^2 c = 0 1 2 0 ... has further zeros,
    // so the bound 1/beta - 1/beta^2 for a 0 followed by digits >= 1 does not
    // apply (the value is about 0.0208 against 0.214).
    let shifted = eta_value(&EtaSeries::new(Digits::target_c(2), beta.clone()))?;
    let inv = beta.recip()?;
    let naive = inv.sub(&inv.mul(&inv));
    let v = certified_compare(&shifted, &zero, 512);
    check(
        &mut checks,
        "eta(sigma^2 c) > 0",
        v == ComparisonVerdict::ProvablyGreater,
        format!(
            "eta(sigma^2 c) = {:.6}, 1/beta - 1/beta^2 = {:.6}",
            shifted.to_f64(),
            naive.to_f64()
        ),
    );

    let s = params.alpha().add(&beta);
    let in_range = certified_compare(&s, &CertifiedReal::from_int(3), 512) == ComparisonVerdict::ProvablyGreater
        && certified_compare(&s, &CertifiedReal::from_int(4), 512) == ComparisonVerdict::ProvablyLess;
    check(
        &mut checks,
        "3 < alpha + beta < 4",
        in_range,
        format!("{}", s.interval()),
    );

    let (blo, bhi) = example_bracket();
    Ok(ExampleReport {
        depth,
        beta_interval: beta.interval().to_f64_bounds(),
        beta_bracket: (blo.to_string(), bhi.to_string()),
        defining_relation: "eta(c)=1".into(),
        alpha_plus_beta: s.interval().to_f64_bounds(),
        a_prefix: kp.a().prefix(depth),
        b_prefix: kp.b().prefix(depth),
        max_da: da.max_found,
        max_db: db.max_found,
        max_db_half: db_half.max_found,
        checks,
    })
}

/// A perturbed `alpha' = alpha + epsilon` whose orbit of 0 returns to 0
/// after `period` steps with digits `digits`.
///
/// `alpha' = (sum_{i=1}^m d_i beta^{m-i}) / (sum_{i=0}^{m-1} beta^i)`.
#[derive(Clone, Debug)]
pub struct Perturbation {
    pub alpha_prime: CertifiedReal,
    /// Set when `beta` is rational.
    pub alpha_prime_exact: Option<BigRational>,
    pub epsilon: CertifiedReal,
    pub period: usize,
    pub digits: Word,
}

impl Perturbation {
    /// The closed form of `alpha'` as a ratio of polynomials in `beta`.
    pub fn symbolic(&self) -> String {
        let m = self.period;
        let num: Vec<String> = self
            .digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| monomial(d as u32, m - 1 - i))
            .collect();
        let den: Vec<String> = (0..m).rev().map(|e| monomial(1, e)).collect();
        let num = if num.is_empty() {
            "0".to_string()
        } else {
            num.join(" + ")
        };
        format!("({num}) / ({})", den.join(" + "))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (lo, hi) = self.alpha_prime.interval().to_f64_bounds();
        json!({
            "alpha_prime": {
                "symbolic": self.symbolic(),
                "exact": self.alpha_prime_exact.as_ref().map(|r| r.to_string()),
                "enclosure": [lo, hi],
                "approx": self.alpha_prime.to_f64(),
            },
            "epsilon": self.epsilon.to_f64(),
            "period": self.period,
            "digits": self.digits,
        })
    }
}

fn monomial(c: u32, e: usize) -> String {
    match (c, e) {
        (c, 0) => c.to_string(),
        (1, 1) => "beta".into(),
        (c, 1) => format!("{c}*beta"),
        (1, e) => format!("beta^{e}"),
        (c, e) => format!("{c}*beta^{e}"),
    }
}

/// Default number of orbit steps searched by `perturb_to_periodic`.
pub const DEFAULT_ORBIT_BUDGET: usize = 200;

/// Nudges `alpha` up by less than `tol` so that the orbit of 0 becomes
/// periodic.
///
/// Raising `alpha` by `epsilon` moves `y_n = beta x_n + alpha` up by
/// `epsilon S_{n+1}`, `S_k = 1 + beta + ... + beta^{k-1}`, as long as no
/// earlier digit changes. The first step where `theta_n = (floor(y_n) + 1 - y_n) / S_{n+1}`
/// is a strict record low below `tol` gives `epsilon = theta_n`: then
/// `y_n` lands on the next integer and the orbit is back at 0.
pub fn perturb_to_periodic(params: &Parameters, tol: f64) -> Result<Perturbation> {
    perturb_to_periodic_with(params, tol, DEFAULT_ORBIT_BUDGET)
}

pub fn perturb_to_periodic_with(params: &Parameters, tol: f64, budget: usize) -> Result<Perturbation> {
    params.require_beta_above_two()?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameters(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let beta = params.beta();
    let alpha = params.alpha();

    // Already periodic.
    if params.exact().is_some() {
        let kp = KneadingPair::compute(params, budget.min(64))?;
        if let Some(p) = kp.a_period().filter(|p| p.preperiod == 0) {
            return Ok(Perturbation {
                alpha_prime: alpha.clone(),
                alpha_prime_exact: alpha.exact().cloned(),
                epsilon: CertifiedReal::from_int(0),
                period: p.period,
                digits: kneading_digits(params, p.period)?,
            });
        }
    }

    let tol_real = CertifiedReal::parse(&format!("{tol:e}"))?;
    let one = CertifiedReal::from_int(1);
    let mut x = CertifiedReal::from_int(0);
    let mut s = one.clone(); // S_{n+1}
    let mut digits = Vec::new();
    let mut record: Option<CertifiedReal> = None;
    for _ in 0..budget {
        let y = beta.mul(&x).add(alpha);
        let (d, next) = orbit_step(&x, params)?;
        let gap = CertifiedReal::from_int(d as i64 + 1).sub(&y);
        let theta = gap.div(&s)?;
        let is_record = match &record {
            None => true,
            Some(r) => certified_compare(&theta, r, 512) == ComparisonVerdict::ProvablyLess,
        };
        if is_record {
            record = Some(theta.clone());
            let small = certified_compare(&theta, &tol_real, 512) == ComparisonVerdict::ProvablyLess;
            let alpha_prime = alpha.add(&theta);
            let fits = certified_compare(&alpha_prime, &one, 512) == ComparisonVerdict::ProvablyLess;
            if small && fits {
                let mut word = digits.clone();
                word.push(d + 1);
                let (value, exact) = closed_form(&word, beta)?;
                return Ok(Perturbation {
                    alpha_prime: value,
                    alpha_prime_exact: exact,
                    epsilon: theta,
                    period: word.len(),
                    digits: Word::new(word),
                });
            }
        }
        digits.push(d);
        x = next;
        s = s.mul(beta).add(&one);
    }
    Err(Error::ToleranceUnreachableAtDepth { tol, budget })
}

fn kneading_digits(params: &Parameters, n: usize) -> Result<Word> {
    Ok(KneadingPair::compute(params, n)?.a().prefix(n))
}

/// `alpha'` from the periodic digit word, exactly when `beta` is rational.
fn closed_form(word: &[u8], beta: &CertifiedReal) -> Result<(CertifiedReal, Option<BigRational>)> {
    if let Some(b) = beta.exact() {
        let mut num = BigRational::zero();
        let mut den = BigRational::zero();
        for &d in word {
            num = num * b + BigRational::from_integer(BigInt::from(d));
            den = den * b + BigRational::one();
        }
        let r = num / den;
        return Ok((CertifiedReal::from_rational(r.clone()), Some(r)));
    }
    let one = CertifiedReal::from_int(1);
    let mut num = CertifiedReal::from_int(0);
    let mut den = CertifiedReal::from_int(0);
    for &d in word {
        num = num.mul(beta).add(&CertifiedReal::from_int(d as i64));
        den = den.mul(beta).add(&one);
    }
    Ok((num.div(&den)?, None))
}

/// Re-runs the orbit of 0 under `(alpha', beta)`: exactly when both are
/// rational, and always at `bits` bits of interval precision.
pub fn verify_periodic(p: &Perturbation, beta: &CertifiedReal, bits: u32) -> Result<()> {
    if p.alpha_prime_exact.is_some() && beta.exact().is_some() {
        verify_periodic_exact(p, beta)?;
    }
    verify_periodic_at(p, beta, bits)
}

/// The rational orbit of 0 returns exactly to 0 after `period` steps with
/// the recorded digits.
pub fn verify_periodic_exact(p: &Perturbation, beta: &CertifiedReal) -> Result<()> {
    let (Some(a), Some(b)) = (&p.alpha_prime_exact, beta.exact()) else {
        return Err(Error::VerificationFailed("parameters are not rational".into()));
    };
    let mut x = BigRational::zero();
    for (i, &d) in p.digits.iter().enumerate() {
        let y = b * &x + a;
        let digit = y.floor();
        if digit != BigRational::from_integer(BigInt::from(d)) {
            return Err(Error::VerificationFailed(format!(
                "digit {} is {} not {d}",
                i + 1,
                digit
            )));
        }
        x = y - digit;
    }
    if x.is_zero() {
        Ok(())
    } else {
        Err(Error::VerificationFailed(format!("orbit ends at {x}, not 0")))
    }
}

/// Interval re-run of the orbit at `bits` bits: the first `period - 1`
/// digits are certified and the last value before the return encloses the
/// integer it should hit, within `2^-(bits/2)`.
pub fn verify_periodic_at(p: &Perturbation, beta: &CertifiedReal, bits: u32) -> Result<()> {
    let m = p.period;
    let a = p.alpha_prime.enclosure(bits)?;
    let b = beta.enclosure(bits)?;
    let mut x = Interval::from_int(0);
    for (i, &d) in p.digits.iter().enumerate() {
        let y = b.mul(&x, bits).add(&a, bits);
        if i + 1 == m {
            let target = Dyadic::from_int(d as i64);
            // An exact hit at a point enclosure is also fine.
            let pinned = y.contains(&target) && y.width_within(bits / 2);
            let exact = y.is_point() && y.floor() == Some(BigInt::from(d));
            return if pinned || exact {
                Ok(())
            } else {
                Err(Error::VerificationFailed(format!("last step {y} does not pin {d}")))
            };
        }
        match y.floor() {
            Some(f) if f == BigInt::from(d) => x = y.add_int(-(d as i64)),
            other => {
                return Err(Error::VerificationFailed(format!(
                    "digit {} is {other:?}, expected {d}",
                    i + 1
                )))
            }
        }
    }
    Err(Error::VerificationFailed("empty period".into()))
}
