//! Certified interval arithmetic over dyadic rationals.

pub mod dyadic;
pub mod interval;
pub mod real;
pub mod root;

pub use dyadic::{Dyadic, Rounding};
pub use interval::Interval;
pub use real::{certified_compare, parse_rational, refine, CertifiedReal, ComparisonVerdict, Enclose};
pub use root::{BisectionRoot, BracketedEquation, Polynomial};

/// Working precision used when a value is first created.
pub const DEFAULT_BITS: u32 = 128;

/// Precision ceiling; overridable with `BETAKIT_MAX_BITS`.
pub fn max_bits() -> u32 {
    std::env::var("BETAKIT_MAX_BITS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&b: &u32| b >= 64)
        .unwrap_or(4096)
}
