//! Admissible words: lexicographic window tests, the `(k1, k2)` coordinates,
//! follower sets and enumeration.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::coding::{KneadingPair, Word};
use crate::error::{Error, Result};

/// Which side of the window sandwich failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// The window is below the matching prefix of `a`.
    Lower,
    /// The window is above the matching prefix of `b`.
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FailingWindow {
    /// 1-based start of the offending window.
    pub k: usize,
    pub side: Bound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub failing_window: Option<FailingWindow>,
}

/// `w` is admissible iff every window `w_k..w_n` lies between `a_1..a_{n-k+1}`
/// and `b_1..b_{n-k+1}`.
pub fn is_admissible(w: &[u8], kp: &KneadingPair) -> Result<AdmissibilityReport> {
    kp.require(w.len())?;
    Word::from(w).check_alphabet(kp.ell())?;
    let n = w.len();
    for k in 1..=n {
        let window = &w[k - 1..];
        let len = n - k + 1;
        let side = if window < &kp.a()[..len] {
            Some(Bound::Lower)
        } else if window > &kp.b()[..len] {
            Some(Bound::Upper)
        } else {
            None
        };
        if let Some(side) = side {
            return Ok(AdmissibilityReport {
                admissible: false,
                failing_window: Some(FailingWindow { k, side }),
            });
        }
    }
    Ok(AdmissibilityReport {
        admissible: true,
        failing_window: None,
    })
}

/// A vertex `<j, k>` of the graph: `j` digits of `a` and `k` digits of `b`
/// are being followed.
pub type State = (usize, usize);

/// Which rule produced an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EdgeKind {
    /// `a_{j+1} = b_{k+1}`: both coordinates advance.
    FollowBoth,
    /// Label `a_{j+1} < b_{k+1}`: to `<j+1, 0>`.
    FollowA,
    /// Label `b_{k+1} > a_{j+1}`: to `<0, k+1>`.
    FollowB,
    /// Label strictly between: back to `<0, 0>`.
    Reset,
    /// Any edge leaving `<0, 0>`.
    Root,
}

/// The target of the edge labelled `c` out of `state`, or `None` if `c` is
/// not allowed there. Needs `a_{j+1}` and `b_{k+1}`.
pub fn transition(kp: &KneadingPair, state: State, c: u8) -> Result<Option<(State, EdgeKind)>> {
    let (j, k) = state;
    let lo = kp.a_digit(j).ok_or(Error::InsufficientKneadingDepth {
        needed: j + 1,
        available: kp.certified_len(),
    })?;
    let hi = kp.b_digit(k).ok_or(Error::InsufficientKneadingDepth {
        needed: k + 1,
        available: kp.certified_len(),
    })?;
    Ok(transition_with(state, lo, hi, c))
}

/// `transition` with the two bounding digits supplied by the caller.
pub fn transition_with(state: State, lo: u8, hi: u8, c: u8) -> Option<(State, EdgeKind)> {
    let (j, k) = state;
    if c < lo || c > hi {
        return None;
    }
    let (target, kind) = if lo == hi {
        ((j + 1, k + 1), EdgeKind::FollowBoth)
    } else if c == lo {
        ((j + 1, 0), EdgeKind::FollowA)
    } else if c == hi {
        ((0, k + 1), EdgeKind::FollowB)
    } else {
        ((0, 0), EdgeKind::Reset)
    };
    let kind = if state == (0, 0) { EdgeKind::Root } else { kind };
    Some((target, kind))
}

/// Runs the transitions along `w` from the root; `Err(NotAPath)` at the first
/// forbidden digit.
pub fn run(w: &[u8], kp: &KneadingPair) -> Result<State> {
    let mut s = (0, 0);
    for (i, &c) in w.iter().enumerate() {
        match transition(kp, s, c)? {
            Some((t, _)) => s = t,
            None => return Err(Error::NotAPath { position: i + 1 }),
        }
    }
    Ok(s)
}

/// Maximal `k1` with `w` ending in `a_1..a_{k1}`, and likewise `k2` for `b`.
pub fn k_coordinates(w: &[u8], kp: &KneadingPair) -> Result<State> {
    kp.require(w.len())?;
    let n = w.len();
    let longest = |s: &[u8]| (1..=n).rev().find(|&i| w[n - i..] == s[..i]).unwrap_or(0);
    Ok((longest(kp.a()), longest(kp.b())))
}

/// Prefixes of `sigma^{k1}(a)` and `sigma^{k2}(b)`: every continuation `x` of
/// `w` satisfies `low <= x <= high` (windowwise), and conversely.
pub fn follower_bounds(w: &[u8], kp: &KneadingPair) -> Result<(Word, Word)> {
    let (k1, k2) = k_coordinates(w, kp)?;
    Ok((Word::from(&kp.a()[k1..]), Word::from(&kp.b()[k2..])))
}

/// Every admissible word of length `n`, in lexicographic order.
pub fn enumerate_words(n: usize, kp: &KneadingPair) -> Result<Vec<Word>> {
    kp.require(n)?;
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(n);
    dfs(kp, (0, 0), n, &mut buf, &mut |w| out.push(Word::from(w)))?;
    Ok(out)
}

/// Depth-first walk over all admissible words of length `n` from `state`.
pub fn for_each_word(n: usize, kp: &KneadingPair, f: &mut dyn FnMut(&[u8])) -> Result<()> {
    kp.require(n)?;
    let mut buf = Vec::with_capacity(n);
    dfs(kp, (0, 0), n, &mut buf, f)
}

fn dfs(kp: &KneadingPair, s: State, n: usize, buf: &mut Vec<u8>, f: &mut dyn FnMut(&[u8])) -> Result<()> {
    if buf.len() == n {
        f(buf);
        return Ok(());
    }
    let lo = kp.a_digit(s.0).expect("depth checked");
    let hi = kp.b_digit(s.1).expect("depth checked");
    for c in lo..=hi {
        let (t, _) = transition_with(s, lo, hi, c).expect("c within bounds");
        buf.push(c);
        dfs(kp, t, n, buf, f)?;
        buf.pop();
    }
    Ok(())
}

/// `|L_m|` for `m = 0..=n`, by dynamic programming over graph states.
pub fn word_counts(n: usize, kp: &KneadingPair) -> Result<Vec<BigUint>> {
    kp.require(n)?;
    let mut layer: BTreeMap<State, BigUint> = BTreeMap::new();
    layer.insert((0, 0), BigUint::one());
    let mut counts = vec![BigUint::one()];
    for _ in 0..n {
        let mut next: BTreeMap<State, BigUint> = BTreeMap::new();
        for (&s, m) in &layer {
            let lo = kp.a_digit(s.0).expect("depth checked");
            let hi = kp.b_digit(s.1).expect("depth checked");
            for c in lo..=hi {
                let (t, _) = transition_with(s, lo, hi, c).expect("c within bounds");
                *next.entry(t).or_insert_with(BigUint::zero) += m;
            }
        }
        counts.push(next.values().sum());
        layer = next;
    }
    Ok(counts)
}

/// `|L_n|`.
pub fn count_words(n: usize, kp: &KneadingPair) -> Result<BigUint> {
    Ok(word_counts(n, kp)?.pop().expect("nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::Parameters;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn figure_one() -> KneadingPair {
        KneadingPair::from_words(w("0011201210"), w("2120210100")).unwrap()
    }

    fn brute_force(n: usize, kp: &KneadingPair) -> Vec<Word> {
        let base = kp.ell() as usize + 1;
        let mut out = Vec::new();
        for code in 0..base.pow(n as u32) {
            let mut x = code;
            let mut digits = vec![0u8; n];
            for d in digits.iter_mut().rev() {
                *d = (x % base) as u8;
                x /= base;
            }
            if is_admissible(&digits, kp).unwrap().admissible {
                out.push(Word::new(digits));
            }
        }
        out
    }

    #[test]
    fn admissibility_examples() {
        let kp = figure_one();
        assert!(is_admissible(kp.b(), &kp).unwrap().admissible);
        assert!(is_admissible(kp.a(), &kp).unwrap().admissible);
        let r = is_admissible(&w("2121"), &kp).unwrap();
        assert_eq!(
            r.failing_window,
            Some(FailingWindow {
                k: 1,
                side: Bound::Upper
            })
        );
        let r = is_admissible(&w("3"), &kp);
        assert!(matches!(r, Err(Error::InvalidDigit { digit: 3, ell: 2 })));
        let r = is_admissible(&w("00000000000"), &kp);
        assert!(matches!(r, Err(Error::InsufficientKneadingDepth { .. })));
    }

    #[test]
    fn figure_one_coordinates() {
        let kp = figure_one();
        assert_eq!(k_coordinates(kp.a(), &kp).unwrap(), (10, 0));
        assert_eq!(k_coordinates(kp.b(), &kp).unwrap(), (2, 10));
        assert_eq!(k_coordinates(&[], &kp).unwrap(), (0, 0));
        assert_eq!(run(kp.a(), &kp).unwrap(), (10, 0));
        assert_eq!(run(kp.b(), &kp).unwrap(), (2, 10));
    }

    #[test]
    fn full_shift_counts() {
        let kp = KneadingPair::compute(&Parameters::parse("0", "3").unwrap(), 12).unwrap();
        assert_eq!(enumerate_words(2, &kp).unwrap().len(), 9);
        let counts = word_counts(12, &kp).unwrap();
        for (n, c) in counts.iter().enumerate() {
            assert_eq!(c, &BigUint::from(3u32).pow(n as u32));
        }
    }

    #[test]
    fn enumeration_matches_brute_force_and_coordinates() {
        for kp in [
            figure_one(),
            KneadingPair::compute(&Parameters::parse("0.25", "2.5").unwrap(), 8).unwrap(),
            KneadingPair::compute(&Parameters::parse("0.5", "3.2").unwrap(), 8).unwrap(),
        ] {
            for n in 1..=6 {
                let words = enumerate_words(n, &kp).unwrap();
                assert_eq!(words, brute_force(n, &kp));
                assert_eq!(count_words(n, &kp).unwrap(), BigUint::from(words.len()));
                for x in &words {
                    assert_eq!(run(x, &kp).unwrap(), k_coordinates(x, &kp).unwrap(), "{x}");
                }
            }
        }
    }

    #[test]
    fn follower_bounds_of_empty_word() {
        let kp = figure_one();
        let (lo, hi) = follower_bounds(&[], &kp).unwrap();
        assert_eq!((&lo, &hi), (kp.a(), kp.b()));
        let (lo, hi) = follower_bounds(&kp.a()[..4], &kp).unwrap();
        assert_eq!(lo, Word::from(&kp.a()[4..]));
        assert_eq!(hi, *kp.b());
    }
}
