//! Finite-depth evidence for the specification property: the sets D(a) and
//! D(b), the resulting verdict with its gap bound, and the G/S splitting of
//! words.

use std::collections::HashMap;

use serde::Serialize;
use serde_json::json;

use crate::coding::{common_prefix_len, KneadingPair, Word};
use crate::error::Result;
use crate::graph::HofbauerGraph;
use crate::language::{is_admissible, transition, State};

/// Which D-set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DSet {
    /// Lengths `n` with `b_1..b_n` occurring in `a`.
    Da,
    /// Lengths `n` with `a_1..a_n` occurring in `b`.
    Db,
}

/// `b_1..b_n = a_j..a_{j+n-1}` (for `Da`; mirrored for `Db`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub n: usize,
    /// 1-based offset of the first occurrence.
    pub j: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DSetReport {
    pub which: DSet,
    pub found: Vec<Witness>,
    pub scan_depth: usize,
    pub max_found: usize,
}

/// Scans every window of the first `scan_depth` digits.
///
/// The set is closed downward (a shorter prefix occurs wherever a longer one
/// does), so `found` lists `1..=max_found`, each with its first offset.
pub fn d_set(kp: &KneadingPair, which: DSet, scan_depth: usize) -> Result<DSetReport> {
    kp.require(scan_depth)?;
    let (text, pattern) = match which {
        DSet::Da => (&kp.a()[..scan_depth], &kp.b()[..scan_depth]),
        DSet::Db => (&kp.b()[..scan_depth], &kp.a()[..scan_depth]),
    };
    let mut first: Vec<usize> = Vec::new();
    for j in 0..text.len() {
        let m = common_prefix_len(&text[j..], pattern);
        while first.len() < m {
            first.push(j + 1);
        }
    }
    let found = first
        .iter()
        .enumerate()
        .map(|(i, &j)| Witness { n: i + 1, j })
        .collect();
    Ok(DSetReport {
        which,
        found,
        scan_depth,
        max_found: first.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    SpecifiedAtDepth,
    NotSpecifiedAtDepth,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecVerdict {
    pub verdict: Verdict,
    pub tau_bound: Option<usize>,
    pub da: DSetReport,
    pub db: DSetReport,
    /// `max D` over the first half of the scan, for comparison.
    pub da_half_max: usize,
    pub db_half_max: usize,
}

impl SpecVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        let witnesses = |r: &DSetReport| r.found.iter().map(|w| json!([w.n, w.j])).collect::<Vec<_>>();
        json!({
            "verdict": self.verdict,
            "tau_bound": self.tau_bound,
            "max_Da": self.da.max_found,
            "max_Db": self.db.max_found,
            "max_Da_half": self.da_half_max,
            "max_Db_half": self.db_half_max,
            "scan_depth": self.da.scan_depth,
            "witnesses": {"Da": witnesses(&self.da), "Db": witnesses(&self.db)},
        })
    }
}

/// Gap bound from bounded D-sets: with `L = max D(a)`, `N = max D(b)`,
/// `tau = max(N+1, L+1) + max(tau_a, tau_b)` where `tau_a`, `tau_b` are the
/// lengths of the root-return words from `vtx(a_1^{N+1})` and
/// `vtx(b_1^{L+1})`.
pub fn tau_bound(kp: &KneadingPair, g: &HofbauerGraph, l: usize, n: usize) -> Result<usize> {
    let tau_a = g.path_to_root(g.vtx(&kp.a()[..n + 1])?)?.len();
    let tau_b = g.path_to_root(g.vtx(&kp.b()[..l + 1])?)?.len();
    Ok((n + 1).max(l + 1) + tau_a.max(tau_b))
}

/// Compares the D-sets over the full scan with those over its first half.
///
/// Growth in the second half of either set gives `NotSpecifiedAtDepth`.
/// Both stable and below a quarter of the scan gives `SpecifiedAtDepth`
/// with a gap bound. Anything else is `Inconclusive`.
pub fn spec_verdict(kp: &KneadingPair, g: &HofbauerGraph, scan_depth: usize) -> Result<SpecVerdict> {
    let da = d_set(kp, DSet::Da, scan_depth)?;
    let db = d_set(kp, DSet::Db, scan_depth)?;
    let da_half_max = d_set(kp, DSet::Da, scan_depth / 2)?.max_found;
    let db_half_max = d_set(kp, DSet::Db, scan_depth / 2)?.max_found;
    let grows = da.max_found > da_half_max || db.max_found > db_half_max;
    let small = 4 * da.max_found.max(db.max_found) < scan_depth;
    let (verdict, tau) = if grows {
        (Verdict::NotSpecifiedAtDepth, None)
    } else if small {
        let tau = tau_bound(kp, g, da.max_found, db.max_found)?;
        (Verdict::SpecifiedAtDepth, Some(tau))
    } else {
        (Verdict::Inconclusive, None)
    };
    Ok(SpecVerdict {
        verdict,
        tau_bound: tau,
        da,
        db,
        da_half_max,
        db_half_max,
    })
}

/// `w` lies in G(M): the second coordinate of `vtx(w)` is at most `M`.
pub fn g_m_membership(w: &[u8], m: usize, g: &HofbauerGraph) -> Result<bool> {
    Ok(g.vtx(w)?.k <= m)
}

/// Splits `w = g s` with `s = b_1^{k2(w)}` the longest suffix that is a
/// prefix of `b`.
pub fn gs_decompose(w: &[u8], g: &HofbauerGraph) -> Result<(Word, Word)> {
    let k2 = g.vtx(w)?.k;
    let cut = w.len() - k2;
    Ok((Word::from(&w[..cut]), Word::from(&w[cut..])))
}

/// Shortest `v` with `|v| <= max_len` and `u v w` admissible, found by BFS
/// over graph states from `vtx(u)`. Among shortest connectors the
/// lexicographically smallest is returned.
pub fn find_connector(u: &[u8], w: &[u8], kp: &KneadingPair, max_len: usize) -> Result<Option<Word>> {
    let start = run_from((0, 0), u, kp)?.expect("u admissible");
    let mut parent: HashMap<State, Option<(State, u8)>> = HashMap::from([(start, None)]);
    let mut layer = vec![start];
    for len in 0..=max_len {
        // States within a layer are visited in lexicographic order of their
        // connector, so the first hit is the smallest.
        for &s in &layer {
            if run_from(s, w, kp)?.is_some() {
                let mut v = Vec::new();
                let mut cur = s;
                while let Some(Some((p, c))) = parent.get(&cur) {
                    v.push(*c);
                    cur = *p;
                }
                v.reverse();
                let v = Word::new(v);
                let mut full = u.to_vec();
                full.extend_from_slice(&v);
                full.extend_from_slice(w);
                if kp.certified_len() >= full.len() {
                    debug_assert!(is_admissible(&full, kp)?.admissible);
                }
                return Ok(Some(v));
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for &s in &layer {
            let (Some(lo), Some(hi)) = (kp.a_digit(s.0), kp.b_digit(s.1)) else {
                continue;
            };
            for c in lo..=hi {
                if let Some((t, _)) = transition(kp, s, c)? {
                    if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(t) {
                        e.insert(Some((s, c)));
                        next.push(t);
                    }
                }
            }
        }
        layer = next;
    }
    Ok(None)
}

/// Reads `w` from state `s`; `None` if some digit is forbidden.
fn run_from(mut s: State, w: &[u8], kp: &KneadingPair) -> Result<Option<State>> {
    for &c in w {
        match transition(kp, s, c)? {
            Some((t, _)) => s = t,
            None => return Ok(None),
        }
    }
    Ok(Some(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::Parameters;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn naive_max(text: &[u8], pattern: &[u8]) -> usize {
        let mut best = 0;
        for n in 1..=pattern.len() {
            if (0..text.len()).any(|j| j + n <= text.len() && text[j..j + n] == pattern[..n]) {
                best = n;
            }
        }
        best
    }

    #[test]
    fn full_shift_is_specified() {
        let kp = KneadingPair::compute(&Parameters::parse("0", "3").unwrap(), 100).unwrap();
        let g = HofbauerGraph::build(&kp, 100).unwrap();
        let r = d_set(&kp, DSet::Da, 100).unwrap();
        assert_eq!(r.max_found, 0);
        let v = spec_verdict(&kp, &g, 100).unwrap();
        assert_eq!(v.verdict, Verdict::SpecifiedAtDepth);
        assert!(v.tau_bound.unwrap() <= 3);
    }

    #[test]
    fn d_sets_match_naive_search() {
        for (a, b) in [("0.25", "2.5"), ("0.5", "3.2"), ("0.3", "2.7")] {
            let kp = KneadingPair::compute(&Parameters::parse(a, b).unwrap(), 120).unwrap();
            let da = d_set(&kp, DSet::Da, 120).unwrap();
            let db = d_set(&kp, DSet::Db, 120).unwrap();
            assert_eq!(da.max_found, naive_max(kp.a(), kp.b()));
            assert_eq!(db.max_found, naive_max(kp.b(), kp.a()));
            for x in &da.found {
                assert_eq!(kp.b()[..x.n], kp.a()[x.j - 1..x.j - 1 + x.n]);
            }
            // Swapping a and b swaps the two sets.
            let sw = kp.swapped();
            assert_eq!(d_set(&sw, DSet::Db, 120).unwrap().found, da.found);
        }
    }

    #[test]
    fn decomposition_and_membership() {
        let kp = KneadingPair::compute(&Parameters::parse("0.25", "2.5").unwrap(), 30).unwrap();
        let g = HofbauerGraph::build(&kp, 30).unwrap();
        let b5 = &kp.b()[..5];
        assert_eq!(gs_decompose(b5, &g).unwrap(), (Word::empty(), Word::from(b5)));
        assert!(!g_m_membership(b5, 4, &g).unwrap());
        assert!(g_m_membership(b5, 5, &g).unwrap());
        let x = w("0021");
        assert_eq!(gs_decompose(&x, &g).unwrap(), (x.clone(), Word::empty()));
    }

    #[test]
    fn connector_search() {
        let kp = KneadingPair::compute(&Parameters::parse("0.25", "2.5").unwrap(), 60).unwrap();
        let u = &kp.b()[..10];
        let v = find_connector(u, &kp.b()[..10], &kp, 10).unwrap().unwrap();
        let mut full = u.to_vec();
        full.extend_from_slice(&v);
        full.extend_from_slice(&kp.b()[..10]);
        assert!(is_admissible(&full, &kp).unwrap().admissible);
    }
}
