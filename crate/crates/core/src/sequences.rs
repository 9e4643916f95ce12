//! Decomposition of the path of `b` into flats, diagonals and resets, and the
//! comparison sequences `c` (flat letters replaced by 1) and `d` (resets
//! replaced by blocks that return to the root).

use serde::Serialize;
use serde_json::json;

use crate::coding::{KneadingPair, Word};
use crate::error::{Error, Result};
use crate::graph::{EdgeClass, HofbauerGraph, Vertex};
use crate::specification::{d_set, DSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SegmentKind {
    Flat,
    Diagonal,
    Reset,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Horizontal,
    Vertical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub kind: SegmentKind,
    /// 1-based index of the first letter of `b` in the segment.
    pub start: usize,
    pub length: usize,
    pub axis: Option<Axis>,
}

/// A reset of `b` at `position`, leaving a diagonal of length `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResetSite {
    pub position: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BDecomposition {
    pub depth: usize,
    pub segments: Vec<Segment>,
    /// Positions (1-based) of letters of `b` on flats.
    pub flat_indices: Vec<usize>,
    pub resets: Vec<ResetSite>,
}

/// Splits `pth(b_1^depth)` into maximal runs of flats and diagonals and
/// single reset edges.
pub fn decompose_b(kp: &KneadingPair, g: &HofbauerGraph, depth: usize) -> Result<BDecomposition> {
    kp.require(depth)?;
    let path = g.pth(&kp.b()[..depth])?;
    let mut segments: Vec<Segment> = Vec::new();
    let mut flat_indices = Vec::new();
    let mut resets = Vec::new();
    for (i, e) in path.iter().enumerate() {
        let pos = i + 1;
        let (kind, axis) = match e.classification {
            EdgeClass::HorizontalFlat => (SegmentKind::Flat, Some(Axis::Horizontal)),
            EdgeClass::VerticalFlat => (SegmentKind::Flat, Some(Axis::Vertical)),
            EdgeClass::Diagonal => (SegmentKind::Diagonal, None),
            EdgeClass::VerticalReset => (SegmentKind::Reset, Some(Axis::Vertical)),
            EdgeClass::HorizontalReset => (SegmentKind::Reset, Some(Axis::Horizontal)),
            EdgeClass::Other => {
                return Err(Error::VerificationFailed(format!(
                    "edge {} -> {} on the path of b is neither flat, diagonal nor reset",
                    e.source, e.target
                )))
            }
        };
        if kind == SegmentKind::Flat {
            flat_indices.push(pos);
        }
        if kind == SegmentKind::Reset {
            resets.push(ResetSite {
                position: pos,
                m: e.source.j,
            });
        }
        match segments.last_mut() {
            Some(s) if s.kind == kind && kind != SegmentKind::Reset && s.axis == axis => s.length += 1,
            _ => segments.push(Segment {
                kind,
                start: pos,
                length: 1,
                axis,
            }),
        }
    }
    Ok(BDecomposition {
        depth,
        segments,
        flat_indices,
        resets,
    })
}

/// `c_1^depth`: `b` with every flat letter replaced by 1.
pub fn build_c(kp: &KneadingPair, g: &HofbauerGraph, depth: usize) -> Result<Word> {
    let dec = decompose_b(kp, g, depth)?;
    Ok(c_from(kp, &dec))
}

fn c_from(kp: &KneadingPair, dec: &BDecomposition) -> Word {
    let mut c = kp.b().prefix(dec.depth).into_digits();
    for &q in &dec.flat_indices {
        c[q - 1] = 1;
    }
    Word::new(c)
}

/// The sequence `d` together with the data used to build it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DConstruction {
    /// `d_1^depth`.
    pub d: Word,
    /// The block substituted for each reset in `b_1^depth`, in order.
    pub blocks: Vec<Word>,
    /// `max D(a)`.
    pub l: usize,
    /// The root-return word from `vtx(b_1^{L+1})`.
    pub eta_word: Word,
    /// `N = L + 1 + |eta_word|`.
    pub n: usize,
    /// Position in `d` (1-based) where the first block ends, if any.
    pub first_block_end: Option<usize>,
}

/// `L = max D(a)` over the whole certified prefix, refusing when the set is
/// still growing in the second half of the scan.
pub fn bounded_l(kp: &KneadingPair) -> Result<usize> {
    let s = kp.certified_len();
    let full = d_set(kp, DSet::Da, s)?;
    let half = d_set(kp, DSet::Da, s / 2)?;
    if full.max_found > half.max_found {
        return Err(Error::UnboundedDaEvidence {
            scan_depth: s,
            max_found: full.max_found,
        });
    }
    Ok(full.max_found)
}

/// `d_1^depth`: each reset of `b` leaving a diagonal of length `m` is replaced
/// by `a_{m+1} b_1 .. b_{L+1} eta`.
pub fn build_d(kp: &KneadingPair, g: &HofbauerGraph, depth: usize) -> Result<DConstruction> {
    let l = bounded_l(kp)?;
    build_d_with(kp, g, depth, l)
}

/// As `build_d` with `L` supplied.
pub fn build_d_with(kp: &KneadingPair, g: &HofbauerGraph, depth: usize, l: usize) -> Result<DConstruction> {
    let dec = decompose_b(kp, g, depth)?;
    let base = kp.b().prefix(depth);
    substitute_resets(kp, g, &dec, &base, l)
}

/// `d` built on top of `c` instead of `b`: flat letters are 1 and every
/// reset is replaced by its block. Between blocks the path then never
/// follows `b` for more than `L` letters.
pub fn build_d_over_c(kp: &KneadingPair, g: &HofbauerGraph, depth: usize, l: usize) -> Result<DConstruction> {
    let dec = decompose_b(kp, g, depth)?;
    let base = c_from(kp, &dec);
    substitute_resets(kp, g, &dec, &base, l)
}

fn substitute_resets(
    kp: &KneadingPair,
    g: &HofbauerGraph,
    dec: &BDecomposition,
    base: &[u8],
    l: usize,
) -> Result<DConstruction> {
    let depth = dec.depth;
    kp.require(l + 1)?;
    let eta_word = g.path_to_root(g.vtx(&kp.b()[..l + 1])?)?;
    let mut d = Vec::new();
    let mut blocks = Vec::new();
    let mut first_block_end = None;
    let mut resets = dec.resets.iter().peekable();
    for (i, &x) in base.iter().enumerate() {
        match resets.peek() {
            Some(r) if r.position == i + 1 => {
                let a_next = kp.a_digit(r.m).ok_or(Error::InsufficientKneadingDepth {
                    needed: r.m + 1,
                    available: kp.certified_len(),
                })?;
                let mut block = vec![a_next];
                block.extend_from_slice(&kp.b()[..l + 1]);
                block.extend_from_slice(&eta_word);
                d.extend_from_slice(&block);
                first_block_end.get_or_insert(d.len());
                blocks.push(Word::new(block));
                resets.next();
            }
            _ => d.push(x),
        }
    }
    d.truncate(depth);
    Ok(DConstruction {
        d: Word::new(d),
        blocks,
        l,
        n: l + 1 + eta_word.len(),
        eta_word,
        first_block_end: first_block_end.filter(|&e| e <= depth),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Case {
    /// Flat letters other than 1 keep appearing.
    B1,
    /// Flat letters are eventually all 1.
    B2,
    Undetermined,
}

/// Looks at the last flat letter of `b_1^depth` that is not 1: in the second
/// half of the scan gives `B1`, within the first quarter gives `B2`.
pub fn classify_case(kp: &KneadingPair, g: &HofbauerGraph, depth: usize) -> Result<Case> {
    let dec = decompose_b(kp, g, depth)?;
    let last = dec
        .flat_indices
        .iter()
        .rev()
        .find(|&&q| kp.b()[q - 1] != 1)
        .copied()
        .unwrap_or(0);
    Ok(if 2 * last > depth {
        Case::B1
    } else if 4 * last <= depth {
        Case::B2
    } else {
        Case::Undetermined
    })
}

/// `e_n`: for `B1` the number of flat letters above 1 in `b_1^n`, for `B2`
/// the number of resets in `b_1^n`.
pub fn edit_counts(kp: &KneadingPair, g: &HofbauerGraph, n: usize, case: Case) -> Result<usize> {
    let dec = decompose_b(kp, g, n)?;
    Ok(match case {
        Case::B1 => dec.flat_indices.iter().filter(|&&q| kp.b()[q - 1] > 1).count(),
        Case::B2 => dec.resets.len(),
        Case::Undetermined => {
            return Err(Error::VerificationFailed("edit counts need a B1 or B2 case".into()));
        }
    })
}

/// Largest second coordinate along `pth(w)`, optionally only from position
/// `from` (1-based, inclusive) on.
pub fn max_k2_along(g: &HofbauerGraph, w: &[u8], from: usize) -> Result<usize> {
    Ok(g.pth(w)?
        .iter()
        .enumerate()
        .filter(|(i, _)| i + 1 >= from)
        .map(|(_, e)| e.target.k)
        .max()
        .unwrap_or(0))
}

/// Largest second coordinate visited by `eta_word` starting at `start`.
pub fn max_k2_of_word_from(g: &HofbauerGraph, start: Vertex, w: &[u8]) -> Result<usize> {
    let mut v = start;
    let mut best = v.k;
    for (i, &c) in w.iter().enumerate() {
        let e = g
            .out_edges(v)
            .find(|e| e.label == c)
            .ok_or(Error::NotAPath { position: i + 1 })?;
        v = e.target;
        best = best.max(v.k);
    }
    Ok(best)
}

/// Everything the `sequences` command reports.
pub fn sequences_report(kp: &KneadingPair, g: &HofbauerGraph, depth: usize) -> Result<serde_json::Value> {
    let dec = decompose_b(kp, g, depth)?;
    let c = c_from(kp, &dec);
    let case = classify_case(kp, g, depth)?;
    let d = match build_d(kp, g, depth) {
        Ok(d) => json!(d),
        Err(e) => json!({"error": e.code(), "message": e.to_string()}),
    };
    let e_n = match case {
        Case::Undetermined => serde_json::Value::Null,
        _ => {
            let counts: Vec<_> = (1..=depth)
                .map(|n| edit_counts(kp, g, n, case))
                .collect::<Result<_>>()?;
            json!(counts)
        }
    };
    Ok(json!({
        "depth": depth,
        "b_prefix": kp.b().prefix(depth),
        "decomposition": dec,
        "c_prefix": c,
        "d": d,
        "case": case,
        "e_n": e_n,
    }))
}
