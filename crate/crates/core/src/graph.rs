//! The truncated graph whose root paths spell exactly the admissible words.

use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write as _};

use serde::Serialize;
use serde_json::json;

use crate::coding::{KneadingPair, Word};
use crate::error::{Error, Result};
use crate::language::{transition, EdgeKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Vertex {
    pub j: usize,
    pub k: usize,
}

impl Vertex {
    pub const ROOT: Vertex = Vertex { j: 0, k: 0 };

    pub fn new(j: usize, k: usize) -> Self {
        Vertex { j, k }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.j, self.k)
    }
}

/// Geometric type of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeClass {
    /// `<0,q> -> <0,q+1>`.
    HorizontalFlat,
    /// `<p,0> -> <p+1,0>`.
    VerticalFlat,
    /// `<p,q> -> <p+1,q+1>`.
    Diagonal,
    /// `<p,q> -> <p+1,0>` with `q > 0`.
    HorizontalReset,
    /// `<p,q> -> <0,q+1>` with `p > 0`.
    VerticalReset,
    /// Edges back to the root and the root's self-loops.
    Other,
}

impl EdgeClass {
    pub fn is_flat(self) -> bool {
        matches!(self, EdgeClass::HorizontalFlat | EdgeClass::VerticalFlat)
    }

    fn color(self) -> &'static str {
        match self {
            EdgeClass::HorizontalFlat => "blue",
            EdgeClass::VerticalFlat => "darkgreen",
            EdgeClass::Diagonal => "red",
            EdgeClass::HorizontalReset => "orange",
            EdgeClass::VerticalReset => "purple",
            EdgeClass::Other => "gray",
        }
    }
}

/// A single flat edge already counts as a flat: a flat only has to join two
/// distinct vertices.
pub fn classify(source: Vertex, target: Vertex) -> EdgeClass {
    let (p, q) = (source.j, source.k);
    if target == Vertex::new(p + 1, q + 1) {
        EdgeClass::Diagonal
    } else if p == 0 && target == Vertex::new(0, q + 1) {
        EdgeClass::HorizontalFlat
    } else if q == 0 && target == Vertex::new(p + 1, 0) {
        EdgeClass::VerticalFlat
    } else if target == Vertex::new(0, q + 1) {
        EdgeClass::VerticalReset
    } else if target == Vertex::new(p + 1, 0) {
        EdgeClass::HorizontalReset
    } else {
        EdgeClass::Other
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub source: Vertex,
    pub target: Vertex,
    pub label: u8,
    pub kind: EdgeKind,
    pub classification: EdgeClass,
}

/// Vertices within BFS distance `depth` of the root, with every edge between
/// them. Edges leaving the outermost layer are kept when their target is
/// already present and the kneading digits they need are known.
#[derive(Clone, Debug)]
pub struct HofbauerGraph {
    kneading: KneadingPair,
    depth: usize,
    vertices: Vec<Vertex>,
    distance: Vec<usize>,
    index: HashMap<Vertex, usize>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
}

impl HofbauerGraph {
    /// BFS from the root. Requires `depth` certified kneading digits.
    pub fn build(kp: &KneadingPair, depth: usize) -> Result<Self> {
        kp.require(depth)?;
        let mut vertices = vec![Vertex::ROOT];
        let mut distance = vec![0];
        let mut index = HashMap::from([(Vertex::ROOT, 0usize)]);
        let mut pending: Vec<Vec<(u8, Vertex, EdgeKind)>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(id) = queue.pop_front() {
            let v = vertices[id];
            let d = distance[id];
            let (Some(lo), Some(hi)) = (kp.a_digit(v.j), kp.b_digit(v.k)) else {
                continue; // outermost layer without the digits to continue
            };
            for c in lo..=hi {
                let (t, kind) = transition(kp, (v.j, v.k), c)?.expect("label within bounds");
                let t = Vertex::new(t.0, t.1);
                if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(t) {
                    if d == depth {
                        continue;
                    }
                    slot.insert(vertices.len());
                    vertices.push(t);
                    distance.push(d + 1);
                    pending.push(Vec::new());
                    queue.push_back(vertices.len() - 1);
                }
                pending[id].push((c, t, kind));
            }
        }
        let mut edges = Vec::new();
        let mut out = vec![Vec::new(); vertices.len()];
        for (id, list) in pending.into_iter().enumerate() {
            for (label, target, kind) in list {
                out[id].push(edges.len());
                edges.push(Edge {
                    source: vertices[id],
                    target,
                    label,
                    kind,
                    classification: classify(vertices[id], target),
                });
            }
        }
        Ok(HofbauerGraph {
            kneading: kp.clone(),
            depth,
            vertices,
            distance,
            index,
            edges,
            out,
        })
    }

    pub fn kneading(&self) -> &KneadingPair {
        &self.kneading
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Vertices in BFS order; the position is the vertex id.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Edges ordered by source id, then label.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn id(&self, v: Vertex) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.index.contains_key(&v)
    }

    /// BFS distance from the root.
    pub fn distance(&self, v: Vertex) -> Option<usize> {
        self.id(v).map(|i| self.distance[i])
    }

    pub fn out_edges(&self, v: Vertex) -> impl Iterator<Item = &Edge> {
        let ids: &[usize] = self.id(v).map(|i| self.out[i].as_slice()).unwrap_or(&[]);
        ids.iter().map(move |&e| &self.edges[e])
    }

    fn edge_from(&self, v: Vertex, label: u8) -> Option<&Edge> {
        self.out_edges(v).find(|e| e.label == label)
    }

    /// Root path spelled by `w`.
    pub fn pth(&self, w: &[u8]) -> Result<Vec<Edge>> {
        if w.len() > self.depth {
            return Err(Error::BeyondGraphDepth {
                len: w.len(),
                depth: self.depth,
            });
        }
        let mut v = Vertex::ROOT;
        let mut path = Vec::with_capacity(w.len());
        for (i, &c) in w.iter().enumerate() {
            let e = *self.edge_from(v, c).ok_or(Error::NotAPath { position: i + 1 })?;
            path.push(e);
            v = e.target;
        }
        Ok(path)
    }

    /// Terminal vertex of `pth(w)`.
    pub fn vtx(&self, w: &[u8]) -> Result<Vertex> {
        Ok(self.pth(w)?.last().map(|e| e.target).unwrap_or(Vertex::ROOT))
    }

    /// Per-edge classification, in edge order.
    pub fn classify_edges(&self) -> Vec<EdgeClass> {
        self.edges.iter().map(|e| e.classification).collect()
    }

    /// Number of edges from each vertex to the root along shortest paths.
    fn distances_to_root(&self) -> Vec<Option<usize>> {
        let mut incoming = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            incoming[self.index[&e.target]].push(self.index[&e.source]);
        }
        let mut dist = vec![None; self.vertices.len()];
        dist[0] = Some(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(t) = queue.pop_front() {
            let d = dist[t].expect("queued vertices have a distance");
            for &s in &incoming[t] {
                if dist[s].is_none() {
                    dist[s] = Some(d + 1);
                    queue.push_back(s);
                }
            }
        }
        dist
    }

    /// Shortest word leading from `v` back to the root; among shortest words
    /// the lexicographically smallest.
    pub fn path_to_root(&self, v: Vertex) -> Result<Word> {
        let id = self.id(v).ok_or(Error::UnknownVertex { j: v.j, k: v.k })?;
        let dist = self.distances_to_root();
        let mut remaining = dist[id].ok_or(Error::NotFoundWithinDepth { depth: self.depth })?;
        let mut cur = v;
        let mut word = Word::empty();
        while remaining > 0 {
            // Out-edges are sorted by label, so the first fit is the smallest.
            let e = self
                .out_edges(cur)
                .find(|e| dist[self.index[&e.target]] == Some(remaining - 1))
                .expect("a vertex at distance r has a successor at distance r-1");
            word.push(e.label);
            cur = e.target;
            remaining -= 1;
        }
        Ok(word)
    }

    /// DOT rendering; nodes are named `"j,k"`, edges coloured by class.
    pub fn export_dot(&self) -> String {
        let mut s = String::from("digraph hofbauer {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{},{}\";", v.j, v.k);
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  \"{},{}\" -> \"{},{}\" [label=\"{}\", color={}];",
                e.source.j,
                e.source.k,
                e.target.j,
                e.target.k,
                crate::coding::digit_char(e.label),
                e.classification.color()
            );
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<_> = self
            .vertices
            .iter()
            .zip(&self.distance)
            .map(|(v, d)| json!({"j": v.j, "k": v.k, "distance": d}))
            .collect();
        json!({
            "depth": self.depth,
            "ell": self.kneading.ell(),
            "a_prefix": self.kneading.a(),
            "b_prefix": self.kneading.b(),
            "vertices": vertices,
            "edges": self.edges,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::Parameters;
    use crate::language::{enumerate_words, k_coordinates};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn figure_one() -> HofbauerGraph {
        let kp = KneadingPair::from_words(w("0011201210"), w("2120210100")).unwrap();
        HofbauerGraph::build(&kp, 10).unwrap()
    }

    #[test]
    fn figure_one_vertices() {
        let g = figure_one();
        for (j, k) in [(10, 0), (2, 10), (9, 2)] {
            assert!(g.contains(Vertex::new(j, k)), "<{j},{k}>");
        }
        assert_eq!(g.vtx(g.kneading().a()).unwrap(), Vertex::new(10, 0));
        assert_eq!(g.vtx(g.kneading().b()).unwrap(), Vertex::new(2, 10));
        assert_eq!(g.vtx(&[]).unwrap(), Vertex::ROOT);
        let dot = g.export_dot();
        assert!(dot.contains("\"10,0\";") && dot.contains("\"2,10\";"));
        // Edges into <0,1> carry label 2 and edges into <1,0> label 0.
        for e in g.edges() {
            if e.target == Vertex::new(0, 1) {
                assert_eq!(e.label, 2);
            }
            if e.target == Vertex::new(1, 0) {
                assert_eq!(e.label, 0);
            }
        }
    }

    #[test]
    fn full_shift_structure() {
        let kp = KneadingPair::compute(&Parameters::parse("0", "3").unwrap(), 5).unwrap();
        let g = HofbauerGraph::build(&kp, 5).unwrap();
        let root: Vec<_> = g.out_edges(Vertex::ROOT).map(|e| (e.label, e.target)).collect();
        assert_eq!(
            root,
            vec![(0, Vertex::new(1, 0)), (1, Vertex::ROOT), (2, Vertex::new(0, 1))]
        );
        for j in 1..5 {
            assert_eq!(g.edge_from(Vertex::new(j, 0), 0).unwrap().target, Vertex::new(j + 1, 0));
        }
        assert_eq!(g.path_to_root(Vertex::new(1, 0)).unwrap(), w("1"));
        assert_eq!(g.path_to_root(Vertex::ROOT).unwrap(), Word::empty());
    }

    #[test]
    fn zero_depth_graph_has_only_the_root() {
        let kp = KneadingPair::compute(&Parameters::parse("0", "3").unwrap(), 3).unwrap();
        let g = HofbauerGraph::build(&kp, 0).unwrap();
        assert_eq!(g.vertices(), &[Vertex::ROOT]);
        assert!(g.edges().iter().all(|e| e.target == Vertex::ROOT));
    }

    #[test]
    fn graph_matches_language() {
        for (a, b) in [("0.25", "2.5"), ("0.5", "3.2"), ("0.1", "2.3")] {
            let kp = KneadingPair::compute(&Parameters::parse(a, b).unwrap(), 12).unwrap();
            let g = HofbauerGraph::build(&kp, 8).unwrap();
            let mut seen = std::collections::HashSet::new();
            for n in 1..=8 {
                for x in enumerate_words(n, &kp).unwrap() {
                    let (j, k) = k_coordinates(&x, &kp).unwrap();
                    assert_eq!(g.vtx(&x).unwrap(), Vertex::new(j, k));
                    seen.insert(Vertex::new(j, k));
                }
            }
            seen.insert(Vertex::ROOT);
            let all: std::collections::HashSet<_> = g.vertices().iter().copied().collect();
            assert_eq!(seen, all);
        }
    }

    #[test]
    fn structural_invariants() {
        let kp = KneadingPair::compute(&Parameters::parse("0.25", "2.5").unwrap(), 60).unwrap();
        let g = HofbauerGraph::build(&kp, 60).unwrap();
        let ell = kp.ell();
        for v in g.vertices() {
            assert!(v.j != v.k || *v == Vertex::ROOT);
            let labels: Vec<u8> = g.out_edges(*v).map(|e| e.label).collect();
            let mut dedup = labels.clone();
            dedup.dedup();
            assert_eq!(labels, dedup);
            if g.distance(*v).unwrap() < g.depth() && *v != Vertex::ROOT {
                let (lo, hi) = (kp.a()[v.j], kp.b()[v.k]);
                let expected = if lo == hi { 1 } else { (hi - lo + 1) as usize };
                assert_eq!(labels.len(), expected);
            }
        }
        for n in 0..=g.depth() {
            assert!(g.vertices().iter().filter(|v| v.j == n && v.k <= n).count() <= 1);
        }
        for e in g.edges() {
            if e.classification == EdgeClass::HorizontalFlat {
                assert_ne!(e.label, 0);
            }
            if e.classification == EdgeClass::VerticalFlat {
                assert_ne!(e.label, ell);
            }
        }
    }
}
