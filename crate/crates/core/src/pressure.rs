//! Locally constant potentials, Birkhoff sums, partition sums and pressure
//! estimates (by counting and by power iteration on the graph).

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use serde_json::{json, Value};

use crate::coding::{KneadingPair, Word};
use crate::error::{Error, Result};
use crate::graph::{HofbauerGraph, Vertex};
use crate::language::{count_words, enumerate_words, run, transition, transition_with, State};

/// Default cap on the number of words an enumeration may visit.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 50_000_000;

/// A potential depending on the first `range` digits.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    range: usize,
    table: HashMap<Vec<u8>, f64>,
}

impl Potential {
    /// Checks the table covers every admissible word of length `range`.
    pub fn new(range: usize, table: HashMap<Vec<u8>, f64>, kp: &KneadingPair) -> Result<Self> {
        if range == 0 {
            return Err(Error::InvalidPotential("range must be at least 1".into()));
        }
        if let Some((w, v)) = table.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidPotential(format!(
                "value {v} for {} is not finite",
                Word::from(w.as_slice())
            )));
        }
        if let Some(w) = table.keys().find(|w| w.len() != range) {
            return Err(Error::InvalidPotential(format!(
                "key {} has the wrong length",
                Word::from(w.as_slice())
            )));
        }
        for w in enumerate_words(range, kp)? {
            if !table.contains_key(w.digits()) {
                return Err(Error::MissingPotentialEntry(w.to_string()));
            }
        }
        Ok(Potential { range, table })
    }

    /// Tabulates `f` on the admissible words of length `range`.
    pub fn from_fn(range: usize, kp: &KneadingPair, f: impl Fn(&[u8]) -> f64) -> Result<Self> {
        let table = enumerate_words(range, kp)?
            .into_iter()
            .map(|w| {
                let v = f(&w);
                (w.into_digits(), v)
            })
            .collect();
        Self::new(range, table, kp)
    }

    pub fn constant(c: f64, kp: &KneadingPair) -> Result<Self> {
        Self::from_fn(1, kp, |_| c)
    }

    pub fn zero(kp: &KneadingPair) -> Result<Self> {
        Self::constant(0.0, kp)
    }

    /// Reads `{"range": r, "values": {"<word>": number, ...}}`.
    pub fn from_json(v: &Value, kp: &KneadingPair) -> Result<Self> {
        let bad = |m: &str| Error::InvalidPotential(m.to_string());
        let range = v
            .get("range")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing integer `range`"))? as usize;
        let values = v
            .get("values")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing object `values`"))?;
        let mut table = HashMap::new();
        for (k, x) in values {
            let w: Word = k.parse()?;
            let x = x
                .as_f64()
                .ok_or_else(|| bad(&format!("value for {k} is not a number")))?;
            table.insert(w.into_digits(), x);
        }
        Self::new(range, table, kp)
    }

    pub fn to_json(&self) -> Value {
        let mut entries: Vec<_> = self.table.iter().collect();
        entries.sort_by(|x, y| x.0.cmp(y.0));
        let values: serde_json::Map<String, Value> = entries
            .into_iter()
            .map(|(k, v)| (Word::from(k.as_slice()).to_string(), json!(v)))
            .collect();
        json!({"range": self.range, "values": values})
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn value(&self, w: &[u8]) -> Result<f64> {
        self.table
            .get(w)
            .copied()
            .ok_or_else(|| Error::MissingPotentialEntry(Word::from(w).to_string()))
    }

    pub fn max(&self) -> f64 {
        self.table.values().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.table.values().copied().fold(f64::INFINITY, f64::min)
    }

    /// Uniform norm.
    pub fn sup_norm(&self) -> f64 {
        self.max().abs().max(self.min().abs())
    }

    /// `phi + c`.
    pub fn shifted(&self, c: f64) -> Potential {
        Potential {
            range: self.range,
            table: self.table.iter().map(|(k, v)| (k.clone(), v + c)).collect(),
        }
    }

    /// `phi - min phi`, whose values are all nonnegative.
    fn normalized(&self) -> (Potential, f64) {
        let m = self.min();
        (self.shifted(-m), m)
    }
}

/// `sum_{i<n} phi(x_{i+1} .. x_{i+r})`.
pub fn birkhoff_sum(x: &[u8], n: usize, phi: &Potential) -> Result<f64> {
    let needed = n + phi.range - 1;
    if x.len() < needed {
        return Err(Error::PrefixTooShort {
            needed,
            available: x.len(),
        });
    }
    (0..n).map(|i| phi.value(&x[i..i + phi.range])).sum()
}

/// Bowen constant `(r - 1) (max phi - min phi)`: only the last `r - 1`
/// terms of `S_n phi` vary over an `n`-cylinder.
pub fn bowen_constant(phi: &Potential) -> f64 {
    (phi.range - 1) as f64 * (phi.max() - phi.min())
}

/// Best value of the windows that reach past the end of a word, over all
/// admissible continuations of `r - 1` digits from `state`. `tail` holds the
/// last `min(n, r - 1)` digits of the word.
fn extension_sup(kp: &KneadingPair, phi: &Potential, state: State, tail: &[u8]) -> Result<Option<f64>> {
    let r = phi.range;
    if r == 1 {
        return Ok(Some(0.0));
    }
    let mut best: Option<f64> = None;
    let mut seq = tail.to_vec();
    extension_dfs(kp, phi, state, &mut seq, tail.len() + r - 1, &mut best)?;
    Ok(best)
}

fn extension_dfs(
    kp: &KneadingPair,
    phi: &Potential,
    state: State,
    seq: &mut Vec<u8>,
    full: usize,
    best: &mut Option<f64>,
) -> Result<()> {
    if seq.len() == full {
        let r = phi.range;
        let s: f64 = (0..=full - r).map(|i| phi.value(&seq[i..i + r])).sum::<Result<f64>>()?;
        *best = Some(best.map_or(s, |b| b.max(s)));
        return Ok(());
    }
    let (lo, hi) = digit_bounds(kp, state)?;
    for c in lo..=hi {
        let (t, _) = transition_with(state, lo, hi, c).expect("c within bounds");
        seq.push(c);
        extension_dfs(kp, phi, t, seq, full, best)?;
        seq.pop();
    }
    Ok(())
}

fn digit_bounds(kp: &KneadingPair, s: State) -> Result<(u8, u8)> {
    let need = s.0.max(s.1) + 1;
    match (kp.a_digit(s.0), kp.b_digit(s.1)) {
        (Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(Error::InsufficientKneadingDepth {
            needed: need,
            available: kp.certified_len(),
        }),
    }
}

/// `phi(w)`: the largest `S_{|w|} phi` over points of the cylinder `[w]`.
pub fn sup_on_cylinder(w: &[u8], phi: &Potential, kp: &KneadingPair) -> Result<f64> {
    let state = run(w, kp)?;
    let n = w.len();
    let r = phi.range;
    let complete = n.saturating_sub(r - 1);
    let head = if complete == 0 {
        0.0
    } else {
        birkhoff_sum(w, complete, phi)?
    };
    let tail = &w[complete..];
    let ext = extension_sup(kp, phi, state, tail)?.ok_or(Error::NoAdmissibleExtension)?;
    Ok(head + ext)
}

/// Which words a partition sum runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Subset {
    FullLanguage,
    /// Only `b_1^n`.
    BPrefixes,
    /// Words whose vertex has second coordinate at most `M`.
    GM(usize),
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `log Lambda_m` for `m = 1..=n_max`, by dynamic programming over graph
/// states carrying the last `r - 1` digits.
fn log_partition_sums(phi: &Potential, kp: &KneadingPair, n_max: usize, subset: Subset) -> Result<Vec<f64>> {
    kp.require(n_max)?;
    let (phi0, shift) = phi.normalized();
    let r = phi0.range;
    if let Subset::BPrefixes = subset {
        return (1..=n_max).map(|n| sup_on_cylinder(&kp.b()[..n], phi, kp)).collect();
    }
    let mut layer: BTreeMap<(State, Vec<u8>), f64> = BTreeMap::from([(((0, 0), Vec::new()), 0.0)]);
    let mut ext_cache: HashMap<(State, Vec<u8>), Option<f64>> = HashMap::new();
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut next: BTreeMap<(State, Vec<u8>), f64> = BTreeMap::new();
        for ((s, hist), &lw) in &layer {
            let (lo, hi) = digit_bounds(kp, *s)?;
            for c in lo..=hi {
                let (t, _) = transition_with(*s, lo, hi, c).expect("c within bounds");
                let mut h = hist.clone();
                h.push(c);
                let mut weight = lw;
                if h.len() == r {
                    weight += phi0.value(&h)?;
                    h.remove(0);
                }
                let slot = next.entry((t, h)).or_insert(f64::NEG_INFINITY);
                *slot = log_add(*slot, weight);
            }
        }
        let mut total = f64::NEG_INFINITY;
        for ((s, hist), &lw) in &next {
            if let Subset::GM(m) = subset {
                if s.1 > m {
                    continue;
                }
            }
            let key = (*s, hist.clone());
            let ext = match ext_cache.get(&key) {
                Some(e) => *e,
                None => {
                    let e = extension_sup(kp, &phi0, *s, hist)?;
                    ext_cache.insert(key, e);
                    e
                }
            };
            let ext = ext.ok_or(Error::NoAdmissibleExtension)?;
            total = log_add(total, lw + ext);
        }
        out.push(total + n as f64 * shift);
        layer = next;
    }
    Ok(out)
}

/// `log Lambda_n(phi, H)`.
pub fn log_partition_sum(n: usize, phi: &Potential, kp: &KneadingPair, subset: Subset) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    Ok(*log_partition_sums(phi, kp, n, subset)?.last().expect("n >= 1"))
}

/// `Lambda_n(phi, H) = sum over H_n of exp(phi(w))`.
pub fn partition_sum(n: usize, phi: &Potential, kp: &KneadingPair, subset: Subset) -> Result<f64> {
    Ok(log_partition_sum(n, phi, kp, subset)?.exp())
}

/// `log Lambda_n(phi, L)` by listing every word; refuses when `|L_n|`
/// exceeds `budget`.
pub fn log_partition_sum_enumerated(n: usize, phi: &Potential, kp: &KneadingPair, budget: u64) -> Result<f64> {
    let count = count_words(n, kp)?;
    if count > budget.into() {
        return Err(Error::EnumerationBudgetExceeded {
            estimated: num_traits::ToPrimitive::to_f64(&count).unwrap_or(f64::INFINITY),
            budget,
        });
    }
    let mut total = f64::NEG_INFINITY;
    for w in enumerate_words(n, kp)? {
        total = log_add(total, sup_on_cylinder(&w, phi, kp)?);
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PerN {
    pub n: usize,
    pub log_lambda: f64,
    pub rate: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Spectral {
    pub depth: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PressureEstimate {
    pub per_n: Vec<PerN>,
    pub spectral: Option<Spectral>,
    pub methods: Vec<String>,
}

impl PressureEstimate {
    /// Rows `n,logLambda,logLambda/n`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,logLambda,logLambda_over_n\n");
        for p in &self.per_n {
            s.push_str(&format!("{},{:.15e},{:.15e}\n", p.n, p.log_lambda, p.rate));
        }
        s
    }
}

/// `(1/n) log Lambda_n(phi, L)` for `n = 1..=n_max`.
pub fn pressure_by_counting(phi: &Potential, kp: &KneadingPair, n_max: usize) -> Result<PressureEstimate> {
    let logs = log_partition_sums(phi, kp, n_max, Subset::FullLanguage)?;
    let per_n = logs
        .into_iter()
        .enumerate()
        .map(|(i, l)| PerN {
            n: i + 1,
            log_lambda: l,
            rate: l / (i + 1) as f64,
        })
        .collect();
    Ok(PressureEstimate {
        per_n,
        spectral: None,
        methods: vec!["counting".into()],
    })
}

/// Controls for the power iteration.
#[derive(Clone, Copy, Debug)]
pub struct PowerIteration {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        PowerIteration {
            tolerance: 1e-10,
            max_iterations: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransferEstimate {
    /// `log` of the leading eigenvalue.
    pub value: f64,
    pub depth: usize,
    pub iterations: usize,
    pub states: usize,
    /// Edges past the truncation redirected along a known period.
    pub folded_edges: usize,
    /// States carrying non-negligible eigenvector mass.
    pub support: usize,
}

/// Moves a coordinate beyond `depth` back by whole periods, which keeps the
/// shifted kneading sequence (and hence every future transition) unchanged.
fn fold(mut x: usize, depth: usize, period: Option<crate::coding::Period>) -> usize {
    if let Some(p) = period {
        while x > depth && x >= p.preperiod + p.period {
            x -= p.period;
        }
    }
    x
}

/// Weighted adjacency on the `r`-block presentation of the graph.
struct BlockOperator {
    /// `(source, target, weight)`.
    arcs: Vec<(usize, usize, f64)>,
    states: usize,
    folded: usize,
}

fn block_operator(g: &HofbauerGraph, phi: &Potential, top: f64) -> Result<BlockOperator> {
    let kp = g.kneading();
    let depth = g.depth();
    let mut folded = 0;
    // Edges of the graph with targets folded back inside when possible.
    let mut succ: Vec<Vec<(u8, usize)>> = vec![Vec::new(); g.vertices().len()];
    for (id, v) in g.vertices().iter().enumerate() {
        let (Some(lo), Some(hi)) = (kp.a_digit(v.j), kp.b_digit(v.k)) else {
            continue;
        };
        for c in lo..=hi {
            let ((tj, tk), _) = transition(kp, (v.j, v.k), c)?.expect("c within bounds");
            let t = Vertex::new(tj, tk);
            let target = match g.id(t) {
                Some(i) => Some(i),
                None => {
                    let f = Vertex::new(fold(tj, depth, kp.a_period()), fold(tk, depth, kp.b_period()));
                    let i = g.id(f);
                    if i.is_some() {
                        folded += 1;
                    }
                    i
                }
            };
            if let Some(i) = target {
                succ[id].push((c, i));
            }
        }
    }
    let r = phi.range();
    // Block states: a vertex plus the labels of the last r - 1 edges into it.
    let mut index: HashMap<(usize, Vec<u8>), usize> = HashMap::new();
    let mut states: Vec<(usize, Vec<u8>)> = Vec::new();
    let mut frontier: Vec<(usize, Vec<u8>)> = (0..succ.len()).map(|v| (v, Vec::new())).collect();
    for _ in 1..r {
        let mut next = Vec::new();
        for (v, h) in frontier {
            for &(c, t) in &succ[v] {
                let mut h2 = h.clone();
                h2.push(c);
                next.push((t, h2));
            }
        }
        frontier = next;
    }
    for s in frontier {
        if !index.contains_key(&s) {
            index.insert(s.clone(), states.len());
            states.push(s);
        }
    }
    let mut arcs = Vec::new();
    for (sid, (v, h)) in states.iter().enumerate() {
        for &(c, t) in &succ[*v] {
            let mut w = h.clone();
            w.push(c);
            let weight = (phi.value(&w)? - top).exp();
            let key = (t, w[1..].to_vec());
            if let Some(&tid) = index.get(&key) {
                arcs.push((sid, tid, weight));
            }
        }
    }
    Ok(BlockOperator {
        arcs,
        states: states.len(),
        folded,
    })
}

/// Log of the leading eigenvalue of the edge-weighted adjacency operator
/// (weights `exp(phi)` on the `r`-block presentation), by power iteration
/// on `A + I` from the all-ones vector.
///
/// When a kneading sequence has a known period, edges leaving the truncation
/// are folded back onto equivalent vertices, so eventually periodic cases are
/// computed on an exact finite quotient.
pub fn transfer_pressure(g: &HofbauerGraph, phi: &Potential) -> Result<TransferEstimate> {
    transfer_pressure_with(g, phi, PowerIteration::default())
}

pub fn transfer_pressure_with(g: &HofbauerGraph, phi: &Potential, cfg: PowerIteration) -> Result<TransferEstimate> {
    let top = phi.max();
    let op = block_operator(g, phi, top)?;
    let n = op.states;
    let mut v = vec![1.0f64; n];
    let mut lambda = f64::NAN;
    for it in 1..=cfg.max_iterations {
        let mut w = v.clone(); // the identity part
        for &(s, t, x) in &op.arcs {
            w[s] += x * v[t];
        }
        let norm_v: f64 = v.iter().sum();
        let norm_w: f64 = w.iter().sum();
        let estimate = norm_w / norm_v;
        for x in w.iter_mut() {
            *x /= norm_w;
        }
        v = w;
        if (estimate - lambda).abs() <= cfg.tolerance * estimate {
            let rho = estimate - 1.0;
            let peak = v.iter().copied().fold(0.0, f64::max);
            return Ok(TransferEstimate {
                value: rho.ln() + top,
                depth: g.depth(),
                iterations: it,
                states: n,
                folded_edges: op.folded,
                support: v.iter().filter(|&&x| x > 1e-12 * peak).count(),
            });
        }
        lambda = estimate;
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iterations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ct3Margin {
    pub n: usize,
    pub margin: f64,
    pub pressure: f64,
    /// `(1/n) S_n phi(b)`.
    pub orbit_average: f64,
    /// `max(V, ||phi||)`.
    pub w: f64,
    pub v: f64,
}

/// `P(phi) - (1/n) S_n phi(b)`, with the pressure from the graph.
pub fn ct3_margin(phi: &Potential, g: &HofbauerGraph, n: usize) -> Result<Ct3Margin> {
    let pressure = transfer_pressure(g, phi)?.value;
    ct3_margin_with_pressure(phi, g.kneading(), pressure, n)
}

/// As `ct3_margin`, reusing an already computed pressure.
pub fn ct3_margin_with_pressure(phi: &Potential, kp: &KneadingPair, pressure: f64, n: usize) -> Result<Ct3Margin> {
    let orbit_average = birkhoff_sum(kp.b(), n, phi)? / n as f64;
    let v = bowen_constant(phi);
    Ok(Ct3Margin {
        n,
        margin: pressure - orbit_average,
        pressure,
        orbit_average,
        w: v.max(phi.sup_norm()),
        v,
    })
}
