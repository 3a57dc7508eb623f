//! Counting lemmas and the dilate/wedge graph machinery.

use std::collections::{BTreeMap, BTreeSet};

use num::bigint::{BigInt, BigUint};
use num::{Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::additive::NumberSet;
use crate::error::{Error, Result};
use crate::grid::ceil_threshold;
use crate::rational::Rational;

/// Subsets `A₁, ..., A_k` of `{1..n}`. Sets may repeat.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSetSystem")]
pub struct SetSystem {
    n: usize,
    sets: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawSetSystem {
    n: usize,
    sets: Vec<Vec<usize>>,
}

impl TryFrom<RawSetSystem> for SetSystem {
    type Error = Error;
    fn try_from(raw: RawSetSystem) -> Result<Self> {
        SetSystem::new(raw.n, raw.sets)
    }
}

impl SetSystem {
    pub fn new(n: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut out = Vec::with_capacity(sets.len());
        for mut s in sets {
            s.sort_unstable();
            s.dedup();
            if let Some(&bad) = s.iter().find(|&&x| x == 0 || x > n) {
                return Err(Error::Precondition(format!("element {bad} outside 1..={n}")));
            }
            out.push(s);
        }
        Ok(SetSystem { n, sets: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }
}

fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub n: usize,
    pub k: usize,
    pub delta: f64,
    /// `⌈n^(1-δ)⌉`.
    pub required_size: usize,
    pub min_size: usize,
    pub hypothesis_met: bool,
    /// `⌈n^(1-2δ)/2⌉`.
    pub intersection_threshold: usize,
    pub qualifying_pairs: usize,
    /// `k² n^(-2δ) / 2`.
    pub pair_bound: f64,
}

/// Counts ordered pairs `(i, j)`, diagonal included, with
/// `|A_i ∩ A_j| ≥ n^(1-2δ)/2`. When every set has at least `n^(1-δ)`
/// elements the count must reach `k² n^(-2δ) / 2`; a shortfall is an
/// assertion error.
pub fn lemma31_verify(sys: &SetSystem, delta: f64) -> Result<IntersectionReport> {
    let nf = sys.n as f64;
    let k = sys.k();
    let min_size = sys.sets.iter().map(Vec::len).min().unwrap_or(0);
    let required_size = ceil_threshold(nf.powf(1.0 - delta));
    let hypothesis_met = k > 0 && min_size >= required_size;
    let intersection_threshold = ceil_threshold(nf.powf(1.0 - 2.0 * delta) / 2.0);
    let mut qualifying_pairs = 0;
    for a in &sys.sets {
        for b in &sys.sets {
            if intersection_size(a, b) >= intersection_threshold {
                qualifying_pairs += 1;
            }
        }
    }
    let kf = k as f64;
    let report = IntersectionReport {
        n: sys.n,
        k,
        delta,
        required_size,
        min_size,
        hypothesis_met,
        intersection_threshold,
        qualifying_pairs,
        pair_bound: kf * kf * nf.powf(-2.0 * delta) / 2.0,
    };
    if hypothesis_met && (qualifying_pairs as f64) < report.pair_bound {
        return Err(Error::Assertion(format!(
            "{qualifying_pairs} intersecting pairs, lemma requires {}",
            report.pair_bound
        )));
    }
    Ok(report)
}

/// A `k × N` matrix with entries in `[0, L]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDegreeMatrix")]
pub struct DegreeMatrix {
    #[serde(rename = "L")]
    cap: Rational,
    rows: Vec<Vec<Rational>>,
}

#[derive(Deserialize)]
struct RawDegreeMatrix {
    #[serde(rename = "L")]
    cap: Rational,
    rows: Vec<Vec<Rational>>,
}

impl TryFrom<RawDegreeMatrix> for DegreeMatrix {
    type Error = Error;
    fn try_from(raw: RawDegreeMatrix) -> Result<Self> {
        DegreeMatrix::new(raw.cap, raw.rows)
    }
}

impl DegreeMatrix {
    pub fn new(cap: Rational, rows: Vec<Vec<Rational>>) -> Result<Self> {
        if cap <= Rational::zero() {
            return Err(Error::Precondition("L must be positive".into()));
        }
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(Error::Precondition("matrix must be nonempty".into()));
        }
        for row in &rows {
            if row.len() != cols {
                return Err(Error::Precondition("ragged matrix".into()));
            }
            if let Some(bad) = row.iter().find(|d| d.is_negative() || **d > cap) {
                return Err(Error::Precondition(format!("entry {bad} outside [0, {cap}]")));
            }
        }
        Ok(DegreeMatrix { cap, rows })
    }

    pub fn cap(&self) -> &Rational {
        &self.cap
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    /// `C = Σ d / (L k N)`.
    pub fn density(&self) -> Rational {
        let total: Rational = self.rows.iter().flatten().cloned().sum();
        total / (&self.cap * Rational::from(self.k() * self.n()))
    }

    /// Entries scaled by a common denominator to integers.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        let den = self
            .rows
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, d| acc.lcm(d.denom()));
        self.rows
            .iter()
            .map(|row| row.iter().map(|d| d.numer() * (&den / d.denom())).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixLemmaReport {
    /// Zero-based row index.
    pub index: usize,
    pub qualifying_indices: Vec<usize>,
    #[serde(rename = "C")]
    pub c: Rational,
    /// `½ C² L² N`.
    pub threshold: Rational,
    /// `k C² / (2 − C²)`.
    pub bound: Rational,
}

/// Finds the first row `i` for which at least `kC²/(2−C²)` rows `i'` satisfy
/// `Σ_j d[i][j] d[i'][j] > ½ C² L² N`, comparing exactly.
pub fn lemma53_find_index(d: &DegreeMatrix) -> Result<MatrixLemmaReport> {
    let (k, n) = (d.k(), d.n());
    let rows = d.integer_rows();
    let total: BigInt = rows.iter().flatten().sum();
    if !total.is_positive() {
        return Err(Error::Precondition("matrix has zero total".into()));
    }
    // With integer entries e = D·d and S = Σ e, the strict inequality
    // Σ d d' > ½ C² L² N becomes 2 k² N Σ e e' > S².
    let lhs_scale = BigInt::from(2 * k * k * n);
    let rhs = &total * &total;
    let c = d.density();
    let c2 = &c * &c;
    let bound = Rational::from(k) * &c2 / (Rational::from(2) - &c2);
    let threshold = &c2 * d.cap() * d.cap() * Rational::from(n) / Rational::from(2);
    for i in 0..k {
        let qualifying: Vec<usize> = (0..k)
            .filter(|&i2| {
                let dot: BigInt = rows[i].iter().zip(&rows[i2]).map(|(a, b)| a * b).sum();
                &lhs_scale * dot > rhs
            })
            .collect();
        if Rational::from(qualifying.len()) >= bound {
            return Ok(MatrixLemmaReport {
                index: i,
                qualifying_indices: qualifying,
                c,
                threshold,
                bound,
            });
        }
    }
    Err(Error::NoQualifyingIndex)
}

/// A `(layer_count)`-partite digraph whose layers are all copies of one base
/// set. `edges[m]` holds the edges from layer `m` to layer `m + 1` as pairs of
/// base indices, each with the number of ways it arose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredDigraph {
    base: NumberSet,
    edges: Vec<BTreeMap<(usize, usize), u64>>,
}

#[derive(Serialize)]
struct EdgeOut<'a> {
    from: &'a Rational,
    to: &'a Rational,
    multiplicity: u64,
}

#[derive(Serialize)]
struct DigraphOut<'a> {
    base: &'a [Rational],
    layer_count: usize,
    edges: Vec<Vec<EdgeOut<'a>>>,
}

impl Serialize for LayeredDigraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let b = self.base.elements();
        DigraphOut {
            base: b,
            layer_count: self.layer_count(),
            edges: self
                .edges
                .iter()
                .map(|layer| {
                    layer
                        .iter()
                        .map(|(&(u, v), &multiplicity)| EdgeOut {
                            from: &b[u],
                            to: &b[v],
                            multiplicity,
                        })
                        .collect()
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl LayeredDigraph {
    /// Edgeless graph with `layer_count ≥ 2` layers.
    pub fn empty(base: NumberSet, layer_count: usize) -> Result<Self> {
        if layer_count < 2 {
            return Err(Error::LayerMismatch(format!("{layer_count} layers")));
        }
        Ok(LayeredDigraph {
            base,
            edges: vec![BTreeMap::new(); layer_count - 1],
        })
    }

    pub fn base(&self) -> &NumberSet {
        &self.base
    }

    pub fn layer_count(&self) -> usize {
        self.edges.len() + 1
    }

    pub fn edges(&self, m: usize) -> &BTreeMap<(usize, usize), u64> {
        &self.edges[m]
    }

    /// Adds one occurrence of edge `(u, v)` between layers `m` and `m + 1`.
    pub fn add_edge(&mut self, m: usize, u: usize, v: usize) {
        assert!(u < self.base.len() && v < self.base.len(), "vertex out of range");
        *self.edges[m].entry((u, v)).or_insert(0) += 1;
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(BTreeMap::len).sum()
    }

    /// In-degrees of the last layer.
    pub fn final_in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.base.len()];
        for &(_, v) in self.edges.last().expect("at least one edge layer").keys() {
            d[v] += 1;
        }
        d
    }
}

/// Bipartite graph on `B ⊔ B` with `(b, b')` an edge iff `λ(b − x) = b' − x`
/// for some `λ ∈ C`.
pub fn dilate_graph(b: &NumberSet, x: &Rational, c: &NumberSet) -> Result<LayeredDigraph> {
    if c.is_empty() || c.has_zero() {
        return Err(Error::Precondition("dilation set must be nonempty and exclude 0".into()));
    }
    let mut g = LayeredDigraph::empty(b.clone(), 2)?;
    for (u, bu) in b.elements().iter().enumerate() {
        let offset = bu - x;
        for lambda in c.elements() {
            let image = lambda * &offset + x;
            if let Ok(v) = b.elements().binary_search(&image) {
                g.add_edge(0, u, v);
            }
        }
    }
    Ok(g)
}

/// Reverses layer order and flips every edge.
pub fn reverse_graph(g: &LayeredDigraph) -> LayeredDigraph {
    LayeredDigraph {
        base: g.base.clone(),
        edges: g
            .edges
            .iter()
            .rev()
            .map(|layer| layer.iter().map(|(&(u, v), &m)| ((v, u), m)).collect())
            .collect(),
    }
}

/// `G ∧ H`: the edge layers of `G` followed by those of `H`. Both operands
/// need the same base set and the same layer count `2^t + 1`.
pub fn wedge(g: &LayeredDigraph, h: &LayeredDigraph) -> Result<LayeredDigraph> {
    if g.base != h.base {
        return Err(Error::LayerMismatch("different base sets".into()));
    }
    let spans = g.edges.len();
    if spans != h.edges.len() || !spans.is_power_of_two() {
        return Err(Error::LayerMismatch(format!(
            "layer counts {} and {} are not equal and of the form 2^t + 1",
            g.layer_count(),
            h.layer_count()
        )));
    }
    let mut edges = g.edges.clone();
    edges.extend(h.edges.iter().cloned());
    Ok(LayeredDigraph {
        base: g.base.clone(),
        edges,
    })
}

fn forward_counts(g: &LayeredDigraph, mut counts: Vec<BigUint>) -> Vec<BigUint> {
    for layer in &g.edges {
        let mut next = vec![BigUint::zero(); counts.len()];
        for &(u, v) in layer.keys() {
            if !counts[u].is_zero() {
                next[v] += &counts[u];
            }
        }
        counts = next;
    }
    counts
}

/// Paths that visit every layer once, first to last. Edges count once
/// regardless of multiplicity.
pub fn count_full_paths(g: &LayeredDigraph) -> BigUint {
    forward_counts(g, vec![BigUint::one(); g.base.len()]).into_iter().sum()
}

/// Full paths starting at base index `start` in the first layer.
pub fn count_paths_from(g: &LayeredDigraph, start: usize) -> BigUint {
    let mut init = vec![BigUint::zero(); g.base.len()];
    init[start] = BigUint::one();
    forward_counts(g, init).into_iter().sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinomRatioReport {
    pub k: usize,
    pub gamma: f64,
    pub x: u64,
    /// `⌊x^(1-γ)⌋`.
    pub m: u64,
    /// `C(x, m−k) / C(x, m)`.
    pub ratio: Rational,
    /// `x^(kγ) · ratio`.
    pub scaled: f64,
    pub deviation: f64,
}

fn binomial(n: u64, r: u64) -> BigUint {
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Evaluates `x^(kγ) · C(x, m−k)/C(x, m)` with `m = ⌊x^(1−γ)⌋`, the binomials
/// computed exactly.
pub fn binom_ratio_check(k: usize, gamma: f64, x: u64) -> Result<BinomRatioReport> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Precondition("gamma must lie in (0, 1)".into()));
    }
    let root = (x as f64).powf(1.0 - gamma);
    let m = (root + 1e-9 * root.max(1.0)).floor() as u64;
    if (m as f64) < (k + 1) as f64 || m > x {
        return Err(Error::Precondition(format!("x^(1-γ) = {root} is below k + 1 = {}", k + 1)));
    }
    let top = binomial(x, m - k as u64);
    let bottom = binomial(x, m);
    let ratio = Rational::from(num::BigRational::new(top.into(), bottom.into()));
    let scaled = (x as f64).powf(k as f64 * gamma) * ratio.to_f64();
    Ok(BinomRatioReport {
        k,
        gamma,
        x,
        m,
        ratio,
        scaled,
        deviation: (scaled - 1.0).abs(),
    })
}

/// One bipartite step of a wedge chain: the dilation `b ↦ λ(b − x) + x` for
/// `λ` in `dilations`. Reversed steps carry the reciprocal dilations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DilateStep {
    pub x: Rational,
    pub dilations: NumberSet,
}

impl DilateStep {
    fn reversed(&self) -> DilateStep {
        DilateStep {
            x: self.x.clone(),
            dilations: self
                .dilations
                .elements()
                .iter()
                .map(|l| l.recip().expect("nonzero dilation"))
                .collect(),
        }
    }
}

/// Step sequence of `G_{i₁..i_{t+1}} = G_{i₁..i_t} ∧ reverse(G_{i₁..i_{t−1}, i_{t+1}})`.
pub fn wedge_steps(params: &[(Rational, NumberSet)], indices: &[usize]) -> Vec<DilateStep> {
    match indices {
        [] => Vec::new(),
        [i] => vec![DilateStep {
            x: params[*i].0.clone(),
            dilations: params[*i].1.clone(),
        }],
        _ => {
            let last = indices.len() - 1;
            let mut alt = indices[..last - 1].to_vec();
            alt.push(indices[last]);
            let mut steps = wedge_steps(params, &indices[..last]);
            steps.extend(wedge_steps(params, &alt).iter().rev().map(DilateStep::reversed));
            steps
        }
    }
}

/// Graph realised by a step sequence.
pub fn steps_graph(b: &NumberSet, steps: &[DilateStep]) -> Result<LayeredDigraph> {
    let mut g = LayeredDigraph::empty(b.clone(), steps.len() + 1)?;
    for (m, step) in steps.iter().enumerate() {
        let layer = dilate_graph(b, &step.x, &step.dilations)?;
        g.edges[m] = layer.edges[0].clone();
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WedgeDemoReport {
    pub t: usize,
    pub indices: Vec<usize>,
    pub layer_count: usize,
    pub graph_paths: String,
    /// Labelled paths `(β₁, λ₁, ..., λ_{2^t})`.
    pub labelled_paths: usize,
    /// Distinct values of `λ_{2^t} ⋯ λ₁ β₁`.
    pub lhs_values: usize,
    /// Distinct right-hand expressions, as `(β_end, λ₁, ..., λ_{2^t})`.
    pub rhs_expressions: usize,
    pub identity_checked: usize,
}

/// Largest base set the demonstration accepts.
pub const WEDGE_DEMO_BASE_LIMIT: usize = 12;
/// Deepest wedge the demonstration builds.
pub const WEDGE_DEMO_DEPTH_LIMIT: usize = 3;
const WEDGE_DEMO_PATH_LIMIT: usize = 2_000_000;

/// Builds the depth-`t` wedge chain over `B` for the index sequence, walks
/// every labelled path and checks the telescoping identity
/// `λ_{2^t}⋯λ₁β₁ = (β_end − x_{2^t}) + Σ_y [Π_{j≥y} λ_j](x_y − x_{y−1})`
/// with `x₀ = 0`. The identity is exact algebra, so a mismatch is an
/// assertion error; the set sizes are reported only.
pub fn wedge_demo(b: &NumberSet, params: &[(Rational, NumberSet)], indices: &[usize]) -> Result<WedgeDemoReport> {
    if b.len() > WEDGE_DEMO_BASE_LIMIT {
        return Err(Error::TooLarge {
            what: "base set",
            got: b.len(),
            limit: WEDGE_DEMO_BASE_LIMIT,
        });
    }
    if indices.is_empty() || indices.len() > WEDGE_DEMO_DEPTH_LIMIT + 1 {
        return Err(Error::Precondition(format!(
            "need between 1 and {} indices",
            WEDGE_DEMO_DEPTH_LIMIT + 1
        )));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= params.len()) {
        return Err(Error::Precondition(format!("index {bad} has no dilation parameters")));
    }
    let steps = wedge_steps(params, indices);
    let g = steps_graph(b, &steps)?;
    let xs: Vec<&Rational> = steps.iter().map(|s| &s.x).collect();

    let mut lhs = BTreeSet::new();
    let mut rhs = BTreeSet::new();
    let mut labelled = 0usize;
    let mut checked = 0usize;
    // Depth-first walk; the stack holds (layer, current β, λ labels so far).
    let mut stack: Vec<(usize, Rational, Vec<Rational>, Rational)> = b
        .elements()
        .iter()
        .map(|b1| (0, b1.clone(), Vec::new(), b1.clone()))
        .collect();
    while let Some((m, beta, lambdas, beta1)) = stack.pop() {
        if m == steps.len() {
            labelled += 1;
            if labelled > WEDGE_DEMO_PATH_LIMIT {
                return Err(Error::TooLarge {
                    what: "labelled paths",
                    got: labelled,
                    limit: WEDGE_DEMO_PATH_LIMIT,
                });
            }
            let product: Rational = lambdas.iter().fold(Rational::one(), |acc, l| acc * l);
            let left = &product * &beta1;
            let mut right = &beta - xs[m - 1];
            let mut suffix = Rational::one();
            for y in (0..m).rev() {
                suffix = suffix * &lambdas[y];
                let prev = if y == 0 { Rational::zero() } else { xs[y - 1].clone() };
                right = right + &suffix * (xs[y] - prev);
            }
            if left != right {
                return Err(Error::Assertion(format!(
                    "telescoping identity fails: {left} != {right}"
                )));
            }
            checked += 1;
            lhs.insert(left);
            let mut key = lambdas.clone();
            key.push(beta);
            rhs.insert(key);
            continue;
        }
        let step = &steps[m];
        for lambda in step.dilations.elements() {
            let next = lambda * (&beta - &step.x) + &step.x;
            if b.contains(&next) {
                let mut ls = lambdas.clone();
                ls.push(lambda.clone());
                stack.push((m + 1, next, ls, beta1.clone()));
            }
        }
    }
    Ok(WedgeDemoReport {
        t: indices.len() - 1,
        indices: indices.to_vec(),
        layer_count: g.layer_count(),
        graph_paths: count_full_paths(&g).to_string(),
        labelled_paths: labelled,
        lhs_values: lhs.len(),
        rhs_expressions: rhs.len(),
        identity_checked: checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, r};
    use proptest::prelude::*;

    fn ns(xs: &[i64]) -> NumberSet {
        NumberSet::from_ints(xs)
    }

    fn edge_values(g: &LayeredDigraph, m: usize) -> Vec<(Rational, Rational)> {
        let b = g.base().elements();
        g.edges(m).keys().map(|&(u, v)| (b[u].clone(), b[v].clone())).collect()
    }

    #[test]
    fn lemma31_examples() {
        let full: Vec<usize> = (1..=30).collect();
        let sys = SetSystem::new(30, vec![full.clone(); 5]).unwrap();
        let rep = lemma31_verify(&sys, 0.2).unwrap();
        assert!(rep.hypothesis_met);
        assert_eq!(rep.qualifying_pairs, 25);

        let n = 100;
        let size = ceil_threshold((n as f64).powf(0.7));
        let s: Vec<usize> = (1..=size).collect();
        let rep = lemma31_verify(&SetSystem::new(n, vec![s.clone(), s]).unwrap(), 0.3).unwrap();
        assert!(rep.hypothesis_met);
        assert_eq!(rep.qualifying_pairs, 4);
        assert!(4.0 >= rep.pair_bound);

        let rep = lemma31_verify(&SetSystem::new(n, vec![vec![1, 2]]).unwrap(), 0.1).unwrap();
        assert!(!rep.hypothesis_met);
        assert!(SetSystem::new(3, vec![vec![4]]).is_err());
    }

    #[test]
    fn lemma53_examples() {
        let l = r(3);
        let d = DegreeMatrix::new(l.clone(), vec![vec![l.clone(); 4]; 3]).unwrap();
        let rep = lemma53_find_index(&d).unwrap();
        assert_eq!(rep.c, r(1));
        assert_eq!(rep.index, 0);
        assert_eq!(rep.qualifying_indices, vec![0, 1, 2]);
        assert_eq!(rep.bound, r(3));

        let single = DegreeMatrix::new(r(2), vec![vec![r(1), r(0)]]).unwrap();
        let rep = lemma53_find_index(&single).unwrap();
        assert_eq!(rep.c, q(1, 4));
        assert!(rep.bound <= r(1));
        assert_eq!(rep.qualifying_indices, vec![0]);

        assert!(DegreeMatrix::new(r(1), vec![vec![r(2)]]).is_err());
        let zero = DegreeMatrix::new(r(1), vec![vec![r(0)]]).unwrap();
        assert!(lemma53_find_index(&zero).is_err());
    }

    #[test]
    fn degree_matrix_json() {
        let d: DegreeMatrix = serde_json::from_str(r#"{"L": "2", "rows": [["1/2", "2"], ["0", "1"]]}"#).unwrap();
        assert_eq!(d.k(), 2);
        assert_eq!(d.density(), q(7, 16));
        let back = serde_json::to_string(&d).unwrap();
        assert_eq!(back, r#"{"L":"2","rows":[["1/2","2"],["0","1"]]}"#);
    }

    #[test]
    fn dilate_examples() {
        let g = dilate_graph(&ns(&[1, 2, 3]), &r(0), &ns(&[2])).unwrap();
        assert_eq!(edge_values(&g, 0), vec![(r(1), r(2))]);

        let g = dilate_graph(&ns(&[1, 2, 3]), &r(5), &ns(&[1])).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(g.edges(0).keys().all(|(u, v)| u == v));

        let g = dilate_graph(&ns(&[0, 1, 3, 7]), &r(-1), &ns(&[2])).unwrap();
        assert_eq!(
            edge_values(&g, 0),
            vec![(r(0), r(1)), (r(1), r(3)), (r(3), r(7))]
        );
        assert!(dilate_graph(&ns(&[1]), &r(0), &ns(&[0, 1])).is_err());
    }

    #[test]
    fn dilate_multiplicity_at_center() {
        // b = x is fixed by every dilation.
        let g = dilate_graph(&ns(&[0, 1, 2]), &r(0), &ns(&[1, 2])).unwrap();
        assert_eq!(g.edges(0)[&(0, 0)], 2);
        assert_eq!(g.edges(0)[&(1, 2)], 1);
    }

    #[test]
    fn reverse_and_wedge() {
        let g = dilate_graph(&ns(&[1, 2, 3]), &r(0), &ns(&[2])).unwrap();
        assert_eq!(edge_values(&reverse_graph(&g), 0), vec![(r(2), r(1))]);
        let empty = LayeredDigraph::empty(ns(&[1, 2, 3]), 2).unwrap();
        assert_eq!(reverse_graph(&empty), empty);

        let w = wedge(&g, &reverse_graph(&g)).unwrap();
        assert_eq!(w.layer_count(), 3);
        assert_eq!(count_full_paths(&w), BigUint::from(1u32));
        assert_eq!(count_full_paths(&wedge(&g, &empty).unwrap()), BigUint::zero());

        assert!(matches!(wedge(&w, &g), Err(Error::LayerMismatch(_))));
        let w5 = wedge(&w, &w).unwrap();
        assert_eq!(w5.layer_count(), 5);
        let three = LayeredDigraph::empty(ns(&[1, 2, 3]), 4).unwrap();
        assert!(wedge(&three, &three).is_err());
        let other = LayeredDigraph::empty(ns(&[1, 2]), 2).unwrap();
        assert!(wedge(&g, &other).is_err());
    }

    #[test]
    fn path_counts() {
        let g = dilate_graph(&ns(&[1, 2, 3, 4, 6]), &r(0), &ns(&[2, 3])).unwrap();
        assert_eq!(count_full_paths(&g), BigUint::from(g.edge_count()));
        // Wedge with the reverse counts Σ_j d_j² over last-layer in-degrees.
        let w = wedge(&g, &reverse_graph(&g)).unwrap();
        let expected: usize = g.final_in_degrees().iter().map(|d| d * d).sum();
        assert_eq!(count_full_paths(&w), BigUint::from(expected));
        assert_eq!(count_paths_from(&g, 0), BigUint::from(2u32));
    }

    #[test]
    fn binom_examples() {
        let rep = binom_ratio_check(0, 0.5, 10_000).unwrap();
        assert_eq!(rep.ratio, r(1));
        assert_eq!(rep.deviation, 0.0);

        let rep = binom_ratio_check(1, 0.5, 1_000_000).unwrap();
        assert_eq!(rep.m, 1000);
        assert_eq!(rep.ratio, q(1000, 1_000_000 - 1000 + 1));
        assert!(rep.deviation < 1e-2);

        for k in 2..=3 {
            assert!(binom_ratio_check(k, 0.5, 1_000_000).unwrap().deviation < 1e-2);
        }
        assert!(binom_ratio_check(5, 0.5, 16).is_err());
        assert!(binom_ratio_check(1, 1.0, 100).is_err());
    }

    #[test]
    fn binom_deviation_shrinks() {
        for k in 1..=3 {
            let devs: Vec<f64> = [100u64, 400, 2500, 10_000, 40_000]
                .iter()
                .map(|&x| binom_ratio_check(k, 0.5, x).unwrap().deviation)
                .collect();
            assert!(devs.windows(2).all(|w| w[1] < w[0]), "k={k}: {devs:?}");
        }
    }

    #[test]
    fn wedge_steps_shape() {
        let params: Vec<(Rational, NumberSet)> = (0..4).map(|i| (r(i), ns(&[2]))).collect();
        let steps = wedge_steps(&params, &[0, 1, 2, 3]);
        assert_eq!(steps.len(), 8);
        let xs: Vec<Rational> = steps.iter().map(|s| s.x.clone()).collect();
        // G_{0,1,2} = G_{0,1} ∧ ~G_{0,2}; G_{0,1,3} likewise; then wedge.
        assert_eq!(xs, [0, 1, 2, 0, 0, 3, 1, 0].map(r).to_vec());
        assert_eq!(steps[1].dilations, NumberSet::new(vec![q(1, 2)]));
        assert_eq!(steps[2].dilations, ns(&[2]));
    }

    #[test]
    fn wedge_demo_identity() {
        let b = ns(&[0, 1, 2, 3, 4, 6, 8, 12]);
        let params = vec![(r(0), ns(&[2, 3])), (r(0), ns(&[2])), (r(-1), ns(&[1, 3]))];
        for indices in [vec![0], vec![0, 1], vec![0, 2, 1], vec![0, 1, 2, 0]] {
            let rep = wedge_demo(&b, &params, &indices).unwrap();
            assert_eq!(rep.identity_checked, rep.labelled_paths);
            assert_eq!(rep.layer_count, (1 << (indices.len() - 1)) + 1);
            assert!(rep.lhs_values <= rep.rhs_expressions);
        }
        let big = NumberSet::from_ints(&(0..13).collect::<Vec<_>>());
        assert!(wedge_demo(&big, &params, &[0]).is_err());
    }

    fn enumerate_paths(g: &LayeredDigraph) -> usize {
        let mut paths: Vec<usize> = (0..g.base().len()).collect();
        for m in 0..g.layer_count() - 1 {
            paths = paths
                .into_iter()
                .flat_map(|u| g.edges(m).keys().filter(move |e| e.0 == u).map(|e| e.1).collect::<Vec<_>>())
                .collect();
        }
        paths.len()
    }

    fn arb_graph() -> impl Strategy<Value = LayeredDigraph> {
        (1usize..=6, 1usize..=4).prop_flat_map(|(nb, spans)| {
            proptest::collection::vec(proptest::collection::vec((0..nb, 0..nb), 0..12), spans).prop_map(
                move |layers| {
                    let base = NumberSet::from_ints(&(0..nb as i64).collect::<Vec<_>>());
                    let mut g = LayeredDigraph::empty(base, layers.len() + 1).unwrap();
                    for (m, es) in layers.into_iter().enumerate() {
                        for (u, v) in es {
                            g.add_edge(m, u, v);
                        }
                    }
                    g
                },
            )
        })
    }

    proptest! {
        #[test]
        fn dp_matches_enumeration(g in arb_graph()) {
            prop_assert_eq!(count_full_paths(&g), BigUint::from(enumerate_paths(&g)));
            prop_assert_eq!(reverse_graph(&reverse_graph(&g)), g.clone());
            prop_assert_eq!(count_full_paths(&reverse_graph(&g)), count_full_paths(&g));
            let by_start: BigUint = (0..g.base().len()).map(|s| count_paths_from(&g, s)).sum();
            prop_assert_eq!(by_start, count_full_paths(&g));
        }

        #[test]
        fn dilate_double_count(xs in proptest::collection::vec(-10i64..10, 1..10), x in -5i64..5, cs in proptest::collection::vec(1i64..4, 1..4), neg in any::<bool>()) {
            let b = NumberSet::from_ints(&xs);
            let c: NumberSet = cs.iter().map(|&v| if neg { Rational::from(-v) } else { Rational::from(v) }).collect();
            let g = dilate_graph(&b, &r(x), &c).unwrap();
            let expected: u64 = b.elements().iter()
                .map(|bb| c.elements().iter().filter(|l| b.contains(&(*l * (bb - r(x)) + r(x)))).count() as u64)
                .sum();
            prop_assert_eq!(g.edges(0).values().sum::<u64>(), expected);
        }
    }
}
