//! Star composition `f * g = f⁻¹ ∘ g` over sets of rich lines.
//!
//! This module builds the rich ordered pairs of a line set, groups them by
//! their product line (the preimage map `Ps`), selects the dyadic product
//! `L * L`, iterates it, and derives the structural diagnostics and the
//! commutator graph from those products.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{concurrency_map, group_by_slope, check_near_general_position, GpReport, LineSet};
use crate::grid::{ceil_threshold, richness, GroundSet};
use crate::line::{Line, PointR};
use crate::rational::Rational;

/// Ordered index pairs `(i, j)`, diagonal included, whose product
/// `L[i] * L[j]` meets at least `threshold` grid points.
pub fn rich_star_pairs(lines: &LineSet, a: &GroundSet, threshold: usize) -> Vec<(usize, usize)> {
    let ls = lines.lines();
    (0..ls.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            (0..ls.len())
                .filter(move |&j| richness(&ls[i].star(&ls[j]), a) >= threshold)
                .map(move |j| (i, j))
        })
        .collect()
}

/// Outcome of the rich-pairs counting lemma on one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RichPairsReport {
    pub n: usize,
    pub lines: usize,
    pub delta: f64,
    pub min_richness: usize,
    /// `⌈n^(1-δ)⌉`, the richness every input line needs.
    pub required_richness: usize,
    pub hypothesis_met: bool,
    /// `⌈n^(1-2δ)/2⌉`.
    pub pair_threshold: usize,
    pub rich_pairs: usize,
    /// `|L|² n^(-2δ) / 2`.
    pub pair_bound: f64,
    pub distinct_products: usize,
    /// `|L| n^(-2δ) / 2`, the distinct-product count implied by left
    /// cancellation.
    pub distinct_bound: f64,
}

/// Counts rich star pairs at threshold `⌈n^(1-2δ)/2⌉` and, when every line is
/// `n^(1-δ)`-rich, asserts both the pair bound and the distinct-product bound.
/// The lemma is non-asymptotic, so a shortfall is an error.
pub fn rich_pairs_lemma(lines: &LineSet, a: &GroundSet, delta: f64) -> Result<RichPairsReport> {
    let n = a.len();
    let nf = n as f64;
    let min_richness = lines.iter().map(|l| richness(l, a)).min().unwrap_or(0);
    let required_richness = ceil_threshold(nf.powf(1.0 - delta));
    let hypothesis_met = !lines.is_empty() && min_richness >= required_richness;
    let pair_threshold = ceil_threshold(nf.powf(1.0 - 2.0 * delta) / 2.0);
    let pairs = rich_star_pairs(lines, a, pair_threshold);
    let ls = lines.lines();
    let distinct: BTreeSet<Line> = pairs.iter().map(|&(i, j)| ls[i].star(&ls[j])).collect();
    let size = lines.len() as f64;
    let report = RichPairsReport {
        n,
        lines: lines.len(),
        delta,
        min_richness,
        required_richness,
        hypothesis_met,
        pair_threshold,
        rich_pairs: pairs.len(),
        pair_bound: size * size * nf.powf(-2.0 * delta) / 2.0,
        distinct_products: distinct.len(),
        distinct_bound: size * nf.powf(-2.0 * delta) / 2.0,
    };
    if hypothesis_met {
        if (report.rich_pairs as f64) < report.pair_bound {
            return Err(Error::Assertion(format!(
                "{} rich pairs, lemma requires {}",
                report.rich_pairs, report.pair_bound
            )));
        }
        if (report.distinct_products as f64) < report.distinct_bound {
            return Err(Error::Assertion(format!(
                "{} distinct products, corollary requires {}",
                report.distinct_products, report.distinct_bound
            )));
        }
    }
    Ok(report)
}

/// Product line → the ordered index pairs that produce it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PreimageMap {
    pub entries: BTreeMap<Line, Vec<(usize, usize)>>,
}

impl PreimageMap {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity(&self, l: &Line) -> usize {
        self.entries.get(l).map_or(0, Vec::len)
    }
}

/// Groups `pairs` by their star product. Each product has at most `|L|`
/// preimages, since `f * g = f * g'` forces `g = g'`.
pub fn preimage_map(lines: &LineSet, pairs: &[(usize, usize)]) -> Result<PreimageMap> {
    let ls = lines.lines();
    let mut entries: BTreeMap<Line, Vec<(usize, usize)>> = BTreeMap::new();
    for &(i, j) in pairs {
        if i >= ls.len() || j >= ls.len() {
            return Err(Error::Precondition(format!(
                "pair ({i}, {j}) out of range for {} lines",
                ls.len()
            )));
        }
        entries.entry(ls[i].star(&ls[j])).or_default().push((i, j));
    }
    for (l, ps) in entries.iter_mut() {
        ps.sort_unstable();
        if ps.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition(format!("duplicate pair for {l:?}")));
        }
        if ps.len() > ls.len() {
            return Err(Error::Assertion(format!(
                "{l:?} has {} preimages, more than |L| = {}",
                ps.len(),
                ls.len()
            )));
        }
    }
    Ok(PreimageMap { entries })
}

/// Bucket index `i` with `2^(i-1) < s ≤ 2^i`; singletons land in bucket 0.
pub fn dyadic_index(s: usize) -> usize {
    assert!(s >= 1, "multiplicities are positive");
    (usize::BITS - (s - 1).leading_zeros()) as usize
}

/// `⌈log₂ m⌉` for `m ≥ 1`.
fn ceil_log2(m: usize) -> usize {
    dyadic_index(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicBucket {
    pub index: usize,
    /// Multiplicities in `(2^(index-1), 2^index]`.
    pub upper: u64,
    pub line_count: usize,
    /// Sum of multiplicities over the bucket's lines.
    pub n_i: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DyadicResult {
    pub n: usize,
    pub input_size: usize,
    pub delta: f64,
    /// Richness a pair's product needs, `⌈n^(1-2δ)/2⌉`.
    pub richness_threshold: usize,
    pub rich_pairs: usize,
    pub buckets: Vec<DyadicBucket>,
    /// `|L|² n^(-2δ) / (2 log₂|L|)`.
    pub threshold: f64,
    /// Largest bucket whose `N_i` reaches the pigeonhole threshold.
    pub chosen_i: Option<usize>,
    /// Bucket the product was taken from: `chosen_i`, or under fallback the
    /// bucket with the largest `N_i` (largest index on ties). `None` only
    /// when there are no rich pairs at all.
    pub selected_i: Option<usize>,
    pub fallback_used: bool,
    pub product: LineSet,
    #[serde(skip)]
    pub preimages: PreimageMap,
}

impl DyadicResult {
    pub fn product_size(&self) -> usize {
        self.product.len()
    }
}

/// The dyadic product `L * L` of a line set over `A × A`.
///
/// Rich pairs are taken at `⌈n^(1-2δ)/2⌉`, product lines are bucketed by
/// preimage multiplicity, and the product is the bucket with the largest
/// index whose total multiplicity reaches `|L|² n^(-2δ) / (2 log₂|L|)`. If no
/// bucket reaches it the largest-`N_i` bucket is used and `fallback_used`
/// is set.
pub fn dyadic_star_product(lines: &LineSet, a: &GroundSet, delta: f64) -> Result<DyadicResult> {
    if lines.len() < 2 {
        return Err(Error::Precondition(format!(
            "dyadic product needs at least 2 lines, got {}",
            lines.len()
        )));
    }
    let n = a.len();
    let nf = n as f64;
    let size = lines.len();
    let richness_threshold = ceil_threshold(nf.powf(1.0 - 2.0 * delta) / 2.0);
    let pairs = rich_star_pairs(lines, a, richness_threshold);
    let preimages = preimage_map(lines, &pairs)?;

    let top = ceil_log2(size);
    let mut buckets: Vec<DyadicBucket> = (0..=top)
        .map(|index| DyadicBucket {
            index,
            upper: 1u64 << index,
            line_count: 0,
            n_i: 0,
        })
        .collect();
    for ps in preimages.entries.values() {
        let b = &mut buckets[dyadic_index(ps.len())];
        b.line_count += 1;
        b.n_i += ps.len();
    }
    let total: usize = buckets.iter().map(|b| b.n_i).sum();
    if total != pairs.len() {
        return Err(Error::Assertion(format!(
            "bucket totals {total} differ from {} rich pairs",
            pairs.len()
        )));
    }

    let sf = size as f64;
    let threshold = sf * sf * nf.powf(-2.0 * delta) / (2.0 * sf.log2());
    let chosen_i = buckets
        .iter()
        .rev()
        .find(|b| b.n_i > 0 && b.n_i as f64 >= threshold)
        .map(|b| b.index);
    let fallback_used = chosen_i.is_none();
    let selected_i = chosen_i.or_else(|| {
        buckets
            .iter()
            .filter(|b| b.n_i > 0)
            .max_by_key(|b| (b.n_i, b.index))
            .map(|b| b.index)
    });
    let product: LineSet = match selected_i {
        Some(i) => preimages
            .entries
            .iter()
            .filter(|(_, ps)| dyadic_index(ps.len()) == i)
            .map(|(l, _)| l.clone())
            .collect(),
        None => LineSet::default(),
    };
    for l in &product {
        let rich = richness(l, a);
        if rich < richness_threshold {
            return Err(Error::Assertion(format!(
                "product line {l:?} has richness {rich} below {richness_threshold}"
            )));
        }
    }
    Ok(DyadicResult {
        n,
        input_size: size,
        delta,
        richness_threshold,
        rich_pairs: pairs.len(),
        buckets,
        threshold,
        chosen_i,
        selected_i,
        fallback_used,
        product,
        preimages,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    /// Level `j` turns `L^{*j}` into `L^{*(j+1)}`.
    pub level: usize,
    /// Effective `δ` at this level, `2^(j-1) δ`.
    pub delta: f64,
    pub input_size: usize,
    pub product_size: usize,
    pub growth_ratio: f64,
    /// `n^(5α)`, when `α` is given.
    pub growth_bound: Option<f64>,
    pub stop_rule_fired: bool,
    pub min_richness: Option<usize>,
    pub dyadic: DyadicResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    DepthReached,
    /// `|L^{*(j+1)}| < |L^{*j}| n^(5α)`.
    GrowthStalled,
    /// The next level's richness threshold would fall below 2.
    RichnessExhausted,
    /// Fewer than two lines left to combine.
    ProductTooSmall,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IteratedStar {
    pub levels: Vec<LevelReport>,
    pub stop: StopReason,
}

impl IteratedStar {
    pub fn final_product(&self) -> Option<&LineSet> {
        self.levels.last().map(|l| &l.dyadic.product)
    }
}

/// Richness threshold `⌈n^(1 - 2^j δ)/2⌉` of level `j`.
pub fn level_threshold(n: usize, delta: f64, level: usize) -> f64 {
    (n as f64).powf(1.0 - 2f64.powi(level as i32) * delta) / 2.0
}

/// Iterates `L^{*(j+1)} = L^{*j} * L^{*j}` up to `depth` levels, every level
/// recomputed from the previous product (the operation is not associative).
///
/// Level `j` runs the dyadic product with `δ_j = 2^(j-1) δ`. Iteration stops
/// at `depth`, when the growth rule `|L^{*(j+1)}| < |L^{*j}| n^(5α)` fires
/// (only if `alpha` is given), when the next threshold drops below 2, or
/// when fewer than two lines remain. An exhausted threshold at the first
/// level is an error.
pub fn iterated_star(
    lines: &LineSet,
    a: &GroundSet,
    delta: f64,
    depth: usize,
    alpha: Option<f64>,
) -> Result<IteratedStar> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    let n = a.len();
    let growth_bound = alpha.map(|al| (n as f64).powf(5.0 * al));
    let mut levels = Vec::new();
    let mut current = lines.clone();
    for level in 1..=depth {
        let t = level_threshold(n, delta, level);
        if ceil_threshold(t) < 2 {
            if level == 1 {
                return Err(Error::RichnessExhausted { level, threshold: t });
            }
            return Ok(IteratedStar {
                levels,
                stop: StopReason::RichnessExhausted,
            });
        }
        if current.len() < 2 {
            if level == 1 {
                return Err(Error::Precondition("need at least 2 lines".into()));
            }
            return Ok(IteratedStar {
                levels,
                stop: StopReason::ProductTooSmall,
            });
        }
        let level_delta = delta * 2f64.powi(level as i32 - 1);
        let dyadic = dyadic_star_product(&current, a, level_delta)?;
        let product_size = dyadic.product.len();
        let growth_ratio = product_size as f64 / current.len() as f64;
        let stop_rule_fired = growth_bound
            .map(|g| (product_size as f64) < current.len() as f64 * g)
            .unwrap_or(false);
        let min_richness = dyadic.product.iter().map(|l| richness(l, a)).min();
        let next = dyadic.product.clone();
        levels.push(LevelReport {
            level,
            delta: level_delta,
            input_size: current.len(),
            product_size,
            growth_ratio,
            growth_bound,
            stop_rule_fired,
            min_richness,
            dyadic,
        });
        if stop_rule_fired {
            return Ok(IteratedStar {
                levels,
                stop: StopReason::GrowthStalled,
            });
        }
        current = next;
    }
    Ok(IteratedStar {
        levels,
        stop: StopReason::DepthReached,
    })
}

/// Moves the grid by `-x0` on both axes: `l` on `A × A` becomes
/// `y = λx + λx₀ + b − x₀` on `(A − x₀) × (A − x₀)`.
pub fn translate_line(l: &Line, x0: &Rational) -> Line {
    let intercept = l.slope() * x0 + l.intercept() - x0;
    Line::new(l.slope().clone(), intercept).expect("slope unchanged")
}

/// Translates a star family centred at `(x₀, y₀)` so that its centre lands
/// on the y-axis at `(0, y₀ − x₀)`.
pub fn translate_star_family(family: &[Line], center: &PointR) -> (Vec<Line>, PointR) {
    let moved = family.iter().map(|l| translate_line(l, &center.x)).collect();
    (moved, PointR::new(Rational::zero(), &center.y - &center.x))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thm4Params {
    pub epsilon: f64,
    pub alpha: f64,
    pub delta: f64,
    pub star_bound: usize,
}

/// One structural conclusion: an observed value against its bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conclusion {
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

impl Conclusion {
    fn new(value: usize, bound: f64) -> Self {
        Conclusion {
            value: value as f64,
            bound,
            holds: value as f64 <= bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thm4Conclusions {
    /// Largest parallel family vs `2|L*L| n^(2δ) / |L|`.
    pub i: Conclusion,
    /// Largest star family vs `2C|L*L| n^(2δ) / |L|`.
    pub ii: Conclusion,
    /// Number of slopes with `|P_λ| ≥ ⌈n^α⌉` vs `⌈n^α⌉`.
    pub iii: Conclusion,
    /// Number of points with `|S_p| ≥ ⌈n^α⌉` vs `⌈n^α⌉`.
    pub iv: Conclusion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thm4Hypotheses {
    pub near_general_position: GpReport,
    pub enough_lines: bool,
    pub all_rich: bool,
    pub parameter_order: bool,
}

/// Structural diagnostics for `L * L`. These are reported, never raised:
/// the bounds are asymptotic and may fail on small instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thm4Report {
    pub params: Thm4Params,
    pub product_size: usize,
    pub chosen_i: Option<usize>,
    pub fallback: bool,
    pub hypotheses: Thm4Hypotheses,
    pub thm4: Thm4Conclusions,
    pub max_parallel_family: usize,
    pub max_star_family: usize,
    pub family_threshold: usize,
}

pub fn thm4_diagnostics(lines: &LineSet, a: &GroundSet, params: &Thm4Params) -> Result<Thm4Report> {
    let dyadic = dyadic_star_product(lines, a, params.delta)?;
    thm4_from_product(lines, a, params, &dyadic)
}

/// As [`thm4_diagnostics`] for an already computed product.
pub fn thm4_from_product(
    lines: &LineSet,
    a: &GroundSet,
    params: &Thm4Params,
    dyadic: &DyadicResult,
) -> Result<Thm4Report> {
    let n = a.len() as f64;
    let product = &dyadic.product;
    let required = ceil_threshold(n.powf(1.0 - params.delta));
    let hypotheses = Thm4Hypotheses {
        near_general_position: check_near_general_position(lines, params.star_bound),
        enough_lines: lines.len() as f64 >= n.powf(params.epsilon),
        all_rich: lines.iter().all(|l| richness(l, a) >= required),
        parameter_order: 0.0 < params.delta
            && params.delta < params.alpha
            && params.alpha < params.epsilon
            && params.epsilon < 1.0,
    };
    let slopes = group_by_slope(product);
    let stars = concurrency_map(product);
    let max_parallel_family = slopes.values().map(Vec::len).max().unwrap_or(0);
    let max_star_family = stars.values().map(BTreeSet::len).max().unwrap_or(0);
    let family_threshold = ceil_threshold(n.powf(params.alpha));
    let scale = 2.0 * product.len() as f64 * n.powf(2.0 * params.delta) / lines.len() as f64;
    let thm4 = Thm4Conclusions {
        i: Conclusion::new(max_parallel_family, scale),
        ii: Conclusion::new(max_star_family, params.star_bound as f64 * scale),
        iii: Conclusion::new(
            slopes.values().filter(|f| f.len() >= family_threshold).count(),
            family_threshold as f64,
        ),
        iv: Conclusion::new(
            stars.values().filter(|f| f.len() >= family_threshold).count(),
            family_threshold as f64,
        ),
    };
    Ok(Thm4Report {
        params: params.clone(),
        product_size: product.len(),
        chosen_i: dyadic.chosen_i,
        fallback: dyadic.fallback_used,
        hypotheses,
        thm4,
        max_parallel_family,
        max_star_family,
        family_threshold,
    })
}

/// Which product a commutator vertex came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `f * g` with `f, g ∈ L`.
    Star,
    /// `g⁻¹ * f⁻¹`.
    InverseStar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub line: Line,
    pub sides: BTreeSet<Side>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    /// Vertex indices with `u <= v`; `u == v` is a self-loop.
    pub u: usize,
    pub v: usize,
    /// Ordered index pairs `(f, g)` into the source set producing this edge.
    pub provenance: Vec<(usize, usize)>,
}

/// Graph on `L*L ∪ L⁻¹*L⁻¹` joining `f * g` and `g⁻¹ * f⁻¹`.
///
/// A line produced on both sides is a single vertex carrying both side
/// tags; an edge whose two ends are the same line (`f` and `g` commute) is
/// a self-loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorGraph {
    pub threshold: usize,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl CommutatorGraph {
    pub fn vertex_index(&self, l: &Line) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.line.cmp(l)).ok()
    }

    /// Edge endpoints are parallel and every provenance pair regenerates
    /// its edge.
    pub fn validate(&self, source: &LineSet) -> Result<()> {
        let ls = source.lines();
        for e in &self.edges {
            let (u, v) = (&self.vertices[e.u].line, &self.vertices[e.v].line);
            if u.slope() != v.slope() {
                return Err(Error::Assertion(format!("edge {u:?} - {v:?} joins distinct slopes")));
            }
            for &(f, g) in &e.provenance {
                let a = ls[f].star(&ls[g]);
                let b = ls[g].invert().star(&ls[f].invert());
                let ends = if a <= b { (a, b) } else { (b, a) };
                if (&ends.0, &ends.1) != (u, v) {
                    return Err(Error::Assertion(format!("provenance ({f}, {g}) does not produce its edge")));
                }
            }
        }
        Ok(())
    }
}

/// Builds the commutator graph with vertex richness threshold `⌈n^(1-5δ)⌉`.
pub fn commutator_graph(lines: &LineSet, a: &GroundSet, delta: f64) -> Result<CommutatorGraph> {
    if lines.len() < 2 {
        return Err(Error::Precondition(format!(
            "commutator graph needs at least 2 lines, got {}",
            lines.len()
        )));
    }
    let threshold = ceil_threshold((a.len() as f64).powf(1.0 - 5.0 * delta));
    let ls = lines.lines();
    let inverses: Vec<Line> = ls.iter().map(Line::invert).collect();
    let raw: Vec<(usize, usize, Line, Line)> = (0..ls.len())
        .into_par_iter()
        .flat_map_iter(|f| {
            let inverses = &inverses;
            (0..ls.len()).filter_map(move |g| {
                let u = ls[f].star(&ls[g]);
                let v = inverses[g].star(&inverses[f]);
                (richness(&u, a) >= threshold && richness(&v, a) >= threshold).then_some((f, g, u, v))
            })
        })
        .collect();

    let mut sides: BTreeMap<Line, BTreeSet<Side>> = BTreeMap::new();
    for (_, _, u, v) in &raw {
        sides.entry(u.clone()).or_default().insert(Side::Star);
        sides.entry(v.clone()).or_default().insert(Side::InverseStar);
    }
    let vertices: Vec<Vertex> = sides
        .into_iter()
        .map(|(line, sides)| Vertex { line, sides })
        .collect();
    let index: HashMap<&Line, usize> = vertices.iter().enumerate().map(|(i, v)| (&v.line, i)).collect();
    let mut edges: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (f, g, u, v) in &raw {
        let (x, y) = (index[u], index[v]);
        edges.entry((x.min(y), x.max(y))).or_default().push((*f, *g));
    }
    let graph = CommutatorGraph {
        threshold,
        vertices,
        edges: edges
            .into_iter()
            .map(|((u, v), provenance)| Edge { u, v, provenance })
            .collect(),
    };
    graph.validate(lines)?;
    Ok(graph)
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    /// Components as sorted vertex-index lists, ordered by smallest member.
    pub components: Vec<Vec<usize>>,
    pub max_component: usize,
    pub slope_classes: usize,
}

/// Connected components of a commutator graph. Every component must lie in
/// a single slope class; anything else is an assertion failure.
pub fn component_analysis(graph: &CommutatorGraph) -> Result<ComponentReport> {
    let mut uf = UnionFind::new(graph.vertices.len());
    for e in &graph.edges {
        uf.union(e.u, e.v);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..graph.vertices.len() {
        groups.entry(uf.find(v)).or_default().push(v);
    }
    let mut components: Vec<Vec<usize>> = groups.into_values().collect();
    components.sort();
    for comp in &components {
        let slope = graph.vertices[comp[0]].line.slope();
        if comp.iter().any(|&v| graph.vertices[v].line.slope() != slope) {
            return Err(Error::Assertion(format!(
                "component {comp:?} spans several slopes"
            )));
        }
    }
    let slope_classes = group_by_slope(graph.vertices.iter().map(|v| &v.line)).len();
    Ok(ComponentReport {
        max_component: components.iter().map(Vec::len).max().unwrap_or(0),
        components,
        slope_classes,
    })
}

/// Slopes of one level of a star family's iterated rich products.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitLevel {
    /// `j` in `M_j`, the slopes of `S^{*(j+2)}`.
    pub j: usize,
    pub threshold: usize,
    pub lines: usize,
    pub slopes: Vec<Rational>,
    pub reciprocal_closed: bool,
    /// `M_{j-1} ⊆ M_j`; always true at `j = 0`.
    pub contains_previous: bool,
}

/// Slope sets `M_j` of the rich star products `S^{*2}, S^{*3}, ...` of a
/// star family `S`, each level keeping all products of the previous level
/// that meet `⌈n^(1-2^(j+1)δ)/2⌉` grid points. Stops early once fewer than
/// two lines survive or the threshold drops below 2.
pub fn slope_orbits(family: &LineSet, a: &GroundSet, delta: f64, levels: usize) -> Vec<OrbitLevel> {
    let n = a.len();
    let mut out: Vec<OrbitLevel> = Vec::new();
    let mut current = family.clone();
    for j in 0..levels {
        let threshold = ceil_threshold(level_threshold(n, delta, j + 1));
        if threshold < 2 || current.len() < 2 {
            break;
        }
        let pairs = rich_star_pairs(&current, a, threshold);
        let ls = current.lines();
        let next: LineSet = pairs.iter().map(|&(f, g)| ls[f].star(&ls[g])).collect();
        let slopes: BTreeSet<Rational> = next.iter().map(|l| l.slope().clone()).collect();
        let reciprocal_closed = slopes
            .iter()
            .all(|s| slopes.contains(&s.recip().expect("slopes are nonzero")));
        let contains_previous = out
            .last()
            .is_none_or(|prev| prev.slopes.iter().all(|s| slopes.contains(s)));
        out.push(OrbitLevel {
            j,
            threshold,
            lines: next.len(),
            slopes: slopes.into_iter().collect(),
            reciprocal_closed,
            contains_previous,
        });
        current = next;
    }
    out
}
