//! Ground sets, richness counting and k-rich line enumeration on `A × A`.

use std::collections::{BTreeMap, HashMap, HashSet};

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::line::{Line, PointR};
use crate::rational::Rational;

/// Slack subtracted before taking the ceiling of a real-valued threshold,
/// so that values such as `16^0.75` that land a few ulps above an integer
/// are not pushed to the next integer.
const CEIL_SLACK: f64 = 1e-9;

/// Integer threshold for a real-valued bound such as `n^(1-δ)`.
///
/// An integer count `c` satisfies `c >= x` exactly when `c >= ceil_threshold(x)`,
/// up to the fixed float slack above. Negative inputs map to zero.
pub fn ceil_threshold(x: f64) -> usize {
    if x.is_nan() || x <= 0.0 {
        return 0;
    }
    (x - CEIL_SLACK * x.max(1.0)).ceil().max(0.0) as usize
}

/// A finite set `A` of rationals, kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGroundSet")]
pub struct GroundSet {
    elements: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawGroundSet {
    elements: Vec<Rational>,
}

impl TryFrom<RawGroundSet> for GroundSet {
    type Error = Error;
    fn try_from(raw: RawGroundSet) -> Result<Self> {
        GroundSet::new(raw.elements)
    }
}

impl GroundSet {
    pub fn new(mut elements: Vec<Rational>) -> Result<Self> {
        elements.sort();
        elements.dedup();
        if elements.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        Ok(GroundSet { elements })
    }

    /// `{lo, lo+1, ..., hi}`.
    pub fn range(lo: i64, hi: i64) -> Result<Self> {
        GroundSet::new((lo..=hi).map(Rational::from).collect())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// `A - x0`.
    pub fn translate(&self, x0: &Rational) -> GroundSet {
        GroundSet {
            elements: self.elements.iter().map(|a| a - x0).collect(),
        }
    }

    /// All points of `A × A`, row-major in x.
    pub fn grid_points(&self) -> Vec<PointR> {
        let mut pts = Vec::with_capacity(self.len() * self.len());
        for x in &self.elements {
            for y in &self.elements {
                pts.push(PointR::new(x.clone(), y.clone()));
            }
        }
        pts
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RichLineRecord {
    #[serde(flatten)]
    pub line: Line,
    pub richness: usize,
}

/// Number of grid points of `A × A` on `l`.
pub fn richness(l: &Line, a: &GroundSet) -> usize {
    a.elements().iter().filter(|x| a.contains(&l.eval(x))).count()
}

/// `{x ∈ A : l(x) ∈ A}`.
pub fn x_trace(l: &Line, a: &GroundSet) -> Vec<Rational> {
    a.elements()
        .iter()
        .filter(|x| a.contains(&l.eval(x)))
        .cloned()
        .collect()
}

/// `{y ∈ A : l⁻¹(y) ∈ A}`, i.e. the x-trace of the inverse line.
pub fn y_trace(l: &Line, a: &GroundSet) -> Vec<Rational> {
    x_trace(&l.invert(), a)
}

/// Exact count of incident (point, line) pairs. Inputs are assumed
/// deduplicated.
pub fn count_incidences(points: &[PointR], lines: &[Line]) -> usize {
    let mut by_x: HashMap<&Rational, HashSet<&Rational>> = HashMap::new();
    for p in points {
        by_x.entry(&p.x).or_default().insert(&p.y);
    }
    lines
        .iter()
        .map(|l| {
            by_x.iter()
                .filter(|(x, ys)| ys.contains(&l.eval(x)))
                .count()
        })
        .sum()
}

/// All lines (nonzero slope) meeting at least `k` points of `A × A`, with
/// their exact richness, sorted by slope then intercept.
pub fn enumerate_rich(a: &GroundSet, k: usize) -> Result<Vec<RichLineRecord>> {
    enumerate_rich_with_threads(a, k, 1)
}

/// As [`enumerate_rich`], partitioning anchor columns over `threads`
/// workers. The output does not depend on the thread count.
pub fn enumerate_rich_with_threads(
    a: &GroundSet,
    k: usize,
    threads: usize,
) -> Result<Vec<RichLineRecord>> {
    if k < 2 {
        return Err(Error::RichnessTooSmall(k));
    }
    if k > a.len() {
        return Ok(Vec::new());
    }
    let records = match ScaledGrid::new(a) {
        Some(grid) => run_partitioned(threads, || grid.enumerate(k))?,
        None => run_partitioned(threads, || enumerate_rational(a, k))?,
    };
    Ok(records)
}

fn run_partitioned<F>(threads: usize, job: F) -> Result<Vec<RichLineRecord>>
where
    F: FnOnce() -> Vec<RichLineRecord> + Send,
{
    if threads <= 1 {
        // A one-thread pool keeps `par_iter` below strictly sequential.
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .map_err(|e| Error::Precondition(e.to_string()))?;
        return Ok(pool.install(job));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Precondition(e.to_string()))?;
    Ok(pool.install(job))
}

/// `A` scaled by the lcm of its denominators so every element is a small
/// integer. Scaling both axes by the same factor preserves slopes and
/// richness, and lets the pair scan run on machine integers.
struct ScaledGrid {
    scale: BigInt,
    values: Vec<i64>,
}

/// Scaled magnitudes stay below this so that `q·Y − p·X` fits in an `i128`.
const SCALED_LIMIT: i64 = 1 << 40;

impl ScaledGrid {
    fn new(a: &GroundSet) -> Option<Self> {
        let scale = a
            .elements()
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut values = Vec::with_capacity(a.len());
        for x in a.elements() {
            let v = (x.numer() * (&scale / x.denom())).to_i64()?;
            if v.abs() >= SCALED_LIMIT {
                return None;
            }
            values.push(v);
        }
        Some(ScaledGrid { scale, values })
    }

    /// Canonical key of the line through anchor `(x1, y1)` with reduced
    /// direction `(p, q)`, `q > 0`: the line is `q·Y = p·X + c`.
    fn key(x1: i64, y1: i64, p: i64, q: i64) -> (i64, i64, i128) {
        let c = q as i128 * y1 as i128 - p as i128 * x1 as i128;
        (p, q, c)
    }

    fn richness_of(&self, (p, q, c): (i64, i64, i128)) -> usize {
        self.values
            .iter()
            .filter(|&&x| {
                let t = p as i128 * x as i128 + c;
                if t % q as i128 != 0 {
                    return false;
                }
                let y = t / q as i128;
                match i64::try_from(y) {
                    Ok(y) => self.values.binary_search(&y).is_ok(),
                    Err(_) => false,
                }
            })
            .count()
    }

    fn to_line(&self, (p, q, c): (i64, i64, i128)) -> Line {
        let slope = Rational::new(p, q).expect("q > 0");
        let intercept = Rational::new(BigInt::from(c), BigInt::from(q) * &self.scale)
            .expect("nonzero scale");
        Line::new(slope, intercept).expect("pair scan only yields nonzero slopes")
    }

    /// Each k-rich line has a leftmost grid point that sees the other
    /// `richness - 1` points to its right in one reduced direction; only
    /// anchors in the first `n - k + 1` columns can be leftmost.
    fn enumerate(&self, k: usize) -> Vec<RichLineRecord> {
        let n = self.values.len();
        let vals = &self.values;
        let anchors: Vec<(usize, usize)> = (0..=n - k)
            .flat_map(|i| (0..n).map(move |a| (i, a)))
            .collect();
        let keys: Vec<(i64, i64, i128)> = anchors
            .par_iter()
            .fold(
                || (HashMap::<(i64, i64), u32>::new(), Vec::new()),
                |(mut dirs, mut found), &(i, a)| {
                    dirs.clear();
                    let (x1, y1) = (vals[i], vals[a]);
                    for &x2 in &vals[i + 1..] {
                        let dx = x2 - x1;
                        for (b, &y2) in vals.iter().enumerate() {
                            if b == a {
                                continue;
                            }
                            let dy = y2 - y1;
                            let g = dx.gcd(&dy);
                            *dirs.entry((dy / g, dx / g)).or_insert(0) += 1;
                        }
                    }
                    for (&(p, q), &count) in &dirs {
                        if count as usize + 1 >= k {
                            found.push(Self::key(x1, y1, p, q));
                        }
                    }
                    (dirs, found)
                },
            )
            .map(|(_, found)| found)
            .reduce(Vec::new, |mut acc, mut more| {
                acc.append(&mut more);
                acc
            });
        let unique: HashSet<(i64, i64, i128)> = keys.into_iter().collect();
        let mut records: Vec<RichLineRecord> = unique
            .into_par_iter()
            .filter_map(|key| {
                let richness = self.richness_of(key);
                (richness >= k).then(|| RichLineRecord {
                    line: self.to_line(key),
                    richness,
                })
            })
            .collect();
        records.sort();
        records
    }
}

/// Fallback for ground sets whose scaled form overflows machine integers.
fn enumerate_rational(a: &GroundSet, k: usize) -> Vec<RichLineRecord> {
    let xs = a.elements();
    let n = xs.len();
    let anchors: Vec<(usize, usize)> = (0..=n - k)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .collect();
    let found: BTreeMap<Line, ()> = anchors
        .par_iter()
        .flat_map_iter(|&(i, ai)| {
            let anchor = PointR::new(xs[i].clone(), xs[ai].clone());
            let mut dirs: HashMap<Rational, u32> = HashMap::new();
            for x2 in &xs[i + 1..] {
                let dx = x2 - &anchor.x;
                for (b, y2) in xs.iter().enumerate() {
                    if b == ai {
                        continue;
                    }
                    *dirs.entry((y2 - &anchor.y) / &dx).or_insert(0) += 1;
                }
            }
            dirs.into_iter()
                .filter(|&(_, c)| c as usize + 1 >= k)
                .map(|(slope, _)| {
                    let intercept = &anchor.y - &slope * &anchor.x;
                    Line::new(slope, intercept).expect("nonzero slope")
                })
                .collect::<Vec<_>>()
        })
        .map(|l| (l, ()))
        .collect();
    let mut records: Vec<RichLineRecord> = found
        .into_keys()
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter_map(|line| {
            let richness = richness(&line, a);
            (richness >= k).then_some(RichLineRecord { line, richness })
        })
        .collect();
    records.sort();
    records
}

/// Elementary pair-count sanity check on the number of k-rich lines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub count: usize,
    /// `C(n², 2) / C(k, 2)`, exact.
    pub pair_bound: Rational,
    /// `max(n⁴/k³, n²/k)`. Shape only: the incidence theorem's constant is
    /// unspecified, so this value is never asserted.
    pub st_shape: f64,
    pub holds: bool,
}

fn choose2(m: &BigInt) -> BigInt {
    m * (m - 1) / 2
}

/// Every k-rich line is determined by any two of its ≥ k points, and two
/// points determine at most one line, so `count · C(k,2) ≤ C(n²,2)`.
pub fn rich_count_bound_check(a: &GroundSet, k: usize) -> Result<BoundReport> {
    let count = enumerate_rich(a, k)?.len();
    let report = bound_report(a.len(), k, count)?;
    if !report.holds {
        return Err(Error::Assertion(format!(
            "{} lines are {k}-rich but the pair bound is {}",
            count, report.pair_bound
        )));
    }
    Ok(report)
}

/// The bound report for an already-known count.
pub fn bound_report(n: usize, k: usize, count: usize) -> Result<BoundReport> {
    if k < 2 {
        return Err(Error::RichnessTooSmall(k));
    }
    let n_big = BigInt::from(n);
    let pairs = choose2(&(&n_big * &n_big));
    let per_line = choose2(&BigInt::from(k));
    let pair_bound = Rational::new(pairs, per_line)?;
    let holds = Rational::from(count) <= pair_bound;
    let (nf, kf) = (n as f64, k as f64);
    let st_shape = (nf.powi(4) / kf.powi(3)).max(nf * nf / kf);
    Ok(BoundReport {
        n,
        k,
        count,
        pair_bound,
        st_shape,
        holds,
    })
}
