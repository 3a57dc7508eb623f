//! Sumsets, product and ratio sets, energies and small-doubling searches.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GroundSet;
use crate::rational::Rational;

/// A finite, possibly empty, sorted set of rationals. Serialized like a
/// ground set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "RawNumberSet")]
pub struct NumberSet {
    elements: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawNumberSet {
    elements: Vec<Rational>,
}

impl From<RawNumberSet> for NumberSet {
    fn from(raw: RawNumberSet) -> Self {
        NumberSet::new(raw.elements)
    }
}

impl FromIterator<Rational> for NumberSet {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        let set: BTreeSet<Rational> = iter.into_iter().collect();
        NumberSet {
            elements: set.into_iter().collect(),
        }
    }
}

impl From<&GroundSet> for NumberSet {
    fn from(a: &GroundSet) -> Self {
        NumberSet {
            elements: a.elements().to_vec(),
        }
    }
}

impl NumberSet {
    pub fn new(elements: Vec<Rational>) -> Self {
        elements.into_iter().collect()
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        xs.iter().map(|&x| Rational::from(x)).collect()
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

    pub fn has_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    /// True for sets of size ≤ 2 and for sets with a constant gap.
    pub fn is_arithmetic_progression(&self) -> bool {
        let e = &self.elements;
        if e.len() <= 2 {
            return true;
        }
        let d = &e[1] - &e[0];
        e.windows(2).all(|w| &w[1] - &w[0] == d)
    }
}

fn combine(a: &NumberSet, b: &NumberSet, op: impl Fn(&Rational, &Rational) -> Rational) -> NumberSet {
    a.elements()
        .iter()
        .flat_map(|x| b.elements().iter().map(|y| op(x, y)).collect::<Vec<_>>())
        .collect()
}

/// `A + B`.
pub fn sumset(a: &NumberSet, b: &NumberSet) -> NumberSet {
    combine(a, b, |x, y| x + y)
}

/// `A - B`.
pub fn difference_set(a: &NumberSet, b: &NumberSet) -> NumberSet {
    combine(a, b, |x, y| x - y)
}

/// `A · B`.
pub fn product_set(a: &NumberSet, b: &NumberSet) -> NumberSet {
    combine(a, b, |x, y| x * y)
}

/// `A / B`; fails if `0 ∈ B`.
pub fn ratio_set(a: &NumberSet, b: &NumberSet) -> Result<NumberSet> {
    if b.has_zero() {
        return Err(Error::ZeroDivisor);
    }
    Ok(combine(a, b, |x, y| x / y))
}

/// `kA = (k-1)A + A`, with `1A = A`.
pub fn iterated_sumset(a: &NumberSet, k: usize) -> Result<NumberSet> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let mut acc = a.clone();
    for _ in 1..k {
        acc = sumset(&acc, a);
    }
    Ok(acc)
}

fn energy_by_histogram(a: &NumberSet, b: &NumberSet, op: impl Fn(&Rational, &Rational) -> Rational) -> u64 {
    let mut hist: HashMap<Rational, u64> = HashMap::new();
    for x in a.elements() {
        for y in b.elements() {
            *hist.entry(op(x, y)).or_insert(0) += 1;
        }
    }
    hist.values().map(|r| r * r).sum()
}

/// Number of quadruples `(a, b, a', b')` with `a + b = a' + b'`, as the sum
/// of squared representation counts.
pub fn additive_energy(a: &NumberSet, b: &NumberSet) -> u64 {
    let e = energy_by_histogram(a, b, |x, y| x + y);
    if cfg!(debug_assertions) && a.len() * b.len() <= 400 {
        debug_assert_eq!(e, additive_energy_quadruples(a, b));
    }
    e
}

/// Number of quadruples with `a·b = a'·b'`.
pub fn multiplicative_energy(a: &NumberSet, b: &NumberSet) -> u64 {
    energy_by_histogram(a, b, |x, y| x * y)
}

/// Direct enumeration of all `(|A||B|)²` quadruples. Brute-force reference
/// for [`additive_energy`]; quartic, so only for small sets.
pub fn additive_energy_quadruples(a: &NumberSet, b: &NumberSet) -> u64 {
    let (ae, be) = (a.elements(), b.elements());
    let mut count = 0u64;
    for x in ae {
        for y in be {
            let s = x + y;
            for x2 in ae {
                for y2 in be {
                    if x2 + y2 == s {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Same-arity tuples of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleFamily {
    arity: usize,
    tuples: Vec<Vec<Rational>>,
}

impl TupleFamily {
    pub fn new(arity: usize, tuples: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(bad) = tuples.iter().find(|t| t.len() != arity) {
            return Err(Error::Precondition(format!(
                "tuple of arity {} in a family of arity {arity}",
                bad.len()
            )));
        }
        let set: BTreeSet<Vec<Rational>> = tuples.into_iter().collect();
        Ok(TupleFamily {
            arity,
            tuples: set.into_iter().collect(),
        })
    }

    /// The full product `A^k`.
    pub fn full_product(a: &NumberSet, k: usize) -> Self {
        let mut tuples: Vec<Vec<Rational>> = vec![Vec::new()];
        for _ in 0..k {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    a.elements().iter().map(move |x| {
                        let mut t = t.clone();
                        t.push(x.clone());
                        t
                    })
                })
                .collect();
        }
        TupleFamily { arity: k, tuples }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// Coordinate sums `{a₁ + ... + a_k}` over the family.
pub fn sigma_set(s: &TupleFamily) -> NumberSet {
    s.tuples.iter().map(|t| t.iter().cloned().sum()).collect()
}

/// Size guard for [`small_doubling_subset`].
pub const SMALL_DOUBLING_LIMIT: usize = 18;

/// Largest `A' ⊆ A` with `|A' + A'| ≤ K|A'|` and `|A'| ≥ min_size`, ties broken
/// by lexicographic order of element positions. Exhaustive, so `|A|` is
/// capped at [`SMALL_DOUBLING_LIMIT`].
pub fn small_doubling_subset(a: &NumberSet, k: &Rational, min_size: usize) -> Result<Option<NumberSet>> {
    let m = a.len();
    if m > SMALL_DOUBLING_LIMIT {
        return Err(Error::TooLarge {
            what: "set",
            got: m,
            limit: SMALL_DOUBLING_LIMIT,
        });
    }
    if min_size > m {
        return Ok(None);
    }
    let e = a.elements();
    // Pairwise sums interned as small ids so each subset is scored with a
    // stamp array instead of rational hashing.
    let mut ids: HashMap<Rational, usize> = HashMap::new();
    let mut sum_id = vec![vec![0usize; m]; m];
    for i in 0..m {
        for j in i..m {
            let next = ids.len();
            let id = *ids.entry(&e[i] + &e[j]).or_insert(next);
            sum_id[i][j] = id;
            sum_id[j][i] = id;
        }
    }
    let mut stamp = vec![usize::MAX; ids.len()];
    let mut epoch = 0usize;
    for size in (min_size.max(1)..=m).rev() {
        let limit = k * &Rational::from(size);
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            epoch += 1;
            let mut distinct = 0usize;
            for (p, &i) in idx.iter().enumerate() {
                for &j in &idx[p..] {
                    let id = sum_id[i][j];
                    if stamp[id] != epoch {
                        stamp[id] = epoch;
                        distinct += 1;
                    }
                }
            }
            if Rational::from(distinct) <= limit {
                return Ok(Some(idx.iter().map(|&i| e[i].clone()).collect()));
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
    }
    Ok(None)
}

/// Advances `idx` to the next `idx.len()`-combination of `0..m` in
/// lexicographic order; false after the last one.
fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < m - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlunneckeRow {
    pub n: usize,
    pub size: usize,
    /// `K^n |A|`.
    pub bound: Rational,
    /// `K^n |A| − |nA|`.
    pub margin: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlunneckeReport {
    /// `|2A| / |A|`.
    pub k: Rational,
    pub rows: Vec<PlunneckeRow>,
}

/// Sumset growth guard for [`plunnecke_check`].
pub const PLUNNECKE_LIMIT: usize = 6;

/// Checks `|nA| ≤ K^n |A|` with `K = |2A|/|A|` for `n = 1..=n_max`. The
/// inequality is a theorem, so a failing row is an assertion error.
pub fn plunnecke_check(a: &NumberSet, n_max: usize) -> Result<PlunneckeReport> {
    if n_max > PLUNNECKE_LIMIT {
        return Err(Error::TooLarge {
            what: "n_max",
            got: n_max,
            limit: PLUNNECKE_LIMIT,
        });
    }
    if a.is_empty() {
        return Err(Error::Precondition("set must be nonempty".into()));
    }
    let size_a = Rational::from(a.len());
    let k = Rational::from(sumset(a, a).len()) / &size_a;
    let mut rows = Vec::with_capacity(n_max);
    let mut acc = a.clone();
    for n in 1..=n_max {
        if n > 1 {
            acc = sumset(&acc, a);
        }
        let bound = k.pow(n as i32) * &size_a;
        let margin = &bound - Rational::from(acc.len());
        let holds = !margin.is_negative();
        if !holds {
            return Err(Error::Assertion(format!(
                "|{n}A| = {} exceeds K^n|A| = {bound}",
                acc.len()
            )));
        }
        rows.push(PlunneckeRow {
            n,
            size: acc.len(),
            bound,
            margin,
            holds,
        });
    }
    Ok(PlunneckeReport { k, rows })
}
