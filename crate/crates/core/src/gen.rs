//! Seeded instance generators for ground sets, line sets, set systems and
//! matrices.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::Rng;

use crate::additive::NumberSet;
use crate::error::{Error, Result};
use crate::families::LineSet;
use crate::grid::{ceil_threshold, enumerate_rich, GroundSet};
use crate::lemmas::{DegreeMatrix, SetSystem};
use crate::line::{Line, PointR};
use crate::rational::Rational;

/// `{a₀ + i·d : 0 ≤ i < n}`.
pub fn ap_set(n: usize, a0: &Rational, d: &Rational) -> Result<GroundSet> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if d.is_zero() && n > 1 {
        return Err(Error::Precondition("common difference must be nonzero".into()));
    }
    GroundSet::new((0..n).map(|i| a0 + d * &Rational::from(i)).collect())
}

/// `{a₀·rⁱ : 0 ≤ i < n}`; zero-free with distinct terms.
pub fn gp_set(n: usize, a0: &Rational, ratio: &Rational) -> Result<GroundSet> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if a0.is_zero() || ratio.is_zero() {
        return Err(Error::Precondition("geometric progressions exclude 0".into()));
    }
    if n > 1 && ratio.abs().is_one() {
        return Err(Error::Precondition("ratio ±1 repeats terms".into()));
    }
    let mut terms = Vec::with_capacity(n);
    let mut t = a0.clone();
    for _ in 0..n {
        terms.push(t.clone());
        t = t * ratio;
    }
    GroundSet::new(terms)
}

/// Draws until `count` distinct values are found, failing after a fixed
/// number of collisions.
fn distinct_values<R: Rng>(rng: &mut R, count: usize, mut draw: impl FnMut(&mut R) -> Rational) -> Result<Vec<Rational>> {
    let retries = 100 * count.max(1) + 1000;
    let mut seen = BTreeSet::new();
    let mut collisions = 0;
    while seen.len() < count {
        if !seen.insert(draw(rng)) {
            collisions += 1;
            if collisions > retries {
                return Err(Error::GenerationExhausted(retries));
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// `n` distinct rationals `p/q` with `|p| ≤ num_bound` and `1 ≤ q ≤ den_bound`.
pub fn random_set<R: Rng>(rng: &mut R, n: usize, num_bound: i64, den_bound: i64) -> Result<GroundSet> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if num_bound < 0 || den_bound < 1 {
        return Err(Error::Precondition("bounds must be nonnegative, denominator at least 1".into()));
    }
    let values = distinct_values(rng, n, |rng| {
        Rational::new(rng.gen_range(-num_bound..=num_bound), rng.gen_range(1..=den_bound)).expect("positive denominator")
    })?;
    GroundSet::new(values)
}

/// A possibly empty number set of at most `max_len` small rationals.
pub fn random_number_set<R: Rng>(rng: &mut R, max_len: usize, num_bound: i64, den_bound: i64) -> NumberSet {
    let len = rng.gen_range(1..=max_len.max(1));
    (0..len)
        .map(|_| Rational::new(rng.gen_range(-num_bound..=num_bound), rng.gen_range(1..=den_bound)).expect("positive denominator"))
        .collect()
}

pub fn random_rational<R: Rng>(rng: &mut R, num_bound: i64, den_bound: i64) -> Rational {
    Rational::new(rng.gen_range(-num_bound..=num_bound), rng.gen_range(1..=den_bound)).expect("positive denominator")
}

pub fn random_line<R: Rng>(rng: &mut R, num_bound: i64, den_bound: i64) -> Line {
    loop {
        let s = random_rational(rng, num_bound, den_bound);
        if !s.is_zero() {
            return Line::new(s, random_rational(rng, num_bound, den_bound)).expect("nonzero slope");
        }
    }
}

/// A grid on which every line of the returned set is `⌈n^(1-δ)⌉`-rich: an
/// arithmetic progression of length `n`, and a seeded sample of its rich
/// lines.
#[derive(Clone, Debug)]
pub struct RichInstance {
    pub set: GroundSet,
    pub lines: LineSet,
    pub delta: f64,
}

pub fn rich_line_instance<R: Rng>(rng: &mut R, max_n: usize, max_delta: f64, max_lines: usize) -> Result<RichInstance> {
    let n = rng.gen_range(8..=max_n.max(8));
    let delta = rng.gen_range(0.05..=max_delta);
    let a0 = Rational::from(rng.gen_range(-10i64..=10));
    let d = Rational::new(rng.gen_range(1i64..=3), rng.gen_range(1i64..=2))?;
    let set = ap_set(n, &a0, &d)?;
    let k = ceil_threshold((n as f64).powf(1.0 - delta)).max(2);
    let all: Vec<Line> = enumerate_rich(&set, k)?.into_iter().map(|r| r.line).collect();
    if all.is_empty() {
        return Err(Error::GenerationExhausted(0));
    }
    let take = rng.gen_range(1..=all.len().min(max_lines.max(1)));
    let idx = sample(rng, all.len(), take);
    Ok(RichInstance {
        set,
        lines: idx.iter().map(|i| all[i].clone()).collect(),
        delta,
    })
}

/// Lines mixing parallel bundles, star bundles through random centers, and
/// scattered lines with random slopes; at most `max_lines` in total.
pub fn random_mixed_lines<R: Rng>(rng: &mut R, max_lines: usize) -> LineSet {
    let mut lines: BTreeSet<Line> = BTreeSet::new();
    let budget = rng.gen_range(1..=max_lines.max(1));
    while lines.len() < budget {
        let room = budget - lines.len();
        match rng.gen_range(0..3) {
            0 => {
                let slope = nonzero(rng, 6, 3);
                for _ in 0..rng.gen_range(1..=room.min(6)) {
                    lines.insert(Line::new(slope.clone(), random_rational(rng, 12, 2)).expect("nonzero slope"));
                }
            }
            1 => {
                let center = PointR::new(random_rational(rng, 8, 2), random_rational(rng, 8, 2));
                for _ in 0..rng.gen_range(1..=room.min(6)) {
                    let slope = nonzero(rng, 6, 3);
                    let intercept = &center.y - &slope * &center.x;
                    lines.insert(Line::new(slope, intercept).expect("nonzero slope"));
                }
            }
            _ => {
                lines.insert(random_line(rng, 20, 4));
            }
        }
    }
    lines.into_iter().take(budget).collect()
}

fn nonzero<R: Rng>(rng: &mut R, num_bound: i64, den_bound: i64) -> Rational {
    loop {
        let v = random_rational(rng, num_bound, den_bound);
        if !v.is_zero() {
            return v;
        }
    }
}

/// A set system on `{1..n}` whose sets all have at least `⌈n^(1-δ)⌉` elements.
pub fn random_set_system<R: Rng>(rng: &mut R, max_n: usize, max_delta: f64, max_k: usize) -> (SetSystem, f64) {
    let n = rng.gen_range(4..=max_n.max(4));
    let delta = rng.gen_range(0.01..=max_delta);
    let k = rng.gen_range(1..=max_k.max(1));
    let min_size = ceil_threshold((n as f64).powf(1.0 - delta)).min(n);
    let sets = (0..k)
        .map(|_| {
            let size = rng.gen_range(min_size..=n);
            sample(rng, n, size).iter().map(|i| i + 1).collect()
        })
        .collect();
    (SetSystem::new(n, sets).expect("elements in range"), delta)
}

/// A `k × N` matrix (`k, N ≤ max_dim`) with entries uniform on a
/// `1/1000` lattice of `[0, L]` and positive total.
pub fn random_degree_matrix<R: Rng>(rng: &mut R, max_dim: usize) -> DegreeMatrix {
    let k = rng.gen_range(1..=max_dim.max(1));
    let n = rng.gen_range(1..=max_dim.max(1));
    let cap = Rational::new(rng.gen_range(1i64..=20), rng.gen_range(1i64..=4)).expect("positive denominator");
    loop {
        let rows: Vec<Vec<Rational>> = (0..k)
            .map(|_| {
                (0..n)
                    .map(|_| &cap * Rational::new(rng.gen_range(0i64..=1000), 1000).expect("positive denominator"))
                    .collect()
            })
            .collect();
        if rows.iter().flatten().any(|d| !d.is_zero()) {
            return DegreeMatrix::new(cap, rows).expect("entries within [0, L]");
        }
    }
}
