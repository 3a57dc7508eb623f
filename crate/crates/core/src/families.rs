//! Parallel and star families, general-position checks and the cover of a
//! line set by the families generated from a general-position core.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::line::{Line, PointR};
use crate::rational::Rational;

/// A deduplicated set of lines in canonical (slope, intercept) order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Line>", into = "Vec<Line>")]
pub struct LineSet {
    lines: Vec<Line>,
}

impl From<Vec<Line>> for LineSet {
    fn from(mut lines: Vec<Line>) -> Self {
        lines.sort();
        lines.dedup();
        LineSet { lines }
    }
}

impl From<LineSet> for Vec<Line> {
    fn from(set: LineSet) -> Self {
        set.lines
    }
}

impl FromIterator<Line> for LineSet {
    fn from_iter<I: IntoIterator<Item = Line>>(iter: I) -> Self {
        LineSet::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl LineSet {
    pub fn new(lines: Vec<Line>) -> Self {
        LineSet::from(lines)
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Line> {
        self.lines.iter()
    }

    pub fn contains(&self, l: &Line) -> bool {
        self.lines.binary_search(l).is_ok()
    }

    pub fn index_of(&self, l: &Line) -> Option<usize> {
        self.lines.binary_search(l).ok()
    }
}

impl<'a> IntoIterator for &'a LineSet {
    type Item = &'a Line;
    type IntoIter = std::slice::Iter<'a, Line>;
    fn into_iter(self) -> Self::IntoIter {
        self.lines.iter()
    }
}

/// Lines of `lines` grouped by exact slope.
pub fn group_by_slope<'a>(lines: impl IntoIterator<Item = &'a Line>) -> BTreeMap<Rational, Vec<Line>> {
    let mut classes: BTreeMap<Rational, Vec<Line>> = BTreeMap::new();
    for l in lines {
        classes.entry(l.slope().clone()).or_default().push(l.clone());
    }
    classes
}

/// Every point where at least two lines of the set cross, with the lines
/// through it. Quadratic in the set size.
pub fn concurrency_map(lines: &LineSet) -> BTreeMap<PointR, BTreeSet<Line>> {
    let ls = lines.lines();
    let mut map: BTreeMap<PointR, BTreeSet<Line>> = BTreeMap::new();
    for i in 0..ls.len() {
        for j in i + 1..ls.len() {
            if let Some(p) = ls[i].intersect(&ls[j]).expect("LineSet is deduplicated") {
                let entry = map.entry(p).or_default();
                entry.insert(ls[i].clone());
                entry.insert(ls[j].clone());
            }
        }
    }
    map
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GpWitness {
    Parallel { lines: [Line; 2] },
    Concurrent { point: PointR, lines: Vec<Line> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpReport {
    pub is_gp: bool,
    pub witness: Option<GpWitness>,
}

impl GpWitness {
    /// Checks that the witness really breaks the star bound `c`.
    pub fn violates(&self, c: usize) -> bool {
        match self {
            GpWitness::Parallel { lines: [a, b] } => a != b && a.slope() == b.slope(),
            GpWitness::Concurrent { point, lines } => {
                let distinct: HashSet<&Line> = lines.iter().collect();
                distinct.len() > c && lines.iter().all(|l| l.contains(point))
            }
        }
    }
}

/// General position: pairwise distinct slopes and no three lines through a
/// common point.
pub fn check_general_position(lines: &LineSet) -> GpReport {
    check_near_general_position(lines, 2)
}

/// Near-general position with star bound `c`: distinct slopes and at most
/// `c` lines through any point.
pub fn check_near_general_position(lines: &LineSet, c: usize) -> GpReport {
    for (_, class) in group_by_slope(lines) {
        if class.len() > 1 {
            return GpReport {
                is_gp: false,
                witness: Some(GpWitness::Parallel {
                    lines: [class[0].clone(), class[1].clone()],
                }),
            };
        }
    }
    for (point, through) in concurrency_map(lines) {
        if through.len() > c {
            return GpReport {
                is_gp: false,
                witness: Some(GpWitness::Concurrent {
                    point,
                    lines: through.into_iter().take(c + 1).collect(),
                }),
            };
        }
    }
    GpReport {
        is_gp: true,
        witness: None,
    }
}

/// Maximum number of lines of the set through a single point (1 for a set
/// with no crossings, 0 for an empty set).
pub fn max_concurrency(lines: &LineSet) -> usize {
    concurrency_map(lines)
        .values()
        .map(BTreeSet::len)
        .max()
        .unwrap_or(usize::from(!lines.is_empty()))
}

/// Incrementally maintained general-position set.
#[derive(Default)]
struct GpBuilder {
    chosen: Vec<Line>,
    slopes: HashSet<Rational>,
    points: HashSet<PointR>,
}

impl GpBuilder {
    /// New crossings if `l` keeps the set in general position.
    fn admits(&self, l: &Line) -> Option<Vec<PointR>> {
        if self.slopes.contains(l.slope()) {
            return None;
        }
        let mut fresh = Vec::with_capacity(self.chosen.len());
        for c in &self.chosen {
            let p = c
                .intersect(l)
                .expect("distinct lines")
                .expect("distinct slopes cross");
            if self.points.contains(&p) {
                return None;
            }
            fresh.push(p);
        }
        Some(fresh)
    }

    fn push(&mut self, l: Line, fresh: Vec<PointR>) {
        self.slopes.insert(l.slope().clone());
        self.points.extend(fresh);
        self.chosen.push(l);
    }
}

/// Greedy maximal general-position subset, scanning in canonical order.
///
/// The result cannot be extended by any other line of the input: every
/// excluded line is parallel to a chosen one or passes through a crossing
/// of two chosen ones.
pub fn greedy_gp_subset(lines: &LineSet) -> LineSet {
    let mut b = GpBuilder::default();
    for l in lines {
        if let Some(fresh) = b.admits(l) {
            b.push(l.clone(), fresh);
        }
    }
    LineSet::new(b.chosen)
}

/// Size guard for [`max_gp_subset`].
pub const EXACT_GP_LIMIT: usize = 20;

/// A maximum general-position subset by exhaustive branch and bound.
/// Exponential; refuses inputs above [`EXACT_GP_LIMIT`] lines.
pub fn max_gp_subset(lines: &LineSet) -> Result<LineSet> {
    if lines.len() > EXACT_GP_LIMIT {
        return Err(Error::TooLarge {
            what: "line set",
            got: lines.len(),
            limit: EXACT_GP_LIMIT,
        });
    }
    fn search(ls: &[Line], idx: usize, cur: &mut Vec<Line>, best: &mut Vec<Line>) {
        if cur.len() + (ls.len() - idx) <= best.len() {
            return;
        }
        if idx == ls.len() {
            *best = cur.clone();
            return;
        }
        let l = &ls[idx];
        let ok = !cur.iter().any(|c| c.slope() == l.slope()) && {
            let crossings: Vec<PointR> = cur
                .iter()
                .map(|c| c.intersect(l).unwrap().unwrap())
                .collect();
            // l must avoid every crossing among the current lines.
            let mut fine = true;
            'outer: for i in 0..cur.len() {
                for j in i + 1..cur.len() {
                    if crossings[i] == crossings[j] {
                        fine = false;
                        break 'outer;
                    }
                }
            }
            fine
        };
        if ok {
            cur.push(l.clone());
            search(ls, idx + 1, cur, best);
            cur.pop();
        }
        search(ls, idx + 1, cur, best);
    }
    let mut best = Vec::new();
    search(lines.lines(), 0, &mut Vec::new(), &mut best);
    Ok(LineSet::new(best))
}

/// Draws uniformly random `target_size`-subsets until one has at most
/// `k_bound` lines through every point, trying at most `retries` times.
///
/// The input must already have pairwise distinct slopes. The result is a
/// function of the inputs and `seed` alone.
pub fn random_ngp_extract(
    lines: &LineSet,
    target_size: usize,
    k_bound: usize,
    retries: usize,
    seed: u64,
) -> Result<Option<LineSet>> {
    if target_size > lines.len() {
        return Err(Error::Precondition(format!(
            "target size {target_size} exceeds {} lines",
            lines.len()
        )));
    }
    if group_by_slope(lines).values().any(|c| c.len() > 1) {
        return Err(Error::Precondition(
            "input contains parallel lines; keep one representative per slope".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..retries {
        let mut idx = sample(&mut rng, lines.len(), target_size).into_vec();
        idx.sort_unstable();
        let subset = LineSet::new(idx.iter().map(|&i| lines.lines()[i].clone()).collect());
        if max_concurrency(&subset) <= k_bound {
            return Ok(Some(subset));
        }
    }
    Ok(None)
}

/// Identifies one family in a [`FamilyDecomposition`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyId {
    Parallel { slope: Rational },
    Star { point: PointR },
}

/// Partition of a line set into parallel and star families generated by a
/// general-position core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDecomposition {
    pub gp_core: LineSet,
    pub parallel_families: BTreeMap<Rational, Vec<Line>>,
    pub star_families: BTreeMap<PointR, Vec<Line>>,
    pub assignment: BTreeMap<Line, FamilyId>,
}

impl FamilyDecomposition {
    /// Nonempty families only.
    pub fn family_count(&self) -> usize {
        self.parallel_families.len() + self.star_families.len()
    }

    /// `|L'| + C(|L'|, 2)`: slopes of the core plus crossings of core pairs.
    pub fn family_bound(&self) -> usize {
        let c = self.gp_core.len();
        c + c * c.saturating_sub(1) / 2
    }

    /// Re-checks every structural invariant against the input set.
    pub fn validate(&self, lines: &LineSet) -> Result<()> {
        let fail = |m: String| Err(Error::Assertion(m));
        if self.assignment.len() != lines.len() || !lines.iter().all(|l| self.assignment.contains_key(l)) {
            return fail("assignment does not cover the input exactly".into());
        }
        let mut seen = 0usize;
        for (slope, fam) in &self.parallel_families {
            if fam.is_empty() {
                return fail(format!("empty parallel family {slope}"));
            }
            for l in fam {
                if l.slope() != slope {
                    return fail(format!("{l:?} in parallel family {slope}"));
                }
                if self.assignment.get(l) != Some(&FamilyId::Parallel { slope: slope.clone() }) {
                    return fail(format!("{l:?} listed under slope {slope} but assigned elsewhere"));
                }
            }
            seen += fam.len();
        }
        for (p, fam) in &self.star_families {
            if fam.is_empty() {
                return fail(format!("empty star family at {p:?}"));
            }
            for l in fam {
                if !l.contains(p) {
                    return fail(format!("{l:?} misses star center {p:?}"));
                }
                if self.assignment.get(l) != Some(&FamilyId::Star { point: p.clone() }) {
                    return fail(format!("{l:?} listed at {p:?} but assigned elsewhere"));
                }
            }
            seen += fam.len();
        }
        if seen != lines.len() {
            return fail(format!("families hold {seen} lines, input has {}", lines.len()));
        }
        if self.family_count() > self.family_bound() {
            return fail(format!(
                "{} families exceed the bound {}",
                self.family_count(),
                self.family_bound()
            ));
        }
        Ok(())
    }
}

/// Covers `lines` by the parallel classes of the slopes of a greedy
/// general-position core and the star families at the core's pairwise
/// crossings. Each line goes to the first family containing it: parallel
/// families first, then star families in point order.
pub fn decompose(lines: &LineSet) -> Result<FamilyDecomposition> {
    let core = greedy_gp_subset(lines);
    let core_slopes: BTreeSet<Rational> = core.iter().map(|l| l.slope().clone()).collect();
    let mut centers: BTreeSet<PointR> = BTreeSet::new();
    let cl = core.lines();
    for i in 0..cl.len() {
        for j in i + 1..cl.len() {
            if let Some(p) = cl[i].intersect(&cl[j])? {
                centers.insert(p);
            }
        }
    }
    let mut parallel_families: BTreeMap<Rational, Vec<Line>> = BTreeMap::new();
    let mut star_families: BTreeMap<PointR, Vec<Line>> = BTreeMap::new();
    let mut assignment = BTreeMap::new();
    for l in lines {
        let id = if core_slopes.contains(l.slope()) {
            parallel_families
                .entry(l.slope().clone())
                .or_default()
                .push(l.clone());
            FamilyId::Parallel {
                slope: l.slope().clone(),
            }
        } else if let Some(p) = centers.iter().find(|p| l.contains(p)) {
            star_families.entry(p.clone()).or_default().push(l.clone());
            FamilyId::Star { point: p.clone() }
        } else {
            return Err(Error::CoverFailure(format!("{l:?}")));
        };
        assignment.insert(l.clone(), id);
    }
    Ok(FamilyDecomposition {
        gp_core: core,
        parallel_families,
        star_families,
        assignment,
    })
}
