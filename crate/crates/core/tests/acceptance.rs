//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num::{BigInt, BigRational, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use richgrid::additive::{additive_energy, sumset, NumberSet};
use richgrid::families::{decompose, random_ngp_extract, LineSet};
use richgrid::gen;
use richgrid::grid::{enumerate_rich, enumerate_rich_with_threads, GroundSet};
use richgrid::lemmas::{binom_ratio_check, lemma31_verify, lemma53_find_index};
use richgrid::star::{commutator_graph, component_analysis, dyadic_star_product, rich_pairs_lemma};
use richgrid::verify::{run_suite, Suite};
use richgrid::{Line, Rational};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(r: &Rational) -> BigRational {
    r.as_big().clone()
}

/// Every line through two points of `A × A` with nonzero finite slope, with
/// the number of grid points on it, from the pair count `r(r-1)/2`.
fn pair_oracle(a: &[Rational]) -> BTreeMap<(BigRational, BigRational), usize> {
    let pts: Vec<(BigRational, BigRational)> = a
        .iter()
        .flat_map(|x| a.iter().map(move |y| (big(x), big(y))))
        .collect();
    let mut pairs: HashMap<(BigRational, BigRational), usize> = HashMap::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (dx, dy) = (&pts[j].0 - &pts[i].0, &pts[j].1 - &pts[i].1);
            if dx.is_zero() || dy.is_zero() {
                continue;
            }
            let slope = dy / dx;
            let intercept = &pts[i].1 - &slope * &pts[i].0;
            *pairs.entry((slope, intercept)).or_insert(0) += 1;
        }
    }
    pairs
        .into_iter()
        .map(|(l, c)| {
            let r = ((1.0 + (1.0 + 8.0 * c as f64).sqrt()) / 2.0).round() as usize;
            assert_eq!(r * (r - 1) / 2, c, "pair count is triangular");
            (l, r)
        })
        .collect()
}

fn lines_of(records: &[richgrid::RichLineRecord]) -> BTreeSet<(BigRational, BigRational, usize)> {
    records
        .iter()
        .map(|r| (big(r.line.slope()), big(r.line.intercept()), r.richness))
        .collect()
}

fn oracle_rich(oracle: &BTreeMap<(BigRational, BigRational), usize>, k: usize) -> BTreeSet<(BigRational, BigRational, usize)> {
    oracle
        .iter()
        .filter(|(_, &r)| r >= k)
        .map(|((s, b), &r)| (s.clone(), b.clone(), r))
        .collect()
}

/// Grid points on `l`, counted directly.
fn direct_richness(l: &Line, a: &BTreeSet<Rational>) -> usize {
    a.iter().filter(|x| a.contains(&l.eval(x))).count()
}

fn ceil_rule(x: f64) -> usize {
    if x.is_nan() || x <= 0.0 {
        0
    } else {
        (x - 1e-9 * x.max(1.0)).ceil() as usize
    }
}

fn binom2(m: u128) -> u128 {
    m * m.saturating_sub(1) / 2
}

struct Instance {
    set: GroundSet,
    counts: Vec<(usize, usize)>,
}

fn c1_enumeration_oracle(instances: &mut Vec<Instance>) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut compared = 0;
    for trial in 0..25 {
        let n = rng.gen_range(2..=20);
        let set = gen::random_set(&mut rng, n, 10, 3).map_err(|e| e.to_string())?;
        let oracle = pair_oracle(set.elements());
        let mut counts = Vec::new();
        for k in 2..=n {
            let got = lines_of(&enumerate_rich(&set, k).map_err(|e| e.to_string())?);
            let want = oracle_rich(&oracle, k);
            ensure(got == want, || format!("trial {trial}, n={n}, k={k}: {} vs oracle {}", got.len(), want.len()))?;
            counts.push((k, got.len()));
            compared += 1;
        }
        instances.push(Instance { set, counts });
    }
    Ok(format!("25 sets, {compared} (set, k) pairs match the pair oracle"))
}

fn c2_known_counts() -> Check {
    for n in 2..=40i64 {
        let set = GroundSet::range(1, n).map_err(|e| e.to_string())?;
        let got: Vec<(Rational, Rational)> = enumerate_rich(&set, n as usize)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|r| (r.line.slope().clone(), r.line.intercept().clone()))
            .collect();
        let want = vec![
            (Rational::from(-1), Rational::from(n + 1)),
            (Rational::from(1), Rational::from(0)),
        ];
        ensure(got == want, || format!("n={n}: {got:?}"))?;
    }
    let ten = GroundSet::range(1, 10).map_err(|e| e.to_string())?;
    let got = enumerate_rich(&ten, 9).map_err(|e| e.to_string())?.len();
    let oracle = oracle_rich(&pair_oracle(ten.elements()), 9).len();
    ensure(got == 6 && oracle == 6, || format!("A=1..10, k=9: {got} lines, oracle {oracle}"))?;
    Ok("n-rich lines on 1..n are exactly (1,0),(-1,n+1) for n=2..40; 6 lines 9-rich on 1..10".into())
}

fn c3_pair_bound(instances: &[Instance]) -> Check {
    let mut checked = 0;
    for inst in instances {
        let n = inst.set.len() as u128;
        for &(k, count) in &inst.counts {
            // count ≤ C(n², 2) / C(k, 2), cross-multiplied.
            ensure((count as u128) * binom2(k as u128) <= binom2(n * n), || {
                format!("n={n}, k={k}: {count} lines")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} counts within C(n^2,2)/C(k,2)"))
}

fn random_line(rng: &mut ChaCha8Rng) -> Line {
    loop {
        let s = Rational::new(rng.gen_range(-60i64..=60), rng.gen_range(1i64..=15)).unwrap();
        let b = Rational::new(rng.gen_range(-60i64..=60), rng.gen_range(1i64..=15)).unwrap();
        if let Ok(l) = Line::new(s, b) {
            return l;
        }
    }
}

fn c4_line_algebra() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let identity = Line::new(Rational::one(), Rational::zero()).unwrap();
    for t in 0..10_000 {
        let f = random_line(&mut rng);
        let g = random_line(&mut rng);
        ensure(f.invert().invert() == f, || format!("#{t}: double inverse of {f:?}"))?;
        ensure(f.star(&f) == identity, || format!("#{t}: {f:?} * itself"))?;
        ensure(f.star(&g).slope() == &(g.slope() / f.slope()), || format!("#{t}: slope of {f:?} * {g:?}"))?;
        ensure(f.star(&g).slope() == g.invert().star(&f.invert()).slope(), || {
            format!("#{t}: commutator pair {f:?}, {g:?}")
        })?;
        // The closed form agrees with evaluating f⁻¹(g(x)) at two points.
        let h = f.star(&g);
        for x in [Rational::zero(), Rational::one()] {
            ensure(h.eval(&x) == f.solve(&g.eval(&x)), || format!("#{t}: f^-1 g at {x}"))?;
        }
    }
    Ok("10^4 random line pairs, zero failures".into())
}

fn c5_rich_pairs_lemma() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut min_slack = f64::INFINITY;
    for t in 0..50 {
        let inst = gen::rich_line_instance(&mut rng, 60, 0.25, 40).map_err(|e| e.to_string())?;
        let a: BTreeSet<Rational> = inst.set.elements().iter().cloned().collect();
        let n = a.len() as f64;
        let need = ceil_rule(n.powf(1.0 - inst.delta));
        ensure(inst.lines.iter().all(|l| direct_richness(l, &a) >= need), || format!("#{t}: hypothesis"))?;
        let pair_need = ceil_rule(n.powf(1.0 - 2.0 * inst.delta) / 2.0);
        let ls = inst.lines.lines();
        let mut count = 0usize;
        for f in ls {
            for g in ls {
                if direct_richness(&f.star(g), &a) >= pair_need {
                    count += 1;
                }
            }
        }
        let size = ls.len() as f64;
        let bound = 0.5 * size * size * n.powf(-2.0 * inst.delta);
        ensure(count as f64 >= bound, || format!("#{t}: {count} pairs < {bound}"))?;
        let rep = rich_pairs_lemma(&inst.lines, &inst.set, inst.delta).map_err(|e| format!("#{t}: {e}"))?;
        ensure(rep.hypothesis_met && rep.rich_pairs == count, || {
            format!("#{t}: library counts {}, direct {count}", rep.rich_pairs)
        })?;
        min_slack = min_slack.min(count as f64 / bound);
    }
    Ok(format!("50 instances, minimum count/bound ratio {min_slack:.3}"))
}

fn c6_set_intersection_lemma() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for t in 0..100 {
        let (sys, delta) = gen::random_set_system(&mut rng, 200, 0.3, 30);
        let n = sys.n() as f64;
        let sets: Vec<HashSet<usize>> = sys.sets().iter().map(|s| s.iter().copied().collect()).collect();
        let need = ceil_rule(n.powf(1.0 - delta));
        ensure(sets.iter().all(|s| s.len() >= need), || format!("#{t}: hypothesis"))?;
        let inter_need = ceil_rule(n.powf(1.0 - 2.0 * delta) / 2.0);
        let count = sets
            .iter()
            .flat_map(|a| sets.iter().map(move |b| a.intersection(b).count()))
            .filter(|&c| c >= inter_need)
            .count();
        let k = sets.len() as f64;
        let bound = 0.5 * k * k * n.powf(-2.0 * delta);
        ensure(count as f64 >= bound, || format!("#{t}: {count} < {bound}"))?;
        let rep = lemma31_verify(&sys, delta).map_err(|e| format!("#{t}: {e}"))?;
        ensure(rep.qualifying_pairs == count, || format!("#{t}: library {} vs {count}", rep.qualifying_pairs))?;
    }
    Ok("100 set systems, zero failures".into())
}

fn c7_matrix_lemma() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    for t in 0..200 {
        let d = gen::random_degree_matrix(&mut rng, 30);
        let rep = lemma53_find_index(&d).map_err(|e| format!("#{t}: {e}"))?;
        let rows: Vec<Vec<BigRational>> = d.rows().iter().map(|r| r.iter().map(big).collect()).collect();
        let (k, n) = (rows.len(), rows[0].len());
        let l = big(d.cap());
        let total: BigRational = rows.iter().flatten().cloned().sum();
        let c = total / (&l * BigRational::from_integer(BigInt::from(k * n)));
        let c2 = &c * &c;
        let threshold = &c2 * &l * &l * BigRational::from_integer(BigInt::from(n)) / BigRational::from_integer(2.into());
        let bound = BigRational::from_integer(BigInt::from(k)) * &c2 / (BigRational::from_integer(2.into()) - &c2);
        let row = &rows[rep.index];
        let qualifying = rows
            .iter()
            .filter(|other| row.iter().zip(other.iter()).map(|(a, b)| a * b).sum::<BigRational>() > threshold)
            .count();
        ensure(BigRational::from_integer(BigInt::from(qualifying)) >= bound, || {
            format!("#{t}: index {} has {qualifying} qualifying rows, bound {bound}", rep.index)
        })?;
        ensure(qualifying == rep.qualifying_indices.len(), || format!("#{t}: qualifying set differs"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("200 matrices, zero failures in {:.2}s", elapsed.as_secs_f64()))
}

fn c8_commutator() -> Check {
    let lines: LineSet = (1..=8i64)
        .map(|i| Line::new(Rational::from(i), Rational::from(i)).unwrap())
        .collect();
    let a = GroundSet::range(1, 50).map_err(|e| e.to_string())?;
    let g = commutator_graph(&lines, &a, 0.15).map_err(|e| e.to_string())?;
    ensure(!g.edges.is_empty(), || "no edges".into())?;
    for e in &g.edges {
        let (u, v) = (&g.vertices[e.u].line, &g.vertices[e.v].line);
        ensure(u.slope() == v.slope(), || format!("edge {u:?} - {v:?}"))?;
    }
    // Components by breadth-first search, independent of the library.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.vertices.len()];
    for e in &g.edges {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut seen = vec![false; g.vertices.len()];
    let mut components = 0;
    for s in 0..g.vertices.len() {
        if seen[s] {
            continue;
        }
        components += 1;
        seen[s] = true;
        let mut queue = vec![s];
        let slope = g.vertices[s].line.slope().clone();
        while let Some(u) = queue.pop() {
            ensure(g.vertices[u].line.slope() == &slope, || format!("component mixes slopes at {u}"))?;
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push(v);
                }
            }
        }
    }
    let rep = component_analysis(&g).map_err(|e| e.to_string())?;
    ensure(rep.components.len() == components, || {
        format!("library finds {} components, search finds {components}", rep.components.len())
    })?;
    Ok(format!(
        "{} vertices, {} edges, {components} components, each within one slope class",
        g.vertices.len(),
        g.edges.len()
    ))
}

fn concurrent(a: &Line, b: &Line, c: &Line) -> bool {
    match a.intersect(b) {
        Ok(Some(p)) => c.contains(&p),
        _ => false,
    }
}

fn c9_decomposition() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut max_families = 0;
    for t in 0..50 {
        let lines = gen::random_mixed_lines(&mut rng, 60);
        let d = decompose(&lines).map_err(|e| format!("#{t}: {e}"))?;
        let mut covered: Vec<&Line> = Vec::new();
        for (slope, fam) in &d.parallel_families {
            ensure(!fam.is_empty() && fam.iter().all(|l| l.slope() == slope), || format!("#{t}: parallel {slope}"))?;
            covered.extend(fam);
        }
        for (p, fam) in &d.star_families {
            ensure(
                !fam.is_empty() && fam.iter().all(|l| l.slope() * &p.x + l.intercept() == p.y),
                || format!("#{t}: star at {p:?}"),
            )?;
            covered.extend(fam);
        }
        let distinct: BTreeSet<&Line> = covered.iter().copied().collect();
        ensure(covered.len() == lines.len() && distinct.len() == lines.len(), || {
            format!("#{t}: {} assignments for {} lines", covered.len(), lines.len())
        })?;
        ensure(lines.iter().all(|l| distinct.contains(l)), || format!("#{t}: cover misses a line"))?;
        let core = d.gp_core.lines();
        let slopes: BTreeSet<&Rational> = core.iter().map(|l| l.slope()).collect();
        ensure(slopes.len() == core.len(), || format!("#{t}: core has parallel lines"))?;
        for i in 0..core.len() {
            for j in i + 1..core.len() {
                for k in j + 1..core.len() {
                    ensure(!concurrent(&core[i], &core[j], &core[k]), || format!("#{t}: core has a triple point"))?;
                }
            }
        }
        let c = core.len();
        let families = d.parallel_families.len() + d.star_families.len();
        ensure(families <= c + c * c, || format!("#{t}: {families} families, core {c}"))?;
        max_families = max_families.max(families);
    }
    Ok(format!("50 line sets partitioned, at most {max_families} families"))
}

fn c10_dyadic() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut runs = 0;
    while runs < 30 {
        let inst = gen::rich_line_instance(&mut rng, 50, 0.25, 30).map_err(|e| e.to_string())?;
        if inst.lines.len() < 2 {
            continue;
        }
        runs += 1;
        let res = dyadic_star_product(&inst.lines, &inst.set, inst.delta).map_err(|e| e.to_string())?;

        let a: BTreeSet<Rational> = inst.set.elements().iter().cloned().collect();
        let n = a.len() as f64;
        let rich_need = ceil_rule(n.powf(1.0 - 2.0 * inst.delta) / 2.0);
        let ls = inst.lines.lines();
        let mut mult: BTreeMap<Line, usize> = BTreeMap::new();
        let mut pairs = 0;
        for f in ls {
            for g in ls {
                let h = f.star(g);
                if direct_richness(&h, &a) >= rich_need {
                    *mult.entry(h).or_insert(0) += 1;
                    pairs += 1;
                }
            }
        }
        let bucket = |s: usize| (0..).find(|&i| (1usize << i) >= s).unwrap();
        let mut n_i: BTreeMap<usize, usize> = BTreeMap::new();
        for &s in mult.values() {
            *n_i.entry(bucket(s)).or_insert(0) += s;
        }
        let size = ls.len() as f64;
        let threshold = size * size * n.powf(-2.0 * inst.delta) / (2.0 * size.log2());
        let chosen = n_i.iter().rev().find(|(_, &v)| v as f64 >= threshold).map(|(&i, _)| i);
        let selected = chosen.or_else(|| n_i.iter().max_by_key(|(&i, &v)| (v, i)).map(|(&i, _)| i));
        let product: BTreeSet<Line> = match selected {
            Some(i) => mult.iter().filter(|(_, &s)| bucket(s) == i).map(|(l, _)| l.clone()).collect(),
            None => BTreeSet::new(),
        };

        let bucket_total: usize = res.buckets.iter().map(|b| b.n_i).sum();
        ensure(bucket_total == res.rich_pairs && res.rich_pairs == pairs, || {
            format!("run {runs}: sum N_i {bucket_total}, pairs {} vs {pairs}", res.rich_pairs)
        })?;
        for b in &res.buckets {
            ensure(n_i.get(&b.index).copied().unwrap_or(0) == b.n_i, || format!("run {runs}: N_{}", b.index))?;
        }
        ensure(res.chosen_i == chosen && res.fallback_used == chosen.is_none(), || {
            format!("run {runs}: chosen {:?} vs {chosen:?}", res.chosen_i)
        })?;
        let got: BTreeSet<Line> = res.product.iter().cloned().collect();
        ensure(got == product, || format!("run {runs}: product differs"))?;
        ensure(product.iter().all(|l| direct_richness(l, &a) >= rich_need), || {
            format!("run {runs}: product line below threshold")
        })?;
    }
    Ok(format!("{runs} dyadic products match a single-pass recomputation"))
}

fn quadruple_energy(a: &[Rational]) -> u64 {
    let mut count = 0;
    for x in a {
        for y in a {
            for z in a {
                for w in a {
                    if x + y == z + w {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

fn c11_energy() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    for t in 0..50 {
        let len = rng.gen_range(1..=20);
        let a: NumberSet = (0..len)
            .map(|_| Rational::new(rng.gen_range(-12i64..=12), rng.gen_range(1i64..=3)).unwrap())
            .collect();
        let e = additive_energy(&a, &a);
        let brute = quadruple_energy(a.elements());
        ensure(e == brute, || format!("#{t}: histogram {e}, quadruples {brute}"))?;
        let m = a.len() as u128;
        ensure(e as u128 * sumset(&a, &a).len() as u128 >= m.pow(4), || format!("#{t}: below |A|^4/|A+A|"))?;
    }
    let small = NumberSet::from_ints(&[1, 2, 3]);
    let e = additive_energy(&small, &small);
    ensure(e == 19, || format!("E({{1,2,3}}) = {e}"))?;
    Ok("50 random sets agree with quadruple enumeration; E({1,2,3}) = 19".into())
}

fn c12_binomial() -> Check {
    let start = Instant::now();
    let mut devs = Vec::new();
    for k in 1..=3usize {
        let rep = binom_ratio_check(k, 0.5, 1_000_000).map_err(|e| e.to_string())?;
        ensure(rep.m == 1000, || format!("m = {}", rep.m))?;
        // C(x, m-k)/C(x, m) = Π_{i<k} (m-i)/(x-m+k-i).
        let closed: f64 = (0..k).map(|i| (1000 - i) as f64 / (1_000_000 - 1000 + k - i) as f64).product();
        let scaled = 1000f64.powi(k as i32) * closed;
        ensure((scaled - rep.scaled).abs() < 1e-9, || format!("k={k}: {scaled} vs {}", rep.scaled))?;
        ensure(rep.deviation < 0.01, || format!("k={k}: deviation {}", rep.deviation))?;
        devs.push(format!("{:.2e}", rep.deviation));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("deviations {} in {:.2}s", devs.join(", "), elapsed.as_secs_f64()))
}

fn c13_performance() -> Check {
    let a = GroundSet::range(1, 100).map_err(|e| e.to_string())?;
    let k = ceil_rule(100f64.powf(0.8));
    ensure(k == 40, || format!("k = {k}"))?;
    let start = Instant::now();
    let single = enumerate_rich_with_threads(&a, k, 1).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("single-threaded run took {elapsed:?}"))?;
    let multi = enumerate_rich_with_threads(&a, k, 4).map_err(|e| e.to_string())?;
    let (s, m) = (
        serde_json::to_vec(&single).unwrap(),
        serde_json::to_vec(&multi).unwrap(),
    );
    ensure(s == m, || "4-thread output differs".into())?;
    let set: BTreeSet<Rational> = a.elements().iter().cloned().collect();
    ensure(single.iter().all(|r| direct_richness(&r.line, &set) == r.richness && r.richness >= k), || {
        "a reported richness is wrong".into()
    })?;
    Ok(format!(
        "{} lines {k}-rich on 1..100 in {:.2}s single-threaded; 4 threads byte-identical",
        single.len(),
        elapsed.as_secs_f64()
    ))
}

fn c14_determinism() -> Check {
    let pool = |t: usize| rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap();
    for suite in Suite::ALL {
        let one = pool(1).install(|| serde_json::to_vec(&run_suite(suite, 30, 14)).unwrap());
        let four = pool(4).install(|| serde_json::to_vec(&run_suite(suite, 30, 14)).unwrap());
        ensure(one == four, || format!("{suite} differs across thread counts"))?;
    }
    let draw = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = gen::random_set(&mut rng, 18, 50, 6).unwrap();
        let lines = gen::random_mixed_lines(&mut rng, 40);
        serde_json::to_vec(&(set, lines)).unwrap()
    };
    ensure(draw(9) == draw(9), || "generators differ on rerun".into())?;
    let gp: LineSet = (1..=12i64)
        .map(|i| Line::new(Rational::from(i), Rational::from(i * i)).unwrap())
        .collect();
    let a = random_ngp_extract(&gp, 6, 3, 20, 7).map_err(|e| e.to_string())?;
    let b = random_ngp_extract(&gp, 6, 3, 20, 7).map_err(|e| e.to_string())?;
    ensure(a.is_some() && a == b, || "extraction differs on rerun".into())?;
    Ok("suites, generators and extraction repeat byte-for-byte".into())
}

fn timed(name: &'static str, run: impl FnOnce() -> Check) -> (&'static str, Check, Duration) {
    let start = Instant::now();
    let outcome = run();
    (name, outcome, start.elapsed())
}

fn main() -> ExitCode {
    let mut instances = Vec::new();
    let results = vec![
        timed("enumeration matches pair oracle", || c1_enumeration_oracle(&mut instances)),
        timed("known rich-line counts", c2_known_counts),
        timed("pair bound", || c3_pair_bound(&instances)),
        timed("line algebra", c4_line_algebra),
        timed("rich-pairs lemma", c5_rich_pairs_lemma),
        timed("set-intersection lemma", c6_set_intersection_lemma),
        timed("matrix lemma", c7_matrix_lemma),
        timed("commutator graph", c8_commutator),
        timed("decomposition", c9_decomposition),
        timed("dyadic product", c10_dyadic),
        timed("energy", c11_energy),
        timed("binomial ratio", c12_binomial),
        timed("performance", c13_performance),
        timed("determinism", c14_determinism),
    ];

    let mut failed = 0;
    for (i, (name, outcome, elapsed)) in results.iter().enumerate() {
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{secs:.2}s]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{secs:.2}s]: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
