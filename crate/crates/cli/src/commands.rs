use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use richgrid::families::{decompose, LineSet};
use richgrid::grid::{bound_report, enumerate_rich_with_threads, GroundSet};
use richgrid::report::{self, CommutatorReport, DecompositionReport, RichLinesReport, Versioned};
use richgrid::star::{
    commutator_graph, component_analysis, iterated_star, rich_pairs_lemma, thm4_from_product, IteratedStar,
    RichPairsReport, Thm4Params, Thm4Report,
};
use richgrid::verify::{run_suite, Suite};
use richgrid::{gen, Error, Rational};

use crate::output::{self, Table};
use crate::{Cli, Command, CommutatorArgs, EnumerateArgs, GenSetArgs, LinesArgs, SetKind, StarArgs, VerifyArgs};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(String),
    Core(Error),
    /// A report was written but a hard check inside it failed.
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Res<T> = Result<T, Failure>;

pub fn run(cli: &Cli) -> Res<()> {
    if cli.threads == 0 {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| Failure::Io(e.to_string()))?;
    let emit = |bytes: Vec<u8>| output::write(cli.out.as_deref(), &bytes);
    match &cli.command {
        Command::GenSet(args) => emit(gen_set(args, cli)?),
        Command::Enumerate(args) => emit(enumerate(args, cli)?),
        Command::Analyze(args) => emit(analyze(args, cli)?),
        Command::Star(args) => emit(star(args, cli)?),
        Command::Commutator(args) => emit(commutator(args, cli)?),
        Command::Decompose(args) => emit(decomposition(args, cli)?),
        Command::Verify(args) => {
            let (bytes, failed) = verify(args, cli)?;
            emit(bytes)?;
            match failed {
                Some(m) => Err(Failure::Assertion(m)),
                None => Ok(()),
            }
        }
    }
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn rational(flag: &str, s: &str) -> Res<Rational> {
    s.parse()
        .map_err(|e: Error| Failure::Usage(format!("--{flag}: {e}")))
}

fn load_set(path: &Path) -> Res<GroundSet> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_lines(path: &Path) -> Res<LineSet> {
    Ok(report::parse_lines(&read(path)?)?)
}

/// Each supplied parameter lies in (0, 1), and `δ < α < ε` when all three
/// are given.
fn check_parameters(delta: Option<f64>, alpha: Option<f64>, epsilon: Option<f64>) -> Res<()> {
    for (name, v) in [("delta", delta), ("alpha", alpha), ("epsilon", epsilon)] {
        if let Some(v) = v {
            if !(v > 0.0 && v < 1.0) {
                return Err(Failure::Usage(format!("--{name} must lie in (0, 1), got {v}")));
            }
        }
    }
    if let (Some(d), Some(a), Some(e)) = (delta, alpha, epsilon) {
        if !(d < a && a < e) {
            return Err(Failure::Usage(format!(
                "parameters must satisfy delta < alpha < epsilon, got {d}, {a}, {e}"
            )));
        }
    }
    Ok(())
}

fn require<T: Copy>(flag: &str, v: Option<T>) -> Res<T> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required here")))
}

fn parse_number_list(text: &str) -> Res<Vec<Rational>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| rational("set", t))
        .collect()
}

fn gen_set(args: &GenSetArgs, cli: &Cli) -> Res<Vec<u8>> {
    let a0 = rational("a0", &args.a0)?;
    let set = match args.kind {
        SetKind::Ap => gen::ap_set(require("n", args.n)?, &a0, &rational("d", &args.d)?)?,
        SetKind::Gp => gen::gp_set(require("n", args.n)?, &a0, &rational("ratio", &args.ratio)?)?,
        SetKind::Random => {
            let seed = require("seed", args.seed)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            gen::random_set(&mut rng, require("n", args.n)?, args.num_bound, args.den_bound)?
        }
        SetKind::File => {
            let path = args
                .set
                .as_deref()
                .ok_or_else(|| Failure::Usage("--set is required for --kind file".into()))?;
            let text = read(path)?;
            match serde_json::from_str::<GroundSet>(&text) {
                Ok(set) => set,
                Err(_) => GroundSet::new(parse_number_list(&text)?)?,
            }
        }
    };
    output::render(
        &Versioned::new(&set),
        || {
            let mut t = Table::new(vec!["element"]);
            for x in set.elements() {
                t.push(vec![x.to_string()]);
            }
            t
        },
        cli.format,
    )
}

#[derive(Serialize)]
struct EnumerateOut {
    #[serde(flatten)]
    lines: RichLinesReport,
    pair_bound: Rational,
}

fn enumerate(args: &EnumerateArgs, cli: &Cli) -> Res<Vec<u8>> {
    let set = load_set(&args.set)?;
    let lines = enumerate_rich_with_threads(&set, args.k, cli.threads)?;
    let bound = bound_report(set.len(), args.k, lines.len())?;
    if !bound.holds {
        return Err(Failure::Assertion(format!(
            "{} lines exceed the pair bound {}",
            lines.len(),
            bound.pair_bound
        )));
    }
    let report = Versioned::new(EnumerateOut {
        lines: RichLinesReport { k: args.k, lines },
        pair_bound: bound.pair_bound,
    });
    output::render(
        &report,
        || {
            let mut t = Table::new(vec!["slope", "intercept", "richness"]);
            for r in &report.body.lines.lines {
                t.push(vec![
                    r.line.slope().to_string(),
                    r.line.intercept().to_string(),
                    r.richness.to_string(),
                ]);
            }
            t
        },
        cli.format,
    )
}

fn analyze(args: &LinesArgs, cli: &Cli) -> Res<Vec<u8>> {
    let lines = load_lines(&args.lines)?;
    let report = Versioned::new(report::analyze(&lines));
    output::render(
        &report,
        || {
            let mut t = Table::new(vec!["kind", "slope", "x", "y", "size"]);
            for c in &report.body.slope_classes {
                t.push(vec!["parallel".into(), c.slope.to_string(), String::new(), String::new(), c.size.to_string()]);
            }
            for c in &report.body.concurrency_points {
                t.push(vec![
                    "concurrent".into(),
                    String::new(),
                    c.point.x.to_string(),
                    c.point.y.to_string(),
                    c.size.to_string(),
                ]);
            }
            t
        },
        cli.format,
    )
}

#[derive(Serialize)]
struct StarOut {
    rich_pairs: RichPairsReport,
    iterated: IteratedStar,
    diagnostics: Option<Thm4Report>,
}

fn star(args: &StarArgs, cli: &Cli) -> Res<Vec<u8>> {
    check_parameters(Some(args.delta), args.alpha, args.epsilon)?;
    let lines = load_lines(&args.lines)?;
    let set = load_set(&args.set)?;
    let rich_pairs = rich_pairs_lemma(&lines, &set, args.delta)?;
    let iterated = iterated_star(&lines, &set, args.delta, args.depth, args.alpha)?;
    let diagnostics = match (args.alpha, args.epsilon, args.star_bound) {
        (Some(alpha), Some(epsilon), Some(star_bound)) => {
            let params = Thm4Params {
                epsilon,
                alpha,
                delta: args.delta,
                star_bound,
            };
            Some(thm4_from_product(&lines, &set, &params, &iterated.levels[0].dyadic)?)
        }
        _ => None,
    };
    let report = Versioned::new(StarOut {
        rich_pairs,
        iterated,
        diagnostics,
    });
    output::render(
        &report,
        || {
            let mut t = Table::new(vec![
                "level",
                "delta",
                "input_size",
                "product_size",
                "chosen_i",
                "fallback",
                "stop_rule_fired",
            ]);
            for l in &report.body.iterated.levels {
                t.push(vec![
                    l.level.to_string(),
                    l.delta.to_string(),
                    l.input_size.to_string(),
                    l.product_size.to_string(),
                    l.dyadic.chosen_i.map(|i| i.to_string()).unwrap_or_default(),
                    l.dyadic.fallback_used.to_string(),
                    l.stop_rule_fired.to_string(),
                ]);
            }
            t
        },
        cli.format,
    )
}

fn commutator(args: &CommutatorArgs, cli: &Cli) -> Res<Vec<u8>> {
    check_parameters(Some(args.delta), None, None)?;
    let lines = load_lines(&args.lines)?;
    let set = load_set(&args.set)?;
    let graph = commutator_graph(&lines, &set, args.delta)?;
    graph.validate(&lines)?;
    let components = component_analysis(&graph)?;
    let report = Versioned::new(CommutatorReport { graph, components });
    output::render(
        &report,
        || {
            let mut t = Table::new(vec!["u_slope", "u_intercept", "v_slope", "v_intercept", "pairs"]);
            let vs = &report.body.graph.vertices;
            for e in &report.body.graph.edges {
                let (u, v) = (&vs[e.u].line, &vs[e.v].line);
                t.push(vec![
                    u.slope().to_string(),
                    u.intercept().to_string(),
                    v.slope().to_string(),
                    v.intercept().to_string(),
                    e.provenance.len().to_string(),
                ]);
            }
            t
        },
        cli.format,
    )
}

fn decomposition(args: &LinesArgs, cli: &Cli) -> Res<Vec<u8>> {
    let lines = load_lines(&args.lines)?;
    let d = decompose(&lines)?;
    d.validate(&lines)?;
    let report = Versioned::new(DecompositionReport::new(&lines, &d));
    output::render(
        &report,
        || {
            let mut t = Table::new(vec!["family", "slope", "x", "y", "line_slope", "line_intercept"]);
            for f in &report.body.parallel_families {
                for l in &f.lines {
                    t.push(vec![
                        "parallel".into(),
                        f.slope.to_string(),
                        String::new(),
                        String::new(),
                        l.slope().to_string(),
                        l.intercept().to_string(),
                    ]);
                }
            }
            for f in &report.body.star_families {
                for l in &f.lines {
                    t.push(vec![
                        "star".into(),
                        String::new(),
                        f.point.x.to_string(),
                        f.point.y.to_string(),
                        l.slope().to_string(),
                        l.intercept().to_string(),
                    ]);
                }
            }
            t
        },
        cli.format,
    )
}

fn verify(args: &VerifyArgs, cli: &Cli) -> Res<(Vec<u8>, Option<String>)> {
    let suite: Suite = args.suite.parse()?;
    let seed = require("seed", args.seed)?;
    let report = Versioned::new(run_suite(suite, args.trials, seed));
    let failed = (!report.body.ok()).then(|| {
        format!(
            "{} of {} {suite} trials failed",
            report.body.failures.len(),
            report.body.trials
        )
    });
    let bytes = output::render(
        &report,
        || {
            let mut t = Table::new(vec!["suite", "trials", "seed", "passed", "vacuous", "failed"]);
            let r = &report.body;
            t.push(vec![
                r.suite.to_string(),
                r.trials.to_string(),
                r.seed.to_string(),
                r.passed.to_string(),
                r.vacuous.to_string(),
                r.failures.len().to_string(),
            ]);
            t
        },
        cli.format,
    )?;
    Ok((bytes, failed))
}
