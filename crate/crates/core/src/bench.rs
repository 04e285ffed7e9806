//! Seeded cross-checks between independent solvers, one row per instance.
//!
//! Instance seeds are drawn up front from the suite seed, instances are then
//! evaluated on worker threads and rows are reported in instance order, so
//! the report is a function of the configuration alone (unless timings are
//! requested).

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::brute;
use crate::equilibrium::{double_oracle_value, full_enumeration_value, DoubleOracleLimits};
use crate::game::{payoff, Defense};
use crate::generators::{self, clique, seeded};
use crate::graph::{Graph, GraphDocument, Vertex};
use crate::interval::interval_attacker_best_response;
use crate::rational;
use crate::reductions::{
    fidelity_padding, from_balanced_separator, from_clique, from_clique_node_deletion_padded, from_set_cover,
    ReductionError, ReductionInstance,
};
use crate::subsets::count_up_to;
use crate::treewidth::{make_nice, treewidth_attacker_best_response};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("unknown bench suite {0:?}")]
    UnknownSuite(String),
    #[error("instance {instance}: {message}")]
    Solver { instance: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    DoVsFull,
    IntervalVsBrute,
    TwVsBrute,
    ReductionsFidelity,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::DoVsFull, Suite::IntervalVsBrute, Suite::TwVsBrute, Suite::ReductionsFidelity];

    pub fn name(self) -> &'static str {
        match self {
            Suite::DoVsFull => "do-vs-full",
            Suite::IntervalVsBrute => "interval-vs-brute",
            Suite::TwVsBrute => "tw-vs-brute",
            Suite::ReductionsFidelity => "reductions-fidelity",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| BenchError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BenchConfig {
    pub suite: Suite,
    pub instances: usize,
    pub seed: u64,
    /// Adds wall-clock microseconds to every row, which makes the report
    /// nondeterministic.
    pub timings: bool,
    pub entry_cap: u64,
    pub leader_cap: u64,
    pub max_iterations: usize,
    /// Worker threads; `0` picks the available parallelism.
    pub threads: usize,
}

impl BenchConfig {
    pub fn new(suite: Suite) -> Self {
        BenchConfig {
            suite,
            instances: 100,
            seed: 0,
            timings: false,
            entry_cap: crate::equilibrium::DEFAULT_ENTRY_CAP,
            leader_cap: crate::sequential::DEFAULT_LEADER_CAP,
            max_iterations: DoubleOracleLimits::default().max_iterations,
            threads: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Match,
    Mismatch,
    /// The instance exceeded a cap and was not compared.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub instance: usize,
    pub seed: u64,
    pub label: String,
    pub n: usize,
    pub m: usize,
    pub params: String,
    /// `method=value` pairs; every method must agree for a match.
    pub values: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    pub status: RowStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub micros: Option<u128>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub rows: Vec<BenchRow>,
    pub mismatches: usize,
    pub skipped: usize,
    /// Input of the first mismatching instance, enough to replay it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reproducer: Option<serde_json::Value>,
}

impl BenchReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches == 0
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,instance,seed,label,n,m,params,values,iterations,status");
        if self.config.timings {
            out.push_str(",micros");
        }
        out.push('\n');
        for r in &self.rows {
            let values: Vec<String> = r.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}",
                self.config.suite,
                r.instance,
                r.seed,
                csv_field(&r.label),
                r.n,
                r.m,
                csv_field(&r.params),
                csv_field(&values.join(";")),
                r.iterations.map(|i| i.to_string()).unwrap_or_default(),
                serde_json::to_value(r.status).unwrap().as_str().unwrap(),
            ));
            if let Some(us) = r.micros {
                out.push_str(&format!(",{us}"));
            }
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

struct Outcome {
    row: BenchRow,
    reproducer: serde_json::Value,
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchReport, BenchError> {
    let mut rng = seeded(config.seed);
    let seeds: Vec<u64> = (0..config.instances).map(|_| rng.gen()).collect();
    let threads = match config.threads {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        t => t,
    }
    .min(seeds.len().max(1));

    let run_one = |i: usize| -> Result<Outcome, BenchError> {
        let start = Instant::now();
        let mut out = evaluate(config, i, seeds[i]).map_err(|message| BenchError::Solver { instance: i, message })?;
        if config.timings {
            out.row.micros = Some(start.elapsed().as_micros());
        }
        Ok(out)
    };
    let outcomes: Vec<Result<Outcome, BenchError>> = if threads <= 1 {
        (0..seeds.len()).map(run_one).collect()
    } else {
        let mut slots: Vec<Option<Result<Outcome, BenchError>>> = (0..seeds.len()).map(|_| None).collect();
        std::thread::scope(|scope| {
            let chunk = seeds.len().div_ceil(threads);
            for (t, part) in slots.chunks_mut(chunk).enumerate() {
                let run_one = &run_one;
                scope.spawn(move || {
                    for (j, slot) in part.iter_mut().enumerate() {
                        *slot = Some(run_one(t * chunk + j));
                    }
                });
            }
        });
        slots.into_iter().map(|s| s.expect("every slot is filled")).collect()
    };

    let mut rows = Vec::with_capacity(outcomes.len());
    let mut reproducer = None;
    for outcome in outcomes {
        let Outcome { row, reproducer: input } = outcome?;
        if row.status == RowStatus::Mismatch {
            // abort at the first disagreement
            reproducer = Some(serde_json::json!({
                "suite": config.suite,
                "instance": row.instance,
                "seed": row.seed,
                "input": input,
                "values": row.values,
            }));
            rows.push(row);
            break;
        }
        rows.push(row);
    }
    let mismatches = rows.iter().filter(|r| r.status == RowStatus::Mismatch).count();
    let skipped = rows.iter().filter(|r| r.status == RowStatus::Skipped).count();
    Ok(BenchReport { config: *config, rows, mismatches, skipped, reproducer })
}

fn evaluate(config: &BenchConfig, instance: usize, seed: u64) -> Result<Outcome, String> {
    match config.suite {
        Suite::DoVsFull => do_vs_full(config, instance, seed),
        Suite::IntervalVsBrute => interval_vs_brute(instance, seed),
        Suite::TwVsBrute => tw_vs_brute(instance, seed),
        Suite::ReductionsFidelity => reductions_fidelity(config, instance, seed),
    }
    .map_err(|e| e.to_string())
}

fn row(instance: usize, seed: u64, label: impl Into<String>, g: &Graph, params: String) -> BenchRow {
    BenchRow {
        instance,
        seed,
        label: label.into(),
        n: g.n(),
        m: g.m(),
        params,
        values: Vec::new(),
        iterations: None,
        status: RowStatus::Match,
        micros: None,
    }
}

fn graph_json(g: &Graph) -> serde_json::Value {
    GraphDocument { graph: g.clone(), labels: Default::default() }.to_json_value()
}

fn settle(row: &mut BenchRow) {
    let first = row.values.first().map(|(_, v)| v.clone());
    if row.values.iter().any(|(_, v)| Some(v) != first.as_ref()) {
        row.status = RowStatus::Mismatch;
    }
}

/// The first three instances are `K_2`, `K_4`, `K_6` with both budgets
/// half the clique; the rest are random graphs on at most six vertices.
fn do_vs_full(config: &BenchConfig, instance: usize, seed: u64) -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut rng = seeded(seed);
    let (label, g, k, l) = if instance < 3 {
        let half = instance + 1;
        (format!("K_{}", 2 * half), clique(2 * half), half, half)
    } else {
        let n = rng.gen_range(2..=6);
        let p = rng.gen_range(0.2..0.8);
        let g = generators::random_gnp(n, p, &mut rng)?;
        ("gnp".to_string(), g, rng.gen_range(1..=2), rng.gen_range(1..=2))
    };
    let mut r = row(instance, seed, label, &g, format!("k={k} l={l}"));
    let full = full_enumeration_value(&g, k, l, config.entry_cap)?;
    let limits = DoubleOracleLimits { max_iterations: config.max_iterations, ..Default::default() };
    let dob = double_oracle_value(&g, k, l, limits)?;
    r.values.push(("full".into(), rational::format(&full.value)));
    r.values.push(("double-oracle".into(), rational::format(&dob.value)));
    r.iterations = Some(dob.iterations);
    settle(&mut r);
    if !dob.converged {
        r.status = RowStatus::Skipped;
    }
    let input = serde_json::json!({ "graph": graph_json(&g), "k": k, "l": l });
    Ok(Outcome { row: r, reproducer: input })
}

fn random_defense<R: Rng>(n: usize, max: usize, rng: &mut R) -> Vec<Vertex> {
    let size = rng.gen_range(0..=max.min(n));
    let mut d: Vec<Vertex> = rand::seq::index::sample(rng, n, size).into_vec();
    d.sort_unstable();
    d
}

fn interval_vs_brute(instance: usize, seed: u64) -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut rng = seeded(seed);
    let n = rng.gen_range(1..=10);
    let ir = generators::random_interval(n, &mut rng);
    let g = ir.to_graph()?;
    let l = rng.gen_range(0..=4);
    let d = random_defense(n, 2, &mut rng);
    let mut r = row(instance, seed, "interval", &g, format!("l={l} defense={d:?}"));
    let fast = interval_attacker_best_response(&ir, &Defense::tight(d.clone())?, l)?;
    let (slow, _) = brute::best_attack(&g, &d, l);
    r.values.push(("interval-dp".into(), fast.value.to_string()));
    r.values.push(("brute".into(), slow.to_string()));
    r.values.push(("replayed".into(), fast.report.payoff_att.to_string()));
    settle(&mut r);
    let input = serde_json::json!({ "intervals": ir, "l": l, "defense": d });
    Ok(Outcome { row: r, reproducer: input })
}

fn tw_vs_brute(instance: usize, seed: u64) -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut rng = seeded(seed);
    let n = rng.gen_range(1..=10);
    let width = rng.gen_range(1..=3);
    let (g, td) = generators::random_bounded_tw(n, width, 0.6, &mut rng)?;
    let l = rng.gen_range(0..=3);
    let d = random_defense(n, 2, &mut rng);
    let mut r = row(instance, seed, format!("tw<={width}"), &g, format!("l={l} defense={d:?}"));
    let ntd = make_nice(&td);
    let fast = treewidth_attacker_best_response(&g, &ntd, &Defense::tight(d.clone())?, l)?;
    let (slow, _) = brute::best_attack(&g, &d, l);
    r.values.push(("treewidth-dp".into(), fast.value.to_string()));
    r.values.push(("brute".into(), slow.to_string()));
    let replay = payoff(&g, &Defense::tight(d.clone())?, &fast.strategy)?;
    r.values.push(("replayed".into(), replay.payoff_att.to_string()));
    settle(&mut r);
    let input = serde_json::json!({ "graph": graph_json(&g), "td": td.to_td_string(), "l": l, "defense": d });
    Ok(Outcome { row: r, reproducer: input })
}

/// Cycles through the four constructions; clique-node-deletion instances
/// outside the fidelity regime are padded, and skipped when the padded
/// defender search exceeds the leader cap.
fn reductions_fidelity(config: &BenchConfig, instance: usize, seed: u64) -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut rng = seeded(seed);
    let built: ReductionInstance = match instance % 4 {
        0 => {
            let n = rng.gen_range(1..=6);
            let g = generators::random_gnp(n, rng.gen_range(0.3..0.9), &mut rng)?;
            from_clique(&g, rng.gen_range(1..=n.min(4)))?
        }
        1 => {
            let n = rng.gen_range(1..=5);
            let g = generators::random_gnp(n, rng.gen_range(0.3..0.9), &mut rng)?;
            let (s, t) = (rng.gen_range(1..=2), rng.gen_range(1..=3));
            from_clique_node_deletion_padded(&g, s, t, fidelity_padding(n, s, t))?
        }
        2 => {
            let n = rng.gen_range(2..=8);
            let g = generators::random_gnp(n, rng.gen_range(0.2..0.8), &mut rng)?;
            from_balanced_separator(&g, rng.gen_range(1..=(n - 1).min(3)))?
        }
        _ => {
            let (universe, sets) = random_set_system(&mut rng);
            let h = rng.gen_range(1..=sets.len());
            from_set_cover(&universe, &sets, h)?
        }
    };
    let label = serde_json::to_value(built.question)?.as_str().unwrap_or_default().to_string();
    let mut r = row(instance, seed, label, &built.graph, source_params(&built));
    let input = built.to_json_value();
    let leaders = match (built.k, built.l) {
        (Some(k), Some(l)) => count_up_to(built.graph.n(), k).max(count_up_to(built.graph.n(), l)),
        _ => 0,
    };
    let source = built.source.decide(crate::reductions::DEFAULT_DECIDER_CAP)?;
    match built.decide(config.leader_cap) {
        Ok(game) => {
            r.values.push(("source".into(), source.to_string()));
            r.values.push(("game".into(), game.yes.to_string()));
            settle(&mut r);
        }
        Err(ReductionError::Sequential(_)) if leaders > config.leader_cap => {
            r.values.push(("source".into(), source.to_string()));
            r.status = RowStatus::Skipped;
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Outcome { row: r, reproducer: input })
}

fn source_params(r: &ReductionInstance) -> String {
    use crate::reductions::SourceInstance::*;
    match &r.source {
        Clique { n, t, .. } => format!("n={n} t={t}"),
        CliqueNodeDeletion { n, s, t, .. } => format!("n={n} s={s} t={t} pad={}", r.padding),
        BalancedVertexSeparator { n, h, .. } => format!("n={n} h={h}"),
        SetCover { universe, sets, h } => format!("|X|={} m={} h={h}", universe.len(), sets.len()),
    }
}

/// Universe `1..=|X|` with `|X|, m <= 5`; each element joins each set with
/// probability one half, and uncovered elements join a random set.
pub fn random_set_system<R: Rng>(rng: &mut R) -> (Vec<u64>, Vec<Vec<u64>>) {
    let size = rng.gen_range(1..=5u64);
    let m = rng.gen_range(1..=5);
    let universe: Vec<u64> = (1..=size).collect();
    let mut sets: Vec<Vec<u64>> = vec![Vec::new(); m];
    for &x in &universe {
        let mut covered = false;
        for s in sets.iter_mut() {
            if rng.gen_bool(0.5) {
                s.push(x);
                covered = true;
            }
        }
        if !covered {
            let i = rng.gen_range(0..m);
            sets[i].push(x);
        }
    }
    (universe, sets)
}
