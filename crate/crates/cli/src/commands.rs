use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use cpgame::bench::{run_bench, BenchConfig, Suite};
use cpgame::equilibrium::{double_oracle_value, full_enumeration_value, verify_equilibrium, DoubleOracleLimits};
use cpgame::game::{expected_payoff, payoff, Attacker, Defender, MixedAttack, MixedDefense};
use cpgame::generators::{generate, GenParams, GraphKind};
use cpgame::interval::{interval_attacker_best_response, IntervalRepresentation};
use cpgame::rational::{self, Rational};
use cpgame::reductions::{self, ReductionInstance, SourceInstance};
use cpgame::response::{
    attacker_best_response, attacker_best_response_mixed, defender_best_response, defender_best_response_mixed,
};
use cpgame::sequential::{best_first_attack, best_first_defense, first_attack_reaching, first_defense_reaching};
use cpgame::treewidth::{
    heuristic_tree_decomposition, make_nice, parse_tree_decomposition, treewidth_attacker_best_response,
    EliminationRule,
};
use cpgame::{Graph, Vertex};
use serde_json::{json, Value};

use crate::input::{json_object, mixed_argument, read_file, read_graph, StrategyArg};
use crate::{Command, First, Method, Outcome, ReduceArgs, Source};

pub fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Payoff { graph, defense, attack } => payoff_cmd(graph, defense, attack),
        Command::BestResponse { graph, defense, attack, k, l } => {
            best_response_cmd(graph, defense.as_deref(), attack.as_deref(), *k, *l)
        }
        Command::Value { graph, k, l, method, max_iters, time_limit, trace, entry_cap } => {
            let limits = DoubleOracleLimits {
                max_iterations: *max_iters,
                time_limit: time_limit.map(Duration::from_secs_f64),
                record_trace: *trace,
            };
            value_cmd(graph, *k, *l, *method, limits, *entry_cap)
        }
        Command::VerifyEquilibrium { graph, k, l, defense, attack } => verify_cmd(graph, *k, *l, defense, attack),
        Command::Sequential { graph, k, l, first, threshold, leader_cap } => {
            sequential_cmd(graph, *k, *l, *first, *threshold, *leader_cap)
        }
        Command::Reduce(args) => reduce_cmd(args),
        Command::SolveInterval { intervals, defense, l } => interval_cmd(intervals, defense, *l),
        Command::SolveTreewidth { graph, td, defense, l } => treewidth_cmd(graph, td, defense, *l),
        Command::Gen { kind, n, p, width, seed, out } => {
            gen_cmd(kind, GenParams { n: *n, p: *p, width: *width }, *seed, out.as_deref())
        }
        Command::Bench {
            suite,
            instances,
            seed,
            timings,
            threads,
            csv,
            reproducer,
            entry_cap,
            leader_cap,
            max_iters,
        } => {
            let suite: Suite = suite.parse()?;
            let config = BenchConfig {
                suite,
                instances: *instances,
                seed: *seed,
                timings: *timings,
                entry_cap: *entry_cap,
                leader_cap: *leader_cap,
                max_iterations: *max_iters,
                threads: *threads,
            };
            bench_cmd(&config, *csv, reproducer)
        }
    }
}

fn load_graph(path: &Path) -> Result<Graph> {
    Ok(read_graph(path)?.graph)
}

fn set(vertices: &[Vertex]) -> String {
    let items: Vec<String> = vertices.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports serialize")
}

fn payoff_cmd(graph: &Path, defense: &str, attack: &str) -> Result<Outcome> {
    let g = load_graph(graph)?;
    let defense = StrategyArg::<Defender>::parse(defense)?;
    let attack = StrategyArg::<Attacker>::parse(attack)?;
    if let (StrategyArg::Pure(d), StrategyArg::Pure(a)) = (&defense, &attack) {
        let report = payoff(&g, d, a)?;
        let text = format!(
            "defender payoff {}\nattacker payoff {}\nsurviving {}\ndisabled {}",
            report.payoff_def,
            report.payoff_att,
            set(&report.surviving),
            set(&report.disabled)
        );
        let mut json = to_json(&report);
        json["defense"] = to_json(d);
        json["attack"] = to_json(a);
        return Ok(Outcome::ok(json, text));
    }
    let md = defense.into_mixed();
    let ma = attack.into_mixed();
    let def = expected_payoff(&g, &md, &ma)?;
    let att = rational::int(g.n() as i64) - &def;
    let text = format!(
        "expected defender payoff {}\nexpected attacker payoff {}",
        rational::format(&def),
        rational::format(&att)
    );
    let json = json!({
        "payoff_def": rational::format(&def),
        "payoff_att": rational::format(&att),
        "defense": md,
        "attack": ma,
    });
    Ok(Outcome::ok(json, text))
}

fn best_response_cmd(
    graph: &Path,
    defense: Option<&str>,
    attack: Option<&str>,
    k: Option<usize>,
    l: Option<usize>,
) -> Result<Outcome> {
    let g = load_graph(graph)?;
    let (responder, json, strategy, value) = match (defense, attack) {
        (Some(d), None) => {
            let l = l.ok_or_else(|| anyhow!("-l is required against a defense"))?;
            match StrategyArg::<Defender>::parse(d)? {
                StrategyArg::Pure(d) => {
                    let r = attacker_best_response(&g, &d, l)?;
                    ("attacker", to_json(&r), r.strategy.vertices().to_vec(), r.value.to_string())
                }
                StrategyArg::Mixed(md) => {
                    let r = attacker_best_response_mixed(&g, &md, l)?;
                    ("attacker", to_json(&r), r.strategy.vertices().to_vec(), rational::format(&r.value))
                }
            }
        }
        (None, Some(a)) => {
            let k = k.ok_or_else(|| anyhow!("-k is required against an attack"))?;
            match StrategyArg::<Attacker>::parse(a)? {
                StrategyArg::Pure(a) => {
                    let r = defender_best_response(&g, &a, k)?;
                    ("defender", to_json(&r), r.strategy.vertices().to_vec(), r.value.to_string())
                }
                StrategyArg::Mixed(ma) => {
                    let r = defender_best_response_mixed(&g, &ma, k)?;
                    ("defender", to_json(&r), r.strategy.vertices().to_vec(), rational::format(&r.value))
                }
            }
        }
        _ => bail!("give exactly one of --defense or --attack"),
    };
    let mut json = json;
    json["player"] = responder.into();
    let text = format!("{responder} best response {}\nvalue {value}", set(&strategy));
    Ok(Outcome::ok(json, text))
}

fn support_text(out: &mut String, name: &str, support: &[(Vec<Vertex>, Rational)]) {
    let _ = writeln!(out, "{name}:");
    for (s, p) in support {
        let _ = writeln!(out, "  {} with probability {}", set(s), rational::format(p));
    }
}

fn value_cmd(
    graph: &Path,
    k: usize,
    l: usize,
    method: Method,
    limits: DoubleOracleLimits,
    entry_cap: u64,
) -> Result<Outcome> {
    let g = load_graph(graph)?;
    let (result, name) = match method {
        Method::Full => (full_enumeration_value(&g, k, l, entry_cap)?, "full"),
        Method::DoubleOracle => (double_oracle_value(&g, k, l, limits)?, "double-oracle"),
    };
    let mut text = format!(
        "value {}\nmethod {name}\niterations {}\nconverged {}\n",
        rational::format(&result.value),
        result.iterations,
        result.converged
    );
    if !result.converged {
        let _ = writeln!(
            text,
            "bounds [{}, {}]",
            rational::format(&result.bounds.0),
            rational::format(&result.bounds.1)
        );
    }
    support_text(&mut text, "defense", result.defense.support());
    support_text(&mut text, "attack", result.attack.support());
    let mut json = to_json(&result);
    json["method"] = name.into();
    Ok(Outcome { json, text, status: if result.converged { 0 } else { 2 }, raw: None })
}

fn verify_cmd(graph: &Path, k: usize, l: usize, defense: &str, attack: &str) -> Result<Outcome> {
    let g = load_graph(graph)?;
    let md: MixedDefense = mixed_argument(defense)?;
    let ma: MixedAttack = mixed_argument(attack)?;
    let verdict = verify_equilibrium(&g, k, l, &md, &ma)?;
    let mut text = format!(
        "equilibrium {}\nvalue {}\nbest defense {} worth {}\nbest attack {} worth {}\n",
        verdict.is_equilibrium,
        rational::format(&verdict.value),
        set(&verdict.defender_best_response),
        rational::format(&verdict.defender_best_value),
        set(&verdict.attacker_best_response),
        rational::format(&verdict.attacker_best_value)
    );
    for v in &verdict.violations {
        let _ = writeln!(
            text,
            "{} gains by {}: {} > {}",
            v.player,
            set(&v.strategy),
            rational::format(&v.payoff),
            rational::format(&v.baseline)
        );
    }
    Ok(Outcome::ok(to_json(&verdict), text))
}

fn sequential_cmd(
    graph: &Path,
    k: usize,
    l: usize,
    first: First,
    threshold: Option<usize>,
    cap: u64,
) -> Result<Outcome> {
    let g = load_graph(graph)?;
    let result = match (first, threshold) {
        (First::Defender, None) => best_first_defense(&g, k, l, cap)?,
        (First::Defender, Some(t)) => first_defense_reaching(&g, k, l, t, cap)?,
        (First::Attacker, None) => best_first_attack(&g, k, l, cap)?,
        (First::Attacker, Some(t)) => first_attack_reaching(&g, k, l, t, cap)?,
    };
    let mut json = to_json(&result);
    let mut text = format!(
        "leader strategy {}\nguaranteed value {}\nfollower reply {}\nleader moves examined {}\n",
        set(&result.leader_strategy),
        result.guaranteed_value,
        set(&result.follower_strategy),
        result.leaders_examined
    );
    if let Some(t) = threshold {
        json["threshold"] = t.into();
        json["decision"] = result.meets(t).into();
        let _ = writeln!(text, "reaches {t}: {}", result.meets(t));
    }
    Ok(Outcome::ok(json, text))
}

fn need(value: Option<usize>, flag: &str, source: &str) -> Result<usize> {
    value.ok_or_else(|| anyhow!("{flag} is required for --from {source}"))
}

fn source_graph(args: &ReduceArgs) -> Result<Graph> {
    match &args.graph {
        Some(path) => load_graph(path),
        None => bail!("--graph is required for graph problems"),
    }
}

fn padding_for(args: &ReduceArgs, n: usize, s: usize, t: usize) -> Result<usize> {
    match args.pad.as_str() {
        "none" => Ok(0),
        "auto" => Ok(reductions::fidelity_padding(n, s, t)),
        count => count.parse().with_context(|| format!("--pad expects none, auto or a count, got `{count}`")),
    }
}

/// Builds the instance either from a tagged source JSON or from flags.
fn build_reduction(args: &ReduceArgs) -> Result<ReductionInstance> {
    let input = args.input.as_deref().map(json_object).transpose()?;
    if let Some(value) = input.as_ref().filter(|v| v.get("problem").is_some()) {
        let source: SourceInstance = serde_json::from_value(value.clone()).context("malformed source instance")?;
        let instance = match source {
            SourceInstance::Clique { n, edges, t } => reductions::from_clique(&Graph::from_edges(n, edges)?, t)?,
            SourceInstance::CliqueNodeDeletion { n, edges, s, t } => {
                let p = padding_for(args, n, s, t)?;
                reductions::from_clique_node_deletion_padded(&Graph::from_edges(n, edges)?, s, t, p)?
            }
            SourceInstance::BalancedVertexSeparator { n, edges, h } => {
                reductions::from_balanced_separator(&Graph::from_edges(n, edges)?, h)?
            }
            SourceInstance::SetCover { universe, sets, h } => reductions::from_set_cover(&universe, &sets, h)?,
        };
        return Ok(instance);
    }
    let from = args.from.ok_or_else(|| anyhow!("--from is required unless --input names a problem"))?;
    let instance = match from {
        Source::Clique => reductions::from_clique(&source_graph(args)?, need(args.t, "-t", "clique")?)?,
        Source::Cnd => {
            let g = source_graph(args)?;
            let (s, t) = (need(args.s, "-s", "cnd")?, need(args.t, "-t", "cnd")?);
            let p = padding_for(args, g.n(), s, t)?;
            if p == 0 && !reductions::in_fidelity_regime(g.n(), s, t) {
                eprintln!("warning: parameters lie outside the fidelity regime; consider --pad auto");
            }
            reductions::from_clique_node_deletion_padded(&g, s, t, p)?
        }
        Source::Bvs => reductions::from_balanced_separator(&source_graph(args)?, need(args.h, "-h", "bvs")?)?,
        Source::Setcover => {
            let value = input.ok_or_else(|| anyhow!("--input with universe and sets is required for setcover"))?;
            let universe: Vec<u64> = serde_json::from_value(value.get("universe").cloned().unwrap_or(Value::Null))
                .context("`universe` must be a list of integers")?;
            let sets: Vec<Vec<u64>> = serde_json::from_value(value.get("sets").cloned().unwrap_or(Value::Null))
                .context("`sets` must be a list of integer lists")?;
            let h = match args.h {
                Some(h) => h,
                None => value
                    .get("h")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| anyhow!("-h is required for --from setcover"))? as usize,
            };
            reductions::from_set_cover(&universe, &sets, h)?
        }
    };
    Ok(instance)
}

fn reduce_cmd(args: &ReduceArgs) -> Result<Outcome> {
    let instance = build_reduction(args)?;
    let mut json = instance.to_json_value();
    let mut text = format!(
        "question {}\nvertices {}\nedges {}\n",
        json["question"].as_str().unwrap_or_default(),
        instance.graph.n(),
        instance.graph.m()
    );
    for (name, value) in [("k", instance.k), ("l", instance.l), ("alpha", instance.alpha)] {
        if let Some(v) = value {
            let _ = writeln!(text, "{name} {v}");
        }
    }
    if let Some(delta) = &instance.delta {
        let _ = writeln!(text, "delta {}", rational::format(delta));
    }
    if instance.padding > 0 {
        let _ = writeln!(text, "padding {}", instance.padding);
    }
    if args.decide {
        let decision = instance.decide(args.decide_cap)?;
        let source = instance.source.decide(args.decide_cap)?;
        let _ = writeln!(
            text,
            "game answer {} (value {}, witness {})\nsource answer {source}",
            decision.yes,
            rational::format(&decision.value),
            set(&decision.witness)
        );
        json["decision"] = to_json(&decision);
        json["source_answer"] = source.into();
        json["agree"] = (decision.yes == source).into();
    }
    Ok(Outcome::ok(json, text))
}

fn interval_cmd(intervals: &Path, defense: &str, l: usize) -> Result<Outcome> {
    let ir = IntervalRepresentation::parse_json(&read_file(intervals)?)
        .with_context(|| format!("malformed intervals in {}", intervals.display()))?;
    let StrategyArg::Pure(d) = StrategyArg::<Defender>::parse(defense)? else {
        bail!("solve-interval takes a pure defense");
    };
    let r = interval_attacker_best_response(&ir, &d, l)?;
    let text = format!("attacker best response {}\nvalue {}", set(r.strategy.vertices()), r.value);
    let mut json = to_json(&r);
    json["player"] = "attacker".into();
    Ok(Outcome::ok(json, text))
}

fn treewidth_cmd(graph: &Path, td: &str, defense: &str, l: usize) -> Result<Outcome> {
    let g = load_graph(graph)?;
    let decomposition = if td == "auto" {
        heuristic_tree_decomposition(&g, EliminationRule::MinFill)
    } else {
        parse_tree_decomposition(&read_file(Path::new(td))?, &g).with_context(|| format!("invalid decomposition {td}"))?
    };
    let StrategyArg::Pure(d) = StrategyArg::<Defender>::parse(defense)? else {
        bail!("solve-treewidth takes a pure defense");
    };
    let ntd = make_nice(&decomposition);
    let r = treewidth_attacker_best_response(&g, &ntd, &d, l)?;
    let text = format!(
        "attacker best response {}\nvalue {}\ndecomposition width {}",
        set(r.strategy.vertices()),
        r.value,
        decomposition.width()
    );
    let mut json = to_json(&r);
    json["player"] = "attacker".into();
    json["width"] = decomposition.width().into();
    json["td"] = decomposition.to_td_string().into();
    Ok(Outcome::ok(json, text))
}

fn with_extension(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut contents = contents.to_string();
    if !contents.ends_with('\n') {
        contents.push('\n');
    }
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn gen_cmd(kind: &str, params: GenParams, seed: u64, out: Option<&Path>) -> Result<Outcome> {
    let kind: GraphKind = kind.parse()?;
    let generated = generate(kind, params, seed)?;
    if let Some(prefix) = out {
        write_file(&with_extension(prefix, ".json"), &generated.graph.to_json())?;
        if let Some(ir) = &generated.intervals {
            write_file(&with_extension(prefix, ".intervals.json"), &ir.to_json())?;
        }
        if let Some(td) = &generated.decomposition {
            write_file(&with_extension(prefix, ".td"), &td.to_td_string())?;
        }
    }
    let mut text = generated.graph.to_edge_list();
    if let Some(td) = &generated.decomposition {
        let _ = write!(text, "\n{}", td.to_td_string());
    }
    Ok(Outcome::ok(generated.to_json_value(), text))
}

fn bench_cmd(config: &BenchConfig, csv: bool, reproducer: &Path) -> Result<Outcome> {
    let report = run_bench(config)?;
    let text = format!(
        "suite {}\ninstances {}\nmismatches {}\nskipped {}",
        config.suite.name(),
        report.rows.len(),
        report.mismatches,
        report.skipped
    );
    let mut status = 0;
    if let Some(repro) = &report.reproducer {
        write_file(reproducer, &serde_json::to_string_pretty(repro)?)?;
        eprintln!("mismatch: reproducer written to {}", reproducer.display());
        status = 1;
    }
    let raw = csv.then(|| report.to_csv());
    Ok(Outcome { json: to_json(&report), text, status, raw })
}
