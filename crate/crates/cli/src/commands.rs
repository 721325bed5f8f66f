use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use noetherian_lab::campaign::{self, gen, RunConfig, Suite};
use noetherian_lab::coloring::{self, BoxColoring, StageChain};
use noetherian_lab::hamming::{self, EpsilonSequence};
use noetherian_lab::io;
use noetherian_lab::kernel::rational::format_rational;
use noetherian_lab::kernel::{PointSet, SampleUniverse};
use noetherian_lab::lattice;
use noetherian_lab::patterns::{self, Family, Side, VariationSpec};
use noetherian_lab::poset::{self, PCondition, DEFAULT_ORACLE_LIMIT};
use noetherian_lab::{Error, Parallelism};

use super::{Cli, Command, DetectCmd, FamilyArg, GenArgs, GenKind, HammingCmd, PosetCmd, SideArg};

pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

fn ok(report: Value) -> Result<Outcome> {
    Ok(Outcome { report, passed: true })
}

fn verdict(report: Value, passed: bool) -> Result<Outcome> {
    Ok(Outcome { report, passed })
}

fn instance(path: &Path) -> Result<SampleUniverse> {
    io::read_instance(path).with_context(|| format!("reading instance {}", path.display()))
}

fn text(path: &Path) -> Result<String> {
    Ok(io::read(path)?)
}

fn set_json(s: &PointSet) -> Value {
    json!(s.to_vec())
}

pub fn run(cli: &Cli, bounds: &BTreeMap<String, u64>) -> Result<Outcome> {
    let mode = if cli.sequential {
        Parallelism::Sequential
    } else {
        Parallelism::default()
    };
    let bound = |name: &str, default: u64| bounds.get(name).copied().unwrap_or(default);
    match &cli.command {
        Command::Gen(args) => generate(cli.seed, args),
        Command::Adj { instance: path, pair } => {
            let u = instance(path)?;
            match pair.as_deref() {
                Some(&[i, j]) => {
                    if i >= u.len() || j >= u.len() {
                        bail!("index out of range for a universe of {} points", u.len());
                    }
                    ok(json!({ "i": i, "j": j, "adjacent": u.adjacent(i, j) }))
                }
                _ => {
                    let edges: Vec<(usize, usize)> = (0..u.len())
                        .flat_map(|i| {
                            u.neighbors(i)
                                .iter()
                                .filter(move |&j| j > i)
                                .map(move |j| (i, j))
                                .collect::<Vec<_>>()
                        })
                        .collect();
                    ok(json!({ "points": u.len(), "edges": edges }))
                }
            }
        }
        Command::Detect(cmd) => detect(cmd, mode),
        Command::Lattice {
            instance: path,
            set,
            max_arity,
        } => {
            let u = instance(path)?;
            lattice_report(&u, set.as_deref(), *max_arity, mode)
        }
        Command::Color {
            instance: path,
            condition,
            stages,
            verify,
        } => {
            let u = instance(path)?;
            if let Some(file) = verify {
                let c = io::parse_coloring(&u, &text(file)?)?;
                let check = c.check(&u);
                let total = c.assignment.len() == u.len();
                return verdict(
                    json!({ "proper_and_suitable": check.is_ok(), "total": total, "error": check.err().map(|e| e.to_string()) }),
                    total && c.is_suitable_and_proper(&u),
                );
            }
            let p = match condition {
                Some(file) => io::parse_p_condition(&u, &text(file)?)?,
                None => PCondition::empty(),
            };
            let c = match stages {
                Some(file) => {
                    let chain: StageChain = serde_json::from_str(&text(file)?).context("parsing stage chain")?;
                    coloring::stitch_colorings(&u, &chain, &p)?
                }
                None if condition.is_some() => coloring::extend_coloring(&u, &p)?,
                None => coloring::greedy_coloring(&u, None)?,
            };
            color_report(&u, &c, &p)
        }
        Command::Poset(cmd) => poset_cmd(cmd, bound("oracle", DEFAULT_ORACLE_LIMIT as u64) as u128, bounds, mode),
        Command::Hamming(cmd) => hamming_cmd(cmd, bound("chromatic", 24) as usize, mode),
        Command::Campaign { suites, list } => {
            if *list {
                let all: Vec<Value> = Suite::ALL
                    .iter()
                    .map(|s| json!({ "suite": s.name(), "inputs": s.inputs() }))
                    .collect();
                return ok(json!(all));
            }
            let chosen = if suites.is_empty() {
                Suite::defaults()
            } else {
                suites
                    .iter()
                    .map(|s| Suite::from_name(s))
                    .collect::<Result<Vec<_>, Error>>()?
            };
            let config = RunConfig {
                seed: cli.seed,
                trials: cli.trials,
                bounds: bounds.clone(),
            };
            let report = campaign::run_campaign(&config, &chosen, mode)?;
            let passed = report.passed;
            verdict(serde_json::to_value(report)?, passed)
        }
    }
}

fn generate(seed: u64, args: &GenArgs) -> Result<Outcome> {
    let mut rng = gen::rng(seed);
    let u = match args.kind {
        GenKind::Line => gen::line(&mut rng, args.max_points)?,
        GenKind::Plane => gen::plane(&mut rng, args.max_points)?,
        GenKind::Hamming => gen::hamming(&mut rng)?,
        GenKind::Explicit => gen::explicit(&mut rng, 2, args.max_points, args.edge_percent)?,
        GenKind::Diagonal => hamming::make_diagonal_hamming(args.breadth, hamming::DEFAULT_SIZE_BOUND)?,
        GenKind::Uniform => hamming::make_uniform_hamming(args.breadth, args.alphabet, hamming::DEFAULT_SIZE_BOUND)?,
    };
    ok(serde_json::to_value(io::InstanceFile::from_universe(&u))?)
}

fn detect(cmd: &DetectCmd, mode: Parallelism) -> Result<Outcome> {
    match cmd {
        DetectCmd::Pattern {
            instance: path,
            family,
            left,
            right,
            depth,
        } => {
            let u = instance(path)?;
            let side = |s: &SideArg| match s {
                SideArg::Clique => Side::Clique,
                SideArg::Anticlique => Side::Anticlique,
            };
            let family = match family {
                FamilyArg::Half => Family::Half,
                FamilyArg::ThreeQuarter => Family::ThreeQuarter,
            };
            let spec = VariationSpec::new(family, side(left), side(right), *depth)?;
            let search = patterns::find_variation_prefix(&u, &spec, mode)?;
            ok(json!({
                "pattern": spec,
                "witness": search.witness.as_ref().map(|w| w.mapping.clone()),
                "nodes_explored": search.nodes_explored,
            }))
        }
        DetectCmd::Clique { instance: path, size } => {
            let u = instance(path)?;
            let found = patterns::find_clique(&u, *size, mode);
            ok(json!({ "size": size, "clique": found.as_ref().map(set_json) }))
        }
        DetectCmd::K2n { instance: path, n } => {
            let u = instance(path)?;
            let found = patterns::find_bipartite_k2n(&u, *n, mode);
            ok(json!({
                "n": n,
                "witness": found.map(|w| json!({ "pair": w.pair, "common": w.common.to_vec() })),
            }))
        }
    }
}

fn lattice_report(u: &SampleUniverse, set: Option<&[usize]>, max_arity: usize, mode: Parallelism) -> Result<Outcome> {
    let chain = lattice::longest_descent_chain(u, max_arity);
    let mut minimal_sizes: BTreeMap<usize, usize> = BTreeMap::new();
    let mut closure_sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..u.len() {
        for j in i..u.len() {
            let a = PointSet::from_indices(u.len(), [i, j]);
            *minimal_sizes
                .entry(lattice::minimal_subfamily(u, &a, mode).set.len())
                .or_default() += 1;
            *closure_sizes.entry(lattice::good_closure(u, &a).len()).or_default() += 1;
        }
    }
    let mut report = json!({
        "points": u.len(),
        "descent_chain": {
            "length": chain.len(),
            "exhaustive": chain.exhaustive,
            "extents": chain.elements.iter().map(|e| set_json(&e.extent)).collect::<Vec<_>>(),
        },
        "minimal_subfamily_sizes": minimal_sizes,
        "good_closure_sizes": closure_sizes,
    });
    if let Some(indices) = set {
        if let Some(&bad) = indices.iter().find(|&&i| i >= u.len()) {
            bail!("index {bad} out of range for a universe of {} points", u.len());
        }
        let a = PointSet::from_indices(u.len(), indices.iter().copied());
        let min = lattice::minimal_subfamily(u, &a, mode);
        report["set"] = json!({
            "a": set_json(&a),
            "common_neighborhood": set_json(&u.common_neighborhood(&a)),
            "heart": set_json(&lattice::heart(u, &a)),
            "good_closure": set_json(&lattice::good_closure(u, &a)),
            "minimal_subfamily": set_json(&min.set),
            "certified": min.certified,
        });
    }
    ok(report)
}

fn color_report(u: &SampleUniverse, c: &BoxColoring, p: &PCondition) -> Result<Outcome> {
    let proper = c.is_suitable_and_proper(u);
    let below = c.to_condition(u).is_ok_and(|cp| poset::p_leq(u, &cp, p));
    verdict(
        json!({
            "coloring": c,
            "distinct_boxes": c.distinct_boxes(),
            "proper_and_suitable": proper,
            "below_condition": below,
        }),
        proper && below,
    )
}

fn poset_cmd(cmd: &PosetCmd, limit: u128, bounds: &BTreeMap<String, u64>, mode: Parallelism) -> Result<Outcome> {
    match cmd {
        PosetCmd::Compat {
            instance: path,
            first,
            second,
            control,
        } => {
            let u = instance(path)?;
            let conflict = if *control {
                let a = io::parse_q_condition(&u, &text(first)?)?;
                let b = io::parse_q_condition(&u, &text(second)?)?;
                poset::q_conflict(&u, &a, &b).map(|c| c.describe(&u))
            } else {
                let a = io::parse_p_condition(&u, &text(first)?)?;
                let b = io::parse_p_condition(&u, &text(second)?)?;
                poset::p_conflict(&u, &a, &b).map(|c| c.describe(&u))
            };
            ok(json!({ "compatible": conflict.is_none(), "conflict": conflict }))
        }
        PosetCmd::LowerBound {
            instance: path,
            conditions,
            point,
        } => {
            let u = instance(path)?;
            let family = io::parse_p_conditions(&u, &text(conditions)?)?;
            match poset::p_lower_bound(&u, &family, *point) {
                Ok(q) => ok(json!({ "lower_bound": q })),
                Err(Error::Incompatible(why)) => verdict(json!({ "lower_bound": null, "reason": why }), false),
                Err(e) => Err(e.into()),
            }
        }
        PosetCmd::Ramsey {
            instance: path,
            conditions,
            location,
            size,
        } => {
            let u = instance(path)?;
            let family = io::parse_q_conditions(&u, &text(conditions)?)?;
            let loc = io::parse_location(&u, &text(location)?)?;
            let guarantee = poset::ramsey_bound(*size as u32, loc.len() as u32);
            let found = poset::ramsey_compatible_subset(&u, &family, &loc, *size)?;
            let report = json!({
                "size": size,
                "guarantee": guarantee.to_string(),
                "indices": found.as_ref().map(|s| s.indices.clone()),
                "lower_bound": found.as_ref().map(|s| s.lower_bound.clone()),
            });
            verdict(report, found.is_some())
        }
        PosetCmd::Liminf {
            instance: path,
            conditions,
            location,
            test,
        } => {
            let u = instance(path)?;
            let family = io::parse_q_conditions(&u, &text(conditions)?)?;
            let loc = io::parse_location(&u, &text(location)?)?;
            if let Some(&bad) = test.iter().find(|&&i| i >= u.len()) {
                bail!("test point {bad} out of range");
            }
            let test_set = PointSet::from_indices(u.len(), test.iter().copied());
            let threshold = bounds.get("thinning").map(|&t| t as usize);
            let thin = poset::liminf_thin(&u, &family, &loc, &test_set, threshold)?;
            ok(json!({
                "constant": thin.constant,
                "distinct": thin.distinct,
                "indices": thin.indices,
                "threshold": thin.threshold,
            }))
        }
        PosetCmd::Predense {
            instance: path,
            family,
            budget,
            reduce,
            location,
        } => {
            let u = instance(path)?;
            let d = io::parse_q_conditions(&u, &text(family)?)?;
            let arity = bounds
                .get("max_arity")
                .map_or_else(|| poset::required_arity(&u, &d), |&a| a as usize);
            if let Some(qfile) = reduce {
                let q = io::parse_q_condition(&u, &text(qfile)?)?;
                let loc_path = location.as_ref().ok_or_else(|| anyhow!("--reduce needs --location"))?;
                let loc = io::parse_location(&u, &text(loc_path)?)?;
                return match poset::predense_reduce(&u, &d, &q, &loc, arity) {
                    Ok(r) => {
                        ok(json!({ "reduced": r.r, "b": set_json(&r.b), "c": set_json(&r.c), "max_arity": arity }))
                    }
                    Err(e @ Error::ReductionFailure { .. }) => {
                        verdict(json!({ "reduced": null, "reason": e.to_string() }), false)
                    }
                    Err(e) => Err(e.into()),
                };
            }
            let budget = budget.unwrap_or_else(|| poset::sufficient_budget(&u, &d));
            let witness = poset::uncovered_condition(&u, &d, &u.full_set(), budget, limit, mode)?;
            let reduced = poset::predense_check_reduced(&u, &d, budget, arity, limit, mode)?;
            let agree = witness.is_none() == reduced;
            verdict(
                json!({
                    "budget": budget,
                    "max_arity": arity,
                    "predense": witness.is_none(),
                    "predense_reduced": reduced,
                    "uncovered": witness,
                }),
                agree,
            )
        }
    }
}

fn hamming_cmd(cmd: &HammingCmd, chromatic_bound: usize, mode: Parallelism) -> Result<Outcome> {
    let bound = hamming::DEFAULT_SIZE_BOUND;
    match cmd {
        HammingCmd::Gen { breadth, alphabet } => {
            let u = match alphabet {
                Some(k) => hamming::make_uniform_hamming(*breadth, *k, bound)?,
                None => hamming::make_diagonal_hamming(*breadth, bound)?,
            };
            ok(serde_json::to_value(io::InstanceFile::from_universe(&u))?)
        }
        HammingCmd::Chi { breadth } => {
            let u = hamming::make_diagonal_hamming(*breadth, bound)?;
            let chi = coloring::chromatic_number(&u, chromatic_bound)?;
            ok(
                json!({ "breadth": breadth, "points": u.len(), "chromatic_number": chi.number, "coloring": chi.coloring }),
            )
        }
        HammingCmd::Vitali { breadth, alphabet } => {
            let eps = hamming::epsilon_matrix(*breadth, *alphabet)?;
            let u = hamming::make_uniform_hamming(*breadth, *alphabet as u64, bound)?;
            let report = hamming::verify_vitali_homomorphism(&u, &eps, mode)?;
            let passed = report.passed();
            verdict(
                json!({ "epsilon_sum": format_rational(&eps.sum()), "report": report }),
                passed,
            )
        }
        HammingCmd::Embed { breadth } => {
            let eps = EpsilonSequence::powers_of_four(*breadth);
            let report = hamming::verify_embedding(*breadth, &eps, mode)?;
            let passed = report.passed();
            let a: Vec<String> = eps.distance_set().iter().map(format_rational).collect();
            verdict(json!({ "distance_set": a, "report": report }), passed)
        }
        HammingCmd::Sigma { breadth, pieces } => {
            let u = hamming::make_diagonal_hamming(*breadth, bound)?;
            let raw: Value = serde_json::from_str(&text(pieces)?).context("parsing pieces")?;
            let entries = raw.as_array().ok_or_else(|| anyhow!("pieces: expected an array"))?;
            let mut parts = Vec::with_capacity(entries.len());
            for (i, e) in entries.iter().enumerate() {
                let n = e["n"]
                    .as_u64()
                    .ok_or_else(|| anyhow!("pieces[{i}].n: expected a natural number"))?;
                let pts = e["points"]
                    .as_array()
                    .ok_or_else(|| anyhow!("pieces[{i}].points: expected an array"))?
                    .iter()
                    .map(|v| v.as_u64().map(|x| x as usize).filter(|&x| x < u.len()))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| anyhow!("pieces[{i}].points: expected indices below {}", u.len()))?;
                parts.push((n as usize, PointSet::from_indices(u.len(), pts)));
            }
            let report = hamming::sigma_bounded_check(&u, &parts, chromatic_bound)?;
            let passed = report.passed();
            verdict(serde_json::to_value(report)?, passed)
        }
    }
}
