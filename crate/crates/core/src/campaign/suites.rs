//! The property suites. Each trial draws its inputs from its own seeded
//! stream and records one verdict per property it touches.

use std::collections::BTreeMap;

use num::{BigUint, Signed};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::gen::{self, UniverseKind};
use super::oracle;
use super::Bounds;
use crate::coloring::{self, BoxColoring};
use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::hamming::{self, EpsilonMatrix, EpsilonSequence};
use crate::io::InstanceFile;
use crate::kernel::rational::{int, rat, Rational};
use crate::kernel::{GraphInstance, Point, PointSet, SampleUniverse, TaggedBox};
use crate::lattice;
use crate::patterns::{self, VariationSpec};
use crate::poset::{self, Location, PCondition};

const SEQ: Parallelism = Parallelism::Sequential;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    LowerBoundEquivalence,
    PredenseEquivalence,
    RamseyCentered,
    ColoringConstructions,
    LatticeLaws,
    PatternDetector,
    VitaliEmbedding,
    ChromaticHamming,
    MutationSelftest,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::LowerBoundEquivalence,
        Suite::PredenseEquivalence,
        Suite::RamseyCentered,
        Suite::ColoringConstructions,
        Suite::LatticeLaws,
        Suite::PatternDetector,
        Suite::VitaliEmbedding,
        Suite::ChromaticHamming,
        Suite::MutationSelftest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LowerBoundEquivalence => "lower-bound-equivalence",
            Suite::PredenseEquivalence => "predense-equivalence",
            Suite::RamseyCentered => "ramsey-centered",
            Suite::ColoringConstructions => "coloring-constructions",
            Suite::LatticeLaws => "lattice-laws",
            Suite::PatternDetector => "pattern-detector",
            Suite::VitaliEmbedding => "vitali-embedding",
            Suite::ChromaticHamming => "chromatic-hamming",
            Suite::MutationSelftest => "mutation-selftest",
        }
    }

    pub fn from_name(name: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::UnknownSuite(name.to_string()))
    }

    /// The suites a plain campaign runs; the self-test is meant to fail.
    pub fn defaults() -> Vec<Suite> {
        Suite::ALL
            .into_iter()
            .filter(|&s| s != Suite::MutationSelftest)
            .collect()
    }

    pub fn inputs(self) -> &'static str {
        match self {
            Suite::LowerBoundEquivalence | Suite::MutationSelftest => {
                "universe of any kind; 1 to 4 P-conditions on the good closure of a p = 1/4 subset, boxes at a uniform level in [0, 3]; target point with probability 1/2"
            }
            Suite::PredenseEquivalence => {
                "line, hamming or explicit universe of at most 8 points; budget uniform in [1, color_budget]; 1 to 3 Q-conditions of at most 2 points"
            }
            Suite::RamseyCentered => {
                "points i/4 in one or two level-0 boxes; 6 (one box) or ramsey_bound(3, 2) (two boxes) conditions at the location, points uniform per box; thinning test set p = 1/2"
            }
            Suite::ColoringConstructions => "universe of any kind; one P-condition; stage chain growing by p = 3/10 subsets to the universe",
            Suite::LatticeLaws => "universe of any kind; two p = 3/10 subsets",
            Suite::PatternDetector => {
                "explicit graph of 4 to 12 vertices, depth 2 (3 when at most 10 vertices); planted depth-5 prefix in a graph of planted_vertices vertices"
            }
            Suite::VitaliEmbedding => {
                "uniform Hamming of breadth [1, 4] and alphabet [1, 3] with ε a random permutation of 2^-(1+i); ε_n = r_n 4^-n with r_n in {1, 3/4, 5/8} for N in [1, 5]"
            }
            Suite::ChromaticHamming => "diagonal truncation N uniform in [1, 4], full every fourth trial, otherwise words kept with p = 7/10",
        }
    }

    pub(super) fn run(self, bounds: &Bounds, rng: &mut ChaCha8Rng, trial: usize, out: &mut Verdicts) -> Result<()> {
        match self {
            Suite::LowerBoundEquivalence => lower_bound_equivalence(bounds, rng, out, false, trial),
            Suite::MutationSelftest => lower_bound_equivalence(bounds, rng, out, true, trial),
            Suite::PredenseEquivalence => predense(bounds, rng, out),
            Suite::RamseyCentered => ramsey(bounds, rng, out),
            Suite::ColoringConstructions => colorings(bounds, rng, out),
            Suite::LatticeLaws => lattice_laws(bounds, rng, out),
            Suite::PatternDetector => pattern_detector(bounds, rng, out),
            Suite::VitaliEmbedding => vitali(rng, out),
            Suite::ChromaticHamming => chromatic(bounds, rng, out, trial),
        }
    }
}

/// Verdicts of one trial, in the order they were recorded.
#[derive(Debug, Default)]
pub struct Verdicts {
    pub(super) entries: Vec<(&'static str, Option<Value>)>,
    /// Labels counted into the suite's coverage table.
    pub(super) tallies: Vec<&'static str>,
}

impl Verdicts {
    fn check(&mut self, property: &'static str, ok: bool, detail: impl FnOnce() -> Value) {
        self.entries.push((property, (!ok).then(detail)));
    }

    fn tally(&mut self, label: &'static str) {
        self.tallies.push(label);
    }

    pub(super) fn error(&mut self, e: &Error) {
        self.entries
            .push(("trial-completed", Some(json!({ "error": e.to_string() }))));
    }
}

fn universe_json(u: &SampleUniverse) -> Value {
    serde_json::to_value(InstanceFile::from_universe(u)).expect("instance files serialize")
}

fn total_and_proper(u: &SampleUniverse, c: &BoxColoring) -> bool {
    c.assignment.len() == u.len()
        && c.assignment.iter().all(|(&x, b)| b.contains(u.point(x)))
        && c.assignment
            .iter()
            .all(|(&x, b)| c.assignment.iter().all(|(&y, d)| x == y || b != d || !u.adjacent(x, y)))
}

fn literal_compatible(u: &SampleUniverse, p0: &PCondition, p1: &PCondition) -> bool {
    let (a0, a1) = (p0.assignment(), p1.assignment());
    a0.iter().all(|(x, b)| a1.get(x).is_none_or(|c| c == b))
        && a0
            .iter()
            .filter(|(x, _)| !a1.contains_key(x))
            .all(|(&x, b)| a1.keys().all(|&y| !(u.adjacent(x, y) && b.contains(u.point(y)))))
}

/// The fixed family on which the one-sided criterion goes wrong.
fn literal_counterexample() -> Result<(SampleUniverse, Vec<PCondition>)> {
    let g = GraphInstance::distance(1, vec![rat(1, 4)])?;
    let u = SampleUniverse::new(g, (-1..=2).map(|i| Point::new(vec![rat(i, 2)])).collect())?;
    let small = TaggedBox::from_ints(0, 2, &[-1])?;
    let wide = TaggedBox::from_ints(0, 0, &[-1])?;
    let p0 = PCondition::new(&u, [(1, small.clone())].into_iter().collect())?;
    let p1 = PCondition::new(&u, [(1, small), (2, wide)].into_iter().collect())?;
    Ok((u, vec![p0, p1]))
}

fn lower_bound_equivalence(
    bounds: &Bounds,
    rng: &mut ChaCha8Rng,
    out: &mut Verdicts,
    corrupted: bool,
    trial: usize,
) -> Result<()> {
    let (u, family, x) = if corrupted && trial == 0 {
        let (u, family) = literal_counterexample()?;
        (u, family, None)
    } else {
        let (_, u) = gen::any_universe(rng, bounds.max_points.min(12), bounds.edge_percent)?;
        let k = rng.random_range(1..=4);
        let family = (0..k).map(|_| gen::p_condition(rng, &u)).collect::<Result<Vec<_>>>()?;
        let x = rng.random_bool(0.5).then(|| rng.random_range(0..u.len()));
        (u, family, x)
    };
    let pairwise = family.iter().enumerate().all(|(i, p)| {
        family[i + 1..].iter().all(|q| {
            if corrupted {
                literal_compatible(&u, p, q)
            } else {
                poset::p_compatible(&u, p, q)
            }
        })
    });
    out.tally(if pairwise {
        "compatible-families"
    } else {
        "incompatible-families"
    });
    let maps: Vec<&BTreeMap<usize, TaggedBox>> = family.iter().map(PCondition::assignment).collect();
    let exists = oracle::p_family_has_lower_bound(&u, &maps);
    let detail = || json!({ "universe": universe_json(&u), "conditions": family, "point": x, "pairwise": pairwise, "oracle": exists });
    out.check("criterion-matches-oracle", pairwise == exists, detail);
    if corrupted {
        return Ok(());
    }
    let bound = poset::p_lower_bound(&u, &family, x);
    let ok = match &bound {
        Ok(q) => {
            pairwise
                && q.validate(&u).is_ok()
                && x.is_none_or(|x| q.get(x).is_some())
                && family.iter().all(|p| poset::p_leq(&u, q, p))
        }
        Err(Error::Incompatible(_)) => !pairwise,
        Err(_) => false,
    };
    out.check("lower-bound-iff-compatible", ok, || {
        json!({
            "universe": universe_json(&u),
            "conditions": family,
            "point": x,
            "pairwise": pairwise,
            "bound": bound.as_ref().map_err(|e| e.to_string()),
        })
    });
    Ok(())
}

fn predense(bounds: &Bounds, rng: &mut ChaCha8Rng, out: &mut Verdicts) -> Result<()> {
    let kind = *[UniverseKind::Line, UniverseKind::Hamming, UniverseKind::Explicit]
        .choose(rng)
        .expect("nonempty");
    let u = gen::universe(rng, kind, bounds.max_points.min(8), bounds.edge_percent)?;
    let budget = rng.random_range(1..=bounds.color_budget.max(1));
    let k = rng.random_range(1..=3);
    let d = (0..k)
        .map(|_| gen::q_condition(rng, &u, 2, budget))
        .collect::<Result<Vec<_>>>()?;
    let arity = bounds.max_arity.unwrap_or_else(|| poset::required_arity(&u, &d));
    let full = poset::uncovered_condition(&u, &d, &u.full_set(), budget, bounds.oracle, SEQ)?;
    let reduced = poset::predense_check_reduced(&u, &d, budget, arity, bounds.oracle, SEQ)?;
    let detail = || json!({ "universe": universe_json(&u), "family": d, "budget": budget, "max_arity": arity, "uncovered": full });
    out.check("full-equals-reduced", full.is_none() == reduced, detail);
    out.tally(if full.is_none() {
        "predense-families"
    } else {
        "non-predense-families"
    });
    if let Some(q) = full {
        let loc = Location::for_condition(&u, &q)?;
        let reduction = poset::predense_reduce(&u, &d, &q, &loc, arity);
        let ok = match &reduction {
            Ok(red) => {
                loc.is_at(&u, &red.r)
                    && red.r.domain(&u).is_subset(&red.c)
                    && d.iter()
                        .all(|s| !oracle::q_union_proper(&u, &[red.r.assignment(), s.assignment()]))
            }
            Err(_) => false,
        };
        out.check("reduction-verified", ok, || {
            json!({
                "universe": universe_json(&u),
                "family": d,
                "q": q,
                "location": loc,
                "result": reduction.as_ref().map(|r| &r.r).map_err(|e| e.to_string()),
            })
        });
    }
    Ok(())
}

fn ramsey(bounds: &Bounds, rng: &mut ChaCha8Rng, out: &mut Verdicts) -> Result<()> {
    out.check(
        "ramsey-bound-3-1",
        poset::ramsey_bound(3, 1) == BigUint::from(6u32),
        || json!(poset::ramsey_bound(3, 1).to_string()),
    );
    for boxes in [1usize, 2] {
        let u = gen::quarter_line(boxes)?;
        let loc = gen::quarter_location(&u, boxes)?;
        let n: usize = poset::ramsey_bound(3, boxes as u32).try_into().expect("small bound");
        let family = (0..n)
            .map(|_| gen::q_at_location(rng, &u, &loc))
            .collect::<Result<Vec<_>>>()?;
        let found = poset::ramsey_compatible_subset(&u, &family, &loc, 3)?;
        let all_compatible = family
            .iter()
            .enumerate()
            .all(|(i, a)| family[i + 1..].iter().all(|b| poset::q_compatible(&u, a, b)));
        if !all_compatible {
            out.tally(if boxes == 1 {
                "one-box-with-conflicts"
            } else {
                "two-box-with-conflicts"
            });
        }
        let ok = found.as_ref().is_some_and(|sub| {
            let chosen: Vec<&BTreeMap<usize, u64>> = sub.indices.iter().map(|&i| family[i].assignment()).collect();
            sub.indices.len() == 3
                && chosen
                    .iter()
                    .enumerate()
                    .all(|(i, a)| chosen[i + 1..].iter().all(|b| oracle::q_union_proper(&u, &[a, b])))
                && oracle::q_union_proper(&u, &[sub.lower_bound.assignment()])
                && chosen
                    .iter()
                    .all(|a| a.iter().all(|(x, c)| sub.lower_bound.get(*x) == Some(*c)))
        });
        let name = if boxes == 1 { "one-box-triple" } else { "two-box-triple" };
        out.check(
            name,
            ok,
            || json!({ "universe": universe_json(&u), "location": loc, "conditions": family }),
        );

        if boxes == 2 {
            let test_set = gen::subset(rng, &u, 0.5);
            let thin = poset::liminf_thin(&u, &family, &loc, &test_set, bounds.thinning)?;
            let sel: Vec<Vec<usize>> = family
                .iter()
                .map(|q| loc.selection(&u, q).expect("at the location"))
                .collect();
            let kept = &thin.indices;
            let distinct = thin.distinct.iter().all(|&k| {
                kept.iter()
                    .enumerate()
                    .all(|(a, &i)| kept[a + 1..].iter().all(|&j| sel[i][k] != sel[j][k]))
            });
            let constant = thin.constant.iter().all(|&k| sel.iter().all(|s| s[k] == sel[0][k]));
            let bounded = test_set.iter().all(|t| {
                thin.distinct.iter().all(|&k| {
                    let hits = kept.iter().filter(|&&i| u.adjacent(t, sel[i][k])).count();
                    hits <= thin.threshold || hits == kept.len()
                })
            });
            out.check(
                "liminf-thinning",
                !kept.is_empty() && distinct && constant && bounded,
                || json!({ "conditions": family, "test_set": test_set.to_vec(), "kept": kept }),
            );
        }
    }
    Ok(())
}

fn colorings(bounds: &Bounds, rng: &mut ChaCha8Rng, out: &mut Verdicts) -> Result<()> {
    let (_, u) = gen::any_universe(rng, bounds.max_points, bounds.edge_percent)?;
    let greedy = coloring::greedy_coloring(&u, None)?;
    out.check(
        "greedy",
        total_and_proper(&u, &greedy),
        || json!({ "universe": universe_json(&u), "coloring": greedy }),
    );

    let p = gen::p_condition(rng, &u)?;
    let below = |c: &BoxColoring| c.to_condition(&u).is_ok_and(|cp| poset::p_leq(&u, &cp, &p));
    let extended = coloring::extend_coloring(&u, &p)?;
    out.check(
        "extend",
        total_and_proper(&u, &extended) && below(&extended),
        || json!({ "universe": universe_json(&u), "p": p, "coloring": extended }),
    );

    let chain = gen::stage_chain(rng, &u, &p.domain(&u));
    let stitched = coloring::stitch_colorings(&u, &chain, &p)?;
    out.check(
        "stitch",
        total_and_proper(&u, &stitched) && below(&stitched),
        || json!({ "universe": universe_json(&u), "p": p, "chain": chain, "coloring": stitched }),
    );
    Ok(())
}

fn naive_gamma(u: &SampleUniverse, a: &PointSet) -> PointSet {
    PointSet::from_indices(
        u.len(),
        (0..u.len()).filter(|&x| a.iter().all(|y| x == y || u.adjacent(x, y))),
    )
}

fn lattice_laws(bounds: &Bounds, rng: &mut ChaCha8Rng, out: &mut Verdicts) -> Result<()> {
    let (kind, u) = gen::any_universe(rng, bounds.max_points, bounds.edge_percent)?;
    let a = gen::subset(rng, &u, 0.3);
    let b = gen::subset(rng, &u, 0.3);
    let ab = a.union(&b);
    let detail = || json!({ "universe": universe_json(&u), "a": a.to_vec(), "b": b.to_vec() });

    let law = u.common_neighborhood(&ab) == u.common_neighborhood(&a).intersection(&u.common_neighborhood(&b))
        && u.common_neighborhood(&a) == naive_gamma(&u, &a);
    out.check("intersection-law", law, detail);

    let cl_a = lattice::good_closure(&u, &a);
    let cl_ab = lattice::good_closure(&u, &ab);
    out.check("closure-extensive", a.is_subset(&cl_a), detail);
    out.check("closure-idempotent", lattice::good_closure(&u, &cl_a) == cl_a, detail);
    out.check("closure-monotone", cl_a.is_subset(&cl_ab), detail);

    let h = lattice::heart(&u, &a);
    let clique = h.iter().all(|x| h.iter().all(|y| x == y || u.adjacent(x, y)));
    out.check("heart-is-clique", clique && h.is_subset(&naive_gamma(&u, &a)), detail);

    let min = lattice::minimal_subfamily(&u, &a, SEQ);
    let target = naive_gamma(&u, &a);
    let preserved = min.set.is_subset(&a) && naive_gamma(&u, &min.set) == target;
    let minimal = !min.certified
        || min.set.iter().all(|x| {
            let mut smaller = min.set.clone();
            smaller.remove(x);
            naive_gamma(&u, &smaller) != target
        });
    out.check("minimal-subfamily", preserved && minimal, detail);
    if kind == UniverseKind::Plane {
        out.check("planar-bound", min.set.len() <= 128, detail);
    }
    Ok(())
}

fn pattern_detector(bounds: &Bounds, rng: &mut ChaCha8Rng, out: &mut Verdicts) -> Result<()> {
    let u = gen::explicit(rng, 4, bounds.max_points.clamp(4, 12), bounds.edge_percent)?;
    let depth = if u.len() <= 10 { rng.random_range(2..=3) } else { 2 };
    let spec = *VariationSpec::all(depth)?.choose(rng).expect("eight specs");
    let found = patterns::find_variation_prefix(&u, &spec, SEQ)?;
    let expected = oracle::pattern_embeds(&u, &spec);
    let witnessed = found.witness.as_ref().is_none_or(|w| w.verify(&u) && w.spec == spec);
    out.tally(if expected {
        "small-pattern-present"
    } else {
        "small-pattern-absent"
    });
    out.check(
        "agrees-with-oracle",
        found.witness.is_some() == expected && witnessed,
        || json!({ "universe": universe_json(&u), "spec": spec, "oracle": expected }),
    );

    let depth = bounds.planted_depth.max(2);
    let spec = *VariationSpec::all(depth)?.choose(rng).expect("eight specs");
    let n = bounds.planted_vertices.max(2 * depth);
    let (u, mapping) = gen::planted(rng, &spec, n, bounds.edge_percent)?;
    let found = patterns::find_variation_prefix(&u, &spec, SEQ)?;
    let ok = found.witness.as_ref().is_some_and(|w| w.verify(&u));
    out.check(
        "planted-recovered",
        ok,
        || json!({ "universe": universe_json(&u), "spec": spec, "planted": mapping }),
    );
    Ok(())
}

fn vitali(rng: &mut ChaCha8Rng, out: &mut Verdicts) -> Result<()> {
    let breadth = rng.random_range(1..=4usize);
    let alphabet = rng.random_range(1..=3usize);
    let mut exponents: Vec<u32> = (0..(breadth * alphabet) as u32).collect();
    exponents.shuffle(rng);
    let values = exponents
        .chunks(alphabet)
        .map(|row| {
            row.iter()
                .map(|&e| Rational::new(1.into(), num::BigInt::from(2).pow(e + 1)))
                .collect()
        })
        .collect();
    let eps = EpsilonMatrix::new(values, int(1))?;
    let u = hamming::make_uniform_hamming(breadth, alphabet as u64, hamming::DEFAULT_SIZE_BOUND)?;
    let report = hamming::verify_vitali_homomorphism(&u, &eps, SEQ)?;
    let images = u
        .points()
        .iter()
        .map(|x| hamming::vitali_map(x, &eps))
        .collect::<Result<Vec<_>>>()?;
    let naive = (0..u.len()).all(|x| u.neighbors(x).iter().all(|y| images[x] != images[y]));
    out.check(
        "vitali-homomorphism",
        report.passed() && naive,
        || json!({ "breadth": breadth, "exponents": exponents }),
    );

    let n = rng.random_range(1..=5usize);
    let scales = [int(1), rat(3, 4), rat(5, 8)];
    let values: Vec<Rational> = (0..n)
        .map(|k| scales.choose(rng).expect("nonempty") * Rational::new(1.into(), num::BigInt::from(4).pow(k as u32)))
        .collect();
    let seq = EpsilonSequence::new(values.clone(), int(2))?;
    let report = hamming::verify_embedding(n, &seq, SEQ)?;
    let emb = hamming::embed_diagonal_into_distance(n, &seq)?;
    let a = seq.distance_set();
    let naive = (0..emb.universe.len()).all(|x| {
        emb.universe
            .neighbors(x)
            .iter()
            .all(|y| a.binary_search(&(&emb.images[x] - &emb.images[y]).abs()).is_ok())
    });
    out.check("embedding-exact", report.passed() && naive, || {
        json!({ "breadth": n, "epsilon": values.iter().map(crate::kernel::rational::format_rational).collect::<Vec<_>>() })
    });
    Ok(())
}

fn chromatic(bounds: &Bounds, rng: &mut ChaCha8Rng, out: &mut Verdicts, trial: usize) -> Result<()> {
    let breadth = rng.random_range(1..=4usize);
    let full = hamming::make_diagonal_hamming(breadth, hamming::DEFAULT_SIZE_BOUND)?;
    let whole = trial.is_multiple_of(4);
    let u = if whole {
        full
    } else {
        let mut keep: Vec<Point> = full.points().iter().filter(|_| rng.random_bool(0.7)).cloned().collect();
        if keep.is_empty() {
            keep.push(full.point(0).clone());
        }
        SampleUniverse::new(full.instance().clone(), keep)?
    };
    let chi = coloring::chromatic_number(&u, bounds.chromatic)?;
    let expected = oracle::chromatic_number(&u);
    let detail = || json!({ "universe": universe_json(&u), "chi": chi.number, "oracle": expected });
    out.check(
        "matches-oracle",
        chi.number == expected && coloring::is_proper_natural(&u, &chi.coloring),
        detail,
    );
    if whole {
        out.check("diagonal-value", chi.number == breadth, detail);
    }
    Ok(())
}
