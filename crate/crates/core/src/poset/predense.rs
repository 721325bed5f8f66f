//! Predensity of finite families of control conditions, by brute force over
//! the whole universe and over the reduced point set `c`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exec::{self, Parallelism};
use crate::kernel::{PointSet, SampleUniverse};
use crate::lattice;

use super::control::{q_compatible, Location, QCondition};

/// Default cap on the number of candidate conditions a brute-force check may visit.
pub const DEFAULT_ORACLE_LIMIT: u128 = 1 << 22;

/// `b`, the union of the domains, and `c = b ∪ ⋃ Γ(a')` over nonempty
/// `a' ⊆ b` with `|a'| ≤ max_arity`.
pub fn reduced_points(universe: &SampleUniverse, d: &[QCondition], max_arity: usize) -> (PointSet, PointSet) {
    let mut b = universe.empty_set();
    for q in d {
        b.union_with(&q.domain(universe));
    }
    let mut c = b.clone();
    let items = b.to_vec();
    // depth-first over increasing index tuples
    let mut stack: Vec<(usize, usize, PointSet)> = items
        .iter()
        .enumerate()
        .map(|(i, &x)| (i, 1, universe.closed_neighborhood(x).clone()))
        .collect();
    while let Some((last, size, set)) = stack.pop() {
        c.union_with(&set);
        if size < max_arity {
            for (j, &y) in items.iter().enumerate().skip(last + 1) {
                stack.push((j, size + 1, set.intersection(universe.closed_neighborhood(y))));
            }
        }
    }
    (b, c)
}

/// Largest minimal generating subfamily of `b ∩ N(x)` over points `x ∉ b`
/// with a neighbor in `b`; the reduced check is exact from this arity on.
pub fn required_arity(universe: &SampleUniverse, d: &[QCondition]) -> usize {
    let mut b = universe.empty_set();
    for q in d {
        b.union_with(&q.domain(universe));
    }
    (0..universe.len())
        .filter(|&x| !b.contains(x))
        .map(|x| {
            let nb = b.intersection(&universe.neighbors(x));
            lattice::minimal_subfamily(universe, &nb, Parallelism::Sequential)
                .set
                .len()
        })
        .max()
        .unwrap_or(0)
        .max(1)
}

/// A color bound under which brute force decides true predensity.
///
/// An incompatible condition can be cut down to one witness point per member
/// and its colors above those of `d` renamed injectively.
pub fn sufficient_budget(universe: &SampleUniverse, d: &[QCondition]) -> u64 {
    let base = d.iter().filter_map(|q| q.max_color()).max().map_or(0, |m| m + 1);
    base + d.len().min(universe.len()) as u64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub r: QCondition,
    pub b: PointSet,
    pub c: PointSet,
}

/// Moves `q` into the reduced point set `c` at the same location while
/// keeping it incompatible with every member of `d`.
pub fn predense_reduce(
    universe: &SampleUniverse,
    d: &[QCondition],
    q: &QCondition,
    loc: &Location,
    max_arity: usize,
) -> Result<Reduction> {
    if d.is_empty() {
        return Err(Error::Precondition("reduction needs a nonempty family".into()));
    }
    let selection = loc
        .selection(universe, q)
        .ok_or_else(|| Error::Location("q is not at the location".into()))?;
    if let Some(i) = d.iter().position(|s| q_compatible(universe, q, s)) {
        return Err(Error::Precondition(format!("q is compatible with member {i}")));
    }
    let (b, c) = reduced_points(universe, d, max_arity);
    let mut r = BTreeMap::new();
    for (k, &x) in selection.iter().enumerate() {
        let o = &loc.boxes()[k];
        let y = if b.contains(x) {
            x
        } else {
            let cx = universe.common_neighborhood(&b.intersection(&universe.neighbors(x)));
            let in_box = PointSet::from_indices(
                universe.len(),
                (0..universe.len()).filter(|&i| o.contains(universe.point(i))),
            );
            let clique = cx.intersection(&in_box).intersection(&b);
            let disconnected = clique.iter().find(|&y| !universe.adjacent(x, y));
            if let Some(y) = disconnected {
                y
            } else {
                let mut pool = c.intersection(&cx).intersection(&in_box);
                pool.difference_with(&clique);
                pool.first().ok_or_else(|| Error::ReductionFailure {
                    box_index: k,
                    reason: format!(
                        "no point of c in the closed set around {} inside {o}",
                        universe.point(x)
                    ),
                })?
            }
        };
        r.insert(y, loc.colors()[k]);
    }
    let r = QCondition::new(universe, r)?;
    let verified =
        loc.is_at(universe, &r) && r.domain(universe).is_subset(&c) && d.iter().all(|s| !q_compatible(universe, &r, s));
    if !verified {
        return Err(Error::ReductionFailure {
            box_index: selection.len(),
            reason: "reduced condition failed verification".into(),
        });
    }
    Ok(Reduction { r, b, c })
}

/// First condition (domain inside `domain`, colors below `budget`)
/// compatible with no member of `d`.
pub fn uncovered_condition(
    universe: &SampleUniverse,
    d: &[QCondition],
    domain: &PointSet,
    budget: u64,
    limit: u128,
    mode: Parallelism,
) -> Result<Option<QCondition>> {
    let points = domain.to_vec();
    let radix = budget as u128 + 1;
    let total = radix
        .checked_pow(points.len() as u32)
        .filter(|&t| t <= limit)
        .ok_or(Error::OracleBound {
            size: radix.saturating_pow(points.len() as u32),
            bound: limit,
        })?;
    let found = exec::find_first(mode, total as usize, |code| {
        let mut assignment = BTreeMap::new();
        let mut rest = code as u128;
        for &x in &points {
            let digit = rest % radix;
            rest /= radix;
            if digit > 0 {
                assignment.insert(x, (digit - 1) as u64);
            }
        }
        let q = QCondition::unchecked(assignment);
        if q.validate(universe).is_err() {
            return None;
        }
        (!d.iter().any(|s| q_compatible(universe, &q, s))).then_some(q)
    });
    Ok(found.map(|(_, q)| q))
}

/// Every condition over the universe with colors below `budget` meets `d`.
pub fn predense_check(
    universe: &SampleUniverse,
    d: &[QCondition],
    budget: u64,
    limit: u128,
    mode: Parallelism,
) -> Result<bool> {
    Ok(uncovered_condition(universe, d, &universe.full_set(), budget, limit, mode)?.is_none())
}

/// As [`predense_check`], quantifying only over domains inside `c`.
pub fn predense_check_reduced(
    universe: &SampleUniverse,
    d: &[QCondition],
    budget: u64,
    max_arity: usize,
    limit: u128,
    mode: Parallelism,
) -> Result<bool> {
    let (_, c) = reduced_points(universe, d, max_arity);
    Ok(uncovered_condition(universe, d, &c, budget, limit, mode)?.is_none())
}
