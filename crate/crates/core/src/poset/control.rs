//! The control poset: finite proper colorings into naturals, locations and
//! the centeredness constructions.

use std::collections::{BTreeMap, HashMap};

use num::{BigUint, One};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{box_edge_free, Adjacency, BoxSearch, EdgeStatus, PointSet, SampleUniverse, TaggedBox};

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QCondition {
    assignment: BTreeMap<usize, u64>,
}

impl QCondition {
    pub fn new(universe: &SampleUniverse, assignment: BTreeMap<usize, u64>) -> Result<Self> {
        let q = QCondition { assignment };
        q.validate(universe)?;
        Ok(q)
    }

    pub fn from_pairs(universe: &SampleUniverse, pairs: &[(usize, u64)]) -> Result<Self> {
        Self::new(universe, pairs.iter().copied().collect())
    }

    pub fn empty() -> Self {
        QCondition::default()
    }

    pub(crate) fn unchecked(assignment: BTreeMap<usize, u64>) -> Self {
        QCondition { assignment }
    }

    pub fn validate(&self, universe: &SampleUniverse) -> Result<()> {
        for (&x, &c) in &self.assignment {
            if x >= universe.len() {
                return Err(Error::InvalidCondition(format!("index {x} outside the universe")));
            }
            for (&y, &d) in self.assignment.range(x + 1..) {
                if c == d && universe.adjacent(x, y) {
                    return Err(Error::InvalidCondition(format!(
                        "adjacent {} and {} share the color {c}",
                        universe.point(x),
                        universe.point(y)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn assignment(&self) -> &BTreeMap<usize, u64> {
        &self.assignment
    }

    pub fn get(&self, x: usize) -> Option<u64> {
        self.assignment.get(&x).copied()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn domain(&self, universe: &SampleUniverse) -> PointSet {
        PointSet::from_indices(universe.len(), self.assignment.keys().copied())
    }

    /// Reverse inclusion: `self ⊇ other`.
    pub fn extends(&self, other: &QCondition) -> bool {
        other.assignment.iter().all(|(x, c)| self.assignment.get(x) == Some(c))
    }

    pub fn max_color(&self) -> Option<u64> {
        self.assignment.values().copied().max()
    }
}

/// Why two control conditions have no common extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QConflict {
    Clash { point: usize },
    Edge { left: usize, right: usize, color: u64 },
}

impl QConflict {
    pub fn describe(&self, universe: &SampleUniverse) -> String {
        match *self {
            QConflict::Clash { point } => format!("conditions disagree at {}", universe.point(point)),
            QConflict::Edge { left, right, color } => format!(
                "adjacent {} and {} both get color {color}",
                universe.point(left),
                universe.point(right)
            ),
        }
    }
}

pub fn q_conflict(universe: &SampleUniverse, q0: &QCondition, q1: &QCondition) -> Option<QConflict> {
    for (&x, &c) in &q0.assignment {
        if let Some(&d) = q1.assignment.get(&x) {
            if c != d {
                return Some(QConflict::Clash { point: x });
            }
        }
    }
    for (&x, &c) in &q0.assignment {
        for (&y, &d) in &q1.assignment {
            if c == d && universe.adjacent(x, y) {
                return Some(QConflict::Edge {
                    left: x,
                    right: y,
                    color: c,
                });
            }
        }
    }
    None
}

pub fn q_compatible(universe: &SampleUniverse, q0: &QCondition, q1: &QCondition) -> bool {
    q_conflict(universe, q0, q1).is_none()
}

pub fn q_meet(universe: &SampleUniverse, q0: &QCondition, q1: &QCondition) -> Result<QCondition> {
    if let Some(c) = q_conflict(universe, q0, q1) {
        return Err(Error::Incompatible(c.describe(universe)));
    }
    let mut m = q0.assignment.clone();
    m.extend(q1.assignment.iter().map(|(k, v)| (*k, *v)));
    Ok(QCondition { assignment: m })
}

/// Disjoint boxes with a color each; same-colored boxes carry no edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    boxes: Vec<TaggedBox>,
    colors: Vec<u64>,
}

impl Location {
    pub fn new(universe: &SampleUniverse, boxes: Vec<TaggedBox>, colors: Vec<u64>) -> Result<Self> {
        let loc = Location { boxes, colors };
        loc.validate(universe)?;
        Ok(loc)
    }

    pub fn validate(&self, universe: &SampleUniverse) -> Result<()> {
        if self.boxes.len() != self.colors.len() {
            return Err(Error::Location(format!(
                "{} boxes but {} colors",
                self.boxes.len(),
                self.colors.len()
            )));
        }
        let instance = universe.instance();
        let explicit = matches!(instance.adjacency(), Adjacency::Explicit { .. });
        for (i, o0) in self.boxes.iter().enumerate() {
            for (j, o1) in self.boxes.iter().enumerate().skip(i + 1) {
                let disjoint = o0.is_disjoint(o1)
                    || (explicit && universe.points().iter().all(|p| !(o0.contains(p) && o1.contains(p))));
                if !disjoint {
                    return Err(Error::Location(format!("boxes {o0} and {o1} overlap")));
                }
                if self.colors[i] == self.colors[j] {
                    match box_edge_free(instance, o0, o1)? {
                        EdgeStatus::Empty => {}
                        EdgeStatus::Nonempty(x, y) => {
                            return Err(Error::Location(format!(
                                "boxes {o0} and {o1} share color {} but {x} – {y} is an edge",
                                self.colors[i]
                            )))
                        }
                        EdgeStatus::Unknown => {
                            return Err(Error::Location(format!(
                                "boxes {o0} and {o1} share color {} and are not certified edge-free",
                                self.colors[i]
                            )))
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn boxes(&self) -> &[TaggedBox] {
        &self.boxes
    }

    pub fn colors(&self) -> &[u64] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// `q(O)` for every box, when `q` is at this location.
    pub fn selection(&self, universe: &SampleUniverse, q: &QCondition) -> Option<Vec<usize>> {
        let mut picked = vec![None; self.boxes.len()];
        for (&x, &c) in &q.assignment {
            let p = universe.point(x);
            let mut homes = self.boxes.iter().enumerate().filter(|(_, b)| b.contains(p));
            let (k, _) = homes.next()?;
            if homes.next().is_some() || picked[k].is_some() || self.colors[k] != c {
                return None;
            }
            picked[k] = Some(x);
        }
        picked.into_iter().collect()
    }

    pub fn is_at(&self, universe: &SampleUniverse, q: &QCondition) -> bool {
        self.selection(universe, q).is_some()
    }

    /// A location of `q`: small boxes of tag 0 around each domain point.
    pub fn for_condition(universe: &SampleUniverse, q: &QCondition) -> Result<Self> {
        const LEVELS: u32 = 64;
        let dom: Vec<(usize, u64)> = q.assignment.iter().map(|(&x, &c)| (x, c)).collect();
        'level: for level in 0..LEVELS {
            let mut boxes = Vec::with_capacity(dom.len());
            for &(x, _) in &dom {
                let others: Vec<_> = dom
                    .iter()
                    .filter(|(y, _)| *y != x)
                    .map(|(y, _)| universe.point(*y))
                    .collect();
                let Ok(b) = BoxSearch::around(universe.point(x))
                    .avoiding(others)
                    .from_level(level)
                    .first()
                else {
                    continue 'level;
                };
                boxes.push(b);
            }
            let colors = dom.iter().map(|&(_, c)| c).collect();
            if let Ok(loc) = Location::new(universe, boxes, colors) {
                return Ok(loc);
            }
        }
        Err(Error::Location(format!(
            "no location found for a condition of size {}",
            dom.len()
        )))
    }
}

/// A certified `k` with `k → (m)²_{s+1}`.
pub fn ramsey_bound(m: u32, s: u32) -> BigUint {
    let colors = vec![m; s as usize + 1];
    let mut memo = HashMap::new();
    multicolor_bound(colors, &mut memo)
}

fn multicolor_bound(mut ms: Vec<u32>, memo: &mut HashMap<Vec<u32>, BigUint>) -> BigUint {
    ms.sort_unstable();
    if ms.contains(&1) || ms.contains(&0) {
        return BigUint::one();
    }
    // a color that needs only an edge never helps avoid it
    while ms.len() > 1 && ms[0] == 2 {
        ms.remove(0);
    }
    if ms.len() == 1 {
        return BigUint::from(ms[0]);
    }
    if ms == [3, 3] {
        // verified by the exhaustive two-coloring oracle
        return BigUint::from(6u32);
    }
    if let Some(v) = memo.get(&ms) {
        return v.clone();
    }
    let r = ms.len() as u32;
    let mut total = BigUint::from(0u32);
    for i in 0..ms.len() {
        let mut smaller = ms.clone();
        smaller[i] -= 1;
        total += multicolor_bound(smaller, memo);
    }
    let bound = total - BigUint::from(r - 2);
    memo.insert(ms, bound.clone());
    bound
}

/// The pair color used by the Ramsey argument: `None` is "compatible", `Some(O)`
/// the first box whose two selections are adjacent.
pub fn ramsey_pair_color(universe: &SampleUniverse, loc: &Location, si: &[usize], sj: &[usize]) -> Option<usize> {
    (0..loc.len()).find(|&k| universe.adjacent(si[k], sj[k]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamseySubset {
    pub indices: Vec<usize>,
    pub lower_bound: QCondition,
}

/// `m` pairwise compatible conditions among those given, with their union.
pub fn ramsey_compatible_subset(
    universe: &SampleUniverse,
    conditions: &[QCondition],
    loc: &Location,
    m: usize,
) -> Result<Option<RamseySubset>> {
    let selections = selections_at(universe, conditions, loc)?;
    let n = conditions.len();
    let mut compatible = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            // at a common location the only obstruction is an edge inside one box
            let ok = ramsey_pair_color(universe, loc, &selections[i], &selections[j]).is_none();
            debug_assert_eq!(ok, q_compatible(universe, &conditions[i], &conditions[j]));
            compatible[i][j] = ok;
            compatible[j][i] = ok;
        }
    }
    let Some(indices) = first_clique(&compatible, m) else {
        return Ok(None);
    };
    let mut bound = QCondition::empty();
    for &i in &indices {
        bound = q_meet(universe, &bound, &conditions[i])?;
    }
    bound.validate(universe)?;
    if !indices.iter().all(|&i| bound.extends(&conditions[i])) {
        return Err(Error::Incompatible("union is not below every chosen condition".into()));
    }
    Ok(Some(RamseySubset {
        indices,
        lower_bound: bound,
    }))
}

fn selections_at(universe: &SampleUniverse, conditions: &[QCondition], loc: &Location) -> Result<Vec<Vec<usize>>> {
    conditions
        .iter()
        .enumerate()
        .map(|(i, q)| {
            loc.selection(universe, q)
                .ok_or_else(|| Error::Location(format!("condition {i} is not at the location")))
        })
        .collect()
}

/// Lexicographically first `m`-clique of a small dense graph.
fn first_clique(adj: &[Vec<bool>], m: usize) -> Option<Vec<usize>> {
    fn grow(adj: &[Vec<bool>], chosen: &mut Vec<usize>, m: usize) -> bool {
        if chosen.len() == m {
            return true;
        }
        let start = chosen.last().map_or(0, |&i| i + 1);
        for v in start..adj.len() {
            if chosen.iter().all(|&u| adj[u][v]) {
                chosen.push(v);
                if grow(adj, chosen, m) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    grow(adj, &mut chosen, m).then_some(chosen)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thinning {
    /// Boxes where every kept condition selects the same point.
    pub constant: Vec<usize>,
    /// Boxes where the kept selections are pairwise distinct.
    pub distinct: Vec<usize>,
    /// Kept condition indices, increasing.
    pub indices: Vec<usize>,
    pub threshold: usize,
}

/// Finite version of the liminf thinning: split the boxes into constant and
/// injective ones, then make every test point see at most `threshold` or all
/// of the selections in each injective box.
pub fn liminf_thin(
    universe: &SampleUniverse,
    conditions: &[QCondition],
    loc: &Location,
    test_set: &PointSet,
    threshold: Option<usize>,
) -> Result<Thinning> {
    if conditions.len() < 2 {
        return Err(Error::Precondition("thinning needs at least two conditions".into()));
    }
    let sel = selections_at(universe, conditions, loc)?;
    let threshold = threshold.unwrap_or(2 * loc.len());
    let constant: Vec<usize> = (0..loc.len())
        .filter(|&k| sel.iter().all(|s| s[k] == sel[0][k]))
        .collect();
    let moving: Vec<usize> = (0..loc.len()).filter(|k| !constant.contains(k)).collect();

    let mut kept: Vec<usize> = Vec::new();
    for i in 0..conditions.len() {
        if moving.iter().all(|&k| kept.iter().all(|&j| sel[j][k] != sel[i][k])) {
            kept.push(i);
        }
    }
    loop {
        let mut changed = false;
        for t in test_set.iter() {
            for &k in &moving {
                let (hit, miss): (Vec<usize>, Vec<usize>) =
                    kept.iter().partition(|&&i| universe.adjacent(t, sel[i][k]));
                if hit.len() > threshold && !miss.is_empty() {
                    kept = if hit.len() > miss.len() { hit } else { miss };
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(Thinning {
        constant,
        distinct: moving,
        indices: kept,
        threshold,
    })
}

/// Least `N` with `r` compatible with every `family[n]`, `n ≥ N`.
pub fn compatible_tail(
    universe: &SampleUniverse,
    r: &QCondition,
    base: &QCondition,
    family: &[QCondition],
) -> Result<usize> {
    match family.first() {
        Some(first) if first == base => {}
        _ => {
            return Err(Error::Precondition(
                "base must be the first member of the family".into(),
            ))
        }
    }
    if !r.extends(base) {
        return Err(Error::Precondition("r does not extend the base condition".into()));
    }
    Ok(family
        .iter()
        .rposition(|q| !q_compatible(universe, r, q))
        .map_or(0, |n| n + 1))
}
