//! Colorings by tagged boxes and an exact chromatic number oracle.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::kernel::{BoxSearch, PointSet, SampleUniverse, TaggedBox};
use crate::lattice;
use crate::patterns;
use crate::poset::{check_suitable_proper, PCondition};

/// A map from universe index to its color box.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoxColoring {
    pub assignment: BTreeMap<usize, TaggedBox>,
}

impl BoxColoring {
    pub fn check(&self, universe: &SampleUniverse) -> Result<()> {
        check_suitable_proper(universe, &self.assignment).map_err(Error::InvalidCondition)
    }

    pub fn is_suitable_and_proper(&self, universe: &SampleUniverse) -> bool {
        self.check(universe).is_ok()
    }

    pub fn distinct_boxes(&self) -> usize {
        let mut boxes: Vec<&TaggedBox> = self.assignment.values().collect();
        boxes.sort();
        boxes.dedup();
        boxes.len()
    }

    /// The coloring as a P-condition (validates the domain).
    pub fn to_condition(&self, universe: &SampleUniverse) -> Result<PCondition> {
        PCondition::new(universe, self.assignment.clone())
    }
}

/// The first box around `x` holding no point of `a` adjacent to `x`.
pub fn separating_box(
    universe: &SampleUniverse,
    x: usize,
    a: &PointSet,
    within: Option<&TaggedBox>,
) -> Result<TaggedBox> {
    if a.contains(x) {
        return Err(Error::Precondition(format!(
            "{} belongs to the set to separate from",
            universe.point(x)
        )));
    }
    let avoid = a.iter().filter(|&y| universe.adjacent(x, y)).map(|y| universe.point(y));
    BoxSearch::around(universe.point(x))
        .avoiding(avoid)
        .within(within)
        .first()
}

/// Colors points in universe order; each box avoids all earlier neighbors
/// and stays inside the constraint box when one is given.
pub fn greedy_coloring(
    universe: &SampleUniverse,
    constraints: Option<&BTreeMap<usize, TaggedBox>>,
) -> Result<BoxColoring> {
    let mut assignment = BTreeMap::new();
    let mut earlier = universe.empty_set();
    for x in 0..universe.len() {
        let within = constraints.and_then(|d| d.get(&x));
        assignment.insert(x, separating_box(universe, x, &earlier, within)?);
        earlier.insert(x);
    }
    Ok(BoxColoring { assignment })
}

/// A total coloring extending `p` whose new boxes avoid the neighbors in `dom(p)`.
pub fn extend_coloring(universe: &SampleUniverse, p: &PCondition) -> Result<BoxColoring> {
    p.validate(universe)?;
    let dom = p.domain(universe);
    let mut assignment = p.assignment().clone();
    let mut earlier = universe.empty_set();
    for x in 0..universe.len() {
        if !dom.contains(x) {
            let d = separating_box(universe, x, &dom, None)?;
            assignment.insert(x, separating_box(universe, x, &earlier, Some(&d))?);
        }
        earlier.insert(x);
    }
    Ok(BoxColoring { assignment })
}

/// Nested stages with a proper natural-valued coloring of each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageChain {
    pub stages: Vec<Vec<usize>>,
    pub colorings: Vec<BTreeMap<usize, u64>>,
}

impl StageChain {
    pub fn validate(&self, universe: &SampleUniverse) -> Result<Vec<PointSet>> {
        if self.stages.is_empty() || self.stages.len() != self.colorings.len() {
            return Err(Error::InvalidStage(
                "need one coloring per stage and at least one stage".into(),
            ));
        }
        let mut sets: Vec<PointSet> = Vec::with_capacity(self.stages.len());
        for (alpha, (stage, coloring)) in self.stages.iter().zip(&self.colorings).enumerate() {
            if let Some(&bad) = stage.iter().find(|&&i| i >= universe.len()) {
                return Err(Error::InvalidStage(format!(
                    "stage {alpha} has index {bad} outside the universe"
                )));
            }
            let set = PointSet::from_indices(universe.len(), stage.iter().copied());
            if let Some(prev) = sets.last() {
                if !prev.is_subset(&set) || *prev == set {
                    return Err(Error::InvalidStage(format!(
                        "stage {alpha} does not strictly extend stage {}",
                        alpha - 1
                    )));
                }
            }
            if coloring.keys().copied().collect::<Vec<_>>() != set.to_vec() {
                return Err(Error::InvalidStage(format!(
                    "coloring {alpha} does not cover exactly its stage"
                )));
            }
            for (&x, &c) in coloring {
                for (&y, &d) in coloring.range(x + 1..) {
                    if c == d && universe.adjacent(x, y) {
                        return Err(Error::InvalidStage(format!(
                            "stage {alpha} gives adjacent {} and {} the color {c}",
                            universe.point(x),
                            universe.point(y)
                        )));
                    }
                }
            }
            if !lattice::is_good(universe, &set) {
                return Err(Error::Precondition(format!("stage {alpha} is not good")));
            }
            sets.push(set);
        }
        Ok(sets)
    }
}

/// Glues the stage colorings into one box coloring below `p`.
///
/// A point first appearing at stage α gets the first box tagged with its
/// stage-α color that avoids its neighbors in `dom(p)` and earlier stages.
pub fn stitch_colorings(universe: &SampleUniverse, chain: &StageChain, p: &PCondition) -> Result<BoxColoring> {
    let sets = chain.validate(universe)?;
    p.validate(universe)?;
    let dom = p.domain(universe);
    if !dom.is_subset(&sets[0]) {
        return Err(Error::Precondition("dom(p) is not inside the first stage".into()));
    }
    let mut assignment = p.assignment().clone();
    let mut before = dom.clone();
    for (alpha, set) in sets.iter().enumerate() {
        let fresh = set.difference(&before.union(&dom));
        for x in fresh.iter() {
            if assignment.contains_key(&x) {
                continue;
            }
            let tag = chain.colorings[alpha][&x];
            let avoid = before
                .iter()
                .filter(|&y| universe.adjacent(x, y))
                .map(|y| universe.point(y));
            let b = BoxSearch::around(universe.point(x))
                .avoiding(avoid)
                .with_tag(Some(tag))
                .first()?;
            assignment.insert(x, b);
        }
        before.union_with(set);
    }
    Ok(BoxColoring { assignment })
}

/// Default universe size accepted by [`chromatic_number`].
pub const DEFAULT_CHROMATIC_BOUND: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chromatic {
    pub number: usize,
    pub coloring: Vec<usize>,
}

/// Exact chromatic number by saturation-ordered backtracking, starting from
/// the clique number.
pub fn chromatic_number(universe: &SampleUniverse, bound: usize) -> Result<Chromatic> {
    let n = universe.len();
    if n > bound {
        return Err(Error::OracleBound {
            size: n as u128,
            bound: bound as u128,
        });
    }
    if n == 0 {
        return Ok(Chromatic {
            number: 0,
            coloring: Vec::new(),
        });
    }
    let mut k = 1;
    while patterns::find_clique(universe, k + 1, Parallelism::Sequential).is_some() {
        k += 1;
    }
    loop {
        let mut colors = vec![usize::MAX; n];
        if dsatur(universe, k, &mut colors, 0) {
            return Ok(Chromatic {
                number: k,
                coloring: colors,
            });
        }
        k += 1;
    }
}

fn dsatur(universe: &SampleUniverse, k: usize, colors: &mut [usize], done: usize) -> bool {
    let n = colors.len();
    if done == n {
        return true;
    }
    // most constrained uncolored vertex, then highest degree, then lowest index
    let mut pick = None;
    let mut best = (0usize, 0usize);
    for v in 0..n {
        if colors[v] != usize::MAX {
            continue;
        }
        let mut seen = vec![false; k];
        let mut degree = 0;
        for w in universe.neighbors(v).iter() {
            degree += 1;
            if colors[w] != usize::MAX {
                seen[colors[w]] = true;
            }
        }
        let sat = seen.iter().filter(|&&s| s).count();
        if pick.is_none() || (sat, degree) > best {
            pick = Some(v);
            best = (sat, degree);
        }
    }
    let v = pick.expect("an uncolored vertex remains");
    let used = colors.iter().filter(|&&c| c != usize::MAX).max().map_or(0, |&c| c + 1);
    for c in 0..k.min(used + 1) {
        if universe.neighbors(v).iter().all(|w| colors[w] != c) {
            colors[v] = c;
            if dsatur(universe, k, colors, done + 1) {
                return true;
            }
            colors[v] = usize::MAX;
        }
    }
    false
}

/// Adjacent points get different colors.
pub fn is_proper_natural(universe: &SampleUniverse, colors: &[usize]) -> bool {
    colors.len() == universe.len()
        && (0..universe.len()).all(|x| universe.neighbors(x).iter().all(|y| colors[x] != colors[y]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::{int, rat};
    use crate::kernel::GraphInstance;
    use crate::poset::p_leq;
    use crate::pt;

    fn unit_line(points: &[i64]) -> SampleUniverse {
        let g = GraphInstance::distance(1, vec![int(1)]).unwrap();
        SampleUniverse::new(g, points.iter().map(|&p| pt![p]).collect()).unwrap()
    }

    fn explicit(n: usize, edges: &[(usize, usize)]) -> SampleUniverse {
        SampleUniverse::of_explicit(GraphInstance::explicit_on_line(n, edges).unwrap()).unwrap()
    }

    fn bx(tag: u64, level: u32, m: i64) -> TaggedBox {
        TaggedBox::from_ints(tag, level, &[m]).unwrap()
    }

    #[test]
    fn separating_examples() {
        let u = unit_line(&[0, 1, 2]);
        let a = PointSet::from_indices(3, [0, 2]);
        assert_eq!(separating_box(&u, 1, &a, None).unwrap(), bx(0, 0, 0));
        assert_eq!(separating_box(&u, 1, &u.empty_set(), None).unwrap(), bx(0, 0, 0));
        let inner = separating_box(&u, 1, &a, Some(&bx(0, 0, 0))).unwrap();
        assert!(inner.is_subbox_of(&bx(0, 0, 0)));
        assert!(matches!(separating_box(&u, 0, &a, None), Err(Error::Precondition(_))));
    }

    #[test]
    fn greedy_examples() {
        let u = unit_line(&[0, 1, 2]);
        let c = greedy_coloring(&u, None).unwrap();
        c.check(&u).unwrap();
        assert!(!c.assignment[&1].contains(u.point(0)));
        assert!(!c.assignment[&2].contains(u.point(1)));
        let empty = explicit(3, &[]);
        let c = greedy_coloring(&empty, None).unwrap();
        for (x, b) in &c.assignment {
            assert_eq!(*b, BoxSearch::around(empty.point(*x)).first().unwrap());
        }
        assert_eq!(greedy_coloring(&explicit(1, &[]), None).unwrap().assignment.len(), 1);
    }

    #[test]
    fn extension_examples() {
        let u = unit_line(&[-1, 0, 1, 2]);
        let p = PCondition::new(&u, [(1, bx(0, 2, -1))].into_iter().collect()).unwrap();
        let c = extend_coloring(&u, &p).unwrap();
        c.check(&u).unwrap();
        assert!(!c.assignment[&2].contains(u.point(1)));
        assert!(p_leq(&u, &c.to_condition(&u).unwrap(), &p));

        let total = extend_coloring(&u, &PCondition::empty()).unwrap();
        assert_eq!(total, greedy_coloring(&u, None).unwrap());
        let again = extend_coloring(&u, &total.to_condition(&u).unwrap()).unwrap();
        assert_eq!(again, total);
    }

    #[test]
    fn stitching_example() {
        let u = unit_line(&[-1, 0, 1, 2]);
        let chain = StageChain {
            stages: vec![vec![1], vec![1, 2, 3]],
            colorings: vec![
                [(1, 0)].into_iter().collect(),
                [(1, 0), (2, 1), (3, 0)].into_iter().collect(),
            ],
        };
        let c = stitch_colorings(&u, &chain, &PCondition::empty()).unwrap();
        c.check(&u).unwrap();
        assert_eq!(c.assignment[&1], bx(0, 0, -1));
        assert_eq!(c.assignment[&2], bx(1, 1, 1));
        assert_eq!(c.assignment[&3], bx(0, 0, 1));
        assert_eq!(c.assignment[&2].lower(0), rat(1, 2));
    }

    #[test]
    fn stitching_rejects_bad_chains() {
        let u = unit_line(&[-1, 0, 1, 2]);
        let improper = StageChain {
            stages: vec![vec![1, 2]],
            colorings: vec![[(1, 0), (2, 0)].into_iter().collect()],
        };
        assert!(matches!(
            stitch_colorings(&u, &improper, &PCondition::empty()),
            Err(Error::InvalidStage(_))
        ));
        let chain = StageChain {
            stages: vec![vec![1]],
            colorings: vec![[(1, 0)].into_iter().collect()],
        };
        let p = PCondition::new(&u, [(1, bx(0, 2, -1)), (2, bx(0, 2, 3))].into_iter().collect()).unwrap();
        assert!(matches!(stitch_colorings(&u, &chain, &p), Err(Error::Precondition(_))));
    }

    #[test]
    fn chromatic_examples() {
        let tri = explicit(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(chromatic_number(&tri, DEFAULT_CHROMATIC_BOUND).unwrap().number, 3);
        assert_eq!(
            chromatic_number(&explicit(4, &[]), DEFAULT_CHROMATIC_BOUND)
                .unwrap()
                .number,
            1
        );
        let c5 = explicit(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        let chi = chromatic_number(&c5, DEFAULT_CHROMATIC_BOUND).unwrap();
        assert_eq!(chi.number, 3);
        assert!(is_proper_natural(&c5, &chi.coloring));
        let big = explicit(21, &[]);
        assert!(matches!(
            chromatic_number(&big, DEFAULT_CHROMATIC_BOUND),
            Err(Error::OracleBound { size: 21, bound: 20 })
        ));
    }
}
