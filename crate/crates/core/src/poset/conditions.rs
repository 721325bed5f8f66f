//! Conditions of the coloring poset: good-domain suitable box colorings.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{BoxSearch, PointSet, SampleUniverse, TaggedBox};
use crate::lattice;

/// A finite partial coloring by tagged boxes, keyed by universe index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PCondition {
    assignment: BTreeMap<usize, TaggedBox>,
}

impl PCondition {
    /// Validates suitability, properness and Γ-goodness of the domain.
    pub fn new(universe: &SampleUniverse, assignment: BTreeMap<usize, TaggedBox>) -> Result<Self> {
        let p = PCondition { assignment };
        p.validate(universe)?;
        Ok(p)
    }

    pub fn empty() -> Self {
        PCondition::default()
    }

    pub fn assignment(&self) -> &BTreeMap<usize, TaggedBox> {
        &self.assignment
    }

    pub fn get(&self, x: usize) -> Option<&TaggedBox> {
        self.assignment.get(&x)
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

    pub fn validate(&self, universe: &SampleUniverse) -> Result<()> {
        check_suitable_proper(universe, &self.assignment).map_err(Error::InvalidCondition)?;
        let dom = self.domain(universe);
        let closure = lattice::good_closure(universe, &dom);
        if closure != dom {
            let missing = closure.difference(&dom).first().expect("closure is larger");
            return Err(Error::InvalidCondition(format!(
                "domain is not good: closure adds {}",
                universe.point(missing)
            )));
        }
        Ok(())
    }
}

/// Checks `x ∈ c(x)` and `c(x) ≠ c(y)` on edges; the message names the culprit.
pub fn check_suitable_proper(
    universe: &SampleUniverse,
    assignment: &BTreeMap<usize, TaggedBox>,
) -> std::result::Result<(), String> {
    for (&x, b) in assignment {
        if x >= universe.len() {
            return Err(format!("index {x} outside a universe of {} points", universe.len()));
        }
        if !b.contains(universe.point(x)) {
            return Err(format!("{b} does not contain {}", universe.point(x)));
        }
    }
    for (&x, bx) in assignment {
        for (&y, by) in assignment.range(x + 1..) {
            if bx == by && universe.adjacent(x, y) {
                return Err(format!(
                    "adjacent {} and {} share the color {bx}",
                    universe.point(x),
                    universe.point(y)
                ));
            }
        }
    }
    Ok(())
}

/// `q ≤ p`: q extends p, and every new box avoids the old neighbors.
pub fn p_leq(universe: &SampleUniverse, q: &PCondition, p: &PCondition) -> bool {
    for (x, b) in &p.assignment {
        if q.assignment.get(x) != Some(b) {
            return false;
        }
    }
    for (&x, b) in &q.assignment {
        if p.assignment.contains_key(&x) {
            continue;
        }
        for &y in p.assignment.keys() {
            if universe.adjacent(x, y) && b.contains(universe.point(y)) {
                return false;
            }
        }
    }
    true
}

/// Why two conditions have no common lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PConflict {
    /// Both conditions color `point`, differently.
    Clash { point: usize },
    /// `owner` is in only one domain and its box holds `inside`, an adjacent
    /// point of the other domain.
    Edge { owner: usize, inside: usize },
}

impl PConflict {
    pub fn describe(&self, universe: &SampleUniverse) -> String {
        match self {
            PConflict::Clash { point } => format!("conditions disagree at {}", universe.point(*point)),
            PConflict::Edge { owner, inside } => format!(
                "box of {} contains its neighbor {}",
                universe.point(*owner),
                universe.point(*inside)
            ),
        }
    }
}

/// First obstruction to compatibility, in index order.
pub fn p_conflict(universe: &SampleUniverse, p0: &PCondition, p1: &PCondition) -> Option<PConflict> {
    for (x, b) in &p0.assignment {
        if let Some(c) = p1.assignment.get(x) {
            if b != c {
                return Some(PConflict::Clash { point: *x });
            }
        }
    }
    for (a, b) in [(p0, p1), (p1, p0)] {
        for (&owner, bx) in &b.assignment {
            if a.assignment.contains_key(&owner) {
                continue;
            }
            for &inside in a.assignment.keys() {
                if universe.adjacent(owner, inside) && bx.contains(universe.point(inside)) {
                    return Some(PConflict::Edge { owner, inside });
                }
            }
        }
    }
    None
}

pub fn p_compatible(universe: &SampleUniverse, p0: &PCondition, p1: &PCondition) -> bool {
    p_conflict(universe, p0, p1).is_none()
}

/// A common lower bound of pairwise compatible conditions, with `x` in its domain.
pub fn p_lower_bound(universe: &SampleUniverse, conditions: &[PCondition], x: Option<usize>) -> Result<PCondition> {
    for (i, p0) in conditions.iter().enumerate() {
        for p1 in &conditions[i + 1..] {
            if let Some(c) = p_conflict(universe, p0, p1) {
                return Err(Error::Incompatible(c.describe(universe)));
            }
        }
    }
    if let Some(x) = x {
        if x >= universe.len() {
            return Err(Error::UnknownPoint(format!("index {x}")));
        }
    }
    let mut union: BTreeMap<usize, TaggedBox> = BTreeMap::new();
    for p in conditions {
        union.extend(p.assignment.iter().map(|(k, v)| (*k, v.clone())));
    }
    let old = PointSet::from_indices(universe.len(), union.keys().copied());
    let mut seed = old.clone();
    if let Some(x) = x {
        seed.insert(x);
    }
    let domain = lattice::good_closure(universe, &seed);
    let mut used: HashSet<TaggedBox> = union.values().cloned().collect();
    let mut q = union;
    for z in domain.difference(&old).iter() {
        let avoid: Vec<_> = old
            .iter()
            .filter(|&y| universe.adjacent(z, y))
            .map(|y| universe.point(y))
            .collect();
        let b = BoxSearch::around(universe.point(z))
            .avoiding(avoid)
            .excluding(&used)
            .first()?;
        used.insert(b.clone());
        q.insert(z, b);
    }
    let q = PCondition::new(universe, q)?;
    for p in conditions {
        if !p_leq(universe, &q, p) {
            return Err(Error::Incompatible(
                "constructed bound is not below every condition".into(),
            ));
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::rat;
    use crate::kernel::{GraphInstance, Point};

    /// Distance 1/2 on {-1/2, 0, 1/2, 1}, a path; no dyadic box holds two
    /// adjacent points of the integer unit-distance path, this one can.
    fn universe() -> SampleUniverse {
        let g = GraphInstance::distance(1, vec![rat(1, 4)]).unwrap();
        let pts = (-1..=2).map(|i| Point::new(vec![rat(i, 2)])).collect();
        SampleUniverse::new(g, pts).unwrap()
    }

    fn bx(level: u32, m: i64) -> TaggedBox {
        TaggedBox::from_ints(0, level, &[m]).unwrap()
    }

    fn cond(u: &SampleUniverse, pairs: &[(usize, TaggedBox)]) -> PCondition {
        PCondition::new(u, pairs.iter().cloned().collect()).unwrap()
    }

    #[test]
    fn validation() {
        let u = universe();
        // (−1/2, 1/2) misses the point 1
        assert!(PCondition::new(&u, [(3, bx(1, -1))].into_iter().collect()).is_err());
        // {0, 1} is not good: ♥ of Γ(0) ∩ Γ(1) = {1/2} adds 1/2
        let err = PCondition::new(&u, [(1, bx(2, -1)), (3, bx(2, 3))].into_iter().collect()).unwrap_err();
        assert!(matches!(err, Error::InvalidCondition(_)));
        // the same box on an edge
        assert!(PCondition::new(&u, [(1, bx(0, -1)), (2, bx(0, -1))].into_iter().collect()).is_err());
    }

    #[test]
    fn ordering_examples() {
        let u = universe();
        let p = cond(&u, &[(1, bx(2, -1))]);
        assert!(p_leq(&u, &p, &p));
        let q = cond(&u, &[(1, bx(2, -1)), (2, bx(2, 1))]);
        assert!(p_leq(&u, &q, &p));
        let bad = cond(&u, &[(1, bx(2, -1)), (2, bx(0, -1))]);
        assert!(!p_leq(&u, &bad, &p));
    }

    #[test]
    fn compatibility_examples() {
        let u = universe();
        let p0 = cond(&u, &[(1, bx(2, -1))]);
        assert!(p_compatible(&u, &p0, &cond(&u, &[(2, bx(2, 1))])));
        let wide = cond(&u, &[(2, bx(0, -1))]);
        assert_eq!(
            p_conflict(&u, &p0, &wide),
            Some(PConflict::Edge { owner: 2, inside: 1 })
        );
        assert!(p_compatible(&u, &p0, &p0));
    }

    #[test]
    fn literal_criterion_is_not_enough() {
        // dom(p0) ⊆ dom(p1), so the pairs x0 ∈ dom(p0∖p1) are vacuous, yet
        // p1's box for 1/2 contains the neighbor 0 from dom(p0)
        let u = universe();
        let p0 = cond(&u, &[(1, bx(2, -1))]);
        let p1 = cond(&u, &[(1, bx(2, -1)), (2, bx(0, -1))]);
        assert!(!p_compatible(&u, &p0, &p1));
        assert!(p_lower_bound(&u, &[p0, p1], None).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        let u = universe();
        let p0 = cond(&u, &[(1, bx(2, -1))]);
        let p1 = cond(&u, &[(2, bx(2, 1))]);
        let q = p_lower_bound(&u, &[p0.clone(), p1.clone()], Some(3)).unwrap();
        assert_eq!(q.assignment().keys().copied().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert!(!q.get(3).unwrap().contains(u.point(2)));
        assert!(p_leq(&u, &q, &p0) && p_leq(&u, &q, &p1));

        assert_eq!(p_lower_bound(&u, std::slice::from_ref(&p0), Some(1)).unwrap(), p0);
        let single = p_lower_bound(&u, &[], Some(1)).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single.get(1), Some(&BoxSearch::around(u.point(1)).first().unwrap()));

        let wide = cond(&u, &[(2, bx(0, -1))]);
        assert!(matches!(
            p_lower_bound(&u, &[p0, wide], None),
            Err(Error::Incompatible(_))
        ));
    }
}
