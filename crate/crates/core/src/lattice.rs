//! The lattice of common neighborhoods: ♥, Γ-good closure, minimal
//! generating subfamilies and descending chains.
//!
//! All quantifiers range over the universe, not the ambient space.

use std::collections::{BTreeSet, HashMap};

use crate::exec::{self, Parallelism};
use crate::kernel::{PointSet, SampleUniverse};

/// A finite union of sets Γ(a).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFamilyElement {
    pub generators: Vec<PointSet>,
    pub extent: PointSet,
}

impl ClosedFamilyElement {
    pub fn new(universe: &SampleUniverse, generators: Vec<PointSet>) -> Self {
        let extent = Self::extent_of(universe, &generators);
        ClosedFamilyElement { generators, extent }
    }

    fn extent_of(universe: &SampleUniverse, generators: &[PointSet]) -> PointSet {
        let mut extent = universe.empty_set();
        for a in generators {
            extent.union_with(&universe.common_neighborhood(a));
        }
        extent
    }

    pub fn is_consistent(&self, universe: &SampleUniverse) -> bool {
        Self::extent_of(universe, &self.generators) == self.extent
    }
}

/// Members of the common neighborhood `S` adjacent-or-equal to all of `S`.
pub fn heart_of_extent(universe: &SampleUniverse, s: &PointSet) -> PointSet {
    let mut h = universe.empty_set();
    for x in s.iter() {
        if s.is_subset(universe.closed_neighborhood(x)) {
            h.insert(x);
        }
    }
    h
}

/// ♥(a): the part of Γ(a) joined to every other member of Γ(a).
pub fn heart(universe: &SampleUniverse, a: &PointSet) -> PointSet {
    heart_of_extent(universe, &universe.common_neighborhood(a))
}

/// Every set Γ(b) for finite `b ⊆ a`, without repetition.
pub fn neighborhood_family(universe: &SampleUniverse, a: &PointSet) -> BTreeSet<PointSet> {
    let mut family = BTreeSet::new();
    family.insert(universe.full_set());
    let mut frontier = vec![universe.full_set()];
    while let Some(s) = frontier.pop() {
        for x in a.iter() {
            let t = s.intersection(universe.closed_neighborhood(x));
            if family.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    family
}

/// The least Γ-good superset of `a` inside the universe.
pub fn good_closure(universe: &SampleUniverse, a: &PointSet) -> PointSet {
    let mut closed = a.clone();
    loop {
        let mut next = closed.clone();
        for s in neighborhood_family(universe, &closed) {
            next.union_with(&heart_of_extent(universe, &s));
        }
        if next == closed {
            return closed;
        }
        closed = next;
    }
}

pub fn is_good(universe: &SampleUniverse, a: &PointSet) -> bool {
    good_closure(universe, a) == *a
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalSubfamily {
    pub set: PointSet,
    /// False when the set came from the greedy fallback.
    pub certified: bool,
}

/// Exhaustive search is used up to this many generators.
pub const EXACT_SUBFAMILY_LIMIT: usize = 20;

/// A smallest `b ⊆ a` with Γ(b) = Γ(a), first in lexicographic order.
pub fn minimal_subfamily(universe: &SampleUniverse, a: &PointSet, mode: Parallelism) -> MinimalSubfamily {
    let target = universe.common_neighborhood(a);
    let items = a.to_vec();
    if items.len() > EXACT_SUBFAMILY_LIMIT {
        let mut b = a.clone();
        for &x in &items {
            b.remove(x);
            if universe.common_neighborhood(&b) != target {
                b.insert(x);
            }
        }
        return MinimalSubfamily {
            set: b,
            certified: false,
        };
    }
    if target == universe.full_set() {
        return MinimalSubfamily {
            set: universe.empty_set(),
            certified: true,
        };
    }
    for size in 1..=items.len() {
        let found = exec::find_first(mode, items.len(), |first| {
            let start = universe.closed_neighborhood(items[first]).clone();
            let mut chosen = vec![first];
            search_combination(universe, &items, &target, &start, &mut chosen, size)
                .then(|| PointSet::from_indices(universe.len(), chosen.iter().map(|&i| items[i])))
        });
        if let Some((_, set)) = found {
            return MinimalSubfamily { set, certified: true };
        }
    }
    unreachable!("a itself generates Γ(a)")
}

fn search_combination(
    universe: &SampleUniverse,
    items: &[usize],
    target: &PointSet,
    current: &PointSet,
    chosen: &mut Vec<usize>,
    size: usize,
) -> bool {
    if chosen.len() == size {
        return current == target;
    }
    let next = chosen.last().map_or(0, |&i| i + 1);
    let needed = size - chosen.len();
    for i in next..items.len() {
        if items.len() - i < needed {
            break;
        }
        let t = current.intersection(universe.closed_neighborhood(items[i]));
        if !target.is_subset(&t) {
            continue;
        }
        chosen.push(i);
        if search_combination(universe, items, target, &t, chosen, size) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentChain {
    /// Γ(a_0) ⊋ Γ(a_1) ⊋ … with nested generators, starting at a_0 = ∅.
    pub elements: Vec<ClosedFamilyElement>,
    /// False when beam search was used.
    pub exhaustive: bool,
}

impl DescentChain {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Nested generators, strictly decreasing extents, arity bound.
    pub fn verify(&self, universe: &SampleUniverse, max_arity: usize) -> bool {
        self.elements
            .iter()
            .all(|e| e.generators.len() == 1 && e.is_consistent(universe))
            && self.elements.iter().all(|e| e.generators[0].len() <= max_arity)
            && self.elements.windows(2).all(|w| {
                w[0].generators[0].is_subset(&w[1].generators[0])
                    && w[1].extent.is_subset(&w[0].extent)
                    && w[1].extent != w[0].extent
            })
    }
}

/// Exhaustive search is used up to this many universe points.
pub const EXACT_CHAIN_LIMIT: usize = 10;
const BEAM_WIDTH: usize = 64;

/// A longest chain of strictly shrinking Γ(a_i) with nested `a_i`, `|a_i| ≤ max_arity`.
///
/// Adding one point per step is never worse than adding several, so chains
/// are grown one generator at a time.
pub fn longest_descent_chain(universe: &SampleUniverse, max_arity: usize) -> DescentChain {
    let exhaustive = universe.len() <= EXACT_CHAIN_LIMIT;
    let steps = if exhaustive {
        let mut memo = HashMap::new();
        best_from(universe, &universe.full_set(), max_arity, &mut memo).1
    } else {
        beam(universe, max_arity)
    };
    let mut a = universe.empty_set();
    let mut elements = vec![ClosedFamilyElement::new(universe, vec![a.clone()])];
    for y in steps {
        a.insert(y);
        elements.push(ClosedFamilyElement::new(universe, vec![a.clone()]));
    }
    DescentChain { elements, exhaustive }
}

type Memo = HashMap<(PointSet, usize), (usize, Vec<usize>)>;

fn best_from(universe: &SampleUniverse, s: &PointSet, remaining: usize, memo: &mut Memo) -> (usize, Vec<usize>) {
    if remaining == 0 {
        return (0, Vec::new());
    }
    if let Some(hit) = memo.get(&(s.clone(), remaining)) {
        return hit.clone();
    }
    let mut best = (0, Vec::new());
    for y in 0..universe.len() {
        let t = s.intersection(universe.closed_neighborhood(y));
        if t == *s {
            continue;
        }
        let (len, path) = best_from(universe, &t, remaining - 1, memo);
        if len + 1 > best.0 {
            let mut steps = vec![y];
            steps.extend(path);
            best = (len + 1, steps);
        }
    }
    memo.insert((s.clone(), remaining), best.clone());
    best
}

fn beam(universe: &SampleUniverse, max_arity: usize) -> Vec<usize> {
    let mut layer: Vec<(PointSet, Vec<usize>)> = vec![(universe.full_set(), Vec::new())];
    let mut best = Vec::new();
    for _ in 0..max_arity {
        let mut next: Vec<(PointSet, Vec<usize>)> = Vec::new();
        let mut seen = BTreeSet::new();
        for (s, path) in &layer {
            for y in 0..universe.len() {
                let t = s.intersection(universe.closed_neighborhood(y));
                if t != *s && seen.insert(t.clone()) {
                    let mut p = path.clone();
                    p.push(y);
                    next.push((t, p));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        // slow descent first: large extents leave room for more steps
        next.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.1.cmp(&b.1)));
        next.truncate(BEAM_WIDTH);
        best = next[0].1.clone();
        layer = next;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::int;
    use crate::kernel::GraphInstance;
    use crate::pt;

    fn explicit(n: usize, edges: &[(usize, usize)]) -> SampleUniverse {
        SampleUniverse::of_explicit(GraphInstance::explicit_on_line(n, edges).unwrap()).unwrap()
    }

    fn line(points: &[i64]) -> SampleUniverse {
        let g = GraphInstance::distance(1, vec![int(1)]).unwrap();
        SampleUniverse::new(g, points.iter().map(|&p| pt![p]).collect()).unwrap()
    }

    fn set(u: &SampleUniverse, items: &[usize]) -> PointSet {
        PointSet::from_indices(u.len(), items.iter().copied())
    }

    #[test]
    fn heart_examples() {
        let tri = explicit(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(heart(&tri, &set(&tri, &[0])).to_vec(), vec![0, 1, 2]);
        let path = explicit(3, &[(0, 1), (1, 2)]);
        assert_eq!(heart(&path, &set(&path, &[1])).to_vec(), vec![1]);
        let pair = explicit(2, &[]);
        assert!(heart(&pair, &pair.empty_set()).is_empty());
    }

    #[test]
    fn closure_examples() {
        let empty = explicit(4, &[]);
        let a = set(&empty, &[1, 3]);
        assert_eq!(good_closure(&empty, &a), a);
        let tri = explicit(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(good_closure(&tri, &set(&tri, &[0])).to_vec(), vec![0, 1, 2]);
        let l = line(&[0, 1, 2]);
        // ♥(∅) = {1} here, so {1} is already good
        assert_eq!(good_closure(&l, &set(&l, &[1])).to_vec(), vec![1]);
        assert_eq!(good_closure(&l, &set(&l, &[0])).to_vec(), vec![0, 1]);
    }

    #[test]
    fn minimal_subfamily_examples() {
        let l = line(&[0, 1, 2, 3]);
        let m = minimal_subfamily(&l, &set(&l, &[1, 3]), Parallelism::default());
        assert_eq!(m.set.to_vec(), vec![1, 3]);
        assert!(m.certified);
        assert_eq!(
            minimal_subfamily(&l, &set(&l, &[2]), Parallelism::default())
                .set
                .to_vec(),
            vec![2]
        );
        // 0 and 2 have the same closed neighborhood in this path
        let twins = explicit(3, &[(0, 1), (1, 2), (0, 2)]);
        let m = minimal_subfamily(&twins, &set(&twins, &[0, 2]), Parallelism::Sequential);
        assert!(m.set.len() <= 1);
    }

    #[test]
    fn descent_chain_examples() {
        let empty = explicit(4, &[]);
        let c = longest_descent_chain(&empty, 3);
        assert_eq!(c.len(), 3);
        assert!(c.verify(&empty, 3));
        assert!(c.elements[2].extent.is_empty());

        let k4 = explicit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(longest_descent_chain(&k4, 3).len(), 1);

        let l = line(&[0, 1, 2, 3]);
        let c = longest_descent_chain(&l, 2);
        assert!(c.len() >= 3);
        assert!(c.verify(&l, 2));
    }

    #[test]
    fn beam_search_is_flagged() {
        let l = line(&(0..12).collect::<Vec<_>>());
        let c = longest_descent_chain(&l, 3);
        assert!(!c.exhaustive);
        assert!(c.verify(&l, 3));
        assert!(c.len() >= 3);
    }
}
