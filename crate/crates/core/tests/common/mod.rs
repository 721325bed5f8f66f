//! Reference computations for the integration tests. Everything here works
//! from adjacency queries and the plain definitions, not library searches.
#![allow(dead_code)]

use std::collections::BTreeMap;

use noetherian_lab::kernel::{PointSet, SampleUniverse, TaggedBox};
use noetherian_lab::patterns::{Family, Side, VariationSpec};

pub fn indices(u: &SampleUniverse, pred: impl Fn(usize) -> bool) -> PointSet {
    PointSet::from_indices(u.len(), (0..u.len()).filter(|&x| pred(x)))
}

/// Γ(a): points equal or adjacent to every member of `a`.
pub fn gamma(u: &SampleUniverse, a: &[usize]) -> PointSet {
    indices(u, |x| a.iter().all(|&y| x == y || u.adjacent(x, y)))
}

/// ♥(a): members of Γ(a) equal or adjacent to every member of Γ(a).
pub fn heart(u: &SampleUniverse, a: &[usize]) -> PointSet {
    let g = gamma(u, a).to_vec();
    indices(u, |x| g.contains(&x) && g.iter().all(|&y| x == y || u.adjacent(x, y)))
}

fn subsets(items: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0u64..1 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &x)| x)
            .collect()
    })
}

/// Smallest superset of `a` holding ♥ of each of its finite subsets, by
/// iterating over all subsets. `None` once the set outgrows `cap`.
pub fn good_closure(u: &SampleUniverse, a: &PointSet, cap: usize) -> Option<PointSet> {
    let mut s = a.clone();
    loop {
        if s.len() > cap {
            return None;
        }
        let items = s.to_vec();
        let mut next = s.clone();
        for sub in subsets(&items) {
            next.union_with(&heart(u, &sub));
        }
        if next == s {
            return Some(s);
        }
        s = next;
    }
}

pub fn is_clique(u: &SampleUniverse, s: &PointSet) -> bool {
    s.iter().all(|x| s.iter().all(|y| x == y || u.adjacent(x, y)))
}

/// Backtracking in index order, each vertex against its colored predecessors.
pub fn k_colorable(u: &SampleUniverse, k: usize) -> bool {
    fn go(u: &SampleUniverse, k: usize, colors: &mut Vec<usize>) -> bool {
        let v = colors.len();
        if v == u.len() {
            return true;
        }
        for c in 0..k {
            if (0..v).all(|w| colors[w] != c || !u.adjacent(v, w)) {
                colors.push(c);
                if go(u, k, colors) {
                    return true;
                }
                colors.pop();
            }
        }
        false
    }
    go(u, k, &mut Vec::new())
}

pub fn chromatic_number(u: &SampleUniverse) -> usize {
    (0..=u.len()).find(|&k| k_colorable(u, k)).unwrap()
}

/// Pattern vertex `(n, side)` from the glossary definition of the variations.
pub fn pattern_edge(spec: &VariationSpec, a: (usize, usize), b: (usize, usize)) -> bool {
    if a.1 == b.1 {
        let side = if a.1 == 0 { spec.left_side } else { spec.right_side };
        return side == Side::Clique;
    }
    let (left, right) = if a.1 == 0 { (a.0, b.0) } else { (b.0, a.0) };
    match spec.family {
        Family::Half => right < left,
        Family::ThreeQuarter => right != left,
    }
}

pub fn pattern_vertices(spec: &VariationSpec) -> Vec<(usize, usize)> {
    (0..spec.depth).flat_map(|n| [(n, 0), (n, 1)]).collect()
}

/// Tries every injective map of the pattern into the universe.
pub fn pattern_embeds(u: &SampleUniverse, spec: &VariationSpec) -> bool {
    let verts = pattern_vertices(spec);
    let mut map: Vec<usize> = Vec::new();
    fn go(u: &SampleUniverse, spec: &VariationSpec, verts: &[(usize, usize)], map: &mut Vec<usize>) -> bool {
        if map.len() == verts.len() {
            return true;
        }
        let r = map.len();
        for v in 0..u.len() {
            if map.contains(&v) {
                continue;
            }
            if (0..r).all(|s| u.adjacent(map[s], v) == pattern_edge(spec, verts[s], verts[r])) {
                map.push(v);
                if go(u, spec, verts, map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    go(u, spec, &verts, &mut map)
}

/// Every 2-coloring of the edges of K_n, searched for a monochromatic triangle.
pub fn every_two_coloring_has_triangle(n: usize) -> bool {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let idx = |a: usize, b: usize| edges.iter().position(|&e| e == (a.min(b), a.max(b))).unwrap();
    (0u64..1 << edges.len()).all(|mask| {
        let color = |a, b| mask >> idx(a, b) & 1;
        (0..n).any(|a| (a + 1..n).any(|b| (b + 1..n).any(|c| color(a, b) == color(a, c) && color(a, b) == color(b, c))))
    })
}

/// The union of the maps is a function.
fn union<V: Clone + PartialEq>(maps: &[&BTreeMap<usize, V>]) -> Option<BTreeMap<usize, V>> {
    let mut out: BTreeMap<usize, V> = BTreeMap::new();
    for m in maps {
        for (x, v) in m.iter() {
            match out.get(x) {
                Some(w) if w != v => return None,
                _ => {
                    out.insert(*x, v.clone());
                }
            }
        }
    }
    Some(out)
}

/// `q ≤ p` in the coloring poset, from the definition.
pub fn p_below(u: &SampleUniverse, q: &BTreeMap<usize, TaggedBox>, p: &BTreeMap<usize, TaggedBox>) -> bool {
    p.iter().all(|(x, b)| q.get(x) == Some(b))
        && q.iter()
            .filter(|(x, _)| !p.contains_key(x))
            .all(|(&x, b)| p.keys().all(|&y| !u.adjacent(x, y) || !b.contains(u.point(y))))
}

/// A common lower bound exists iff the union of the family lies below every
/// member: any lower bound extends the union, and extra points can always be
/// given boxes small enough to miss everything.
pub fn p_lower_bound_exists(u: &SampleUniverse, family: &[&BTreeMap<usize, TaggedBox>]) -> bool {
    union(family).is_some_and(|r| family.iter().all(|p| p_below(u, &r, p)))
}

/// Suitable and proper on its domain.
pub fn suitable_proper(u: &SampleUniverse, c: &BTreeMap<usize, TaggedBox>) -> bool {
    c.iter().all(|(&x, b)| b.contains(u.point(x)))
        && c.iter()
            .all(|(&x, b)| c.iter().all(|(&y, d)| x == y || b != d || !u.adjacent(x, y)))
}

/// The union of the control conditions is a function and a proper coloring.
pub fn q_union_proper(u: &SampleUniverse, family: &[&BTreeMap<usize, u64>]) -> bool {
    union(family).is_some_and(|r| {
        r.iter()
            .all(|(&x, c)| r.iter().all(|(&y, d)| x == y || c != d || !u.adjacent(x, y)))
    })
}

/// Predensity by listing every partial proper coloring of the universe with
/// colors below `budget`.
pub fn predense(u: &SampleUniverse, d: &[&BTreeMap<usize, u64>], budget: u64) -> bool {
    let n = u.len();
    let mut digits = vec![0u64; n];
    loop {
        let q: BTreeMap<usize, u64> = digits
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(x, &c)| (x, c - 1))
            .collect();
        if q_union_proper(u, &[&q]) && !d.iter().any(|s| q_union_proper(u, &[&q, s])) {
            return false;
        }
        let mut i = 0;
        loop {
            if i == n {
                return true;
            }
            digits[i] += 1;
            if digits[i] <= budget {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}
