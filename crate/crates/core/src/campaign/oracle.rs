//! Brute-force reference checks, written without the library's search code.

use std::collections::BTreeMap;

use crate::kernel::{SampleUniverse, TaggedBox};
use crate::patterns::VariationSpec;

/// Some common extension of the given box assignments exists iff their union
/// is a function and no box of a point new to one assignment holds a
/// neighbor from that assignment's domain.
pub fn p_family_has_lower_bound(universe: &SampleUniverse, family: &[&BTreeMap<usize, TaggedBox>]) -> bool {
    let mut union: BTreeMap<usize, &TaggedBox> = BTreeMap::new();
    for p in family {
        for (x, b) in p.iter() {
            if let Some(old) = union.insert(*x, b) {
                if old != b {
                    return false;
                }
            }
        }
    }
    family.iter().all(|p| {
        union.iter().all(|(&x, b)| {
            p.contains_key(&x)
                || p.keys()
                    .all(|&y| !(universe.adjacent(x, y) && b.contains(universe.point(y))))
        })
    })
}

/// The union of the maps is a function and a proper coloring.
pub fn q_union_proper(universe: &SampleUniverse, family: &[&BTreeMap<usize, u64>]) -> bool {
    let mut union: BTreeMap<usize, u64> = BTreeMap::new();
    for q in family {
        for (&x, &c) in q.iter() {
            if union.insert(x, c).is_some_and(|old| old != c) {
                return false;
            }
        }
    }
    union.iter().all(|(&x, &c)| {
        union
            .iter()
            .all(|(&y, &d)| x == y || c != d || !universe.adjacent(x, y))
    })
}

/// Tries every `k`-coloring by plain backtracking in index order.
pub fn k_colorable(universe: &SampleUniverse, k: usize) -> bool {
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
    go(universe, k, &mut Vec::with_capacity(universe.len()))
}

pub fn chromatic_number(universe: &SampleUniverse) -> usize {
    (0..=universe.len())
        .find(|&k| k_colorable(universe, k))
        .expect("n colors always suffice")
}

/// An injective map of the pattern vertices inducing exactly its edges.
pub fn pattern_embeds(universe: &SampleUniverse, spec: &VariationSpec) -> bool {
    fn go(u: &SampleUniverse, spec: &VariationSpec, map: &mut Vec<usize>) -> bool {
        let r = map.len();
        if r == spec.vertex_count() {
            return true;
        }
        for v in 0..u.len() {
            if map.contains(&v) {
                continue;
            }
            if (0..r).all(|s| u.adjacent(map[s], v) == spec.edge(s, r)) {
                map.push(v);
                if go(u, spec, map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    go(universe, spec, &mut Vec::new())
}
