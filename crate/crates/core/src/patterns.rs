//! Finite prefixes of the half / three-quarter graph variations, cliques,
//! `K_{2,n}` patterns and a Ramsey-style homogeneous subset extractor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Parallelism};
use crate::kernel::{Point, PointSet, SampleUniverse};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Family {
    Half,
    ThreeQuarter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Side {
    Clique,
    Anticlique,
}

/// The induced pattern on `{0..depth-1} × {0,1}`.
///
/// Pattern vertex `⟨n, s⟩` is numbered `2n + s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VariationSpec {
    pub family: Family,
    pub left_side: Side,
    pub right_side: Side,
    pub depth: usize,
}

impl VariationSpec {
    pub fn new(family: Family, left_side: Side, right_side: Side, depth: usize) -> Result<Self> {
        let spec = VariationSpec {
            family,
            left_side,
            right_side,
            depth,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth < 2 {
            return Err(Error::InvalidSpec(format!("depth {} < 2", self.depth)));
        }
        Ok(())
    }

    /// All eight variations at the given depth.
    pub fn all(depth: usize) -> Result<Vec<Self>> {
        let mut out = Vec::with_capacity(8);
        for family in [Family::Half, Family::ThreeQuarter] {
            for left in [Side::Clique, Side::Anticlique] {
                for right in [Side::Clique, Side::Anticlique] {
                    out.push(Self::new(family, left, right, depth)?);
                }
            }
        }
        Ok(out)
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.depth
    }

    /// Whether pattern vertices `u ≠ v` are joined.
    pub fn edge(&self, u: usize, v: usize) -> bool {
        let (nu, su) = (u / 2, u % 2);
        let (nv, sv) = (v / 2, v % 2);
        match (su, sv) {
            (0, 0) => self.left_side == Side::Clique,
            (1, 1) => self.right_side == Side::Clique,
            _ => {
                // ⟨n,0⟩ – ⟨m,1⟩
                let (n, m) = if su == 0 { (nu, nv) } else { (nv, nu) };
                match self.family {
                    Family::Half => m < n,
                    Family::ThreeQuarter => m != n,
                }
            }
        }
    }

    /// Builds the pattern itself as an explicit graph on the line.
    pub fn planted(&self) -> Result<crate::kernel::GraphInstance> {
        let k = self.vertex_count();
        let mut edges = Vec::new();
        for u in 0..k {
            for v in u + 1..k {
                if self.edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        crate::kernel::GraphInstance::explicit_on_line(k, &edges)
    }
}

/// `mapping[2n + s]` is the universe index playing `⟨n, s⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternWitness {
    pub spec: VariationSpec,
    pub mapping: Vec<usize>,
}

impl PatternWitness {
    /// Edge-by-edge check of the induced subgraph.
    pub fn verify(&self, universe: &SampleUniverse) -> bool {
        let k = self.spec.vertex_count();
        if self.mapping.len() != k || self.mapping.iter().any(|&i| i >= universe.len()) {
            return false;
        }
        for u in 0..k {
            for v in u + 1..k {
                let (a, b) = (self.mapping[u], self.mapping[v]);
                if a == b || universe.adjacent(a, b) != self.spec.edge(u, v) {
                    return false;
                }
            }
        }
        true
    }

    pub fn points(&self, universe: &SampleUniverse) -> Vec<Point> {
        self.mapping.iter().map(|&i| universe.point(i).clone()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct PatternSearch {
    pub witness: Option<PatternWitness>,
    pub nodes_explored: u64,
}

/// Exhaustive search for an induced copy of the pattern prefix.
///
/// The witness returned is the first one in lexicographic order of the
/// mapping, whatever the parallelism mode.
pub fn find_variation_prefix(
    universe: &SampleUniverse,
    spec: &VariationSpec,
    mode: Parallelism,
) -> Result<PatternSearch> {
    spec.validate()?;
    let k = spec.vertex_count();
    let n = universe.len();
    if k > n {
        return Ok(PatternSearch {
            witness: None,
            nodes_explored: 0,
        });
    }
    let subtrees = exec::map_indexed(mode, n, |first| {
        let mut search = Backtrack {
            universe,
            spec,
            mapping: vec![first],
            nodes: 1,
        };
        let found = search.extend();
        (found.then(|| search.mapping.clone()), search.nodes)
    });
    let mut nodes = 0;
    for (mapping, count) in subtrees {
        nodes += count;
        if let Some(mapping) = mapping {
            let witness = PatternWitness { spec: *spec, mapping };
            debug_assert!(witness.verify(universe));
            return Ok(PatternSearch {
                witness: Some(witness),
                nodes_explored: nodes,
            });
        }
    }
    Ok(PatternSearch {
        witness: None,
        nodes_explored: nodes,
    })
}

struct Backtrack<'a> {
    universe: &'a SampleUniverse,
    spec: &'a VariationSpec,
    mapping: Vec<usize>,
    nodes: u64,
}

impl Backtrack<'_> {
    fn extend(&mut self) -> bool {
        let v = self.mapping.len();
        if v == self.spec.vertex_count() {
            return true;
        }
        let mut candidates = self.universe.full_set();
        for (u, &image) in self.mapping.iter().enumerate() {
            if self.spec.edge(u, v) {
                candidates.intersect_with(&self.universe.neighbors(image));
            } else {
                candidates.difference_with(self.universe.closed_neighborhood(image));
            }
        }
        for c in candidates.iter() {
            self.nodes += 1;
            self.mapping.push(c);
            if self.extend() {
                return true;
            }
            self.mapping.pop();
        }
        false
    }
}

/// Largest depth (from 2 up to `limit`) at which the variation embeds, or 0.
pub fn largest_prefix_depth(
    universe: &SampleUniverse,
    family: Family,
    left: Side,
    right: Side,
    limit: usize,
    mode: Parallelism,
) -> Result<usize> {
    let mut best = 0;
    for depth in 2..=limit.min(universe.len() / 2) {
        let spec = VariationSpec::new(family, left, right, depth)?;
        if find_variation_prefix(universe, &spec, mode)?.witness.is_none() {
            break;
        }
        best = depth;
    }
    Ok(best)
}

/// The lexicographically first `m`-clique, if any.
pub fn find_clique(universe: &SampleUniverse, m: usize, mode: Parallelism) -> Option<PointSet> {
    if m == 0 {
        return Some(universe.empty_set());
    }
    fn grow(universe: &SampleUniverse, chosen: &mut Vec<usize>, candidates: &PointSet, m: usize) -> bool {
        if chosen.len() == m {
            return true;
        }
        if chosen.len() + candidates.len() < m {
            return false;
        }
        for v in candidates.iter() {
            let mut next = candidates.intersection(&universe.neighbors(v));
            // keep the clique sorted so each set is visited once
            for w in next.clone().iter().take_while(|&w| w < v) {
                next.remove(w);
            }
            chosen.push(v);
            if grow(universe, chosen, &next, m) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let n = universe.len();
    exec::find_first(mode, n, |first| {
        let mut candidates = universe.neighbors(first);
        for w in 0..first {
            candidates.remove(w);
        }
        let mut chosen = vec![first];
        grow(universe, &mut chosen, &candidates, m).then(|| PointSet::from_indices(n, chosen))
    })
    .map(|(_, s)| s)
}

/// Two distinct points together with `n` common neighbors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteWitness {
    pub pair: (usize, usize),
    pub common: Vec<usize>,
}

impl BipartiteWitness {
    pub fn verify(&self, universe: &SampleUniverse, n: usize) -> bool {
        let (a, b) = self.pair;
        let mut seen = std::collections::HashSet::new();
        a != b
            && self.common.len() == n
            && self
                .common
                .iter()
                .all(|&c| c != a && c != b && seen.insert(c) && universe.adjacent(a, c) && universe.adjacent(b, c))
    }
}

/// First pair (lexicographically) with at least `n` common neighbors.
pub fn find_bipartite_k2n(universe: &SampleUniverse, n: usize, mode: Parallelism) -> Option<BipartiteWitness> {
    let size = universe.len();
    exec::find_first(mode, size, |i| {
        let ni = universe.neighbors(i);
        (i + 1..size).find_map(|j| {
            let common = ni.intersection(&universe.neighbors(j));
            (common.len() >= n).then(|| BipartiteWitness {
                pair: (i, j),
                common: common.iter().take(n).collect(),
            })
        })
    })
    .map(|(_, w)| w)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homogeneous {
    pub indices: Vec<usize>,
    pub color: usize,
}

/// Size the iterated-majority construction always reaches on `len` items
/// with `colors` colors.
pub fn homogeneous_guarantee(len: usize, colors: usize) -> usize {
    if len == 0 {
        return 0;
    }
    let c = colors.max(1);
    let mut picks: usize = 0;
    let mut pool = len;
    while pool > 0 {
        picks += 1;
        pool = (pool - 1).div_ceil(c);
    }
    (picks - 1).div_ceil(c) + 1
}

/// Iterated-majority homogeneous subset for a coloring of index pairs.
///
/// `color(i, j)` is called with `i < j` and must be below `colors`.
pub fn homogeneous_subset<F>(len: usize, colors: usize, color: F) -> Result<Homogeneous>
where
    F: Fn(usize, usize) -> usize,
{
    if len == 0 || colors == 0 {
        return Err(Error::Range(
            "homogeneous subset needs items and at least one color".into(),
        ));
    }
    let mut pool: Vec<usize> = (0..len).collect();
    let mut picks: Vec<(usize, usize)> = Vec::new();
    let last;
    loop {
        let v = pool[0];
        if pool.len() == 1 {
            last = v;
            break;
        }
        let mut classes = vec![Vec::new(); colors];
        for &w in &pool[1..] {
            let c = color(v, w);
            if c >= colors {
                return Err(Error::Range(format!(
                    "color {c} of pair ({v}, {w}) is not below {colors}"
                )));
            }
            classes[c].push(w);
        }
        let (c, class) = classes
            .into_iter()
            .enumerate()
            .max_by(|(ca, a), (cb, b)| a.len().cmp(&b.len()).then(cb.cmp(ca)))
            .expect("at least one color");
        picks.push((v, c));
        pool = class;
    }
    let mut counts = vec![0usize; colors];
    for &(_, c) in &picks {
        counts[c] += 1;
    }
    let best = (0..colors)
        .max_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a)))
        .unwrap_or(0);
    let mut indices: Vec<usize> = picks.iter().filter(|(_, c)| *c == best).map(|(v, _)| *v).collect();
    indices.push(last);
    for (a, &i) in indices.iter().enumerate() {
        for &j in &indices[a + 1..] {
            if color(i, j) != best {
                return Err(Error::Range(format!("internal: pair ({i}, {j}) is not homogeneous")));
            }
        }
    }
    Ok(Homogeneous { indices, color: best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::int;
    use crate::kernel::{GraphInstance, Polynomial};
    use crate::pt;

    fn explicit(n: usize, edges: &[(usize, usize)]) -> SampleUniverse {
        SampleUniverse::of_explicit(GraphInstance::explicit_on_line(n, edges).unwrap()).unwrap()
    }

    fn complete(n: usize) -> SampleUniverse {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        explicit(n, &e)
    }

    fn line(points: &[i64]) -> SampleUniverse {
        let g = GraphInstance::distance(1, vec![int(1)]).unwrap();
        SampleUniverse::new(g, points.iter().map(|&p| pt![p]).collect()).unwrap()
    }

    #[test]
    fn planted_half_graph_is_found_with_identity() {
        let spec = VariationSpec::new(Family::Half, Side::Anticlique, Side::Anticlique, 3).unwrap();
        let u = SampleUniverse::of_explicit(spec.planted().unwrap()).unwrap();
        let found = find_variation_prefix(&u, &spec, Parallelism::default()).unwrap();
        let w = found.witness.unwrap();
        assert!(w.verify(&u));
        assert_eq!(w.mapping, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn complete_graph_has_no_variation() {
        let u = complete(6);
        for spec in VariationSpec::all(2).unwrap() {
            assert!(find_variation_prefix(&u, &spec, Parallelism::Sequential)
                .unwrap()
                .witness
                .is_none());
        }
    }

    #[test]
    fn path_has_no_half_prefix() {
        let u = explicit(4, &[(0, 1), (1, 2), (2, 3)]);
        let spec = VariationSpec::new(Family::Half, Side::Anticlique, Side::Anticlique, 2).unwrap();
        assert!(find_variation_prefix(&u, &spec, Parallelism::default())
            .unwrap()
            .witness
            .is_none());
    }

    #[test]
    fn depth_below_two_is_rejected() {
        assert!(matches!(
            VariationSpec::new(Family::Half, Side::Clique, Side::Clique, 1),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn search_is_schedule_independent() {
        let spec = VariationSpec::new(Family::ThreeQuarter, Side::Clique, Side::Anticlique, 2).unwrap();
        let u = SampleUniverse::of_explicit(spec.planted().unwrap()).unwrap();
        let a = find_variation_prefix(&u, &spec, Parallelism::Sequential).unwrap();
        let b = find_variation_prefix(&u, &spec, Parallelism::default()).unwrap();
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.nodes_explored, b.nodes_explored);
    }

    #[test]
    fn clique_examples() {
        let tri = complete(3);
        assert_eq!(
            find_clique(&tri, 3, Parallelism::default()).unwrap().to_vec(),
            vec![0, 1, 2]
        );
        let l = line(&[0, 1, 2]);
        assert_eq!(find_clique(&l, 2, Parallelism::default()).unwrap().to_vec(), vec![0, 1]);
        assert!(find_clique(&l, 3, Parallelism::default()).is_none());
    }

    #[test]
    fn planar_rational_sample_is_triangle_free() {
        let g = GraphInstance::distance(2, vec![int(1)]).unwrap();
        let mut pts = Vec::new();
        for x in [0, 3, 4, 5, 8] {
            for y in [0, 3, 4, 5, 8] {
                pts.push(crate::kernel::Point::new(vec![
                    crate::kernel::rational::rat(x, 5),
                    crate::kernel::rational::rat(y, 5),
                ]));
            }
        }
        let u = SampleUniverse::new(g, pts).unwrap();
        assert!(u.edge_count() > 0);
        assert!(find_clique(&u, 3, Parallelism::default()).is_none());
    }

    #[test]
    fn k2n_examples() {
        let l = line(&[0, 1, 2]);
        let w = find_bipartite_k2n(&l, 1, Parallelism::default()).unwrap();
        assert_eq!(
            w,
            BipartiteWitness {
                pair: (0, 2),
                common: vec![1]
            }
        );
        let k4 = complete(4);
        let w = find_bipartite_k2n(&k4, 2, Parallelism::default()).unwrap();
        assert!(w.verify(&k4, 2));

        let parabola = GraphInstance::curve(Polynomial::new(vec![(int(1), 0, 1), (int(-1), 2, 0)]));
        let mut grid = Vec::new();
        for a in 0..5 {
            for b in 0..5 {
                grid.push(pt![a, b]);
            }
        }
        let u = SampleUniverse::new(parabola, grid).unwrap();
        assert!(u.edge_count() > 0);
        assert!(find_bipartite_k2n(&u, 5, Parallelism::default()).is_none());
    }

    #[test]
    fn homogeneous_examples() {
        let h = homogeneous_subset(7, 3, |_, _| 2).unwrap();
        assert_eq!(h.indices, (0..7).collect::<Vec<_>>());
        assert_eq!(h.color, 2);

        let h = homogeneous_subset(6, 2, |i, j| (i + j) % 2).unwrap();
        assert!(h.indices.len() >= 3);
        assert!(h.indices.len() >= homogeneous_guarantee(6, 2));

        let h = homogeneous_subset(1, 2, |_, _| 0).unwrap();
        assert_eq!(h.indices, vec![0]);
    }
}
