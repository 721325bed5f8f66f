//! Seeded generators for universes, conditions and locations.

use std::collections::{BTreeMap, HashSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::hamming;
use crate::kernel::rational::{int, rat, Rational};
use crate::kernel::{BoxSearch, GraphInstance, Point, PointSet, SampleUniverse, TaggedBox};
use crate::lattice;
use crate::poset::{Location, PCondition, QCondition};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The universe families drawn by [`universe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UniverseKind {
    Line,
    Plane,
    Hamming,
    Explicit,
}

impl UniverseKind {
    pub const ALL: [UniverseKind; 4] = [
        UniverseKind::Line,
        UniverseKind::Plane,
        UniverseKind::Hamming,
        UniverseKind::Explicit,
    ];

    pub fn describe(self) -> &'static str {
        match self {
            UniverseKind::Line => "line: n uniform in [2, max] distinct points i/2, i uniform in [-8, 8], unit distance",
            UniverseKind::Plane => {
                "plane: walk from the origin of n - 1 steps, each a uniform sign pattern of (1,0), (3/5,4/5), (5/13,12/13) or a swap, unit distance"
            }
            UniverseKind::Hamming => "hamming: diagonal truncation, N uniform in [1, 3], each word kept with probability 3/4 (at least one)",
            UniverseKind::Explicit => "explicit: n uniform in [2, max] vertices i/4, each edge present with probability edge_percent/100",
        }
    }
}

pub fn line(rng: &mut ChaCha8Rng, max_points: usize) -> Result<SampleUniverse> {
    let n = rng.random_range(2..=max_points.clamp(2, 17));
    let mut grid: Vec<i64> = (-8..=8).collect();
    grid.shuffle(rng);
    let mut picked: Vec<i64> = grid[..n].to_vec();
    picked.sort_unstable();
    let g = GraphInstance::distance(1, vec![int(1)])?;
    SampleUniverse::new(g, picked.into_iter().map(|i| Point::new(vec![rat(i, 2)])).collect())
}

pub fn plane(rng: &mut ChaCha8Rng, max_points: usize) -> Result<SampleUniverse> {
    let n = rng.random_range(2..=max_points.max(2));
    let base = [(int(1), int(0)), (rat(3, 5), rat(4, 5)), (rat(5, 13), rat(12, 13))];
    let mut points = vec![Point::new(vec![int(0), int(0)])];
    let mut seen: HashSet<Point> = points.iter().cloned().collect();
    let mut at = (int(0), int(0));
    let mut attempts = 0;
    while points.len() < n && attempts < 64 * n {
        attempts += 1;
        let (mut dx, mut dy): (Rational, Rational) = base.choose(rng).cloned().expect("nonempty");
        if rng.random_bool(0.5) {
            std::mem::swap(&mut dx, &mut dy);
        }
        if rng.random_bool(0.5) {
            dx = -dx;
        }
        if rng.random_bool(0.5) {
            dy = -dy;
        }
        at = (&at.0 + dx, &at.1 + dy);
        let p = Point::new(vec![at.0.clone(), at.1.clone()]);
        if seen.insert(p.clone()) {
            points.push(p);
        }
    }
    SampleUniverse::new(GraphInstance::distance(2, vec![int(1)])?, points)
}

pub fn hamming(rng: &mut ChaCha8Rng) -> Result<SampleUniverse> {
    let breadth = rng.random_range(1..=3);
    let full = hamming::make_diagonal_hamming(breadth, hamming::DEFAULT_SIZE_BOUND)?;
    let mut keep: Vec<Point> = full
        .points()
        .iter()
        .filter(|_| rng.random_bool(0.75))
        .cloned()
        .collect();
    if keep.is_empty() {
        keep.push(full.points().choose(rng).expect("nonempty").clone());
    }
    SampleUniverse::new(full.instance().clone(), keep)
}

/// Random graph on the points `i/4`, so that small boxes can hold edges.
pub fn explicit(
    rng: &mut ChaCha8Rng,
    min_points: usize,
    max_points: usize,
    edge_percent: u64,
) -> Result<SampleUniverse> {
    let n = rng.random_range(min_points.max(1)..=max_points.max(min_points.max(1)));
    let p = (edge_percent.min(100) as f64) / 100.0;
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|_| rng.random_bool(p))
        .collect();
    explicit_graph(n, &edges)
}

pub fn explicit_graph(n: usize, edges: &[(usize, usize)]) -> Result<SampleUniverse> {
    let vertices = (0..n as i64).map(|i| Point::new(vec![rat(i, 4)])).collect();
    SampleUniverse::of_explicit(GraphInstance::explicit(vertices, edges)?)
}

pub fn universe(
    rng: &mut ChaCha8Rng,
    kind: UniverseKind,
    max_points: usize,
    edge_percent: u64,
) -> Result<SampleUniverse> {
    match kind {
        UniverseKind::Line => line(rng, max_points),
        UniverseKind::Plane => plane(rng, max_points),
        UniverseKind::Hamming => hamming(rng),
        UniverseKind::Explicit => explicit(rng, 2, max_points, edge_percent),
    }
}

pub fn any_universe(
    rng: &mut ChaCha8Rng,
    max_points: usize,
    edge_percent: u64,
) -> Result<(UniverseKind, SampleUniverse)> {
    let kind = *UniverseKind::ALL.choose(rng).expect("nonempty");
    Ok((kind, universe(rng, kind, max_points, edge_percent)?))
}

pub fn subset(rng: &mut ChaCha8Rng, universe: &SampleUniverse, p: f64) -> PointSet {
    PointSet::from_indices(universe.len(), (0..universe.len()).filter(|_| rng.random_bool(p)))
}

/// A random box around `x`: level in `0..=3`, tag in `0..=1`, distinct from `taken`.
pub fn random_box(rng: &mut ChaCha8Rng, x: &Point, taken: &HashSet<TaggedBox>) -> Result<TaggedBox> {
    let level = rng.random_range(0..=3);
    let tag = rng.random_range(0..=1u64.min(level as u64));
    BoxSearch::around(x)
        .from_level(level)
        .with_tag(Some(tag))
        .excluding(taken)
        .first()
}

/// A P-condition on the good closure of a sparse random seed set.
pub fn p_condition(rng: &mut ChaCha8Rng, universe: &SampleUniverse) -> Result<PCondition> {
    let seed = subset(rng, universe, 0.25);
    let domain = lattice::good_closure(universe, &seed);
    let mut assignment: BTreeMap<usize, TaggedBox> = BTreeMap::new();
    for x in domain.iter() {
        let taken = assignment
            .iter()
            .filter(|(&y, _)| universe.adjacent(x, y))
            .map(|(_, b)| b.clone())
            .collect();
        assignment.insert(x, random_box(rng, universe.point(x), &taken)?);
    }
    PCondition::new(universe, assignment)
}

/// A proper Q-condition on a random domain of at most `max_size` points.
pub fn q_condition(
    rng: &mut ChaCha8Rng,
    universe: &SampleUniverse,
    max_size: usize,
    colors: u64,
) -> Result<QCondition> {
    let size = rng.random_range(1..=max_size.min(universe.len()).max(1));
    let mut order: Vec<usize> = (0..universe.len()).collect();
    order.shuffle(rng);
    let mut assignment = BTreeMap::new();
    for &x in order.iter().take(size) {
        let free: Vec<u64> = (0..colors.max(1))
            .filter(|&c| !assignment.iter().any(|(&y, &d)| d == c && universe.adjacent(x, y)))
            .collect();
        if let Some(&c) = free.choose(rng) {
            assignment.insert(x, c);
        }
    }
    QCondition::new(universe, assignment)
}

/// A condition at `loc`: one uniformly chosen universe point in each box.
pub fn q_at_location(rng: &mut ChaCha8Rng, universe: &SampleUniverse, loc: &Location) -> Result<QCondition> {
    let mut assignment = BTreeMap::new();
    for (b, &c) in loc.boxes().iter().zip(loc.colors()) {
        let inside: Vec<usize> = (0..universe.len()).filter(|&i| b.contains(universe.point(i))).collect();
        let &x = inside
            .choose(rng)
            .ok_or_else(|| crate::Error::Location(format!("{b} holds no universe point")))?;
        assignment.insert(x, c);
    }
    QCondition::new(universe, assignment)
}

/// Points `i/4` inside the level-0 boxes `(2j − 1, 2j + 1)`, `j < boxes`,
/// with unit distance; a triangle-free universe.
pub fn quarter_line(boxes: usize) -> Result<SampleUniverse> {
    let points = (-3..8 * boxes as i64 - 4)
        .filter(|i| (i + 4) % 8 != 0)
        .map(|i| Point::new(vec![rat(i, 4)]))
        .collect();
    SampleUniverse::new(GraphInstance::distance(1, vec![int(1)])?, points)
}

/// The boxes of [`quarter_line`] with colors `0..boxes`.
pub fn quarter_location(universe: &SampleUniverse, boxes: usize) -> Result<Location> {
    let bs = (0..boxes as i64)
        .map(|j| TaggedBox::from_ints(0, 0, &[2 * j - 1]))
        .collect::<Result<Vec<_>>>()?;
    Location::new(universe, bs, (0..boxes as u64).collect())
}

/// A nested chain of good stages ending at the universe, each with a proper
/// natural coloring, whose first stage contains `start`.
pub fn stage_chain(rng: &mut ChaCha8Rng, universe: &SampleUniverse, start: &PointSet) -> crate::coloring::StageChain {
    let mut stages = Vec::new();
    let mut current = lattice::good_closure(universe, start);
    loop {
        stages.push(current.clone());
        if current == universe.full_set() {
            break;
        }
        let mut grow = current.union(&subset(rng, universe, 0.3));
        if grow == current {
            let missing = universe.full_set().difference(&current);
            grow.insert(missing.first().expect("not yet full"));
        }
        current = lattice::good_closure(universe, &grow);
    }
    let colorings = stages
        .iter()
        .map(|set| {
            let mut order = set.to_vec();
            order.shuffle(rng);
            let mut coloring: BTreeMap<usize, u64> = BTreeMap::new();
            for x in order {
                let c = (0..)
                    .find(|&c| !coloring.iter().any(|(&y, &d)| d == c && universe.adjacent(x, y)))
                    .expect("some color is free");
                coloring.insert(x, c);
            }
            coloring
        })
        .collect();
    crate::coloring::StageChain {
        stages: stages.iter().map(PointSet::to_vec).collect(),
        colorings,
    }
}

/// Plants the induced pattern of `spec` on a random choice of vertices of a
/// random graph, returning the universe and the planted mapping.
pub fn planted(
    rng: &mut ChaCha8Rng,
    spec: &crate::patterns::VariationSpec,
    n: usize,
    edge_percent: u64,
) -> Result<(SampleUniverse, Vec<usize>)> {
    let k = spec.vertex_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mapping: Vec<usize> = order[..k].to_vec();
    let mut role = vec![None; n];
    for (r, &v) in mapping.iter().enumerate() {
        role[v] = Some(r);
    }
    let p = (edge_percent.min(100) as f64) / 100.0;
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let present = match (role[a], role[b]) {
                (Some(ra), Some(rb)) => spec.edge(ra, rb),
                _ => rng.random_bool(p),
            };
            if present {
                edges.push((a, b));
            }
        }
    }
    Ok((explicit_graph(n, &edges)?, mapping))
}
