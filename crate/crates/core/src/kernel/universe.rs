//! Finite sample universes and the neighborhood operators Γ(x), Γ(a).

use std::collections::HashMap;

use super::instance::GraphInstance;
use super::point::Point;
use super::pointset::PointSet;
use crate::error::{Error, Result};
use crate::exec::{self, Parallelism};

/// A finite, duplicate-free, ordered set of points of one instance.
///
/// Adjacency is evaluated once at construction; every set operator below is
/// relative to this universe.
#[derive(Debug, Clone)]
pub struct SampleUniverse {
    instance: GraphInstance,
    points: Vec<Point>,
    index: HashMap<Point, usize>,
    closed: Vec<PointSet>,
}

impl SampleUniverse {
    pub fn new(instance: GraphInstance, points: Vec<Point>) -> Result<Self> {
        Self::with_parallelism(instance, points, Parallelism::default())
    }

    pub fn with_parallelism(instance: GraphInstance, points: Vec<Point>, mode: Parallelism) -> Result<Self> {
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            instance.validate_point(p)?;
            if let Some(j) = index.insert(p.clone(), i) {
                return Err(Error::InvalidPoint(format!(
                    "duplicate point {p} at indices {j} and {i}"
                )));
            }
        }
        let n = points.len();
        let closed = exec::map_indexed(mode, n, |i| {
            let mut row = PointSet::empty(n);
            row.insert(i);
            for j in 0..n {
                if instance.adjacent_unchecked(&points[i], &points[j]) {
                    row.insert(j);
                }
            }
            row
        });
        Ok(SampleUniverse {
            instance,
            points,
            index,
            closed,
        })
    }

    /// Universe consisting of all vertices of an explicit instance, in order.
    pub fn of_explicit(instance: GraphInstance) -> Result<Self> {
        let points = match instance.adjacency() {
            super::instance::Adjacency::Explicit { vertices, .. } => vertices.clone(),
            _ => return Err(Error::UnsupportedKind(instance.kind().name())),
        };
        Self::new(instance, points)
    }

    pub fn instance(&self) -> &GraphInstance {
        &self.instance
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn index_of(&self, x: &Point) -> Result<usize> {
        self.index
            .get(x)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(x.to_string()))
    }

    pub fn indices_of(&self, xs: &[Point]) -> Result<PointSet> {
        let mut s = self.empty_set();
        for x in xs {
            s.insert(self.index_of(x)?);
        }
        Ok(s)
    }

    pub fn points_of(&self, s: &PointSet) -> Vec<Point> {
        s.iter().map(|i| self.points[i].clone()).collect()
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.len())
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.closed[i].contains(j)
    }

    /// Γ(x) = {y : y = x or y Γ x}.
    pub fn closed_neighborhood(&self, i: usize) -> &PointSet {
        &self.closed[i]
    }

    /// Open neighborhood: adjacent points only.
    pub fn neighbors(&self, i: usize) -> PointSet {
        let mut s = self.closed[i].clone();
        s.remove(i);
        s
    }

    pub fn neighborhood(&self, x: &Point) -> Result<PointSet> {
        Ok(self.closed[self.index_of(x)?].clone())
    }

    /// Γ(a) = ⋂_{x∈a} Γ(x); the whole universe for a = ∅.
    pub fn common_neighborhood(&self, a: &PointSet) -> PointSet {
        let mut s = self.full_set();
        for x in a.iter() {
            s.intersect_with(&self.closed[x]);
        }
        s
    }

    pub fn common_neighborhood_of(&self, a: &[Point]) -> Result<PointSet> {
        Ok(self.common_neighborhood(&self.indices_of(a)?))
    }

    pub fn is_clique(&self, s: &PointSet) -> bool {
        s.iter().all(|x| s.is_subset(&self.closed[x]))
    }

    pub fn edge_count(&self) -> usize {
        self.closed.iter().map(|r| r.len() - 1).sum::<usize>() / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::int;
    use crate::pt;

    fn line(points: &[i64]) -> SampleUniverse {
        let g = GraphInstance::distance(1, vec![int(1)]).unwrap();
        SampleUniverse::new(g, points.iter().map(|&p| pt![p]).collect()).unwrap()
    }

    #[test]
    fn neighborhood_examples() {
        let u = line(&[0, 1, 2]);
        assert_eq!(u.neighborhood(&pt![1]).unwrap().to_vec(), vec![0, 1, 2]);
        assert!(matches!(u.neighborhood(&pt![5]), Err(Error::UnknownPoint(_))));

        let edgeless = SampleUniverse::of_explicit(GraphInstance::explicit_on_line(3, &[]).unwrap()).unwrap();
        assert_eq!(edgeless.neighborhood(&pt![1]).unwrap().to_vec(), vec![1]);

        let tri = SampleUniverse::of_explicit(GraphInstance::explicit_on_line(3, &[(0, 1), (1, 2), (0, 2)]).unwrap())
            .unwrap();
        assert_eq!(tri.neighborhood(&pt![0]).unwrap().to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn common_neighborhood_examples() {
        let u = line(&[0, 1, 2]);
        assert_eq!(u.common_neighborhood_of(&[pt![0], pt![2]]).unwrap().to_vec(), vec![1]);
        assert_eq!(u.common_neighborhood_of(&[]).unwrap().to_vec(), vec![0, 1, 2]);
        assert_eq!(
            u.common_neighborhood_of(&[pt![2]]).unwrap(),
            u.neighborhood(&pt![2]).unwrap()
        );
        assert!(u.common_neighborhood_of(&[pt![3]]).is_err());
    }

    #[test]
    fn duplicates_rejected() {
        let g = GraphInstance::distance(1, vec![int(1)]).unwrap();
        let err = SampleUniverse::new(g, vec![pt![0], pt![1], pt![0]]).unwrap_err();
        assert!(err.to_string().contains("indices 0 and 2"));
    }
}
