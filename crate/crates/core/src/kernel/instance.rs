//! Graph instances with exact adjacency.

use std::collections::{BTreeSet, HashMap};

use num::{One, Signed, Zero};

use super::point::Point;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Bivariate polynomial `Σ c · u^i · v^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    pub terms: Vec<(Rational, u32, u32)>,
}

impl Polynomial {
    pub fn new(terms: Vec<(Rational, u32, u32)>) -> Self {
        Polynomial { terms }
    }

    pub fn eval(&self, u: &Rational, v: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(c, i, j)| c * num::pow(u.clone(), *i as usize) * num::pow(v.clone(), *j as usize))
            .sum()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|(c, _, _)| !c.is_zero())
            .map(|(_, i, j)| i + j)
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    Distance,
    CurveDifference,
    HammingUniform,
    HammingDiagonal,
    Explicit,
}

impl InstanceKind {
    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::Distance => "distance",
            InstanceKind::CurveDifference => "curveDifference",
            InstanceKind::HammingUniform => "hammingUniform",
            InstanceKind::HammingDiagonal => "hammingDiagonal",
            InstanceKind::Explicit => "explicit",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Adjacency {
    /// Sorted, pairwise distinct, positive squared distances.
    Distance {
        squared: Vec<Rational>,
    },
    Curve {
        poly: Polynomial,
    },
    HammingUniform {
        alphabet: u64,
    },
    HammingDiagonal,
    Explicit {
        vertices: Vec<Point>,
        index: HashMap<Point, usize>,
        edges: BTreeSet<(usize, usize)>,
    },
}

/// A finitely specified, symmetric, irreflexive adjacency predicate on `dim`-dimensional points.
#[derive(Debug, Clone)]
pub struct GraphInstance {
    dim: usize,
    adjacency: Adjacency,
}

impl GraphInstance {
    pub fn distance(dim: usize, squared: Vec<Rational>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInstance("dimension must be positive".into()));
        }
        if let Some(s) = squared.iter().find(|s| !s.is_positive()) {
            return Err(Error::InvalidInstance(format!("squared distance {s} is not positive")));
        }
        let mut sorted = squared.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != squared.len() {
            return Err(Error::InvalidInstance(
                "squared distances must be pairwise distinct".into(),
            ));
        }
        Ok(GraphInstance {
            dim,
            adjacency: Adjacency::Distance { squared: sorted },
        })
    }

    /// Planar graph joining distinct x, y when p(x−y)=0 or p(y−x)=0.
    pub fn curve(poly: Polynomial) -> Self {
        GraphInstance {
            dim: 2,
            adjacency: Adjacency::Curve { poly },
        }
    }

    pub fn hamming_uniform(breadth: usize, alphabet: u64) -> Result<Self> {
        if breadth == 0 || alphabet == 0 {
            return Err(Error::InvalidInstance("breadth and alphabet must be positive".into()));
        }
        Ok(GraphInstance {
            dim: breadth,
            adjacency: Adjacency::HammingUniform { alphabet },
        })
    }

    /// Words x with x(n) ≤ n, joined when they differ in exactly one entry.
    pub fn hamming_diagonal(breadth: usize) -> Result<Self> {
        if breadth == 0 {
            return Err(Error::InvalidInstance("breadth must be positive".into()));
        }
        Ok(GraphInstance {
            dim: breadth,
            adjacency: Adjacency::HammingDiagonal,
        })
    }

    pub fn explicit(vertices: Vec<Point>, edges: &[(usize, usize)]) -> Result<Self> {
        let dim = vertices
            .first()
            .map(Point::dim)
            .ok_or_else(|| Error::InvalidInstance("explicit graph needs at least one vertex".into()))?;
        if dim == 0 {
            return Err(Error::InvalidInstance("dimension must be positive".into()));
        }
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if v.dim() != dim {
                return Err(Error::InvalidInstance(format!("vertex {i} has dimension {}", v.dim())));
            }
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::InvalidInstance(format!("duplicate vertex at index {i}")));
            }
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= vertices.len() || b >= vertices.len() {
                return Err(Error::InvalidInstance(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidInstance(format!("self-loop at {a}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(GraphInstance {
            dim,
            adjacency: Adjacency::Explicit {
                vertices,
                index,
                edges: set,
            },
        })
    }

    /// Explicit graph on vertices `(0), (1), …, (n−1)` of the line.
    pub fn explicit_on_line(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::explicit((0..n as i64).map(|i| Point::from_ints(&[i])).collect(), edges)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> InstanceKind {
        match self.adjacency {
            Adjacency::Distance { .. } => InstanceKind::Distance,
            Adjacency::Curve { .. } => InstanceKind::CurveDifference,
            Adjacency::HammingUniform { .. } => InstanceKind::HammingUniform,
            Adjacency::HammingDiagonal => InstanceKind::HammingDiagonal,
            Adjacency::Explicit { .. } => InstanceKind::Explicit,
        }
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    pub fn curve_degree(&self) -> Option<u32> {
        match &self.adjacency {
            Adjacency::Curve { poly } => Some(poly.degree()),
            _ => None,
        }
    }

    /// Largest admissible entry at Hamming coordinate `n`, if this is a Hamming kind.
    pub fn hamming_max_entry(&self, n: usize) -> Option<u64> {
        match self.adjacency {
            Adjacency::HammingUniform { alphabet } => Some(alphabet - 1),
            Adjacency::HammingDiagonal => Some(n as u64),
            _ => None,
        }
    }

    pub fn validate_point(&self, x: &Point) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::InvalidPoint(format!(
                "{x} has dimension {}, instance has {}",
                x.dim(),
                self.dim
            )));
        }
        match &self.adjacency {
            Adjacency::HammingUniform { .. } | Adjacency::HammingDiagonal => {
                for (n, c) in x.coords().iter().enumerate() {
                    let max = self.hamming_max_entry(n).unwrap_or(0);
                    let ok = c.denom().is_one() && !c.is_negative() && c.numer() <= &num::BigInt::from(max);
                    if !ok {
                        return Err(Error::InvalidPoint(format!(
                            "{x}: entry {n} must be an integer in 0..={max}"
                        )));
                    }
                }
                Ok(())
            }
            Adjacency::Explicit { index, .. } => {
                if index.contains_key(x) {
                    Ok(())
                } else {
                    Err(Error::InvalidPoint(format!(
                        "{x} is not a vertex of the explicit graph"
                    )))
                }
            }
            _ => Ok(()),
        }
    }

    pub fn adjacent(&self, x: &Point, y: &Point) -> Result<bool> {
        self.validate_point(x)?;
        self.validate_point(y)?;
        Ok(self.adjacent_unchecked(x, y))
    }

    /// Adjacency for points already known to be valid.
    pub(crate) fn adjacent_unchecked(&self, x: &Point, y: &Point) -> bool {
        if x == y {
            return false;
        }
        match &self.adjacency {
            Adjacency::Distance { squared } => squared.binary_search(&x.squared_distance(y)).is_ok(),
            Adjacency::Curve { poly } => {
                let du = &x.coords()[0] - &y.coords()[0];
                let dv = &x.coords()[1] - &y.coords()[1];
                poly.eval(&du, &dv).is_zero() || poly.eval(&-du, &-dv).is_zero()
            }
            Adjacency::HammingUniform { .. } | Adjacency::HammingDiagonal => {
                x.coords().iter().zip(y.coords()).filter(|(a, b)| a != b).count() == 1
            }
            Adjacency::Explicit { index, edges, .. } => {
                let (a, b) = (index[x], index[y]);
                edges.contains(&(a.min(b), a.max(b)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::{int, rat};
    use crate::pt;

    #[test]
    fn distance_examples() {
        let line = GraphInstance::distance(1, vec![int(1)]).unwrap();
        assert!(line.adjacent(&pt![0], &pt![1]).unwrap());
        assert!(!line.adjacent(&pt![0], &pt![0]).unwrap());
        let plane = GraphInstance::distance(2, vec![int(1)]).unwrap();
        assert!(plane.adjacent(&pt![0, 0], &pt![rat(3, 5), rat(4, 5)]).unwrap());
        assert!(matches!(
            plane.adjacent(&pt![0], &pt![1, 0]),
            Err(Error::InvalidPoint(_))
        ));
    }

    #[test]
    fn distance_set_validation() {
        assert!(GraphInstance::distance(1, vec![int(1), int(1)]).is_err());
        assert!(GraphInstance::distance(1, vec![int(0)]).is_err());
        assert!(GraphInstance::distance(1, vec![rat(-1, 4)]).is_err());
    }

    #[test]
    fn hamming_diagonal_examples() {
        let h = GraphInstance::hamming_diagonal(3).unwrap();
        assert!(h.adjacent(&pt![0, 0, 0], &pt![0, 0, 2]).unwrap());
        assert!(!h.adjacent(&pt![0, 0, 0], &pt![0, 1, 1]).unwrap());
        assert!(h.validate_point(&pt![1, 0, 0]).is_err());
        assert!(h.validate_point(&pt![0, 2, 0]).is_err());
    }

    #[test]
    fn curve_difference() {
        // v = u²
        let parabola = GraphInstance::curve(Polynomial::new(vec![(int(1), 0, 1), (int(-1), 2, 0)]));
        assert!(parabola.adjacent(&pt![0, 0], &pt![2, 4]).unwrap());
        assert!(parabola.adjacent(&pt![2, 4], &pt![0, 0]).unwrap());
        assert!(!parabola.adjacent(&pt![0, 0], &pt![1, 2]).unwrap());
        assert_eq!(parabola.curve_degree(), Some(2));
    }

    #[test]
    fn explicit_validation() {
        assert!(GraphInstance::explicit_on_line(3, &[(0, 0)]).is_err());
        assert!(GraphInstance::explicit_on_line(3, &[(0, 3)]).is_err());
        let g = GraphInstance::explicit_on_line(3, &[(1, 0)]).unwrap();
        assert!(g.adjacent(&pt![0], &pt![1]).unwrap());
        assert!(g.adjacent(&pt![1], &pt![0]).unwrap());
        assert!(!g.adjacent(&pt![1], &pt![2]).unwrap());
        assert!(g.adjacent(&pt![7], &pt![1]).is_err());
    }
}
