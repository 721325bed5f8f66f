//! Hamming truncations, the ε-matrix map into the Vitali relation, and the
//! embedding of the diagonal Hamming graph into a distance graph on the line.

use num::{Signed, Zero};
use serde::Serialize;

use crate::coloring;
use crate::error::{Error, Result};
use crate::exec::{self, Parallelism};
use crate::kernel::rational::{format_rational, int, Rational};
use crate::kernel::{GraphInstance, Point, PointSet, SampleUniverse};
use crate::patterns;

/// Largest truncation built by default (7! points).
pub const DEFAULT_SIZE_BOUND: u128 = 5040;

/// All words `x` with `x(n) ≤ n` for `n < breadth`, in lexicographic order.
pub fn make_diagonal_hamming(breadth: usize, size_bound: u128) -> Result<SampleUniverse> {
    let radices: Vec<u64> = (1..=breadth as u64).collect();
    let points = mixed_radix(&radices, size_bound)?;
    SampleUniverse::new(GraphInstance::hamming_diagonal(breadth)?, points)
}

/// All words of length `breadth` over `0..alphabet`.
pub fn make_uniform_hamming(breadth: usize, alphabet: u64, size_bound: u128) -> Result<SampleUniverse> {
    let radices = vec![alphabet; breadth];
    let points = mixed_radix(&radices, size_bound)?;
    SampleUniverse::new(GraphInstance::hamming_uniform(breadth, alphabet)?, points)
}

fn mixed_radix(radices: &[u64], size_bound: u128) -> Result<Vec<Point>> {
    let mut size: u128 = 1;
    for &r in radices {
        size = size.saturating_mul(r as u128);
    }
    if radices.is_empty() || size > size_bound {
        return Err(Error::OracleBound {
            size,
            bound: size_bound,
        });
    }
    let mut out = Vec::with_capacity(size as usize);
    let mut word = vec![0i64; radices.len()];
    loop {
        out.push(Point::from_ints(&word));
        // increment, last coordinate fastest
        let mut n = radices.len();
        loop {
            if n == 0 {
                return Ok(out);
            }
            n -= 1;
            word[n] += 1;
            if (word[n] as u64) < radices[n] {
                break;
            }
            word[n] = 0;
        }
    }
}

/// `values[n][m] = ε_{n,m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonMatrix {
    values: Vec<Vec<Rational>>,
    bound: Rational,
}

impl EpsilonMatrix {
    pub fn new(values: Vec<Vec<Rational>>, bound: Rational) -> Result<Self> {
        let flat: Vec<&Rational> = values.iter().flatten().collect();
        if flat.is_empty() || values.iter().any(|row| row.len() != values[0].len()) {
            return Err(Error::InvalidSequence(
                "matrix rows must be nonempty and of equal length".into(),
            ));
        }
        if let Some(v) = flat.iter().find(|v| !v.is_positive()) {
            return Err(Error::InvalidSequence(format!("entry {v} is not positive")));
        }
        let mut sorted = flat.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSequence("entries must be pairwise distinct".into()));
        }
        let total: Rational = flat.iter().copied().sum();
        if total >= bound {
            return Err(Error::InvalidSequence(format!(
                "sum {} is not below {}",
                format_rational(&total),
                format_rational(&bound)
            )));
        }
        Ok(EpsilonMatrix { values, bound })
    }

    pub fn breadth(&self) -> usize {
        self.values.len()
    }

    pub fn alphabet(&self) -> usize {
        self.values[0].len()
    }

    pub fn get(&self, n: usize, m: usize) -> &Rational {
        &self.values[n][m]
    }

    pub fn sum(&self) -> Rational {
        self.values.iter().flatten().sum()
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }
}

/// ε_{n,m} = 2^{−(1 + nK + m)}: distinct, with sum 1 − 2^{−NK} < 1.
pub fn epsilon_matrix(breadth: usize, alphabet: usize) -> Result<EpsilonMatrix> {
    if breadth == 0 || alphabet == 0 {
        return Err(Error::Range("breadth and alphabet must be positive".into()));
    }
    let values = (0..breadth)
        .map(|n| {
            (0..alphabet)
                .map(|m| Rational::new(1.into(), num::BigInt::from(2).pow((1 + n * alphabet + m) as u32)))
                .collect()
        })
        .collect();
    EpsilonMatrix::new(values, int(1))
}

fn entry(x: &Point, n: usize) -> Result<usize> {
    let c = &x.coords()[n];
    if !c.is_integer() || c.is_negative() {
        return Err(Error::Range(format!("entry {n} of {x} is not a natural number")));
    }
    c.to_integer()
        .try_into()
        .map_err(|_| Error::Range(format!("entry {n} of {x} is too large")))
}

/// h(x) = Σ_n ε_{n, x(n)}.
pub fn vitali_map(x: &Point, eps: &EpsilonMatrix) -> Result<Rational> {
    if x.dim() != eps.breadth() {
        return Err(Error::Range(format!(
            "{x} has length {}, matrix breadth is {}",
            x.dim(),
            eps.breadth()
        )));
    }
    let mut h = Rational::zero();
    for n in 0..x.dim() {
        let m = entry(x, n)?;
        if m >= eps.alphabet() {
            return Err(Error::Range(format!(
                "entry {n} of {x} is not below {}",
                eps.alphabet()
            )));
        }
        h += eps.get(n, m);
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VitaliReport {
    pub edges_checked: usize,
    /// Edges whose endpoints have the same image.
    pub failures: Vec<(usize, usize)>,
}

impl VitaliReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every edge maps to two distinct reals with rational difference.
pub fn verify_vitali_homomorphism(
    universe: &SampleUniverse,
    eps: &EpsilonMatrix,
    mode: Parallelism,
) -> Result<VitaliReport> {
    let images: Vec<Rational> = universe
        .points()
        .iter()
        .map(|x| vitali_map(x, eps))
        .collect::<Result<_>>()?;
    let rows = exec::map_indexed(mode, universe.len(), |x| {
        let mut checked = 0;
        let mut bad = Vec::new();
        for y in universe.neighbors(x).iter().filter(|&y| y > x) {
            checked += 1;
            // the difference of two rationals is rational; only nonzero is at stake
            if images[x] == images[y] {
                bad.push((x, y));
            }
        }
        (checked, bad)
    });
    let mut report = VitaliReport {
        edges_checked: 0,
        failures: Vec::new(),
    };
    for (checked, bad) in rows {
        report.edges_checked += checked;
        report.failures.extend(bad);
    }
    Ok(report)
}

/// ε_n with Σ (n+1) ε_n below a declared bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonSequence {
    values: Vec<Rational>,
    bound: Rational,
}

impl EpsilonSequence {
    pub fn new(values: Vec<Rational>, bound: Rational) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_positive()) {
            return Err(Error::InvalidSequence(format!(
                "ε = {} is not positive",
                format_rational(v)
            )));
        }
        let weighted: Rational = values.iter().enumerate().map(|(n, e)| e * int(n as i64 + 1)).sum();
        if weighted >= bound {
            return Err(Error::InvalidSequence(format!(
                "Σ (n+1) ε_n = {} is not below {}",
                format_rational(&weighted),
                format_rational(&bound)
            )));
        }
        Ok(EpsilonSequence { values, bound })
    }

    /// ε_n = 4^{−n} for n < len, with bound 2.
    pub fn powers_of_four(len: usize) -> Self {
        let values = (0..len)
            .map(|n| Rational::new(1.into(), num::BigInt::from(4).pow(n as u32)))
            .collect();
        Self::new(values, int(2)).expect("Σ (n+1) 4^{-n} < 16/9")
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The labelled distances `(m, n, m·ε_n)` for `1 ≤ m ≤ n < len`.
    pub fn labelled_distances(&self) -> Vec<(usize, usize, Rational)> {
        let mut out = Vec::new();
        for (n, e) in self.values.iter().enumerate() {
            for m in 1..=n {
                out.push((m, n, e * int(m as i64)));
            }
        }
        out
    }

    /// Pairs of labels `(m, n)` giving the same distance.
    pub fn collisions(&self) -> Vec<((usize, usize), (usize, usize))> {
        let labelled = self.labelled_distances();
        let mut out = Vec::new();
        for (i, (m0, n0, d0)) in labelled.iter().enumerate() {
            for (m1, n1, d1) in &labelled[i + 1..] {
                if d0 == d1 {
                    out.push(((*m0, *n0), (*m1, *n1)));
                }
            }
        }
        out
    }

    /// The distance set `a = {m ε_n}`, sorted and without repetition.
    pub fn distance_set(&self) -> Vec<Rational> {
        let mut a: Vec<Rational> = self.labelled_distances().into_iter().map(|(_, _, d)| d).collect();
        a.sort();
        a.dedup();
        a
    }
}

#[derive(Debug, Clone)]
pub struct Embedding {
    pub universe: SampleUniverse,
    /// `images[i] = h(x_i)` for the i-th word of the truncation.
    pub images: Vec<Rational>,
    pub target: GraphInstance,
}

/// h(x) = Σ x(n) ε_n and the line distance graph with distances `a`.
pub fn embed_diagonal_into_distance(breadth: usize, eps: &EpsilonSequence) -> Result<Embedding> {
    if breadth == 0 || eps.len() < breadth {
        return Err(Error::InvalidSequence(format!(
            "need {breadth} values of ε, have {}",
            eps.len()
        )));
    }
    let universe = make_diagonal_hamming(breadth, DEFAULT_SIZE_BOUND)?;
    let images = universe
        .points()
        .iter()
        .map(|x| {
            let mut h = Rational::zero();
            for n in 0..breadth {
                h += &eps.values()[n] * int(entry(x, n)? as i64);
            }
            Ok(h)
        })
        .collect::<Result<Vec<_>>>()?;
    let truncated = EpsilonSequence::new(eps.values()[..breadth].to_vec(), eps.bound.clone())?;
    let squared = truncated.distance_set().iter().map(|d| d * d).collect();
    let target = GraphInstance::distance(1, squared)?;
    Ok(Embedding {
        universe,
        images,
        target,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub edges_checked: usize,
    /// Hamming edges whose images are not joined in the distance graph.
    pub failures: Vec<(usize, usize)>,
    /// Distinct labels `(m, n)` sharing one distance; reported, not fatal.
    pub collisions: Vec<((usize, usize), (usize, usize))>,
    /// `n · ε_n`, the largest distance realized by layer `n`.
    pub layer_sup: Vec<String>,
    /// The layer suprema decrease from layer 1 on.
    pub layers_decreasing: bool,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.layers_decreasing
    }
}

/// Checks every edge: the image distance is exactly `|x(n) − y(n)| ε_n` and lies in `a`.
pub fn verify_embedding(breadth: usize, eps: &EpsilonSequence, mode: Parallelism) -> Result<EmbeddingReport> {
    let emb = embed_diagonal_into_distance(breadth, eps)?;
    let u = &emb.universe;
    let rows = exec::map_indexed(mode, u.len(), |x| {
        let mut checked = 0;
        let mut bad = Vec::new();
        for y in u.neighbors(x).iter().filter(|&y| y > x) {
            checked += 1;
            let (px, py) = (u.point(x), u.point(y));
            let n = (0..breadth)
                .find(|&n| px.coords()[n] != py.coords()[n])
                .expect("adjacent words differ somewhere");
            let expected = (&px.coords()[n] - &py.coords()[n]).abs() * &eps.values()[n];
            let actual = (&emb.images[x] - &emb.images[y]).abs();
            let joined = emb
                .target
                .adjacent(
                    &Point::new(vec![emb.images[x].clone()]),
                    &Point::new(vec![emb.images[y].clone()]),
                )
                .unwrap_or(false);
            if actual != expected || !joined {
                bad.push((x, y));
            }
        }
        (checked, bad)
    });
    let mut edges_checked = 0;
    let mut failures = Vec::new();
    for (checked, bad) in rows {
        edges_checked += checked;
        failures.extend(bad);
    }
    let sup: Vec<Rational> = (0..breadth).map(|n| &eps.values()[n] * int(n as i64)).collect();
    let layers_decreasing = sup.iter().skip(1).zip(sup.iter().skip(2)).all(|(a, b)| b < a);
    let truncated = EpsilonSequence::new(eps.values()[..breadth].to_vec(), eps.bound.clone())?;
    Ok(EmbeddingReport {
        edges_checked,
        failures,
        collisions: truncated.collisions(),
        layer_sup: sup.iter().map(format_rational).collect(),
        layers_decreasing,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PieceReport {
    pub n: usize,
    pub size: usize,
    pub chromatic_number: usize,
    pub clique_number: usize,
    /// χ ≤ n + 2.
    pub within_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaReport {
    pub pieces: Vec<PieceReport>,
}

impl SigmaReport {
    pub fn passed(&self) -> bool {
        self.pieces.iter().all(|p| p.within_bound)
    }
}

/// Chromatic and clique numbers of each labelled piece of a partition.
pub fn sigma_bounded_check(
    universe: &SampleUniverse,
    pieces: &[(usize, PointSet)],
    oracle_bound: usize,
) -> Result<SigmaReport> {
    let mut covered = universe.empty_set();
    for (_, piece) in pieces {
        if piece.capacity() != universe.len() || !piece.is_disjoint(&covered) {
            return Err(Error::Partition("pieces overlap or do not match the universe".into()));
        }
        covered.union_with(piece);
    }
    if covered != universe.full_set() {
        return Err(Error::Partition(format!(
            "pieces cover {} of {} points",
            covered.len(),
            universe.len()
        )));
    }
    let mut reports = Vec::with_capacity(pieces.len());
    for (n, piece) in pieces {
        let sub = SampleUniverse::new(universe.instance().clone(), universe.points_of(piece))?;
        let chi = coloring::chromatic_number(&sub, oracle_bound)?.number;
        let mut omega = 0;
        while patterns::find_clique(&sub, omega + 1, Parallelism::Sequential).is_some() {
            omega += 1;
        }
        reports.push(PieceReport {
            n: *n,
            size: piece.len(),
            chromatic_number: chi,
            clique_number: omega,
            within_bound: chi <= n + 2,
        });
    }
    Ok(SigmaReport { pieces: reports })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::rat;
    use crate::pt;

    #[test]
    fn truncation_sizes() {
        let one = make_diagonal_hamming(1, DEFAULT_SIZE_BOUND).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.edge_count(), 0);
        let three = make_diagonal_hamming(3, DEFAULT_SIZE_BOUND).unwrap();
        assert_eq!(three.len(), 6);
        let a = three.index_of(&pt![0, 0, 0]).unwrap();
        let b = three.index_of(&pt![0, 1, 0]).unwrap();
        assert!(three.adjacent(a, b));
        assert!(matches!(
            make_diagonal_hamming(8, DEFAULT_SIZE_BOUND),
            Err(Error::OracleBound { .. })
        ));
        assert_eq!(make_uniform_hamming(2, 3, 100).unwrap().len(), 9);
    }

    #[test]
    fn matrix_examples() {
        let eps = epsilon_matrix(2, 2).unwrap();
        assert_eq!(eps.get(0, 0), &rat(1, 2));
        assert_eq!(eps.get(1, 1), &rat(1, 16));
        assert_eq!(eps.sum(), rat(15, 16));
        assert_eq!(epsilon_matrix(1, 1).unwrap().sum(), rat(1, 2));
        assert!(EpsilonMatrix::new(vec![vec![rat(1, 4), rat(1, 4)]], int(1)).is_err());
    }

    #[test]
    fn vitali_examples() {
        let eps = epsilon_matrix(2, 2).unwrap();
        assert_eq!(vitali_map(&pt![0, 1], &eps).unwrap(), rat(9, 16));
        assert_eq!(vitali_map(&pt![1, 1], &eps).unwrap(), rat(5, 16));
        assert!(matches!(vitali_map(&pt![2, 0], &eps), Err(Error::Range(_))));
        let u = make_uniform_hamming(2, 2, 100).unwrap();
        let report = verify_vitali_homomorphism(&u, &eps, Parallelism::default()).unwrap();
        assert!(report.passed());
        assert_eq!(report.edges_checked, 4);
    }

    #[test]
    fn embedding_examples() {
        let eps = EpsilonSequence::powers_of_four(3);
        let emb = embed_diagonal_into_distance(3, &eps).unwrap();
        let x = emb.universe.index_of(&pt![0, 0, 0]).unwrap();
        let y = emb.universe.index_of(&pt![0, 0, 2]).unwrap();
        assert_eq!((&emb.images[y] - &emb.images[x]).abs(), rat(1, 8));
        assert!(eps.distance_set().contains(&rat(1, 8)));
        let report = verify_embedding(4, &EpsilonSequence::powers_of_four(4), Parallelism::default()).unwrap();
        assert!(report.passed());
        assert!(report.collisions.is_empty());
    }

    #[test]
    fn powers_of_four_collide_at_five() {
        let eps = EpsilonSequence::powers_of_four(5);
        assert_eq!(eps.collisions(), vec![((1, 3), (4, 4))]);
        let report = verify_embedding(5, &eps, Parallelism::default()).unwrap();
        assert!(report.passed());
        assert_eq!(report.collisions.len(), 1);
    }

    #[test]
    fn sequence_validation() {
        assert!(EpsilonSequence::new(vec![rat(1, 2), rat(-1, 4)], int(2)).is_err());
        assert!(EpsilonSequence::new(vec![int(1), int(1)], int(2)).is_err());
    }

    #[test]
    fn sigma_examples() {
        let u = make_diagonal_hamming(3, DEFAULT_SIZE_BOUND).unwrap();
        let report = sigma_bounded_check(&u, &[(1, u.full_set())], 20).unwrap();
        assert_eq!(report.pieces[0].chromatic_number, 3);
        assert!(report.passed());
        let singles: Vec<(usize, PointSet)> = (0..u.len())
            .map(|i| (0, PointSet::from_indices(u.len(), [i])))
            .collect();
        assert!(sigma_bounded_check(&u, &singles, 20).unwrap().passed());
        assert!(matches!(
            sigma_bounded_check(&u, &[(1, PointSet::from_indices(u.len(), [0]))], 20),
            Err(Error::Partition(_))
        ));

        // the last coordinate of the N = 4 truncation carries a 4-clique
        let four = make_diagonal_hamming(4, DEFAULT_SIZE_BOUND).unwrap();
        let line: Vec<usize> = (0..4).map(|v| four.index_of(&pt![0, 0, 0, v]).unwrap()).collect();
        let clique = PointSet::from_indices(four.len(), line);
        let rest = four.full_set().difference(&clique);
        let report = sigma_bounded_check(&four, &[(1, clique), (5, rest)], 24).unwrap();
        assert_eq!(report.pieces[0].chromatic_number, 4);
        assert!(!report.pieces[0].within_bound);
        assert!(!report.passed());
    }
}
