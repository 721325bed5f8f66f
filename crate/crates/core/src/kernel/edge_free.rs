//! Deciding whether an edge runs between two open boxes.

use num::{BigInt, Signed, Zero};

use super::boxes::TaggedBox;
use super::instance::{Adjacency, GraphInstance};
use super::point::Point;
use super::rational::{int, rational_sqrt, Rational};
use crate::error::{Error, Result};

/// Whether `(O0 × O1) ∩ Γ` is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeStatus {
    Empty,
    /// An exact adjacent pair `(x, y)` with `x ∈ O0`, `y ∈ O1`.
    Nonempty(Point, Point),
    /// An edge exists over the reals but no rational witness was exhibited.
    Unknown,
}

impl EdgeStatus {
    pub fn is_empty(&self) -> bool {
        matches!(self, EdgeStatus::Empty)
    }
}

pub fn box_edge_free(instance: &GraphInstance, o0: &TaggedBox, o1: &TaggedBox) -> Result<EdgeStatus> {
    if o0.dim() != instance.dim() || o1.dim() != instance.dim() {
        return Err(Error::InvalidBox(format!(
            "boxes of dimension {}/{} for an instance of dimension {}",
            o0.dim(),
            o1.dim(),
            instance.dim()
        )));
    }
    match instance.adjacency() {
        Adjacency::Distance { squared } => Ok(distance_status(squared, o0, o1)),
        Adjacency::Explicit { vertices, edges, .. } => {
            for &(a, b) in edges {
                for (x, y) in [(a, b), (b, a)] {
                    if o0.contains(&vertices[x]) && o1.contains(&vertices[y]) {
                        return Ok(EdgeStatus::Nonempty(vertices[x].clone(), vertices[y].clone()));
                    }
                }
            }
            Ok(EdgeStatus::Empty)
        }
        Adjacency::HammingUniform { .. } | Adjacency::HammingDiagonal => Ok(hamming_status(instance, o0, o1)),
        Adjacency::Curve { .. } => Err(Error::UnsupportedKind("curveDifference")),
    }
}

fn distance_status(squared: &[Rational], o0: &TaggedBox, o1: &TaggedBox) -> EdgeStatus {
    let dim = o0.dim();
    // d = x − y ranges over the open box ∏ (lo_i, hi_i).
    let lo: Vec<Rational> = (0..dim).map(|i| o0.lower(i) - o1.upper(i)).collect();
    let hi: Vec<Rational> = (0..dim).map(|i| o0.upper(i) - o1.lower(i)).collect();
    let mut smin = Rational::zero();
    let mut smax = Rational::zero();
    for i in 0..dim {
        let (l2, h2) = (&lo[i] * &lo[i], &hi[i] * &hi[i]);
        if !(lo[i].is_negative() && hi[i].is_positive()) {
            smin += (&l2).min(&h2).clone();
        }
        smax += l2.max(h2);
    }
    // Achievable squared distances are exactly the open interval (smin, smax)
    // for positive values, so the boundary is never attained.
    let reachable: Vec<&Rational> = squared.iter().filter(|s| **s > smin && **s < smax).collect();
    if reachable.is_empty() {
        return EdgeStatus::Empty;
    }
    for s in reachable {
        if let Some(d) = difference_vector(s, &lo, &hi) {
            let (x, y) = realize(o0, o1, &d);
            return EdgeStatus::Nonempty(x, y);
        }
    }
    EdgeStatus::Unknown
}

fn inside(d: &[Rational], lo: &[Rational], hi: &[Rational]) -> bool {
    d.iter().zip(lo).zip(hi).all(|((v, l), h)| l < v && v < h)
}

/// A rational vector in `∏ (lo_i, hi_i)` of squared norm `s`.
fn difference_vector(s: &Rational, lo: &[Rational], hi: &[Rational]) -> Option<Vec<Rational>> {
    let dim = lo.len();
    let root = rational_sqrt(s);
    if let Some(r) = &root {
        for j in 0..dim {
            for sign in [1, -1] {
                let mut d = vec![Rational::zero(); dim];
                d[j] = r * int(sign);
                if inside(&d, lo, hi) {
                    return Some(d);
                }
            }
        }
    }
    if dim < 2 {
        return None;
    }
    let base = match root {
        Some(r) => {
            let mut p = vec![Rational::zero(); dim];
            p[0] = r;
            p
        }
        None => {
            let (a, b) = two_squares(s)?;
            let mut p = vec![Rational::zero(); dim];
            p[0] = a;
            p[1] = b;
            p
        }
    };
    // Every rational point of the sphere is P − 2(P·v)/|v|² v for an integer v.
    let reach: i64 = match dim {
        2 => 24,
        3 => 8,
        _ => 3,
    };
    for radius in 1..=reach {
        for v in integer_shell(dim, radius) {
            let vv: Rational = v.iter().map(|c| c * c).sum();
            let pv: Rational = base.iter().zip(&v).map(|(p, c)| p * c).sum();
            let t = (pv * int(2)) / vv;
            let d: Vec<Rational> = base.iter().zip(&v).map(|(p, c)| p - &t * c).collect();
            if inside(&d, lo, hi) {
                return Some(d);
            }
        }
    }
    None
}

/// s = a² + b² with small-denominator rationals, if such a split is found.
fn two_squares(s: &Rational) -> Option<(Rational, Rational)> {
    for q in 1..=48i64 {
        let qq = int(q);
        let mut p = 0i64;
        loop {
            let a = int(p) / &qq;
            let rest = s - &a * &a;
            if rest.is_negative() {
                break;
            }
            if let Some(b) = rational_sqrt(&rest) {
                return Some((a, b));
            }
            p += 1;
        }
    }
    None
}

/// Integer vectors with max-norm exactly `radius`, in lexicographic order.
fn integer_shell(dim: usize, radius: i64) -> impl Iterator<Item = Vec<Rational>> {
    let side = (2 * radius + 1) as usize;
    let total = side.pow(dim as u32);
    (0..total).filter_map(move |mut code| {
        let mut v = Vec::with_capacity(dim);
        let mut on_shell = false;
        for _ in 0..dim {
            let c = (code % side) as i64 - radius;
            code /= side;
            on_shell |= c.abs() == radius;
            v.push(int(c));
        }
        on_shell.then_some(v)
    })
}

fn realize(o0: &TaggedBox, o1: &TaggedBox, d: &[Rational]) -> (Point, Point) {
    let two = int(2);
    let x: Vec<Rational> = (0..o0.dim())
        .map(|i| {
            let lo = o0.lower(i).max(o1.lower(i) + &d[i]);
            let hi = o0.upper(i).min(o1.upper(i) + &d[i]);
            (lo + hi) / &two
        })
        .collect();
    let y = x.iter().zip(d).map(|(a, b)| a - b).collect();
    (Point::new(x), Point::new(y))
}

/// Admissible integer entries inside the open interval, as an inclusive range.
fn integer_range(lower: &Rational, upper: &Rational, max: u64) -> Option<(BigInt, BigInt)> {
    let first: BigInt = (lower.floor().to_integer() + BigInt::from(1)).max(BigInt::zero());
    let last: BigInt = (upper.ceil().to_integer() - BigInt::from(1)).min(BigInt::from(max));
    (first <= last).then_some((first, last))
}

fn hamming_status(instance: &GraphInstance, o0: &TaggedBox, o1: &TaggedBox) -> EdgeStatus {
    let dim = o0.dim();
    let mut r0 = Vec::with_capacity(dim);
    let mut r1 = Vec::with_capacity(dim);
    for n in 0..dim {
        let max = instance.hamming_max_entry(n).unwrap_or(0);
        match (
            integer_range(&o0.lower(n), &o0.upper(n), max),
            integer_range(&o1.lower(n), &o1.upper(n), max),
        ) {
            (Some(a), Some(b)) => {
                r0.push(a);
                r1.push(b);
            }
            _ => return EdgeStatus::Empty,
        }
    }
    let overlap = |(a, b): &(BigInt, BigInt), (c, d): &(BigInt, BigInt)| {
        let lo = a.max(c).clone();
        let hi = b.min(d).clone();
        (lo <= hi).then_some(lo)
    };
    for j in 0..dim {
        let (a0, b0) = &r0[j];
        let (a1, b1) = &r1[j];
        // a pair of distinct entries at coordinate j
        let pair = if a0 != b1 {
            Some((a0.clone(), b1.clone()))
        } else if b0 != a1 {
            Some((b0.clone(), a1.clone()))
        } else {
            None
        };
        let Some((u, v)) = pair else { continue };
        let shared: Option<Vec<BigInt>> = (0..dim)
            .map(|i| {
                if i == j {
                    Some(BigInt::zero())
                } else {
                    overlap(&r0[i], &r1[i])
                }
            })
            .collect();
        if let Some(mut common) = shared {
            let mut x: Vec<Rational> = common.iter().cloned().map(Rational::from_integer).collect();
            common[j] = v;
            x[j] = Rational::from_integer(u);
            let y = common.into_iter().map(Rational::from_integer).collect();
            return EdgeStatus::Nonempty(Point::new(x), Point::new(y));
        }
    }
    EdgeStatus::Empty
}
