//! Tagged open dyadic boxes and their canonical enumeration.
//!
//! A box at level `k` with corner vector `m` is `∏ (m_i/2^k, (m_i+2)/2^k)`.
//! Admissible boxes satisfy `|m_i| ≤ 4^k` and `tag ≤ k`, so every level holds
//! finitely many boxes and the order (level, corners, tag) has type ω. Each
//! tag class `{boxes with tag n}` still contains arbitrarily small boxes
//! around every point.

use std::collections::HashSet;
use std::fmt;

use num::{BigInt, BigUint, Integer, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::point::Point;
use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// Field order is the canonical order: level, then corners (lex), then tag.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaggedBox {
    level: u32,
    corners: Vec<BigInt>,
    tag: u64,
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

fn corner_bound(level: u32) -> BigInt {
    BigInt::one() << (2 * level)
}

impl TaggedBox {
    pub fn new(tag: u64, level: u32, corners: Vec<BigInt>) -> Result<Self> {
        if corners.is_empty() {
            return Err(Error::InvalidBox("a box needs at least one coordinate".into()));
        }
        if tag > level as u64 {
            return Err(Error::InvalidBox(format!("tag {tag} exceeds level {level}")));
        }
        let bound = corner_bound(level);
        if let Some(m) = corners.iter().find(|m| m.magnitude() > bound.magnitude()) {
            return Err(Error::InvalidBox(format!("corner {m} outside ±4^{level}")));
        }
        Ok(TaggedBox { level, corners, tag })
    }

    /// Convenience constructor from small integer corners.
    pub fn from_ints(tag: u64, level: u32, corners: &[i64]) -> Result<Self> {
        Self::new(tag, level, corners.iter().map(|&m| BigInt::from(m)).collect())
    }

    pub fn tag(&self) -> u64 {
        self.tag
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn corners(&self) -> &[BigInt] {
        &self.corners
    }

    pub fn dim(&self) -> usize {
        self.corners.len()
    }

    pub fn lower(&self, i: usize) -> Rational {
        Rational::new(self.corners[i].clone(), pow2(self.level))
    }

    pub fn upper(&self, i: usize) -> Rational {
        Rational::new(&self.corners[i] + 2, pow2(self.level))
    }

    /// Same geometric box, different tag (must still satisfy `tag ≤ level`).
    pub fn with_tag(&self, tag: u64) -> Result<Self> {
        Self::new(tag, self.level, self.corners.clone())
    }

    /// Strict-inequality membership; points of another dimension are never inside.
    pub fn contains(&self, x: &Point) -> bool {
        if x.dim() != self.dim() {
            return false;
        }
        let scale = pow2(self.level);
        self.corners.iter().zip(x.coords()).all(|(m, c)| {
            // m < 2^k·p/q < m+2  ⇔  m·q < 2^k·p < (m+2)·q   (q > 0)
            let lhs = &scale * c.numer();
            let q = c.denom();
            m * q < lhs && lhs < (m + 2) * q
        })
    }

    /// Inclusion of open boxes (geometric, tags ignored).
    pub fn is_subbox_of(&self, other: &TaggedBox) -> bool {
        self.dim() == other.dim()
            && (0..self.dim()).all(|i| other.lower(i) <= self.lower(i) && self.upper(i) <= other.upper(i))
    }

    pub fn is_disjoint(&self, other: &TaggedBox) -> bool {
        (0..self.dim()).any(|i| self.upper(i) <= other.lower(i) || other.upper(i) <= self.lower(i))
    }

    pub fn same_region(&self, other: &TaggedBox) -> bool {
        self.level == other.level && self.corners == other.corners
    }

    fn level_width(level: u32) -> BigUint {
        (BigUint::one() << (2 * level + 1)) + 1u32
    }

    fn level_count(dim: usize, level: u32) -> BigUint {
        num::pow(Self::level_width(level), dim) * BigUint::from(level + 1)
    }

    /// Position in the canonical enumeration of `dim`-dimensional boxes.
    pub fn index(&self) -> BigUint {
        let dim = self.dim();
        let mut offset = BigUint::zero();
        for j in 0..self.level {
            offset += Self::level_count(dim, j);
        }
        let width = BigInt::from(Self::level_width(self.level));
        let shift = corner_bound(self.level);
        let mut rank = BigInt::zero();
        for m in &self.corners {
            rank = rank * &width + (m + &shift);
        }
        let rank = rank.to_biguint().expect("corner rank is nonnegative");
        offset + rank * BigUint::from(self.level + 1) + BigUint::from(self.tag)
    }

    /// Inverse of [`TaggedBox::index`].
    pub fn from_index(dim: usize, index: &BigUint) -> Self {
        assert!(dim > 0, "boxes need a positive dimension");
        let mut rest = index.clone();
        let mut level = 0u32;
        loop {
            let count = Self::level_count(dim, level);
            if rest < count {
                break;
            }
            rest -= count;
            level += 1;
        }
        let (rank, tag) = rest.div_rem(&BigUint::from(level + 1));
        let width = Self::level_width(level);
        let shift = corner_bound(level);
        let mut digits = Vec::with_capacity(dim);
        let mut rank = rank;
        for _ in 0..dim {
            let (q, r) = rank.div_rem(&width);
            digits.push(BigInt::from(r) - &shift);
            rank = q;
        }
        digits.reverse();
        TaggedBox {
            level,
            corners: digits,
            tag: tag.to_u64().expect("tag fits in u64"),
        }
    }
}

impl fmt::Debug for TaggedBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.tag)?;
        for i in 0..self.dim() {
            if i > 0 {
                write!(f, "×")?;
            }
            write!(
                f,
                "({},{})",
                format_rational(&self.lower(i)),
                format_rational(&self.upper(i))
            )?;
        }
        Ok(())
    }
}

impl fmt::Display for TaggedBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct BoxRepr {
    tag: u64,
    level: u32,
    corners: Vec<String>,
}

impl Serialize for TaggedBox {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BoxRepr {
            tag: self.tag,
            level: self.level,
            corners: self.corners.iter().map(|m| m.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TaggedBox {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = BoxRepr::deserialize(d)?;
        let corners = repr
            .corners
            .iter()
            .map(|m| {
                m.parse::<BigInt>()
                    .map_err(|_| serde::de::Error::custom(format!("bad corner \"{m}\"")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        TaggedBox::new(repr.tag, repr.level, corners).map_err(serde::de::Error::custom)
    }
}

/// Levels scanned before a search gives up. Unreachable for valid queries:
/// forbidden sets are finite and boxes shrink geometrically.
const MAX_LEVEL: u32 = 2048;

/// Search for the canonically first box around a point subject to constraints.
#[derive(Debug, Clone)]
pub struct BoxSearch<'a> {
    point: &'a Point,
    avoid: Vec<&'a Point>,
    within: Option<&'a TaggedBox>,
    tag: Option<u64>,
    min_level: u32,
    exclude: Option<&'a HashSet<TaggedBox>>,
}

impl<'a> BoxSearch<'a> {
    pub fn around(point: &'a Point) -> Self {
        BoxSearch {
            point,
            avoid: Vec::new(),
            within: None,
            tag: None,
            min_level: 0,
            exclude: None,
        }
    }

    /// Points that must lie outside the box.
    pub fn avoiding(mut self, points: impl IntoIterator<Item = &'a Point>) -> Self {
        self.avoid.extend(points);
        self
    }

    pub fn within(mut self, outer: Option<&'a TaggedBox>) -> Self {
        self.within = outer;
        self
    }

    /// Restrict to one tag class; otherwise tag 0 is used (it comes first).
    pub fn with_tag(mut self, tag: Option<u64>) -> Self {
        self.tag = tag;
        self
    }

    /// Skip boxes coarser than `level`.
    pub fn from_level(mut self, level: u32) -> Self {
        self.min_level = level;
        self
    }

    /// Boxes that may not be returned (used to build injections).
    pub fn excluding(mut self, used: &'a HashSet<TaggedBox>) -> Self {
        self.exclude = Some(used);
        self
    }

    pub fn first(&self) -> Result<TaggedBox> {
        let x = self.point;
        if self.avoid.contains(&x) {
            return Err(Error::Precondition(format!("{x} is itself a point to avoid")));
        }
        if let Some(w) = self.within {
            if !w.contains(x) {
                return Err(Error::Precondition(format!("{w} does not contain {x}")));
            }
        }
        let tag = self.tag.unwrap_or(0);
        let start = (tag.min(MAX_LEVEL as u64) as u32).max(self.min_level);
        for level in start..=MAX_LEVEL {
            let choices: Vec<Vec<BigInt>> = x.coords().iter().map(|c| candidate_corners(c, level)).collect();
            for corners in lex_product(&choices) {
                let b = TaggedBox { level, corners, tag };
                if self.accepts(&b) {
                    return Ok(b);
                }
            }
        }
        Err(Error::Precondition(format!(
            "no admissible box around {x} up to level {MAX_LEVEL}"
        )))
    }

    fn accepts(&self, b: &TaggedBox) -> bool {
        self.within.is_none_or(|w| b.is_subbox_of(w))
            && self.avoid.iter().all(|y| !b.contains(y))
            && self.exclude.is_none_or(|used| !used.contains(b))
    }
}

/// Corners m with m < 2^k·c < m+2 and |m| ≤ 4^k, ascending.
fn candidate_corners(c: &Rational, level: u32) -> Vec<BigInt> {
    let scaled = c * Rational::from_integer(pow2(level));
    let fl = scaled.floor().to_integer();
    let ms = if scaled.is_integer() {
        vec![fl - 1]
    } else {
        vec![&fl - 1, fl]
    };
    let bound = corner_bound(level);
    ms.into_iter().filter(|m| m.magnitude() <= bound.magnitude()).collect()
}

fn lex_product(choices: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut out = vec![Vec::new()];
    for options in choices {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for o in options {
                let mut v = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::rat;
    use crate::pt;

    #[test]
    fn containment() {
        let b = TaggedBox::from_ints(0, 2, &[3]).unwrap(); // (3/4, 5/4)
        assert!(b.contains(&pt![1]));
        assert!(!b.contains(&pt![0]));
        assert!(!b.contains(&pt![rat(3, 4)]));
        assert!(!b.contains(&pt![rat(5, 4)]));
    }

    #[test]
    fn invariants_enforced() {
        assert!(TaggedBox::from_ints(1, 0, &[0]).is_err());
        assert!(TaggedBox::from_ints(0, 0, &[2]).is_err());
        assert!(TaggedBox::from_ints(0, 1, &[4]).is_ok());
        assert!(TaggedBox::from_ints(0, 1, &[5]).is_err());
    }

    #[test]
    fn first_box_is_level_zero() {
        let b = TaggedBox::from_index(1, &BigUint::zero());
        assert_eq!(b, TaggedBox::from_ints(0, 0, &[-1]).unwrap());
        assert_eq!(
            TaggedBox::from_index(1, &BigUint::from(17u32)).index(),
            BigUint::from(17u32)
        );
    }

    #[test]
    fn search_respects_constraints() {
        let x = pt![1];
        let avoid = [pt![0], pt![2]];
        let b = BoxSearch::around(&x).avoiding(avoid.iter()).first().unwrap();
        assert_eq!(b, TaggedBox::from_ints(0, 0, &[0]).unwrap()); // (0,2)
        let near = [pt![rat(1, 2)]];
        let b = BoxSearch::around(&x).avoiding(near.iter()).first().unwrap();
        assert_eq!(format!("{b}"), "#0(1/2,3/2)");
        let tagged = BoxSearch::around(&x).with_tag(Some(3)).first().unwrap();
        assert_eq!((tagged.tag(), tagged.level()), (3, 3));
        assert!(tagged.contains(&x));
        let bad = [pt![1]];
        assert!(BoxSearch::around(&x).avoiding(bad.iter()).first().is_err());
    }

    #[test]
    fn search_injective_with_exclusions() {
        let x = pt![0];
        let mut used = HashSet::new();
        let a = BoxSearch::around(&x).first().unwrap();
        used.insert(a.clone());
        let b = BoxSearch::around(&x).excluding(&used).first().unwrap();
        assert_ne!(a, b);
        assert!(a < b);
    }
}
