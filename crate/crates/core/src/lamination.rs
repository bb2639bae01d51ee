//! Finite truncations of geodesic laminations, the Hausdorff metric between
//! them, sibling invariance, and finite gaps.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::angle::{sigma, Angle};
use crate::chord::{circle_distance, Chord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaminationError {
    #[error("leaves {0:?} and {1:?} cross")]
    Crossing(Chord, Chord),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GapError {
    #[error("a gap needs at least 3 distinct vertices, got {0}")]
    TooFewVertices(usize),
}

/// A finite set of pairwise unlinked non-degenerate leaves.
///
/// Points of the circle are implicitly leaves of every lamination and are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lamination {
    degree: u32,
    leaves: BTreeSet<Chord>,
    depth: Option<usize>,
    label: String,
}

impl Default for Lamination {
    fn default() -> Self {
        Lamination::new(2)
    }
}

impl Lamination {
    pub fn new(degree: u32) -> Lamination {
        Lamination {
            degree,
            leaves: BTreeSet::new(),
            depth: None,
            label: String::new(),
        }
    }

    /// Collects the leaves, dropping degenerate chords, and rejects crossings.
    pub fn from_leaves<I>(degree: u32, leaves: I) -> Result<Lamination, LaminationError>
    where
        I: IntoIterator<Item = Chord>,
    {
        let leaves: BTreeSet<Chord> = leaves.into_iter().filter(|c| !c.is_degenerate()).collect();
        let sorted: Vec<Chord> = leaves.iter().cloned().collect();
        if let Some((x, y)) = find_crossing(&sorted) {
            return Err(LaminationError::Crossing(x, y));
        }
        Ok(Lamination {
            degree,
            leaves,
            depth: None,
            label: String::new(),
        })
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = Some(depth);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn depth(&self) -> Option<usize> {
        self.depth
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Adds a leaf after checking it against every stored leaf.
    /// Returns whether the leaf was new.
    pub fn insert(&mut self, leaf: Chord) -> Result<bool, LaminationError> {
        if leaf.is_degenerate() {
            return Ok(false);
        }
        if let Some(other) = self.leaves.iter().find(|l| l.linked(&leaf)) {
            return Err(LaminationError::Crossing(other.clone(), leaf));
        }
        Ok(self.leaves.insert(leaf))
    }

    pub fn contains(&self, leaf: &Chord) -> bool {
        leaf.is_degenerate() || self.leaves.contains(leaf)
    }

    pub fn leaves(&self) -> impl Iterator<Item = &Chord> + '_ {
        self.leaves.iter()
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn to_vec(&self) -> Vec<Chord> {
        self.leaves.iter().cloned().collect()
    }
}

/// Some pair of linked chords, or `None` when the family is pairwise unlinked.
///
/// Sweeps the chords in order of first endpoint with a stack of open chords,
/// `O(n log n)` overall.
pub fn find_crossing(chords: &[Chord]) -> Option<(Chord, Chord)> {
    let mut sorted: Vec<&Chord> = chords.iter().filter(|c| !c.is_degenerate()).collect();
    sorted.sort_by(|x, y| x.a().cmp(y.a()).then_with(|| y.b().cmp(x.b())));
    let mut stack: Vec<&Chord> = Vec::new();
    for c in sorted {
        while stack.last().is_some_and(|top| top.b() <= c.a()) {
            stack.pop();
        }
        if let Some(top) = stack.last() {
            if top.b() < c.b() {
                return Some(((*top).clone(), c.clone()));
            }
        }
        stack.push(c);
    }
    None
}

/// Hausdorff distance between the leaf sets, each completed by all points of
/// the circle, under [`Chord::distance`].
pub fn hausdorff_distance(l1: &Lamination, l2: &Lamination) -> BigRational {
    let r1 = rational_leaves(l1);
    let r2 = rational_leaves(l2);
    one_sided(&r1, &r2).max(one_sided(&r2, &r1))
}

type RationalLeaf = (BigRational, BigRational);

fn rational_leaves(l: &Lamination) -> Vec<RationalLeaf> {
    l.leaves()
        .map(|c| (c.a().to_rational(), c.b().to_rational()))
        .collect()
}

fn leaf_distance(x: &RationalLeaf, y: &RationalLeaf) -> BigRational {
    let straight = circle_distance(&x.0, &y.0).max(circle_distance(&x.1, &y.1));
    let crossed = circle_distance(&x.0, &y.1).max(circle_distance(&x.1, &y.0));
    straight.min(crossed)
}

fn one_sided(from: &[RationalLeaf], to: &[RationalLeaf]) -> BigRational {
    let mut worst = BigRational::zero();
    for x in from {
        // The nearest point of the circle is the midpoint of the shorter arc.
        let mut best = circle_distance(&x.0, &x.1) / BigRational::from_integer(2.into());
        for y in to {
            if best <= worst {
                break;
            }
            let d = leaf_distance(x, y);
            if d < best {
                best = d;
            }
        }
        if best > worst {
            worst = best;
        }
    }
    worst
}

/// Which of the three sibling-invariance conditions a leaf fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SiblingCondition {
    /// The image is neither a point nor a stored leaf.
    Image = 1,
    /// No leaf over the preimages of the endpoints is stored.
    Preimage = 2,
    /// The sibling leaf with the same image is missing.
    Sibling = 3,
}

impl SiblingCondition {
    pub fn number(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub leaf: Chord,
    pub condition: SiblingCondition,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\tcondition ({})", self.leaf, self.condition.number())
    }
}

/// Number of doublings taking `leaf` to a periodic or critical leaf, if at most `limit`.
pub fn leaf_height(leaf: &Chord, limit: usize) -> Option<usize> {
    let mut cur = leaf.clone();
    for j in 0..=limit {
        if cur.is_periodic() || cur.is_diameter() {
            return Some(j);
        }
        cur = cur.double();
    }
    None
}

/// Checks sibling invariance of a truncation.
///
/// Condition (1) is checked for every leaf. Conditions (2) and (3) concern
/// leaves that the truncation should already have pulled back: those within
/// `depth_budget` doublings of a periodic or critical leaf.
pub fn check_sibling_invariant(l: &Lamination, depth_budget: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    for leaf in l.leaves() {
        let image = leaf.double();
        if !l.contains(&image) {
            out.push(Violation {
                leaf: leaf.clone(),
                condition: SiblingCondition::Image,
            });
        }
        if leaf_height(leaf, depth_budget).is_none() {
            continue;
        }
        let [a0, a1] = leaf.a().halves();
        let [b0, b1] = leaf.b().halves();
        let has_preimage = [(&a0, &b0), (&a0, &b1), (&a1, &b0), (&a1, &b1)]
            .into_iter()
            .any(|(x, y)| l.contains(&Chord::new(x.clone(), y.clone())));
        if !has_preimage {
            out.push(Violation {
                leaf: leaf.clone(),
                condition: SiblingCondition::Preimage,
            });
        }
        if !image.is_degenerate() && !l.contains(&leaf.antipode()) {
            out.push(Violation {
                leaf: leaf.clone(),
                condition: SiblingCondition::Sibling,
            });
        }
    }
    out.sort();
    out
}

/// A polygon with at least three vertices in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteGap {
    vertices: Vec<Angle>,
}

impl FiniteGap {
    pub fn new<I: IntoIterator<Item = Angle>>(vertices: I) -> Result<FiniteGap, GapError> {
        let vertices: Vec<Angle> = vertices
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if vertices.len() < 3 {
            return Err(GapError::TooFewVertices(vertices.len()));
        }
        Ok(FiniteGap { vertices })
    }

    pub fn vertices(&self) -> &[Angle] {
        &self.vertices
    }

    pub fn edges(&self) -> Vec<Chord> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| Chord::new(self.vertices[i].clone(), self.vertices[(i + 1) % n].clone()))
            .collect()
    }
}

impl fmt::Display for FiniteGap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The faces of the disk cut along the leaves, by their vertex sets among
/// leaf endpoints. Faces with fewer than three such vertices are omitted.
pub fn extract_gaps(l: &Lamination) -> Vec<FiniteGap> {
    let mut sorted: Vec<&Chord> = l.leaves().collect();
    sorted.sort_by(|x, y| x.a().cmp(y.a()).then_with(|| y.b().cmp(x.b())));
    // faces[0] is the outer face; faces[i + 1] lies just inside sorted[i].
    let mut faces: Vec<BTreeSet<Angle>> = vec![BTreeSet::new(); sorted.len() + 1];
    let mut stack: Vec<usize> = Vec::new();
    for (i, c) in sorted.iter().enumerate() {
        while stack.last().is_some_and(|&t| sorted[t].b() <= c.a()) {
            stack.pop();
        }
        let parent = stack.last().map_or(0, |&t| t + 1);
        faces[parent].insert(c.a().clone());
        faces[parent].insert(c.b().clone());
        faces[i + 1].insert(c.a().clone());
        faces[i + 1].insert(c.b().clone());
        stack.push(i);
    }
    let mut gaps: Vec<FiniteGap> = faces
        .into_iter()
        .filter(|f| f.len() >= 3)
        .map(|f| FiniteGap {
            vertices: f.into_iter().collect(),
        })
        .collect();
    gaps.sort();
    gaps
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GapTag {
    FiniteRotational,
    FiniteNonRotational,
    Fatou(u32),
    SiegelSymbolic,
    CaterpillarSymbolic,
}

impl fmt::Display for GapTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapTag::FiniteRotational => f.write_str("finite-rotational"),
            GapTag::FiniteNonRotational => f.write_str("finite-non-rotational"),
            GapTag::Fatou(k) => write!(f, "fatou-degree-{k}"),
            GapTag::SiegelSymbolic => f.write_str("siegel-symbolic"),
            GapTag::CaterpillarSymbolic => f.write_str("caterpillar-symbolic"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GapClass {
    pub tag: GapTag,
    pub degree: u32,
    pub period: Option<usize>,
}

/// Classifies a finite gap under `sigma_d`.
///
/// `degree` is the number of vertices over each vertex of the image.
/// Periodic gaps are rotational when the first return map shifts every
/// vertex by the same number of places.
pub fn classify_finite_gap(g: &FiniteGap, d: u32) -> GapClass {
    let image_set = |vs: &[Angle]| -> Vec<Angle> {
        vs.iter()
            .map(|v| sigma(d, v))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    };
    let first = image_set(&g.vertices);
    let degree = (g.vertices.len() / first.len()) as u32;

    let mut seen: HashMap<Vec<Angle>, usize> = HashMap::new();
    seen.insert(g.vertices.clone(), 0);
    let mut cur = first;
    let mut step = 1;
    let period = loop {
        if cur == g.vertices {
            break Some(step);
        }
        if seen.contains_key(&cur) {
            break None;
        }
        seen.insert(cur.clone(), step);
        cur = image_set(&cur);
        step += 1;
    };
    let Some(period) = period else {
        return GapClass {
            tag: GapTag::FiniteNonRotational,
            degree,
            period: None,
        };
    };

    let n = g.vertices.len();
    let index: HashMap<&Angle, usize> =
        g.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let shift_of = |i: usize| -> Option<usize> {
        let mut v = g.vertices[i].clone();
        for _ in 0..period {
            v = sigma(d, &v);
        }
        index.get(&v).map(|&j| (j + n - i) % n)
    };
    let r0 = shift_of(0);
    let rotational = r0.is_some() && (1..n).all(|i| shift_of(i) == r0);
    GapClass {
        tag: if rotational {
            GapTag::FiniteRotational
        } else {
            GapTag::FiniteNonRotational
        },
        degree,
        period: Some(period),
    }
}

/// Finite description of an infinite periodic gap: the period, the degree of
/// the first return map on the boundary, and whether the basis is countable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolicGap {
    pub period: usize,
    pub degree: u32,
    pub countable: bool,
}

pub fn classify_symbolic_gap(g: &SymbolicGap) -> GapClass {
    let tag = match (g.degree, g.countable) {
        (k, _) if k >= 2 => GapTag::Fatou(k),
        (_, true) => GapTag::CaterpillarSymbolic,
        (_, false) => GapTag::SiegelSymbolic,
    };
    GapClass {
        tag,
        degree: g.degree,
        period: Some(g.period),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn c(s: &str) -> Chord {
        s.parse().unwrap()
    }

    fn lam(leaves: &[&str]) -> Lamination {
        Lamination::from_leaves(2, leaves.iter().map(|s| c(s))).unwrap()
    }

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    fn angles(s: &[&str]) -> Vec<Angle> {
        s.iter().map(|x| x.parse().unwrap()).collect()
    }

    #[test]
    fn crossing_rejected() {
        let err = Lamination::from_leaves(2, [c("0 1/2"), c("1/4 3/4")]).unwrap_err();
        assert!(matches!(err, LaminationError::Crossing(_, _)));
        let mut l = lam(&["1/7 2/7"]);
        assert!(l.insert(c("2/7 4/7")).unwrap());
        assert!(l.insert(c("3/7 6/7")).is_err());
        assert!(!l.insert(c("1/3")).unwrap());
    }

    #[test]
    fn crossing_sweep_handles_shared_endpoints() {
        let fan = [
            c("0 1/2"),
            c("0 1/4"),
            c("1/4 1/2"),
            c("1/2 3/4"),
            c("0 3/4"),
        ];
        assert_eq!(find_crossing(&fan), None);
        let bad = [c("0 1/2"), c("1/8 1/4"), c("1/5 3/4")];
        assert!(find_crossing(&bad).is_some());
    }

    #[test]
    fn hausdorff_examples() {
        let l = lam(&["1/7 2/7", "3/7 4/7"]);
        assert_eq!(hausdorff_distance(&l, &l), q(0, 1));
        assert_eq!(hausdorff_distance(&lam(&["0 1/2"]), &lam(&[])), q(1, 4));
        assert_eq!(hausdorff_distance(&lam(&["1/7 2/7"]), &l), q(1, 14));
        assert_eq!(hausdorff_distance(&l, &lam(&["1/7 2/7"])), q(1, 14));
    }

    #[test]
    fn sibling_examples() {
        let v = check_sibling_invariant(&lam(&["1/7 2/7"]), 1);
        assert!(v
            .iter()
            .any(|x| x.leaf == c("1/7 2/7") && x.condition == SiblingCondition::Preimage));
        assert!(check_sibling_invariant(&lam(&[]), 5).is_empty());
        let basilica = lam(&["1/3 2/3", "1/6 5/6"]);
        let v = check_sibling_invariant(&basilica, 1);
        // {1/6, 5/6} is one step from periodic; its own preimages are missing.
        assert_eq!(
            v,
            vec![Violation {
                leaf: c("1/6 5/6"),
                condition: SiblingCondition::Preimage
            }]
        );
        assert!(check_sibling_invariant(&basilica, 0).is_empty());
    }

    #[test]
    fn gap_extraction() {
        let tri = lam(&["1/7 2/7", "2/7 4/7", "1/7 4/7"]);
        let gaps = extract_gaps(&tri);
        assert_eq!(
            gaps,
            vec![FiniteGap::new(angles(&["1/7", "2/7", "4/7"])).unwrap()]
        );
        assert!(extract_gaps(&lam(&[])).is_empty());
        // two nested triangles share the face between them
        let l = lam(&["0 1/2", "0 1/4", "1/4 1/2", "1/2 3/4", "3/4 0"]);
        let gaps = extract_gaps(&l);
        assert_eq!(
            gaps,
            vec![
                FiniteGap::new(angles(&["0", "1/4", "1/2"])).unwrap(),
                FiniteGap::new(angles(&["0", "1/2", "3/4"])).unwrap(),
            ]
        );
    }

    #[test]
    fn finite_gap_classes() {
        let tri = FiniteGap::new(angles(&["1/7", "2/7", "4/7"])).unwrap();
        assert_eq!(
            classify_finite_gap(&tri, 2),
            GapClass {
                tag: GapTag::FiniteRotational,
                degree: 1,
                period: Some(1)
            }
        );
        let quad = FiniteGap::new(angles(&["1/5", "2/5", "3/5", "4/5"])).unwrap();
        assert_eq!(
            classify_finite_gap(&quad, 2),
            GapClass {
                tag: GapTag::FiniteNonRotational,
                degree: 1,
                period: Some(1)
            }
        );
        assert_eq!(
            FiniteGap::new(angles(&["1/3", "2/3"])),
            Err(GapError::TooFewVertices(2))
        );
        let critical = FiniteGap::new(angles(&["1/8", "3/8", "5/8", "7/8"])).unwrap();
        let class = classify_finite_gap(&critical, 2);
        assert_eq!((class.degree, class.period), (2, None));
    }

    #[test]
    fn symbolic_gaps() {
        let fatou = classify_symbolic_gap(&SymbolicGap {
            period: 1,
            degree: 2,
            countable: true,
        });
        assert_eq!(fatou.tag, GapTag::Fatou(2));
        let siegel = classify_symbolic_gap(&SymbolicGap {
            period: 3,
            degree: 1,
            countable: false,
        });
        assert_eq!(siegel.tag, GapTag::SiegelSymbolic);
        let cat = classify_symbolic_gap(&SymbolicGap {
            period: 2,
            degree: 1,
            countable: true,
        });
        assert_eq!(cat.tag.to_string(), "caterpillar-symbolic");
    }
}
