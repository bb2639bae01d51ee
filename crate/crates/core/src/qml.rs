//! Thurston's quadratic minor lamination: periodic minors, majors, and the
//! classification of hyperbolic components by their root minors.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::angle::{Angle, BinaryExpansion};
use crate::bits::BitString;
use crate::chord::Chord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QmlError {
    #[error("degenerate minor {0:?}")]
    Degenerate(Chord),
    #[error("angle {0} is not periodic")]
    NotPeriodic(Angle),
    #[error("endpoints {0} and {1} have different periods")]
    UnequalPeriods(Angle, Angle),
    #[error("{0:?} is not a minor")]
    NotAMinor(Chord),
}

/// A chord whose endpoints are periodic of the same exact period.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinorLeaf {
    chord: Chord,
    period: usize,
}

impl MinorLeaf {
    pub fn new(chord: Chord) -> Result<MinorLeaf, QmlError> {
        let pa = chord
            .a()
            .exact_period()
            .ok_or_else(|| QmlError::NotPeriodic(chord.a().clone()))?;
        let pb = chord
            .b()
            .exact_period()
            .ok_or_else(|| QmlError::NotPeriodic(chord.b().clone()))?;
        if pa != pb {
            return Err(QmlError::UnequalPeriods(
                chord.a().clone(),
                chord.b().clone(),
            ));
        }
        Ok(MinorLeaf { chord, period: pa })
    }

    pub fn chord(&self) -> &Chord {
        &self.chord
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn is_degenerate(&self) -> bool {
        self.chord.is_degenerate()
    }

    fn nondegenerate(&self) -> Result<(), QmlError> {
        if self.is_degenerate() {
            Err(QmlError::Degenerate(self.chord.clone()))
        } else {
            Ok(())
        }
    }

    /// The chords `sigma^i(m)` for `i = 0..period`.
    pub fn orbit(&self) -> Vec<Chord> {
        let mut out = Vec::with_capacity(self.period);
        let mut cur = self.chord.clone();
        for _ in 0..self.period {
            let next = cur.double();
            out.push(cur);
            cur = next;
        }
        out
    }
}

impl fmt::Display for MinorLeaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.chord)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentType {
    CardioidEdge,
    Satellite,
    Primitive,
}

impl ComponentType {
    /// Cardioid edges are satellites too.
    pub fn is_satellite(self) -> bool {
        self != ComponentType::Primitive
    }
}

impl fmt::Display for ComponentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComponentType::CardioidEdge => "cardioid-edge",
            ComponentType::Satellite => "satellite",
            ComponentType::Primitive => "primitive",
        })
    }
}

/// The periodic major of a minor. `Flip` marks a major that some iterate maps
/// onto itself with its endpoints exchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeriodicMajor {
    Leaf(Chord),
    Flip(Chord),
}

impl PeriodicMajor {
    pub fn chord(&self) -> &Chord {
        match self {
            PeriodicMajor::Leaf(c) | PeriodicMajor::Flip(c) => c,
        }
    }

    pub fn is_flip(&self) -> bool {
        matches!(self, PeriodicMajor::Flip(_))
    }
}

/// All angles of exact period `n` under doubling, in increasing order.
pub fn periodic_angles(n: usize) -> Vec<Angle> {
    assert!(n >= 1, "period must be positive");
    assert!(n < 64, "period too large to enumerate");
    let mut out = Vec::new();
    for k in 0..(1u64 << n) - 1 {
        let word = BitString::from_bits(k, n);
        if word.primitive_root_len() != n {
            continue;
        }
        let e = BinaryExpansion::new(BitString::new(), word).expect("non-empty period");
        out.push(Angle::from_expansion(&e));
    }
    out
}

/// Number of angles of exact period `n`.
pub fn count_periodic_angles(n: usize) -> u64 {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| mobius(n / d) * ((1i64 << d) - 1))
        .sum::<i64>() as u64
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Lavaurs' construction of the periodic minors of periods `2..=max_period`.
///
/// Within each period the angles are scanned in increasing order, and each
/// unpaired angle is joined to the smallest later unpaired angle of the same
/// period whose chord crosses no chord built so far. The result is sorted by
/// period, then by chord.
pub fn lavaurs_qml(max_period: usize) -> Vec<MinorLeaf> {
    let by_period: Vec<Vec<Angle>> = (2..=max_period).map(periodic_angles).collect();
    let mut all: Vec<(Angle, usize)> = by_period
        .iter()
        .enumerate()
        .flat_map(|(i, v)| v.iter().map(move |a| (a.clone(), i + 2)))
        .collect();
    all.sort();
    let rank: HashMap<Angle, usize> = all
        .iter()
        .enumerate()
        .map(|(i, (a, _))| (a.clone(), i))
        .collect();
    let mut partner: Vec<Option<usize>> = vec![None; all.len()];
    let mut out = Vec::new();

    for (i, angles) in by_period.iter().enumerate() {
        let n = i + 2;
        let mut new = Vec::new();
        for a in angles {
            let r = rank[a];
            if partner[r].is_some() {
                continue;
            }
            // Walk forward keeping count of chords opened after r; a chord
            // whose partner precedes r blocks every later candidate.
            let mut open = 0usize;
            let mut found = None;
            for pos in r + 1..all.len() {
                match partner[pos] {
                    Some(p) if p < r => break,
                    Some(p) if p > pos => open += 1,
                    Some(_) => open -= 1,
                    None if open == 0 && all[pos].1 == n => {
                        found = Some(pos);
                        break;
                    }
                    None => {}
                }
            }
            let s = found.unwrap_or_else(|| panic!("no partner for {a} in period {n}"));
            partner[r] = Some(s);
            partner[s] = Some(r);
            new.push(MinorLeaf {
                chord: Chord::new(all[r].0.clone(), all[s].0.clone()),
                period: n,
            });
        }
        new.sort();
        out.extend(new);
    }
    out
}

/// The two longest preimage chords of a minor. For a point `{t}` this is the
/// critical leaf `{t/2, (t+1)/2}`, returned twice. Sorted.
pub fn majors_of_minor(m: &Chord) -> (Chord, Chord) {
    let [a0, a1] = m.a().halves();
    if m.is_degenerate() {
        let leaf = Chord::new(a0, a1);
        return (leaf.clone(), leaf);
    }
    let [b0, b1] = m.b().halves();
    let half = BigRational::new(1.into(), 2.into());
    let (x, y) = if m.b().to_rational() - m.a().to_rational() < half {
        (Chord::new(b0, a1), Chord::new(a0, b1))
    } else {
        (Chord::new(a0, b0), Chord::new(a1, b1))
    };
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

/// The major whose endpoints are periodic, marked as a flip when an iterate
/// exchanges its endpoints.
pub fn periodic_major(m: &MinorLeaf) -> Result<PeriodicMajor, QmlError> {
    m.nondegenerate()?;
    let (x, y) = majors_of_minor(&m.chord);
    let major = if x.is_periodic() { x } else { y };
    debug_assert!(major.is_periodic());
    let p = m.period;
    if p.is_multiple_of(2) && major.a().double_n(p / 2) == *major.b() {
        Ok(PeriodicMajor::Flip(major))
    } else {
        Ok(PeriodicMajor::Leaf(major))
    }
}

/// Whether the chords `sigma^i(m)`, `0 <= i < period`, are pairwise disjoint.
pub fn is_fixed_return(m: &MinorLeaf) -> Result<bool, QmlError> {
    m.nondegenerate()?;
    let orbit = m.orbit();
    for i in 0..orbit.len() {
        for j in i + 1..orbit.len() {
            if orbit[i] == orbit[j] || orbit[i].intersects(&orbit[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The vertices of the convex hull of the endpoint orbits, in increasing order.
pub fn orbit_hull(m: &MinorLeaf) -> Vec<Angle> {
    let mut set = BTreeSet::new();
    for c in m.orbit() {
        set.insert(c.a().clone());
        set.insert(c.b().clone());
    }
    set.into_iter().collect()
}

/// Whether doubling shifts every vertex of the cyclically ordered set by the
/// same positive number of places.
fn acts_as_rotation(vertices: &[Angle]) -> bool {
    let n = vertices.len();
    let index: HashMap<&Angle, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let shift = |i: usize| index.get(&vertices[i].double()).map(|&j| (j + n - i) % n);
    let r = shift(0);
    matches!(r, Some(s) if s > 0) && (1..n).all(|i| shift(i) == r)
}

pub fn component_type(m: &MinorLeaf) -> Result<ComponentType, QmlError> {
    if is_fixed_return(m)? {
        return Ok(ComponentType::Primitive);
    }
    if acts_as_rotation(&orbit_hull(m)) {
        Ok(ComponentType::CardioidEdge)
    } else {
        Ok(ComponentType::Satellite)
    }
}

/// Whether a chord with periodic endpoints of equal period is a minor of
/// some quadratic invariant lamination: its forward images are pairwise
/// unlinked, none is shorter than the chord, and its majors are disjoint.
pub fn is_valid_minor(c: &Chord) -> Result<bool, QmlError> {
    let m = MinorLeaf::new(c.clone())?;
    m.nondegenerate()?;
    let orbit = m.orbit();
    for i in 0..orbit.len() {
        for j in i + 1..orbit.len() {
            if orbit[i].linked(&orbit[j]) {
                return Ok(false);
            }
        }
    }
    let len = c.length();
    if orbit[1..].iter().any(|x| x.length() < len) {
        return Ok(false);
    }
    let (x, y) = majors_of_minor(c);
    Ok(!x.intersects(&y))
}
