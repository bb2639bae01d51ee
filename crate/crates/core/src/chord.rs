//! Chords of the unit disk with rational endpoints.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::angle::{sigma, Angle, AngleError};

/// An unordered pair of angles, stored with `a <= b`. Degenerate when `a == b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chord {
    a: Angle,
    b: Angle,
}

impl Chord {
    pub fn new(x: Angle, y: Angle) -> Chord {
        if x <= y {
            Chord { a: x, b: y }
        } else {
            Chord { a: y, b: x }
        }
    }

    /// The degenerate chord at `t`, i.e. a point of the circle.
    pub fn point(t: Angle) -> Chord {
        Chord { a: t.clone(), b: t }
    }

    /// Shorthand for `{p1/q1, p2/q2}`.
    pub fn from_ratios(p1: i64, q1: u64, p2: i64, q2: u64) -> Result<Chord, AngleError> {
        Ok(Chord::new(Angle::new(p1, q1)?, Angle::new(p2, q2)?))
    }

    pub fn a(&self) -> &Angle {
        &self.a
    }

    pub fn b(&self) -> &Angle {
        &self.b
    }

    pub fn endpoints(&self) -> [&Angle; 2] {
        [&self.a, &self.b]
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn has_endpoint(&self, t: &Angle) -> bool {
        self.a == *t || self.b == *t
    }

    /// Whether `t` lies in the open arc `(a, b)`.
    pub fn separates(&self, t: &Angle) -> bool {
        self.a < *t && *t < self.b
    }

    /// Crossing inside the open disk. Shared endpoints and degenerate chords never link.
    pub fn linked(&self, other: &Chord) -> bool {
        if self.is_degenerate() || other.is_degenerate() {
            return false;
        }
        (self.a < other.a && other.a < self.b && self.b < other.b)
            || (other.a < self.a && self.a < other.b && other.b < self.b)
    }

    /// Whether the two chords meet as closed subsets of the closed disk.
    pub fn intersects(&self, other: &Chord) -> bool {
        self.has_endpoint(&other.a) || self.has_endpoint(&other.b) || self.linked(other)
    }

    /// Arc-length distance between the endpoints, `min(|a-b|, 1-|a-b|)`.
    pub fn length(&self) -> BigRational {
        circle_distance(&self.a.to_rational(), &self.b.to_rational())
    }

    pub fn is_diameter(&self) -> bool {
        self.b == self.a.antipode()
    }

    /// `a + b = 0 mod 1`: symmetric under complex conjugation.
    pub fn is_vertical(&self) -> bool {
        let s = self.a.to_rational() + self.b.to_rational();
        s.is_integer()
    }

    /// The chord with both endpoints mapped by `sigma_d`.
    pub fn image(&self, d: u32) -> Chord {
        Chord::new(sigma(d, &self.a), sigma(d, &self.b))
    }

    /// The image under doubling.
    pub fn double(&self) -> Chord {
        Chord::new(self.a.double(), self.b.double())
    }

    pub fn double_n(&self, k: usize) -> Chord {
        Chord::new(self.a.double_n(k), self.b.double_n(k))
    }

    /// The chord rotated by a half turn; the other preimage of `self.double()`.
    pub fn antipode(&self) -> Chord {
        Chord::new(self.a.antipode(), self.b.antipode())
    }

    /// Whether both endpoints are periodic under doubling.
    pub fn is_periodic(&self) -> bool {
        self.a.is_periodic() && self.b.is_periodic()
    }

    /// Distance in the space of chords: the better of the two endpoint matchings,
    /// each scored by its worse endpoint displacement.
    pub fn distance(&self, other: &Chord) -> BigRational {
        let (a, b) = (self.a.to_rational(), self.b.to_rational());
        let (c, d) = (other.a.to_rational(), other.b.to_rational());
        let straight = circle_distance(&a, &c).max(circle_distance(&b, &d));
        let crossed = circle_distance(&a, &d).max(circle_distance(&b, &c));
        straight.min(crossed)
    }
}

/// `min(|x-y|, 1-|x-y|)` for `x, y` in `[0, 1)`.
pub fn circle_distance(x: &BigRational, y: &BigRational) -> BigRational {
    let delta = (x - y).abs();
    let other = BigRational::one() - &delta;
    delta.min(other)
}

pub fn linked(c1: &Chord, c2: &Chord) -> bool {
    c1.linked(c2)
}

pub fn chord_length(c: &Chord) -> BigRational {
    c.length()
}

pub fn image_chord(d: u32, c: &Chord) -> Chord {
    c.image(d)
}

pub fn is_vertical(c: &Chord) -> bool {
    c.is_vertical()
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_degenerate() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} {}", self.a, self.b)
        }
    }
}

impl fmt::Debug for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.a, self.b)
    }
}

impl FromStr for Chord {
    type Err = AngleError;

    /// `p1/q1 p2/q2`, or a single angle for a degenerate chord.
    fn from_str(s: &str) -> Result<Chord, AngleError> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        match parts.as_slice() {
            [x] => Ok(Chord::point(x.parse()?)),
            [x, y] => Ok(Chord::new(x.parse()?, y.parse()?)),
            _ => Err(AngleError::Parse(s.to_string())),
        }
    }
}
