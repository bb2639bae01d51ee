//! Exact angles on the circle `R/Z`, the multiplication maps `t -> d*t mod 1`,
//! orbits, and binary expansions.
//!
//! An [`Angle`] is stored through its canonical binary expansion: a shortest
//! preperiod followed by a primitive period, with dyadic angles written in the
//! terminating form `...1(0)`. Canonical expansions are in bijection with the
//! rationals of `[0, 1)`, numeric order coincides with lexicographic order of
//! the digit sequences, and doubling is a one-digit shift. The reduced fraction
//! `p/q` is derived on demand and cached.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::bits::BitString;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AngleError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("binary expansion needs a non-empty period")]
    EmptyPeriod,
    #[error("cannot parse angle {0:?}")]
    Parse(String),
}

/// An eventually periodic binary digit sequence `0.pre(period)`.
///
/// Values of this type need not be canonical: [`Angle::both_expansions`]
/// hands out the non-terminating co-form `...0(1)` of a dyadic angle.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryExpansion {
    preperiod: BitString,
    period: BitString,
}

impl BinaryExpansion {
    pub fn new(preperiod: BitString, period: BitString) -> Result<Self, AngleError> {
        if period.is_empty() {
            return Err(AngleError::EmptyPeriod);
        }
        Ok(BinaryExpansion { preperiod, period })
    }

    /// Builds from `0`/`1` words, e.g. `("01", "10")` for `0.01(10)`.
    pub fn from_words(preperiod: &str, period: &str) -> Result<Self, AngleError> {
        let parse = |w: &str| {
            w.parse::<BitString>()
                .map_err(|_| AngleError::Parse(format!("{preperiod}({period})")))
        };
        Self::new(parse(preperiod)?, parse(period)?)
    }

    pub fn preperiod(&self) -> &BitString {
        &self.preperiod
    }

    pub fn period(&self) -> &BitString {
        &self.period
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    /// Primitive period, shortest preperiod, dyadics in terminating form.
    pub fn canonical(&self) -> BinaryExpansion {
        let mut period = self.period.clone();
        let root = period.primitive_root_len();
        period.truncate(root);
        let (mut preperiod, mut period) = shorten_preperiod(self.preperiod.clone(), period);
        if period.len() == 1 && period.get(0) {
            // w0(1) == w1(0); (1) alone is 1 == 0 mod 1.
            if preperiod.is_empty() {
                period = BitString::from_bits(0, 1);
            } else {
                let last = preperiod.len() - 1;
                preperiod.set(last, true);
                period = BitString::from_bits(0, 1);
            }
        }
        BinaryExpansion { preperiod, period }
    }

    /// Digit at position `pos` (0-based, first digit after the point).
    pub fn bit(&self, pos: usize) -> bool {
        let l = self.preperiod.len();
        if pos < l {
            self.preperiod.get(pos)
        } else {
            self.period.get((pos - l) % self.period.len())
        }
    }

    /// Digits `pos..pos+n` (`n <= 64`) right-aligned in a word.
    pub fn read(&self, mut pos: usize, n: usize) -> u64 {
        debug_assert!(n <= 64);
        let l = self.preperiod.len();
        let p = self.period.len();
        let mut out = 0u64;
        let mut remaining = n;
        while remaining > 0 {
            let (src, start, avail) = if pos < l {
                (&self.preperiod, pos, l - pos)
            } else {
                let q = (pos - l) % p;
                (&self.period, q, p - q)
            };
            let k = remaining.min(avail);
            let chunk = src.extract(start, k);
            out = if k == 64 { chunk } else { (out << k) | chunk };
            remaining -= k;
            pos += k;
        }
        out
    }

    /// Drops the first `k` digits; the image of the value under doubling `k` times.
    /// Canonical inputs give canonical outputs.
    pub fn shift_left(&self, k: usize) -> BinaryExpansion {
        let l = self.preperiod.len();
        if k <= l {
            BinaryExpansion {
                preperiod: self.preperiod.slice(k, l),
                period: self.period.clone(),
            }
        } else {
            BinaryExpansion {
                preperiod: BitString::new(),
                period: self.period.rotate_left((k - l) % self.period.len()),
            }
        }
    }

    /// Prepends one digit; the preimage `(t + bit)/2`. Canonical in, canonical out.
    pub fn prepend(&self, bit: bool) -> BinaryExpansion {
        let mut preperiod = BitString::with_capacity(self.preperiod.len() + 1);
        preperiod.push(bit);
        preperiod.extend_from(&self.preperiod);
        let (preperiod, period) = shorten_preperiod(preperiod, self.period.clone());
        BinaryExpansion { preperiod, period }
    }

    /// Exact value as a reduced fraction `(p, q)`.
    pub fn to_fraction(&self) -> (BigUint, BigUint) {
        let l = self.preperiod.len();
        let p = self.period.len();
        let repunit = (BigUint::one() << p) - 1u32;
        let num = self.preperiod.to_biguint() * &repunit + self.period.to_biguint();
        let den = (BigUint::one() << l) * repunit;
        let g = num.gcd(&den);
        if num.is_zero() {
            return (BigUint::zero(), BigUint::one());
        }
        let (num, den) = (num / &g, den / &g);
        if num == den {
            (BigUint::zero(), BigUint::one())
        } else {
            (num, den)
        }
    }
}

fn shorten_preperiod(mut preperiod: BitString, period: BitString) -> (BitString, BitString) {
    let l = preperiod.len();
    let p = period.len();
    let mut k = 0;
    while k < l && preperiod.get(l - 1 - k) == period.get(p - 1 - (k % p)) {
        k += 1;
    }
    if k == 0 {
        return (preperiod, period);
    }
    preperiod.truncate(l - k);
    (preperiod, period.rotate_right(k))
}

impl fmt::Display for BinaryExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0.{}({})", self.preperiod, self.period)
    }
}

impl fmt::Debug for BinaryExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for BinaryExpansion {
    type Err = AngleError;

    /// Parses `0.pre(period)`, e.g. `0.01(10)` or `0.(011)`.
    fn from_str(s: &str) -> Result<Self, AngleError> {
        let err = || AngleError::Parse(s.to_string());
        let body = s.trim().strip_prefix("0.").ok_or_else(err)?;
        let (pre, rest) = body.split_once('(').ok_or_else(err)?;
        let per = rest.strip_suffix(')').ok_or_else(err)?;
        Self::from_words(pre, per).map_err(|_| err())
    }
}

/// Lexicographic comparison of two infinite digit sequences.
fn compare_sequences(x: &BinaryExpansion, y: &BinaryExpansion) -> Ordering {
    if x == y {
        return Ordering::Equal;
    }
    // Two eventually periodic sequences agreeing on this many digits are equal.
    let bound = x.preperiod.len().max(y.preperiod.len()) + x.period.len() + y.period.len();
    let mut pos = 0;
    while pos < bound {
        let n = (bound - pos).min(64);
        match x.read(pos, n).cmp(&y.read(pos, n)) {
            Ordering::Equal => pos += n,
            other => return other,
        }
    }
    Ordering::Equal
}

struct Repr {
    expansion: BinaryExpansion,
    fraction: OnceLock<(BigUint, BigUint)>,
}

/// A rational point of the circle `R/Z`, in `[0, 1)`.
#[derive(Clone)]
pub struct Angle(Arc<Repr>);

impl Angle {
    fn from_canonical(expansion: BinaryExpansion) -> Angle {
        debug_assert!(expansion.is_canonical(), "{expansion} not canonical");
        Angle(Arc::new(Repr {
            expansion,
            fraction: OnceLock::new(),
        }))
    }

    pub fn zero() -> Angle {
        Angle::from_canonical(BinaryExpansion {
            preperiod: BitString::new(),
            period: BitString::from_bits(0, 1),
        })
    }

    /// The reduced representative of `(p mod q)/q`.
    pub fn new(p: i64, q: u64) -> Result<Angle, AngleError> {
        Angle::from_ratio(&BigInt::from(p), &BigUint::from(q))
    }

    pub fn from_ratio(p: &BigInt, q: &BigUint) -> Result<Angle, AngleError> {
        if q.is_zero() {
            return Err(AngleError::ZeroDenominator);
        }
        let q_int = BigInt::from_biguint(Sign::Plus, q.clone());
        let p = p
            .mod_floor(&q_int)
            .to_biguint()
            .expect("non-negative after mod_floor");
        let g = p.gcd(q);
        let (p, q) = if p.is_zero() {
            (BigUint::zero(), BigUint::one())
        } else {
            (&p / &g, q / &g)
        };
        let expansion = match (p.to_u64(), q.to_u64()) {
            (Some(ps), Some(qs)) => expand_small(ps, qs),
            _ => expand_big(&p, &q),
        };
        let angle = Angle::from_canonical(expansion);
        let _ = angle.0.fraction.set((p, q));
        Ok(angle)
    }

    /// The angle with the given digits; any expansion, canonical or not.
    pub fn from_expansion(e: &BinaryExpansion) -> Angle {
        Angle::from_canonical(e.canonical())
    }

    pub fn expansion(&self) -> &BinaryExpansion {
        &self.0.expansion
    }

    fn fraction_parts(&self) -> &(BigUint, BigUint) {
        self.0
            .fraction
            .get_or_init(|| self.0.expansion.to_fraction())
    }

    pub fn numerator(&self) -> &BigUint {
        &self.fraction_parts().0
    }

    pub fn denominator(&self) -> &BigUint {
        &self.fraction_parts().1
    }

    pub fn to_rational(&self) -> BigRational {
        let (p, q) = self.fraction_parts();
        BigRational::new_raw(BigInt::from(p.clone()), BigInt::from(q.clone()))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.expansion.preperiod.is_empty() && self.is_dyadic()
    }

    /// Whether the denominator is a power of two (including `0 = 0/1`).
    pub fn is_dyadic(&self) -> bool {
        let per = &self.0.expansion.period;
        per.len() == 1 && !per.get(0)
    }

    /// Terminating form `...1(0)` and co-form `...0(1)` of a dyadic angle.
    /// For `0` these are `0.(0)` and `0.(1)`.
    pub fn both_expansions(&self) -> Option<(BinaryExpansion, BinaryExpansion)> {
        if !self.is_dyadic() {
            return None;
        }
        let terminating = self.0.expansion.clone();
        let mut pre = terminating.preperiod.clone();
        if let Some(last) = pre.len().checked_sub(1) {
            pre.set(last, false);
        }
        let co = BinaryExpansion {
            preperiod: pre,
            period: BitString::from_bits(1, 1),
        };
        Some((terminating, co))
    }

    /// `2t mod 1`.
    pub fn double(&self) -> Angle {
        Angle::from_canonical(self.0.expansion.shift_left(1))
    }

    /// `2^k t mod 1`.
    pub fn double_n(&self, k: usize) -> Angle {
        Angle::from_canonical(self.0.expansion.shift_left(k))
    }

    /// The two preimages `t/2` and `(t+1)/2` under doubling, in increasing order.
    pub fn halves(&self) -> [Angle; 2] {
        [
            Angle::from_canonical(self.0.expansion.prepend(false)),
            Angle::from_canonical(self.0.expansion.prepend(true)),
        ]
    }

    /// `t + 1/2 mod 1`, the other preimage of `2t`.
    pub fn antipode(&self) -> Angle {
        let e = &self.0.expansion;
        let flipped = if e.preperiod.is_empty() {
            let mut pre = BitString::new();
            pre.push(!e.period.get(0));
            BinaryExpansion {
                preperiod: pre,
                period: e.period.rotate_left(1),
            }
        } else {
            let mut pre = e.preperiod.clone();
            pre.set(0, !pre.get(0));
            BinaryExpansion {
                preperiod: pre,
                period: e.period.clone(),
            }
        };
        let (preperiod, period) = shorten_preperiod(flipped.preperiod, flipped.period);
        Angle::from_canonical(BinaryExpansion { preperiod, period })
    }

    /// Exact period under doubling, or `None` when strictly preperiodic.
    pub fn exact_period(&self) -> Option<usize> {
        self.is_periodic().then(|| self.0.expansion.period.len())
    }

    pub fn is_periodic(&self) -> bool {
        self.0.expansion.preperiod.is_empty()
    }

    /// Number of doublings before the orbit becomes periodic.
    pub fn preperiod_len(&self) -> usize {
        self.0.expansion.preperiod.len()
    }
}

fn expand_small(p: u64, q: u64) -> BinaryExpansion {
    let two_adic = q.trailing_zeros() as usize;
    let q = q as u128;
    let mut r = p as u128;
    let step = |r: &mut u128| {
        *r <<= 1;
        let bit = *r >= q;
        if bit {
            *r -= q;
        }
        bit
    };
    let mut preperiod = BitString::with_capacity(two_adic);
    for _ in 0..two_adic {
        preperiod.push(step(&mut r));
    }
    let start = r;
    let mut period = BitString::new();
    loop {
        period.push(step(&mut r));
        if r == start {
            break;
        }
    }
    BinaryExpansion { preperiod, period }
}

fn expand_big(p: &BigUint, q: &BigUint) -> BinaryExpansion {
    let two_adic = q.trailing_zeros().unwrap_or(0) as usize;
    let mut r = p.clone();
    let step = |r: &mut BigUint| {
        *r <<= 1usize;
        let bit = &*r >= q;
        if bit {
            *r -= q;
        }
        bit
    };
    let mut preperiod = BitString::with_capacity(two_adic);
    for _ in 0..two_adic {
        preperiod.push(step(&mut r));
    }
    let start = r.clone();
    let mut period = BitString::new();
    loop {
        period.push(step(&mut r));
        if r == start {
            break;
        }
    }
    BinaryExpansion { preperiod, period }
}

impl PartialEq for Angle {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.expansion == other.0.expansion
    }
}

impl Eq for Angle {}

impl Hash for Angle {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.expansion.hash(state);
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        compare_sequences(&self.0.expansion, &other.0.expansion)
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        write!(f, "{}/{}", self.numerator(), self.denominator())
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Angle {
    type Err = AngleError;

    /// Accepts `p/q` (any integer `p`, positive `q`) or a bare integer.
    fn from_str(s: &str) -> Result<Angle, AngleError> {
        let s = s.trim();
        let err = || AngleError::Parse(s.to_string());
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p, q),
            None => (s, "1"),
        };
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigUint = q.trim().parse().map_err(|_| err())?;
        Angle::from_ratio(&p, &q)
    }
}

/// Preperiod, exact period and the distinct points of the forward orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitInfo {
    pub preperiod_length: usize,
    pub period_length: usize,
    /// `orbit[i + 1] = sigma(orbit[i])`; the entry after the last one is
    /// `orbit[preperiod_length]` again.
    pub orbit: Vec<Angle>,
}

/// `sigma_d(t) = d t mod 1`.
pub fn sigma(d: u32, a: &Angle) -> Angle {
    assert!(d >= 2, "degree must be at least 2");
    if d.is_power_of_two() {
        return a.double_n(d.trailing_zeros() as usize);
    }
    let p = BigInt::from(a.numerator() * d);
    Angle::from_ratio(&p, a.denominator()).expect("denominator is positive")
}

pub fn orbit_info(d: u32, a: &Angle) -> OrbitInfo {
    if d == 2 {
        let pre = a.preperiod_len();
        let per = a.expansion().period().len();
        let orbit = (0..pre + per).map(|k| a.double_n(k)).collect();
        return OrbitInfo {
            preperiod_length: pre,
            period_length: per,
            orbit,
        };
    }
    let mut seen: HashMap<Angle, usize> = HashMap::new();
    let mut orbit = Vec::new();
    let mut cur = a.clone();
    loop {
        if let Some(&first) = seen.get(&cur) {
            return OrbitInfo {
                preperiod_length: first,
                period_length: orbit.len() - first,
                orbit,
            };
        }
        seen.insert(cur.clone(), orbit.len());
        let next = sigma(d, &cur);
        orbit.push(cur);
        cur = next;
    }
}
