//! Tuning and untuning by binary substitution, oldest ancestors, maximal
//! roots, the gaps `V_X`, and the non-renormalizable minor lamination.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use thiserror::Error;

use crate::angle::{Angle, BinaryExpansion};
use crate::bits::BitString;
use crate::chord::Chord;
use crate::qml::{component_type, is_valid_minor, lavaurs_qml, ComponentType, MinorLeaf, QmlError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenormError {
    #[error(transparent)]
    Qml(#[from] QmlError),
    #[error("{0:?} is not a minor")]
    NotAMinor(Chord),
    #[error("root pool covers periods up to {have}, need {needed}")]
    PoolTooSmall { needed: usize, have: usize },
}

/// A nondegenerate periodic minor `{a, b}`, `a < b`, with the period words of
/// its endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HyperbolicRoot {
    minor: MinorLeaf,
    word_a: BitString,
    word_b: BitString,
    ctype: ComponentType,
    /// Substitution images of all 8-digit words, for periods up to 8.
    byte_images: Option<Arc<[u64]>>,
}

impl HyperbolicRoot {
    pub fn new(minor: MinorLeaf) -> Result<HyperbolicRoot, RenormError> {
        if minor.is_degenerate() || !is_valid_minor(minor.chord())? {
            return Err(RenormError::NotAMinor(minor.chord().clone()));
        }
        let ctype = component_type(&minor)?;
        Ok(Self::with_type(minor, ctype))
    }

    fn with_type(minor: MinorLeaf, ctype: ComponentType) -> HyperbolicRoot {
        let word_a = minor.chord().a().expansion().period().clone();
        let word_b = minor.chord().b().expansion().period().clone();
        let n = word_a.len();
        let byte_images = (n <= 8).then(|| {
            let (a, b) = (word_a.extract(0, n), word_b.extract(0, n));
            (0..256u64)
                .map(|byte| {
                    (0..8).fold(0u64, |v, j| {
                        (v << n) | if (byte >> (7 - j)) & 1 == 1 { b } else { a }
                    })
                })
                .collect()
        });
        HyperbolicRoot {
            minor,
            word_a,
            word_b,
            ctype,
            byte_images,
        }
    }

    pub fn from_chord(c: Chord) -> Result<HyperbolicRoot, RenormError> {
        Self::new(MinorLeaf::new(c)?)
    }

    pub fn minor(&self) -> &MinorLeaf {
        &self.minor
    }

    pub fn chord(&self) -> &Chord {
        self.minor.chord()
    }

    pub fn period(&self) -> usize {
        self.minor.period()
    }

    pub fn word_a(&self) -> &BitString {
        &self.word_a
    }

    pub fn word_b(&self) -> &BitString {
        &self.word_b
    }

    pub fn ctype(&self) -> ComponentType {
        self.ctype
    }

    /// Substitutes `0 -> A`, `1 -> B` in the given digits.
    pub fn tune_expansion(&self, e: &BinaryExpansion) -> Angle {
        let n = self.period();
        let substitute = |w: &BitString| {
            let mut out = BitString::with_capacity(w.len() * n);
            match &self.byte_images {
                Some(images) => {
                    let mut i = 0;
                    while i < w.len() {
                        let k = (w.len() - i).min(8);
                        let byte = (w.extract(i, k) << (8 - k)) as usize;
                        out.push_bits(images[byte] >> ((8 - k) * n), k * n);
                        i += k;
                    }
                }
                None => {
                    for bit in w.iter() {
                        out.extend_from(if bit { &self.word_b } else { &self.word_a });
                    }
                }
            }
            out
        };
        let tuned = BinaryExpansion::new(substitute(e.preperiod()), substitute(e.period()))
            .expect("non-empty period");
        Angle::from_expansion(&tuned)
    }

    /// Tuning of `t` through its canonical expansion (terminating for dyadics).
    pub fn tune(&self, t: &Angle) -> Angle {
        self.tune_expansion(t.expansion())
    }

    pub fn tune_chord(&self, c: &Chord) -> Chord {
        Chord::new(self.tune(c.a()), self.tune(c.b()))
    }

    /// The angle whose tuning is `s`, if `s` is in the tuning image.
    pub fn untune(&self, s: &Angle) -> Option<Angle> {
        if let Some(t) = self.parse_blocks(s.expansion()) {
            return Some(t);
        }
        let (_, co) = s.both_expansions()?;
        self.parse_blocks(&co)
    }

    /// Reads `e` as a stream of `A`/`B` blocks aligned at the first digit.
    fn parse_blocks(&self, e: &BinaryExpansion) -> Option<Angle> {
        let n = self.period();
        let pre_len = e.preperiod().len().div_ceil(n) * n;
        let per_len = e.period().len().lcm(&n);
        let pre = self.blocks(e, 0, pre_len / n)?;
        let per = self.blocks(e, pre_len, per_len / n)?;
        let parsed = BinaryExpansion::new(pre, per).expect("non-empty period");
        Some(Angle::from_expansion(&parsed))
    }

    /// Parses `count` consecutive blocks starting at digit `start`.
    fn blocks(&self, e: &BinaryExpansion, start: usize, count: usize) -> Option<BitString> {
        let n = self.period();
        let mut out = BitString::with_capacity(count);
        if n > 32 {
            for i in 0..count {
                out.push(self.block(e, start + i * n)?);
            }
            return Some(out);
        }
        let (a, b) = (self.word_a.extract(0, n), self.word_b.extract(0, n));
        let mask = (1u64 << n) - 1;
        let per_read = 64 / n;
        let mut i = 0;
        while i < count {
            let k = (count - i).min(per_read);
            let chunk = e.read(start + i * n, k * n);
            let mut bits = 0u64;
            for j in 0..k {
                let block = (chunk >> ((k - 1 - j) * n)) & mask;
                let bit = if block == a {
                    0
                } else if block == b {
                    1
                } else {
                    return None;
                };
                bits = (bits << 1) | bit;
            }
            out.push_bits(bits, k);
            i += k;
        }
        Some(out)
    }

    fn block(&self, e: &BinaryExpansion, pos: usize) -> Option<bool> {
        if block_matches(e, pos, &self.word_a) {
            Some(false)
        } else if block_matches(e, pos, &self.word_b) {
            Some(true)
        } else {
            None
        }
    }

    /// Whether `c` lies in the gap `V` of this root: both endpoints are in
    /// the tuning image and `c` is not the root minor.
    pub fn in_gap_v(&self, c: &Chord) -> bool {
        if c == self.chord() {
            return false;
        }
        let n = self.period();
        let possible = |t: &Angle| t.is_dyadic() || t.expansion().period().len().is_multiple_of(n);
        possible(c.a())
            && possible(c.b())
            && self.untune(c.a()).is_some()
            && self.untune(c.b()).is_some()
    }

    /// Edges of `V` over the dyadic angles `k/2^j`, `1 <= j <= dyadic_depth`,
    /// joining the tunings of the two expansions, together with the root minor.
    pub fn v_edges(&self, dyadic_depth: usize) -> Vec<Chord> {
        let mut out = BTreeSet::new();
        out.insert(self.chord().clone());
        for j in 1..=dyadic_depth {
            let den = 1u64 << j;
            for k in (1..den).step_by(2) {
                let t = Angle::new(k as i64, den).expect("positive denominator");
                let (term, co) = t.both_expansions().expect("dyadic");
                out.insert(Chord::new(
                    self.tune_expansion(&term),
                    self.tune_expansion(&co),
                ));
            }
        }
        out.into_iter().collect()
    }
}

fn block_matches(e: &BinaryExpansion, pos: usize, word: &BitString) -> bool {
    let mut i = 0;
    while i < word.len() {
        let k = (word.len() - i).min(64);
        if e.read(pos + i, k) != word.extract(i, k) {
            return false;
        }
        i += k;
    }
    true
}

impl fmt::Display for HyperbolicRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.chord())
    }
}

/// All hyperbolic roots of period at most `max_period`, by increasing period.
#[derive(Debug, Clone)]
pub struct RootPool {
    max_period: usize,
    roots: Vec<HyperbolicRoot>,
}

impl RootPool {
    pub fn up_to(max_period: usize) -> RootPool {
        Self::from_minors(max_period, &lavaurs_qml(max_period))
    }

    fn from_minors(max_period: usize, minors: &[MinorLeaf]) -> RootPool {
        let roots = minors
            .iter()
            .map(|m| {
                let ctype = component_type(m).expect("lavaurs minors are nondegenerate");
                HyperbolicRoot::with_type(m.clone(), ctype)
            })
            .collect();
        RootPool { max_period, roots }
    }

    pub fn max_period(&self) -> usize {
        self.max_period
    }

    pub fn roots(&self) -> &[HyperbolicRoot] {
        &self.roots
    }

    pub fn find(&self, c: &Chord) -> Option<&HyperbolicRoot> {
        self.roots.iter().find(|r| r.chord() == c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AncestorResult {
    Trivial,
    Nontrivial(HyperbolicRoot),
}

impl fmt::Display for AncestorResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AncestorResult::Trivial => f.write_str("trivial"),
            AncestorResult::Nontrivial(r) => write!(f, "{r}"),
        }
    }
}

/// The root of smallest period whose gap contains `m` (or whose minor is `m`);
/// trivial when that root is a cardioid edge.
pub fn oldest_ancestor(m: &MinorLeaf, pool: &RootPool) -> Result<AncestorResult, RenormError> {
    if pool.max_period < m.period() {
        return Err(RenormError::PoolTooSmall {
            needed: m.period(),
            have: pool.max_period,
        });
    }
    let container = pool.roots.iter().find(|r| {
        r.period() <= m.period()
            && m.period().is_multiple_of(r.period())
            && (r.chord() == m.chord() || r.in_gap_v(m.chord()))
    });
    let root = match container {
        Some(r) => r.clone(),
        None => HyperbolicRoot::new(m.clone())?,
    };
    Ok(match root.ctype() {
        ComponentType::CardioidEdge => AncestorResult::Trivial,
        _ => AncestorResult::Nontrivial(root),
    })
}

/// Roots based on edges of the main cardioid, and primitive roots contained
/// in no gap of a root of smaller period.
pub fn maximal_roots(max_period: usize) -> (Vec<HyperbolicRoot>, Vec<HyperbolicRoot>) {
    maximal_roots_of(&RootPool::up_to(max_period))
}

fn maximal_roots_of(pool: &RootPool) -> (Vec<HyperbolicRoot>, Vec<HyperbolicRoot>) {
    let mut type1: Vec<HyperbolicRoot> = Vec::new();
    let mut type2: Vec<HyperbolicRoot> = Vec::new();
    for r in &pool.roots {
        match r.ctype() {
            ComponentType::CardioidEdge => type1.push(r.clone()),
            ComponentType::Primitive => {
                if containing_root(r.minor(), &type1, &type2).is_none() {
                    type2.push(r.clone());
                }
            }
            ComponentType::Satellite => {}
        }
    }
    (type1, type2)
}

fn containing_root<'a>(
    m: &MinorLeaf,
    type1: &'a [HyperbolicRoot],
    type2: &'a [HyperbolicRoot],
) -> Option<&'a HyperbolicRoot> {
    type1.iter().chain(type2.iter()).find(|x| {
        x.period() < m.period() && m.period().is_multiple_of(x.period()) && x.in_gap_v(m.chord())
    })
}

/// The truncation of the non-renormalizable minor lamination and the gaps
/// it retains.
#[derive(Debug, Clone)]
pub struct QmlNr {
    pub kept: Vec<MinorLeaf>,
    pub erased: Vec<MinorLeaf>,
    /// Edges of the gaps of maximal primitive roots.
    pub v_gap_edges: Vec<Chord>,
    /// Edges of the central gap contributed by cardioid-edge roots.
    pub ca_nr_edges: Vec<Chord>,
}

/// Erases every minor inside the gap of a maximal root, and the cardioid-edge
/// root minors themselves.
pub fn build_qml_nr(max_period: usize, dyadic_depth: usize) -> QmlNr {
    let pool = RootPool::up_to(max_period);
    let (type1, type2) = maximal_roots_of(&pool);
    let mut kept = Vec::new();
    let mut erased = Vec::new();
    for r in &pool.roots {
        let m = r.minor();
        let is_cardioid_root = r.ctype() == ComponentType::CardioidEdge;
        if is_cardioid_root || containing_root(m, &type1, &type2).is_some() {
            erased.push(m.clone());
        } else {
            kept.push(m.clone());
        }
    }
    let mut v_gap_edges = BTreeSet::new();
    for r in &type2 {
        v_gap_edges.extend(r.v_edges(dyadic_depth));
    }
    let mut ca_nr_edges = BTreeSet::new();
    for r in &type1 {
        ca_nr_edges.extend(
            r.v_edges(dyadic_depth)
                .into_iter()
                .filter(|e| e != r.chord()),
        );
    }
    QmlNr {
        kept,
        erased,
        v_gap_edges: v_gap_edges.into_iter().collect(),
        ca_nr_edges: ca_nr_edges.into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Chord {
        s.parse().unwrap()
    }

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    fn root(s: &str) -> HyperbolicRoot {
        HyperbolicRoot::from_chord(c(s)).unwrap()
    }

    fn minor(s: &str) -> MinorLeaf {
        MinorLeaf::new(c(s)).unwrap()
    }

    #[test]
    fn words() {
        let b = root("1/3 2/3");
        assert_eq!(b.word_a().to_string(), "01");
        assert_eq!(b.word_b().to_string(), "10");
        let p = root("3/7 4/7");
        assert_eq!(
            (p.word_a().to_string(), p.word_b().to_string()),
            ("011".into(), "100".into())
        );
        assert!(HyperbolicRoot::from_chord(c("1/7 6/7")).is_err());
    }

    #[test]
    fn tuning_examples() {
        let b = root("1/3 2/3");
        assert_eq!(b.tune(&a("1/3")), a("2/5"));
        assert_eq!(b.tune(&a("1/7")), a("22/63"));
        assert_eq!(b.tune(&a("0")), a("1/3"));
        assert_eq!(b.tune(&a("1/2")), a("7/12"));
        let p = root("3/7 4/7");
        assert_eq!(p.tune(&a("0")), a("3/7"));
    }

    #[test]
    fn untuning_examples() {
        let b = root("1/3 2/3");
        assert_eq!(b.untune(&a("2/5")), Some(a("1/3")));
        assert_eq!(b.untune(&a("1/7")), None);
        assert_eq!(b.untune(&a("5/12")), Some(a("1/2")));
        assert_eq!(b.untune(&a("2/3")), Some(a("0")));
        let p = root("3/7 4/7");
        assert_eq!(p.untune(&p.tune(&a("1/3"))), Some(a("1/3")));
    }

    #[test]
    fn gap_membership() {
        let b = root("1/3 2/3");
        assert!(b.in_gap_v(&c("22/63 25/63")));
        assert!(!b.in_gap_v(&c("1/3 2/3")));
        assert!(!b.in_gap_v(&c("3/7 4/7")));
    }

    #[test]
    fn edges_of_v() {
        let b = root("1/3 2/3");
        assert_eq!(b.v_edges(0), vec![c("1/3 2/3")]);
        assert_eq!(b.v_edges(1), vec![c("1/3 2/3"), c("5/12 7/12")]);
        let e2 = b.v_edges(2);
        assert!(e2.contains(&c("17/48 19/48")));
        assert!(e2.contains(&c("29/48 31/48")));
        assert_eq!(e2.len(), 4);
    }

    #[test]
    fn ancestors() {
        let pool = RootPool::up_to(6);
        assert_eq!(
            oldest_ancestor(&minor("22/63 25/63"), &pool),
            Ok(AncestorResult::Trivial)
        );
        assert_eq!(
            oldest_ancestor(&minor("3/7 4/7"), &pool),
            Ok(AncestorResult::Nontrivial(root("3/7 4/7")))
        );
        let p = root("3/7 4/7");
        let tuned = minor(&p.tune_chord(&c("1/3 2/3")).to_string());
        assert_eq!(
            oldest_ancestor(&tuned, &pool),
            Ok(AncestorResult::Nontrivial(p))
        );
        assert_eq!(
            oldest_ancestor(&minor("1/7 2/7"), &pool),
            Ok(AncestorResult::Trivial)
        );
        assert!(matches!(
            oldest_ancestor(&minor("22/63 25/63"), &RootPool::up_to(4)),
            Err(RenormError::PoolTooSmall { .. })
        ));
    }

    #[test]
    fn maximal_root_lists() {
        let (t1, t2) = maximal_roots(3);
        let chords = |v: &[HyperbolicRoot]| v.iter().map(|r| r.chord().clone()).collect::<Vec<_>>();
        assert_eq!(chords(&t1), vec![c("1/3 2/3"), c("1/7 2/7"), c("5/7 6/7")]);
        assert_eq!(chords(&t2), vec![c("3/7 4/7")]);
        let (t1, t2) = maximal_roots(2);
        assert_eq!((chords(&t1), t2.len()), (vec![c("1/3 2/3")], 0));
        let (t1, t2) = maximal_roots(6);
        let m = c("22/63 25/63");
        assert!(!chords(&t1).contains(&m) && !chords(&t2).contains(&m));
    }

    #[test]
    fn nr_small() {
        let nr = build_qml_nr(3, 2);
        let chords = |v: &[MinorLeaf]| v.iter().map(|m| m.chord().clone()).collect::<Vec<_>>();
        assert_eq!(
            chords(&nr.erased),
            vec![c("1/3 2/3"), c("1/7 2/7"), c("5/7 6/7")]
        );
        assert_eq!(chords(&nr.kept), vec![c("3/7 4/7")]);
        for e in root("3/7 4/7").v_edges(2) {
            assert!(nr.v_gap_edges.contains(&e));
        }
        assert!(nr.ca_nr_edges.contains(&c("5/12 7/12")));
        assert!(!nr.ca_nr_edges.contains(&c("1/3 2/3")));
        let nr6 = build_qml_nr(6, 0);
        assert!(chords(&nr6.erased).contains(&c("22/63 25/63")));
    }
}
