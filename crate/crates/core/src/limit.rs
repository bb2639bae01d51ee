//! Cleaning of the minor lamination, limit laminations of q-laminations, and
//! minor equivalence.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::angle::Angle;
use crate::chord::Chord;
use crate::pullback::{build_pullback, CriticalPortrait, PullbackError};
use crate::qml::{
    is_fixed_return, is_valid_minor, lavaurs_qml, periodic_major, MinorLeaf, QmlError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error(transparent)]
    Pullback(#[from] PullbackError),
    #[error(transparent)]
    Qml(#[from] QmlError),
    #[error("{0:?} is not a minor")]
    NotAMinor(Chord),
    #[error(
        "periodic image {0:?} is not fixed-return; no limit lamination has this quadrilateral"
    )]
    NotInClosure(Chord),
    #[error("image {0:?} has one periodic and one preperiodic endpoint")]
    MixedImage(Chord),
    #[error("context minor {0} does not contain the critical value {1}")]
    ContextMismatch(Chord, Angle),
    #[error("unsupported portrait: {0}")]
    Unsupported(String),
    #[error("gap bases overlap at {0}")]
    OverlappingBases(Angle),
}

/// Cleaned minor lamination: fixed-return minors are kept, the others are
/// erased and only their endpoints retained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QmlL {
    pub kept: Vec<MinorLeaf>,
    pub erased: Vec<MinorLeaf>,
    pub retained_points: Vec<Angle>,
}

pub fn build_qml_l(max_period: usize) -> QmlL {
    let mut kept = Vec::new();
    let mut erased = Vec::new();
    for m in lavaurs_qml(max_period) {
        if is_fixed_return(&m).expect("lavaurs minors are nondegenerate") {
            kept.push(m);
        } else {
            erased.push(m);
        }
    }
    let retained: BTreeSet<Angle> = erased
        .iter()
        .flat_map(|m| [m.chord().a().clone(), m.chord().b().clone()])
        .collect();
    QmlL {
        kept,
        erased,
        retained_points: retained.into_iter().collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LimitTag {
    /// Generalized critical quadrilateral inside a finite critical set.
    FiniteCritical,
    /// Critical leaf with a periodic endpoint.
    CriticalLeafPeriodicEndpoint,
    /// Collapsing quadrilateral over a fixed-return minor.
    FixedReturnQuadrilateral,
    SiegelSymbolic,
    IsolatedDendritic,
    IsolatedHyperbolic,
}

impl fmt::Display for LimitTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitTag::FiniteCritical => "case-1-finite-critical",
            LimitTag::CriticalLeafPeriodicEndpoint => "case-2a-critical-leaf-periodic-endpoint",
            LimitTag::FixedReturnQuadrilateral => "case-2b-fixed-return-quadrilateral",
            LimitTag::SiegelSymbolic => "siegel-symbolic",
            LimitTag::IsolatedDendritic => "isolated-dendritic",
            LimitTag::IsolatedHyperbolic => "isolated-hyperbolic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitClass {
    pub tag: LimitTag,
    pub witnesses: Vec<CriticalPortrait>,
    /// Minor of the class: a leaf or a point. `None` for symbolic classes.
    pub minor: Option<Chord>,
    /// The periodic minor of the q-lamination the class is attached to.
    pub context: Option<MinorLeaf>,
}

impl LimitClass {
    /// A Siegel class; it has no rational witness.
    pub fn siegel() -> LimitClass {
        LimitClass {
            tag: LimitTag::SiegelSymbolic,
            witnesses: vec![],
            minor: None,
            context: None,
        }
    }

    /// `tag TAB witnesses`, witnesses separated by `; `.
    pub fn report(&self) -> String {
        let w: Vec<String> = self.witnesses.iter().map(|p| p.to_string()).collect();
        format!("{}\t{}", self.tag, w.join("; "))
    }
}

/// The isolated class of the hyperbolic lamination with periodic minor `m`.
pub fn hyperbolic_class(m: &MinorLeaf) -> Result<LimitClass, LimitError> {
    if m.is_degenerate() || !is_valid_minor(m.chord())? {
        return Err(LimitError::NotAMinor(m.chord().clone()));
    }
    Ok(LimitClass {
        tag: LimitTag::IsolatedHyperbolic,
        witnesses: vec![],
        minor: Some(m.chord().clone()),
        context: Some(m.clone()),
    })
}

/// The periodic minor with endpoint `t`.
fn minor_through(t: &Angle) -> Result<MinorLeaf, LimitError> {
    let n = t.exact_period().expect("caller passes a periodic angle");
    lavaurs_qml(n)
        .into_iter()
        .find(|m| m.chord().has_endpoint(t))
        .ok_or_else(|| LimitError::Unsupported(format!("{t} lies on no minor")))
}

/// Decides which kind of limit lamination the portrait's pullback lamination is.
pub fn classify_limit(
    portrait: &CriticalPortrait,
    context_minor: Option<&MinorLeaf>,
) -> Result<LimitClass, LimitError> {
    build_pullback(portrait, 0)?;
    let one = |tag, minor: Chord, context| LimitClass {
        tag,
        witnesses: vec![portrait.clone()],
        minor: Some(minor),
        context,
    };
    match portrait {
        CriticalPortrait::Leaf(leaf) => {
            let t = leaf.a().double();
            if !t.is_periodic() {
                return Ok(one(LimitTag::FiniteCritical, Chord::point(t), None));
            }
            let context = match context_minor {
                Some(m) => {
                    if !m.chord().has_endpoint(&t) || !is_valid_minor(m.chord())? {
                        return Err(LimitError::ContextMismatch(m.chord().clone(), t));
                    }
                    m.clone()
                }
                None => minor_through(&t)?,
            };
            Ok(one(
                LimitTag::CriticalLeafPeriodicEndpoint,
                Chord::point(t),
                Some(context),
            ))
        }
        CriticalPortrait::Quad(_) => {
            let m = portrait.image_chords().remove(0);
            match (m.a().is_periodic(), m.b().is_periodic()) {
                (true, true) => {
                    let minor = MinorLeaf::new(m.clone())?;
                    if !is_valid_minor(&m)? {
                        return Err(LimitError::NotAMinor(m));
                    }
                    if !is_fixed_return(&minor)? {
                        return Err(LimitError::NotInClosure(m));
                    }
                    Ok(one(LimitTag::FixedReturnQuadrilateral, m, Some(minor)))
                }
                (false, false) => Ok(one(LimitTag::FiniteCritical, m, None)),
                _ => Err(LimitError::MixedImage(m)),
            }
        }
        CriticalPortrait::Polygon(_) => {
            let values = portrait.critical_values();
            if values.iter().any(|v| v.is_periodic()) {
                return Err(LimitError::Unsupported(format!(
                    "critical polygon {portrait} with periodic image"
                )));
            }
            let minor = portrait.image_chords().remove(0);
            Ok(one(LimitTag::IsolatedDendritic, minor, None))
        }
    }
}

/// The minor-equivalence classes of limit laminations of the q-lamination
/// with minor `m`.
///
/// For fixed-return `m` this is one class: the two critical leaves at the
/// endpoints of the periodic major and the quadrilateral on the major pair.
/// Otherwise each critical leaf forms its own class, with minor the image point.
pub fn limit_class_of_qlam(m: &MinorLeaf) -> Result<Vec<LimitClass>, LimitError> {
    if m.is_degenerate() || !is_valid_minor(m.chord())? {
        return Err(LimitError::NotAMinor(m.chord().clone()));
    }
    let major = periodic_major(m)?;
    let major = major.chord();
    let leaf_at = |x: &Angle| CriticalPortrait::Leaf(Chord::new(x.clone(), x.antipode()));
    if is_fixed_return(m)? {
        let quad = CriticalPortrait::quad([
            major.a().clone(),
            major.b().clone(),
            major.a().antipode(),
            major.b().antipode(),
        ])?;
        return Ok(vec![LimitClass {
            tag: LimitTag::FixedReturnQuadrilateral,
            witnesses: vec![leaf_at(major.a()), leaf_at(major.b()), quad],
            minor: Some(m.chord().clone()),
            context: Some(m.clone()),
        }]);
    }
    Ok([major.a(), major.b()]
        .into_iter()
        .map(|x| LimitClass {
            tag: LimitTag::CriticalLeafPeriodicEndpoint,
            witnesses: vec![leaf_at(x)],
            minor: Some(Chord::point(x.double())),
            context: Some(m.clone()),
        })
        .collect())
}

/// A block of a partition and the hull of its minor sets, as a vertex list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Block<T> {
    pub members: Vec<T>,
    pub hull: Vec<Angle>,
}

/// Blocks sorted by smallest member; members sorted within blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalencePartition<T> {
    pub blocks: Vec<Block<T>>,
}

impl<T> EquivalencePartition<T> {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

fn collect_blocks<T: Ord + Clone>(
    uf: &UnionFind<usize>,
    members: &[T],
    hull_of: impl Fn(usize) -> Vec<Angle>,
) -> EquivalencePartition<T> {
    let mut groups: BTreeMap<usize, (Vec<T>, BTreeSet<Angle>)> = BTreeMap::new();
    for (i, m) in members.iter().enumerate() {
        let entry = groups.entry(uf.find(i)).or_default();
        entry.0.push(m.clone());
        entry.1.extend(hull_of(i));
    }
    let mut blocks: Vec<Block<T>> = groups
        .into_values()
        .map(|(mut ms, hull)| {
            ms.sort();
            Block {
                members: ms,
                hull: hull.into_iter().collect(),
            }
        })
        .collect();
    blocks.sort();
    EquivalencePartition { blocks }
}

/// Closure of "the minor sets intersect" over the given laminations.
pub fn minor_equivalence_classes<S: AsRef<str>>(
    items: &[(S, Chord)],
) -> EquivalencePartition<String> {
    let n = items.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if items[i].1.intersects(&items[j].1) {
                uf.union(i, j);
            }
        }
    }
    let ids: Vec<String> = items.iter().map(|(s, _)| s.as_ref().to_string()).collect();
    collect_blocks(&uf, &ids, |i| {
        let c = &items[i].1;
        vec![c.a().clone(), c.b().clone()]
    })
}

/// Angles identified by the kept minors and by the declared gap bases.
pub fn dendritic_quotient_classes(
    kept: &[MinorLeaf],
    gap_bases: &[Vec<Angle>],
) -> Result<EquivalencePartition<Angle>, LimitError> {
    let mut owner: BTreeMap<Angle, usize> = BTreeMap::new();
    for (g, basis) in gap_bases.iter().enumerate() {
        for a in basis {
            if let Some(&other) = owner.get(a) {
                if other != g {
                    return Err(LimitError::OverlappingBases(a.clone()));
                }
            }
            owner.insert(a.clone(), g);
        }
    }
    let mut universe: BTreeSet<Angle> = owner.keys().cloned().collect();
    for m in kept {
        universe.insert(m.chord().a().clone());
        universe.insert(m.chord().b().clone());
    }
    let angles: Vec<Angle> = universe.into_iter().collect();
    let index: BTreeMap<&Angle, usize> = angles.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut uf = UnionFind::new(angles.len());
    for m in kept {
        uf.union(index[m.chord().a()], index[m.chord().b()]);
    }
    for basis in gap_bases {
        for w in basis.windows(2) {
            uf.union(index[&w[0]], index[&w[1]]);
        }
    }
    Ok(collect_blocks(&uf, &angles, |i| vec![angles[i].clone()]))
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

    fn m(s: &str) -> MinorLeaf {
        MinorLeaf::new(c(s)).unwrap()
    }

    fn quad(s: [&str; 4]) -> CriticalPortrait {
        CriticalPortrait::quad(s.map(a)).unwrap()
    }

    fn chords(v: &[MinorLeaf]) -> Vec<Chord> {
        v.iter().map(|x| x.chord().clone()).collect()
    }

    #[test]
    fn cleaning_small() {
        let l = build_qml_l(3);
        assert_eq!(chords(&l.kept), vec![c("3/7 4/7")]);
        assert_eq!(
            chords(&l.erased),
            vec![c("1/3 2/3"), c("1/7 2/7"), c("5/7 6/7")]
        );
        assert_eq!(
            l.retained_points,
            ["1/7", "2/7", "1/3", "2/3", "5/7", "6/7"].map(a).to_vec()
        );
        let l = build_qml_l(2);
        assert!(l.kept.is_empty());
        assert_eq!(chords(&l.erased), vec![c("1/3 2/3")]);
        let l = build_qml_l(4);
        assert_eq!((l.erased.len(), l.kept.len()), (6, 4));
    }

    #[test]
    fn classify_examples() {
        let leaf = CriticalPortrait::leaf(c("2/7 11/14")).unwrap();
        let class = classify_limit(&leaf, None).unwrap();
        assert_eq!(class.tag, LimitTag::CriticalLeafPeriodicEndpoint);
        assert_eq!(class.context, Some(m("3/7 4/7")));
        assert_eq!(class.minor, Some(c("4/7")));

        let airplane = quad(["3/14", "2/7", "5/7", "11/14"]);
        let class = classify_limit(&airplane, None).unwrap();
        assert_eq!(class.tag, LimitTag::FixedReturnQuadrilateral);

        let dendritic = quad(["5/24", "7/24", "17/24", "19/24"]);
        let class = classify_limit(&dendritic, None).unwrap();
        assert_eq!(class.tag, LimitTag::FiniteCritical);
        assert_eq!(class.minor, Some(c("5/12 7/12")));

        assert!(matches!(
            classify_limit(&quad(["1/12", "1/6", "7/12", "2/3"]), None),
            Err(LimitError::Pullback(PullbackError::InvalidPortrait(_)))
        ));
        let rabbit = quad(["1/14", "1/7", "4/7", "9/14"]);
        assert!(matches!(
            classify_limit(&rabbit, None),
            Err(LimitError::NotInClosure(_))
        ));
        assert!(matches!(
            classify_limit(&leaf, Some(&m("1/7 2/7"))),
            Err(LimitError::ContextMismatch(_, _))
        ));
        let chebyshev = CriticalPortrait::leaf(c("1/4 3/4")).unwrap();
        assert_eq!(
            classify_limit(&chebyshev, None).unwrap().tag,
            LimitTag::FiniteCritical
        );
    }

    #[test]
    fn isolated_classes() {
        let hex = CriticalPortrait::polygon(
            ["9/112", "11/112", "15/112", "65/112", "67/112", "71/112"]
                .map(a)
                .to_vec(),
        )
        .unwrap();
        assert_eq!(
            classify_limit(&hex, None).unwrap().tag,
            LimitTag::IsolatedDendritic
        );
        assert_eq!(
            hyperbolic_class(&m("1/7 2/7")).unwrap().tag,
            LimitTag::IsolatedHyperbolic
        );
        assert_eq!(LimitClass::siegel().minor, None);
    }

    #[test]
    fn qlam_classes() {
        let classes = limit_class_of_qlam(&m("3/7 4/7")).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(
            classes[0].witnesses,
            vec![
                CriticalPortrait::leaf(c("2/7 11/14")).unwrap(),
                CriticalPortrait::leaf(c("3/14 5/7")).unwrap(),
                quad(["3/14", "2/7", "5/7", "11/14"]),
            ]
        );
        assert_eq!(classes[0].minor, Some(c("3/7 4/7")));

        let classes = limit_class_of_qlam(&m("1/7 2/7")).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(
            classes[0].witnesses,
            vec![CriticalPortrait::leaf(c("1/7 9/14")).unwrap()]
        );
        assert_eq!(classes[0].minor, Some(c("2/7")));
        assert_eq!(
            classes[1].witnesses,
            vec![CriticalPortrait::leaf(c("1/14 4/7")).unwrap()]
        );
        assert_eq!(classes[1].minor, Some(c("1/7")));

        let classes = limit_class_of_qlam(&m("1/3 2/3")).unwrap();
        let minors: BTreeSet<Chord> = classes.iter().filter_map(|x| x.minor.clone()).collect();
        assert_eq!(minors, [c("1/3"), c("2/3")].into_iter().collect());

        assert!(limit_class_of_qlam(&m("1/7 6/7")).is_err());
    }

    #[test]
    fn minor_equivalence() {
        let p =
            minor_equivalence_classes(&[("q", c("3/7 4/7")), ("l1", c("4/7")), ("l2", c("3/7"))]);
        assert_eq!(p.len(), 1);
        assert_eq!(p.blocks[0].hull, vec![a("3/7"), a("4/7")]);
        assert_eq!(p.blocks[0].members, vec!["l1", "l2", "q"]);
        let p = minor_equivalence_classes(&[("x", c("1/7")), ("y", c("2/7"))]);
        assert_eq!(p.len(), 2);
        let empty: [(&str, Chord); 0] = [];
        assert!(minor_equivalence_classes(&empty).is_empty());
    }

    #[test]
    fn dendritic_classes() {
        let p = dendritic_quotient_classes(&[m("3/7 4/7")], &[]).unwrap();
        assert_eq!(p.blocks.len(), 1);
        assert_eq!(p.blocks[0].members, vec![a("3/7"), a("4/7")]);
        let p = dendritic_quotient_classes(&[m("3/7 4/7")], &[vec![a("1/7"), a("2/7"), a("4/7")]])
            .unwrap();
        assert_eq!(p.blocks.len(), 1);
        let p = dendritic_quotient_classes(&[], &[vec![a("1/7"), a("2/7"), a("4/7")]]).unwrap();
        assert_eq!(p.blocks[0].members.len(), 3);
        let err =
            dendritic_quotient_classes(&[], &[vec![a("1/7"), a("2/7")], vec![a("2/7"), a("4/7")]]);
        assert_eq!(err, Err(LimitError::OverlappingBases(a("2/7"))));
    }
}
