//! Thurston's pullback construction of invariant laminations from a critical
//! portrait.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::angle::Angle;
use crate::chord::Chord;
use crate::lamination::{Lamination, LaminationError};
use crate::renorm::HyperbolicRoot;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PullbackError {
    #[error("{0:?} is not a diameter")]
    NotADiameter(Chord),
    #[error("critical polygon vertices are not {0} antipodal pairs: {1}")]
    NotAntipodal(usize, String),
    #[error("critical polygon needs 2k distinct vertices with k >= {0}, got {1}")]
    WrongVertexCount(usize, usize),
    #[error("cannot pull back the degenerate chord {0:?}")]
    Degenerate(Chord),
    #[error("{0:?} crosses the critical portrait at {1:?}")]
    CrossesPortrait(Chord, Chord),
    #[error("no pullback of {0:?} avoids the critical chords")]
    NoAdmissiblePairing(Chord),
    #[error("invalid portrait: {0}")]
    InvalidPortrait(LaminationError),
    #[error("{0:?} is not an edge of the gap of root {1}")]
    NotOnGap(Chord, String),
}

/// The critical object of a quadratic invariant lamination.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CriticalPortrait {
    /// A diameter `{t/2, (t+1)/2}`.
    Leaf(Chord),
    /// Four vertices in increasing order, `v[2] = v[0] + 1/2` and `v[3] = v[1] + 1/2`.
    Quad([Angle; 4]),
    /// `2k >= 6` vertices in increasing order, `v[i + k] = v[i] + 1/2`.
    Polygon(Vec<Angle>),
}

impl CriticalPortrait {
    /// The critical leaf whose image is the point `t`.
    pub fn critical_leaf(t: &Angle) -> CriticalPortrait {
        let [x, y] = t.halves();
        CriticalPortrait::Leaf(Chord::new(x, y))
    }

    pub fn leaf(c: Chord) -> Result<CriticalPortrait, PullbackError> {
        if !c.is_diameter() {
            return Err(PullbackError::NotADiameter(c));
        }
        Ok(CriticalPortrait::Leaf(c))
    }

    pub fn quad(vertices: [Angle; 4]) -> Result<CriticalPortrait, PullbackError> {
        let v = antipodal_vertices(vertices.to_vec(), 2)?;
        Ok(CriticalPortrait::Quad([
            v[0].clone(),
            v[1].clone(),
            v[2].clone(),
            v[3].clone(),
        ]))
    }

    pub fn polygon(vertices: Vec<Angle>) -> Result<CriticalPortrait, PullbackError> {
        Ok(CriticalPortrait::Polygon(antipodal_vertices(vertices, 3)?))
    }

    pub fn vertices(&self) -> Vec<Angle> {
        match self {
            CriticalPortrait::Leaf(c) => vec![c.a().clone(), c.b().clone()],
            CriticalPortrait::Quad(v) => v.to_vec(),
            CriticalPortrait::Polygon(v) => v.clone(),
        }
    }

    /// The boundary edges; for a critical leaf, the leaf itself.
    pub fn boundary_chords(&self) -> Vec<Chord> {
        match self {
            CriticalPortrait::Leaf(c) => vec![c.clone()],
            _ => {
                let v = self.vertices();
                let n = v.len();
                (0..n)
                    .map(|i| Chord::new(v[i].clone(), v[(i + 1) % n].clone()))
                    .collect()
            }
        }
    }

    /// The diameters joining vertices with equal images.
    pub fn critical_diameters(&self) -> Vec<Chord> {
        let v = self.vertices();
        let k = v.len() / 2;
        (0..k)
            .map(|i| Chord::new(v[i].clone(), v[i + k].clone()))
            .collect()
    }

    /// The images of the vertices, in increasing order.
    pub fn critical_values(&self) -> Vec<Angle> {
        let v = self.vertices();
        let k = v.len() / 2;
        let set: BTreeSet<Angle> = v[..k].iter().map(|x| x.double()).collect();
        set.into_iter().collect()
    }

    /// The non-degenerate leaves bounding the image of the critical set.
    pub fn image_chords(&self) -> Vec<Chord> {
        let w = self.critical_values();
        match w.len() {
            1 => vec![],
            2 => vec![Chord::new(w[0].clone(), w[1].clone())],
            n => (0..n)
                .map(|i| Chord::new(w[i].clone(), w[(i + 1) % n].clone()))
                .collect(),
        }
    }
}

fn antipodal_vertices(vertices: Vec<Angle>, min_k: usize) -> Result<Vec<Angle>, PullbackError> {
    let n = vertices.len();
    let v: Vec<Angle> = vertices
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if v.len() != n || !n.is_multiple_of(2) || n / 2 < min_k {
        return Err(PullbackError::WrongVertexCount(min_k, n));
    }
    let k = n / 2;
    if (0..k).any(|i| v[i + k] != v[i].antipode()) {
        let shown: Vec<String> = v.iter().map(|a| a.to_string()).collect();
        return Err(PullbackError::NotAntipodal(k, shown.join(" ")));
    }
    Ok(v)
}

impl fmt::Display for CriticalPortrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self {
            CriticalPortrait::Leaf(_) => "leaf",
            CriticalPortrait::Quad(_) => "quad",
            CriticalPortrait::Polygon(_) => "polygon",
        };
        let parts: Vec<String> = self.vertices().iter().map(|a| a.to_string()).collect();
        write!(f, "{kind} {}", parts.join(" "))
    }
}

/// The two preimage leaves of `c` compatible with the portrait, sorted.
///
/// Of the two non-crossing ways to join the four preimage endpoints, the one
/// whose chords avoid the critical chords is taken; when both do, the shorter.
pub fn sibling_preimages(
    c: &Chord,
    portrait: &CriticalPortrait,
) -> Result<[Chord; 2], PullbackError> {
    if c.is_degenerate() {
        return Err(PullbackError::Degenerate(c.clone()));
    }
    let boundary = portrait.boundary_chords();
    let diameters = portrait.critical_diameters();
    for k in boundary.iter().chain(portrait.image_chords().iter()) {
        if k.linked(c) {
            return Err(PullbackError::CrossesPortrait(c.clone(), k.clone()));
        }
    }
    let [a0, a1] = c.a().halves();
    let [b0, b1] = c.b().halves();
    let pairings = [
        [
            Chord::new(a0.clone(), b0.clone()),
            Chord::new(a1.clone(), b1.clone()),
        ],
        [Chord::new(a0, b1), Chord::new(a1, b0)],
    ];
    let admissible = |p: &[Chord; 2]| {
        !p[0].linked(&p[1])
            && p.iter().all(|x| {
                boundary
                    .iter()
                    .chain(diameters.iter())
                    .all(|k| !k.linked(x))
            })
    };
    let mut best: Option<[Chord; 2]> = None;
    for p in pairings {
        if !admissible(&p) {
            continue;
        }
        best = match best {
            Some(q) if q[0].length() + q[1].length() <= p[0].length() + p[1].length() => Some(q),
            _ => Some(p),
        };
    }
    let mut pair = best.ok_or_else(|| PullbackError::NoAdmissiblePairing(c.clone()))?;
    pair.sort();
    Ok(pair)
}

/// The forward orbits of the image chords, up to the first repetition.
fn image_orbits(portrait: &CriticalPortrait) -> Vec<Chord> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for m in portrait.image_chords() {
        let mut cur = m;
        while !cur.is_degenerate() && seen.insert(cur.clone()) {
            out.push(cur.clone());
            cur = cur.double();
        }
    }
    out
}

/// The truncation of the pullback lamination of `portrait` after `depth`
/// generations of preimages.
///
/// Generation 0 holds the boundary of the critical set and the forward
/// orbits of its image leaves. Each later generation pulls back the leaves
/// that were new in the previous one.
pub fn build_pullback(
    portrait: &CriticalPortrait,
    depth: usize,
) -> Result<Lamination, PullbackError> {
    Ok(pullback_generations(portrait, depth)?.0)
}

/// As [`build_pullback`], also returning the number of new leaves per generation.
pub fn pullback_generations(
    portrait: &CriticalPortrait,
    depth: usize,
) -> Result<(Lamination, Vec<usize>), PullbackError> {
    let mut leaves: BTreeSet<Chord> = BTreeSet::new();
    let mut frontier: Vec<Chord> = Vec::new();
    for c in portrait
        .boundary_chords()
        .into_iter()
        .chain(image_orbits(portrait))
    {
        if !c.is_degenerate() && leaves.insert(c.clone()) {
            frontier.push(c);
        }
    }
    let mut counts = vec![frontier.len()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for c in &frontier {
            for p in sibling_preimages(c, portrait)? {
                if leaves.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        counts.push(next.len());
        frontier = next;
    }
    let lam = Lamination::from_leaves(2, leaves)
        .map_err(PullbackError::InvalidPortrait)?
        .with_depth(depth)
        .with_label(portrait.to_string());
    Ok((lam, counts))
}

/// The collapsing quadrilateral over an edge `m` of the gap of `root`: the
/// hull of all four preimages of its endpoints.
pub fn quadrilateral_from_leaf(
    m: &Chord,
    root: &HyperbolicRoot,
) -> Result<CriticalPortrait, PullbackError> {
    let not_on_gap = || PullbackError::NotOnGap(m.clone(), root.to_string());
    if m.is_degenerate() {
        return Err(not_on_gap());
    }
    match (root.untune(m.a()), root.untune(m.b())) {
        (Some(x), Some(y)) if x == y && (x.is_dyadic()) => {}
        _ => return Err(not_on_gap()),
    }
    let [a0, a1] = m.a().halves();
    let [b0, b1] = m.b().halves();
    CriticalPortrait::quad([a0, a1, b0, b1])
}
