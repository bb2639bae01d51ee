//! Plain-text leaf files: one chord `p1/q1 p2/q2` or point `p/q` per line,
//! `#` comment lines.

use std::collections::BTreeSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::angle::Angle;
use crate::chord::Chord;
use crate::lamination::{find_crossing, Lamination};
use crate::qml::MinorLeaf;

#[derive(Debug, Error)]
pub enum LeafFileError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: cannot parse {text:?}")]
    Parse { line: usize, text: String },
    #[error("leaves {0} and {1} cross")]
    Crossing(Chord, Chord),
}

/// Contents of a leaf file: non-degenerate leaves and points, each sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LeafSet {
    pub leaves: Vec<Chord>,
    pub points: Vec<Angle>,
}

impl LeafSet {
    pub fn lamination(&self) -> Lamination {
        Lamination::from_leaves(2, self.leaves.iter().cloned())
            .expect("leaf sets are checked for crossings when read")
    }
}

pub fn parse_leaves(text: &str) -> Result<LeafSet, LeafFileError> {
    let mut leaves = BTreeSet::new();
    let mut points = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let chord: Chord = line.parse().map_err(|_| LeafFileError::Parse {
            line: i + 1,
            text: raw.to_string(),
        })?;
        if chord.is_degenerate() {
            points.insert(chord.a().clone());
        } else {
            leaves.insert(chord);
        }
    }
    let leaves: Vec<Chord> = leaves.into_iter().collect();
    if let Some((x, y)) = find_crossing(&leaves) {
        return Err(LeafFileError::Crossing(x, y));
    }
    Ok(LeafSet {
        leaves,
        points: points.into_iter().collect(),
    })
}

pub fn read_leaf_file(path: &Path) -> Result<LeafSet, LeafFileError> {
    let text = fs::read_to_string(path).map_err(|source| LeafFileError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_leaves(&text)
}

pub fn write_leaf_file(path: &Path, contents: &str) -> Result<(), LeafFileError> {
    fs::write(path, contents).map_err(|source| LeafFileError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Sorted lines, one per chord.
pub fn format_leaves<I: IntoIterator<Item = Chord>>(chords: I) -> String {
    let sorted: BTreeSet<Chord> = chords.into_iter().collect();
    let mut out = String::new();
    for c in sorted {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    out
}

/// Sections headed by `# title` comment lines, each sorted.
pub fn format_sections(sections: &[(String, Vec<Chord>)]) -> String {
    let mut out = String::new();
    for (title, chords) in sections {
        out.push_str("# ");
        out.push_str(title);
        out.push('\n');
        out.push_str(&format_leaves(chords.iter().cloned()));
    }
    out
}

/// One `period n` section per period present, in increasing order.
pub fn period_sections(minors: &[MinorLeaf]) -> Vec<(String, Vec<Chord>)> {
    let periods: BTreeSet<usize> = minors.iter().map(|m| m.period()).collect();
    periods
        .into_iter()
        .map(|n| {
            let chords = minors
                .iter()
                .filter(|m| m.period() == n)
                .map(|m| m.chord().clone())
                .collect();
            (format!("period {n}"), chords)
        })
        .collect()
}
