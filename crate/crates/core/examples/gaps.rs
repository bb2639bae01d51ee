//! Finite gaps: orbit hulls of satellite minors, faces of a truncated
//! pullback, and a symbolic Siegel gap.

use laminations::lamination::{
    classify_finite_gap, classify_symbolic_gap, extract_gaps, FiniteGap, SymbolicGap,
};
use laminations::pullback::{build_pullback, CriticalPortrait};
use laminations::qml::{orbit_hull, MinorLeaf};

fn main() {
    for s in ["1/7 2/7", "1/15 2/15", "2/5 3/5", "9/31 10/31"] {
        let m = MinorLeaf::new(s.parse().unwrap()).unwrap();
        let hull = orbit_hull(&m);
        if hull.len() < 3 {
            continue;
        }
        let g = FiniteGap::new(hull).unwrap();
        let class = classify_finite_gap(&g, 2);
        println!(
            "hull of {s}: {g} is {} of period {:?}",
            class.tag, class.period
        );
    }

    let rabbit = CriticalPortrait::critical_leaf(&"1/7".parse().unwrap());
    let l = build_pullback(&rabbit, 4).unwrap();
    let faces = extract_gaps(&l);
    println!(
        "rabbit pullback to depth 4: {} leaves, {} finite faces",
        l.len(),
        faces.len()
    );
    for g in faces.iter().take(4) {
        let class = classify_finite_gap(g, 2);
        println!("  {g}: {} period {:?}", class.tag, class.period);
    }

    let siegel = SymbolicGap {
        period: 1,
        degree: 1,
        countable: false,
    };
    println!("{siegel:?}: {}", classify_symbolic_gap(&siegel).tag);
}
