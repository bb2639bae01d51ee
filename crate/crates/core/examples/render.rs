//! Draws the minor lamination split into kept and erased leaves.
//!
//! `cargo run --example render -- out.svg`

use std::collections::BTreeMap;

use laminations::chord::Chord;
use laminations::limit::build_qml_l;
use laminations::render::{render_svg, RenderStyle};

fn main() {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "qml.svg".to_string());
    let q = build_qml_l(9);
    let kept: Vec<Chord> = q.kept.iter().map(|m| m.chord().clone()).collect();
    let erased: Vec<Chord> = q.erased.iter().map(|m| m.chord().clone()).collect();
    let style = RenderStyle {
        color_map: BTreeMap::from([
            ("kept".to_string(), "#1f3a93".to_string()),
            ("erased".to_string(), "#d0d0d0".to_string()),
        ]),
        ..RenderStyle::default()
    };
    let svg = render_svg(&[("erased", &erased), ("kept", &kept)], &style);
    std::fs::write(&out, svg).unwrap();
    println!(
        "wrote {out}: {} kept and {} erased leaves",
        kept.len(),
        erased.len()
    );
}
