//! The cleaned lamination: fixed-return minors survive, the rest collapse to
//! their endpoints. Also prints the limit classes of a few minors.

use laminations::chord::Chord;
use laminations::limit::{build_qml_l, classify_limit, limit_class_of_qlam};
use laminations::pullback::CriticalPortrait;
use laminations::qml::MinorLeaf;

fn main() {
    let q = build_qml_l(8);
    println!(
        "period <= 8: {} kept, {} erased, {} retained endpoints",
        q.kept.len(),
        q.erased.len(),
        q.retained_points.len()
    );

    for s in ["3/7 4/7", "1/7 2/7", "1/3 2/3"] {
        let m = MinorLeaf::new(s.parse::<Chord>().unwrap()).unwrap();
        for class in limit_class_of_qlam(&m).unwrap() {
            let minor = class
                .minor
                .as_ref()
                .map(|c| c.to_string())
                .unwrap_or_default();
            println!("{s:<8} -> {minor:<8} {}", class.report());
        }
    }

    let quad =
        CriticalPortrait::quad(["5/24", "7/24", "17/24", "19/24"].map(|s| s.parse().unwrap()))
            .unwrap();
    let class = classify_limit(&quad, None).unwrap();
    println!("{quad}: {}", class.tag);
}
