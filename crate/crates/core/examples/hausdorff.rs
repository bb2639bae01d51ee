//! Hausdorff distances between truncations of the minor lamination.

use laminations::lamination::{hausdorff_distance, Lamination};
use laminations::qml::lavaurs_qml;

fn truncation(p: usize) -> Lamination {
    Lamination::from_leaves(2, lavaurs_qml(p).into_iter().map(|m| m.chord().clone())).unwrap()
}

fn main() {
    let full = truncation(10);
    for p in 2..=9 {
        let d = hausdorff_distance(&truncation(p), &full);
        println!("d(QML<={p}, QML<=10) = {d}");
    }
}
