//! Thurston's quadratic minor lamination up to period 6, with component types.

use std::collections::BTreeMap;

use laminations::qml::{component_type, is_fixed_return, lavaurs_qml, majors_of_minor};

fn main() {
    let minors = lavaurs_qml(6);
    let mut by_period: BTreeMap<usize, usize> = BTreeMap::new();
    for m in &minors {
        *by_period.entry(m.period()).or_default() += 1;
    }
    println!("minors by period: {by_period:?}");

    for m in minors.iter().filter(|m| m.period() <= 4) {
        let (x, y) = majors_of_minor(m.chord());
        println!(
            "{:<12} period {}  {:<13} fixed-return {:<5}  majors {} | {}",
            m.chord().to_string(),
            m.period(),
            component_type(m).unwrap().to_string(),
            is_fixed_return(m).unwrap(),
            x,
            y
        );
    }
}
