//! Tuning, untuning, oldest ancestors and the non-renormalizable lamination.

use laminations::qml::MinorLeaf;
use laminations::renorm::{build_qml_nr, maximal_roots, oldest_ancestor, HyperbolicRoot, RootPool};

fn main() {
    let basilica = HyperbolicRoot::from_chord("1/3 2/3".parse().unwrap()).unwrap();
    let rabbit = "1/7 2/7".parse().unwrap();
    let tuned = basilica.tune_chord(&rabbit);
    println!("basilica * rabbit = {tuned}");
    println!(
        "untune 2/5 = {:?}",
        basilica
            .untune(&"2/5".parse().unwrap())
            .map(|t| t.to_string())
    );
    println!(
        "untune 1/7 = {:?}",
        basilica
            .untune(&"1/7".parse().unwrap())
            .map(|t| t.to_string())
    );
    println!(
        "V-edges of the basilica to depth 2: {:?}",
        basilica.v_edges(2)
    );

    let pool = RootPool::up_to(6);
    for s in ["22/63 25/63", "3/7 4/7", "2/5 3/5"] {
        let m = MinorLeaf::new(s.parse().unwrap()).unwrap();
        println!(
            "oldest ancestor of {s}: {}",
            oldest_ancestor(&m, &pool).unwrap()
        );
    }

    let (type1, type2) = maximal_roots(5);
    println!(
        "{} cardioid-edge roots, {} maximal primitive roots up to period 5",
        type1.len(),
        type2.len()
    );
    let nr = build_qml_nr(8, 3);
    println!(
        "period <= 8: {} kept, {} erased, {} gap edges, {} central-gap edges",
        nr.kept.len(),
        nr.erased.len(),
        nr.v_gap_edges.len(),
        nr.ca_nr_edges.len()
    );
}
