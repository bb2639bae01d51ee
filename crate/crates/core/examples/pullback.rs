//! Pull back critical portraits: the basilica leaf, the airplane quadrilateral
//! and the Chebyshev diameter.

use laminations::lamination::{check_sibling_invariant, extract_gaps};
use laminations::pullback::{pullback_generations, CriticalPortrait};

fn main() {
    let portraits = [
        CriticalPortrait::critical_leaf(&"1/3".parse().unwrap()),
        CriticalPortrait::quad(["3/14", "2/7", "5/7", "11/14"].map(|s| s.parse().unwrap()))
            .unwrap(),
        CriticalPortrait::critical_leaf(&"1/2".parse().unwrap()),
    ];
    for p in &portraits {
        let (l, generations) = pullback_generations(p, 6).unwrap();
        let violations = check_sibling_invariant(&l, 5);
        println!(
            "{p}: {} leaves, new per generation {generations:?}, {} violations, {} finite gaps",
            l.len(),
            violations.len(),
            extract_gaps(&l).len()
        );
        for leaf in l.leaves().take(6) {
            println!("    {leaf}");
        }
    }
}
