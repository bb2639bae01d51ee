//! Exact angles, binary expansions and doubling orbits.

use laminations::angle::{orbit_info, Angle};

fn main() {
    for s in ["1/3", "3/7", "1/6", "5/12", "1/2"] {
        let t: Angle = s.parse().unwrap();
        let info = orbit_info(2, &t);
        let orbit: Vec<String> = info.orbit.iter().map(|a| a.to_string()).collect();
        println!(
            "{t:>5}  {}  preperiod {} period {}  orbit {}",
            t.expansion(),
            info.preperiod_length,
            info.period_length,
            orbit.join(" -> ")
        );
    }

    let half: Angle = "1/2".parse().unwrap();
    let (terminating, co) = half.both_expansions().unwrap();
    println!("1/2 = {terminating} = {co}");

    // denominators grow fast under tuning; nothing here is bounded
    let big = Angle::new(1, (1u64 << 61) - 1).unwrap();
    println!("1/(2^61-1) has period {:?}", big.exact_period());
}
