use std::collections::{BTreeMap, BTreeSet};

use laminations::angle::{orbit_info, sigma, Angle, BinaryExpansion};
use laminations::bits::BitString;
use laminations::chord::Chord;
use laminations::lamination::{
    check_sibling_invariant, classify_finite_gap, hausdorff_distance, FiniteGap, GapTag, Lamination,
};
use laminations::leaf_file::{format_sections, parse_leaves, period_sections};
use laminations::limit::{build_qml_l, limit_class_of_qlam, minor_equivalence_classes, LimitTag};
use laminations::pullback::{build_pullback, pullback_generations, CriticalPortrait};
use laminations::qml::{
    component_type, is_valid_minor, lavaurs_qml, majors_of_minor, orbit_hull, periodic_angles,
    periodic_major, ComponentType, MinorLeaf,
};
use laminations::render::{render_svg, RenderStyle};
use laminations::renorm::{build_qml_nr, maximal_roots, HyperbolicRoot, RootPool};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn c(s: &str) -> Chord {
    s.parse().unwrap()
}

fn ratio(p: u64, q: u64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn frac(t: &Angle) -> BigRational {
    t.to_rational()
}

fn angle_strategy(max_q: u64) -> impl Strategy<Value = Angle> {
    (1..=max_q).prop_flat_map(|q| (0..q).prop_map(move |p| Angle::new(p as i64, q).unwrap()))
}

fn chord_strategy(max_q: u64) -> impl Strategy<Value = Chord> {
    (angle_strategy(max_q), angle_strategy(max_q))
        .prop_filter("nondegenerate", |(a, b)| a != b)
        .prop_map(|(a, b)| Chord::new(a, b))
}

fn lamination_strategy(max_q: u64) -> impl Strategy<Value = Lamination> {
    prop::collection::vec(chord_strategy(max_q), 1..8).prop_map(|chords| {
        let mut l = Lamination::new(2);
        for x in chords {
            let _ = l.insert(x);
        }
        l
    })
}

fn bits_strategy(max_len: usize, min_len: usize) -> impl Strategy<Value = BitString> {
    prop::collection::vec(any::<bool>(), min_len..=max_len).prop_map(|v| v.into_iter().collect())
}

fn multiplicative_order(q: u64) -> usize {
    let mut r = 2 % q;
    let mut k = 1;
    while r != 1 % q {
        r = r * 2 % q;
        k += 1;
    }
    k
}

fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count()
}

/// Linked iff exactly one endpoint of `y` lies strictly between those of `x`
/// and no endpoint is shared, compared as fractions.
fn linked_oracle(x: &Chord, y: &Chord) -> bool {
    let (a, b) = (frac(x.a()), frac(x.b()));
    let (p, q) = (frac(y.a()), frac(y.b()));
    if a == p || a == q || b == p || b == q {
        return false;
    }
    let inside = |t: &BigRational| &a < t && t < &b;
    inside(&p) != inside(&q)
}

fn pairwise_unlinked(chords: &[Chord]) -> bool {
    chords
        .iter()
        .enumerate()
        .all(|(i, x)| chords[i + 1..].iter().all(|y| !x.linked(y)))
}

// angles

#[test]
fn odd_denominators_are_periodic_with_the_order_of_two() {
    for q in (3..=1025u64).step_by(2) {
        let ord = multiplicative_order(q);
        for p in [1, q / 2, q - 1] {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            let info = orbit_info(2, &Angle::new(p as i64, q).unwrap());
            assert_eq!(info.preperiod_length, 0, "{p}/{q}");
            assert_eq!(info.period_length, ord, "{p}/{q}");
        }
    }
}

fn round_trip_up_to(max_q: u64) {
    for q in 1..=max_q {
        for p in 0..q {
            let t = Angle::new(p as i64, q).unwrap();
            let back = Angle::from_expansion(
                &BinaryExpansion::new(
                    t.expansion().preperiod().clone(),
                    t.expansion().period().clone(),
                )
                .unwrap(),
            );
            assert_eq!(frac(&back), ratio(p, q));
            assert_eq!(back, t);
        }
    }
}

#[test]
fn binary_round_trip() {
    round_trip_up_to(600);
}

#[test]
#[ignore = "slow: every fraction with denominator up to 10000"]
fn binary_round_trip_full_range() {
    round_trip_up_to(10_000);
}

proptest! {
    #[test]
    fn doubling_is_a_shift(pre in bits_strategy(40, 0), per in bits_strategy(40, 1)) {
        let e = BinaryExpansion::new(pre, per).unwrap().canonical();
        let t = Angle::from_expansion(&e);
        let shifted = Angle::from_expansion(&e.shift_left(1));
        prop_assert_eq!(&sigma(2, &t), &shifted);
        let twice = frac(&t) * BigRational::from_integer(2.into());
        let expected = &twice - twice.floor();
        prop_assert_eq!(frac(&shifted), expected);
    }

    #[test]
    fn angle_order_is_numeric(x in angle_strategy(500), y in angle_strategy(500)) {
        prop_assert_eq!(x.cmp(&y), frac(&x).cmp(&frac(&y)));
    }
}

// chords and laminations

proptest! {
    #[test]
    fn linked_matches_the_fraction_oracle(x in chord_strategy(64), y in chord_strategy(64)) {
        prop_assert_eq!(x.linked(&y), linked_oracle(&x, &y));
        prop_assert_eq!(x.linked(&y), y.linked(&x));
        prop_assert!(!x.linked(&x));
    }

    #[test]
    fn insertion_order_does_not_matter(x in chord_strategy(64), y in chord_strategy(64), z in chord_strategy(64)) {
        let chords = [x, y, z];
        let unlinked = pairwise_unlinked(&chords);
        let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut results = BTreeSet::new();
        for o in orders {
            let l = Lamination::from_leaves(2, o.iter().map(|&i| chords[i].clone()));
            prop_assert_eq!(l.is_ok(), unlinked);
            results.insert(l.map(|l| l.to_vec()).unwrap_or_default());
        }
        prop_assert_eq!(results.len(), 1);
    }

    #[test]
    fn images_never_grow_denominators(x in chord_strategy(1000)) {
        let y = x.image(2);
        for t in [x.a(), x.b()] {
            prop_assert!((t.denominator() % t.double().denominator()).is_zero());
        }
        let expected: BTreeSet<Angle> = [x.a().double(), x.b().double()].into();
        let got: BTreeSet<Angle> = y.endpoints().into_iter().cloned().collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn hausdorff_is_a_metric(
        x in lamination_strategy(255),
        y in lamination_strategy(255),
        z in lamination_strategy(255),
    ) {
        let dxy = hausdorff_distance(&x, &y);
        prop_assert!(hausdorff_distance(&x, &x).is_zero());
        prop_assert_eq!(&dxy, &hausdorff_distance(&y, &x));
        prop_assert_eq!(dxy.is_zero(), x.to_vec() == y.to_vec());
        prop_assert!(hausdorff_distance(&x, &z) <= &dxy + hausdorff_distance(&y, &z));
    }
}

#[test]
fn cardioid_edge_hulls_are_rotational_gaps() {
    let mut seen = 0;
    for m in lavaurs_qml(10) {
        if component_type(&m).unwrap() != ComponentType::CardioidEdge {
            continue;
        }
        let hull = orbit_hull(&m);
        if hull.len() < 3 {
            continue;
        }
        let class = classify_finite_gap(&FiniteGap::new(hull).unwrap(), 2);
        assert_eq!(class.tag, GapTag::FiniteRotational, "{}", m.chord());
        assert_eq!(class.period, Some(1));
        seen += 1;
    }
    assert!(seen > 0);
}

// minor leaves

#[test]
fn validity_agrees_with_lavaurs_up_to_period_ten() {
    let lavaurs: BTreeSet<Chord> = lavaurs_qml(10)
        .into_iter()
        .map(|m| m.chord().clone())
        .collect();
    for n in 2..=10 {
        let angles = periodic_angles(n);
        let mut valid = BTreeSet::new();
        for (i, a) in angles.iter().enumerate() {
            for b in &angles[i + 1..] {
                let chord = Chord::new(a.clone(), b.clone());
                if is_valid_minor(&chord).unwrap() {
                    valid.insert(chord);
                }
            }
        }
        let expected: BTreeSet<Chord> = lavaurs
            .iter()
            .filter(|x| x.a().exact_period() == Some(n))
            .cloned()
            .collect();
        assert_eq!(valid, expected, "period {n}");
    }
}

#[test]
fn majors_map_onto_their_minor() {
    let third = ratio(1, 3);
    for m in lavaurs_qml(9) {
        let (x, y) = majors_of_minor(m.chord());
        assert_eq!(x.length(), y.length());
        assert!(x.length() >= third, "{}", m.chord());
        assert_eq!(&x.image(2), m.chord());
        assert_eq!(&y.image(2), m.chord());
        let major = periodic_major(&m).unwrap();
        assert!(major.chord() == &x || major.chord() == &y);
    }
}

#[test]
fn component_type_counts() {
    let minors = lavaurs_qml(10);
    let mut counts: BTreeMap<usize, [usize; 3]> = BTreeMap::new();
    for m in &minors {
        let slot = match component_type(m).unwrap() {
            ComponentType::CardioidEdge => 0,
            ComponentType::Satellite => 1,
            ComponentType::Primitive => 2,
        };
        counts.entry(m.period()).or_default()[slot] += 1;
    }
    let satellite_like = |n: usize| counts[&n][0] + counts[&n][1];
    assert_eq!((satellite_like(2), counts[&2][2]), (1, 0));
    assert_eq!((satellite_like(3), counts[&3][2]), (2, 1));
    assert_eq!((satellite_like(4), counts[&4][2]), (3, 3));
    for n in 2..=10 {
        assert_eq!(counts[&n][0], euler_phi(n), "cardioid edges of period {n}");
    }
}

// pullbacks

fn periodic_portraits(max_period: usize) -> Vec<CriticalPortrait> {
    let mut out = Vec::new();
    for n in 1..=max_period {
        for t in periodic_angles(n) {
            out.push(CriticalPortrait::critical_leaf(&t));
        }
    }
    for m in lavaurs_qml(max_period) {
        let (x, y) = majors_of_minor(m.chord());
        out.push(
            CriticalPortrait::quad([x.a().clone(), x.b().clone(), y.a().clone(), y.b().clone()])
                .unwrap(),
        );
    }
    out
}

#[test]
fn pullbacks_satisfy_the_sibling_invariant() {
    for p in periodic_portraits(8) {
        let l = build_pullback(&p, 8).unwrap();
        let v = check_sibling_invariant(&l, 7);
        assert!(v.is_empty(), "{p}: {:?}", v.first());
    }
}

#[test]
fn generations_at_most_double() {
    for p in periodic_portraits(6) {
        let (_, generations) = pullback_generations(&p, 8).unwrap();
        for w in generations.windows(2) {
            assert!(w[1] <= 2 * w[0], "{p}: {generations:?}");
        }
    }
}

#[test]
fn dendritic_pullback_has_no_shared_endpoints() {
    let p = CriticalPortrait::critical_leaf(&"1/2".parse().unwrap());
    let l = build_pullback(&p, 8).unwrap();
    let mut endpoints = BTreeSet::new();
    for leaf in l.leaves() {
        assert!(endpoints.insert(leaf.a().clone()), "{leaf}");
        assert!(endpoints.insert(leaf.b().clone()), "{leaf}");
    }
    assert!(l.len() > 100);
}

// cleaning

#[test]
fn cleaned_lamination_keeps_fixed_return_disjointness() {
    let q = build_qml_l(10);
    let kept: Vec<Chord> = q.kept.iter().map(|m| m.chord().clone()).collect();
    assert!(pairwise_unlinked(&kept));
    for m in &q.kept {
        let orbit = m.orbit();
        let endpoints: BTreeSet<&Angle> = orbit.iter().flat_map(|x| [x.a(), x.b()]).collect();
        assert_eq!(endpoints.len(), 2 * m.period(), "{}", m.chord());
    }
    let retained: BTreeSet<&Angle> = q.retained_points.iter().collect();
    for m in &q.erased {
        assert!(retained.contains(m.chord().a()) && retained.contains(m.chord().b()));
    }
    let mut union: Vec<Chord> = q
        .kept
        .iter()
        .chain(&q.erased)
        .map(|m| m.chord().clone())
        .collect();
    union.sort();
    let mut all: Vec<Chord> = lavaurs_qml(10).iter().map(|m| m.chord().clone()).collect();
    all.sort();
    assert_eq!(union, all);
}

#[test]
fn limit_classes_match_the_return_type() {
    let kept = build_qml_l(6).kept;
    for m in lavaurs_qml(6) {
        let classes = limit_class_of_qlam(&m).unwrap();
        if kept.contains(&m) {
            assert_eq!(classes.len(), 1);
            assert_eq!(classes[0].minor.as_ref(), Some(m.chord()));
            assert_eq!(classes[0].tag, LimitTag::FixedReturnQuadrilateral);
        } else {
            let minors: BTreeSet<Chord> =
                classes.iter().map(|k| k.minor.clone().unwrap()).collect();
            let expected: BTreeSet<Chord> = [
                Chord::point(m.chord().a().clone()),
                Chord::point(m.chord().b().clone()),
            ]
            .into();
            assert_eq!(minors, expected, "{}", m.chord());
        }
    }
}

#[test]
fn cleaned_minors_are_approached() {
    let all = lavaurs_qml(10);
    for max_p in 4..=10 {
        let q = build_qml_l(max_p);
        let points: Vec<Chord> = q
            .retained_points
            .iter()
            .cloned()
            .map(Chord::point)
            .collect();
        let kept: Vec<&Chord> = q.kept.iter().map(|m| m.chord()).collect();
        for m in q.kept.iter().filter(|m| m.period() < max_p) {
            assert!(all.iter().all(|o| !o.chord().linked(m.chord())));
            let nearest = kept
                .iter()
                .filter(|o| **o != m.chord())
                .copied()
                .chain(points.iter())
                .map(|o| o.distance(m.chord()))
                .min()
                .unwrap();
            let bound = BigRational::new(BigInt::one(), BigInt::one() << (max_p - m.period()));
            assert!(nearest <= bound, "{} at P={max_p}: {nearest}", m.chord());
        }
    }
}

proptest! {
    #[test]
    fn minor_equivalence_ignores_order(seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut items: Vec<(String, Chord)> = lavaurs_qml(5)
            .iter()
            .flat_map(|m| {
                let id = m.chord().to_string();
                [(id.clone(), m.chord().clone()), (format!("{id}'"), Chord::point(m.chord().a().clone()))]
            })
            .collect();
        let before = minor_equivalence_classes(&items);
        items.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
        prop_assert_eq!(before, minor_equivalence_classes(&items));
    }
}

// renormalization

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn tuning_semiconjugacy_on_long_angles(
        root_index in 0usize..63,
        pre in bits_strategy(30, 0),
        per in bits_strategy(60, 1),
    ) {
        let pool = RootPool::up_to(6);
        let root = &pool.roots()[root_index % pool.roots().len()];
        let t = Angle::from_expansion(&BinaryExpansion::new(pre, per).unwrap());
        let tuned = root.tune(&t);
        prop_assert_eq!(tuned.double_n(root.period()), root.tune(&t.double()));
        prop_assert_eq!(root.untune(&tuned), Some(t));
    }
}

#[test]
fn tuning_preserves_order() {
    let mut angles: Vec<Angle> = (1..=63u64)
        .flat_map(|q| (0..q).map(move |p| Angle::new(p as i64, q).unwrap()))
        .collect();
    angles.sort();
    angles.dedup();
    for root in RootPool::up_to(4).roots() {
        let tuned: Vec<Angle> = angles.iter().map(|t| root.tune(t)).collect();
        assert!(tuned.windows(2).all(|w| w[0] < w[1]), "{root}");
    }
}

#[test]
fn v_edges_are_unlinked_and_land_on_the_root() {
    let depth = 4;
    for root in RootPool::up_to(4).roots() {
        let edges = root.v_edges(depth);
        assert!(pairwise_unlinked(&edges), "{root}");
        let n = root.period();
        let mut expected = BTreeSet::from([root.chord().clone()]);
        for j in 1..=depth {
            for k in (1..1u64 << j).step_by(2) {
                let (term, co) = Angle::new(k as i64, 1 << j)
                    .unwrap()
                    .both_expansions()
                    .unwrap();
                let edge = Chord::new(root.tune_expansion(&term), root.tune_expansion(&co));
                assert_eq!(&edge.double_n(n * j), root.chord(), "{root} over {k}/2^{j}");
                expected.insert(edge);
            }
        }
        assert_eq!(edges.into_iter().collect::<BTreeSet<_>>(), expected);
    }
    let nr = build_qml_nr(8, depth);
    let mut all: Vec<Chord> = nr.kept.iter().map(|m| m.chord().clone()).collect();
    all.extend(nr.v_gap_edges.iter().cloned());
    assert!(pairwise_unlinked(&all));
}

#[test]
fn kept_minors_avoid_maximal_gaps() {
    let nr = build_qml_nr(8, 0);
    let (type1, type2) = maximal_roots(8);
    for m in &nr.kept {
        for x in type1.iter().chain(&type2) {
            assert!(
                !x.in_gap_v(m.chord()),
                "{} inside the gap of {x}",
                m.chord()
            );
        }
    }
}

#[test]
fn erasure_is_monotone() {
    let mut status: BTreeMap<Chord, bool> = BTreeMap::new();
    for p in 2..=10 {
        let nr = build_qml_nr(p, 0);
        for (m, kept) in nr
            .kept
            .iter()
            .map(|m| (m, true))
            .chain(nr.erased.iter().map(|m| (m, false)))
        {
            if let Some(before) = status.insert(m.chord().clone(), kept) {
                assert_eq!(before, kept, "{} changed at period {p}", m.chord());
            }
        }
    }
}

#[test]
fn root_pool_matches_lavaurs() {
    let pool = RootPool::up_to(6);
    let chords: Vec<&Chord> = pool.roots().iter().map(HyperbolicRoot::chord).collect();
    let lavaurs: Vec<MinorLeaf> = lavaurs_qml(6);
    assert_eq!(chords.len(), lavaurs.len());
    assert!(lavaurs.iter().all(|m| pool.find(m.chord()).is_some()));
}

// files and rendering

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn leaf_files_round_trip(max_period in 2usize..9) {
        let minors = lavaurs_qml(max_period);
        let text = format_sections(&period_sections(&minors));
        let read = parse_leaves(&text).unwrap();
        let mut expected: Vec<Chord> = minors.iter().map(|m| m.chord().clone()).collect();
        expected.sort();
        prop_assert_eq!(&read.leaves, &expected);
        prop_assert_eq!(format_sections(&period_sections(&minors)), text);
    }
}

fn svg_numbers(d: &str) -> Vec<f64> {
    d.split_whitespace()
        .filter_map(|t| t.parse().ok())
        .collect()
}

#[test]
fn svg_endpoints_are_exact_at_unit_scale() {
    let style = RenderStyle {
        image_size_px: 2,
        margin: 0.0,
        precision: 12,
        ..RenderStyle::default()
    };
    let leaves: Vec<Chord> = lavaurs_qml(7)
        .iter()
        .map(|m| m.chord().clone())
        .chain([c("1/4 3/4")])
        .collect();
    let svg = render_svg(&[("qml", &leaves)], &style);
    assert_eq!(svg, render_svg(&[("qml", &leaves)], &style));
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let paths: Vec<&str> = doc
        .descendants()
        .filter(|n| n.has_tag_name("path"))
        .skip(1)
        .map(|n| n.attribute("d").unwrap())
        .collect();
    assert_eq!(paths.len(), leaves.len());
    let point = |t: &Angle| {
        let theta = 2.0 * std::f64::consts::PI * t.to_f64();
        (1.0 + theta.cos(), 1.0 - theta.sin())
    };
    for (leaf, d) in leaves.iter().zip(&paths) {
        let nums = svg_numbers(d);
        let (start, end) = (
            (nums[0], nums[1]),
            (nums[nums.len() - 2], nums[nums.len() - 1]),
        );
        for (got, want) in [(start, point(leaf.a())), (end, point(leaf.b()))] {
            assert!(
                (got.0 - want.0).abs() < 1e-9 && (got.1 - want.1).abs() < 1e-9,
                "{leaf}: {d}"
            );
        }
        if !leaf.is_diameter() {
            let delta = leaf.length();
            let delta = delta.numer().to_string().parse::<f64>().unwrap()
                / delta.denom().to_string().parse::<f64>().unwrap();
            let radius = (std::f64::consts::PI * delta).tan();
            assert!((nums[2] - radius).abs() < 1e-9, "{leaf}: {d}");
        }
    }
}
