//! Cross-checks against independent recomputations in test code.

use std::collections::BTreeSet;

use dp1_core::curves::{class_of_name, curve_name, CurveTable};
use dp1_core::lattice::{simple_roots, DivisorClass};
use dp1_core::par::Strategy;
use dp1_core::stars::{classify_pair, relation, PairType, StarRelation, StarTable};
use dp1_core::weyl::{enumerate_roots, reflection_of};

/// Entry counts (zeros, ones, twos) of the pairing matrix of two curve-disjoint stars,
/// read off the three intersection patterns.
fn signature_type(matrix: &[[i64; 6]; 6]) -> Option<PairType> {
    let count = |v| matrix.iter().flatten().filter(|&&x| x == v).count();
    match (count(0), count(1), count(2)) {
        (0, 36, 0) => Some(PairType::Asynchronized),
        (12, 12, 12) => Some(PairType::Synchronized),
        (8, 20, 8) => Some(PairType::Abnormal),
        _ => None,
    }
}

#[test]
fn pair_types_agree_with_entry_counts() {
    let table = CurveTable::global();
    let stars = StarTable::global().stars();
    let mut disjoint = 0;
    for i in 0..stars.len() {
        for j in i + 1..stars.len() {
            let m = stars[i].pairing_matrix(&stars[j], table);
            let shares = m.iter().flatten().any(|&x| x == -1);
            match classify_pair(table, &stars[i], &stars[j]) {
                Ok(t) => {
                    disjoint += 1;
                    assert_eq!(signature_type(&m), Some(t), "stars {i}, {j}");
                }
                Err(_) => assert!(shares, "stars {i}, {j} unclassified without sharing a curve"),
            }
        }
    }
    assert_eq!(disjoint, 581_280);
}

#[test]
fn shared_curves_come_in_bertini_pairs() {
    let table = CurveTable::global();
    let stars = StarTable::global().stars();
    for i in (0..stars.len()).step_by(53) {
        for j in 0..stars.len() {
            if i == j {
                continue;
            }
            if let Ok(StarRelation::SharesCurves) = relation(table, &stars[i], &stars[j]) {
                let a: BTreeSet<_> = stars[i].curves().iter().copied().collect();
                let shared: Vec<_> = stars[j].curves().iter().copied().filter(|c| a.contains(c)).collect();
                assert_eq!(shared.len(), 2);
                assert_eq!(table.bertini(shared[0]), shared[1]);
            }
        }
    }
}

#[test]
fn roots_are_the_weyl_orbit_of_the_simple_roots() {
    let simple = simple_roots();
    let reflections: Vec<_> = simple.iter().map(|r| reflection_of(r).unwrap()).collect();
    let mut orbit: BTreeSet<DivisorClass> = simple.iter().copied().collect();
    let mut frontier: Vec<DivisorClass> = orbit.iter().copied().collect();
    while let Some(v) = frontier.pop() {
        for s in &reflections {
            let w = s.apply(&v);
            if orbit.insert(w) {
                frontier.push(w);
            }
        }
    }
    let listed: BTreeSet<DivisorClass> = enumerate_roots().iter().map(|r| *r.class()).collect();
    assert_eq!(orbit, listed);
    assert_eq!(listed.len(), 240);
}

#[test]
fn names_round_trip() {
    for c in CurveTable::global().curves() {
        let name = curve_name(&c.class).unwrap();
        assert_eq!(class_of_name(&name).unwrap(), c.class);
    }
}

#[test]
fn sequential_and_parallel_star_tables_agree() {
    let table = CurveTable::global();
    let seq = StarTable::build(table, Strategy::Sequential);
    let par = StarTable::build(table, Strategy::Parallel);
    assert_eq!(seq.stars(), par.stars());
}
