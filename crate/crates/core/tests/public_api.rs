use std::collections::BTreeSet;

use proptest::prelude::*;
use rsl_core::canonize::{er_canonize, is_irreducible, pr_canonize, project_i, EqRel};
use rsl_core::ellentuck::{
    flatten, homogenize, is_nash_williams, is_sperner, make_schreier, BarrierDescriptor, Homogenized, Rank,
};
use rsl_core::graphs::{enumerate_class, omits_clique};
use rsl_core::hypercube::enumerate_mask_pairs;
use rsl_core::ideals::{fubini_member, OracleSequence, SymbolicSet, UltrafilterOracle};

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn barrier_ranks() {
    assert_eq!(make_schreier().rank().unwrap(), Rank::OMEGA);
    assert_eq!(BarrierDescriptor::Uniform(3).rank().unwrap(), Rank::finite(3));
}

#[test]
fn triangle_free_counts() {
    // Labeled triangle-free graphs on 3 and 4 vertices.
    assert_eq!(enumerate_class(3, 3).unwrap().len(), 7);
    let four = enumerate_class(4, 3).unwrap();
    assert_eq!(four.len(), 41);
    assert!(four.iter().all(|g| omits_clique(g, 3)));
}

#[test]
fn mask_pair_counts() {
    for n in 0..=4usize {
        let side = (1usize << (n + 1)) - 1;
        assert_eq!(enumerate_mask_pairs(n).len(), 2 + 2 * side + side * side);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn uniform_barriers_are_barriers(k in 1u32..4, ground in 4u32..9) {
        let f = flatten(&BarrierDescriptor::Uniform(k), ground).unwrap();
        prop_assert_eq!(f.len() as u64, binomial(u64::from(ground), u64::from(k)));
        prop_assert!(is_nash_williams(&f) && is_sperner(&f));
    }

    #[test]
    fn homogenized_sets_are_homogeneous(bits in proptest::collection::vec(0u32..2, 21)) {
        let pairs = flatten(&BarrierDescriptor::Uniform(2), 7).unwrap();
        match homogenize(&pairs, &bits, 3, 1_000_000).unwrap() {
            Homogenized::Found { set, color } => {
                for (p, &c) in pairs.members().iter().zip(&bits) {
                    if p.iter().all(|x| set.contains(x)) {
                        prop_assert_eq!(c, color);
                    }
                }
            }
            other => prop_assert!(false, "seven points always carry a monochromatic triangle: {:?}", other),
        }
    }

    #[test]
    fn er_witnesses_reverify(labels in proptest::collection::vec(0u64..2, 10)) {
        let domain = flatten(&BarrierDescriptor::Uniform(2), 5).unwrap();
        let rel = EqRel::new(domain.clone(), labels).unwrap();
        if let Some(w) = er_canonize(&rel, 3).unwrap() {
            for a in domain.restrict_to(&w.m) {
                for b in domain.restrict_to(&w.m) {
                    let same = rel.label(a) == rel.label(b);
                    prop_assert_eq!(same, project_i(a, &w.indices).unwrap() == project_i(b, &w.indices).unwrap());
                }
            }
        }
    }

    #[test]
    fn pr_witnesses_are_irreducible_and_canonical(labels in proptest::collection::vec(0u64..3, 15)) {
        let domain = flatten(&make_schreier(), 7).unwrap();
        let labels: Vec<u64> = labels.into_iter().cycle().take(domain.len()).collect();
        let rel = EqRel::new(domain.clone(), labels).unwrap();
        if let Some(w) = pr_canonize(&rel, 4, 100_000).unwrap() {
            prop_assert!(is_irreducible(&w.phi));
            let inside = domain.restrict_to(&w.m);
            prop_assert_eq!(inside.len(), w.phi.table.len());
            for a in &inside {
                for b in &inside {
                    prop_assert_eq!(rel.label(a) == rel.label(b), w.phi.get(a) == w.phi.get(b));
                }
            }
        }
    }

    #[test]
    fn principal_fubini_reads_one_fiber(
        n in 0u64..10,
        x in 0u64..10,
        rows in proptest::collection::btree_map(0u64..10, proptest::collection::btree_set(0u64..10, 0..4), 0..5),
    ) {
        let a = SymbolicSet::product(
            rows.iter().map(|(&i, s)| (i, SymbolicSet::Finite(s.clone()))).collect(),
            SymbolicSet::empty(1),
            None,
        );
        let v = OracleSequence::constant(UltrafilterOracle::Principal(x));
        let expected = rows.get(&n).is_some_and(|s: &BTreeSet<u64>| s.contains(&x));
        prop_assert_eq!(fubini_member(&a, UltrafilterOracle::Principal(n), &v).unwrap(), expected);
        prop_assert_eq!(a.contains(&[n, x]).unwrap(), expected);
    }
}
