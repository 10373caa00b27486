use contracta::corpus::{all_forests, forest_semilattice, random_forest, shuffled_table};
use contracta::filter::basic_set;
use contracta::lattice::{ElementId, FiniteSemilattice};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random family of subsets of `{0..ground}` closed under intersection,
/// with the empty set first.
fn intersection_family(seed: u64, ground: u32, max_size: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = (1u64 << ground) - 1;
    loop {
        let mut sets = vec![0u64];
        for _ in 0..rng.gen_range(1..max_size) {
            let mut frontier = vec![rng.gen_range(1..=full)];
            while let Some(s) = frontier.pop() {
                if !sets.contains(&s) {
                    frontier.extend(sets.iter().map(|t| s & t));
                    sets.push(s);
                }
            }
        }
        if sets.len() <= max_size {
            return sets;
        }
    }
}

fn is_laminar(sets: &[u64]) -> bool {
    sets.iter()
        .all(|&a| sets.iter().all(|&b| a & b == 0 || a & b == a || a & b == b))
}

fn minimal_nonempty(sets: &[u64]) -> Vec<u64> {
    sets.iter()
        .copied()
        .filter(|&a| a != 0 && !sets.iter().any(|&b| b != 0 && b != a && b & a == b))
        .collect()
}

fn ids(lattice: &FiniteSemilattice) -> Vec<ElementId> {
    lattice.elements().collect()
}

#[test]
fn tree_like_matches_laminarity() {
    for seed in 0..400 {
        let sets = intersection_family(seed, 5, 8);
        let lattice = FiniteSemilattice::from_intersection_family(&sets).unwrap();
        assert_eq!(lattice.is_tree_like(), is_laminar(&sets), "family {sets:?}");
    }
}

#[test]
fn order_is_set_inclusion_and_atoms_are_minimal_sets() {
    for seed in 0..200 {
        let sets = intersection_family(seed, 5, 8);
        let lattice = FiniteSemilattice::from_intersection_family(&sets).unwrap();
        for (i, &a) in sets.iter().enumerate() {
            for (j, &b) in sets.iter().enumerate() {
                assert_eq!(lattice.leq(ElementId(i), ElementId(j)), a & b == a);
                assert_eq!(lattice.orthogonal(ElementId(i), ElementId(j)), a & b == 0);
            }
        }
        let mut atoms: Vec<u64> = lattice.atoms().iter().map(|a| sets[a.index()]).collect();
        let mut expected = minimal_nonempty(&sets);
        atoms.sort_unstable();
        expected.sort_unstable();
        assert_eq!(atoms, expected);
    }
}

#[test]
fn domination_witness_is_least_and_valid() {
    for seed in 0..200 {
        let sets = intersection_family(seed, 4, 7);
        let lattice = FiniteSemilattice::from_intersection_family(&sets).unwrap();
        for e in ids(&lattice) {
            for f in ids(&lattice) {
                let brute = ids(&lattice).into_iter().find(|&d| {
                    lattice.leq(e, f) && !d.is_zero() && lattice.leq(d, f) && lattice.orthogonal(d, e)
                });
                assert_eq!(lattice.strictly_dominated_by(e, f), brute);
            }
        }
    }
}

#[test]
fn forests_realize_all_small_tree_like_semilattices() {
    // every parent array gives a tree-like table; sizes 1..=7
    for nodes in 0..=6 {
        for parents in all_forests(nodes) {
            let lattice = forest_semilattice(&parents);
            assert_eq!(lattice.size(), nodes + 1);
            assert!(lattice.is_tree_like());
        }
    }
}

/// In a tree-like semilattice, a proper inclusion of atom sets forces
/// strict domination.
fn check_proper_inclusion_gives_domination(lattice: &FiniteSemilattice) {
    for e in ids(lattice) {
        for f in ids(lattice) {
            let de = basic_set(lattice, e);
            let df = basic_set(lattice, f);
            let proper = de.len() < df.len() && de.iter().all(|a| df.contains(a));
            if proper {
                let d = lattice
                    .strictly_dominated_by(e, f)
                    .unwrap_or_else(|| panic!("D({e}) ⊊ D({f}) without domination"));
                assert!(!d.is_zero() && lattice.leq(d, f) && lattice.orthogonal(d, e));
                assert!(lattice.leq(e, f));
            }
        }
    }
}

#[test]
fn proper_inclusion_gives_domination_on_all_small_forests() {
    for nodes in 0..=5 {
        for parents in all_forests(nodes) {
            check_proper_inclusion_gives_domination(&forest_semilattice(&parents));
        }
    }
}

#[test]
fn atom_sets_do_not_decide_order_off_tree_like() {
    // {1} is the only atom and lies below both {0,1} and {1,2}
    let sets = [0b000, 0b010, 0b011, 0b110];
    let lattice = FiniteSemilattice::from_intersection_family(&sets).unwrap();
    assert!(!lattice.is_tree_like());
    let (e, f) = (ElementId(2), ElementId(3));
    assert_eq!(basic_set(&lattice, e), basic_set(&lattice, f));
    assert!(!lattice.leq(e, f));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn relabeled_forests_stay_tree_like_and_satisfy_domination(seed in any::<u64>(), nodes in 0usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = forest_semilattice(&random_forest(&mut rng, nodes));
        let table = shuffled_table(&mut rng, &base);
        let lattice = FiniteSemilattice::from_table(&table).unwrap();
        prop_assert!(lattice.is_tree_like());
        check_proper_inclusion_gives_domination(&lattice);
    }

    #[test]
    fn order_is_a_partial_order(seed in any::<u64>()) {
        let sets = intersection_family(seed, 5, 9);
        let lattice = FiniteSemilattice::from_intersection_family(&sets).unwrap();
        let all = ids(&lattice);
        for &e in &all {
            prop_assert!(lattice.leq(ElementId::ZERO, e));
            for &f in &all {
                if lattice.leq(e, f) && lattice.leq(f, e) {
                    prop_assert_eq!(e, f);
                }
                for &g in &all {
                    if lattice.leq(e, f) && lattice.leq(f, g) {
                        prop_assert!(lattice.leq(e, g));
                    }
                }
            }
        }
    }

    #[test]
    fn atom_sets_are_monotone(seed in any::<u64>()) {
        let sets = intersection_family(seed, 5, 9);
        let lattice = FiniteSemilattice::from_intersection_family(&sets).unwrap();
        for e in ids(&lattice) {
            for f in ids(&lattice) {
                if lattice.leq(e, f) {
                    let df = basic_set(&lattice, f);
                    prop_assert!(basic_set(&lattice, e).iter().all(|a| df.contains(a)));
                }
            }
        }
    }

    #[test]
    fn included_atom_sets_force_comparability_when_tree_like(seed in any::<u64>(), nodes in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lattice = forest_semilattice(&random_forest(&mut rng, nodes));
        for e in lattice.nonzero_elements() {
            for f in lattice.nonzero_elements() {
                let de = basic_set(&lattice, e);
                let df = basic_set(&lattice, f);
                // a chain above a single atom shows that e <= f itself does not follow
                if de.iter().all(|a| df.contains(a)) {
                    prop_assert!(lattice.leq(e, f) || lattice.leq(f, e));
                }
            }
        }
    }
}
