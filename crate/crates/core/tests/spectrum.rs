use contracta::corpus::{forest_semilattice, random_forest, random_intersection_family};
use contracta::filter::{
    all_filters, atomic_spectrum, is_tight_filter, is_tight_filter_capped, is_ultrafilter, tight_spectrum_capped,
    ultrafilters, SpectrumReport, TightCheck,
};
use contracta::lattice::{ElementId, FiniteSemilattice};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Filters by brute force over all subsets of elements.
fn brute_filters(lattice: &FiniteSemilattice) -> Vec<Vec<ElementId>> {
    let n = lattice.size();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let set: Vec<ElementId> = (0..n).filter(|i| mask >> i & 1 == 1).map(ElementId).collect();
        let has = |e: ElementId| mask >> e.index() & 1 == 1;
        let ok = !has(ElementId::ZERO)
            && set.iter().all(|&e| lattice.elements().all(|f| !lattice.leq(e, f) || has(f)))
            && set.iter().all(|&e| set.iter().all(|&f| has(lattice.meet(e, f))));
        if ok {
            out.push(set);
        }
    }
    out
}

fn brute_maximal_generators(lattice: &FiniteSemilattice) -> Vec<ElementId> {
    let filters = brute_filters(lattice);
    let mut gens: Vec<ElementId> = filters
        .iter()
        .filter(|f| !filters.iter().any(|g| g.len() > f.len() && f.iter().all(|x| g.contains(x))))
        // the generator of a finite filter is the meet of its members
        .map(|f| f.iter().fold(f[0], |acc, &e| lattice.meet(acc, e)))
        .collect();
    gens.sort();
    gens
}

fn check_spectra(lattice: &FiniteSemilattice) {
    let report = SpectrumReport::compute(lattice);
    assert!(report.coincide(), "{report:?}");
    assert_eq!(report.ultra, brute_maximal_generators(lattice));
    let filters = all_filters(lattice);
    assert_eq!(filters.len(), brute_filters(lattice).len());
    for f in &filters {
        let ultra = is_ultrafilter(lattice, f);
        assert_eq!(ultra, is_tight_filter(lattice, f));
        // a cap of zero forces the single-cover check everywhere
        assert_eq!(is_tight_filter_capped(lattice, f, 0), TightCheck::Reduced(ultra));
    }
}

#[test]
fn spectra_coincide_on_all_small_forests() {
    for nodes in 0..=6 {
        for parents in contracta::corpus::all_forests(nodes) {
            check_spectra(&forest_semilattice(&parents));
        }
    }
}

#[test]
fn reduced_and_exhaustive_spectra_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let lattice = random_intersection_family(&mut rng, 5, 7);
        let gens = |cap| tight_spectrum_capped(&lattice, cap).iter().map(|p| p.generator()).collect::<Vec<_>>();
        assert_eq!(gens(0), gens(usize::MAX));
        assert_eq!(gens(0), lattice.atoms());
    }
}

#[test]
fn chain_has_one_point() {
    let chain = FiniteSemilattice::chain(5);
    assert_eq!(ultrafilters(&chain).len(), 1);
    assert_eq!(atomic_spectrum(&chain)[0].generator(), ElementId(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spectra_coincide_on_random_families(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        check_spectra(&random_intersection_family(&mut rng, 5, 7));
    }

    #[test]
    fn spectra_coincide_on_random_forests(seed in any::<u64>(), nodes in 0usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        check_spectra(&forest_semilattice(&random_forest(&mut rng, nodes)));
    }
}
