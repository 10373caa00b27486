//! Filters, ultrafilters, covers and the tight spectrum of a finite
//! semilattice.
//!
//! In a finite semilattice every filter has a minimum and is therefore the
//! principal filter `↑g` of that minimum. The tight spectrum is discrete, so
//! tight filters, ultrafilters and principal filters of atoms all coincide.
//! The functions here compute each of these independently so that the
//! coincidence can be checked rather than assumed.

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{ElementId, FiniteSemilattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("the zero element does not generate a filter")]
    ZeroGenerator,
    #[error("element {0} is not part of the semilattice")]
    UnknownElement(ElementId),
    #[error("filter is empty")]
    Empty,
    #[error("filter contains zero")]
    ContainsZero,
    #[error("filter is not upward closed: {0} <= {1} but {1} is missing")]
    NotUpwardClosed(ElementId, ElementId),
    #[error("filter is not closed under meets: {0} ∧ {1} is missing")]
    NotMeetClosed(ElementId, ElementId),
    #[error("cover element {0} is not below {1}")]
    NotBelow(ElementId, ElementId),
}

/// A nonempty, zero-free, upward closed and meet closed set of elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Filter {
    generator: ElementId,
    members: Vec<ElementId>,
}

impl Filter {
    /// Checks the filter axioms on an arbitrary subset by direct inspection.
    /// Principality is derived, not assumed: the generator is the meet of
    /// all members, which must itself be a member.
    pub fn from_members(
        lattice: &FiniteSemilattice,
        members: impl IntoIterator<Item = ElementId>,
    ) -> Result<Filter, FilterError> {
        let mut in_set = vec![false; lattice.size()];
        for e in members {
            if !lattice.contains(e) {
                return Err(FilterError::UnknownElement(e));
            }
            in_set[e.index()] = true;
        }
        let members: Vec<ElementId> = lattice.elements().filter(|e| in_set[e.index()]).collect();
        if members.is_empty() {
            return Err(FilterError::Empty);
        }
        if in_set[0] {
            return Err(FilterError::ContainsZero);
        }
        for &e in &members {
            for f in lattice.elements() {
                if lattice.leq(e, f) && !in_set[f.index()] {
                    return Err(FilterError::NotUpwardClosed(e, f));
                }
            }
        }
        for &e in &members {
            for &f in &members {
                if !in_set[lattice.meet(e, f).index()] {
                    return Err(FilterError::NotMeetClosed(e, f));
                }
            }
        }
        let generator = members
            .iter()
            .copied()
            .reduce(|acc, e| lattice.meet(acc, e))
            .expect("nonempty");
        Ok(Filter { generator, members })
    }

    /// The minimum of the filter.
    pub fn generator(&self) -> ElementId {
        self.generator
    }

    pub fn members(&self) -> &[ElementId] {
        &self.members
    }

    pub fn contains(&self, e: ElementId) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    pub fn is_subset(&self, other: &Filter) -> bool {
        self.members.iter().all(|&e| other.contains(e))
    }
}

/// A point of the tight spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpectrumPoint {
    filter: Filter,
}

impl SpectrumPoint {
    pub fn generator(&self) -> ElementId {
        self.filter.generator()
    }

    pub fn filter(&self) -> &Filter {
        &self.filter
    }

    pub fn contains(&self, e: ElementId) -> bool {
        self.filter.contains(e)
    }
}

/// `↑e`.
pub fn principal_filter(lattice: &FiniteSemilattice, e: ElementId) -> Result<Filter, FilterError> {
    if !lattice.contains(e) {
        return Err(FilterError::UnknownElement(e));
    }
    if e.is_zero() {
        return Err(FilterError::ZeroGenerator);
    }
    Ok(Filter { generator: e, members: lattice.up_set(e) })
}

/// Every filter of the semilattice, ordered by generator. Each candidate up-set
/// is re-validated against the filter axioms.
pub fn all_filters(lattice: &FiniteSemilattice) -> Vec<Filter> {
    lattice
        .nonzero_elements()
        .map(|e| {
            Filter::from_members(lattice, lattice.up_set(e))
                .expect("up-sets of nonzero elements are filters")
        })
        .collect()
}

/// Ultrafilter test through orthogonality: every element outside the filter
/// is orthogonal to some member.
pub fn is_ultrafilter(lattice: &FiniteSemilattice, filter: &Filter) -> bool {
    lattice
        .elements()
        .filter(|&e| !filter.contains(e))
        .all(|e| filter.members().iter().any(|&d| lattice.orthogonal(d, e)))
}

/// Ultrafilter test through maximality: no filter strictly contains this one.
pub fn is_maximal_filter(lattice: &FiniteSemilattice, filter: &Filter) -> bool {
    all_filters(lattice)
        .iter()
        .all(|other| other == filter || !filter.is_subset(other))
}

/// `cover` covers `e` when every nonzero `d <= e` meets some member of
/// `cover` nontrivially.
pub fn is_cover(
    lattice: &FiniteSemilattice,
    cover: &[ElementId],
    e: ElementId,
) -> Result<bool, FilterError> {
    for &z in cover {
        if !lattice.contains(z) {
            return Err(FilterError::UnknownElement(z));
        }
        if !lattice.leq(z, e) {
            return Err(FilterError::NotBelow(z, e));
        }
    }
    Ok(covers(lattice, cover.iter().copied(), e))
}

fn covers(
    lattice: &FiniteSemilattice,
    cover: impl Iterator<Item = ElementId> + Clone,
    e: ElementId,
) -> bool {
    lattice
        .nonzero_elements()
        .filter(|&d| lattice.leq(d, e))
        .all(|d| cover.clone().any(|z| !lattice.orthogonal(d, z)))
}

/// Default bound on `|down_set(e)|` for exhaustive cover enumeration.
pub const DEFAULT_COVER_CAP: usize = 16;

/// How a tightness verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TightCheck {
    /// Every subset of every relevant down-set was examined.
    Exhaustive(bool),
    /// Some down-set exceeded the cap; only the largest cover candidate that
    /// avoids the filter was examined for such members.
    Reduced(bool),
}

impl TightCheck {
    pub fn is_tight(self) -> bool {
        match self {
            TightCheck::Exhaustive(t) | TightCheck::Reduced(t) => t,
        }
    }
}

/// A filter is tight when it meets every cover of each of its members.
/// Exhaustive over all subsets of `down_set(e)`.
pub fn is_tight_filter(lattice: &FiniteSemilattice, filter: &Filter) -> bool {
    is_tight_filter_capped(lattice, filter, usize::MAX).is_tight()
}

/// Tightness with a cap on exhaustive enumeration.
///
/// Above the cap a member `e` is checked through the single set
/// `{d <= e : d ∉ F}`: covers are closed under supersets, so some cover of `e`
/// misses `F` exactly when this one does.
pub fn is_tight_filter_capped(
    lattice: &FiniteSemilattice,
    filter: &Filter,
    cap: usize,
) -> TightCheck {
    let mut exhaustive = true;
    for &e in filter.members() {
        let below: Vec<ElementId> = lattice
            .down_set(e)
            .into_iter()
            .filter(|d| !d.is_zero())
            .collect();
        let ok = if below.len() <= cap && below.len() < 64 {
            meets_every_cover_exhaustive(lattice, filter, e, &below)
        } else {
            exhaustive = false;
            let avoiding = below.iter().copied().filter(|&d| !filter.contains(d));
            !covers(lattice, avoiding, e)
        };
        if !ok {
            return if exhaustive { TightCheck::Exhaustive(false) } else { TightCheck::Reduced(false) };
        }
    }
    if exhaustive {
        TightCheck::Exhaustive(true)
    } else {
        TightCheck::Reduced(true)
    }
}

fn meets_every_cover_exhaustive(
    lattice: &FiniteSemilattice,
    filter: &Filter,
    e: ElementId,
    below: &[ElementId],
) -> bool {
    // zero never helps a cover, so subsets of the nonzero down-set suffice
    for mask in 0u64..(1u64 << below.len()) {
        let subset = below
            .iter()
            .enumerate()
            .filter(move |(i, _)| mask >> i & 1 == 1)
            .map(|(_, &z)| z);
        if covers(lattice, subset.clone(), e) && !subset.clone().any(|z| filter.contains(z)) {
            return false;
        }
    }
    true
}

/// All tight filters, found by the cover test with the default cap.
pub fn tight_spectrum(lattice: &FiniteSemilattice) -> Vec<SpectrumPoint> {
    tight_spectrum_capped(lattice, DEFAULT_COVER_CAP)
}

pub fn tight_spectrum_capped(lattice: &FiniteSemilattice, cap: usize) -> Vec<SpectrumPoint> {
    all_filters(lattice)
        .into_iter()
        .filter(|f| is_tight_filter_capped(lattice, f, cap).is_tight())
        .map(|filter| SpectrumPoint { filter })
        .collect()
}

/// Ultrafilters found by maximality among all filters.
pub fn ultrafilters(lattice: &FiniteSemilattice) -> Vec<SpectrumPoint> {
    all_filters(lattice)
        .into_iter()
        .filter(|f| is_maximal_filter(lattice, f))
        .map(|filter| SpectrumPoint { filter })
        .collect()
}

/// `{↑a : a an atom}`.
pub fn atomic_spectrum(lattice: &FiniteSemilattice) -> Vec<SpectrumPoint> {
    lattice
        .atoms()
        .into_iter()
        .map(|a| SpectrumPoint { filter: principal_filter(lattice, a).expect("atoms are nonzero") })
        .collect()
}

/// The spectrum point generated by an atom.
pub fn point_at(lattice: &FiniteSemilattice, atom: ElementId) -> Result<SpectrumPoint, FilterError> {
    let filter = principal_filter(lattice, atom)?;
    Ok(SpectrumPoint { filter })
}

/// `D(e)`: generators of the spectrum points containing `e`, i.e. the atoms
/// below `e`.
pub fn basic_set(lattice: &FiniteSemilattice, e: ElementId) -> Vec<ElementId> {
    lattice.atoms_below(e)
}

/// The three independent spectrum computations side by side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub tight: Vec<ElementId>,
    pub ultra: Vec<ElementId>,
    pub atoms: Vec<ElementId>,
}

impl SpectrumReport {
    pub fn compute(lattice: &FiniteSemilattice) -> Self {
        let gens = |pts: Vec<SpectrumPoint>| pts.iter().map(SpectrumPoint::generator).collect();
        SpectrumReport {
            tight: gens(tight_spectrum(lattice)),
            ultra: gens(ultrafilters(lattice)),
            atoms: lattice.atoms(),
        }
    }

    pub fn coincide(&self) -> bool {
        self.tight == self.ultra && self.ultra == self.atoms
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::fixtures::{e4, A, B, F};

    fn two() -> FiniteSemilattice {
        FiniteSemilattice::chain(2)
    }

    /// Filters by brute force over all subsets of the carrier.
    fn filters_by_subsets(l: &FiniteSemilattice) -> Vec<Vec<ElementId>> {
        let n = l.size();
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            let set: Vec<ElementId> =
                (0..n).filter(|i| mask >> i & 1 == 1).map(ElementId).collect();
            if set.contains(&ElementId::ZERO) {
                continue;
            }
            let up = set.iter().all(|&e| l.up_set(e).iter().all(|f| set.contains(f)));
            let meet = set.iter().all(|&e| set.iter().all(|&f| set.contains(&l.meet(e, f))));
            if up && meet {
                out.push(set);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn principal_filters() {
        let l = e4();
        assert_eq!(principal_filter(&l, A).unwrap().members(), &[F, A]);
        assert_eq!(principal_filter(&l, F).unwrap().members(), &[F]);
        let chain = FiniteSemilattice::chain(3);
        assert_eq!(
            principal_filter(&chain, ElementId(1)).unwrap().members(),
            &[ElementId(1), ElementId(2)]
        );
        assert_eq!(principal_filter(&l, ElementId::ZERO), Err(FilterError::ZeroGenerator));
    }

    #[test]
    fn filter_counts_match_subset_enumeration() {
        let l = e4();
        assert_eq!(filters_by_subsets(&l).len(), 3);
        let mut ours: Vec<Vec<ElementId>> =
            all_filters(&l).iter().map(|f| f.members().to_vec()).collect();
        ours.sort();
        assert_eq!(ours, filters_by_subsets(&l));
        assert_eq!(all_filters(&two()).len(), 1);
        assert_eq!(all_filters(&FiniteSemilattice::chain(3)).len(), 2);
    }

    #[test]
    fn from_members_rejects_non_filters() {
        let l = e4();
        assert_eq!(Filter::from_members(&l, []), Err(FilterError::Empty));
        assert_eq!(
            Filter::from_members(&l, [ElementId::ZERO, F]),
            Err(FilterError::ContainsZero)
        );
        assert_eq!(Filter::from_members(&l, [A]), Err(FilterError::NotUpwardClosed(A, F)));
        assert_eq!(
            Filter::from_members(&l, [A, B, F]),
            Err(FilterError::NotMeetClosed(A, B))
        );
    }

    #[test]
    fn ultrafilter_examples() {
        let l = e4();
        let up_a = principal_filter(&l, A).unwrap();
        let up_f = principal_filter(&l, F).unwrap();
        assert!(is_ultrafilter(&l, &up_a));
        assert!(is_maximal_filter(&l, &up_a));
        assert!(!is_ultrafilter(&l, &up_f));
        assert!(!is_maximal_filter(&l, &up_f));
        let t = two();
        assert!(is_ultrafilter(&t, &all_filters(&t)[0]));
    }

    #[test]
    fn cover_examples() {
        let l = e4();
        assert_eq!(is_cover(&l, &[A, B], F), Ok(true));
        assert_eq!(is_cover(&l, &[A], F), Ok(false));
        for e in l.nonzero_elements() {
            assert_eq!(is_cover(&l, &[e], e), Ok(true));
        }
        assert_eq!(is_cover(&l, &[F], A), Err(FilterError::NotBelow(F, A)));
    }

    #[test]
    fn tight_examples() {
        let l = e4();
        assert!(!is_tight_filter(&l, &principal_filter(&l, F).unwrap()));
        assert!(is_tight_filter(&l, &principal_filter(&l, A).unwrap()));
        let t = two();
        assert!(is_tight_filter(&t, &all_filters(&t)[0]));
    }

    #[test]
    fn reduced_check_agrees_with_exhaustive() {
        let l = e4();
        for f in all_filters(&l) {
            let full = is_tight_filter_capped(&l, &f, usize::MAX);
            let reduced = is_tight_filter_capped(&l, &f, 0);
            assert!(matches!(full, TightCheck::Exhaustive(_)));
            assert!(matches!(reduced, TightCheck::Reduced(_)));
            assert_eq!(full.is_tight(), reduced.is_tight());
        }
    }

    #[test]
    fn spectra() {
        let l = e4();
        let report = SpectrumReport::compute(&l);
        assert_eq!(report.tight, vec![A, B]);
        assert!(report.coincide());

        // zero adjoined to the chain a < b: only ↑a survives
        let chain = FiniteSemilattice::chain(3);
        let pts = tight_spectrum(&chain);
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].generator(), ElementId(1));
        assert_eq!(pts[0].filter().members(), &[ElementId(1), ElementId(2)]);

        let t = two();
        assert_eq!(
            tight_spectrum(&t).iter().map(SpectrumPoint::generator).collect::<Vec<_>>(),
            vec![ElementId(1)]
        );
    }

    #[test]
    fn basic_sets_follow_membership() {
        let l = e4();
        for e in l.elements() {
            let by_membership: Vec<ElementId> = tight_spectrum(&l)
                .iter()
                .filter(|p| p.contains(e))
                .map(SpectrumPoint::generator)
                .collect();
            assert_eq!(basic_set(&l, e), by_membership);
        }
    }
}
