//! Finite inverse semigroups with zero and their standard action on the
//! tight spectrum of the idempotent semilattice.
//!
//! Products are read from a table, `product[s][t] = st`. Semigroup elements
//! are plain indices; elements of the idempotent semilattice are
//! [`ElementId`]s of that semilattice, with the zero of the semigroup at
//! index 0.

use serde::Serialize;
use thiserror::Error;

use crate::filter::{self, SpectrumPoint};
use crate::lattice::{ElementId, FiniteSemilattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("multiplication table is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("entry {row}·{col} = {value} is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("zero index {0} is out of range")]
    ZeroOutOfRange(usize),
    #[error("product is not associative on ({0},{1},{2})")]
    NotAssociative(usize, usize, usize),
    #[error("declared zero is not absorbing for {0}")]
    BadZero(usize),
    #[error("idempotents {0} and {1} do not commute")]
    IdempotentsDontCommute(usize, usize),
    #[error("{0} has no inverse")]
    NoInverse(usize),
    #[error("{0} has two inverses, {1} and {2}")]
    NonUniqueInverse(usize, usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("{0} is not an element of the semigroup")]
    UnknownElement(usize),
    #[error("{0} is not an idempotent")]
    NotIdempotent(usize),
    #[error("point generated by {point} is outside the domain of {s}")]
    OutsideDomain { s: usize, point: usize },
    #[error("{e} is not below the source projection of {s}")]
    NotBelowSourceProjection { s: usize, e: usize },
    #[error("domain of {e} is not contained in the domain of {s}")]
    DomainViolation { s: usize, e: usize },
    #[error("image of the domain of {e} under {s} differs from the domain of s e s*")]
    ImageMismatch { s: usize, e: usize },
}

/// A validated finite inverse semigroup with a zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteInverseSemigroup {
    size: usize,
    product: Vec<usize>,
    zero: usize,
    star: Vec<usize>,
}

impl FiniteInverseSemigroup {
    pub fn from_table(table: &[Vec<usize>], zero: usize) -> Result<Self, SemigroupError> {
        let n = table.len();
        if n == 0 {
            return Err(SemigroupError::Empty);
        }
        if zero >= n {
            return Err(SemigroupError::ZeroOutOfRange(zero));
        }
        let mut product = Vec::with_capacity(n * n);
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return Err(SemigroupError::Ragged { row, len: entries.len(), expected: n });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= n {
                    return Err(SemigroupError::OutOfRange { row, col, value });
                }
                product.push(value);
            }
        }
        let mut s = FiniteInverseSemigroup { size: n, product, zero, star: Vec::new() };
        s.check_axioms()?;
        Ok(s)
    }

    /// Extends a table with a new absorbing element, which becomes the zero.
    pub fn adjoin_zero(table: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let n = table.len();
        let mut out: Vec<Vec<usize>> = table
            .iter()
            .map(|row| {
                let mut row = row.clone();
                row.push(n);
                row
            })
            .collect();
        out.push(vec![n; n + 1]);
        out
    }

    fn check_axioms(&mut self) -> Result<(), SemigroupError> {
        let n = self.size;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(SemigroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        for s in 0..n {
            if self.mul(self.zero, s) != self.zero || self.mul(s, self.zero) != self.zero {
                return Err(SemigroupError::BadZero(s));
            }
        }
        let idempotents: Vec<usize> = (0..n).filter(|&x| self.mul(x, x) == x).collect();
        for (i, &e) in idempotents.iter().enumerate() {
            for &f in &idempotents[i + 1..] {
                if self.mul(e, f) != self.mul(f, e) {
                    return Err(SemigroupError::IdempotentsDontCommute(e, f));
                }
            }
        }
        let mut star = Vec::with_capacity(n);
        for s in 0..n {
            let mut found = None;
            for t in 0..n {
                if self.mul(self.mul(s, t), s) == s && self.mul(self.mul(t, s), t) == t {
                    if let Some(t1) = found {
                        return Err(SemigroupError::NonUniqueInverse(s, t1, t));
                    }
                    found = Some(t);
                }
            }
            star.push(found.ok_or(SemigroupError::NoInverse(s))?);
        }
        self.star = star;
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    #[inline]
    pub fn mul(&self, s: usize, t: usize) -> usize {
        self.product[s * self.size + t]
    }

    #[inline]
    pub fn star(&self, s: usize) -> usize {
        self.star[s]
    }

    /// `s*s`, the projection onto the domain of `s`.
    pub fn source(&self, s: usize) -> usize {
        self.mul(self.star(s), s)
    }

    /// `ss*`, the projection onto the range of `s`.
    pub fn range(&self, s: usize) -> usize {
        self.mul(s, self.star(s))
    }

    /// `s e s*`.
    pub fn conjugate(&self, s: usize, e: usize) -> usize {
        self.mul(self.mul(s, e), self.star(s))
    }

    pub fn pow(&self, s: usize, m: u32) -> usize {
        assert!(m >= 1);
        (1..m).fold(s, |acc, _| self.mul(acc, s))
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.mul(x, x) == x
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.product.chunks(self.size).map(|row| row.to_vec()).collect()
    }

    /// Idempotents ordered with the zero first and the rest by index.
    pub fn idempotents(&self) -> Vec<usize> {
        std::iter::once(self.zero)
            .chain((0..self.size).filter(|&x| x != self.zero && self.is_idempotent(x)))
            .collect()
    }

    pub fn idempotent_semilattice(&self) -> IdempotentSemilattice {
        let elements = self.idempotents();
        let mut lookup = vec![None; self.size];
        for (i, &x) in elements.iter().enumerate() {
            lookup[x] = Some(ElementId(i));
        }
        let table: Vec<Vec<usize>> = elements
            .iter()
            .map(|&e| {
                elements
                    .iter()
                    .map(|&f| lookup[self.mul(e, f)].expect("idempotents commute").index())
                    .collect()
            })
            .collect();
        let lattice = FiniteSemilattice::from_table(&table)
            .expect("idempotents of an inverse semigroup form a semilattice");
        IdempotentSemilattice { lattice, elements, lookup }
    }
}

/// The semilattice of idempotents together with its embedding.
#[derive(Debug, Clone)]
pub struct IdempotentSemilattice {
    pub lattice: FiniteSemilattice,
    elements: Vec<usize>,
    lookup: Vec<Option<ElementId>>,
}

impl IdempotentSemilattice {
    /// Semigroup index of a semilattice element.
    pub fn element(&self, e: ElementId) -> usize {
        self.elements[e.index()]
    }

    /// Semilattice element of an idempotent, `None` for non-idempotents.
    pub fn id_of(&self, x: usize) -> Option<ElementId> {
        self.lookup.get(x).copied().flatten()
    }

    pub fn embedding(&self) -> &[usize] {
        &self.elements
    }
}

/// The restriction of `θ_s` to its domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionView {
    pub element: usize,
    pub domain: Vec<SpectrumPoint>,
    pub mapping: Vec<(SpectrumPoint, SpectrumPoint)>,
}

impl ActionView {
    pub fn is_injective(&self) -> bool {
        let mut images: Vec<&SpectrumPoint> = self.mapping.iter().map(|(_, y)| y).collect();
        images.sort();
        images.windows(2).all(|w| w[0] != w[1])
    }

    pub fn image(&self) -> Vec<SpectrumPoint> {
        let mut out: Vec<SpectrumPoint> = self.mapping.iter().map(|(_, y)| y.clone()).collect();
        out.sort();
        out
    }
}

/// The standard action of a finite inverse semigroup on the tight spectrum
/// of its idempotents. A point `↑m` with `m <= s*s` is sent to `↑(s m s*)`.
#[derive(Debug, Clone)]
pub struct StandardAction<'a> {
    semigroup: &'a FiniteInverseSemigroup,
    idempotents: IdempotentSemilattice,
}

impl<'a> StandardAction<'a> {
    pub fn new(semigroup: &'a FiniteInverseSemigroup) -> Self {
        StandardAction { semigroup, idempotents: semigroup.idempotent_semilattice() }
    }

    pub fn semigroup(&self) -> &FiniteInverseSemigroup {
        self.semigroup
    }

    pub fn idempotents(&self) -> &IdempotentSemilattice {
        &self.idempotents
    }

    fn lattice(&self) -> &FiniteSemilattice {
        &self.idempotents.lattice
    }

    fn check_element(&self, s: usize) -> Result<(), ActionError> {
        if s < self.semigroup.size() {
            Ok(())
        } else {
            Err(ActionError::UnknownElement(s))
        }
    }

    fn idempotent(&self, e: usize) -> Result<ElementId, ActionError> {
        self.check_element(e)?;
        self.idempotents.id_of(e).ok_or(ActionError::NotIdempotent(e))
    }

    /// Spectrum points of the idempotent semilattice.
    pub fn spectrum(&self) -> Vec<SpectrumPoint> {
        filter::tight_spectrum(self.lattice())
    }

    /// `D_e`: the spectrum points containing the idempotent `e`.
    pub fn domain_set(&self, e: usize) -> Result<Vec<SpectrumPoint>, ActionError> {
        let id = self.idempotent(e)?;
        Ok(self.points_below(id))
    }

    fn points_below(&self, id: ElementId) -> Vec<SpectrumPoint> {
        filter::basic_set(self.lattice(), id)
            .into_iter()
            .map(|a| filter::point_at(self.lattice(), a).expect("atoms are nonzero"))
            .collect()
    }

    /// `θ_s(ξ)`.
    pub fn apply(&self, s: usize, point: &SpectrumPoint) -> Result<SpectrumPoint, ActionError> {
        self.check_element(s)?;
        let source = self.idempotents.id_of(self.semigroup.source(s)).expect("s*s is idempotent");
        let m = point.generator();
        if !point.contains(source) {
            return Err(ActionError::OutsideDomain { s, point: self.idempotents.element(m) });
        }
        let image = self.semigroup.conjugate(s, self.idempotents.element(m));
        let image = self.idempotents.id_of(image).expect("conjugates of idempotents are idempotent");
        let result = filter::point_at(self.lattice(), image)
            .expect("conjugation is an order isomorphism below s*s, so atoms stay nonzero");
        debug_assert!(filter::is_ultrafilter(self.lattice(), result.filter()));
        Ok(result)
    }

    pub fn view(&self, s: usize) -> Result<ActionView, ActionError> {
        self.check_element(s)?;
        let domain = self.domain_set(self.semigroup.source(s))?;
        let mapping = domain
            .iter()
            .map(|p| Ok((p.clone(), self.apply(s, p)?)))
            .collect::<Result<Vec<_>, ActionError>>()?;
        Ok(ActionView { element: s, domain, mapping })
    }

    fn image_of(&self, s: usize, points: &[SpectrumPoint]) -> Result<Vec<SpectrumPoint>, ActionError> {
        let mut image = points
            .iter()
            .map(|p| self.apply(s, p))
            .collect::<Result<Vec<_>, _>>()?;
        image.sort();
        Ok(image)
    }

    /// `θ_s(D_e)` for `e <= s*s`, checked against `D_{ses*}`.
    pub fn image_of_domain_below(&self, s: usize, e: usize) -> Result<Vec<SpectrumPoint>, ActionError> {
        self.check_element(s)?;
        let id = self.idempotent(e)?;
        let source = self.idempotents.id_of(self.semigroup.source(s)).expect("s*s is idempotent");
        if !self.lattice().leq(id, source) {
            return Err(ActionError::NotBelowSourceProjection { s, e });
        }
        let image = self.image_of(s, &self.points_below(id))?;
        if image != self.domain_set(self.semigroup.conjugate(s, e))? {
            return Err(ActionError::ImageMismatch { s, e });
        }
        Ok(image)
    }

    /// `θ_s(D_e)` when only `D_e ⊆ D_{s*s}` is known. The domain is first
    /// rewritten as `D_{e s*s}`, which lies below `s*s`.
    pub fn image_of_domain_contained(
        &self,
        s: usize,
        e: usize,
    ) -> Result<Vec<SpectrumPoint>, ActionError> {
        self.check_element(s)?;
        let sg = self.semigroup;
        let domain = self.domain_set(e)?;
        let source_domain = self.domain_set(sg.source(s))?;
        if !domain.iter().all(|p| source_domain.contains(p)) {
            return Err(ActionError::DomainViolation { s, e });
        }
        let reduced = sg.mul(e, sg.source(s));
        if self.domain_set(reduced)? != domain {
            return Err(ActionError::ImageMismatch { s, e });
        }
        let image = self.image_of(s, &self.domain_set(reduced)?)?;
        let via_reduced = self.domain_set(sg.conjugate(s, reduced))?;
        if sg.conjugate(s, reduced) != sg.conjugate(s, e) || image != via_reduced {
            return Err(ActionError::ImageMismatch { s, e });
        }
        Ok(image)
    }

    /// `θ_s(D_e) = D_{ses*}`, routed through whichever hypothesis applies.
    pub fn image_of_domain(&self, s: usize, e: usize) -> Result<Vec<SpectrumPoint>, ActionError> {
        let sg = self.semigroup;
        self.check_element(s)?;
        let id = self.idempotent(e)?;
        let source = self.idempotents.id_of(sg.source(s)).expect("s*s is idempotent");
        if self.lattice().leq(id, source) {
            self.image_of_domain_below(s, e)
        } else {
            self.image_of_domain_contained(s, e)
        }
    }
}

/// An instance of the contraction condition below some idempotent: `f <= e`,
/// `f <= s*s` and `s f s* ≪ f`, separated by `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConditionIIIWitness {
    pub e: usize,
    pub f: usize,
    pub s: usize,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionIIIReport {
    /// One entry per nonzero idempotent `e`, in index order.
    pub per_idempotent: Vec<(usize, Option<ConditionIIIWitness>)>,
}

impl ConditionIIIReport {
    /// The condition holds when every nonzero idempotent has a witness.
    pub fn holds(&self) -> bool {
        self.per_idempotent.iter().all(|(_, w)| w.is_some())
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &ConditionIIIWitness> {
        self.per_idempotent.iter().filter_map(|(_, w)| w.as_ref())
    }
}

/// Exhaustive search for the contraction condition, lexicographic in
/// `(e, f, s)` by index.
pub fn condition_iii_search(semigroup: &FiniteInverseSemigroup) -> ConditionIIIReport {
    let idem = semigroup.idempotent_semilattice();
    let lattice = &idem.lattice;
    let mut nonzero: Vec<usize> = idem.embedding()[1..].to_vec();
    nonzero.sort_unstable();
    let per_idempotent = nonzero
        .iter()
        .map(|&e| {
            let e_id = idem.id_of(e).expect("idempotent");
            let witness = nonzero
                .iter()
                .filter(|&&f| lattice.leq(idem.id_of(f).expect("idempotent"), e_id))
                .find_map(|&f| {
                    let f_id = idem.id_of(f).expect("idempotent");
                    (0..semigroup.size()).find_map(|s| {
                        let source = idem.id_of(semigroup.source(s)).expect("s*s is idempotent");
                        if !lattice.leq(f_id, source) {
                            return None;
                        }
                        let g = idem.id_of(semigroup.conjugate(s, f)).expect("idempotent");
                        lattice
                            .strictly_dominated_by(g, f_id)
                            .map(|d| ConditionIIIWitness { e, f, s, d: idem.element(d) })
                    })
                });
            (e, witness)
        })
        .collect();
    ConditionIIIReport { per_idempotent }
}
