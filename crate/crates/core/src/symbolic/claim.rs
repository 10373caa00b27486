use serde::Serialize;

use super::contraction::{find_strictly_contracting_block, AlgorithmTrace, SearchConfig, SearchError};
use super::{BlockSystem, PrefixSet, Word};

/// A block `X_i` and a power `m` with `f^m(X_i) ≪ X_i` among unions of
/// cylinders: the image lies inside the block, and the nonempty cylinder
/// `Z(separator)` lies inside the block but misses the image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CylinderClaim {
    pub block: usize,
    pub power: u64,
    pub block_set: PrefixSet,
    pub image: PrefixSet,
    pub separator: Word,
    pub checks: ClaimChecks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClaimChecks {
    pub image_inside: bool,
    pub separator_inside: bool,
    pub separator_disjoint: bool,
}

impl ClaimChecks {
    pub fn all(&self) -> bool {
        self.image_inside && self.separator_inside && self.separator_disjoint
    }
}

impl CylinderClaim {
    /// Builds the claim for a given block, power and separator, recomputing
    /// the image and checking each part.
    pub fn check(system: &BlockSystem, block: usize, power: u64, separator: Word) -> Result<Self, SearchError> {
        let power_map = system
            .map()
            .power(u32::try_from(power).map_err(|_| SearchError::Exhausted { max_power: power })?)
            .map_err(|e| SearchError::Oracle(e.to_string()))?;
        let block_set = system.block(block).clone();
        let image = power_map
            .apply(&block_set)
            .map_err(|e| SearchError::Oracle(e.to_string()))?;
        let cylinder = PrefixSet::cylinder(system.arity(), separator.clone());
        let checks = ClaimChecks {
            image_inside: image.is_subset(&block_set),
            separator_inside: cylinder.is_subset(&block_set),
            separator_disjoint: cylinder.is_disjoint(&image),
        };
        Ok(CylinderClaim { block, power, block_set, image, separator, checks })
    }
}

/// Runs the strict search and turns its witness into a [`CylinderClaim`],
/// re-deriving the image through the composed map `f^m` rather than the
/// iterated images the search used.
pub fn extract_contraction_witness(
    system: &BlockSystem,
    config: &SearchConfig,
) -> Result<(CylinderClaim, AlgorithmTrace), SearchError> {
    let run = find_strictly_contracting_block(&mut system.oracle(), config);
    let witness = run.outcome?;
    let separator = witness.separator.expect("strict witnesses carry a separator");
    let claim = CylinderClaim::check(system, witness.block, witness.power, separator)?;
    Ok((claim, run.trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::system::fixtures::{shift, swap, w};

    #[test]
    fn shift_claim() {
        let (claim, _) = extract_contraction_witness(&shift(), &SearchConfig::default()).unwrap();
        assert_eq!((claim.block, claim.power), (0, 1));
        assert_eq!(claim.image, PrefixSet::cylinder(2, w("aa")));
        assert_eq!(claim.separator, w("ab"));
        assert!(claim.checks.all());
    }

    #[test]
    fn swap_has_no_claim() {
        assert_eq!(
            extract_contraction_witness(&swap(), &SearchConfig::default()).unwrap_err(),
            SearchError::NotApplicable
        );
    }

    #[test]
    fn bad_separator_is_caught() {
        let claim = CylinderClaim::check(&shift(), 0, 1, w("aab")).unwrap();
        assert!(claim.checks.image_inside && claim.checks.separator_inside);
        assert!(!claim.checks.separator_disjoint);
    }
}
