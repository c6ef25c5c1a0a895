//! Checks algebraic claims about carriers of same-type matrices: axioms, witness
//! search, spans and bases, ideals, direct sums and linear maps.
//!
//! Every operation on a carrier acts cell by cell, and cells in one group move
//! together, so a carrier is a product of copies of its entry pool. An equation
//! holds on the carrier exactly when it holds on the pool. Exhaustive verdicts
//! rely on that; the witnesses they return are rebuilt as matrices and checked
//! again at matrix level.

pub mod carrier;
pub mod howell;
pub mod independence;
pub mod laws;
pub mod linear_map;
pub mod report;
pub mod span;
pub mod subgroup;
pub mod witness;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::scalar::{Scalar, ScalarDomain};

pub use carrier::{CarrierSpec, Pattern};
pub use independence::{
    independent_exceeds_basis, independent_exceeds_basis_demo, is_independent, BasisDemo, Dependence, Independence,
    IndependenceMode,
};
pub use laws::{check_group, check_law, check_semigroup, check_semiring, check_strictness, Law};
pub use linear_map::{check_linear_map, MapRule};
pub use report::{AxiomCheck, StructureReport, Verdict, Witness};
pub use span::{
    check_direct_sum, check_ideal, find_generating_set, span, Decomposition, DirectSumReport, GeneratingSet, Overlap,
    SpanSet,
};
pub use subgroup::{check_proper_subgroup, find_proper_subgroup, SubgroupSearch, SubgroupWitness};
pub use witness::{find_witnesses, WitnessKind, WitnessSet};

/// Search limits shared by every check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Largest carrier scanned element by element.
    pub exhaustive_limit: u64,
    pub sample_count: usize,
    pub seed: u64,
    /// Coefficient bound for searches over unbounded scalar domains.
    pub coeff_bound: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { exhaustive_limit: 100_000, sample_count: 1_000, seed: 0, coeff_bound: 32 }
    }
}

impl Budget {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionKind {
    /// Base scalars `s` acting on endpoints.
    TypeI,
    /// Interval scalars `[0, s]`; on endpoints they act exactly like `s`.
    TypeII,
    Set,
    Semigroup,
    Group,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalarSet {
    Domain,
    Finite(Vec<Scalar>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarActionSpec {
    pub scalars: ScalarSet,
    pub kind: ActionKind,
}

impl Default for ScalarActionSpec {
    fn default() -> Self {
        ScalarActionSpec { scalars: ScalarSet::Domain, kind: ActionKind::TypeI }
    }
}

impl ScalarActionSpec {
    pub fn new(scalars: ScalarSet, kind: ActionKind) -> Self {
        ScalarActionSpec { scalars, kind }
    }

    /// The scalars a search walks through, bounded by `coeff_bound` on unbounded domains.
    pub fn values(&self, d: &ScalarDomain, b: &Budget) -> Vec<Scalar> {
        match &self.scalars {
            ScalarSet::Finite(v) => v.clone(),
            ScalarSet::Domain => bounded_scalars(d, b.coeff_bound),
        }
    }

    /// Whether `s` may act; for the whole domain anything valid in it qualifies.
    pub fn admits(&self, d: &ScalarDomain, s: &Scalar) -> bool {
        match &self.scalars {
            ScalarSet::Finite(v) => v.contains(s),
            ScalarSet::Domain => d.contains(s),
        }
    }
}

pub(crate) fn bounded_scalars(d: &ScalarDomain, bound: u64) -> Vec<Scalar> {
    match d {
        ScalarDomain::Residues(_) => d.elements().unwrap_or_default(),
        ScalarDomain::NonnegIntegers => (0..=bound).map(Scalar::nat).collect(),
        ScalarDomain::NonnegRationals | ScalarDomain::UnitRationals => {
            let mut v: Vec<BigRational> = (0..=bound)
                .flat_map(|p| (1..=bound.max(1)).filter(move |q| p.gcd(q) == 1 || p == 0).map(move |q| (p, q)))
                .map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
                .collect();
            v.sort();
            v.dedup();
            v.into_iter().map(Scalar::Rational).filter(|s| d.contains(s)).collect()
        }
    }
}

pub(crate) fn big(n: usize) -> BigUint {
    BigUint::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounded_scalars_are_sorted_and_distinct() {
        let q = bounded_scalars(&ScalarDomain::NonnegRationals, 4);
        assert_eq!(q.first(), Some(&Scalar::ratio(0, 1)));
        assert_eq!(q.last(), Some(&Scalar::ratio(4, 1)));
        assert!(q.windows(2).all(|w| w[0] < w[1]));
        let u = bounded_scalars(&ScalarDomain::UnitRationals, 4);
        assert_eq!(u.last(), Some(&Scalar::ratio(1, 1)));
        assert_eq!(bounded_scalars(&ScalarDomain::NonnegIntegers, 3).len(), 4);
    }
}
