//! Fuzzy matrices: unit-domain matrices combined with min, max and scalar
//! products, plus maps `eta` that turn ordinary matrices into fuzzy ones.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lab::laws::{check_law, Law};
use crate::lab::{Budget, CarrierSpec, StructureReport, Verdict, Witness};
use crate::matrix::{EntryOp, SuperIntervalMatrix};
use crate::scalar::{Scalar, ScalarDomain};

const UNIT: ScalarDomain = ScalarDomain::UnitRationals;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FuzzySuperMatrix(SuperIntervalMatrix);

impl FuzzySuperMatrix {
    pub fn new(m: SuperIntervalMatrix) -> Result<Self> {
        if m.domain() != UNIT {
            return Err(Error::DomainMismatch { left: UNIT.to_string(), right: m.domain().to_string() });
        }
        Ok(FuzzySuperMatrix(m))
    }

    pub fn matrix(&self) -> &SuperIntervalMatrix {
        &self.0
    }

    pub fn into_inner(self) -> SuperIntervalMatrix {
        self.0
    }
}

impl fmt::Display for FuzzySuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn fuzzy_min(a: &FuzzySuperMatrix, b: &FuzzySuperMatrix) -> Result<FuzzySuperMatrix> {
    Ok(FuzzySuperMatrix(a.0.min(&b.0)?))
}

pub fn fuzzy_max(a: &FuzzySuperMatrix, b: &FuzzySuperMatrix) -> Result<FuzzySuperMatrix> {
    Ok(FuzzySuperMatrix(a.0.max(&b.0)?))
}

/// Reads `s` as a fuzzy value, rejecting anything outside `[0, 1]`.
pub fn unit_scalar(s: &Scalar) -> Result<Scalar> {
    UNIT.embed(s).map_err(|_| Error::ScalarOutOfRange(s.to_string()))
}

fn scalar_op(op: EntryOp, s: &Scalar, a: &FuzzySuperMatrix) -> Result<FuzzySuperMatrix> {
    let s = unit_scalar(s)?;
    let out = match op {
        // products of unit values stay in the unit interval, so the raw product is safe
        EntryOp::Mul => a.0.map_endpoints(|x| Ok(Scalar::Rational(s.to_rational() * x.to_rational())))?,
        _ => a.0.map_endpoints(|x| op.apply(&UNIT, &s, x))?,
    };
    Ok(FuzzySuperMatrix(out))
}

pub fn scalar_min(s: &Scalar, a: &FuzzySuperMatrix) -> Result<FuzzySuperMatrix> {
    scalar_op(EntryOp::Min, s, a)
}

pub fn scalar_max(s: &Scalar, a: &FuzzySuperMatrix) -> Result<FuzzySuperMatrix> {
    scalar_op(EntryOp::Max, s, a)
}

pub fn scalar_prod(s: &Scalar, a: &FuzzySuperMatrix) -> Result<FuzzySuperMatrix> {
    scalar_op(EntryOp::Mul, s, a)
}

/// Both sides of the compatibility law for a (combine, scalar) pairing:
/// `combine(s·x, s·y)` and `s·combine(x, y)`, where `·` is `scalar` with `s`.
pub fn pairing_sides(
    combine: EntryOp,
    scalar: EntryOp,
    s: &Scalar,
    x: &FuzzySuperMatrix,
    y: &FuzzySuperMatrix,
) -> Result<(FuzzySuperMatrix, FuzzySuperMatrix)> {
    let lattice = |op: EntryOp| match op {
        EntryOp::Min | EntryOp::Max => Ok(op),
        _ => Err(Error::UnsupportedInDomain { op: op.name(), domain: UNIT.to_string() }),
    };
    let (combine, scalar) = (lattice(combine)?, lattice(scalar)?);
    let apply = |m: &FuzzySuperMatrix| scalar_op(scalar, s, m);
    let left = FuzzySuperMatrix(apply(x)?.0.combine(combine, &apply(y)?.0)?);
    let right = apply(&FuzzySuperMatrix(x.0.combine(combine, &y.0)?))?;
    Ok((left, right))
}

/// Lattice laws of min and max on a unit-domain carrier.
pub fn check_lattice(c: &CarrierSpec, b: &Budget) -> Result<StructureReport> {
    if c.domain != UNIT {
        return Err(Error::DomainMismatch { left: UNIT.to_string(), right: c.domain.to_string() });
    }
    let (min, max) = (EntryOp::Min, EntryOp::Max);
    let laws = [
        Law::Associative(min),
        Law::Associative(max),
        Law::Commutative(min),
        Law::Commutative(max),
        Law::Idempotent(min),
        Law::Idempotent(max),
        Law::Absorption { outer: min, inner: max },
        Law::Absorption { outer: max, inner: min },
        Law::LeftDistributive { mul: min, add: max },
        Law::LeftDistributive { mul: max, add: min },
    ];
    let mut report = StructureReport::new(format!("min/max lattice: {}", c.describe()), c.size());
    for law in laws {
        report.push(law.name(), check_law(c, law, b)?);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum EtaMap {
    /// `a -> 1/a` for `a >= 1`, `0 -> eta_zero`.
    Reciprocal { eta_zero: Scalar },
    /// One value for zero, one for positive integers, one for non-integers.
    ByClass { zero: Scalar, integer: Scalar, fraction: Scalar },
}

impl EtaMap {
    pub fn reciprocal(eta_zero: Scalar) -> Result<Self> {
        Ok(EtaMap::Reciprocal { eta_zero: unit_scalar(&eta_zero)? })
    }

    pub fn by_class(zero: Scalar, integer: Scalar, fraction: Scalar) -> Result<Self> {
        Ok(EtaMap::ByClass {
            zero: unit_scalar(&zero)?,
            integer: unit_scalar(&integer)?,
            fraction: unit_scalar(&fraction)?,
        })
    }

    /// Residues are read as their representatives `0..n`, never inverted mod `n`.
    pub fn image(&self, x: &Scalar) -> Result<Scalar> {
        let q = x.to_rational();
        match self {
            EtaMap::Reciprocal { eta_zero } => {
                if q.is_zero() {
                    unit_scalar(eta_zero)
                } else if q >= BigRational::one() {
                    Ok(Scalar::Rational(q.recip()))
                } else {
                    Err(Error::ImageEscape(x.to_string()))
                }
            }
            EtaMap::ByClass { zero, integer, fraction } => unit_scalar(if q.is_zero() {
                zero
            } else if q.is_integer() {
                integer
            } else {
                fraction
            }),
        }
    }
}

pub fn fuzzify(m: &SuperIntervalMatrix, eta: &EtaMap) -> Result<FuzzySuperMatrix> {
    let endpoints = m.endpoints().iter().map(|x| eta.image(x)).collect::<Result<Vec<_>>>()?;
    Ok(FuzzySuperMatrix(SuperIntervalMatrix::from_endpoints(UNIT, m.partition().clone(), endpoints)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaAudit {
    pub report: StructureReport,
    /// Endpoint pairs `(a, b)` with `eta(a + b) < min(eta(a), eta(b))`, in lexicographic order.
    pub failing_pairs: Vec<(Scalar, Scalar)>,
    /// True when the pairs scanned cover the whole carrier pool.
    pub exhaustive: bool,
}

/// Checks `eta(A + B) >= min(eta(A), eta(B))` entrywise over the carrier.
pub fn audit_eta(eta: &EtaMap, c: &CarrierSpec, b: &Budget) -> Result<EtaAudit> {
    c.validate()?;
    let d = c.domain;
    EntryOp::Add.allowed_on(&d)?;
    let pool = c.pool();
    if pool.len().saturating_mul(pool.len()) as u64 > b.exhaustive_limit {
        return Err(Error::BudgetExceeded(format!("{} endpoint pairs", pool.len() * pool.len())));
    }
    let mut report = StructureReport::new(format!("eta superadditivity: {}", c.describe()), c.size());
    let holds_at = |x: &Scalar, y: &Scalar| -> Result<bool> {
        let lhs = eta.image(&d.add(x, y)?)?.to_rational();
        Ok(lhs >= eta.image(x)?.to_rational().min(eta.image(y)?.to_rational()))
    };
    let exhaustive = c.is_finite();
    let mut failing_pairs = Vec::new();
    if !c.groups().is_empty() {
        for x in &pool {
            for y in &pool {
                if !holds_at(x, y)? {
                    failing_pairs.push((x.clone(), y.clone()));
                }
            }
        }
    }
    let zero = d.zero();
    let zero_ok = !c.has_zero_cells() || holds_at(&zero, &zero)?;
    let verdict = match failing_pairs.first() {
        _ if !zero_ok => {
            Verdict::Fails { witness: Witness::new(Vec::new(), "the inequality fails on fixed zero cells") }
        }
        Some((x, y)) => {
            let (ma, mb) = (c.element_with_last(x), c.element_with_last(y));
            let sum = ma.add(&mb)?;
            let note = format!(
                "eta({}) = {} is below min(eta({x}), eta({y})) = {}",
                d.add(x, y)?,
                eta.image(&d.add(x, y)?)?,
                eta.image(x)?.to_rational().min(eta.image(y)?.to_rational())
            );
            Verdict::Fails { witness: Witness::new(vec![ma, mb, sum], note) }
        }
        None if exhaustive => Verdict::HoldsExhaustive,
        None => Verdict::HoldsSampled { seed: b.seed, samples: pool.len() * pool.len() },
    };
    report.push("eta(A+B) >= min(eta(A), eta(B))", verdict);
    Ok(EtaAudit { report, failing_pairs, exhaustive })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::PartitionSpec;

    fn f(t: &str) -> FuzzySuperMatrix {
        FuzzySuperMatrix::new(t.parse().unwrap()).unwrap()
    }

    #[test]
    fn scalars_must_be_fuzzy() {
        let a = f("domain: unit\n1/2 | 1");
        assert!(matches!(scalar_min(&Scalar::ratio(3, 2), &a), Err(Error::ScalarOutOfRange(_))));
        assert_eq!(scalar_prod(&Scalar::ratio(1, 2), &a).unwrap().to_string(), "[1/4 | 1/2]");
    }

    #[test]
    fn reciprocal_escapes_below_one() {
        let eta = EtaMap::reciprocal(Scalar::ratio(1, 1)).unwrap();
        let m: SuperIntervalMatrix = "domain: qplus\n1/2 | 2".parse().unwrap();
        assert!(matches!(fuzzify(&m, &eta), Err(Error::ImageEscape(_))));
    }

    #[test]
    fn constant_eta_passes_the_audit() {
        let one = Scalar::ratio(1, 1);
        let eta = EtaMap::by_class(one.clone(), one.clone(), one).unwrap();
        let c = CarrierSpec::new(ScalarDomain::Residues(6), PartitionSpec::trivial(1, 2).unwrap(), EntryOp::Add);
        let audit = audit_eta(&eta, &c, &Budget::default()).unwrap();
        assert!(audit.report.holds());
        assert!(audit.failing_pairs.is_empty());
    }
}
