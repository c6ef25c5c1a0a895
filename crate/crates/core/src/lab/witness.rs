use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{EntryOp, SuperIntervalMatrix};
use crate::scalar::Scalar;

use super::carrier::CarrierSpec;

const MAX_SCALAR_TUPLES: usize = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// Nonzero `x`, `y` with `x ∘ y = 0`.
    ZeroDivisorPair,
    /// `x ∘ x = x` other than zero and the all-ones element.
    Idempotent,
    /// `x ∘ y` equal to the carrier's all-ones element.
    UnitPair,
    /// Nonzero `x` with `x + y = 0`.
    AdditiveInversePair,
}

impl WitnessKind {
    pub fn name(&self) -> &'static str {
        match self {
            WitnessKind::ZeroDivisorPair => "zero divisor pair",
            WitnessKind::Idempotent => "idempotent",
            WitnessKind::UnitPair => "unit pair",
            WitnessKind::AdditiveInversePair => "additive inverse pair",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            WitnessKind::Idempotent => 1,
            _ => 2,
        }
    }

    fn op(&self) -> EntryOp {
        match self {
            WitnessKind::AdditiveInversePair => EntryOp::Add,
            _ => EntryOp::Mul,
        }
    }
}

impl std::str::FromStr for WitnessKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero-divisors" | "zero-divisor" => Ok(WitnessKind::ZeroDivisorPair),
            "idempotents" | "idempotent" => Ok(WitnessKind::Idempotent),
            "units" | "unit" => Ok(WitnessKind::UnitPair),
            "additive-inverses" | "additive-inverse" => Ok(WitnessKind::AdditiveInversePair),
            other => Err(Error::InvalidCarrier(format!("unknown witness kind `{other}`"))),
        }
    }
}

/// All witnesses of one kind in a carrier, described per free group so it can
/// be counted and tested without listing it.
///
/// A tuple of matrices is a witness iff every group takes a value tuple from
/// `allowed` and no excluded variable equals its excluded value in every group.
#[derive(Clone, Debug)]
pub struct WitnessSet {
    pub kind: WitnessKind,
    carrier: CarrierSpec,
    allowed: Vec<Vec<Scalar>>,
    exclusions: Vec<(usize, Scalar)>,
    complete: bool,
}

pub fn find_witnesses(c: &CarrierSpec, kind: WitnessKind) -> Result<WitnessSet> {
    c.validate()?;
    let d = c.domain;
    let op = kind.op();
    op.allowed_on(&d)?;
    let pool = c.pool();
    let arity = kind.arity();
    if pool.len().checked_pow(arity as u32).is_none_or(|n| n > MAX_SCALAR_TUPLES) {
        return Err(Error::BudgetExceeded(format!("{} pool values per cell", pool.len())));
    }
    let zero = d.zero();
    let mut allowed = Vec::new();
    for x in &pool {
        match kind {
            WitnessKind::Idempotent => {
                if op.apply(&d, x, x)? == *x {
                    allowed.push(vec![x.clone()]);
                }
            }
            _ => {
                for y in &pool {
                    let z = op.apply(&d, x, y)?;
                    let ok = match kind {
                        WitnessKind::UnitPair => z == d.one(),
                        _ => z == zero,
                    };
                    if ok {
                        allowed.push(vec![x.clone(), y.clone()]);
                    }
                }
            }
        }
    }
    let exclusions = match kind {
        WitnessKind::ZeroDivisorPair => vec![(0, zero.clone()), (1, zero)],
        WitnessKind::Idempotent => vec![(0, zero), (0, d.one())],
        WitnessKind::UnitPair => Vec::new(),
        WitnessKind::AdditiveInversePair => vec![(0, zero)],
    };
    let complete = c.is_finite();
    Ok(WitnessSet { kind, carrier: c.clone(), allowed, exclusions, complete })
}

impl WitnessSet {
    /// False when the carrier is unbounded and only its sampling pool was searched.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn carrier(&self) -> &CarrierSpec {
        &self.carrier
    }

    /// Inclusion-exclusion over the exclusions: `sum (-1)^|J| |Z_J|^k`.
    pub fn count(&self) -> BigUint {
        let k = self.carrier.groups().len() as u32;
        let e = self.exclusions.len();
        let mut total = BigInt::zero();
        for mask in 0u32..(1 << e) {
            let picked: Vec<&(usize, Scalar)> =
                (0..e).filter(|i| mask >> i & 1 == 1).map(|i| &self.exclusions[i]).collect();
            let z = self.allowed.iter().filter(|t| picked.iter().all(|(v, s)| &t[*v] == s)).count();
            let term = BigInt::from(z).pow(k);
            if picked.len().is_multiple_of(2) {
                total += term;
            } else {
                total -= term;
            }
        }
        debug_assert!(!total.is_negative());
        total.to_biguint().unwrap_or_default()
    }

    pub fn contains(&self, ms: &[SuperIntervalMatrix]) -> bool {
        if ms.len() != self.kind.arity() {
            return false;
        }
        let Some(values) = ms.iter().map(|m| self.carrier.values_of(m)).collect::<Option<Vec<_>>>() else {
            return false;
        };
        let k = self.carrier.groups().len();
        let fits = (0..k).all(|g| {
            let t: Vec<&Scalar> = values.iter().map(|v| &v[g]).collect();
            self.allowed.iter().any(|a| a.iter().zip(&t).all(|(x, y)| x == *y))
        });
        fits && !self.exclusions.iter().any(|(v, s)| values[*v].iter().all(|x| x == s))
    }

    /// Witnesses in lexicographic order of `(x, y)`; each is rechecked on the matrices.
    pub fn iter(&self) -> impl Iterator<Item = Vec<SuperIntervalMatrix>> + '_ {
        let kind = self.kind;
        let domain = self.carrier.domain;
        let unit = self.carrier.element(&vec![domain.one(); self.carrier.groups().len()]);
        WitnessIter::new(self).filter(move |ms| {
            let ok = verify(kind, ms, &unit).unwrap_or(false);
            debug_assert!(ok, "enumerated tuple is not a witness");
            ok
        })
    }

    pub fn first(&self) -> Option<Vec<SuperIntervalMatrix>> {
        self.iter().next()
    }
}

fn verify(kind: WitnessKind, ms: &[SuperIntervalMatrix], unit: &SuperIntervalMatrix) -> Result<bool> {
    let x = &ms[0];
    Ok(match kind {
        WitnessKind::ZeroDivisorPair => !x.is_zero() && !ms[1].is_zero() && x.hadamard(&ms[1])?.is_zero(),
        WitnessKind::Idempotent => !x.is_zero() && x != unit && x.hadamard(x)? == *x,
        WitnessKind::UnitPair => x.hadamard(&ms[1])? == *unit,
        WitnessKind::AdditiveInversePair => !x.is_zero() && x.add(&ms[1])?.is_zero(),
    })
}

/// Depth-first walk over slots `(variable, group)` in variable-major order.
/// A variable that matches an exclusion is rejected as soon as it is complete,
/// so later variables are never enumerated under it.
struct WitnessIter<'a> {
    set: &'a WitnessSet,
    k: usize,
    arity: usize,
    /// Candidate values per slot, and the index currently chosen.
    stack: Vec<(Vec<Scalar>, usize)>,
    started: bool,
    done: bool,
}

impl<'a> WitnessIter<'a> {
    fn new(set: &'a WitnessSet) -> Self {
        let k = set.carrier.groups().len();
        WitnessIter { set, k, arity: set.kind.arity(), stack: Vec::new(), started: false, done: false }
    }

    fn value(&self, slot: usize) -> &Scalar {
        let (c, i) = &self.stack[slot];
        &c[*i]
    }

    /// Values allowed at the next slot given earlier variables in the same group.
    fn candidates(&self) -> Vec<Scalar> {
        let slot = self.stack.len();
        let (v, g) = (slot / self.k, slot % self.k);
        let mut out: Vec<Scalar> = self
            .set
            .allowed
            .iter()
            .filter(|t| (0..v).all(|u| t[u] == *self.value(u * self.k + g)))
            .map(|t| t[v].clone())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn excluded(&self, v: usize) -> bool {
        self.set.exclusions.iter().any(|(u, s)| *u == v && (0..self.k).all(|g| self.value(v * self.k + g) == s))
    }

    /// Moves to the next choice at the deepest slot that has one.
    fn advance(&mut self) -> bool {
        while let Some((c, i)) = self.stack.last_mut() {
            if *i + 1 < c.len() {
                *i += 1;
                return true;
            }
            self.stack.pop();
        }
        false
    }

    fn emit(&self) -> Vec<SuperIntervalMatrix> {
        (0..self.arity)
            .map(|v| {
                let values: Vec<Scalar> = (0..self.k).map(|g| self.value(v * self.k + g).clone()).collect();
                self.set.carrier.element(&values)
            })
            .collect()
    }
}

impl Iterator for WitnessIter<'_> {
    type Item = Vec<SuperIntervalMatrix>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let total = self.arity * self.k;
        if total == 0 {
            self.done = true;
            let ok = (0..self.arity).all(|v| !self.set.exclusions.iter().any(|(u, _)| *u == v));
            return ok.then(|| self.emit());
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        loop {
            let depth = self.stack.len();
            // a just-completed variable block may be excluded
            if depth > 0 && depth.is_multiple_of(self.k) && self.excluded(depth / self.k - 1) {
                if !self.advance() {
                    self.done = true;
                    return None;
                }
                continue;
            }
            if depth == total {
                return Some(self.emit());
            }
            let c = self.candidates();
            if c.is_empty() {
                if !self.advance() {
                    self.done = true;
                    return None;
                }
                continue;
            }
            self.stack.push((c, 0));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::PartitionSpec;
    use crate::scalar::ScalarDomain;

    fn row(n: u64, cols: usize) -> CarrierSpec {
        CarrierSpec::new(ScalarDomain::Residues(n), PartitionSpec::new(1, cols, vec![], vec![1]).unwrap(), EntryOp::Mul)
    }

    #[test]
    fn count_matches_enumeration() {
        for kind in [
            WitnessKind::ZeroDivisorPair,
            WitnessKind::Idempotent,
            WitnessKind::UnitPair,
            WitnessKind::AdditiveInversePair,
        ] {
            let set = find_witnesses(&row(6, 2), kind).unwrap();
            let listed: Vec<_> = set.iter().collect();
            assert_eq!(BigUint::from(listed.len()), set.count(), "{kind:?}");
            assert!(listed.iter().all(|w| set.contains(w)));
            let mut sorted = listed.clone();
            sorted.sort_by(|a, b| {
                let ka: Vec<_> = a.iter().flat_map(|m| m.endpoints().to_vec()).collect();
                let kb: Vec<_> = b.iter().flat_map(|m| m.endpoints().to_vec()).collect();
                ka.cmp(&kb)
            });
            assert_eq!(listed, sorted);
        }
    }

    #[test]
    fn first_zero_divisor_is_least() {
        let set = find_witnesses(&row(4, 2), WitnessKind::ZeroDivisorPair).unwrap();
        let w = set.first().unwrap();
        assert_eq!(w[0].to_string(), "[0 | 1]");
        assert_eq!(w[1].to_string(), "[1 | 0]");
    }

    #[test]
    fn prime_rows_have_no_additive_strictness() {
        let c = CarrierSpec::new(ScalarDomain::Residues(5), PartitionSpec::trivial(1, 1).unwrap(), EntryOp::Add);
        let set = find_witnesses(&c, WitnessKind::AdditiveInversePair).unwrap();
        assert_eq!(set.count(), BigUint::from(4u32));
    }
}
