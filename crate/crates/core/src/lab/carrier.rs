use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{EntryOp, SuperIntervalMatrix};
use crate::partition::PartitionSpec;
use crate::scalar::{Scalar, ScalarDomain};

/// Which cells of a carrier element are free. Each group of cells shares one
/// free value; cells outside every group are fixed at zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pattern {
    Full,
    Constant,
    Support(Vec<(usize, usize)>),
    Groups(Vec<Vec<(usize, usize)>>),
}

/// A set of same-type matrices: a partition, a cell pattern and an entry pool.
///
/// With no explicit pool a finite domain contributes all of its elements and an
/// infinite one is treated as unbounded, with `ScalarDomain::default_pool` used
/// only as a sampling source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CarrierSpec {
    #[serde(serialize_with = "crate::lab::report::as_display")]
    pub domain: ScalarDomain,
    pub partition: PartitionSpec,
    pub pattern: Pattern,
    pub entry_pool: Option<Vec<Scalar>>,
    pub op: EntryOp,
}

impl CarrierSpec {
    pub fn new(domain: ScalarDomain, partition: PartitionSpec, op: EntryOp) -> Self {
        CarrierSpec { domain, partition, pattern: Pattern::Full, entry_pool: None, op }
    }

    pub fn with_pattern(mut self, pattern: Pattern) -> Self {
        self.pattern = pattern;
        self
    }

    pub fn with_pool(mut self, pool: Vec<Scalar>) -> Self {
        self.entry_pool = Some(pool);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        self.op.allowed_on(&self.domain)?;
        if let Some(pool) = &self.entry_pool {
            if pool.is_empty() {
                return Err(Error::CarrierEmpty);
            }
            for s in pool {
                self.domain.check(s)?;
            }
        }
        let mut seen = BTreeSet::new();
        for cell in self.cells_in_groups() {
            let (i, j) = cell;
            if i >= self.partition.rows() || j >= self.partition.cols() {
                return Err(Error::InvalidCarrier(format!("cell ({i},{j}) lies outside {}", self.partition)));
            }
            if !seen.insert(cell) {
                return Err(Error::InvalidCarrier(format!("cell ({i},{j}) is listed twice")));
            }
        }
        Ok(())
    }

    fn cells_in_groups(&self) -> Vec<(usize, usize)> {
        match &self.pattern {
            Pattern::Full | Pattern::Constant => Vec::new(),
            Pattern::Support(cells) => cells.clone(),
            Pattern::Groups(groups) => groups.iter().flatten().copied().collect(),
        }
    }

    /// Free-value groups as flat cell indices, ordered by their first cell so
    /// that lexicographic order on values matches lexicographic order on grids.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let n = self.partition.cols();
        let len = self.partition.rows() * n;
        let mut groups: Vec<Vec<usize>> = match &self.pattern {
            Pattern::Full => (0..len).map(|c| vec![c]).collect(),
            Pattern::Constant => vec![(0..len).collect()],
            Pattern::Support(cells) => cells.iter().map(|&(i, j)| vec![i * n + j]).collect(),
            Pattern::Groups(gs) => {
                gs.iter().filter(|g| !g.is_empty()).map(|g| g.iter().map(|&(i, j)| i * n + j).collect()).collect()
            }
        };
        for g in &mut groups {
            g.sort_unstable();
        }
        groups.sort_by_key(|g| g[0]);
        groups
    }

    pub fn has_zero_cells(&self) -> bool {
        let covered: usize = self.groups().iter().map(Vec::len).sum();
        covered < self.partition.rows() * self.partition.cols()
    }

    /// The values free cells draw from, sorted and deduplicated.
    pub fn pool(&self) -> Vec<Scalar> {
        let raw = self.entry_pool.clone().unwrap_or_else(|| self.domain.default_pool());
        raw.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// True when the carrier has finitely many elements.
    pub fn is_finite(&self) -> bool {
        self.entry_pool.is_some() || self.domain.is_finite() || self.groups().is_empty()
    }

    pub fn size(&self) -> Option<BigUint> {
        self.is_finite().then(|| BigUint::from(self.pool().len()).pow(self.groups().len() as u32))
    }

    /// Whether the pool is closed under `op`, so the finite carrier is closed too.
    pub fn pool_closed_under(&self, op: EntryOp) -> bool {
        let pool = self.pool();
        let set: BTreeSet<&Scalar> = pool.iter().collect();
        pool.iter()
            .all(|x| pool.iter().all(|y| op.apply(&self.domain, x, y).map(|z| set.contains(&z)).unwrap_or(false)))
    }

    /// Closed finite carrier small enough to scan, so verdicts can be exhaustive.
    pub fn scannable(&self, ops: &[EntryOp], limit: u64) -> bool {
        self.is_finite()
            && self.size().is_some_and(|s| s <= BigUint::from(limit))
            && (self.groups().is_empty() || ops.iter().all(|&op| self.pool_closed_under(op)))
    }

    pub fn element(&self, values: &[Scalar]) -> SuperIntervalMatrix {
        let groups = self.groups();
        debug_assert_eq!(values.len(), groups.len());
        let mut endpoints = vec![self.domain.zero(); self.partition.rows() * self.partition.cols()];
        for (g, v) in groups.iter().zip(values) {
            for &c in g {
                endpoints[c] = v.clone();
            }
        }
        SuperIntervalMatrix::from_parts_unchecked(self.domain, self.partition.clone(), endpoints)
    }

    /// The element whose free values are all `pool[0]` except the last, which is `last`.
    pub(crate) fn element_with_last(&self, last: &Scalar) -> SuperIntervalMatrix {
        let k = self.groups().len();
        let base = self.pool()[0].clone();
        let mut values = vec![base; k];
        if let Some(v) = values.last_mut() {
            *v = last.clone();
        }
        self.element(&values)
    }

    /// The free values of `m`, or `None` when `m` is not in the carrier.
    pub fn values_of(&self, m: &SuperIntervalMatrix) -> Option<Vec<Scalar>> {
        if m.domain() != self.domain || m.partition() != &self.partition {
            return None;
        }
        let e = m.endpoints();
        let groups = self.groups();
        let mut free = vec![false; e.len()];
        let mut values = Vec::with_capacity(groups.len());
        for g in &groups {
            let v = &e[g[0]];
            if g.iter().any(|&c| &e[c] != v) {
                return None;
            }
            g.iter().for_each(|&c| free[c] = true);
            values.push(v.clone());
        }
        if e.iter().zip(&free).any(|(x, &f)| !f && !x.is_zero()) {
            return None;
        }
        if let Some(pool) = &self.entry_pool {
            if values.iter().any(|v| !pool.contains(v)) {
                return None;
            }
        }
        Some(values)
    }

    pub fn contains(&self, m: &SuperIntervalMatrix) -> bool {
        self.values_of(m).is_some()
    }

    pub fn require_member(&self, m: &SuperIntervalMatrix) -> Result<()> {
        if self.contains(m) {
            Ok(())
        } else {
            Err(Error::GeneratorOutsideCarrier(m.to_string()))
        }
    }

    pub fn random_element(&self, rng: &mut ChaCha8Rng) -> SuperIntervalMatrix {
        let pool = self.pool();
        let values: Vec<Scalar> =
            (0..self.groups().len()).map(|_| pool[rng.random_range(0..pool.len())].clone()).collect();
        self.element(&values)
    }

    /// Elements in lexicographic order of their grids.
    pub fn elements(&self) -> impl Iterator<Item = SuperIntervalMatrix> + '_ {
        let pool = self.pool();
        let k = self.groups().len();
        let mut idx = Some(vec![0usize; k]);
        std::iter::from_fn(move || {
            let cur = idx.take()?;
            let values: Vec<Scalar> = cur.iter().map(|&i| pool[i].clone()).collect();
            let mut next = cur;
            let mut pos = k;
            while pos > 0 {
                pos -= 1;
                next[pos] += 1;
                if next[pos] < pool.len() {
                    idx = Some(next);
                    break;
                }
                next[pos] = 0;
            }
            Some(self.element(&values))
        })
    }

    /// Additive generators `e_g * p`: value `p` on group `g`, zero elsewhere.
    pub(crate) fn additive_generators(&self) -> Vec<SuperIntervalMatrix> {
        let k = self.groups().len();
        let zero = self.domain.zero();
        let mut out = Vec::new();
        for g in 0..k {
            for p in self.pool().iter().filter(|p| !p.is_zero()) {
                let mut values = vec![zero.clone(); k];
                values[g] = p.clone();
                out.push(self.element(&values));
            }
        }
        out
    }

    pub fn describe(&self) -> String {
        let pattern = match &self.pattern {
            Pattern::Full => "full".to_string(),
            Pattern::Constant => "constant".to_string(),
            Pattern::Support(c) => format!("support {c:?}"),
            Pattern::Groups(g) => format!("{} groups", g.len()),
        };
        let size = self.size().map_or_else(|| "infinite".to_string(), |s| s.to_string());
        format!("{} {} {pattern}, op {}, size {size}", self.domain, self.partition, self.op.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn carrier(pattern: Pattern) -> CarrierSpec {
        let p = PartitionSpec::new(1, 4, vec![], vec![2]).unwrap();
        CarrierSpec::new(ScalarDomain::Residues(3), p, EntryOp::Add).with_pattern(pattern)
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let c = carrier(Pattern::Support(vec![(0, 2), (0, 0)]));
        let all: Vec<_> = c.elements().collect();
        assert_eq!(all.len(), 9);
        let mut sorted = all.clone();
        sorted.sort_by(|a, b| a.endpoints().cmp(b.endpoints()));
        assert_eq!(all, sorted);
        assert_eq!(all[1].to_string(), "[0 0 | 1 0]");
    }

    #[test]
    fn membership_follows_the_pattern() {
        let c = carrier(Pattern::Constant);
        assert!(c.contains(&"domain: z3\n2 2 | 2 2".parse().unwrap()));
        assert!(!c.contains(&"domain: z3\n2 2 | 2 1".parse().unwrap()));
        assert_eq!(c.size().unwrap(), BigUint::from(3u32));
        let s = carrier(Pattern::Support(vec![(0, 1)]));
        assert!(!s.contains(&"domain: z3\n1 0 | 0 0".parse().unwrap()));
        assert!(s.has_zero_cells());
    }

    #[test]
    fn rejects_bad_cells() {
        assert!(carrier(Pattern::Support(vec![(1, 0)])).validate().is_err());
        assert!(carrier(Pattern::Support(vec![(0, 1), (0, 1)])).validate().is_err());
        assert!(carrier(Pattern::Full).with_pool(vec![]).validate().is_err());
    }
}
