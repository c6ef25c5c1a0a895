use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{EntryOp, SuperIntervalMatrix};
use crate::partition::PartitionSpec;
use crate::scalar::{Scalar, ScalarDomain};

use super::carrier::CarrierSpec;
use super::howell::HowellForm;
use super::report::{StructureReport, Verdict, Witness};
use super::{big, Budget, ScalarActionSpec, ScalarSet};

/// Search nodes allowed for one nonnegative combination search.
pub(crate) const COMBINATION_NODES: u64 = 2_000_000;

/// The additive closure of the generators under a scalar action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpanSet {
    /// A subgroup of `(Z_n)^cells`, stored in Howell form.
    Modular { domain: ScalarDomain, partition: PartitionSpec, form: HowellForm },
    /// Nonnegative integer combinations of `vectors`. With `rational_scalars`
    /// the coefficients range over all nonnegative rationals instead.
    Cone { domain: ScalarDomain, partition: PartitionSpec, vectors: Vec<SuperIntervalMatrix>, rational_scalars: bool },
}

pub(crate) fn residue_vec(m: &SuperIntervalMatrix) -> Vec<u64> {
    m.endpoints()
        .iter()
        .map(|x| match x {
            Scalar::Residue(r) => *r,
            _ => unreachable!("residue matrix holds residues"),
        })
        .collect()
}

pub(crate) fn from_residues(d: ScalarDomain, p: &PartitionSpec, v: &[u64]) -> SuperIntervalMatrix {
    SuperIntervalMatrix::from_parts_unchecked(d, p.clone(), v.iter().map(|&r| Scalar::Residue(r)).collect())
}

pub(crate) fn rationals(m: &SuperIntervalMatrix) -> Vec<BigRational> {
    m.endpoints().iter().map(Scalar::to_rational).collect()
}

pub(crate) enum Solution {
    Inconsistent,
    Unique(Vec<BigRational>),
    /// Solvable, but the vectors are linearly dependent.
    Free,
}

/// Solves `sum c_i vectors[i] = target` over the rationals by elimination.
pub(crate) fn unique_coefficients(vectors: &[Vec<BigRational>], target: &[BigRational]) -> Solution {
    let k = vectors.len();
    // one equation per coordinate, unknowns in columns 0..k, target in column k
    let mut rows: Vec<Vec<BigRational>> =
        (0..target.len()).map(|r| vectors.iter().map(|v| v[r].clone()).chain([target[r].clone()]).collect()).collect();
    let mut pivots = Vec::new();
    for col in 0..k {
        let r = pivots.len();
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        rows[r].iter_mut().for_each(|x| *x *= &inv);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                row.iter_mut().zip(&pivot_row).for_each(|(x, y)| *x -= &f * y);
            }
        }
        pivots.push(col);
    }
    if rows[pivots.len()..].iter().any(|row| !row[k].is_zero()) {
        return Solution::Inconsistent;
    }
    if pivots.len() < k {
        return Solution::Free;
    }
    Solution::Unique(rows[..k].iter().map(|row| row[k].clone()).collect())
}

/// Nonnegative integer coefficients with `sum c_i vectors[i] = target`.
/// `Err(())` when the node budget runs out first.
pub(crate) fn nonneg_combination(
    vectors: &[Vec<BigRational>],
    target: &[BigRational],
    nodes: &mut u64,
) -> std::result::Result<Option<Vec<u64>>, ()> {
    fn go(
        vectors: &[Vec<BigRational>],
        i: usize,
        rem: &mut Vec<BigRational>,
        coeffs: &mut Vec<u64>,
        nodes: &mut u64,
    ) -> std::result::Result<bool, ()> {
        if rem.iter().all(Zero::is_zero) {
            return Ok(true);
        }
        if *nodes == 0 {
            return Err(());
        }
        *nodes -= 1;
        // every positive cell must still be reachable
        let reachable =
            rem.iter().enumerate().all(|(cell, r)| r.is_zero() || vectors[i..].iter().any(|w| !w[cell].is_zero()));
        if !reachable || i == vectors.len() {
            return Ok(false);
        }
        let w = &vectors[i];
        let max =
            w.iter().zip(rem.iter()).filter(|(x, _)| !x.is_zero()).map(|(x, r)| (r / x).floor().to_integer()).min();
        let Some(max) = max.and_then(|m| m.to_u64()) else {
            return go(vectors, i + 1, rem, coeffs, nodes);
        };
        for c in (0..=max).rev() {
            let scaled: Vec<BigRational> = w.iter().map(|x| x * BigRational::from_integer(c.into())).collect();
            rem.iter_mut().zip(&scaled).for_each(|(r, s)| *r -= s);
            coeffs[i] = c;
            let found = go(vectors, i + 1, rem, coeffs, nodes);
            rem.iter_mut().zip(&scaled).for_each(|(r, s)| *r += s);
            if found? {
                return Ok(true);
            }
        }
        coeffs[i] = 0;
        Ok(false)
    }
    let mut rem = target.to_vec();
    let mut coeffs = vec![0; vectors.len()];
    Ok(go(vectors, 0, &mut rem, &mut coeffs, nodes)?.then_some(coeffs))
}

pub(crate) fn same_type(generators: &[SuperIntervalMatrix]) -> Result<(ScalarDomain, PartitionSpec)> {
    let first = generators.first().ok_or_else(|| Error::InvalidCarrier("no generators given".to_string()))?;
    for g in &generators[1..] {
        if g.domain() != first.domain() {
            return Err(Error::DomainMismatch { left: first.domain().to_string(), right: g.domain().to_string() });
        }
        if let Some(diff) = first.partition().difference(g.partition()) {
            return Err(Error::TypeMismatch(diff));
        }
    }
    Ok((first.domain(), first.partition().clone()))
}

pub fn span(generators: &[SuperIntervalMatrix], action: &ScalarActionSpec, b: &Budget) -> Result<SpanSet> {
    let (d, p) = same_type(generators)?;
    EntryOp::Add.allowed_on(&d)?;
    let scaled = |gs: &[SuperIntervalMatrix]| -> Result<Vec<SuperIntervalMatrix>> {
        let mut out = Vec::new();
        for g in gs {
            for s in action.values(&d, b) {
                if !s.is_zero() {
                    out.push(g.scalar_mul(&s)?);
                }
            }
        }
        Ok(out)
    };
    match d {
        ScalarDomain::Residues(n) => {
            let vectors = match action.scalars {
                ScalarSet::Domain => generators.to_vec(),
                ScalarSet::Finite(_) => scaled(generators)?,
            };
            let rows: Vec<Vec<u64>> = vectors.iter().map(residue_vec).collect();
            Ok(SpanSet::Modular {
                domain: d,
                partition: p.clone(),
                form: HowellForm::new(n, p.rows() * p.cols(), &rows),
            })
        }
        _ => {
            let rational_scalars = matches!(action.scalars, ScalarSet::Domain) && d != ScalarDomain::NonnegIntegers;
            let vectors = match action.scalars {
                ScalarSet::Domain => generators.iter().filter(|g| !g.is_zero()).cloned().collect(),
                ScalarSet::Finite(_) => scaled(generators)?.into_iter().filter(|g| !g.is_zero()).collect(),
            };
            Ok(SpanSet::Cone { domain: d, partition: p, vectors, rational_scalars })
        }
    }
}

impl SpanSet {
    pub fn domain(&self) -> ScalarDomain {
        match self {
            SpanSet::Modular { domain, .. } | SpanSet::Cone { domain, .. } => *domain,
        }
    }

    pub fn partition(&self) -> &PartitionSpec {
        match self {
            SpanSet::Modular { partition, .. } | SpanSet::Cone { partition, .. } => partition,
        }
    }

    /// `None` for an infinite span.
    pub fn size(&self) -> Option<BigUint> {
        match self {
            SpanSet::Modular { form, .. } => Some(form.cardinality()),
            SpanSet::Cone { vectors, .. } => vectors.is_empty().then(|| big(1)),
        }
    }

    /// `None` when the membership search is out of reach: a rational cone with
    /// linearly dependent generators, or an integer search that exhausts its budget.
    pub fn contains(&self, m: &SuperIntervalMatrix) -> Option<bool> {
        if m.domain() != self.domain() || m.partition() != self.partition() {
            return Some(false);
        }
        match self {
            SpanSet::Modular { form, .. } => Some(form.contains(&residue_vec(m))),
            SpanSet::Cone { vectors, rational_scalars, .. } => {
                if m.is_zero() {
                    return Some(true);
                }
                let vs: Vec<_> = vectors.iter().map(rationals).collect();
                if *rational_scalars {
                    return match unique_coefficients(&vs, &rationals(m)) {
                        Solution::Inconsistent => Some(false),
                        Solution::Unique(c) => Some(c.iter().all(|x| *x >= BigRational::zero())),
                        Solution::Free => None,
                    };
                }
                let mut nodes = COMBINATION_NODES;
                nonneg_combination(&vs, &rationals(m), &mut nodes).ok().map(|c| c.is_some())
            }
        }
    }

    /// Matrices that generate the span additively: Howell rows, or the cone vectors.
    pub fn generators(&self) -> Vec<SuperIntervalMatrix> {
        match self {
            SpanSet::Modular { domain, partition, form } => {
                form.rows().iter().map(|r| from_residues(*domain, partition, r)).collect()
            }
            SpanSet::Cone { vectors, .. } => vectors.clone(),
        }
    }

    /// All elements in lexicographic order, when the span is finite and at most `limit` large.
    pub fn elements(&self, limit: u64) -> Result<Vec<SuperIntervalMatrix>> {
        let size = self.size().ok_or_else(|| Error::BudgetExceeded("the span is infinite".to_string()))?;
        if size > BigUint::from(limit) {
            return Err(Error::BudgetExceeded(format!("span has {size} elements, limit {limit}")));
        }
        let mut out: Vec<SuperIntervalMatrix> = match self {
            SpanSet::Modular { domain, partition, form } => {
                form.elements().map(|v| from_residues(*domain, partition, &v)).collect()
            }
            SpanSet::Cone { domain, partition, .. } => vec![SuperIntervalMatrix::zero(*domain, partition.clone())],
        };
        out.sort_by(|a, b| a.endpoints().cmp(b.endpoints()));
        Ok(out)
    }

    fn least_nonzero(&self, limit: u64) -> Option<SuperIntervalMatrix> {
        match self.elements(limit) {
            Ok(all) => all.into_iter().find(|m| !m.is_zero()),
            Err(_) => self.generators().into_iter().next(),
        }
    }
}

fn modular_parts(c: &CarrierSpec) -> Result<u64> {
    match c.domain {
        ScalarDomain::Residues(n) => Ok(n),
        d => Err(Error::UnsupportedInDomain { op: "subgroup computations", domain: d.to_string() }),
    }
}

/// The carrier as a subgroup, when it is one.
fn carrier_form(c: &CarrierSpec) -> Result<HowellForm> {
    let n = modular_parts(c)?;
    if !c.pool_closed_under(EntryOp::Add) {
        return Err(Error::InvalidCarrier("entry pool is not closed under addition".to_string()));
    }
    let rows: Vec<Vec<u64>> = c.additive_generators().iter().map(residue_vec).collect();
    Ok(HowellForm::new(n, c.partition.rows() * c.partition.cols(), &rows))
}

/// Whether the span of `generators` is an ideal of the carrier under addition and
/// the hadamard product.
pub fn check_ideal(
    c: &CarrierSpec,
    generators: &[SuperIntervalMatrix],
    action: &ScalarActionSpec,
    b: &Budget,
) -> Result<StructureReport> {
    c.validate()?;
    for g in generators {
        c.require_member(g)?;
    }
    let ideal = span(generators, action, b)?;
    let mut report = StructureReport::new(format!("ideal in {}", c.describe()), c.size());
    report.notes.push(match ideal.size() {
        Some(n) => format!("the span has {n} elements"),
        None => "the span is infinite".to_string(),
    });
    report
        .push("additive closure", Verdict::HoldsStructural { argument: "a span is closed under addition".to_string() });
    match &ideal {
        SpanSet::Modular { form, .. } => {
            let inside = match carrier_form(c) {
                Ok(whole) => {
                    let outside = ideal.generators().into_iter().find(|g| !whole.contains(&residue_vec(g)));
                    match outside {
                        None => Verdict::HoldsExhaustive,
                        Some(g) => {
                            Verdict::Fails { witness: Witness::new(vec![g], "span element outside the carrier") }
                        }
                    }
                }
                Err(e) => Verdict::Unknown { reason: e.to_string() },
            };
            report.push("contained in carrier", inside);
            // r * i is bilinear, so additive generators of both sides suffice
            let mut verdict = Verdict::HoldsExhaustive;
            'outer: for r in c.additive_generators() {
                for h in ideal.generators() {
                    let prod = r.hadamard(&h)?;
                    if !form.contains(&residue_vec(&prod)) {
                        verdict = Verdict::Fails { witness: Witness::new(vec![r, h, prod], "product leaves the span") };
                        break 'outer;
                    }
                }
            }
            report.push("absorbs hadamard products", verdict);
        }
        SpanSet::Cone { vectors, .. } => {
            report.push("contained in carrier", Verdict::Unknown { reason: "infinite span".to_string() });
            let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
            let mut verdict = Verdict::HoldsSampled { seed: b.seed, samples: b.sample_count };
            for s in 0..b.sample_count {
                let r = c.random_element(&mut rng);
                let mut i = SuperIntervalMatrix::zero(c.domain, c.partition.clone());
                for v in vectors {
                    let k = rng.random_range(0..4u64);
                    for _ in 0..k {
                        i = i.add(v)?;
                    }
                }
                let prod = r.hadamard(&i)?;
                match ideal.contains(&prod) {
                    Some(true) => {}
                    Some(false) => {
                        verdict = Verdict::Fails {
                            witness: Witness::new(vec![r, i, prod], format!("product leaves the span at sample {s}")),
                        };
                        break;
                    }
                    None => {
                        verdict =
                            Verdict::Unknown { reason: "membership in a rational cone is not decided".to_string() };
                        break;
                    }
                }
            }
            report.push("absorbs hadamard products", verdict);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratingSet {
    pub generators: Vec<SuperIntervalMatrix>,
    #[serde(serialize_with = "super::report::as_display")]
    pub span_size: BigUint,
    #[serde(serialize_with = "super::report::as_display")]
    pub carrier_size: BigUint,
}

/// Greedy generating set: walks the carrier's additive generators in
/// lexicographic order and keeps each one not yet in the span.
pub fn find_generating_set(c: &CarrierSpec, action: &ScalarActionSpec, b: &Budget) -> Result<GeneratingSet> {
    c.validate()?;
    let n = modular_parts(c)?;
    let whole = carrier_form(c)?;
    let carrier_size = whole.cardinality();
    let width = c.partition.rows() * c.partition.cols();
    let mut candidates = c.additive_generators();
    candidates.sort_by(|a, b| a.endpoints().cmp(b.endpoints()));
    let mut chosen: Vec<SuperIntervalMatrix> = Vec::new();
    let mut current = HowellForm::new(n, width, &[]);
    for m in candidates {
        if current.cardinality() == carrier_size {
            break;
        }
        if current.contains(&residue_vec(&m)) {
            continue;
        }
        chosen.push(m);
        current = match span(&chosen, action, b)? {
            SpanSet::Modular { form, .. } => form,
            SpanSet::Cone { .. } => unreachable!("residue spans are modular"),
        };
    }
    Ok(GeneratingSet { generators: chosen, span_size: current.cardinality(), carrier_size })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decomposition {
    /// The parts generate the carrier and meet only in zero.
    Direct,
    /// The parts generate the carrier but overlap.
    Pseudo,
    Incomplete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Overlap {
    pub i: usize,
    pub j: usize,
    pub witness: SuperIntervalMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectSumReport {
    pub report: StructureReport,
    pub decomposition: Decomposition,
    pub overlaps: Vec<Overlap>,
    #[serde(serialize_with = "display_all")]
    pub part_sizes: Vec<BigUint>,
}

fn display_all<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

pub fn check_direct_sum(
    parts: &[Vec<SuperIntervalMatrix>],
    whole: &CarrierSpec,
    action: &ScalarActionSpec,
    b: &Budget,
) -> Result<DirectSumReport> {
    whole.validate()?;
    let n = modular_parts(whole)?;
    let carrier = carrier_form(whole)?;
    let width = whole.partition.rows() * whole.partition.cols();
    let mut forms = Vec::new();
    for gens in parts {
        for g in gens {
            whole.require_member(g)?;
        }
        forms.push(match span(gens, action, b)? {
            SpanSet::Modular { form, .. } => form,
            SpanSet::Cone { .. } => unreachable!("residue spans are modular"),
        });
    }
    let part_sizes: Vec<BigUint> = forms.iter().map(HowellForm::cardinality).collect();
    let mut report = StructureReport::new(format!("direct sum in {}", whole.describe()), Some(carrier.cardinality()));

    let all_rows: Vec<Vec<u64>> = forms.iter().flat_map(|f| f.rows().to_vec()).collect();
    let sum = HowellForm::new(n, width, &all_rows);
    let missing = carrier.rows().iter().find(|r| !sum.contains(r));
    let covers = match missing {
        None => {
            report.push("parts generate the carrier", Verdict::HoldsExhaustive);
            true
        }
        Some(r) => {
            let w = from_residues(whole.domain, &whole.partition, r);
            report.push(
                "parts generate the carrier",
                Verdict::Fails { witness: Witness::new(vec![w], "carrier element outside the sum of the parts") },
            );
            false
        }
    };

    let mut overlaps = Vec::new();
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            let meet = forms[i].intersect(&forms[j]);
            if meet.rows().is_empty() {
                continue;
            }
            let meet = SpanSet::Modular { domain: whole.domain, partition: whole.partition.clone(), form: meet };
            if let Some(witness) = meet.least_nonzero(b.exhaustive_limit) {
                overlaps.push(Overlap { i, j, witness });
            }
        }
    }
    report.push(
        "pairwise intersections are zero",
        match overlaps.first() {
            None => Verdict::HoldsExhaustive,
            Some(o) => Verdict::Fails {
                witness: Witness::new(
                    vec![o.witness.clone()],
                    format!("parts {} and {} share a nonzero element", o.i + 1, o.j + 1),
                ),
            },
        },
    );

    // the sum is direct exactly when its size is the product of the part sizes
    let product = part_sizes.iter().fold(big(1), |acc, s| acc * s);
    let independent = product == sum.cardinality();
    report.push(
        "each part meets the sum of the others in zero",
        if independent {
            Verdict::HoldsExhaustive
        } else {
            Verdict::Fails {
                witness: Witness::new(
                    Vec::new(),
                    format!("part sizes multiply to {product} but the sum has {}", sum.cardinality()),
                ),
            }
        },
    );
    let decomposition = match (covers, independent) {
        (false, _) => Decomposition::Incomplete,
        (true, true) => Decomposition::Direct,
        (true, false) => Decomposition::Pseudo,
    };
    Ok(DirectSumReport { report, decomposition, overlaps, part_sizes })
}
