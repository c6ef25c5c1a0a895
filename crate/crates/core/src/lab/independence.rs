use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SuperIntervalMatrix;
use crate::partition::PartitionSpec;
use crate::scalar::{Scalar, ScalarDomain};

use super::carrier::{CarrierSpec, Pattern};
use super::howell::solve;
use super::report::Verdict;
use super::span::{nonneg_combination, rationals, residue_vec, same_type, span, COMBINATION_NODES};
use super::{big, Budget, ScalarActionSpec, ScalarSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndependenceMode {
    /// No vector is a scalar multiple of another.
    Pairwise,
    /// No vector is a combination of the others.
    Combination,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Dependence {
    /// `vectors[i] = scalar * vectors[j]`
    Multiple { i: usize, j: usize, scalar: Scalar },
    /// `vectors[index] = sum coefficients[j] * vectors[j]`, with a zero coefficient at `index`.
    Combination { index: usize, coefficients: Vec<Scalar> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Independence {
    Independent { exhaustive: bool },
    Dependent { dependence: Dependence },
    Unknown { reason: String },
}

impl Independence {
    pub fn is_independent(&self) -> bool {
        matches!(self, Independence::Independent { .. })
    }

    pub fn is_dependent(&self) -> bool {
        matches!(self, Independence::Dependent { .. })
    }
}

fn combine_all(
    d: ScalarDomain,
    p: &PartitionSpec,
    vectors: &[SuperIntervalMatrix],
    coeffs: &[Scalar],
) -> Result<SuperIntervalMatrix> {
    let mut acc = SuperIntervalMatrix::zero(d, p.clone());
    for (v, c) in vectors.iter().zip(coeffs) {
        acc = acc.add(&v.scalar_mul(c)?)?;
    }
    Ok(acc)
}

fn pairwise(vectors: &[SuperIntervalMatrix], action: &ScalarActionSpec, b: &Budget) -> Result<Independence> {
    let d = vectors[0].domain();
    for i in 0..vectors.len() {
        for j in 0..vectors.len() {
            if i == j {
                continue;
            }
            let (vi, vj) = (&vectors[i], &vectors[j]);
            let candidates: Vec<Scalar> = match d {
                ScalarDomain::Residues(_) => action.values(&d, b),
                _ => match vj.endpoints().iter().position(|x| !x.is_zero()) {
                    None => vec![d.zero()],
                    Some(c) => {
                        let q = vi.endpoints()[c].to_rational() / vj.endpoints()[c].to_rational();
                        match d {
                            ScalarDomain::NonnegIntegers if q.is_integer() => {
                                vec![Scalar::Natural(q.to_integer().to_biguint().unwrap_or_default())]
                            }
                            ScalarDomain::NonnegIntegers => Vec::new(),
                            _ => vec![Scalar::Rational(q)],
                        }
                    }
                },
            };
            for s in candidates {
                if action.admits(&d, &s) && vj.scalar_mul(&s)? == *vi {
                    return Ok(Independence::Dependent { dependence: Dependence::Multiple { i, j, scalar: s } });
                }
            }
        }
    }
    Ok(Independence::Independent { exhaustive: true })
}

/// Rank over the rationals, by elimination.
fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let width = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][col].clone();
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = &m[i][col] / &pivot;
                let pivot_row = m[r].clone();
                m[i].iter_mut().zip(&pivot_row).for_each(|(x, y)| *x -= &f * y);
            }
        }
        r += 1;
    }
    r
}

/// Generators for the additive closure of `others` under the action, each
/// tagged with the vector and scalar it came from.
fn tagged(
    others: &[(usize, &SuperIntervalMatrix)],
    action: &ScalarActionSpec,
    d: ScalarDomain,
    b: &Budget,
) -> Result<Vec<(usize, Scalar, SuperIntervalMatrix)>> {
    let mut out = Vec::new();
    for &(j, v) in others {
        match &action.scalars {
            ScalarSet::Domain => out.push((j, d.one(), v.clone())),
            ScalarSet::Finite(_) => {
                for s in action.values(&d, b) {
                    if !s.is_zero() {
                        out.push((j, s.clone(), v.scalar_mul(&s)?));
                    }
                }
            }
        }
    }
    Ok(out)
}

enum Found {
    Yes(Vec<Scalar>),
    No,
    OutOfBudget,
}

fn combination_for(
    vectors: &[SuperIntervalMatrix],
    index: usize,
    action: &ScalarActionSpec,
    b: &Budget,
) -> Result<Found> {
    let d = vectors[0].domain();
    let others: Vec<(usize, &SuperIntervalMatrix)> = vectors.iter().enumerate().filter(|(j, _)| *j != index).collect();
    let target = &vectors[index];
    let mut coeffs = vec![d.zero(); vectors.len()];
    if target.is_zero() {
        return Ok(Found::Yes(coeffs));
    }
    let gens = tagged(&others, action, d, b)?;
    match d {
        ScalarDomain::Residues(n) => {
            let rows: Vec<Vec<u64>> = gens.iter().map(|(_, _, g)| residue_vec(g)).collect();
            let Some(k) = solve(n, &rows, &residue_vec(target)) else {
                return Ok(Found::No);
            };
            for ((j, s, _), k) in gens.iter().zip(k) {
                let term = d.mul(s, &Scalar::Residue(k))?;
                coeffs[*j] = d.add(&coeffs[*j], &term)?;
            }
            Ok(Found::Yes(coeffs))
        }
        _ => {
            let vs: Vec<Vec<BigRational>> = gens.iter().map(|(_, _, g)| rationals(g)).collect();
            let goal = rationals(target);
            let rational = matches!(action.scalars, ScalarSet::Domain) && d != ScalarDomain::NonnegIntegers;
            if rational {
                let mut with = vs.clone();
                with.push(goal.clone());
                if rank(&with) > rank(&vs) {
                    return Ok(Found::No);
                }
            }
            let denominators = if rational { b.coeff_bound.max(1) } else { 1 };
            let mut nodes = COMBINATION_NODES;
            for q in 1..=denominators {
                let scaled: Vec<BigRational> =
                    goal.iter().map(|x| x * BigRational::from_integer(BigInt::from(q))).collect();
                match nonneg_combination(&vs, &scaled, &mut nodes) {
                    Err(()) => return Ok(Found::OutOfBudget),
                    Ok(None) => {}
                    Ok(Some(k)) => {
                        for ((j, s, _), k) in gens.iter().zip(k) {
                            let c = BigRational::new(BigInt::from(k), BigInt::from(q)) * s.to_rational();
                            let c = match d {
                                ScalarDomain::NonnegIntegers => {
                                    Scalar::Natural(c.to_integer().to_biguint().unwrap_or_default())
                                }
                                _ => Scalar::Rational(c),
                            };
                            coeffs[*j] = d.add(&coeffs[*j], &c)?;
                        }
                        return Ok(Found::Yes(coeffs));
                    }
                }
            }
            Ok(if rational { Found::OutOfBudget } else { Found::No })
        }
    }
}

pub fn is_independent(
    vectors: &[SuperIntervalMatrix],
    action: &ScalarActionSpec,
    mode: IndependenceMode,
    b: &Budget,
) -> Result<Independence> {
    let (d, p) = same_type(vectors)?;
    if mode == IndependenceMode::Pairwise {
        return pairwise(vectors, action, b);
    }
    crate::matrix::EntryOp::Add.allowed_on(&d)?;
    let mut undecided = None;
    for index in 0..vectors.len() {
        match combination_for(vectors, index, action, b)? {
            Found::Yes(coefficients) => {
                debug_assert_eq!(combine_all(d, &p, vectors, &coefficients)?, vectors[index]);
                return Ok(Independence::Dependent { dependence: Dependence::Combination { index, coefficients } });
            }
            Found::No => {}
            Found::OutOfBudget => {
                undecided.get_or_insert(index);
            }
        }
    }
    Ok(match undecided {
        None => Independence::Independent { exhaustive: true },
        Some(i) => Independence::Unknown {
            reason: format!("no combination for vector {} found within the search bounds", i + 1),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisDemo {
    /// One unit element per free group of the carrier.
    pub basis: Vec<SuperIntervalMatrix>,
    pub larger: Vec<SuperIntervalMatrix>,
    /// The larger set is independent and has more elements than the basis.
    pub independent: bool,
    pub basis_spans_slice: Verdict,
    pub basis_independent: Independence,
    pub larger_independent: Independence,
    /// Least carrier element (within the pool slice) outside the span of `larger`.
    pub outside_witness: Option<SuperIntervalMatrix>,
    #[serde(serialize_with = "super::report::as_display")]
    pub slice_size: BigUint,
}

/// Compares the unit basis of a carrier with a larger family: the family can be
/// independent while failing to span.
pub fn independent_exceeds_basis(
    c: &CarrierSpec,
    action: &ScalarActionSpec,
    larger: &[SuperIntervalMatrix],
    b: &Budget,
) -> Result<BasisDemo> {
    c.validate()?;
    for v in larger {
        c.require_member(v)?;
    }
    let k = c.groups().len();
    let basis: Vec<SuperIntervalMatrix> = (0..k)
        .map(|g| {
            let mut values = vec![c.domain.zero(); k];
            values[g] = c.domain.one();
            c.element(&values)
        })
        .collect();
    let mode = IndependenceMode::Combination;
    let basis_independent = is_independent(&basis, action, mode, b)?;
    let larger_independent = is_independent(larger, action, mode, b)?;
    let basis_spans_slice = if c.entry_pool.is_none() && matches!(action.scalars, ScalarSet::Domain) {
        Verdict::HoldsStructural {
            argument: "every element is the sum of its group values times the unit elements".to_string(),
        }
    } else {
        let basis_span = span(&basis, action, b)?;
        match c.elements().find(|m| basis_span.contains(m) != Some(true)) {
            None => Verdict::HoldsExhaustive,
            Some(m) => Verdict::Fails {
                witness: super::report::Witness::new(vec![m], "element outside the span of the basis"),
            },
        }
    };
    let larger_span = span(larger, action, b)?;
    let slice_size = big(c.pool().len()).pow(k as u32);
    if slice_size > BigUint::from(b.exhaustive_limit) {
        return Err(Error::BudgetExceeded(format!("{slice_size} elements in the pool slice")));
    }
    let outside_witness = c.elements().find(|m| larger_span.contains(m) == Some(false));
    Ok(BasisDemo {
        independent: larger_independent.is_independent() && larger.len() > basis.len(),
        basis,
        larger: larger.to_vec(),
        basis_spans_slice,
        basis_independent,
        larger_independent,
        outside_witness,
        slice_size,
    })
}

/// The built-in five-element family on the 1x4 natural carrier with column cuts 1 and 3.
pub fn independent_exceeds_basis_demo(c: &CarrierSpec, b: &Budget) -> Result<BasisDemo> {
    let expected = PartitionSpec::new(1, 4, vec![], vec![1, 3])?;
    if c.domain != ScalarDomain::NonnegIntegers || c.partition != expected || c.pattern != Pattern::Full {
        return Err(Error::InvalidCarrier(format!("the built-in family lives on the full nat {expected} carrier")));
    }
    let rows: [[u64; 4]; 5] = [[1, 1, 3, 0], [0, 4, 7, 0], [0, 0, 0, 5], [1, 0, 0, 2], [0, 9, 0, 13]];
    let larger = rows
        .iter()
        .map(|r| {
            SuperIntervalMatrix::from_endpoints(c.domain, expected.clone(), r.iter().map(|&x| Scalar::nat(x)).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    independent_exceeds_basis(c, &ScalarActionSpec::default(), &larger, b)
}
