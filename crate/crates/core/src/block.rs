use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SuperIntervalMatrix;
use crate::partition::PartitionSpec;
use crate::scalar::{Scalar, ScalarDomain};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConformabilityReport {
    pub flat_ok: bool,
    pub block_ok: bool,
    pub detail: String,
}

pub fn conformability(a: &SuperIntervalMatrix, b: &SuperIntervalMatrix) -> ConformabilityReport {
    let flat_ok = a.cols() == b.rows();
    let block_ok = flat_ok && a.partition().col_cuts() == b.partition().row_cuts();
    let detail = if !flat_ok {
        format!("left has {} columns but right has {} rows", a.cols(), b.rows())
    } else if !block_ok {
        format!(
            "left column cuts {:?} differ from right row cuts {:?}",
            a.partition().col_cuts(),
            b.partition().row_cuts()
        )
    } else {
        "conformable".to_string()
    };
    ConformabilityReport { flat_ok, block_ok, detail }
}

fn product_domain(a: &SuperIntervalMatrix, b: &SuperIntervalMatrix) -> Result<ScalarDomain> {
    if a.domain() != b.domain() {
        return Err(Error::DomainMismatch { left: a.domain().to_string(), right: b.domain().to_string() });
    }
    if a.domain() == ScalarDomain::UnitRationals {
        return Err(Error::UnsupportedInDomain { op: "matrix product", domain: a.domain().to_string() });
    }
    Ok(a.domain())
}

fn result_partition(a: &SuperIntervalMatrix, b: &SuperIntervalMatrix) -> PartitionSpec {
    PartitionSpec::new(a.rows(), b.cols(), a.partition().row_cuts().to_vec(), b.partition().col_cuts().to_vec())
        .expect("outer cut sets come from valid partitions")
}

/// Endpoint arithmetic used by the product kernels. Residue rings get a
/// machine-word version; every other domain goes through `Scalar`.
trait Semiring {
    type T: Clone;
    fn zero(&self) -> Self::T;
    fn add(&self, x: &Self::T, y: &Self::T) -> Self::T;
    fn mul(&self, x: &Self::T, y: &Self::T) -> Self::T;
}

struct Modular(u64);

impl Semiring for Modular {
    type T = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn add(&self, x: &u64, y: &u64) -> u64 {
        ((*x as u128 + *y as u128) % self.0 as u128) as u64
    }
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        ((*x as u128 * *y as u128) % self.0 as u128) as u64
    }
}

impl Semiring for ScalarDomain {
    type T = Scalar;
    fn zero(&self) -> Scalar {
        ScalarDomain::zero(self)
    }
    fn add(&self, x: &Scalar, y: &Scalar) -> Scalar {
        self.add_raw(x, y)
    }
    fn mul(&self, x: &Scalar, y: &Scalar) -> Scalar {
        self.mul_raw(x, y)
    }
}

fn residues(xs: &[Scalar]) -> Vec<u64> {
    xs.iter()
        .map(|x| match x {
            Scalar::Residue(r) => *r,
            _ => unreachable!("residue domain holds residues"),
        })
        .collect()
}

/// Result block `(i, k)` accumulates `A(i, j) * B(j, k)` over the shared block
/// index `j`, left to right.
#[allow(clippy::too_many_arguments)]
fn block_kernel<R: Semiring>(
    r: &R,
    a: &[R::T],
    b: &[R::T],
    n: usize,
    p: usize,
    row_bands: &[Range<usize>],
    shared: &[Range<usize>],
    col_bands: &[Range<usize>],
) -> Vec<R::T> {
    let m = row_bands.last().map_or(0, |b| b.end);
    let mut out = vec![r.zero(); m * p];
    for rows in row_bands {
        for cols in col_bands {
            for band in shared {
                for i in rows.clone() {
                    for k in cols.clone() {
                        let mut cell = r.zero();
                        for j in band.clone() {
                            cell = r.add(&cell, &r.mul(&a[i * n + j], &b[j * p + k]));
                        }
                        let slot = &mut out[i * p + k];
                        *slot = r.add(slot, &cell);
                    }
                }
            }
        }
    }
    out
}

fn run_kernel(
    d: ScalarDomain,
    a: &SuperIntervalMatrix,
    b: &SuperIntervalMatrix,
    row_bands: &[Range<usize>],
    shared: &[Range<usize>],
    col_bands: &[Range<usize>],
) -> Vec<Scalar> {
    let (n, p) = (a.cols(), b.cols());
    match d {
        ScalarDomain::Residues(modulus) => {
            let (ae, be) = (residues(a.endpoints()), residues(b.endpoints()));
            block_kernel(&Modular(modulus), &ae, &be, n, p, row_bands, shared, col_bands)
                .into_iter()
                .map(Scalar::Residue)
                .collect()
        }
        _ => block_kernel(&d, a.endpoints(), b.endpoints(), n, p, row_bands, shared, col_bands),
    }
}

pub fn major_product(a: &SuperIntervalMatrix, b: &SuperIntervalMatrix) -> Result<SuperIntervalMatrix> {
    let d = product_domain(a, b)?;
    if a.cols() != b.rows() {
        return Err(Error::NotConformable(conformability(a, b).detail));
    }
    if a.partition().col_cuts() != b.partition().row_cuts() {
        return Err(Error::PartitionMismatch(conformability(a, b).detail));
    }
    let out = run_kernel(d, a, b, &a.partition().row_bands(), &a.partition().col_bands(), &b.partition().col_bands());
    Ok(SuperIntervalMatrix::from_parts_unchecked(d, result_partition(a, b), out))
}

/// Ordinary product of the endpoint grids, re-partitioned by the outer cut sets.
pub fn extended_product(a: &SuperIntervalMatrix, b: &SuperIntervalMatrix) -> Result<SuperIntervalMatrix> {
    let d = product_domain(a, b)?;
    if a.cols() != b.rows() {
        return Err(Error::NotConformable(conformability(a, b).detail));
    }
    // one band per axis: the whole grid is a single block
    #[allow(clippy::single_range_in_vec_init)]
    let out = run_kernel(d, a, b, &[0..a.rows()], &[0..a.cols()], &[0..b.cols()]);
    Ok(SuperIntervalMatrix::from_parts_unchecked(d, result_partition(a, b), out))
}

pub fn outer_product(col: &SuperIntervalMatrix, row: &SuperIntervalMatrix) -> Result<SuperIntervalMatrix> {
    if col.cols() != 1 || row.rows() != 1 {
        return Err(Error::ShapeMismatch(format!(
            "outer product needs a column and a row, got {}x{} and {}x{}",
            col.rows(),
            col.cols(),
            row.rows(),
            row.cols()
        )));
    }
    major_product(col, row)
}

/// `Aᵗ A` through the block product; the shared cut set is always the row cuts of `A`.
pub fn gram(a: &SuperIntervalMatrix) -> Result<SuperIntervalMatrix> {
    major_product(&a.transpose(), a)
}
