use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::partition::{BlockIndex, PartitionSpec};
use crate::scalar::{Scalar, ScalarDomain};

/// An entrywise binary operation on endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryOp {
    Add,
    #[serde(alias = "hadamard")]
    Mul,
    Min,
    Max,
}

impl EntryOp {
    pub fn name(&self) -> &'static str {
        match self {
            EntryOp::Add => "add",
            EntryOp::Mul => "hadamard",
            EntryOp::Min => "min",
            EntryOp::Max => "max",
        }
    }

    pub fn apply(&self, d: &ScalarDomain, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        match self {
            EntryOp::Add => d.add(x, y),
            EntryOp::Mul => d.mul(x, y),
            EntryOp::Min => d.min(x, y),
            EntryOp::Max => d.max(x, y),
        }
    }

    /// Whether matrices over `d` may be combined with this operation.
    pub fn allowed_on(&self, d: &ScalarDomain) -> Result<()> {
        match self {
            EntryOp::Add | EntryOp::Mul if *d == ScalarDomain::UnitRationals => {
                Err(Error::UnsupportedInDomain { op: self.name(), domain: d.to_string() })
            }
            EntryOp::Min | EntryOp::Max if !d.is_ordered() => Err(Error::UnorderedDomain(d.to_string())),
            _ => Ok(()),
        }
    }

    /// The neutral element of the operation in `d`, if the domain has one.
    pub fn identity(&self, d: &ScalarDomain) -> Option<Scalar> {
        match (self, d) {
            (EntryOp::Add, _) | (EntryOp::Max, _) => Some(d.zero()),
            (EntryOp::Mul, _) => Some(d.one()),
            (EntryOp::Min, ScalarDomain::UnitRationals) => Some(d.one()),
            (EntryOp::Min, _) => None,
        }
    }

    /// An element `y` with `x op y = identity`, searched in the whole domain.
    pub fn inverse(&self, d: &ScalarDomain, x: &Scalar) -> Option<Scalar> {
        match self {
            EntryOp::Add => d.neg(x),
            EntryOp::Mul => d.inv(x),
            EntryOp::Min | EntryOp::Max => {
                let e = self.identity(d)?;
                (*x == e).then_some(e)
            }
        }
    }
}

impl FromStr for EntryOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "add" => Ok(EntryOp::Add),
            "hadamard" | "mul" => Ok(EntryOp::Mul),
            "min" => Ok(EntryOp::Min),
            "max" => Ok(EntryOp::Max),
            _ => Err(Error::InvalidCarrier(format!("unknown operation `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixShapeKind {
    RowMatrix,
    ColumnMatrix,
    RowVector,
    ColumnVector,
    General,
}

impl MatrixShapeKind {
    pub fn of(p: &PartitionSpec) -> Self {
        if p.rows() == 1 {
            MatrixShapeKind::RowMatrix
        } else if p.cols() == 1 {
            MatrixShapeKind::ColumnMatrix
        } else if p.row_cuts().is_empty() && !p.col_cuts().is_empty() {
            MatrixShapeKind::RowVector
        } else if p.col_cuts().is_empty() && !p.row_cuts().is_empty() {
            MatrixShapeKind::ColumnVector
        } else {
            MatrixShapeKind::General
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MatrixShapeKind::RowMatrix => "row-matrix",
            MatrixShapeKind::ColumnMatrix => "column-matrix",
            MatrixShapeKind::RowVector => "row-vector",
            MatrixShapeKind::ColumnVector => "column-vector",
            MatrixShapeKind::General => "general",
        }
    }
}

impl fmt::Display for MatrixShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A grid of intervals `[0, a]` with a block partition, stored as endpoints in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuperIntervalMatrix {
    domain: ScalarDomain,
    partition: PartitionSpec,
    endpoints: Vec<Scalar>,
}

impl SuperIntervalMatrix {
    pub fn build(domain: ScalarDomain, partition: PartitionSpec, grid: Vec<Vec<Scalar>>) -> Result<Self> {
        if grid.len() != partition.rows() || grid.iter().any(|r| r.len() != partition.cols()) {
            let found: Vec<usize> = grid.iter().map(|r| r.len()).collect();
            return Err(Error::ShapeMismatch(format!("grid with row lengths {found:?} does not fit {partition}")));
        }
        Self::from_endpoints(domain, partition, grid.into_iter().flatten().collect())
    }

    pub fn from_endpoints(domain: ScalarDomain, partition: PartitionSpec, endpoints: Vec<Scalar>) -> Result<Self> {
        domain.validate()?;
        if endpoints.len() != partition.rows() * partition.cols() {
            return Err(Error::ShapeMismatch(format!("{} endpoints do not fill {partition}", endpoints.len())));
        }
        for e in &endpoints {
            domain.check(e)?;
        }
        Ok(SuperIntervalMatrix { domain, partition, endpoints })
    }

    pub(crate) fn from_parts_unchecked(domain: ScalarDomain, partition: PartitionSpec, endpoints: Vec<Scalar>) -> Self {
        debug_assert_eq!(endpoints.len(), partition.rows() * partition.cols());
        SuperIntervalMatrix { domain, partition, endpoints }
    }

    pub fn filled(domain: ScalarDomain, partition: PartitionSpec, value: Scalar) -> Result<Self> {
        domain.check(&value)?;
        let len = partition.rows() * partition.cols();
        Ok(SuperIntervalMatrix { domain, partition, endpoints: vec![value; len] })
    }

    pub fn zero(domain: ScalarDomain, partition: PartitionSpec) -> Self {
        let len = partition.rows() * partition.cols();
        SuperIntervalMatrix { endpoints: vec![domain.zero(); len], domain, partition }
    }

    pub fn domain(&self) -> ScalarDomain {
        self.domain
    }

    pub fn partition(&self) -> &PartitionSpec {
        &self.partition
    }

    pub fn rows(&self) -> usize {
        self.partition.rows()
    }

    pub fn cols(&self) -> usize {
        self.partition.cols()
    }

    pub fn endpoints(&self) -> &[Scalar] {
        &self.endpoints
    }

    pub fn endpoint(&self, i: usize, j: usize) -> &Scalar {
        &self.endpoints[i * self.cols() + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> Interval {
        Interval::new(self.domain, self.endpoint(i, j).clone()).expect("endpoints are validated on construction")
    }

    pub fn grid(&self) -> Vec<Vec<Scalar>> {
        self.endpoints.chunks(self.cols()).map(|r| r.to_vec()).collect()
    }

    pub fn shape_kind(&self) -> MatrixShapeKind {
        MatrixShapeKind::of(&self.partition)
    }

    pub fn is_zero(&self) -> bool {
        self.endpoints.iter().all(Scalar::is_zero)
    }

    /// The same endpoints under a different partition of the same grid.
    pub fn with_partition(&self, partition: PartitionSpec) -> Result<Self> {
        if (partition.rows(), partition.cols()) != (self.rows(), self.cols()) {
            return Err(Error::ShapeMismatch(format!(
                "cannot repartition {}x{} as {partition}",
                self.rows(),
                self.cols()
            )));
        }
        Ok(SuperIntervalMatrix { domain: self.domain, partition, endpoints: self.endpoints.clone() })
    }

    fn require_same_type(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch { left: self.domain.to_string(), right: other.domain.to_string() });
        }
        if let Some(diff) = self.partition.difference(&other.partition) {
            return Err(Error::TypeMismatch(diff));
        }
        Ok(())
    }

    /// Combines two same-type matrices entry by entry.
    pub fn combine(&self, op: EntryOp, other: &Self) -> Result<Self> {
        self.require_same_type(other)?;
        op.allowed_on(&self.domain)?;
        let endpoints = self
            .endpoints
            .iter()
            .zip(&other.endpoints)
            .map(|(x, y)| op.apply(&self.domain, x, y))
            .collect::<Result<Vec<_>>>()?;
        Ok(SuperIntervalMatrix { domain: self.domain, partition: self.partition.clone(), endpoints })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(EntryOp::Add, other)
    }

    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.combine(EntryOp::Mul, other)
    }

    pub fn min(&self, other: &Self) -> Result<Self> {
        self.combine(EntryOp::Min, other)
    }

    pub fn max(&self, other: &Self) -> Result<Self> {
        self.combine(EntryOp::Max, other)
    }

    pub fn map_endpoints<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&Scalar) -> Result<Scalar>,
    {
        let endpoints = self.endpoints.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        Self::from_endpoints(self.domain, self.partition.clone(), endpoints)
    }

    /// Scales every endpoint by a base scalar `s`.
    pub fn scalar_mul(&self, s: &Scalar) -> Result<Self> {
        let s = self.domain.embed(s)?;
        let d = self.domain;
        let endpoints = self.endpoints.iter().map(|x| d.mul_raw(&s, x)).collect();
        Ok(SuperIntervalMatrix { domain: d, partition: self.partition.clone(), endpoints })
    }

    /// Scales by an interval `[0, s]`, which acts exactly like `s` on endpoints.
    pub fn interval_mul(&self, s: &Interval) -> Result<Self> {
        if s.domain() != self.domain {
            return Err(Error::DomainMismatch { left: self.domain.to_string(), right: s.domain().to_string() });
        }
        self.scalar_mul(s.upper())
    }

    pub fn transpose(&self) -> Self {
        let (m, n) = (self.rows(), self.cols());
        let mut endpoints = Vec::with_capacity(m * n);
        for j in 0..n {
            for i in 0..m {
                endpoints.push(self.endpoints[i * n + j].clone());
            }
        }
        SuperIntervalMatrix { domain: self.domain, partition: self.partition.transpose(), endpoints }
    }

    /// The submatrix under one block, as an unpartitioned matrix.
    pub fn block(&self, b: &BlockIndex) -> Self {
        let mut endpoints = Vec::with_capacity(b.row_range.len() * b.col_range.len());
        for i in b.row_range.clone() {
            for j in b.col_range.clone() {
                endpoints.push(self.endpoint(i, j).clone());
            }
        }
        let partition = PartitionSpec::trivial(b.row_range.len(), b.col_range.len()).expect("blocks are never empty");
        SuperIntervalMatrix { domain: self.domain, partition, endpoints }
    }
}

/// Single-line form: `[8 4 2 | 6 9]`, rows separated by `;` and row cuts by `;;`.
impl fmt::Display for SuperIntervalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        let n = self.cols();
        for i in 0..self.rows() {
            if i > 0 {
                f.write_str(if self.partition.row_cuts().contains(&i) { " ;; " } else { " ; " })?;
            }
            for j in 0..n {
                if j > 0 {
                    f.write_str(if self.partition.col_cuts().contains(&j) { " | " } else { " " })?;
                }
                write!(f, "{}", self.endpoints[i * n + j])?;
            }
        }
        f.write_str("]")
    }
}

impl FromStr for SuperIntervalMatrix {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        crate::format::parse_matrix(text)
    }
}
