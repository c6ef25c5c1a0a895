//! Exact arithmetic on super interval matrices: grids of intervals `[0, a]`
//! carrying a block partition, over residues, naturals, nonnegative rationals
//! or the rational unit interval.

pub mod block;
pub mod carrier_file;
pub mod error;
pub mod format;
pub mod fuzzy;
pub mod interval;
pub mod lab;
pub mod matrix;
pub mod partition;
pub mod scalar;

pub use block::{conformability, extended_product, gram, major_product, outer_product, ConformabilityReport};
pub use carrier_file::CarrierFile;
pub use error::{Error, Result};
pub use format::{parse_matrix, render_matrix, RenderFormat};
pub use fuzzy::{
    audit_eta, fuzzify, fuzzy_max, fuzzy_min, scalar_max, scalar_min, scalar_prod, EtaAudit, EtaMap, FuzzySuperMatrix,
};
pub use interval::Interval;
pub use matrix::{EntryOp, MatrixShapeKind, SuperIntervalMatrix};
pub use partition::{count_proper_partitions, enumerate_partitions, BlockIndex, PartitionSpec};
pub use scalar::{Scalar, ScalarDomain};
