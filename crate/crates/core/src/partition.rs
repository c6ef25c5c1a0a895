use std::fmt;
use std::ops::Range;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row and column cut positions of an `rows x cols` grid. A cut at `k` falls
/// between index `k - 1` and `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartitionSpec {
    rows: usize,
    cols: usize,
    row_cuts: Vec<usize>,
    col_cuts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockIndex {
    pub block_row: usize,
    pub block_col: usize,
    pub row_range: Range<usize>,
    pub col_range: Range<usize>,
}

fn check_cuts(cuts: &[usize], len: usize, what: &str) -> Result<()> {
    for w in cuts.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidPartition(format!("{what} cuts {cuts:?} are not strictly increasing")));
        }
    }
    if let Some(&bad) = cuts.iter().find(|&&c| c == 0 || c >= len) {
        return Err(Error::InvalidPartition(format!("{what} cut {bad} is not strictly inside 0..{len}")));
    }
    Ok(())
}

fn bands(cuts: &[usize], len: usize) -> Vec<Range<usize>> {
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(0);
    edges.extend_from_slice(cuts);
    edges.push(len);
    edges.windows(2).map(|w| w[0]..w[1]).collect()
}

impl PartitionSpec {
    pub fn new(rows: usize, cols: usize, row_cuts: Vec<usize>, col_cuts: Vec<usize>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidPartition(format!("empty grid {rows}x{cols}")));
        }
        check_cuts(&row_cuts, rows, "row")?;
        check_cuts(&col_cuts, cols, "column")?;
        Ok(PartitionSpec { rows, cols, row_cuts, col_cuts })
    }

    pub fn trivial(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, Vec::new(), Vec::new())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_cuts(&self) -> &[usize] {
        &self.row_cuts
    }

    pub fn col_cuts(&self) -> &[usize] {
        &self.col_cuts
    }

    pub fn is_trivial(&self) -> bool {
        self.row_cuts.is_empty() && self.col_cuts.is_empty()
    }

    pub fn row_bands(&self) -> Vec<Range<usize>> {
        bands(&self.row_cuts, self.rows)
    }

    pub fn col_bands(&self) -> Vec<Range<usize>> {
        bands(&self.col_cuts, self.cols)
    }

    /// Blocks in row-major block order.
    pub fn blocks(&self) -> Vec<BlockIndex> {
        let cols = self.col_bands();
        self.row_bands()
            .into_iter()
            .enumerate()
            .flat_map(|(i, r)| {
                cols.iter().enumerate().map(move |(j, c)| BlockIndex {
                    block_row: i,
                    block_col: j,
                    row_range: r.clone(),
                    col_range: c.clone(),
                })
            })
            .collect()
    }

    pub fn transpose(&self) -> PartitionSpec {
        PartitionSpec {
            rows: self.cols,
            cols: self.rows,
            row_cuts: self.col_cuts.clone(),
            col_cuts: self.row_cuts.clone(),
        }
    }

    pub fn same_type(&self, other: &PartitionSpec) -> bool {
        self == other
    }

    /// Explains the first difference between two specs, or `None` when they agree.
    pub fn difference(&self, other: &PartitionSpec) -> Option<String> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            Some(format!("dimensions {}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols))
        } else if self.row_cuts != other.row_cuts {
            Some(format!("row cuts {:?} vs {:?}", self.row_cuts, other.row_cuts))
        } else if self.col_cuts != other.col_cuts {
            Some(format!("column cuts {:?} vs {:?}", self.col_cuts, other.col_cuts))
        } else {
            None
        }
    }
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |c: &[usize]| c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}x{} rows{{{}}} cols{{{}}}", self.rows, self.cols, list(&self.row_cuts), list(&self.col_cuts))
    }
}

pub fn transpose_partition(p: &PartitionSpec) -> PartitionSpec {
    p.transpose()
}

pub fn same_type(p: &PartitionSpec, q: &PartitionSpec) -> bool {
    p.same_type(q)
}

fn cuts_from_mask(mask: u64, len: usize) -> Vec<usize> {
    (0..len.saturating_sub(1)).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// Every way to cut an `m x n` grid. Cut sets are read off binary counters with
/// the row counter outermost, so the order is stable.
pub fn enumerate_partitions(m: usize, n: usize, include_trivial: bool) -> Result<Vec<PartitionSpec>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidPartition(format!("empty grid {m}x{n}")));
    }
    if m + n > 42 {
        return Err(Error::BudgetExceeded(format!("{m}x{n} has too many partitions to list")));
    }
    let row_masks = 1u64 << (m - 1);
    let col_masks = 1u64 << (n - 1);
    let mut out = Vec::new();
    for r in 0..row_masks {
        for c in 0..col_masks {
            if r == 0 && c == 0 && !include_trivial {
                continue;
            }
            out.push(PartitionSpec {
                rows: m,
                cols: n,
                row_cuts: cuts_from_mask(r, m),
                col_cuts: cuts_from_mask(c, n),
            });
        }
    }
    Ok(out)
}

/// Number of partitions with at least one cut: `2^(m-1) * 2^(n-1) - 1`.
pub fn count_proper_partitions(m: usize, n: usize) -> Result<BigUint> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidPartition(format!("empty grid {m}x{n}")));
    }
    Ok((BigUint::one() << (m - 1 + n - 1)) - BigUint::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_cuts() {
        assert!(PartitionSpec::new(3, 3, vec![0], vec![]).is_err());
        assert!(PartitionSpec::new(3, 3, vec![3], vec![]).is_err());
        assert!(PartitionSpec::new(3, 3, vec![], vec![2, 1]).is_err());
        assert!(PartitionSpec::new(3, 3, vec![1, 1], vec![]).is_err());
        assert!(PartitionSpec::new(0, 3, vec![], vec![]).is_err());
    }

    #[test]
    fn enumeration_order_is_binary_counter_rows_outer() {
        let all = enumerate_partitions(2, 3, true).unwrap();
        let cuts: Vec<_> = all.iter().map(|p| (p.row_cuts().to_vec(), p.col_cuts().to_vec())).collect();
        assert_eq!(
            cuts,
            vec![
                (vec![], vec![]),
                (vec![], vec![1]),
                (vec![], vec![2]),
                (vec![], vec![1, 2]),
                (vec![1], vec![]),
                (vec![1], vec![1]),
                (vec![1], vec![2]),
                (vec![1], vec![1, 2]),
            ]
        );
    }

    #[test]
    fn one_by_one_has_only_the_trivial_spec() {
        assert!(enumerate_partitions(1, 1, false).unwrap().is_empty());
        assert_eq!(enumerate_partitions(1, 1, true).unwrap().len(), 1);
        assert_eq!(count_proper_partitions(1, 1).unwrap(), BigUint::from(0u32));
    }
}
