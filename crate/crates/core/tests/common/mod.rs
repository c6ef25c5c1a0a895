//! Reference implementations written without the library's kernels, used as
//! oracles by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::BigRational;
use superint::{PartitionSpec, Scalar, ScalarDomain, SuperIntervalMatrix};

pub fn m(text: &str) -> SuperIntervalMatrix {
    text.parse().unwrap_or_else(|e| panic!("{e}: {text}"))
}

/// Builds a matrix from integer rows.
pub fn ints(d: ScalarDomain, rows: &[&[u64]], row_cuts: &[usize], col_cuts: &[usize]) -> SuperIntervalMatrix {
    let p = PartitionSpec::new(rows.len(), rows[0].len(), row_cuts.to_vec(), col_cuts.to_vec()).unwrap();
    let grid = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| match d {
                    ScalarDomain::Residues(_) => Scalar::residue(x),
                    ScalarDomain::NonnegIntegers => Scalar::nat(x),
                    _ => Scalar::ratio(x, 1),
                })
                .collect()
        })
        .collect();
    SuperIntervalMatrix::build(d, p, grid).unwrap()
}

pub fn grid_i128(a: &SuperIntervalMatrix) -> Vec<Vec<i128>> {
    a.grid().iter().map(|r| r.iter().map(|x| x.to_string().parse().unwrap()).collect()).collect()
}

pub fn grid_q(a: &SuperIntervalMatrix) -> Vec<Vec<BigRational>> {
    a.grid().iter().map(|r| r.iter().map(Scalar::to_rational).collect()).collect()
}

/// Schoolbook product of integer grids, reduced mod `n` when given.
pub fn flat_product(a: &[Vec<i128>], b: &[Vec<i128>], n: Option<i128>) -> Vec<Vec<i128>> {
    let (rows, inner, cols) = (a.len(), b.len(), b[0].len());
    assert_eq!(a[0].len(), inner);
    let mut out = vec![vec![0i128; cols]; rows];
    for i in 0..rows {
        for k in 0..cols {
            let mut s = 0i128;
            for j in 0..inner {
                s += a[i][j] * b[j][k];
            }
            out[i][k] = match n {
                Some(n) => s.rem_euclid(n),
                None => s,
            };
        }
    }
    out
}

pub fn flat_product_q(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let cols = b[0].len();
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|k| row.iter().zip(b).fold(BigRational::from_integer(0.into()), |acc, (x, br)| acc + x * &br[k]))
                .collect()
        })
        .collect()
}

/// Additive closure of `gens` in `(Z_n)^w` by breadth-first search.
pub fn subgroup_closure(n: u64, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let w = gens.first().map_or(0, Vec::len);
    let mut seen = BTreeSet::from([vec![0u64; w]]);
    let mut frontier = vec![vec![0u64; w]];
    while let Some(v) = frontier.pop() {
        for g in gens {
            let s: Vec<u64> = v.iter().zip(g).map(|(a, b)| (a + b) % n).collect();
            if seen.insert(s.clone()) {
                frontier.push(s);
            }
        }
    }
    seen
}

/// Every grid with entries in `pool`, as flat vectors.
pub fn all_vectors(pool: &[u64], len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                pool.iter().map(move |&x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn residues(m: &SuperIntervalMatrix) -> Vec<u64> {
    m.endpoints().iter().map(|x| x.to_string().parse().unwrap()).collect()
}
