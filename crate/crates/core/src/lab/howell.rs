//! Howell normal form for subgroups of `(Z_n)^w`.
//!
//! Rows are kept in echelon order with pivots normalized to divisors of `n`,
//! and the form is closed under the annihilator rows `(n / g) * row`. That last
//! property makes reduction a complete membership test and gives every element a
//! unique coefficient vector with `c_i < n / g_i`.

use num_bigint::BigUint;
use num_integer::Integer;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HowellForm {
    n: u64,
    width: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

fn addmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 + b as u128) % n as u128) as u64
}

/// `s*x + t*y` entrywise.
fn combine(s: u64, x: &[u64], t: u64, y: &[u64], n: u64) -> Vec<u64> {
    x.iter().zip(y).map(|(&a, &b)| addmod(mulmod(s, a, n), mulmod(t, b, n), n)).collect()
}

fn scale(s: u64, x: &[u64], n: u64) -> Vec<u64> {
    x.iter().map(|&a| mulmod(s, a, n)).collect()
}

/// `(g, s, t)` with `s*a + t*b = g` over the integers, `s` and `t` reduced mod `n`.
fn xgcd(a: u64, b: u64, n: u64) -> (u64, u64, u64) {
    let e = (a as i128).extended_gcd(&(b as i128));
    let m = n as i128;
    (e.gcd as u64, e.x.rem_euclid(m) as u64, e.y.rem_euclid(m) as u64)
}

/// A unit `u` of `Z_n` with `u * a = gcd(a, n)`.
fn normalizer(a: u64, n: u64) -> u64 {
    let g = a.gcd(&n);
    let m = n / g;
    if m == 1 {
        return 1;
    }
    let e = ((a / g) as i128).extended_gcd(&(m as i128));
    let mut u = e.x.rem_euclid(m as i128) as u64;
    while u.gcd(&n) != 1 {
        u += m;
    }
    u % n
}

fn echelon(n: u64, width: usize, generators: &[Vec<u64>]) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut pending: Vec<Vec<u64>> = generators
        .iter()
        .map(|g| g.iter().map(|&x| x % n).collect::<Vec<_>>())
        .filter(|g: &Vec<u64>| g.iter().any(|&x| x != 0))
        .collect();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..width {
        let mut pivot: Option<Vec<u64>> = None;
        let mut rest = Vec::new();
        for r in pending {
            if r[col] == 0 {
                rest.push(r);
                continue;
            }
            pivot = Some(match pivot {
                None => r,
                Some(p) => {
                    let (a, b) = (p[col], r[col]);
                    let (g, s, t) = xgcd(a, b, n);
                    let lower = combine(n - b / g, &p, a / g, &r, n);
                    debug_assert_eq!(lower[col], 0);
                    rest.push(lower);
                    combine(s, &p, t, &r, n)
                }
            });
        }
        if let Some(p) = pivot {
            let p = scale(normalizer(p[col], n), &p, n);
            let g = p[col];
            rest.push(scale(n / g, &p, n));
            for (row, &c) in rows.iter_mut().zip(&pivots) {
                debug_assert!(c < col);
                let q = row[col] / g;
                if q != 0 {
                    *row = combine(1, row, n - q % n, &p, n);
                }
            }
            rows.push(p);
            pivots.push(col);
        }
        pending = rest.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    }
    (rows, pivots)
}

impl HowellForm {
    pub fn new(n: u64, width: usize, generators: &[Vec<u64>]) -> Self {
        let (rows, pivots) = echelon(n, width, generators);
        HowellForm { n, width, rows, pivots }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Subtracts pivot rows in order and returns what is left.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let n = self.n;
        let mut v: Vec<u64> = v.iter().map(|&x| x % n).collect();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let g = row[c];
            if !v[c].is_multiple_of(g) {
                break;
            }
            let q = v[c] / g;
            if q != 0 {
                v = combine(1, &v, n - q, row, n);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn cardinality(&self) -> BigUint {
        self.orders().iter().fold(BigUint::from(1u32), |acc, &o| acc * o)
    }

    /// Additive order `n / g_i` of each row.
    fn orders(&self) -> Vec<u64> {
        self.rows.iter().zip(&self.pivots).map(|(r, &c)| self.n / r[c]).collect()
    }

    /// Every element once, as `sum c_i row_i` with `c_i < n / g_i`.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let orders = self.orders();
        let mut coeffs = Some(vec![0u64; orders.len()]);
        std::iter::from_fn(move || {
            let c = coeffs.take()?;
            let mut v = vec![0u64; self.width];
            for (row, &k) in self.rows.iter().zip(&c) {
                if k != 0 {
                    v = combine(1, &v, k, row, self.n);
                }
            }
            let mut next = c;
            for pos in (0..orders.len()).rev() {
                next[pos] += 1;
                if next[pos] < orders[pos] {
                    coeffs = Some(next);
                    break;
                }
                next[pos] = 0;
            }
            Some(v)
        })
    }

    pub fn intersect(&self, other: &HowellForm) -> HowellForm {
        assert_eq!((self.n, self.width), (other.n, other.width));
        let w = self.width;
        let mut stacked = Vec::new();
        for r in &self.rows {
            stacked.push(r.iter().chain(r).copied().collect());
        }
        for r in &other.rows {
            stacked.push(r.iter().copied().chain(std::iter::repeat_n(0, w)).collect());
        }
        let (rows, pivots) = echelon(self.n, 2 * w, &stacked);
        let meet: Vec<Vec<u64>> =
            rows.iter().zip(&pivots).filter(|(_, &c)| c >= w).map(|(r, _)| r[w..].to_vec()).collect();
        HowellForm::new(self.n, w, &meet)
    }

    pub fn is_subgroup_of(&self, other: &HowellForm) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }
}

/// Coefficients `c` with `sum c_j generators[j] = v`, checked before returning.
pub fn solve(n: u64, generators: &[Vec<u64>], v: &[u64]) -> Option<Vec<u64>> {
    let w = v.len();
    let k = generators.len();
    let augmented: Vec<Vec<u64>> = generators
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let mut row: Vec<u64> = g.iter().map(|&x| x % n).collect();
            row.extend((0..k).map(|i| u64::from(i == j)));
            row
        })
        .collect();
    let (rows, pivots) = echelon(n, w + k, &augmented);
    let mut cur: Vec<u64> = v.iter().map(|&x| x % n).chain(std::iter::repeat_n(0, k)).collect();
    for (row, &c) in rows.iter().zip(&pivots) {
        if c >= w {
            break;
        }
        let g = row[c];
        if !cur[c].is_multiple_of(g) {
            return None;
        }
        let q = cur[c] / g;
        if q != 0 {
            cur = combine(1, &cur, n - q, row, n);
        }
    }
    if cur[..w].iter().any(|&x| x != 0) {
        return None;
    }
    let coeffs: Vec<u64> = cur[w..].iter().map(|&x| (n - x) % n).collect();
    let mut check = vec![0u64; w];
    for (g, &c) in generators.iter().zip(&coeffs) {
        check = combine(1, &check, c, g, n);
    }
    let target: Vec<u64> = v.iter().map(|&x| x % n).collect();
    (check == target).then_some(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn brute(n: u64, w: usize, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
        let mut set = BTreeSet::from([vec![0u64; w]]);
        loop {
            let mut grown = set.clone();
            for s in &set {
                for g in gens {
                    grown.insert(combine(1, s, 1, g, n));
                }
            }
            if grown.len() == set.len() {
                return set;
            }
            set = grown;
        }
    }

    #[test]
    fn matches_brute_force_on_small_cases() {
        let cases: Vec<(u64, Vec<Vec<u64>>)> = vec![
            (12, vec![vec![4, 6, 3], vec![8, 0, 6]]),
            (12, vec![vec![6, 4], vec![4, 6]]),
            (8, vec![vec![2, 4, 0], vec![0, 2, 6], vec![4, 4, 4]]),
            (9, vec![vec![3, 3], vec![0, 6]]),
            (10, vec![vec![5, 2]]),
        ];
        for (n, gens) in cases {
            let w = gens[0].len();
            let h = HowellForm::new(n, w, &gens);
            let expect = brute(n, w, &gens);
            let got: BTreeSet<_> = h.elements().collect();
            assert_eq!(got, expect, "n={n} gens={gens:?}");
            assert_eq!(h.cardinality(), BigUint::from(expect.len()));
            for v in &expect {
                assert!(h.contains(v));
                assert!(solve(n, &gens, v).is_some());
            }
        }
    }

    #[test]
    fn intersection_of_cyclic_groups() {
        let a = HowellForm::new(12, 1, &[vec![4]]);
        let b = HowellForm::new(12, 1, &[vec![6]]);
        assert_eq!(a.intersect(&b).cardinality(), BigUint::from(1u32));
        let c = HowellForm::new(12, 1, &[vec![3]]);
        assert_eq!(HowellForm::new(12, 1, &[vec![2]]).intersect(&c).cardinality(), BigUint::from(2u32));
    }
}
