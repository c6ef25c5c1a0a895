mod common;

use common::{flat_product, grid_i128, ints, m};
use superint::fuzzy::pairing_sides;
use superint::lab::{check_semiring, Budget, CarrierSpec};
use superint::{
    extended_product, gram, major_product, outer_product, scalar_max, scalar_min, EntryOp, FuzzySuperMatrix,
    PartitionSpec, Scalar, ScalarDomain,
};

const NAT: ScalarDomain = ScalarDomain::NonnegIntegers;

fn fz(text: &str) -> FuzzySuperMatrix {
    FuzzySuperMatrix::new(m(&format!("domain: unit\n{text}"))).unwrap()
}

#[test]
fn row_times_its_transpose() {
    let a = m("domain: nat\n3 | 5 1 12 | 10 1 0 2");
    assert_eq!(major_product(&a, &a.transpose()).unwrap().to_string(), "[284]");
}

#[test]
fn row_times_its_transpose_mod_10() {
    let a = m("domain: z10\n4 2 | 7 8 0 1 | 5 3 9");
    assert_eq!(major_product(&a, &a.transpose()).unwrap().to_string(), "[9]");
}

#[test]
fn row_times_column_with_matching_cuts() {
    let v = m("domain: nat\n1 6 2 | 3 | 5 6 1 4");
    let w = ints(NAT, &[&[5], &[2], &[3], &[1], &[2], &[8], &[2], &[5]], &[3, 4], &[]);
    assert_eq!(major_product(&v, &w).unwrap().to_string(), "[106]");
}

#[test]
fn column_times_row_is_an_outer_product() {
    let p = ints(NAT, &[&[2], &[1], &[0], &[1], &[2], &[0]], &[3], &[]);
    let q = m("domain: nat\n3 1 2 | 1 2 | 3 4 0 0 | 5");
    let out = outer_product(&p, &q).unwrap();
    let qs = grid_i128(&q)[0].clone();
    for (i, scale) in [2, 1, 0, 1, 2, 0].iter().enumerate() {
        let row: Vec<i128> = qs.iter().map(|x| x * scale).collect();
        assert_eq!(grid_i128(&out)[i], row);
    }
    assert_eq!(out.partition().row_cuts(), &[3]);
    assert_eq!(out.partition().col_cuts(), &[3, 5, 9]);
}

#[test]
fn four_by_six_times_six_by_two() {
    let x =
        ints(NAT, &[&[1, 1, 3, 1, 1, 1], &[2, 3, 1, 2, 0, 1], &[3, 4, 2, 0, 1, 0], &[4, 2, 4, 1, 0, 0]], &[], &[1, 3]);
    let y = ints(NAT, &[&[2, 1], &[3, 1], &[1, 0], &[2, 1], &[1, 2], &[1, 1]], &[1, 3], &[1]);
    let out = major_product(&x, &y).unwrap();
    assert_eq!(grid_i128(&out), vec![vec![12, 6], vec![19, 8], vec![21, 9], vec![20, 7]]);
}

#[test]
fn gram_matrix_of_a_seven_by_six() {
    let x = ints(
        NAT,
        &[
            &[1, 2, 1, 3, 2, 1],
            &[2, 3, 1, 2, 1, 2],
            &[1, 4, 2, 3, 2, 2],
            &[4, 1, 3, 2, 1, 1],
            &[2, 3, 2, 3, 2, 3],
            &[3, 4, 1, 1, 4, 2],
            &[2, 1, 2, 2, 1, 3],
        ],
        &[2, 6],
        &[1, 3],
    );
    let g = gram(&x).unwrap();
    let expect = vec![
        vec![39, 36, 28, 31, 28, 29],
        vec![36, 56, 28, 41, 39, 37],
        vec![28, 28, 24, 28, 20, 24],
        vec![31, 41, 28, 40, 28, 32],
        vec![28, 39, 20, 28, 31, 26],
        vec![29, 37, 24, 32, 26, 32],
    ];
    assert_eq!(grid_i128(&g), expect);
    assert_eq!(g.partition().row_cuts(), &[1, 3]);
    assert_eq!(g.partition().col_cuts(), &[1, 3]);
    assert_eq!(g, g.transpose());
}

#[test]
fn seven_by_six_times_six_by_nine_blockwise() {
    let x = ints(
        NAT,
        &[
            &[1, 2, 1, 1, 2, 3],
            &[3, 1, 2, 3, 1, 1],
            &[1, 1, 3, 1, 1, 1],
            &[2, 3, 1, 2, 0, 1],
            &[3, 4, 2, 0, 1, 0],
            &[4, 2, 4, 1, 0, 0],
            &[5, 0, 1, 1, 1, 1],
        ],
        &[2, 6],
        &[1, 3],
    );
    let y = ints(
        NAT,
        &[
            &[1, 1, 2, 1, 2, 1, 3, 1, 0],
            &[1, 0, 2, 4, 3, 1, 4, 1, 1],
            &[0, 1, 0, 3, 1, 0, 1, 2, 1],
            &[1, 1, 0, 0, 2, 1, 1, 2, 1],
            &[1, 0, 1, 1, 1, 2, 2, 1, 2],
            &[0, 1, 0, 1, 1, 1, 1, 0, 0],
        ],
        &[1, 3],
        &[4, 6],
    );
    let out = major_product(&x, &y).unwrap();
    let expect = vec![
        vec![6, 6, 8, 17, 16, 11, 20, 9, 8],
        vec![8, 9, 9, 15, 19, 10, 21, 15, 8],
        vec![4, 6, 5, 16, 12, 6, 14, 11, 7],
        vec![7, 6, 10, 18, 19, 8, 22, 11, 6],
        vec![8, 5, 15, 26, 21, 9, 29, 12, 8],
        vec![7, 9, 12, 24, 20, 7, 25, 16, 7],
        vec![7, 8, 11, 10, 15, 9, 20, 10, 4],
    ];
    assert_eq!(grid_i128(&out), expect);
    assert_eq!(grid_i128(&out), flat_product(&grid_i128(&x), &grid_i128(&y), None));
    let last_left = out.partition().blocks().into_iter().find(|b| b.block_row == 2 && b.block_col == 0).unwrap();
    assert_eq!(grid_i128(&out.block(&last_left)), vec![vec![7, 8, 11, 10]]);
}

#[test]
fn extended_products_of_unconformable_pairs() {
    let a = ints(NAT, &[&[8, 3], &[4, 1]], &[], &[1]);
    let b = ints(NAT, &[&[1, 2], &[3, 4]], &[], &[]);
    assert!(major_product(&a, &b).is_err());
    assert_eq!(grid_i128(&extended_product(&a, &b).unwrap()), vec![vec![17, 28], vec![7, 12]]);
    let c = ints(NAT, &[&[10, 1], &[4, 2]], &[1], &[]);
    let d = ints(NAT, &[&[2, 7], &[5, 3]], &[1], &[1]);
    assert!(major_product(&c, &d).is_err());
    assert_eq!(grid_i128(&extended_product(&c, &d).unwrap()), vec![vec![25, 73], vec![18, 34]]);
}

#[test]
fn natural_sum_product_and_distributivity() {
    let x = m("domain: nat\n3 2 | 1 5 1");
    let y = m("domain: nat\n8 1 | 3 1 4");
    let z = m("domain: nat\n7 4 | 2 1 4");
    assert_eq!(x.add(&y).unwrap().to_string(), "[11 3 | 4 6 5]");
    assert_eq!(x.hadamard(&y).unwrap().to_string(), "[24 2 | 3 5 4]");
    let left = x.add(&y).unwrap().hadamard(&z).unwrap();
    let right = x.hadamard(&z).unwrap().add(&y.hadamard(&z).unwrap()).unwrap();
    assert_eq!(left.to_string(), "[77 12 | 8 6 20]");
    assert_eq!(left, right);
}

#[test]
fn natural_row_semiring_holds_on_samples() {
    let c = CarrierSpec::new(NAT, PartitionSpec::new(1, 5, vec![], vec![2]).unwrap(), EntryOp::Add);
    let r = check_semiring(&c, &Budget::default()).unwrap();
    assert!(r.holds(), "{}", r.render_text());
}

#[test]
fn rational_column_scaled_by_ten() {
    let v = m("domain: qplus\n5\n5\n3/2\n---\n7\n10\n2\n5");
    let w = v.scalar_mul(&Scalar::nat(10)).unwrap();
    assert_eq!(w.to_string(), "[50 ; 50 ; 15 ;; 70 ; 100 ; 20 ; 50]");
}

#[test]
fn fuzzy_min_of_two_rows() {
    let x = fz("1 | 0.3 0.4 | 0 0.8 0.2 | 0.9");
    let y = fz("0 | 1 0.5 | 0.2 0.7 0.2 | 0.1");
    assert_eq!(superint::fuzzy_min(&x, &y).unwrap(), fz("0 | 0.3 0.4 | 0 0.7 0.2 | 0.1"));
}

#[test]
fn fuzzy_scalar_min_and_max() {
    let a = fz("0.5 0.2 0.1 | 0.7 0.1 | 0.31 | 0.302 0.251 0.87");
    let got = scalar_min(&Scalar::ratio(31, 100), &a).unwrap();
    assert_eq!(got, fz("0.31 0.2 0.1 | 0.31 0.1 | 0.31 | 0.302 0.251 0.31"));
    let b = fz("0.2 0.7 | 0.3 0 1 0.42 | 1 0 0.201 | 0.001");
    let got = scalar_max(&Scalar::ratio(1, 10), &b).unwrap();
    assert_eq!(got, fz("0.2 0.7 | 0.3 0.1 1 0.42 | 1 0.1 0.201 | 0.1"));
}

#[test]
fn scalar_max_then_min_matches_min_then_scalar_max() {
    let x = fz("0.3 | 0 1\n---\n0 | 0.1 0.8\n0.9 | 0.2 0.4");
    let y = fz("1 | 0.3 0\n---\n0.4 | 0.2 0.1\n0.7 | 1 0");
    let s = Scalar::ratio(3, 10);
    let (left, right) = pairing_sides(EntryOp::Min, EntryOp::Max, &s, &x, &y).unwrap();
    let expect = fz("0.3 | 0.3 0.3\n---\n0.3 | 0.3 0.3\n0.7 | 0.3 0.3");
    assert_eq!(left, expect);
    assert_eq!(right, expect);
    for combine in [EntryOp::Min, EntryOp::Max] {
        for scalar in [EntryOp::Min, EntryOp::Max] {
            let (l, r) = pairing_sides(combine, scalar, &s, &x, &y).unwrap();
            assert_eq!(l, r, "{combine:?} with {scalar:?}");
        }
    }
}
