mod common;

use std::sync::Arc;

use common::{ints, m, residues, subgroup_closure};
use num_bigint::BigUint;
use superint::fuzzy::check_lattice;
use superint::lab::{
    check_direct_sum, check_group, check_ideal, check_linear_map, check_proper_subgroup, check_semigroup,
    check_semiring, check_strictness, find_generating_set, find_proper_subgroup, find_witnesses,
    independent_exceeds_basis_demo, is_independent, span, Budget, CarrierSpec, Decomposition, Dependence, Independence,
    IndependenceMode, MapRule, Pattern, ScalarActionSpec, Verdict, WitnessKind,
};
use superint::{audit_eta, EntryOp, EtaMap, PartitionSpec, Scalar, ScalarDomain, SuperIntervalMatrix};

const NAT: ScalarDomain = ScalarDomain::NonnegIntegers;

fn carrier(
    d: ScalarDomain,
    rows: usize,
    cols: usize,
    row_cuts: &[usize],
    col_cuts: &[usize],
    op: EntryOp,
) -> CarrierSpec {
    CarrierSpec::new(d, PartitionSpec::new(rows, cols, row_cuts.to_vec(), col_cuts.to_vec()).unwrap(), op)
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

/// Unit matrices on the given `(row, col)` cells of a `rows x cols` grid.
fn units(d: ScalarDomain, p: &PartitionSpec, cells: &[(usize, usize)]) -> Vec<SuperIntervalMatrix> {
    cells
        .iter()
        .map(|&(i, j)| {
            let mut e = vec![d.zero(); p.rows() * p.cols()];
            e[i * p.cols() + j] = d.one();
            SuperIntervalMatrix::from_endpoints(d, p.clone(), e).unwrap()
        })
        .collect()
}

#[test]
fn residue_row_witnesses() {
    let c = carrier(ScalarDomain::Residues(12), 1, 5, &[], &[3], EntryOp::Mul);
    let zd = find_witnesses(&c, WitnessKind::ZeroDivisorPair).unwrap();
    assert!(zd.contains(&[m("domain: z12\n8 4 2 | 6 9"), m("domain: z12\n3 3 6 | 6 4")]));
    // per entry 40 pairs multiply to zero, minus pairs with a zero matrix
    assert_eq!(zd.count(), big(40).pow(5) - big(2) * big(12).pow(5) + big(1));

    let idem = find_witnesses(&c, WitnessKind::Idempotent).unwrap();
    assert!(idem.contains(&[m("domain: z12\n4 9 4 | 1 9")]));
    assert_eq!(idem.count(), big(4).pow(5) - big(2));

    let units = find_witnesses(&c, WitnessKind::UnitPair).unwrap();
    let fives = m("domain: z12\n5 5 5 | 5 5");
    assert!(units.contains(&[fives.clone(), fives.clone()]));
    assert_eq!(fives.hadamard(&fives).unwrap().to_string(), "[1 1 1 | 1 1]");
    assert_eq!(units.count(), big(4).pow(5));
}

#[test]
fn every_listed_witness_is_genuine() {
    let c = carrier(ScalarDomain::Residues(6), 1, 3, &[], &[1], EntryOp::Mul);
    let set = find_witnesses(&c, WitnessKind::ZeroDivisorPair).unwrap();
    let mut listed = 0u64;
    for pair in set.iter() {
        assert!(!pair[0].is_zero() && !pair[1].is_zero());
        assert!(pair[0].hadamard(&pair[1]).unwrap().is_zero());
        listed += 1;
    }
    assert_eq!(big(listed), set.count());
}

#[test]
fn residue_strictness_fails_with_an_inverse_pair() {
    let c = carrier(ScalarDomain::Residues(23), 1, 7, &[], &[2, 6], EntryOp::Add);
    let x = m("domain: z23\n20 10 | 15 21 22 3 | 15");
    let y = m("domain: z23\n3 13 | 8 2 1 20 | 8");
    assert!(x.add(&y).unwrap().is_zero());
    let inverses = find_witnesses(&c, WitnessKind::AdditiveInversePair).unwrap();
    assert!(inverses.contains(&[x, y]));
    assert_eq!(inverses.count(), big(23).pow(7) - big(1));
    let r = check_strictness(&c).unwrap();
    let w = r.verdict("strictness").unwrap().witness().unwrap();
    assert!(w.matrices[0].add(&w.matrices[1]).unwrap().is_zero());
}

#[test]
fn ordered_domains_are_strict() {
    for d in [NAT, ScalarDomain::NonnegRationals] {
        let r = check_strictness(&carrier(d, 2, 2, &[1], &[], EntryOp::Add)).unwrap();
        assert!(matches!(r.verdict("strictness"), Some(Verdict::HoldsStructural { .. })));
    }
}

#[test]
fn rational_column_is_closed_under_scaling() {
    let v = m("domain: qplus\n5\n5\n3/2\n---\n7\n10\n2\n5");
    let s = span(std::slice::from_ref(&v), &ScalarActionSpec::default(), &Budget::default()).unwrap();
    assert_eq!(s.contains(&v.scalar_mul(&Scalar::nat(10)).unwrap()), Some(true));
    assert_eq!(s.contains(&v.scalar_mul(&Scalar::ratio(2, 7)).unwrap()), Some(true));
    assert_eq!(s.contains(&m("domain: qplus\n5\n5\n3/2\n---\n7\n10\n2\n6")), Some(false));
}

#[test]
fn spans_of_a_single_row() {
    let g = m("domain: nat\n1 2 | 0 0 0 | 1");
    let s = span(std::slice::from_ref(&g), &ScalarActionSpec::default(), &Budget::default()).unwrap();
    assert_eq!(s.contains(&g.scalar_mul(&Scalar::nat(3)).unwrap()), Some(true));
    assert_eq!(s.contains(&m("domain: nat\n1 1 | 0 0 0 | 1")), Some(false));
    assert_eq!(s.size(), None);

    let g5 = m("domain: z5\n1 2 | 0 0 0 | 1");
    let s = span(&[g5], &ScalarActionSpec::default(), &Budget::default()).unwrap();
    assert_eq!(s.size(), Some(big(5)));
    assert_eq!(s.elements(10).unwrap().len(), 5);
}

#[test]
fn residue_spans_agree_with_closure() {
    let p = PartitionSpec::new(1, 4, vec![], vec![2]).unwrap();
    let gens = vec![
        ints(ScalarDomain::Residues(12), &[&[2, 4, 0, 6]], &[], &[2]),
        ints(ScalarDomain::Residues(12), &[&[3, 0, 9, 3]], &[], &[2]),
    ];
    let s = span(&gens, &ScalarActionSpec::default(), &Budget::default()).unwrap();
    let closure = subgroup_closure(12, &gens.iter().map(residues).collect::<Vec<_>>());
    assert_eq!(s.size(), Some(big(closure.len() as u64)));
    for v in common::all_vectors(&[0, 1, 2, 3, 6, 9], 4) {
        let e = v.iter().map(|&x| Scalar::residue(x)).collect();
        let mv = SuperIntervalMatrix::from_endpoints(ScalarDomain::Residues(12), p.clone(), e).unwrap();
        assert_eq!(s.contains(&mv), Some(closure.contains(&v)), "{mv}");
    }
}

#[test]
fn block_unit_vectors_generate_a_dependent_sixth() {
    // unit vectors of the single-cell blocks, plus the all-ones middle block
    let blocks: [[u64; 6]; 5] =
        [[1, 0, 0, 0, 0, 0], [0, 1, 1, 0, 0, 0], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]];
    let mut vs: Vec<_> = blocks.iter().map(|r| ints(NAT, &[r], &[], &[1, 3])).collect();
    vs.push(m("domain: nat\n7 | 2 2 | 5 9 3"));
    let r =
        is_independent(&vs, &ScalarActionSpec::default(), IndependenceMode::Combination, &Budget::default()).unwrap();
    let coefficients: Vec<Scalar> = [7, 2, 5, 9, 3, 0].iter().map(|&x| Scalar::nat(x)).collect();
    assert_eq!(r, Independence::Dependent { dependence: Dependence::Combination { index: 5, coefficients } });
    let r = is_independent(&vs[..5], &ScalarActionSpec::default(), IndependenceMode::Combination, &Budget::default())
        .unwrap();
    assert!(r.is_independent());
}

#[test]
fn a_larger_independent_family_need_not_span() {
    let c = carrier(NAT, 1, 4, &[], &[1, 3], EntryOp::Add);
    let demo = independent_exceeds_basis_demo(&c, &Budget::default()).unwrap();
    assert!(demo.independent);
    assert_eq!(demo.basis.len(), 4);
    assert_eq!(demo.larger.len(), 5);
    assert!(demo.basis_independent.is_independent());
    assert!(demo.basis_spans_slice.holds());
    assert_eq!(demo.outside_witness, Some(m("domain: nat\n0 | 0 0 | 1")));
}

#[test]
fn row_to_tall_matrix_map_is_linear() {
    let src = carrier(NAT, 1, 6, &[], &[1, 4], EntryOp::Add);
    let dst = carrier(NAT, 6, 2, &[1, 3], &[1], EntryOp::Add);
    let coeffs = (0..12).map(|r| (0..6).map(|c| Scalar::nat(u64::from(r / 2 == c))).collect()).collect();
    let rule = MapRule::Affine { coeffs, offset: vec![Scalar::nat(0); 12] };
    let v = m("domain: nat\n4 | 1 2 3 | 5 6");
    assert_eq!(rule.apply(&v, &dst).unwrap().to_string(), "[4 | 4 ;; 1 | 1 ; 2 | 2 ;; 3 | 3 ; 5 | 5 ; 6 | 6]");
    let r = check_linear_map(&rule, &src, &dst, &ScalarActionSpec::default(), &Budget::default()).unwrap();
    assert!(r.holds(), "{}", r.render_text());
}

#[test]
fn block_operator_is_linear_and_squaring_is_not() {
    let c = carrier(NAT, 1, 7, &[], &[1, 4, 6], EntryOp::Add);
    let rule = MapRule::Func(Arc::new(|v: &SuperIntervalMatrix| {
        let e = v.endpoints();
        let d = v.domain();
        let out = vec![
            d.mul(&Scalar::nat(3), &e[0])?,
            e[3].clone(),
            e[2].clone(),
            e[2].clone(),
            e[4].clone(),
            e[5].clone(),
            d.mul(&Scalar::nat(5), &e[6])?,
        ];
        SuperIntervalMatrix::from_endpoints(d, v.partition().clone(), out)
    }));
    let v = m("domain: nat\n1 | 2 3 4 | 5 6 | 7");
    assert_eq!(rule.apply(&v, &c).unwrap().to_string(), "[3 | 4 3 3 | 5 6 | 35]");
    let r = check_linear_map(&rule, &c, &c, &ScalarActionSpec::default(), &Budget::default()).unwrap();
    assert!(r.holds(), "{}", r.render_text());

    let square = MapRule::Func(Arc::new(|v: &SuperIntervalMatrix| v.hadamard(v)));
    let r = check_linear_map(&square, &c, &c, &ScalarActionSpec::default(), &Budget::default()).unwrap();
    assert!(r.verdict("T(av+u) = aT(v)+T(u)").unwrap().fails());
}

#[test]
fn support_ideal_and_constant_non_ideal() {
    let c = carrier(ScalarDomain::Residues(7), 1, 7, &[], &[2, 3, 5], EntryOp::Mul);
    let gens = units(c.domain, &c.partition, &[(0, 0), (0, 1)]);
    let r = check_ideal(&c, &gens, &ScalarActionSpec::default(), &Budget::default()).unwrap();
    assert!(r.holds(), "{}", r.render_text());
    assert_eq!(r.notes, vec!["the span has 49 elements".to_string()]);

    let ones = SuperIntervalMatrix::filled(c.domain, c.partition.clone(), Scalar::residue(1)).unwrap();
    let r = check_ideal(&c, &[ones], &ScalarActionSpec::default(), &Budget::default()).unwrap();
    let w = r.verdict("absorbs hadamard products").unwrap().witness().unwrap();
    let product = w.matrices.last().unwrap();
    assert!(product.endpoints().windows(2).any(|p| p[0] != p[1]), "{product}");
}

#[test]
fn constant_carriers_have_one_generator() {
    let column = carrier(ScalarDomain::Residues(23), 9, 1, &[], &[], EntryOp::Add).with_pattern(Pattern::Constant);
    let row =
        carrier(ScalarDomain::Residues(43), 1, 12, &[], &[2, 3, 8, 11], EntryOp::Add).with_pattern(Pattern::Constant);
    for (c, p) in [(column, 23u64), (row, 43)] {
        assert_eq!(c.size(), Some(big(p)));
        let g = find_generating_set(&c, &ScalarActionSpec::default(), &Budget::default()).unwrap();
        assert_eq!(g.generators.len(), 1);
        assert_eq!(g.span_size, big(p));
        assert_eq!(g.carrier_size, big(p));
    }
}

#[test]
fn full_residue_carrier_needs_one_generator_per_cell() {
    let c = carrier(ScalarDomain::Residues(6), 2, 2, &[1], &[1], EntryOp::Add);
    let g = find_generating_set(&c, &ScalarActionSpec::default(), &Budget::default()).unwrap();
    assert_eq!(g.generators.len(), 4);
    assert_eq!(g.span_size, big(6).pow(4));
}

#[test]
fn five_by_three_decompositions() {
    let whole = carrier(ScalarDomain::Residues(12), 5, 3, &[2, 4], &[1], EntryOp::Add);
    let (d, p) = (whole.domain, whole.partition.clone());
    let w1 = units(d, &p, &[(0, 0), (1, 0), (2, 0), (4, 0)]);
    let w2 = units(d, &p, &[(2, 0), (3, 0), (4, 0), (4, 1), (4, 2)]);
    let w3 = units(d, &p, &[(0, 1), (0, 2), (1, 1), (1, 2), (4, 2)]);
    let w4 = vec![
        units(d, &p, &[(2, 1)]).remove(0),
        units(d, &p, &[(2, 2)])[0].add(&units(d, &p, &[(3, 1)])[0]).unwrap(),
        units(d, &p, &[(4, 2)]).remove(0),
    ];
    let w5 = units(d, &p, &[(0, 1), (2, 0), (3, 1), (3, 2), (4, 1), (4, 2)]);
    let action = ScalarActionSpec::default();
    let b = Budget::default();

    let all =
        check_direct_sum(&[w1.clone(), w2.clone(), w3.clone(), w4.clone(), w5.clone()], &whole, &action, &b).unwrap();
    assert_eq!(all.decomposition, Decomposition::Pseudo);
    assert!(all.report.verdict("parts generate the carrier").unwrap().holds());
    let s1 = span(&w1, &action, &b).unwrap();
    let s2 = span(&w2, &action, &b).unwrap();
    let o = all.overlaps.iter().find(|o| (o.i, o.j) == (0, 1)).unwrap();
    assert!(!o.witness.is_zero());
    assert_eq!((s1.contains(&o.witness), s2.contains(&o.witness)), (Some(true), Some(true)));

    let partial = check_direct_sum(&[w1.clone(), w3.clone()], &whole, &action, &b).unwrap();
    assert_eq!(partial.decomposition, Decomposition::Incomplete);

    let mut col0 = w1.clone();
    col0.extend(units(d, &p, &[(3, 0)]));
    let top = units(d, &p, &[(0, 1), (0, 2), (1, 1), (1, 2)]);
    let rest = units(d, &p, &[(3, 2), (4, 1), (3, 1)]);
    let direct = check_direct_sum(&[col0, top, w4, rest], &whole, &action, &b).unwrap();
    assert_eq!(direct.decomposition, Decomposition::Direct, "{}", direct.report.render_text());
    assert!(direct.overlaps.is_empty());
    assert_eq!(direct.part_sizes.iter().product::<BigUint>(), big(12).pow(15));
}

#[test]
fn long_row_splits_into_three_parts() {
    let whole = carrier(ScalarDomain::Residues(20), 1, 10, &[], &[3, 7, 9], EntryOp::Add);
    let (d, p) = (whole.domain, whole.partition.clone());
    let cells = |cs: &[usize]| units(d, &p, &cs.iter().map(|&c| (0, c)).collect::<Vec<_>>());
    let parts = vec![cells(&[0, 1, 2]), cells(&[7, 8]), cells(&[3, 4, 5, 6, 9])];
    let r = check_direct_sum(&parts, &whole, &ScalarActionSpec::default(), &Budget::default()).unwrap();
    assert_eq!(r.decomposition, Decomposition::Direct);
    assert_eq!(r.part_sizes, vec![big(20).pow(3), big(20).pow(2), big(20).pow(5)]);
}

#[test]
fn reciprocal_eta_is_not_superadditive() {
    let c = carrier(ScalarDomain::Residues(12), 1, 1, &[], &[], EntryOp::Add);
    let eta = EtaMap::reciprocal(Scalar::ratio(1, 1)).unwrap();
    let audit = audit_eta(&eta, &c, &Budget::default()).unwrap();
    assert!(audit.exhaustive);
    assert_eq!(audit.failing_pairs[0], (Scalar::residue(1), Scalar::residue(1)));
    assert!(audit.failing_pairs.contains(&(Scalar::residue(2), Scalar::residue(3))));
    assert!(audit.report.verdict("eta(A+B) >= min(eta(A), eta(B))").unwrap().fails());
}

#[test]
fn unit_lattice_laws_hold_exhaustively() {
    let pool = ScalarDomain::UnitRationals.default_pool();
    let c = carrier(ScalarDomain::UnitRationals, 1, 2, &[], &[1], EntryOp::Min).with_pool(pool);
    let r = check_lattice(&c, &Budget::default()).unwrap();
    assert!(r.holds(), "{}", r.render_text());
    assert!(r.checks.iter().all(|ch| !matches!(ch.verdict, Verdict::HoldsSampled { .. })));
}

#[test]
fn residue_addition_forms_a_group_and_hadamard_does_not() {
    let add = carrier(ScalarDomain::Residues(6), 1, 3, &[], &[1], EntryOp::Add);
    let r = check_group(&add, &Budget::default()).unwrap();
    assert!(r.holds(), "{}", r.render_text());
    assert!(r.notes.iter().any(|n| n.contains("6 - a")));

    let mul = carrier(ScalarDomain::Residues(6), 1, 3, &[], &[1], EntryOp::Mul);
    assert!(check_semigroup(&mul, &Budget::default()).unwrap().holds());
    let r = check_group(&mul, &Budget::default()).unwrap();
    assert!(r.verdict("inverses").unwrap().fails());

    let ring = carrier(ScalarDomain::Residues(4), 1, 2, &[], &[1], EntryOp::Add);
    let r = check_semiring(&ring, &Budget::default()).unwrap();
    assert!(r.holds(), "{}", r.render_text());
    assert!(r.checks.iter().all(|ch| !matches!(ch.verdict, Verdict::HoldsSampled { .. })));
}

#[test]
fn naturals_have_no_additive_inverses() {
    let c = carrier(NAT, 1, 2, &[], &[1], EntryOp::Add);
    let r = check_group(&c, &Budget::default()).unwrap();
    let w = r.verdict("inverses").unwrap().witness().unwrap();
    assert!(!w.matrices[0].is_zero());
}

#[test]
fn residue_product_carrier_contains_its_unit_group() {
    let c = carrier(ScalarDomain::Residues(12), 1, 5, &[], &[3], EntryOp::Mul);
    let w = find_proper_subgroup(&c).unwrap().found.unwrap();
    assert_eq!(w.identity, m("domain: z12\n1 1 1 | 1 1"));
    assert_eq!(w.size, big(4).pow(5));
    assert_eq!(w.element.hadamard(&w.inverse).unwrap(), w.identity);
    // closure over the whole subgroup, checked on matrices
    let units = [1u64, 5, 7, 11].map(Scalar::residue).to_vec();
    let sub = c.clone().with_pool(units);
    for x in sub.elements().step_by(97) {
        for y in sub.elements().step_by(101) {
            assert!(sub.contains(&x.hadamard(&y).unwrap()));
        }
    }

    let prime = carrier(ScalarDomain::Residues(7), 1, 1, &[], &[], EntryOp::Add);
    let r = check_proper_subgroup(&prime).unwrap();
    assert!(r.verdict("contains a proper subgroup").unwrap().fails());
}
