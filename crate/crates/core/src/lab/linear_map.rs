use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::SuperIntervalMatrix;
use crate::scalar::Scalar;

use super::carrier::CarrierSpec;
use super::report::{StructureReport, Verdict, Witness};
use super::{big, Budget, ScalarActionSpec};

pub type MapFn = Arc<dyn Fn(&SuperIntervalMatrix) -> Result<SuperIntervalMatrix> + Send + Sync>;

/// How a candidate map sends source matrices to destination matrices.
#[derive(Clone)]
pub enum MapRule {
    /// `T(v)[r] = sum_c coeffs[r][c] * v[c] + offset[r]` over flat cell indices.
    Affine {
        coeffs: Vec<Vec<Scalar>>,
        offset: Vec<Scalar>,
    },
    /// Explicit input/output pairs; other inputs are undefined.
    Table(Vec<(SuperIntervalMatrix, SuperIntervalMatrix)>),
    Func(MapFn),
}

impl fmt::Debug for MapRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapRule::Affine { coeffs, offset } => {
                f.debug_struct("Affine").field("coeffs", coeffs).field("offset", offset).finish()
            }
            MapRule::Table(t) => f.debug_tuple("Table").field(&t.len()).finish(),
            MapRule::Func(_) => f.write_str("Func(..)"),
        }
    }
}

impl MapRule {
    pub fn apply(&self, v: &SuperIntervalMatrix, dst: &CarrierSpec) -> Result<SuperIntervalMatrix> {
        match self {
            MapRule::Affine { coeffs, offset } => {
                let d = dst.domain;
                let cells = dst.partition.rows() * dst.partition.cols();
                if coeffs.len() != cells
                    || offset.len() != cells
                    || coeffs.iter().any(|r| r.len() != v.endpoints().len())
                {
                    return Err(Error::ShapeMismatch(format!(
                        "map needs {cells} rows of {} coefficients and {cells} offsets",
                        v.endpoints().len()
                    )));
                }
                let mut out = Vec::with_capacity(cells);
                for (row, off) in coeffs.iter().zip(offset) {
                    let mut acc = d.embed(off)?;
                    for (c, x) in row.iter().zip(v.endpoints()) {
                        acc = d.add(&acc, &d.mul(&d.embed(c)?, x)?)?;
                    }
                    out.push(acc);
                }
                SuperIntervalMatrix::from_endpoints(d, dst.partition.clone(), out)
            }
            MapRule::Table(pairs) => pairs
                .iter()
                .find(|(x, _)| x == v)
                .map(|(_, y)| y.clone())
                .ok_or_else(|| Error::MapUndefined(v.to_string())),
            MapRule::Func(f) => f(v),
        }
    }
}

/// Whether `rule` is a linear map from `src` to `dst`: it lands in `dst` and
/// `T(a v + u) = a T(v) + T(u)` for every acting scalar `a`.
pub fn check_linear_map(
    rule: &MapRule,
    src: &CarrierSpec,
    dst: &CarrierSpec,
    action: &ScalarActionSpec,
    b: &Budget,
) -> Result<StructureReport> {
    src.validate()?;
    dst.validate()?;
    if src.domain != dst.domain {
        return Err(Error::DomainMismatch { left: src.domain.to_string(), right: dst.domain.to_string() });
    }
    let d = src.domain;
    let scalars = action.values(&d, b);
    let limit = BigUint::from(b.exhaustive_limit);
    let mut report = StructureReport::new(format!("linear map {} -> {}", src.describe(), dst.describe()), src.size());

    let lands = |v: &SuperIntervalMatrix| -> Result<Option<Verdict>> {
        let image = rule.apply(v, dst)?;
        Ok((!dst.contains(&image)).then(|| Verdict::Fails {
            witness: Witness::new(vec![v.clone(), image], "image lies outside the destination"),
        }))
    };
    let additive = |a: &Scalar, v: &SuperIntervalMatrix, u: &SuperIntervalMatrix| -> Result<Option<Verdict>> {
        let lhs = rule.apply(&v.scalar_mul(a)?.add(u)?, dst)?;
        let rhs = rule.apply(v, dst)?.scalar_mul(a)?.add(&rule.apply(u, dst)?)?;
        Ok((lhs != rhs).then(|| Verdict::Fails {
            witness: Witness::new(vec![v.clone(), u.clone(), lhs, rhs], "T(a v + u) differs from a T(v) + T(u)")
                .with_scalars(vec![a.clone()]),
        }))
    };

    let size = src.size();
    let scan_images = size.as_ref().is_some_and(|s| *s <= limit);
    let scan_pairs = size.as_ref().is_some_and(|s| big(scalars.len()) * s * s <= limit);
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    let sampled = Verdict::HoldsSampled { seed: b.seed, samples: b.sample_count };

    let mut into = Verdict::HoldsExhaustive;
    if scan_images {
        for v in src.elements() {
            if let Some(f) = lands(&v)? {
                into = f;
                break;
            }
        }
    } else {
        into = sampled.clone();
        for _ in 0..b.sample_count {
            if let Some(f) = lands(&src.random_element(&mut rng))? {
                into = f;
                break;
            }
        }
    }
    report.push("maps into destination", into);

    let mut linear = Verdict::HoldsExhaustive;
    if scan_pairs {
        let all: Vec<SuperIntervalMatrix> = src.elements().collect();
        'scan: for a in &scalars {
            for v in &all {
                for u in &all {
                    if let Some(f) = additive(a, v, u)? {
                        linear = f;
                        break 'scan;
                    }
                }
            }
        }
    } else {
        linear = sampled;
        for _ in 0..b.sample_count {
            let a = &scalars[rng.random_range(0..scalars.len())];
            let (v, u) = (src.random_element(&mut rng), src.random_element(&mut rng));
            if let Some(f) = additive(a, &v, &u)? {
                linear = f;
                break;
            }
        }
    }
    report.push("T(av+u) = aT(v)+T(u)", linear);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::EntryOp;
    use crate::partition::PartitionSpec;
    use crate::scalar::ScalarDomain;

    fn z5(cols: usize) -> CarrierSpec {
        CarrierSpec::new(ScalarDomain::Residues(5), PartitionSpec::trivial(1, cols).unwrap(), EntryOp::Add)
    }

    #[test]
    fn offset_breaks_linearity() {
        let one = Scalar::Residue(1);
        let rule = MapRule::Affine { coeffs: vec![vec![one.clone()]], offset: vec![one] };
        let r = check_linear_map(&rule, &z5(1), &z5(1), &ScalarActionSpec::default(), &Budget::default()).unwrap();
        assert!(r.verdict("maps into destination").unwrap().holds());
        let w = r.verdict("T(av+u) = aT(v)+T(u)").unwrap().witness().unwrap();
        assert_eq!(w.scalars, vec![Scalar::Residue(1)]);
    }

    #[test]
    fn tables_must_cover_their_inputs() {
        let rule = MapRule::Table(Vec::new());
        let err = check_linear_map(&rule, &z5(1), &z5(1), &ScalarActionSpec::default(), &Budget::default());
        assert!(matches!(err, Err(Error::MapUndefined(_))));
    }
}
