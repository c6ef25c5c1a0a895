use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{EntryOp, SuperIntervalMatrix};
use crate::scalar::Scalar;

use super::carrier::CarrierSpec;
use super::report::{StructureReport, Verdict, Witness};
use super::witness::{find_witnesses, WitnessKind};
use super::Budget;

/// Scalar tuples beyond this count are sampled even on a scannable carrier.
const MAX_SCALAR_TUPLES: usize = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    Associative(EntryOp),
    Commutative(EntryOp),
    Idempotent(EntryOp),
    /// `x*(y+z) = x*y + x*z`
    LeftDistributive {
        mul: EntryOp,
        add: EntryOp,
    },
    /// `(x+y)*z = x*z + y*z`
    RightDistributive {
        mul: EntryOp,
        add: EntryOp,
    },
    /// `x outer (x inner y) = x`
    Absorption {
        outer: EntryOp,
        inner: EntryOp,
    },
}

impl Law {
    pub fn arity(&self) -> usize {
        match self {
            Law::Idempotent(_) => 1,
            Law::Commutative(_) | Law::Absorption { .. } => 2,
            _ => 3,
        }
    }

    pub fn ops(&self) -> Vec<EntryOp> {
        match *self {
            Law::Associative(o) | Law::Commutative(o) | Law::Idempotent(o) => vec![o],
            Law::LeftDistributive { mul, add } | Law::RightDistributive { mul, add } => vec![mul, add],
            Law::Absorption { outer, inner } => vec![outer, inner],
        }
    }

    pub fn name(&self) -> String {
        match self {
            Law::Associative(o) => format!("{} associativity", o.name()),
            Law::Commutative(o) => format!("{} commutativity", o.name()),
            Law::Idempotent(o) => format!("{} idempotence", o.name()),
            Law::LeftDistributive { mul, add } => format!("{} left-distributes over {}", mul.name(), add.name()),
            Law::RightDistributive { mul, add } => format!("{} right-distributes over {}", mul.name(), add.name()),
            Law::Absorption { outer, inner } => format!("{} absorbs {}", outer.name(), inner.name()),
        }
    }

    /// Evaluates both sides with `f` and reports whether they agree.
    pub fn evaluate<T, F>(&self, args: &[T], f: F) -> Result<bool>
    where
        T: PartialEq,
        F: Fn(EntryOp, &T, &T) -> Result<T>,
    {
        let x = &args[0];
        match *self {
            Law::Associative(o) => {
                let (y, z) = (&args[1], &args[2]);
                Ok(f(o, &f(o, x, y)?, z)? == f(o, x, &f(o, y, z)?)?)
            }
            Law::Commutative(o) => Ok(f(o, x, &args[1])? == f(o, &args[1], x)?),
            Law::Idempotent(o) => Ok(f(o, x, x)? == *x),
            Law::LeftDistributive { mul, add } => {
                let (y, z) = (&args[1], &args[2]);
                Ok(f(mul, x, &f(add, y, z)?)? == f(add, &f(mul, x, y)?, &f(mul, x, z)?)?)
            }
            Law::RightDistributive { mul, add } => {
                let (y, z) = (&args[1], &args[2]);
                Ok(f(mul, &f(add, x, y)?, z)? == f(add, &f(mul, x, z)?, &f(mul, y, z)?)?)
            }
            Law::Absorption { outer, inner } => Ok(f(outer, x, &f(inner, x, &args[1])?)? == *x),
        }
    }
}

fn on_matrices(op: EntryOp, x: &SuperIntervalMatrix, y: &SuperIntervalMatrix) -> Result<SuperIntervalMatrix> {
    x.combine(op, y)
}

fn rng(b: &Budget) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(b.seed)
}

/// Lexicographically least tuple in `pool^arity` on which `bad` is true.
fn least_failing<F>(pool: &[Scalar], arity: usize, mut bad: F) -> Result<Option<Vec<Scalar>>>
where
    F: FnMut(&[Scalar]) -> Result<bool>,
{
    let mut idx = vec![0usize; arity];
    let mut tuple: Vec<Scalar> = vec![pool[0].clone(); arity];
    loop {
        if bad(&tuple)? {
            return Ok(Some(tuple));
        }
        let mut pos = arity;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < pool.len() {
                tuple[pos] = pool[idx[pos]].clone();
                break;
            }
            idx[pos] = 0;
            tuple[pos] = pool[0].clone();
        }
    }
}

/// Turns a failing scalar tuple into the least failing tuple of matrices: the
/// bad values go in the last free group and every other group takes the pool minimum.
fn lift(c: &CarrierSpec, tuple: &[Scalar]) -> Vec<SuperIntervalMatrix> {
    tuple.iter().map(|s| c.element_with_last(s)).collect()
}

fn confirmed(law: &Law, matrices: Vec<SuperIntervalMatrix>, note: String) -> Result<Verdict> {
    if law.evaluate(&matrices, on_matrices)? {
        return Ok(Verdict::Unknown { reason: format!("scalar counterexample did not lift: {note}") });
    }
    Ok(Verdict::Fails { witness: Witness::new(matrices, note) })
}

pub fn check_law(c: &CarrierSpec, law: Law, b: &Budget) -> Result<Verdict> {
    c.validate()?;
    let d = c.domain;
    let arity = law.arity();
    let pool = c.pool();
    let k = c.groups().len();
    let tuples = pool.len().checked_pow(arity as u32).unwrap_or(usize::MAX);
    if c.scannable(&law.ops(), b.exhaustive_limit) && tuples <= MAX_SCALAR_TUPLES {
        let on_scalars = |op: EntryOp, x: &Scalar, y: &Scalar| op.apply(&d, x, y);
        if c.has_zero_cells() || k == 0 {
            let zeros = vec![d.zero(); arity];
            if !law.evaluate(&zeros, on_scalars)? {
                let all_min: Vec<_> = (0..arity).map(|_| c.element(&vec![pool[0].clone(); k])).collect();
                return confirmed(&law, all_min, format!("{} fails on fixed zero cells", law.name()));
            }
        }
        if k == 0 {
            return Ok(Verdict::HoldsExhaustive);
        }
        return match least_failing(&pool, arity, |t| Ok(!law.evaluate(t, on_scalars)?))? {
            Some(t) => confirmed(&law, lift(c, &t), format!("{} fails", law.name())),
            None => Ok(Verdict::HoldsExhaustive),
        };
    }
    let mut rng = rng(b);
    for s in 0..b.sample_count {
        let args: Vec<_> = (0..arity).map(|_| c.random_element(&mut rng)).collect();
        if !law.evaluate(&args, on_matrices)? {
            return Ok(Verdict::Fails { witness: Witness::new(args, format!("{} fails at sample {s}", law.name())) });
        }
    }
    Ok(Verdict::HoldsSampled { seed: b.seed, samples: b.sample_count })
}

fn closure(c: &CarrierSpec, op: EntryOp) -> Result<Verdict> {
    let d = c.domain;
    if c.entry_pool.is_none() || c.groups().is_empty() {
        return Ok(Verdict::HoldsStructural {
            argument: format!("entrywise {} keeps the domain, the partition and the cell pattern", op.name()),
        });
    }
    let pool = c.pool();
    let bad = least_failing(&pool, 2, |t| Ok(!pool.contains(&op.apply(&d, &t[0], &t[1])?)))?;
    Ok(match bad {
        None => Verdict::HoldsExhaustive,
        Some(t) => {
            let (x, y) = (c.element_with_last(&t[0]), c.element_with_last(&t[1]));
            Verdict::Fails { witness: Witness::new(vec![x, y], format!("{} leaves the entry pool", op.name())) }
        }
    })
}

fn identity(c: &CarrierSpec, op: EntryOp, b: &Budget) -> Result<(Verdict, Option<SuperIntervalMatrix>)> {
    let d = c.domain;
    let k = c.groups().len();
    let pool = c.pool();
    if c.scannable(&[op], b.exhaustive_limit) {
        for e in &pool {
            let mut neutral = true;
            for p in &pool {
                if op.apply(&d, e, p)? != *p || op.apply(&d, p, e)? != *p {
                    neutral = false;
                    break;
                }
            }
            if neutral {
                return Ok((Verdict::HoldsExhaustive, Some(c.element(&vec![e.clone(); k]))));
            }
        }
        let note = format!("no element of the carrier is neutral for {}", op.name());
        return Ok((Verdict::Fails { witness: Witness::new(Vec::new(), note) }, None));
    }
    let Some(e) = op.identity(&d) else {
        return Ok((Verdict::Unknown { reason: format!("{} has no neutral element in {d}", op.name()) }, None));
    };
    if c.entry_pool.as_ref().is_some_and(|p| !p.contains(&e)) {
        return Ok((Verdict::Unknown { reason: format!("the domain identity {e} is not in the pool") }, None));
    }
    let unit = c.element(&vec![e; k]);
    let mut rng = rng(b);
    for s in 0..b.sample_count {
        let x = c.random_element(&mut rng);
        if unit.combine(op, &x)? != x || x.combine(op, &unit)? != x {
            let note = format!("candidate identity is not neutral at sample {s}");
            return Ok((Verdict::Fails { witness: Witness::new(vec![unit, x], note) }, None));
        }
    }
    Ok((Verdict::HoldsSampled { seed: b.seed, samples: b.sample_count }, Some(unit)))
}

fn inverses(c: &CarrierSpec, op: EntryOp, unit: &SuperIntervalMatrix, b: &Budget) -> Result<Verdict> {
    let d = c.domain;
    let groups = c.groups();
    let pool = c.pool();
    let Some(e) = groups.first().map(|g| unit.endpoints()[g[0]].clone()) else {
        return Ok(Verdict::HoldsExhaustive);
    };
    if c.scannable(&[op], b.exhaustive_limit) {
        for p in &pool {
            let mut found = false;
            for q in &pool {
                if op.apply(&d, p, q)? == e && op.apply(&d, q, p)? == e {
                    found = true;
                    break;
                }
            }
            if !found {
                let x = c.element_with_last(p);
                return Ok(Verdict::Fails {
                    witness: Witness::new(vec![x], format!("endpoint {p} has no {} inverse in the carrier", op.name())),
                });
            }
        }
        return Ok(Verdict::HoldsExhaustive);
    }
    let mut rng = rng(b);
    for s in 0..b.sample_count {
        let x = c.random_element(&mut rng);
        let mut y = vec![d.zero(); x.endpoints().len()];
        for g in &groups {
            let v = &x.endpoints()[g[0]];
            let inv = op.inverse(&d, v).filter(|q| c.entry_pool.as_ref().is_none_or(|p| p.contains(q)));
            let Some(inv) = inv else {
                return Ok(Verdict::Fails {
                    witness: Witness::new(
                        vec![x.clone()],
                        format!("endpoint {v} has no {} inverse (sample {s})", op.name()),
                    ),
                });
            };
            g.iter().for_each(|&cell| y[cell] = inv.clone());
        }
        let y = SuperIntervalMatrix::from_endpoints(d, c.partition.clone(), y)?;
        if x.combine(op, &y)? != *unit {
            return Ok(Verdict::Fails {
                witness: Witness::new(vec![x, y], format!("computed inverse does not cancel (sample {s})")),
            });
        }
    }
    Ok(Verdict::HoldsSampled { seed: b.seed, samples: b.sample_count })
}

fn semigroup_checks(c: &CarrierSpec, b: &Budget, report: &mut StructureReport) -> Result<Option<SuperIntervalMatrix>> {
    report.push("closure", closure(c, c.op)?);
    report.push("associativity", check_law(c, Law::Associative(c.op), b)?);
    report.push("commutativity", check_law(c, Law::Commutative(c.op), b)?);
    let (verdict, unit) = identity(c, c.op, b)?;
    report.push_with("identity", verdict, unit.clone());
    Ok(unit)
}

pub fn check_semigroup(c: &CarrierSpec, b: &Budget) -> Result<StructureReport> {
    c.validate()?;
    let mut report = StructureReport::new(format!("semigroup: {}", c.describe()), c.size());
    semigroup_checks(c, b, &mut report)?;
    Ok(report)
}

pub fn check_group(c: &CarrierSpec, b: &Budget) -> Result<StructureReport> {
    c.validate()?;
    let mut report = StructureReport::new(format!("group: {}", c.describe()), c.size());
    match semigroup_checks(c, b, &mut report)? {
        Some(unit) => report.push("inverses", inverses(c, c.op, &unit, b)?),
        None => report.push("inverses", Verdict::Inapplicable { reason: "no identity element".to_string() }),
    }
    if let (EntryOp::Add, Some(n)) = (c.op, c.domain.modulus()) {
        report.notes.push(format!("the inverse of endpoint a is {n} - a"));
    }
    Ok(report)
}

pub fn check_semiring(c: &CarrierSpec, b: &Budget) -> Result<StructureReport> {
    c.validate()?;
    if c.op != EntryOp::Add {
        return Err(Error::InvalidCarrier("a semiring carrier is described by its additive operation".to_string()));
    }
    let mul = EntryOp::Mul;
    let mut report = StructureReport::new(format!("semiring: {}", c.describe()), c.size());
    report.push("additive closure", closure(c, EntryOp::Add)?);
    report.push("additive associativity", check_law(c, Law::Associative(EntryOp::Add), b)?);
    report.push("additive commutativity", check_law(c, Law::Commutative(EntryOp::Add), b)?);
    let (verdict, zero) = identity(c, EntryOp::Add, b)?;
    report.push_with("additive identity", verdict, zero);
    report.push("multiplicative closure", closure(c, mul)?);
    report.push("multiplicative associativity", check_law(c, Law::Associative(mul), b)?);
    report.push("multiplicative commutativity", check_law(c, Law::Commutative(mul), b)?);
    report.push("left distributivity", check_law(c, Law::LeftDistributive { mul, add: EntryOp::Add }, b)?);
    report.push("right distributivity", check_law(c, Law::RightDistributive { mul, add: EntryOp::Add }, b)?);
    Ok(report)
}

/// Strict means `x + y = 0` only for `x = y = 0`.
pub fn check_strictness(c: &CarrierSpec) -> Result<StructureReport> {
    c.validate()?;
    if c.op != EntryOp::Add {
        return Err(Error::InvalidCarrier("strictness is a property of addition".to_string()));
    }
    let mut report = StructureReport::new(format!("strictness: {}", c.describe()), c.size());
    let verdict = if c.domain.modulus().is_none() {
        Verdict::HoldsStructural { argument: "a + b = 0 forces a = b = 0 for nonnegative endpoints".to_string() }
    } else {
        let set = find_witnesses(c, WitnessKind::AdditiveInversePair)?;
        match set.first() {
            Some(pair) => Verdict::Fails { witness: Witness::new(pair, "nonzero pair summing to zero") },
            None if set.is_complete() => Verdict::HoldsExhaustive,
            None => Verdict::Unknown { reason: "no pair found in the pool".to_string() },
        }
    };
    report.push("strictness", verdict);
    Ok(report)
}
