//! TOML descriptions of carriers and of the extra data some checks need.
//!
//! ```toml
//! domain = "z12"
//! rows = 1
//! cols = 5
//! col_cuts = [3]
//! op = "hadamard"
//! pool = [0, 4, 8]          # optional; strings for fractions such as "1/2"
//! generators = [[1, 2, 0, 0, 0]]
//!
//! [action]
//! kind = "type-i"
//! scalars = [1, 5]          # optional; the whole domain by default
//! ```

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fuzzy::EtaMap;
use crate::lab::{ActionKind, Budget, CarrierSpec, MapRule, Pattern, ScalarActionSpec, ScalarSet};
use crate::matrix::{EntryOp, SuperIntervalMatrix};
use crate::partition::PartitionSpec;
use crate::scalar::{Scalar, ScalarDomain};

#[derive(Deserialize, Clone, Debug)]
#[serde(untagged)]
enum Literal {
    Int(u64),
    Text(String),
}

impl Literal {
    fn to_scalar(&self, d: &ScalarDomain) -> Result<Scalar> {
        let token = match self {
            Literal::Int(i) => i.to_string(),
            Literal::Text(s) => s.clone(),
        };
        d.parse_scalar(&token)
            .map_err(|reason| Error::InvalidEndpoint { value: format!("{token} ({reason})"), domain: d.to_string() })
    }
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct ShapeRaw {
    rows: usize,
    cols: usize,
    #[serde(default)]
    row_cuts: Vec<usize>,
    #[serde(default)]
    col_cuts: Vec<usize>,
    #[serde(default)]
    pattern: Option<String>,
    #[serde(default)]
    support: Option<Vec<(usize, usize)>>,
    #[serde(default)]
    groups: Option<Vec<Vec<(usize, usize)>>>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct ActionRaw {
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    scalars: Option<Vec<Literal>>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct PartRaw {
    generators: Vec<Vec<Literal>>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct MapRaw {
    coeffs: Vec<Vec<Literal>>,
    #[serde(default)]
    offset: Option<Vec<Literal>>,
    dst: ShapeRaw,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct EtaRaw {
    rule: String,
    #[serde(default)]
    eta_zero: Option<Literal>,
    #[serde(default)]
    zero: Option<Literal>,
    #[serde(default)]
    integer: Option<Literal>,
    #[serde(default)]
    fraction: Option<Literal>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct FileRaw {
    domain: String,
    #[serde(flatten)]
    shape: ShapeRaw,
    #[serde(default)]
    op: Option<String>,
    #[serde(default)]
    pool: Option<Vec<Literal>>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    sample_count: Option<usize>,
    #[serde(default)]
    exhaustive_limit: Option<u64>,
    #[serde(default)]
    coeff_bound: Option<u64>,
    #[serde(default)]
    action: Option<ActionRaw>,
    #[serde(default)]
    generators: Vec<Vec<Literal>>,
    #[serde(default)]
    ideal: Vec<Vec<Literal>>,
    #[serde(default)]
    vectors: Vec<Vec<Literal>>,
    #[serde(default)]
    parts: Vec<PartRaw>,
    #[serde(default)]
    map: Option<MapRaw>,
    #[serde(default)]
    eta: Option<EtaRaw>,
}

/// Everything a carrier file can hold, already validated.
#[derive(Clone, Debug)]
pub struct CarrierFile {
    pub carrier: CarrierSpec,
    pub budget: Budget,
    pub action: ScalarActionSpec,
    pub generators: Vec<SuperIntervalMatrix>,
    pub ideal: Vec<SuperIntervalMatrix>,
    pub vectors: Vec<SuperIntervalMatrix>,
    pub parts: Vec<Vec<SuperIntervalMatrix>>,
    /// A map rule together with its destination carrier.
    pub map: Option<(MapRule, CarrierSpec)>,
    pub eta: Option<EtaMap>,
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

fn shape(d: ScalarDomain, raw: &ShapeRaw, op: EntryOp) -> Result<CarrierSpec> {
    let partition = PartitionSpec::new(raw.rows, raw.cols, raw.row_cuts.clone(), raw.col_cuts.clone())?;
    let pattern = match (&raw.pattern, &raw.support, &raw.groups) {
        (_, Some(_), Some(_)) => {
            return Err(Error::InvalidCarrier("give either support or groups, not both".to_string()));
        }
        (_, Some(cells), None) => Pattern::Support(cells.clone()),
        (_, None, Some(groups)) => Pattern::Groups(groups.clone()),
        (None, None, None) => Pattern::Full,
        (Some(p), None, None) => match p.as_str() {
            "full" => Pattern::Full,
            "constant" => Pattern::Constant,
            other => return Err(Error::InvalidCarrier(format!("unknown pattern `{other}`"))),
        },
    };
    Ok(CarrierSpec::new(d, partition, op).with_pattern(pattern))
}

fn matrices(d: ScalarDomain, p: &PartitionSpec, rows: &[Vec<Literal>]) -> Result<Vec<SuperIntervalMatrix>> {
    rows.iter()
        .map(|r| {
            let endpoints = r.iter().map(|l| l.to_scalar(&d)).collect::<Result<Vec<_>>>()?;
            SuperIntervalMatrix::from_endpoints(d, p.clone(), endpoints)
        })
        .collect()
}

fn scalars(d: ScalarDomain, ls: &[Literal]) -> Result<Vec<Scalar>> {
    ls.iter().map(|l| l.to_scalar(&d)).collect()
}

fn unit_literal(l: &Option<Literal>, default: u64, what: &str) -> Result<Scalar> {
    match l {
        None => Ok(Scalar::ratio(default, 1)),
        Some(l) => {
            l.to_scalar(&ScalarDomain::UnitRationals).map_err(|_| Error::ScalarOutOfRange(format!("{what} {l:?}")))
        }
    }
}

impl CarrierFile {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: FileRaw = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| position(text, s.start));
            Error::Parse { line, column, message: e.message().to_string() }
        })?;
        let d: ScalarDomain = raw.domain.parse()?;
        let op: EntryOp = raw.op.as_deref().unwrap_or("add").parse()?;
        let mut carrier = shape(d, &raw.shape, op)?;
        if let Some(pool) = &raw.pool {
            carrier = carrier.with_pool(scalars(d, pool)?);
        }
        carrier.validate()?;

        let mut budget = Budget::default();
        budget.seed = raw.seed.unwrap_or(budget.seed);
        budget.sample_count = raw.sample_count.unwrap_or(budget.sample_count);
        budget.exhaustive_limit = raw.exhaustive_limit.unwrap_or(budget.exhaustive_limit);
        budget.coeff_bound = raw.coeff_bound.unwrap_or(budget.coeff_bound);

        let ActionRaw { kind, scalars: s } = raw.action.unwrap_or_default();
        let kind = match kind.as_deref().unwrap_or("type-i") {
            "type-i" => ActionKind::TypeI,
            "type-ii" => ActionKind::TypeII,
            "set" => ActionKind::Set,
            "semigroup" => ActionKind::Semigroup,
            "group" => ActionKind::Group,
            other => return Err(Error::InvalidCarrier(format!("unknown action kind `{other}`"))),
        };
        let set = match s {
            None => ScalarSet::Domain,
            Some(ls) => ScalarSet::Finite(scalars(d, &ls)?),
        };
        let action = ScalarActionSpec::new(set, kind);

        let p = carrier.partition.clone();
        let parts = raw.parts.iter().map(|part| matrices(d, &p, &part.generators)).collect::<Result<Vec<_>>>()?;
        let map = match &raw.map {
            None => None,
            Some(m) => {
                let dst = shape(d, &m.dst, EntryOp::Add)?;
                let cells = dst.partition.rows() * dst.partition.cols();
                let coeffs = m.coeffs.iter().map(|r| scalars(d, r)).collect::<Result<Vec<_>>>()?;
                let offset = match &m.offset {
                    Some(o) => scalars(d, o)?,
                    None => vec![d.zero(); cells],
                };
                Some((MapRule::Affine { coeffs, offset }, dst))
            }
        };
        let eta = match &raw.eta {
            None => None,
            Some(e) => Some(match e.rule.as_str() {
                "reciprocal" => EtaMap::reciprocal(unit_literal(&e.eta_zero, 1, "eta_zero")?)?,
                "class" => EtaMap::by_class(
                    unit_literal(&e.zero, 1, "zero")?,
                    unit_literal(&e.integer, 1, "integer")?,
                    unit_literal(&e.fraction, 1, "fraction")?,
                )?,
                other => return Err(Error::InvalidCarrier(format!("unknown eta rule `{other}`"))),
            }),
        };
        Ok(CarrierFile {
            generators: matrices(d, &p, &raw.generators)?,
            ideal: matrices(d, &p, &raw.ideal)?,
            vectors: matrices(d, &p, &raw.vectors)?,
            carrier,
            budget,
            action,
            parts,
            map,
            eta,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_a_full_file() {
        let f = CarrierFile::parse(
            "domain = \"z12\"\nrows = 1\ncols = 3\ncol_cuts = [1]\nop = \"hadamard\"\npool = [0, 4, 8]\nseed = 9\n\
             generators = [[4, 0, 8]]\n[action]\nscalars = [1, 5]\n",
        )
        .unwrap();
        assert_eq!(f.carrier.pool().len(), 3);
        assert_eq!(f.budget.seed, 9);
        assert_eq!(f.generators[0].to_string(), "[4 | 0 8]");
        assert_eq!(f.action.scalars, ScalarSet::Finite(vec![Scalar::Residue(1), Scalar::Residue(5)]));
    }

    #[test]
    fn reports_positions() {
        let err = CarrierFile::parse("domain = \"z12\"\nrows = \"x\"\ncols = 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err:?}");
        let err = CarrierFile::parse("domain = \"z12\"\nrows = 1\ncols = 1\npool = [13]\n").unwrap_err();
        assert!(matches!(err, Error::InvalidEndpoint { .. }));
    }
}
