use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The coefficient world an endpoint lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarDomain {
    Residues(u64),
    NonnegIntegers,
    NonnegRationals,
    UnitRationals,
}

/// An exact endpoint value. Which variant is legal depends on the domain:
/// residues for `Residues`, naturals for `NonnegIntegers`, rationals otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Residue(u64),
    Natural(BigUint),
    Rational(BigRational),
}

impl Scalar {
    pub fn residue(r: u64) -> Self {
        Scalar::Residue(r)
    }

    pub fn nat(n: u64) -> Self {
        Scalar::Natural(BigUint::from(n))
    }

    pub fn ratio(p: u64, q: u64) -> Self {
        Scalar::Rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Residue(r) => *r == 0,
            Scalar::Natural(n) => n.is_zero(),
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    /// The value as a rational number; residues use their representative in `0..n`.
    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Residue(r) => BigRational::from_integer(BigInt::from(*r)),
            Scalar::Natural(n) => BigRational::from_integer(BigInt::from(n.clone())),
            Scalar::Rational(q) => q.clone(),
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Scalar::Residue(_) => "residue",
            Scalar::Natural(_) => "natural",
            Scalar::Rational(_) => "rational",
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Residue(r) => write!(f, "{r}"),
            Scalar::Natural(n) => write!(f, "{n}"),
            Scalar::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

impl FromStr for ScalarDomain {
    type Err = Error;

    fn from_str(tag: &str) -> Result<Self> {
        match tag {
            "nat" => Ok(ScalarDomain::NonnegIntegers),
            "qplus" => Ok(ScalarDomain::NonnegRationals),
            "unit" => Ok(ScalarDomain::UnitRationals),
            _ => {
                let digits = tag
                    .strip_prefix('z')
                    .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
                    .ok_or_else(|| Error::UnknownDomain(tag.to_string()))?;
                let n: u64 = digits.parse().map_err(|_| Error::UnknownDomain(tag.to_string()))?;
                ScalarDomain::residues(n)
            }
        }
    }
}

impl fmt::Display for ScalarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarDomain::Residues(n) => write!(f, "z{n}"),
            ScalarDomain::NonnegIntegers => f.write_str("nat"),
            ScalarDomain::NonnegRationals => f.write_str("qplus"),
            ScalarDomain::UnitRationals => f.write_str("unit"),
        }
    }
}

fn mismatch(d: &ScalarDomain, x: &Scalar) -> Error {
    Error::DomainMismatch { left: d.to_string(), right: format!("{} {x}", x.kind_name()) }
}

impl ScalarDomain {
    pub fn residues(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadModulus(n));
        }
        Ok(ScalarDomain::Residues(n))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ScalarDomain::Residues(n) if *n < 2 => Err(Error::BadModulus(*n)),
            _ => Ok(()),
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            ScalarDomain::Residues(n) => Some(*n),
            _ => None,
        }
    }

    pub fn is_ordered(&self) -> bool {
        !matches!(self, ScalarDomain::Residues(_))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ScalarDomain::Residues(_))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            ScalarDomain::Residues(_) => Scalar::Residue(0),
            ScalarDomain::NonnegIntegers => Scalar::Natural(BigUint::zero()),
            _ => Scalar::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            ScalarDomain::Residues(_) => Scalar::Residue(1),
            ScalarDomain::NonnegIntegers => Scalar::Natural(BigUint::one()),
            _ => Scalar::Rational(BigRational::one()),
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.check(x).is_ok()
    }

    pub fn check(&self, x: &Scalar) -> Result<()> {
        let ok = match (self, x) {
            (ScalarDomain::Residues(n), Scalar::Residue(r)) => r < n,
            (ScalarDomain::NonnegIntegers, Scalar::Natural(_)) => true,
            (ScalarDomain::NonnegRationals, Scalar::Rational(q)) => !q.is_negative(),
            (ScalarDomain::UnitRationals, Scalar::Rational(q)) => !q.is_negative() && *q <= BigRational::one(),
            _ => return Err(mismatch(self, x)),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidEndpoint { value: x.to_string(), domain: self.to_string() })
        }
    }

    pub fn add(&self, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        self.check(x)?;
        self.check(y)?;
        let s = self.add_raw(x, y);
        if let (ScalarDomain::UnitRationals, Scalar::Rational(q)) = (self, &s) {
            if *q > BigRational::one() {
                return Err(Error::DomainOverflow(format!("{x} + {y}")));
            }
        }
        Ok(s)
    }

    pub fn mul(&self, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_raw(x, y))
    }

    pub fn min(&self, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        self.ordered_pick(x, y, true)
    }

    pub fn max(&self, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        self.ordered_pick(x, y, false)
    }

    fn ordered_pick(&self, x: &Scalar, y: &Scalar, low: bool) -> Result<Scalar> {
        if !self.is_ordered() {
            return Err(Error::UnorderedDomain(self.to_string()));
        }
        self.check(x)?;
        self.check(y)?;
        Ok(if (x <= y) == low { x.clone() } else { y.clone() })
    }

    /// Addition on values already known to be valid; the unit-domain bound is not enforced.
    pub(crate) fn add_raw(&self, x: &Scalar, y: &Scalar) -> Scalar {
        match (self, x, y) {
            (ScalarDomain::Residues(n), Scalar::Residue(a), Scalar::Residue(b)) => {
                Scalar::Residue(((*a as u128 + *b as u128) % *n as u128) as u64)
            }
            (_, Scalar::Natural(a), Scalar::Natural(b)) => Scalar::Natural(a + b),
            (_, Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => unreachable!("add_raw on mixed scalars"),
        }
    }

    pub(crate) fn mul_raw(&self, x: &Scalar, y: &Scalar) -> Scalar {
        match (self, x, y) {
            (ScalarDomain::Residues(n), Scalar::Residue(a), Scalar::Residue(b)) => {
                Scalar::Residue(((*a as u128 * *b as u128) % *n as u128) as u64)
            }
            (_, Scalar::Natural(a), Scalar::Natural(b)) => Scalar::Natural(a * b),
            (_, Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => unreachable!("mul_raw on mixed scalars"),
        }
    }

    /// The additive inverse inside the domain, if there is one.
    pub fn neg(&self, x: &Scalar) -> Option<Scalar> {
        match (self, x) {
            (ScalarDomain::Residues(n), Scalar::Residue(r)) => Some(Scalar::Residue((n - r) % n)),
            _ if x.is_zero() => Some(x.clone()),
            _ => None,
        }
    }

    /// The multiplicative inverse inside the domain, if there is one.
    pub fn inv(&self, x: &Scalar) -> Option<Scalar> {
        match (self, x) {
            (ScalarDomain::Residues(n), Scalar::Residue(r)) => {
                let e = (*r as i128).extended_gcd(&(*n as i128));
                (e.gcd == 1).then(|| Scalar::Residue(e.x.rem_euclid(*n as i128) as u64))
            }
            (ScalarDomain::NonnegIntegers, Scalar::Natural(k)) => k.is_one().then(|| x.clone()),
            (ScalarDomain::NonnegRationals, Scalar::Rational(q)) => (!q.is_zero()).then(|| Scalar::Rational(q.recip())),
            (ScalarDomain::UnitRationals, Scalar::Rational(q)) => q.is_one().then(|| x.clone()),
            _ => None,
        }
    }

    /// Brings a scalar from a sub-domain into this one. Naturals act on the
    /// rational domains; nothing is ever reduced or coerced across residue rings.
    pub fn embed(&self, s: &Scalar) -> Result<Scalar> {
        let moved = match (self, s) {
            (ScalarDomain::NonnegRationals | ScalarDomain::UnitRationals, Scalar::Natural(k)) => {
                Scalar::Rational(BigRational::from_integer(BigInt::from(k.clone())))
            }
            _ => s.clone(),
        };
        self.check(&moved)?;
        Ok(moved)
    }

    /// Every element of a finite domain, in increasing order.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        self.modulus().map(|n| (0..n).map(Scalar::Residue).collect())
    }

    /// A small finite stand-in for the domain, used when a carrier names no pool.
    pub fn default_pool(&self) -> Vec<Scalar> {
        match self {
            ScalarDomain::Residues(_) => self.elements().unwrap_or_default(),
            ScalarDomain::NonnegIntegers => (0..10).map(Scalar::nat).collect(),
            ScalarDomain::NonnegRationals => [(0, 1), (1, 4), (1, 3), (1, 2), (1, 1), (3, 2), (2, 1), (5, 2), (3, 1)]
                .iter()
                .map(|&(p, q)| Scalar::ratio(p, q))
                .collect(),
            ScalarDomain::UnitRationals => (0..=4).map(|p| Scalar::ratio(p, 4)).collect(),
        }
    }

    /// Parses an endpoint literal. Integers everywhere; `p/q` and decimals on rational domains.
    pub fn parse_scalar(&self, token: &str) -> std::result::Result<Scalar, String> {
        let value = match self {
            ScalarDomain::Residues(_) => {
                Scalar::Residue(parse_digits(token)?.to_u64().ok_or_else(|| "residue too large".to_string())?)
            }
            ScalarDomain::NonnegIntegers => Scalar::Natural(parse_digits(token)?),
            ScalarDomain::NonnegRationals | ScalarDomain::UnitRationals => Scalar::Rational(parse_rational(token)?),
        };
        self.check(&value).map_err(|e| e.to_string())?;
        Ok(value)
    }

    /// Canonical text for an endpoint; `decimals` prints terminating rationals in decimal form.
    pub fn render(&self, x: &Scalar, decimals: bool) -> String {
        match x {
            Scalar::Rational(q) if decimals && !q.is_integer() => decimal_string(q).unwrap_or_else(|| x.to_string()),
            _ => x.to_string(),
        }
    }
}

fn parse_digits(token: &str) -> std::result::Result<BigUint, String> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err("expected a nonnegative integer".to_string());
    }
    BigUint::parse_bytes(token.as_bytes(), 10).ok_or_else(|| "expected a nonnegative integer".to_string())
}

fn parse_rational(token: &str) -> std::result::Result<BigRational, String> {
    if let Some((p, q)) = token.split_once('/') {
        let p = parse_digits(p)?;
        let q = parse_digits(q)?;
        if q.is_zero() {
            return Err("zero denominator".to_string());
        }
        return Ok(BigRational::new(BigInt::from(p), BigInt::from(q)));
    }
    if let Some((whole, frac)) = token.split_once('.') {
        if whole.is_empty() && frac.is_empty() {
            return Err("expected a number".to_string());
        }
        let whole = if whole.is_empty() { BigUint::zero() } else { parse_digits(whole)? };
        let frac_value = if frac.is_empty() { BigUint::zero() } else { parse_digits(frac)? };
        let scale = BigUint::from(10u32).pow(frac.len() as u32);
        let numer = whole * &scale + frac_value;
        return Ok(BigRational::new(BigInt::from(numer), BigInt::from(scale)));
    }
    Ok(BigRational::from_integer(BigInt::from(parse_digits(token)?)))
}

fn decimal_string(q: &BigRational) -> Option<String> {
    let mut d = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = (q * BigRational::from_integer(BigInt::from(10).pow(places))).to_integer();
    let digits = scaled.to_string();
    let places = places as usize;
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    Some(format!("{int_part}.{frac_part}"))
}

pub fn scalar_add(d: &ScalarDomain, x: &Scalar, y: &Scalar) -> Result<Scalar> {
    d.add(x, y)
}

pub fn scalar_mul(d: &ScalarDomain, x: &Scalar, y: &Scalar) -> Result<Scalar> {
    d.mul(x, y)
}

pub fn scalar_min(d: &ScalarDomain, x: &Scalar, y: &Scalar) -> Result<Scalar> {
    d.min(x, y)
}

pub fn scalar_max(d: &ScalarDomain, x: &Scalar, y: &Scalar) -> Result<Scalar> {
    d.max(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for tag in ["z2", "z12", "nat", "qplus", "unit"] {
            assert_eq!(tag.parse::<ScalarDomain>().unwrap().to_string(), tag);
        }
        assert!(matches!("z1".parse::<ScalarDomain>(), Err(Error::BadModulus(1))));
        assert!("z".parse::<ScalarDomain>().is_err());
        assert!("real".parse::<ScalarDomain>().is_err());
    }

    #[test]
    fn decimals_are_exact() {
        let u = ScalarDomain::UnitRationals;
        assert_eq!(u.parse_scalar("0.3").unwrap(), Scalar::ratio(3, 10));
        assert_eq!(u.parse_scalar("0.132").unwrap(), Scalar::ratio(33, 250));
        assert_eq!(u.parse_scalar(".5").unwrap(), Scalar::ratio(1, 2));
        assert!(u.parse_scalar("1.01").is_err());
        assert_eq!(u.render(&Scalar::ratio(3, 10), true), "0.3");
        assert_eq!(u.render(&Scalar::ratio(1, 3), true), "1/3");
        assert_eq!(u.render(&Scalar::ratio(1, 1), true), "1");
        assert_eq!(u.render(&Scalar::ratio(1, 400), true), "0.0025");
    }

    #[test]
    fn residues_reject_unreduced_literals() {
        let z = ScalarDomain::Residues(12);
        assert!(z.parse_scalar("12").is_err());
        assert_eq!(z.parse_scalar("11").unwrap(), Scalar::Residue(11));
        assert!(z.parse_scalar("1/2").is_err());
    }

    #[test]
    fn inverses() {
        let z = ScalarDomain::Residues(12);
        assert_eq!(z.inv(&Scalar::Residue(5)), Some(Scalar::Residue(5)));
        assert_eq!(z.inv(&Scalar::Residue(4)), None);
        assert_eq!(z.neg(&Scalar::Residue(0)), Some(Scalar::Residue(0)));
        assert_eq!(ScalarDomain::NonnegIntegers.neg(&Scalar::nat(3)), None);
    }

    #[test]
    fn embedding_naturals_into_rationals() {
        let q = ScalarDomain::NonnegRationals;
        assert_eq!(q.embed(&Scalar::nat(10)).unwrap(), Scalar::ratio(10, 1));
        assert!(ScalarDomain::UnitRationals.embed(&Scalar::nat(2)).is_err());
        assert!(ScalarDomain::Residues(5).embed(&Scalar::nat(2)).is_err());
    }
}
