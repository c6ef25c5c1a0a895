use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarDomain};

/// The interval `[0, a]`, kept as its upper endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    domain: ScalarDomain,
    upper: Scalar,
}

impl Interval {
    pub fn new(domain: ScalarDomain, upper: Scalar) -> Result<Self> {
        domain.check(&upper)?;
        Ok(Interval { domain, upper })
    }

    pub fn zero(domain: ScalarDomain) -> Self {
        Interval { upper: domain.zero(), domain }
    }

    pub fn unit(domain: ScalarDomain) -> Self {
        Interval { upper: domain.one(), domain }
    }

    pub fn domain(&self) -> ScalarDomain {
        self.domain
    }

    pub fn upper(&self) -> &Scalar {
        &self.upper
    }

    fn same_domain(&self, other: &Interval) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch { left: self.domain.to_string(), right: other.domain.to_string() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Interval) -> Result<Interval> {
        self.same_domain(other)?;
        let upper = self.domain.add(&self.upper, &other.upper)?;
        Ok(Interval { domain: self.domain, upper })
    }

    pub fn mul(&self, other: &Interval) -> Result<Interval> {
        self.same_domain(other)?;
        let upper = self.domain.mul(&self.upper, &other.upper)?;
        Ok(Interval { domain: self.domain, upper })
    }

    pub fn min(&self, other: &Interval) -> Result<Interval> {
        self.same_domain(other)?;
        let upper = self.domain.min(&self.upper, &other.upper)?;
        Ok(Interval { domain: self.domain, upper })
    }

    pub fn max(&self, other: &Interval) -> Result<Interval> {
        self.same_domain(other)?;
        let upper = self.domain.max(&self.upper, &other.upper)?;
        Ok(Interval { domain: self.domain, upper })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[0,{}]", self.upper)
    }
}
