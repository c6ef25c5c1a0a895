use std::fmt::{self, Display, Write as _};

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::matrix::SuperIntervalMatrix;
use crate::scalar::Scalar;

pub(crate) fn as_display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn opt_display<T: Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A concrete counterexample: the matrices (and scalars, if any) that break a law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub matrices: Vec<SuperIntervalMatrix>,
    pub scalars: Vec<Scalar>,
    pub note: String,
}

impl Witness {
    pub fn new(matrices: Vec<SuperIntervalMatrix>, note: impl Into<String>) -> Self {
        Witness { matrices, scalars: Vec::new(), note: note.into() }
    }

    pub fn with_scalars(mut self, scalars: Vec<Scalar>) -> Self {
        self.scalars = scalars;
        self
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.note)?;
        for s in &self.scalars {
            write!(f, " s={s}")?;
        }
        for m in &self.matrices {
            write!(f, " {m}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    HoldsExhaustive,
    HoldsSampled { seed: u64, samples: usize },
    HoldsStructural { argument: String },
    Fails { witness: Witness },
    Inapplicable { reason: String },
    Unknown { reason: String },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::HoldsExhaustive | Verdict::HoldsSampled { .. } | Verdict::HoldsStructural { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails { witness } => Some(witness),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::HoldsExhaustive => f.write_str("holds (exhaustive)"),
            Verdict::HoldsSampled { seed, samples } => write!(f, "holds ({samples} samples, seed {seed})"),
            Verdict::HoldsStructural { argument } => write!(f, "holds (structural: {argument})"),
            Verdict::Fails { witness } => write!(f, "fails: {witness}"),
            Verdict::Inapplicable { reason } => write!(f, "inapplicable: {reason}"),
            Verdict::Unknown { reason } => write!(f, "unknown: {reason}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhibit: Option<SuperIntervalMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub subject: String,
    #[serde(serialize_with = "opt_display")]
    pub carrier_size: Option<BigUint>,
    pub checks: Vec<AxiomCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl StructureReport {
    pub fn new(subject: impl Into<String>, carrier_size: Option<BigUint>) -> Self {
        StructureReport { subject: subject.into(), carrier_size, checks: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, axiom: impl Into<String>, verdict: Verdict) {
        self.checks.push(AxiomCheck { axiom: axiom.into(), verdict, exhibit: None });
    }

    pub fn push_with(&mut self, axiom: impl Into<String>, verdict: Verdict, exhibit: Option<SuperIntervalMatrix>) {
        self.checks.push(AxiomCheck { axiom: axiom.into(), verdict, exhibit });
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn verdict(&self, axiom: &str) -> Option<&Verdict> {
        self.check(axiom).map(|c| &c.verdict)
    }

    /// True when no check fails or is left unknown.
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.verdict.holds() || matches!(c.verdict, Verdict::Inapplicable { .. }))
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| c.verdict.fails())
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("{}\n", self.subject);
        if let Some(size) = &self.carrier_size {
            let _ = writeln!(out, "carrier size: {size}");
        }
        for c in &self.checks {
            let _ = writeln!(out, "{}: {}", c.axiom, c.verdict);
            if let Some(m) = &c.exhibit {
                let _ = writeln!(out, "  exhibit: {m}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}
