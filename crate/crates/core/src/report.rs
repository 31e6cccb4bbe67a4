//! Violation reports shared by every validator.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// The named checks a validator can fail. Corpus expectations refer to these by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// Missing components, wrong shapes, negative entries.
    Structure,
    #[serde(rename = "condition-1")]
    Composition,
    #[serde(rename = "condition-2")]
    PairingCompatibility,
    #[serde(rename = "condition-3")]
    Hereditary,
    #[serde(rename = "condition-4")]
    Decomposition,
    SimplexBase,
    Lattice,
    Additivity,
    WellDefinedness,
    Positivity,
    Scale,
    K1,
    Square,
    Compatibility,
    Affinity,
    Completeness,
    /// A claimed isomorphism whose composites are not identities.
    Inverse,
}

impl Check {
    pub const OBJECT_S: [Check; 6] = [
        Check::Structure,
        Check::Composition,
        Check::PairingCompatibility,
        Check::Hereditary,
        Check::Decomposition,
        Check::SimplexBase,
    ];

    pub const OBJECT_E: [Check; 9] = [
        Check::Structure,
        Check::Composition,
        Check::PairingCompatibility,
        Check::Hereditary,
        Check::Decomposition,
        Check::SimplexBase,
        Check::Lattice,
        Check::Additivity,
        Check::WellDefinedness,
    ];

    pub const MORPHISM_S: [Check; 6] = [
        Check::Positivity,
        Check::Scale,
        Check::K1,
        Check::Completeness,
        Check::Square,
        Check::Compatibility,
    ];

    pub const MORPHISM_E: [Check; 6] = [
        Check::Positivity,
        Check::Scale,
        Check::K1,
        Check::Completeness,
        Check::Compatibility,
        Check::Affinity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Structure => "structure",
            Check::Composition => "condition-1",
            Check::PairingCompatibility => "condition-2",
            Check::Hereditary => "condition-3",
            Check::Decomposition => "condition-4",
            Check::SimplexBase => "simplex-base",
            Check::Lattice => "lattice",
            Check::Additivity => "additivity",
            Check::WellDefinedness => "well-definedness",
            Check::Positivity => "positivity",
            Check::Scale => "scale",
            Check::K1 => "k1",
            Check::Square => "square",
            Check::Compatibility => "compatibility",
            Check::Affinity => "affinity",
            Check::Completeness => "completeness",
            Check::Inverse => "inverse",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub check: Check,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, check: Check, detail: impl Into<String>) {
        self.violations.push(Violation { check, detail: detail.into() });
    }

    pub fn extend(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn failed_checks(&self) -> BTreeSet<Check> {
        self.violations.iter().map(|v| v.check).collect()
    }

    pub fn fails(&self, check: Check) -> bool {
        self.violations.iter().any(|v| v.check == check)
    }

    pub fn into_result(self) -> Result<(), crate::Error> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(crate::Error::Invalid(self))
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "violation [{}] {}", v.check, v.detail)?;
        }
        Ok(())
    }
}
