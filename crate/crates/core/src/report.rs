//! Report primitives shared by the axiom and property checkers. Exact checks
//! pass or fail outright; bounded checks distinguish evidence from proof.

use serde::{Deserialize, Serialize};

/// Outcome of a single named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    /// Decided exactly.
    Pass,
    /// No counterexample within a deterministic bounded enumeration; this is
    /// evidence, not a proof.
    PassBounded { samples: u64 },
    /// Failed with a re-verifiable witness, rendered canonically.
    Fail { witness: String },
    /// The search budget ran out before a decision.
    BudgetExhausted,
}

impl Outcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass | Outcome::PassBounded { .. })
    }
}

/// A labelled list of check outcomes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<(String, Outcome)>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, outcome: Outcome) {
        self.checks.push((name.into(), outcome));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|(_, o)| o.is_pass())
    }

    pub fn outcome(&self, name: &str) -> Option<&Outcome> {
        self.checks.iter().find(|(n, _)| n == name).map(|(_, o)| o)
    }

    pub fn first_failure(&self) -> Option<(&str, &Outcome)> {
        self.checks.iter().find(|(_, o)| !o.is_pass()).map(|(n, o)| (n.as_str(), o))
    }

    pub fn budget_exhausted(&self) -> bool {
        self.checks.iter().any(|(_, o)| matches!(o, Outcome::BudgetExhausted))
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (name, outcome) in &self.checks {
            match outcome {
                Outcome::Pass => writeln!(f, "{name}: pass")?,
                Outcome::PassBounded { samples } => {
                    writeln!(f, "{name}: pass (bounded evidence, {samples} samples)")?
                }
                Outcome::Fail { witness } => writeln!(f, "{name}: FAIL [{witness}]")?,
                Outcome::BudgetExhausted => writeln!(f, "{name}: budget exhausted")?,
            }
        }
        Ok(())
    }
}
