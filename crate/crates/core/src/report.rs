//! Machine-readable results of checker sweeps.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::padic::{PadicContext, Valuation};
use crate::poly::TermWitness;

/// How the observed valuation must relate to the required one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "==")]
    Exactly,
}

impl Relation {
    pub fn holds(self, observed: Valuation, required: Valuation) -> bool {
        match self {
            Relation::AtLeast => observed >= required,
            Relation::Exactly => observed == required,
        }
    }
}

/// One failed instance, with everything needed to reproduce it by hand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub instance: String,
    /// Cycle type, exponent vector, or argument tuple of the failing instance.
    pub witness: Vec<u64>,
    pub difference: String,
    /// Empty when the claim is an exact identity.
    pub required_modulus: String,
    pub observed_valuation: Valuation,
    pub required_valuation: Valuation,
    pub relation: Relation,
}

impl Violation {
    /// Builds a violation if `difference` does not meet the requirement, `None` otherwise.
    pub fn check(
        instance: impl FnOnce() -> String,
        witness: impl FnOnce() -> Vec<u64>,
        difference: &BigInt,
        modulus: Option<&BigInt>,
        required: Valuation,
        relation: Relation,
        ctx: &PadicContext,
    ) -> Option<Violation> {
        let observed = ctx.vp(difference);
        if relation.holds(observed, required) {
            return None;
        }
        Some(Violation {
            instance: instance(),
            witness: witness(),
            difference: difference.to_string(),
            required_modulus: modulus.map(ToString::to_string).unwrap_or_default(),
            observed_valuation: observed,
            required_valuation: required,
            relation,
        })
    }

    /// Congruence requirement `difference ∈ modulus·Z_p`.
    pub fn modulo(
        instance: impl FnOnce() -> String,
        witness: impl FnOnce() -> Vec<u64>,
        difference: &BigInt,
        modulus: &BigInt,
        ctx: &PadicContext,
    ) -> Option<Violation> {
        let required = ctx.vp(modulus);
        Violation::check(instance, witness, difference, Some(modulus), required, Relation::AtLeast, ctx)
    }

    /// Exact identity requirement `difference == 0`.
    pub fn identity(
        instance: impl FnOnce() -> String,
        witness: impl FnOnce() -> Vec<u64>,
        difference: &BigInt,
        ctx: &PadicContext,
    ) -> Option<Violation> {
        Violation::check(instance, witness, difference, None, Valuation::Infinite, Relation::AtLeast, ctx)
    }

    pub fn from_term(label: &str, w: TermWitness, modulus: &BigInt, ctx: &PadicContext) -> Violation {
        Violation {
            instance: format!("{label}: coefficient of {:?}", w.exponents),
            witness: w.exponents.iter().map(|&e| u64::from(e)).collect(),
            difference: w.difference.to_string(),
            required_modulus: modulus.to_string(),
            observed_valuation: w.valuation,
            required_valuation: ctx.vp(modulus),
            relation: Relation::AtLeast,
        }
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Outcome of one checker run over one parameter tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub checker: String,
    pub params: BTreeMap<String, Value>,
    pub instances: u64,
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub observations: BTreeMap<String, Value>,
    /// Set for sweeps whose outcome is recorded but not asserted (p = 2).
    #[serde(default, skip_serializing_if = "is_false")]
    pub advisory: bool,
}

impl CongruenceReport {
    pub fn new(checker: &str) -> Self {
        CongruenceReport {
            checker: checker.to_string(),
            params: BTreeMap::new(),
            instances: 0,
            violations: Vec::new(),
            seed: None,
            elapsed_ms: 0,
            observations: BTreeMap::new(),
            advisory: false,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn observe(&mut self, key: &str, value: impl Into<Value>) {
        self.observations.insert(key.to_string(), value.into());
    }

    /// Counts one instance and records its violation, if any.
    pub fn record(&mut self, violation: Option<Violation>) {
        self.instances += 1;
        self.violations.extend(violation);
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Whether this report should fail a sweep.
    pub fn is_failure(&self) -> bool {
        !self.advisory && !self.passed()
    }

    /// One-line human-readable summary.
    pub fn summary(&self) -> String {
        let status = match (self.passed(), self.advisory) {
            (true, _) => "PASS",
            (false, true) => "NOTE",
            (false, false) => "FAIL",
        };
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let mut line = format!(
            "{status} {} {} instances={} violations={}",
            self.checker,
            params.join(" "),
            self.instances,
            self.violations.len()
        );
        if let Some(seed) = self.seed {
            line.push_str(&format!(" seed={seed}"));
        }
        for (k, v) in &self.observations {
            line.push_str(&format!(" {k}={v}"));
        }
        line
    }
}

impl fmt::Display for CongruenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())?;
        for v in &self.violations {
            write!(
                f,
                "\n  {}: difference {} has valuation {}, needs {} {}",
                v.instance,
                v.difference,
                v.observed_valuation,
                match v.relation {
                    Relation::AtLeast => ">=",
                    Relation::Exactly => "==",
                },
                v.required_valuation
            )?;
        }
        Ok(())
    }
}
