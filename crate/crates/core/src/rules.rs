//! Two-input Mamdani rule bases: min matching, min implication, max
//! aggregation and centroid defuzzification.

use std::sync::LazyLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fuzzy::{
    make_input_variable, make_output_variable, LinguisticVariable, PiecewiseLinearSet,
};

/// Which variable a rule atom refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Slot {
    #[serde(rename = "Input_1")]
    Input1,
    #[serde(rename = "Input_2")]
    Input2,
    Output,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleAtom {
    pub variable: Slot,
    pub term: String,
}

/// `if Input_1 is A and Input_2 is B then Output is C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub antecedents: [RuleAtom; 2],
    pub conclusion: RuleAtom,
}

impl Rule {
    pub fn new(first: &str, second: &str, conclusion: &str) -> Self {
        Rule {
            antecedents: [
                RuleAtom {
                    variable: Slot::Input1,
                    term: first.to_string(),
                },
                RuleAtom {
                    variable: Slot::Input2,
                    term: second.to_string(),
                },
            ],
            conclusion: RuleAtom {
                variable: Slot::Output,
                term: conclusion.to_string(),
            },
        }
    }
}

/// One rule's contribution to an inference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiringRecord {
    pub rule: usize,
    pub strength: f64,
    pub clipped: PiecewiseLinearSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Inference {
    pub aggregate: PiecewiseLinearSet,
    pub trace: Vec<FiringRecord>,
}

/// An ordered rule list bound to its input and output variables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleBase {
    input: LinguisticVariable,
    output: LinguisticVariable,
    rules: Vec<Rule>,
    // term indices resolved at construction: (input_1, input_2, output)
    #[serde(skip)]
    resolved: Vec<(usize, usize, usize)>,
}

impl RuleBase {
    pub fn new(
        input: LinguisticVariable,
        output: LinguisticVariable,
        rules: Vec<Rule>,
    ) -> Result<Self> {
        let mut resolved = Vec::with_capacity(rules.len());
        for (i, rule) in rules.iter().enumerate() {
            let [first, second] = &rule.antecedents;
            if first.variable != Slot::Input1 || second.variable != Slot::Input2 {
                return Err(Error::InvalidRuleBase(format!(
                    "rule {i}: antecedents must target Input_1 then Input_2"
                )));
            }
            if rule.conclusion.variable != Slot::Output {
                return Err(Error::InvalidRuleBase(format!(
                    "rule {i}: conclusion must target Output"
                )));
            }
            let lookup = |var: &LinguisticVariable, term: &str| {
                var.term_index(term).ok_or_else(|| Error::UnknownTerm {
                    variable: var.name.clone(),
                    term: term.to_string(),
                })
            };
            resolved.push((
                lookup(&input, &first.term)?,
                lookup(&input, &second.term)?,
                lookup(&output, &rule.conclusion.term)?,
            ));
        }
        Ok(RuleBase {
            input,
            output,
            rules,
            resolved,
        })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn input(&self) -> &LinguisticVariable {
        &self.input
    }

    pub fn output(&self) -> &LinguisticVariable {
        &self.output
    }

    /// Conclusion term for an antecedent pair, if a rule covers it.
    pub fn lookup(&self, first: &str, second: &str) -> Option<&str> {
        self.rules
            .iter()
            .find(|r| r.antecedents[0].term == first && r.antecedents[1].term == second)
            .map(|r| r.conclusion.term.as_str())
    }

    /// `min(mu_A(x1), mu_B(x2))` for rule `index`.
    pub fn firing_strength(&self, index: usize, x1: f64, x2: f64) -> Result<f64> {
        self.input.check_in_universe(x1)?;
        self.input.check_in_universe(x2)?;
        let (t1, t2, _) = *self
            .resolved
            .get(index)
            .ok_or_else(|| Error::InvalidRuleBase(format!("no rule at index {index}")))?;
        let terms = &self.input.terms;
        Ok(terms[t1]
            .set
            .membership(x1)
            .min(terms[t2].set.membership(x2)))
    }

    pub fn infer(&self, x1: f64, x2: f64) -> Result<Inference> {
        self.input.check_in_universe(x1)?;
        self.input.check_in_universe(x2)?;
        let m1 = self.input.fuzzify(x1);
        let m2 = self.input.fuzzify(x2);
        let (lo, hi) = self.output.universe;
        let mut aggregate = PiecewiseLinearSet::zero(lo, hi);
        let mut trace = Vec::new();
        for (rule, &(t1, t2, out)) in self.resolved.iter().enumerate() {
            let strength = m1[t1].min(m2[t2]);
            if strength <= 0.0 {
                continue;
            }
            let clipped = self.output.terms[out].set.clip(strength)?;
            aggregate = aggregate.union(&clipped);
            trace.push(FiringRecord {
                rule,
                strength,
                clipped,
            });
        }
        Ok(Inference { aggregate, trace })
    }

    /// Crisp output of one two-input block.
    pub fn evaluate(&self, x1: f64, x2: f64) -> Result<f64> {
        self.infer(x1, x2)?.aggregate.centroid()
    }
}

/// The nine-rule truth table used by every assessment block.
pub fn splmat_rule_base() -> RuleBase {
    let rules = [
        ("Yes", "Yes", "Very High"),
        ("No", "No", "Very Low"),
        ("Partial", "Partial", "Low"),
        ("Yes", "No", "Medium"),
        ("No", "Yes", "Medium"),
        ("Yes", "Partial", "High"),
        ("Partial", "Yes", "High"),
        ("Partial", "No", "Low"),
        ("No", "Partial", "Low"),
    ]
    .iter()
    .map(|&(a, b, c)| Rule::new(a, b, c))
    .collect();
    RuleBase::new(make_input_variable(), make_output_variable(), rules)
        .expect("built-in rule base is well formed")
}

static DEFAULT_RULE_BASE: LazyLock<RuleBase> = LazyLock::new(splmat_rule_base);

/// Shared instance of [`splmat_rule_base`].
pub fn default_rule_base() -> &'static RuleBase {
    &DEFAULT_RULE_BASE
}

/// Centroid of the default rule base's aggregate for `(x1, x2)`.
pub fn evaluate_block(x1: f64, x2: f64) -> Result<f64> {
    DEFAULT_RULE_BASE.evaluate(x1, x2)
}
