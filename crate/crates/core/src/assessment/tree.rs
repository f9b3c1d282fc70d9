use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::questions::Category;
use crate::error::{Error, Result};
use crate::rules::RuleBase;

/// Binary combination order. Leaves are question ids or category names;
/// each internal node feeds its two children into one fuzzy block.
///
/// Serialized as a string for a leaf and a two-element array for a node,
/// e.g. `[[["q1","q2"],["q3","q4"]],"q5"]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReductionTree {
    Leaf(String),
    Node(Box<ReductionTree>, Box<ReductionTree>),
}

impl ReductionTree {
    pub fn leaf(name: impl Into<String>) -> Self {
        ReductionTree::Leaf(name.into())
    }

    pub fn node(left: ReductionTree, right: ReductionTree) -> Self {
        ReductionTree::Node(Box::new(left), Box::new(right))
    }

    /// Leaves from left to right.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ReductionTree::Leaf(name) => out.push(name),
            ReductionTree::Node(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            ReductionTree::Leaf(_) => 1,
            ReductionTree::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Checks that the leaves are exactly `expected`, each appearing once.
    pub fn check_leaves<'a>(&self, expected: impl IntoIterator<Item = &'a str>) -> Result<()> {
        let leaves = self.leaves();
        let unique: BTreeSet<&str> = leaves.iter().copied().collect();
        if unique.len() != leaves.len() {
            return Err(Error::InvalidTree(format!(
                "{self}: a leaf appears more than once"
            )));
        }
        let expected: BTreeSet<&str> = expected.into_iter().collect();
        if unique != expected {
            let want: Vec<&str> = expected.into_iter().collect();
            return Err(Error::InvalidTree(format!(
                "{self}: leaves must be exactly {}",
                want.join(", ")
            )));
        }
        Ok(())
    }
}

impl fmt::Display for ReductionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionTree::Leaf(name) => f.write_str(name),
            ReductionTree::Node(l, r) => write!(f, "({l},{r})"),
        }
    }
}

/// One block evaluation recorded during a reduction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub stage: String,
    /// Subtree evaluated at this node, in parenthesized notation.
    pub node: String,
    pub inputs: [f64; 2],
    pub output: f64,
}

/// Reduces `tree` bottom-up: leaves take their bound value and every node
/// returns the block output of its two children.
pub fn reduce_tree(
    rule_base: &RuleBase,
    values: &BTreeMap<String, f64>,
    tree: &ReductionTree,
    stage: &str,
) -> Result<(f64, Vec<TraceStep>)> {
    let mut trace = Vec::new();
    let score = reduce_into(rule_base, values, tree, stage, &mut trace)?;
    Ok((score, trace))
}

fn reduce_into(
    rule_base: &RuleBase,
    values: &BTreeMap<String, f64>,
    tree: &ReductionTree,
    stage: &str,
    trace: &mut Vec<TraceStep>,
) -> Result<f64> {
    match tree {
        ReductionTree::Leaf(name) => values
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnboundLeaf(name.clone())),
        ReductionTree::Node(l, r) => {
            let left = reduce_into(rule_base, values, l, stage, trace)?;
            let right = reduce_into(rule_base, values, r, stage, trace)?;
            let output = rule_base.evaluate(left, right)?;
            trace.push(TraceStep {
                stage: stage.to_string(),
                node: tree.to_string(),
                inputs: [left, right],
                output,
            });
            Ok(output)
        }
    }
}

/// Trees for the three category reductions and the final combination.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AssessmentConfig {
    pub core_tree: ReductionTree,
    pub product_tree: ReductionTree,
    pub management_tree: ReductionTree,
    pub final_tree: ReductionTree,
}

impl AssessmentConfig {
    pub fn tree(&self, category: Category) -> &ReductionTree {
        match category {
            Category::CoreAsset => &self.core_tree,
            Category::ProductDevelopment => &self.product_tree,
            Category::Management => &self.management_tree,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for category in Category::ALL {
            let ids: Vec<String> = category.questions().map(|q| q.id.to_string()).collect();
            self.tree(category)
                .check_leaves(ids.iter().map(String::as_str))?;
        }
        self.final_tree
            .check_leaves(Category::ALL.iter().map(|c| c.leaf_name()))
    }
}

impl fmt::Display for AssessmentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "core={} product={} management={} final={}",
            self.core_tree, self.product_tree, self.management_tree, self.final_tree
        )
    }
}

fn l(name: &str) -> ReductionTree {
    ReductionTree::leaf(name)
}

fn n(left: ReductionTree, right: ReductionTree) -> ReductionTree {
    ReductionTree::node(left, right)
}

/// Cascade that reproduces the published case-study results.
pub fn default_config() -> AssessmentConfig {
    AssessmentConfig {
        core_tree: n(n(n(l("q1"), l("q2")), n(l("q3"), l("q4"))), l("q5")),
        product_tree: n(n(n(l("q6"), l("q7")), n(l("q8"), l("q9"))), l("q10")),
        management_tree: n(
            n(n(l("q11"), l("q12")), n(l("q13"), l("q14"))),
            n(n(l("q15"), l("q16")), l("q17")),
        ),
        final_tree: n(n(l("core"), l("product")), l("management")),
    }
}
