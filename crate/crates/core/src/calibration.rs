//! Exhaustive search over reduction-tree shapes against known results.
//!
//! Leaf order inside each category is fixed to questionnaire order; only the
//! bracketing varies. Category scores are computed once per shape and target,
//! then every combination of category shapes and final arrangement is scored
//! by the maximum absolute error over all target scores.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::assessment::{
    assess, reduce_tree, validate, AssessmentConfig, Category, Questionnaire, RawQuestionnaire,
    ReductionTree,
};
use crate::error::{Error, Result};
use crate::rules::default_rule_base;

/// Ties are residuals within this distance of the minimum.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Acceptance threshold on the best residual.
pub const RESIDUAL_TOLERANCE: f64 = 0.05;

/// All full binary trees over `leaves` in the given order.
pub fn enumerate_trees(leaves: &[&str]) -> Result<Vec<ReductionTree>> {
    if leaves.is_empty() || leaves.len() > 8 {
        return Err(Error::LeafCountOutOfRange(leaves.len()));
    }
    Ok(shapes(leaves))
}

fn shapes(leaves: &[&str]) -> Vec<ReductionTree> {
    if leaves.len() == 1 {
        return vec![ReductionTree::leaf(leaves[0])];
    }
    let mut out = Vec::new();
    for split in 1..leaves.len() {
        let lefts = shapes(&leaves[..split]);
        let rights = shapes(&leaves[split..]);
        for l in &lefts {
            for r in &rights {
                out.push(ReductionTree::node(l.clone(), r.clone()));
            }
        }
    }
    out
}

/// The three ways to combine the category scores. Swapping the children
/// of a node never changes a block's output, so these cover every
/// arrangement of three leaves.
pub fn final_arrangements() -> Vec<ReductionTree> {
    let l = ReductionTree::leaf;
    let n = ReductionTree::node;
    vec![
        n(n(l("core"), l("product")), l("management")),
        n(n(l("core"), l("management")), l("product")),
        n(n(l("product"), l("management")), l("core")),
    ]
}

/// Expected `[core, product, management, overall]` results for one input.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationTarget {
    pub name: String,
    pub inputs: Questionnaire,
    pub expected: [f64; 4],
    pub labels: Option<[String; 4]>,
}

/// On-disk form of a target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetSpec {
    pub name: String,
    pub answers: BTreeMap<String, Value>,
    pub expected: ExpectedScores,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<ExpectedLabels>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedScores {
    pub core: f64,
    pub product: f64,
    pub management: f64,
    pub overall: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedLabels {
    pub core: String,
    pub product: String,
    pub management: String,
    pub overall: String,
}

impl TargetSpec {
    pub fn into_target(self) -> Result<CalibrationTarget> {
        let raw = RawQuestionnaire {
            id: Some(self.name.clone()),
            answers: self.answers,
        };
        let inputs = validate(&raw)?;
        let e = self.expected;
        Ok(CalibrationTarget {
            name: self.name,
            inputs,
            expected: [e.core, e.product, e.management, e.overall],
            labels: self
                .labels
                .map(|l| [l.core, l.product, l.management, l.overall]),
        })
    }
}

pub fn targets_from_json(text: &str) -> Result<Vec<CalibrationTarget>> {
    let specs: Vec<TargetSpec> =
        serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    specs.into_iter().map(TargetSpec::into_target).collect()
}

pub const CASE_I_ANSWERS: [f64; 17] = [
    35.0, 40.0, 25.0, 35.0, 25.0, 40.0, 10.0, 5.0, 50.0, 45.0, 30.0, 10.0, 15.0, 20.0, 30.0, 35.0,
    7.0,
];
pub const CASE_II_ANSWERS: [f64; 17] = [
    40.0, 40.0, 15.0, 30.0, 50.0, 15.0, 15.0, 30.0, 50.0, 40.0, 50.0, 40.0, 40.0, 30.0, 40.0, 45.0,
    25.0,
];
pub const CASE_III_ANSWERS: [f64; 17] = [
    32.5, 27.5, 30.0, 37.5, 40.0, 37.5, 32.5, 30.0, 35.0, 37.5, 32.5, 35.0, 30.0, 35.0, 32.5, 30.0,
    37.5,
];
pub const CASE_IV_ANSWERS: [f64; 17] = [
    40.0, 30.0, 35.0, 30.0, 20.0, 40.0, 35.0, 35.0, 30.0, 30.0, 25.0, 20.0, 30.0, 35.0, 35.0, 35.0,
    35.0,
];

fn target(
    name: &str,
    answers: [f64; 17],
    expected: [f64; 4],
    labels: [&str; 4],
) -> CalibrationTarget {
    CalibrationTarget {
        name: name.to_string(),
        inputs: Questionnaire::from_values(answers).expect("built-in answers are in range"),
        expected,
        labels: Some(labels.map(String::from)),
    }
}

/// Published case studies with numeric results (cases I, III and IV).
pub fn reference_targets() -> Vec<CalibrationTarget> {
    vec![
        target(
            "case-i",
            CASE_I_ANSWERS,
            [34.84, 29.72, 8.64, 17.5],
            ["Medium to High", "Medium", "Very Low", "Low"],
        ),
        target(
            "case-iii",
            CASE_III_ANSWERS,
            [37.5, 34.84, 17.5, 27.07],
            ["High", "Medium to High", "Low", "Medium"],
        ),
        target(
            "case-iv",
            CASE_IV_ANSWERS,
            [25.65, 34.84, 17.5, 17.5],
            ["Medium", "Medium to High", "Low", "Low"],
        ),
    ]
}

/// A configuration together with its computed scores and absolute errors,
/// one row per target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredConfig {
    pub config: AssessmentConfig,
    pub notation: String,
    pub residual: f64,
    pub computed: Vec<[f64; 4]>,
    pub errors: Vec<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationResult {
    pub residual: f64,
    pub evaluated: usize,
    pub targets: Vec<String>,
    pub best: Vec<ScoredConfig>,
}

impl CalibrationResult {
    pub fn within(&self, tolerance: f64) -> bool {
        self.residual <= tolerance
    }

    pub fn contains(&self, cfg: &AssessmentConfig) -> bool {
        self.best.iter().any(|s| &s.config == cfg)
    }
}

/// Scores one configuration through the full assessment path.
pub fn score_config(cfg: &AssessmentConfig, targets: &[CalibrationTarget]) -> Result<ScoredConfig> {
    let mut computed = Vec::with_capacity(targets.len());
    let mut errors = Vec::with_capacity(targets.len());
    let mut residual: f64 = 0.0;
    for t in targets {
        let scores = assess(&t.inputs, cfg)?.scores();
        let err: [f64; 4] = std::array::from_fn(|i| (scores[i] - t.expected[i]).abs());
        residual = err.iter().copied().fold(residual, f64::max);
        computed.push(scores);
        errors.push(err);
    }
    Ok(ScoredConfig {
        config: cfg.clone(),
        notation: cfg.to_string(),
        residual,
        computed,
        errors,
    })
}

struct CategoryTable {
    trees: Vec<ReductionTree>,
    // scores[shape][target]
    scores: Vec<Vec<f64>>,
    // max error over targets for each shape
    worst: Vec<f64>,
}

fn category_table(
    category: Category,
    column: usize,
    targets: &[CalibrationTarget],
) -> Result<CategoryTable> {
    let ids: Vec<String> = category.questions().map(|q| q.id.to_string()).collect();
    let names: Vec<&str> = ids.iter().map(String::as_str).collect();
    let trees = enumerate_trees(&names)?;
    let maps: Vec<_> = targets.iter().map(|t| t.inputs.as_map()).collect();
    let rb = default_rule_base();
    let mut scores = Vec::with_capacity(trees.len());
    let mut worst = Vec::with_capacity(trees.len());
    for tree in &trees {
        let mut row = Vec::with_capacity(targets.len());
        let mut w: f64 = 0.0;
        for (t, map) in targets.iter().zip(&maps) {
            let (s, _) = reduce_tree(rb, map, tree, category.leaf_name())?;
            w = w.max((s - t.expected[column]).abs());
            row.push(s);
        }
        scores.push(row);
        worst.push(w);
    }
    Ok(CategoryTable {
        trees,
        scores,
        worst,
    })
}

/// Searches every combination of category shapes and final arrangement and
/// returns all configurations sharing the minimal residual.
pub fn calibrate(targets: &[CalibrationTarget]) -> Result<CalibrationResult> {
    if targets.is_empty() {
        return Err(Error::NoTargets);
    }
    let core = category_table(Category::CoreAsset, 0, targets)?;
    let product = category_table(Category::ProductDevelopment, 1, targets)?;
    let management = category_table(Category::Management, 2, targets)?;
    let finals = final_arrangements();
    let rb = default_rule_base();

    // Many shapes agree on a target, so final-tree results are memoized on
    // the exact category scores.
    let mut memo: HashMap<(usize, [u64; 3]), f64> = HashMap::new();
    let mut best_residual = f64::INFINITY;
    let mut best: Vec<(usize, usize, usize, usize, f64)> = Vec::new();
    let mut evaluated = 0;

    for ci in 0..core.trees.len() {
        for pi in 0..product.trees.len() {
            for mi in 0..management.trees.len() {
                let partial = core.worst[ci]
                    .max(product.worst[pi])
                    .max(management.worst[mi]);
                for (fi, final_tree) in finals.iter().enumerate() {
                    evaluated += 1;
                    let mut residual = partial;
                    for (ti, t) in targets.iter().enumerate() {
                        let triple = [
                            core.scores[ci][ti],
                            product.scores[pi][ti],
                            management.scores[mi][ti],
                        ];
                        let key = (fi, triple.map(f64::to_bits));
                        let overall = match memo.get(&key) {
                            Some(&v) => v,
                            None => {
                                let values = Category::ALL
                                    .iter()
                                    .zip(triple)
                                    .map(|(c, v)| (c.leaf_name().to_string(), v))
                                    .collect();
                                let (v, _) = reduce_tree(rb, &values, final_tree, "overall")?;
                                memo.insert(key, v);
                                v
                            }
                        };
                        residual = residual.max((overall - t.expected[3]).abs());
                    }
                    if residual < best_residual - TIE_TOLERANCE {
                        best_residual = residual;
                        best.retain(|b| b.4 <= residual + TIE_TOLERANCE);
                    }
                    if residual <= best_residual + TIE_TOLERANCE {
                        best.push((ci, pi, mi, fi, residual));
                    }
                }
            }
        }
    }
    best.retain(|b| b.4 <= best_residual + TIE_TOLERANCE);

    let best = best
        .into_iter()
        .map(|(ci, pi, mi, fi, _)| {
            let cfg = AssessmentConfig {
                core_tree: core.trees[ci].clone(),
                product_tree: product.trees[pi].clone(),
                management_tree: management.trees[mi].clone(),
                final_tree: finals[fi].clone(),
            };
            score_config(&cfg, targets)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(CalibrationResult {
        residual: best_residual,
        evaluated,
        targets: targets.iter().map(|t| t.name.clone()).collect(),
        best,
    })
}
