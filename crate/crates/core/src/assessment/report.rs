use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::questionnaire::Questionnaire;
use super::questions::Category;
use super::tree::{reduce_tree, AssessmentConfig, TraceStep};
use crate::error::{Result, ValidationErrors};
use crate::rules::{default_rule_base, RuleBase};

/// Rounds half away from zero to two decimals.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Two-decimal display string.
pub fn display2(x: f64) -> String {
    format!("{:.2}", round2(x))
}

/// Output terms with positive membership: one name, or `"<lower> to <higher>"`.
pub fn label_of(score: f64) -> String {
    let output = default_rule_base().output();
    let active: Vec<&str> = output
        .terms
        .iter()
        .filter(|t| t.set.membership(score) > 0.0)
        .map(|t| t.name.as_str())
        .collect();
    match active.as_slice() {
        [] => String::new(),
        [only] => only.to_string(),
        [lower, .., higher] => format!("{lower} to {higher}"),
    }
}

/// 1-based index of the output term with maximal membership, ties to the lower term.
pub fn level_of(score: f64) -> u8 {
    let memberships = default_rule_base().output().fuzzify(score);
    let mut best = 0;
    for (i, &mu) in memberships.iter().enumerate() {
        if mu > memberships[best] {
            best = i;
        }
    }
    best as u8 + 1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityAssessment {
    pub score: f64,
    pub label: String,
    pub level: u8,
    pub display: String,
}

impl ActivityAssessment {
    pub fn from_score(score: f64) -> Self {
        ActivityAssessment {
            score,
            label: label_of(score),
            level: level_of(score),
            display: display2(score),
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.label == label_of(self.score)
            && self.level == level_of(self.score)
            && self.display == display2(self.score)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssessmentReport {
    pub core_asset: ActivityAssessment,
    pub product_development: ActivityAssessment,
    pub management: ActivityAssessment,
    pub overall: ActivityAssessment,
    pub trace: Vec<TraceStep>,
}

impl AssessmentReport {
    pub fn activity(&self, category: Category) -> &ActivityAssessment {
        match category {
            Category::CoreAsset => &self.core_asset,
            Category::ProductDevelopment => &self.product_development,
            Category::Management => &self.management,
        }
    }

    /// `[core, product, management, overall]` scores.
    pub fn scores(&self) -> [f64; 4] {
        [
            self.core_asset.score,
            self.product_development.score,
            self.management.score,
            self.overall.score,
        ]
    }
}

/// Category reductions followed by the final tree, with the default rule base.
pub fn assess(q: &Questionnaire, cfg: &AssessmentConfig) -> Result<AssessmentReport> {
    assess_with(default_rule_base(), q, cfg)
}

pub fn assess_with(
    rule_base: &RuleBase,
    q: &Questionnaire,
    cfg: &AssessmentConfig,
) -> Result<AssessmentReport> {
    cfg.validate()?;
    let answers = q.as_map();
    let mut trace = Vec::new();
    let mut category_scores = BTreeMap::new();
    for category in Category::ALL {
        let (score, steps) = reduce_tree(
            rule_base,
            &answers,
            cfg.tree(category),
            category.leaf_name(),
        )?;
        trace.extend(steps);
        category_scores.insert(category.leaf_name().to_string(), score);
    }
    let (overall, steps) = reduce_tree(rule_base, &category_scores, &cfg.final_tree, "overall")?;
    trace.extend(steps);

    let activity = |c: Category| ActivityAssessment::from_score(category_scores[c.leaf_name()]);
    Ok(AssessmentReport {
        core_asset: activity(Category::CoreAsset),
        product_development: activity(Category::ProductDevelopment),
        management: activity(Category::Management),
        overall: ActivityAssessment::from_score(overall),
        trace,
    })
}

/// Signed change per activity, modified minus base.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deltas {
    pub core_asset: f64,
    pub product_development: f64,
    pub management: f64,
    pub overall: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhatIf {
    pub base: AssessmentReport,
    pub modified: AssessmentReport,
    pub deltas: Deltas,
}

#[derive(Debug, thiserror::Error)]
pub enum WhatIfError {
    #[error("{0}")]
    Overrides(ValidationErrors),
    #[error(transparent)]
    Engine(#[from] crate::error::Error),
}

/// Assesses `base` and `base` with `overrides` applied under the same config.
pub fn whatif(
    base: &Questionnaire,
    overrides: &BTreeMap<String, f64>,
    cfg: &AssessmentConfig,
) -> std::result::Result<WhatIf, WhatIfError> {
    let modified_q = base
        .with_overrides(overrides)
        .map_err(WhatIfError::Overrides)?;
    let base = assess(base, cfg)?;
    let modified = assess(&modified_q, cfg)?;
    let d = |f: fn(&AssessmentReport) -> f64| f(&modified) - f(&base);
    let deltas = Deltas {
        core_asset: d(|r| r.core_asset.score),
        product_development: d(|r| r.product_development.score),
        management: d(|r| r.management.score),
        overall: d(|r| r.overall.score),
    };
    Ok(WhatIf {
        base,
        modified,
        deltas,
    })
}
