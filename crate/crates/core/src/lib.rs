//! Fuzzy-logic maturity assessment for software product line processes.
//!
//! Seventeen questionnaire answers on a 0-50 scale are combined pairwise by
//! a two-input Mamdani block (min matching, min implication, max aggregation,
//! centroid defuzzification) following configurable reduction trees. The
//! result is a crisp score, a linguistic label and a 1-5 level for core-asset
//! development, product development, management and the overall process.

pub mod assessment;
pub mod calibration;
pub mod error;
pub mod fuzzy;
pub mod reliability;
pub mod rules;

pub use assessment::{
    assess, default_config, label_of, level_of, whatif, ActivityAssessment, AssessmentConfig,
    AssessmentReport, Category, QuestionId, Questionnaire, ReductionTree,
};
pub use error::{Error, Result, ValidationErrors, Violation, ViolationKind};
pub use fuzzy::{
    make_input_variable, make_output_variable, LinguisticVariable, PiecewiseLinearSet, Trapezoid,
};
pub use rules::{evaluate_block, splmat_rule_base, RuleBase};
