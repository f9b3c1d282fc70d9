//! The 17-question questionnaire and the cascade that turns answers into
//! activity and overall maturity assessments.

mod questionnaire;
mod questions;
mod report;
mod tree;

pub mod io;

pub use questionnaire::{average_respondents, validate, Questionnaire, RawQuestionnaire};
pub use questions::{question, Category, Question, QuestionId, QUESTIONS, QUESTION_COUNT};
pub use report::{
    assess, assess_with, display2, label_of, level_of, round2, whatif, ActivityAssessment,
    AssessmentReport, Deltas, WhatIf, WhatIfError,
};
pub use tree::{default_config, reduce_tree, AssessmentConfig, ReductionTree, TraceStep};
