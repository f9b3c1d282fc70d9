//! JSON file formats for questionnaires and tree configurations.

use serde::{Deserialize, Serialize};

use super::questionnaire::{average_respondents, validate, Questionnaire, RawQuestionnaire};
use super::tree::AssessmentConfig;
use crate::error::{Error, Result, ValidationErrors};

/// `{"respondents":[{"id":"r1","answers":{"q1":35.0,...}}]}`
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QuestionnaireFile {
    pub respondents: Vec<RawQuestionnaire>,
}

impl QuestionnaireFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
    }

    /// Validates every respondent, then averages them into one questionnaire.
    ///
    /// Violations from several respondents are merged; messages carry the
    /// respondent id when there is more than one respondent.
    pub fn combined(&self) -> Result<Questionnaire> {
        let multi = self.respondents.len() > 1;
        let mut valid = Vec::with_capacity(self.respondents.len());
        let mut violations = Vec::new();
        for (i, raw) in self.respondents.iter().enumerate() {
            match validate(raw) {
                Ok(q) => valid.push(q),
                Err(ValidationErrors(errs)) => {
                    let who = raw.id.clone().unwrap_or_else(|| format!("#{}", i + 1));
                    violations.extend(errs.into_iter().map(|mut v| {
                        if multi {
                            v.message = format!("respondent {who}: {}", v.message);
                        }
                        v
                    }));
                }
            }
        }
        if !violations.is_empty() {
            return Err(ValidationErrors(violations).into());
        }
        average_respondents(&valid)
    }
}

pub fn config_from_json(text: &str) -> Result<AssessmentConfig> {
    let cfg: AssessmentConfig =
        serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}
