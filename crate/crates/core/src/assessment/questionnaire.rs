use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::questions::{QuestionId, QUESTION_COUNT};
use crate::error::{Error, Result, ValidationErrors, Violation, ViolationKind};
use crate::fuzzy::{SCORE_MAX, SCORE_MIN};

/// Answers as they arrive from a file or request body, before validation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RawQuestionnaire {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub answers: BTreeMap<String, Value>,
}

/// A complete, in-range set of 17 answers.
#[derive(Debug, Clone, PartialEq)]
pub struct Questionnaire {
    respondent: Option<String>,
    answers: [f64; QUESTION_COUNT],
}

fn range_violation(field: String, value: f64) -> Violation {
    Violation {
        message: format!("{field}: value {value} is outside the range {SCORE_MIN}-{SCORE_MAX}"),
        field,
        kind: ViolationKind::OutOfRange,
    }
}

fn in_range(v: f64) -> bool {
    v.is_finite() && (SCORE_MIN..=SCORE_MAX).contains(&v)
}

impl Questionnaire {
    pub fn from_values(
        answers: [f64; QUESTION_COUNT],
    ) -> std::result::Result<Self, ValidationErrors> {
        let violations: Vec<Violation> = QuestionId::all()
            .filter(|id| !in_range(answers[id.index()]))
            .map(|id| range_violation(id.to_string(), answers[id.index()]))
            .collect();
        if violations.is_empty() {
            Ok(Questionnaire {
                respondent: None,
                answers,
            })
        } else {
            Err(ValidationErrors(violations))
        }
    }

    pub fn with_respondent(mut self, id: impl Into<String>) -> Self {
        self.respondent = Some(id.into());
        self
    }

    pub fn respondent(&self) -> Option<&str> {
        self.respondent.as_deref()
    }

    pub fn get(&self, id: QuestionId) -> f64 {
        self.answers[id.index()]
    }

    pub fn values(&self) -> &[f64; QUESTION_COUNT] {
        &self.answers
    }

    /// Answers keyed by question id string, for tree reduction.
    pub fn as_map(&self) -> BTreeMap<String, f64> {
        QuestionId::all()
            .map(|id| (id.to_string(), self.get(id)))
            .collect()
    }

    pub fn to_raw(&self) -> RawQuestionnaire {
        RawQuestionnaire {
            id: self.respondent.clone(),
            answers: QuestionId::all()
                .map(|id| (id.to_string(), Value::from(self.get(id))))
                .collect(),
        }
    }

    /// Copy with some answers replaced. Every override id and value is checked.
    pub fn with_overrides(
        &self,
        overrides: &BTreeMap<String, f64>,
    ) -> std::result::Result<Self, ValidationErrors> {
        let mut answers = self.answers;
        let mut violations = Vec::new();
        for (key, &value) in overrides {
            match key.parse::<QuestionId>() {
                Ok(id) if in_range(value) => answers[id.index()] = value,
                Ok(_) => violations.push(range_violation(key.clone(), value)),
                Err(()) => violations.push(unknown(key)),
            }
        }
        if violations.is_empty() {
            Ok(Questionnaire {
                respondent: self.respondent.clone(),
                answers,
            })
        } else {
            Err(ValidationErrors(violations))
        }
    }
}

fn unknown(key: &str) -> Violation {
    Violation {
        field: key.to_string(),
        kind: ViolationKind::UnknownQuestion,
        message: format!("{key}: unknown question id (expected q1-q17)"),
    }
}

/// Checks completeness, numeric type and range of every answer.
pub fn validate(raw: &RawQuestionnaire) -> std::result::Result<Questionnaire, ValidationErrors> {
    let mut violations = Vec::new();
    let mut answers = [f64::NAN; QUESTION_COUNT];
    let mut seen = [false; QUESTION_COUNT];

    for (key, value) in &raw.answers {
        let Ok(id) = key.parse::<QuestionId>() else {
            violations.push(unknown(key));
            continue;
        };
        seen[id.index()] = true;
        match value.as_f64() {
            Some(v) if in_range(v) => answers[id.index()] = v,
            Some(v) => violations.push(range_violation(key.clone(), v)),
            None => violations.push(Violation {
                field: key.clone(),
                kind: ViolationKind::NotNumeric,
                message: format!("{key}: expected a number, found {value}"),
            }),
        }
    }
    for id in QuestionId::all() {
        if !seen[id.index()] {
            violations.push(Violation {
                field: id.to_string(),
                kind: ViolationKind::Missing,
                message: format!("{id}: answer is missing"),
            });
        }
    }
    violations.sort_by_key(|v| {
        v.field
            .parse::<QuestionId>()
            .map(|id| id.number() as usize)
            .unwrap_or(usize::MAX)
    });

    if violations.is_empty() {
        Ok(Questionnaire {
            respondent: raw.id.clone(),
            answers,
        })
    } else {
        Err(ValidationErrors(violations))
    }
}

/// Per-question arithmetic mean over all respondents.
pub fn average_respondents(respondents: &[Questionnaire]) -> Result<Questionnaire> {
    if respondents.is_empty() {
        return Err(Error::NoRespondents);
    }
    if respondents.len() == 1 {
        return Ok(respondents[0].clone());
    }
    let n = respondents.len() as f64;
    let mut answers = [0.0; QUESTION_COUNT];
    for (i, slot) in answers.iter_mut().enumerate() {
        *slot = respondents.iter().map(|r| r.answers[i]).sum::<f64>() / n;
    }
    Ok(Questionnaire {
        respondent: None,
        answers,
    })
}
