//! Benchmarks for the assessment engine live in `benches/`.

use splmat_core::calibration::CASE_I_ANSWERS;
use splmat_core::Questionnaire;

/// Case-study input used as the standard benchmark workload.
pub fn case_i() -> Questionnaire {
    Questionnaire::from_values(CASE_I_ANSWERS).expect("case study answers are in range")
}
