//! Subcommand implementations. Each returns the text to print so that the
//! binary, the tests and the service share one code path.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use splmat_core::assessment::io::{config_from_json, QuestionnaireFile};
use splmat_core::assessment::{
    assess, default_config, AssessmentConfig, AssessmentReport, Category,
};
use splmat_core::calibration::{self, CalibrationResult, RESIDUAL_TOLERANCE};
use splmat_core::reliability::{analyze, AnalysisReport, ResponseMatrix};
use splmat_core::rules::default_rule_base;
use splmat_core::Error;

/// Exit status 1: the data was rejected. Exit status 2: a file could not be
/// read or written.
#[derive(Debug)]
pub enum CliError {
    Domain(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Domain(m) | CliError::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn load_config(path: Option<&Path>) -> Result<AssessmentConfig, CliError> {
    match path {
        Some(p) => Ok(config_from_json(&read_file(p)?)?),
        None => Ok(default_config()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Table,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

/// Validates, averages respondents and assesses a questionnaire file.
pub fn assess_text(input: &str, cfg: &AssessmentConfig) -> Result<AssessmentReport, CliError> {
    let questionnaire = QuestionnaireFile::from_json(input)?.combined()?;
    Ok(assess(&questionnaire, cfg)?)
}

pub fn render_table(report: &AssessmentReport) -> String {
    let rows = [
        (Category::CoreAsset.title(), &report.core_asset),
        (
            Category::ProductDevelopment.title(),
            &report.product_development,
        ),
        (Category::Management.title(), &report.management),
        ("Software Product Line Process Assessment", &report.overall),
    ];
    let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>6}  Linguistic Output",
        "Activity", "Result"
    );
    for (name, a) in rows {
        let _ = writeln!(out, "{name:<width$}  {:>6}  {}", a.display, a.label);
    }
    let _ = writeln!(
        out,
        "\nProcess assessment level: {} ({})",
        report.overall.level,
        default_rule_base().output().terms[report.overall.level as usize - 1].name
    );
    out
}

pub fn cmd_assess(input: &Path, config: Option<&Path>, format: Format) -> Result<String, CliError> {
    let cfg = load_config(config)?;
    let report = assess_text(&read_file(input)?, &cfg)?;
    Ok(match format {
        Format::Json => to_json(&report) + "\n",
        Format::Table => render_table(&report),
    })
}

/// `builtin` or a path to a JSON list of targets.
pub fn cmd_calibrate(targets: &str) -> Result<(CalibrationResult, String), CliError> {
    let targets = if targets == "builtin" {
        calibration::reference_targets()
    } else {
        calibration::targets_from_json(&read_file(Path::new(targets))?)?
    };
    let result = calibration::calibrate(&targets)?;
    let text = to_json(&json!({
        "within_tolerance": result.within(RESIDUAL_TOLERANCE),
        "tolerance": RESIDUAL_TOLERANCE,
        "result": result,
    })) + "\n";
    Ok((result, text))
}

pub fn cmd_analyze(csv: &Path) -> Result<(AnalysisReport, String), CliError> {
    let matrix = ResponseMatrix::from_csv(&read_file(csv)?)?;
    let report = analyze(&matrix)?;
    let text = to_json(&report) + "\n";
    Ok((report, text))
}

pub fn model_payload() -> serde_json::Value {
    let rb = default_rule_base();
    json!({
        "variables": {
            "input": rb.input(),
            "output": rb.output(),
        },
        "rules": rb.rules(),
    })
}

pub fn cmd_model() -> String {
    to_json(&model_payload()) + "\n"
}
