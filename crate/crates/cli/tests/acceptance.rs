//! Acceptance criteria, one line per criterion. Runs under `cargo test` with
//! its own harness so the report is always printed.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{header, Method, Request};
use http_body_util::BodyExt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tower::ServiceExt;

use splmat_cli::commands::{cmd_assess, Format};
use splmat_cli::server::router;
use splmat_core::assessment::{assess, default_config, AssessmentReport};
use splmat_core::calibration::{
    calibrate, reference_targets, CASE_III_ANSWERS, CASE_II_ANSWERS, CASE_IV_ANSWERS,
    CASE_I_ANSWERS, RESIDUAL_TOLERANCE,
};
use splmat_core::fuzzy::{make_input_variable, make_output_variable};
use splmat_core::reliability::{
    correlation_matrix, cronbach_alpha, cronbach_alpha_with, eigenvalues_symmetric, jacobi_eigen,
    Matrix, ResponseMatrix, VarianceDivisor,
};
use splmat_core::rules::default_rule_base;
use splmat_core::{evaluate_block, Questionnaire};

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn run_case(answers: [f64; 17]) -> AssessmentReport {
    assess(
        &Questionnaire::from_values(answers).unwrap(),
        &default_config(),
    )
    .unwrap()
}

fn compare_case(
    report: &AssessmentReport,
    expected: [f64; 4],
    tolerances: [f64; 4],
    labels: [&str; 4],
) -> Result<String, String> {
    let acts = [
        &report.core_asset,
        &report.product_development,
        &report.management,
        &report.overall,
    ];
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        let err = (acts[i].score - expected[i]).abs();
        worst = worst.max(err);
        check(
            err <= tolerances[i],
            format!(
                "score {i}: {:.4} vs {} (tol {})",
                acts[i].score, expected[i], tolerances[i]
            ),
        )?;
        check(
            acts[i].label == labels[i],
            format!("label {i}: `{}` vs `{}`", acts[i].label, labels[i]),
        )?;
    }
    Ok(format!(
        "scores {:.4}/{:.4}/{:.4}/{:.4}, max error {worst:.4}",
        acts[0].score, acts[1].score, acts[2].score, acts[3].score
    ))
}

fn ac1() -> Outcome {
    let t = Instant::now();
    let r = run_case(CASE_I_ANSWERS);
    let elapsed = t.elapsed();
    let detail = compare_case(
        &r,
        [34.84, 29.72, 8.64, 17.5],
        [0.01; 4],
        ["Medium to High", "Medium", "Very Low", "Low"],
    )?;
    check(
        elapsed < Duration::from_millis(100),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!("{detail}, {elapsed:?}"))
}

fn ac2() -> Outcome {
    compare_case(
        &run_case(CASE_III_ANSWERS),
        [37.5, 34.84, 17.5, 27.07],
        [0.01, 0.01, 0.01, 0.05],
        ["High", "Medium to High", "Low", "Medium"],
    )
}

fn ac3() -> Outcome {
    compare_case(
        &run_case(CASE_IV_ANSWERS),
        [25.65, 34.84, 17.5, 17.5],
        [0.01; 4],
        ["Medium", "Medium to High", "Low", "Low"],
    )
}

fn ac4() -> Outcome {
    let r = run_case(CASE_II_ANSWERS);
    check(
        r.core_asset.label == "High",
        format!("core label {}", r.core_asset.label),
    )?;
    check(
        r.product_development.label == "High",
        format!("product label {}", r.product_development.label),
    )?;
    check(
        r.management.label == "High to Very High",
        format!("management label {}", r.management.label),
    )?;
    check(
        r.overall.label == "Very High",
        format!("overall label {}", r.overall.label),
    )?;
    let levels: Vec<u8> = [
        CASE_I_ANSWERS,
        CASE_II_ANSWERS,
        CASE_III_ANSWERS,
        CASE_IV_ANSWERS,
    ]
    .into_iter()
    .map(|a| run_case(a).overall.level)
    .collect();
    check(levels == [2, 5, 3, 2], format!("levels {levels:?}"))?;
    Ok(format!(
        "case II labels High/High/High to Very High/Very High, levels A-D {levels:?}"
    ))
}

fn ac5() -> Outcome {
    let t = Instant::now();
    let result = calibrate(&reference_targets()).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    check(
        elapsed < Duration::from_secs(60),
        format!("took {elapsed:?}"),
    )?;
    check(
        result.evaluated == 14 * 14 * 132 * 3,
        format!("evaluated {}", result.evaluated),
    )?;
    check(
        result.residual <= RESIDUAL_TOLERANCE,
        format!("residual {}", result.residual),
    )?;
    check(
        result.contains(&default_config()),
        "default config not among best",
    )?;
    check(
        result
            .best
            .iter()
            .all(|b| (b.residual - result.residual).abs() <= 1e-9),
        "listed configs do not share the minimal residual",
    )?;
    Ok(format!(
        "residual {:.4}, {} tied configs listed, {elapsed:?}",
        result.residual,
        result.best.len()
    ))
}

fn ac6() -> Outcome {
    for i in 0..=20 {
        for j in 0..=20 {
            let (a, b) = (i as f64 * 2.5, j as f64 * 2.5);
            let (ab, ba) = (evaluate_block(a, b).unwrap(), evaluate_block(b, a).unwrap());
            check(
                (ab - ba).abs() <= 1e-9,
                format!("block({a},{b}) not commutative"),
            )?;
        }
    }

    // aggregates as produced by inference on random crisp input pairs
    let out = make_output_variable();
    let rb = default_rule_base();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let inf = rb
            .infer(rng.random_range(0.0..=50.0), rng.random_range(0.0..=50.0))
            .unwrap();
        let agg = &inf.aggregate;
        let exact = agg.centroid().unwrap();
        let (mut area, mut moment) = (0.0, 0.0);
        for k in 0..5000 {
            let x = (k as f64 + 0.5) * 0.01;
            let mu = agg.membership(x);
            area += mu;
            moment += x * mu;
        }
        worst = worst.max((exact - moment / area).abs());
    }
    check(worst < 1e-3, format!("centroid vs numeric error {worst}"))?;

    for (name, c) in [("Low", 17.5), ("Medium", 27.5), ("High", 37.5)] {
        let got = out.term(name).unwrap().set.centroid().unwrap();
        check((got - c).abs() <= 1e-9, format!("centroid({name}) = {got}"))?;
    }

    let input = make_input_variable();
    for k in 0..=5000 {
        let x = k as f64 * 0.01;
        check(
            input.fuzzify(x).iter().any(|&m| m > 0.0),
            format!("input uncovered at {x}"),
        )?;
        check(
            out.fuzzify(x).iter().any(|&m| m > 0.0),
            format!("output uncovered at {x}"),
        )?;
    }
    Ok(format!("21x21 grid commutative, centroid error {worst:.2e} over 1000 inferred aggregates, coverage ok"))
}

fn ac7() -> Outcome {
    let identical =
        ResponseMatrix::from_rows(vec![vec![5.0; 17], vec![20.0; 17], vec![42.0; 17]]).unwrap();
    let alpha = cronbach_alpha(&identical).map_err(|e| e.to_string())?;
    check(
        (alpha - 1.0).abs() < 1e-12,
        format!("identical-items alpha {alpha}"),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_divisor: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    let mut worst_recon: f64 = 0.0;
    for _ in 0..20 {
        let rows: Vec<Vec<f64>> = (0..30)
            .map(|_| (0..17).map(|_| rng.random_range(0.0..50.0)).collect())
            .collect();
        let m = ResponseMatrix::from_rows(rows).unwrap();
        let a = cronbach_alpha_with(&m, VarianceDivisor::Sample).unwrap();
        let b = cronbach_alpha_with(&m, VarianceDivisor::Population).unwrap();
        worst_divisor = worst_divisor.max((a - b).abs());

        let e = eigenvalues_symmetric(&correlation_matrix(&m).unwrap()).unwrap();
        worst_sum = worst_sum.max((e.eigenvalues.iter().sum::<f64>() - 17.0).abs());
        check(
            e.eigenvalues.iter().all(|&l| l >= -1e-8),
            "negative eigenvalue",
        )?;

        let mut s = Matrix::zeros(17);
        for i in 0..17 {
            for j in i..17 {
                let v = rng.random_range(-1.0..1.0);
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        let (values, vecs) = jacobi_eigen(&s).unwrap();
        for i in 0..17 {
            for j in 0..17 {
                let r: f64 = (0..17)
                    .map(|k| vecs[(i, k)] * values[k] * vecs[(j, k)])
                    .sum();
                worst_recon = worst_recon.max((r - s[(i, j)]).abs());
            }
        }
    }
    check(
        worst_divisor < 1e-12,
        format!("divisor difference {worst_divisor}"),
    )?;
    check(
        worst_sum < 1e-8,
        format!("eigenvalue sum error {worst_sum}"),
    )?;
    check(
        worst_recon < 1e-8,
        format!("reconstruction error {worst_recon}"),
    )?;
    Ok(format!(
        "divisor diff {worst_divisor:.1e}, trace diff {worst_sum:.1e}, reconstruction {worst_recon:.1e}"
    ))
}

fn score_fields(v: &Value) -> Vec<u64> {
    ["core_asset", "product_development", "management", "overall"]
        .iter()
        .map(|k| v[k]["score"].as_f64().unwrap().to_bits())
        .collect()
}

async fn ac8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for n in 0..100 {
        let answers: BTreeMap<String, f64> = (1..=17)
            .map(|i| {
                (
                    format!("q{i}"),
                    (rng.random_range(0.0..=50.0f64) * 100.0).round() / 100.0,
                )
            })
            .collect();
        let path = dir.path().join(format!("q{n}.json"));
        std::fs::write(
            &path,
            json!({"respondents": [{"id": "r", "answers": answers}]}).to_string(),
        )
        .unwrap();
        let cli: Value = serde_json::from_str(
            &cmd_assess(&path, None, Format::Json).map_err(|e| e.message().to_string())?,
        )
        .unwrap();

        let req = Request::builder()
            .method(Method::POST)
            .uri("/assess")
            .header(header::CONTENT_TYPE, "application/json")
            .body(Body::from(json!({ "answers": answers }).to_string()))
            .unwrap();
        let resp = router().oneshot(req).await.unwrap();
        let bytes = resp.into_body().collect().await.unwrap().to_bytes();
        let api: Value = serde_json::from_slice(&bytes).unwrap();
        check(
            score_fields(&cli) == score_fields(&api),
            format!("questionnaire {n}: CLI and API scores differ"),
        )?;
    }
    Ok("100 random questionnaires bit-identical across CLI and API; no UI component built".into())
}

fn main() {
    let runtime = tokio::runtime::Runtime::new().unwrap();
    let results: Vec<(&str, Outcome)> = vec![
        ("AC1 Case Study I reproduction", ac1()),
        ("AC2 Case Study III reproduction", ac2()),
        ("AC3 Case Study IV reproduction", ac3()),
        ("AC4 Case Study II labels and assessment levels", ac4()),
        ("AC5 Exhaustive tree calibration", ac5()),
        ("AC6 Engine properties", ac6()),
        ("AC7 Reliability properties", ac7()),
        ("AC8 CLI/service parity", runtime.block_on(ac8())),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("[FAIL] {name}: {reason}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
