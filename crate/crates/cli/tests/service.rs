use std::collections::BTreeMap;
use std::time::Duration;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use splmat_cli::server::{router, serve};
use splmat_core::calibration::{CASE_III_ANSWERS, CASE_I_ANSWERS};

fn answers(values: &[f64; 17]) -> Value {
    let map: BTreeMap<String, f64> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| (format!("q{}", i + 1), v))
        .collect();
    json!(map)
}

async fn call(method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header(header::CONTENT_TYPE, "application/json")
            .body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = router().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (
        status,
        serde_json::from_slice(&bytes).unwrap_or(Value::Null),
    )
}

fn assert_api_error(body: &Value) {
    assert!(body["code"].is_string(), "{body}");
    assert!(body["message"].is_string(), "{body}");
}

#[tokio::test]
async fn assess_case_i() {
    let (status, body) = call(
        Method::POST,
        "/assess",
        Some(json!({"answers": answers(&CASE_I_ANSWERS)})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert!((body["overall"]["score"].as_f64().unwrap() - 17.5).abs() <= 0.01);
    assert_eq!(body["overall"]["level"], 2);
    assert_eq!(body["core_asset"]["display"], "34.84");
}

#[tokio::test]
async fn assess_case_iii() {
    let (status, body) = call(
        Method::POST,
        "/assess",
        Some(json!({"answers": answers(&CASE_III_ANSWERS)})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert!((body["overall"]["score"].as_f64().unwrap() - 27.07).abs() <= 0.05);
    assert_eq!(body["overall"]["label"], "Medium");
}

#[tokio::test]
async fn missing_answer_is_400_with_details() {
    let mut a = answers(&CASE_I_ANSWERS);
    a.as_object_mut().unwrap().remove("q1");
    let (status, body) = call(Method::POST, "/assess", Some(json!({ "answers": a }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_api_error(&body);
    assert_eq!(body["details"][0]["field"], "q1");
    assert_eq!(body["details"][0]["kind"], "missing");
}

#[tokio::test]
async fn malformed_body_is_400() {
    let req = Request::builder()
        .method(Method::POST)
        .uri("/assess")
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from("{not json"))
        .unwrap();
    let resp = router().oneshot(req).await.unwrap();
    assert_eq!(resp.status(), StatusCode::BAD_REQUEST);
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    assert_api_error(&serde_json::from_slice(&bytes).unwrap());
}

#[tokio::test]
async fn invalid_config_is_400() {
    let cfg = json!({
        "coreTree": "q1", "productTree": "q6", "managementTree": "q11",
        "finalTree": [["core", "product"], "management"]
    });
    let (status, body) = call(
        Method::POST,
        "/assess",
        Some(json!({"answers": answers(&CASE_I_ANSWERS), "config": cfg})),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "invalid_config");
}

#[tokio::test]
async fn whatif_empty_overrides() {
    let (status, body) = call(
        Method::POST,
        "/whatif",
        Some(json!({"base": answers(&CASE_I_ANSWERS)})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    for k in ["core_asset", "product_development", "management", "overall"] {
        assert_eq!(body["deltas"][k], 0.0);
    }
    assert_eq!(body["base"], body["modified"]);
}

#[tokio::test]
async fn whatif_raising_management() {
    let overrides: BTreeMap<String, f64> = (11..=17).map(|i| (format!("q{i}"), 40.0)).collect();
    let (status, body) = call(
        Method::POST,
        "/whatif",
        Some(json!({"base": answers(&CASE_I_ANSWERS), "overrides": overrides})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert!(body["deltas"]["management"].as_f64().unwrap() > 0.0);
    assert!(body["modified"]["management"]["score"].as_f64().unwrap() > 8.64);
    assert!(body["modified"]["overall"]["score"].as_f64().unwrap() > 17.5);
    assert_eq!(body["deltas"]["core_asset"], 0.0);
}

#[tokio::test]
async fn whatif_bad_overrides() {
    for overrides in [json!({"q99": 10}), json!({"q3": 51}), json!({"q3": "x"})] {
        let (status, body) = call(
            Method::POST,
            "/whatif",
            Some(json!({"base": answers(&CASE_I_ANSWERS), "overrides": overrides})),
        )
        .await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{overrides}");
        assert_eq!(body["code"], "invalid_overrides");
    }
}

#[tokio::test]
async fn model_endpoint() {
    let (status, body) = call(Method::GET, "/model", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["rules"].as_array().unwrap().len(), 9);
    assert_eq!(
        body["variables"]["input"]["terms"]
            .as_array()
            .unwrap()
            .len(),
        3
    );
    assert_eq!(
        body["defaultTrees"]["finalTree"],
        json!([["core", "product"], "management"])
    );
}

#[tokio::test]
async fn unknown_route_and_wrong_method_carry_api_errors() {
    let (status, body) = call(Method::GET, "/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_api_error(&body);
    let (status, body) = call(Method::GET, "/assess", None).await;
    assert_eq!(status, StatusCode::METHOD_NOT_ALLOWED);
    assert_api_error(&body);
}

#[tokio::test]
async fn cors_headers_present() {
    let req = Request::builder()
        .method(Method::GET)
        .uri("/health")
        .header(header::ORIGIN, "http://ui.example")
        .body(Body::empty())
        .unwrap();
    let resp = router().oneshot(req).await.unwrap();
    assert!(resp
        .headers()
        .contains_key(header::ACCESS_CONTROL_ALLOW_ORIGIN));
}

#[tokio::test]
async fn concurrent_identical_requests_agree() {
    let body = json!({"answers": answers(&CASE_III_ANSWERS)});
    let handles: Vec<_> = (0..16)
        .map(|_| {
            let b = body.clone();
            tokio::spawn(async move { call(Method::POST, "/assess", Some(b)).await.1 })
        })
        .collect();
    let mut results = Vec::new();
    for h in handles {
        results.push(h.await.unwrap());
    }
    assert!(results.windows(2).all(|w| w[0] == w[1]));
}

async fn raw_get(addr: std::net::SocketAddr, path: &str) -> std::io::Result<String> {
    use tokio::io::{AsyncReadExt, AsyncWriteExt};
    let mut stream = tokio::net::TcpStream::connect(addr).await?;
    stream
        .write_all(
            format!("GET {path} HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n")
                .as_bytes(),
        )
        .await?;
    let mut buf = String::new();
    stream.read_to_string(&mut buf).await?;
    Ok(buf)
}

#[tokio::test]
async fn health_over_tcp_then_shutdown() {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let (tx, rx) = tokio::sync::oneshot::channel::<()>();
    let server = tokio::spawn(serve(listener, async {
        let _ = rx.await;
    }));

    let reply = raw_get(addr, "/health").await.unwrap();
    assert!(reply.starts_with("HTTP/1.1 200"), "{reply}");
    assert!(reply.contains(r#"{"status":"ok"}"#));

    tx.send(()).unwrap();
    tokio::time::timeout(Duration::from_secs(5), server)
        .await
        .unwrap()
        .unwrap()
        .unwrap();
    assert!(tokio::net::TcpStream::connect(addr).await.is_err());
}
