use serde_json::Value;
use snapwatch_wasm::{hotspot_demo, is_relevant, score_text};

#[test]
fn scores_sentences() {
    let v: Value = serde_json::from_str(&score_text("Food stamps help families. The cuts are awful!", 2)).unwrap();
    assert_eq!(v["relevant"], true);
    let s = v["sentences"].as_array().unwrap();
    assert_eq!(s.len(), 2);
    assert_eq!(s[0]["weight"], 2.0);
    assert!(s[0]["compound"].as_f64().unwrap() > 0.0);
    assert!(s[1]["compound"].as_f64().unwrap() < 0.0);
    assert!(v["doc_weight"].as_f64().unwrap() > 0.0);
}

#[test]
fn reports_errors_as_json() {
    let v: Value = serde_json::from_str(&score_text("   ", 1)).unwrap();
    assert!(v["error"].is_string());
    let v: Value = serde_json::from_str(&score_text("Fine.", 9)).unwrap();
    assert!(v["error"].is_string());
}

#[test]
fn hotspot_demo_finds_the_block() {
    let v: Value = serde_json::from_str(&hotspot_demo(3, 3, 0.1, -1.0)).unwrap();
    let features = v["features"].as_array().unwrap();
    assert_eq!(features.len(), 37);
    let centre = features
        .iter()
        .find(|f| f["properties"]["q"] == 0 && f["properties"]["r"] == 0)
        .unwrap();
    assert!(centre["properties"]["cls"].as_str().unwrap().starts_with("cold"));
    assert_eq!(hotspot_demo(3, 3, 0.1, -1.0), hotspot_demo(3, 3, 0.1, -1.0));
}

#[test]
fn relevance() {
    assert!(is_relevant("EBT cards work again"));
    assert!(!is_relevant("Oh snap, what a game"));
}
