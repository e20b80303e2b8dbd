//! Shape checks for the API responses.

use serde_json::Value;

pub type Check = fn(&Value) -> Result<(), String>;

pub const CLASSES: [&str; 8] = ["cold99", "cold95", "cold90", "ns", "hot90", "hot95", "hot99", "empty"];

fn num_or_null(v: &Value) -> bool {
    v.is_number() || v.is_null()
}

fn date(v: &Value) -> bool {
    v.as_str()
        .is_some_and(|s| chrono::NaiveDate::parse_from_str(s, "%Y-%m-%d").is_ok())
}

pub fn meta(v: &Value) -> Result<(), String> {
    for key in ["n_ingested", "n_relevant", "n_geotagged", "n_bills", "n_legislators", "cell_size"] {
        if !v[key].is_number() {
            return Err(format!("meta.{key} not a number"));
        }
    }
    if !(v["by_kind"].is_object() && v["by_outlet"].is_object() && v["topics"].is_array()) {
        return Err("meta maps missing".into());
    }
    if !v["build_timestamp"].is_string() || !v["bbox"].is_object() {
        return Err("meta timestamp/bbox".into());
    }
    Ok(())
}

pub fn timeseries(v: &Value) -> Result<(), String> {
    let rows = v.as_array().ok_or("timeseries not an array")?;
    for r in rows {
        let ok = date(&r["day"])
            && r["avg_word_sum"].is_number()
            && r["avg_compound"].as_f64().is_some_and(|c| (-1.0..=1.0).contains(&c))
            && r["n_docs"].as_u64().is_some_and(|n| n > 0)
            && r["weight"].is_number();
        if !ok {
            return Err(format!("bad timepoint {r}"));
        }
    }
    Ok(())
}

pub fn map(v: &Value) -> Result<(), String> {
    if v["type"] != "FeatureCollection" {
        return Err("not a FeatureCollection".into());
    }
    for f in v["features"].as_array().ok_or("features")? {
        let p = &f["properties"];
        let cls = p["cls"].as_str().ok_or("cls")?;
        if !CLASSES.contains(&cls) {
            return Err(format!("unknown class {cls}"));
        }
        let count = p["count"].as_u64().ok_or("count")?;
        if (cls == "empty") != (count == 0) {
            return Err("empty class must match zero count".into());
        }
        if !(p["q"].is_i64() && p["r"].is_i64() && num_or_null(&p["value"]) && num_or_null(&p["z"])) {
            return Err("cell properties".into());
        }
        let ring = f["geometry"]["coordinates"][0].as_array().ok_or("ring")?;
        if f["geometry"]["type"] != "Polygon" || ring.len() != 7 || ring[0] != ring[6] {
            return Err("polygon ring".into());
        }
    }
    Ok(())
}

pub fn terms(v: &Value) -> Result<(), String> {
    for t in v.as_array().ok_or("terms not an array")? {
        let origin_ok = matches!(t["origin"].as_str(), Some("tfidf" | "bigram" | "entity"));
        if !(t["term"].is_string() && t["score"].is_number() && origin_ok && (t["day"].is_null() || date(&t["day"]))) {
            return Err(format!("bad term {t}"));
        }
    }
    Ok(())
}

pub fn legislators(v: &Value) -> Result<(), String> {
    for l in v.as_array().ok_or("legislators not an array")? {
        let chamber_ok = matches!(l["chamber"].as_str(), Some("house" | "senate"));
        if !(l["legislator_id"].is_string() && l["name"].is_string() && chamber_ok && l["n_votes"].is_u64()) {
            return Err(format!("bad legislator {l}"));
        }
    }
    Ok(())
}

pub fn votes(v: &Value) -> Result<(), String> {
    for r in v.as_array().ok_or("votes not an array")? {
        let vote_ok = matches!(r["vote"].as_str(), Some("yea" | "nay" | "other"));
        if !(r["bill_id"].is_string() && r["title"].is_string() && r["session"].is_string() && vote_ok) {
            return Err(format!("bad vote row {r}"));
        }
    }
    Ok(())
}
