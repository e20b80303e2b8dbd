//! Optional download of bill records from a remote vote-record API.
//!
//! The remote payload is normalized into the local bills file format. Field
//! names vary between providers, so a few common aliases are accepted.

use serde_json::Value;
use snapwatch::votes::{Bill, Chamber, Vote, VoteRecord};
use thiserror::Error;

pub const URL_VAR: &str = "SNAPWATCH_BILLS_URL";
pub const KEY_VAR: &str = "SNAPWATCH_BILLS_API_KEY";

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("{URL_VAR} is not set")]
    NotConfigured,
    #[error("request failed: {0}")]
    Request(#[from] reqwest::Error),
    #[error("server answered {0}")]
    Status(reqwest::StatusCode),
    #[error("unexpected payload: {0}")]
    Payload(String),
}

fn field<'a>(obj: &'a Value, names: &[&str]) -> Option<&'a Value> {
    names.iter().find_map(|n| obj.get(*n).filter(|v| !v.is_null()))
}

fn text(obj: &Value, names: &[&str]) -> Option<String> {
    match field(obj, names)? {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn chamber(v: &str) -> Option<Chamber> {
    match v.trim().to_ascii_lowercase().as_str() {
        "house" | "h" | "lower" | "assembly" => Some(Chamber::House),
        "senate" | "s" | "upper" => Some(Chamber::Senate),
        _ => None,
    }
}

fn vote(v: &str) -> Vote {
    match v.trim().to_ascii_lowercase().as_str() {
        "yea" | "yes" | "y" | "aye" => Vote::Yea,
        "nay" | "no" | "n" => Vote::Nay,
        _ => Vote::Other,
    }
}

fn record(v: &Value, bill: &str) -> Result<VoteRecord, FetchError> {
    let missing = |f: &str| FetchError::Payload(format!("bill {bill}: vote without {f}"));
    let in_office = match field(v, &["in_office", "active"]) {
        Some(Value::Bool(b)) => *b,
        Some(Value::Number(n)) => n.as_i64() != Some(0),
        _ => true,
    };
    Ok(VoteRecord {
        legislator_id: text(v, &["legislator_id", "people_id", "member_id"]).ok_or_else(|| missing("legislator id"))?,
        name: text(v, &["name", "member_name"]).unwrap_or_default(),
        chamber: text(v, &["chamber"])
            .as_deref()
            .and_then(chamber)
            .ok_or_else(|| missing("a known chamber"))?,
        in_office,
        vote: vote(&text(v, &["vote", "vote_text"]).unwrap_or_default()),
    })
}

/// Converts a provider payload (an array of bills or `{"bills": [...]}`)
/// into bills.
pub fn normalize(payload: &Value) -> Result<Vec<Bill>, FetchError> {
    let items = match payload {
        Value::Array(a) => a,
        Value::Object(_) => field(payload, &["bills", "results"])
            .and_then(Value::as_array)
            .ok_or_else(|| FetchError::Payload("no bills array".into()))?,
        _ => return Err(FetchError::Payload("expected an object or array".into())),
    };
    items
        .iter()
        .map(|b| {
            let id = text(b, &["id", "bill_id", "number"]).ok_or_else(|| FetchError::Payload("bill without id".into()))?;
            let votes = field(b, &["votes", "roll_call"])
                .and_then(Value::as_array)
                .ok_or_else(|| FetchError::Payload(format!("bill {id}: no votes array")))?
                .iter()
                .map(|v| record(v, &id))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Bill {
                title: text(b, &["title"]).unwrap_or_default(),
                description: text(b, &["description", "summary"]).unwrap_or_default(),
                session: text(b, &["session", "session_id", "year"]).unwrap_or_default(),
                matched_phrases: Vec::new(),
                votes,
                id,
            })
        })
        .collect()
}

/// GET `{base_url}/bills`, sending the API key as `X-API-Key` when given.
pub async fn fetch_bills(base_url: &str, api_key: Option<&str>) -> Result<Vec<Bill>, FetchError> {
    let url = format!("{}/bills", base_url.trim_end_matches('/'));
    let client = reqwest::Client::builder()
        .timeout(std::time::Duration::from_secs(30))
        .build()?;
    let mut req = client.get(&url);
    if let Some(key) = api_key {
        req = req.header("X-API-Key", key);
    }
    let resp = req.send().await?;
    if !resp.status().is_success() {
        return Err(FetchError::Status(resp.status()));
    }
    let payload: Value = resp.json().await?;
    normalize(&payload)
}
