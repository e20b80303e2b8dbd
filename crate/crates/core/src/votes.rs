//! Legislative bill tracking.
//!
//! Bills are read from a JSON file of the form `{"bills": [...]}`, kept when
//! their title or description mentions one of the tracked phrases, and pruned
//! of votes cast by legislators who have left office.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VotesError {
    #[error("malformed bills file: {0}")]
    MalformedFile(String),
    #[error("unknown legislator {0}")]
    UnknownLegislator(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, VotesError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chamber {
    House,
    Senate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Vote {
    Yea,
    Nay,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoteRecord {
    pub legislator_id: String,
    pub name: String,
    pub chamber: Chamber,
    pub in_office: bool,
    pub vote: Vote,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bill {
    pub id: String,
    pub title: String,
    #[serde(default)]
    pub description: String,
    pub session: String,
    #[serde(default)]
    pub matched_phrases: Vec<String>,
    pub votes: Vec<VoteRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BillsFile {
    pub bills: Vec<Bill>,
}

/// One row of a legislator's voting record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegislatorVote {
    pub bill_id: String,
    pub title: String,
    pub session: String,
    pub vote: Vote,
}

/// A legislator seen in the filtered bills.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Legislator {
    pub legislator_id: String,
    pub name: String,
    pub chamber: Chamber,
    pub n_votes: usize,
}

pub fn parse_bills(text: &str) -> Result<Vec<Bill>> {
    serde_json::from_str::<BillsFile>(text)
        .map(|f| f.bills)
        .map_err(|e| VotesError::MalformedFile(e.to_string()))
}

pub fn load_bills(path: impl AsRef<Path>) -> Result<Vec<Bill>> {
    let text = std::fs::read_to_string(path)?;
    parse_bills(&text)
}

pub fn write_bills(path: impl AsRef<Path>, bills: &[Bill]) -> Result<()> {
    let file = BillsFile {
        bills: bills.to_vec(),
    };
    let text = serde_json::to_string_pretty(&file).map_err(|e| VotesError::MalformedFile(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// Keeps matching bills, annotates the phrases they matched and prunes
/// out-of-office votes. Bills without a remaining vote are dropped.
pub fn filter_bills<S: AsRef<str>>(bills: &[Bill], phrases: &[S]) -> Vec<Bill> {
    let phrases: Vec<String> = phrases
        .iter()
        .map(|p| p.as_ref().trim().to_lowercase())
        .filter(|p| !p.is_empty())
        .collect();
    bills
        .iter()
        .filter_map(|bill| {
            let haystack = format!("{}\n{}", bill.title, bill.description).to_lowercase();
            let matched: Vec<String> = phrases
                .iter()
                .filter(|p| haystack.contains(p.as_str()))
                .cloned()
                .collect();
            if matched.is_empty() {
                return None;
            }
            let votes: Vec<VoteRecord> = bill.votes.iter().filter(|v| v.in_office).cloned().collect();
            if votes.is_empty() {
                return None;
            }
            Some(Bill {
                matched_phrases: matched,
                votes,
                ..bill.clone()
            })
        })
        .collect()
}

/// Every vote cast by `legislator_id`, sorted by session then bill id.
pub fn legislator_record(bills: &[Bill], legislator_id: &str) -> Result<Vec<LegislatorVote>> {
    let mut rows: Vec<LegislatorVote> = bills
        .iter()
        .flat_map(|b| {
            b.votes
                .iter()
                .filter(|v| v.legislator_id == legislator_id)
                .map(|v| LegislatorVote {
                    bill_id: b.id.clone(),
                    title: b.title.clone(),
                    session: b.session.clone(),
                    vote: v.vote,
                })
        })
        .collect();
    if rows.is_empty() {
        return Err(VotesError::UnknownLegislator(legislator_id.to_string()));
    }
    rows.sort_by(|a, b| (&a.session, &a.bill_id).cmp(&(&b.session, &b.bill_id)));
    Ok(rows)
}

/// Distinct legislators in the bills, sorted by id.
pub fn legislators(bills: &[Bill]) -> Vec<Legislator> {
    let mut map: std::collections::BTreeMap<&str, Legislator> = Default::default();
    for v in bills.iter().flat_map(|b| &b.votes) {
        map.entry(&v.legislator_id)
            .or_insert_with(|| Legislator {
                legislator_id: v.legislator_id.clone(),
                name: v.name.clone(),
                chamber: v.chamber,
                n_votes: 0,
            })
            .n_votes += 1;
    }
    map.into_values().collect()
}
