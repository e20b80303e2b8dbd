use std::collections::HashMap;
use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use snapwatch::corpus::{self, InputFormat, RelevanceFilter};
use snapwatch::{classifier, geo, sentiment, terms, votes, Document, DocumentScore};
use snapwatch_service::artifacts::{read_jsonl, write_json, write_jsonl};
use snapwatch_service::snapshot::{self, timeseries_of};
use snapwatch_service::{api, fetch, Config, Metric, Snapshot};

// println! panics when stdout is a closed pipe; this returns the error instead.
macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(io::stdout().lock(), $($arg)*)?
    };
}

#[derive(Parser)]
#[command(name = "snapwatch", version, about = "SNAP coverage sentiment, hot spots, terms and votes")]
struct Cli {
    /// Pipeline configuration file (key = value).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a JSONL corpus and keep the relevant documents.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score documents; writes DocumentScore JSONL.
    Score {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Daily weighted averages from a score file.
    Timeseries {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        from: Option<chrono::NaiveDate>,
        #[arg(long)]
        to: Option<chrono::NaiveDate>,
    },
    /// Hex grid with Gi* hot/cold spots as GeoJSON.
    Hotspots {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// compound or word_sum; defaults to the configured metric.
        #[arg(long)]
        metric: Option<Metric>,
    },
    /// Word-cloud terms, optionally with LDA topics.
    Terms {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        topics: Option<PathBuf>,
    },
    /// Filter bills by phrase and prune votes.
    Votes {
        #[arg(long)]
        bills: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also print this legislator's record.
        #[arg(long)]
        legislator: Option<String>,
    },
    /// Train a Naive Bayes model on labelled documents.
    Train {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Report k-fold cross-validated accuracy.
        #[arg(long)]
        folds: Option<usize>,
    },
    /// Label documents with a trained model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Download bills from the configured vote-record API.
    FetchBills {
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve the read-only API.
    Serve {
        /// Prebuilt snapshot; otherwise one is built from the inputs.
        #[arg(long, conflicts_with_all = ["input", "lexicon", "bills"])]
        snapshot: Option<PathBuf>,
        #[arg(long, required_unless_present = "snapshot")]
        input: Option<PathBuf>,
        #[arg(long, required_unless_present = "snapshot")]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        bills: Option<PathBuf>,
        /// Defaults to 127.0.0.1 and the PORT variable (8080 when unset).
        #[arg(long)]
        bind: Option<SocketAddr>,
    },
    /// Run the whole pipeline and write every artifact.
    All {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        bills: Option<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn load_config(path: Option<&Path>) -> Result<Config> {
    match path {
        Some(p) => Ok(Config::load(p)?),
        None => Ok(Config::default()),
    }
}

fn load_docs(path: &Path) -> Result<Vec<Document>> {
    corpus::load_documents(path, InputFormat::Jsonl).with_context(|| format!("loading {}", path.display()))
}

/// Pairs each score with its document, in score order.
fn joined<'a>(docs: &'a [Document], scores: &'a [DocumentScore]) -> Result<Vec<(&'a Document, &'a DocumentScore)>> {
    let by_id: HashMap<&str, &Document> = docs.iter().map(|d| (d.id.as_str(), d)).collect();
    scores
        .iter()
        .map(|s| match by_id.get(s.doc_id.as_str()) {
            Some(d) => Ok((*d, s)),
            None => bail!("score for unknown document {}", s.doc_id),
        })
        .collect()
}

fn run(cli: Cli) -> Result<()> {
    let config = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Ingest { input, out } => {
            let docs = load_docs(&input)?;
            let kept = RelevanceFilter::new(&config.scoring.key_terms)
                .with_context(&config.ambiguous_terms, &config.context_terms)
                .apply(&docs);
            let file = std::fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            corpus::write_documents(std::io::BufWriter::new(file), &kept)?;
            out!("kept {} of {} documents", kept.len(), docs.len());
        }
        Command::Score { input, lexicon, out } => {
            let docs = load_docs(&input)?;
            let lex = sentiment::load_lexicon(&lexicon).with_context(|| format!("loading {}", lexicon.display()))?;
            let scores = docs
                .iter()
                .map(|d| {
                    sentiment::score_document(d, &lex, &config.rules, &config.scoring)
                        .with_context(|| format!("scoring {}", d.id))
                })
                .collect::<Result<Vec<_>>>()?;
            write_jsonl(&out, &scores)?;
            out!("scored {} documents", scores.len());
        }
        Command::Timeseries { scores, out, from, to } => {
            let scores: Vec<DocumentScore> = read_jsonl(&scores)?;
            let series = match (from, to) {
                (None, None) => timeseries_of(&scores),
                (from, to) => {
                    let days = || scores.iter().map(DocumentScore::day);
                    let (Some(from), Some(to)) = (from.or_else(|| days().min()), to.or_else(|| days().max())) else {
                        return write_json(&out, &Vec::<snapwatch::TimePoint>::new());
                    };
                    sentiment::corpus_timeseries(&scores, from, to)?
                }
            };
            write_json(&out, &series)?;
            out!("{} days", series.len());
        }
        Command::Hotspots { input, scores, out, metric } => {
            let docs = load_docs(&input)?;
            let scores: Vec<DocumentScore> = read_jsonl(&scores)?;
            let metric = metric.unwrap_or(config.metric);
            let points: Vec<_> = joined(&docs, &scores)?
                .into_iter()
                .filter_map(|(d, s)| Some((d.geotag?, snapshot::metric_value(s, metric))))
                .collect();
            let grid = geo::hotspot_analysis(config.bbox, config.cell_size, &points)?;
            write_json(&out, &geo::FeatureCollection::from(&grid))?;
            let significant = grid.cells.iter().filter(|c| c.cls.is_hot() || c.cls.is_cold()).count();
            out!("{} cells with data, {} significant", grid.data_cells().count(), significant);
        }
        Command::Terms { input, scores, out, topics } => {
            let docs = load_docs(&input)?;
            let scores: Vec<DocumentScore> = read_jsonl(&scores)?;
            let scored: Vec<Document> = joined(&docs, &scores)?.into_iter().map(|(d, _)| d.clone()).collect();
            let params = terms::TermParams {
                stopwords: snapshot::load_stopwords(&config)?,
                min_count: config.min_count,
                top_n: config.top_n,
                day_bucket: config.day_bucket,
            };
            let entries = terms::wordcloud_terms(&scored, &scores, &params)?;
            write_json(&out, &entries)?;
            if let Some(path) = topics {
                let model = terms::lda_fit(&scored, &params.stopwords, &config.lda)?;
                write_json(&path, &model)?;
            }
            out!("{} terms", entries.len());
        }
        Command::Votes { bills, out, legislator } => {
            let all = votes::load_bills(&bills).with_context(|| format!("loading {}", bills.display()))?;
            let kept = votes::filter_bills(&all, &config.bill_phrases);
            votes::write_bills(&out, &kept)?;
            out!("kept {} of {} bills", kept.len(), all.len());
            if let Some(id) = legislator {
                let rows = votes::legislator_record(&kept, &id)?;
                out!("{}", serde_json::to_string_pretty(&rows)?);
            }
        }
        Command::Train { input, out, folds } => {
            let docs = load_docs(&input)?;
            let model = classifier::train(&docs)?;
            model.save(&out)?;
            out!("trained on {} classes, {} terms", model.classes.len(), model.vocab.len());
            if let Some(k) = folds {
                out!("{k}-fold accuracy {:.4}", classifier::cross_validate(&docs, k)?);
            }
        }
        Command::Predict { model, input, out } => {
            let model = classifier::NbModel::load(&model)?;
            let docs = load_docs(&input)?;
            let rows: Vec<_> = docs
                .iter()
                .map(|d| {
                    let p = classifier::predict(&model, d);
                    serde_json::json!({ "doc_id": d.id, "label": p.label, "posterior": p.posterior })
                })
                .collect();
            write_jsonl(&out, &rows)?;
        }
        Command::FetchBills { out } => {
            let url = std::env::var(fetch::URL_VAR).map_err(|_| fetch::FetchError::NotConfigured)?;
            let key = std::env::var(fetch::KEY_VAR).ok();
            let rt = tokio::runtime::Runtime::new()?;
            match rt.block_on(fetch::fetch_bills(&url, key.as_deref())) {
                Ok(bills) => {
                    votes::write_bills(&out, &bills)?;
                    out!("wrote {} bills", bills.len());
                }
                Err(e) if out.exists() => {
                    log::warn!("bill fetch failed ({e}); keeping existing {}", out.display());
                    eprintln!("warning: bill fetch failed ({e}); kept existing {}", out.display());
                }
                Err(e) => return Err(e).context("fetching bills"),
            }
        }
        Command::Serve { snapshot, input, lexicon, bills, bind } => {
            let snap = match snapshot {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                    Snapshot::from_json(&text).with_context(|| format!("parsing {}", p.display()))?
                }
                None => snapwatch_service::build_snapshot(
                    &config,
                    input.as_deref().expect("required by clap"),
                    lexicon.as_deref().expect("required by clap"),
                    bills.as_deref(),
                )?,
            };
            let addr = match bind {
                Some(a) => a,
                None => {
                    let port = match std::env::var("PORT") {
                        Ok(p) => p.parse::<u16>().with_context(|| format!("PORT `{p}` is not a port number"))?,
                        Err(_) => 8080,
                    };
                    SocketAddr::from(([127, 0, 0, 1], port))
                }
            };
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async {
                let listener = api::bind(addr).await?;
                out!("listening on http://{}", listener.local_addr()?);
                api::serve_on(listener, Arc::new(snap), config.cors_origin.as_deref()).await?;
                anyhow::Ok(())
            })?;
        }
        Command::All { input, lexicon, bills, out_dir } => {
            std::fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            let snap = snapwatch_service::build_snapshot(&config, &input, &lexicon, bills.as_deref())?;
            write_jsonl(&out_dir.join("scores.jsonl"), &snap.doc_scores)?;
            write_json(&out_dir.join("timeseries.json"), &snap.timeseries)?;
            write_json(&out_dir.join("hotspots.geojson"), &geo::FeatureCollection::from(&snap.grid))?;
            write_json(&out_dir.join("terms.json"), &snap.terms)?;
            write_json(&out_dir.join("topics.json"), &snap.topics)?;
            write_json(&out_dir.join("bills.json"), &votes::BillsFile { bills: snap.bills.clone() })?;
            std::fs::write(out_dir.join("snapshot.json"), snap.to_json() + "\n")?;
            out!(
                "{} relevant documents, {} days, {} bills -> {}",
                snap.meta.n_relevant,
                snap.timeseries.len(),
                snap.bills.len(),
                out_dir.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
