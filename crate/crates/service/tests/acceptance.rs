//! End-to-end acceptance checks. Runs as a plain binary and prints one
//! PASS/FAIL line per criterion; exits nonzero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use snapwatch::corpus::{self, tokenize, InputFormat, RelevanceFilter};
use snapwatch::geo::{self, axial_distance, axial_to_point, BBox, HexGrid, HotspotClass, WeightsMatrix};
use snapwatch::sentiment::{self, normalize, ValenceLexicon};
use snapwatch::terms::{lda_fit_tokens, LdaParams};
use snapwatch::{classifier, votes, Document, DocumentKind, Geotag, Label, RuleConfig};

type Outcome = Result<String, String>;
type Criterion<'a> = Box<dyn FnOnce() -> Outcome + 'a>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    check(
        elapsed.as_secs_f64() < limit_s,
        format!("took {:.2}s, limit {limit_s}s", elapsed.as_secs_f64()),
    )
}

fn doc(id: &str, text: &str, label: Option<Label>) -> Document {
    Document {
        id: id.into(),
        kind: DocumentKind::Tweet,
        text: text.into(),
        source: "fixture".into(),
        url: None,
        published_at: "2017-05-23T12:00:00Z".parse().unwrap(),
        geotag: None,
        traffic_tier: 1,
        label,
    }
}

/// Joins one value per axial cell at the cell centre, then runs Gi*.
fn gi_on_cells(values: &[((i32, i32), f64)]) -> HexGrid {
    let pts: Vec<(Geotag, f64)> = values
        .iter()
        .map(|&((q, r), v)| {
            let (lon, lat) = axial_to_point(q, r, 1.0);
            (Geotag { lat, lon }, v)
        })
        .collect();
    let lons = pts.iter().map(|p| p.0.lon);
    let lats = pts.iter().map(|p| p.0.lat);
    let bbox = BBox::new(
        lons.clone().fold(f64::INFINITY, f64::min) - 2.0,
        lats.clone().fold(f64::INFINITY, f64::min) - 2.0,
        lons.fold(f64::NEG_INFINITY, f64::max) + 2.0,
        lats.fold(f64::NEG_INFINITY, f64::max) + 2.0,
    );
    let grid = geo::spatial_join(geo::make_hex_grid(bbox, 1.0).unwrap(), &pts);
    let weights = WeightsMatrix::contiguity(&grid);
    geo::classify_hotspots(geo::gi_star(grid, &weights).unwrap())
}

/// Dense direct formula; neighbours found from centre distances.
fn gi_oracle(values: &[((i32, i32), f64)]) -> Vec<f64> {
    let n = values.len();
    let nf = n as f64;
    let centres: Vec<(f64, f64)> = values
        .iter()
        .map(|((q, r), _)| (3f64.sqrt() * (*q as f64 + *r as f64 / 2.0), 1.5 * *r as f64))
        .collect();
    let x: Vec<f64> = values.iter().map(|v| v.1).collect();
    let xbar = x.iter().sum::<f64>() / nf;
    let s = (x.iter().map(|v| v * v).sum::<f64>() / nf - xbar * xbar).sqrt();
    (0..n)
        .map(|i| {
            let w: Vec<f64> = (0..n)
                .map(|j| {
                    let d = ((centres[i].0 - centres[j].0).powi(2) + (centres[i].1 - centres[j].1).powi(2)).sqrt();
                    if d < 1.8 {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            let swx: f64 = (0..n).map(|j| w[j] * x[j]).sum();
            let sw: f64 = w.iter().sum();
            let sw2: f64 = w.iter().map(|v| v * v).sum();
            (swx - xbar * sw) / (s * ((nf * sw2 - sw * sw) / (nf - 1.0)).sqrt())
        })
        .collect()
}

fn gi_star_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cells: Vec<(i32, i32)> = (0..5).flat_map(|r| (0..5).map(move |c| (c - r / 2, r))).collect();
    let values: Vec<((i32, i32), f64)> = cells.iter().map(|&k| (k, rng.random_range(-1.0..1.0))).collect();
    let grid = gi_on_cells(&values);
    let expected = gi_oracle(&values);
    let mut worst = 0.0f64;
    for (((q, r), _), e) in values.iter().zip(&expected) {
        let z = grid.cell(*q, *r).and_then(|c| c.z).ok_or("missing z")?;
        worst = worst.max((z - e).abs());
    }
    check(worst <= 1e-9, format!("max |dz| = {worst:e}"))?;
    let uniform: Vec<_> = cells.iter().map(|&k| (k, 0.37)).collect();
    let flat = gi_on_cells(&uniform);
    check(flat.data_cells().all(|c| c.z == Some(0.0)), "uniform field gave nonzero z")?;
    within(start.elapsed(), 1.0)?;
    Ok(format!("25 cells, max |dz| = {worst:.1e}, uniform z = 0, {:?}", start.elapsed()))
}

fn planted_cluster() -> Outcome {
    let start = Instant::now();
    let centre = (4, 4);
    let disc: Vec<(i32, i32)> = (-3..=3)
        .flat_map(|dq| (-3..=3).map(move |dr| (centre.0 + dq, centre.1 + dr)))
        .filter(|&(q, r)| axial_distance((q, r), centre) <= 3)
        .collect();
    let block = [centre, (centre.0 + 1, centre.1), (centre.0, centre.1 + 1)];
    let far: Vec<(i32, i32)> = disc
        .iter()
        .copied()
        .filter(|&(q, r)| block.iter().all(|&(bq, br)| axial_distance((q, r), (bq, br)) >= 3))
        .collect();
    let noise = Normal::new(0.0, 0.1).unwrap();
    let mut successes = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<_> = disc
            .iter()
            .map(|&k| (k, if block.contains(&k) { -1.0 } else { noise.sample(&mut rng) }))
            .collect();
        let grid = gi_on_cells(&values);
        let cls = |k: (i32, i32)| grid.cell(k.0, k.1).unwrap().cls;
        let block_ok = block
            .iter()
            .all(|&k| matches!(cls(k), HotspotClass::Cold95 | HotspotClass::Cold99));
        let far_ok = far.iter().all(|&k| cls(k) == HotspotClass::NotSignificant);
        if block_ok && far_ok {
            successes += 1;
        }
    }
    check(successes >= 95, format!("{successes}/100 seeds recovered"))?;
    within(start.elapsed(), 10.0)?;
    Ok(format!(
        "{successes}/100 seeds ({} data cells, {} far cells), {:?}",
        disc.len(),
        far.len(),
        start.elapsed()
    ))
}

fn sentiment_bounds() -> Outcome {
    let lex = ValenceLexicon::from_entries(
        "fixture",
        [("good", 3), ("great", 3), ("bad", -3), ("awful", -3), ("hope", 2), ("fraud", -4), ("fine", 2), ("cut", -1)],
    )
    .map_err(|e| e.to_string())?;
    let negated = lex.negated();
    let rules = RuleConfig::default();
    let vocab = [
        "good", "GREAT", "bad", "AWFUL", "hope", "fraud", "fine", "cut", "not", "very", "barely", "but", "snap", "the",
        "good!!", "bad!", "never", "extremely", "Fraud!!!",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..1000 {
        let len = rng.random_range(1..30);
        let words: Vec<&str> = (0..len).map(|_| *vocab.choose(&mut rng).unwrap()).collect();
        let tokens = tokenize(&words.join(" "));
        let c = sentiment::compound_score(&tokens, &lex, &rules);
        check(c > -1.0 && c < 1.0, format!("sequence {i}: compound {c}"))?;
        for mode in [false, true] {
            let a = sentiment::word_sum_score(&tokens, &lex, mode);
            let b = sentiment::word_sum_score(&tokens, &negated, mode);
            check(a == -b, format!("sequence {i}: word_sum {a} vs negated {b}"))?;
        }
    }
    let n = normalize(3.0, 15.0);
    check((n - 0.6124).abs() <= 1e-4, format!("normalize(3, 15) = {n}"))?;
    Ok(format!("1000 sequences in (-1, 1), word_sum antisymmetric, normalize(3, 15) = {n:.6}"))
}

fn aggregation_identity() -> Outcome {
    let cfg = test_config();
    let snap = fixture_snapshot();
    let docs = corpus::load_documents(fixture("docs.jsonl"), InputFormat::Jsonl).map_err(|e| e.to_string())?;
    let relevant = RelevanceFilter::new(&cfg.scoring.key_terms)
        .with_context(&cfg.ambiguous_terms, &cfg.context_terms)
        .apply(&docs);
    check(relevant.len() == 10, format!("{} relevant documents", relevant.len()))?;
    let lex = sentiment::load_lexicon(lexicon_path()).map_err(|e| e.to_string())?;
    let scores = relevant
        .iter()
        .map(|d| {
            let mut s = sentiment::score_document(d, &lex, &cfg.rules, &cfg.scoring)?;
            s.doc_weight = sentiment::document_weight(d.traffic_tier, corpus::reading_grade(d)?)?;
            Ok(s)
        })
        .collect::<Result<Vec<_>, sentiment::SentimentError>>()
        .map_err(|e| e.to_string())?;
    let from = scores.iter().map(|s| s.day()).min().unwrap();
    let to = scores.iter().map(|s| s.day()).max().unwrap();
    let direct = sentiment::corpus_timeseries(&scores, from, to).map_err(|e| e.to_string())?;
    check(snap.timeseries == direct, "snapshot timeseries differs from piecewise result")?;
    Ok(format!("{} days from 10 documents, exact match", direct.len()))
}

const POSITIVE: &[&str] = &["good", "great", "hope", "help", "thanks", "love", "support", "glad"];
const NEGATIVE: &[&str] = &["bad", "awful", "fraud", "cut", "hurt", "fear", "waste", "crisis"];
const FILLER: &[&str] = &["the", "program", "families", "state", "benefits", "week", "report", "on"];

fn tool_agreement() -> Outcome {
    let lex = sentiment::load_lexicon(lexicon_path()).map_err(|e| e.to_string())?;
    let cfg = test_config();
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let scores = (0..50)
        .map(|i| {
            let vocab = if i % 2 == 0 { POSITIVE } else { NEGATIVE };
            let sentences: Vec<String> = (0..rng.random_range(1..4))
                .map(|_| {
                    let mut words: Vec<&str> = (0..rng.random_range(4..9)).map(|_| *FILLER.choose(&mut rng).unwrap()).collect();
                    for _ in 0..rng.random_range(1..4) {
                        let at = rng.random_range(0..=words.len());
                        words.insert(at, vocab.choose(&mut rng).unwrap());
                    }
                    let mut s = words.join(" ");
                    s[..1].make_ascii_uppercase();
                    s + "."
                })
                .collect();
            sentiment::score_document(&doc(&format!("d{i}"), &sentences.join(" "), None), &lex, &cfg.rules, &cfg.scoring)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let a = sentiment::tool_agreement(&scores).map_err(|e| e.to_string())?;
    check(a.sign_agreement >= 0.9, format!("sign agreement {}", a.sign_agreement))?;
    check(a.pearson_r >= 0.8, format!("pearson r {}", a.pearson_r))?;
    Ok(format!("50 documents, sign agreement {:.3}, pearson r {:.3}", a.sign_agreement, a.pearson_r))
}

fn classifier_sanity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let separable: Vec<Document> = (0..100)
        .map(|i| {
            let (vocab, label) = if i % 2 == 0 { (POSITIVE, Label::Positive) } else { (NEGATIVE, Label::Negative) };
            let words: Vec<&str> = (0..rng.random_range(3..8)).map(|_| *vocab.choose(&mut rng).unwrap()).collect();
            doc(&format!("s{i}"), &words.join(" "), Some(label))
        })
        .collect();
    let acc = classifier::cross_validate(&separable, 5).map_err(|e| e.to_string())?;
    check(acc == 1.0, format!("separable 5-fold accuracy {acc}"))?;

    let shared: Vec<&str> = POSITIVE.iter().chain(NEGATIVE).copied().collect();
    let random: Vec<Document> = (0..400)
        .map(|i| {
            let words: Vec<&str> = (0..rng.random_range(3..8)).map(|_| *shared.choose(&mut rng).unwrap()).collect();
            let label = if rng.random::<bool>() { Label::Positive } else { Label::Negative };
            doc(&format!("r{i}"), &words.join(" "), Some(label))
        })
        .collect();
    let chance = classifier::cross_validate(&random, 5).map_err(|e| e.to_string())?;
    check((chance - 0.5).abs() <= 0.1, format!("random-label accuracy {chance}"))?;

    let model = classifier::train(&random).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let words: Vec<&str> = (0..rng.random_range(0..12)).map(|_| *shared.choose(&mut rng).unwrap()).collect();
        let p = classifier::predict(&model, &doc(&format!("q{i}"), &format!("{} x", words.join(" ")), None));
        worst = worst.max((p.posterior.values().sum::<f64>() - 1.0).abs());
    }
    check(worst <= 1e-9, format!("posterior sum off by {worst:e}"))?;
    Ok(format!("separable 5-fold {acc:.3}, random labels {chance:.3}, 1000 posterior sums within {worst:.1e}"))
}

fn tokens_of(texts: &[String]) -> Vec<(String, Vec<String>)> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| (format!("d{i}"), t.split_whitespace().map(String::from).collect()))
        .collect()
}

fn lda_checks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;

    // timing and row sums on 200 documents with default settings
    let vocab: Vec<String> = (0..300).map(|i| format!("w{i}")).collect();
    let texts: Vec<String> = (0..200)
        .map(|_| (0..40).map(|_| vocab.choose(&mut rng).unwrap().as_str()).collect::<Vec<_>>().join(" "))
        .collect();
    let start = Instant::now();
    let big = lda_fit_tokens(&tokens_of(&texts), &LdaParams::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    within(elapsed, 30.0)?;
    for row in big.phi.iter().chain(&big.theta) {
        worst = worst.max((row.iter().sum::<f64>() - 1.0).abs());
    }
    check(worst <= 1e-9, format!("row sum off by {worst:e}"))?;

    // K = 1 against counted unigram frequencies
    let small = tokens_of(&texts[..20]);
    let one = lda_fit_tokens(&small, &LdaParams { k: 1, iterations: 20, ..Default::default() }).map_err(|e| e.to_string())?;
    let mut counts: BTreeMap<&str, f64> = BTreeMap::new();
    for (_, toks) in &small {
        for t in toks {
            *counts.entry(t).or_default() += 1.0;
        }
    }
    let total: f64 = counts.values().sum();
    let v = counts.len() as f64;
    check(one.vocab.len() == counts.len(), "K=1 vocabulary size")?;
    for (i, w) in one.vocab.iter().enumerate() {
        let expected = (counts[w.as_str()] + one.beta) / (total + v * one.beta);
        check(one.phi[0][i] == expected, format!("K=1 phi[{w}] = {} vs {expected}", one.phi[0][i]))?;
    }
    check(one.theta.iter().all(|r| r == &vec![1.0]), "K=1 theta not all 1")?;

    // two disjoint vocabularies
    let a: Vec<String> = (0..10).map(|i| format!("alpha{i}")).collect();
    let b: Vec<String> = (0..10).map(|i| format!("beta{i}")).collect();
    let texts: Vec<String> = (0..60)
        .map(|i| {
            let v = if i % 2 == 0 { &a } else { &b };
            (0..30).map(|_| v.choose(&mut rng).unwrap().as_str()).collect::<Vec<_>>().join(" ")
        })
        .collect();
    let two = lda_fit_tokens(&tokens_of(&texts), &LdaParams { k: 2, iterations: 200, ..Default::default() })
        .map_err(|e| e.to_string())?;
    let mut sources = BTreeSet::new();
    for t in 0..2 {
        let top: Vec<&str> = two.top_words(t, 5).into_iter().map(|(w, _)| w).collect();
        let from_a = top.iter().all(|w| w.starts_with("alpha"));
        let from_b = top.iter().all(|w| w.starts_with("beta"));
        check(from_a || from_b, format!("topic {t} mixes vocabularies: {top:?}"))?;
        sources.insert(from_a);
    }
    check(sources.len() == 2, "both topics recovered the same vocabulary")?;
    Ok(format!(
        "row sums within {worst:.1e}, K=1 exact, two topics recovered, 500 iterations on 200 docs in {elapsed:.2?}"
    ))
}

fn votes_pruning() -> Outcome {
    let bills = votes::load_bills(fixture("bills_pruning.json")).map_err(|e| e.to_string())?;
    check(bills.len() == 3, "fixture should hold 3 bills")?;
    let kept = votes::filter_bills(&bills, snapwatch::DEFAULT_BILL_PHRASES);
    let ids: Vec<&str> = kept.iter().map(|b| b.id.as_str()).collect();
    check(ids == ["HB 101"], format!("kept {ids:?}"))?;
    check(kept[0].matched_phrases == ["georgia peach card"], format!("matched {:?}", kept[0].matched_phrases))?;
    check(kept[0].votes.len() == 1 && kept[0].votes.iter().all(|v| v.in_office), "out-of-office vote not pruned")?;
    check(votes::filter_bills(&kept, snapwatch::DEFAULT_BILL_PHRASES) == kept, "filter not idempotent")?;
    Ok("phrase match, zero-vote drop, out-of-office pruning and idempotence hold".into())
}

async fn service_contract() -> Outcome {
    let snap = Arc::new(fixture_snapshot());
    let app = snapwatch_service::api::router(snap.clone(), None);
    let endpoints: [(&str, schema::Check); 6] = [
        ("/api/meta", schema::meta),
        ("/api/timeseries?from=2017-05-22&to=2017-05-25", schema::timeseries),
        ("/api/map?metric=compound", schema::map),
        ("/api/terms?limit=20", schema::terms),
        ("/api/legislators", schema::legislators),
        ("/api/legislators/ga-h-014/votes", schema::votes),
    ];
    for (uri, validate) in endpoints {
        let (status, body) = get(&app, uri).await;
        check(status == 200, format!("{uri} returned {status}"))?;
        validate(&body).map_err(|e| format!("{uri}: {e}"))?;
    }
    let listener = snapwatch_service::api::bind("127.0.0.1:0".parse().unwrap()).await.map_err(|e| e.to_string())?;
    let addr = listener.local_addr().map_err(|e| e.to_string())?;
    let server = tokio::spawn(snapwatch_service::api::serve_on(listener, snap, None));
    let client = reqwest::Client::new();
    let url = format!("http://{addr}/api/timeseries?kind=article");
    let tasks: Vec<_> = (0..100)
        .map(|_| {
            let (c, u) = (client.clone(), url.clone());
            tokio::spawn(async move { c.get(u).send().await?.bytes().await })
        })
        .collect();
    let mut bodies = Vec::new();
    for t in tasks {
        bodies.push(t.await.map_err(|e| e.to_string())?.map_err(|e| e.to_string())?);
    }
    server.abort();
    check(bodies.iter().all(|b| b == &bodies[0]), "concurrent bodies differ")?;
    Ok("6 endpoints schema-valid, 100 concurrent identical bodies, no UI build involved".into())
}

fn main() {
    let rt = tokio::runtime::Runtime::new().unwrap();
    let criteria: Vec<(&str, Criterion<'_>)> = vec![
        ("gi* oracle equivalence", Box::new(gi_star_oracle)),
        ("planted-cluster recovery", Box::new(planted_cluster)),
        ("sentiment normalization and antisymmetry", Box::new(sentiment_bounds)),
        ("aggregation identity", Box::new(aggregation_identity)),
        ("tool agreement", Box::new(tool_agreement)),
        ("classifier sanity", Box::new(classifier_sanity)),
        ("lda", Box::new(lda_checks)),
        ("votes pruning", Box::new(votes_pruning)),
        ("service contract", Box::new(|| rt.block_on(service_contract()))),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
