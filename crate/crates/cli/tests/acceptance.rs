//! Acceptance runner: one PASS/FAIL line per primary criterion.
//!
//! `cargo test -p sakubun --test acceptance`

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use serde_json::{json, Value};
use tower::ServiceExt;

use sakubun::analyze::analyze_text;
use sakubun::score::load_corpus;
use sakubun::service::router;
use sakubun::{Config, Engine};
use sakubun_core::grammar::{
    bundled_sources, check_fixtures, content_hash, load_cache, match_document, save_cache, CacheError, CompileOptions,
    Level, PatternSource, Registry,
};
use sakubun_core::scoring::{map_score, GaussianModel, ScoreRange};
use sakubun_core::tokenize::{tokenize_document, Lexicon};

use support::Check;

const SAMPLE: &str = "彼が来ようが来まいが、パーティーは時間通りにやる。";
const PARTIAL: &str = "彼が来ようが来";
const TARGET: &str = "~う(よう)が、~まいが";

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn within(start: Instant, limit: Duration, detail: String) -> Check {
    let took = start.elapsed();
    if took < limit {
        Ok(format!("{detail} ({} ms)", took.as_millis()))
    } else {
        Err(format!("{detail}, but took {} ms (limit {} ms)", took.as_millis(), limit.as_millis()))
    }
}

fn grammar_recognition() -> Check {
    let start = Instant::now();
    let engine = Engine::load(&Config::default()).map_err(|e| e.to_string())?;
    let payload = analyze_text(&engine, SAMPLE).map_err(|e| e.to_string())?;
    let hits = payload.matches.iter().filter(|m| m.pattern_id == TARGET).count();
    if hits != 1 {
        return Err(format!("{hits} matches of {TARGET}"));
    }
    let entry = payload
        .grammar_report
        .level(Level::N1)
        .iter()
        .find(|e| e.id == TARGET)
        .ok_or("no N1 report entry for the pattern")?;
    let json = serde_json::to_value(entry).map_err(|e| e.to_string())?;
    if json["level"] != "N1" || json["count"] != 1 || json["unique"] != 1 {
        return Err(format!("report entry {json}"));
    }
    within(start, Duration::from_secs(1), format!("one match, N1 entry {json}"))
}

fn registry_fixtures() -> Check {
    let start = Instant::now();
    let r = Registry::bundled();
    if r.len() < 30 {
        return Err(format!("only {} patterns", r.len()));
    }
    let mut cases = 0;
    for p in r.iter() {
        let n = p.pattern.fixtures.positive.len() + p.pattern.fixtures.negative.len();
        if n < 4 || p.pattern.fixtures.positive.is_empty() || p.pattern.fixtures.negative.is_empty() {
            return Err(format!("pattern {} has {n} fixtures", p.pattern.id));
        }
        cases += n;
    }
    let failures = check_fixtures(&r, &Lexicon::bundled()).map_err(|e| e.to_string())?;
    if let Some(f) = failures.first() {
        return Err(format!("{} failing fixtures, first: {} on {:?}", failures.len(), f.pattern_id, f.sentence));
    }
    within(start, Duration::from_secs(10), format!("{} patterns, {cases} fixtures", r.len()))
}

fn automata_semantics() -> Check {
    let a = support::longest_match_oracle(2024, 200, 50)?;
    let b = support::anbn_check(2024)?;
    Ok(format!("{a}; {b}"))
}

fn statistics_oracles() -> Check {
    let cdf = support::cdf_check(11)?;
    let m = GaussianModel { mu: 3.25f64, sigma: 1.5 };
    let mid = map_score(m.mu, &m, &ScoreRange { lo: 50.0, hi: 100.0 });
    if mid != 75.0 {
        return Err(format!("map_score(mu) = {mid}"));
    }
    let km = support::kmeans_check(12)?;
    let pca = support::pca_check(13)?;
    Ok(format!("{cdf}; map_score(mu) = 75; {km}; {pca}"))
}

fn end_to_end_scoring() -> Check {
    let start = Instant::now();
    let tmp = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let corpus = fixtures().join("corpus");
    let mut notes = Vec::new();
    for mode in ["sum", "cluster"] {
        let out = tmp.path().join(mode);
        let run = Command::new(env!("CARGO_BIN_EXE_sakubun"))
            .args(["score", corpus.to_str().unwrap(), "--mode", mode, "--seed", "7", "--out", out.to_str().unwrap()])
            .env("RUST_LOG", "error")
            .output()
            .map_err(|e| e.to_string())?;
        if !run.status.success() {
            return Err(format!("score --mode {mode}: {}", String::from_utf8_lossy(&run.stderr).trim()));
        }
        for f in ["report.json", "report.csv"] {
            let got = std::fs::read(out.join(f)).map_err(|e| e.to_string())?;
            let want = std::fs::read(fixtures().join("golden").join(mode).join(f)).map_err(|e| e.to_string())?;
            if got != want {
                return Err(format!("{mode}/{f} differs from the golden"));
            }
        }
        let report: Value = serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
        let flagged: Vec<&Value> = report["documents"].as_array().unwrap().iter().filter(|d| d["digression"] == true).collect();
        let [doc] = flagged[..] else { return Err(format!("{mode}: {} outliers", flagged.len())) };
        if doc["doc_id"] != "essay07" {
            return Err(format!("{mode}: outlier is {}", doc["doc_id"]));
        }
        let (score, raw) = (doc["score"].as_f64().unwrap(), doc["raw_score"].as_f64().unwrap());
        if score >= raw {
            return Err(format!("{mode}: penalty did not reduce {raw} (got {score})"));
        }
        notes.push(format!("{mode}: golden match, essay07 {raw} → {score}"));
    }
    within(start, Duration::from_secs(5), notes.join("; "))
}

fn cache_equivalence() -> Check {
    let engine = Engine::load(&Config::default()).map_err(|e| e.to_string())?;
    let mut docs = load_corpus(&fixtures().join("corpus"), &engine).map_err(|e| e.to_string())?;
    let n_corpus = docs.len();
    let fixture_text: Vec<String> = engine
        .registry
        .iter()
        .flat_map(|p| p.pattern.fixtures.positive.iter().chain(&p.pattern.fixtures.negative).cloned())
        .collect();
    docs.push(tokenize_document("pattern-fixtures", &fixture_text.join("\n"), &engine.lexicon));
    let sources = bundled_sources();
    let fresh = Registry::from_sources(&sources, &CompileOptions::default()).map_err(|e| e.to_string())?;
    let cached = load_cache(&save_cache(&fresh), Some(&content_hash(&sources))).map_err(|e| e.to_string())?;
    let mut total = 0;
    for d in &docs {
        let a = match_document(&fresh, d).map_err(|e| e.to_string())?;
        let b = match_document(&cached, d).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{}: cached registry matches differ", d.id));
        }
        total += a.len();
    }
    let edited: Vec<PatternSource> = sources
        .iter()
        .map(|s| PatternSource { name: s.name.clone(), text: s.text.replacen("no matter whether", "regardless of whether", 1) })
        .collect();
    if edited == sources {
        return Err("pattern edit had no effect".into());
    }
    match load_cache(&save_cache(&fresh), Some(&content_hash(&edited))) {
        Err(CacheError::StaleCache { .. }) => {}
        other => return Err(format!("edited sources not detected: {:?}", other.map(|r| r.len()))),
    }
    Ok(format!(
        "{n_corpus} corpus documents and {} fixture sentences, {total} identical matches; pattern edit gives StaleCache",
        fixture_text.len()
    ))
}

async fn post(app: axum::Router, uri: &str, body: &str) -> Result<(StatusCode, Vec<u8>), String> {
    let req = Request::builder()
        .method(Method::POST)
        .uri(uri)
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from(body.to_string()))
        .map_err(|e| e.to_string())?;
    let res = app.oneshot(req).await.map_err(|e| e.to_string())?;
    let status = res.status();
    let bytes = axum::body::to_bytes(res.into_body(), usize::MAX).await.map_err(|e| e.to_string())?;
    Ok((status, bytes.to_vec()))
}

async fn service_contract() -> Check {
    let app = router(Arc::new(Engine::load(&Config::default()).map_err(|e| e.to_string())?), "*");
    let (status, body) = post(app.clone(), "/api/hints", &json!({ "text": PARTIAL }).to_string()).await?;
    let v: Value = serde_json::from_slice(&body).map_err(|e| e.to_string())?;
    let hint = v["hints"].as_array().and_then(|h| h.iter().find(|h| h["pattern_id"] == TARGET));
    let Some(hint) = hint.filter(|_| status == StatusCode::OK) else {
        return Err(format!("hints {status}: {v}"));
    };
    let (status, _) = post(app.clone(), "/api/analyze", r#"{"text":""}"#).await?;
    if status != StatusCode::UNPROCESSABLE_ENTITY {
        return Err(format!("empty analyze gave {status}"));
    }
    let mut tasks = Vec::new();
    for uri in ["/api/analyze", "/api/hints"] {
        for _ in 0..16 {
            let app = app.clone();
            let text = if uri == "/api/hints" { PARTIAL } else { SAMPLE };
            tasks.push(tokio::spawn(async move { (uri, post(app, uri, &json!({ "text": text }).to_string()).await) }));
        }
    }
    let mut first: std::collections::HashMap<&str, Vec<u8>> = Default::default();
    for t in tasks {
        let (uri, res) = t.await.map_err(|e| e.to_string())?;
        let (status, body) = res?;
        if status != StatusCode::OK {
            return Err(format!("{uri}: {status}"));
        }
        if first.entry(uri).or_insert_with(|| body.clone()) != &body {
            return Err(format!("{uri}: concurrent bodies differ"));
        }
    }
    Ok(format!("hint expects {}; empty analyze 422; 32 concurrent requests agree", hint["expected"]))
}

type Criterion = Box<dyn FnOnce() -> Check>;

fn main() -> ExitCode {
    let rt = tokio::runtime::Runtime::new().expect("runtime");
    let criteria: Vec<(&str, Criterion)> = vec![
        ("grammar recognition", Box::new(grammar_recognition)),
        ("registry fixtures", Box::new(registry_fixtures)),
        ("automata semantics", Box::new(automata_semantics)),
        ("statistics oracles", Box::new(statistics_oracles)),
        ("end-to-end scoring", Box::new(end_to_end_scoring)),
        ("cache equivalence", Box::new(cache_equivalence)),
        ("service contract", Box::new(move || rt.block_on(service_contract()))),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS [PRIMARY] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL [PRIMARY] {name}: {detail}");
            }
        }
    }
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
