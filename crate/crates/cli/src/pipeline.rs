//! Config-driven end-to-end run: ingest → normalize → match per city, in
//! parallel across cities, then one load into the snapshot database.
//!
//! Per-city artifacts go to `<out_dir>/<city>/`: `raw.csv`, `records.csv`,
//! `rejections.csv`, `features.geojson`, `unmatched.csv`. The database and
//! `summary.json` go to `<out_dir>/`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use chrono::{DateTime, Utc};
use honorifics_core::domain::{CityConfig, CityId, SourceDescriptor};
use honorifics_core::geomatch::MatchMethod;
use serde::{Deserialize, Serialize};

use crate::stages;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineCity {
    pub id: CityId,
    pub osm: PathBuf,
    pub sources: Vec<SourceDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub out_dir: PathBuf,
    /// Database file; `<out_dir>/streets.db.json` if absent.
    #[serde(default)]
    pub db: Option<PathBuf>,
    /// Timestamp stamped on ingested records; fixing it makes runs
    /// byte-reproducible.
    #[serde(default)]
    pub retrieved_at: Option<DateTime<Utc>>,
    #[serde(default)]
    pub merge_radius_m: Option<f64>,
    pub cities: Vec<PipelineCity>,
}

fn rebase(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn rebase_source(base: &Path, s: &SourceDescriptor) -> SourceDescriptor {
    let re = |p: &Option<PathBuf>| p.as_ref().map(|p| rebase(base, p));
    match s {
        SourceDescriptor::Wikidata { endpoint, file } => {
            SourceDescriptor::Wikidata { endpoint: endpoint.clone(), file: re(file) }
        }
        SourceDescriptor::Wikihistory { dir, urls, translate } => {
            SourceDescriptor::Wikihistory { dir: re(dir), urls: re(urls), translate: *translate }
        }
        SourceDescriptor::Csv { path, source } => SourceDescriptor::Csv { path: rebase(base, path), source: *source },
    }
}

impl PipelineConfig {
    /// Relative paths in the file resolve against its directory.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg: PipelineConfig =
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.out_dir = rebase(base, &cfg.out_dir);
        cfg.db = cfg.db.map(|p| rebase(base, &p));
        for c in &mut cfg.cities {
            c.osm = rebase(base, &c.osm);
            c.sources = c.sources.iter().map(|s| rebase_source(base, s)).collect();
        }
        let mut seen = BTreeSet::new();
        for c in &cfg.cities {
            anyhow::ensure!(seen.insert(c.id), "city {} listed twice", c.id);
        }
        Ok(cfg)
    }

    pub fn db_path(&self) -> PathBuf {
        self.db.clone().unwrap_or_else(|| self.out_dir.join("streets.db.json"))
    }

    pub fn city_dir(&self, city: CityId) -> PathBuf {
        self.out_dir.join(city.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Ingest,
    Normalize,
    Match,
    Load,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Ingest => "ingest",
            Stage::Normalize => "normalize",
            Stage::Match => "match",
            Stage::Load => "load",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageFailure {
    pub stage: Stage,
    pub error: String,
}

/// Counts for one city. `ingested = cleaned + rejected` and
/// `cleaned = matched + unmatched` whenever all stages ran.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CityReport {
    pub city: String,
    pub ingested: usize,
    pub skipped_pages: usize,
    pub cleaned: usize,
    pub rejected: usize,
    pub dropped: usize,
    pub merged: usize,
    pub review_flags: usize,
    pub matched: usize,
    pub matched_exact: usize,
    pub matched_normalized: usize,
    pub unmatched: usize,
    pub match_rate: f64,
    pub year_range: Option<(i32, i32)>,
    pub failure: Option<StageFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub cities: Vec<CityReport>,
    pub loaded: usize,
    pub load_failure: Option<StageFailure>,
    pub ok: bool,
}

impl Summary {
    /// Every failure as `(city, stage, error)`; load failures have no city.
    pub fn failures(&self) -> Vec<(Option<&str>, Stage, &str)> {
        let mut out: Vec<_> = self
            .cities
            .iter()
            .filter_map(|c| c.failure.as_ref().map(|f| (Some(c.city.as_str()), f.stage, f.error.as_str())))
            .collect();
        if let Some(f) = &self.load_failure {
            out.push((None, f.stage, f.error.as_str()));
        }
        out
    }

    /// Aligned plain-text table, one row per city.
    pub fn table(&self) -> String {
        let header = ["city", "ingested", "rejected", "cleaned", "matched", "unmatched", "match%", "years", "status"];
        let rows: Vec<Vec<String>> = self
            .cities
            .iter()
            .map(|c| {
                vec![
                    c.city.clone(),
                    c.ingested.to_string(),
                    c.rejected.to_string(),
                    c.cleaned.to_string(),
                    c.matched.to_string(),
                    c.unmatched.to_string(),
                    format!("{:.1}", c.match_rate * 100.0),
                    c.year_range.map_or("-".into(), |(a, b)| format!("{a}-{b}")),
                    c.failure.as_ref().map_or("ok".into(), |f| format!("failed: {}", f.stage)),
                ]
            })
            .collect();
        let widths: Vec<usize> = (0..header.len())
            .map(|i| rows.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: Vec<String>| {
            cells
                .iter()
                .enumerate()
                .map(|(i, c)| if i == 0 || i >= 7 { format!("{c:<w$}", w = widths[i]) } else { format!("{c:>w$}", w = widths[i]) })
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = vec![line(header.iter().map(|s| s.to_string()).collect())];
        out.extend(rows.into_iter().map(line));
        out.push(format!("loaded {} features", self.loaded));
        out.join("\n") + "\n"
    }
}

fn run_city(cfg: &PipelineConfig, city: &PipelineCity, at: DateTime<Utc>) -> CityReport {
    let mut rep = CityReport { city: city.id.to_string(), ..Default::default() };
    let dir = cfg.city_dir(city.id);
    let config = CityConfig { sources: city.sources.clone(), ..CityConfig::builtin(city.id) };
    let fail = |rep: &mut CityReport, stage: Stage, e: anyhow::Error| {
        rep.failure = Some(StageFailure { stage, error: format!("{e:#}") });
    };

    let raw_path = dir.join("raw.csv");
    let ingest = || -> Result<(usize, usize)> {
        let mut records = Vec::new();
        let mut skipped = 0;
        for s in &city.sources {
            let out = stages::ingest_source(&config, s, at)?;
            records.extend(out.records);
            skipped += out.skipped_pages;
        }
        stages::write_raw(&raw_path, &records)?;
        Ok((records.len(), skipped))
    };
    match ingest() {
        Ok((n, skipped)) => {
            rep.ingested = n;
            rep.skipped_pages = skipped;
        }
        Err(e) => {
            fail(&mut rep, Stage::Ingest, e);
            return rep;
        }
    }

    let records_path = dir.join("records.csv");
    match stages::normalize_file(&raw_path, &records_path, &dir.join("rejections.csv")) {
        Ok((_, records, clean)) => {
            rep.cleaned = records.len();
            rep.rejected = clean.rejections.len();
            rep.dropped = clean.dropped();
            rep.merged = clean.merged();
            let years: Vec<i32> = records.iter().filter_map(|r| r.denomination_year).collect();
            rep.year_range = years.iter().min().copied().zip(years.iter().max().copied());
        }
        Err(e) => {
            fail(&mut rep, Stage::Normalize, e);
            return rep;
        }
    }
    if let Ok(raw) = stages::read_raw(&raw_path) {
        rep.review_flags = raw.iter().flat_map(|r| &r.flags).filter(|f| f.starts_with("review:")).count();
    }

    match stages::match_file(
        &records_path,
        &city.osm,
        &config,
        cfg.merge_radius_m,
        &dir.join("features.geojson"),
        &dir.join("unmatched.csv"),
    ) {
        Ok(features) => {
            let count = |m: MatchMethod| features.iter().filter(|f| f.match_method == m).count();
            rep.matched_exact = count(MatchMethod::Exact);
            rep.matched_normalized = count(MatchMethod::Normalized);
            rep.unmatched = count(MatchMethod::Unmatched);
            rep.matched = rep.matched_exact + rep.matched_normalized;
            rep.match_rate = if features.is_empty() { 0.0 } else { rep.matched as f64 / features.len() as f64 };
        }
        Err(e) => fail(&mut rep, Stage::Match, e),
    }
    rep
}

/// Runs every configured city, or only `only`. Cities run concurrently;
/// one city's failure does not stop the others, and outputs written before
/// a failure are kept. The load stage includes only cities that matched
/// successfully.
pub fn run_pipeline(cfg: &PipelineConfig, only: Option<CityId>) -> Result<Summary> {
    let at = cfg.retrieved_at.unwrap_or_else(Utc::now);
    let selected: Vec<&PipelineCity> = cfg.cities.iter().filter(|c| only.is_none_or(|o| o == c.id)).collect();
    anyhow::ensure!(!selected.is_empty(), "no configured city matches the selection");

    let reports: Vec<CityReport> = std::thread::scope(|s| {
        let handles: Vec<_> = selected.iter().map(|c| s.spawn(move || run_city(cfg, c, at))).collect();
        handles.into_iter().map(|h| h.join().expect("city worker panicked")).collect()
    });

    let good: Vec<PathBuf> = selected
        .iter()
        .zip(&reports)
        .filter(|(_, r)| r.failure.is_none())
        .map(|(c, _)| cfg.city_dir(c.id).join("features.geojson"))
        .collect();
    let registry = selected.iter().map(|c| CityConfig::builtin(c.id)).collect();
    let (loaded, load_failure) = match stages::load_files(&good, registry, &cfg.db_path()) {
        Ok(snap) => (snap.len(), None),
        Err(e) => (0, Some(StageFailure { stage: Stage::Load, error: format!("{e:#}") })),
    };
    let ok = load_failure.is_none() && reports.iter().all(|r| r.failure.is_none());
    let summary = Summary { cities: reports, loaded, load_failure, ok };
    std::fs::create_dir_all(&cfg.out_dir)?;
    let mut json = serde_json::to_vec_pretty(&summary)?;
    json.push(b'\n');
    std::fs::write(cfg.out_dir.join("summary.json"), json)?;
    Ok(summary)
}
