//! The four pipeline stages as functions from files to files.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chrono::{DateTime, Utc};
use honorifics_core::domain::{read_records_csv, write_records_csv, CityConfig, SourceDescriptor, StreetRecord};
use honorifics_core::geomatch::{
    match_all, read_features_geojson, write_features_geojson, OsmExtract, OsmIndex, StreetFeature,
};
use honorifics_core::ingest::{
    import_annotated_csv, parse_sparql_results, parse_wiki_street_page, read_raw_csv, resolve_conflicts,
    translate_fields, write_raw_csv, Crawler, DictionaryTranslator, Fetcher, Imported, IngestError, PageContext,
    RawRecord, WikidataSource,
};
use honorifics_core::normalize::{clean_dataset, write_rejections_csv, CleanReport};
use honorifics_core::store::{FileStore, Snapshot, SnapshotStore};

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct IngestOutcome {
    pub records: Vec<RawRecord>,
    /// Wiki pages without a street infobox.
    pub skipped_pages: usize,
}

/// Files in `dir` with extension `ext`, sorted by name.
fn files_with_ext(dir: &Path, ext: &str) -> Result<Vec<PathBuf>> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x.eq_ignore_ascii_case(ext)))
        .collect();
    out.sort();
    Ok(out)
}

/// A file, or every `*.ext` file of a directory.
fn inputs(path: &Path, ext: &str) -> Result<Vec<PathBuf>> {
    if path.is_dir() {
        files_with_ext(path, ext)
    } else {
        Ok(vec![path.to_path_buf()])
    }
}

fn page_records(
    city: &CityConfig,
    pages: impl Iterator<Item = Result<(String, Option<String>)>>,
    translate: bool,
    at: DateTime<Utc>,
) -> Result<IngestOutcome> {
    let mut out = IngestOutcome::default();
    for page in pages {
        let (html, url) = page?;
        let ctx = PageContext { city: city.city, retrieved_at: at, url: url.as_deref() };
        match parse_wiki_street_page(&html, &ctx) {
            Ok(mut r) => {
                if translate {
                    r = translate_fields(&r, DictionaryTranslator::german_english());
                }
                if r.source_url.is_none() {
                    r.source_url = url;
                }
                out.records.push(r);
            }
            Err(IngestError::NotAStreetPage(why)) => {
                log::info!("{}: skipping page: {why}", city.city);
                out.skipped_pages += 1;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

/// Reads one configured source into raw records.
pub fn ingest_source(city: &CityConfig, source: &SourceDescriptor, at: DateTime<Utc>) -> Result<IngestOutcome> {
    match source {
        SourceDescriptor::Wikidata { file: Some(path), .. } => {
            let mut out = IngestOutcome::default();
            for f in inputs(path, "json")? {
                let body = fs::read_to_string(&f).with_context(|| format!("reading {}", f.display()))?;
                out.records.extend(parse_sparql_results(&body, city.city, at).with_context(|| f.display().to_string())?);
            }
            Ok(out)
        }
        SourceDescriptor::Wikidata { endpoint: Some(url), file: None } => {
            let records = WikidataSource::new(url.clone(), Fetcher::default()).fetch_at(city.city, at)?;
            Ok(IngestOutcome { records, skipped_pages: 0 })
        }
        SourceDescriptor::Wikidata { endpoint: None, file: None } => bail!("wikidata source needs `file` or `endpoint`"),
        SourceDescriptor::Wikihistory { dir: Some(dir), translate, .. } => {
            let pages = files_with_ext(dir, "html")?.into_iter().map(|p| {
                fs::read_to_string(&p).map(|h| (h, None)).with_context(|| format!("reading {}", p.display()))
            });
            page_records(city, pages, *translate, at)
        }
        SourceDescriptor::Wikihistory { urls: Some(list), translate, .. } => {
            let text = fs::read_to_string(list).with_context(|| format!("reading {}", list.display()))?;
            let mut crawler = Crawler::new(Fetcher::default());
            let urls: Vec<String> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect();
            let pages = urls.into_iter().map(move |u| Ok((crawler.fetch(&u)?, Some(u))));
            page_records(city, pages, *translate, at)
        }
        SourceDescriptor::Wikihistory { .. } => bail!("wikihistory source needs `dir` or `urls`"),
        SourceDescriptor::Csv { path, source } => {
            let records = match import_annotated_csv(path, *source, city.city, at)
                .with_context(|| path.display().to_string())?
            {
                Imported::Records(r) => r,
                Imported::Annotations(sets) => sets.iter().map(|s| resolve_conflicts(s, at).0).collect(),
            };
            Ok(IngestOutcome { records, skipped_pages: 0 })
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?))
}

pub fn write_raw(path: &Path, records: &[RawRecord]) -> Result<()> {
    let mut w = create(path)?;
    write_raw_csv(&mut w, records)?;
    w.flush()?;
    Ok(())
}

pub fn read_raw(path: &Path) -> Result<Vec<RawRecord>> {
    Ok(read_raw_csv(open(path)?).with_context(|| path.display().to_string())?)
}

pub fn write_records(path: &Path, records: &[StreetRecord]) -> Result<()> {
    let mut w = create(path)?;
    write_records_csv(&mut w, records)?;
    w.flush()?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<StreetRecord>> {
    Ok(read_records_csv(open(path)?).with_context(|| path.display().to_string())?)
}

/// raw CSV → canonical CSV plus rejection report.
pub fn normalize_file(input: &Path, out: &Path, report: &Path) -> Result<(usize, Vec<StreetRecord>, CleanReport)> {
    let raw = read_raw(input)?;
    let (records, rep) = clean_dataset(&raw);
    write_records(out, &records)?;
    let mut w = create(report)?;
    write_rejections_csv(&mut w, &rep.rejections)?;
    w.flush()?;
    Ok((raw.len(), records, rep))
}

/// canonical CSV → matched features GeoJSON plus unmatched records CSV.
/// All records must belong to `city`.
pub fn match_file(
    input: &Path,
    osm: &Path,
    city: &CityConfig,
    merge_radius_m: Option<f64>,
    out: &Path,
    unmatched: &Path,
) -> Result<Vec<StreetFeature>> {
    let records = read_records(input)?;
    if let Some(r) = records.iter().find(|r| r.city != city.city) {
        bail!("record {} belongs to {}, not {}", r.record_id, r.city, city.city);
    }
    let extract = OsmExtract::from_path(osm).with_context(|| osm.display().to_string())?;
    let mut index = OsmIndex::new(extract, city);
    if let Some(m) = merge_radius_m {
        index = index.with_merge_radius(m);
    }
    let features = match_all(&records, &index);
    let mut w = create(out)?;
    write_features_geojson(&mut w, &features)?;
    w.flush()?;
    let left: Vec<StreetRecord> = features.iter().filter(|f| !f.is_matched()).map(|f| f.record.clone()).collect();
    write_records(unmatched, &left)?;
    Ok(features)
}

pub fn read_features(path: &Path) -> Result<Vec<StreetFeature>> {
    Ok(read_features_geojson(open(path)?).with_context(|| path.display().to_string())?)
}

/// Features files → snapshot database over `cities`.
pub fn load_files(inputs: &[PathBuf], cities: Vec<CityConfig>, db: &Path) -> Result<Snapshot> {
    let mut all = Vec::new();
    for p in inputs {
        all.extend(read_features(p)?);
    }
    let snap = Snapshot::new(all, cities)?;
    FileStore::new(db).save(&snap)?;
    Ok(snap)
}
