use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use chrono::Utc;
use clap::{Parser, Subcommand, ValueEnum};
use honorifics_api::{router, AppState, ServeConfig};
use honorifics_cli::stages;
use honorifics_cli::{run_pipeline, PipelineConfig};
use honorifics_core::domain::{CityConfig, CityId, Source, SourceDescriptor};
use honorifics_core::geomatch::write_features_geojson;
use honorifics_core::store::{FileStore, SnapshotHandle, SnapshotStore};

#[derive(Parser)]
#[command(name = "honorifics", version, about = "Build and serve maps of streets named after people")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceKind {
    Wikidata,
    Wikihistory,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Fetch or read one source into a raw CSV.
    Ingest {
        #[arg(long)]
        city: CityId,
        #[arg(long)]
        source: SourceKind,
        /// SPARQL endpoint (wikidata only).
        #[arg(long)]
        endpoint: Option<String>,
        /// Results file or directory (wikidata), page directory or URL list
        /// (wikihistory), or CSV file.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Translate German fields of wiki pages.
        #[arg(long)]
        translate: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Clean and deduplicate a raw CSV into the canonical CSV.
    Normalize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// Match canonical records to an OSM extract.
    Match {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        osm: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        unmatched: PathBuf,
        /// Required when the input has no records to infer it from.
        #[arg(long)]
        city: Option<CityId>,
        #[arg(long)]
        merge_radius_m: Option<f64>,
    },
    /// Load matched features into a snapshot database.
    Load {
        #[arg(long = "in", required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        #[arg(long)]
        db: PathBuf,
    },
    /// Export one city as canonical CSV (`.csv`) or GeoJSON (otherwise).
    Export {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        city: CityId,
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve the HTTP API. SIGHUP reloads the database.
    Serve {
        #[arg(long)]
        db: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
    /// Run the whole pipeline from a config file.
    Pipeline {
        #[command(subcommand)]
        action: PipelineAction,
    },
}

#[derive(Subcommand)]
enum PipelineAction {
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        city: Option<CityId>,
    },
}

fn csv_source(path: &Path) -> Result<Source> {
    let mut r = csv::ReaderBuilder::new().from_path(path).with_context(|| path.display().to_string())?;
    let annotated = r.headers()?.iter().any(|h| h.trim().eq_ignore_ascii_case("annotator"));
    Ok(if annotated { Source::AnnotatedCsv } else { Source::Curated })
}

fn ingest(city: CityId, kind: SourceKind, endpoint: Option<String>, input: Option<PathBuf>, translate: bool, out: &Path) -> Result<()> {
    let desc = match kind {
        SourceKind::Wikidata => SourceDescriptor::Wikidata { endpoint, file: input },
        SourceKind::Wikihistory => {
            let input = input.context("--in is required for wikihistory")?;
            if input.is_dir() {
                SourceDescriptor::Wikihistory { dir: Some(input), urls: None, translate }
            } else {
                SourceDescriptor::Wikihistory { dir: None, urls: Some(input), translate }
            }
        }
        SourceKind::Csv => {
            let path = input.context("--in is required for csv")?;
            SourceDescriptor::Csv { source: csv_source(&path)?, path }
        }
    };
    let got = stages::ingest_source(&CityConfig::builtin(city), &desc, Utc::now())?;
    stages::write_raw(out, &got.records)?;
    eprintln!("ingested {} records ({} pages skipped)", got.records.len(), got.skipped_pages);
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Ingest { city, source, endpoint, input, translate, out } => {
            ingest(city, source, endpoint, input, translate, &out)?
        }
        Command::Normalize { input, out, report } => {
            let (n, kept, rep) = stages::normalize_file(&input, &out, &report)?;
            eprintln!("{n} in, {} kept, {} dropped, {} merged", kept.len(), rep.dropped(), rep.merged());
        }
        Command::Match { input, osm, out, unmatched, city, merge_radius_m } => {
            let city = match city {
                Some(c) => c,
                None => match stages::read_records(&input)?.first() {
                    Some(r) => r.city,
                    None => bail!("--city is required for an empty input"),
                },
            };
            let f = stages::match_file(&input, &osm, &CityConfig::builtin(city), merge_radius_m, &out, &unmatched)?;
            let matched = f.iter().filter(|x| x.is_matched()).count();
            eprintln!("{matched} of {} matched", f.len());
        }
        Command::Load { input, db } => {
            let snap = stages::load_files(&input, CityConfig::builtins(), &db)?;
            eprintln!("loaded {} features into {}", snap.len(), db.display());
        }
        Command::Export { db, city, out } => {
            let snap = FileStore::new(&db).load()?;
            snap.city(city)?;
            let features: Vec<_> = snap.features().iter().filter(|f| f.record.city == city).cloned().collect();
            if out.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
                let records: Vec<_> = features.into_iter().map(|f| f.record).collect();
                stages::write_records(&out, &records)?;
            } else {
                let mut w = std::io::BufWriter::new(std::fs::File::create(&out)?);
                write_features_geojson(&mut w, &features)?;
            }
        }
        Command::Serve { db, port, config, host } => {
            let cfg = match config {
                Some(p) => ServeConfig::from_path(&p)?,
                None => ServeConfig::default(),
            };
            let store = FileStore::new(&db);
            let handle = Arc::new(match store.load() {
                Ok(s) => SnapshotHandle::new(s),
                Err(e) => {
                    log::warn!("starting without data: {e}");
                    SnapshotHandle::empty()
                }
            });
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async move {
                #[cfg(unix)]
                tokio::spawn(honorifics_api::reload_on_sighup(handle.clone(), store));
                let listener = tokio::net::TcpListener::bind((host.as_str(), port)).await?;
                log::info!("listening on {}", listener.local_addr()?);
                honorifics_api::serve(listener, router(AppState::new(handle, cfg))).await
            })?;
        }
        Command::Pipeline { action: PipelineAction::Run { config, city } } => {
            let cfg = PipelineConfig::from_path(&config)?;
            let summary = run_pipeline(&cfg, city)?;
            print!("{}", summary.table());
            for (city, stage, error) in summary.failures() {
                match city {
                    Some(c) => eprintln!("stage {stage} failed for {c}: {error}"),
                    None => eprintln!("stage {stage} failed: {error}"),
                }
            }
            if !summary.ok {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
