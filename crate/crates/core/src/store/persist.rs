use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use geojson::FeatureCollection;
use serde::{Deserialize, Serialize};

use super::{Snapshot, StoreError};
use crate::domain::CityConfig;

/// Where snapshots live between runs.
pub trait SnapshotStore {
    fn save(&self, snapshot: &Snapshot) -> Result<(), StoreError>;
    fn load(&self) -> Result<Snapshot, StoreError>;
}

pub const DB_FORMAT: &str = "honorifics-db";
pub const DB_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct DbFile {
    format: String,
    version: u32,
    cities: Vec<CityConfig>,
    features: FeatureCollection,
}

/// A single JSON document holding the city registry and the features.
/// Saves replace the file atomically.
#[derive(Debug, Clone)]
pub struct FileStore {
    path: PathBuf,
}

impl FileStore {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        FileStore { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

impl SnapshotStore for FileStore {
    fn save(&self, snapshot: &Snapshot) -> Result<(), StoreError> {
        let doc = DbFile {
            format: DB_FORMAT.into(),
            version: DB_VERSION,
            cities: snapshot.cities().cloned().collect(),
            features: snapshot.to_feature_collection(),
        };
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut tmp = self.path.clone().into_os_string();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        {
            let mut f = fs::File::create(&tmp)?;
            serde_json::to_writer(&mut f, &doc).map_err(|e| StoreError::Corrupt(e.to_string()))?;
            f.write_all(b"\n")?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &self.path)?;
        Ok(())
    }

    fn load(&self) -> Result<Snapshot, StoreError> {
        let text = fs::read_to_string(&self.path)?;
        let doc: DbFile = serde_json::from_str(&text).map_err(|e| StoreError::Corrupt(e.to_string()))?;
        if doc.format != DB_FORMAT || doc.version != DB_VERSION {
            return Err(StoreError::Corrupt(format!("unsupported format {} v{}", doc.format, doc.version)));
        }
        Snapshot::from_feature_collection_with(&doc.features, doc.cities)
    }
}
