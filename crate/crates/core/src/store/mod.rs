//! Indexed, immutable snapshots of matched streets answering the city,
//! theme, year-range and tag filters, plus their on-disk persistence.

mod filter;
mod persist;
mod snapshot;

use std::sync::Arc;

use arc_swap::ArcSwapOption;
use thiserror::Error;

pub use filter::{FilterError, QueryFilter};
pub use persist::{FileStore, SnapshotStore, DB_FORMAT, DB_VERSION};
pub use snapshot::{Diagnostic, Snapshot};

use crate::domain::CityId;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("unknown city {0}")]
    UnknownCity(CityId),
    #[error("no street matches the filter")]
    NoMatch,
    #[error(transparent)]
    InvalidFilter(#[from] FilterError),
    #[error("invalid snapshot: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidSnapshot(Vec<Diagnostic>),
    #[error("corrupt database: {0}")]
    Corrupt(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Shared pointer to the current snapshot, possibly none yet. Readers
/// never block; `replace` swaps atomically and in-flight readers keep the
/// snapshot they loaded.
#[derive(Debug, Default)]
pub struct SnapshotHandle(ArcSwapOption<Snapshot>);

impl SnapshotHandle {
    pub fn new(snapshot: Snapshot) -> Self {
        SnapshotHandle(ArcSwapOption::from_pointee(snapshot))
    }

    pub fn empty() -> Self {
        SnapshotHandle::default()
    }

    pub fn current(&self) -> Option<Arc<Snapshot>> {
        self.0.load_full()
    }

    pub fn replace(&self, snapshot: Snapshot) {
        self.0.store(Some(Arc::new(snapshot)));
    }
}
