use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use super::{Fetcher, IngestError};

/// Polite page fetcher: one request at a time, at least `min_delay` apart,
/// with an on-disk cache so an interrupted crawl resumes where it stopped.
pub struct Crawler {
    fetcher: Fetcher,
    min_delay: Duration,
    cache_dir: Option<PathBuf>,
    last_request: Option<Instant>,
    requests: usize,
}

impl Crawler {
    pub fn new(fetcher: Fetcher) -> Self {
        Self {
            fetcher,
            min_delay: Duration::from_secs(1),
            cache_dir: None,
            last_request: None,
            requests: 0,
        }
    }

    pub fn min_delay(mut self, delay: Duration) -> Self {
        self.min_delay = delay;
        self
    }

    pub fn cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    /// Network requests issued so far (cache hits excluded).
    pub fn requests(&self) -> usize {
        self.requests
    }

    fn cache_path(&self, url: &str) -> Option<PathBuf> {
        let digest = Sha256::digest(url.as_bytes());
        let name: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.cache_dir.as_ref().map(|d| d.join(format!("{name}.html")))
    }

    pub fn fetch(&mut self, url: &str) -> Result<String, IngestError> {
        let cached = self.cache_path(url);
        if let Some(path) = cached.as_ref().filter(|p| p.exists()) {
            return Ok(fs::read_to_string(path)?);
        }
        if let Some(last) = self.last_request {
            let since = last.elapsed();
            if since < self.min_delay {
                std::thread::sleep(self.min_delay - since);
            }
        }
        self.last_request = Some(Instant::now());
        self.requests += 1;
        let body = self.fetcher.get(url)?;
        if let Some(path) = cached {
            if let Some(dir) = path.parent() {
                fs::create_dir_all(dir)?;
            }
            fs::write(path, &body)?;
        }
        Ok(body)
    }
}
