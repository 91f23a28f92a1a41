use std::time::Duration;

use reqwest::blocking::{Client, RequestBuilder, Response};
use reqwest::StatusCode;

use super::IngestError;

/// Bounded retries with exponential backoff: attempt `n` (from 0) waits
/// `base_delay * 2^(n-1)` before running.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            attempts: 3,
            base_delay: Duration::from_millis(500),
        }
    }
}

impl RetryPolicy {
    pub fn delay_before(&self, attempt: u32) -> Duration {
        if attempt == 0 {
            Duration::ZERO
        } else {
            self.base_delay * 2u32.saturating_pow(attempt - 1)
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fetcher {
    client: Client,
    retry: RetryPolicy,
}

const USER_AGENT: &str = concat!("honorifics/", env!("CARGO_PKG_VERSION"));

impl Fetcher {
    pub fn new(retry: RetryPolicy) -> Self {
        let client = Client::builder()
            .user_agent(USER_AGENT)
            .timeout(Duration::from_secs(60))
            .build()
            .expect("http client");
        Self { client, retry }
    }

    pub fn client(&self) -> &Client {
        &self.client
    }

    /// Sends the request built by `build`, retrying transport errors,
    /// 429 and 5xx. Other statuses fail immediately.
    pub fn send(
        &self,
        url: &str,
        build: impl Fn(&Client) -> RequestBuilder,
    ) -> Result<String, IngestError> {
        let attempts = self.retry.attempts.max(1);
        let mut last = String::new();
        for attempt in 0..attempts {
            std::thread::sleep(self.retry.delay_before(attempt));
            match build(&self.client).send() {
                Ok(resp) if resp.status().is_success() => {
                    return read_body(resp).map_err(|message| IngestError::SourceUnavailable {
                        url: url.to_string(),
                        attempts: attempt + 1,
                        message,
                    })
                }
                Ok(resp) if retryable(resp.status()) => {
                    last = format!("HTTP {}", resp.status());
                }
                Ok(resp) => {
                    return Err(IngestError::SourceUnavailable {
                        url: url.to_string(),
                        attempts: attempt + 1,
                        message: format!("HTTP {}", resp.status()),
                    })
                }
                Err(e) => last = e.to_string(),
            }
            log::warn!("{url}: attempt {} failed: {last}", attempt + 1);
        }
        Err(IngestError::SourceUnavailable {
            url: url.to_string(),
            attempts,
            message: last,
        })
    }

    pub fn get(&self, url: &str) -> Result<String, IngestError> {
        self.send(url, |c| c.get(url))
    }
}

impl Default for Fetcher {
    fn default() -> Self {
        Self::new(RetryPolicy::default())
    }
}

fn retryable(status: StatusCode) -> bool {
    status == StatusCode::TOO_MANY_REQUESTS || status.is_server_error()
}

fn read_body(resp: Response) -> Result<String, String> {
    resp.text().map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backoff_doubles() {
        let p = RetryPolicy {
            attempts: 3,
            base_delay: Duration::from_millis(100),
        };
        assert_eq!(p.delay_before(0), Duration::ZERO);
        assert_eq!(p.delay_before(1), Duration::from_millis(100));
        assert_eq!(p.delay_before(2), Duration::from_millis(200));
    }
}
