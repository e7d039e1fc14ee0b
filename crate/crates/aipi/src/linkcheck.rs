//! Evidence link accessibility checks.
//!
//! Quarantined from scoring: results live in a side report
//! (`link_status.json`) and never feed back into score computation, so
//! builds stay deterministic. Network access requires the explicit `live`
//! flag; offline, every artifact reports `not_attempted`.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::model::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkState {
    Ok,
    Redirect,
    Unreachable,
    NotAttempted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkStatus {
    pub artifact_id: String,
    pub url: String,
    pub status: LinkState,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub http_status: Option<u16>,
}

/// Check every artifact URL. `live = false` skips the network entirely.
pub fn link_check(d: &Dataset, live: bool) -> Vec<LinkStatus> {
    let agent = live.then(|| {
        ureq::builder()
            .redirects(0)
            .timeout(Duration::from_secs(10))
            .build()
    });
    d.artifacts
        .iter()
        .map(|a| {
            let (status, http_status) = match &agent {
                None => (LinkState::NotAttempted, None),
                Some(agent) => probe(agent, &a.url),
            };
            LinkStatus {
                artifact_id: a.artifact_id.clone(),
                url: a.url.clone(),
                status,
                http_status,
            }
        })
        .collect()
}

fn probe(agent: &ureq::Agent, url: &str) -> (LinkState, Option<u16>) {
    match agent.get(url).call() {
        Ok(resp) => (LinkState::Ok, Some(resp.status())),
        Err(ureq::Error::Status(code, _)) => {
            let state = if (300..400).contains(&code) {
                LinkState::Redirect
            } else {
                LinkState::Unreachable
            };
            (state, Some(code))
        }
        Err(_) => (LinkState::Unreachable, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EvidenceArtifact, SourceKind};
    use chrono::NaiveDate;

    fn dataset_with_urls(urls: &[&str]) -> Dataset {
        Dataset {
            indicators: vec![],
            subjects: vec![],
            artifacts: urls
                .iter()
                .enumerate()
                .map(|(i, u)| EvidenceArtifact {
                    artifact_id: format!("A{i}"),
                    url: u.to_string(),
                    published_date: None,
                    retrieved_date: NaiveDate::from_ymd_opt(2025, 9, 1).unwrap(),
                    archive_url: None,
                    source_kind: SourceKind::Other,
                })
                .collect(),
            codes: vec![],
        }
    }

    #[test]
    fn offline_mode_never_attempts() {
        let d = dataset_with_urls(&["https://example.org/a", "https://example.org/b"]);
        let statuses = link_check(&d, false);
        assert_eq!(statuses.len(), 2);
        assert!(statuses.iter().all(|s| s.status == LinkState::NotAttempted));
    }

    #[test]
    fn local_server_returns_ok() {
        use std::io::{Read, Write};
        use std::net::TcpListener;

        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let handle = std::thread::spawn(move || {
            let (mut stream, _) = listener.accept().unwrap();
            let mut buf = [0u8; 1024];
            let _ = stream.read(&mut buf);
            stream
                .write_all(b"HTTP/1.1 200 OK\r\nContent-Length: 2\r\n\r\nok")
                .unwrap();
        });

        let d = dataset_with_urls(&[&format!("http://{addr}/artifact")]);
        let statuses = link_check(&d, true);
        handle.join().unwrap();
        assert_eq!(statuses[0].status, LinkState::Ok);
        assert_eq!(statuses[0].http_status, Some(200));
    }
}
