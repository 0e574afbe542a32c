#![allow(dead_code)]

//! The congress walkthrough over a real socket.

use std::sync::Arc;
use std::time::{Duration, Instant};

use serde_json::{json, Value};
use staging_manager::{http, InteractionManager, ManagerConfig};

pub struct Served {
    pub base: String,
    pub client: reqwest::Client,
}

pub async fn start() -> Served {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let manager = Arc::new(InteractionManager::new(ManagerConfig::default()));
    tokio::spawn(http::serve(listener, manager));
    Served {
        base: format!("http://{addr}"),
        client: reqwest::Client::new(),
    }
}

impl Served {
    pub async fn post(&self, path: &str, body: Value) -> (u16, Value) {
        let r = self.client.post(format!("{}{path}", self.base)).json(&body).send().await.unwrap();
        (r.status().as_u16(), r.json().await.unwrap())
    }

    pub async fn post_text(&self, path: &str, body: String) -> (u16, Value) {
        let r = self.client.post(format!("{}{path}", self.base)).body(body).send().await.unwrap();
        (r.status().as_u16(), r.json().await.unwrap())
    }

    pub async fn get(&self, path: &str) -> (u16, Value) {
        let r = self.client.get(format!("{}{path}", self.base)).send().await.unwrap();
        (r.status().as_u16(), r.json().await.unwrap())
    }
}

/// Runs ⟨d⟩, ⟨s⟩, then the ga link. Returns the final response and the
/// wall time from session creation to completion.
pub async fn congress_walk(s: &Served) -> (Value, Duration) {
    let (status, site) = s.post_text("/sites", include_str!("../../../../data/mini-congress.xml").to_string()).await;
    assert_eq!(status, 201, "{site}");
    let id = site["site_id"].as_str().unwrap().to_string();

    let clock = Instant::now();
    let (status, start) = s.post("/sessions", json!({"site_id": id})).await;
    assert_eq!(status, 201, "{start}");
    let token = start["session"].as_str().unwrap().to_string();
    let input = format!("/sessions/{token}/input");
    let (_, r) = s.post(&input, json!({"utterance": ["d"]})).await;
    assert_eq!(r["options"].as_array().unwrap().len(), 2, "{r}");
    let (_, r) = s.post(&input, json!({"utterance": ["s"]})).await;
    let link = r["options"][0]["label"].as_str().unwrap().to_string();
    let (status, last) = s.post(&input, json!({"utterance": [link]})).await;
    assert_eq!(status, 200);
    (last, clock.elapsed())
}
