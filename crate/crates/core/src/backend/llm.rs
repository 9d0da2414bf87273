//! Chat-completion client with a persistent reply cache.
//!
//! Requests use the common chat-completion JSON shape: a system message,
//! one user message carrying the examples and the task, a temperature and
//! `n = 1`. Only replies that parse into a row are cached, so a malformed
//! reply can be re-asked. Concurrent identical prompts are coalesced: the
//! first caller fetches, the rest read its cache entry.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::cache::{cache_key, ResponseCache};
use super::{parse_reply, BackendError, BackendStats, SynthesisBackend, SynthesisRequest, SyntheticRow};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendConfig {
    /// Full URL of the chat-completions endpoint.
    pub endpoint: String,
    pub model: String,
    /// Name of the environment variable holding the API key.
    pub api_key_env: String,
    pub timeout_secs: f64,
    /// Extra attempts after a transport failure or 5xx status.
    pub max_retries: u32,
    pub cache_dir: String,
    pub temperature: f64,
}

impl Default for BackendConfig {
    fn default() -> Self {
        BackendConfig {
            endpoint: "https://api.openai.com/v1/chat/completions".into(),
            model: "gemini-1.5-pro".into(),
            api_key_env: "LLM_API_KEY".into(),
            timeout_secs: 120.0,
            max_retries: 2,
            cache_dir: ".synth-cache".into(),
            temperature: 1.0,
        }
    }
}

impl BackendConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.timeout_secs.is_nan() || self.timeout_secs <= 0.0 {
            return Err(format!("timeout must be positive, got {}", self.timeout_secs));
        }
        if self.endpoint.is_empty() {
            return Err("endpoint is empty".into());
        }
        Ok(())
    }
}

/// The JSON body sent for one request.
pub fn request_body(req: &SynthesisRequest, cfg: &BackendConfig) -> Value {
    json!({
        "model": cfg.model,
        "messages": [
            { "role": "system", "content": req.system },
            { "role": "user", "content": format!("{}\n\n{}", req.human, req.task) },
        ],
        "temperature": cfg.temperature,
        "n": 1,
    })
}

/// Pulls `choices[0].message.content` out of a completion response.
pub fn reply_text(body: &str) -> Result<String, BackendError> {
    let bad = |message: &str| BackendError::BadEnvelope { message: message.into(), raw: body.to_string() };
    let v: Value = serde_json::from_str(body).map_err(|e| bad(&e.to_string()))?;
    v.pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| bad("missing choices[0].message.content"))
}

pub struct LlmBackend {
    cfg: BackendConfig,
    cache: ResponseCache,
    client: reqwest::blocking::Client,
    in_flight: Mutex<HashMap<String, Arc<Mutex<()>>>>,
    network_calls: AtomicUsize,
    cache_hits: AtomicUsize,
    cache_misses: AtomicUsize,
}

impl LlmBackend {
    pub fn new(cfg: BackendConfig) -> Result<Self, BackendError> {
        cfg.validate().map_err(BackendError::Transport)?;
        let cache = ResponseCache::open(&cfg.cache_dir)?;
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs_f64(cfg.timeout_secs))
            .build()
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        Ok(LlmBackend {
            cfg,
            cache,
            client,
            in_flight: Mutex::new(HashMap::new()),
            network_calls: AtomicUsize::new(0),
            cache_hits: AtomicUsize::new(0),
            cache_misses: AtomicUsize::new(0),
        })
    }

    pub fn config(&self) -> &BackendConfig {
        &self.cfg
    }

    pub fn cache(&self) -> &ResponseCache {
        &self.cache
    }

    fn key_lock(&self, key: &str) -> Arc<Mutex<()>> {
        let mut map = self.in_flight.lock().expect("lock map poisoned");
        map.entry(key.to_string()).or_default().clone()
    }

    fn post(&self, body: &Value) -> Result<String, BackendError> {
        let mut last = BackendError::Transport("no attempt made".into());
        for attempt in 0..=self.cfg.max_retries {
            if attempt > 0 {
                std::thread::sleep(Duration::from_millis(250 * (1 << attempt.min(5))));
            }
            self.network_calls.fetch_add(1, Ordering::Relaxed);
            let mut rb = self.client.post(&self.cfg.endpoint).json(body);
            match std::env::var(&self.cfg.api_key_env) {
                Ok(key) if !key.is_empty() => rb = rb.bearer_auth(key),
                _ => log::debug!("{} unset; sending without credentials", self.cfg.api_key_env),
            }
            match rb.send() {
                Ok(resp) => {
                    let status = resp.status();
                    let text = resp.text().map_err(|e| BackendError::Transport(e.to_string()))?;
                    if status.is_success() {
                        return Ok(text);
                    }
                    last = BackendError::Status { status: status.as_u16(), body: text };
                    if !status.is_server_error() && status.as_u16() != 429 {
                        return Err(last);
                    }
                }
                Err(e) => last = BackendError::Transport(e.to_string()),
            }
        }
        Err(last)
    }
}

impl SynthesisBackend for LlmBackend {
    fn synthesize(&self, req: &SynthesisRequest, _rng: &mut ChaCha8Rng) -> Result<SyntheticRow, BackendError> {
        let key = cache_key(&self.cfg.model, &req.prompt_text());
        let lock = self.key_lock(&key);
        let _guard = lock.lock().expect("key lock poisoned");

        if let Some(reply) = self.cache.get(&key)? {
            self.cache_hits.fetch_add(1, Ordering::Relaxed);
            return parse_reply(&reply, &req.schema);
        }
        self.cache_misses.fetch_add(1, Ordering::Relaxed);
        let body = self.post(&request_body(req, &self.cfg))?;
        let reply = reply_text(&body)?;
        let row = parse_reply(&reply, &req.schema)?;
        self.cache.put(&key, &reply)?;
        Ok(row)
    }

    fn stats(&self) -> BackendStats {
        BackendStats {
            network_calls: self.network_calls.load(Ordering::Relaxed),
            cache_hits: self.cache_hits.load(Ordering::Relaxed),
            cache_misses: self.cache_misses.load(Ordering::Relaxed),
        }
    }
}
