use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use parking_lot::{Mutex, RwLock};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use sha2::{Digest, Sha256};
use staging_core::dialog::{apply_utterance, valid_tokens, DialogNode, DEFAULT_STATE_CAP};
use staging_core::site::{
    count_sequences, expand_input, load_site, mine_fds, prune_with_expansion, site_to_dialog,
    DialogMode, FunctionalDependency, PageRef, SequenceCount, SiteNode, SiteTree,
};
use staging_core::{Token, Utterance};

use crate::cache::{CachedState, SiteCache};
use crate::error::ManagerError;
use crate::session::{Session, SessionToken, Snapshot};

#[derive(Debug, Clone)]
pub struct ManagerConfig {
    pub session_ttl: Duration,
    pub cache_cap: usize,
    pub state_cap: usize,
    pub cache_enabled: bool,
}

impl Default for ManagerConfig {
    fn default() -> Self {
        ManagerConfig {
            session_ttl: Duration::from_secs(30 * 60),
            cache_cap: 1024,
            state_cap: DEFAULT_STATE_CAP,
            cache_enabled: true,
        }
    }
}

/// An ingested site with everything precomputed from it.
#[derive(Debug)]
pub struct SiteRecord {
    pub id: String,
    pub tree: SiteTree,
    pub fds: Vec<FunctionalDependency>,
    pub dialog: DialogNode,
    /// Whether states depend only on the set of tokens supplied, so that the
    /// specialization cache may be used.
    pub cacheable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiteSummary {
    pub site_id: String,
    pub name: Token,
    pub leaves: usize,
    pub depth: usize,
    pub dependencies: usize,
    pub cacheable: bool,
}

impl SiteRecord {
    fn summary(&self) -> SiteSummary {
        SiteSummary {
            site_id: self.id.clone(),
            name: self.tree.name().clone(),
            leaves: self.tree.leaf_count(),
            depth: self.tree.depth(),
            dependencies: self.fds.len(),
            cacheable: self.cacheable,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptionLink {
    pub label: Token,
    pub kind: &'static str,
}

/// The rendering of a session state sent to clients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InteractionResponse {
    pub session: SessionToken,
    pub site_id: String,
    pub options: Vec<OptionLink>,
    pub input_so_far: Vec<Token>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub completed: Option<PageRef>,
    /// The only page left while labels remain unsaid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collapsed: Option<PageRef>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub rejected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valid_tokens: Option<Vec<Token>>,
}

impl InteractionResponse {
    /// Canonical JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("response serializes")
    }
}

type Clock = Box<dyn Fn() -> Instant + Send + Sync>;

pub struct InteractionManager {
    config: ManagerConfig,
    sites: RwLock<HashMap<String, Arc<SiteRecord>>>,
    caches: RwLock<HashMap<String, Arc<Mutex<SiteCache>>>>,
    sessions: RwLock<HashMap<SessionToken, Arc<Mutex<Session>>>>,
    rng: Mutex<StdRng>,
    clock: Clock,
}

impl InteractionManager {
    pub fn new(config: ManagerConfig) -> Self {
        InteractionManager {
            config,
            sites: RwLock::default(),
            caches: RwLock::default(),
            sessions: RwLock::default(),
            rng: Mutex::new(StdRng::from_entropy()),
            clock: Box::new(Instant::now),
        }
    }

    /// Deterministic session tokens.
    pub fn with_seed(self, seed: u64) -> Self {
        *self.rng.lock() = StdRng::seed_from_u64(seed);
        self
    }

    pub fn with_clock(mut self, clock: impl Fn() -> Instant + Send + Sync + 'static) -> Self {
        self.clock = Box::new(clock);
        self
    }

    pub fn config(&self) -> &ManagerConfig {
        &self.config
    }

    /// Store a site under the hash of its document. Ingesting the same bytes
    /// twice is a no-op.
    pub fn ingest_site(&self, document: &str) -> Result<SiteSummary, ManagerError> {
        let id = hex::encode(Sha256::digest(document.as_bytes()))[..16].to_string();
        if let Some(existing) = self.sites.read().get(&id) {
            return Ok(existing.summary());
        }
        let tree = load_site(document)?;
        let record = Arc::new(SiteRecord {
            fds: mine_fds(&tree),
            dialog: site_to_dialog(&tree, DialogMode::OutOfTurn),
            cacheable: order_insensitive(&tree),
            id: id.clone(),
            tree,
        });
        let mut cache = SiteCache::new(self.config.cache_cap);
        cache.insert(
            BTreeSet::new(),
            CachedState {
                site: record.tree.clone(),
                dialog: record.dialog.clone(),
            },
        );
        self.caches.write().insert(id.clone(), Arc::new(Mutex::new(cache)));
        let summary = record.summary();
        self.sites.write().entry(id).or_insert(record);
        Ok(summary)
    }

    pub fn sites(&self) -> Vec<SiteSummary> {
        let mut out: Vec<SiteSummary> = self.sites.read().values().map(|s| s.summary()).collect();
        out.sort_by(|a, b| a.site_id.cmp(&b.site_id));
        out
    }

    pub fn site(&self, site_id: &str) -> Result<Arc<SiteRecord>, ManagerError> {
        self.sites
            .read()
            .get(site_id)
            .cloned()
            .ok_or_else(|| ManagerError::UnknownSite(site_id.to_string()))
    }

    pub fn count(&self, site_id: &str, multi_token: bool) -> Result<SequenceCount, ManagerError> {
        let site = self.site(site_id)?;
        Ok(count_sequences(&site.tree, multi_token, self.config.state_cap)?)
    }

    pub fn create_session(&self, site_id: &str) -> Result<InteractionResponse, ManagerError> {
        let site = self.site(site_id)?;
        self.purge_expired();
        let now = (self.clock)();
        let mut sessions = self.sessions.write();
        let token = loop {
            let candidate = SessionToken::random(&mut *self.rng.lock());
            if !sessions.contains_key(&candidate) {
                break candidate;
            }
        };
        let session = Session {
            token: token.clone(),
            site_id: site.id.clone(),
            site_state: site.tree.clone(),
            dialog_state: site.dialog.clone(),
            input_so_far: Vec::new(),
            history: Vec::new(),
            created: now,
            last_active: now,
        };
        let response = render(&session, false);
        sessions.insert(token, Arc::new(Mutex::new(session)));
        Ok(response)
    }

    /// Drop idle sessions; returns how many were removed.
    pub fn purge_expired(&self) -> usize {
        let now = (self.clock)();
        let ttl = self.config.session_ttl;
        let mut sessions = self.sessions.write();
        let before = sessions.len();
        sessions.retain(|_, s| now.saturating_duration_since(s.lock().last_active) <= ttl);
        before - sessions.len()
    }

    pub fn live_sessions(&self) -> usize {
        self.sessions.read().len()
    }

    fn session(&self, token: &str) -> Result<Arc<Mutex<Session>>, ManagerError> {
        let unknown = || ManagerError::UnknownSession(token.to_string());
        let key = SessionToken::parse(token).ok_or_else(unknown)?;
        let session = self.sessions.read().get(&key).cloned().ok_or_else(unknown)?;
        let now = (self.clock)();
        let idle = now.saturating_duration_since(session.lock().last_active);
        if idle > self.config.session_ttl {
            self.sessions.write().remove(&key);
            return Err(ManagerError::SessionExpired(token.to_string()));
        }
        Ok(session)
    }

    fn with_session<R>(
        &self,
        token: &str,
        f: impl FnOnce(&mut Session) -> Result<R, ManagerError>,
    ) -> Result<R, ManagerError> {
        let handle = self.session(token)?;
        let mut session = handle.lock();
        session.last_active = (self.clock)();
        f(&mut session)
    }

    pub fn current(&self, token: &str) -> Result<InteractionResponse, ManagerError> {
        self.with_session(token, |s| Ok(render(s, false)))
    }

    pub fn snapshot(&self, token: &str) -> Result<Snapshot, ManagerError> {
        self.with_session(token, |s| Ok(s.snapshot()))
    }

    /// Offer an utterance, whether it answers the current options or not.
    pub fn submit_input(
        &self,
        token: &str,
        utterance: &Utterance,
    ) -> Result<InteractionResponse, ManagerError> {
        self.with_session(token, |session| {
            let site = self.site(&session.site_id)?;
            match self.advance(&site, session, utterance) {
                Some((tokens, next)) => {
                    let snapshot = session.snapshot();
                    session.history.push(snapshot);
                    session.input_so_far.extend(tokens);
                    session.site_state = next.site;
                    session.dialog_state = next.dialog;
                    Ok(render(session, false))
                }
                None => Ok(render(session, true)),
            }
        })
    }

    /// Tokens that would be accepted as a one-token utterance right now.
    pub fn reflect(&self, token: &str) -> Result<BTreeSet<Token>, ManagerError> {
        self.with_session(token, |session| {
            if session.dialog_state.is_theta() {
                return Ok(BTreeSet::new());
            }
            let site = self.site(&session.site_id)?;
            let mut out = valid_tokens(&session.dialog_state);
            for t in session.site_state.token_universe() {
                if out.contains(t) {
                    continue;
                }
                let utt = Utterance::single(t.clone());
                if let Some(tokens) = plan(&site, session, &utt) {
                    if compute(&session.site_state, &session.dialog_state, &tokens).is_some() {
                        out.insert(t.clone());
                    }
                }
            }
            Ok(out)
        })
    }

    pub fn step_back(&self, token: &str, n: usize) -> Result<InteractionResponse, ManagerError> {
        self.with_session(token, |session| {
            if n == 0 {
                return Err(ManagerError::BadRequest("n must be positive".into()));
            }
            let available = session.history.len();
            if n > available {
                return Err(ManagerError::BackTooFar {
                    requested: n,
                    available,
                });
            }
            let snapshot = session.history[available - n].clone();
            session.history.truncate(available - n);
            session.restore(snapshot);
            Ok(render(session, false))
        })
    }

    fn advance(
        &self,
        site: &SiteRecord,
        session: &Session,
        utterance: &Utterance,
    ) -> Option<(Vec<Token>, CachedState)> {
        if session.dialog_state.is_theta() {
            return None;
        }
        let tokens = plan(site, session, utterance)?;
        if !(self.config.cache_enabled && site.cacheable) {
            let next = compute(&session.site_state, &session.dialog_state, &tokens)?;
            return Some((tokens, next));
        }

        let fresh: BTreeSet<Token> = tokens.iter().cloned().collect();
        let reachable = session
            .site_state
            .paths()
            .iter()
            .any(|p| fresh.iter().all(|t| p.labels.contains(t)));
        if !reachable {
            return None;
        }
        let mut key: BTreeSet<Token> = session.input_so_far.iter().cloned().collect();
        key.extend(fresh);
        let cache = self.caches.read().get(&site.id).cloned()?;
        let hit = cache.lock().lookup(&key);
        let next = match hit {
            Some(hit) if hit.remainder.is_empty() => hit.state,
            Some(hit) => {
                let rest: Vec<Token> = hit.remainder.into_iter().collect();
                compute(&hit.state.site, &hit.state.dialog, &rest)
                    .or_else(|| compute(&session.site_state, &session.dialog_state, &tokens))?
            }
            None => compute(&session.site_state, &session.dialog_state, &tokens)?,
        };
        cache.lock().insert(key, next.clone());
        Some((tokens, next))
    }
}

/// The tokens a turn would consume: the utterance in order, then whatever
/// the site's dependencies add, sorted. `None` if the utterance repeats a
/// token or one already supplied.
fn plan(site: &SiteRecord, session: &Session, utterance: &Utterance) -> Option<Vec<Token>> {
    let so_far: BTreeSet<Token> = session.input_so_far.iter().cloned().collect();
    let mut seen = so_far.clone();
    let mut tokens = Vec::new();
    for t in utterance.tokens() {
        if !seen.insert(t.clone()) {
            return None;
        }
        tokens.push(t.clone());
    }
    for t in expand_input(&seen, &site.fds) {
        if !seen.contains(&t) {
            tokens.push(t);
        }
    }
    Some(tokens)
}

fn compute(site: &SiteTree, dialog: &DialogNode, tokens: &[Token]) -> Option<CachedState> {
    let utterance = Utterance::new(tokens.to_vec()).ok()?;
    let d = apply_utterance(dialog, &utterance);
    if !d.accepted {
        return None;
    }
    let s = prune_with_expansion(site, &utterance, &[]).ok()?;
    (d.result.is_theta() == s.tree.is_resolved()).then_some(CachedState {
        site: s.tree,
        dialog: d.result,
    })
}

fn render(session: &Session, rejected: bool) -> InteractionResponse {
    let done = session.dialog_state.is_theta();
    let single = || {
        (session.site_state.leaf_count() == 1)
            .then(|| session.site_state.paths().into_iter().next().map(|p| p.page))
            .flatten()
    };
    let (options, completed, collapsed) = if done {
        let page = session.site_state.resolved_page().cloned().or_else(single);
        (Vec::new(), page, None)
    } else {
        let options = session
            .dialog_state
            .solicitation()
            .into_iter()
            .map(|label| OptionLink { label, kind: "link" })
            .collect();
        (options, None, single())
    };
    InteractionResponse {
        session: session.token.clone(),
        site_id: session.site_id.clone(),
        options,
        input_so_far: session.input_so_far.clone(),
        completed,
        collapsed,
        rejected,
        valid_tokens: None,
    }
}

/// True when no page's labels are a subset of another's and no node
/// overrides its stager; such sites reach the same state for a token set in
/// any order.
fn order_insensitive(tree: &SiteTree) -> bool {
    fn plain(node: &SiteNode) -> bool {
        node.stager.is_none() && node.children.iter().all(plain)
    }
    if !plain(tree.root()) {
        return false;
    }
    let paths = tree.paths();
    let sets: Vec<BTreeSet<Token>> = paths.into_iter().map(|p| p.labels.into_iter().collect()).collect();
    sets.iter().enumerate().all(|(i, a)| {
        sets.iter()
            .enumerate()
            .all(|(j, b)| i == j || !a.is_subset(b))
    })
}
