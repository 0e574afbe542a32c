//! Specialized states keyed by the set of tokens that produced them.
//!
//! Lookup falls back to the largest cached subset of the requested set; the
//! caller applies the remaining tokens itself.

use std::collections::{BTreeSet, HashMap};

use staging_core::dialog::DialogNode;
use staging_core::site::SiteTree;
use staging_core::Token;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CacheKey {
    pub site_id: String,
    pub tokens: BTreeSet<Token>,
}

impl CacheKey {
    pub fn new(site_id: impl Into<String>, tokens: impl IntoIterator<Item = Token>) -> Self {
        CacheKey {
            site_id: site_id.into(),
            tokens: tokens.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CachedState {
    pub site: SiteTree,
    pub dialog: DialogNode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheHit {
    pub state: CachedState,
    pub base: BTreeSet<Token>,
    pub remainder: BTreeSet<Token>,
}

/// Entries for one site, evicting the least recently used beyond `cap`.
#[derive(Debug)]
pub struct SiteCache {
    cap: usize,
    tick: u64,
    entries: HashMap<BTreeSet<Token>, (CachedState, u64)>,
}

impl SiteCache {
    pub fn new(cap: usize) -> Self {
        SiteCache {
            cap: cap.max(1),
            tick: 0,
            entries: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn touch(&mut self) -> u64 {
        self.tick += 1;
        self.tick
    }

    pub fn insert(&mut self, tokens: BTreeSet<Token>, state: CachedState) {
        let now = self.touch();
        self.entries.insert(tokens, (state, now));
        while self.entries.len() > self.cap {
            let oldest = self
                .entries
                .iter()
                .min_by_key(|(_, (_, used))| *used)
                .map(|(k, _)| k.clone())
                .expect("non-empty");
            self.entries.remove(&oldest);
        }
    }

    /// Exact entry, else the largest subset (ties to the lexicographically
    /// smallest token list).
    pub fn lookup(&mut self, tokens: &BTreeSet<Token>) -> Option<CacheHit> {
        let best = if self.entries.contains_key(tokens) {
            tokens.clone()
        } else {
            self.entries
                .keys()
                .filter(|k| k.is_subset(tokens))
                .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)))?
                .clone()
        };
        let now = self.touch();
        let (state, used) = self.entries.get_mut(&best).expect("present");
        *used = now;
        Some(CacheHit {
            state: state.clone(),
            remainder: tokens.difference(&best).cloned().collect(),
            base: best,
        })
    }
}
