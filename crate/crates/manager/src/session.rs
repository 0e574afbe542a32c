use std::fmt;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;
use staging_core::dialog::DialogNode;
use staging_core::site::SiteTree;
use staging_core::Token;

/// Ten decimal digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SessionToken(String);

impl SessionToken {
    pub fn random(rng: &mut impl Rng) -> Self {
        SessionToken(format!("{:010}", rng.gen_range(0..10_000_000_000u64)))
    }

    pub fn parse(text: &str) -> Option<Self> {
        (text.len() == 10 && text.bytes().all(|b| b.is_ascii_digit()))
            .then(|| SessionToken(text.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SessionToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub site_state: SiteTree,
    pub dialog_state: DialogNode,
    pub input_so_far: Vec<Token>,
}

#[derive(Debug, Clone)]
pub struct Session {
    pub token: SessionToken,
    pub site_id: String,
    pub site_state: SiteTree,
    pub dialog_state: DialogNode,
    /// Accepted tokens in order, implied ones included.
    pub input_so_far: Vec<Token>,
    /// One snapshot per accepted turn, oldest first.
    pub history: Vec<Snapshot>,
    pub created: Instant,
    pub last_active: Instant,
}

impl Session {
    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            site_state: self.site_state.clone(),
            dialog_state: self.dialog_state.clone(),
            input_so_far: self.input_so_far.clone(),
        }
    }

    pub fn restore(&mut self, snapshot: Snapshot) {
        self.site_state = snapshot.site_state;
        self.dialog_state = snapshot.dialog_state;
        self.input_so_far = snapshot.input_so_far;
    }
}
