//! How many input sequences reach a page.

use serde::Serialize;

use super::to_dialog::{site_to_dialog, DialogMode};
use super::{SiteError, SiteTree};
use crate::dialog::Enumerator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum CountMethod {
    /// `leaves * depth!`, exact when every page sits at the same depth.
    ClosedForm { leaves: usize, depth: usize },
    Enumerated { states: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SequenceCount {
    pub count: u128,
    #[serde(flatten)]
    pub method: CountMethod,
}

/// Sequences completing the out-of-turn dialog of `tree`.
pub fn count_sequences(
    tree: &SiteTree,
    multi_token: bool,
    state_cap: usize,
) -> Result<SequenceCount, SiteError> {
    if !multi_token && tree.is_level_uniform() {
        let leaves = tree.leaf_count();
        let depth = tree.paths().first().map_or(0, |p| p.labels.len());
        let count = leaves as u128 * (1..=depth as u128).product::<u128>();
        return Ok(SequenceCount {
            count,
            method: CountMethod::ClosedForm { leaves, depth },
        });
    }
    enumerate(tree, DialogMode::OutOfTurn, multi_token, state_cap)
}

/// Brute-force count of the out-of-turn dialog, ignoring the closed form.
pub fn enumerate_site(
    tree: &SiteTree,
    multi_token: bool,
    state_cap: usize,
) -> Result<SequenceCount, SiteError> {
    enumerate(tree, DialogMode::OutOfTurn, multi_token, state_cap)
}

/// Single-token sequences completing the browsing dialog of `tree`.
pub fn count_browsing_sequences(tree: &SiteTree, state_cap: usize) -> Result<SequenceCount, SiteError> {
    enumerate(tree, DialogMode::Browsing, false, state_cap)
}

fn enumerate(
    tree: &SiteTree,
    mode: DialogMode,
    multi_token: bool,
    state_cap: usize,
) -> Result<SequenceCount, SiteError> {
    let dialog = site_to_dialog(tree, mode);
    let mut e = Enumerator::with_cap(multi_token, state_cap);
    let count = e.count(&dialog)?;
    Ok(SequenceCount {
        count,
        method: CountMethod::Enumerated {
            states: e.explored(),
        },
    })
}
