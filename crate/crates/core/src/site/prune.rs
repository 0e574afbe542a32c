//! Pruning a site by supplied labels.
//!
//! A token first selects every page lying below a node with that label
//! (forward slice), then keeps only the paths reaching those pages (backward
//! slice). The matched nodes are spliced out, their children taking their
//! place, and siblings that end up sharing a label are merged.

use std::collections::BTreeSet;

use super::fd::{expand_input, FunctionalDependency};
use super::{PageRef, SiteError, SiteNode, SiteTree};
use crate::token::{Token, Utterance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruneResult {
    pub tree: SiteTree,
    /// Tokens consumed by this call, expansion included.
    pub consumed: BTreeSet<Token>,
    /// Set when exactly one page is left.
    pub collapsed_page: Option<PageRef>,
}

impl PruneResult {
    fn new(tree: SiteTree, consumed: BTreeSet<Token>) -> Self {
        let collapsed_page = if tree.leaf_count() == 1 {
            tree.paths().into_iter().next().map(|p| p.page)
        } else {
            None
        };
        PruneResult {
            tree,
            consumed,
            collapsed_page,
        }
    }
}

pub fn prune_site(tree: &SiteTree, token: &Token) -> Result<PruneResult, SiteError> {
    let pruned = prune_once(tree, token)?;
    Ok(PruneResult::new(pruned, BTreeSet::from([token.clone()])))
}

/// Prune by every token of `utterance` plus whatever `fds` imply. Implied
/// tokens that were already consumed are skipped; any other token the tree
/// no longer offers rejects the whole utterance.
pub fn prune_with_expansion(
    tree: &SiteTree,
    utterance: &Utterance,
    fds: &[FunctionalDependency],
) -> Result<PruneResult, SiteError> {
    let mut order: Vec<Token> = Vec::new();
    for t in utterance.tokens() {
        if !order.contains(t) {
            order.push(t.clone());
        }
    }
    let given: BTreeSet<Token> = order.iter().cloned().collect();
    for t in expand_input(&given, fds) {
        if !given.contains(&t) && !tree.consumed().contains(&t) {
            order.push(t);
        }
    }
    let mut current = tree.clone();
    for t in &order {
        current = prune_once(&current, t)?;
    }
    Ok(PruneResult::new(current, order.into_iter().collect()))
}

fn prune_once(tree: &SiteTree, token: &Token) -> Result<SiteTree, SiteError> {
    if !tree.token_universe().contains(token) {
        return Err(SiteError::UnknownToken(token.clone()));
    }
    let root = tree.root();
    let pruned = if root.is_leaf() {
        root.clone()
    } else {
        slice(root, token).expect("a token in the universe labels some node")
    };
    let mut consumed = tree.consumed().clone();
    consumed.insert(token.clone());
    Ok(SiteTree::from_parts(pruned, consumed))
}

/// `node` restricted to pages below a `token` node, with those nodes spliced.
/// A page labelled `token` directly below `node` is a complete choice: it
/// replaces the rest of `node`.
fn slice(node: &SiteNode, token: &Token) -> Option<SiteNode> {
    let mut out = SiteNode {
        label: node.label.clone(),
        children: Vec::new(),
        page: None,
        stager: node.stager,
    };
    if let Some(hit) = node.children.iter().find(|c| &c.label == token && c.page.is_some()) {
        out.page = hit.page.clone();
        return Some(out);
    }
    for child in &node.children {
        if &child.label == token {
            for grandchild in &child.children {
                adopt(&mut out.children, grandchild.clone());
            }
        } else if let Some(kept) = slice(child, token) {
            adopt(&mut out.children, kept);
        }
    }
    (!out.children.is_empty()).then_some(out)
}

fn adopt(children: &mut Vec<SiteNode>, node: SiteNode) {
    match children.iter_mut().find(|c| c.label == node.label) {
        Some(existing) => merge(existing, node),
        None => children.push(node),
    }
}

fn merge(into: &mut SiteNode, other: SiteNode) {
    if into.page.is_none() {
        into.page = other.page;
    }
    if into.stager.is_none() {
        into.stager = other.stager;
    }
    for c in other.children {
        adopt(&mut into.children, c);
    }
}
