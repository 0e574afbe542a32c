//! Hierarchical site models.
//!
//! A site is a tree of hyperlink labels ending in leaf pages. It can be
//! turned into a dialog script ([`site_to_dialog`]), pruned by partial input
//! ([`prune_site`]), mined for functional dependencies between labels
//! ([`mine_fds`]) and counted ([`count_sequences`]).

mod count;
mod fd;
mod load;
mod prune;
pub mod synthetic;
mod to_dialog;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::dialog::{EnumerationError, Stager};
use crate::token::Token;

pub use count::{
    count_browsing_sequences, count_sequences, enumerate_site, CountMethod, SequenceCount,
};
pub use fd::{expand_input, mine_fds, FunctionalDependency};
pub use load::{load_site, load_site_with_cap, DEFAULT_REF_DEPTH_CAP};
pub use prune::{prune_site, prune_with_expansion, PruneResult};
pub use to_dialog::{site_to_dialog, DialogMode};

/// Reference to a leaf page: a URL or content id.
pub type PageRef = String;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SiteError {
    #[error("malformed site document: {0}")]
    Malformed(String),
    #[error("duplicate label `{label}` among the children of `{parent}`")]
    DuplicateSibling { parent: String, label: String },
    #[error("leaf `{0}` has no page")]
    LeafWithoutPage(String),
    #[error("internal node `{0}` carries a page")]
    PageOnInternalNode(String),
    #[error("label `{0}` repeats along a single root-to-leaf path")]
    RepeatedLabelOnPath(String),
    #[error("pages `{0}` and `{1}` are classified under the same label set")]
    IndistinguishableLeaves(String, String),
    #[error("reference cycle through id `{0}`")]
    Cycle(String),
    #[error("unknown refid `{0}`")]
    UnknownRef(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("reference expansion exceeds depth cap {0}")]
    DepthCapExceeded(usize),
    #[error("token `{0}` is not in the site's vocabulary")]
    UnknownToken(Token),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

/// A node of the site hierarchy. The label is the text of the hyperlink that
/// leads to it; the root's label is the site name.
///
/// In a loaded site a node has a page iff it has no children. Merging during
/// pruning can leave a page on an inner node, reachable with no further input
/// below it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiteNode {
    pub label: Token,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<SiteNode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub page: Option<PageRef>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stager: Option<Stager>,
}

impl SiteNode {
    pub fn leaf(label: Token, page: impl Into<PageRef>) -> Self {
        SiteNode {
            label,
            children: Vec::new(),
            page: Some(page.into()),
            stager: None,
        }
    }

    pub fn inner(label: Token, children: Vec<SiteNode>) -> Self {
        SiteNode {
            label,
            children,
            page: None,
            stager: None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn child(&self, label: &Token) -> Option<&SiteNode> {
        self.children.iter().find(|c| &c.label == label)
    }

    fn collect_labels(&self, out: &mut BTreeSet<Token>) {
        for c in &self.children {
            out.insert(c.label.clone());
            c.collect_labels(out);
        }
    }

    fn depth(&self) -> usize {
        self.children.iter().map(|c| 1 + c.depth()).max().unwrap_or(0)
    }

    fn count_pages(&self) -> usize {
        usize::from(self.page.is_some()) + self.children.iter().map(SiteNode::count_pages).sum::<usize>()
    }
}

/// One page together with the labels still standing between it and the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SitePath {
    pub labels: Vec<Token>,
    pub page: PageRef,
}

/// A validated site and the tokens it understands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteTree {
    root: SiteNode,
    token_universe: BTreeSet<Token>,
    depth: usize,
    consumed: BTreeSet<Token>,
}

impl SiteTree {
    pub(crate) fn from_parts(root: SiteNode, consumed: BTreeSet<Token>) -> Self {
        let mut token_universe = BTreeSet::new();
        if root.is_leaf() {
            if consumed.is_empty() {
                token_universe.insert(root.label.clone());
            }
        } else {
            root.collect_labels(&mut token_universe);
        }
        let depth = root.depth();
        SiteTree {
            root,
            token_universe,
            depth,
            consumed,
        }
    }

    /// Build and validate a site from an in-memory hierarchy.
    pub fn new(root: SiteNode) -> Result<Self, SiteError> {
        load::validate(&root)?;
        Ok(SiteTree::from_parts(root, BTreeSet::new()))
    }

    pub fn root(&self) -> &SiteNode {
        &self.root
    }

    pub fn name(&self) -> &Token {
        &self.root.label
    }

    /// Labels that can still be supplied. A single-page site answers to its
    /// own name.
    pub fn token_universe(&self) -> &BTreeSet<Token> {
        &self.token_universe
    }

    /// Longest root-to-leaf edge count.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Tokens already supplied to reach this state.
    pub fn consumed(&self) -> &BTreeSet<Token> {
        &self.consumed
    }

    pub fn leaf_count(&self) -> usize {
        self.root.count_pages()
    }

    /// True when some page has had every one of its labels supplied.
    pub fn is_resolved(&self) -> bool {
        self.root.page.is_some() && !self.consumed.is_empty()
    }

    /// The page reached once every label above it has been supplied.
    pub fn resolved_page(&self) -> Option<&PageRef> {
        self.root.page.as_ref().filter(|_| !self.consumed.is_empty())
    }

    /// Every page with its outstanding labels, root excluded.
    pub fn paths(&self) -> Vec<SitePath> {
        let mut out = Vec::new();
        if self.root.is_leaf() && self.consumed.is_empty() {
            if let Some(page) = &self.root.page {
                out.push(SitePath {
                    labels: vec![self.root.label.clone()],
                    page: page.clone(),
                });
            }
            return out;
        }
        fn walk(node: &SiteNode, prefix: &mut Vec<Token>, out: &mut Vec<SitePath>) {
            if let Some(page) = &node.page {
                out.push(SitePath {
                    labels: prefix.clone(),
                    page: page.clone(),
                });
            }
            for c in &node.children {
                prefix.push(c.label.clone());
                walk(c, prefix, out);
                prefix.pop();
            }
        }
        walk(&self.root, &mut Vec::new(), &mut out);
        out
    }

    /// True when every page sits at the same depth.
    pub fn is_level_uniform(&self) -> bool {
        let mut depths = self.paths().into_iter().map(|p| p.labels.len());
        match depths.next() {
            Some(first) => depths.all(|d| d == first),
            None => true,
        }
    }

    /// Compact JSON site document for this tree.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            name: &'a Token,
            #[serde(skip_serializing_if = "Option::is_none")]
            page: Option<&'a PageRef>,
            node: &'a [SiteNode],
        }
        serde_json::to_string(&Doc {
            name: &self.root.label,
            page: self.root.page.as_ref(),
            node: &self.root.children,
        })
        .expect("site serializes")
    }
}
