//! Sites as dialog scripts.
//!
//! Every inner node offers its children as alternatives. A child with label
//! `l` and subtree `S` is staged as `PE[S l]` when the user may say things out
//! of turn, and as `I[l S]` when the site must be browsed top down. Leaves
//! become bare prompts. A node-level `stager` attribute overrides the default
//! for that node; sequential stagers (`I`, `C`) put the label first.

use serde::{Deserialize, Serialize};

use super::{SiteNode, SiteTree};
use crate::dialog::{simplify, DialogNode, Stager};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DialogMode {
    Browsing,
    OutOfTurn,
}

impl DialogMode {
    fn stager(self) -> Stager {
        match self {
            DialogMode::Browsing => Stager::I,
            DialogMode::OutOfTurn => Stager::PE,
        }
    }
}

pub fn site_to_dialog(tree: &SiteTree, mode: DialogMode) -> DialogNode {
    let root = tree.root();
    if root.is_leaf() {
        return if tree.consumed().is_empty() {
            DialogNode::prompt(root.label.clone())
        } else {
            DialogNode::Theta
        };
    }
    if tree.is_resolved() {
        return DialogNode::Theta;
    }
    simplify(&alternatives(root, mode))
}

fn alternatives(node: &SiteNode, mode: DialogMode) -> DialogNode {
    DialogNode::composite(
        Stager::A,
        node.children.iter().map(|c| child(c, mode)).collect(),
    )
}

fn child(node: &SiteNode, mode: DialogMode) -> DialogNode {
    let label = DialogNode::prompt(node.label.clone());
    if node.is_leaf() {
        return label;
    }
    let stager = node.stager.unwrap_or_else(|| mode.stager());
    let sub = alternatives(node, mode);
    let staged = if stager.is_sequential() {
        DialogNode::composite(stager, vec![label.clone(), sub])
    } else {
        DialogNode::composite(stager, vec![sub, label.clone()])
    };
    if node.page.is_some() {
        DialogNode::composite(Stager::A, vec![label, staged])
    } else {
        staged
    }
}
