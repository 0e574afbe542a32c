#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use staging_core::dialog::{simplify, DialogNode, Stager};
use staging_core::site::{SiteNode, SiteTree};
use staging_core::Token;

pub mod oracles;

pub fn tok(s: &str) -> Token {
    Token::new(s).unwrap()
}

pub fn stager() -> impl Strategy<Value = Stager> {
    prop_oneof![Just(Stager::I), Just(Stager::PE), Just(Stager::C), Just(Stager::A)]
}

/// Unsimplified scripts over a small alphabet, THETA included.
pub fn raw_script(alphabet: usize) -> impl Strategy<Value = DialogNode> {
    let leaf = prop_oneof![
        8 => (0..alphabet).prop_map(|i| DialogNode::prompt(tok(&format!("t{i}")))),
        1 => Just(DialogNode::Theta),
    ];
    leaf.prop_recursive(4, 24, 4, |inner| {
        (stager(), prop::collection::vec(inner, 1..4))
            .prop_map(|(s, children)| DialogNode::composite(s, children))
    })
}

/// Simplified scripts with at most `max_prompts` prompts.
pub fn script(alphabet: usize, max_prompts: usize) -> impl Strategy<Value = DialogNode> {
    raw_script(alphabet)
        .prop_map(|n| simplify(&n))
        .prop_filter("too many prompts", move |n| n.prompt_count() <= max_prompts)
}

/// Rename prompts left to right to p0, p1, ... so that all are distinct.
pub fn distinct(node: &DialogNode) -> DialogNode {
    fn go(node: &DialogNode, next: &mut usize) -> DialogNode {
        match node {
            DialogNode::Theta => DialogNode::Theta,
            DialogNode::Prompt(_) => {
                *next += 1;
                DialogNode::prompt(tok(&format!("p{}", *next - 1)))
            }
            DialogNode::Composite { stager, children } => {
                DialogNode::composite(*stager, children.iter().map(|c| go(c, next)).collect())
            }
        }
    }
    go(node, &mut 0)
}

pub fn universe(node: &DialogNode) -> BTreeSet<Token> {
    let mut u: BTreeSet<Token> = node.prompts().into_iter().cloned().collect();
    u.insert(tok("stranger"));
    u
}

/// Nested outline: a label index and children.
#[derive(Debug, Clone)]
pub struct Shape(pub usize, pub Vec<Shape>);

fn shape(depth: u32, pool: usize) -> BoxedStrategy<Shape> {
    let leaf = (0..pool).prop_map(|i| Shape(i, Vec::new())).boxed();
    if depth == 0 {
        return leaf;
    }
    prop_oneof![
        1 => leaf,
        3 => ((0..pool), prop::collection::vec(shape(depth - 1, pool), 1..4))
            .prop_map(|(i, c)| Shape(i, c)),
    ]
    .boxed()
}

fn build(shape: &Shape, level: usize, per_level: bool, path: &str) -> SiteNode {
    let name = if per_level {
        format!("l{level}x{}", shape.0)
    } else {
        format!("x{}", shape.0)
    };
    let here = format!("{path}/{name}");
    if shape.1.is_empty() {
        return SiteNode::leaf(tok(&name), here);
    }
    let mut children: Vec<SiteNode> = Vec::new();
    for c in &shape.1 {
        let child = build(c, level + 1, per_level, &here);
        if !children.iter().any(|e| e.label == child.label) {
            children.push(child);
        }
    }
    SiteNode::inner(tok(&name), children)
}

fn node_count(n: &SiteNode) -> usize {
    1 + n.children.iter().map(node_count).sum::<usize>()
}

/// Random valid sites of at most `max_nodes` nodes. With `per_level`, each
/// depth draws labels from its own alphabet; otherwise labels are shared
/// between levels and invalid trees are discarded.
pub fn site(max_depth: u32, max_nodes: usize, per_level: bool) -> impl Strategy<Value = SiteTree> {
    let pool = if per_level { 3 } else { 6 };
    prop::collection::vec(shape(max_depth.saturating_sub(1), pool), 1..5).prop_filter_map(
        "invalid or oversized site",
        move |top| {
            let mut children: Vec<SiteNode> = Vec::new();
            for s in &top {
                let c = build(s, 0, per_level, "");
                if !children.iter().any(|e| e.label == c.label) {
                    children.push(c);
                }
            }
            let root = SiteNode::inner(tok("site"), children);
            if node_count(&root) > max_nodes {
                return None;
            }
            SiteTree::new(root).ok()
        },
    )
}

/// Every page with the full label set of its path.
pub fn label_paths(tree: &SiteTree) -> BTreeSet<(BTreeSet<Token>, String)> {
    tree.paths()
        .into_iter()
        .map(|p| (p.labels.into_iter().collect(), p.page))
        .collect()
}
