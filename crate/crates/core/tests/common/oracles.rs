//! Reference checks shared by the property suites.

use std::collections::{BTreeSet, HashSet};

use staging_core::dialog::{reduce, valid_tokens, DialogNode};
use staging_core::site::{prune_site, site_to_dialog, DialogMode, SiteNode, SiteTree};
use staging_core::Token;

use super::{label_paths, tok, universe};

pub type Paths = BTreeSet<(BTreeSet<Token>, String)>;
pub type Ordered = Vec<(Vec<Token>, String)>;

pub fn ordered_paths(tree: &SiteTree) -> Ordered {
    tree.paths().into_iter().map(|p| (p.labels, p.page)).collect()
}

/// Keep the pages whose path carries `a`, minus those shadowed by a page
/// labelled `a` hanging directly off one of their ancestors, and drop `a`.
pub fn oracle_prune(paths: &Ordered, a: &Token) -> Ordered {
    let shadows: Vec<&[Token]> = paths
        .iter()
        .filter(|(l, _)| l.last() == Some(a))
        .map(|(l, _)| &l[..l.len() - 1])
        .collect();
    paths
        .iter()
        .filter(|(labels, _)| labels.contains(a))
        .filter(|(labels, _)| {
            !shadows
                .iter()
                .any(|pre| labels.starts_with(pre) && labels.len() > pre.len() + 1)
        })
        .map(|(labels, page)| (labels.iter().filter(|t| *t != a).cloned().collect(), page.clone()))
        .collect()
}

pub fn as_sets(paths: &Ordered) -> Paths {
    paths
        .iter()
        .map(|(l, p)| (l.iter().cloned().collect(), p.clone()))
        .collect()
}

/// Children sorted recursively, so that trees differing only in sibling
/// order compare equal.
pub fn canonical(node: &SiteNode) -> SiteNode {
    let mut children: Vec<SiteNode> = node.children.iter().map(canonical).collect();
    children.sort_by(|a, b| a.label.cmp(&b.label));
    SiteNode {
        children,
        ..node.clone()
    }
}

/// Walks every reachable pair of states, offering every token of the site and
/// the dialog, and checks that both sides accept the same tokens and finish
/// together.
pub fn check_consistency(tree: &SiteTree) -> Result<usize, String> {
    let dialog = site_to_dialog(tree, DialogMode::OutOfTurn);
    let mut seen: HashSet<(DialogNode, BTreeSet<Token>)> = HashSet::new();
    let mut stack = vec![(dialog, tree.clone())];
    let mut checked = 0;
    while let Some((d, s)) = stack.pop() {
        if !seen.insert((d.clone(), s.consumed().clone())) {
            continue;
        }
        if d.is_theta() != s.is_resolved() {
            return Err(format!("finish mismatch: dialog {d}, consumed {:?}", s.consumed()));
        }
        if d.is_theta() {
            continue;
        }
        let dialog_valid = valid_tokens(&d);
        if &dialog_valid != s.token_universe() {
            return Err(format!(
                "offer mismatch at {d}: dialog {:?} site {:?}",
                dialog_valid,
                s.token_universe()
            ));
        }
        let mut offered = dialog_valid.clone();
        offered.extend(s.consumed().iter().cloned());
        offered.insert(tok("stranger"));
        for t in offered {
            checked += 1;
            let r = reduce(&d, &t);
            let p = prune_site(&s, &t);
            if r.accepted != p.is_ok() {
                return Err(format!("token {t} at {d}: dialog {} site {}", r.accepted, p.is_ok()));
            }
            if let Ok(p) = p {
                stack.push((r.result, p.tree));
            }
        }
    }
    Ok(checked)
}

/// Prune by the `i`th token, then by the `j`th of what remains, comparing
/// each step with [`oracle_prune`] and, when the reverse order is also valid,
/// the two results with each other.
pub fn check_prune(tree: &SiteTree, i: usize, j: usize) -> Result<(), String> {
    let universe: Vec<Token> = tree.token_universe().iter().cloned().collect();
    let a = &universe[i % universe.len()];
    let paths = ordered_paths(tree);

    let after_a = prune_site(tree, a).map_err(|e| e.to_string())?;
    let expected_a = oracle_prune(&paths, a);
    if label_paths(&after_a.tree) != as_sets(&expected_a) {
        return Err(format!("prune by {a} disagrees with the path oracle"));
    }
    if after_a.collapsed_page.is_some() != (after_a.tree.leaf_count() == 1) {
        return Err(format!("collapse flag wrong after {a}"));
    }

    let second: Vec<Token> = after_a.tree.token_universe().iter().cloned().collect();
    if second.is_empty() {
        return Ok(());
    }
    let b = &second[j % second.len()];
    let ab = prune_site(&after_a.tree, b).map_err(|e| e.to_string())?.tree;
    if label_paths(&ab) != as_sets(&oracle_prune(&expected_a, b)) {
        return Err(format!("prune by {a} then {b} disagrees with the path oracle"));
    }
    if let Ok(after_b) = prune_site(tree, b) {
        if let Ok(ba) = prune_site(&after_b.tree, a) {
            if canonical(ab.root()) != canonical(ba.tree.root()) {
                return Err(format!("{a} then {b} differs from {b} then {a}"));
            }
        }
    }
    Ok(())
}

/// Structural reflection against trying every token.
pub fn check_reflection(node: &DialogNode) -> Result<(), String> {
    let structural = valid_tokens(node);
    let brute: BTreeSet<Token> = universe(node)
        .into_iter()
        .filter(|t| reduce(node, t).accepted)
        .collect();
    if structural != brute {
        return Err(format!("{node}: reflected {structural:?}, accepted {brute:?}"));
    }
    Ok(())
}
