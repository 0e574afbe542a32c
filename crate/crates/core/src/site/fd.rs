//! Functional dependencies between labels, read off the site's paths.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::SiteTree;
use crate::token::Token;

/// Every page whose labels include `lhs` also carries all of `rhs`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FunctionalDependency {
    pub lhs: BTreeSet<Token>,
    pub rhs: BTreeSet<Token>,
}

impl fmt::Display for FunctionalDependency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |s: &BTreeSet<Token>| s.iter().map(Token::quoted).collect::<Vec<_>>().join(", ");
        write!(f, "{{{}}} -> {{{}}}", set(&self.lhs), set(&self.rhs))
    }
}

/// Singleton-lhs dependencies with confidence one, sorted by lhs.
pub fn mine_fds(tree: &SiteTree) -> Vec<FunctionalDependency> {
    let paths: Vec<BTreeSet<Token>> = tree
        .paths()
        .into_iter()
        .map(|p| p.labels.into_iter().collect())
        .collect();
    let mut out = Vec::new();
    for a in tree.token_universe() {
        let mut with_a = paths.iter().filter(|p| p.contains(a));
        let Some(first) = with_a.next() else { continue };
        let mut rhs = first.clone();
        for p in with_a {
            rhs.retain(|t| p.contains(t));
        }
        rhs.remove(a);
        if !rhs.is_empty() {
            out.push(FunctionalDependency {
                lhs: BTreeSet::from([a.clone()]),
                rhs,
            });
        }
    }
    out
}

/// Smallest superset of `tokens` closed under `fds`.
pub fn expand_input(tokens: &BTreeSet<Token>, fds: &[FunctionalDependency]) -> BTreeSet<Token> {
    let mut out = tokens.clone();
    loop {
        let before = out.len();
        for fd in fds {
            if fd.lhs.is_subset(&out) {
                out.extend(fd.rhs.iter().cloned());
            }
        }
        if out.len() == before {
            return out;
        }
    }
}
