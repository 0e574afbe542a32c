//! Reduction rules for staging a dialog with partial input.
//!
//! Rules are tried in precedence order and the first applicable one fires:
//!
//! | rule | stager | effect |
//! |------|--------|--------|
//! | 2    | any    | sole prompt matches: the dialog is complete |
//! | 3    | PE     | remove the leftmost matching prompt child |
//! | 4    | C, I   | remove the head prompt if it matches |
//! | 5    | A      | a matching prompt alternative completes the alternator |
//! | 6    | PE     | leftmost run of alternator-bearing children: rewrite the first one that accepts, in place |
//! | 7    | PE     | entering any other subdialog: `C[<y.a> PE[x z]]`, the subdialog must be finished first |
//! | 8    | C, I   | recurse into the head subdialog |
//! | 9    | A      | apply to every subdialog, keep only those that changed |
//! | 10-12| any    | nothing fired: input rejected, node returned untouched |
//!
//! Every result is passed through [`simplify`].

use std::collections::BTreeSet;

use super::node::{DialogNode, Stager};
use crate::token::{Token, Utterance};

/// Result of offering input to a dialog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutcome {
    pub accepted: bool,
    /// Simplified result; equal to the input when rejected.
    pub result: DialogNode,
    pub consumed: Vec<Token>,
}

impl ReductionOutcome {
    fn rejected(node: &DialogNode, consumed: Vec<Token>) -> Self {
        ReductionOutcome {
            accepted: false,
            result: node.clone(),
            consumed,
        }
    }
}

/// Rule 1 and theta absorption, bottom-up to a fixpoint.
///
/// * a composite with one composite child is replaced by that child, except
///   that an alternator keeps a sole PE/C/I subdialog;
/// * a composite with one prompt child is kept;
/// * a completed (`THETA`) child is dropped from PE, C and I composites and
///   turns an alternator into `THETA`;
/// * a composite left without children is `THETA`.
pub fn simplify(node: &DialogNode) -> DialogNode {
    match node {
        DialogNode::Theta | DialogNode::Prompt(_) => node.clone(),
        DialogNode::Composite { stager, children } => {
            let children: Vec<DialogNode> = children.iter().map(simplify).collect();
            collapse(*stager, children)
        }
    }
}

/// Apply the local simplification to a composite whose children are already
/// simplified.
fn collapse(stager: Stager, mut children: Vec<DialogNode>) -> DialogNode {
    if stager == Stager::A && children.iter().any(DialogNode::is_theta) {
        return DialogNode::Theta;
    }
    children.retain(|c| !c.is_theta());
    match children.len() {
        0 => DialogNode::Theta,
        1 => {
            let only = children.pop().expect("one child");
            match &only {
                DialogNode::Prompt(_) => DialogNode::composite(stager, vec![only]),
                DialogNode::Composite { stager: inner, .. }
                    if stager == Stager::A && *inner != Stager::A =>
                {
                    DialogNode::composite(stager, vec![only])
                }
                _ => only,
            }
        }
        _ => DialogNode::composite(stager, children),
    }
}

pub fn is_simplified(node: &DialogNode) -> bool {
    simplify(node) == *node
}

/// Offer one token to a simplified dialog.
pub fn reduce(node: &DialogNode, token: &Token) -> ReductionOutcome {
    match step(node, token) {
        Some(fired) => ReductionOutcome {
            accepted: true,
            result: simplify(&fired.node),
            consumed: vec![token.clone()],
        },
        None => ReductionOutcome::rejected(node, vec![token.clone()]),
    }
}

/// Fold [`reduce`] over an utterance, all or nothing.
///
/// A turn hands at most one token to interpreter-staged subdialogs: a
/// multi-token utterance in which two or more tokens are consumed beneath an
/// `I` stager is rejected.
pub fn apply_utterance(node: &DialogNode, utterance: &Utterance) -> ReductionOutcome {
    let consumed = utterance.tokens().to_vec();
    let mut current = node.clone();
    let mut interpreted = 0usize;
    for token in utterance.tokens() {
        match step(&current, token) {
            Some(fired) => {
                interpreted += usize::from(fired.via_interpreter);
                current = simplify(&fired.node);
            }
            None => return ReductionOutcome::rejected(node, consumed),
        }
    }
    if utterance.len() > 1 && interpreted > 1 {
        return ReductionOutcome::rejected(node, consumed);
    }
    ReductionOutcome {
        accepted: true,
        result: current,
        consumed,
    }
}

/// A rule fired; `via_interpreter` records whether an `I` stager took part.
pub(crate) struct Fired {
    pub node: DialogNode,
    pub via_interpreter: bool,
}

impl Fired {
    fn new(node: DialogNode, via_interpreter: bool) -> Self {
        Fired {
            node,
            via_interpreter,
        }
    }
}

/// One reduction step without the final simplification. `None` is rules 10-12.
pub(crate) fn step(node: &DialogNode, token: &Token) -> Option<Fired> {
    let (stager, children) = match node {
        DialogNode::Theta => return None,
        DialogNode::Prompt(t) => return (t == token).then(|| Fired::new(DialogNode::Theta, false)),
        DialogNode::Composite { stager, children } => (*stager, children),
    };
    let interp = stager == Stager::I;

    // rule 2
    if let [DialogNode::Prompt(t)] = children.as_slice() {
        return (t == token).then(|| Fired::new(DialogNode::Theta, interp));
    }

    match stager {
        Stager::PE => partial_evaluator(children, token),
        Stager::C | Stager::I => sequential(stager, children, token),
        Stager::A => alternator(children, token),
    }
}

fn partial_evaluator(children: &[DialogNode], token: &Token) -> Option<Fired> {
    // rule 3
    if let Some(i) = children.iter().position(|c| c.as_prompt() == Some(token)) {
        let mut rest = children.to_vec();
        rest.remove(i);
        return Some(Fired::new(DialogNode::composite(Stager::PE, rest), false));
    }

    // rule 6
    for (i, child) in children.iter().enumerate() {
        if !child.contains_alternator() {
            break;
        }
        if let Some(fired) = step(child, token) {
            let mut rewritten = children.to_vec();
            rewritten[i] = fired.node;
            return Some(Fired::new(
                DialogNode::composite(Stager::PE, rewritten),
                fired.via_interpreter,
            ));
        }
    }

    // rule 7
    for (i, child) in children.iter().enumerate() {
        if !matches!(child, DialogNode::Composite { .. }) {
            continue;
        }
        if let Some(fired) = step(child, token) {
            let mut rest = children.to_vec();
            rest.remove(i);
            let mut seq = vec![fired.node];
            if !rest.is_empty() {
                seq.push(DialogNode::composite(Stager::PE, rest));
            }
            return Some(Fired::new(
                DialogNode::composite(Stager::C, seq),
                fired.via_interpreter,
            ));
        }
    }
    None
}

fn sequential(stager: Stager, children: &[DialogNode], token: &Token) -> Option<Fired> {
    let interp = stager == Stager::I;
    let head = children.first()?;
    match head {
        // rule 4
        DialogNode::Prompt(t) if t == token => Some(Fired::new(
            DialogNode::composite(stager, children[1..].to_vec()),
            interp,
        )),
        // rule 8
        DialogNode::Composite { .. } => {
            let fired = step(head, token)?;
            let mut rewritten = children.to_vec();
            rewritten[0] = fired.node;
            Some(Fired::new(
                DialogNode::composite(stager, rewritten),
                interp || fired.via_interpreter,
            ))
        }
        _ => None,
    }
}

fn alternator(children: &[DialogNode], token: &Token) -> Option<Fired> {
    // rule 5
    if children.iter().any(|c| c.as_prompt() == Some(token)) {
        return Some(Fired::new(DialogNode::Theta, false));
    }

    // rule 9: alternatives that do not accept the token are pruned
    let mut kept = Vec::new();
    let mut via = false;
    for child in children {
        if !matches!(child, DialogNode::Composite { .. }) {
            continue;
        }
        if let Some(fired) = step(child, token) {
            via |= fired.via_interpreter;
            kept.push(fired.node);
        }
    }
    if kept.is_empty() {
        None
    } else {
        Some(Fired::new(DialogNode::composite(Stager::A, kept), via))
    }
}

/// Tokens the dialog accepts right now ("What may I say?").
///
/// Computed structurally from the stager semantics; equal to
/// `{ t | reduce(node, t).accepted }`.
pub fn valid_tokens(node: &DialogNode) -> BTreeSet<Token> {
    let mut out = BTreeSet::new();
    collect_valid(node, &mut out);
    out
}

fn collect_valid(node: &DialogNode, out: &mut BTreeSet<Token>) {
    match node {
        DialogNode::Theta => {}
        DialogNode::Prompt(t) => {
            out.insert(t.clone());
        }
        DialogNode::Composite { stager, children } => match stager {
            Stager::PE | Stager::A => {
                for child in children {
                    collect_valid(child, out);
                }
            }
            Stager::C | Stager::I => {
                if let Some(head) = children.first() {
                    collect_valid(head, out);
                }
            }
        },
    }
}

pub fn is_complete(node: &DialogNode) -> bool {
    node.is_theta()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialog::parse_script;

    fn s(text: &str) -> DialogNode {
        parse_script(text).unwrap()
    }

    fn t(text: &str) -> Token {
        Token::new(text).unwrap()
    }

    fn red(script: &str, token: &str) -> ReductionOutcome {
        reduce(&simplify(&s(script)), &t(token))
    }

    #[test]
    fn simplify_examples() {
        assert_eq!(simplify(&s("A[THETA]")), DialogNode::Theta);
        assert_eq!(simplify(&s("PE[a b]")), s("PE[a b]"));
        assert_eq!(simplify(&s("C[THETA]")), DialogNode::Theta);
        assert_eq!(simplify(&s("PE[THETA a THETA b]")), s("PE[a b]"));
        assert_eq!(simplify(&s("PE[C[a b]]")), s("C[a b]"));
        assert_eq!(simplify(&s("C[C[c2]]")), s("C[c2]"));
        assert_eq!(simplify(&s("A[PE[a b]]")), s("A[PE[a b]]"));
        assert_eq!(simplify(&s("A[A[r d]]")), s("A[r d]"));
        assert_eq!(simplify(&s("A[r THETA d]")), DialogNode::Theta);
        assert_eq!(simplify(&s("PE[A[THETA] ga]")), s("PE[ga]"));
    }

    #[test]
    fn rule_examples() {
        let out = red("PE[a b c]", "z");
        assert!(!out.accepted);
        assert_eq!(out.result, s("PE[a b c]"));

        let out = red("C[a b]", "b");
        assert!(!out.accepted);
        assert_eq!(out.result, s("C[a b]"));

        let out = red("A[r d]", "d");
        assert!(out.accepted);
        assert_eq!(out.result, DialogNode::Theta);

        assert_eq!(red("C[a b]", "a").result, s("C[b]"));
        assert_eq!(red("PE[a b c]", "b").result, s("PE[a c]"));
        assert_eq!(red("PE[a]", "a").result, DialogNode::Theta);
        assert_eq!(red("I[a b]", "a").result, s("I[b]"));
        assert!(!red("I[a b]", "b").accepted);
    }

    #[test]
    fn breakfast_restructuring() {
        let out = red("PE[C[e1 e2] C[c1 c2] C[b1 b2]]", "c1");
        assert!(out.accepted);
        assert_eq!(out.result.to_string(), "C[C[c2] PE[C[e1 e2] C[b1 b2]]]");
        let out = reduce(&out.result, &t("c2"));
        assert_eq!(out.result.to_string(), "PE[C[e1 e2] C[b1 b2]]");
        // e1 is out of order while the coffee subdialog is open
        assert!(!red("C[C[c2] PE[C[e1 e2] C[b1 b2]]]", "e1").accepted);
    }

    #[test]
    fn rule_six_requires_alternators_on_the_far_left() {
        // both children carry alternators: rewrite in place, stay a PE
        assert_eq!(red("PE[A[r d] A[x y] s]", "x").result, s("PE[A[r d] s]"));
        // a plain subdialog first: rule 7 restructures
        assert_eq!(red("PE[C[p q] A[x y] s]", "x").result, s("PE[C[p q] s]"));
        assert_eq!(red("PE[C[p q] A[x y] s]", "p").result, s("C[C[q] PE[A[x y] s]]"));
    }

    #[test]
    fn alternator_prunes_unchanged_alternatives() {
        let out = red("A[PE[A[r d] s] PE[A[r] h] q]", "d");
        assert!(out.accepted);
        assert_eq!(out.result, s("A[PE[s]]"));
        assert!(!red("A[PE[A[r d] s] PE[A[r] h]]", "zz").accepted);
    }

    #[test]
    fn utterances_are_atomic() {
        let node = s("PE[PE[a b] PE[c d]]");
        let utt = Utterance::parse_text("c a b d").unwrap();
        let out = apply_utterance(&node, &utt);
        assert!(!out.accepted);
        assert_eq!(out.result, node);

        let out = apply_utterance(&s("PE[a b c d]"), &utt);
        assert!(out.accepted);
        assert!(is_complete(&out.result));
    }

    #[test]
    fn interpreter_takes_one_token_per_turn() {
        let two = Utterance::parse_text("a b").unwrap();
        assert!(!apply_utterance(&s("I[a b]"), &two).accepted);
        assert!(apply_utterance(&s("C[a b]"), &two).accepted);
        assert!(apply_utterance(&s("PE[I[a b] c]"), &Utterance::parse_text("c a").unwrap()).accepted);
    }

    #[test]
    fn reflection_examples() {
        let names = |n: &DialogNode| -> Vec<String> {
            valid_tokens(n).into_iter().map(|t| t.to_string()).collect()
        };
        assert_eq!(names(&s("C[a b c]")), ["a"]);
        assert_eq!(names(&s("PE[C[e1 e2] C[c1 c2] C[b1 b2]]")), ["b1", "c1", "e1"]);
        assert!(valid_tokens(&DialogNode::Theta).is_empty());
    }
}
