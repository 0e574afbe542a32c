//! Exhaustive enumeration of the input sequences that complete a dialog.
//!
//! With single-token turns a sequence is an ordering of tokens; with
//! multi-token turns it is a sequence of non-empty token groups (for a flat
//! `PE` these are the ordered set partitions of its prompts). Counting is
//! memoized on dialog states, so sites whose dialogs share structure stay
//! cheap, but every distinct state is charged against a cap.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use super::node::DialogNode;
use super::reduce::{reduce, simplify, step, valid_tokens};
use crate::token::{Token, Utterance};

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("explored more than {cap} dialog states")]
    StateCapExceeded { cap: usize },
}

/// One possible turn: the utterance and the dialog it leads to.
#[derive(Debug, Clone)]
pub struct Turn {
    pub utterance: Utterance,
    pub result: DialogNode,
}

#[derive(Debug)]
pub struct Enumerator {
    multi_token: bool,
    state_cap: usize,
    explored: usize,
    counts: HashMap<DialogNode, u128>,
}

impl Enumerator {
    pub fn new(multi_token: bool) -> Self {
        Enumerator::with_cap(multi_token, DEFAULT_STATE_CAP)
    }

    pub fn with_cap(multi_token: bool, state_cap: usize) -> Self {
        Enumerator {
            multi_token,
            state_cap,
            explored: 0,
            counts: HashMap::new(),
        }
    }

    /// Distinct states charged against the cap so far.
    pub fn explored(&self) -> usize {
        self.explored
    }

    fn charge(&mut self) -> Result<(), EnumerationError> {
        self.explored += 1;
        if self.explored > self.state_cap {
            Err(EnumerationError::StateCapExceeded {
                cap: self.state_cap,
            })
        } else {
            Ok(())
        }
    }

    /// Number of turn sequences that take `node` to `THETA`.
    pub fn count(&mut self, node: &DialogNode) -> Result<u128, EnumerationError> {
        if node.is_theta() {
            return Ok(1);
        }
        if let Some(&n) = self.counts.get(node) {
            return Ok(n);
        }
        self.charge()?;
        let mut total = 0u128;
        for turn in self.turns(node)? {
            total += self.count(&turn.result)?;
        }
        self.counts.insert(node.clone(), total);
        Ok(total)
    }

    /// Every completing sequence, in a deterministic order. Fails rather than
    /// truncating once `limit` sequences would be exceeded.
    pub fn sequences(
        &mut self,
        node: &DialogNode,
        limit: usize,
    ) -> Result<Vec<Vec<Utterance>>, EnumerationError> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.walk(node, &mut prefix, &mut out, limit)?;
        Ok(out)
    }

    fn walk(
        &mut self,
        node: &DialogNode,
        prefix: &mut Vec<Utterance>,
        out: &mut Vec<Vec<Utterance>>,
        limit: usize,
    ) -> Result<(), EnumerationError> {
        if node.is_theta() {
            if out.len() >= limit {
                return Err(EnumerationError::StateCapExceeded { cap: limit });
            }
            out.push(prefix.clone());
            return Ok(());
        }
        self.charge()?;
        for turn in self.turns(node)? {
            prefix.push(turn.utterance);
            self.walk(&turn.result, prefix, out, limit)?;
            prefix.pop();
        }
        Ok(())
    }

    /// All distinct turns available at `node`. Multi-token turns are keyed by
    /// their token set and the state they produce.
    pub fn turns(&mut self, node: &DialogNode) -> Result<Vec<Turn>, EnumerationError> {
        if !self.multi_token {
            return Ok(valid_tokens(node)
                .into_iter()
                .map(|t| Turn {
                    result: reduce(node, &t).result,
                    utterance: Utterance::single(t),
                })
                .collect());
        }

        struct Partial {
            tokens: Vec<Token>,
            set: BTreeSet<Token>,
            state: DialogNode,
            interpreted: usize,
        }

        let mut turns = Vec::new();
        let mut produced: HashSet<(BTreeSet<Token>, DialogNode)> = HashSet::new();
        let mut visited: HashSet<(BTreeSet<Token>, DialogNode, usize)> = HashSet::new();
        let mut stack = vec![Partial {
            tokens: Vec::new(),
            set: BTreeSet::new(),
            state: node.clone(),
            interpreted: 0,
        }];
        while let Some(p) = stack.pop() {
            for t in valid_tokens(&p.state) {
                if p.set.contains(&t) {
                    continue;
                }
                let fired = step(&p.state, &t).expect("valid token must fire a rule");
                let interpreted = p.interpreted + usize::from(fired.via_interpreter);
                if p.tokens.len() + 1 > 1 && interpreted > 1 {
                    continue;
                }
                let state = simplify(&fired.node);
                let mut set = p.set.clone();
                set.insert(t.clone());
                let mut tokens = p.tokens.clone();
                tokens.push(t);
                if !visited.insert((set.clone(), state.clone(), interpreted)) {
                    continue;
                }
                self.charge()?;
                if produced.insert((set.clone(), state.clone())) {
                    turns.push(Turn {
                        utterance: Utterance::new(tokens.clone()).expect("non-empty"),
                        result: state.clone(),
                    });
                }
                if !state.is_theta() {
                    stack.push(Partial {
                        tokens,
                        set,
                        state,
                        interpreted,
                    });
                }
            }
        }
        turns.sort_by(|a, b| a.utterance.tokens().cmp(b.utterance.tokens()));
        Ok(turns)
    }
}

/// Count completing sequences with the default state cap.
pub fn enumerate_sequences(node: &DialogNode, multi_token: bool) -> Result<u128, EnumerationError> {
    Enumerator::new(multi_token).count(node)
}
