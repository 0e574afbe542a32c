//! Dialog scripts and the staging transformations that reduce them.
//!
//! Everything here is a pure function over immutable [`DialogNode`] values.

mod enumerate;
mod node;
mod reduce;
mod script;

pub use enumerate::{enumerate_sequences, EnumerationError, Enumerator, Turn, DEFAULT_STATE_CAP};
pub use node::{DialogNode, Stager};
pub use reduce::{
    apply_utterance, is_complete, is_simplified, reduce, simplify, valid_tokens, ReductionOutcome,
};
pub use script::{parse_script, render_script, ParseError};

/// True iff any composite in `node` (itself included) is an alternator.
pub fn contains_alternator(node: &DialogNode) -> bool {
    node.contains_alternator()
}
