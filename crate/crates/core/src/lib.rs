//! Staging transformations for mixed-initiative dialogs.
//!
//! * [`dialog`]: dialog scripts, the reduction rules, reflection and sequence
//!   enumeration.
//! * [`site`]: hierarchical site models, their dialogs, slicing-based pruning
//!   and functional-dependency input expansion.

pub mod dialog;
pub mod site;
pub mod token;

pub use dialog::{DialogNode, Stager};
pub use site::{SiteNode, SiteTree};
pub use token::{Token, TokenError, Utterance};
