use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::token::Token;

/// Transformation policy attached to a composite dialog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stager {
    /// Interpreter: strict sequential order, one input per turn.
    I,
    /// Partial evaluator: children may be filled in any order.
    PE,
    /// Currier: children are filled as a consecutive prefix.
    C,
    /// Alternator: exactly one of the children is pursued.
    A,
}

impl Stager {
    pub fn keyword(self) -> &'static str {
        match self {
            Stager::I => "I",
            Stager::PE => "PE",
            Stager::C => "C",
            Stager::A => "A",
        }
    }

    /// True for stagers that consume their children in written order.
    pub fn is_sequential(self) -> bool {
        matches!(self, Stager::I | Stager::C)
    }
}

impl fmt::Display for Stager {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for Stager {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" => Ok(Stager::I),
            "PE" => Ok(Stager::PE),
            "C" => Ok(Stager::C),
            "A" => Ok(Stager::A),
            other => Err(format!("unknown stager `{other}`")),
        }
    }
}

/// A dialog script paired with its stagers.
///
/// `Theta` is the completed (empty) dialog.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DialogNode {
    Theta,
    Prompt(Token),
    Composite {
        stager: Stager,
        children: Vec<DialogNode>,
    },
}

impl DialogNode {
    pub fn prompt(token: Token) -> Self {
        DialogNode::Prompt(token)
    }

    pub fn composite(stager: Stager, children: Vec<DialogNode>) -> Self {
        DialogNode::Composite { stager, children }
    }

    pub fn is_theta(&self) -> bool {
        matches!(self, DialogNode::Theta)
    }

    pub fn as_prompt(&self) -> Option<&Token> {
        match self {
            DialogNode::Prompt(t) => Some(t),
            _ => None,
        }
    }

    /// Number of prompt leaves in the tree.
    pub fn prompt_count(&self) -> usize {
        match self {
            DialogNode::Theta => 0,
            DialogNode::Prompt(_) => 1,
            DialogNode::Composite { children, .. } => {
                children.iter().map(DialogNode::prompt_count).sum()
            }
        }
    }

    /// Every prompt token, left to right, duplicates included.
    pub fn prompts(&self) -> Vec<&Token> {
        let mut out = Vec::new();
        self.collect_prompts(&mut out);
        out
    }

    fn collect_prompts<'a>(&'a self, out: &mut Vec<&'a Token>) {
        match self {
            DialogNode::Theta => {}
            DialogNode::Prompt(t) => out.push(t),
            DialogNode::Composite { children, .. } => {
                for c in children {
                    c.collect_prompts(out);
                }
            }
        }
    }

    /// True iff this node or any descendant composite is staged by an alternator.
    pub fn contains_alternator(&self) -> bool {
        match self {
            DialogNode::Composite { stager, children } => {
                *stager == Stager::A || children.iter().any(DialogNode::contains_alternator)
            }
            _ => false,
        }
    }

    /// Labels the dialog is currently soliciting: what a page at this state
    /// would show as links.
    ///
    /// Alternators offer each alternative; a partial evaluator offers its own
    /// prompts when it has any (the link text of a page subdialog) and
    /// otherwise the solicitations of every subdialog; sequential stagers
    /// offer only their head.
    pub fn solicitation(&self) -> Vec<Token> {
        let mut out = Vec::new();
        self.collect_solicitation(&mut out);
        let mut seen = std::collections::HashSet::new();
        out.retain(|t| seen.insert(t.clone()));
        out
    }

    fn collect_solicitation(&self, out: &mut Vec<Token>) {
        match self {
            DialogNode::Theta => {}
            DialogNode::Prompt(t) => out.push(t.clone()),
            DialogNode::Composite { stager, children } => match stager {
                Stager::A => children.iter().for_each(|c| c.collect_solicitation(out)),
                Stager::PE => {
                    let direct: Vec<&Token> =
                        children.iter().filter_map(DialogNode::as_prompt).collect();
                    if direct.is_empty() {
                        children.iter().for_each(|c| c.collect_solicitation(out));
                    } else {
                        out.extend(direct.into_iter().cloned());
                    }
                }
                Stager::C | Stager::I => {
                    if let Some(first) = children.first() {
                        first.collect_solicitation(out);
                    }
                }
            },
        }
    }
}

impl fmt::Display for DialogNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DialogNode::Theta => f.write_str("THETA"),
            DialogNode::Prompt(t) => f.write_str(&t.quoted()),
            DialogNode::Composite { stager, children } => {
                write!(f, "{stager}[")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl Serialize for DialogNode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DialogNode {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        super::parse_script(&raw).map_err(serde::de::Error::custom)
    }
}
