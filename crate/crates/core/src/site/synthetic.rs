//! Small synthetic sites used by tests, examples and the command line.
//!
//! Pages are named after their path, e.g. `/ga/s/d`.

use super::{SiteNode, SiteTree};
use crate::token::Token;

/// A nested `(label, children)` outline; an empty child list is a leaf.
pub struct Outline(pub &'static str, pub Vec<Outline>);

fn leaf(label: &'static str) -> Outline {
    Outline(label, Vec::new())
}

fn build(outline: &Outline, prefix: &str) -> SiteNode {
    let label = Token::new(outline.0).expect("synthetic label");
    let path = format!("{prefix}/{}", label.as_str().replace(' ', "-"));
    if outline.1.is_empty() {
        SiteNode::leaf(label, path)
    } else {
        SiteNode::inner(label, outline.1.iter().map(|o| build(o, &path)).collect())
    }
}

/// Build a site named `name` from top-level outlines.
pub fn from_outline(name: &str, top: &[Outline]) -> SiteTree {
    let root = SiteNode::inner(
        Token::new(name).expect("site name"),
        top.iter().map(|o| build(o, "")).collect(),
    );
    SiteTree::new(root).expect("synthetic site is valid")
}

fn branch(label: &'static str, parties: &[&'static str]) -> Outline {
    Outline(label, parties.iter().map(|p| leaf(p)).collect())
}

/// Three states, two chambers, two parties. Georgia has both parties in both
/// chambers, Alaska only Republicans and Alabama a Democrat in the House only.
pub fn mini_congress() -> SiteTree {
    from_outline(
        "congress",
        &[
            Outline("ga", vec![branch("s", &["r", "d"]), branch("h", &["r", "d"])]),
            Outline("ak", vec![branch("s", &["r"]), branch("h", &["r"])]),
            Outline("al", vec![branch("s", &["r"]), branch("h", &["r", "d"])]),
        ],
    )
}

/// [`mini_congress`] plus a fourth state whose Democrats sit in the Senate.
pub fn mini_congress_four() -> SiteTree {
    from_outline(
        "congress",
        &[
            Outline("ga", vec![branch("s", &["r", "d"]), branch("h", &["r", "d"])]),
            Outline("ak", vec![branch("s", &["r"]), branch("h", &["r"])]),
            Outline("al", vec![branch("s", &["r"]), branch("h", &["r", "d"])]),
            Outline("mn", vec![branch("s", &["d"]), branch("h", &["r", "d"])]),
        ],
    )
}

/// State / chamber / party / seat, with a district of Columbia that has a
/// single delegate.
pub fn dc_site() -> SiteTree {
    let o = Outline;
    from_outline(
        "vote smart",
        &[
            o(
                "minnesota",
                vec![
                    o("senate", vec![o("democrat", vec![leaf("senior seat")]), o("republican", vec![leaf("junior seat")])]),
                    o(
                        "house",
                        vec![
                            o("democrat", vec![leaf("district 1"), leaf("district 2")]),
                            o("republican", vec![leaf("district 3")]),
                        ],
                    ),
                ],
            ),
            o(
                "georgia",
                vec![
                    o("senate", vec![o("republican", vec![leaf("senior seat"), leaf("junior seat")])]),
                    o(
                        "house",
                        vec![
                            o("democrat", vec![leaf("district 1")]),
                            o("republican", vec![leaf("district 2"), leaf("district 3")]),
                        ],
                    ),
                ],
            ),
            o(
                "alaska",
                vec![
                    o("senate", vec![o("republican", vec![leaf("senior seat"), leaf("junior seat")])]),
                    o("house", vec![o("republican", vec![leaf("district at large")])]),
                ],
            ),
            o("washington d.c.", vec![o("house", vec![o("democrat", vec![leaf("district at large")])])]),
        ],
    )
}

/// 45 states, each with both chambers, both parties and three seats: 540
/// pages, all at depth four.
pub fn votesmart_540() -> SiteTree {
    let t = |s: &str| Token::new(s).expect("synthetic label");
    let states = (1..=45)
        .map(|s| {
            let state = format!("state {s:02}");
            let chambers = ["senate", "house"]
                .iter()
                .map(|chamber| {
                    let parties = ["democrat", "republican"]
                        .iter()
                        .map(|party| {
                            let seats = (1..=3)
                                .map(|n| {
                                    let page = format!("/state-{s:02}/{chamber}/{party}/seat-{n}");
                                    SiteNode::leaf(t(&format!("seat {n}")), page)
                                })
                                .collect();
                            SiteNode::inner(t(party), seats)
                        })
                        .collect();
                    SiteNode::inner(t(chamber), parties)
                })
                .collect();
            SiteNode::inner(t(&state), chambers)
        })
        .collect();
    SiteTree::new(SiteNode::inner(t("vote smart"), states)).expect("synthetic site is valid")
}
