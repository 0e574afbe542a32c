//! Site documents.
//!
//! Two encodings with the same meaning are accepted; the first non-blank
//! character picks one (`<` for XML, `{` for JSON).
//!
//! ```xml
//! <site name="congress">
//!   <node label="ga" id="georgia">
//!     <node label="s"><node label="d" page="/ga/s/d"/></node>
//!   </node>
//!   <node label="peach state" refid="georgia"/>
//! </site>
//! ```
//!
//! ```json
//! {"name": "congress",
//!  "node": [{"label": "ga", "children": [{"label": "s", "stager": "PE",
//!            "children": [{"label": "d", "page": "/ga/s/d"}]}]}]}
//! ```
//!
//! A node with a `refid` borrows the children and page of the node carrying
//! that `id`; references are expanded into a plain tree, so sharing is not
//! preserved. A single-page site puts `page` on the site element itself.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Deserialize;

use super::{SiteError, SiteNode, SiteTree};
use crate::dialog::Stager;
use crate::token::Token;

/// How deep reference expansion may nest before the document is rejected.
pub const DEFAULT_REF_DEPTH_CAP: usize = 32;

pub fn load_site(document: &str) -> Result<SiteTree, SiteError> {
    load_site_with_cap(document, DEFAULT_REF_DEPTH_CAP)
}

pub fn load_site_with_cap(document: &str, depth_cap: usize) -> Result<SiteTree, SiteError> {
    let raw = match document.trim_start().chars().next() {
        Some('<') => parse_xml(document)?,
        Some('{') => parse_json(document)?,
        _ => return Err(SiteError::Malformed("expected an XML or JSON document".into())),
    };
    let root = Resolver::new(&raw, depth_cap)?.resolve_root(&raw)?;
    SiteTree::new(root)
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    #[serde(default)]
    label: String,
    page: Option<String>,
    id: Option<String>,
    refid: Option<String>,
    stager: Option<String>,
    #[serde(default)]
    children: Vec<RawNode>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(Box<RawNode>),
    Many(Vec<RawNode>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSite {
    name: String,
    page: Option<String>,
    node: Option<OneOrMany>,
}

fn parse_json(document: &str) -> Result<RawNode, SiteError> {
    let site: RawSite =
        serde_json::from_str(document).map_err(|e| SiteError::Malformed(e.to_string()))?;
    let children = match site.node {
        None => Vec::new(),
        Some(OneOrMany::One(n)) => vec![*n],
        Some(OneOrMany::Many(ns)) => ns,
    };
    Ok(RawNode {
        label: site.name,
        page: site.page,
        children,
        ..RawNode::default()
    })
}

fn parse_xml(document: &str) -> Result<RawNode, SiteError> {
    let doc =
        roxmltree::Document::parse(document).map_err(|e| SiteError::Malformed(e.to_string()))?;
    let site = doc.root_element();
    if site.tag_name().name() != "site" {
        return Err(SiteError::Malformed(format!(
            "root element must be <site>, found <{}>",
            site.tag_name().name()
        )));
    }
    let name = site
        .attribute("name")
        .ok_or_else(|| SiteError::Malformed("<site> needs a name attribute".into()))?;
    Ok(RawNode {
        label: name.to_string(),
        page: site.attribute("page").map(str::to_string),
        children: xml_children(site)?,
        ..RawNode::default()
    })
}

fn xml_children(element: roxmltree::Node<'_, '_>) -> Result<Vec<RawNode>, SiteError> {
    let mut out = Vec::new();
    for child in element.children() {
        if child.is_text() {
            if child.text().is_some_and(|t| !t.trim().is_empty()) {
                return Err(SiteError::Malformed("unexpected text content".into()));
            }
            continue;
        }
        if !child.is_element() {
            continue;
        }
        if child.tag_name().name() != "node" {
            return Err(SiteError::Malformed(format!(
                "unexpected element <{}>",
                child.tag_name().name()
            )));
        }
        let label = child
            .attribute("label")
            .ok_or_else(|| SiteError::Malformed("<node> needs a label attribute".into()))?;
        out.push(RawNode {
            label: label.to_string(),
            page: child.attribute("page").map(str::to_string),
            id: child.attribute("id").map(str::to_string),
            refid: child.attribute("refid").map(str::to_string),
            stager: child.attribute("stager").map(str::to_string),
            children: xml_children(child)?,
        });
    }
    Ok(out)
}

struct Resolver<'a> {
    by_id: HashMap<&'a str, &'a RawNode>,
    depth_cap: usize,
}

impl<'a> Resolver<'a> {
    fn new(root: &'a RawNode, depth_cap: usize) -> Result<Self, SiteError> {
        fn index<'a>(
            node: &'a RawNode,
            by_id: &mut HashMap<&'a str, &'a RawNode>,
        ) -> Result<(), SiteError> {
            if let Some(id) = &node.id {
                if by_id.insert(id.as_str(), node).is_some() {
                    return Err(SiteError::DuplicateId(id.clone()));
                }
            }
            node.children.iter().try_for_each(|c| index(c, by_id))
        }
        let mut by_id = HashMap::new();
        index(root, &mut by_id)?;
        Ok(Resolver { by_id, depth_cap })
    }

    fn resolve_root(&self, raw: &RawNode) -> Result<SiteNode, SiteError> {
        self.resolve(raw, &mut Vec::new(), 0)
    }

    fn resolve(
        &self,
        raw: &'a RawNode,
        stack: &mut Vec<&'a str>,
        depth: usize,
    ) -> Result<SiteNode, SiteError> {
        if depth > self.depth_cap {
            return Err(SiteError::DepthCapExceeded(self.depth_cap));
        }
        let label = Token::new(&raw.label)
            .map_err(|e| SiteError::Malformed(format!("bad label {:?}: {e}", raw.label)))?;
        let stager = raw
            .stager
            .as_deref()
            .map(str::parse::<Stager>)
            .transpose()
            .map_err(SiteError::Malformed)?;

        let source = match &raw.refid {
            None => raw,
            Some(refid) => {
                if !raw.children.is_empty() || raw.page.is_some() {
                    return Err(SiteError::Malformed(format!(
                        "node `{}` has a refid and its own content",
                        raw.label
                    )));
                }
                if stack.contains(&refid.as_str()) {
                    return Err(SiteError::Cycle(refid.clone()));
                }
                *self
                    .by_id
                    .get(refid.as_str())
                    .ok_or_else(|| SiteError::UnknownRef(refid.clone()))?
            }
        };

        let pushed = raw.refid.is_some();
        if pushed {
            stack.push(raw.refid.as_deref().expect("refid"));
        }
        if let Some(id) = &raw.id {
            stack.push(id.as_str());
        }
        let children = source
            .children
            .iter()
            .map(|c| self.resolve(c, stack, depth + 1))
            .collect::<Result<Vec<_>, _>>();
        if raw.id.is_some() {
            stack.pop();
        }
        if pushed {
            stack.pop();
        }

        Ok(SiteNode {
            label,
            children: children?,
            page: source.page.clone(),
            stager: stager.or_else(|| {
                source
                    .stager
                    .as_deref()
                    .and_then(|s| s.parse::<Stager>().ok())
            }),
        })
    }
}

/// Structural checks for a loaded hierarchy.
pub(super) fn validate(root: &SiteNode) -> Result<(), SiteError> {
    fn walk(
        node: &SiteNode,
        on_path: &mut Vec<Token>,
        is_root: bool,
        seen: &mut HashMap<BTreeSet<Token>, String>,
    ) -> Result<(), SiteError> {
        if !is_root && on_path.contains(&node.label) {
            return Err(SiteError::RepeatedLabelOnPath(node.label.to_string()));
        }
        if node.is_leaf() {
            let page = node
                .page
                .clone()
                .ok_or_else(|| SiteError::LeafWithoutPage(node.label.to_string()))?;
            let mut labels: BTreeSet<Token> = on_path.iter().cloned().collect();
            labels.insert(node.label.clone());
            if !is_root {
                if let Some(other) = seen.insert(labels, page.clone()) {
                    return Err(SiteError::IndistinguishableLeaves(other, page));
                }
            }
            return Ok(());
        }
        if node.page.is_some() {
            return Err(SiteError::PageOnInternalNode(node.label.to_string()));
        }
        let mut labels = HashSet::new();
        for c in &node.children {
            if !labels.insert(&c.label) {
                return Err(SiteError::DuplicateSibling {
                    parent: node.label.to_string(),
                    label: c.label.to_string(),
                });
            }
        }
        if !is_root {
            on_path.push(node.label.clone());
        }
        for c in &node.children {
            walk(c, on_path, false, seen)?;
        }
        if !is_root {
            on_path.pop();
        }
        Ok(())
    }
    walk(root, &mut Vec::new(), true, &mut HashMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINI: &str = r#"
        <site name="congress">
          <node label="ga">
            <node label="s"><node label="r" page="/ga/s/r"/><node label="d" page="/ga/s/d"/></node>
            <node label="h"><node label="r" page="/ga/h/r"/><node label="d" page="/ga/h/d"/></node>
          </node>
          <node label="ak">
            <node label="s"><node label="r" page="/ak/s/r"/></node>
            <node label="h"><node label="r" page="/ak/h/r"/></node>
          </node>
          <node label="al">
            <node label="s"><node label="r" page="/al/s/r"/></node>
            <node label="h"><node label="r" page="/al/h/r"/><node label="d" page="/al/h/d"/></node>
          </node>
        </site>"#;

    #[test]
    fn loads_xml_site() {
        let site = load_site(MINI).unwrap();
        assert_eq!(site.root().children.len(), 3);
        assert_eq!(site.depth(), 3);
        assert_eq!(site.leaf_count(), 9);
        let names: Vec<&str> = site.token_universe().iter().map(Token::as_str).collect();
        assert_eq!(names, ["ak", "al", "d", "ga", "h", "r", "s"]);
    }

    #[test]
    fn json_and_xml_agree() {
        let site = load_site(MINI).unwrap();
        let again = load_site(&site.to_json()).unwrap();
        assert_eq!(site, again);
    }

    #[test]
    fn single_leaf_site() {
        let site = load_site(r#"<site name="Home" page="/index.html"/>"#).unwrap();
        assert_eq!(site.depth(), 0);
        assert_eq!(site.leaf_count(), 1);
        assert!(site.token_universe().contains(&Token::new("home").unwrap()));
        let json = load_site(r#"{"name": "Home", "page": "/index.html"}"#).unwrap();
        assert_eq!(site, json);
    }

    #[test]
    fn rejects_duplicate_siblings() {
        let doc = r#"<site name="x"><node label="ga" page="1"/><node label="GA" page="2"/></site>"#;
        assert!(matches!(load_site(doc), Err(SiteError::DuplicateSibling { .. })));
    }

    #[test]
    fn rejects_structural_problems() {
        assert!(matches!(
            load_site(r#"<site name="x"><node label="a"/></site>"#),
            Err(SiteError::LeafWithoutPage(_))
        ));
        assert!(matches!(
            load_site(r#"<site name="x"><node label="a" page="p"><node label="b" page="q"/></node></site>"#),
            Err(SiteError::PageOnInternalNode(_))
        ));
        assert!(matches!(
            load_site(r#"<site name="x"><node label="a"><node label="a" page="q"/></node></site>"#),
            Err(SiteError::RepeatedLabelOnPath(_))
        ));
        assert!(matches!(
            load_site(
                r#"<site name="x"><node label="a"><node label="b" page="1"/></node>
                   <node label="b"><node label="a" page="2"/></node></site>"#
            ),
            Err(SiteError::IndistinguishableLeaves(..))
        ));
        assert!(matches!(load_site("<site><node/></site>"), Err(SiteError::Malformed(_))));
        assert!(matches!(load_site("hello"), Err(SiteError::Malformed(_))));
        assert!(matches!(load_site("<site name='x'><page/></site>"), Err(SiteError::Malformed(_))));
        assert!(matches!(load_site(r#"{"name": "x", "nodes": []}"#), Err(SiteError::Malformed(_))));
        assert!(matches!(
            load_site(r#"<site name="x"><node label="a" stager="Q" page="1"/></site>"#),
            Err(SiteError::Malformed(_))
        ));
    }

    #[test]
    fn references_expand_into_copies() {
        let doc = r#"
            <site name="odp">
              <node label="sports"><node label="martial arts" id="ma">
                <node label="judo" page="/judo"/><node label="karate" page="/karate"/>
              </node></node>
              <node label="recreation"><node label="fighting" refid="ma"/></node>
            </site>"#;
        let site = load_site(doc).unwrap();
        let rec = site.root().child(&Token::new("recreation").unwrap()).unwrap();
        assert_eq!(rec.children[0].label.as_str(), "fighting");
        assert_eq!(rec.children[0].children.len(), 2);
        assert_eq!(site.leaf_count(), 4);
    }

    #[test]
    fn reference_cycles_and_depth_cap() {
        let cyclic = r#"<site name="x"><node label="a" id="n"><node label="b" refid="n"/></node></site>"#;
        assert_eq!(load_site(cyclic), Err(SiteError::Cycle("n".into())));
        assert!(matches!(
            load_site(r#"<site name="x"><node label="a" refid="nope"/></site>"#),
            Err(SiteError::UnknownRef(_))
        ));

        let mut deep = String::from(r#"<site name="x">"#);
        for i in 0..40 {
            deep.push_str(&format!(r#"<node label="l{i}">"#));
        }
        deep.push_str(r#"<node label="end" page="p"/>"#);
        for _ in 0..40 {
            deep.push_str("</node>");
        }
        deep.push_str("</site>");
        assert_eq!(load_site(&deep), Err(SiteError::DepthCapExceeded(32)));
        assert!(load_site_with_cap(&deep, 64).is_ok());
    }

    #[test]
    fn stager_override_is_kept() {
        let doc = r#"{"name": "x", "node": {"label": "a", "stager": "C",
                      "children": [{"label": "b", "page": "p"}]}}"#;
        let site = load_site(doc).unwrap();
        assert_eq!(site.root().children[0].stager, Some(Stager::C));
    }
}
