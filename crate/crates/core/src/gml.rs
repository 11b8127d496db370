//! Reader for the GML subset used by the classic network datasets:
//!
//! ```text
//! graph [
//!   node [ id 1 label "a" ]
//!   edge [ source 1 target 2 value 3 ]
//! ]
//! ```
//!
//! Unknown keys are ignored for the graph structure; scalar node keys other
//! than `id` and `label` are kept as string attributes (e.g. ground-truth
//! group memberships).

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Num(String),
    Str(String),
    List(Vec<(String, Value)>),
}

impl Value {
    fn scalar(&self) -> Option<&str> {
        match self {
            Value::Num(s) | Value::Str(s) => Some(s),
            Value::List(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Key(String),
    Num(String),
    Str(String),
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    while let Some(&ch) = chars.peek() {
        match ch {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '[' => {
                out.push((line, Token::Open));
                chars.next();
            }
            ']' => {
                out.push((line, Token::Close));
                chars.next();
            }
            '"' => {
                let start = line;
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some('\n') => {
                            line += 1;
                            s.push('\n');
                        }
                        Some(c) => s.push(c),
                        None => {
                            return Err(Error::Parse {
                                line: start,
                                message: "unterminated string".into(),
                            })
                        }
                    }
                }
                out.push((start, Token::Str(s)));
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '[' || c == ']' || c == '"' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                let first = s.chars().next().unwrap_or(' ');
                if first.is_ascii_digit() || first == '-' || first == '+' || first == '.' {
                    out.push((line, Token::Num(s)));
                } else {
                    out.push((line, Token::Key(s)));
                }
            }
        }
    }
    Ok(out)
}

fn parse_list(
    tokens: &[(usize, Token)],
    pos: &mut usize,
    nested: bool,
) -> Result<Vec<(String, Value)>> {
    let mut items = Vec::new();
    loop {
        let Some((line, tok)) = tokens.get(*pos) else {
            if nested {
                return Err(Error::UnbalancedBrackets("missing `]` at end of input".into()));
            }
            return Ok(items);
        };
        let line = *line;
        *pos += 1;
        let key = match tok {
            Token::Close if nested => return Ok(items),
            Token::Close => {
                return Err(Error::UnbalancedBrackets(format!("unexpected `]` at line {line}")))
            }
            Token::Key(k) => k.clone(),
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected a key, found {other:?}"),
                })
            }
        };
        let Some((vline, vtok)) = tokens.get(*pos) else {
            return Err(Error::Parse {
                line,
                message: format!("key {key:?} has no value"),
            });
        };
        *pos += 1;
        let value = match vtok {
            Token::Num(s) => Value::Num(s.clone()),
            Token::Str(s) => Value::Str(s.clone()),
            Token::Open => Value::List(parse_list(tokens, pos, true)?),
            Token::Key(k) => {
                return Err(Error::Parse {
                    line: *vline,
                    message: format!("key {key:?} followed by key {k:?}"),
                })
            }
            Token::Close => {
                return Err(Error::Parse {
                    line: *vline,
                    message: format!("key {key:?} has no value"),
                })
            }
        };
        items.push((key, value));
    }
}

/// A parsed GML graph together with the extra scalar node attributes.
#[derive(Debug, Clone)]
pub struct GmlDocument {
    pub graph: Graph,
    /// One map per node, aligned with `graph` node indices.
    pub node_attributes: Vec<BTreeMap<String, String>>,
}

impl GmlDocument {
    /// Values of attribute `key` per node (`None` where absent).
    pub fn attribute(&self, key: &str) -> Vec<Option<&str>> {
        self.node_attributes
            .iter()
            .map(|m| m.get(key).map(String::as_str))
            .collect()
    }
}

/// Parses GML text into a graph, keeping extra node attributes.
pub fn parse_gml_document(text: &str) -> Result<GmlDocument> {
    let tokens = tokenize(text)?;
    let mut pos = 0;
    let top = parse_list(&tokens, &mut pos, false)?;
    let graph_items = top
        .into_iter()
        .find_map(|(k, v)| match (k.as_str(), v) {
            ("graph", Value::List(items)) => Some(items),
            _ => None,
        })
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: "no `graph [ ... ]` block".into(),
        })?;

    let mut builder = GraphBuilder::new();
    let mut id_to_label: HashMap<String, String> = HashMap::new();
    let mut attrs: Vec<BTreeMap<String, String>> = Vec::new();
    let mut edges = Vec::new();

    for (key, value) in graph_items {
        match (key.as_str(), value) {
            ("node", Value::List(items)) => {
                let mut id = None;
                let mut label = None;
                let mut extra = BTreeMap::new();
                for (k, v) in items {
                    match (k.as_str(), v.scalar()) {
                        ("id", Some(s)) => id = Some(s.to_string()),
                        ("label", Some(s)) => label = Some(s.to_string()),
                        (_, Some(s)) => {
                            extra.insert(k.clone(), s.to_string());
                        }
                        _ => {}
                    }
                }
                let id = id.ok_or_else(|| Error::Gml("node without id".into()))?;
                if id_to_label.contains_key(&id) {
                    return Err(Error::DuplicateNode(id));
                }
                let label = label.unwrap_or_else(|| id.clone());
                if builder.contains(&label) {
                    return Err(Error::DuplicateNode(label));
                }
                builder.add_node(&label);
                attrs.push(extra);
                id_to_label.insert(id, label);
            }
            ("edge", Value::List(items)) => edges.push(items),
            _ => {}
        }
    }

    for items in edges {
        let mut src = None;
        let mut dst = None;
        let mut weight = 1.0;
        for (k, v) in &items {
            match (k.as_str(), v) {
                ("source", v) => src = v.scalar().map(str::to_string),
                ("target", v) => dst = v.scalar().map(str::to_string),
                ("value", Value::Num(s)) => {
                    weight = s.parse::<f64>().map_err(|_| Error::Gml(format!("invalid edge value {s:?}")))?
                }
                _ => {}
            }
        }
        let (Some(src), Some(dst)) = (src, dst) else {
            return Err(Error::Gml("edge without source or target".into()));
        };
        let a = id_to_label
            .get(&src)
            .ok_or_else(|| Error::UnknownNode(src.clone()))?;
        let b = id_to_label
            .get(&dst)
            .ok_or_else(|| Error::UnknownNode(dst.clone()))?;
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::Gml(format!(
                "edge ({a}, {b}) has invalid weight {weight}"
            )));
        }
        builder.add_edge(a, b, weight);
    }

    let graph = builder.build()?;
    Ok(GmlDocument {
        graph,
        node_attributes: attrs,
    })
}

/// Parses GML text into a graph.
pub fn parse_gml(text: &str) -> Result<Graph> {
    parse_gml_document(text).map(|d| d.graph)
}
