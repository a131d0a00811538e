//! Loaders for the public benchmark layouts.
//!
//! * LINQS (Cora, CiteSeer, WebKB): a `.content` file with lines
//!   `id w_1 ... w_m class` and a `.cites` file with lines `cited citing`.
//! * GML (Adjnoun): `node [ id .. label .. value .. ]` and
//!   `edge [ source .. target .. ]` blocks; each distinct node `value`
//!   becomes both an attribute and the node's class.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use crate::graph::{AttrId, AttributeMatrix, AttributedGraph, Labels, NodeId, NodeNames};
use crate::{Error, Result};

pub fn load_linqs<C: BufRead, E: BufRead>(content: C, cites: E) -> Result<AttributedGraph> {
    let mut names = NodeNames::new();
    let mut entries = Vec::new();
    let mut classes: Vec<(NodeId, String)> = Vec::new();
    let mut m = None;
    for (i, line) in content.lines().enumerate() {
        let line = line?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() < 2 {
            return Err(Error::parse(i + 1, "expected \"id attributes... class\""));
        }
        let width = tokens.len() - 2;
        if *m.get_or_insert(width) != width {
            return Err(Error::parse(i + 1, format!("expected {} attribute columns, found {width}", m.unwrap())));
        }
        if names.get(tokens[0]).is_some() {
            return Err(Error::parse(i + 1, format!("node {:?} listed twice", tokens[0])));
        }
        let v = names.intern(tokens[0]);
        for (a, tok) in tokens[1..=width].iter().enumerate() {
            let x: f64 = tok
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad attribute value {tok:?}")))?;
            if x < 0.0 {
                return Err(Error::parse(i + 1, "negative attribute value"));
            }
            if x > 0.0 {
                entries.push((v, AttrId(a as u32), x));
            }
        }
        classes.push((v, tokens[width + 1].to_owned()));
    }
    if names.is_empty() {
        return Err(Error::Empty("content file"));
    }
    let mut edges = Vec::new();
    let mut dangling = 0usize;
    for (i, line) in cites.lines().enumerate() {
        let line = line?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            [a, b] => match (names.get(a), names.get(b)) {
                (Some(a), Some(b)) => edges.push((a, b, 1.0)),
                _ => dangling += 1,
            },
            _ => return Err(Error::parse(i + 1, "expected \"cited citing\"")),
        }
    }
    if dangling > 0 {
        log::warn!("skipped {dangling} links to nodes missing from the content file");
    }
    let mut labels = Labels::unlabeled(names.len());
    for (v, c) in &classes {
        labels.set(*v, c);
    }
    let attrs = AttributeMatrix::from_entries(m.unwrap_or(0), entries)?;
    Ok(AttributedGraph::from_edges(names, edges).with_attributes(attrs).with_labels(labels))
}

/// Flat token stream of a GML document; quoted strings keep their spaces.
fn gml_tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '"' {
            chars.next();
            out.push(chars.by_ref().take_while(|&c| c != '"').collect());
        } else if c == '[' || c == ']' {
            chars.next();
            out.push(c.to_string());
        } else {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || c == '[' || c == ']' {
                    break;
                }
                s.push(c);
                chars.next();
            }
            out.push(s);
        }
    }
    out
}

pub fn load_gml<R: Read>(mut reader: R) -> Result<AttributedGraph> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let tokens = gml_tokens(&text);
    let mut nodes: Vec<(String, Option<String>)> = Vec::new();
    let mut raw_edges: Vec<(String, String)> = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let kind = tokens[i].as_str();
        if (kind == "node" || kind == "edge") && tokens.get(i + 1).is_some_and(|t| t == "[") {
            let mut j = i + 2;
            let mut fields = Vec::new();
            while j + 1 < tokens.len() && tokens[j] != "]" {
                fields.push((tokens[j].clone(), tokens[j + 1].clone()));
                j += 2;
            }
            let field = |k: &str| fields.iter().find(|(key, _)| key == k).map(|(_, v)| v.clone());
            if kind == "node" {
                let id = field("id").ok_or_else(|| Error::Invalid("GML node without id".into()))?;
                nodes.push((id, field("value")));
            } else {
                match (field("source"), field("target")) {
                    (Some(s), Some(t)) => raw_edges.push((s, t)),
                    _ => return Err(Error::Invalid("GML edge without source or target".into())),
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    if nodes.is_empty() {
        return Err(Error::Empty("GML graph"));
    }
    let mut names = NodeNames::new();
    for (id, _) in &nodes {
        names.intern(id);
    }
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (s, t) in &raw_edges {
        match (names.get(s), names.get(t)) {
            (Some(a), Some(b)) => edges.push((a, b, 1.0)),
            _ => return Err(Error::Invalid(format!("GML edge {s} -- {t} names an unknown node"))),
        }
    }
    let mut labels = Labels::unlabeled(names.len());
    let mut entries = Vec::new();
    for (id, value) in &nodes {
        if let Some(v) = value {
            let node = names.get(id).unwrap();
            let class = labels.set(node, v);
            entries.push((node, AttrId(class.0), 1.0));
        }
    }
    let attrs = AttributeMatrix::from_entries(labels.n_classes(), entries)?;
    Ok(AttributedGraph::from_edges(names, edges).with_attributes(attrs).with_labels(labels))
}

/// Data directory used by the acceptance suite: `FANE_DATA_DIR`, else
/// `data/` in the workspace root.
pub fn data_dir() -> PathBuf {
    std::env::var_os("FANE_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

/// Loads `name` (`cora`, `citeseer`, `webkb`, `adjnoun`) from `dir`.
///
/// LINQS sets are looked up as `<dir>/<name>/<name>.content` and
/// `<dir>/<name>/<name>.cites`; Adjnoun as `<dir>/adjnoun/adjnoun.gml`.
pub fn load_named(dir: &Path, name: &str) -> Result<AttributedGraph> {
    let base = dir.join(name);
    let open = |file: PathBuf| -> Result<BufReader<File>> {
        File::open(&file)
            .map(BufReader::new)
            .map_err(|e| Error::Invalid(format!("{}: {e}", file.display())))
    };
    if name == "adjnoun" {
        load_gml(open(base.join("adjnoun.gml"))?)
    } else {
        load_linqs(
            open(base.join(format!("{name}.content")))?,
            open(base.join(format!("{name}.cites")))?,
        )
    }
}
