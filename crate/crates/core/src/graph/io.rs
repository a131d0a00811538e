use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::str::FromStr;

use super::augment::{AugmentedGraph, NodeKind};
use super::{AttrId, AttributeMatrix, AttributedGraph, Labels, NodeId, NodeNames};
use crate::{Error, Result};

/// Layout of an attribute file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttrFormat {
    /// Row `i` holds the attribute vector of the node named `i`.
    Dense,
    /// `node attr [value]` lines, value defaulting to 1.
    Triplet,
}

impl FromStr for AttrFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(AttrFormat::Dense),
            "triplet" | "sparse" => Ok(AttrFormat::Triplet),
            other => Err(Error::param(format!("unknown attribute format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct EdgeListOptions {
    /// Pre-registers nodes `0..n` so isolated nodes exist and ids keep
    /// their numeric value. Edge endpoints must then be integers below `n`.
    pub num_nodes: Option<usize>,
}

/// Yields `(line number, trimmed content)` for non-blank, non-comment lines.
fn data_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(i, line)| match line {
            Err(e) => Some(Err(Error::Io(e))),
            Ok(line) => {
                let t = line.trim();
                if t.is_empty() || t.starts_with('#') {
                    None
                } else {
                    Some(Ok((i + 1, t.to_owned())))
                }
            }
        })
}

fn parse_value(line: usize, token: &str, what: &str) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} {token:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("{what} must be finite")));
    }
    Ok(v)
}

/// Reads `src dst [weight]` lines into a graph with dense node ids.
pub fn load_edge_list<R: BufRead>(reader: R, options: &EdgeListOptions) -> Result<AttributedGraph> {
    let mut names = match options.num_nodes {
        Some(n) => NodeNames::identity(n),
        None => NodeNames::new(),
    };
    let mut raw = Vec::new();
    for item in data_lines(reader) {
        let (line, text) = item?;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if !(2..=3).contains(&tokens.len()) {
            return Err(Error::parse(line, "expected \"src dst [weight]\""));
        }
        let weight = match tokens.get(2) {
            Some(t) => parse_value(line, t, "weight")?,
            None => 1.0,
        };
        if weight <= 0.0 {
            return Err(Error::parse(line, format!("weight must be positive, got {weight}")));
        }
        let mut endpoint = |token: &str| -> Result<NodeId> {
            if options.num_nodes.is_some() {
                names
                    .get(token)
                    .ok_or_else(|| Error::parse(line, format!("unknown node {token:?}")))
            } else {
                Ok(names.intern(token))
            }
        };
        let a = endpoint(tokens[0])?;
        let b = endpoint(tokens[1])?;
        raw.push((a, b, weight));
    }
    if names.is_empty() {
        return Err(Error::Empty("edge list"));
    }
    Ok(AttributedGraph::from_edges(names, raw))
}

/// Reads an attribute file for the nodes in `names`.
///
/// `n_attrs` fixes the attribute count; when absent it is taken from the
/// first dense row or the largest triplet column.
pub fn load_attributes<R: BufRead>(
    reader: R,
    names: &NodeNames,
    format: AttrFormat,
    n_attrs: Option<usize>,
) -> Result<AttributeMatrix> {
    let mut entries = Vec::new();
    let mut width = n_attrs;
    match format {
        AttrFormat::Dense => {
            for (row, item) in data_lines(reader).enumerate() {
                let (line, text) = item?;
                let node = names
                    .get(&row.to_string())
                    .ok_or_else(|| Error::parse(line, format!("unknown node {row}")))?;
                let values: Vec<&str> = text.split_whitespace().collect();
                let m = *width.get_or_insert(values.len());
                if values.len() != m {
                    return Err(Error::parse(
                        line,
                        format!("expected {m} columns, found {}", values.len()),
                    ));
                }
                for (col, token) in values.into_iter().enumerate() {
                    let v = parse_value(line, token, "attribute value")?;
                    if v < 0.0 {
                        return Err(Error::parse(line, format!("negative attribute value {v}")));
                    }
                    if v > 0.0 {
                        entries.push((node, AttrId(col as u32), v));
                    }
                }
            }
        }
        AttrFormat::Triplet => {
            let mut seen: HashMap<(NodeId, AttrId), usize> = HashMap::new();
            let mut max_col = None;
            for item in data_lines(reader) {
                let (line, text) = item?;
                let tokens: Vec<&str> = text.split_whitespace().collect();
                if !(2..=3).contains(&tokens.len()) {
                    return Err(Error::parse(line, "expected \"node attr [value]\""));
                }
                let node = names
                    .get(tokens[0])
                    .ok_or_else(|| Error::parse(line, format!("unknown node {:?}", tokens[0])))?;
                let col: u32 = tokens[1]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("invalid attribute index {:?}", tokens[1])))?;
                if let Some(m) = n_attrs {
                    if col as usize >= m {
                        return Err(Error::parse(
                            line,
                            format!("attribute index {col} out of range for {m} attributes"),
                        ));
                    }
                }
                let v = match tokens.get(2) {
                    Some(t) => parse_value(line, t, "attribute value")?,
                    None => 1.0,
                };
                if v < 0.0 {
                    return Err(Error::parse(line, format!("negative attribute value {v}")));
                }
                if let Some(first) = seen.insert((node, AttrId(col)), line) {
                    return Err(Error::Duplicate {
                        first,
                        second: line,
                        what: format!("attribute entry ({}, {col})", tokens[0]),
                    });
                }
                max_col = max_col.max(Some(col));
                if v > 0.0 {
                    entries.push((node, AttrId(col), v));
                }
            }
            if width.is_none() {
                width = Some(max_col.map_or(0, |c| c as usize + 1));
            }
        }
    }
    AttributeMatrix::from_entries(width.unwrap_or(0), entries)
}

/// Reads `node class` lines. Unlisted nodes stay unlabeled.
pub fn load_labels<R: BufRead>(reader: R, names: &NodeNames) -> Result<Labels> {
    let mut labels = Labels::unlabeled(names.len());
    let mut first_line: HashMap<NodeId, (usize, String)> = HashMap::new();
    for item in data_lines(reader) {
        let (line, text) = item?;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::parse(line, "expected \"node class\""));
        }
        let node = names
            .get(tokens[0])
            .ok_or_else(|| Error::parse(line, format!("unknown node {:?}", tokens[0])))?;
        if let Some((first, class)) = first_line.get(&node) {
            if class != tokens[1] {
                return Err(Error::Duplicate {
                    first: *first,
                    second: line,
                    what: format!("conflicting label for node {:?}", tokens[0]),
                });
            }
            continue;
        }
        first_line.insert(node, (line, tokens[1].to_owned()));
        labels.set(node, tokens[1]);
    }
    Ok(labels)
}

/// Reads `attr scale` lines into per-attribute multipliers (default 1).
pub fn load_attr_scales<R: BufRead>(reader: R, n_attrs: usize) -> Result<Vec<f64>> {
    let mut scales = vec![1.0; n_attrs];
    for item in data_lines(reader) {
        let (line, text) = item?;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::parse(line, "expected \"attr scale\""));
        }
        let attr: usize = tokens[0]
            .trim_start_matches('a')
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid attribute {:?}", tokens[0])))?;
        if attr >= n_attrs {
            return Err(Error::parse(line, format!("attribute {attr} out of range")));
        }
        let scale = parse_value(line, tokens[1], "scale")?;
        if scale <= 0.0 {
            return Err(Error::parse(line, "scale must be positive"));
        }
        scales[attr] = scale;
    }
    Ok(scales)
}

pub fn write_edge_list<W: Write>(g: &AttributedGraph, mut w: W) -> Result<()> {
    for e in g.edges() {
        writeln!(w, "{} {} {}", g.names.name(e.a), g.names.name(e.b), e.weight)?;
    }
    Ok(())
}

pub fn write_attributes<W: Write>(g: &AttributedGraph, mut w: W) -> Result<()> {
    for &(v, a, value) in g.attributes.entries() {
        writeln!(w, "{} {} {}", g.names.name(v), a.0, value)?;
    }
    Ok(())
}

pub fn write_labels<W: Write>(g: &AttributedGraph, mut w: W) -> Result<()> {
    for (v, c) in g.labels.iter() {
        writeln!(w, "{} {}", g.names.name(v), g.labels.class_name(c))?;
    }
    Ok(())
}

/// Writes `unified_id name` lines for the raw nodes.
pub fn write_node_names<W: Write>(names: &NodeNames, mut w: W) -> Result<()> {
    for (i, name) in names.iter().enumerate() {
        writeln!(w, "{i} {name}")?;
    }
    Ok(())
}

pub fn read_node_names<R: BufRead>(reader: R) -> Result<NodeNames> {
    let mut names = NodeNames::new();
    for item in data_lines(reader) {
        let (line, text) = item?;
        let (id, name) = text
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::parse(line, "expected \"id name\""))?;
        let id: usize = id
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid id {id:?}")))?;
        if id != names.len() {
            return Err(Error::parse(line, format!("expected id {}, found {id}", names.len())));
        }
        let before = names.len();
        names.intern(name.trim());
        if names.len() == before {
            return Err(Error::parse(line, format!("repeated name {:?}", name.trim())));
        }
    }
    Ok(names)
}

fn render_node(g: &AugmentedGraph, u: u32) -> String {
    match g.kind(u) {
        NodeKind::Raw(v) => v.0.to_string(),
        NodeKind::Attribute(a) => a.to_string(),
    }
}

/// Writes the augmented graph as `kind id : neighbor(weight) ...` lines in
/// unified-id order. Attribute nodes render as `a<attr>`.
pub fn write_dump<W: Write>(g: &AugmentedGraph, mut w: W) -> Result<()> {
    writeln!(w, "# raw={} attrs={}", g.n_raw(), g.n_attr_columns())?;
    for u in 0..g.n_nodes() as u32 {
        let kind = if g.is_attribute(u) { "attr" } else { "raw" };
        write!(w, "{kind} {} :", render_node(g, u))?;
        for (x, wt) in g.neighbors(u).iter().zip(g.weights(u)) {
            write!(w, " {}({})", render_node(g, *x), wt)?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Parses the output of [`write_dump`].
pub fn read_dump<R: BufRead>(reader: R) -> Result<AugmentedGraph> {
    let mut n_attr_columns = None;
    let mut rows: Vec<(usize, bool, String, String)> = Vec::new();
    for line in reader.lines().enumerate() {
        let (i, text) = (line.0 + 1, line.1?);
        let t = text.trim();
        if let Some(header) = t.strip_prefix('#') {
            if let Some(attrs) = header.split_whitespace().find_map(|kv| kv.strip_prefix("attrs=")) {
                n_attr_columns = Some(
                    attrs
                        .parse::<usize>()
                        .map_err(|_| Error::parse(i, "invalid attrs= header"))?,
                );
            }
            continue;
        }
        if t.is_empty() {
            continue;
        }
        let (head, tail) = t
            .split_once(':')
            .ok_or_else(|| Error::parse(i, "missing ':'"))?;
        let mut head = head.split_whitespace();
        let is_attr = match head.next() {
            Some("raw") => false,
            Some("attr") => true,
            _ => return Err(Error::parse(i, "expected kind raw|attr")),
        };
        let id = head
            .next()
            .ok_or_else(|| Error::parse(i, "missing node id"))?
            .to_owned();
        rows.push((i, is_attr, id, tail.to_owned()));
    }
    let n_raw = rows.iter().take_while(|r| !r.1).count();
    let mut attr_ids = Vec::new();
    let mut unified: HashMap<String, u32> = HashMap::new();
    for (k, (line, is_attr, id, _)) in rows.iter().enumerate() {
        if k < n_raw {
            if *id != k.to_string() {
                return Err(Error::parse(*line, format!("expected raw id {k}")));
            }
        } else {
            if !is_attr {
                return Err(Error::parse(*line, "raw node after attribute nodes"));
            }
            let a: u32 = id
                .strip_prefix('a')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::parse(*line, format!("invalid attribute id {id:?}")))?;
            attr_ids.push(AttrId(a));
        }
        unified.insert(id.clone(), k as u32);
    }
    let mut lists = Vec::with_capacity(rows.len());
    for (line, _, _, tail) in &rows {
        let mut list = Vec::new();
        for token in tail.split_whitespace() {
            let (name, weight) = token
                .strip_suffix(')')
                .and_then(|s| s.split_once('('))
                .ok_or_else(|| Error::parse(*line, format!("malformed neighbor {token:?}")))?;
            let x = *unified
                .get(name)
                .ok_or_else(|| Error::parse(*line, format!("unknown neighbor {name:?}")))?;
            let wt = parse_value(*line, weight, "weight")?;
            list.push((x, wt));
        }
        lists.push(list);
    }
    let n_attr_columns =
        n_attr_columns.unwrap_or_else(|| attr_ids.iter().map(|a| a.index() + 1).max().unwrap_or(0));
    AugmentedGraph::from_lists(n_raw, attr_ids, n_attr_columns, lists)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(text: &str) -> Result<AttributedGraph> {
        load_edge_list(text.as_bytes(), &EdgeListOptions::default())
    }

    #[test]
    fn minimal_path_graph() {
        let g = edges("0 1\n1 2\n").unwrap();
        assert_eq!(g.n_nodes(), 3);
        assert_eq!(g.n_edges(), 2);
        assert!(g.edges().iter().all(|e| e.weight == 1.0));
    }

    #[test]
    fn repeated_weighted_edge_is_merged() {
        let g = edges("0 1 2.5\n0 1 2.5\n").unwrap();
        assert_eq!(g.n_edges(), 1);
        assert_eq!(g.edges()[0].weight, 5.0);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let g = edges("# header\n\n0 1\n  # indented\n").unwrap();
        assert_eq!(g.n_edges(), 1);
    }

    #[test]
    fn edge_list_errors() {
        match edges("0 1\n0 1 2 3\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(edges("0 1 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(edges("0 1 -1\n"), Err(Error::Parse { .. })));
        assert!(matches!(edges("0 1 x\n"), Err(Error::Parse { .. })));
        assert!(matches!(edges("# nothing\n"), Err(Error::Empty(_))));
    }

    #[test]
    fn declared_nodes_keep_isolated_ones() {
        let opts = EdgeListOptions { num_nodes: Some(4) };
        let g = load_edge_list("2 3\n".as_bytes(), &opts).unwrap();
        assert_eq!(g.n_nodes(), 4);
        assert_eq!(g.names.get("2"), Some(NodeId(2)));
        assert!(load_edge_list("2 4\n".as_bytes(), &opts).is_err());
    }

    #[test]
    fn dense_row_transcribed() {
        let g = edges("0 1\n").unwrap();
        let m = load_attributes("1 0 1\n0 0 0\n".as_bytes(), &g.names, AttrFormat::Dense, None).unwrap();
        assert_eq!(m.n_attrs(), 3);
        assert_eq!(
            m.entries(),
            &[(NodeId(0), AttrId(0), 1.0), (NodeId(0), AttrId(2), 1.0)]
        );
    }

    #[test]
    fn dense_errors() {
        let g = edges("0 1\n").unwrap();
        let ragged = load_attributes("1 0 1\n0 1\n".as_bytes(), &g.names, AttrFormat::Dense, None);
        assert!(matches!(ragged, Err(Error::Parse { line: 2, .. })));
        let extra_row = load_attributes("1\n1\n1\n".as_bytes(), &g.names, AttrFormat::Dense, None);
        assert!(matches!(extra_row, Err(Error::Parse { line: 3, .. })));
        let negative = load_attributes("1 -1\n".as_bytes(), &g.names, AttrFormat::Dense, None);
        assert!(negative.is_err());
    }

    #[test]
    fn triplet_duplicate_reports_both_lines() {
        let g = edges("0 1\n").unwrap();
        let r = load_attributes("0 1\n1 0\n0 1 3\n".as_bytes(), &g.names, AttrFormat::Triplet, None);
        match r {
            Err(Error::Duplicate { first: 1, second: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn triplet_errors() {
        let g = edges("0 1\n").unwrap();
        let unknown = load_attributes("7 0\n".as_bytes(), &g.names, AttrFormat::Triplet, None);
        assert!(matches!(unknown, Err(Error::Parse { line: 1, .. })));
        let range = load_attributes("0 5\n".as_bytes(), &g.names, AttrFormat::Triplet, Some(5));
        assert!(range.is_err());
        let neg = load_attributes("0 1 -0.5\n".as_bytes(), &g.names, AttrFormat::Triplet, None);
        assert!(neg.is_err());
        let m = load_attributes("0 4 0.5\n".as_bytes(), &g.names, AttrFormat::Triplet, None).unwrap();
        assert_eq!(m.n_attrs(), 5);
    }

    #[test]
    fn labels_partial_and_conflicts() {
        let g = edges("a b\nb c\n").unwrap();
        let l = load_labels("a x\nc y\na x\n".as_bytes(), &g.names).unwrap();
        assert_eq!(l.n_labeled(), 2);
        assert_eq!(l.n_classes(), 2);
        assert!(l.get(NodeId(1)).is_none());
        let conflict = load_labels("a x\na y\n".as_bytes(), &g.names);
        assert!(matches!(conflict, Err(Error::Duplicate { first: 1, second: 2, .. })));
        assert!(load_labels("z x\n".as_bytes(), &g.names).is_err());
        assert!(load_labels("".as_bytes(), &g.names).unwrap().is_empty());
    }

    #[test]
    fn node_names_round_trip() {
        let g = edges("x y\ny z\n").unwrap();
        let mut buf = Vec::new();
        write_node_names(&g.names, &mut buf).unwrap();
        assert_eq!(read_node_names(buf.as_slice()).unwrap(), g.names);
    }

    #[test]
    fn scales_file() {
        let s = load_attr_scales("a1 2.0\n0 0.5\n".as_bytes(), 3).unwrap();
        assert_eq!(s, vec![0.5, 2.0, 1.0]);
        assert!(load_attr_scales("1 0\n".as_bytes(), 3).is_err());
        assert!(load_attr_scales("9 1\n".as_bytes(), 3).is_err());
    }
}
