//! Labeled embedding matrices and their text and binary file formats.
//!
//! Both formats start with a `rows dim` header line. The text format then
//! has one `label v1 ... vd` line per row, with values printed in shortest
//! round-trip form. The binary format stores each row as the label, a
//! space, `dim` little-endian `f32` values and a newline.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    labels: Vec<String>,
    dim: usize,
    data: Vec<f64>,
    index: HashMap<String, usize>,
}

impl Embedding {
    pub fn new(labels: Vec<String>, dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || data.len() != labels.len() * dim {
            return Err(Error::Invalid(format!(
                "{} values do not form {} rows of dimension {dim}",
                data.len(),
                labels.len()
            )));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.contains(char::is_whitespace) {
                return Err(Error::Invalid(format!("invalid row label {l:?}")));
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate row label {l:?}")));
            }
        }
        Ok(Self { labels, dim, data, index })
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Rows whose label starts with `a` followed by digits.
    pub fn is_attribute_row(&self, i: usize) -> bool {
        is_attribute_label(&self.labels[i])
    }
}

fn is_attribute_label(label: &str) -> bool {
    label
        .strip_prefix('a')
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

pub fn write_embedding<W: Write>(e: &Embedding, mut w: W) -> Result<()> {
    writeln!(w, "{} {}", e.n_rows(), e.dim)?;
    for i in 0..e.n_rows() {
        w.write_all(e.labels[i].as_bytes())?;
        for x in e.row(i) {
            write!(w, " {x}")?;
        }
        w.write_all(b"\n")?;
    }
    Ok(())
}

fn parse_header(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(n)), Some(Ok(d)), None) if d > 0 => Ok((n, d)),
        _ => Err(Error::parse(1, "expected header \"rows dim\"")),
    }
}

pub fn read_embedding<R: BufRead>(reader: R) -> Result<Embedding> {
    let mut lines = reader.lines();
    let header = lines.next().ok_or(Error::Empty("embedding file"))??;
    let (n, d) = parse_header(&header)?;
    let mut labels = Vec::with_capacity(n);
    let mut data = Vec::with_capacity(n * d);
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let label = it.next().unwrap_or_default();
        let before = data.len();
        for tok in it {
            data.push(tok.parse::<f64>().map_err(|_| Error::parse(i + 2, format!("bad value {tok:?}")))?);
        }
        if data.len() - before != d {
            return Err(Error::parse(i + 2, format!("expected {d} values, found {}", data.len() - before)));
        }
        labels.push(label.to_string());
    }
    if labels.len() != n {
        return Err(Error::Invalid(format!("header announces {n} rows, file has {}", labels.len())));
    }
    Embedding::new(labels, d, data)
}

pub fn write_embedding_binary<W: Write>(e: &Embedding, mut w: W) -> Result<()> {
    writeln!(w, "{} {}", e.n_rows(), e.dim)?;
    for i in 0..e.n_rows() {
        w.write_all(e.labels[i].as_bytes())?;
        w.write_all(b" ")?;
        for &x in e.row(i) {
            w.write_all(&(x as f32).to_le_bytes())?;
        }
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_embedding_binary<R: BufRead>(mut reader: R) -> Result<Embedding> {
    let mut header = String::new();
    reader.read_line(&mut header)?;
    if header.is_empty() {
        return Err(Error::Empty("embedding file"));
    }
    let (n, d) = parse_header(&header)?;
    let mut labels = Vec::with_capacity(n);
    let mut data = Vec::with_capacity(n * d);
    let mut buf = vec![0u8; 4 * d];
    for row in 0..n {
        let mut label = Vec::new();
        reader.read_until(b' ', &mut label)?;
        if label.pop() != Some(b' ') {
            return Err(Error::Invalid(format!("truncated binary embedding at row {row}")));
        }
        let label = String::from_utf8(label).map_err(|_| Error::Invalid(format!("row {row} label is not UTF-8")))?;
        reader.read_exact(&mut buf)?;
        data.extend(buf.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64));
        let mut nl = [0u8; 1];
        reader.read_exact(&mut nl)?;
        if nl[0] != b'\n' {
            return Err(Error::Invalid(format!("row {row} is not newline-terminated")));
        }
        labels.push(label);
    }
    Embedding::new(labels, d, data)
}
