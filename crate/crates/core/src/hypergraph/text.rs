//! Plain-text hypergraph format.
//!
//! ```text
//! k n
//! v1 v2 ... vk
//! ...
//! ```
//!
//! Line 1 holds `k` and `n`. Every later non-empty line not starting with
//! `#` is one edge: `k` strictly ascending 0-based ids separated by single
//! spaces. Writers emit edges in lexicographic order with a trailing newline.

use std::io::{BufRead, Write};
use std::path::Path;

use itertools::Itertools;

use super::{Hypergraph, HypergraphError, Vertex};

fn parse_error(line: usize, message: impl Into<String>) -> HypergraphError {
    HypergraphError::Parse { line, message: message.into() }
}

fn parse_ids(line_no: usize, line: &str) -> Result<Vec<usize>, HypergraphError> {
    line.split(' ')
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| parse_error(line_no, format!("expected a non-negative integer, found {tok:?}")))
        })
        .collect()
}

impl Hypergraph {
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.k, self.n);
        for e in &self.edges {
            out.push_str(&e.iter().join(" "));
            out.push('\n');
        }
        out
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> Result<(), HypergraphError> {
        w.write_all(self.to_text().as_bytes())?;
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self, HypergraphError> {
        Self::read_text(text.as_bytes())
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<Self, HypergraphError> {
        let mut lines = r.lines().enumerate();
        let (k, n) = loop {
            let Some((i, line)) = lines.next() else {
                return Err(parse_error(1, "missing \"k n\" header"));
            };
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match parse_ids(i + 1, line)?.as_slice() {
                &[k, n] => break (k, n),
                _ => return Err(parse_error(i + 1, "header must be \"k n\"")),
            }
        };
        let mut edges: Vec<Vec<Vertex>> = Vec::new();
        for (i, line) in lines {
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let e = parse_ids(i + 1, line)?;
            if e.len() != k {
                return Err(parse_error(i + 1, format!("edge has {} ids, expected {k}", e.len())));
            }
            if e.windows(2).any(|w| w[0] >= w[1]) {
                return Err(parse_error(i + 1, "vertex ids must be strictly ascending"));
            }
            edges.push(e);
        }
        Self::new(n, k, edges)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<(), HypergraphError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self, HypergraphError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text)
    }
}
