//! Text and JSON encodings.
//!
//! Text: first line `n k`, then one edge per non-empty line as
//! space-separated 0-based vertex indices.

use std::fmt::Write as _;

use super::Hypergraph;
use crate::error::{Error, Result};

impl Hypergraph {
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.k);
        for e in &self.edges {
            let line = e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
            writeln!(s, "{line}").unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Hypergraph> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let nums = parse_row(header)?;
        let [n, k] = nums[..] else {
            return Err(Error::Parse(format!("header must be `n k`, got `{header}`")));
        };
        let edges = lines.map(parse_row).collect::<Result<Vec<_>>>()?;
        Hypergraph::new(n, k, edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("hypergraph serializes")
    }

    pub fn from_json(text: &str) -> Result<Hypergraph> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Accepts either encoding; JSON is recognised by a leading `{`.
    pub fn parse_any(text: &str) -> Result<Hypergraph> {
        if text.trim_start().starts_with('{') {
            Hypergraph::from_json(text)
        } else {
            Hypergraph::from_text(text)
        }
    }
}

fn parse_row(line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad integer `{t}`"))))
        .collect()
}
