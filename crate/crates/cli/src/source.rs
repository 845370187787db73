//! Hypergraph and pattern sources: files, stdin, or named constructions.

use std::io::Read;
use std::path::Path;

use spexlab::hypergraph::*;
use spexlab::{Error, Hypergraph, Pattern, Result};

pub const CONSTRUCTIONS: &str = "turan N L K | b4 N | complete N K | expansion SRC K | extension SRC | \
fan K | triangle K | f7 | f4 | matching K T | hyperstar K T | star T | edge K";

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn num(tokens: &[String], i: usize, name: &str) -> Result<usize> {
    let t = tokens.get(i).ok_or_else(|| bad(format!("`{name}` needs more parameters ({CONSTRUCTIONS})")))?;
    t.parse().map_err(|_| bad(format!("`{t}` is not a nonnegative integer")))
}

/// Builds a named construction from `name arg arg ...`.
pub fn construct(tokens: &[String], stdin: &mut dyn Read) -> Result<Hypergraph> {
    let name = tokens.first().ok_or_else(|| bad(format!("missing construction name ({CONSTRUCTIONS})")))?;
    let arity = match name.as_str() {
        "f7" | "f4" => 0,
        "b4" | "fan" | "triangle" | "star" | "edge" | "extension" => 1,
        "complete" | "matching" | "hyperstar" | "expansion" => 2,
        "turan" => 3,
        other => return Err(bad(format!("unknown construction `{other}` ({CONSTRUCTIONS})"))),
    };
    if tokens.len() != arity + 1 {
        return Err(bad(format!("`{name}` takes {arity} parameter(s), got {}", tokens.len() - 1)));
    }
    let n = |i| num(tokens, i, name);
    match name.as_str() {
        "f7" => Ok(book_f7()),
        "f4" => Ok(f4()),
        "b4" => bipartite_like_complete(n(1)?, 2),
        "fan" => generalized_fan(n(1)?),
        "triangle" => generalized_triangle(n(1)?),
        "star" => Ok(star(n(1)?)),
        "edge" => {
            let k = n(1)?;
            Hypergraph::new(k, k, [(0..k).collect::<Vec<_>>()])
        }
        "extension" => extension(&load(&tokens[1], stdin)?),
        "complete" => complete(n(1)?, n(2)?),
        "matching" => matching(n(1)?, n(2)?),
        "hyperstar" => hyperstar(n(1)?, n(2)?),
        "expansion" => expansion(&load(&tokens[1], stdin)?, n(2)?),
        "turan" => turan_graph(n(1)?, n(2)?, n(3)?),
        _ => unreachable!(),
    }
}

/// A single-token source: `-` for stdin, an existing file, or a named
/// construction with `:`-separated parameters such as `turan:6:3:3`.
pub fn load(src: &str, stdin: &mut dyn Read) -> Result<Hypergraph> {
    if src == "-" {
        let mut text = String::new();
        stdin.read_to_string(&mut text).map_err(|e| bad(format!("reading stdin: {e}")))?;
        return Hypergraph::parse_any(&text);
    }
    if Path::new(src).is_file() {
        let text = std::fs::read_to_string(src).map_err(|e| bad(format!("reading {src}: {e}")))?;
        return Hypergraph::parse_any(&text);
    }
    let tokens: Vec<String> = src.split(':').map(str::to_string).collect();
    construct(&tokens, stdin).map_err(|e| match e {
        Error::InvalidInput(m) if m.starts_with("unknown construction") => {
            bad(format!("`{src}` is neither a readable file nor a construction ({CONSTRUCTIONS})"))
        }
        other => other,
    })
}

/// A pattern source: a JSON file `{"l":..,"k":..,"edges":[..]}`,
/// `complete:L:K`, or `bipartite-like:H`.
pub fn load_pattern(src: &str) -> Result<Pattern> {
    if Path::new(src).is_file() {
        let text = std::fs::read_to_string(src).map_err(|e| bad(format!("reading {src}: {e}")))?;
        #[derive(serde::Deserialize)]
        struct Raw {
            l: usize,
            k: usize,
            edges: Vec<Vec<usize>>,
        }
        let raw: Raw = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        return Pattern::new(raw.l, raw.k, raw.edges);
    }
    let parts: Vec<&str> = src.split(':').collect();
    let p = |i: usize| -> Result<usize> {
        parts.get(i).and_then(|t| t.parse().ok()).ok_or_else(|| bad(format!("bad pattern `{src}`")))
    };
    match parts[0] {
        "complete" if parts.len() == 3 => Pattern::complete(p(1)?, p(2)?),
        "bipartite-like" if parts.len() == 2 => Ok(Pattern::bipartite_like(p(1)?)),
        _ => Err(bad(format!("`{src}` is neither a pattern file nor complete:L:K / bipartite-like:H"))),
    }
}
