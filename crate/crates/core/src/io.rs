//! Text formats: edge lists, graph6, and the coloring JSON document.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{ExactResult, Proof};
use crate::graph::{build_graph, Graph, GraphError};
use crate::solver::{ComponentTrace, SolveResult};
use crate::verifier::{badness, BadnessReport, Coloring, ColoringError, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: malformed header, expected \"n m\"")]
    Header { line: usize },
    #[error("line {line}: malformed edge, expected \"u v\"")]
    EdgeLine { line: usize },
    #[error("header declares {declared} edges but {found} were given")]
    CountMismatch { declared: usize, found: usize },
    #[error("empty input")]
    Empty,
    #[error("invalid graph6 character {0:?}")]
    Graph6Char(char),
    #[error("graph6 payload truncated: expected {expected} bytes, got {got}")]
    Graph6Truncated { expected: usize, got: usize },
    #[error("graph6 supports at most 258047 vertices")]
    Graph6TooLarge,
    #[error("invalid coloring: {0}")]
    Coloring(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Color(#[from] ColoringError),
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_pair(s: &str) -> Option<(usize, usize)> {
    let mut it = s.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

/// Header "n m" then m lines "u v", 0-indexed; '#' starts a comment.
pub fn parse_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, strip_comment(l))).filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(FormatError::Empty)?;
    let (n, m) = parse_pair(header).ok_or(FormatError::Header { line: hline })?;
    let mut pairs = Vec::with_capacity(m);
    for (line, l) in lines {
        pairs.push(parse_pair(l).ok_or(FormatError::EdgeLine { line })?);
    }
    if pairs.len() != m {
        return Err(FormatError::CountMismatch { declared: m, found: pairs.len() });
    }
    Ok(build_graph(n, &pairs)?)
}

pub fn encode_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Decode one graph6 line. Edges come out in column order of the upper
/// triangle: (0,1), (0,2), (1,2), (0,3), …
pub fn parse_graph6(line: &str) -> Result<Graph, FormatError> {
    let line = line.trim_end_matches(['\n', '\r']);
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    if line.is_empty() {
        return Err(FormatError::Empty);
    }
    let bytes: Vec<u8> = line
        .chars()
        .map(|ch| if ('?'..='~').contains(&ch) { Ok(ch as u8 - 63) } else { Err(FormatError::Graph6Char(ch)) })
        .collect::<Result<_, _>>()?;
    let (n, rest) = if bytes[0] < 63 {
        (bytes[0] as usize, &bytes[1..])
    } else {
        if bytes.len() < 4 {
            return Err(FormatError::Graph6Truncated { expected: 4, got: bytes.len() });
        }
        if bytes[1] == 63 {
            return Err(FormatError::Graph6TooLarge);
        }
        let n = ((bytes[1] as usize) << 12) | ((bytes[2] as usize) << 6) | bytes[3] as usize;
        (n, &bytes[4..])
    };
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if rest.len() != expected {
        return Err(FormatError::Graph6Truncated { expected, got: rest.len() });
    }
    let mut pairs = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if rest[k / 6] >> (5 - k % 6) & 1 == 1 {
                pairs.push((i, j));
            }
            k += 1;
        }
    }
    Ok(build_graph(n, &pairs)?)
}

pub fn encode_graph6(g: &Graph) -> Result<String, FormatError> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    if n < 63 {
        out.push(n as u8);
    } else if n <= 258_047 {
        out.extend([63, (n >> 12) as u8 & 63, (n >> 6) as u8 & 63, n as u8 & 63]);
    } else {
        return Err(FormatError::Graph6TooLarge);
    }
    let bits = n * n.saturating_sub(1) / 2;
    let mut payload = vec![0u8; bits.div_ceil(6)];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if g.has_edge(i, j) {
                payload[k / 6] |= 1 << (5 - k % 6);
            }
            k += 1;
        }
    }
    out.extend(payload);
    Ok(out.into_iter().map(|b| (b + 63) as char).collect())
}

/// Coloring certificate as exchanged on the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringDocument {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub colors: Vec<u32>,
    pub colors_used: usize,
    pub mode: String,
    pub valid: bool,
    #[serde(default)]
    pub trace: Vec<ComponentTrace>,
    pub kappa1: usize,
    pub kappa2: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proof: Option<Proof>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl ColoringDocument {
    fn base(g: &Graph, c: &Coloring, mode: String, valid: bool) -> Self {
        let report = badness(g, c);
        ColoringDocument {
            n: g.vertex_count(),
            edges: g.edges().to_vec(),
            colors: c.colors().to_vec(),
            colors_used: c.colors_used(),
            mode,
            valid,
            trace: Vec::new(),
            kappa1: report.kappa1,
            kappa2: report.kappa2,
            value: None,
            proof: None,
            witness: None,
        }
    }

    pub fn from_solve(g: &Graph, r: &SolveResult) -> Self {
        let mut doc = Self::base(g, &r.coloring, r.mode.name().to_string(), r.valid());
        doc.trace = r.trace.clone();
        doc
    }

    pub fn from_exact(g: &Graph, mode: &str, r: &ExactResult) -> Self {
        let mut doc = Self::base(g, &r.certificate, mode.to_string(), true);
        doc.value = Some(r.value);
        doc.proof = Some(r.proof);
        doc
    }

    pub fn from_verdict(g: &Graph, c: &Coloring, mode: &str, valid: bool, witness: Option<Witness>) -> Self {
        let mut doc = Self::base(g, c, mode.to_string(), valid);
        doc.witness = witness;
        doc
    }

    pub fn coloring(&self) -> Result<Coloring, FormatError> {
        Ok(Coloring::from_colors(self.colors.clone())?)
    }

    pub fn graph(&self) -> Result<Graph, FormatError> {
        Ok(build_graph(self.n, &self.edges)?)
    }
}

/// Badness summary for a coloring, with the same edge/color fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadnessDocument {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub colors: Vec<u32>,
    #[serde(flatten)]
    pub report: BadnessReport,
}

pub fn emit_result(doc: &ColoringDocument) -> String {
    serde_json::to_string(doc).expect("documents serialize")
}

pub fn emit_badness(g: &Graph, c: &Coloring) -> String {
    let doc = BadnessDocument { n: g.vertex_count(), edges: g.edges().to_vec(), colors: c.colors().to_vec(), report: badness(g, c) };
    serde_json::to_string(&doc).expect("documents serialize")
}

pub fn parse_coloring(text: &str) -> Result<ColoringDocument, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Coloring(e.to_string()))
}

/// A coloring given either as a JSON document or as whitespace-separated
/// colors in edge order.
pub fn parse_colors(text: &str) -> Result<Coloring, FormatError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return parse_coloring(text)?.coloring();
    }
    if trimmed.starts_with('[') {
        let colors: Vec<u32> = serde_json::from_str(text).map_err(|e| FormatError::Coloring(e.to_string()))?;
        return Ok(Coloring::from_colors(colors)?);
    }
    let colors = text
        .lines()
        .map(strip_comment)
        .flat_map(|l| l.split_whitespace().map(str::to_string).collect::<Vec<_>>())
        .map(|t| t.parse::<u32>().map_err(|_| FormatError::Coloring(format!("not a color: {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Coloring::from_colors(colors)?)
}
