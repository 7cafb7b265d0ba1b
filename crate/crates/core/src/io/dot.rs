//! Schematic renderers driven by the exactness levels, plus the small DOT
//! reader used to check the emitted graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::{ForkComplex, NodeKind};
use crate::exact::{check_exact, Level, Vertex};
use crate::io::format::canonical_names;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenderError {
    #[error("the complex is not exact: {0}")]
    NotExact(String),
}

fn vertex_names(complex: &ForkComplex) -> BTreeMap<Vertex, String> {
    let (node_names, _) = canonical_names(complex);
    let order = complex.canonical_order();
    let mut names = BTreeMap::new();
    for (i, &fid) in order.forks.iter().enumerate() {
        names.insert(Vertex::Root(fid), format!("r{i}"));
    }
    for (&id, name) in &node_names {
        names.insert(Vertex::Node(id), name.clone());
    }
    names
}

/// Levels grouped ascending; each group becomes one rank.
fn level_groups(
    complex: &ForkComplex,
    names: &BTreeMap<Vertex, String>,
) -> Result<Vec<(Level, Vec<String>)>, RenderError> {
    let levels = check_exact(complex).map_err(|inf| RenderError::NotExact(inf.to_string()))?;
    // Levels are normalized fractions, so (num, den) is an exact group key.
    let mut groups: BTreeMap<(u64, u64), Vec<String>> = BTreeMap::new();
    for (v, level) in levels.iter() {
        groups
            .entry((level.num(), level.den()))
            .or_default()
            .push(names[&v].clone());
    }
    let mut out: Vec<(Level, Vec<String>)> = groups
        .into_iter()
        .map(|((num, den), mut names)| {
            names.sort();
            (Level::new(num, den), names)
        })
        .collect();
    out.sort_by_key(|(level, _)| *level);
    Ok(out)
}

/// Renders the exactness digraph as a DOT document: one node per root, tine
/// and grip, edges exactly the strict constraints, and one rank group per
/// level with the lower boundary at the bottom.
pub fn render_dot(complex: &ForkComplex) -> Result<String, RenderError> {
    let names = vertex_names(complex);
    let groups = level_groups(complex, &names)?;
    let digraph = complex.exactness_digraph();

    let mut out = String::from("digraph fork_complex {\n");
    out.push_str("  rankdir=\"BT\";\n");
    let mut ordered: Vec<(&Vertex, &String)> = names.iter().collect();
    ordered.sort_by(|a, b| a.1.cmp(b.1));
    for (v, name) in &ordered {
        match v {
            Vertex::Root(_) => {
                let _ = writeln!(out, "  \"{name}\" [shape=point];");
            }
            Vertex::Node(id) => {
                let node = complex.node(*id);
                let shape = match node.kind {
                    NodeKind::Tine => "circle",
                    NodeKind::Grip => "box",
                };
                let _ = writeln!(
                    out,
                    "  \"{name}\" [shape={shape} label=\"{name}:{}\"];",
                    node.label
                );
            }
        }
    }
    for (_, group) in &groups {
        out.push_str("  { rank=same;");
        for name in group {
            let _ = write!(out, " \"{name}\";");
        }
        out.push_str(" }\n");
    }
    let mut edges: Vec<(String, String)> = digraph
        .edges()
        .map(|(u, v)| (names[&u].clone(), names[&v].clone()))
        .collect();
    edges.sort();
    for (u, v) in edges {
        let _ = writeln!(out, "  \"{u}\" -> \"{v}\";");
    }
    out.push_str("}\n");
    Ok(out)
}

/// Renders a simple SVG schematic, placing every vertex at height
/// `1 - level` and spreading rank groups horizontally.
pub fn render_svg(complex: &ForkComplex) -> Result<String, RenderError> {
    let names = vertex_names(complex);
    let groups = level_groups(complex, &names)?;
    let digraph = complex.exactness_digraph();

    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const PAD: f64 = 40.0;

    let mut position: BTreeMap<String, (f64, f64)> = BTreeMap::new();
    for (level, group) in &groups {
        let y = PAD + (1.0 - level.as_f64()) * (H - 2.0 * PAD);
        let step = (W - 2.0 * PAD) / (group.len() as f64 + 1.0);
        for (i, name) in group.iter().enumerate() {
            position.insert(name.clone(), (PAD + step * (i as f64 + 1.0), y));
        }
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
    );
    let mut edges: Vec<(String, String)> = digraph
        .edges()
        .map(|(u, v)| (names[&u].clone(), names[&v].clone()))
        .collect();
    edges.sort();
    for (u, v) in &edges {
        let (x1, y1) = position[u];
        let (x2, y2) = position[v];
        let _ = writeln!(
            out,
            "  <line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"#555\"/>"
        );
    }
    let mut ordered: Vec<(&Vertex, &String)> = names.iter().collect();
    ordered.sort_by(|a, b| a.1.cmp(b.1));
    for (v, name) in ordered {
        let (x, y) = position[name];
        match v {
            Vertex::Root(_) => {
                let _ = writeln!(out, "  <circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"3\" fill=\"#000\"/>");
            }
            Vertex::Node(id) => {
                let node = complex.node(*id);
                match node.kind {
                    NodeKind::Tine => {
                        let _ = writeln!(
                            out,
                            "  <circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"10\" fill=\"#fff\" stroke=\"#000\"/>"
                        );
                    }
                    NodeKind::Grip => {
                        let _ = writeln!(
                            out,
                            "  <rect x=\"{:.1}\" y=\"{:.1}\" width=\"20\" height=\"20\" fill=\"#fff\" stroke=\"#000\"/>",
                            x - 10.0,
                            y - 10.0
                        );
                    }
                }
                let _ = writeln!(
                    out,
                    "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\">{name}:{}</text>",
                    x + 12.0,
                    y + 4.0,
                    node.label
                );
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// A parsed DOT digraph, as much of it as the renderer emits.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DotGraph {
    pub nodes: BTreeSet<String>,
    pub edges: BTreeSet<(String, String)>,
    pub ranks: Vec<BTreeSet<String>>,
}

/// A small reader for the DOT subset this crate emits (and common variants):
/// `digraph name? { stmts }` with node statements, edge statements,
/// attribute assignments and `{ rank=same; ... }` groups.
pub fn parse_dot(text: &str) -> Result<DotGraph, String> {
    let mut tokens = dot_tokens(text)?;
    tokens.reverse(); // pop from the back
    let mut graph = DotGraph::default();

    match tokens.pop() {
        Some(DotTok::Id(word)) if word == "digraph" => {}
        other => return Err(format!("expected `digraph`, got {other:?}")),
    }
    let mut tok = tokens.pop();
    if let Some(DotTok::Id(_)) = tok {
        tok = tokens.pop();
    }
    if tok != Some(DotTok::OpenBrace) {
        return Err(format!("expected `{{`, got {tok:?}"));
    }

    loop {
        let Some(tok) = tokens.pop() else {
            return Err("unterminated graph body".to_string());
        };
        match tok {
            DotTok::CloseBrace => break,
            DotTok::Semi => continue,
            DotTok::OpenBrace => {
                // rank group
                let mut group = BTreeSet::new();
                loop {
                    match tokens.pop() {
                        Some(DotTok::CloseBrace) => break,
                        Some(DotTok::Semi) => continue,
                        Some(DotTok::Id(id)) => {
                            // may be `rank=same` or a node reference
                            if id == "rank" {
                                if tokens.pop() != Some(DotTok::Equals) {
                                    return Err("expected `=` after rank".to_string());
                                }
                                match tokens.pop() {
                                    Some(DotTok::Id(_)) => {}
                                    other => {
                                        return Err(format!("expected rank value, got {other:?}"))
                                    }
                                }
                            } else {
                                group.insert(id);
                            }
                        }
                        other => return Err(format!("unexpected token in rank group: {other:?}")),
                    }
                }
                graph.ranks.push(group);
            }
            DotTok::Id(id) => {
                // attribute assignment, node statement, or edge statement
                match tokens.pop() {
                    Some(DotTok::Equals) => match tokens.pop() {
                        Some(DotTok::Id(_)) => {}
                        other => return Err(format!("expected attribute value, got {other:?}")),
                    },
                    Some(DotTok::Arrow) => {
                        let Some(DotTok::Id(target)) = tokens.pop() else {
                            return Err("expected edge target".to_string());
                        };
                        graph.nodes.insert(id.clone());
                        graph.nodes.insert(target.clone());
                        graph.edges.insert((id, target));
                    }
                    Some(DotTok::OpenBracket) => {
                        loop {
                            match tokens.pop() {
                                Some(DotTok::CloseBracket) => break,
                                Some(
                                    DotTok::Id(_)
                                    | DotTok::Equals
                                    | DotTok::Semi,
                                ) => continue,
                                other => {
                                    return Err(format!(
                                        "unexpected token in attribute list: {other:?}"
                                    ))
                                }
                            }
                        }
                        graph.nodes.insert(id);
                    }
                    Some(DotTok::Semi) | Some(DotTok::CloseBrace) => {
                        graph.nodes.insert(id);
                        if tokens.is_empty() {
                            break;
                        }
                    }
                    other => return Err(format!("unexpected token after `{id}`: {other:?}")),
                }
            }
            other => return Err(format!("unexpected token: {other:?}")),
        }
    }
    Ok(graph)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum DotTok {
    Id(String),
    OpenBrace,
    CloseBrace,
    OpenBracket,
    CloseBracket,
    Equals,
    Semi,
    Arrow,
}

fn dot_tokens(text: &str) -> Result<Vec<DotTok>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        match chars[i] {
            c if c.is_whitespace() => i += 1,
            '{' => {
                tokens.push(DotTok::OpenBrace);
                i += 1;
            }
            '}' => {
                tokens.push(DotTok::CloseBrace);
                i += 1;
            }
            '[' => {
                tokens.push(DotTok::OpenBracket);
                i += 1;
            }
            ']' => {
                tokens.push(DotTok::CloseBracket);
                i += 1;
            }
            '=' => {
                tokens.push(DotTok::Equals);
                i += 1;
            }
            ';' => {
                tokens.push(DotTok::Semi);
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                tokens.push(DotTok::Arrow);
                i += 2;
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err("unterminated string".to_string()),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            if let Some(&c) = chars.get(i + 1) {
                                s.push(c);
                            }
                            i += 2;
                        }
                        Some(&c) => {
                            s.push(c);
                            i += 1;
                        }
                    }
                }
                tokens.push(DotTok::Id(s));
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.')
                {
                    i += 1;
                }
                tokens.push(DotTok::Id(chars[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(tokens)
}
