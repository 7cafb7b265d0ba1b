//! Parser for fork-complex documents, with positioned diagnostics.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::body::Genus;

/// Upper bound on genus annotations; keeps all downstream label arithmetic
/// far from overflow.
pub const MAX_GENUS: u32 = 1_000_000;
use crate::complex::{
    ComplexBuilder, ComplexError, GeneralizedSplitting, NodeId, NodeKind, Side,
};
use crate::exact::Infeasibility;

/// A parse or validation failure, anchored to a source position.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: String },
    GenusConflict { node: String, first: Genus, second: Genus },
    KindConflict { node: String },
    DuplicateFork { name: String },
    UnknownAssertNode { name: String },
    Invalid(ComplexError),
    NotExact(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax { expected } => write!(f, "expected {expected}"),
            ParseErrorKind::GenusConflict {
                node,
                first,
                second,
            } => write!(
                f,
                "node `{node}` is annotated with genus {second}, but was genus {first} before"
            ),
            ParseErrorKind::KindConflict { node } => {
                write!(f, "node `{node}` is used both as a grip and as a tine")
            }
            ParseErrorKind::DuplicateFork { name } => {
                write!(f, "fork `{name}` is declared twice")
            }
            ParseErrorKind::UnknownAssertNode { name } => {
                write!(f, "assertion names unknown node `{name}`")
            }
            ParseErrorKind::Invalid(err) => write!(f, "{err}"),
            ParseErrorKind::NotExact(witness) => {
                write!(f, "the complex admits no level function: {witness}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Int(u32),
    Colon,
    Comma,
    Str(String),
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("`{s}`"),
            Token::Int(n) => format!("`{n}`"),
            Token::Colon => "`:`".to_string(),
            Token::Comma => "`,`".to_string(),
            Token::Str(_) => "a string".to_string(),
        }
    }
}

fn err(line: u32, col: u32, expected: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col,
        kind: ParseErrorKind::Syntax {
            expected: expected.into(),
        },
    }
}

fn tokenize(line_no: u32, text: &str) -> Result<Vec<(Token, u32)>, ParseError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let col = i as u32 + 1;
        let c = chars[i];
        match c {
            '#' => break,
            c if c.is_whitespace() => {
                i += 1;
            }
            ':' => {
                tokens.push((Token::Colon, col));
                i += 1;
            }
            ',' => {
                tokens.push((Token::Comma, col));
                i += 1;
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    if i >= chars.len() {
                        return Err(err(line_no, col, "a closing `\"`"));
                    }
                    match chars[i] {
                        '"' => {
                            i += 1;
                            break;
                        }
                        '\\' if i + 1 < chars.len() => {
                            s.push(chars[i + 1]);
                            i += 2;
                        }
                        other => {
                            s.push(other);
                            i += 1;
                        }
                    }
                }
                tokens.push((Token::Str(s), col));
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let value: u32 = text
                    .parse()
                    .ok()
                    .filter(|&v| v <= MAX_GENUS)
                    .ok_or_else(|| err(line_no, col, "a genus of at most 1000000"))?;
                tokens.push((Token::Int(value), col));
            }
            c if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push((Token::Ident(chars[start..i].iter().collect()), col));
            }
            other => {
                return Err(err(line_no, col, format!("a token, not `{other}`")));
            }
        }
    }
    Ok(tokens)
}

struct LineParser {
    tokens: Vec<(Token, u32)>,
    line: u32,
    at: usize,
}

impl LineParser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(t, _)| t)
    }

    fn col(&self) -> u32 {
        self.tokens
            .get(self.at)
            .map(|&(_, c)| c)
            .unwrap_or_else(|| self.tokens.last().map(|&(_, c)| c + 1).unwrap_or(1))
    }

    fn next(&mut self, expected: &str) -> Result<(Token, u32), ParseError> {
        let item = self
            .tokens
            .get(self.at)
            .cloned()
            .ok_or_else(|| err(self.line, self.col(), expected.to_string()))?;
        self.at += 1;
        Ok(item)
    }

    fn ident(&mut self, expected: &str) -> Result<(String, u32), ParseError> {
        match self.next(expected)? {
            (Token::Ident(s), col) => Ok((s, col)),
            (other, col) => Err(err(
                self.line,
                col,
                format!("{expected}, not {}", other.describe()),
            )),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        let (got, col) = self.ident(&format!("`{word}`"))?;
        if got == word {
            Ok(())
        } else {
            Err(err(self.line, col, format!("`{word}`, not `{got}`")))
        }
    }

    fn int(&mut self, expected: &str) -> Result<u32, ParseError> {
        match self.next(expected)? {
            (Token::Int(n), _) => Ok(n),
            (other, col) => Err(err(
                self.line,
                col,
                format!("{expected}, not {}", other.describe()),
            )),
        }
    }

    fn expect(&mut self, token: Token) -> Result<(), ParseError> {
        let want = token.describe();
        match self.next(&want)? {
            (got, col) if got != token => {
                Err(err(self.line, col, format!("{want}, not {}", got.describe())))
            }
            _ => Ok(()),
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        if let Some(t) = self.peek() {
            let desc = t.describe();
            Err(err(self.line, self.col(), format!("end of line, not {desc}")))
        } else {
            Ok(())
        }
    }
}

#[derive(Debug)]
struct NodeDecl {
    kind: NodeKind,
    label: Genus,
    line: u32,
    col: u32,
}

/// Parses a document into a validated, exact splitting. Well-formedness and
/// exactness failures are reported as diagnostics on the offending line.
pub fn parse_complex(text: &str) -> Result<GeneralizedSplitting, ParseError> {
    struct ForkDecl {
        name: String,
        side: Side,
        grip: String,
        tines: Vec<String>,
        line: u32,
    }
    let mut nodes: BTreeMap<String, NodeDecl> = BTreeMap::new();
    let mut forks: Vec<ForkDecl> = Vec::new();
    let mut asserts: Vec<(String, String, u32, u32)> = Vec::new();

    let mut note_node = |name: String,
                         kind: NodeKind,
                         label: Genus,
                         line: u32,
                         col: u32|
     -> Result<(), ParseError> {
        match nodes.get(&name) {
            None => {
                nodes.insert(
                    name,
                    NodeDecl {
                        kind,
                        label,
                        line,
                        col,
                    },
                );
                Ok(())
            }
            Some(prev) if prev.kind != kind => Err(ParseError {
                line,
                col,
                kind: ParseErrorKind::KindConflict { node: name },
            }),
            Some(prev) if prev.label != label => Err(ParseError {
                line,
                col,
                kind: ParseErrorKind::GenusConflict {
                    node: name,
                    first: prev.label,
                    second: label,
                },
            }),
            Some(_) => Ok(()),
        }
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx as u32 + 1;
        let tokens = tokenize(line_no, raw)?;
        if tokens.is_empty() {
            continue;
        }
        let mut p = LineParser {
            tokens,
            line: line_no,
            at: 0,
        };
        let (head, head_col) = p.ident("`fork` or `assert`")?;
        match head.as_str() {
            "fork" => {
                let (name, name_col) = p.ident("a fork name")?;
                p.keyword("side")?;
                let (side_word, side_col) = p.ident("`A` or `B`")?;
                let side = match side_word.as_str() {
                    "A" => Side::A,
                    "B" => Side::B,
                    other => {
                        return Err(err(line_no, side_col, format!("`A` or `B`, not `{other}`")))
                    }
                };
                p.keyword("grip")?;
                let (grip, grip_col) = p.ident("a grip node")?;
                p.expect(Token::Colon)?;
                let grip_genus = p.int("a genus")?;
                note_node(grip.clone(), NodeKind::Grip, Genus(grip_genus), line_no, grip_col)?;
                let mut tines = Vec::new();
                if p.peek().is_some() {
                    p.keyword("tines")?;
                    loop {
                        let (tine, tine_col) = p.ident("a tine node")?;
                        p.expect(Token::Colon)?;
                        let genus = p.int("a genus")?;
                        note_node(tine.clone(), NodeKind::Tine, Genus(genus), line_no, tine_col)?;
                        tines.push(tine);
                        match p.peek() {
                            Some(Token::Comma) => {
                                p.expect(Token::Comma)?;
                            }
                            _ => break,
                        }
                    }
                }
                p.end()?;
                if forks.iter().any(|f| f.name == name) {
                    return Err(ParseError {
                        line: line_no,
                        col: name_col,
                        kind: ParseErrorKind::DuplicateFork { name },
                    });
                }
                forks.push(ForkDecl {
                    name,
                    side,
                    grip,
                    tines,
                    line: line_no,
                });
            }
            "assert" => {
                let (node, node_col) = p.ident("a node name")?;
                let claim = match p.next("a quoted claim")? {
                    (Token::Str(s), _) => s,
                    (other, col) => {
                        return Err(err(
                            line_no,
                            col,
                            format!("a quoted claim, not {}", other.describe()),
                        ))
                    }
                };
                p.end()?;
                asserts.push((node, claim, line_no, node_col));
            }
            other => {
                return Err(err(
                    line_no,
                    head_col,
                    format!("`fork` or `assert`, not `{other}`"),
                ));
            }
        }
    }

    if forks.is_empty() {
        return Err(err(
            text.lines().count() as u32 + 1,
            1,
            "at least one fork declaration",
        ));
    }

    let mut builder = ComplexBuilder::new();
    let mut ids: BTreeMap<&str, NodeId> = BTreeMap::new();
    for (name, decl) in &nodes {
        ids.insert(name, builder.node(name.clone(), decl.kind, decl.label));
    }
    let fork_lines: BTreeMap<String, u32> =
        forks.iter().map(|f| (f.name.clone(), f.line)).collect();
    for fork in &forks {
        let grip = ids[fork.grip.as_str()];
        let tines = fork.tines.iter().map(|t| ids[t.as_str()]).collect();
        builder.fork(fork.name.clone(), fork.side, grip, tines);
    }
    let complex = builder.build().map_err(|e| {
        let (line, col) = match &e {
            ComplexError::BodyInvalid { fork, .. } => {
                (fork_lines.get(fork).copied().unwrap_or(1), 1)
            }
            ComplexError::DoubleGluing { node, .. } => nodes
                .get(node)
                .map(|d| (d.line, d.col))
                .unwrap_or((1, 1)),
            _ => (1, 1),
        };
        ParseError {
            line,
            col,
            kind: ParseErrorKind::Invalid(e),
        }
    })?;

    let mut gs = GeneralizedSplitting::new(complex).map_err(|inf: Infeasibility| ParseError {
        line: 1,
        col: 1,
        kind: ParseErrorKind::NotExact(inf.to_string()),
    })?;
    for (node, claim, line, col) in asserts {
        gs.assert_node(&node, claim).map_err(|_| ParseError {
            line,
            col,
            kind: ParseErrorKind::UnknownAssertNode { name: node.clone() },
        })?;
    }
    Ok(gs)
}
