//! Galileo-style line format.
//!
//! ```text
//! toplevel "top";
//! "top" and "left" "right";
//! "left" or "a" "shared";
//! "a" prob=0.25;
//! ```
//!
//! Names may be quoted or bare. `//` starts a comment. Declarations may
//! appear in any order; node ids follow declaration order.

use std::fmt::Write as _;

use thiserror::Error;

use crate::tree::{Dag, FaultTree, GateKind, Prob, TreeBuilder, TreeError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unsupported construct `{what}`")]
    Unsupported { line: usize, col: usize, what: String },
    #[error("{line}:{col}: node \"{name}\" is defined more than once")]
    Duplicate { line: usize, col: usize, name: String },
    #[error(transparent)]
    Invalid(#[from] TreeError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Quoted(String),
    Bare(String),
    Eq,
    Semi,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(s: &Spanned, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line: s.line, col: s.col, msg: msg.into() }
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, col) = (lineno + 1, i + 1);
            if c.is_whitespace() {
                i += 1;
            } else if c == '/' && chars.get(i + 1) == Some(&'/') {
                break;
            } else if c == ';' {
                out.push(Spanned { tok: Tok::Semi, line, col });
                i += 1;
            } else if c == '=' {
                out.push(Spanned { tok: Tok::Eq, line, col });
                i += 1;
            } else if c == '"' {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j] != '"' {
                    j += 1;
                }
                if j == chars.len() {
                    return Err(ParseError::Syntax { line, col, msg: "unterminated string".into() });
                }
                let name: String = chars[start..j].iter().collect();
                if name.is_empty() {
                    return Err(ParseError::Syntax { line, col, msg: "empty name".into() });
                }
                out.push(Spanned { tok: Tok::Quoted(name), line, col });
                i = j + 1;
            } else if c.is_alphanumeric() || "_.-+".contains(c) {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || "_.-+".contains(chars[i])) {
                    i += 1;
                }
                out.push(Spanned { tok: Tok::Bare(chars[start..i].iter().collect()), line, col });
            } else {
                return Err(ParseError::Syntax { line, col, msg: format!("unexpected `{c}`") });
            }
        }
    }
    Ok(out)
}

fn name_of(s: &Spanned) -> Option<&str> {
    match &s.tok {
        Tok::Quoted(n) | Tok::Bare(n) => Some(n),
        _ => None,
    }
}

const UNSUPPORTED: &[&str] =
    &["lambda", "dorm", "pand", "por", "spare", "wsp", "csp", "hsp", "fdep", "seq", "mutex", "vot"];

/// Parses and validates a fault tree.
pub fn parse_ft(text: &str) -> Result<FaultTree, ParseError> {
    let toks = tokenize(text)?;
    let mut builder = TreeBuilder::new();
    let mut defined = std::collections::HashSet::new();

    for stmt in toks.split_inclusive(|t| t.tok == Tok::Semi) {
        let last = stmt.last().expect("split yields non-empty chunks");
        if last.tok != Tok::Semi {
            return Err(syntax(last, "missing `;` at end of declaration"));
        }
        let body = &stmt[..stmt.len() - 1];
        let Some(head) = body.first() else {
            return Err(syntax(last, "empty declaration"));
        };

        if head.tok == Tok::Bare("toplevel".into()) {
            match body {
                [_, n] if name_of(n).is_some() => {
                    builder.toplevel(name_of(n).unwrap());
                }
                _ => return Err(syntax(head, "expected `toplevel <name>;`")),
            }
            continue;
        }

        let name = name_of(head).ok_or_else(|| syntax(head, "expected a node name"))?;
        if !defined.insert(name.to_owned()) {
            return Err(ParseError::Duplicate { line: head.line, col: head.col, name: name.to_owned() });
        }
        let Some(kw) = body.get(1) else {
            return Err(syntax(head, format!("declaration of \"{name}\" has no body")));
        };
        let Tok::Bare(word) = &kw.tok else {
            return Err(syntax(kw, "expected `and`, `or` or `prob=`"));
        };
        let lower = word.to_ascii_lowercase();
        match lower.as_str() {
            "and" | "or" => {
                let kind = if lower == "and" { GateKind::And } else { GateKind::Or };
                let mut children = Vec::with_capacity(body.len() - 2);
                for c in &body[2..] {
                    match &c.tok {
                        Tok::Quoted(n) | Tok::Bare(n) => children.push(n.clone()),
                        _ => return Err(syntax(c, "expected a child name")),
                    }
                }
                if children.is_empty() {
                    return Err(TreeError::EmptyGate(name.to_owned()).into());
                }
                builder.gate(name, kind, children);
            }
            "prob" => {
                let value = match &body[2..] {
                    [eq, v] if eq.tok == Tok::Eq => v,
                    _ => return Err(syntax(kw, "expected `prob=<decimal>`")),
                };
                let Tok::Bare(text) = &value.tok else {
                    return Err(syntax(value, "expected a decimal probability"));
                };
                let p = Prob::parse_decimal(text)
                    .ok_or_else(|| syntax(value, format!("malformed probability `{text}`")))?;
                builder.basic_event(name, p);
            }
            w if UNSUPPORTED.contains(&w) || is_voting(w) => {
                return Err(ParseError::Unsupported { line: kw.line, col: kw.col, what: word.clone() });
            }
            _ => return Err(syntax(kw, format!("unknown keyword `{word}`"))),
        }
    }
    Ok(builder.build_fault_tree()?)
}

fn is_voting(w: &str) -> bool {
    w.split_once("of")
        .is_some_and(|(k, n)| !k.is_empty() && !n.is_empty() && k.bytes().chain(n.bytes()).all(|b| b.is_ascii_digit()))
}

/// Writes the tree back out: toplevel, gates in topological order, then basic
/// events by name. The output is deterministic and parses back to an
/// isomorphic tree.
pub fn serialize_ft(t: &FaultTree) -> String {
    serialize_dag(t.as_dag())
}

fn serialize_dag(t: &Dag) -> String {
    let mut out = String::new();
    writeln!(out, "toplevel \"{}\";", t.name(t.root())).unwrap();
    for &v in t.topo_order() {
        let kw = match t.kind(v) {
            GateKind::And => "and",
            GateKind::Or => "or",
            _ => continue,
        };
        write!(out, "\"{}\" {kw}", t.name(v)).unwrap();
        for &c in t.children(v) {
            write!(out, " \"{}\"", t.name(c)).unwrap();
        }
        out.push_str(";\n");
    }
    let mut bes = t.basic_events();
    bes.sort_by(|&a, &b| t.name(a).cmp(t.name(b)));
    for v in bes {
        writeln!(out, "\"{}\" prob={};", t.name(v), t.prob(v).expect("BE has a probability")).unwrap();
    }
    out
}
