//! Concrete syntax.
//!
//! Formulas: `~` `&` `|` `->` `<->`, `K<i>` for agent knowledge, `E` for
//! "everybody knows" (expanded away at parse time), `True` / `False`, and
//! atoms matching `[a-z][a-zA-Z0-9_]*`. Unary operators bind tightest, then
//! `&`, `|`, `->`, `<->`; the binary connectives associate to the right.
//!
//! Scenario files are line oriented:
//!
//! ```text
//! # two children, both muddy
//! agents: 2
//! atoms: m1 m2
//! assume-ck: K1 m2 | K1 ~m2
//! assume: m1 & m2
//! goal: K1 m1
//! ```
//!
//! `agents:` is required, `atoms:` optional (empty signature), `assume:` and
//! `assume-ck:` may repeat and keep their order, `goal:` may appear once and
//! is surfaced to callers as a default query without being part of the
//! scenario itself. `#` starts a comment, blank lines are skipped, and both
//! `\n` and `\r\n` line endings work.

use std::fmt;

use crate::formula::{
    expand_everybody, is_atom_name, Assumption, Formula, Scenario, SurfaceFormula,
};

/// Error position in the parsed text; `line` and `column` are 1-based and
/// count characters, `length` is at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: u32,
    pub column: u32,
    pub length: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    fn new(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            span,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    fn expecting(span: SourceSpan, message: impl Into<String>, expected: &[&str]) -> Self {
        ParseError {
            span,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.span.line, self.span.column, self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokenKind {
    Ident(String),
    Knows(u32),
    Everybody,
    True,
    False,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    LParen,
    RParen,
    Eof,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Ident(name) => format!("atom `{name}`"),
            TokenKind::Knows(i) => format!("`K{i}`"),
            TokenKind::Everybody => "`E`".into(),
            TokenKind::True => "`True`".into(),
            TokenKind::False => "`False`".into(),
            TokenKind::Tilde => "`~`".into(),
            TokenKind::Amp => "`&`".into(),
            TokenKind::Pipe => "`|`".into(),
            TokenKind::Arrow => "`->`".into(),
            TokenKind::DArrow => "`<->`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    span: SourceSpan,
}

fn lex(text: &str, line: u32, col_offset: u32) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0usize;
    let span_at = |start: usize, len: usize| SourceSpan {
        line,
        column: col_offset + start as u32,
        length: len.max(1) as u32,
    };
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '~' => {
                tokens.push(Token {
                    kind: TokenKind::Tilde,
                    span: span_at(i, 1),
                });
                i += 1;
            }
            '&' => {
                tokens.push(Token {
                    kind: TokenKind::Amp,
                    span: span_at(i, 1),
                });
                i += 1;
            }
            '|' => {
                tokens.push(Token {
                    kind: TokenKind::Pipe,
                    span: span_at(i, 1),
                });
                i += 1;
            }
            '(' => {
                tokens.push(Token {
                    kind: TokenKind::LParen,
                    span: span_at(i, 1),
                });
                i += 1;
            }
            ')' => {
                tokens.push(Token {
                    kind: TokenKind::RParen,
                    span: span_at(i, 1),
                });
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    tokens.push(Token {
                        kind: TokenKind::Arrow,
                        span: span_at(i, 2),
                    });
                    i += 2;
                } else {
                    return Err(ParseError::new(span_at(i, 1), "stray `-`, did you mean `->`?"));
                }
            }
            '<' => {
                if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
                    tokens.push(Token {
                        kind: TokenKind::DArrow,
                        span: span_at(i, 3),
                    });
                    i += 3;
                } else {
                    return Err(ParseError::new(
                        span_at(i, 1),
                        "stray `<`, did you mean `<->`?",
                    ));
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let len = i - start;
                let kind = if is_atom_name(&word) {
                    TokenKind::Ident(word)
                } else if word == "E" {
                    TokenKind::Everybody
                } else if word == "True" {
                    TokenKind::True
                } else if word == "False" {
                    TokenKind::False
                } else if let Some(rest) = word.strip_prefix('K') {
                    if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                        match rest.parse::<u32>() {
                            Ok(idx) => TokenKind::Knows(idx),
                            Err(_) => {
                                return Err(ParseError::new(
                                    span_at(start, len),
                                    format!("agent index `{rest}` is too large"),
                                ))
                            }
                        }
                    } else {
                        return Err(ParseError::new(
                            span_at(start, len),
                            format!("unrecognized token `{word}`"),
                        ));
                    }
                } else {
                    return Err(ParseError::new(
                        span_at(start, len),
                        format!("unrecognized token `{word}`"),
                    ));
                };
                tokens.push(Token {
                    kind,
                    span: span_at(start, len),
                });
            }
            other => {
                return Err(ParseError::new(
                    span_at(i, 1),
                    format!("unexpected character `{other}`"),
                ));
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: span_at(chars.len(), 1),
    });
    Ok(tokens)
}

const PRIMARY_EXPECTED: &[&str] = &["an atom", "`~`", "`K<i>`", "`E`", "`True`", "`False`", "`(`"];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    agent_count: u32,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn iff(&mut self) -> Result<SurfaceFormula, ParseError> {
        let left = self.implies()?;
        if self.peek().kind == TokenKind::DArrow {
            self.bump();
            let right = self.iff()?;
            Ok(SurfaceFormula::Iff(Box::new(left), Box::new(right)))
        } else {
            Ok(left)
        }
    }

    fn implies(&mut self) -> Result<SurfaceFormula, ParseError> {
        let left = self.or()?;
        if self.peek().kind == TokenKind::Arrow {
            self.bump();
            let right = self.implies()?;
            Ok(SurfaceFormula::Implies(Box::new(left), Box::new(right)))
        } else {
            Ok(left)
        }
    }

    fn or(&mut self) -> Result<SurfaceFormula, ParseError> {
        let left = self.and()?;
        if self.peek().kind == TokenKind::Pipe {
            self.bump();
            let right = self.or()?;
            Ok(SurfaceFormula::Or(Box::new(left), Box::new(right)))
        } else {
            Ok(left)
        }
    }

    fn and(&mut self) -> Result<SurfaceFormula, ParseError> {
        let left = self.unary()?;
        if self.peek().kind == TokenKind::Amp {
            self.bump();
            let right = self.and()?;
            Ok(SurfaceFormula::And(Box::new(left), Box::new(right)))
        } else {
            Ok(left)
        }
    }

    fn unary(&mut self) -> Result<SurfaceFormula, ParseError> {
        let token = self.bump();
        match token.kind {
            TokenKind::Tilde => Ok(SurfaceFormula::Not(Box::new(self.unary()?))),
            TokenKind::Knows(index) => {
                if index == 0 || index > self.agent_count {
                    return Err(ParseError::new(
                        token.span,
                        format!(
                            "agent index {index} out of range (have {} agents)",
                            self.agent_count
                        ),
                    ));
                }
                Ok(SurfaceFormula::Knows(
                    crate::formula::AgentId::new(index),
                    Box::new(self.unary()?),
                ))
            }
            TokenKind::Everybody => Ok(SurfaceFormula::Everybody(Box::new(self.unary()?))),
            TokenKind::True => Ok(SurfaceFormula::Top),
            TokenKind::False => Ok(SurfaceFormula::Bottom),
            TokenKind::Ident(name) => Ok(SurfaceFormula::Atom(name)),
            TokenKind::LParen => {
                let inner = self.iff()?;
                let close = self.bump();
                if close.kind != TokenKind::RParen {
                    return Err(ParseError::expecting(
                        close.span,
                        format!("unexpected {}", close.kind.describe()),
                        &["`)`"],
                    ));
                }
                Ok(inner)
            }
            other => Err(ParseError::expecting(
                token.span,
                format!("unexpected {}", other.describe()),
                PRIMARY_EXPECTED,
            )),
        }
    }
}

fn parse_surface_at(
    text: &str,
    agent_count: u32,
    line: u32,
    col_offset: u32,
) -> Result<SurfaceFormula, ParseError> {
    let tokens = lex(text, line, col_offset)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        agent_count,
    };
    let formula = parser.iff()?;
    let trailing = parser.peek();
    if trailing.kind != TokenKind::Eof {
        return Err(ParseError::expecting(
            trailing.span,
            format!("unexpected {}", trailing.kind.describe()),
            &["end of input"],
        ));
    }
    Ok(formula)
}

fn parse_formula_at(
    text: &str,
    agent_count: u32,
    line: u32,
    col_offset: u32,
) -> Result<Formula, ParseError> {
    let surface = parse_surface_at(text, agent_count, line, col_offset)?;
    Ok(expand_everybody(&surface, agent_count))
}

/// Parses a single formula for a system of `agent_count` agents. The `E`
/// macro is already expanded in the result.
pub fn parse_formula(text: &str, agent_count: u32) -> Result<Formula, ParseError> {
    parse_formula_at(text, agent_count, 1, 1)
}

/// A parsed scenario file together with its optional `goal:` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioFile {
    pub scenario: Scenario,
    pub goal: Option<Formula>,
}

/// Parses a scenario file, keeping the `goal:` line (if any) alongside.
pub fn parse_scenario_file(text: &str) -> Result<ScenarioFile, ParseError> {
    enum Pending {
        Plain(String, u32, u32),
        CommonKnowledge(String, u32, u32),
        Goal(String, u32, u32),
    }

    let mut agent_count: Option<u32> = None;
    let mut atoms: Option<Vec<String>> = None;
    let mut pending: Vec<Pending> = Vec::new();
    let mut goal_seen = false;

    for (idx, raw_line) in text.split('\n').enumerate() {
        let line_no = idx as u32 + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        if line.trim().is_empty() {
            continue;
        }
        let indent = line.chars().take_while(|c| *c == ' ' || *c == '\t').count() as u32;
        let trimmed = line.trim();
        let span_line = |col: u32, len: usize| SourceSpan {
            line: line_no,
            column: col,
            length: len.max(1) as u32,
        };
        let Some(colon) = trimmed.find(':') else {
            return Err(ParseError::expecting(
                span_line(indent + 1, trimmed.chars().count()),
                "line has no directive",
                &["`agents:`", "`atoms:`", "`assume:`", "`assume-ck:`", "`goal:`"],
            ));
        };
        let key = &trimmed[..colon];
        let value = trimmed[colon + 1..].trim();
        // column where the value starts, 1-based in the original line
        let value_col = indent
            + key.chars().count() as u32
            + 2
            + trimmed[colon + 1..]
                .chars()
                .take_while(|c| *c == ' ' || *c == '\t')
                .count() as u32;
        match key {
            "agents" => {
                if agent_count.is_some() {
                    return Err(ParseError::new(
                        span_line(indent + 1, key.len()),
                        "duplicate `agents:` line",
                    ));
                }
                let n: u32 = value.parse().map_err(|_| {
                    ParseError::new(
                        span_line(value_col, value.chars().count()),
                        format!("`{value}` is not an agent count"),
                    )
                })?;
                if n == 0 {
                    return Err(ParseError::new(
                        span_line(value_col, value.chars().count()),
                        "need at least one agent",
                    ));
                }
                agent_count = Some(n);
            }
            "atoms" => {
                if atoms.is_some() {
                    return Err(ParseError::new(
                        span_line(indent + 1, key.len()),
                        "duplicate `atoms:` line",
                    ));
                }
                let mut list = Vec::new();
                for name in value.split(|c: char| c.is_whitespace() || c == ',') {
                    if name.is_empty() {
                        continue;
                    }
                    if !is_atom_name(name) {
                        return Err(ParseError::new(
                            span_line(value_col, value.chars().count()),
                            format!("`{name}` is not a valid atom name"),
                        ));
                    }
                    if list.iter().any(|a| a == name) {
                        return Err(ParseError::new(
                            span_line(value_col, value.chars().count()),
                            format!("atom `{name}` declared twice"),
                        ));
                    }
                    list.push(name.to_string());
                }
                atoms = Some(list);
            }
            "assume" => {
                pending.push(Pending::Plain(value.to_string(), line_no, value_col));
            }
            "assume-ck" => {
                pending.push(Pending::CommonKnowledge(value.to_string(), line_no, value_col));
            }
            "goal" => {
                if goal_seen {
                    return Err(ParseError::new(
                        span_line(indent + 1, key.len()),
                        "duplicate `goal:` line",
                    ));
                }
                goal_seen = true;
                pending.push(Pending::Goal(value.to_string(), line_no, value_col));
            }
            other => {
                return Err(ParseError::expecting(
                    span_line(indent + 1, other.chars().count().max(1)),
                    format!("unknown directive `{other}:`"),
                    &["`agents:`", "`atoms:`", "`assume:`", "`assume-ck:`", "`goal:`"],
                ));
            }
        }
    }

    let Some(agent_count) = agent_count else {
        return Err(ParseError::new(
            SourceSpan {
                line: 1,
                column: 1,
                length: 1,
            },
            "missing `agents:` line",
        ));
    };
    let atoms = atoms.unwrap_or_default();

    let mut assumptions = Vec::new();
    let mut goal = None;
    for entry in pending {
        let (text, line_no, col, kind) = match &entry {
            Pending::Plain(t, l, c) => (t, *l, *c, 0),
            Pending::CommonKnowledge(t, l, c) => (t, *l, *c, 1),
            Pending::Goal(t, l, c) => (t, *l, *c, 2),
        };
        let formula = parse_formula_at(text, agent_count, line_no, col)?;
        for atom in formula.atoms() {
            if !atoms.iter().any(|a| a == atom) {
                return Err(ParseError::new(
                    SourceSpan {
                        line: line_no,
                        column: col,
                        length: text.chars().count().max(1) as u32,
                    },
                    format!("`{atom}` is not a declared atom"),
                ));
            }
        }
        match kind {
            0 => assumptions.push(Assumption::plain(formula)),
            1 => assumptions.push(Assumption::common_knowledge(formula)),
            _ => goal = Some(formula),
        }
    }

    let scenario = Scenario::new(agent_count, atoms, assumptions).map_err(|e| {
        ParseError::new(
            SourceSpan {
                line: 1,
                column: 1,
                length: 1,
            },
            e.to_string(),
        )
    })?;
    Ok(ScenarioFile { scenario, goal })
}

/// Parses a scenario file, discarding any `goal:` line.
pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    parse_scenario_file(text).map(|f| f.scenario)
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Iff(_, _) => 1,
        Formula::Implies(_, _) => 2,
        Formula::Or(_, _) => 3,
        Formula::And(_, _) => 4,
        _ => 5,
    }
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(name) => out.push_str(name),
        Formula::Top => out.push_str("True"),
        Formula::Bottom => out.push_str("False"),
        Formula::Not(g) => {
            out.push('~');
            write_operand(g, out);
        }
        Formula::Knows(i, g) => {
            out.push('K');
            out.push_str(&i.index().to_string());
            out.push(' ');
            write_operand(g, out);
        }
        Formula::And(a, b) => write_binary(a, " & ", b, 4, out),
        Formula::Or(a, b) => write_binary(a, " | ", b, 3, out),
        Formula::Implies(a, b) => write_binary(a, " -> ", b, 2, out),
        Formula::Iff(a, b) => write_binary(a, " <-> ", b, 1, out),
    }
}

fn write_operand(g: &Formula, out: &mut String) {
    if precedence(g) == 5 {
        write_formula(g, out);
    } else {
        out.push('(');
        write_formula(g, out);
        out.push(')');
    }
}

fn write_binary(a: &Formula, op: &str, b: &Formula, own: u8, out: &mut String) {
    // right-associative: a left child at the same level needs parentheses,
    // a right child does not
    if precedence(a) <= own {
        out.push('(');
        write_formula(a, out);
        out.push(')');
    } else {
        write_formula(a, out);
    }
    out.push_str(op);
    if precedence(b) < own {
        out.push('(');
        write_formula(b, out);
        out.push(')');
    } else {
        write_formula(b, out);
    }
}

/// Formula as concrete syntax with the fewest parentheses that parse back to
/// the same tree.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

/// Scenario as a loadable file. `goal:` lines are a file-level extra and are
/// not part of [`Scenario`], so none is emitted.
pub fn render_scenario(s: &Scenario) -> String {
    let mut out = String::new();
    out.push_str(&format!("agents: {}\n", s.agent_count()));
    out.push_str("atoms:");
    for atom in s.atoms() {
        out.push(' ');
        out.push_str(atom);
    }
    out.push('\n');
    for assumption in s.assumptions() {
        let key = match assumption.mode {
            crate::formula::AssumptionMode::Plain => "assume",
            crate::formula::AssumptionMode::CommonKnowledge => "assume-ck",
        };
        out.push_str(&format!("{key}: {}\n", render(&assumption.formula)));
    }
    out
}
