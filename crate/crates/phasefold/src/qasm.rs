//! OpenQASM 2.0 reader and writer for the supported gate set.
//!
//! Accepted programs: the `OPENQASM 2.0;` header, an optional
//! `include "qelib1.inc";`, one or more `qreg name[size];` declarations, and
//! gate statements over `h`, `x`, `cx`, `t`, `tdg`, `s`, `sdg`, `z` and
//! `rz(expr)`. Registers are flattened into one wire index space in
//! declaration order. `ccx` is rejected unless
//! [`ParseOptions::decompose_ccx`] is set, in which case it is expanded into
//! the standard 15-gate form (2 H, 6 CX, 7 T/T†). Angle expressions allow
//! numeric literals, `pi`, unary minus, `*` and `/`.
//!
//! The writer always produces a single register `q`, names the common
//! rotations (`t`, `tdg`, `s`, `sdg`, `z`), prints other exact angles as
//! `n*pi/d`, and prints float angles with enough digits to round-trip
//! bit-for-bit.

use crate::angle::Angle;
use crate::circuit::{Circuit, Gate};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use thiserror::Error;

/// Parser switches.
#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept `ccx` and expand it into H/CX/T gates.
    pub decompose_ccx: bool,
}

/// What went wrong, without the position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// A statement or gate outside the supported subset.
    UnsupportedGate(String),
    /// Malformed source text.
    SyntaxError(String),
    /// A qubit reference to an unknown register or past its end.
    UndeclaredQubit(String),
    /// A rotation argument that does not evaluate to a finite angle.
    BadAngle(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnsupportedGate(name) => {
                write!(f, "unsupported gate or statement '{name}'")
            }
            ParseErrorKind::SyntaxError(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UndeclaredQubit(what) => write!(f, "undeclared qubit {what}"),
            ParseErrorKind::BadAngle(msg) => write!(f, "bad angle: {msg}"),
        }
    }
}

/// A parse failure with its 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: u32,
    pub column: u32,
}

/// Parse with default options (`ccx` rejected).
pub fn parse(source: &str) -> Result<Circuit, ParseError> {
    parse_with(source, ParseOptions::default())
}

/// Parse `source` into a flattened circuit.
pub fn parse_with(source: &str, options: ParseOptions) -> Result<Circuit, ParseError> {
    let (tokens, end) = lex(source)?;
    Parser {
        tokens,
        pos: 0,
        end,
        options,
        registers: HashMap::new(),
        total_qubits: 0,
        gates: Vec::new(),
    }
    .run()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: u32,
    column: u32,
}

impl Token {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            line: self.line,
            column: self.column,
        }
    }
}

fn lex(source: &str) -> Result<(Vec<Token>, (u32, u32)), ParseError> {
    let mut tokens = Vec::new();
    let mut chars = source.chars().peekable();
    let (mut line, mut column) = (1u32, 1u32);
    macro_rules! bump {
        () => {{
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let (tok_line, tok_column) = (line, column);
        let fail = |kind| ParseError {
            kind,
            line: tok_line,
            column: tok_column,
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '/' => {
                bump!();
                if chars.peek() == Some(&'/') {
                    while chars.peek().is_some_and(|&c| c != '\n') {
                        bump!();
                    }
                } else {
                    tokens.push(Token {
                        tok: Tok::Sym('/'),
                        line: tok_line,
                        column: tok_column,
                    });
                }
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut s = String::new();
                while chars
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
                {
                    s.push(bump!());
                }
                tokens.push(Token {
                    tok: Tok::Ident(s),
                    line: tok_line,
                    column: tok_column,
                });
            }
            '0'..='9' | '.' => {
                let mut s = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_digit() || *c == '.') {
                    s.push(bump!());
                }
                if chars.peek().is_some_and(|&c| c == 'e' || c == 'E') {
                    s.push(bump!());
                    if chars.peek().is_some_and(|&c| c == '+' || c == '-') {
                        s.push(bump!());
                    }
                    while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                        s.push(bump!());
                    }
                }
                tokens.push(Token {
                    tok: Tok::Number(s),
                    line: tok_line,
                    column: tok_column,
                });
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match chars.peek() {
                        Some('"') => {
                            bump!();
                            break;
                        }
                        Some(_) => s.push(bump!()),
                        None => {
                            return Err(fail(ParseErrorKind::SyntaxError(
                                "unterminated string literal".into(),
                            )))
                        }
                    }
                }
                tokens.push(Token {
                    tok: Tok::Str(s),
                    line: tok_line,
                    column: tok_column,
                });
            }
            ';' | ',' | '[' | ']' | '(' | ')' | '*' | '-' => {
                bump!();
                tokens.push(Token {
                    tok: Tok::Sym(c),
                    line: tok_line,
                    column: tok_column,
                });
            }
            other => {
                return Err(fail(ParseErrorKind::SyntaxError(format!(
                    "unexpected character '{other}'"
                ))))
            }
        }
    }
    Ok((tokens, (line, column)))
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Position just past the source, for end-of-file diagnostics.
    end: (u32, u32),
    options: ParseOptions,
    /// register name -> (first wire index, size)
    registers: HashMap<String, (u32, u32)>,
    total_qubits: u32,
    gates: Vec<Gate>,
}

impl Parser {
    fn run(mut self) -> Result<Circuit, ParseError> {
        self.header()?;
        while self.peek().is_some() {
            self.statement()?;
        }
        if self.total_qubits == 0 {
            return Err(self.eof_err(ParseErrorKind::SyntaxError(
                "program declares no qubits".into(),
            )));
        }
        Ok(Circuit::from_gates(self.total_qubits, self.gates))
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eof_err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            line: self.end.0,
            column: self.end.1,
        }
    }

    fn unexpected_eof(&self) -> ParseError {
        self.eof_err(ParseErrorKind::SyntaxError("unexpected end of file".into()))
    }

    fn expect_sym(&mut self, sym: char) -> Result<(), ParseError> {
        match self.next() {
            Some(t) if t.tok == Tok::Sym(sym) => Ok(()),
            Some(t) => Err(t.err(ParseErrorKind::SyntaxError(format!("expected '{sym}'")))),
            None => Err(self.unexpected_eof()),
        }
    }

    fn eat_sym(&mut self, sym: char) -> bool {
        if matches!(self.peek(), Some(t) if t.tok == Tok::Sym(sym)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Token), ParseError> {
        match self.next() {
            Some(t) => match &t.tok {
                Tok::Ident(s) => Ok((s.clone(), t)),
                _ => Err(t.err(ParseErrorKind::SyntaxError("expected an identifier".into()))),
            },
            None => Err(self.unexpected_eof()),
        }
    }

    fn expect_index(&mut self) -> Result<u32, ParseError> {
        match self.next() {
            Some(t) => match &t.tok {
                Tok::Number(s) => s.parse::<u32>().map_err(|_| {
                    t.err(ParseErrorKind::SyntaxError(format!(
                        "expected a non-negative integer, found '{s}'"
                    )))
                }),
                _ => Err(t.err(ParseErrorKind::SyntaxError(
                    "expected a non-negative integer".into(),
                ))),
            },
            None => Err(self.unexpected_eof()),
        }
    }

    fn header(&mut self) -> Result<(), ParseError> {
        let (name, tok) = self.expect_ident()?;
        if name != "OPENQASM" {
            return Err(tok.err(ParseErrorKind::SyntaxError(
                "expected 'OPENQASM 2.0;' header".into(),
            )));
        }
        match self.next() {
            Some(t) if t.tok == Tok::Number("2.0".into()) => {}
            Some(t) => {
                return Err(t.err(ParseErrorKind::SyntaxError(
                    "only OpenQASM version 2.0 is supported".into(),
                )))
            }
            None => return Err(self.unexpected_eof()),
        }
        self.expect_sym(';')
    }

    fn statement(&mut self) -> Result<(), ParseError> {
        let (name, tok) = self.expect_ident()?;
        match name.as_str() {
            "include" => self.include(),
            "qreg" => self.qreg(),
            _ => self.gate(&name, &tok),
        }
    }

    fn include(&mut self) -> Result<(), ParseError> {
        match self.next() {
            Some(t) if t.tok == Tok::Str("qelib1.inc".into()) => {}
            Some(t) => {
                return Err(t.err(ParseErrorKind::SyntaxError(
                    "only \"qelib1.inc\" can be included".into(),
                )))
            }
            None => return Err(self.unexpected_eof()),
        }
        self.expect_sym(';')
    }

    fn qreg(&mut self) -> Result<(), ParseError> {
        let (name, tok) = self.expect_ident()?;
        self.expect_sym('[')?;
        let size = self.expect_index()?;
        self.expect_sym(']')?;
        self.expect_sym(';')?;
        if size == 0 {
            return Err(tok.err(ParseErrorKind::SyntaxError(format!(
                "register '{name}' must have positive size"
            ))));
        }
        if self.registers.contains_key(&name) {
            return Err(tok.err(ParseErrorKind::SyntaxError(format!(
                "register '{name}' is already declared"
            ))));
        }
        let offset = self.total_qubits;
        self.total_qubits = offset.checked_add(size).ok_or_else(|| {
            tok.err(ParseErrorKind::SyntaxError("too many qubits".into()))
        })?;
        self.registers.insert(name, (offset, size));
        Ok(())
    }

    /// One `reg[idx]` reference, resolved to a flat wire index.
    fn operand(&mut self) -> Result<u32, ParseError> {
        let (name, tok) = self.expect_ident()?;
        self.expect_sym('[')?;
        let idx = self.expect_index()?;
        self.expect_sym(']')?;
        match self.registers.get(&name) {
            Some(&(offset, size)) if idx < size => Ok(offset + idx),
            _ => Err(tok.err(ParseErrorKind::UndeclaredQubit(format!("{name}[{idx}]")))),
        }
    }

    fn operands<const N: usize>(&mut self, gate: &str, tok: &Token) -> Result<[u32; N], ParseError> {
        let mut out = [0u32; N];
        for (i, slot) in out.iter_mut().enumerate() {
            if i > 0 {
                self.expect_sym(',')?;
            }
            *slot = self.operand()?;
        }
        self.expect_sym(';')?;
        for i in 0..N {
            for j in i + 1..N {
                if out[i] == out[j] {
                    return Err(tok.err(ParseErrorKind::SyntaxError(format!(
                        "'{gate}' operands must be distinct qubits"
                    ))));
                }
            }
        }
        Ok(out)
    }

    fn gate(&mut self, name: &str, tok: &Token) -> Result<(), ParseError> {
        match name {
            "h" => {
                let [q] = self.operands("h", tok)?;
                self.gates.push(Gate::H(q));
            }
            "x" => {
                let [q] = self.operands("x", tok)?;
                self.gates.push(Gate::X(q));
            }
            "z" => self.fixed_rotation(tok, Angle::exact(1, 1))?,
            "s" => self.fixed_rotation(tok, Angle::exact(1, 2))?,
            "sdg" => self.fixed_rotation(tok, Angle::exact(3, 2))?,
            "t" => self.fixed_rotation(tok, Angle::exact(1, 4))?,
            "tdg" => self.fixed_rotation(tok, Angle::exact(7, 4))?,
            "rz" => {
                self.expect_sym('(')?;
                let radians = self.angle_expr()?;
                self.expect_sym(')')?;
                let [q] = self.operands("rz", tok)?;
                self.gates.push(Gate::Rz(q, Angle::from_radians(radians)));
            }
            "cx" => {
                let [control, target] = self.operands("cx", tok)?;
                self.gates.push(Gate::Cx { control, target });
            }
            "ccx" if self.options.decompose_ccx => {
                let [a, b, c] = self.operands("ccx", tok)?;
                self.gates.extend(ccx_expansion(a, b, c));
            }
            other => return Err(tok.err(ParseErrorKind::UnsupportedGate(other.into()))),
        }
        Ok(())
    }

    fn fixed_rotation(&mut self, tok: &Token, angle: Angle) -> Result<(), ParseError> {
        let [q] = self.operands("rotation", tok)?;
        self.gates.push(Gate::Rz(q, angle));
        Ok(())
    }

    /// `['-'] term (('*'|'/') term)*` where term is a number or `pi`.
    fn angle_expr(&mut self) -> Result<f64, ParseError> {
        let start = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.unexpected_eof()),
        };
        let negate = self.eat_sym('-');
        let mut value = self.angle_term()?;
        loop {
            if self.eat_sym('*') {
                value *= self.angle_term()?;
            } else if self.eat_sym('/') {
                value /= self.angle_term()?;
            } else {
                break;
            }
        }
        if negate {
            value = -value;
        }
        if !value.is_finite() {
            return Err(start.err(ParseErrorKind::BadAngle(
                "expression does not evaluate to a finite angle".into(),
            )));
        }
        Ok(value)
    }

    fn angle_term(&mut self) -> Result<f64, ParseError> {
        match self.next() {
            Some(t) => match &t.tok {
                Tok::Ident(s) if s == "pi" => Ok(PI),
                Tok::Number(s) => s.parse::<f64>().map_err(|_| {
                    t.err(ParseErrorKind::BadAngle(format!("invalid numeric literal '{s}'")))
                }),
                _ => Err(t.err(ParseErrorKind::BadAngle("expected a number or 'pi'".into()))),
            },
            None => Err(self.unexpected_eof()),
        }
    }
}

/// The qelib1-style Toffoli expansion over (control a, control b, target c).
fn ccx_expansion(a: u32, b: u32, c: u32) -> [Gate; 15] {
    let t = |q| Gate::Rz(q, Angle::exact(1, 4));
    let tdg = |q| Gate::Rz(q, Angle::exact(7, 4));
    let cx = |control, target| Gate::Cx { control, target };
    [
        Gate::H(c),
        cx(b, c),
        tdg(c),
        cx(a, c),
        t(c),
        cx(b, c),
        tdg(c),
        cx(a, c),
        t(b),
        t(c),
        Gate::H(c),
        cx(a, b),
        t(a),
        tdg(b),
        cx(a, b),
    ]
}

/// Render a circuit as OpenQASM 2.0 with a single register `q`.
///
/// Parsing the output reproduces the circuit exactly: named rotations map
/// back to the same exact angles, and float angles are printed with 17
/// significant digits.
pub fn emit(circuit: &Circuit) -> String {
    let mut out = String::with_capacity(64 + 16 * circuit.len());
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", circuit.n_qubits());
    for gate in circuit.gates() {
        match *gate {
            Gate::H(q) => {
                let _ = writeln!(out, "h q[{q}];");
            }
            Gate::X(q) => {
                let _ = writeln!(out, "x q[{q}];");
            }
            Gate::Cx { control, target } => {
                let _ = writeln!(out, "cx q[{control}],q[{target}];");
            }
            Gate::Rz(q, angle) => {
                let _ = match angle {
                    Angle::Exact { num: 1, den: 4 } => writeln!(out, "t q[{q}];"),
                    Angle::Exact { num: 7, den: 4 } => writeln!(out, "tdg q[{q}];"),
                    Angle::Exact { num: 1, den: 2 } => writeln!(out, "s q[{q}];"),
                    Angle::Exact { num: 3, den: 2 } => writeln!(out, "sdg q[{q}];"),
                    Angle::Exact { num: 1, den: 1 } => writeln!(out, "z q[{q}];"),
                    Angle::Exact { num: 0, .. } => writeln!(out, "rz(0) q[{q}];"),
                    Angle::Exact { num: 1, den } => writeln!(out, "rz(pi/{den}) q[{q}];"),
                    Angle::Exact { num, den: 1 } => writeln!(out, "rz({num}*pi) q[{q}];"),
                    Angle::Exact { num, den } => writeln!(out, "rz({num}*pi/{den}) q[{q}];"),
                    Angle::Approx(r) => writeln!(out, "rz({r:.16e}) q[{q}];"),
                };
            }
        }
    }
    out
}
