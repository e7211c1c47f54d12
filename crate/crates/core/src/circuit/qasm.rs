// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

//! Reader and writer for the OpenQASM 2.0 subset used by this crate: one
//! `qreg`, gate applications of the kinds in [`GateKind`], `barrier`
//! (ignored) and comments. Angle arguments are constant expressions over
//! numbers, `pi`, `+ - * /`, unary minus and parentheses.

use std::fmt::Write as _;

use super::{Circuit, CircuitError, Gate, GateKind};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{line}:{col}: {kind}")]
pub struct QasmError {
    pub line: usize,
    pub col: usize,
    pub kind: QasmErrorKind,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QasmErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unsupported gate `{0}`")]
    UnsupportedGate(String),
    #[error("unsupported statement `{0}`")]
    UnsupportedStatement(String),
    #[error("malformed angle expression: {0}")]
    BadAngle(String),
    #[error("{0}")]
    Circuit(CircuitError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Real(f64),
    Str(String),
    Sym(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, QasmError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| QasmError { line, col, kind: QasmErrorKind::Syntax(msg) };
    while i < chars.len() {
        let ch = chars[i];
        let (start_line, start_col) = (line, col);
        let bump = |i: &mut usize, line: &mut usize, col: &mut usize| {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        };
        if ch.is_whitespace() {
            bump(&mut i, &mut line, &mut col);
        } else if ch == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                bump(&mut i, &mut line, &mut col);
            }
        } else if ch == '/' && chars.get(i + 1) == Some(&'*') {
            bump(&mut i, &mut line, &mut col);
            bump(&mut i, &mut line, &mut col);
            loop {
                if i >= chars.len() {
                    return Err(err(start_line, start_col, "unterminated block comment".into()));
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    bump(&mut i, &mut line, &mut col);
                    bump(&mut i, &mut line, &mut col);
                    break;
                }
                bump(&mut i, &mut line, &mut col);
            }
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                bump(&mut i, &mut line, &mut col);
            }
            out.push(Spanned { tok: Tok::Ident(s), line: start_line, col: start_col });
        } else if ch.is_ascii_digit() || (ch == '.' && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit())) {
            let mut s = String::new();
            let mut is_real = false;
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                bump(&mut i, &mut line, &mut col);
            }
            if i < chars.len() && chars[i] == '.' {
                is_real = true;
                s.push('.');
                bump(&mut i, &mut line, &mut col);
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    bump(&mut i, &mut line, &mut col);
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                is_real = true;
                s.push('e');
                bump(&mut i, &mut line, &mut col);
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    s.push(chars[i]);
                    bump(&mut i, &mut line, &mut col);
                }
                let digits_start = s.len();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    bump(&mut i, &mut line, &mut col);
                }
                if s.len() == digits_start {
                    return Err(err(start_line, start_col, format!("malformed number `{s}`")));
                }
            }
            let tok = if is_real {
                Tok::Real(s.parse().map_err(|_| err(start_line, start_col, format!("malformed number `{s}`")))?)
            } else {
                Tok::Int(s.parse().map_err(|_| err(start_line, start_col, format!("integer `{s}` too large")))?)
            };
            out.push(Spanned { tok, line: start_line, col: start_col });
        } else if ch == '"' {
            bump(&mut i, &mut line, &mut col);
            let mut s = String::new();
            while i < chars.len() && chars[i] != '"' {
                s.push(chars[i]);
                bump(&mut i, &mut line, &mut col);
            }
            if i >= chars.len() {
                return Err(err(start_line, start_col, "unterminated string".into()));
            }
            bump(&mut i, &mut line, &mut col);
            out.push(Spanned { tok: Tok::Str(s), line: start_line, col: start_col });
        } else if ";,[]()+-*/{}".contains(ch) {
            bump(&mut i, &mut line, &mut col);
            out.push(Spanned { tok: Tok::Sym(ch), line: start_line, col: start_col });
        } else {
            return Err(err(start_line, start_col, format!("unexpected character `{ch}`")));
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, at: &Spanned, kind: QasmErrorKind) -> QasmError {
        QasmError { line: at.line, col: at.col, kind }
    }

    fn syntax(&self, at: &Spanned, msg: impl Into<String>) -> QasmError {
        self.error_at(at, QasmErrorKind::Syntax(msg.into()))
    }

    fn expect_sym(&mut self, sym: char) -> Result<(), QasmError> {
        let t = self.next();
        if t.tok == Tok::Sym(sym) {
            Ok(())
        } else {
            Err(self.syntax(&t, format!("expected `{sym}`, found {}", describe(&t.tok))))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Spanned), QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => Err(self.syntax(&t, format!("expected identifier, found {}", describe(other)))),
        }
    }

    fn expect_int(&mut self) -> Result<u64, QasmError> {
        let t = self.next();
        match t.tok {
            Tok::Int(v) => Ok(v),
            ref other => Err(self.syntax(&t, format!("expected integer, found {}", describe(other)))),
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<f64, QasmError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Sym('+') => {
                    self.next();
                    acc += self.term()?;
                }
                Tok::Sym('-') => {
                    self.next();
                    acc -= self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := unary (('*'|'/') unary)*
    fn term(&mut self) -> Result<f64, QasmError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Sym('*') => {
                    self.next();
                    acc *= self.unary()?;
                }
                Tok::Sym('/') => {
                    self.next();
                    acc /= self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<f64, QasmError> {
        match self.peek().tok {
            Tok::Sym('-') => {
                self.next();
                Ok(-self.unary()?)
            }
            Tok::Sym('+') => {
                self.next();
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<f64, QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(v) => Ok(*v as f64),
            Tok::Real(v) => Ok(*v),
            Tok::Ident(s) if s == "pi" => Ok(std::f64::consts::PI),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            other => Err(self.error_at(&t, QasmErrorKind::BadAngle(format!("unexpected {}", describe(other))))),
        }
    }

    fn qubit_arg(&mut self, reg: &str) -> Result<(usize, Spanned), QasmError> {
        let (name, at) = self.expect_ident()?;
        if name != reg {
            return Err(self.syntax(&at, format!("unknown register `{name}`")));
        }
        if self.peek().tok != Tok::Sym('[') {
            return Err(self.syntax(self.peek(), "register broadcast is not supported; index each qubit"));
        }
        self.expect_sym('[')?;
        let idx = self.expect_int()?;
        self.expect_sym(']')?;
        Ok((idx as usize, at))
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(v) => format!("`{v}`"),
        Tok::Real(v) => format!("`{v}`"),
        Tok::Str(s) => format!("\"{s}\""),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses OpenQASM 2.0 text into a [`Circuit`].
///
/// ```
/// use qprune::circuit::{parse_qasm, GateKind};
/// let c = parse_qasm("qreg q[2]; crz(pi/6) q[0],q[1];").unwrap();
/// assert_eq!(c.gates()[0].kind(), GateKind::Crz);
/// assert!((c.gates()[0].angle().unwrap() - std::f64::consts::PI / 6.0).abs() < 1e-15);
/// ```
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let mut register: Option<(String, usize)> = None;
    let mut circuit: Option<Circuit> = None;

    if matches!(&p.peek().tok, Tok::Ident(s) if s == "OPENQASM") {
        p.next();
        let t = p.next();
        match t.tok {
            Tok::Real(v) if v == 2.0 => {}
            _ => return Err(p.syntax(&t, "only OPENQASM 2.0 is supported")),
        }
        p.expect_sym(';')?;
    }

    loop {
        let head = p.peek().clone();
        let word = match &head.tok {
            Tok::Eof => break,
            Tok::Ident(s) => s.clone(),
            other => return Err(p.syntax(&head, format!("expected statement, found {}", describe(other)))),
        };
        p.next();
        match word.as_str() {
            "include" => {
                let t = p.next();
                if !matches!(t.tok, Tok::Str(_)) {
                    return Err(p.syntax(&t, "expected file name after include"));
                }
                p.expect_sym(';')?;
            }
            "qreg" => {
                if register.is_some() {
                    return Err(p.error_at(&head, QasmErrorKind::UnsupportedStatement("second qreg".into())));
                }
                let (name, _) = p.expect_ident()?;
                p.expect_sym('[')?;
                let size = p.expect_int()? as usize;
                p.expect_sym(']')?;
                p.expect_sym(';')?;
                circuit = Some(Circuit::new("qasm", size));
                register = Some((name, size));
            }
            "barrier" => {
                let (reg, _) = register
                    .clone()
                    .ok_or_else(|| p.syntax(&head, "barrier before qreg declaration"))?;
                loop {
                    let (name, at) = p.expect_ident()?;
                    if name != reg {
                        return Err(p.syntax(&at, format!("unknown register `{name}`")));
                    }
                    if p.peek().tok == Tok::Sym('[') {
                        p.next();
                        p.expect_int()?;
                        p.expect_sym(']')?;
                    }
                    if p.peek().tok == Tok::Sym(',') {
                        p.next();
                    } else {
                        break;
                    }
                }
                p.expect_sym(';')?;
            }
            "creg" | "measure" | "reset" | "if" | "gate" | "opaque" | "U" | "CX" => {
                return Err(p.error_at(&head, QasmErrorKind::UnsupportedStatement(word)));
            }
            name => {
                let kind = GateKind::from_qasm_name(name)
                    .ok_or_else(|| p.error_at(&head, QasmErrorKind::UnsupportedGate(name.to_string())))?;
                let (reg, _) = register
                    .clone()
                    .ok_or_else(|| p.syntax(&head, "gate applied before qreg declaration"))?;
                let mut params = Vec::new();
                if p.peek().tok == Tok::Sym('(') {
                    p.next();
                    if p.peek().tok != Tok::Sym(')') {
                        params.push(p.expr()?);
                        while p.peek().tok == Tok::Sym(',') {
                            p.next();
                            params.push(p.expr()?);
                        }
                    }
                    p.expect_sym(')')?;
                }
                let expected = usize::from(kind.is_parametric());
                if params.len() != expected {
                    return Err(p.error_at(
                        &head,
                        QasmErrorKind::BadAngle(format!("`{name}` takes {expected} parameter(s), got {}", params.len())),
                    ));
                }
                if let Some(v) = params.first() {
                    if !v.is_finite() {
                        return Err(p.error_at(&head, QasmErrorKind::BadAngle(format!("`{name}` angle evaluates to {v}"))));
                    }
                }
                let mut qubits = vec![p.qubit_arg(&reg)?];
                while p.peek().tok == Tok::Sym(',') {
                    p.next();
                    qubits.push(p.qubit_arg(&reg)?);
                }
                p.expect_sym(';')?;
                let indices: Vec<usize> = qubits.iter().map(|(q, _)| *q).collect();
                let gate = Gate::new(kind, &indices, params.first().copied())
                    .map_err(|e| p.error_at(&head, QasmErrorKind::Circuit(e)))?;
                let c = circuit.as_mut().expect("register declared");
                if let Err(e) = c.push(gate) {
                    let at = match &e {
                        CircuitError::QubitOutOfRange { qubit, .. } => {
                            qubits.iter().find(|(q, _)| q == qubit).map(|(_, s)| s.clone()).unwrap_or(head)
                        }
                        _ => head,
                    };
                    return Err(p.error_at(&at, QasmErrorKind::Circuit(e)));
                }
            }
        }
    }
    circuit.ok_or(QasmError { line: 1, col: 1, kind: QasmErrorKind::Syntax("missing qreg declaration".into()) })
}

/// Writes `circuit` as OpenQASM 2.0. Angles use the shortest representation
/// that parses back to the identical `f64`.
pub fn emit_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", circuit.num_qubits());
    for g in circuit.gates() {
        let _ = writeln!(out, "{g};");
    }
    out
}
