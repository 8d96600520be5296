//! Recursive-descent parser and scope checker.

use num_complex::Complex64;

use crate::error::{QwpError, Result};
use crate::qpl::ast::{Builtin, Decl, Kind, Pos, Program, Stmt, StmtKind, UnitaryRef};
use crate::qpl::lexer::{tokenize, Tok, Token};

/// Parses and scope-checks a program.
pub fn parse(src: &str) -> Result<Program> {
    let program = parse_unchecked(src)?;
    check_scope(&program)?;
    Ok(program)
}

/// Parses without the scope pass.
pub fn parse_unchecked(src: &str) -> Result<Program> {
    let mut p = Parser {
        toks: tokenize(src)?,
        i: 0,
    };
    p.program()
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T> {
        let found = self.peek().describe();
        let pos = self.pos();
        Err(QwpError::Syntax {
            line: pos.line,
            col: pos.col,
            message: format!("unexpected {found}"),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn fail_msg<T>(&self, pos: Pos, message: String) -> Result<T> {
        Err(QwpError::Syntax {
            line: pos.line,
            col: pos.col,
            message,
            expected: Vec::new(),
        })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Keyword(x) if *x == k)
    }

    fn sym(&mut self, s: &'static str) -> Result<()> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            self.fail(&[&format!("`{s}`")])
        }
    }

    fn kw(&mut self, k: &'static str) -> Result<()> {
        if self.is_kw(k) {
            self.bump();
            Ok(())
        } else {
            self.fail(&[&format!("`{k}`")])
        }
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Tok::Newline) || self.is_sym(";") {
            self.bump();
        }
    }

    fn skip_newlines(&mut self) {
        while matches!(self.peek(), Tok::Newline) {
            self.bump();
        }
    }

    fn variable(&mut self) -> Result<(String, Pos)> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(name) => {
                if Builtin::from_name(&name).is_some() {
                    return self.fail_msg(pos, format!("`{name}` is a reserved unitary name"));
                }
                self.bump();
                Ok((name, pos))
            }
            _ => self.fail(&["identifier"]),
        }
    }

    fn variables(&mut self) -> Result<Vec<String>> {
        let mut names = vec![self.variable()?.0];
        while self.is_sym(",") {
            self.bump();
            names.push(self.variable()?.0);
        }
        Ok(names)
    }

    fn bit_value(&mut self) -> Result<bool> {
        match self.peek() {
            Tok::Int(0) => {
                self.bump();
                Ok(false)
            }
            Tok::Int(1) => {
                self.bump();
                Ok(true)
            }
            _ => self.fail(&["`0`", "`1`"]),
        }
    }

    fn integer(&mut self) -> Result<u64> {
        match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.fail(&["integer"]),
        }
    }

    fn kind(&mut self) -> Result<Kind> {
        if self.is_kw("bit") {
            self.bump();
            Ok(Kind::Bit)
        } else if self.is_kw("qbit") {
            self.bump();
            Ok(Kind::Qbit)
        } else {
            self.fail(&["`bit`", "`qbit`"])
        }
    }

    fn end_of_statement(&mut self, closer: Option<&str>) -> Result<()> {
        match self.peek() {
            Tok::Newline | Tok::Eof => Ok(()),
            Tok::Sym(";") => Ok(()),
            Tok::Sym(s) if Some(*s) == closer => Ok(()),
            _ => {
                let mut expected = vec!["end of line", "`;`"];
                if let Some(c) = closer {
                    expected.push(if c == "}" { "`}`" } else { c });
                }
                self.fail(&expected)
            }
        }
    }

    fn program(&mut self) -> Result<Program> {
        let mut inputs = Vec::new();
        self.skip_separators();
        while self.is_kw("input") {
            let pos = self.pos();
            self.bump();
            let kind = self.kind()?;
            loop {
                let (name, npos) = self.variable()?;
                inputs.push(Decl {
                    name,
                    kind,
                    pos: if inputs.is_empty() { pos } else { npos },
                });
                if !self.is_sym(",") {
                    break;
                }
                self.bump();
            }
            self.end_of_statement(None)?;
            self.skip_separators();
        }
        let body = self.statements(None)?;
        if !matches!(self.peek(), Tok::Eof) {
            return self.fail(&["statement", "end of input"]);
        }
        Ok(Program { inputs, body })
    }

    fn statements(&mut self, closer: Option<&str>) -> Result<Vec<Stmt>> {
        let mut out = Vec::new();
        loop {
            self.skip_separators();
            match self.peek() {
                Tok::Eof => break,
                Tok::Sym(s) if Some(*s) == closer => break,
                _ => {}
            }
            if self.is_kw("input") {
                let pos = self.pos();
                return self.fail_msg(pos, "input declarations must precede all statements".into());
            }
            out.push(self.statement()?);
            self.end_of_statement(closer)?;
        }
        Ok(out)
    }

    fn block(&mut self) -> Result<Vec<Stmt>> {
        self.sym("{")?;
        let body = self.statements(Some("}"))?;
        self.sym("}")?;
        Ok(body)
    }

    fn statement(&mut self) -> Result<Stmt> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Keyword("new") => {
                self.bump();
                let kind = self.kind()?;
                let (name, _) = self.variable()?;
                self.sym(":=")?;
                let value = self.bit_value()?;
                match kind {
                    Kind::Bit => StmtKind::NewBit { name, value },
                    Kind::Qbit => StmtKind::NewQbit { name, value },
                }
            }
            Tok::Keyword("measure") => {
                self.bump();
                let names = self.variables()?;
                if self.is_sym("{") {
                    if names.len() != 1 {
                        return self.fail_msg(pos, "a branching measure takes one qubit".into());
                    }
                    let zero = self.block()?;
                    self.skip_newlines();
                    self.kw("else")?;
                    let one = self.block()?;
                    StmtKind::Branch {
                        qbit: names.into_iter().next().unwrap(),
                        zero,
                        one,
                    }
                } else {
                    StmtKind::Measure { qbits: names }
                }
            }
            Tok::Keyword("merge") => {
                self.bump();
                StmtKind::Merge
            }
            Tok::Keyword("discard") => {
                self.bump();
                StmtKind::Discard {
                    name: self.variable()?.0,
                }
            }
            Tok::Keyword("repeat") => {
                self.bump();
                let npos = self.pos();
                let count = usize::try_from(self.integer()?)
                    .or_else(|_| self.fail_msg(npos, "repeat count is too large".into()))?;
                StmtKind::Repeat {
                    count,
                    body: self.block()?,
                }
            }
            Tok::Keyword("while") => {
                self.bump();
                let (bit, _) = self.variable()?;
                StmtKind::While {
                    bit,
                    body: self.block()?,
                }
            }
            Tok::Keyword("rec") => {
                self.bump();
                let (name, _) = self.variable()?;
                StmtKind::Rec {
                    name,
                    body: self.block()?,
                }
            }
            Tok::Keyword("call") => {
                self.bump();
                StmtKind::Call {
                    name: self.variable()?.0,
                }
            }
            Tok::Ident(_) => {
                let targets = self.variables()?;
                if self.is_sym(":=") {
                    if targets.len() != 1 {
                        return self.fail_msg(pos, "assignment takes one bit".into());
                    }
                    self.bump();
                    StmtKind::Assign {
                        name: targets.into_iter().next().unwrap(),
                        value: self.bit_value()?,
                    }
                } else if self.is_sym("*=") {
                    self.bump();
                    StmtKind::Apply {
                        targets,
                        unitary: self.unitary()?,
                    }
                } else {
                    return self.fail(&["`:=`", "`*=`", "`,`"]);
                }
            }
            _ => {
                return self.fail(&[
                    "`new`", "`measure`", "`merge`", "`discard`", "`repeat`", "`while`", "`rec`",
                    "`call`", "identifier",
                ])
            }
        };
        Ok(Stmt { kind, pos })
    }

    fn unitary(&mut self) -> Result<UnitaryRef> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(name) => {
                let Some(op) = Builtin::from_name(&name) else {
                    let names: Vec<String> =
                        Builtin::ALL.iter().map(|b| format!("`{}`", b.name())).collect();
                    return Err(QwpError::Syntax {
                        line: pos.line,
                        col: pos.col,
                        message: format!("unknown unitary `{name}`"),
                        expected: names.into_iter().chain(["matrix literal".into()]).collect(),
                    });
                };
                self.bump();
                let mut args = Vec::new();
                if op.arity() > 0 {
                    self.sym("(")?;
                    for k in 0..op.arity() {
                        if k > 0 {
                            self.sym(",")?;
                        }
                        args.push(self.integer()?);
                    }
                    self.sym(")")?;
                }
                Ok(UnitaryRef::Builtin { op, args })
            }
            Tok::Sym("[") => {
                self.bump();
                let mut rows = vec![self.row()?];
                while self.is_sym(",") {
                    self.bump();
                    rows.push(self.row()?);
                }
                self.sym("]")?;
                Ok(UnitaryRef::Literal(rows))
            }
            _ => self.fail(&["unitary name", "matrix literal"]),
        }
    }

    fn row(&mut self) -> Result<Vec<Complex64>> {
        self.sym("[")?;
        let mut row = vec![self.scalar()?];
        while self.is_sym(",") {
            self.bump();
            row.push(self.scalar()?);
        }
        self.sym("]")?;
        Ok(row)
    }

    fn scalar(&mut self) -> Result<Complex64> {
        if self.is_sym("(") {
            self.bump();
            let re = self.real()?;
            self.sym(",")?;
            let im = self.real()?;
            self.sym(")")?;
            Ok(Complex64::new(re, im))
        } else {
            Ok(Complex64::new(self.real()?, 0.0))
        }
    }

    fn real(&mut self) -> Result<f64> {
        let mut sign = 1.0;
        if self.is_sym("-") {
            self.bump();
            sign = -1.0;
        } else if self.is_sym("+") {
            self.bump();
        }
        match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                Ok(sign * n as f64)
            }
            Tok::Float(x) => {
                self.bump();
                Ok(sign * x)
            }
            _ => self.fail(&["number"]),
        }
    }
}

fn scope_error(pos: Pos, message: String) -> QwpError {
    QwpError::Scope {
        line: pos.line,
        col: pos.col,
        message,
    }
}

/// Every variable is declared before use and not redeclared while live;
/// `call` names an enclosing `rec`.
pub fn check_scope(p: &Program) -> Result<()> {
    let mut live: Vec<String> = Vec::new();
    for d in &p.inputs {
        if live.contains(&d.name) {
            return Err(scope_error(d.pos, format!("input `{}` declared twice", d.name)));
        }
        live.push(d.name.clone());
    }
    let mut recs = Vec::new();
    scope_block(&p.body, &mut live, &mut recs)
}

fn scope_block(stmts: &[Stmt], live: &mut Vec<String>, recs: &mut Vec<String>) -> Result<()> {
    for s in stmts {
        scope_stmt(s, live, recs)?;
    }
    Ok(())
}

fn scope_stmt(s: &Stmt, live: &mut Vec<String>, recs: &mut Vec<String>) -> Result<()> {
    let used = |name: &str, live: &Vec<String>| {
        if live.iter().any(|n| n == name) {
            Ok(())
        } else {
            Err(scope_error(s.pos, format!("`{name}` is not in scope")))
        }
    };
    match &s.kind {
        StmtKind::NewBit { name, .. } | StmtKind::NewQbit { name, .. } => {
            if live.contains(name) {
                return Err(scope_error(s.pos, format!("`{name}` is already in scope")));
            }
            live.insert(0, name.clone());
        }
        StmtKind::Assign { name, .. } => used(name, live)?,
        StmtKind::Apply { targets, .. } => {
            for t in targets {
                used(t, live)?;
            }
        }
        StmtKind::Measure { qbits } => {
            for q in qbits {
                used(q, live)?;
            }
        }
        StmtKind::Branch { qbit, zero, one } => {
            used(qbit, live)?;
            let mut other = live.clone();
            scope_block(zero, live, recs)?;
            scope_block(one, &mut other, recs)?;
        }
        StmtKind::Merge => {}
        StmtKind::Discard { name } => {
            used(name, live)?;
            live.retain(|n| n != name);
        }
        StmtKind::Repeat { body, .. } => scope_block(body, live, recs)?,
        StmtKind::While { bit, body } => {
            used(bit, live)?;
            scope_block(body, live, recs)?;
        }
        StmtKind::Rec { name, body } => {
            recs.push(name.clone());
            let r = scope_block(body, live, recs);
            recs.pop();
            r?;
        }
        StmtKind::Call { name } => {
            if !recs.contains(name) {
                return Err(scope_error(s.pos, format!("`call {name}` outside a `rec {name}` block")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(p: &Program) -> Vec<&'static str> {
        p.body
            .iter()
            .map(|s| match s.kind {
                StmtKind::NewBit { .. } => "NewBit",
                StmtKind::NewQbit { .. } => "NewQbit",
                StmtKind::Assign { .. } => "Assign",
                StmtKind::Apply { .. } => "Apply",
                StmtKind::Measure { .. } => "Measure",
                StmtKind::Branch { .. } => "Branch",
                StmtKind::Merge => "Merge",
                StmtKind::Discard { .. } => "Discard",
                StmtKind::Repeat { .. } => "Repeat",
                StmtKind::While { .. } => "While",
                StmtKind::Rec { .. } => "Rec",
                StmtKind::Call { .. } => "Call",
            })
            .collect()
    }

    #[test]
    fn coin_program() {
        let p = parse("new qbit q := 0\nq *= H\nmeasure q\ndiscard q\n").unwrap();
        assert_eq!(kinds(&p), ["NewQbit", "Apply", "Measure", "Discard"]);
        match &p.body[1].kind {
            StmtKind::Apply { targets, unitary } => {
                assert_eq!(targets, &["q"]);
                assert_eq!(
                    unitary,
                    &UnitaryRef::Builtin {
                        op: Builtin::H,
                        args: vec![]
                    }
                );
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(p.body[2].pos, Pos { line: 3, col: 1 });
    }

    #[test]
    fn empty_and_comments() {
        assert!(parse("").unwrap().is_empty());
        assert!(parse("\n# nothing\n;;\n").unwrap().is_empty());
    }

    #[test]
    fn scope_errors() {
        assert!(matches!(parse("q *= H"), Err(QwpError::Scope { line: 1, col: 1, .. })));
        assert!(matches!(
            parse("new bit b := 0; new bit b := 1"),
            Err(QwpError::Scope { .. })
        ));
        assert!(matches!(parse("call f"), Err(QwpError::Scope { .. })));
        assert!(matches!(
            parse("input qbit q; discard q; q *= X"),
            Err(QwpError::Scope { .. })
        ));
        assert!(matches!(parse("input bit a, a"), Err(QwpError::Scope { .. })));
    }

    #[test]
    fn syntax_errors_carry_expectations() {
        match parse("new qbit q := 2") {
            Err(QwpError::Syntax {
                line: 1,
                col: 15,
                expected,
                ..
            }) => assert_eq!(expected, ["`0`", "`1`"]),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("input qbit H"), Err(QwpError::Syntax { .. })));
        assert!(matches!(parse("input qbit q\nq *= Foo"), Err(QwpError::Syntax { .. })));
        assert!(matches!(parse("input qbit q\nmeasure q { }"), Err(QwpError::Syntax { .. })));
        assert!(matches!(
            parse("new bit b := 0\ninput qbit q"),
            Err(QwpError::Syntax { line: 2, .. })
        ));
        assert!(matches!(parse("input qbit q\nq *= H H"), Err(QwpError::Syntax { .. })));
    }

    #[test]
    fn structured_statements() {
        let src = "input qbit q
new bit b := 1
while b {
    q *= [[0, 1], [1, 0]]
    new qbit c := 0
    c *= H
    measure c {
        b := 0
    }
    else { }
    discard c
}
discard b
rec f { q *= GroverG(1, 0); measure q { } else { call f } }
repeat 3 { q *= Oracle(1, 1) }
";
        let p = parse(src).unwrap();
        assert_eq!(p.inputs.len(), 1);
        assert_eq!(kinds(&p), ["NewBit", "While", "Discard", "Rec", "Repeat"]);
        match &p.body[1].kind {
            StmtKind::While { body, .. } => match &body[0].kind {
                StmtKind::Apply {
                    unitary: UnitaryRef::Literal(rows),
                    ..
                } => assert_eq!(rows[0][1], Complex64::new(1.0, 0.0)),
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn register_measure_expands() {
        let p = parse("input qbit a, b\nmeasure a, b").unwrap();
        match &p.body[0].kind {
            StmtKind::Measure { qbits } => assert_eq!(qbits, &["a", "b"]),
            other => panic!("{other:?}"),
        }
    }
}
