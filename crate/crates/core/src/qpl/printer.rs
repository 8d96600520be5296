//! Canonical source printing and position-free s-expressions.

use std::fmt::Write;

use num_complex::Complex64;

use crate::qpl::ast::{Program, Stmt, StmtKind, UnitaryRef};

/// Canonical source text. Reparsing it gives a structurally identical tree;
/// real numbers use the shortest representation that round-trips.
pub fn print(p: &Program) -> String {
    let mut out = String::new();
    let mut k = 0;
    while k < p.inputs.len() {
        let kind = p.inputs[k].kind;
        let mut names = Vec::new();
        while k < p.inputs.len() && p.inputs[k].kind == kind {
            names.push(p.inputs[k].name.as_str());
            k += 1;
        }
        writeln!(out, "input {} {}", kind.keyword(), names.join(", ")).unwrap();
    }
    print_block(&mut out, &p.body, 0);
    out
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("    ");
    }
}

fn print_block(out: &mut String, stmts: &[Stmt], depth: usize) {
    for s in stmts {
        indent(out, depth);
        print_stmt(out, s, depth);
        out.push('\n');
    }
}

fn braced(out: &mut String, stmts: &[Stmt], depth: usize) {
    if stmts.is_empty() {
        out.push_str("{ }");
        return;
    }
    out.push_str("{\n");
    print_block(out, stmts, depth + 1);
    indent(out, depth);
    out.push('}');
}

fn bit(v: bool) -> u8 {
    v as u8
}

fn print_stmt(out: &mut String, s: &Stmt, depth: usize) {
    match &s.kind {
        StmtKind::NewBit { name, value } => write!(out, "new bit {name} := {}", bit(*value)).unwrap(),
        StmtKind::NewQbit { name, value } => write!(out, "new qbit {name} := {}", bit(*value)).unwrap(),
        StmtKind::Assign { name, value } => write!(out, "{name} := {}", bit(*value)).unwrap(),
        StmtKind::Apply { targets, unitary } => {
            write!(out, "{} *= {}", targets.join(", "), unitary_text(unitary)).unwrap()
        }
        StmtKind::Measure { qbits } => write!(out, "measure {}", qbits.join(", ")).unwrap(),
        StmtKind::Branch { qbit, zero, one } => {
            write!(out, "measure {qbit} ").unwrap();
            braced(out, zero, depth);
            out.push_str(" else ");
            braced(out, one, depth);
        }
        StmtKind::Merge => out.push_str("merge"),
        StmtKind::Discard { name } => write!(out, "discard {name}").unwrap(),
        StmtKind::Repeat { count, body } => {
            write!(out, "repeat {count} ").unwrap();
            braced(out, body, depth);
        }
        StmtKind::While { bit, body } => {
            write!(out, "while {bit} ").unwrap();
            braced(out, body, depth);
        }
        StmtKind::Rec { name, body } => {
            write!(out, "rec {name} ").unwrap();
            braced(out, body, depth);
        }
        StmtKind::Call { name } => write!(out, "call {name}").unwrap(),
    }
}

fn real(x: f64) -> String {
    format!("{x:?}")
}

fn scalar(z: Complex64) -> String {
    if z.im == 0.0 && !z.im.is_sign_negative() {
        real(z.re)
    } else {
        format!("({}, {})", real(z.re), real(z.im))
    }
}

pub fn unitary_text(u: &UnitaryRef) -> String {
    match u {
        UnitaryRef::Builtin { op, args } => {
            if args.is_empty() {
                op.name().to_string()
            } else {
                let a: Vec<String> = args.iter().map(u64::to_string).collect();
                format!("{}({})", op.name(), a.join(", "))
            }
        }
        UnitaryRef::Literal(rows) => {
            let rows: Vec<String> = rows
                .iter()
                .map(|r| {
                    let r: Vec<String> = r.iter().map(|z| scalar(*z)).collect();
                    format!("[{}]", r.join(", "))
                })
                .collect();
            format!("[{}]", rows.join(", "))
        }
    }
}

/// One-line s-expression of the tree, without source positions.
pub fn sexpr(p: &Program) -> String {
    let inputs: Vec<String> = p
        .inputs
        .iter()
        .map(|d| format!("({} {})", d.kind.keyword(), d.name))
        .collect();
    let mut out = format!("(program (inputs{}{})", if inputs.is_empty() { "" } else { " " }, inputs.join(" "));
    for s in &p.body {
        out.push(' ');
        out.push_str(&stmt_sexpr(s));
    }
    out.push(')');
    out
}

fn block_sexpr(head: String, stmts: &[Stmt]) -> String {
    let mut out = format!("({head}");
    for s in stmts {
        out.push(' ');
        out.push_str(&stmt_sexpr(s));
    }
    out.push(')');
    out
}

fn stmt_sexpr(s: &Stmt) -> String {
    match &s.kind {
        StmtKind::NewBit { name, value } => format!("(new-bit {name} {})", bit(*value)),
        StmtKind::NewQbit { name, value } => format!("(new-qbit {name} {})", bit(*value)),
        StmtKind::Assign { name, value } => format!("(assign {name} {})", bit(*value)),
        StmtKind::Apply { targets, unitary } => {
            format!("(apply ({}) {})", targets.join(" "), unitary_text(unitary))
        }
        StmtKind::Measure { qbits } => format!("(measure {})", qbits.join(" ")),
        StmtKind::Branch { qbit, zero, one } => format!(
            "(branch {qbit} {} {})",
            block_sexpr("zero".into(), zero),
            block_sexpr("one".into(), one)
        ),
        StmtKind::Merge => "(merge)".into(),
        StmtKind::Discard { name } => format!("(discard {name})"),
        StmtKind::Repeat { count, body } => block_sexpr(format!("repeat {count}"), body),
        StmtKind::While { bit, body } => block_sexpr(format!("while {bit}"), body),
        StmtKind::Rec { name, body } => block_sexpr(format!("rec {name}"), body),
        StmtKind::Call { name } => format!("(call {name})"),
    }
}
