//! Syntax tree for flow-chart programs.

use std::fmt;

use num_complex::Complex64;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Bit,
    Qbit,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Bit => "bit",
            Kind::Qbit => "qbit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decl {
    pub name: String,
    pub kind: Kind,
    pub pos: Pos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    H,
    X,
    Y,
    Z,
    Cnot,
    Iam,
    Oracle,
    GroverG,
}

impl Builtin {
    pub const ALL: [Builtin; 8] = [
        Builtin::H,
        Builtin::X,
        Builtin::Y,
        Builtin::Z,
        Builtin::Cnot,
        Builtin::Iam,
        Builtin::Oracle,
        Builtin::GroverG,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::H => "H",
            Builtin::X => "X",
            Builtin::Y => "Y",
            Builtin::Z => "Z",
            Builtin::Cnot => "CNOT",
            Builtin::Iam => "IAM",
            Builtin::Oracle => "Oracle",
            Builtin::GroverG => "GroverG",
        }
    }

    pub fn from_name(s: &str) -> Option<Builtin> {
        Self::ALL.into_iter().find(|b| b.name() == s)
    }

    /// Number of integer parameters in the call syntax.
    pub fn arity(self) -> usize {
        match self {
            Builtin::Iam => 1,
            Builtin::Oracle | Builtin::GroverG => 2,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum UnitaryRef {
    Builtin { op: Builtin, args: Vec<u64> },
    Literal(Vec<Vec<Complex64>>),
}

/// A braced `measure` runs one branch per outcome and merges them; the bare
/// form measures each listed qubit in turn and splits the flow per outcome.
#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    NewBit { name: String, value: bool },
    NewQbit { name: String, value: bool },
    Assign { name: String, value: bool },
    Apply { targets: Vec<String>, unitary: UnitaryRef },
    Measure { qbits: Vec<String> },
    Branch { qbit: String, zero: Vec<Stmt>, one: Vec<Stmt> },
    Merge,
    Discard { name: String },
    Repeat { count: usize, body: Vec<Stmt> },
    While { bit: String, body: Vec<Stmt> },
    Rec { name: String, body: Vec<Stmt> },
    Call { name: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Program {
    pub inputs: Vec<Decl>,
    pub body: Vec<Stmt>,
}

impl Program {
    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty() && self.body.is_empty()
    }

    /// Structural equality, ignoring source positions.
    pub fn same_shape(&self, other: &Program) -> bool {
        super::printer::sexpr(self) == super::printer::sexpr(other)
    }
}
