//! Elaboration of programs into superoperators.
//!
//! A program point is described by a [`Flow`]: the typing context plus the
//! number of parallel paths opened by bare measurements. Its signature is
//! `paths · 2^{#bits}` entries of dimension `2^{#qubits}`, ordered path
//! first, then bits in significance order.

use num_complex::Complex64;

use crate::domain::{KrausChannel, Signature, Superoperator};
use crate::error::{QwpError, Result};
use crate::matrix::ComplexMatrix;
use crate::qpl::ast::{Kind, Pos, Program, Stmt, StmtKind};
use crate::qpl::context::TypingContext;
use crate::qpl::unitary::resolve;
use crate::tolerance::{MAX_ITER, TRUNCATION_TOL};
use crate::wp::{
    monoidal_trace_partial, monoidal_trace_with, recursive_fixpoint_with, seq_compose,
    LoopDecomposition, RecursiveSpec,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ElabOptions {
    /// Truncation tolerance for loops and recursion.
    pub tol: f64,
    pub max_iter: usize,
    /// When set, loops keep at most this many body passes and recursion
    /// unrolls this many levels instead of iterating to convergence.
    pub depth: Option<usize>,
}

impl Default for ElabOptions {
    fn default() -> Self {
        ElabOptions {
            tol: TRUNCATION_TOL,
            max_iter: MAX_ITER,
            depth: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    pub ctx: TypingContext,
    pub paths: usize,
}

impl Flow {
    pub fn new(ctx: TypingContext) -> Self {
        Flow { ctx, paths: 1 }
    }

    pub fn signature(&self) -> Signature {
        Signature::uniform(self.entries(), self.dim())
    }

    fn bits(&self) -> usize {
        self.ctx.bit_count()
    }

    fn qubits(&self) -> usize {
        self.ctx.qubit_count()
    }

    pub fn entries(&self) -> usize {
        self.paths << self.bits()
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits()
    }

    fn with_ctx(&self, ctx: TypingContext) -> Flow {
        Flow {
            ctx,
            paths: self.paths,
        }
    }
}

/// Result of elaboration: the map and the flows at both ends.
#[derive(Debug, Clone)]
pub struct Elaborated {
    pub op: Superoperator,
    pub input: Flow,
    pub output: Flow,
}

/// Elaborates `p` over `ctx` with default options.
///
/// A program that declares inputs must be elaborated over exactly those
/// inputs; one without declarations runs over any ambient context, whose
/// variables it cannot name.
pub fn elaborate(p: &Program, ctx: &TypingContext) -> Result<Superoperator> {
    Ok(elaborate_with(p, ctx, &ElabOptions::default())?.op)
}

/// Elaborates over the declared inputs (the empty context if none).
pub fn elaborate_program(p: &Program, opts: &ElabOptions) -> Result<Elaborated> {
    elaborate_with(p, &TypingContext::from_decls(&p.inputs), opts)
}

pub fn elaborate_with(p: &Program, ctx: &TypingContext, opts: &ElabOptions) -> Result<Elaborated> {
    if !p.inputs.is_empty() {
        let declared = TypingContext::from_decls(&p.inputs);
        if &declared != ctx {
            return Err(QwpError::Type(format!(
                "program declares inputs {declared} but is elaborated over {ctx}"
            )));
        }
    }
    let input = Flow::new(ctx.clone());
    let e = Elab { opts };
    let (op, output) = e.block(&p.body, &input, &[])?;
    Ok(Elaborated { op, input, output })
}

fn type_error(pos: Pos, message: String) -> QwpError {
    QwpError::Type(format!("{pos}: {message}"))
}

#[derive(Clone)]
struct Hole {
    name: String,
    flow: Flow,
    op: Superoperator,
}

struct Elab<'o> {
    opts: &'o ElabOptions,
}

/// Builds a map between flows entry by entry: `f(i)` lists the output
/// entries reached from input entry `i` with their Kraus operators.
fn entry_map(
    from: &Flow,
    to: &Flow,
    f: impl Fn(usize) -> Vec<(usize, ComplexMatrix)>,
) -> Superoperator {
    let (ni, no) = (from.entries(), to.entries());
    let (di, dout) = (from.dim(), to.dim());
    let mut kraus: Vec<Vec<Vec<ComplexMatrix>>> = vec![vec![Vec::new(); ni]; no];
    for i in 0..ni {
        for (j, k) in f(i) {
            kraus[j][i].push(k);
        }
    }
    let blocks = kraus
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|ks| KrausChannel::new(di, dout, ks).expect("operators fit the flow"))
                .collect()
        })
        .collect();
    Superoperator::new(from.signature(), to.signature(), blocks).expect("blocks fit the flow")
}

/// Operator on `n` qubits acting as `op` on the qubits at `positions`
/// (first position = most significant factor of `op`) and as the identity
/// elsewhere.
fn embed(op: &ComplexMatrix, positions: &[usize], n: usize) -> ComplexMatrix {
    let d = 1usize << n;
    let k = positions.len();
    let shifts: Vec<usize> = positions.iter().map(|p| n - 1 - p).collect();
    let mask: usize = shifts.iter().map(|s| 1usize << s).sum();
    let local = |x: usize| {
        shifts
            .iter()
            .enumerate()
            .fold(0usize, |acc, (t, s)| acc | (((x >> s) & 1) << (k - 1 - t)))
    };
    let mut data = vec![Complex64::new(0.0, 0.0); d * d];
    for x in 0..d {
        for y in 0..d {
            if x & !mask == y & !mask {
                data[x * d + y] = op.get(local(x), local(y));
            }
        }
    }
    ComplexMatrix::new(d, d, data).expect("finite")
}

fn projector(outcome: usize) -> ComplexMatrix {
    ComplexMatrix::projector(&ComplexMatrix::basis(2, outcome))
}

impl Elab<'_> {
    fn block(&self, stmts: &[Stmt], flow: &Flow, holes: &[Hole]) -> Result<(Superoperator, Flow)> {
        let mut op: Option<Superoperator> = None;
        let mut cur = flow.clone();
        for s in stmts {
            let (m, next) = self.stmt(s, &cur, holes)?;
            op = Some(match op {
                None => m,
                Some(prev) => seq_compose(&prev, &m)?.compressed(),
            });
            cur = next;
        }
        let op = op.unwrap_or_else(|| Superoperator::identity(&flow.signature()));
        Ok((op, cur))
    }

    fn expect_kind(&self, s: &Stmt, flow: &Flow, name: &str, kind: Kind) -> Result<()> {
        match flow.ctx.kind_of(name) {
            Some(k) if k == kind => Ok(()),
            Some(k) => Err(type_error(
                s.pos,
                format!("`{name}` is a {}, expected a {}", k.keyword(), kind.keyword()),
            )),
            None => Err(QwpError::Scope {
                line: s.pos.line,
                col: s.pos.col,
                message: format!("`{name}` is not in scope"),
            }),
        }
    }

    fn fresh(&self, s: &Stmt, flow: &Flow, name: &str) -> Result<()> {
        if flow.ctx.kind_of(name).is_some() {
            return Err(QwpError::Scope {
                line: s.pos.line,
                col: s.pos.col,
                message: format!("`{name}` is already in scope"),
            });
        }
        Ok(())
    }

    fn stmt(&self, s: &Stmt, flow: &Flow, holes: &[Hole]) -> Result<(Superoperator, Flow)> {
        let nb = flow.bits();
        let nq = flow.qubits();
        let split = |e: usize| (e >> nb, e & ((1 << nb) - 1));
        let id = ComplexMatrix::identity(flow.dim());
        match &s.kind {
            StmtKind::NewBit { name, value } => {
                self.fresh(s, flow, name)?;
                let to = flow.with_ctx(flow.ctx.with_front(name, Kind::Bit));
                let v = *value as usize;
                let op = entry_map(flow, &to, |e| {
                    let (path, bits) = split(e);
                    vec![((path << (nb + 1)) | (v << nb) | bits, id.clone())]
                });
                Ok((op, to))
            }
            StmtKind::NewQbit { name, value } => {
                self.fresh(s, flow, name)?;
                let to = flow.with_ctx(flow.ctx.with_front(name, Kind::Qbit));
                let d = flow.dim();
                let v = *value as usize;
                let k = ComplexMatrix::from_fn(2 * d, d, |r, c| {
                    if r == v * d + c {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                });
                Ok((entry_map(flow, &to, |e| vec![(e, k.clone())]), to))
            }
            StmtKind::Assign { name, value } => {
                self.expect_kind(s, flow, name, Kind::Bit)?;
                let shift = nb - 1 - flow.ctx.bit_position(name).unwrap();
                let v = *value as usize;
                let op = entry_map(flow, flow, |e| vec![((e & !(1 << shift)) | (v << shift), id.clone())]);
                Ok((op, flow.clone()))
            }
            StmtKind::Apply { targets, unitary } => {
                let (u, arity) = resolve(unitary).map_err(|e| match e {
                    QwpError::Elaboration(m) => QwpError::Elaboration(format!("{}: {m}", s.pos)),
                    QwpError::Type(m) => type_error(s.pos, m),
                    other => other,
                })?;
                if arity != targets.len() {
                    return Err(type_error(
                        s.pos,
                        format!("unitary acts on {arity} qubits but {} targets are given", targets.len()),
                    ));
                }
                let mut positions = Vec::with_capacity(targets.len());
                for t in targets {
                    self.expect_kind(s, flow, t, Kind::Qbit)?;
                    let p = flow.ctx.qubit_position(t).unwrap();
                    if positions.contains(&p) {
                        return Err(type_error(s.pos, format!("qubit `{t}` is targeted twice")));
                    }
                    positions.push(p);
                }
                let full = embed(&u, &positions, nq);
                Ok((entry_map(flow, flow, |e| vec![(e, full.clone())]), flow.clone()))
            }
            StmtKind::Measure { qbits } => {
                let mut op: Option<Superoperator> = None;
                let mut cur = flow.clone();
                for q in qbits {
                    self.expect_kind(s, &cur, q, Kind::Qbit)?;
                    let p = cur.ctx.qubit_position(q).unwrap();
                    let proj = [embed(&projector(0), &[p], nq), embed(&projector(1), &[p], nq)];
                    let to = Flow {
                        ctx: cur.ctx.clone(),
                        paths: cur.paths * 2,
                    };
                    let m = entry_map(&cur, &to, |e| {
                        let (path, bits) = split(e);
                        (0..2)
                            .map(|o| ((((path << 1) | o) << nb) | bits, proj[o].clone()))
                            .collect()
                    });
                    op = Some(match op {
                        None => m,
                        Some(prev) => seq_compose(&prev, &m)?,
                    });
                    cur = to;
                }
                Ok((op.expect("at least one qubit"), cur))
            }
            StmtKind::Branch { qbit, zero, one } => {
                self.expect_kind(s, flow, qbit, Kind::Qbit)?;
                let p = flow.ctx.qubit_position(qbit).unwrap();
                let outcome = |o: usize| {
                    let proj = embed(&projector(o), &[p], nq);
                    entry_map(flow, flow, |e| vec![(e, proj.clone())])
                };
                let (a, fa) = self.block(zero, flow, holes)?;
                let (b, fb) = self.block(one, flow, holes)?;
                if fa != fb {
                    return Err(type_error(
                        s.pos,
                        format!(
                            "measurement branches cannot merge: {} with {} paths vs {} with {} paths",
                            fa.ctx, fa.paths, fb.ctx, fb.paths
                        ),
                    ));
                }
                let op = seq_compose(&outcome(0), &a)?
                    .sum(&seq_compose(&outcome(1), &b)?)?
                    .compressed();
                Ok((op, fa))
            }
            StmtKind::Merge => {
                let to = Flow {
                    ctx: flow.ctx.clone(),
                    paths: 1,
                };
                let op = entry_map(flow, &to, |e| vec![(split(e).1, id.clone())]);
                Ok((op, to))
            }
            StmtKind::Discard { name } => match flow.ctx.kind_of(name) {
                Some(Kind::Bit) => {
                    let shift = nb - 1 - flow.ctx.bit_position(name).unwrap();
                    let to = flow.with_ctx(flow.ctx.without(name));
                    let op = entry_map(flow, &to, |e| {
                        let low = e & ((1 << shift) - 1);
                        let high = e >> (shift + 1);
                        vec![((high << shift) | low, id.clone())]
                    });
                    Ok((op, to))
                }
                Some(Kind::Qbit) => {
                    let shift = nq - 1 - flow.ctx.qubit_position(name).unwrap();
                    let to = flow.with_ctx(flow.ctx.without(name));
                    let (d, dh) = (flow.dim(), flow.dim() / 2);
                    let kraus: Vec<ComplexMatrix> = (0..2)
                        .map(|v| {
                            ComplexMatrix::from_fn(dh, d, |r, c| {
                                let low = c & ((1 << shift) - 1);
                                let high = c >> (shift + 1);
                                if (c >> shift) & 1 == v && r == (high << shift) | low {
                                    Complex64::new(1.0, 0.0)
                                } else {
                                    Complex64::new(0.0, 0.0)
                                }
                            })
                        })
                        .collect();
                    let op = entry_map(flow, &to, |e| kraus.iter().map(|k| (e, k.clone())).collect());
                    Ok((op, to))
                }
                None => Err(QwpError::Scope {
                    line: s.pos.line,
                    col: s.pos.col,
                    message: format!("`{name}` is not in scope"),
                }),
            },
            StmtKind::Repeat { count, body } => {
                if *count == 0 {
                    return Ok((Superoperator::identity(&flow.signature()), flow.clone()));
                }
                let (b, out) = self.block(body, flow, holes)?;
                if *count > 1 && &out != flow {
                    return Err(type_error(
                        s.pos,
                        format!("repeated body changes the context from {} to {}", flow.ctx, out.ctx),
                    ));
                }
                let mut op = b.clone();
                for _ in 1..*count {
                    op = seq_compose(&op, &b)?.compressed();
                }
                Ok((op, out))
            }
            StmtKind::While { bit, body } => {
                self.expect_kind(s, flow, bit, Kind::Bit)?;
                let (b, out) = self.block(body, flow, holes)?;
                if &out != flow {
                    return Err(type_error(
                        s.pos,
                        format!("loop body changes the context from {} to {}", flow.ctx, out.ctx),
                    ));
                }
                let shift = nb - 1 - flow.ctx.bit_position(bit).unwrap();
                let test = |v: usize| {
                    entry_map(flow, flow, |e| {
                        if (e >> shift) & 1 == v {
                            vec![(e, id.clone())]
                        } else {
                            Vec::new()
                        }
                    })
                };
                let exit = test(0);
                let enter = seq_compose(&test(1), &b)?.compressed();
                let l = LoopDecomposition::from_parts(&exit, &enter, &exit, &enter)?;
                let op = match self.opts.depth {
                    Some(k) => monoidal_trace_partial(&l, k)?,
                    None => monoidal_trace_with(&l, self.opts.tol, self.opts.max_iter)?,
                };
                Ok((op, flow.clone()))
            }
            StmtKind::Rec { name, body } => {
                let with = |x: Superoperator| {
                    let mut h = holes.to_vec();
                    h.push(Hole {
                        name: name.clone(),
                        flow: flow.clone(),
                        op: x,
                    });
                    h
                };
                let sig = flow.signature();
                let (_, out) = self.block(body, flow, &with(Superoperator::zero(&sig, &sig)))?;
                if &out != flow {
                    return Err(type_error(
                        s.pos,
                        format!("recursive body changes the context from {} to {}", flow.ctx, out.ctx),
                    ));
                }
                let spec = RecursiveSpec::new(sig.clone(), sig, |x| {
                    Ok(self.block(body, flow, &with(x.clone()))?.0)
                });
                let op = match self.opts.depth {
                    Some(k) => spec.unroll(k)?,
                    None => recursive_fixpoint_with(&spec, self.opts.tol, self.opts.max_iter)?,
                };
                Ok((op, flow.clone()))
            }
            StmtKind::Call { name } => {
                let Some(h) = holes.iter().rev().find(|h| &h.name == name) else {
                    return Err(QwpError::Scope {
                        line: s.pos.line,
                        col: s.pos.col,
                        message: format!("`call {name}` outside a `rec {name}` block"),
                    });
                };
                if &h.flow != flow {
                    return Err(type_error(
                        s.pos,
                        format!(
                            "`call {name}` at context {} but the recursion is over {}",
                            flow.ctx, h.flow.ctx
                        ),
                    ));
                }
                Ok((h.op.clone(), flow.clone()))
            }
        }
    }
}
