use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use qwp_core::domain::{
    expectation, validate_predicate, validate_state, DensityState, KrausChannel, OperatorTuple,
    PredicateTuple, Signature, Superoperator, ValidationReport,
};
use qwp_core::qpl::library::{
    grover_source, uniform_superposition, BELL_SOURCE, COIN_SOURCE,
};
use qwp_core::qpl::{
    build_bell_stabilizer, elaborate_with, parse, print, ElabOptions, Elaborated, Program,
    TypingContext,
};
use qwp_core::tolerance::{Tolerances, TRUNCATION_TOL};
use qwp_core::wp::{duality_check, wp_operator, wp_super_with};
use qwp_core::{ComplexMatrix, QwpError};

use crate::failure::{exit, CliError};
use crate::render::Render;
use crate::{Cli, Command, ConfigArgs, Env, ExampleName, Format, ObjectKind, Response};

/// Slack on the thresholded verdict.
pub const VERDICT_SLACK: f64 = 1e-9;

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone)]
struct RunConfig {
    elab: ElabOptions,
    tol: Tolerances,
    seed: u64,
    format: Format,
    out: Option<PathBuf>,
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(QwpError::InvalidTolerance(format!("{name} must be positive and finite, got {v}")).into())
    }
}

fn config(args: &ConfigArgs, env: &Env) -> CliResult<RunConfig> {
    let tol = match (args.tol, &env.tol) {
        (Some(t), _) => t,
        (None, Some(s)) => s.trim().parse::<f64>().map_err(|_| {
            CliError::from(QwpError::InvalidTolerance(format!("QWP_TOL=`{s}` is not a number")))
        })?,
        (None, None) => TRUNCATION_TOL,
    };
    let tol = positive("truncation tolerance", tol)?;
    let psd = positive("--psd-tol", args.psd_tol)?;
    if args.max_iter == 0 {
        return Err(QwpError::InvalidTolerance("--max-iter must be at least 1".into()).into());
    }
    Ok(RunConfig {
        elab: ElabOptions {
            tol,
            max_iter: args.max_iter,
            depth: None,
        },
        tol: Tolerances::with_psd(psd),
        seed: args.seed,
        format: args.format,
        out: args.out.clone(),
    })
}

fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::input(path, e))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_slice(&read_bytes(path)?).map_err(|e| CliError::input(path, e))
}

fn read_program(path: &Path) -> CliResult<Program> {
    let bytes = read_bytes(path)?;
    let text = String::from_utf8(bytes).map_err(|e| CliError::input(path, e))?;
    Ok(parse(&text)?)
}

fn read_predicate(path: &Path, cfg: &RunConfig) -> CliResult<PredicateTuple> {
    Ok(PredicateTuple::from_tuple_with(read_json(path)?, &cfg.tol)?)
}

fn read_state(path: &Path, cfg: &RunConfig) -> CliResult<DensityState> {
    Ok(DensityState::from_tuple_with(read_json(path)?, &cfg.tol)?)
}

/// Which end of the program a data file must fit.
enum Fit<'a> {
    Input(&'a Signature),
    Output(&'a Signature),
}

fn log2_exact(x: usize) -> Option<usize> {
    x.is_power_of_two().then(|| x.trailing_zeros() as usize)
}

/// Elaborates over the declared inputs or, for a program without inputs, over
/// an ambient register of `--register` qubits or of the size the file needs.
fn elaborate_fitting(p: &Program, register: Option<usize>, fit: Fit, cfg: &RunConfig) -> CliResult<Elaborated> {
    let ctx = if !p.inputs.is_empty() {
        if register.is_some() {
            return Err(CliError::usage("--register applies only to programs without inputs"));
        }
        TypingContext::from_decls(&p.inputs)
    } else {
        let n = match register {
            Some(n) => n,
            None => match fit {
                Fit::Input(sig) if sig.len() == 1 => log2_exact(sig.dim(0)).unwrap_or(0),
                Fit::Input(_) => 0,
                Fit::Output(sig) => {
                    let bare = elaborate_with(p, &TypingContext::empty(), &cfg.elab)?;
                    let local = bare.op.out_sig().dim(0);
                    match sig.dims().first() {
                        Some(d) if d % local == 0 => log2_exact(d / local).unwrap_or(0),
                        _ => 0,
                    }
                }
            },
        };
        TypingContext::register("r", n)
    };
    Ok(elaborate_with(p, &ctx, &cfg.elab)?)
}

fn same_sig(expected: &Signature, found: &Signature) -> CliResult<()> {
    if expected == found {
        Ok(())
    } else {
        Err(QwpError::SignatureMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
        .into())
    }
}

fn emit<T: Serialize + Render>(value: &T, cfg: &RunConfig, code: i32) -> CliResult<Response> {
    let body = match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => value.text(),
    };
    let stdout = match &cfg.out {
        None => body,
        Some(path) => {
            std::fs::write(path, body).map_err(|e| CliError::input(path, e))?;
            let note = serde_json::json!({ "written": path.display().to_string() });
            match cfg.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&note).expect("serializable")),
                Format::Text => format!("written: {}\n", path.display()),
            }
        }
    };
    Ok(Response { code, stdout })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutput {
    pub state: DensityState,
    pub traces: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripleReport {
    pub program: String,
    pub postcondition_digest: String,
    pub precondition: PredicateTuple,
    pub expectation: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    pub duality_residual: f64,
    pub seed: u64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleFile {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleOutput {
    pub example: String,
    pub files: Vec<ExampleFile>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::from("sha256:");
    for b in digest {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

pub(crate) fn dispatch(cli: &Cli, env: &Env) -> CliResult<Response> {
    let cfg = config(&cli.config, env)?;
    match &cli.command {
        Command::Wp { program, post, observable, register } => {
            let p = read_program(program)?;
            if *observable {
                let m: OperatorTuple = read_json(post)?;
                let dev = m.entries().iter().map(ComplexMatrix::hermitian_deviation).fold(0.0, f64::max);
                if dev > cfg.tol.herm {
                    return Err(QwpError::NotHermitian { deviation: dev }.into());
                }
                let e = elaborate_fitting(&p, *register, Fit::Output(m.sig()), &cfg)?;
                same_sig(e.op.out_sig(), m.sig())?;
                emit(&wp_operator(&e.op, &m)?, &cfg, exit::OK)
            } else {
                let m = read_predicate(post, &cfg)?;
                let e = elaborate_fitting(&p, *register, Fit::Output(m.sig()), &cfg)?;
                same_sig(e.op.out_sig(), m.sig())?;
                emit(&wp_super_with(&e.op, &m, &cfg.tol)?, &cfg, exit::OK)
            }
        }
        Command::Run { program, state, register } => {
            let p = read_program(program)?;
            let s = read_state(state, &cfg)?;
            let e = elaborate_fitting(&p, *register, Fit::Input(s.sig()), &cfg)?;
            same_sig(e.op.in_sig(), s.sig())?;
            let out = e.op.apply(&s)?;
            let traces = out.traces();
            emit(&RunOutput { state: out, traces }, &cfg, exit::OK)
        }
        Command::Check { program, post, state, threshold, trials, register } => {
            let r = *threshold;
            if !(0.0..=1.0).contains(&r) {
                return Err(QwpError::InvalidThreshold(r).into());
            }
            let p = read_program(program)?;
            let post_bytes = read_bytes(post)?;
            let m = read_predicate(post, &cfg)?;
            let s = read_state(state, &cfg)?;
            let e = elaborate_fitting(&p, *register, Fit::Input(s.sig()), &cfg)?;
            same_sig(e.op.in_sig(), s.sig())?;
            same_sig(e.op.out_sig(), m.sig())?;
            let pre = wp_super_with(&e.op, &m, &cfg.tol)?;
            let value = expectation(&s, &pre)?;
            let duality = duality_check(&e.op, *trials, cfg.seed);
            let verdict = if value >= r - VERDICT_SLACK { Verdict::Pass } else { Verdict::Fail };
            let report = TripleReport {
                program: program.display().to_string(),
                postcondition_digest: sha256_hex(&post_bytes),
                precondition: pre,
                expectation: value,
                threshold: r,
                verdict,
                duality_residual: duality.max_residual,
                seed: cfg.seed,
                trials: *trials,
            };
            let code = if verdict == Verdict::Pass { exit::OK } else { exit::VERDICT_FAIL };
            emit(&report, &cfg, code)
        }
        Command::Validate { kind, file } => {
            let report = validate_file(*kind, file, &cfg)?;
            let code = if report.pass { exit::OK } else { exit::VALIDATION };
            emit(&report, &cfg, code)
        }
        Command::Example { name, n, s, out_dir } => {
            if cfg.out.is_some() {
                return Err(CliError::usage("example writes into --out-dir, not --out"));
            }
            let files = example_files(*name, *n, *s)?;
            std::fs::create_dir_all(out_dir).map_err(|e| CliError::input(out_dir, e))?;
            let mut written = Vec::new();
            for (file, contents) in files {
                let path = out_dir.join(&file);
                std::fs::write(&path, &contents).map_err(|e| CliError::input(&path, e))?;
                written.push(ExampleFile {
                    path: path.display().to_string(),
                    sha256: sha256_hex(contents.as_bytes()),
                });
            }
            let name = match name {
                ExampleName::Grover => "grover",
                ExampleName::Coin => "coin",
                ExampleName::Bell => "bell",
            };
            emit(&ExampleOutput { example: name.into(), files: written }, &cfg, exit::OK)
        }
    }
}

fn validate_file(kind: ObjectKind, file: &Path, cfg: &RunConfig) -> CliResult<ValidationReport> {
    Ok(match kind {
        ObjectKind::State => validate_state(&read_json(file)?, &cfg.tol),
        ObjectKind::Predicate => validate_predicate(&read_json(file)?, &cfg.tol),
        ObjectKind::Channel => read_json::<KrausChannel>(file)?.validate(&cfg.tol),
        ObjectKind::Superop => read_json::<Superoperator>(file)?.validate(&cfg.tol),
    })
}

fn json_text<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn tuple(entries: Vec<ComplexMatrix>) -> OperatorTuple {
    let dims = entries.iter().map(ComplexMatrix::rows).collect();
    OperatorTuple::new(Signature::new(dims).expect("positive dims"), entries).expect("square entries")
}

/// Canonical example files as (file name, contents).
pub fn example_files(name: ExampleName, n: Option<usize>, s: Option<usize>) -> CliResult<Vec<(String, String)>> {
    let canonical = |src: &str| print(&parse(src).expect("library source parses"));
    Ok(match name {
        ExampleName::Grover => {
            let n = n.unwrap_or(2);
            let s = s.unwrap_or((1usize << n.min(63)).saturating_sub(1));
            let src = grover_source(n, s)?;
            let d = 1usize << n;
            let target = ComplexMatrix::projector(&ComplexMatrix::basis(d, s));
            let psi = ComplexMatrix::projector(&uniform_superposition(n));
            vec![
                (format!("grover{n}.qpl"), canonical(&src)),
                (format!("grover{n}_post.json"), json_text(&tuple(vec![target; d]))),
                (format!("grover{n}_state.json"), json_text(&tuple(vec![psi]))),
            ]
        }
        ExampleName::Coin => {
            if s.is_some() {
                return Err(CliError::usage("--s applies only to grover"));
            }
            let n = n.unwrap_or(1);
            if n as u64 > qwp_core::qpl::unitary::MAX_REGISTER {
                return Err(QwpError::OutOfRange(format!("coin register of {n} qubits is too large")).into());
            }
            let d = 1usize << n;
            let zero = ComplexMatrix::projector(&ComplexMatrix::basis(d, 0));
            vec![
                ("coin.qpl".into(), canonical(COIN_SOURCE)),
                ("coin_post.json".into(), json_text(&tuple(vec![zero.clone(), ComplexMatrix::zeros(d, d)]))),
                ("coin_state.json".into(), json_text(&tuple(vec![zero]))),
            ]
        }
        ExampleName::Bell => {
            if n.is_some() || s.is_some() {
                return Err(CliError::usage("bell takes no parameters"));
            }
            let b = build_bell_stabilizer();
            vec![
                ("bell.qpl".into(), canonical(BELL_SOURCE)),
                ("bell_post_zz.json".into(), json_text(&tuple(vec![b.generators[0].clone()]))),
                ("bell_post_xx.json".into(), json_text(&tuple(vec![b.generators[1].clone()]))),
                ("bell_post.json".into(), json_text(&tuple(vec![ComplexMatrix::projector(&b.bell_state)]))),
                ("bell_state.json".into(), json_text(&tuple(vec![ComplexMatrix::projector(&b.input_state)]))),
            ]
        }
    })
}
