//! Text output: six significant digits per component, one matrix row per line.

use std::fmt::Write;

use qwp_core::domain::{DensityState, OperatorTuple, PredicateTuple, ValidationReport};
use qwp_core::matrix::format_scalar;
use num_complex::Complex64;

use crate::commands::{ExampleOutput, RunOutput, TripleReport, Verdict};

pub trait Render {
    fn text(&self) -> String;
}

fn real(x: f64) -> String {
    format_scalar(Complex64::new(x, 0.0))
}

fn tuple_text(out: &mut String, t: &OperatorTuple) {
    writeln!(out, "sig: {}", t.sig()).unwrap();
    for (k, m) in t.entries().iter().enumerate() {
        writeln!(out, "entry {k}:\n{m}").unwrap();
    }
}

impl Render for OperatorTuple {
    fn text(&self) -> String {
        let mut out = String::new();
        tuple_text(&mut out, self);
        out
    }
}

impl Render for PredicateTuple {
    fn text(&self) -> String {
        self.as_tuple().text()
    }
}

impl Render for DensityState {
    fn text(&self) -> String {
        self.as_tuple().text()
    }
}

impl Render for RunOutput {
    fn text(&self) -> String {
        let mut out = self.state.text();
        let t: Vec<String> = self.traces.iter().map(|x| real(*x)).collect();
        writeln!(out, "traces: {}", t.join(", ")).unwrap();
        out
    }
}

impl Render for TripleReport {
    fn text(&self) -> String {
        let mut out = String::new();
        let verdict = match self.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        };
        writeln!(out, "verdict: {verdict}").unwrap();
        writeln!(out, "expectation: {}", real(self.expectation)).unwrap();
        writeln!(out, "threshold: {}", real(self.threshold)).unwrap();
        writeln!(out, "duality residual: {} ({} trials, seed {})", real(self.duality_residual), self.trials, self.seed).unwrap();
        writeln!(out, "program: {}", self.program).unwrap();
        writeln!(out, "postcondition: {}", self.postcondition_digest).unwrap();
        out.push_str("precondition:\n");
        tuple_text(&mut out, self.precondition.as_tuple());
        out
    }
}

impl Render for ValidationReport {
    fn text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} ({} checks, max residual {})", if self.pass { "valid" } else { "invalid" }, self.trials, real(self.max_residual)).unwrap();
        for v in &self.violations {
            writeln!(out, "  {}: {} [witness {}]", v.code, v.message, real(v.witness)).unwrap();
        }
        out
    }
}

impl Render for ExampleOutput {
    fn text(&self) -> String {
        let mut out = String::new();
        for f in &self.files {
            writeln!(out, "{} {}", f.sha256, f.path).unwrap();
        }
        out
    }
}
