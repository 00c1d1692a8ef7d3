//! Deterministic check reports.
//!
//! A report is an ordered list of named checks, each carrying a verdict and
//! optionally a witness and notes. Rendering is a pure function of the
//! report contents, so two runs over the same input produce byte-identical
//! output. Wall-clock timings are collected but rendered only on request;
//! they are the one non-deterministic field and stay out of the default
//! output.

use coalgebra_engine::GradedSpace;
use exact_linear::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Informational: never affects the exit status.
    Info,
}

impl Verdict {
    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Info => "info",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    /// For failures: the violating element or fiber, already rendered as a
    /// `label:coefficient` list or a short fiber description.
    pub witness: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Structured,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub kind: String,
    pub params: Vec<(String, String)>,
    pub checks: Vec<Check>,
    /// (label, microseconds); rendered only when explicitly requested.
    pub timings: Vec<(String, u128)>,
}

impl Report {
    pub fn new(command: &str, kind: &str, params: Vec<(String, String)>) -> Self {
        Report {
            command: command.to_string(),
            kind: kind.to_string(),
            params,
            checks: Vec::new(),
            timings: Vec::new(),
        }
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.checks.push(Check { name: name.into(), verdict: Verdict::Pass, witness: None, notes: Vec::new() });
    }

    pub fn pass_with(&mut self, name: impl Into<String>, notes: Vec<String>) {
        self.checks.push(Check { name: name.into(), verdict: Verdict::Pass, witness: None, notes });
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: Option<String>, notes: Vec<String>) {
        self.checks.push(Check { name: name.into(), verdict: Verdict::Fail, witness, notes });
    }

    pub fn info(&mut self, name: impl Into<String>, notes: Vec<String>) {
        self.checks.push(Check { name: name.into(), verdict: Verdict::Info, witness: None, notes });
    }

    pub fn verdict(&mut self, name: impl Into<String>, ok: bool, witness: Option<String>, notes: Vec<String>) {
        if ok {
            self.checks.push(Check { name: name.into(), verdict: Verdict::Pass, witness: None, notes });
        } else {
            self.fail(name, witness, notes);
        }
    }

    /// True when no check failed. Informational checks do not count.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn render(&self, format: ReportFormat, with_timings: bool) -> String {
        match format {
            ReportFormat::Text => self.render_text(with_timings),
            ReportFormat::Structured => self.render_structured(with_timings),
        }
    }

    fn render_text(&self, with_timings: bool) -> String {
        let mut out = String::new();
        out.push_str("corad report v1\n");
        out.push_str(&format!("command: {}\n", self.command));
        if self.params.is_empty() {
            out.push_str(&format!("kind: {}\n", self.kind));
        } else {
            let ps: Vec<String> =
                self.params.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            out.push_str(&format!("kind: {} ({})\n", self.kind, ps.join(", ")));
        }
        for c in &self.checks {
            out.push_str(&format!("check {}: {}\n", c.name, c.verdict.as_str()));
            if let Some(w) = &c.witness {
                out.push_str(&format!("  witness: {w}\n"));
            }
            for n in &c.notes {
                out.push_str(&format!("  note: {n}\n"));
            }
        }
        if with_timings {
            for (label, us) in &self.timings {
                out.push_str(&format!("timing {label}: {us} us\n"));
            }
        }
        out.push_str(&format!("result: {}\n", if self.passed() { "pass" } else { "fail" }));
        out
    }

    /// Tab-separated records: the first field names the record type, so
    /// payloads may contain spaces. `witness` and `note` records repeat the
    /// check name they belong to.
    fn render_structured(&self, with_timings: bool) -> String {
        let mut out = String::new();
        out.push_str("corad-report\tv1\n");
        out.push_str(&format!("command\t{}\n", self.command));
        out.push_str(&format!("kind\t{}\n", self.kind));
        for (k, v) in &self.params {
            out.push_str(&format!("param\t{k}\t{v}\n"));
        }
        for c in &self.checks {
            out.push_str(&format!("check\t{}\t{}\n", c.name, c.verdict.as_str()));
            if let Some(w) = &c.witness {
                out.push_str(&format!("witness\t{}\t{w}\n", c.name));
            }
            for n in &c.notes {
                out.push_str(&format!("note\t{}\t{n}\n", c.name));
            }
        }
        if with_timings {
            for (label, us) in &self.timings {
                out.push_str(&format!("timing\t{label}\t{us}\n"));
            }
        }
        out.push_str(&format!("result\t{}\n", if self.passed() { "pass" } else { "fail" }));
        out
    }
}

/// Renders a vector as a `label:coefficient` list in basis order, skipping
/// zero entries; the zero vector renders as "0".
pub fn labeled_vector(space: &GradedSpace, v: &Vector) -> String {
    let mut parts = Vec::new();
    for (i, c) in v.iter() {
        if !c.is_zero() {
            parts.push(format!("{}:{}", space.label(i), c));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

/// The report layer names a grade together with the doubled cohomological
/// degree it models.
pub fn grade_phrase(k: usize) -> String {
    format!("grade {k} (cohomological degree {})", 2 * k)
}
