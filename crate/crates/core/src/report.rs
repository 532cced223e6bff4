//! Verdicts per function: bound or not, witnesses and their rendered bounds,
//! as JSON or text.

use std::fmt::Write as _;
use std::time::Instant;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::analysis::{analyze_program, render_bound, AnalysisError, Diagnostic, FunctionAnalysis, FunctionSummary};
use crate::deltagraph::{unmatched_assignments, DeltaGraph};
use crate::frontend::{parse, FrontendError};
use crate::jk_oracle::{jk_equals_deterministic, OracleError, DEFAULT_BUDGET};
use crate::matrix::{CoeffMatrix, PolyMatrix};
use crate::polynomial::Assignment;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WitnessPolicy {
    All,
    #[default]
    First,
    None,
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    /// Decide boundedness from the delta graph only, without evaluating.
    pub fast: bool,
    pub witnesses: WitnessPolicy,
    pub dump_delta_graph: bool,
    pub oracle_check: bool,
    pub oracle_budget: usize,
    pub timing: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            fast: false,
            witnesses: WitnessPolicy::First,
            dump_delta_graph: false,
            oracle_check: false,
            oracle_budget: DEFAULT_BUDGET,
            timing: false,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Frontend(#[from] FrontendError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("oracle check of `{function}`: {source}")]
    Oracle { function: String, source: OracleError },
}

/// Variable bounds in variable order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds(pub Vec<(String, String)>);

impl Serialize for Bounds {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub assignment: Assignment,
    pub matrix: CoeffMatrix,
    pub bounds: Bounds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub derive: f64,
    pub decide: f64,
    pub evaluate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub vars: Vec<String>,
    pub domains: Vec<usize>,
    pub bound: bool,
    pub matrix: PolyMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Witness>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<FunctionSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_graph: Option<DeltaGraph>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<Timing>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub functions: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parse_ms: Option<f64>,
}

impl Report {
    pub fn all_bounded(&self) -> bool {
        self.functions.iter().all(|f| f.bound)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, f) in self.functions.iter().enumerate() {
            if i > 0 {
                s.push('\n');
            }
            write_text(&mut s, f);
        }
        s
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Bounds of every variable, read from the columns of an `∞`-free matrix.
pub fn witness_bounds(m: &CoeffMatrix, vars: &[String]) -> Result<Bounds, AnalysisError> {
    let mut out = Vec::with_capacity(vars.len());
    for (j, v) in vars.iter().enumerate() {
        out.push((v.clone(), render_bound(&m.column(j), vars)?));
    }
    Ok(Bounds(out))
}

fn verdict(fa: &FunctionAnalysis, opts: &ReportOptions) -> Result<Verdict, ReportError> {
    let r = &fa.result;
    let t = Instant::now();
    let bound = !r.graph.is_complete();
    let decide = ms(t);

    let t = Instant::now();
    let witnesses = if opts.fast || opts.witnesses == WitnessPolicy::None {
        None
    } else {
        let mut ws = Vec::new();
        for a in unmatched_assignments(&r.graph) {
            let m = r.matrix.eval(&a);
            if m.has_inf() {
                continue;
            }
            let bounds = witness_bounds(&m, &r.vars)?;
            ws.push(Witness {
                assignment: a,
                matrix: m,
                bounds,
            });
            if opts.witnesses == WitnessPolicy::First {
                break;
            }
        }
        Some(ws)
    };
    let evaluate = ms(t);

    let oracle = if opts.oracle_check {
        if !fa.decl.callees().is_empty() {
            Some(OracleVerdict {
                equal: false,
                skipped: Some("function calls are outside the original calculus".into()),
                mismatch: None,
            })
        } else {
            let rep = jk_equals_deterministic(&fa.decl, opts.oracle_budget).map_err(|source| ReportError::Oracle {
                function: fa.decl.name.clone(),
                source,
            })?;
            Some(OracleVerdict {
                equal: rep.equal,
                skipped: None,
                mismatch: rep.mismatch,
            })
        }
    } else {
        None
    };

    Ok(Verdict {
        name: r.name.clone(),
        vars: r.vars.clone(),
        domains: r.domains.sizes.clone(),
        bound,
        matrix: r.matrix.clone(),
        witnesses,
        summary: fa.summary.clone(),
        diagnostics: r.diagnostics.clone(),
        delta_graph: opts.dump_delta_graph.then(|| r.graph.clone()),
        oracle,
        timing_ms: opts.timing.then_some(Timing {
            derive: 0.0,
            decide,
            evaluate,
        }),
    })
}

/// Parses, analyzes and decides every function of a source file.
pub fn analyze_source(src: &str, opts: &ReportOptions) -> Result<Report, ReportError> {
    let t = Instant::now();
    let program = parse(src)?;
    let parse_ms = ms(t);
    let t = Instant::now();
    let analysis = analyze_program(&program)?;
    let derive = ms(t);
    let mut functions = Vec::new();
    for fa in &analysis.functions {
        let mut v = verdict(fa, opts)?;
        if let Some(t) = &mut v.timing_ms {
            // analysis runs over the whole program; split evenly
            t.derive = derive / analysis.functions.len() as f64;
        }
        functions.push(v);
    }
    Ok(Report {
        functions,
        parse_ms: opts.timing.then_some(parse_ms),
    })
}

fn write_text(s: &mut String, f: &Verdict) {
    let _ = writeln!(s, "function {}", f.name);
    let _ = writeln!(s, "  variables: {}", f.vars.join(", "));
    let _ = writeln!(s, "  choice positions: {} {:?}", f.domains.len(), f.domains);
    let _ = writeln!(s, "  bound: {}", if f.bound { "yes" } else { "no (∞ for every choice)" });
    let _ = writeln!(s, "  matrix:");
    for line in f.matrix.to_string().lines() {
        let _ = writeln!(s, "    {line}");
    }
    if let Some(sum) = &f.summary {
        let vs: Vec<String> = sum
            .vectors
            .iter()
            .map(|v| format!("({})", v.iter().map(|c| c.symbol()).collect::<Vec<_>>().join(", ")))
            .collect();
        let _ = writeln!(s, "  summary over ({}): {}", sum.rows.join(", "), vs.join(" "));
    }
    if let Some(ws) = &f.witnesses {
        for w in ws {
            let _ = writeln!(s, "  witness {}:", w.assignment);
            for line in w.matrix.to_string().lines() {
                let _ = writeln!(s, "    {line}");
            }
            for (v, b) in &w.bounds.0 {
                let _ = writeln!(s, "    {v}' <= {b}");
            }
        }
    }
    for d in &f.diagnostics {
        let _ = writeln!(s, "  note {}: {}", d.span, d.message);
    }
    if let Some(g) = &f.delta_graph {
        let _ = writeln!(s, "  delta graph:");
        for l in g.lists() {
            let cells: Vec<String> = l.iter().map(|d| d.to_string()).collect();
            let shown = if cells.is_empty() { "(everything)".to_string() } else { cells.join("") };
            let _ = writeln!(s, "    {shown}");
        }
    }
    if let Some(o) = &f.oracle {
        let status = match (&o.skipped, o.equal) {
            (Some(why), _) => format!("skipped, {why}"),
            (None, true) => "agrees".to_string(),
            (None, false) => format!("DISAGREES: {}", o.mismatch.as_deref().unwrap_or("")),
        };
        let _ = writeln!(s, "  oracle: {status}");
    }
    if let Some(t) = &f.timing_ms {
        let _ = writeln!(
            s,
            "  time (ms): derive {:.3}, decide {:.3}, evaluate {:.3}",
            t.derive, t.decide, t.evaluate
        );
    }
}
