//! The deterministic derivation engine: one polynomial matrix per function,
//! with function summaries, the call rule and the recursion solver.

pub mod bounds;
pub mod engine;
pub mod psi;
pub mod recursion;
pub mod summary;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::deltagraph::DeltaGraph;
use crate::frontend::{collect_vars, normalize_function, Cmd, FunDecl, Program, Span};
use crate::matrix::{MatrixError, PolyMatrix};
use crate::polynomial::ChoiceDomains;

pub use bounds::render_bound;
pub use engine::{Engine, Env};
pub use psi::map_assignment_psi;
pub use recursion::{solve_recursion, RecursionSolution};
pub use summary::{build_summary, FunctionSummary};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("unknown variable `{name}`")]
    UnknownVariable { name: String },
    #[error("{span}: expression is not in three-address form")]
    NotFlat { span: Span },
    #[error("{span}: call to unknown function `{name}`")]
    UnknownFunction { name: String, span: Span },
    #[error("{span}: `{name}` expects {expected} arguments, found {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
        span: Span,
    },
    #[error("function `{name}` returns no value")]
    NoReturnValue { name: String },
    #[error("recursive function `{name}` has no solution without ∞")]
    NoSolutionWithoutInfinity { name: String },
    #[error("summary tag {tag} out of range (k = {k})")]
    TagOutOfRange { tag: usize, k: usize },
    #[error("bound of `{var}` is infinite")]
    ContainsInfinity { var: String },
    #[error("function `{name}` is declared twice")]
    DuplicateFunction { name: String },
    #[error("{span}: `{caller}` calls `{callee}`, which is declared later (forward calls and mutual recursion are not supported)")]
    ForwardCall { caller: String, callee: String, span: Span },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// What allocated a choice position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChoiceKind {
    /// An addition or subtraction (three choices).
    Expression,
    /// A call whose callee has several summary vectors.
    Call { callee: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChoiceOrigin {
    pub position: usize,
    #[serde(serialize_with = "ser_span")]
    pub span: Span,
    #[serde(flatten)]
    pub kind: ChoiceKind,
}

/// One call site, in analysis order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CallRecord {
    pub callee: String,
    pub span: Span,
    /// Number of positions allocated before the call.
    pub first_position: usize,
    /// Position choosing the summary vector, when the callee has `k ≥ 2`.
    pub position: Option<usize>,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    #[serde(serialize_with = "ser_span")]
    pub span: Span,
    pub message: String,
}

fn ser_span<S: serde::Serializer>(s: &Span, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&s.to_string())
}

/// The matrix of one function body together with its choice space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisResult {
    pub name: String,
    pub vars: Vec<String>,
    pub matrix: PolyMatrix,
    pub domains: ChoiceDomains,
    pub origins: Vec<ChoiceOrigin>,
    pub calls: Vec<CallRecord>,
    /// Index of the assignments leading to `∞`.
    pub graph: DeltaGraph,
    pub diagnostics: Vec<Diagnostic>,
}

impl AnalysisResult {
    /// True when some assignment gives an `∞`-free matrix.
    pub fn is_bounded(&self) -> bool {
        !self.graph.is_complete()
    }
}

/// Analyzes a command sequence over the given variables.
pub fn analyze_body(
    name: &str,
    vars: Vec<String>,
    body: &[Cmd],
    env: &Env,
    self_summary: Option<&FunctionSummary>,
) -> Result<AnalysisResult, AnalysisError> {
    let mut engine = Engine::new(vars, env).with_self(name, self_summary);
    let matrix = engine.analyze_seq(body)?;
    let vars = engine.vars().to_vec();
    Ok(AnalysisResult {
        name: name.to_string(),
        vars,
        domains: engine.domains().clone(),
        matrix,
        origins: engine.origins,
        calls: engine.calls,
        graph: engine.graph,
        diagnostics: engine.diagnostics,
    })
}

/// Analyzes a function body after three-address normalization. Calls to the
/// function itself are resolved with `self_summary`.
pub fn analyze_function_with(
    f: &FunDecl,
    env: &Env,
    self_summary: Option<&FunctionSummary>,
) -> Result<AnalysisResult, AnalysisError> {
    let f = normalize_function(f);
    analyze_body(&f.name, collect_vars(&f), &f.body, env, self_summary)
}

pub fn analyze_function(f: &FunDecl, env: &Env) -> Result<AnalysisResult, AnalysisError> {
    analyze_function_with(f, env, None)
}

/// Analyzes a bare command sequence (no parameters, no return), with
/// variables ordered by first occurrence.
pub fn analyze_chunk(body: &[Cmd]) -> Result<AnalysisResult, AnalysisError> {
    let f = FunDecl {
        name: "main".into(),
        params: Vec::new(),
        body: body.to_vec(),
        ret: None,
        span: Span::default(),
    };
    analyze_function(&f, &Env::new())
}

#[derive(Clone, Debug)]
pub struct FunctionAnalysis {
    pub decl: FunDecl,
    pub result: AnalysisResult,
    /// Present when another function calls this one.
    pub summary: Option<FunctionSummary>,
    pub recursion: Option<RecursionSolution>,
}

#[derive(Clone, Debug, Default)]
pub struct ProgramAnalysis {
    pub functions: Vec<FunctionAnalysis>,
}

impl ProgramAnalysis {
    pub fn get(&self, name: &str) -> Option<&FunctionAnalysis> {
        self.functions.iter().find(|f| f.decl.name == name)
    }
}

/// Analyzes every function in declaration order. Summaries are built only for
/// functions that some other function calls.
pub fn analyze_program(p: &Program) -> Result<ProgramAnalysis, AnalysisError> {
    let mut seen = BTreeSet::new();
    for d in &p.decls {
        if !seen.insert(d.name.as_str()) {
            return Err(AnalysisError::DuplicateFunction { name: d.name.clone() });
        }
    }
    let called: BTreeSet<String> = p
        .decls
        .iter()
        .flat_map(|d| d.callees().into_iter().filter(move |c| *c != d.name))
        .collect();

    let mut env = Env::new();
    let mut out = ProgramAnalysis::default();
    for (idx, d) in p.decls.iter().enumerate() {
        for c in d.callees() {
            if c != d.name && p.decls[idx + 1..].iter().any(|l| l.name == c) {
                return Err(AnalysisError::ForwardCall {
                    caller: d.name.clone(),
                    callee: c,
                    span: d.span,
                });
            }
        }
        let (result, summary, recursion) = if d.is_recursive() {
            match solve_recursion(d, &env) {
                Ok(sol) => {
                    let result = analyze_function_with(d, &env, Some(&sol.summary))?;
                    let summary = sol.summary.clone();
                    (result, Some(summary), Some(sol))
                }
                Err(AnalysisError::NoSolutionWithoutInfinity { .. }) => {
                    let ret = d.ret.clone().unwrap_or_default();
                    let empty = FunctionSummary::empty(&d.name, &d.params, &ret);
                    let mut result = analyze_function_with(d, &env, Some(&empty))?;
                    result.diagnostics.insert(
                        0,
                        Diagnostic {
                            span: d.span,
                            message: format!(
                                "recursive function `{}` has no solution without ∞; calls to it are unbounded",
                                d.name
                            ),
                        },
                    );
                    (result, Some(empty), None)
                }
                Err(e) => return Err(e),
            }
        } else {
            let result = analyze_function(d, &env)?;
            let summary = if called.contains(&d.name) {
                let nd = normalize_function(d);
                Some(build_summary(&result, &nd.params, nd.ret.as_deref())?)
            } else {
                None
            };
            (result, summary, None)
        };
        if let Some(s) = &summary {
            env.insert(s.clone());
        }
        out.functions.push(FunctionAnalysis {
            decl: d.clone(),
            result,
            summary,
            recursion,
        });
    }
    Ok(out)
}
