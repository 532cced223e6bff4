use std::collections::HashMap;

use crate::deltagraph::{DeltaGraph, DeltaList};
use crate::frontend::{BinOp, Cmd, CmdKind, Expr, ExprKind, Span};
use crate::matrix::{column_replace, mat_add, mat_mul, mat_star, PolyMatrix, PolyVector};
use crate::polynomial::{poly_add, ChoiceDomains, Monomial, Polynomial};
use crate::semiring::Coeff;

use super::summary::FunctionSummary;
use super::{AnalysisError, CallRecord, ChoiceKind, ChoiceOrigin, Diagnostic};

/// Summaries visible to an analysis, keyed by function name.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub summaries: HashMap<String, FunctionSummary>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn insert(&mut self, s: FunctionSummary) {
        self.summaries.insert(s.name.clone(), s);
    }
}

/// State of one derivation: the tracked variables, the choice positions
/// allocated so far and the `∞` index.
pub struct Engine<'a> {
    vars: Vec<String>,
    index: HashMap<String, usize>,
    pub(crate) graph: DeltaGraph,
    pub(crate) origins: Vec<ChoiceOrigin>,
    pub(crate) calls: Vec<CallRecord>,
    pub(crate) diagnostics: Vec<Diagnostic>,
    env: &'a Env,
    self_name: Option<String>,
    self_summary: Option<&'a FunctionSummary>,
    pending: Vec<DeltaList>,
}

impl<'a> Engine<'a> {
    pub fn new(vars: Vec<String>, env: &'a Env) -> Self {
        let index = vars.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        Engine {
            vars,
            index,
            graph: DeltaGraph::new(ChoiceDomains::default()),
            origins: Vec::new(),
            calls: Vec::new(),
            diagnostics: Vec::new(),
            env,
            self_name: None,
            self_summary: None,
            pending: Vec::new(),
        }
    }

    /// Resolves calls to `name` with `summary` instead of the environment.
    pub fn with_self(mut self, name: &str, summary: Option<&'a FunctionSummary>) -> Self {
        self.self_name = Some(name.to_string());
        self.self_summary = summary;
        self
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn domains(&self) -> &ChoiceDomains {
        self.graph.domains()
    }

    pub fn graph(&self) -> &DeltaGraph {
        &self.graph
    }

    fn idx(&self, name: &str) -> Result<usize, AnalysisError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| AnalysisError::UnknownVariable { name: name.to_string() })
    }

    fn allocate(&mut self, size: usize, span: Span, kind: ChoiceKind) -> usize {
        let position = self.graph.push_position(size);
        self.origins.push(ChoiceOrigin { position, span, kind });
        position
    }

    fn mark_inf(&mut self, deltas: DeltaList) {
        self.pending.push(deltas);
    }

    fn flush_inf(&mut self) {
        if !self.pending.is_empty() {
            let lists = std::mem::take(&mut self.pending);
            self.graph.insert_batch(lists);
        }
    }

    /// Vector of a flat expression.
    pub fn analyze_expr(&mut self, e: &Expr) -> Result<PolyVector, AnalysisError> {
        let n = self.vars.len();
        let mut v = PolyVector::zero(n);
        match &e.kind {
            ExprKind::Var(x) => {
                v.entries[self.idx(x)?] = Polynomial::constant(Coeff::M);
            }
            ExprKind::Bin(op, l, r) => {
                let (ExprKind::Var(a), ExprKind::Var(b)) = (&l.kind, &r.kind) else {
                    return Err(AnalysisError::NotFlat { span: e.span });
                };
                let (i, j) = (self.idx(a)?, self.idx(b)?);
                match op {
                    BinOp::Mul => {
                        v.entries[i] = Polynomial::constant(Coeff::W);
                        v.entries[j] = Polynomial::constant(Coeff::W);
                    }
                    BinOp::Add | BinOp::Sub => {
                        let q = self.allocate(3, e.span, ChoiceKind::Expression);
                        let left = choice_poly(q, [Coeff::M, Coeff::P, Coeff::W]);
                        let right = choice_poly(q, [Coeff::P, Coeff::M, Coeff::W]);
                        v.entries[i] = left;
                        v.entries[j] = poly_add(&v.entries[j], &right);
                    }
                }
            }
        }
        Ok(v)
    }

    pub fn analyze_seq(&mut self, cmds: &[Cmd]) -> Result<PolyMatrix, AnalysisError> {
        let mut acc: Option<PolyMatrix> = None;
        for c in cmds {
            let m = self.analyze_cmd(c)?;
            acc = Some(match acc {
                None => m,
                Some(a) => mat_mul(&a, &m)?,
            });
        }
        Ok(acc.unwrap_or_else(|| PolyMatrix::identity(self.vars.clone())))
    }

    pub fn analyze_cmd(&mut self, c: &Cmd) -> Result<PolyMatrix, AnalysisError> {
        let n = self.vars.len();
        let one = PolyMatrix::identity(self.vars.clone());
        let out = match &c.kind {
            CmdKind::Assign { target, expr } => {
                let v = self.analyze_expr(expr)?;
                column_replace(&one, self.idx(target)?, &v)?
            }
            CmdKind::If { then_body, else_body } => {
                let m1 = self.analyze_seq(then_body)?;
                let m2 = self.analyze_seq(else_body)?;
                mat_add(&m1, &m2)?
            }
            CmdKind::Loop { counter, body } => {
                let l = self.idx(counter)?;
                let star = mat_star(&self.analyze_seq(body)?);
                let mut out = self.diagonal_correction(&star);
                for i in 0..n {
                    for j in 0..n {
                        for mono in star.get(i, j).monomials() {
                            if mono.scalar == Coeff::P {
                                out.add_at(l, j, &Polynomial::from_monomial(mono.clone()));
                            }
                        }
                    }
                }
                out
            }
            CmdKind::While { body } => {
                let star = mat_star(&self.analyze_seq(body)?);
                let mut out = self.diagonal_correction(&star);
                for i in 0..n {
                    for j in 0..n {
                        for mono in star.get(i, j).monomials() {
                            if mono.scalar == Coeff::P {
                                out.add_at(i, j, &inf_of(mono));
                                self.mark_inf(mono.deltas.clone());
                            }
                        }
                    }
                }
                out
            }
            CmdKind::CallAssign { target, callee, args } => self.call(c.span, target, callee, args)?,
        };
        self.flush_inf();
        Ok(out)
    }

    /// `M*` plus `∞` on the diagonal wherever the diagonal exceeds `m`.
    fn diagonal_correction(&mut self, star: &PolyMatrix) -> PolyMatrix {
        let mut out = star.clone();
        for j in 0..star.dim() {
            for mono in star.get(j, j).monomials() {
                if mono.scalar > Coeff::M {
                    out.add_at(j, j, &inf_of(mono));
                    self.mark_inf(mono.deltas.clone());
                }
            }
        }
        out
    }

    fn call(&mut self, span: Span, target: &str, callee: &str, args: &[String]) -> Result<PolyMatrix, AnalysisError> {
        let summary: &FunctionSummary = if self.self_name.as_deref() == Some(callee) {
            self.self_summary.ok_or_else(|| AnalysisError::UnknownFunction {
                name: callee.to_string(),
                span,
            })?
        } else {
            self.env
                .summaries
                .get(callee)
                .ok_or_else(|| AnalysisError::UnknownFunction {
                    name: callee.to_string(),
                    span,
                })?
        };
        if summary.params.len() != args.len() {
            return Err(AnalysisError::ArityMismatch {
                name: callee.to_string(),
                expected: summary.params.len(),
                found: args.len(),
                span,
            });
        }
        let n = self.vars.len();
        let t = self.idx(target)?;
        let arg_rows: Vec<usize> = args.iter().map(|a| self.idx(a)).collect::<Result<_, _>>()?;
        let first_position = self.graph.domains().len();
        let k = summary.vectors.len();
        let mut col = PolyVector::zero(n);
        let mut position = None;
        match k {
            0 => {
                let inf = Polynomial::constant(Coeff::Inf);
                if arg_rows.is_empty() {
                    col.entries[t] = inf.clone();
                }
                for &r in &arg_rows {
                    col.entries[r] = inf.clone();
                }
                self.mark_inf(Vec::new());
                self.diagnostics.push(Diagnostic {
                    span,
                    message: format!(
                        "`{callee}` has no ∞-free assignment; its result is treated as unbounded"
                    ),
                });
            }
            1 => {
                for (p, &r) in arg_rows.iter().enumerate() {
                    let c = Polynomial::constant(summary.vectors[0][p]);
                    col.entries[r] = poly_add(&col.entries[r], &c);
                }
            }
            _ => {
                let q = self.allocate(
                    k,
                    span,
                    ChoiceKind::Call {
                        callee: callee.to_string(),
                    },
                );
                position = Some(q);
                for (tag, vector) in summary.vectors.iter().enumerate() {
                    for (p, &r) in arg_rows.iter().enumerate() {
                        let c = Polynomial::delta(vector[p], tag, q);
                        col.entries[r] = poly_add(&col.entries[r], &c);
                    }
                }
            }
        }
        self.calls.push(CallRecord {
            callee: callee.to_string(),
            span,
            first_position,
            position,
            k,
        });
        Ok(column_replace(&PolyMatrix::identity(self.vars.clone()), t, &col)?)
    }
}

/// `s0·δ(0,q) + s1·δ(1,q) + s2·δ(2,q)`.
fn choice_poly(q: usize, scalars: [Coeff; 3]) -> Polynomial {
    Polynomial::from_monomials(
        scalars
            .iter()
            .enumerate()
            .filter_map(|(v, &s)| Monomial::new(s, vec![crate::polynomial::Delta::new(v, q)])),
    )
}

fn inf_of(mono: &Monomial) -> Polynomial {
    Polynomial::from_monomial(Monomial {
        scalar: Coeff::Inf,
        deltas: mono.deltas.clone(),
    })
}
