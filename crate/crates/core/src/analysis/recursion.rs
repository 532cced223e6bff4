use crate::frontend::{collect_vars, normalize_function, FunDecl};
use crate::polynomial::{Assignment, ChoiceDomains};
use crate::semiring::Coeff;

use super::engine::{Engine, Env};
use super::summary::{summary_rows, FunctionSummary};
use super::AnalysisError;

/// Outcome of solving a self-recursive function for its own summary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionSolution {
    /// For each assignment admitting a solution, its minimal solutions
    /// (values of the parameter rows).
    pub per_assignment: Vec<(Assignment, Vec<Vec<Coeff>>)>,
    /// Solutions not dominated by any other, across all assignments.
    pub minimal: Vec<Vec<Coeff>>,
    pub summary: FunctionSummary,
}

fn dominated(x: &[Coeff], y: &[Coeff]) -> bool {
    x != y && y.iter().zip(x).all(|(a, b)| a <= b)
}

fn minimal_of(sols: &[Vec<Coeff>]) -> Vec<Vec<Coeff>> {
    sols.iter()
        .filter(|x| !sols.iter().any(|y| dominated(x, y)))
        .cloned()
        .collect()
}

/// Every vector over `{m, w, p, ∞}` of length `r`, in increasing
/// lexicographic order.
fn valuations(r: usize) -> Vec<Vec<Coeff>> {
    const VALUES: [Coeff; 4] = [Coeff::M, Coeff::W, Coeff::P, Coeff::Inf];
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|v| {
                VALUES.iter().map(move |&c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

/// Solves the summary of a self-recursive function.
///
/// The self-call is analyzed as a call with a single outcome `v`, for every
/// candidate `v` over the non-zero grades. At an assignment `a`, `v` is a
/// solution when the body's matrix is `∞`-free and the returned variable's
/// column reproduces `v` on the parameter rows. The summary keeps the
/// solutions that are minimal across all assignments.
pub fn solve_recursion(f: &FunDecl, env: &Env) -> Result<RecursionSolution, AnalysisError> {
    let f = normalize_function(f);
    let ret = f.ret.clone().ok_or_else(|| AnalysisError::NoReturnValue { name: f.name.clone() })?;
    let vars = collect_vars(&f);
    let rows = summary_rows(&f.params, &ret);
    let pos_of = |name: &str| vars.iter().position(|v| v == name).expect("collected variable");
    let row_idx: Vec<usize> = rows.iter().map(|r| pos_of(r)).collect();
    let r = pos_of(&ret);
    let nparams = f.params.len();

    let mut analyses = Vec::new();
    for v in valuations(nparams) {
        let mut full = v.clone();
        full.resize(rows.len(), Coeff::Zero);
        let s = FunctionSummary {
            name: f.name.clone(),
            params: f.params.clone(),
            rows: rows.clone(),
            vectors: vec![full],
            assignments: vec![Assignment::default()],
        };
        let mut engine = Engine::new(vars.clone(), env).with_self(&f.name, Some(&s));
        let m = engine.analyze_seq(&f.body)?;
        analyses.push((v, m, engine.graph().clone()));
    }

    let domains = analyses
        .first()
        .map(|(_, _, g)| g.domains().clone())
        .unwrap_or_default();
    let mut relevant = vec![false; domains.len()];
    for (_, m, g) in &analyses {
        for &i in &row_idx {
            for p in m.get(i, r).positions() {
                relevant[p] = true;
            }
        }
        for l in g.lists() {
            for d in l {
                relevant[d.position] = true;
            }
        }
    }
    let space = ChoiceDomains::new(
        domains
            .sizes
            .iter()
            .zip(&relevant)
            .map(|(&s, &k)| if k { s } else { 1 })
            .collect(),
    );

    let mut per_assignment = Vec::new();
    let mut found: Vec<(Vec<Coeff>, Vec<Coeff>, Assignment)> = Vec::new();
    for a in space.assignments() {
        let mut sols: Vec<(Vec<Coeff>, Vec<Coeff>)> = Vec::new();
        for (v, m, _) in &analyses {
            let e = m.eval(&a);
            if e.has_inf() {
                continue;
            }
            let col: Vec<Coeff> = row_idx.iter().map(|&i| e.get(i, r)).collect();
            if col[..nparams] == v[..] {
                sols.push((v.clone(), col));
            }
        }
        if sols.is_empty() {
            continue;
        }
        let params_only: Vec<Vec<Coeff>> = sols.iter().map(|(v, _)| v.clone()).collect();
        let mins = minimal_of(&params_only);
        for (v, col) in &sols {
            if mins.contains(v) && !found.iter().any(|(w, _, _)| w == v) {
                found.push((v.clone(), col.clone(), a.clone()));
            }
        }
        per_assignment.push((a, mins));
    }

    let all: Vec<Vec<Coeff>> = found.iter().map(|(v, _, _)| v.clone()).collect();
    let minimal: Vec<Vec<Coeff>> = minimal_of(&all)
        .into_iter()
        .filter(|v| !v.iter().any(|c| c.is_inf()))
        .collect();
    if minimal.is_empty() {
        return Err(AnalysisError::NoSolutionWithoutInfinity { name: f.name.clone() });
    }
    let mut vectors = Vec::new();
    let mut assignments = Vec::new();
    for (v, col, a) in &found {
        if minimal.contains(v) && !vectors.contains(col) {
            vectors.push(col.clone());
            assignments.push(a.clone());
        }
    }
    Ok(RecursionSolution {
        per_assignment,
        minimal,
        summary: FunctionSummary {
            name: f.name.clone(),
            params: f.params.clone(),
            rows,
            vectors,
            assignments,
        },
    })
}
