use serde::Serialize;

use crate::deltagraph::unmatched_assignments;
use crate::polynomial::{Assignment, ChoiceDomains};
use crate::semiring::Coeff;

use super::{AnalysisError, AnalysisResult};

/// What a call site needs to know about a callee: one coefficient vector per
/// usable (`∞`-free) outcome of the callee's choices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionSummary {
    pub name: String,
    pub params: Vec<String>,
    /// Row names of each vector: the parameters, then the returned variable
    /// when it is not a parameter.
    pub rows: Vec<String>,
    /// Dependencies of the returned value on each row, pairwise distinct and
    /// `∞`-free.
    pub vectors: Vec<Vec<Coeff>>,
    /// For each vector, the first callee assignment producing it.
    pub assignments: Vec<Assignment>,
}

impl FunctionSummary {
    pub fn k(&self) -> usize {
        self.vectors.len()
    }

    /// A summary with no usable outcome.
    pub fn empty(name: &str, params: &[String], ret: &str) -> Self {
        FunctionSummary {
            name: name.to_string(),
            params: params.to_vec(),
            rows: summary_rows(params, ret),
            vectors: Vec::new(),
            assignments: Vec::new(),
        }
    }
}

pub(crate) fn summary_rows(params: &[String], ret: &str) -> Vec<String> {
    let mut rows = params.to_vec();
    if !rows.iter().any(|p| p == ret) {
        rows.push(ret.to_string());
    }
    rows
}

/// Builds the summary of an analyzed function by enumerating its `∞`-free
/// assignments and projecting the returned variable's column.
///
/// Only positions that occur in that column or in the `∞` index can change
/// the outcome, so all other positions stay at 0 during the enumeration.
pub fn build_summary(result: &AnalysisResult, params: &[String], ret: Option<&str>) -> Result<FunctionSummary, AnalysisError> {
    let ret = ret.ok_or_else(|| AnalysisError::NoReturnValue {
        name: result.name.clone(),
    })?;
    let rows = summary_rows(params, ret);
    let row_idx: Vec<usize> = rows
        .iter()
        .map(|r| {
            result
                .vars
                .iter()
                .position(|v| v == r)
                .ok_or_else(|| AnalysisError::UnknownVariable { name: r.clone() })
        })
        .collect::<Result<_, _>>()?;
    let r = row_idx[rows.iter().position(|x| x == ret).expect("returned variable is a row")];

    let mut relevant = vec![false; result.domains.len()];
    for &i in &row_idx {
        for p in result.matrix.get(i, r).positions() {
            relevant[p] = true;
        }
    }
    for l in result.graph.lists() {
        for d in l {
            relevant[d.position] = true;
        }
    }
    let mut graph = result.graph.clone();
    graph.set_domains(ChoiceDomains::new(
        result
            .domains
            .sizes
            .iter()
            .zip(&relevant)
            .map(|(&s, &keep)| if keep { s } else { 1 })
            .collect(),
    ));

    let mut vectors: Vec<Vec<Coeff>> = Vec::new();
    let mut assignments = Vec::new();
    for a in unmatched_assignments(&graph) {
        let m = result.matrix.eval(&a);
        if m.has_inf() {
            continue;
        }
        let v: Vec<Coeff> = row_idx.iter().map(|&i| m.get(i, r)).collect();
        if !vectors.contains(&v) {
            vectors.push(v);
            assignments.push(a);
        }
    }
    Ok(FunctionSummary {
        name: result.name.clone(),
        params: params.to_vec(),
        rows,
        vectors,
        assignments,
    })
}
