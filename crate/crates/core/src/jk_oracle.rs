//! Reference implementation of the original nondeterministic flow calculus,
//! by exhaustive enumeration of derivations. Test-scale only.
//!
//! Each derivation is keyed by its tag sequence: one entry per addition or
//! subtraction in depth-first order, 0 for `i:m, j:p`, 1 for `i:p, j:m` and 2
//! for `i:w, j:w`. This is the numbering of the deterministic engine, so a
//! tag sequence is directly an assignment. A derivation is *clean* when it
//! never types a bare variable with `w`; the deterministic engine only
//! produces clean derivations, the others are dominated by them.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::analysis::{analyze_function, AnalysisError, Env};
use crate::frontend::{collect_vars, normalize_function, BinOp, Cmd, CmdKind, Expr, ExprKind, FunDecl};
use crate::matrix::CoeffMatrix;
use crate::polynomial::Assignment;
use crate::semiring::Coeff;

/// Default limit on the number of additions and subtractions.
pub const DEFAULT_BUDGET: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{positions} choice positions exceed the oracle budget of {budget}")]
    BudgetExceeded { positions: usize, budget: usize },
    #[error("the oracle does not support function calls (`{callee}`)")]
    CallUnsupported { callee: String },
    #[error("unknown variable `{name}`")]
    UnknownVariable { name: String },
    #[error("expression is not in three-address form")]
    NotFlat,
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// One derivation of an expression.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExprDerivation {
    /// Tag of the addition or subtraction, if the expression has one.
    pub tag: Option<usize>,
    pub vector: Vec<Coeff>,
    pub clean: bool,
}

/// Derivations of a command, keyed by tag sequence and matrix. The flag
/// records whether some derivation with that key is clean.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DerivationSet {
    entries: BTreeMap<(Vec<usize>, CoeffMatrix), bool>,
}

impl DerivationSet {
    fn insert(&mut self, tags: Vec<usize>, m: CoeffMatrix, clean: bool) {
        let e = self.entries.entry((tags, m)).or_insert(false);
        *e |= clean;
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], &CoeffMatrix, bool)> {
        self.entries.iter().map(|((t, m), c)| (t.as_slice(), m, *c))
    }

    /// Every derivable matrix.
    pub fn matrices(&self) -> BTreeSet<CoeffMatrix> {
        self.entries.keys().map(|(_, m)| m.clone()).collect()
    }

    /// Matrices of clean derivations.
    pub fn clean_matrices(&self) -> BTreeSet<CoeffMatrix> {
        self.iter().filter(|(_, _, c)| *c).map(|(_, m, _)| m.clone()).collect()
    }

    /// Clean matrix per tag sequence.
    pub fn clean_by_tags(&self) -> HashMap<Vec<usize>, CoeffMatrix> {
        self.iter()
            .filter(|(_, _, c)| *c)
            .map(|(t, m, _)| (t.to_vec(), m.clone()))
            .collect()
    }
}

fn idx(vars: &[String], name: &str) -> Result<usize, OracleError> {
    vars.iter()
        .position(|v| v == name)
        .ok_or_else(|| OracleError::UnknownVariable { name: name.to_string() })
}

fn unit(n: usize, i: usize, c: Coeff) -> Vec<Coeff> {
    let mut v = vec![Coeff::Zero; n];
    v[i] = c;
    v
}

/// All derivations of a flat expression.
pub fn jk_expr(e: &Expr, vars: &[String]) -> Result<Vec<ExprDerivation>, OracleError> {
    let n = vars.len();
    let mut out = BTreeSet::new();
    match &e.kind {
        ExprKind::Var(x) => {
            let i = idx(vars, x)?;
            out.insert(ExprDerivation {
                tag: None,
                vector: unit(n, i, Coeff::M),
                clean: true,
            });
            out.insert(ExprDerivation {
                tag: None,
                vector: unit(n, i, Coeff::W),
                clean: false,
            });
        }
        ExprKind::Bin(op, l, r) => {
            let (ExprKind::Var(a), ExprKind::Var(b)) = (&l.kind, &r.kind) else {
                return Err(OracleError::NotFlat);
            };
            let (i, j) = (idx(vars, a)?, idx(vars, b)?);
            let mut both_w = unit(n, i, Coeff::W);
            both_w[j] = Coeff::W;
            if *op == BinOp::Mul {
                out.insert(ExprDerivation {
                    tag: None,
                    vector: both_w,
                    clean: true,
                });
            } else {
                let premises = [(Coeff::M, true), (Coeff::W, false)];
                for &(ci, clean_i) in &premises {
                    for &(cj, clean_j) in &premises {
                        // i:m, j:p: p scales the right premise
                        let mut v = unit(n, i, ci);
                        v[j] = v[j].add(Coeff::P.mul(cj));
                        out.insert(ExprDerivation {
                            tag: Some(0),
                            vector: v,
                            clean: clean_i && clean_j,
                        });
                        // i:p, j:m: p scales the left premise
                        let mut v = unit(n, i, Coeff::P.mul(ci));
                        v[j] = v[j].add(cj);
                        out.insert(ExprDerivation {
                            tag: Some(1),
                            vector: v,
                            clean: clean_i && clean_j,
                        });
                    }
                }
                out.insert(ExprDerivation {
                    tag: Some(2),
                    vector: both_w,
                    clean: true,
                });
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn product(a: &DerivationSet, b: &DerivationSet, combine: impl Fn(&CoeffMatrix, &CoeffMatrix) -> CoeffMatrix) -> DerivationSet {
    let mut out = DerivationSet::default();
    for ((ta, ma), ca) in &a.entries {
        for ((tb, mb), cb) in &b.entries {
            let mut tags = ta.clone();
            tags.extend_from_slice(tb);
            out.insert(tags, combine(ma, mb), *ca && *cb);
        }
    }
    out
}

fn singleton(tags: Vec<usize>, m: CoeffMatrix) -> DerivationSet {
    let mut s = DerivationSet::default();
    s.insert(tags, m, true);
    s
}

/// All derivations of a command sequence.
pub fn jk_seq(cmds: &[Cmd], vars: &[String]) -> Result<DerivationSet, OracleError> {
    let mut acc = singleton(Vec::new(), CoeffMatrix::identity(vars.len()));
    for c in cmds {
        let d = jk_cmd(c, vars)?;
        acc = product(&acc, &d, |x, y| x.mul(y));
    }
    Ok(acc)
}

/// All derivations of a command. Loops whose side condition fails contribute
/// nothing.
pub fn jk_cmd(c: &Cmd, vars: &[String]) -> Result<DerivationSet, OracleError> {
    let n = vars.len();
    let mut out = DerivationSet::default();
    match &c.kind {
        CmdKind::Assign { target, expr } => {
            let t = idx(vars, target)?;
            let id = CoeffMatrix::identity(n);
            for d in jk_expr(expr, vars)? {
                out.insert(d.tag.into_iter().collect(), id.replace_column(t, &d.vector), d.clean);
            }
        }
        CmdKind::If { then_body, else_body } => {
            let a = jk_seq(then_body, vars)?;
            let b = jk_seq(else_body, vars)?;
            out = product(&a, &b, |x, y| x.add(y));
        }
        CmdKind::Loop { counter, body } => {
            let l = idx(vars, counter)?;
            for (tags, m, clean) in jk_seq(body, vars)?.iter() {
                let star = m.star();
                if (0..n).any(|i| star.get(i, i) != Coeff::M) {
                    continue;
                }
                let mut r = star.clone();
                for j in 0..n {
                    if (0..n).any(|i| star.get(i, j) == Coeff::P) {
                        r.set(l, j, r.get(l, j).add(Coeff::P));
                    }
                }
                out.insert(tags.to_vec(), r, clean);
            }
        }
        CmdKind::While { body } => {
            for (tags, m, clean) in jk_seq(body, vars)?.iter() {
                let star = m.star();
                let diag_ok = (0..n).all(|i| star.get(i, i) == Coeff::M);
                let no_p = star.rows().iter().flatten().all(|&c| c != Coeff::P);
                if diag_ok && no_p {
                    out.insert(tags.to_vec(), star, clean);
                }
            }
        }
        CmdKind::CallAssign { callee, .. } => {
            return Err(OracleError::CallUnsupported { callee: callee.clone() });
        }
    }
    Ok(out)
}

/// Number of additions and subtractions, which is the number of choice
/// positions of a call-free body.
pub fn count_positions(cmds: &[Cmd]) -> usize {
    let mut n = 0;
    crate::frontend::ast::walk_cmds(cmds, &mut |c| {
        if let CmdKind::Assign { expr, .. } = &c.kind {
            if let ExprKind::Bin(op, _, _) = &expr.kind {
                n += usize::from(op.is_additive());
            }
        }
    });
    n
}

/// All derivations of a function body, over its collected variables.
pub fn jk_function(f: &FunDecl, budget: usize) -> Result<(Vec<String>, DerivationSet), OracleError> {
    let f = normalize_function(f);
    let positions = count_positions(&f.body);
    if positions > budget {
        return Err(OracleError::BudgetExceeded { positions, budget });
    }
    let vars = collect_vars(&f);
    let d = jk_seq(&f.body, &vars)?;
    Ok((vars, d))
}

/// Outcome of comparing the engine with the oracle on one function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub equal: bool,
    /// `{M[a] : M[a] is ∞-free}`.
    pub engine: BTreeSet<CoeffMatrix>,
    /// Oracle matrices after dropping those only reachable through `w` on a
    /// bare variable.
    pub oracle: BTreeSet<CoeffMatrix>,
    /// Number of oracle matrices dropped that way.
    pub dominated: usize,
    pub mismatch: Option<String>,
}

/// Checks that the engine's `∞`-free matrices are exactly the oracle's
/// matrices, modulo dominated derivations. Also checks, per assignment, that
/// `M[a]` is `∞`-free iff the oracle has a derivation tagged `a`, and that
/// the two matrices then coincide.
pub fn jk_equals_deterministic(f: &FunDecl, budget: usize) -> Result<OracleReport, OracleError> {
    let (_, derivations) = jk_function(f, budget)?;
    let result = analyze_function(f, &Env::new())?;
    let clean = derivations.clean_by_tags();
    let all_tags: BTreeSet<Vec<usize>> = derivations.iter().map(|(t, _, _)| t.to_vec()).collect();

    let mut engine = BTreeSet::new();
    let mut mismatch = None;
    for a in result.domains.assignments() {
        let m = result.matrix.eval(&a);
        if m.has_inf() {
            if mismatch.is_none() && all_tags.contains(&a.choices) {
                mismatch = Some(format!("assignment {a} yields ∞ but has a derivation"));
            }
            continue;
        }
        match clean.get(&a.choices) {
            Some(o) if *o == m => {}
            Some(o) if mismatch.is_none() => {
                mismatch = Some(format!("assignment {a}: engine gives\n{m}oracle gives\n{o}"));
            }
            None if mismatch.is_none() => {
                mismatch = Some(format!("assignment {a} is ∞-free but has no derivation"));
            }
            _ => {}
        }
        engine.insert(m);
    }
    for (tags, m, is_clean) in derivations.iter() {
        if mismatch.is_some() {
            break;
        }
        if !is_clean && !clean.get(tags).is_some_and(|c| c.le(m)) {
            mismatch = Some(format!(
                "derivation {} is not dominated by a clean one",
                Assignment::new(tags.to_vec())
            ));
        }
    }

    let clean_set = derivations.clean_matrices();
    let all = derivations.matrices();
    let oracle: BTreeSet<CoeffMatrix> = all
        .iter()
        .filter(|m| clean_set.contains(*m) || !clean_set.iter().any(|c| c.le(m)))
        .cloned()
        .collect();
    let dominated = all.len() - oracle.len();
    let equal = mismatch.is_none() && engine == oracle;
    if mismatch.is_none() && !equal {
        mismatch = Some("matrix sets differ".into());
    }
    Ok(OracleReport {
        equal,
        engine,
        oracle,
        dominated,
        mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{Cmd, Expr};

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("X{i}")).collect()
    }

    #[test]
    fn addition_has_three_clean_vectors() {
        use Coeff::*;
        let e = Expr::bin(BinOp::Add, Expr::var("X1"), Expr::var("X2"));
        let d = jk_expr(&e, &names(3)).unwrap();
        let clean: BTreeSet<Vec<Coeff>> = d.iter().filter(|d| d.clean).map(|d| d.vector.clone()).collect();
        let want: BTreeSet<Vec<Coeff>> = [vec![P, M, Zero], vec![M, P, Zero], vec![W, W, Zero]].into();
        assert_eq!(clean, want);
    }

    #[test]
    fn bare_variable_has_two_vectors() {
        let d = jk_expr(&Expr::var("X2"), &names(2)).unwrap();
        let vs: Vec<Vec<Coeff>> = d.iter().map(|d| d.vector.clone()).collect();
        assert_eq!(vs, vec![vec![Coeff::Zero, Coeff::M], vec![Coeff::Zero, Coeff::W]]);
    }

    #[test]
    fn calls_are_rejected() {
        let c = Cmd::call("X1", "f", &["X1"]);
        assert!(matches!(jk_cmd(&c, &names(1)), Err(OracleError::CallUnsupported { .. })));
    }
}
