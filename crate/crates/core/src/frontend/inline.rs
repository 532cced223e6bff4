use std::collections::{BTreeSet, HashMap};

use super::ast::{walk_cmds, Cmd, CmdKind, Expr, ExprKind, FunDecl};
use super::normalize::collect_vars;
use super::FrontendError;

/// Pre-order indices of every call command in the body.
pub fn call_sites(f: &FunDecl) -> Vec<usize> {
    let mut out = Vec::new();
    let mut idx = 0usize;
    walk_cmds(&f.body, &mut |c| {
        if matches!(c.kind, CmdKind::CallAssign { .. }) {
            out.push(idx);
        }
        idx += 1;
    });
    out
}

/// Fresh name for a renamed parameter: `X1` becomes `X__p1`, names without
/// a numeric suffix get `__p` appended.
fn primed(name: &str) -> String {
    let digits = name.chars().rev().take_while(|c| c.is_ascii_digit()).count();
    let (stem, num) = name.split_at(name.len() - digits);
    if digits > 0 && !stem.is_empty() {
        format!("{stem}__p{num}")
    } else {
        format!("{name}__p")
    }
}

fn fresh(base: String, taken: &mut BTreeSet<String>) -> String {
    let mut name = base.clone();
    let mut k = 1;
    while taken.contains(&name) {
        name = format!("{base}_{k}");
        k += 1;
    }
    taken.insert(name.clone());
    name
}

/// Replaces the call at pre-order index `site` by the callee's body.
///
/// The call `Xi = f(A1, …, An)` becomes `P1 = A1; …; Pn = An;` followed by the
/// callee body with parameters renamed to the fresh `Pk`, the returned
/// variable renamed to a fresh `__R`, and finally `Xi = __R`. Callee locals
/// are renamed to fresh names as well. When the returned variable is a
/// parameter, its copy initializes `__R` directly.
pub fn inline_call(caller: &FunDecl, site: usize, callee: &FunDecl) -> Result<FunDecl, FrontendError> {
    if callee.is_recursive() {
        return Err(FrontendError::RecursiveCallee {
            name: callee.name.clone(),
        });
    }
    let Some(ret) = callee.ret.clone() else {
        return Err(FrontendError::NoReturnValue {
            name: callee.name.clone(),
        });
    };

    let mut taken: BTreeSet<String> = collect_vars(caller).into_iter().collect();
    let mut rename: HashMap<String, String> = HashMap::new();
    let r_name = fresh("__R".to_string(), &mut taken);
    rename.insert(ret.clone(), r_name.clone());
    for p in &callee.params {
        if *p != ret {
            let n = fresh(primed(p), &mut taken);
            rename.insert(p.clone(), n);
        }
    }
    for v in collect_vars(callee) {
        if !rename.contains_key(&v) {
            let n = fresh(format!("{v}__l"), &mut taken);
            rename.insert(v, n);
        }
    }

    let mut idx = 0usize;
    let mut done = false;
    let body = replace_seq(&caller.body, site, &mut idx, &mut done, &mut |target, callee_name, args, span| {
        if callee_name != callee.name {
            return Err(FrontendError::InlineSite {
                site,
                reason: format!("call targets `{callee_name}`, not `{}`", callee.name),
            });
        }
        if args.len() != callee.params.len() {
            return Err(FrontendError::InlineSite {
                site,
                reason: format!("{} arguments for {} parameters", args.len(), callee.params.len()),
            });
        }
        let mut out = Vec::new();
        for (p, a) in callee.params.iter().zip(args) {
            out.push(Cmd::assign(rename[p].clone(), Expr::var(a.clone()).with_span(span)).with_span(span));
        }
        out.extend(rename_seq(&callee.body, &rename));
        out.push(Cmd::assign(target.to_string(), Expr::var(r_name.clone()).with_span(span)).with_span(span));
        Ok(out)
    })?;
    if !done {
        return Err(FrontendError::InlineSite {
            site,
            reason: "no call at this index".into(),
        });
    }
    Ok(FunDecl {
        body,
        ..caller.clone()
    })
}

type Expand<'a> = dyn FnMut(&str, &str, &[String], super::ast::Span) -> Result<Vec<Cmd>, FrontendError> + 'a;

fn replace_seq(
    cmds: &[Cmd],
    site: usize,
    idx: &mut usize,
    done: &mut bool,
    expand: &mut Expand<'_>,
) -> Result<Vec<Cmd>, FrontendError> {
    let mut out = Vec::with_capacity(cmds.len());
    for c in cmds {
        let here = *idx;
        *idx += 1;
        if here == site {
            match &c.kind {
                CmdKind::CallAssign { target, callee, args } => {
                    out.extend(expand(target, callee, args, c.span)?);
                    *done = true;
                    continue;
                }
                _ => {
                    return Err(FrontendError::InlineSite {
                        site,
                        reason: "command is not a call".into(),
                    })
                }
            }
        }
        let kind = match &c.kind {
            CmdKind::If { then_body, else_body } => CmdKind::If {
                then_body: replace_seq(then_body, site, idx, done, expand)?,
                else_body: replace_seq(else_body, site, idx, done, expand)?,
            },
            CmdKind::While { body } => CmdKind::While {
                body: replace_seq(body, site, idx, done, expand)?,
            },
            CmdKind::Loop { counter, body } => CmdKind::Loop {
                counter: counter.clone(),
                body: replace_seq(body, site, idx, done, expand)?,
            },
            other => other.clone(),
        };
        out.push(Cmd { kind, span: c.span });
    }
    Ok(out)
}

fn rename_expr(e: &Expr, m: &HashMap<String, String>) -> Expr {
    let kind = match &e.kind {
        ExprKind::Var(v) => ExprKind::Var(m.get(v).cloned().unwrap_or_else(|| v.clone())),
        ExprKind::Bin(op, l, r) => ExprKind::Bin(*op, Box::new(rename_expr(l, m)), Box::new(rename_expr(r, m))),
    };
    Expr { kind, span: e.span }
}

fn rename_seq(cmds: &[Cmd], m: &HashMap<String, String>) -> Vec<Cmd> {
    let r = |v: &String| m.get(v).cloned().unwrap_or_else(|| v.clone());
    cmds.iter()
        .map(|c| {
            let kind = match &c.kind {
                CmdKind::Assign { target, expr } => CmdKind::Assign {
                    target: r(target),
                    expr: rename_expr(expr, m),
                },
                CmdKind::CallAssign { target, callee, args } => CmdKind::CallAssign {
                    target: r(target),
                    callee: callee.clone(),
                    args: args.iter().map(r).collect(),
                },
                CmdKind::If { then_body, else_body } => CmdKind::If {
                    then_body: rename_seq(then_body, m),
                    else_body: rename_seq(else_body, m),
                },
                CmdKind::While { body } => CmdKind::While {
                    body: rename_seq(body, m),
                },
                CmdKind::Loop { counter, body } => CmdKind::Loop {
                    counter: r(counter),
                    body: rename_seq(body, m),
                },
            };
            Cmd { kind, span: c.span }
        })
        .collect()
}
