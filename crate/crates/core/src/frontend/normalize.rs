use super::ast::{Cmd, CmdKind, Expr, ExprKind, FunDecl, Program};

/// Splits nested expressions into chains of flat assignments through fresh
/// temporaries `__t0, __t1, …` (numbered per function, left to right).
pub fn normalize_three_address(p: &Program) -> Program {
    Program {
        decls: p.decls.iter().map(normalize_function).collect(),
    }
}

pub fn normalize_function(f: &FunDecl) -> FunDecl {
    let mut counter = 0usize;
    FunDecl {
        body: normalize_seq(&f.body, &mut counter),
        ..f.clone()
    }
}

fn normalize_seq(cmds: &[Cmd], counter: &mut usize) -> Vec<Cmd> {
    let mut out = Vec::with_capacity(cmds.len());
    for c in cmds {
        match &c.kind {
            CmdKind::Assign { target, expr } => {
                let flat = match &expr.kind {
                    ExprKind::Var(_) => expr.clone(),
                    ExprKind::Bin(op, l, r) => {
                        let ln = flatten(l, counter, &mut out);
                        let rn = flatten(r, counter, &mut out);
                        Expr::bin(*op, ln, rn).with_span(expr.span)
                    }
                };
                out.push(Cmd::assign(target.clone(), flat).with_span(c.span));
            }
            CmdKind::CallAssign { .. } => out.push(c.clone()),
            CmdKind::If { then_body, else_body } => out.push(
                Cmd::if_else(normalize_seq(then_body, counter), normalize_seq(else_body, counter))
                    .with_span(c.span),
            ),
            CmdKind::While { body } => {
                out.push(Cmd::while_loop(normalize_seq(body, counter)).with_span(c.span))
            }
            CmdKind::Loop { counter: x, body } => out.push(
                Cmd::loop_n(x.clone(), normalize_seq(body, counter)).with_span(c.span),
            ),
        }
    }
    out
}

/// Returns a variable expression holding the value of `e`, emitting the
/// assignments needed to compute it.
fn flatten(e: &Expr, counter: &mut usize, out: &mut Vec<Cmd>) -> Expr {
    match &e.kind {
        ExprKind::Var(_) => e.clone(),
        ExprKind::Bin(op, l, r) => {
            let ln = flatten(l, counter, out);
            let rn = flatten(r, counter, out);
            let name = format!("__t{counter}");
            *counter += 1;
            out.push(Cmd::assign(name.clone(), Expr::bin(*op, ln, rn).with_span(e.span)).with_span(e.span));
            Expr::var(name).with_span(e.span)
        }
    }
}

/// Parameters in declaration order, then every other variable in order of
/// first occurrence (assignment targets before their operands), then the
/// returned variable.
pub fn collect_vars(f: &FunDecl) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut push = |v: &str, out: &mut Vec<String>| {
        if !out.iter().any(|x| x == v) {
            out.push(v.to_string());
        }
    };
    for p in &f.params {
        push(p, &mut out);
    }
    fn walk(cmds: &[Cmd], out: &mut Vec<String>, push: &mut dyn FnMut(&str, &mut Vec<String>)) {
        for c in cmds {
            match &c.kind {
                CmdKind::Assign { target, expr } => {
                    push(target, out);
                    for v in expr.vars() {
                        push(v, out);
                    }
                }
                CmdKind::CallAssign { target, args, .. } => {
                    push(target, out);
                    for a in args {
                        push(a, out);
                    }
                }
                CmdKind::If { then_body, else_body } => {
                    walk(then_body, out, push);
                    walk(else_body, out, push);
                }
                CmdKind::While { body } => walk(body, out, push),
                CmdKind::Loop { counter, body } => {
                    push(counter, out);
                    walk(body, out, push);
                }
            }
        }
    }
    walk(&f.body, &mut out, &mut push);
    if let Some(r) = &f.ret {
        push(r, &mut out);
    }
    out
}
