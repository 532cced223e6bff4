use super::ast::{Cmd, CmdKind, Expr, ExprKind, FunDecl, Program};

pub fn program_to_string(p: &Program) -> String {
    let mut out = String::new();
    for (i, d) in p.decls.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&fundecl_to_string(d));
    }
    out
}

pub fn fundecl_to_string(f: &FunDecl) -> String {
    let params: Vec<String> = f.params.iter().map(|p| format!("int {p}")).collect();
    let mut out = format!("int {}({}) {{\n", f.name, params.join(", "));
    write_seq(&f.body, 1, &mut out);
    if let Some(r) = &f.ret {
        out.push_str(&format!("  return {r};\n"));
    }
    out.push_str("}\n");
    out
}

pub fn expr_to_string(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Var(v) => v.clone(),
        ExprKind::Bin(op, l, r) => {
            let ls = operand(l, false, *op);
            let rs = operand(r, true, *op);
            format!("{ls} {} {rs}", op.symbol())
        }
    }
}

fn operand(e: &Expr, right: bool, parent: super::ast::BinOp) -> String {
    use super::ast::BinOp::*;
    match &e.kind {
        ExprKind::Var(v) => v.clone(),
        ExprKind::Bin(op, _, _) => {
            let tighter = matches!((op, parent), (Mul, Add) | (Mul, Sub));
            let same_left = !right && (*op == Mul || parent != Mul);
            if tighter || same_left {
                expr_to_string(e)
            } else {
                format!("({})", expr_to_string(e))
            }
        }
    }
}

/// One-line rendering of a simple command; compound commands are rendered
/// over several lines.
pub fn cmd_to_string(c: &Cmd) -> String {
    let mut out = String::new();
    write_cmd(c, 0, &mut out);
    out.trim_end().to_string()
}

fn indent(level: usize, out: &mut String) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_seq(cmds: &[Cmd], level: usize, out: &mut String) {
    for c in cmds {
        write_cmd(c, level, out);
    }
}

fn write_cmd(c: &Cmd, level: usize, out: &mut String) {
    indent(level, out);
    match &c.kind {
        CmdKind::Assign { target, expr } => {
            out.push_str(&format!("{target} = {};\n", expr_to_string(expr)));
        }
        CmdKind::CallAssign { target, callee, args } => {
            out.push_str(&format!("{target} = {callee}({});\n", args.join(", ")));
        }
        CmdKind::If { then_body, else_body } => {
            out.push_str("if (b) {\n");
            write_seq(then_body, level + 1, out);
            indent(level, out);
            if else_body.is_empty() {
                out.push_str("}\n");
            } else {
                out.push_str("} else {\n");
                write_seq(else_body, level + 1, out);
                indent(level, out);
                out.push_str("}\n");
            }
        }
        CmdKind::While { body } => {
            out.push_str("while (b) {\n");
            write_seq(body, level + 1, out);
            indent(level, out);
            out.push_str("}\n");
        }
        CmdKind::Loop { counter, body } => {
            out.push_str(&format!("loop {counter} {{\n"));
            write_seq(body, level + 1, out);
            indent(level, out);
            out.push_str("}\n");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse;

    #[test]
    fn round_trip() {
        let src = "int f(a, b) { a = (a + b) * (a - b); if (a < b) { b = a - (b - a); } else { } \
                   while (1) { loop a { b = b; } } return b; }";
        let p = parse(src).unwrap();
        let printed = program_to_string(&p);
        let q = parse(&printed).unwrap();
        assert_eq!(p.without_spans(), q.without_spans());
    }

    #[test]
    fn parenthesizes_only_when_needed() {
        let p = parse("int f(a, b, c) { a = a - (b - c); b = (a * b) * c; c = a * (b + c); }").unwrap();
        let lines: Vec<String> = p.decls[0].body.iter().map(cmd_to_string).collect();
        assert_eq!(lines, vec!["a = a - (b - c);", "b = a * b * c;", "c = a * (b + c);"]);
    }
}
