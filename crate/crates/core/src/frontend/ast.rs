use std::fmt;

/// Source position, 1-based.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
        }
    }

    pub fn is_additive(self) -> bool {
        matches!(self, BinOp::Add | BinOp::Sub)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExprKind {
    Var(String),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Self {
        Expr {
            kind: ExprKind::Var(name.into()),
            span: Span::default(),
        }
    }

    pub fn bin(op: BinOp, l: Expr, r: Expr) -> Self {
        Expr {
            kind: ExprKind::Bin(op, Box::new(l), Box::new(r)),
            span: Span::default(),
        }
    }

    pub fn with_span(mut self, span: Span) -> Self {
        self.span = span;
        self
    }

    /// A variable, or an operator applied to two variables.
    pub fn is_flat(&self) -> bool {
        match &self.kind {
            ExprKind::Var(_) => true,
            ExprKind::Bin(_, l, r) => {
                matches!(l.kind, ExprKind::Var(_)) && matches!(r.kind, ExprKind::Var(_))
            }
        }
    }

    /// Variables in left-to-right order, with repeats.
    pub fn vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match &self.kind {
            ExprKind::Var(v) => out.push(v),
            ExprKind::Bin(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    fn erase(&mut self) {
        self.span = Span::default();
        if let ExprKind::Bin(_, l, r) = &mut self.kind {
            l.erase();
            r.erase();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CmdKind {
    Assign { target: String, expr: Expr },
    If { then_body: Vec<Cmd>, else_body: Vec<Cmd> },
    While { body: Vec<Cmd> },
    Loop { counter: String, body: Vec<Cmd> },
    CallAssign { target: String, callee: String, args: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cmd {
    pub kind: CmdKind,
    pub span: Span,
}

impl Cmd {
    pub fn new(kind: CmdKind) -> Self {
        Cmd {
            kind,
            span: Span::default(),
        }
    }

    pub fn with_span(mut self, span: Span) -> Self {
        self.span = span;
        self
    }

    pub fn assign(target: impl Into<String>, expr: Expr) -> Self {
        Cmd::new(CmdKind::Assign {
            target: target.into(),
            expr,
        })
    }

    pub fn call(target: impl Into<String>, callee: impl Into<String>, args: &[&str]) -> Self {
        Cmd::new(CmdKind::CallAssign {
            target: target.into(),
            callee: callee.into(),
            args: args.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn if_else(then_body: Vec<Cmd>, else_body: Vec<Cmd>) -> Self {
        Cmd::new(CmdKind::If { then_body, else_body })
    }

    pub fn while_loop(body: Vec<Cmd>) -> Self {
        Cmd::new(CmdKind::While { body })
    }

    pub fn loop_n(counter: impl Into<String>, body: Vec<Cmd>) -> Self {
        Cmd::new(CmdKind::Loop {
            counter: counter.into(),
            body,
        })
    }

    /// Child sequences in evaluation order.
    pub fn children(&self) -> Vec<&[Cmd]> {
        match &self.kind {
            CmdKind::Assign { .. } | CmdKind::CallAssign { .. } => Vec::new(),
            CmdKind::If { then_body, else_body } => vec![then_body, else_body],
            CmdKind::While { body } | CmdKind::Loop { body, .. } => vec![body],
        }
    }

    fn erase(&mut self) {
        self.span = Span::default();
        match &mut self.kind {
            CmdKind::Assign { expr, .. } => expr.erase(),
            CmdKind::CallAssign { .. } => {}
            CmdKind::If { then_body, else_body } => {
                then_body.iter_mut().for_each(Cmd::erase);
                else_body.iter_mut().for_each(Cmd::erase);
            }
            CmdKind::While { body } | CmdKind::Loop { body, .. } => body.iter_mut().for_each(Cmd::erase),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunDecl {
    pub name: String,
    pub params: Vec<String>,
    pub body: Vec<Cmd>,
    pub ret: Option<String>,
    pub span: Span,
}

impl FunDecl {
    pub fn new(name: impl Into<String>, params: &[&str], body: Vec<Cmd>, ret: Option<&str>) -> Self {
        FunDecl {
            name: name.into(),
            params: params.iter().map(|s| s.to_string()).collect(),
            body,
            ret: ret.map(str::to_string),
            span: Span::default(),
        }
    }

    /// True when the body calls the function itself.
    pub fn is_recursive(&self) -> bool {
        let mut found = false;
        walk_cmds(&self.body, &mut |c| {
            if let CmdKind::CallAssign { callee, .. } = &c.kind {
                found |= *callee == self.name;
            }
        });
        found
    }

    /// Names of called functions, in first-call order.
    pub fn callees(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        walk_cmds(&self.body, &mut |c| {
            if let CmdKind::CallAssign { callee, .. } = &c.kind {
                if !out.contains(callee) {
                    out.push(callee.clone());
                }
            }
        });
        out
    }

    /// Number of commands (every node, including compound ones).
    pub fn command_count(&self) -> usize {
        let mut n = 0;
        walk_cmds(&self.body, &mut |_| n += 1);
        n
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Program {
    pub decls: Vec<FunDecl>,
}

impl Program {
    pub fn get(&self, name: &str) -> Option<&FunDecl> {
        self.decls.iter().find(|d| d.name == name)
    }

    /// Copy with every span reset, for structural comparisons.
    pub fn without_spans(&self) -> Program {
        let mut p = self.clone();
        for d in &mut p.decls {
            d.span = Span::default();
            d.body.iter_mut().for_each(Cmd::erase);
        }
        p
    }
}

/// Pre-order walk over a command sequence.
pub fn walk_cmds<'a>(cmds: &'a [Cmd], f: &mut dyn FnMut(&'a Cmd)) {
    for c in cmds {
        f(c);
        for child in c.children() {
            walk_cmds(child, f);
        }
    }
}
