use super::ast::{BinOp, Cmd, CmdKind, Expr, FunDecl, Program, Span};
use super::lexer::{lex, Tok, Token};
use super::FrontendError;

const KEYWORDS: &[&str] = &["int", "if", "else", "while", "loop", "return"];

const UNSUPPORTED_STMTS: &[&str] = &["for", "do", "switch", "goto", "break", "continue", "case", "default"];

const UNSUPPORTED_TYPES: &[&str] = &[
    "void", "char", "short", "long", "unsigned", "signed", "float", "double", "struct", "union", "enum", "const",
    "static", "extern", "bool", "_Bool",
];

pub fn parse(source: &str) -> Result<Program, FrontendError> {
    let tokens = lex(source)?;
    let mut p = Parser { toks: tokens, pos: 0 };
    let mut decls = Vec::new();
    loop {
        if p.peek() == &Tok::Eof {
            break;
        }
        decls.push(p.fundecl()?);
    }
    if decls.is_empty() {
        return Err(p.expected("a function declaration"));
    }
    Ok(Program { decls })
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expected(&self, what: &str) -> FrontendError {
        FrontendError::Syntax {
            span: self.span(),
            expected: what.to_string(),
            found: self.peek().describe(),
        }
    }

    fn unsupported(&self, construct: &str) -> FrontendError {
        FrontendError::Unsupported {
            span: self.span(),
            construct: construct.to_string(),
        }
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(q) if q == s)
    }

    fn eat_punct(&mut self, p: &str) -> Result<Span, FrontendError> {
        if self.is_punct(p) {
            Ok(self.bump().span)
        } else {
            Err(self.expected(&format!("`{p}`")))
        }
    }

    fn eat_keyword(&mut self, k: &str) -> Result<Span, FrontendError> {
        if self.is_ident(k) {
            Ok(self.bump().span)
        } else {
            Err(self.expected(&format!("`{k}`")))
        }
    }

    /// A variable or function name.
    fn name(&mut self) -> Result<(String, Span), FrontendError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let span = self.span();
                if s.contains("__") {
                    return Err(FrontendError::ReservedName { span, name: s });
                }
                if UNSUPPORTED_TYPES.contains(&s.as_str()) {
                    return Err(self.unsupported(&format!("type `{s}`")));
                }
                self.bump();
                Ok((s, span))
            }
            _ => Err(self.expected("a name")),
        }
    }

    fn check_type_keyword(&self) -> Result<(), FrontendError> {
        if let Tok::Ident(s) = self.peek() {
            if UNSUPPORTED_TYPES.contains(&s.as_str()) {
                return Err(self.unsupported(&format!("type `{s}`")));
            }
        }
        Ok(())
    }

    fn fundecl(&mut self) -> Result<FunDecl, FrontendError> {
        if self.is_punct("#") {
            return Err(self.unsupported("preprocessor directive"));
        }
        self.check_type_keyword()?;
        let span = self.eat_keyword("int")?;
        if self.is_punct("*") {
            return Err(self.unsupported("pointer"));
        }
        let (name, _) = self.name()?;
        self.eat_punct("(")?;
        let mut params = Vec::new();
        if self.is_ident("void") && matches!(self.peek_at(1), Tok::Punct(")")) {
            self.bump();
        } else if !self.is_punct(")") {
            loop {
                self.check_type_keyword()?;
                if self.is_ident("int") {
                    self.bump();
                }
                if self.is_punct("*") {
                    return Err(self.unsupported("pointer"));
                }
                let (p, pspan) = self.name()?;
                if self.is_punct("[") {
                    return Err(self.unsupported("array"));
                }
                if params.contains(&p) {
                    return Err(FrontendError::Syntax {
                        span: pspan,
                        expected: "distinct parameter names".into(),
                        found: format!("duplicate `{p}`"),
                    });
                }
                params.push(p);
                if self.is_punct(",") {
                    self.bump();
                    continue;
                }
                break;
            }
        }
        self.eat_punct(")")?;
        self.eat_punct("{")?;
        let mut body = Vec::new();
        let mut ret = None;
        loop {
            if self.is_punct("}") {
                self.bump();
                break;
            }
            if self.is_ident("return") {
                self.bump();
                if self.is_punct(";") {
                    self.bump();
                } else {
                    if matches!(self.peek(), Tok::Int(_)) {
                        return Err(self.unsupported("integer literal in return"));
                    }
                    let (r, _) = self.name()?;
                    self.eat_punct(";")?;
                    ret = Some(r);
                }
                self.eat_punct("}")?;
                break;
            }
            self.stmt(&mut body)?;
        }
        Ok(FunDecl {
            name,
            params,
            body,
            ret,
            span,
        })
    }

    fn block_or_stmt(&mut self) -> Result<Vec<Cmd>, FrontendError> {
        let mut out = Vec::new();
        if self.is_punct("{") {
            self.bump();
            while !self.is_punct("}") {
                if self.peek() == &Tok::Eof {
                    return Err(self.expected("`}`"));
                }
                self.stmt(&mut out)?;
            }
            self.bump();
        } else {
            self.stmt(&mut out)?;
        }
        Ok(out)
    }

    fn stmt(&mut self, out: &mut Vec<Cmd>) -> Result<(), FrontendError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Punct(";") => {
                self.bump();
            }
            Tok::Punct("{") => {
                out.extend(self.block_or_stmt()?);
            }
            Tok::Punct("#") => return Err(self.unsupported("preprocessor directive")),
            Tok::Punct("*") => return Err(self.unsupported("pointer dereference")),
            Tok::Punct("++") | Tok::Punct("--") => return Err(self.unsupported("increment operator")),
            Tok::Ident(k) if k == "int" => {
                self.bump();
                if self.is_punct("*") {
                    return Err(self.unsupported("pointer"));
                }
                loop {
                    let (name, nspan) = self.name()?;
                    if self.is_punct("[") {
                        return Err(self.unsupported("array"));
                    }
                    if self.is_punct("=") {
                        self.bump();
                        out.push(self.rhs(name, nspan)?);
                    }
                    if self.is_punct(",") {
                        self.bump();
                        continue;
                    }
                    break;
                }
                self.eat_punct(";")?;
            }
            Tok::Ident(k) if k == "if" => {
                self.bump();
                self.condition()?;
                let then_body = self.block_or_stmt()?;
                let else_body = if self.is_ident("else") {
                    self.bump();
                    self.block_or_stmt()?
                } else {
                    Vec::new()
                };
                out.push(Cmd::if_else(then_body, else_body).with_span(span));
            }
            Tok::Ident(k) if k == "while" => {
                self.bump();
                self.condition()?;
                let body = self.block_or_stmt()?;
                out.push(Cmd::while_loop(body).with_span(span));
            }
            Tok::Ident(k) if k == "loop" => {
                self.bump();
                let (counter, _) = self.name()?;
                let body = self.block_or_stmt()?;
                out.push(Cmd::loop_n(counter, body).with_span(span));
            }
            Tok::Ident(k) if k == "else" => return Err(self.expected("a statement")),
            Tok::Ident(k) if UNSUPPORTED_STMTS.contains(&k.as_str()) => {
                return Err(self.unsupported(&format!("`{k}` statement")));
            }
            Tok::Ident(k) if UNSUPPORTED_TYPES.contains(&k.as_str()) => {
                return Err(self.unsupported(&format!("type `{k}`")));
            }
            Tok::Ident(_) => {
                let (target, tspan) = self.name()?;
                match self.peek() {
                    Tok::Punct("[") => return Err(self.unsupported("array")),
                    Tok::Punct("+=") | Tok::Punct("-=") | Tok::Punct("*=") | Tok::Punct("/=") => {
                        return Err(self.unsupported("compound assignment"))
                    }
                    Tok::Punct("++") | Tok::Punct("--") => return Err(self.unsupported("increment operator")),
                    Tok::Punct("(") => return Err(self.unsupported("call without assignment")),
                    _ => {}
                }
                self.eat_punct("=")?;
                out.push(self.rhs(target, tspan)?);
                self.eat_punct(";")?;
            }
            _ => return Err(self.expected("a statement")),
        }
        Ok(())
    }

    /// Right-hand side after `target =`: a call or an expression.
    fn rhs(&mut self, target: String, span: Span) -> Result<Cmd, FrontendError> {
        if let (Tok::Ident(_), Tok::Punct("(")) = (self.peek(), self.peek_at(1)) {
            let (callee, _) = self.name()?;
            self.bump();
            let mut args = Vec::new();
            if !self.is_punct(")") {
                loop {
                    if matches!(self.peek(), Tok::Int(_)) {
                        return Err(self.unsupported("integer literal argument"));
                    }
                    let (a, _) = self.name()?;
                    if !self.is_punct(",") && !self.is_punct(")") {
                        return Err(self.unsupported("expression argument"));
                    }
                    args.push(a);
                    if self.is_punct(",") {
                        self.bump();
                        continue;
                    }
                    break;
                }
            }
            self.eat_punct(")")?;
            return Ok(Cmd::new(CmdKind::CallAssign { target, callee, args }).with_span(span));
        }
        let expr = self.expr()?;
        Ok(Cmd::assign(target, expr).with_span(span))
    }

    fn expr(&mut self) -> Result<Expr, FrontendError> {
        let mut left = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Punct("+") => BinOp::Add,
                Tok::Punct("-") => BinOp::Sub,
                _ => break,
            };
            let span = self.bump().span;
            let right = self.term()?;
            left = Expr::bin(op, left, right).with_span(span);
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<Expr, FrontendError> {
        let mut left = self.factor()?;
        loop {
            match self.peek() {
                Tok::Punct("*") => {}
                Tok::Punct("/") => return Err(self.unsupported("division")),
                Tok::Punct("%") => return Err(self.unsupported("modulo")),
                _ => break,
            }
            let span = self.bump().span;
            let right = self.factor()?;
            left = Expr::bin(BinOp::Mul, left, right).with_span(span);
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<Expr, FrontendError> {
        match self.peek() {
            Tok::Punct("(") => {
                self.bump();
                let e = self.expr()?;
                self.eat_punct(")")?;
                Ok(e)
            }
            Tok::Int(_) => Err(self.unsupported("integer literal in arithmetic")),
            Tok::Punct("-") => Err(self.unsupported("unary minus")),
            Tok::Punct("*") | Tok::Punct("&") => Err(self.unsupported("pointer")),
            Tok::Ident(_) => {
                if matches!(self.peek_at(1), Tok::Punct("(")) {
                    return Err(self.unsupported("call inside an expression"));
                }
                let (name, span) = self.name()?;
                if self.is_punct("[") {
                    return Err(self.unsupported("array"));
                }
                Ok(Expr::var(name).with_span(span))
            }
            _ => Err(self.expected("an expression")),
        }
    }

    /// A parenthesized condition. Its tokens are checked and dropped.
    fn condition(&mut self) -> Result<(), FrontendError> {
        self.eat_punct("(")?;
        let mut depth = 1usize;
        let mut empty = true;
        loop {
            match self.peek().clone() {
                Tok::Punct("(") => depth += 1,
                Tok::Punct(")") => {
                    depth -= 1;
                    if depth == 0 {
                        if empty {
                            return Err(self.expected("a condition"));
                        }
                        self.bump();
                        return Ok(());
                    }
                }
                Tok::Punct("{") | Tok::Punct("}") | Tok::Punct(";") | Tok::Punct("=") | Tok::Eof => {
                    return Err(self.expected("`)`"));
                }
                Tok::Punct("[") => return Err(self.unsupported("array")),
                Tok::Punct("->") | Tok::Punct(".") => return Err(self.unsupported("member access")),
                Tok::Ident(_) => {
                    if matches!(self.peek_at(1), Tok::Punct("(")) {
                        return Err(self.unsupported("call inside a condition"));
                    }
                    self.name()?;
                    empty = false;
                    continue;
                }
                _ => {}
            }
            empty = false;
            self.bump();
        }
    }
}
