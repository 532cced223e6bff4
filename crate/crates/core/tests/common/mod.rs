//! Shared generators, the program corpus and a concrete interpreter.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use mwp_core::frontend::{parse, BinOp, Cmd, CmdKind, Expr, ExprKind, FunDecl, Program};
use mwp_core::polynomial::{mono_product, ChoiceDomains, Delta, Monomial, Polynomial};
use mwp_core::semiring::Coeff;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("X{i}")).collect()
}

// ---- polynomials ----

pub fn random_coeff(r: &mut impl Rng, with_inf: bool) -> Coeff {
    let pool: &[Coeff] = if with_inf {
        &[Coeff::M, Coeff::W, Coeff::P, Coeff::Inf]
    } else {
        &[Coeff::M, Coeff::W, Coeff::P]
    };
    pool[r.gen_range(0..pool.len())]
}

/// A random polynomial over `positions` positions of size 3, with at most
/// `max_monos` monomials before canonicalization.
pub fn random_poly(r: &mut impl Rng, positions: usize, max_monos: usize, with_inf: bool) -> Polynomial {
    let count = r.gen_range(0..=max_monos);
    let mut monos = Vec::with_capacity(count);
    for _ in 0..count {
        let mut deltas = Vec::new();
        for p in 0..positions {
            if r.gen_bool(0.5) {
                deltas.push(Delta::new(r.gen_range(0..3), p));
            }
        }
        let scalar = if with_inf && r.gen_ratio(1, 8) {
            Coeff::Inf
        } else {
            random_coeff(r, false)
        };
        if let Some(m) = Monomial::new(scalar, deltas) {
            monos.push(m);
        }
    }
    Polynomial::from_monomials(monos)
}

pub fn domains(positions: usize) -> ChoiceDomains {
    ChoiceDomains::new(vec![3; positions])
}

/// Distribute every pair of monomials, keep each factor's `∞` monomials,
/// then canonicalize.
pub fn naive_mul(x: &Polynomial, y: &Polynomial) -> Polynomial {
    let mut out: Vec<Monomial> = Vec::new();
    for a in x.monomials() {
        for b in y.monomials() {
            if let Some(m) = mono_product(a, b) {
                out.push(m);
            }
        }
    }
    out.extend(x.inf_monomials().cloned());
    out.extend(y.inf_monomials().cloned());
    Polynomial::from_monomials(out)
}

// ---- corpus ----

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn corpus_source(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(format!("{name}.c"))).expect("corpus file")
}

pub fn corpus_program(name: &str) -> Program {
    parse(&corpus_source(name)).expect("corpus parses")
}

pub const CORPUS: &[&str] = &["gcd", "branch", "call", "call_inlined", "loop", "rec", "explosion"];

// ---- exhaustive small programs ----

fn var(n: &str) -> Expr {
    Expr::var(n)
}

/// Assignment atoms over `X1, X2, X3`: two additions (distinct and repeated
/// operand), a subtraction, a multiplication and a copy.
pub fn atoms() -> Vec<Cmd> {
    vec![
        Cmd::assign("X1", Expr::bin(BinOp::Add, var("X1"), var("X2"))),
        Cmd::assign("X2", Expr::bin(BinOp::Sub, var("X2"), var("X1"))),
        Cmd::assign("X3", Expr::bin(BinOp::Mul, var("X1"), var("X3"))),
        Cmd::assign("X2", var("X3")),
        Cmd::assign("X1", Expr::bin(BinOp::Add, var("X1"), var("X1"))),
        Cmd::assign("X3", Expr::bin(BinOp::Add, var("X2"), var("X3"))),
    ]
}

pub const LOOP_COUNTERS: &[&str] = &["X1", "X3"];

/// Every command of exactly `n` nodes.
fn commands(n: usize, memo: &mut HashMap<(bool, usize), Vec<Vec<Cmd>>>) -> Vec<Cmd> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return atoms();
    }
    let mut out = Vec::new();
    for body in sequences(n - 1, memo) {
        if body.is_empty() {
            continue;
        }
        out.push(Cmd::while_loop(body.clone()));
        for c in LOOP_COUNTERS {
            out.push(Cmd::loop_n(*c, body.clone()));
        }
    }
    for k in 1..n {
        for t in sequences(k, memo) {
            for e in sequences(n - 1 - k, memo) {
                out.push(Cmd::if_else(t.clone(), e));
            }
        }
    }
    out
}

/// Every command sequence of exactly `n` nodes.
fn sequences(n: usize, memo: &mut HashMap<(bool, usize), Vec<Vec<Cmd>>>) -> Vec<Vec<Cmd>> {
    if let Some(v) = memo.get(&(true, n)) {
        return v.clone();
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        for first in 1..=n {
            let heads = commands(first, memo);
            let tails = sequences(n - first, memo);
            for h in &heads {
                for t in &tails {
                    let mut s = vec![h.clone()];
                    s.extend(t.iter().cloned());
                    out.push(s);
                }
            }
        }
    }
    memo.insert((true, n), out.clone());
    out
}

/// All call-free functions over `X1, X2, X3` with between 1 and `max_nodes`
/// commands (counting compound commands), built from [`atoms`].
pub fn small_programs(max_nodes: usize) -> Vec<FunDecl> {
    let mut memo = HashMap::new();
    let mut out = Vec::new();
    for n in 1..=max_nodes {
        for body in sequences(n, &mut memo) {
            out.push(FunDecl::new("p", &["X1", "X2", "X3"], body, None));
        }
    }
    out
}

// ---- concrete interpreter ----

/// Runs a normalized body. Branch and `while` decisions are drawn from
/// `decisions`; each `while` runs at most `cap` rounds and each
/// `loop X` runs `min(|X|, cap)` rounds.
pub struct Interp<'a, R: Rng> {
    pub decisions: &'a mut R,
    pub cap: i64,
}

impl<R: Rng> Interp<'_, R> {
    pub fn run(&mut self, cmds: &[Cmd], env: &mut HashMap<String, i128>) {
        for c in cmds {
            self.cmd(c, env);
        }
    }

    fn expr(e: &Expr, env: &HashMap<String, i128>) -> i128 {
        match &e.kind {
            ExprKind::Var(x) => env.get(x).copied().unwrap_or(0),
            ExprKind::Bin(op, l, r) => {
                let (a, b) = (Self::expr(l, env), Self::expr(r, env));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                }
            }
        }
    }

    fn cmd(&mut self, c: &Cmd, env: &mut HashMap<String, i128>) {
        match &c.kind {
            CmdKind::Assign { target, expr } => {
                let v = Self::expr(expr, env);
                env.insert(target.clone(), v);
            }
            CmdKind::If { then_body, else_body } => {
                if self.decisions.gen_bool(0.5) {
                    self.run(then_body, env);
                } else {
                    self.run(else_body, env);
                }
            }
            CmdKind::While { body } => {
                let rounds = self.decisions.gen_range(0..=self.cap);
                for _ in 0..rounds {
                    self.run(body, env);
                }
            }
            CmdKind::Loop { counter, body } => {
                let rounds = env.get(counter).copied().unwrap_or(0).unsigned_abs().min(self.cap as u128);
                for _ in 0..rounds {
                    self.run(body, env);
                }
            }
            CmdKind::CallAssign { .. } => panic!("interpreter does not run calls"),
        }
    }
}

pub mod criteria;
