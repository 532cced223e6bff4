//! One check function per acceptance criterion. Each returns named
//! sub-checks so a failure points at the exact sub-claim.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use mwp_core::analysis::{
    analyze_function, analyze_program, map_assignment_psi, solve_recursion, AnalysisResult, Engine, Env,
};
use mwp_core::deltagraph::{dg_is_complete, dg_next_assignment, unmatched_assignments, DeltaGraph};
use mwp_core::frontend::{call_sites, inline_call, normalize_function, parse, Program};
use mwp_core::jk_oracle::{jk_equals_deterministic, DEFAULT_BUDGET};
use mwp_core::matrix::{mat_add, mat_mul, mat_star, CoeffMatrix, PolyMatrix};
use mwp_core::polynomial::{poly_add, poly_equiv, poly_mul, Assignment, ChoiceDomains, Delta, Polynomial};
use mwp_core::report::{analyze_source, ReportOptions};
use mwp_core::semiring::Coeff;
use rand::Rng;

use super::*;

pub type Check = (String, Result<(), String>);

pub fn passed(checks: &[Check]) -> bool {
    checks.iter().all(|(_, r)| r.is_ok())
}

fn check(name: &str, r: Result<(), String>) -> Check {
    (name.to_string(), r)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- literal polynomials ----

/// Parses `"mδ(0,0) + iδ(1,0)δ(0,1) + w"`; `i` is `∞`, `"0"` the zero
/// polynomial.
pub fn poly(s: &str) -> Polynomial {
    let s = s.trim();
    if s == "0" {
        return Polynomial::zero();
    }
    let mut monos = Vec::new();
    for term in s.split('+') {
        let term = term.trim();
        let mut chars = term.chars();
        let scalar: Coeff = chars.next().expect("scalar").to_string().parse().expect("coefficient");
        let rest: String = chars.collect();
        let mut deltas = Vec::new();
        for part in rest.split('δ').filter(|p| !p.is_empty()) {
            let inner = part.trim_start_matches('(').trim_end_matches(')');
            let (v, p) = inner.split_once(',').expect("δ(v,p)");
            deltas.push(Delta::new(v.trim().parse().unwrap(), p.trim().parse().unwrap()));
        }
        monos.push(mwp_core::polynomial::Monomial::new(scalar, deltas).expect("non-zero monomial"));
    }
    Polynomial::from_monomials(monos)
}

pub fn pmatrix(vars: &[&str], rows: &[&[&str]]) -> PolyMatrix {
    PolyMatrix::from_rows(
        vars.iter().map(|s| s.to_string()).collect(),
        rows.iter().map(|r| r.iter().map(|c| poly(c)).collect()).collect(),
    )
}

/// Swaps choice values 0 and 1 at every position.
pub fn swap01(p: &Polynomial) -> Polynomial {
    Polynomial::from_monomials(p.monomials().iter().map(|m| {
        let mut m = m.clone();
        for d in &mut m.deltas {
            d.value = match d.value {
                0 => 1,
                1 => 0,
                v => v,
            };
        }
        m.deltas.sort();
        m
    }))
}

fn compare_literal(got: &PolyMatrix, want: &PolyMatrix, domains: &ChoiceDomains) -> Vec<String> {
    let vars = got.vars();
    let mut out = Vec::new();
    for i in 0..got.dim() {
        for j in 0..got.dim() {
            let (g, w) = (got.get(i, j), want.get(i, j));
            if g != w {
                let pointwise = poly_equiv(g, w, domains).unwrap_or(false);
                out.push(format!(
                    "({},{}) is `{g}`, printed `{w}`{}",
                    vars[i],
                    vars[j],
                    if pointwise { " (pointwise equal)" } else { "" }
                ));
            }
        }
    }
    out
}

fn analyze_chunk_with(vars: &[&str], src: &str) -> AnalysisResult {
    let f = parse(&format!(
        "int main({}) {{ {src} }}",
        vars.iter().map(|v| format!("int {v}")).collect::<Vec<_>>().join(", ")
    ))
    .expect("chunk parses");
    analyze_function(&f.decls[0], &Env::new()).expect("chunk analyzes")
}

// ---- 1: printed matrices ----

pub fn c1_printed_matrices() -> Vec<Check> {
    let start = Instant::now();
    let mut checks = Vec::new();

    // The printed loop matrix numbers the two asymmetric addition choices the
    // other way round; `swap01` maps it onto the engine's numbering.
    let r = analyze_chunk_with(&["X1", "X2", "X3"], "loop X3 { X2 = X1 + X2; }");
    let printed = pmatrix(
        &["X1", "X2", "X3"],
        &[
            &["m", "pδ(0,0) + mδ(1,0) + wδ(2,0)", "0"],
            &["0", "mδ(0,0) + iδ(1,0) + iδ(2,0)", "0"],
            &["0", "pδ(0,0)", "m"],
        ],
    );
    let n = printed.dim();
    let relabeled = PolyMatrix::from_rows(
        printed.vars().to_vec(),
        (0..n).map(|i| (0..n).map(|j| swap01(printed.get(i, j))).collect()).collect(),
    );
    let diffs = compare_literal(&r.matrix, &relabeled, &r.domains);
    checks.push(check(
        "1a loop matrix, entry for entry",
        ensure(diffs.is_empty(), || diffs.join("; ")),
    ));
    let free: Vec<Assignment> = r.domains.assignments().filter(|a| !relabeled.eval(a).has_inf()).collect();
    checks.push(check(
        "1a loop matrix at its ∞-free assignments",
        ensure(
            free.iter().all(|a| r.matrix.eval(a) == relabeled.eval(a))
                && r.domains.assignments().all(|a| r.matrix.eval(&a).has_inf() == relabeled.eval(&a).has_inf()),
            || "evaluations differ".into(),
        ),
    ));

    let r = analyze_chunk_with(&["X1", "X2", "X3"], "if (b) { X1 = X1 + X2; } else { X1 = X1 - X3; }");
    let want = pmatrix(
        &["X1", "X2", "X3"],
        &[
            &["mδ(0,0) + pδ(1,0) + wδ(2,0) + mδ(0,1) + pδ(1,1) + wδ(2,1)", "0", "0"],
            &["pδ(0,0) + mδ(1,0) + wδ(2,0)", "m", "0"],
            &["pδ(0,1) + mδ(1,1) + wδ(2,1)", "0", "m"],
        ],
    );
    let diffs = compare_literal(&r.matrix, &want, &r.domains);
    checks.push(check(
        "1b conditional matrix",
        ensure(diffs.is_empty(), || diffs.join("; ")),
    ));

    let vars2: Vec<String> = names(2);
    let env = Env::new();
    let mut engine = Engine::new(vars2.clone(), &env);
    let body = parse("int q(int X1, int X2) { X2 = X1 + X1; }").unwrap().decls[0].body.clone();
    let v = engine.analyze_cmd(&body[0]).unwrap();
    let want_v = pmatrix(&["X1", "X2"], &[&["m", "pδ(0,0) + pδ(1,0) + wδ(2,0)"], &["0", "0"]]);
    checks.push(check("1c V", ensure(v == want_v, || format!("got\n{v}"))));
    let vs = mat_star(&v);
    let want_vs = pmatrix(&["X1", "X2"], &[&["m", "pδ(0,0) + pδ(1,0) + wδ(2,0)"], &["0", "m"]]);
    checks.push(check("1c V*", ensure(vs == want_vs, || format!("got\n{vs}"))));
    let q = corpus_program("call");
    let rq = analyze_function(q.get("f").unwrap(), &Env::new()).unwrap();
    let want_q = pmatrix(&["X1", "X2"], &[&["m", "iδ(0,0) + iδ(1,0) + wδ(2,0)"], &["0", "m"]]);
    checks.push(check(
        "1c while rule on Q",
        ensure(rq.matrix == want_q, || format!("got\n{}", rq.matrix)),
    ));

    let elapsed = start.elapsed();
    checks.push(check(
        "1 runtime under 1 s",
        ensure(elapsed < Duration::from_secs(1), || format!("{elapsed:?}")),
    ));
    checks
}

// ---- 2: adequacy ----

pub fn c2_adequacy(max_nodes: usize) -> (usize, Vec<Check>) {
    let programs = small_programs(max_nodes);
    let mut failures = Vec::new();
    for f in &programs {
        match jk_equals_deterministic(f, DEFAULT_BUDGET) {
            Ok(rep) => {
                if !rep.equal {
                    failures.push(format!(
                        "{}: {}",
                        mwp_core::frontend::fundecl_to_string(f).replace('\n', " "),
                        rep.mismatch.unwrap_or_default()
                    ));
                }
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    let n = programs.len();
    (
        n,
        vec![check(
            &format!("2 engine and oracle agree on {n} programs"),
            ensure(failures.is_empty(), || {
                format!("{} failures, first: {}", failures.len(), failures[0])
            }),
        )],
    )
}

// ---- 3: algebra ----

pub fn semiring_law_failures() -> Vec<String> {
    let mut out = Vec::new();
    let all = Coeff::ALL;
    for &a in &all {
        for &b in &all {
            for &c in &all {
                if a.add(b.add(c)) != a.add(b).add(c) {
                    out.push(format!("+ associativity at {a},{b},{c}"));
                }
                if a.mul(b.mul(c)) != a.mul(b).mul(c) {
                    out.push(format!("× associativity at {a},{b},{c}"));
                }
                if a.mul(b.add(c)) != a.mul(b).add(a.mul(c)) {
                    out.push(format!("left distributivity at {a},{b},{c}"));
                }
                if b.add(c).mul(a) != b.mul(a).add(c.mul(a)) {
                    out.push(format!("right distributivity at {a},{b},{c}"));
                }
            }
            if a.add(b) != b.add(a) || a.mul(b) != b.mul(a) {
                out.push(format!("commutativity at {a},{b}"));
            }
            if (a <= b) != (a.add(b) == b) {
                out.push(format!("order is not the additive order at {a},{b}"));
            }
        }
        if a.add(a) != a {
            out.push(format!("idempotence at {a}"));
        }
        if a.add(Coeff::Zero) != a || a.mul(Coeff::M) != a {
            out.push(format!("units at {a}"));
        }
        let z = a.mul(Coeff::Zero);
        let want = if a == Coeff::Inf { Coeff::Inf } else { Coeff::Zero };
        if z != want {
            out.push(format!("{a} × 0 = {z}"));
        }
    }
    out
}

pub fn random_matrix(r: &mut impl Rng, n: usize, positions: usize, with_inf: bool) -> PolyMatrix {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| random_poly(r, positions, 3, with_inf)).collect())
        .collect();
    PolyMatrix::from_rows(names(n), rows)
}

pub fn mat_equiv(a: &PolyMatrix, b: &PolyMatrix, d: &ChoiceDomains) -> bool {
    d.assignments().all(|x| a.eval(&x) == b.eval(&x))
}

pub fn c3_algebra(cases: usize, seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let laws = semiring_law_failures();
    checks.push(check(
        "3 coefficient laws over all 125 triples, with ∞ × 0 = ∞",
        ensure(laws.is_empty(), || laws.join("; ")),
    ));

    let mut r = rng(seed);
    let d = domains(3);
    let eq = |x: &Polynomial, y: &Polynomial| poly_equiv(x, y, &d).unwrap();
    let mut poly_fail = Vec::new();
    let one = Polynomial::constant(Coeff::M);
    let zero = Polynomial::zero();
    for case in 0..cases {
        let (x, y, z) = (
            random_poly(&mut r, 3, 6, true),
            random_poly(&mut r, 3, 6, true),
            random_poly(&mut r, 3, 6, true),
        );
        let laws = [
            ("+ assoc", eq(&poly_add(&x, &poly_add(&y, &z)), &poly_add(&poly_add(&x, &y), &z))),
            ("+ comm", poly_add(&x, &y) == poly_add(&y, &x)),
            ("+ idem", eq(&poly_add(&x, &x), &x)),
            ("+ unit", poly_add(&x, &zero) == x),
            ("× assoc", eq(&poly_mul(&x, &poly_mul(&y, &z)), &poly_mul(&poly_mul(&x, &y), &z))),
            ("× comm", poly_mul(&x, &y) == poly_mul(&y, &x)),
            ("× unit", eq(&poly_mul(&x, &one), &x)),
            (
                "distributivity",
                eq(&poly_mul(&x, &poly_add(&y, &z)), &poly_add(&poly_mul(&x, &y), &poly_mul(&x, &z))),
            ),
            (
                "evaluation",
                d.assignments().all(|a| {
                    poly_mul(&x, &y).eval(&a) == x.eval(&a).mul(y.eval(&a))
                        && poly_add(&x, &y).eval(&a) == x.eval(&a).add(y.eval(&a))
                }),
            ),
            ("canonical", poly_mul(&x, &y).is_canonical() && poly_add(&x, &y).is_canonical()),
        ];
        for (name, ok) in laws {
            if !ok {
                poly_fail.push(format!("case {case}: {name} on x={x}, y={y}, z={z}"));
            }
        }
    }
    checks.push(check(
        &format!("3 polynomial laws on {cases} random triples"),
        ensure(poly_fail.is_empty(), || format!("{} failures, first: {}", poly_fail.len(), poly_fail[0])),
    ));

    let mut mat_fail = Vec::new();
    let d2 = domains(2);
    for case in 0..cases {
        let (a, b, c) = (
            random_matrix(&mut r, 3, 2, true),
            random_matrix(&mut r, 3, 2, true),
            random_matrix(&mut r, 3, 2, true),
        );
        let finite = random_matrix(&mut r, 3, 2, false);
        let id = PolyMatrix::identity(names(3));
        let ab = mat_mul(&a, &b).unwrap();
        let laws = [
            (
                "⊕ assoc",
                mat_equiv(
                    &mat_add(&a, &mat_add(&b, &c).unwrap()).unwrap(),
                    &mat_add(&mat_add(&a, &b).unwrap(), &c).unwrap(),
                    &d2,
                ),
            ),
            ("⊕ comm", mat_add(&a, &b).unwrap() == mat_add(&b, &a).unwrap()),
            (
                "⊗ assoc",
                mat_equiv(
                    &mat_mul(&a, &mat_mul(&b, &c).unwrap()).unwrap(),
                    &mat_mul(&ab, &c).unwrap(),
                    &d2,
                ),
            ),
            (
                "distributivity",
                mat_equiv(
                    &mat_mul(&a, &mat_add(&b, &c).unwrap()).unwrap(),
                    &mat_add(&ab, &mat_mul(&a, &c).unwrap()).unwrap(),
                    &d2,
                ),
            ),
            (
                "identity on ∞-free matrices",
                mat_mul(&id, &finite).unwrap() == finite && mat_mul(&finite, &id).unwrap() == finite,
            ),
            (
                "evaluation isomorphism",
                d2.assignments().all(|x| {
                    let (ea, eb) = (a.eval(&x), b.eval(&x));
                    ab.eval(&x) == ea.mul(&eb)
                        && mat_add(&a, &b).unwrap().eval(&x) == ea.add(&eb)
                        && mat_star(&a).eval(&x) == ea.star()
                }),
            ),
        ];
        for (name, ok) in laws {
            if !ok {
                mat_fail.push(format!("case {case}: {name}"));
            }
        }
    }
    checks.push(check(
        &format!("3 matrix laws and evaluation isomorphism on {cases} random triples"),
        ensure(mat_fail.is_empty(), || format!("{} failures, first: {}", mat_fail.len(), mat_fail[0])),
    ));
    checks
}

// ---- 4: ordered product ----

pub fn c4_ordered_product(cases: usize, seed: u64) -> Vec<Check> {
    let mut r = rng(seed);
    let mut fail = Vec::new();
    let mut max_monos = 0;
    for case in 0..cases {
        let positions = r.gen_range(1..=4);
        let x = random_poly(&mut r, positions, 32, true);
        let y = random_poly(&mut r, positions, 32, true);
        max_monos = max_monos.max(x.len()).max(y.len());
        let fast = poly_mul(&x, &y);
        let slow = naive_mul(&x, &y);
        let d = domains(positions);
        if !poly_equiv(&fast, &slow, &d).unwrap() || !fast.is_canonical() {
            fail.push(format!("case {case}: x={x}, y={y}"));
        }
    }
    vec![check(
        &format!("4 ordered product equals distribute-then-normalize on {cases} pairs"),
        ensure(fail.is_empty(), || format!("{} failures, first: {}", fail.len(), fail[0])),
    )]
}

// ---- 5: delta graph ----

pub fn graph(sizes: Vec<usize>, lists: &[&[(usize, usize)]]) -> DeltaGraph {
    let mut g = DeltaGraph::new(ChoiceDomains::new(sizes));
    g.insert_batch(
        lists
            .iter()
            .map(|l| l.iter().map(|&(v, p)| Delta::new(v, p)).collect())
            .collect::<Vec<_>>(),
    );
    g
}

pub fn successor(g: &DeltaGraph, after: &[usize]) -> Option<Vec<usize>> {
    dg_next_assignment(g, Some(&Assignment::new(after.to_vec()))).map(|a| a.choices)
}

/// Compares the graph verdict and iterator against brute force over `M`.
pub fn brute_force_agrees(r: &AnalysisResult) -> Result<(), String> {
    let free: Vec<Assignment> = r.domains.assignments().filter(|a| !r.matrix.eval(a).has_inf()).collect();
    if dg_is_complete(&r.graph) != free.is_empty() {
        return Err(format!("{}: verdict differs from brute force", r.name));
    }
    let emitted: Vec<Assignment> = unmatched_assignments(&r.graph).collect();
    if emitted != free {
        return Err(format!(
            "{}: iterator emits {} assignments, brute force finds {}",
            r.name,
            emitted.len(),
            free.len()
        ));
    }
    Ok(())
}

pub fn corpus_results() -> Vec<AnalysisResult> {
    CORPUS
        .iter()
        .flat_map(|n| analyze_program(&corpus_program(n)).unwrap().functions)
        .map(|f| f.result)
        .collect()
}

pub fn c5_delta_graph(max_nodes: usize) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut results: Vec<AnalysisResult> = corpus_results()
        .into_iter()
        .filter(|r| r.domains.len() <= 8)
        .collect();
    let corpus_count = results.len();
    for f in small_programs(max_nodes) {
        results.push(analyze_function(&f, &Env::new()).unwrap());
    }
    let fails: Vec<String> = results.iter().filter_map(|r| brute_force_agrees(r).err()).collect();
    checks.push(check(
        &format!(
            "5 verdict and iterator match brute force on {corpus_count} corpus functions and {} small programs",
            results.len() - corpus_count
        ),
        ensure(fails.is_empty(), || fails.join("; ")),
    ));

    let g = graph(vec![3; 4], &[&[(1, 1)]]);
    checks.push(check(
        "5 jump from (0,0,2,2) to (0,2,0,0)",
        ensure(successor(&g, &[0, 0, 2, 2]) == Some(vec![0, 2, 0, 0]), || {
            format!("{:?}", successor(&g, &[0, 0, 2, 2]))
        }),
    ));
    checks.push(check(
        "5 jump from (1,0,2,2) to (1,2,0,0)",
        ensure(successor(&g, &[1, 0, 2, 2]) == Some(vec![1, 2, 0, 0]), || {
            format!("{:?}", successor(&g, &[1, 0, 2, 2]))
        }),
    ));
    let literal = graph(vec![3; 4], &[&[(0, 0)], &[(1, 1)], &[(0, 2)]]);
    let got = successor(&literal, &[0, 0, 2, 2]);
    checks.push(check(
        "5 successor of (0,0,2,2) is (2,0,1,0) given δ(0,0), δ(1,1), δ(0,2)",
        ensure(got == Some(vec![2, 0, 1, 0]), || format!("got {got:?}")),
    ));
    let corrected = graph(vec![3; 4], &[&[(0, 0)], &[(1, 0)], &[(0, 2)]]);
    let got = successor(&corrected, &[0, 0, 2, 2]);
    checks.push(check(
        "5 successor of (0,0,2,2) is (2,0,1,0) given δ(0,0), δ(1,0), δ(0,2)",
        ensure(got == Some(vec![2, 0, 1, 0]), || format!("got {got:?}")),
    ));
    checks
}

// ---- 6: corpus verdicts ----

pub fn c6_corpus_verdicts() -> Vec<Check> {
    let expected = [
        ("gcd", false),
        ("branch", true),
        ("call", true),
        ("call_inlined", true),
        ("loop", true),
        ("explosion", true),
    ];
    let mut checks = Vec::new();
    for (name, bound) in expected {
        let start = Instant::now();
        let opts = ReportOptions {
            fast: true,
            ..ReportOptions::default()
        };
        let rep = analyze_source(&corpus_source(name), &opts);
        let elapsed = start.elapsed();
        let r = match rep {
            Ok(rep) => ensure(rep.all_bounded() == bound, || {
                format!("bound = {}, expected {bound}", rep.all_bounded())
            }),
            Err(e) => Err(e.to_string()),
        };
        let r = r.and_then(|_| {
            ensure(name != "explosion" || elapsed < Duration::from_secs(10), || {
                format!("took {elapsed:?}")
            })
        });
        checks.push(check(
            &format!("6 {name}: {} ({} ms)", if bound { "✓" } else { "∞" }, elapsed.as_millis()),
            r,
        ));
    }
    let p = corpus_program("explosion");
    let f = &p.decls[0];
    let lines = corpus_source("explosion").lines().count();
    checks.push(check(
        "6 explosion has 18 variables and 23 lines",
        ensure(f.params.len() == 18 && lines == 23, || format!("{} variables, {lines} lines", f.params.len())),
    ));
    checks
}

// ---- 7: inlining ----

/// Checks the inlining correspondence for the `site`-th call of `caller`.
pub fn inlining_agrees(p: &Program, caller: &str, site: usize) -> Result<usize, String> {
    let analysis = analyze_program(p).map_err(|e| e.to_string())?;
    let fa = analysis.get(caller).ok_or("no caller")?;
    let record = fa.result.calls.get(site).ok_or("no such call")?.clone();
    let callee_fa = analysis.get(&record.callee).ok_or("no callee")?;
    let summary = callee_fa.summary.as_ref().ok_or("no summary")?;

    let caller_n = normalize_function(&fa.decl);
    let callee_n = normalize_function(&callee_fa.decl);
    let sites = call_sites(&caller_n);
    let inlined = inline_call(&caller_n, sites[site], &callee_n).map_err(|e| e.to_string())?;
    let mut env = Env::new();
    for f in &analysis.functions {
        if let Some(s) = &f.summary {
            env.insert(s.clone());
        }
    }
    let big = analyze_function(&inlined, &env).map_err(|e| e.to_string())?;

    let small = &fa.result;
    let proj: Vec<usize> = small
        .vars
        .iter()
        .map(|v| big.vars.iter().position(|w| w == v).expect("caller variable kept"))
        .collect();
    let project = |m: &CoeffMatrix| {
        CoeffMatrix::from_rows(proj.iter().map(|&i| proj.iter().map(|&j| m.get(i, j)).collect()).collect())
    };

    let mut image = BTreeSet::new();
    for a in small.domains.assignments() {
        let b = map_assignment_psi(&a, &record, &summary.assignments).map_err(|e| e.to_string())?;
        let lhs = small.matrix.eval(&a);
        let rhs = project(&big.matrix.eval(&b));
        if lhs != rhs {
            return Err(format!("at {a} ↦ {b}: F rule gives\n{lhs}inlined gives\n{rhs}"));
        }
        image.insert(b);
    }
    let mut outside = 0;
    for b in big.domains.assignments() {
        if !image.contains(&b) {
            outside += 1;
            if !project(&big.matrix.eval(&b)).has_inf() {
                return Err(format!("{b} is outside the image but ∞-free"));
            }
        }
    }
    Ok(outside)
}

pub fn c7_inlining() -> Vec<Check> {
    let p = corpus_program("call");
    let mut checks = Vec::new();
    checks.push(check(
        "7 call: F rule equals inlined analysis through Ψ̄, ∞ outside its image",
        inlining_agrees(&p, "foo", 0).map(|_| ()),
    ));
    let analysis = analyze_program(&p).unwrap();
    let foo = analysis.get("foo").unwrap();
    let f = analysis.get("f").unwrap();
    let mapped = map_assignment_psi(&Assignment::new(vec![0]), &foo.result.calls[0], &f.summary.as_ref().unwrap().assignments);
    checks.push(check(
        "7 Ψ̄ maps (0) to (0,2)",
        ensure(mapped.as_ref().map(|a| a.choices.clone()) == Ok(vec![0, 2]), || format!("{mapped:?}")),
    ));
    checks
}

// ---- 8: recursion ----

pub fn c8_recursion() -> Vec<Check> {
    use Coeff::*;
    let p = corpus_program("rec");
    let sol = solve_recursion(&p.decls[0], &Env::new());
    let mut checks = Vec::new();
    match sol {
        Ok(sol) => {
            let per: BTreeSet<Vec<Coeff>> = sol.per_assignment.iter().flat_map(|(_, v)| v.clone()).collect();
            let want: BTreeSet<Vec<Coeff>> = [vec![M, P], vec![P, P], vec![W, W]].into();
            checks.push(check(
                "8 minimal solutions per assignment",
                ensure(per == want, || format!("{per:?}")),
            ));
            let vecs = sol.summary.vectors.clone();
            checks.push(check(
                "8 summary vectors (m,p,0) and (w,w,0)",
                ensure(vecs == vec![vec![M, P, Zero], vec![W, W, Zero]], || format!("{vecs:?}")),
            ));
        }
        Err(e) => checks.push(check("8 recursion solves", Err(e.to_string()))),
    }
    checks
}

// ---- 9: determinism ----

pub fn c9_determinism(runs: usize) -> Vec<Check> {
    let mut fails = Vec::new();
    for name in CORPUS {
        let src = corpus_source(name);
        let opts = ReportOptions {
            dump_delta_graph: true,
            ..ReportOptions::default()
        };
        let first = analyze_source(&src, &opts).unwrap().to_json();
        for _ in 1..runs {
            if analyze_source(&src, &opts).unwrap().to_json() != first {
                fails.push(name.to_string());
                break;
            }
        }
    }
    vec![check(
        &format!("9 {runs} runs give byte-identical JSON on {} corpus files", CORPUS.len()),
        ensure(fails.is_empty(), || fails.join(", ")),
    )]
}
