//! Square matrices over polynomials and over plain coefficients.
//!
//! Entry `(i, j)` records how the initial value of variable `i` flows into
//! the final value of variable `j`.

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::polynomial::{poly_add, poly_eval, poly_mul, Assignment, Polynomial};
use crate::semiring::Coeff;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch { left: Vec<String>, right: Vec<String> },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PolyVector {
    pub entries: Vec<Polynomial>,
}

impl PolyVector {
    pub fn zero(n: usize) -> Self {
        PolyVector {
            entries: vec![Polynomial::zero(); n],
        }
    }

    /// Constant `m` at `i`, zero elsewhere.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = PolyVector::zero(n);
        v.entries[i] = Polynomial::constant(Coeff::M);
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn eval(&self, a: &Assignment) -> Vec<Coeff> {
        self.entries.iter().map(|p| poly_eval(p, a)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    vars: Vec<String>,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zero(vars: Vec<String>) -> Self {
        let n = vars.len();
        PolyMatrix {
            vars,
            entries: vec![Polynomial::zero(); n * n],
        }
    }

    pub fn identity(vars: Vec<String>) -> Self {
        let mut m = PolyMatrix::zero(vars);
        for i in 0..m.dim() {
            m.set(i, i, Polynomial::constant(Coeff::M));
        }
        m
    }

    /// Builds a matrix from rows; panics if the shape is not `n × n`.
    pub fn from_rows(vars: Vec<String>, rows: Vec<Vec<Polynomial>>) -> Self {
        let n = vars.len();
        assert_eq!(rows.len(), n, "row count must match the variables");
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "row length must match the variables");
            entries.extend(row);
        }
        PolyMatrix { vars, entries }
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.dim() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        let n = self.dim();
        self.entries[i * n + j] = p;
    }

    /// Adds `p` to entry `(i, j)`.
    pub fn add_at(&mut self, i: usize, j: usize, p: &Polynomial) {
        let n = self.dim();
        let e = &mut self.entries[i * n + j];
        *e = poly_add(e, p);
    }

    pub fn column(&self, j: usize) -> PolyVector {
        PolyVector {
            entries: (0..self.dim()).map(|i| self.get(i, j).clone()).collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Polynomial)> {
        let n = self.dim();
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, p)| ((k / n, k % n), p))
    }

    pub fn has_inf(&self) -> bool {
        self.entries.iter().any(Polynomial::has_inf)
    }

    /// Sorted positions mentioned anywhere in the matrix.
    pub fn positions(&self) -> Vec<usize> {
        let mut ps: Vec<usize> = self.entries.iter().flat_map(|p| p.positions()).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    pub fn eval(&self, a: &Assignment) -> CoeffMatrix {
        mat_eval(self, a)
    }
}

fn check_same(a: &PolyMatrix, b: &PolyMatrix) -> Result<(), MatrixError> {
    if a.vars != b.vars {
        return Err(MatrixError::DimensionMismatch {
            left: a.vars.clone(),
            right: b.vars.clone(),
        });
    }
    Ok(())
}

pub fn mat_add(a: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix, MatrixError> {
    check_same(a, b)?;
    Ok(PolyMatrix {
        vars: a.vars.clone(),
        entries: a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| poly_add(x, y))
            .collect(),
    })
}

pub fn mat_mul(a: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix, MatrixError> {
    check_same(a, b)?;
    let n = a.dim();
    let mut out = PolyMatrix::zero(a.vars.clone());
    for i in 0..n {
        for j in 0..n {
            let mut acc = Polynomial::zero();
            for k in 0..n {
                let (x, y) = (a.get(i, k), b.get(k, j));
                if (x.is_zero() && !y.has_inf()) || (y.is_zero() && !x.has_inf()) {
                    continue;
                }
                acc = poly_add(&acc, &poly_mul(x, y));
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Number of squarings of `1 ⊕ A` that always reaches the closure: walks of
/// length `2n - 1` realize every value, and a cube already realizes every
/// `∞` spread.
fn squaring_budget(n: usize) -> u32 {
    let target = (2 * n).saturating_sub(1).max(3);
    usize::BITS - (target - 1).leading_zeros()
}

/// Kleene closure by repeated squaring of `1 ⊕ A`, stopping early once the
/// representation is stable.
pub fn mat_star(a: &PolyMatrix) -> PolyMatrix {
    let one = PolyMatrix::identity(a.vars.clone());
    let mut s = mat_add(&one, a).expect("same variables");
    for _ in 0..squaring_budget(a.dim()) {
        let next = mat_mul(&s, &s).expect("same variables");
        if next == s {
            break;
        }
        s = next;
    }
    s
}

pub fn mat_eval(a: &PolyMatrix, asg: &Assignment) -> CoeffMatrix {
    CoeffMatrix {
        n: a.dim(),
        entries: a.entries.iter().map(|p| poly_eval(p, asg)).collect(),
    }
}

/// `A ←j V`: a copy of `A` whose column `j` is `V`.
pub fn column_replace(a: &PolyMatrix, j: usize, v: &PolyVector) -> Result<PolyMatrix, MatrixError> {
    let n = a.dim();
    if j >= n {
        return Err(MatrixError::IndexOutOfRange { index: j, dim: n });
    }
    if v.dim() != n {
        return Err(MatrixError::IndexOutOfRange { index: v.dim(), dim: n });
    }
    let mut out = a.clone();
    for (i, p) in v.entries.iter().enumerate() {
        out.set(i, j, p.clone());
    }
    Ok(out)
}

fn pad(f: &mut fmt::Formatter<'_>, s: &str, w: usize) -> fmt::Result {
    f.write_str(s)?;
    for _ in s.chars().count()..w {
        f.write_str(" ")?;
    }
    Ok(())
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        let cells: Vec<String> = self.entries.iter().map(|p| p.to_string()).collect();
        let name_w = self.vars.iter().map(|v| v.chars().count()).max().unwrap_or(0);
        let widths: Vec<usize> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| cells[i * n + j].chars().count())
                    .chain(std::iter::once(self.vars[j].chars().count()))
                    .max()
                    .unwrap_or(1)
            })
            .collect();
        pad(f, "", name_w)?;
        for (j, v) in self.vars.iter().enumerate() {
            f.write_str(" | ")?;
            pad(f, v, widths[j])?;
        }
        writeln!(f)?;
        for i in 0..n {
            pad(f, &self.vars[i], name_w)?;
            for j in 0..n {
                f.write_str(" | ")?;
                pad(f, &cells[i * n + j], widths[j])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl Serialize for PolyMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let n = self.dim();
        let rows: Vec<&[Polynomial]> = (0..n).map(|i| &self.entries[i * n..(i + 1) * n]).collect();
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("vars", &self.vars)?;
        map.serialize_entry("entries", &rows)?;
        map.end()
    }
}

/// An `n × n` matrix over plain coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoeffMatrix {
    n: usize,
    entries: Vec<Coeff>,
}

impl CoeffMatrix {
    pub fn zero(n: usize) -> Self {
        CoeffMatrix {
            n,
            entries: vec![Coeff::Zero; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CoeffMatrix::zero(n);
        for i in 0..n {
            m.set(i, i, Coeff::M);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Coeff>>) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "coefficient matrix must be square");
            entries.extend(row);
        }
        CoeffMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Coeff {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Coeff) {
        self.entries[i * self.n + j] = c;
    }

    pub fn rows(&self) -> Vec<Vec<Coeff>> {
        self.entries.chunks(self.n.max(1)).map(<[Coeff]>::to_vec).take(self.n).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Coeff> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    /// `M ←j V`.
    pub fn replace_column(&self, j: usize, v: &[Coeff]) -> CoeffMatrix {
        let mut out = self.clone();
        for (i, &c) in v.iter().enumerate() {
            out.set(i, j, c);
        }
        out
    }

    pub fn has_inf(&self) -> bool {
        self.entries.iter().any(|c| c.is_inf())
    }

    pub fn add(&self, other: &CoeffMatrix) -> CoeffMatrix {
        assert_eq!(self.n, other.n);
        CoeffMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(*b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &CoeffMatrix) -> CoeffMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CoeffMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let c = (0..n).fold(Coeff::Zero, |acc, k| acc.add(self.get(i, k).mul(other.get(k, j))));
                out.set(i, j, c);
            }
        }
        out
    }

    /// Least fixpoint of `X = 1 ⊕ M ⊗ X`, iterated from `1`.
    pub fn star(&self) -> CoeffMatrix {
        let one = CoeffMatrix::identity(self.n);
        let mut x = one.clone();
        loop {
            let next = one.add(&self.mul(&x));
            if next == x {
                return x;
            }
            x = next;
        }
    }

    /// Entrywise order.
    pub fn le(&self, other: &CoeffMatrix) -> bool {
        self.n == other.n && self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for CoeffMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<&str> = row.iter().map(|c| c.symbol()).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for CoeffMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(serializer)
    }
}
