//! Functions from choice assignments to coefficients, written as sums of
//! delta monomials.
//!
//! `δ(v, j)` is `m` when position `j` holds value `v` and `0` otherwise. A
//! monomial is a scalar times a product of deltas on distinct positions; a
//! polynomial is the pointwise maximum of its monomials. Polynomials are kept
//! in a canonical form: monomials sorted by their delta lists, one monomial
//! per delta list, and no monomial subsumed by another.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::semiring::Coeff;

/// `δ(value, position)`. Field order gives the canonical ordering: by
/// position, then by value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Delta {
    pub position: usize,
    pub value: usize,
}

impl Delta {
    pub fn new(value: usize, position: usize) -> Self {
        Delta { position, value }
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "δ({},{})", self.value, self.position)
    }
}

impl Serialize for Delta {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.value, self.position].serialize(serializer)
    }
}

/// Sizes of the choice domains, indexed by position.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ChoiceDomains {
    pub sizes: Vec<usize>,
}

impl ChoiceDomains {
    pub fn new(sizes: Vec<usize>) -> Self {
        assert!(sizes.iter().all(|&s| s > 0), "choice domains must be non-empty");
        ChoiceDomains { sizes }
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn size(&self, position: usize) -> usize {
        self.sizes[position]
    }

    /// Appends a position of the given size and returns its index.
    pub fn push(&mut self, size: usize) -> usize {
        assert!(size > 0, "choice domains must be non-empty");
        self.sizes.push(size);
        self.sizes.len() - 1
    }

    /// Number of total assignments, or `None` on overflow.
    pub fn cardinality(&self) -> Option<u128> {
        self.sizes
            .iter()
            .try_fold(1u128, |acc, &s| acc.checked_mul(s as u128))
    }

    /// Iterates over every total assignment in odometer order (position 0
    /// most significant).
    pub fn assignments(&self) -> AssignmentIter<'_> {
        AssignmentIter {
            sizes: &self.sizes,
            next: Some(vec![0; self.sizes.len()]),
        }
    }
}

/// A total assignment: `choices[j]` is the value chosen at position `j`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Assignment {
    pub choices: Vec<usize>,
}

impl Assignment {
    pub fn new(choices: Vec<usize>) -> Self {
        Assignment { choices }
    }

    pub fn zeros(len: usize) -> Self {
        Assignment { choices: vec![0; len] }
    }

    pub fn get(&self, position: usize) -> usize {
        self.choices[position]
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    /// True when every delta of the list holds under this assignment.
    pub fn satisfies(&self, deltas: &[Delta]) -> bool {
        deltas
            .iter()
            .all(|d| self.choices.get(d.position) == Some(&d.value))
    }
}

impl From<Vec<usize>> for Assignment {
    fn from(choices: Vec<usize>) -> Self {
        Assignment { choices }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.choices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

pub struct AssignmentIter<'a> {
    sizes: &'a [usize],
    next: Option<Vec<usize>>,
}

impl Iterator for AssignmentIter<'_> {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carried = true;
        for j in (0..succ.len()).rev() {
            succ[j] += 1;
            if succ[j] < self.sizes[j] {
                carried = false;
                break;
            }
            succ[j] = 0;
        }
        if !carried {
            self.next = Some(succ);
        }
        Some(Assignment { choices: current })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub scalar: Coeff,
    pub deltas: Vec<Delta>,
}

impl Monomial {
    /// Builds a monomial, returning `None` when it denotes the zero function
    /// (zero scalar or two values at one position).
    pub fn new(scalar: Coeff, mut deltas: Vec<Delta>) -> Option<Self> {
        if scalar.is_zero() {
            return None;
        }
        deltas.sort();
        deltas.dedup();
        if deltas.windows(2).any(|w| w[0].position == w[1].position) {
            return None;
        }
        Some(Monomial { scalar, deltas })
    }

    pub fn constant(scalar: Coeff) -> Option<Self> {
        Monomial::new(scalar, Vec::new())
    }

    pub fn matches(&self, a: &Assignment) -> bool {
        a.satisfies(&self.deltas)
    }

    /// Canonical order: lexicographic on delta lists, then by scalar.
    pub fn canonical_cmp(&self, other: &Monomial) -> Ordering {
        self.deltas
            .cmp(&other.deltas)
            .then(self.scalar.cmp(&other.scalar))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.scalar)?;
        for d in &self.deltas {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("scalar", &self.scalar)?;
        map.serialize_entry("deltas", &self.deltas)?;
        map.end()
    }
}

/// Merges two sorted delta lists; `None` if they disagree on a position.
fn merge_deltas(x: &[Delta], y: &[Delta]) -> Option<Vec<Delta>> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        let (a, b) = (x[i], y[j]);
        match a.position.cmp(&b.position) {
            Ordering::Less => {
                out.push(a);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b);
                j += 1;
            }
            Ordering::Equal => {
                if a.value != b.value {
                    return None;
                }
                out.push(a);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&x[i..]);
    out.extend_from_slice(&y[j..]);
    Some(out)
}

/// True when the sorted list `small` is a subset of the sorted list `big`.
pub fn deltas_subset(small: &[Delta], big: &[Delta]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for d in small {
        while j < big.len() && big[j] < *d {
            j += 1;
        }
        if j == big.len() || big[j] != *d {
            return false;
        }
        j += 1;
    }
    true
}

/// Product of two monomials; `None` stands for the zero function.
pub fn mono_product(x: &Monomial, y: &Monomial) -> Option<Monomial> {
    let scalar = x.scalar.mul(y.scalar);
    if scalar.is_zero() {
        return None;
    }
    let deltas = merge_deltas(&x.deltas, &y.deltas)?;
    Some(Monomial { scalar, deltas })
}

/// True when `general` dominates `specific` everywhere `specific` is non-zero.
pub fn mono_subsumes(general: &Monomial, specific: &Monomial) -> bool {
    general.scalar >= specific.scalar && deltas_subset(&general.deltas, &specific.deltas)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("assignment space of {0} points exceeds the enumeration cap of {1}")]
    DomainTooLarge(u128, u128),
}

/// Default cap on the number of assignments `poly_equiv` will enumerate.
pub const DEFAULT_EQUIV_CAP: u128 = 1 << 20;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    monomials: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { monomials: Vec::new() }
    }

    pub fn constant(c: Coeff) -> Self {
        Polynomial {
            monomials: Monomial::constant(c).into_iter().collect(),
        }
    }

    /// `scalar · δ(value, position)`.
    pub fn delta(scalar: Coeff, value: usize, position: usize) -> Self {
        Polynomial {
            monomials: Monomial::new(scalar, vec![Delta::new(value, position)])
                .into_iter()
                .collect(),
        }
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Polynomial { monomials: vec![m] }
    }

    /// Canonicalizes an arbitrary list of monomials.
    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(monos: I) -> Self {
        let mut v: Vec<Monomial> = monos.into_iter().filter(|m| !m.scalar.is_zero()).collect();
        v.sort_by(|a, b| a.deltas.cmp(&b.deltas));
        Polynomial {
            monomials: prune(merge_equal(v)),
        }
    }

    /// Wraps a list without canonicalizing it. Only for tests that compare
    /// raw and canonical forms.
    pub fn from_raw(monomials: Vec<Monomial>) -> Self {
        Polynomial { monomials }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    /// True when the polynomial is the constant `c`.
    pub fn is_constant(&self, c: Coeff) -> bool {
        if c.is_zero() {
            return self.is_zero();
        }
        self.monomials.len() == 1
            && self.monomials[0].deltas.is_empty()
            && self.monomials[0].scalar == c
    }

    pub fn has_inf(&self) -> bool {
        self.monomials.iter().any(|m| m.scalar.is_inf())
    }

    pub fn inf_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.monomials.iter().filter(|m| m.scalar.is_inf())
    }

    /// Sorted, deduplicated positions mentioned by any monomial.
    pub fn positions(&self) -> Vec<usize> {
        let mut ps: Vec<usize> = self
            .monomials
            .iter()
            .flat_map(|m| m.deltas.iter().map(|d| d.position))
            .collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    pub fn eval(&self, a: &Assignment) -> Coeff {
        poly_eval(self, a)
    }

    /// Checks the canonical-form invariants.
    pub fn is_canonical(&self) -> bool {
        let sorted = self
            .monomials
            .windows(2)
            .all(|w| w[0].deltas < w[1].deltas);
        let nonzero = self.monomials.iter().all(|m| !m.scalar.is_zero());
        let well_formed = self.monomials.iter().all(|m| {
            m.deltas
                .windows(2)
                .all(|w| w[0].position < w[1].position)
        });
        let unsubsumed = self.monomials.iter().enumerate().all(|(i, x)| {
            self.monomials
                .iter()
                .enumerate()
                .all(|(j, y)| i == j || !mono_subsumes(y, x))
        });
        sorted && nonzero && well_formed && unsubsumed
    }
}

/// Merges runs of monomials with equal delta lists (input sorted by deltas).
fn merge_equal(sorted: Vec<Monomial>) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::with_capacity(sorted.len());
    for m in sorted {
        match out.last_mut() {
            Some(last) if last.deltas == m.deltas => last.scalar = last.scalar.add(m.scalar),
            _ => out.push(m),
        }
    }
    out
}

/// Removes subsumed monomials from a sorted list with distinct delta lists,
/// keeping the order. A subsuming monomial always has strictly fewer deltas,
/// so monomials are examined shortest first.
fn prune(monos: Vec<Monomial>) -> Vec<Monomial> {
    if monos.len() < 2 {
        return monos;
    }
    let mut by_len: Vec<usize> = (0..monos.len()).collect();
    by_len.sort_by_key(|&i| monos[i].deltas.len());
    let mut keep = vec![false; monos.len()];
    let mut kept: Vec<usize> = Vec::new();
    for &i in &by_len {
        let m = &monos[i];
        if !kept.iter().any(|&k| mono_subsumes(&monos[k], m)) {
            keep[i] = true;
            kept.push(i);
        }
    }
    monos
        .into_iter()
        .zip(keep)
        .filter_map(|(m, k)| k.then_some(m))
        .collect()
}

/// Merges two canonical-order lists into one sorted list with distinct
/// delta lists.
fn merge_sorted(x: &[Monomial], y: &[Monomial]) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].deltas.cmp(&y[j].deltas) {
            Ordering::Less => {
                out.push(x[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(y[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                out.push(Monomial {
                    scalar: x[i].scalar.add(y[j].scalar),
                    deltas: x[i].deltas.clone(),
                });
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&x[i..]);
    out.extend_from_slice(&y[j..]);
    out
}

pub fn poly_add(x: &Polynomial, y: &Polynomial) -> Polynomial {
    if x.is_zero() {
        return y.clone();
    }
    if y.is_zero() {
        return x.clone();
    }
    Polynomial {
        monomials: prune(merge_sorted(&x.monomials, &y.monomials)),
    }
}

/// Heap entry for the k-way merge: the head of one partial product.
struct Head<'a> {
    mono: &'a Monomial,
    list: usize,
    index: usize,
}

impl PartialEq for Head<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Head<'_> {}

impl PartialOrd for Head<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Head<'_> {
    // Reversed so that `BinaryHeap` pops the least head.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .mono
            .deltas
            .cmp(&self.mono.deltas)
            .then(other.list.cmp(&self.list))
    }
}

/// Product by ordered merge: one partial product `x · y_i` per monomial of
/// `y`, combined through a frontier of current heads.
///
/// `∞ · 0 = ∞`, so an `∞` monomial of either factor also survives where the
/// other factor vanishes; those monomials are merged in alongside the
/// pairwise products.
pub fn poly_mul(x: &Polynomial, y: &Polynomial) -> Polynomial {
    let partials: Vec<Vec<Monomial>> = y
        .monomials
        .iter()
        .map(|ym| {
            let mut p: Vec<Monomial> = x
                .monomials
                .iter()
                .filter_map(|xm| mono_product(xm, ym))
                .collect();
            // Products preserve the order only on disjoint supports.
            p.sort_by(|a, b| a.deltas.cmp(&b.deltas));
            merge_equal(p)
        })
        .collect();

    let mut heap: BinaryHeap<Head<'_>> = partials
        .iter()
        .enumerate()
        .filter_map(|(list, p)| p.first().map(|mono| Head { mono, list, index: 0 }))
        .collect();

    let mut merged: Vec<Monomial> = Vec::new();
    while let Some(Head { mono, list, index }) = heap.pop() {
        match merged.last_mut() {
            Some(last) if last.deltas == mono.deltas => last.scalar = last.scalar.add(mono.scalar),
            _ => merged.push(mono.clone()),
        }
        if let Some(next) = partials[list].get(index + 1) {
            heap.push(Head {
                mono: next,
                list,
                index: index + 1,
            });
        }
    }

    if x.has_inf() || y.has_inf() {
        let infs: Vec<Monomial> = x
            .inf_monomials()
            .chain(y.inf_monomials())
            .cloned()
            .collect();
        let mut infs_sorted = infs;
        infs_sorted.sort_by(|a, b| a.deltas.cmp(&b.deltas));
        merged = merge_sorted(&merged, &merge_equal(infs_sorted));
    }

    Polynomial {
        monomials: prune(merged),
    }
}

pub fn poly_eval(x: &Polynomial, a: &Assignment) -> Coeff {
    x.monomials
        .iter()
        .filter(|m| m.matches(a))
        .fold(Coeff::Zero, |acc, m| acc.add(m.scalar))
}

/// Semantic equality: compares evaluations over the positions either side
/// mentions, with all other positions fixed at zero.
pub fn poly_equiv(x: &Polynomial, y: &Polynomial, d: &ChoiceDomains) -> Result<bool, PolyError> {
    poly_equiv_capped(x, y, d, DEFAULT_EQUIV_CAP)
}

pub fn poly_equiv_capped(
    x: &Polynomial,
    y: &Polynomial,
    d: &ChoiceDomains,
    cap: u128,
) -> Result<bool, PolyError> {
    let mut positions = x.positions();
    positions.extend(y.positions());
    positions.sort_unstable();
    positions.dedup();
    let sub = ChoiceDomains {
        sizes: positions.iter().map(|&p| d.size(p)).collect(),
    };
    let card = sub.cardinality().unwrap_or(u128::MAX);
    if card > cap {
        return Err(PolyError::DomainTooLarge(card, cap));
    }
    let mut full = Assignment::zeros(d.len());
    for local in sub.assignments() {
        for (k, &p) in positions.iter().enumerate() {
            full.choices[p] = local.choices[k];
        }
        if poly_eval(x, &full) != poly_eval(y, &full) {
            return Ok(false);
        }
    }
    Ok(true)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.monomials.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.monomials.len()))?;
        for m in &self.monomials {
            seq.serialize_element(m)?;
        }
        seq.end()
    }
}
