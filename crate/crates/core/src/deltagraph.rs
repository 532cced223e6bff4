//! Index of the choice assignments that lead to `∞`.
//!
//! Each stored delta list stands for the set of assignments it matches. Lists
//! are kept in layers by length. Sibling lists (equal except for the value at
//! one position) are fused into their common parent once every value at that
//! position is covered, so the whole assignment space being covered shows up
//! as the empty list in layer 0.

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::polynomial::{deltas_subset, Assignment, ChoiceDomains, Delta};

pub type DeltaList = Vec<Delta>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeltaGraph {
    domains: ChoiceDomains,
    layers: BTreeMap<usize, BTreeSet<DeltaList>>,
}

impl DeltaGraph {
    pub fn new(domains: ChoiceDomains) -> Self {
        DeltaGraph {
            domains,
            layers: BTreeMap::new(),
        }
    }

    pub fn domains(&self) -> &ChoiceDomains {
        &self.domains
    }

    /// Registers a new position of the given size.
    pub fn push_position(&mut self, size: usize) -> usize {
        self.domains.push(size)
    }

    /// Replaces the domains. Stored lists must stay within range.
    pub fn set_domains(&mut self, domains: ChoiceDomains) {
        self.domains = domains;
    }

    pub fn layers(&self) -> &BTreeMap<usize, BTreeSet<DeltaList>> {
        &self.layers
    }

    pub fn lists(&self) -> impl Iterator<Item = &DeltaList> {
        self.layers.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.layers.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.values().all(BTreeSet::is_empty)
    }

    /// Pairs of stored lists in one layer that differ only at one position,
    /// with that position as label.
    pub fn edges(&self) -> Vec<(DeltaList, DeltaList, usize)> {
        let mut out = Vec::new();
        for layer in self.layers.values() {
            for a in layer {
                for (k, d) in a.iter().enumerate() {
                    for v in (d.value + 1)..self.domains.size(d.position) {
                        let mut b = a.clone();
                        b[k].value = v;
                        if layer.contains(&b) {
                            out.push((a.clone(), b, d.position));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn contains(&self, list: &[Delta]) -> bool {
        self.layers
            .get(&list.len())
            .is_some_and(|l| l.contains(list))
    }

    /// True when some stored list is a subset of `list`.
    pub fn covers(&self, list: &[Delta]) -> bool {
        self.layers
            .range(..=list.len())
            .flat_map(|(_, l)| l)
            .any(|s| deltas_subset(s, list))
    }

    pub fn matches(&self, a: &Assignment) -> bool {
        self.lists().any(|l| a.satisfies(l))
    }

    /// Adds a list without fusing. Returns false when it was already covered.
    fn add_minimal(&mut self, list: DeltaList) -> bool {
        if self.covers(&list) {
            return false;
        }
        for layer in self.layers.range_mut(list.len() + 1..) {
            layer.1.retain(|s| !deltas_subset(&list, s));
        }
        self.layers.retain(|_, l| !l.is_empty());
        self.layers.entry(list.len()).or_default().insert(list);
        true
    }

    fn remove(&mut self, list: &[Delta]) {
        if let Some(layer) = self.layers.get_mut(&list.len()) {
            layer.remove(list);
            if layer.is_empty() {
                self.layers.remove(&list.len());
            }
        }
    }

    /// One fusion step: finds a stored list whose siblings at some position
    /// are all covered and replaces it by its parent.
    fn fuse_once(&mut self) -> bool {
        let mut found: Option<(DeltaList, DeltaList)> = None;
        'search: for layer in self.layers.values().rev() {
            for list in layer {
                for (k, d) in list.iter().enumerate() {
                    let complete = (0..self.domains.size(d.position)).all(|v| {
                        if v == d.value {
                            return true;
                        }
                        let mut sib = list.clone();
                        sib[k].value = v;
                        self.covers(&sib)
                    });
                    if complete {
                        let mut parent = list.clone();
                        parent.remove(k);
                        found = Some((list.clone(), parent));
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some((list, parent)) => {
                self.remove(&list);
                self.add_minimal(parent);
                true
            }
            None => false,
        }
    }

    /// One consensus step at a position: for each value `v`, pick a stored
    /// list holding `δ(v, i)`; the union of the picks without position `i`
    /// is matched only by assignments the picks already cover. Returns the
    /// first such union not yet covered.
    fn consensus_once(&self) -> Option<DeltaList> {
        let lists: Vec<&DeltaList> = self.lists().collect();
        let mut positions: BTreeSet<usize> = BTreeSet::new();
        for l in &lists {
            positions.extend(l.iter().map(|d| d.position));
        }
        for &i in &positions {
            let card = self.domains.size(i);
            let mut groups: Vec<Vec<Vec<Delta>>> = Vec::with_capacity(card);
            for v in 0..card {
                let g: Vec<Vec<Delta>> = lists
                    .iter()
                    .filter(|l| l.iter().any(|d| d.position == i && d.value == v))
                    .map(|l| l.iter().copied().filter(|d| d.position != i).collect())
                    .collect();
                if g.is_empty() {
                    break;
                }
                groups.push(g);
            }
            if groups.len() < card {
                continue;
            }
            if let Some(found) = self.search_consensus(&groups, 0, Vec::new()) {
                return Some(found);
            }
        }
        None
    }

    fn search_consensus(
        &self,
        groups: &[Vec<Vec<Delta>>],
        depth: usize,
        acc: DeltaList,
    ) -> Option<DeltaList> {
        if self.covers(&acc) {
            return None;
        }
        if depth == groups.len() {
            return Some(acc);
        }
        for rest in &groups[depth] {
            if let Some(merged) = merge_consistent(&acc, rest) {
                if let Some(found) = self.search_consensus(groups, depth + 1, merged) {
                    return Some(found);
                }
            }
        }
        None
    }

    /// Runs fusion and consensus until neither applies. Afterwards the graph
    /// contains the empty list exactly when every assignment is matched.
    pub fn saturate(&mut self) {
        loop {
            if self.is_complete() {
                return;
            }
            if self.fuse_once() {
                continue;
            }
            match self.consensus_once() {
                Some(list) => {
                    self.add_minimal(list);
                }
                None => return,
            }
        }
    }

    pub fn is_complete(&self) -> bool {
        dg_is_complete(self)
    }
}

fn merge_consistent(x: &[Delta], y: &[Delta]) -> Option<DeltaList> {
    let mut out: DeltaList = x.to_vec();
    for d in y {
        match out.iter().find(|e| e.position == d.position) {
            Some(e) if e.value != d.value => return None,
            Some(_) => {}
            None => out.push(*d),
        }
    }
    out.sort();
    Some(out)
}

impl DeltaGraph {
    /// Inserts several lists, saturating once at the end.
    pub fn insert_batch<I: IntoIterator<Item = DeltaList>>(&mut self, lists: I) {
        let mut changed = false;
        for l in lists {
            changed |= self.add_minimal(l);
        }
        if changed {
            self.saturate();
        }
    }
}

/// Inserts a canonical delta list and saturates the graph.
pub fn dg_insert(g: &mut DeltaGraph, deltas: DeltaList) {
    if g.add_minimal(deltas) {
        g.saturate();
    }
}

/// Fuses sibling families until none is complete.
pub fn dg_fusion(g: &mut DeltaGraph) {
    while g.fuse_once() {}
}

pub fn dg_is_complete(g: &DeltaGraph) -> bool {
    g.layers.get(&0).is_some_and(|l| !l.is_empty())
}

/// The least assignment strictly after `after` (or the least one overall)
/// that no stored list matches, in odometer order with position 0 most
/// significant. A matching list makes the search jump past every assignment
/// sharing the matched prefix.
pub fn dg_next_assignment(g: &DeltaGraph, after: Option<&Assignment>) -> Option<Assignment> {
    let sizes = &g.domains.sizes;
    let mut cand = match after {
        None => vec![0; sizes.len()],
        Some(a) => {
            let mut c = a.choices.clone();
            if !increment_at(&mut c, sizes, sizes.len().checked_sub(1)?) {
                return None;
            }
            c
        }
    };
    loop {
        let hit = g
            .lists()
            .filter(|l| l.iter().all(|d| cand[d.position] == d.value))
            .min_by_key(|l| l.last().map(|d| d.position));
        match hit {
            None => return Some(Assignment::new(cand)),
            Some(l) => {
                let last = l.last()?.position;
                if !increment_at(&mut cand, sizes, last) {
                    return None;
                }
            }
        }
    }
}

/// Odometer increment at `pos`, zeroing all later positions. False on
/// overflow past position 0.
fn increment_at(c: &mut [usize], sizes: &[usize], pos: usize) -> bool {
    for v in c.iter_mut().skip(pos + 1) {
        *v = 0;
    }
    let mut j = pos;
    loop {
        c[j] += 1;
        if c[j] < sizes[j] {
            return true;
        }
        c[j] = 0;
        if j == 0 {
            return false;
        }
        j -= 1;
    }
}

/// Iterates over every unmatched assignment.
pub fn unmatched_assignments(g: &DeltaGraph) -> impl Iterator<Item = Assignment> + '_ {
    let mut cur = dg_next_assignment(g, None);
    std::iter::from_fn(move || {
        let out = cur.take()?;
        cur = dg_next_assignment(g, Some(&out));
        Some(out)
    })
}

impl Serialize for DeltaGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let layers: BTreeMap<String, &BTreeSet<DeltaList>> =
            self.layers.iter().map(|(k, v)| (k.to_string(), v)).collect();
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("domains", &self.domains)?;
        map.serialize_entry("layers", &layers)?;
        map.end()
    }
}
