//! Instances, matchings and the feasibility rules of d-distance b-matchings.
//!
//! An instance is a bipartite graph `G = (S, T; E)` whose left class `S` is
//! ordered `s_0, ..., s_{n-1}`. An edge set is feasible if every node respects
//! its degree bound and any two chosen edges sharing a right endpoint have left
//! endpoints at least `d` positions apart (cyclically, when the instance is
//! cyclic).

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

/// Degree bound of a node. Right nodes may be unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    Finite(u32),
    Unbounded,
}

impl Bound {
    pub fn allows(self, degree: usize) -> bool {
        match self {
            Bound::Finite(b) => degree <= b as usize,
            Bound::Unbounded => true,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Bound::Finite(b) => Some(b),
            Bound::Unbounded => None,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, Bound::Unbounded)
    }

    /// `min{cap, self}` with `cap` finite.
    pub fn min_with(self, cap: u32) -> u32 {
        match self {
            Bound::Finite(b) => b.min(cap),
            Bound::Unbounded => cap,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(b) => write!(f, "{b}"),
            Bound::Unbounded => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub s: usize,
    pub t: usize,
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("edge ({s}, {t}) appears more than once")]
    DuplicateEdge { s: usize, t: usize },
    #[error("edge {edge} has a negative weight")]
    NegativeWeight { edge: usize },
    #[error("edge {edge} references a node outside the instance")]
    IndexOutOfRange { edge: usize },
    #[error("degree bounds must be positive")]
    NonPositiveBound,
    #[error("the distance d must be at least 1")]
    ZeroDistance,
    #[error("expected {expected} degree bounds, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("edge id {0} does not exist")]
    UnknownEdge(usize),
    #[error("not a permutation of the left node class")]
    InvalidPermutation,
}

/// Which end of the distance window to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `L_d(s_i)`: the window of length `d` ending at `s_i`.
    Left,
    /// `R_d(s_i)`: the window of length `d` starting at `s_i`.
    Right,
}

/// A validated, immutable instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    t_count: usize,
    d: usize,
    cyclic: bool,
    b_s: Vec<u32>,
    b_t: Vec<Bound>,
    edges: Vec<Edge>,
    at_s: Vec<Vec<usize>>,
    at_t: Vec<Vec<usize>>,
}

impl Instance {
    /// Validates the raw data and builds an instance.
    pub fn new(
        n: usize,
        t_count: usize,
        d: usize,
        cyclic: bool,
        b_s: Vec<u32>,
        b_t: Vec<Bound>,
        edges: Vec<Edge>,
    ) -> Result<Self, InstanceError> {
        if d == 0 {
            return Err(InstanceError::ZeroDistance);
        }
        if b_s.len() != n {
            return Err(InstanceError::LengthMismatch { expected: n, got: b_s.len() });
        }
        if b_t.len() != t_count {
            return Err(InstanceError::LengthMismatch { expected: t_count, got: b_t.len() });
        }
        if b_s.contains(&0) || b_t.contains(&Bound::Finite(0)) {
            return Err(InstanceError::NonPositiveBound);
        }
        let mut seen = BTreeSet::new();
        let mut at_s = vec![Vec::new(); n];
        let mut at_t = vec![Vec::new(); t_count];
        for (id, e) in edges.iter().enumerate() {
            if e.s >= n || e.t >= t_count {
                return Err(InstanceError::IndexOutOfRange { edge: id });
            }
            if e.weight.is_negative() {
                return Err(InstanceError::NegativeWeight { edge: id });
            }
            if !seen.insert((e.s, e.t)) {
                return Err(InstanceError::DuplicateEdge { s: e.s, t: e.t });
            }
            at_s[e.s].push(id);
            at_t[e.t].push(id);
        }
        Ok(Instance { n, t_count, d, cyclic, b_s, b_t, edges, at_s, at_t })
    }

    /// Instance with `b_s ≡ 1`, unbounded right nodes and the given weighted edges.
    pub fn distance_matching(
        n: usize,
        t_count: usize,
        d: usize,
        cyclic: bool,
        edges: Vec<Edge>,
    ) -> Result<Self, InstanceError> {
        Self::new(n, t_count, d, cyclic, vec![1; n], vec![Bound::Unbounded; t_count], edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_count(&self) -> usize {
        self.t_count
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn b_s(&self) -> &[u32] {
        &self.b_s
    }

    pub fn b_t(&self) -> &[Bound] {
        &self.b_t
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge ids incident to left node `s`, in increasing order.
    pub fn edges_at_s(&self, s: usize) -> &[usize] {
        &self.at_s[s]
    }

    /// Edge ids incident to right node `t`, in increasing order.
    pub fn edges_at_t(&self, t: usize) -> &[usize] {
        &self.at_t[t]
    }

    pub fn weights(&self) -> Vec<Rational> {
        self.edges.iter().map(|e| e.weight.clone()).collect()
    }

    pub fn total_weight(&self) -> Rational {
        self.edges.iter().fold(Rational::zero(), |acc, e| acc + &e.weight)
    }

    /// Same graph and bounds with a different cyclic flag.
    pub fn with_cyclic(&self, cyclic: bool) -> Instance {
        Instance { cyclic, ..self.clone() }
    }

    /// Same graph and bounds with a different distance.
    pub fn with_distance(&self, d: usize) -> Result<Instance, InstanceError> {
        if d == 0 {
            return Err(InstanceError::ZeroDistance);
        }
        Ok(Instance { d, ..self.clone() })
    }

    /// Same nodes and bounds, keeping only the listed edges. Edge `k` of the
    /// result is `self.edge(kept[k])`.
    pub fn restricted_to(&self, kept: &[usize]) -> Result<Instance, InstanceError> {
        let mut edges = Vec::with_capacity(kept.len());
        for &id in kept {
            let e = self.edges.get(id).ok_or(InstanceError::UnknownEdge(id))?;
            edges.push(e.clone());
        }
        Instance::new(
            self.n,
            self.t_count,
            self.d,
            self.cyclic,
            self.b_s.clone(),
            self.b_t.clone(),
            edges,
        )
    }

    /// Reorders the left class: position `p` of the result holds the node
    /// `order[p]` of `self`. Edge ids are preserved.
    pub fn permuted(&self, order: &[usize]) -> Result<Instance, InstanceError> {
        let pos = positions_of(order, self.n).ok_or(InstanceError::InvalidPermutation)?;
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { s: pos[e.s], t: e.t, weight: e.weight.clone() })
            .collect();
        let b_s = order.iter().map(|&s| self.b_s[s]).collect();
        Instance::new(self.n, self.t_count, self.d, self.cyclic, b_s, self.b_t.clone(), edges)
    }

    /// The window `L_d(s_i)` or `R_d(s_i)` as a list of left indices, ordered
    /// from its first to its last position. Non-cyclic windows are clipped at
    /// both ends; cyclic windows wrap modulo `n` (without repeating a node).
    pub fn window(&self, i: usize, side: Side) -> Vec<usize> {
        assert!(i < self.n, "left index {i} out of range");
        let n = self.n as isize;
        let d = self.d as isize;
        let i = i as isize;
        let (lo, hi) = match side {
            Side::Left => (i - d + 1, i),
            Side::Right => (i, i + d - 1),
        };
        if self.cyclic {
            let len = (hi - lo + 1).min(n);
            let start = match side {
                Side::Left => hi - len + 1,
                Side::Right => lo,
            };
            (0..len).map(|k| (start + k).rem_euclid(n) as usize).collect()
        } else {
            (lo.max(0)..=hi.min(n - 1)).map(|k| k as usize).collect()
        }
    }

    /// Why two distinct left positions cannot share a right neighbour, if
    /// they cannot.
    pub fn distance_conflict(&self, i: usize, j: usize) -> Option<ViolationKind> {
        distance_conflict(self.n, self.d, self.cyclic, i, j)
    }
}

pub(crate) fn distance_conflict(
    n: usize,
    d: usize,
    cyclic: bool,
    i: usize,
    j: usize,
) -> Option<ViolationKind> {
    let diff = i.abs_diff(j);
    if diff < d {
        Some(ViolationKind::Distance)
    } else if cyclic && diff + d > n {
        Some(ViolationKind::CyclicDistance)
    } else {
        None
    }
}

/// Inverse of a permutation given as position → element, or `None` if
/// `order` is not a permutation of `0..n`.
pub fn positions_of(order: &[usize], n: usize) -> Option<Vec<usize>> {
    if order.len() != n {
        return None;
    }
    let mut pos = vec![usize::MAX; n];
    for (p, &s) in order.iter().enumerate() {
        if s >= n || pos[s] != usize::MAX {
            return None;
        }
        pos[s] = p;
    }
    Some(pos)
}

/// An edge subset of an instance with cached degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    edge_ids: Vec<usize>,
    deg_s: Vec<usize>,
    deg_t: Vec<usize>,
}

impl Matching {
    pub fn empty(inst: &Instance) -> Self {
        Matching { edge_ids: Vec::new(), deg_s: vec![0; inst.n], deg_t: vec![0; inst.t_count] }
    }

    pub fn from_edges<I>(inst: &Instance, ids: I) -> Result<Self, InstanceError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut m = Matching::empty(inst);
        for id in ids {
            m.insert(inst, id)?;
        }
        Ok(m)
    }

    /// Adds an edge; returns `false` if it was already present.
    pub fn insert(&mut self, inst: &Instance, id: usize) -> Result<bool, InstanceError> {
        let e = inst.edges.get(id).ok_or(InstanceError::UnknownEdge(id))?;
        match self.edge_ids.binary_search(&id) {
            Ok(_) => Ok(false),
            Err(at) => {
                self.edge_ids.insert(at, id);
                self.deg_s[e.s] += 1;
                self.deg_t[e.t] += 1;
                Ok(true)
            }
        }
    }

    pub fn contains(&self, id: usize) -> bool {
        self.edge_ids.binary_search(&id).is_ok()
    }

    /// Edge ids in increasing order.
    pub fn edge_ids(&self) -> &[usize] {
        &self.edge_ids
    }

    pub fn len(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_ids.is_empty()
    }

    pub fn deg_s(&self) -> &[usize] {
        &self.deg_s
    }

    pub fn deg_t(&self) -> &[usize] {
        &self.deg_t
    }

    pub fn weight(&self, inst: &Instance) -> Rational {
        self.edge_ids.iter().fold(Rational::zero(), |acc, &id| acc + &inst.edges[id].weight)
    }

    /// `deg(s) = b(s)` for every left node.
    pub fn is_perfect(&self, inst: &Instance) -> bool {
        self.deg_s.iter().zip(&inst.b_s).all(|(&deg, &b)| deg == b as usize)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    DegreeS,
    DegreeT,
    Distance,
    CyclicDistance,
}

/// A single reason for infeasibility. Degree violations name the node;
/// distance violations name the two offending edges (smaller left position
/// first).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    DegreeS { s: usize },
    DegreeT { t: usize },
    Distance { first: usize, second: usize },
    CyclicDistance { first: usize, second: usize },
}

impl Violation {
    pub fn kind(&self) -> ViolationKind {
        match self {
            Violation::DegreeS { .. } => ViolationKind::DegreeS,
            Violation::DegreeT { .. } => ViolationKind::DegreeT,
            Violation::Distance { .. } => ViolationKind::Distance,
            Violation::CyclicDistance { .. } => ViolationKind::CyclicDistance,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks degree bounds and the (cyclic) distance rule.
///
/// Per right node the chosen left positions are sorted; only neighbouring
/// positions (and, for cyclic instances, the last/first pair) need checking
/// since the closest pair of points on a line or circle is adjacent.
///
/// Degrees are recounted from the edge ids, so a matching built for one
/// instance can be checked against a reordering of it.
pub fn check_feasible(inst: &Instance, m: &Matching) -> FeasibilityReport {
    let mut violations = Vec::new();
    let mut deg_s = vec![0usize; inst.n];
    let mut deg_t = vec![0usize; inst.t_count];
    for &id in &m.edge_ids {
        deg_s[inst.edges[id].s] += 1;
        deg_t[inst.edges[id].t] += 1;
    }
    for (s, (&deg, &b)) in deg_s.iter().zip(&inst.b_s).enumerate() {
        if deg > b as usize {
            violations.push(Violation::DegreeS { s });
        }
    }
    for (t, (&deg, &b)) in deg_t.iter().zip(&inst.b_t).enumerate() {
        if !b.allows(deg) {
            violations.push(Violation::DegreeT { t });
        }
    }

    let mut per_t: Vec<Vec<(usize, usize)>> = vec![Vec::new(); inst.t_count];
    for &id in &m.edge_ids {
        let e = &inst.edges[id];
        per_t[e.t].push((e.s, id));
    }
    let mut push = |kind: ViolationKind, first: usize, second: usize| {
        violations.push(match kind {
            ViolationKind::Distance => Violation::Distance { first, second },
            _ => Violation::CyclicDistance { first, second },
        })
    };
    for chosen in &mut per_t {
        chosen.sort_unstable();
        for pair in chosen.windows(2) {
            let ((i, a), (j, b)) = (pair[0], pair[1]);
            if let Some(kind) = inst.distance_conflict(i, j) {
                push(kind, a, b);
            }
        }
        if inst.cyclic && chosen.len() > 2 {
            let (i, a) = chosen[0];
            let (j, b) = chosen[chosen.len() - 1];
            if let Some(kind) = inst.distance_conflict(i, j) {
                push(kind, a, b);
            }
        }
    }
    FeasibilityReport { violations }
}
