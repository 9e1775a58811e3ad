//! Decomposition approximation algorithms.
//!
//! The left class is covered by `m` subsets, each a union of length-`d`
//! intervals, such that every node lies in exactly `d` of them. On each
//! subset the LP relaxation is integral and is solved exactly as a flow
//! problem; the heaviest of the `m` solutions is within a factor `d/m` of
//! both the LP and the integer optimum. Cyclic instances use `m = 2d − 1`
//! (which must divide `n`); non-cyclic instances with unbounded right nodes
//! use `m = 2d − 2` after padding `n` with isolated nodes.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use thiserror::Error;

use crate::instance::{Bound, Instance, Matching};
use crate::netflow::{max_weight_b_matching, min_cost_flow, FlowError, FlowNetwork};
use crate::rational::{ratio, scale_to_i64, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("cyclic decomposition needs 2d-1 = {m} to divide n = {n}")]
    DivisibilityViolated { n: usize, m: usize },
    #[error("the non-cyclic decomposition needs d >= 2")]
    DNotSupported,
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// Cover of the left class by `m` unions of length-`d` intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub n: usize,
    pub d: usize,
    pub cyclic: bool,
    /// Length of the (possibly padded) cyclic order the intervals live on.
    pub padded_n: usize,
    /// Interval start positions of each class on the padded order.
    pub starts: Vec<Vec<usize>>,
    /// Original left indices of each class, sorted.
    pub classes: Vec<Vec<usize>>,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    fn build(n: usize, padded_n: usize, d: usize, m: usize, cyclic: bool) -> Self {
        let mut starts = Vec::with_capacity(m);
        let mut classes = Vec::with_capacity(m);
        for i in 0..m {
            let class_starts: Vec<usize> = (0..padded_n / m).map(|q| i + q * m).collect();
            let mut members: Vec<usize> = class_starts
                .iter()
                .flat_map(|&a| (0..d).map(move |o| (a + o) % padded_n))
                .filter(|&s| s < n)
                .collect();
            members.sort_unstable();
            members.dedup();
            starts.push(class_starts);
            classes.push(members);
        }
        Decomposition { n, d, cyclic, padded_n, starts, classes }
    }

    /// Maximal runs of consecutive original indices of class `i`, in order.
    /// Each run is part of one interval, cut at the wrap point or at padding.
    fn pieces(&self, i: usize) -> Vec<(usize, usize)> {
        let mut raw = Vec::new();
        for &a in &self.starts[i] {
            let end = a + self.d - 1;
            if end < self.padded_n {
                raw.push((a, end));
            } else {
                raw.push((a, self.padded_n - 1));
                raw.push((0, end - self.padded_n));
            }
        }
        let mut out: Vec<(usize, usize)> = raw
            .into_iter()
            .filter(|&(lo, _)| lo < self.n)
            .map(|(lo, hi)| (lo, hi.min(self.n - 1)))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Cyclic cover by `2d − 1` classes; requires `(2d − 1) | n`.
pub fn decompose_cyclic(inst: &Instance) -> Result<Decomposition, ApproxError> {
    let (n, d) = (inst.n(), inst.d());
    let m = 2 * d - 1;
    if n % m != 0 {
        return Err(ApproxError::DivisibilityViolated { n, m });
    }
    Ok(Decomposition::build(n, n, d, m, true))
}

/// Non-cyclic cover by `2d − 2` classes on the order padded to a multiple
/// of `2d − 2`; requires `d ≥ 2`.
pub fn decompose_noncyclic(inst: &Instance) -> Result<Decomposition, ApproxError> {
    let (n, d) = (inst.n(), inst.d());
    if d < 2 {
        return Err(ApproxError::DNotSupported);
    }
    let m = 2 * d - 2;
    let padded_n = n.div_ceil(m).max(1) * m;
    Ok(Decomposition::build(n, padded_n, d, m, false))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RestrictedMode {
    /// Per-interval and degree constraints (general `b`).
    Cyclic,
    /// Interval constraints plus the windows bridging consecutive intervals;
    /// right nodes must be unbounded.
    NonCyclic,
}

/// Maximum-weight feasible solution using only edges whose left endpoint
/// lies in class `class` of `dec`.
pub fn solve_restricted(
    inst: &Instance,
    dec: &Decomposition,
    class: usize,
    mode: RestrictedMode,
) -> Result<Matching, ApproxError> {
    let ids = match mode {
        RestrictedMode::Cyclic => solve_cyclic_class(inst, dec, class)?,
        RestrictedMode::NonCyclic => {
            if inst.b_t().iter().any(|b| !b.is_unbounded()) {
                return Err(ApproxError::PreconditionViolated(
                    "the non-cyclic algorithm needs unbounded right nodes",
                ));
            }
            solve_noncyclic_class(inst, dec, class)?
        }
    };
    Ok(Matching::from_edges(inst, ids).expect("edge ids come from the instance"))
}

/// Positive-weight edges of the class with their scaled integer weights.
fn class_edges(inst: &Instance, members: &[usize]) -> Result<Vec<(usize, i64)>, ApproxError> {
    let (scaled, _) = scale_to_i64(&inst.weights()).ok_or(FlowError::WeightOverflow)?;
    let mut out = Vec::new();
    for &s in members {
        for &id in inst.edges_at_s(s) {
            if scaled[id] > 0 {
                out.push((id, scaled[id]));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn solve_cyclic_class(
    inst: &Instance,
    dec: &Decomposition,
    class: usize,
) -> Result<Vec<usize>, ApproxError> {
    let n = inst.n();
    let mut interval_of = vec![usize::MAX; n];
    for (q, &a) in dec.starts[class].iter().enumerate() {
        for o in 0..dec.d {
            let s = (a + o) % dec.padded_n;
            if s < n {
                interval_of[s] = q;
            }
        }
    }
    let edges = class_edges(inst, &dec.classes[class])?;
    let cap_edges = inst.edge_count() as i64;

    let (source, sink) = (0, 1);
    let s_node = |s: usize| 2 + s;
    let t_node = |t: usize| 2 + n + t;
    let mut net = FlowNetwork::new(2 + n + inst.t_count(), source, sink);
    for &s in &dec.classes[class] {
        net.add_arc(source, s_node(s), inst.b_s()[s] as i64, 0);
    }
    for (t, &b) in inst.b_t().iter().enumerate() {
        let cap = b.finite().map_or(cap_edges, |c| c as i64);
        net.add_arc(t_node(t), sink, cap, 0);
    }
    let mut agg: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut arcs = Vec::with_capacity(edges.len());
    for &(id, w) in &edges {
        let e = inst.edge(id);
        let key = (e.t, interval_of[e.s]);
        let node = *agg.entry(key).or_insert_with(|| {
            let v = net.add_node();
            net.add_arc(v, t_node(e.t), 1, 0);
            v
        });
        arcs.push((id, net.add_arc(s_node(e.s), node, 1, -w)));
    }
    let sol = min_cost_flow(&net)?;
    Ok(arcs.into_iter().filter(|&(_, a)| sol.flow[a] > 0).map(|(id, _)| id).collect())
}

/// The restricted non-cyclic LP has a network matrix. Its tree has one
/// spine node per chain row (runs alternating with bridging windows), the
/// degree constraint of a left node as the arc between its run and the
/// adjacent bridge (or as a leaf of its run), and per right node a leaf arc
/// for each row. Each variable is a non-tree arc closing the directed tree
/// path through its rows, so the LP becomes a max-profit circulation, solved
/// by pre-saturating every profitable column and letting the flow engine undo
/// the cheapest excess.
fn solve_noncyclic_class(
    inst: &Instance,
    dec: &Decomposition,
    class: usize,
) -> Result<Vec<usize>, ApproxError> {
    let d = dec.d;
    let n = inst.n();
    let pieces = dec.pieces(class);

    // Chain rows: run rows and bridge rows between consecutive runs at
    // distance exactly d − 1.
    let mut run_row = Vec::with_capacity(pieces.len());
    let mut bridge_after: Vec<Option<usize>> = vec![None; pieces.len()];
    let mut rows = 0usize;
    for (r, &(lo, _)) in pieces.iter().enumerate() {
        if r > 0 {
            let gap = lo - pieces[r - 1].1;
            if gap + 1 < d {
                return Err(ApproxError::PreconditionViolated("class intervals overlap"));
            }
            if gap + 1 == d {
                bridge_after[r - 1] = Some(rows);
                rows += 1;
            }
        }
        run_row.push(rows);
        rows += 1;
    }
    let mut piece_of = vec![usize::MAX; n];
    for (r, &(lo, hi)) in pieces.iter().enumerate() {
        for s in lo..=hi {
            piece_of[s] = r;
        }
    }

    let edges = class_edges(inst, &dec.classes[class])?;
    let big: i64 = edges.iter().map(|&(_, w)| w).sum::<i64>() + 1;

    let (source, sink) = (0, 1);
    let spine = |row: usize| 2 + row;
    let mut net = FlowNetwork::new(2 + rows, source, sink);

    // Degree arcs: where each left node's edges end up.
    #[derive(Clone, Copy)]
    enum End {
        Bridge(usize),
        Leaf(usize),
    }
    let mut end_of: BTreeMap<usize, End> = BTreeMap::new();
    for (r, &(lo, hi)) in pieces.iter().enumerate() {
        let before = if r > 0 { bridge_after[r - 1] } else { None };
        let after = bridge_after[r];
        for s in lo..=hi {
            let bridge = match (s == lo, s == hi) {
                (true, true) if before.is_some() && after.is_some() => {
                    return Err(ApproxError::PreconditionViolated(
                        "single-node interval between two bridges",
                    ));
                }
                (true, _) if before.is_some() => before,
                (_, true) if after.is_some() => after,
                _ => None,
            };
            let cap = inst.b_s()[s] as i64;
            let end = match bridge {
                Some(row) => {
                    net.add_arc(spine(run_row[r]), spine(row), cap, 0);
                    End::Bridge(row)
                }
                None => {
                    let q = net.add_node();
                    net.add_arc(spine(run_row[r]), q, cap, 0);
                    End::Leaf(q)
                }
            };
            end_of.insert(s, end);
        }
    }

    // Per (t, row) leaves, created on demand.
    let mut leaf: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut leaf_node = |net: &mut FlowNetwork, t: usize, row: usize, is_bridge: bool| -> usize {
        *leaf.entry((t, row)).or_insert_with(|| {
            let v = net.add_node();
            if is_bridge {
                net.add_arc(spine(row), v, 1, 0);
            } else {
                net.add_arc(v, spine(row), 1, 0);
            }
            v
        })
    };

    let mut excess: BTreeMap<usize, i64> = BTreeMap::new();
    let mut undo = Vec::with_capacity(edges.len());
    for &(id, w) in &edges {
        let e = inst.edge(id);
        let r = piece_of[e.s];
        let head = leaf_node(&mut net, e.t, run_row[r], false);
        let tail = match end_of[&e.s] {
            End::Bridge(row) => leaf_node(&mut net, e.t, row, true),
            End::Leaf(q) => q,
        };
        // Column arc tail → head pre-saturated; the undo arc reverses it.
        *excess.entry(head).or_insert(0) += 1;
        *excess.entry(tail).or_insert(0) -= 1;
        undo.push((id, net.add_arc(head, tail, 1, w)));
    }
    for (&v, &x) in &excess {
        if x > 0 {
            net.add_arc(source, v, x, -big);
        } else if x < 0 {
            net.add_arc(v, sink, -x, 0);
        }
    }
    let sol = min_cost_flow(&net)?;
    let required: i64 = excess.values().filter(|&&x| x > 0).sum();
    debug_assert_eq!(sol.value, required, "pre-saturated excess must be routable");
    Ok(undo.into_iter().filter(|&(_, a)| sol.flow[a] == 0).map(|(id, _)| id).collect())
}

/// Outcome of the decomposition algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxResult {
    pub matching: Matching,
    pub weight: Rational,
    /// Optimum of every class, in class order (empty when no decomposition
    /// was needed).
    pub class_weights: Vec<Rational>,
    /// Class the returned matching comes from.
    pub best_class: Option<usize>,
    /// Proven lower bound on `weight / OPT` (and on `weight / LP`).
    pub guarantee: Rational,
}

/// Solves every class and returns the heaviest class optimum (lowest class
/// index on ties). With `d = 1` the distance rule is vacuous and the
/// instance is solved exactly as a b-matching.
pub fn approximate(inst: &Instance) -> Result<ApproxResult, ApproxError> {
    let d = inst.d();
    if d == 1 && !inst.is_cyclic() {
        let caps: Vec<Bound> = inst.b_s().iter().map(|&b| Bound::Finite(b)).collect();
        let res = max_weight_b_matching(inst, &caps, inst.b_t())?;
        let matching = Matching::from_edges(inst, res.edge_ids).expect("valid edge ids");
        return Ok(ApproxResult {
            matching,
            weight: res.total_weight,
            class_weights: Vec::new(),
            best_class: None,
            guarantee: ratio(1, 1),
        });
    }
    let (dec, mode, m) = if inst.is_cyclic() {
        (decompose_cyclic(inst)?, RestrictedMode::Cyclic, 2 * d - 1)
    } else {
        if inst.b_t().iter().any(|b| !b.is_unbounded()) {
            return Err(ApproxError::PreconditionViolated(
                "the non-cyclic algorithm needs unbounded right nodes",
            ));
        }
        (decompose_noncyclic(inst)?, RestrictedMode::NonCyclic, 2 * d - 2)
    };
    let mut best: Option<(usize, Matching, Rational)> = None;
    let mut class_weights = Vec::with_capacity(dec.len());
    for i in 0..dec.len() {
        let m_i = solve_restricted(inst, &dec, i, mode)?;
        let w = m_i.weight(inst);
        class_weights.push(w.clone());
        if best.as_ref().is_none_or(|(_, _, bw)| w > *bw) {
            best = Some((i, m_i, w));
        }
    }
    let (best_class, matching, weight) = match best {
        Some((i, m, w)) => (Some(i), m, w),
        None => (None, Matching::empty(inst), Rational::zero()),
    };
    Ok(ApproxResult {
        matching,
        weight,
        class_weights,
        best_class,
        guarantee: ratio(d as i64, m as i64),
    })
}
