//! Min-cost flow and the degree-constrained subgraph solvers built on it.
//!
//! The engine maximizes profit: it augments along cheapest source–sink paths
//! (successive shortest paths with Johnson potentials) for as long as the
//! cheapest path has negative cost. Every polynomial solver in the crate
//! reduces to this.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use num_traits::Zero;
use thiserror::Error;

use crate::instance::{Bound, Instance};
use crate::rational::{scale_to_i64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub cap: i64,
    pub cost: i64,
}

/// A directed network with integer capacities and costs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowNetwork {
    nodes: usize,
    source: usize,
    sink: usize,
    arcs: Vec<Arc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("malformed network: {0}")]
    MalformedNetwork(&'static str),
    #[error("the network has a negative-cost cycle")]
    NegativeCycle,
    #[error("edge weights do not fit into 64-bit integer costs")]
    WeightOverflow,
}

impl FlowNetwork {
    /// A network with nodes `0..nodes`; `source` and `sink` must be distinct.
    pub fn new(nodes: usize, source: usize, sink: usize) -> Self {
        FlowNetwork { nodes, source, sink, arcs: Vec::new() }
    }

    pub fn add_node(&mut self) -> usize {
        self.nodes += 1;
        self.nodes - 1
    }

    /// Adds an arc and returns its id.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64, cost: i64) -> usize {
        self.arcs.push(Arc { from, to, cap, cost });
        self.arcs.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    fn validate(&self) -> Result<(), FlowError> {
        if self.source >= self.nodes || self.sink >= self.nodes {
            return Err(FlowError::MalformedNetwork("terminal out of range"));
        }
        if self.source == self.sink {
            return Err(FlowError::MalformedNetwork("source equals sink"));
        }
        for a in &self.arcs {
            if a.from >= self.nodes || a.to >= self.nodes {
                return Err(FlowError::MalformedNetwork("arc endpoint out of range"));
            }
            if a.from == a.to {
                return Err(FlowError::MalformedNetwork("self-loop arc"));
            }
            if a.cap < 0 {
                return Err(FlowError::MalformedNetwork("negative capacity"));
            }
        }
        Ok(())
    }
}

/// Optimal flow with its node potentials (a dual certificate: every residual
/// arc between nodes reachable from the source has non-negative reduced cost).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowSolution {
    pub flow: Vec<i64>,
    /// `-Σ cost·flow`.
    pub profit: i128,
    pub value: i64,
    pub potentials: Vec<i64>,
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn build(net: &FlowNetwork) -> Self {
        let m = net.arcs.len();
        let mut r = Residual {
            head: Vec::with_capacity(2 * m),
            cap: Vec::with_capacity(2 * m),
            cost: Vec::with_capacity(2 * m),
            adj: vec![Vec::new(); net.nodes],
        };
        for a in &net.arcs {
            r.adj[a.from].push(r.head.len());
            r.head.push(a.to);
            r.cap.push(a.cap);
            r.cost.push(a.cost);
            r.adj[a.to].push(r.head.len());
            r.head.push(a.from);
            r.cap.push(0);
            r.cost.push(-a.cost);
        }
        r
    }
}

/// Label-correcting shortest distances from `src` over positive-capacity
/// arcs; `None` for unreachable nodes.
fn bellman_ford(r: &Residual, src: usize) -> Result<Vec<Option<i64>>, FlowError> {
    let n = r.adj.len();
    let mut dist: Vec<Option<i64>> = vec![None; n];
    dist[src] = Some(0);
    for round in 0..=n {
        let mut changed = false;
        for u in 0..n {
            let Some(du) = dist[u] else { continue };
            for &e in &r.adj[u] {
                if r.cap[e] <= 0 {
                    continue;
                }
                let v = r.head[e];
                let cand = du + r.cost[e];
                if dist[v].is_none_or(|dv| cand < dv) {
                    dist[v] = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(dist);
        }
        if round == n {
            break;
        }
    }
    Err(FlowError::NegativeCycle)
}

/// Maximum-profit flow from source to sink.
///
/// Augments along a cheapest residual path while that path has negative
/// cost, so the result maximizes `-Σ cost·flow` over all feasible flows
/// (not necessarily of maximum value). Ties are broken deterministically.
pub fn min_cost_flow(net: &FlowNetwork) -> Result<FlowSolution, FlowError> {
    net.validate()?;
    let n = net.nodes;
    let mut r = Residual::build(net);
    let (s, t) = (net.source, net.sink);

    let init = bellman_ford(&r, s)?;
    let mut pot: Vec<i64> = init.iter().map(|d| d.unwrap_or(0)).collect();
    let mut value = 0i64;

    loop {
        let mut dist: Vec<Option<i64>> = vec![None; n];
        let mut prev: Vec<usize> = vec![usize::MAX; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[s] = Some(0);
        heap.push(Reverse((0i64, s)));
        while let Some(Reverse((du, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for &e in &r.adj[u] {
                if r.cap[e] <= 0 {
                    continue;
                }
                let v = r.head[e];
                let reduced = r.cost[e] + pot[u] - pot[v];
                debug_assert!(reduced >= 0, "negative reduced cost");
                let cand = du + reduced;
                if dist[v].is_none_or(|dv| cand < dv) {
                    dist[v] = Some(cand);
                    prev[v] = e;
                    heap.push(Reverse((cand, v)));
                }
            }
        }
        let Some(_) = dist[t] else { break };
        let max_dist = dist.iter().flatten().copied().max().unwrap_or(0);
        for v in 0..n {
            pot[v] += dist[v].unwrap_or(max_dist);
        }
        let path_cost = pot[t] - pot[s];
        if path_cost >= 0 {
            break;
        }
        let mut push = i64::MAX;
        let mut v = t;
        while v != s {
            let e = prev[v];
            push = push.min(r.cap[e]);
            v = r.head[e ^ 1];
        }
        let mut v = t;
        while v != s {
            let e = prev[v];
            r.cap[e] -= push;
            r.cap[e ^ 1] += push;
            v = r.head[e ^ 1];
        }
        value += push;
    }

    let flow: Vec<i64> = (0..net.arcs.len()).map(|i| r.cap[2 * i + 1]).collect();
    let profit = net
        .arcs
        .iter()
        .zip(&flow)
        .map(|(a, &f)| -(a.cost as i128) * f as i128)
        .sum();
    Ok(FlowSolution { flow, profit, value, potentials: pot })
}

/// A selected edge set together with the dual certificate of the flow that
/// produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSubsetResult {
    /// Selected edge ids in increasing order.
    pub edge_ids: Vec<usize>,
    pub total_weight: Rational,
    pub potentials: Vec<i64>,
}

fn finite_cap(b: Bound, surrogate: usize) -> i64 {
    match b {
        Bound::Finite(c) => c as i64,
        Bound::Unbounded => surrogate as i64,
    }
}

struct Gadget {
    net: FlowNetwork,
    edge_arcs: Vec<(usize, usize)>,
    t_nodes: usize,
}

/// Source → s → t → sink network with one arc per positive-weight edge.
fn bipartite_gadget(inst: &Instance, cap_s: &[Bound]) -> Result<Gadget, FlowError> {
    let (n, tc) = (inst.n(), inst.t_count());
    let (scaled, _) = scale_to_i64(&inst.weights()).ok_or(FlowError::WeightOverflow)?;
    let source = 0;
    let sink = 1;
    let s_node = |s: usize| 2 + s;
    let t_nodes = 2 + n;
    let mut net = FlowNetwork::new(2 + n + tc, source, sink);
    let m = inst.edge_count();
    for (s, &b) in cap_s.iter().enumerate() {
        net.add_arc(source, s_node(s), finite_cap(b, m), 0);
    }
    let mut edge_arcs = Vec::new();
    for (id, e) in inst.edges().iter().enumerate() {
        if scaled[id] > 0 {
            let arc = net.add_arc(s_node(e.s), t_nodes + e.t, 1, -scaled[id]);
            edge_arcs.push((id, arc));
        }
    }
    Ok(Gadget { net, edge_arcs, t_nodes })
}

fn collect(inst: &Instance, g: &Gadget, sol: FlowSolution) -> EdgeSubsetResult {
    let edge_ids: Vec<usize> =
        g.edge_arcs.iter().filter(|&&(_, arc)| sol.flow[arc] > 0).map(|&(id, _)| id).collect();
    let total_weight =
        edge_ids.iter().fold(Rational::zero(), |acc, &id| acc + &inst.edge(id).weight);
    EdgeSubsetResult { edge_ids, total_weight, potentials: sol.potentials }
}

/// Maximum-weight edge set with `deg(s) ≤ cap_s(s)` and `deg(t) ≤ cap_t(t)`.
/// Distances are ignored. Zero-weight edges are never selected.
pub fn max_weight_b_matching(
    inst: &Instance,
    cap_s: &[Bound],
    cap_t: &[Bound],
) -> Result<EdgeSubsetResult, FlowError> {
    assert_eq!(cap_s.len(), inst.n(), "one cap per left node");
    assert_eq!(cap_t.len(), inst.t_count(), "one cap per right node");
    let mut g = bipartite_gadget(inst, cap_s)?;
    let m = inst.edge_count();
    for (t, &b) in cap_t.iter().enumerate() {
        let sink = g.net.sink();
        g.net.add_arc(g.t_nodes + t, sink, finite_cap(b, m), 0);
    }
    let sol = min_cost_flow(&g.net)?;
    Ok(collect(inst, &g, sol))
}

/// Maximum-weight edge set with `deg(s) ≤ 1`, `deg(t) ≤ k + 1` and at most
/// `r` right nodes of degree exactly `k + 1`.
///
/// Each right node drains `k` units directly to the sink and one more unit
/// through a shared budget node whose arc to the sink has capacity `r`.
/// With `cap_t`, right nodes additionally respect their own bounds.
pub fn max_weight_capped_excess(
    inst: &Instance,
    k: u32,
    r: u32,
    cap_t: Option<&[Bound]>,
) -> Result<EdgeSubsetResult, FlowError> {
    let ones = vec![Bound::Finite(1); inst.n()];
    let mut g = bipartite_gadget(inst, &ones)?;
    let sink = g.net.sink();
    let budget = g.net.add_node();
    g.net.add_arc(budget, sink, r as i64, 0);
    for t in 0..inst.t_count() {
        let limit = cap_t.map_or(Bound::Unbounded, |c| c[t]);
        let direct = limit.min_with(k);
        let node = g.t_nodes + t;
        if direct > 0 {
            g.net.add_arc(node, sink, direct as i64, 0);
        }
        if limit.allows(k as usize + 1) {
            g.net.add_arc(node, budget, 1, 0);
        }
    }
    let sol = min_cost_flow(&g.net)?;
    Ok(collect(inst, &g, sol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Edge;
    use crate::rational::int;

    fn edge(s: usize, t: usize, w: i64) -> Edge {
        Edge { s, t, weight: int(w) }
    }

    #[test]
    fn single_profitable_arc() {
        let mut net = FlowNetwork::new(2, 0, 1);
        net.add_arc(0, 1, 1, -5);
        let sol = min_cost_flow(&net).unwrap();
        assert_eq!(sol.flow, [1]);
        assert_eq!(sol.profit, 5);
    }

    #[test]
    fn costly_arc_carries_nothing() {
        let mut net = FlowNetwork::new(2, 0, 1);
        net.add_arc(0, 1, 1, 5);
        let sol = min_cost_flow(&net).unwrap();
        assert_eq!(sol.flow, [0]);
        assert_eq!(sol.profit, 0);
    }

    #[test]
    fn assignment_gadget() {
        // source 0, left 1-2, right 3-4, sink 5
        let mut net = FlowNetwork::new(6, 0, 5);
        net.add_arc(0, 1, 1, 0);
        net.add_arc(0, 2, 1, 0);
        net.add_arc(1, 3, 1, -3);
        net.add_arc(1, 4, 1, -1);
        net.add_arc(2, 3, 1, -1);
        net.add_arc(2, 4, 1, -3);
        net.add_arc(3, 5, 1, 0);
        net.add_arc(4, 5, 1, 0);
        let sol = min_cost_flow(&net).unwrap();
        assert_eq!(sol.profit, 6);
        assert_eq!(sol.value, 2);
    }

    #[test]
    fn rerouting_through_reverse_arcs() {
        // greedy first path is 0-1-2-3 (profit 10); optimum uses two paths of 6
        let mut net = FlowNetwork::new(4, 0, 3);
        net.add_arc(0, 1, 1, 0);
        net.add_arc(0, 2, 1, 0);
        net.add_arc(1, 2, 1, -10);
        net.add_arc(1, 3, 1, -6);
        net.add_arc(2, 3, 1, -6);
        let sol = min_cost_flow(&net).unwrap();
        assert_eq!(sol.profit, 16);
    }

    #[test]
    fn rejects_malformed() {
        let mut net = FlowNetwork::new(2, 0, 1);
        net.add_arc(1, 1, 1, 0);
        assert!(matches!(min_cost_flow(&net), Err(FlowError::MalformedNetwork(_))));
        let net = FlowNetwork::new(2, 0, 0);
        assert!(matches!(min_cost_flow(&net), Err(FlowError::MalformedNetwork(_))));
        let mut net = FlowNetwork::new(2, 0, 1);
        net.add_arc(0, 1, -1, 0);
        assert!(matches!(min_cost_flow(&net), Err(FlowError::MalformedNetwork(_))));
    }

    #[test]
    fn detects_negative_cycle() {
        let mut net = FlowNetwork::new(4, 0, 3);
        net.add_arc(0, 1, 1, 0);
        net.add_arc(1, 2, 1, -1);
        net.add_arc(2, 1, 1, -1);
        assert_eq!(min_cost_flow(&net), Err(FlowError::NegativeCycle));
    }

    fn star(n: usize, weights: &[i64]) -> Instance {
        let edges = weights.iter().enumerate().map(|(s, &w)| edge(s, 0, w)).collect();
        Instance::distance_matching(n, 1, 2, true, edges).unwrap()
    }

    #[test]
    fn b_matching_examples() {
        let tight = star(3, &[1, 1, 1]);
        let ones = vec![Bound::Finite(1); 3];
        let res = max_weight_b_matching(&tight, &ones, &[Bound::Finite(1)]).unwrap();
        assert_eq!(res.total_weight, int(1));
        let res = max_weight_b_matching(&tight, &ones, &[Bound::Unbounded]).unwrap();
        assert_eq!(res.total_weight, int(3));
        assert_eq!(res.edge_ids, [0, 1, 2]);

        let two = star(2, &[5, 0]);
        let res = max_weight_b_matching(&two, &[Bound::Finite(1); 2], &[Bound::Finite(1)]).unwrap();
        assert_eq!(res.total_weight, int(5));
        assert_eq!(res.edge_ids, [0]);
    }

    #[test]
    fn capped_excess_examples() {
        let inst = Instance::distance_matching(2, 2, 1, false, vec![edge(0, 0, 1), edge(1, 1, 1)])
            .unwrap();
        let res = max_weight_capped_excess(&inst, 0, 1, None).unwrap();
        assert_eq!(res.total_weight, int(1));
        let res = max_weight_capped_excess(&inst, 0, 2, None).unwrap();
        assert_eq!(res.total_weight, int(2));

        let tight = star(3, &[1, 2, 3]);
        let res = max_weight_capped_excess(&tight, 1, 0, None).unwrap();
        let plain = max_weight_b_matching(&tight, &[Bound::Finite(1); 3], &[Bound::Finite(1)])
            .unwrap();
        assert_eq!(res.total_weight, plain.total_weight);
        assert_eq!(res.total_weight, int(3));
    }

    #[test]
    fn rational_weights_are_exact() {
        let inst = Instance::distance_matching(
            2,
            1,
            1,
            false,
            vec![
                Edge { s: 0, t: 0, weight: crate::rational::ratio(1, 3) },
                Edge { s: 1, t: 0, weight: crate::rational::ratio(1, 2) },
            ],
        )
        .unwrap();
        let res = max_weight_b_matching(&inst, &[Bound::Finite(1); 2], &[Bound::Finite(1)]).unwrap();
        assert_eq!(res.total_weight, crate::rational::ratio(1, 2));
    }
}
