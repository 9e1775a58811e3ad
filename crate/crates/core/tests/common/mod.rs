//! Independent oracles shared by the integration tests. Nothing here calls
//! the solvers under test.

#![allow(dead_code)]

use distmatch::gen::{gen_random, RandomParams, SimpleGraph, ThreeDimMatchingInstance};
use distmatch::rational::{int, ratio};
use distmatch::{Bound, Edge, Instance, Rational};
use num_traits::Zero;

pub fn star(n: usize, d: usize, cyclic: bool) -> Instance {
    let edges = (0..n).map(|s| Edge { s, t: 0, weight: int(1) }).collect();
    Instance::distance_matching(n, 1, d, cyclic, edges).unwrap()
}

/// The instance of the non-cyclic table-filling figure: `n = 11`, `d = 4`,
/// right degrees `(3, 1, 1, 2, 2, 2)`, left nodes grouped by neighbour.
pub fn fig3() -> Instance {
    let groups: [&[usize]; 6] = [&[0, 1, 2], &[3], &[4], &[5, 6], &[7, 8], &[9, 10]];
    let mut edges = Vec::new();
    for (t, g) in groups.iter().enumerate() {
        for &s in *g {
            edges.push(Edge { s, t, weight: int(1) });
        }
    }
    Instance::distance_matching(11, 6, 4, false, edges).unwrap()
}

/// Pairwise re-check straight from the definition: degrees within bounds
/// and, for two chosen edges at one right node, `|i − j| ≥ d` plus
/// `|i − j| ≤ n − d` on a cycle.
pub fn naive_feasible(inst: &Instance, ids: &[usize]) -> bool {
    let mut deg_s = vec![0u32; inst.n()];
    let mut deg_t = vec![0usize; inst.t_count()];
    for &id in ids {
        let e = inst.edge(id);
        deg_s[e.s] += 1;
        deg_t[e.t] += 1;
    }
    if (0..inst.n()).any(|s| deg_s[s] > inst.b_s()[s]) {
        return false;
    }
    for t in 0..inst.t_count() {
        if let Bound::Finite(b) = inst.b_t()[t] {
            if deg_t[t] > b as usize {
                return false;
            }
        }
    }
    let (n, d) = (inst.n() as i64, inst.d() as i64);
    for (a, &x) in ids.iter().enumerate() {
        for &y in &ids[a + 1..] {
            let (ex, ey) = (inst.edge(x), inst.edge(y));
            if ex.t != ey.t {
                continue;
            }
            let gap = (ex.s as i64 - ey.s as i64).abs();
            if gap < d || (inst.is_cyclic() && gap > n - d) {
                return false;
            }
        }
    }
    true
}

pub fn mask_ids(mask: u64, len: usize) -> Vec<usize> {
    (0..len).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn weight_of(inst: &Instance, ids: &[usize]) -> Rational {
    ids.iter().fold(Rational::zero(), |acc, &id| acc + &inst.edge(id).weight)
}

/// Heaviest edge subset accepted by `accept`, by enumerating all subsets.
pub fn subset_max(inst: &Instance, mut accept: impl FnMut(&[usize]) -> bool) -> Rational {
    let m = inst.edge_count();
    assert!(m <= 22, "subset enumeration is exponential");
    let mut best = Rational::zero();
    for mask in 0u64..1 << m {
        let ids = mask_ids(mask, m);
        let w = weight_of(inst, &ids);
        if w > best && accept(&ids) {
            best = w;
        }
    }
    best
}

/// Exact optimum of the distance problem by subset enumeration.
pub fn subset_optimum(inst: &Instance) -> Rational {
    subset_max(inst, |ids| naive_feasible(inst, ids))
}

pub fn degrees(inst: &Instance, ids: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut ds = vec![0; inst.n()];
    let mut dt = vec![0; inst.t_count()];
    for &id in ids {
        ds[inst.edge(id).s] += 1;
        dt[inst.edge(id).t] += 1;
    }
    (ds, dt)
}

/// Random instance from `params`, retrying successive seeds until the edge
/// count is at most `max_edges`.
pub fn random_instance(params: &RandomParams, seed: u64, max_edges: usize) -> Instance {
    (0..)
        .map(|k| gen_random(params, seed.wrapping_mul(1_000_003).wrapping_add(k)).unwrap())
        .find(|inst| inst.edge_count() <= max_edges)
        .unwrap()
}

/// Largest 3-dimensional matching, by enumerating triple subsets.
pub fn max_3dm(h: &ThreeDimMatchingInstance) -> usize {
    let m = h.triples().len();
    let mut best = 0;
    for mask in 0u64..1 << m {
        let ids = mask_ids(mask, m);
        if ids.len() > best && h.is_matching(&ids) {
            best = ids.len();
        }
    }
    best
}

/// Every order of `0..n`, by Heap's algorithm.
pub fn all_orders(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            let j = if k % 2 == 0 { i } else { 0 };
            a.swap(j, k - 1);
        }
    }
    let mut out = Vec::new();
    heap(n, &mut (0..n).collect(), &mut out);
    out
}

pub fn has_hamiltonian_path(g: &SimpleGraph) -> bool {
    let n = g.nodes();
    n <= 1 || all_orders(n).iter().any(|o| o.windows(2).all(|w| g.has_edge(w[0], w[1])))
}

pub fn small_weights() -> RandomParams {
    RandomParams { weight_range: (0, 6), weight_den: 2, ..RandomParams::default() }
}

pub fn unit() -> Rational {
    ratio(1, 1)
}
