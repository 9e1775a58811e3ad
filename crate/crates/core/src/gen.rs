//! Instance generators: the tight integrality-gap family, the reduction
//! from 3-dimensional matching to double matching, the reduction from
//! Hamiltonian path to ordering with `d = 2`, and seeded random instances.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact::{DoubleMatchingInstance, ExactError};
use crate::instance::{Bound, Edge, Instance, InstanceError};
use crate::rational::{int, ratio};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("malformed hypergraph: {0}")]
    MalformedHypergraph(&'static str),
    #[error("malformed graph: {0}")]
    MalformedGraph(&'static str),
    #[error("the edge set is not a double matching of the reduction")]
    InfeasibleInput,
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Complete star on `2d − 1` left nodes, cyclic, unit weights, `b_s ≡ 1`
/// and an unbounded right node. Its LP optimum is `2 − 1/d` while its
/// integer optimum is 1.
pub fn gen_tight_gap(d: usize) -> Result<Instance, GenError> {
    if d == 0 {
        return Err(GenError::InvalidParams("d must be at least 1"));
    }
    let n = 2 * d - 1;
    let edges = (0..n).map(|s| Edge { s, t: 0, weight: int(1) }).collect();
    Ok(Instance::distance_matching(n, 1, d, true, edges)?)
}

/// Triples over disjoint ground sets `X`, `Y`, `Z` (given by their sizes).
/// Triples are kept sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeDimMatchingInstance {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    triples: Vec<(usize, usize, usize)>,
}

impl ThreeDimMatchingInstance {
    pub fn new(
        x: usize,
        y: usize,
        z: usize,
        mut triples: Vec<(usize, usize, usize)>,
    ) -> Result<Self, GenError> {
        if triples.iter().any(|&(a, b, c)| a >= x || b >= y || c >= z) {
            return Err(GenError::MalformedHypergraph("element out of range"));
        }
        triples.sort_unstable();
        if triples.windows(2).any(|w| w[0] == w[1]) {
            return Err(GenError::MalformedHypergraph("repeated triple"));
        }
        Ok(ThreeDimMatchingInstance { x, y, z, triples })
    }

    pub fn triples(&self) -> &[(usize, usize, usize)] {
        &self.triples
    }

    /// Every element lies in exactly two triples.
    pub fn is_two_regular(&self) -> bool {
        let mut cx = vec![0; self.x];
        let mut cy = vec![0; self.y];
        let mut cz = vec![0; self.z];
        for &(a, b, c) in &self.triples {
            cx[a] += 1;
            cy[b] += 1;
            cz[c] += 1;
        }
        cx.iter().chain(&cy).chain(&cz).all(|&c| c == 2)
    }

    /// The listed triples are pairwise disjoint in every coordinate.
    pub fn is_matching(&self, chosen: &[usize]) -> bool {
        let mut xs = BTreeSet::new();
        let mut ys = BTreeSet::new();
        let mut zs = BTreeSet::new();
        let mut ids = BTreeSet::new();
        chosen.iter().all(|&i| {
            self.triples.get(i).is_some_and(|&(a, b, c)| {
                ids.insert(i) && xs.insert(a) && ys.insert(b) && zs.insert(c)
            })
        })
    }
}

/// Random 2-regular instance with `|X| = |Y| = |Z| = m` and `2m` distinct
/// triples. Requires `m ≥ 2`.
pub fn random_two_regular_3dm(m: usize, seed: u64) -> Result<ThreeDimMatchingInstance, GenError> {
    if m < 2 {
        return Err(GenError::InvalidParams("a 2-regular instance needs at least two elements"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let copies: Vec<usize> = (0..m).flat_map(|i| [i, i]).collect();
    loop {
        let mut cols = [copies.clone(), copies.clone(), copies.clone()];
        for col in &mut cols {
            col.shuffle(&mut rng);
        }
        let triples: Vec<_> = (0..2 * m).map(|i| (cols[0][i], cols[1][i], cols[2][i])).collect();
        if let Ok(h) = ThreeDimMatchingInstance::new(m, m, m, triples) {
            return Ok(h);
        }
    }
}

/// Node layout of the double matching built from a 3DM instance.
///
/// Left nodes: `e^X` for each triple, then `Y`, then `e^Z` for each triple.
/// Right nodes: `X`, then `e^Y` for each triple, then `Z`. Triple `e` owns
/// edges `5e..5e+5`: `e^X e^Y`, `e^Z e^Y`, `x e^X`, `y e^Y`, `z e^Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionLayout {
    pub triples: usize,
    pub x: usize,
    pub y: usize,
}

impl ReductionLayout {
    pub fn hx(&self, e: usize) -> usize {
        e
    }
    pub fn y_node(&self, y: usize) -> usize {
        self.triples + y
    }
    pub fn hz(&self, e: usize) -> usize {
        self.triples + self.y + e
    }
    pub fn x_node(&self, x: usize) -> usize {
        x
    }
    pub fn hy(&self, e: usize) -> usize {
        self.x + e
    }
    pub fn z_node(&self, z: usize) -> usize {
        self.x + self.triples + z
    }
}

/// The double matching instance of the reduction, with
/// `S_1 = H_X ∪ Y` and `S_2 = Y ∪ H_Z`.
pub fn gen_from_3dm(h: &ThreeDimMatchingInstance) -> Result<DoubleMatchingInstance, GenError> {
    let m = h.triples.len();
    let lay = ReductionLayout { triples: m, x: h.x, y: h.y };
    let s_count = 2 * m + h.y;
    let t_count = h.x + m + h.z;
    let mut edges = Vec::with_capacity(5 * m);
    for (e, &(x, y, z)) in h.triples.iter().enumerate() {
        edges.push((lay.hx(e), lay.hy(e)));
        edges.push((lay.hz(e), lay.hy(e)));
        edges.push((lay.hx(e), lay.x_node(x)));
        edges.push((lay.y_node(y), lay.hy(e)));
        edges.push((lay.hz(e), lay.z_node(z)));
    }
    let in_s1 = (0..s_count).map(|s| s < m + h.y).collect();
    let in_s2 = (0..s_count).map(|s| s >= m).collect();
    Ok(DoubleMatchingInstance::new(s_count, t_count, in_s1, in_s2, edges)?)
}

/// Double matching of size `|F| + 2|H|` induced by a 3-dimensional
/// matching `chosen`: the three element edges of chosen triples and the two
/// internal edges of the others.
pub fn embed_3dm(h: &ThreeDimMatchingInstance, chosen: &[usize]) -> Vec<usize> {
    let picked: BTreeSet<usize> = chosen.iter().copied().collect();
    let mut out = Vec::new();
    for e in 0..h.triples.len() {
        if picked.contains(&e) {
            out.extend([5 * e + 2, 5 * e + 3, 5 * e + 4]);
        } else {
            out.extend([5 * e, 5 * e + 1]);
        }
    }
    out
}

/// Turns a double matching of the reduction into a 3-dimensional matching:
/// gadgets with fewer than three chosen edges are replaced by their two
/// internal edges; the triples whose gadget keeps three edges form the
/// result. Returns the chosen triple indices and the canonical edge set.
pub fn extract_3dm(
    dm_solution: &[usize],
    h: &ThreeDimMatchingInstance,
) -> Result<(Vec<usize>, Vec<usize>), GenError> {
    let dm = gen_from_3dm(h)?;
    if !dm.is_double_matching(dm_solution) {
        return Err(GenError::InfeasibleInput);
    }
    let mut per_gadget = vec![0usize; h.triples.len()];
    for &id in dm_solution {
        per_gadget[id / 5] += 1;
    }
    let chosen: Vec<usize> = (0..h.triples.len()).filter(|&e| per_gadget[e] == 3).collect();
    let canonical = embed_3dm(h, &chosen);
    debug_assert!(dm.is_double_matching(&canonical));
    debug_assert!(h.is_matching(&chosen));
    Ok((chosen, canonical))
}

/// Undirected simple graph on nodes `0..nodes`; edges stored as `(u, v)`
/// with `u < v`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    nodes: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(nodes: usize, edges: Vec<(usize, usize)>) -> Result<Self, GenError> {
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= nodes || v >= nodes {
                return Err(GenError::MalformedGraph("node out of range"));
            }
            if u == v {
                return Err(GenError::MalformedGraph("loop"));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if norm.windows(2).any(|w| w[0] == w[1]) {
            return Err(GenError::MalformedGraph("parallel edges"));
        }
        Ok(SimpleGraph { nodes, edges: norm })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Graph on `nodes` nodes with edge `{u, v}` present when bit `k` of
    /// `mask` is set, `k` enumerating pairs `u < v` lexicographically.
    pub fn from_mask(nodes: usize, mask: u64) -> Self {
        let mut edges = Vec::new();
        let mut k = 0;
        for u in 0..nodes {
            for v in u + 1..nodes {
                if mask >> k & 1 == 1 {
                    edges.push((u, v));
                }
                k += 1;
            }
        }
        SimpleGraph { nodes, edges }
    }
}

/// Ordering instance of the Hamiltonian path reduction: left nodes are the
/// graph's nodes, right nodes the non-adjacent pairs `{u, v}` (sorted), each
/// joined to `u` and `v` with unit weight; `d = 2`, non-cyclic. The second
/// component is the intended left degree profile (the graph-complement
/// degrees); left bounds are that profile raised to at least 1. An order
/// admits a matching meeting the profile exactly (that is, using every
/// edge) if and only if it is a Hamiltonian path of the graph.
pub fn gen_from_hampath(g: &SimpleGraph) -> Result<(Instance, Vec<u32>), GenError> {
    let n = g.nodes;
    let mut edges = Vec::new();
    let mut profile = vec![0u32; n];
    let mut t = 0;
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                edges.push(Edge { s: u, t, weight: int(1) });
                edges.push(Edge { s: v, t, weight: int(1) });
                profile[u] += 1;
                profile[v] += 1;
                t += 1;
            }
        }
    }
    let b_s = profile.iter().map(|&p| p.max(1)).collect();
    let inst = Instance::new(n, t, 2, false, b_s, vec![Bound::Unbounded; t], edges)?;
    Ok((inst, profile))
}

/// Parameters of [`gen_random`]. Weights are `w / weight_den` with `w`
/// uniform in `weight_range`; bounds are uniform in their ranges, and
/// `b_t_range = None` makes every right node unbounded.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomParams {
    pub n: usize,
    pub t_count: usize,
    pub d: usize,
    pub cyclic: bool,
    pub edge_prob: f64,
    pub weight_range: (i64, i64),
    pub weight_den: i64,
    pub b_s_range: (u32, u32),
    pub b_t_range: Option<(u32, u32)>,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            n: 6,
            t_count: 2,
            d: 2,
            cyclic: false,
            edge_prob: 0.5,
            weight_range: (1, 10),
            weight_den: 1,
            b_s_range: (1, 1),
            b_t_range: None,
        }
    }
}

/// Seeded random instance; the same parameters and seed always give the
/// same instance.
pub fn gen_random(params: &RandomParams, seed: u64) -> Result<Instance, GenError> {
    let p = params;
    if p.d == 0 {
        return Err(GenError::InvalidParams("d must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p.edge_prob) {
        return Err(GenError::InvalidParams("edge probability outside [0, 1]"));
    }
    if p.weight_range.0 < 0 || p.weight_range.0 > p.weight_range.1 || p.weight_den <= 0 {
        return Err(GenError::InvalidParams("bad weight range"));
    }
    if p.b_s_range.0 == 0 || p.b_s_range.0 > p.b_s_range.1 {
        return Err(GenError::InvalidParams("bad left bound range"));
    }
    if let Some((lo, hi)) = p.b_t_range {
        if lo == 0 || lo > hi {
            return Err(GenError::InvalidParams("bad right bound range"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for s in 0..p.n {
        for t in 0..p.t_count {
            if rng.gen_bool(p.edge_prob) {
                let w = rng.gen_range(p.weight_range.0..=p.weight_range.1);
                edges.push(Edge { s, t, weight: ratio(w, p.weight_den) });
            }
        }
    }
    let b_s = (0..p.n).map(|_| rng.gen_range(p.b_s_range.0..=p.b_s_range.1)).collect();
    let b_t = (0..p.t_count)
        .map(|_| match p.b_t_range {
            Some((lo, hi)) => Bound::Finite(rng.gen_range(lo..=hi)),
            None => Bound::Unbounded,
        })
        .collect();
    Ok(Instance::new(p.n, p.t_count, p.d, p.cyclic, b_s, b_t, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::solve_double_matching_bruteforce;

    #[test]
    fn tight_gap_shapes() {
        let i = gen_tight_gap(2).unwrap();
        assert_eq!((i.n(), i.edge_count(), i.is_cyclic()), (3, 3, true));
        let i = gen_tight_gap(1).unwrap();
        assert_eq!((i.n(), i.edge_count()), (1, 1));
        assert_eq!(gen_tight_gap(5).unwrap().n(), 9);
    }

    fn fig4() -> ThreeDimMatchingInstance {
        ThreeDimMatchingInstance::new(2, 2, 2, vec![(0, 0, 0), (1, 1, 1), (0, 1, 0), (1, 0, 1)])
            .unwrap()
    }

    #[test]
    fn reduction_structure() {
        let h = fig4();
        assert!(h.is_two_regular());
        let dm = gen_from_3dm(&h).unwrap();
        assert_eq!(dm.s_count(), 2 * 4 + 2);
        assert_eq!(dm.t_count(), 2 + 4 + 2);
        assert_eq!(dm.edges().len(), 20);
        for s in 0..dm.s_count() {
            assert!(dm.in_s1(s) || dm.in_s2(s));
        }
    }

    #[test]
    fn single_triple_reduction() {
        let h = ThreeDimMatchingInstance::new(1, 1, 1, vec![(0, 0, 0)]).unwrap();
        let dm = gen_from_3dm(&h).unwrap();
        // one gadget: three element edges plus nothing else fit → 3 = 1 + 2·1
        assert_eq!(solve_double_matching_bruteforce(&dm).unwrap().len(), 3);
    }

    #[test]
    fn fig4_highlighted_round_trip() {
        let h = fig4();
        let chosen: Vec<usize> = [(0, 0, 0), (1, 1, 1)]
            .iter()
            .map(|t| h.triples().iter().position(|u| u == t).unwrap())
            .collect();
        let m = embed_3dm(&h, &chosen);
        assert_eq!(m.len(), 2 + 4 * 2);
        let (f, canon) = extract_3dm(&m, &h).unwrap();
        let mut sorted = chosen.clone();
        sorted.sort_unstable();
        assert_eq!(f, sorted);
        assert_eq!(canon.len(), m.len());
    }

    #[test]
    fn internal_edges_only_give_empty_matching() {
        let h = fig4();
        let m = embed_3dm(&h, &[]);
        let (f, _) = extract_3dm(&m, &h).unwrap();
        assert!(f.is_empty());
        assert_eq!(extract_3dm(&[0, 2], &h), Err(GenError::InfeasibleInput));
    }

    #[test]
    fn random_two_regular_is_regular() {
        for seed in 0..20 {
            let h = random_two_regular_3dm(3, seed).unwrap();
            assert!(h.is_two_regular());
            assert_eq!(h.triples().len(), 6);
        }
        assert!(random_two_regular_3dm(1, 0).is_err());
    }

    #[test]
    fn hampath_complete_graph_has_no_right_nodes() {
        let g = SimpleGraph::from_mask(4, u64::MAX >> (64 - 6));
        let (inst, profile) = gen_from_hampath(&g).unwrap();
        assert_eq!(inst.t_count(), 0);
        assert!(profile.iter().all(|&p| p == 0));
    }

    #[test]
    fn simple_graph_validation() {
        assert!(SimpleGraph::new(2, vec![(0, 0)]).is_err());
        assert!(SimpleGraph::new(2, vec![(0, 1), (1, 0)]).is_err());
        assert!(SimpleGraph::new(2, vec![(0, 2)]).is_err());
    }

    #[test]
    fn random_instances_are_reproducible() {
        let p = RandomParams { edge_prob: 0.0, ..RandomParams::default() };
        assert_eq!(gen_random(&p, 1).unwrap().edge_count(), 0);
        let p = RandomParams { edge_prob: 1.0, ..RandomParams::default() };
        assert_eq!(gen_random(&p, 1).unwrap().edge_count(), 12);
        let p = RandomParams::default();
        assert_eq!(gen_random(&p, 9).unwrap(), gen_random(&p, 9).unwrap());
        let bad = RandomParams { edge_prob: 1.5, ..RandomParams::default() };
        assert!(gen_random(&bad, 0).is_err());
    }
}
