//! Ground-truth solvers: exhaustive search, an exact rational simplex for the
//! LP relaxation, integrality-gap reports and exhaustive double matching.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::instance::{distance_conflict, Instance, Matching, Side};
use crate::rational::{common_denominator, int, Rational};

/// Default edge limit of [`solve_bruteforce`].
pub const BRUTEFORCE_EDGE_LIMIT: usize = 26;
/// Default edge limit of [`solve_double_matching_bruteforce`].
pub const DOUBLE_MATCHING_EDGE_LIMIT: usize = 48;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("instance has {size} edges, more than the exhaustive limit {limit}")]
    InstanceTooLarge { size: usize, limit: usize },
    #[error("edge weights are too large for exhaustive search")]
    WeightOverflow,
    #[error("malformed double matching instance: {0}")]
    MalformedDoubleMatching(&'static str),
}

fn scaled_i128(weights: &[Rational]) -> Result<Vec<i128>, ExactError> {
    let lcd = common_denominator(weights.iter());
    weights
        .iter()
        .map(|w| (w.numer() * (&lcd / w.denom())).to_i128().ok_or(ExactError::WeightOverflow))
        .collect()
}

/// Exact maximum-weight feasible edge set by depth-first search over the
/// edges in index order (include before exclude) with remaining-weight
/// pruning. Zero-weight edges are never taken; among optimal sets the
/// lexicographically smallest one is returned.
pub fn solve_bruteforce(inst: &Instance) -> Result<Matching, ExactError> {
    solve_bruteforce_with_limit(inst, BRUTEFORCE_EDGE_LIMIT)
}

pub fn solve_bruteforce_with_limit(inst: &Instance, limit: usize) -> Result<Matching, ExactError> {
    if inst.edge_count() > limit {
        return Err(ExactError::InstanceTooLarge { size: inst.edge_count(), limit });
    }
    let w = scaled_i128(&inst.weights())?;
    let cand: Vec<usize> = (0..inst.edge_count()).filter(|&id| w[id] > 0).collect();
    let mut suffix = vec![0i128; cand.len() + 1];
    for k in (0..cand.len()).rev() {
        suffix[k] = suffix[k + 1] + w[cand[k]];
    }

    struct Search<'a> {
        inst: &'a Instance,
        w: &'a [i128],
        cand: &'a [usize],
        suffix: &'a [i128],
        deg_s: Vec<usize>,
        at_t: Vec<Vec<usize>>,
        chosen: Vec<usize>,
        best: i128,
        best_set: Vec<usize>,
    }

    impl Search<'_> {
        fn fits(&self, id: usize) -> bool {
            let e = self.inst.edge(id);
            if self.deg_s[e.s] >= self.inst.b_s()[e.s] as usize {
                return false;
            }
            let at = &self.at_t[e.t];
            if !self.inst.b_t()[e.t].allows(at.len() + 1) {
                return false;
            }
            let (n, d, cyclic) = (self.inst.n(), self.inst.d(), self.inst.is_cyclic());
            at.iter().all(|&j| distance_conflict(n, d, cyclic, e.s, j).is_none())
        }

        fn run(&mut self, k: usize, cur: i128) {
            if cur > self.best {
                self.best = cur;
                self.best_set = self.chosen.clone();
            }
            if k == self.cand.len() || cur + self.suffix[k] <= self.best {
                return;
            }
            let id = self.cand[k];
            if self.fits(id) {
                let e = self.inst.edge(id);
                self.deg_s[e.s] += 1;
                self.at_t[e.t].push(e.s);
                self.chosen.push(id);
                self.run(k + 1, cur + self.w[id]);
                self.chosen.pop();
                self.at_t[e.t].pop();
                self.deg_s[e.s] -= 1;
            }
            self.run(k + 1, cur);
        }
    }

    let mut search = Search {
        inst,
        w: &w,
        cand: &cand,
        suffix: &suffix,
        deg_s: vec![0; inst.n()],
        at_t: vec![Vec::new(); inst.t_count()],
        chosen: Vec::new(),
        best: 0,
        best_set: Vec::new(),
    };
    search.run(0, 0);
    Ok(Matching::from_edges(inst, search.best_set).expect("valid edge ids"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    DegreeS { s: usize },
    DegreeT { t: usize },
    /// Window `R_d(s_i)` at right node `t`.
    Window { t: usize, i: usize },
    /// `x_e ≤ 1` for an edge no window row covers.
    Box { edge: usize },
}

/// A `≤` row with unit coefficients on `vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpRow {
    pub vars: Vec<usize>,
    pub rhs: Rational,
    pub kind: RowKind,
}

/// `max objective·x` subject to `rows` and `x ≥ 0`; one variable per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpModel {
    pub objective: Vec<Rational>,
    pub rows: Vec<LpRow>,
}

/// Builds the natural LP relaxation: degree rows for every left node and
/// every bounded right node, and one window row per right node and window
/// start. Non-cyclic windows start at every position that leaves a full
/// window (at least one); cyclic windows start at every position.
pub fn build_lp(inst: &Instance) -> LpModel {
    let mut rows = Vec::new();
    for s in 0..inst.n() {
        rows.push(LpRow {
            vars: inst.edges_at_s(s).to_vec(),
            rhs: int(inst.b_s()[s] as i64),
            kind: RowKind::DegreeS { s },
        });
    }
    for (t, b) in inst.b_t().iter().enumerate() {
        if let Some(b) = b.finite() {
            rows.push(LpRow {
                vars: inst.edges_at_t(t).to_vec(),
                rhs: int(b as i64),
                kind: RowKind::DegreeT { t },
            });
        }
    }
    let (n, d) = (inst.n(), inst.d());
    let starts = match (n, inst.is_cyclic()) {
        (0, _) => 0,
        (_, true) => n,
        (_, false) => (n + 1).saturating_sub(d).max(1),
    };
    let mut covered = vec![false; inst.edge_count()];
    for t in 0..inst.t_count() {
        let mut pos_of = BTreeMap::new();
        for &id in inst.edges_at_t(t) {
            pos_of.insert(inst.edge(id).s, id);
        }
        for i in 0..starts {
            let vars: Vec<usize> =
                inst.window(i, Side::Right).iter().filter_map(|s| pos_of.get(s).copied()).collect();
            for &id in &vars {
                covered[id] = true;
            }
            rows.push(LpRow { vars, rhs: Rational::one(), kind: RowKind::Window { t, i } });
        }
    }
    for (edge, _) in covered.iter().enumerate().filter(|(_, &c)| !c) {
        rows.push(LpRow { vars: vec![edge], rhs: Rational::one(), kind: RowKind::Box { edge } });
    }
    LpModel { objective: inst.weights(), rows }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub point: Vec<Rational>,
}

/// Exact optimum of an [`LpModel`] by the primal simplex method over
/// rationals with Bland's rule. Rows with no variables are dropped and rows
/// with identical supports merged (keeping the smallest right-hand side)
/// before solving; the returned point is checked against every original row.
pub fn lp_solve(model: &LpModel) -> LpSolution {
    let nv = model.objective.len();
    let mut merged: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for row in &model.rows {
        assert!(!row.rhs.is_negative(), "right-hand sides must be non-negative");
        if row.vars.is_empty() {
            continue;
        }
        let mut key = row.vars.clone();
        key.sort_unstable();
        key.dedup();
        merged
            .entry(key)
            .and_modify(|r| {
                if row.rhs < *r {
                    *r = row.rhs.clone();
                }
            })
            .or_insert_with(|| row.rhs.clone());
    }
    // Variables with non-positive objective stay at zero in some optimum.
    let active: Vec<bool> = model.objective.iter().map(|c| c.is_positive()).collect();
    for v in 0..nv {
        if active[v] {
            assert!(
                merged.keys().any(|k| k.contains(&v)),
                "variable {v} is unbounded by the model"
            );
        }
    }

    let rows: Vec<(Vec<usize>, Rational)> = merged
        .into_iter()
        .map(|(k, r)| (k.into_iter().filter(|&v| active[v]).collect::<Vec<_>>(), r))
        .filter(|(k, _)| !k.is_empty())
        .collect();
    let m = rows.len();
    let cols = nv + m;
    let mut tab: Vec<Vec<Rational>> = vec![vec![Rational::zero(); cols]; m];
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    for (i, (vars, r)) in rows.into_iter().enumerate() {
        for v in vars {
            tab[i][v] = Rational::one();
        }
        tab[i][nv + i] = Rational::one();
        rhs.push(r);
        basis.push(nv + i);
    }
    let mut reduced: Vec<Rational> = (0..cols)
        .map(|j| if j < nv && active[j] { model.objective[j].clone() } else { Rational::zero() })
        .collect();
    let mut value = Rational::zero();

    while let Some(enter) = (0..cols).find(|&j| reduced[j].is_positive()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &tab[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (p, _) = leave.expect("bounded model");
        let piv = tab[p][enter].clone();
        let nz: Vec<usize> = (0..cols).filter(|&j| !tab[p][j].is_zero()).collect();
        for &j in &nz {
            tab[p][j] = &tab[p][j] / &piv;
        }
        rhs[p] = &rhs[p] / &piv;
        let prow: Vec<(usize, Rational)> = nz.iter().map(|&j| (j, tab[p][j].clone())).collect();
        for i in 0..m {
            if i == p || tab[i][enter].is_zero() {
                continue;
            }
            let f = tab[i][enter].clone();
            for (j, a) in &prow {
                tab[i][*j] -= &f * a;
            }
            let delta = &f * &rhs[p];
            rhs[i] -= delta;
        }
        let f = reduced[enter].clone();
        for (j, a) in &prow {
            reduced[*j] -= &f * a;
        }
        value += &f * &rhs[p];
        basis[p] = enter;
    }

    let mut point = vec![Rational::zero(); nv];
    for (i, &b) in basis.iter().enumerate() {
        if b < nv {
            point[b] = rhs[i].clone();
        }
    }
    let objective: Rational =
        model.objective.iter().zip(&point).fold(Rational::zero(), |acc, (c, x)| acc + c * x);
    assert_eq!(objective, value, "simplex objective mismatch");
    for row in &model.rows {
        let lhs = row.vars.iter().fold(Rational::zero(), |acc, &v| acc + &point[v]);
        assert!(lhs <= row.rhs, "simplex point violates a row");
    }
    LpSolution { value, point }
}

/// LP optimum, integer optimum and their ratio.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub lp_opt: Rational,
    pub ip_opt: Rational,
    /// `lp_opt / ip_opt`, or 1 when both are zero.
    pub gap: Rational,
}

pub fn integrality_gap(inst: &Instance) -> Result<GapReport, ExactError> {
    let ip = solve_bruteforce(inst)?.weight(inst);
    let lp = lp_solve(&build_lp(inst)).value;
    debug_assert!(lp >= ip);
    let gap = if ip.is_zero() { Rational::one() } else { &lp / &ip };
    Ok(GapReport { lp_opt: lp, ip_opt: ip, gap })
}

/// Bipartite graph whose left class is covered by two subclasses; an edge
/// set is a double matching if its restrictions to either subclass are
/// matchings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleMatchingInstance {
    s_count: usize,
    t_count: usize,
    in_s1: Vec<bool>,
    in_s2: Vec<bool>,
    edges: Vec<(usize, usize)>,
}

impl DoubleMatchingInstance {
    pub fn new(
        s_count: usize,
        t_count: usize,
        in_s1: Vec<bool>,
        in_s2: Vec<bool>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, ExactError> {
        if in_s1.len() != s_count || in_s2.len() != s_count {
            return Err(ExactError::MalformedDoubleMatching("membership length mismatch"));
        }
        if in_s1.iter().zip(&in_s2).any(|(a, b)| !a && !b) {
            return Err(ExactError::MalformedDoubleMatching("S1 and S2 do not cover S"));
        }
        let mut seen = alloc::collections::BTreeSet::new();
        for &(s, t) in &edges {
            if s >= s_count || t >= t_count {
                return Err(ExactError::MalformedDoubleMatching("edge endpoint out of range"));
            }
            if !seen.insert((s, t)) {
                return Err(ExactError::MalformedDoubleMatching("parallel edges"));
            }
        }
        Ok(DoubleMatchingInstance { s_count, t_count, in_s1, in_s2, edges })
    }

    pub fn s_count(&self) -> usize {
        self.s_count
    }

    pub fn t_count(&self) -> usize {
        self.t_count
    }

    pub fn in_s1(&self, s: usize) -> bool {
        self.in_s1[s]
    }

    pub fn in_s2(&self, s: usize) -> bool {
        self.in_s2[s]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Whether the listed edges form a double matching.
    pub fn is_double_matching(&self, ids: &[usize]) -> bool {
        let mut deg_s = vec![0usize; self.s_count];
        let mut port1 = vec![0usize; self.t_count];
        let mut port2 = vec![0usize; self.t_count];
        for &id in ids {
            let Some(&(s, t)) = self.edges.get(id) else { return false };
            deg_s[s] += 1;
            if self.in_s1[s] {
                port1[t] += 1;
            }
            if self.in_s2[s] {
                port2[t] += 1;
            }
        }
        let mut sorted = ids.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == ids.len()
            && deg_s.iter().all(|&d| d <= 1)
            && port1.iter().chain(&port2).all(|&d| d <= 1)
    }
}

/// Maximum-size double matching by exhaustive search over the left nodes
/// (each picks one incident edge or none). Returns sorted edge ids.
pub fn solve_double_matching_bruteforce(
    dm: &DoubleMatchingInstance,
) -> Result<Vec<usize>, ExactError> {
    if dm.edges.len() > DOUBLE_MATCHING_EDGE_LIMIT {
        return Err(ExactError::InstanceTooLarge {
            size: dm.edges.len(),
            limit: DOUBLE_MATCHING_EDGE_LIMIT,
        });
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); dm.s_count];
    for (id, &(s, _)) in dm.edges.iter().enumerate() {
        incident[s].push(id);
    }
    // Nodes without edges never contribute.
    let order: Vec<usize> = (0..dm.s_count).filter(|&s| !incident[s].is_empty()).collect();

    struct Search<'a> {
        dm: &'a DoubleMatchingInstance,
        incident: &'a [Vec<usize>],
        order: &'a [usize],
        port1: Vec<bool>,
        port2: Vec<bool>,
        chosen: Vec<usize>,
        best: Vec<usize>,
    }

    impl Search<'_> {
        fn usable(&self, id: usize) -> bool {
            let (s, t) = self.dm.edges[id];
            !(self.dm.in_s1[s] && self.port1[t]) && !(self.dm.in_s2[s] && self.port2[t])
        }

        fn set(&mut self, id: usize, on: bool) {
            let (s, t) = self.dm.edges[id];
            if self.dm.in_s1[s] {
                self.port1[t] = on;
            }
            if self.dm.in_s2[s] {
                self.port2[t] = on;
            }
        }

        fn run(&mut self, k: usize) {
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
            let open = self.order[k..]
                .iter()
                .filter(|&&s| self.incident[s].iter().any(|&id| self.usable(id)))
                .count();
            if self.chosen.len() + open <= self.best.len() {
                return;
            }
            let s = self.order[k];
            for idx in 0..self.incident[s].len() {
                let id = self.incident[s][idx];
                if self.usable(id) {
                    self.set(id, true);
                    self.chosen.push(id);
                    self.run(k + 1);
                    self.chosen.pop();
                    self.set(id, false);
                }
            }
            self.run(k + 1);
        }
    }

    let mut search = Search {
        dm,
        incident: &incident,
        order: &order,
        port1: vec![false; dm.t_count],
        port2: vec![false; dm.t_count],
        chosen: Vec::new(),
        best: Vec::new(),
    };
    search.run(0);
    let mut best = search.best;
    best.sort_unstable();
    Ok(best)
}
